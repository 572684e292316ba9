#ifndef QPERF_CLI_HPP
#define QPERF_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace qperf {

// Lowercase hex SHA-256 digest of a byte string.
std::string sha256_hex(const std::string& bytes);

/* Canonical rendering used for every report: keys sorted, two-space
   indentation, trailing newline. Numbers are always integers and exact
   values travel as strings, so equal reports are equal byte for byte. */
std::string canonical_json(const nlohmann::json& j);

// Writes the canonical rendering to `path`, or to `out` when path is empty.
void emit_report(const nlohmann::json& report, const std::string& path,
                 std::ostream& out);

/* Batch entry point. `args` is the argument list without the program name.
   Exit codes: 0 pass, 1 usage or input error, 2 failed conclusions
   assertion, 3 truncated search. The JSON report goes to --out or `out`;
   diagnostics and the one-line summary go to `err`. */
int cli_run(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace qperf

#endif
