#ifndef QPERF_TEST_HELPERS_HPP
#define QPERF_TEST_HELPERS_HPP

#include <string>

#include "qperf/algebra.hpp"
#include "qperf/quiver.hpp"

inline std::string corpus_path(const std::string& name) {
  return std::string(QPERF_CORPUS_DIR) + "/" + name;
}

inline qperf::Presentation load_pres(const std::string& name) {
  return qperf::parse_presentation_file(corpus_path(name));
}

inline qperf::AlgebraBasis load_algebra(const std::string& name) {
  return qperf::AlgebraBasis::compute(load_pres(name));
}

#endif
