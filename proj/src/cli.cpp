#include "qperf/cli.hpp"

#include <cstdint>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "qperf/algebra.hpp"
#include "qperf/criteria.hpp"
#include "qperf/search.hpp"

namespace qperf {

namespace {

using nlohmann::json;

constexpr const char* kVersion = "1.0.0";

struct Options {
  std::string algebra;
  std::string field;
  int max_length = 0;
  int max_mult = 2;
  int depth = 3;
  std::uint64_t seed = 12345;
  std::string out_path;
  std::int64_t cap = 0;
};

void attach_flags(CLI::App* sub, Options& o) {
  sub->add_option("--algebra", o.algebra, "path to the .alg presentation")
      ->required();
  sub->add_option("--field", o.field, "field override: F:<p> or Q");
  sub->add_option("--max-length", o.max_length,
                  "bound on the degree span of enumerated complexes");
  sub->add_option("--max-mult", o.max_mult,
                  "per-degree multiplicity bound for each projective");
  sub->add_option("--depth", o.depth, "thick-closure rounds in generation checks");
  sub->add_option("--seed", o.seed, "seed for the randomized sweeps");
  sub->add_option("--out", o.out_path,
                  "report file; standard output when omitted");
  sub->add_option("--cap", o.cap,
                  "per-profile sweep cap; resolution cutoff for probe-findim");
}

SearchBounds bounds_from(const Options& o) {
  SearchBounds b;
  b.max_length = o.max_length;
  b.max_mult = o.max_mult;
  b.depth = o.depth;
  b.seed = o.seed;
  if (o.cap > 0) b.profile_cap = static_cast<std::size_t>(o.cap);
  return b;
}

std::string vname(const AlgebraBasis& A, int v) {
  return A.presentation().vertices[static_cast<std::size_t>(v)];
}

std::string rat_str(const BigRat& r) {
  std::ostringstream s;
  s << r;
  return s.str();
}

json scalars_json(const Field& F, const std::vector<Scalar>& v) {
  json a = json::array();
  for (const Scalar& s : v) a.push_back(F.to_string(s));
  return a;
}

json algebra_json(const AlgebraBasis& A) {
  const Presentation& p = A.presentation();
  json j;
  j["field"] = A.field().describe();
  j["dim"] = A.dim();
  j["nilpotency_index"] = A.nilpotency_index();
  j["connected"] = A.connected();
  j["vertices"] = p.vertices;
  json arrows = json::array();
  for (const Arrow& a : p.arrows)
    arrows.push_back({{"label", a.label},
                      {"src", p.vertices[static_cast<std::size_t>(a.src)]},
                      {"tgt", p.vertices[static_cast<std::size_t>(a.tgt)]}});
  j["arrows"] = arrows;
  json pieces = json::array();
  for (int i = 0; i < A.num_vertices(); ++i)
    for (int k = 0; k < A.num_vertices(); ++k) {
      json paths = json::array();
      for (int b : A.piece(i, k)) paths.push_back(A.path_label(b));
      pieces.push_back({{"from", vname(A, i)},
                        {"to", vname(A, k)},
                        {"paths", paths}});
    }
  j["pieces"] = pieces;
  return j;
}

json check_json(const AlgebraBasis& A, const ConditionReport& r) {
  json entries = json::array();
  for (const ConditionEntry& e : r.entries)
    entries.push_back({{"vertex", vname(A, e.vertex)},
                       {"socle_dim", e.socle_dim},
                       {"trace_meet_dim", e.trace_meet_dim},
                       {"kernel_meet_dim", e.kernel_meet_dim},
                       {"cond1", e.cond1},
                       {"cond2", e.cond2},
                       {"cond3_kernel_form", e.cond3_kernel_form},
                       {"cond3_dual_trace_form", e.cond3_dual_trace_form},
                       {"dual_forms_agree", e.dual_forms_agree},
                       {"overall", e.overall},
                       {"witness_line", scalars_json(A.field(), e.witness_line)}});
  return json{{"entries", entries}, {"all_pass", r.all_pass}};
}

json enumeration_json(const EnumerationResult& r) {
  json objs = json::array();
  for (const PerfectComplex& X : r.objects) objs.push_back(complex_to_json(X));
  return json{{"objects", objs},
              {"count", r.objects.size()},
              {"candidates_tried", r.candidates_tried},
              {"unknown_excluded", r.unknown_excluded},
              {"truncated", r.truncated}};
}

json endo_json(const EndoPresentation& E) {
  json arrows = json::array();
  for (const EndoArrow& a : E.arrows)
    arrows.push_back({{"from", a.from}, {"to", a.to}, {"label", a.label}});
  return json{{"dim", E.dim},
              {"blocks", E.blocks},
              {"radical_dim", E.radical_dim},
              {"piece_dims", E.piece_dims},
              {"arrow_counts", E.arrow_counts},
              {"arrows", arrows},
              {"vanishing_products", E.vanishing_products}};
}

json generation_json(const GenerationVerdict& g) {
  const char* v = g.verdict == Generation::Generates       ? "generates"
                  : g.verdict == Generation::NotGenerating ? "not-generating"
                                                           : "unknown";
  return json{{"verdict", v}, {"tier", g.tier}, {"detail", g.detail}};
}

json witnesses_json(const WitnessReport& r) {
  json pairs = json::array();
  for (const WitnessPair& p : r.pairs)
    pairs.push_back({{"x", complex_to_json(p.X)},
                     {"y", complex_to_json(p.Y)},
                     {"x_exceptional", p.x_exceptional},
                     {"y_exceptional", p.y_exceptional},
                     {"hom_vanishes", p.hom_vanishes},
                     {"generation", generation_json(p.generation)},
                     {"triangular", p.triangular},
                     {"corner_pd", p.corner_pd}});
  return json{{"pairs", pairs},
              {"pairs_checked", r.pairs_checked},
              {"truncated", r.truncated},
              {"conditions_predict_empty", r.conditions_predict_empty},
              {"rejected_by_obstruction", r.rejected_by_obstruction}};
}

json conclusions_json(const AlgebraBasis& A, const ConclusionsReport& r) {
  json q = json::array();
  for (int v : r.qualifying) q.push_back(vname(A, v));
  return json{{"qualifying", q},
              {"no_qualifying", r.no_qualifying},
              {"at_most_one_degree", r.at_most_one_degree},
              {"socle_first_homology", r.socle_first_homology},
              {"disjoint_supports", r.disjoint_supports},
              {"tilting_one_degree", r.tilting_one_degree},
              {"tilting_gap_free", r.tilting_gap_free},
              {"all_pass", r.all_pass},
              {"truncated", r.truncated},
              {"failures", r.failures},
              {"exceptional", enumeration_json(r.exceptional)},
              {"tilting", enumeration_json(r.tilting)}};
}

json findim_json(const AlgebraBasis& A, const FindimReport& r) {
  return json{{"witness_found", r.witness_found},
              {"witness_vertex",
               r.witness_vertex >= 0 ? json(vname(A, r.witness_vertex)) : json()},
              {"witness_pd", r.witness_pd},
              {"witness_dims", r.witness_dims},
              {"modules_tested", r.modules_tested},
              {"nonprojective_tested", r.nonprojective_tested},
              {"truncated_resolutions", r.truncated_resolutions}};
}

json coxeter_json(const CartanData& c) {
  json cox = json::array();
  for (const auto& row : c.coxeter) {
    json r = json::array();
    for (const BigRat& x : row) r.push_back(rat_str(x));
    cox.push_back(r);
  }
  json poly = json::array();
  for (const BigRat& x : c.char_poly_ascending) poly.push_back(rat_str(x));
  return json{{"cartan", c.cartan},
              {"det", c.det},
              {"invertible_over_q", c.invertible_over_q},
              {"unimodular", c.unimodular},
              {"coxeter", cox},
              {"char_poly_ascending", poly},
              {"char_poly_integral", c.char_poly_integral}};
}

json corner_json(const AlgebraBasis& A) {
  json corners = json::array();
  json skipped = json::array();
  for (int v = 0; v < A.num_vertices(); ++v) {
    try {
      AlgebraBasis C = corner_delete(A, v);
      corners.push_back({{"vertex", vname(A, v)}, {"algebra", algebra_json(C)}});
    } catch (const std::exception& e) {
      skipped.push_back({{"vertex", vname(A, v)}, {"reason", e.what()}});
    }
  }
  return json{{"corners", corners}, {"skipped", skipped}};
}

json endo_payload(const EnumerationResult& tilting) {
  json list = json::array();
  for (const PerfectComplex& T : tilting.objects) {
    std::vector<PerfectComplex> parts = split_components(T);
    EndoPresentation E = endo_algebra(parts);
    json summands = json::array();
    for (const PerfectComplex& P : parts) summands.push_back(complex_to_json(P));
    list.push_back({{"complex", complex_to_json(T)},
                    {"summands", summands},
                    {"endo", endo_json(E)}});
  }
  return json{{"tiltings", list},
              {"count", tilting.objects.size()},
              {"truncated", tilting.truncated}};
}

json make_report(const std::vector<std::string>& args, const Field& F,
                 const std::string& input_bytes, std::uint64_t seed,
                 json payload, bool truncated) {
  json r;
  r["schema"] = 1;
  r["tool"] = "qperf";
  r["version"] = kVersion;
  r["command"] = args;
  r["field"] = F.describe();
  r["input_sha256"] = sha256_hex(input_bytes);
  r["seed"] = seed;
  // Constant so equal inputs give byte-identical reports.
  r["timing_ms"] = 0;
  r["truncated"] = truncated;
  r["payload"] = std::move(payload);
  return r;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read " + path);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

}  // namespace

int cli_run(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"exact toolkit for perfect complexes over basic quiver algebras"};
  app.require_subcommand(1);
  Options o;
  const std::vector<std::pair<std::string, std::string>> verbs = {
      {"basis", "normal-form basis and piece decomposition"},
      {"check", "socle and trace conditions for every simple"},
      {"enumerate-exceptional", "bounded sweep for exceptional complexes"},
      {"enumerate-tilting", "bounded sweep for basic tilting complexes"},
      {"endo", "endomorphism presentations of the tilting complexes"},
      {"witnesses", "ordered exceptional pairs surviving the gluing screens"},
      {"conclusions", "consistency of the enumerated sets with the criteria"},
      {"probe-findim", "sampling probe for finite projective dimensions"},
      {"corner-delete", "corner algebras at extremal vertices"},
      {"coxeter", "Cartan matrix, Coxeter transformation, char polynomial"}};
  for (const auto& [name, blurb] : verbs)
    attach_flags(app.add_subcommand(name, blurb), o);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n" << app.help();
    return 1;
  }
  const std::string verb = app.get_subcommands().front()->get_name();

  try {
    std::string bytes = read_file(o.algebra);
    std::optional<Field> field_override;
    if (!o.field.empty()) field_override = Field::parse(o.field);
    Presentation pres =
        parse_presentation(bytes, field_override ? &*field_override : nullptr);
    AlgebraBasis A = AlgebraBasis::compute(pres);
    SearchBounds b = bounds_from(o);

    json payload;
    bool truncated = false;
    int code = 0;
    std::string summary;

    if (verb == "basis") {
      payload = algebra_json(A);
      summary = "basis: dim " + std::to_string(A.dim()) + " over " +
                A.field().describe();
    } else if (verb == "check") {
      ConditionReport r = check_all_conditions(A);
      payload = check_json(A, r);
      std::size_t passing = 0;
      for (const ConditionEntry& e : r.entries) passing += e.overall ? 1 : 0;
      summary = std::string("check: ") + (r.all_pass ? "PASS" : "FAIL") + " (" +
                std::to_string(passing) + " of " +
                std::to_string(r.entries.size()) + " simples pass)";
    } else if (verb == "enumerate-exceptional") {
      EnumerationResult r = enumerate_exceptional(A, b);
      payload = enumeration_json(r);
      truncated = r.truncated;
      code = truncated ? 3 : 0;
      summary = "exceptional: " + std::to_string(r.objects.size()) + " objects" +
                (truncated ? ", sweep truncated" : "");
    } else if (verb == "enumerate-tilting") {
      EnumerationResult r = enumerate_tilting(A, b);
      payload = enumeration_json(r);
      truncated = r.truncated;
      code = truncated ? 3 : 0;
      summary = "tilting: " + std::to_string(r.objects.size()) + " complexes" +
                (truncated ? ", sweep truncated" : "");
    } else if (verb == "endo") {
      EnumerationResult r = enumerate_tilting(A, b);
      payload = endo_payload(r);
      truncated = r.truncated;
      code = truncated ? 3 : 0;
      summary = "endo: " + std::to_string(r.objects.size()) +
                " tilting complexes analyzed";
    } else if (verb == "witnesses") {
      WitnessReport r = recollement_witness_search(A, b);
      payload = witnesses_json(r);
      truncated = r.truncated;
      code = truncated ? 3 : 0;
      summary = "witnesses: " + std::to_string(r.pairs.size()) + " pairs from " +
                std::to_string(r.pairs_checked) + " checked";
    } else if (verb == "conclusions") {
      ConclusionsReport r = conclusions_report(A, b);
      payload = conclusions_json(A, r);
      truncated = r.truncated;
      // The exit code reflects the assertions alone; partial sweeps still
      // carry their truncation flags inside the report.
      code = r.all_pass ? 0 : 2;
      summary = std::string("conclusions: ") + (r.all_pass ? "PASS" : "FAIL");
    } else if (verb == "probe-findim") {
      FindimSample sample;
      sample.seed = o.seed;
      int cutoff = o.cap > 0 ? static_cast<int>(o.cap) : 20;
      FindimReport r = findim_probe(A, sample, cutoff);
      payload = findim_json(A, r);
      summary = r.witness_found
                    ? "findim probe: witness of pd " +
                          std::to_string(r.witness_pd) + " at " +
                          vname(A, r.witness_vertex)
                    : "findim probe: no nonprojective witness";
    } else if (verb == "corner-delete") {
      payload = corner_json(A);
      summary = "corner-delete: " +
                std::to_string(payload["corners"].size()) + " corners, " +
                std::to_string(payload["skipped"].size()) + " skipped";
    } else {
      CartanData c = cartan_coxeter(A);
      payload = coxeter_json(c);
      summary = "coxeter: det " + std::to_string(c.det);
    }

    json report =
        make_report(args, A.field(), bytes, o.seed, std::move(payload), truncated);
    emit_report(report, o.out_path, out);
    err << summary << "\n";
    return code;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace qperf
