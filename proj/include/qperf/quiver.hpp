#ifndef QPERF_QUIVER_HPP
#define QPERF_QUIVER_HPP

#include <string>
#include <vector>

#include "qperf/field.hpp"

namespace qperf {

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

struct Arrow {
  std::string label;
  int src = -1;
  int tgt = -1;
};

/* One summand of a relation: coeff times a composable word of arrows.
   `arrows` is stored in application order: arrows[0] acts first, so the
   displayed word is the reverse (composition right to left). */
struct RelTerm {
  Scalar coeff;
  std::vector<int> arrows;
};

struct Relation {
  std::vector<RelTerm> terms;
  int src = -1;
  int tgt = -1;
  int length = 0;  // common word length of every term
  int line = 0;
};

/* A quiver with admissible relations, as read from the .alg format:
     field F 101        (or: field Q; optional, defaults to F 101)
     vertex x
     arrow d x x        (label source target)
     rel d*d
     rel r*a - 2 b*c    (words compose right to left)
   '#' starts a comment. */
struct Presentation {
  Field field = Field::prime(101);
  std::vector<std::string> vertices;
  std::vector<Arrow> arrows;
  std::vector<Relation> relations;

  int vertex_index(const std::string& label) const;  // -1 if absent
  int arrow_index(const std::string& label) const;
  bool is_connected() const;  // underlying undirected graph
};

Presentation parse_presentation(const std::string& text,
                                const Field* field_override = nullptr);
Presentation parse_presentation_file(const std::string& path,
                                     const Field* field_override = nullptr);

// Renders a presentation back into the .alg format (parse round-trips).
std::string render_presentation(const Presentation& p);

// Same quiver and relations with every arrow and word reversed.
Presentation reversed_presentation(const Presentation& p);

/* Input for the one-parameter tensor construction: a loop t_v at every
   vertex with n_v >= 2, commuting squares t_w a = a t_v over every arrow,
   truncations t_w^{l_a} a = 0, plus optional extra generators lying in
   the square of the arrow ideal. */
struct TensorFamilySpec {
  Field field = Field::prime(101);
  std::vector<std::pair<std::string, int>> vertex_loops;  // (label, n_v >= 1)
  struct TArrow {
    std::string label;
    std::string src, tgt;
    int trunc = 1;  // l_a
  };
  std::vector<TArrow> arrows;
  std::vector<std::string> extra_generators;  // rel-expression syntax
};

Presentation build_tensor_presentation(const TensorFamilySpec& spec);

}  // namespace qperf

#endif
