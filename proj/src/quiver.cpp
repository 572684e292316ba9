#include "qperf/quiver.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <functional>
#include <sstream>

namespace qperf {

int Presentation::vertex_index(const std::string& label) const {
  for (std::size_t i = 0; i < vertices.size(); ++i)
    if (vertices[i] == label) return static_cast<int>(i);
  return -1;
}

int Presentation::arrow_index(const std::string& label) const {
  for (std::size_t i = 0; i < arrows.size(); ++i)
    if (arrows[i].label == label) return static_cast<int>(i);
  return -1;
}

bool Presentation::is_connected() const {
  if (vertices.empty()) return true;
  std::vector<bool> seen(vertices.size(), false);
  std::vector<int> stack{0};
  seen[0] = true;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (const Arrow& a : arrows) {
      int other = -1;
      if (a.src == v) other = a.tgt;
      if (a.tgt == v) other = a.src;
      if (other >= 0 && !seen[other]) {
        seen[other] = true;
        stack.push_back(other);
      }
    }
  }
  return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
}

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

struct RelScanner {
  const std::string& s;
  std::size_t i = 0;
  int line;

  void skip_ws() {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
  }
  bool done() {
    skip_ws();
    return i >= s.size();
  }
  char peek() {
    skip_ws();
    return i < s.size() ? s[i] : '\0';
  }
  std::string number() {
    skip_ws();
    std::size_t start = i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    if (i < s.size() && s[i] == '/') {
      ++i;
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    }
    return s.substr(start, i - start);
  }
  std::string ident() {
    skip_ws();
    std::size_t start = i;
    if (i < s.size() && ident_start(s[i])) {
      ++i;
      while (i < s.size() && ident_char(s[i])) ++i;
    }
    if (start == i) throw ParseError(line, "expected an arrow label in relation");
    return s.substr(start, i - start);
  }
};

// Parses "a*d - 2 b*c" into relation terms over the given presentation.
std::vector<RelTerm> parse_rel_expression(const std::string& expr, const Presentation& p,
                                          int line) {
  RelScanner sc{expr, 0, line};
  std::vector<RelTerm> terms;
  bool first = true;
  while (!sc.done()) {
    Scalar sign = p.field.one();
    char c = sc.peek();
    if (c == '+' || c == '-') {
      ++sc.i;
      if (c == '-') sign = p.field.neg(sign);
    } else if (!first) {
      throw ParseError(line, "expected '+' or '-' between relation terms");
    }
    first = false;
    Scalar coeff = sign;
    if (std::isdigit(static_cast<unsigned char>(sc.peek()))) {
      coeff = p.field.mul(sign, p.field.from_string(sc.number()));
      if (sc.peek() == '*') ++sc.i;  // "2*a*b" and "2 a*b" both accepted
    }
    std::vector<int> word;  // displayed order, leftmost factor first
    word.push_back(-1);
    std::string lbl = sc.ident();
    int ai = p.arrow_index(lbl);
    if (ai < 0) throw ParseError(line, "unknown arrow '" + lbl + "'");
    word.back() = ai;
    while (sc.peek() == '*') {
      ++sc.i;
      lbl = sc.ident();
      ai = p.arrow_index(lbl);
      if (ai < 0) throw ParseError(line, "unknown arrow '" + lbl + "'");
      word.push_back(ai);
    }
    // Displayed right to left: the last factor acts first.
    std::reverse(word.begin(), word.end());
    for (std::size_t k = 0; k + 1 < word.size(); ++k)
      if (p.arrows[word[k]].tgt != p.arrows[word[k + 1]].src)
        throw ParseError(line, "non-composable word in relation (factor '" +
                                   p.arrows[word[k + 1]].label + "' after '" +
                                   p.arrows[word[k]].label + "')");
    terms.push_back(RelTerm{coeff, word});
  }
  if (terms.empty()) throw ParseError(line, "empty relation");
  return terms;
}

Relation make_relation(std::vector<RelTerm> terms, const Presentation& p, int line) {
  Relation rel;
  rel.terms = std::move(terms);
  rel.line = line;
  const RelTerm& t0 = rel.terms.front();
  rel.src = p.arrows[t0.arrows.front()].src;
  rel.tgt = p.arrows[t0.arrows.back()].tgt;
  rel.length = static_cast<int>(t0.arrows.size());
  for (const RelTerm& t : rel.terms) {
    if (static_cast<int>(t.arrows.size()) < 2)
      throw ParseError(line, "relation term of length < 2 is not admissible");
    if (p.arrows[t.arrows.front()].src != rel.src ||
        p.arrows[t.arrows.back()].tgt != rel.tgt)
      throw ParseError(line, "relation terms are not parallel");
    if (static_cast<int>(t.arrows.size()) != rel.length)
      throw ParseError(line,
                       "relation mixes word lengths; length-graded reduction "
                       "only supports terms of a common length");
  }
  return rel;
}

}  // namespace

Presentation parse_presentation(const std::string& text, const Field* field_override) {
  Presentation p;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  bool field_seen = false;

  std::vector<std::pair<int, std::string>> pending_rels;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string lineText = raw.substr(0, raw.find('#'));
    std::istringstream ls(lineText);
    std::string head;
    if (!(ls >> head)) continue;
    if (head == "field") {
      if (field_seen) throw ParseError(lineno, "duplicate field line");
      field_seen = true;
      std::string rest;
      std::getline(ls, rest);
      try {
        p.field = Field::parse(rest);
      } catch (const FieldError& e) {
        throw ParseError(lineno, e.what());
      }
    } else if (head == "vertex") {
      std::string label;
      if (!(ls >> label)) throw ParseError(lineno, "vertex needs a label");
      if (!ident_start(label[0]))
        throw ParseError(lineno, "vertex label must start with a letter or '_'");
      if (p.vertex_index(label) >= 0)
        throw ParseError(lineno, "duplicate vertex '" + label + "'");
      std::string extra;
      if (ls >> extra) throw ParseError(lineno, "one vertex per line");
      p.vertices.push_back(label);
    } else if (head == "arrow") {
      std::string label, src, tgt;
      if (!(ls >> label >> src >> tgt))
        throw ParseError(lineno, "arrow needs: label source target");
      if (p.arrow_index(label) >= 0)
        throw ParseError(lineno, "duplicate arrow '" + label + "'");
      int si = p.vertex_index(src), ti = p.vertex_index(tgt);
      if (si < 0) throw ParseError(lineno, "unknown vertex '" + src + "'");
      if (ti < 0) throw ParseError(lineno, "unknown vertex '" + tgt + "'");
      p.arrows.push_back(Arrow{label, si, ti});
    } else if (head == "rel") {
      std::string rest;
      std::getline(ls, rest);
      pending_rels.emplace_back(lineno, rest);
    } else {
      throw ParseError(lineno, "unknown directive '" + head + "'");
    }
  }
  if (field_override) p.field = *field_override;
  for (auto& [ln, expr] : pending_rels)
    p.relations.push_back(make_relation(parse_rel_expression(expr, p, ln), p, ln));
  return p;
}

Presentation parse_presentation_file(const std::string& path, const Field* field_override) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open algebra file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_presentation(ss.str(), field_override);
}

std::string render_presentation(const Presentation& p) {
  std::ostringstream out;
  out << "field " << (p.field.is_prime() ? "F " + std::to_string(p.field.modulus()) : "Q")
      << "\n";
  for (const std::string& v : p.vertices) out << "vertex " << v << "\n";
  for (const Arrow& a : p.arrows)
    out << "arrow " << a.label << " " << p.vertices[a.src] << " " << p.vertices[a.tgt]
        << "\n";
  for (const Relation& r : p.relations) {
    out << "rel ";
    for (std::size_t t = 0; t < r.terms.size(); ++t) {
      const RelTerm& term = r.terms[t];
      std::string c = p.field.to_string(term.coeff);
      bool neg = !c.empty() && c[0] == '-';
      if (t == 0) {
        if (neg) out << "- ";
      } else {
        out << (neg ? " - " : " + ");
      }
      std::string mag = neg ? c.substr(1) : c;
      if (mag != "1") out << mag << " ";
      for (std::size_t k = term.arrows.size(); k-- > 0;) {
        out << p.arrows[term.arrows[k]].label;
        if (k > 0) out << "*";
      }
    }
    out << "\n";
  }
  return out.str();
}

Presentation reversed_presentation(const Presentation& p) {
  Presentation q;
  q.field = p.field;
  q.vertices = p.vertices;
  for (const Arrow& a : p.arrows) q.arrows.push_back(Arrow{a.label, a.tgt, a.src});
  for (const Relation& r : p.relations) {
    Relation rr;
    rr.src = r.tgt;
    rr.tgt = r.src;
    rr.length = r.length;
    rr.line = r.line;
    for (const RelTerm& t : r.terms) {
      RelTerm tt;
      tt.coeff = t.coeff;
      tt.arrows.assign(t.arrows.rbegin(), t.arrows.rend());
      rr.terms.push_back(std::move(tt));
    }
    q.relations.push_back(std::move(rr));
  }
  return q;
}

Presentation build_tensor_presentation(const TensorFamilySpec& spec) {
  Presentation p;
  p.field = spec.field;
  std::vector<int> loop_exp;
  for (auto& [label, n] : spec.vertex_loops) {
    if (n < 1) throw std::runtime_error("loop degree must be >= 1 at vertex " + label);
    if (p.vertex_index(label) >= 0)
      throw std::runtime_error("duplicate vertex '" + label + "' in tensor spec");
    p.vertices.push_back(label);
    loop_exp.push_back(n);
  }
  std::vector<int> loop_arrow(p.vertices.size(), -1);
  for (std::size_t v = 0; v < p.vertices.size(); ++v) {
    if (loop_exp[v] < 2) continue;
    std::string lbl = "t_" + p.vertices[v];
    if (p.arrow_index(lbl) >= 0)
      throw std::runtime_error("loop label '" + lbl + "' collides");
    loop_arrow[v] = static_cast<int>(p.arrows.size());
    p.arrows.push_back(Arrow{lbl, static_cast<int>(v), static_cast<int>(v)});
  }
  struct ArrowRef {
    int idx, src, tgt, trunc;
  };
  std::vector<ArrowRef> quiver_arrows;
  for (const auto& a : spec.arrows) {
    int si = p.vertex_index(a.src), ti = p.vertex_index(a.tgt);
    if (si < 0 || ti < 0)
      throw std::runtime_error("tensor arrow '" + a.label + "' uses unknown vertex");
    if (si == ti)
      throw std::runtime_error("tensor arrows must join distinct vertices; loops come "
                               "from the vertex degrees");
    int bound = std::min(loop_exp[si], loop_exp[ti]);
    if (a.trunc < 1 || a.trunc > bound)
      throw std::runtime_error("truncation exponent of '" + a.label +
                               "' must lie in [1, " + std::to_string(bound) + "]");
    if (p.arrow_index(a.label) >= 0)
      throw std::runtime_error("duplicate arrow label '" + a.label + "'");
    quiver_arrows.push_back(
        ArrowRef{static_cast<int>(p.arrows.size()), si, ti, a.trunc});
    p.arrows.push_back(Arrow{a.label, si, ti});
  }

  auto word_power = [](int arrow, int k) { return std::vector<int>(k, arrow); };
  int synthetic_line = 0;
  auto add_rel = [&](std::vector<RelTerm> terms) {
    p.relations.push_back(make_relation(std::move(terms), p, --synthetic_line));
  };

  for (std::size_t v = 0; v < p.vertices.size(); ++v)
    if (loop_arrow[v] >= 0)
      add_rel({RelTerm{p.field.one(), word_power(loop_arrow[v], loop_exp[v])}});
  for (const ArrowRef& a : quiver_arrows) {
    int ls = loop_arrow[a.src], lt = loop_arrow[a.tgt];
    if (ls >= 0 && lt >= 0) {
      // t_w a = a t_v: application order [a, t_w] vs [t_v, a].
      add_rel({RelTerm{p.field.one(), {a.idx, lt}},
               RelTerm{p.field.neg(p.field.one()), {ls, a.idx}}});
    } else if (ls >= 0) {
      add_rel({RelTerm{p.field.one(), {ls, a.idx}}});
    }
    if (lt >= 0 && a.trunc < loop_exp[a.tgt]) {
      std::vector<int> w{a.idx};
      for (int k = 0; k < a.trunc; ++k) w.push_back(lt);
      add_rel({RelTerm{p.field.one(), w}});
    }
  }
  for (const std::string& expr : spec.extra_generators) {
    std::vector<RelTerm> terms = parse_rel_expression(expr, p, 0);
    for (const RelTerm& t : terms) {
      int crossings = 0;
      for (int ai : t.arrows)
        if (p.arrows[ai].src != p.arrows[ai].tgt) ++crossings;
      if (crossings < 2)
        throw std::runtime_error(
            "extra generator term must cross at least two quiver arrows "
            "(lie in the square of the arrow ideal)");
    }
    p.relations.push_back(make_relation(std::move(terms), p, 0));
  }
  return p;
}

}  // namespace qperf
