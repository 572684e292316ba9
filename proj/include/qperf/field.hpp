#ifndef QPERF_FIELD_HPP
#define QPERF_FIELD_HPP

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <variant>

#include <boost/multiprecision/cpp_int.hpp>

namespace qperf {

using BigRat = boost::multiprecision::cpp_rational;

/* Exact field element. Prime-field values live in the int64 alternative as
   residues in [0, p); rational values use arbitrary precision. All arithmetic
   goes through Field so the modulus is always applied. */
using Scalar = std::variant<std::int64_t, BigRat>;

class FieldError : public std::runtime_error {
 public:
  explicit FieldError(const std::string& what) : std::runtime_error(what) {}
};

class Field {
 public:
  enum class Kind { prime, rationals };

  static Field prime(std::int64_t p);
  static Field rationals();
  static Field parse(const std::string& text);  // "F 101", "F:101", "Q"

  Kind kind() const { return kind_; }
  bool is_prime() const { return kind_ == Kind::prime; }
  std::int64_t modulus() const { return p_; }
  std::string describe() const;

  Scalar zero() const;
  Scalar one() const;
  Scalar from_int(std::int64_t n) const;
  Scalar from_fraction(std::int64_t num, std::int64_t den) const;

  Scalar add(const Scalar& a, const Scalar& b) const;
  Scalar sub(const Scalar& a, const Scalar& b) const;
  Scalar mul(const Scalar& a, const Scalar& b) const;
  Scalar neg(const Scalar& a) const;
  Scalar inv(const Scalar& a) const;
  Scalar div(const Scalar& a, const Scalar& b) const;

  bool is_zero(const Scalar& a) const;
  bool is_one(const Scalar& a) const;
  bool eq(const Scalar& a, const Scalar& b) const;

  // Uniform residue for F_p; small integer in [-9, 9] for Q.
  Scalar sample(std::mt19937_64& rng) const;

  std::string to_string(const Scalar& a) const;
  Scalar from_string(const std::string& text) const;  // "3", "-4/7"

  bool operator==(const Field& o) const { return kind_ == o.kind_ && p_ == o.p_; }

 private:
  Field(Kind kind, std::int64_t p) : kind_(kind), p_(p) {}
  std::int64_t norm(std::int64_t v) const;

  Kind kind_;
  std::int64_t p_;  // valid for Kind::prime
};

}  // namespace qperf

#endif
