#include "qperf/field.hpp"

#include <charconv>

namespace qperf {

namespace {

bool is_prime_u64(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

// Extended Euclid inverse of a modulo p, a != 0 mod p.
std::int64_t inv_mod(std::int64_t a, std::int64_t p) {
  std::int64_t t = 0, nt = 1, r = p, nr = a % p;
  while (nr != 0) {
    std::int64_t q = r / nr;
    std::int64_t tmp = t - q * nt;
    t = nt;
    nt = tmp;
    tmp = r - q * nr;
    r = nr;
    nr = tmp;
  }
  if (r != 1) throw FieldError("element has no inverse mod p");
  return ((t % p) + p) % p;
}

const BigRat& as_rat(const Scalar& s) {
  if (const auto* r = std::get_if<BigRat>(&s)) return *r;
  throw FieldError("expected a rational scalar");
}

std::int64_t as_res(const Scalar& s) {
  if (const auto* v = std::get_if<std::int64_t>(&s)) return *v;
  throw FieldError("expected a prime-field scalar");
}

}  // namespace

Field Field::prime(std::int64_t p) {
  if (p < 3 || p % 2 == 0 || !is_prime_u64(p))
    throw FieldError("field modulus must be an odd prime, got " + std::to_string(p));
  if (p > (std::int64_t(1) << 30))
    throw FieldError("field modulus too large");
  return Field(Kind::prime, p);
}

Field Field::rationals() { return Field(Kind::rationals, 0); }

Field Field::parse(const std::string& text) {
  std::string t;
  for (char c : text)
    if (c != ' ' && c != ':') t.push_back(c);
  if (t == "Q" || t == "q") return rationals();
  if (!t.empty() && (t[0] == 'F' || t[0] == 'f')) {
    std::int64_t p = 0;
    auto [ptr, ec] = std::from_chars(t.data() + 1, t.data() + t.size(), p);
    if (ec == std::errc() && ptr == t.data() + t.size()) return prime(p);
  }
  throw FieldError("cannot parse field descriptor '" + text + "' (want F <p> or Q)");
}

std::string Field::describe() const {
  return is_prime() ? "F" + std::to_string(p_) : "Q";
}

std::int64_t Field::norm(std::int64_t v) const { return ((v % p_) + p_) % p_; }

Scalar Field::zero() const {
  return is_prime() ? Scalar(std::int64_t(0)) : Scalar(BigRat(0));
}

Scalar Field::one() const {
  return is_prime() ? Scalar(std::int64_t(1)) : Scalar(BigRat(1));
}

Scalar Field::from_int(std::int64_t n) const {
  return is_prime() ? Scalar(norm(n)) : Scalar(BigRat(n));
}

Scalar Field::from_fraction(std::int64_t num, std::int64_t den) const {
  if (den == 0) throw FieldError("zero denominator");
  if (is_prime()) {
    std::int64_t d = norm(den);
    if (d == 0) throw FieldError("denominator divisible by field characteristic");
    return Scalar(norm(norm(num) * inv_mod(d, p_) % p_));
  }
  if (den < 0) {
    num = -num;
    den = -den;
  }
  return Scalar(BigRat(num, den));
}

Scalar Field::add(const Scalar& a, const Scalar& b) const {
  if (is_prime()) return Scalar(norm(as_res(a) + as_res(b)));
  return Scalar(BigRat(as_rat(a) + as_rat(b)));
}

Scalar Field::sub(const Scalar& a, const Scalar& b) const {
  if (is_prime()) return Scalar(norm(as_res(a) - as_res(b)));
  return Scalar(BigRat(as_rat(a) - as_rat(b)));
}

Scalar Field::mul(const Scalar& a, const Scalar& b) const {
  if (is_prime()) return Scalar(norm(as_res(a) * as_res(b)));
  return Scalar(BigRat(as_rat(a) * as_rat(b)));
}

Scalar Field::neg(const Scalar& a) const {
  if (is_prime()) return Scalar(norm(-as_res(a)));
  return Scalar(BigRat(-as_rat(a)));
}

Scalar Field::inv(const Scalar& a) const {
  if (is_zero(a)) throw FieldError("division by zero");
  if (is_prime()) return Scalar(inv_mod(as_res(a), p_));
  return Scalar(BigRat(1) / as_rat(a));
}

Scalar Field::div(const Scalar& a, const Scalar& b) const { return mul(a, inv(b)); }

bool Field::is_zero(const Scalar& a) const {
  if (is_prime()) return as_res(a) == 0;
  return as_rat(a).is_zero();
}

bool Field::is_one(const Scalar& a) const {
  if (is_prime()) return as_res(a) == 1;
  return as_rat(a) == 1;
}

bool Field::eq(const Scalar& a, const Scalar& b) const {
  if (is_prime()) return as_res(a) == as_res(b);
  return as_rat(a) == as_rat(b);
}

Scalar Field::sample(std::mt19937_64& rng) const {
  if (is_prime()) {
    std::uniform_int_distribution<std::int64_t> d(0, p_ - 1);
    return Scalar(d(rng));
  }
  std::uniform_int_distribution<std::int64_t> d(-9, 9);
  return Scalar(BigRat(d(rng)));
}

std::string Field::to_string(const Scalar& a) const {
  if (is_prime()) return std::to_string(as_res(a));
  const BigRat& r = as_rat(a);
  std::string s = numerator(r).str();
  if (denominator(r) != 1) s += "/" + denominator(r).str();
  return s;
}

Scalar Field::from_string(const std::string& text) const {
  auto slash = text.find('/');
  try {
    if (slash == std::string::npos) {
      if (is_prime()) return from_int(std::stoll(text));
      return Scalar(BigRat(boost::multiprecision::cpp_int(text)));
    }
    std::string num = text.substr(0, slash), den = text.substr(slash + 1);
    if (is_prime()) return from_fraction(std::stoll(num), std::stoll(den));
    boost::multiprecision::cpp_int n(num), d(den);
    if (d < 0) {
      n = -n;
      d = -d;
    }
    return Scalar(BigRat(n, d));
  } catch (const FieldError&) {
    throw;
  } catch (const std::exception&) {
    throw FieldError("cannot parse scalar '" + text + "'");
  }
}

}  // namespace qperf
