#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qperf/field.hpp"
#include "qperf/matrix.hpp"

using namespace qperf;

TEST_CASE("prime field arithmetic") {
  Field F = Field::prime(101);
  CHECK(F.is_prime());
  CHECK(F.modulus() == 101);
  Scalar a = F.from_int(57), b = F.from_int(88);
  CHECK(F.eq(F.add(a, b), F.from_int(44)));       // 145 mod 101
  CHECK(F.eq(F.mul(a, b), F.from_int(5016 % 101)));
  CHECK(F.eq(F.mul(a, F.inv(a)), F.one()));
  CHECK(F.eq(F.neg(F.zero()), F.zero()));
  CHECK(F.eq(F.from_int(-1), F.from_int(100)));
  CHECK_THROWS_AS(F.inv(F.zero()), FieldError);
  CHECK_THROWS_AS(Field::prime(100), FieldError);
  CHECK_THROWS_AS(Field::prime(2), FieldError);  // even modulus rejected
}

TEST_CASE("rational field arithmetic") {
  Field Q = Field::rationals();
  Scalar a = Q.from_fraction(3, 4), b = Q.from_fraction(-1, 6);
  CHECK(Q.to_string(Q.add(a, b)) == "7/12");
  CHECK(Q.to_string(Q.mul(a, b)) == "-1/8");
  CHECK(Q.eq(Q.div(a, a), Q.one()));
  CHECK(Q.eq(Q.from_string("-4/7"), Q.from_fraction(4, -7)));
}

TEST_CASE("field parse") {
  CHECK(Field::parse("F 101") == Field::prime(101));
  CHECK(Field::parse(" F:7 ") == Field::prime(7));
  CHECK(Field::parse("Q") == Field::rationals());
  CHECK_THROWS_AS(Field::parse("R"), FieldError);
}

TEST_CASE("rref, rank, kernel, solve, inverse") {
  Field F = Field::prime(101);
  Mat A(3, 4, F);
  // rows: x + 2y + 3z + 4w, 2x + 4y + 6z + 8w (dependent), y + z
  std::int64_t rows[3][4] = {{1, 2, 3, 4}, {2, 4, 6, 8}, {0, 1, 1, 0}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 4; ++j) A.at(i, j) = F.from_int(rows[i][j]);
  CHECK(rank_of(A, F) == 2);
  Mat K = kernel_basis(A, F);
  CHECK(K.rows() == 2);
  for (std::size_t r = 0; r < K.rows(); ++r) {
    std::vector<Scalar> y = apply(A, K.row(r), F);
    for (const Scalar& s : y) CHECK(F.is_zero(s));
  }

  Mat B(2, 2, F);
  B.at(0, 0) = F.from_int(1);
  B.at(0, 1) = F.from_int(2);
  B.at(1, 0) = F.from_int(3);
  B.at(1, 1) = F.from_int(4);
  auto Binv = inverse(B, F);
  REQUIRE(Binv.has_value());
  CHECK(mat_eq(mat_mul(B, *Binv, F), Mat::identity(2, F), F));

  std::vector<Scalar> b{F.from_int(5), F.from_int(6)};
  auto x = solve(B, b, F);
  REQUIRE(x.has_value());
  std::vector<Scalar> Bx = apply(B, *x, F);
  CHECK(F.eq(Bx[0], b[0]));
  CHECK(F.eq(Bx[1], b[1]));

  Mat S(2, 2, F);  // singular
  S.at(0, 0) = F.from_int(1);
  S.at(0, 1) = F.from_int(2);
  S.at(1, 0) = F.from_int(2);
  S.at(1, 1) = F.from_int(4);
  CHECK(!inverse(S, F).has_value());
  std::vector<Scalar> bad{F.from_int(1), F.from_int(0)};
  CHECK(!solve(S, bad, F).has_value());
}

TEST_CASE("row spaces are canonical") {
  Field F = Field::prime(101);
  Mat U(2, 3, F), V(2, 3, F);
  std::int64_t u[2][3] = {{1, 1, 0}, {0, 0, 1}};
  std::int64_t v[2][3] = {{1, 1, 1}, {2, 2, 3}};  // same span
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 3; ++j) {
      U.at(i, j) = F.from_int(u[i][j]);
      V.at(i, j) = F.from_int(v[i][j]);
    }
  RowSpace su = RowSpace::from_rows(U, F), sv = RowSpace::from_rows(V, F);
  CHECK(su.dim() == 2);
  CHECK(mat_eq(su.basis(), sv.basis(), F));
  CHECK(su.contains(sv, F));

  Mat W(1, 3, F);
  W.at(0, 0) = F.from_int(1);
  RowSpace sw = RowSpace::from_rows(W, F);
  RowSpace inter = su.intersect(sw, F);
  CHECK(inter.dim() == 0);  // e1 not in span{e1+e2, e3}
  RowSpace total = su.sum(sw, F);
  CHECK(total.dim() == 3);
  CHECK(total.contains(std::vector<Scalar>{F.from_int(4), F.from_int(7), F.one()}, F));

  auto coords = su.coordinates(std::vector<Scalar>{F.one(), F.one(), F.from_int(5)}, F);
  REQUIRE(coords.has_value());
  CHECK(coords->size() == 2);
}

TEST_CASE("characteristic polynomial") {
  Field Q = Field::rationals();
  Mat A(2, 2, Q);
  A.at(0, 0) = Q.from_int(3);
  A.at(0, 1) = Q.from_int(2);
  A.at(1, 0) = Q.from_int(-2);
  A.at(1, 1) = Q.from_int(-1);
  std::vector<Scalar> cp = char_poly(A, Q);  // x^2 - 2x + 1, constant first
  REQUIRE(cp.size() == 3);
  CHECK(Q.eq(cp[0], Q.one()));
  CHECK(Q.eq(cp[1], Q.from_int(-2)));
  CHECK(Q.eq(cp[2], Q.one()));
}

TEST_CASE("smith normal form divisors") {
  auto d1 = smith_normal_form_divisors({{2, 4}, {6, 8}});
  CHECK(d1 == std::vector<std::int64_t>{2, 4});  // det -8, gcd 2
  auto d2 = smith_normal_form_divisors({{1, 0}, {2, 1}});
  CHECK(d2 == std::vector<std::int64_t>{1, 1});
  auto d3 = smith_normal_form_divisors({{0, 0}, {0, 0}});
  CHECK(d3.empty());
  auto d4 = smith_normal_form_divisors({{1, 0, 1}, {0, 1, 1}});
  CHECK(d4 == std::vector<std::int64_t>{1, 1});
}
