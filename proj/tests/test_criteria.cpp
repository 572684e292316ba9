#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>
#include <vector>

#include "helpers.hpp"
#include "qperf/criteria.hpp"

using namespace qperf;

namespace {

int vx(const AlgebraBasis& A, const std::string& label) {
  return A.presentation().vertex_index(label);
}

const ConditionEntry& entry_at(const ConditionReport& rep, int v) {
  return rep.entries[static_cast<std::size_t>(v)];
}

void check_report_shape(const AlgebraBasis& A, const ConditionReport& rep) {
  REQUIRE(rep.entries.size() == static_cast<std::size_t>(A.num_vertices()));
  for (int v = 0; v < A.num_vertices(); ++v) {
    const ConditionEntry& e = entry_at(rep, v);
    CHECK(e.vertex == v);
    CHECK(e.dual_forms_agree);
    CHECK(e.cond3_kernel_form == e.cond3_dual_trace_form);
    // A line carrying all three conditions at once also carries them
    // separately.
    if (e.overall) {
      CHECK(e.cond1);
      CHECK(e.separate_witnesses);
      CHECK(!e.witness_line.empty());
    } else {
      CHECK(e.witness_line.empty());
    }
  }
}

AlgebraBasis two_way_cycle() {
  return AlgebraBasis::compute(parse_presentation(
      "field F 101\n"
      "vertex x\n"
      "vertex y\n"
      "arrow a x y\n"
      "arrow b y x\n"
      "rel a*b\n"
      "rel b*a\n"));
}

AlgebraBasis a3_line() {
  return AlgebraBasis::compute(parse_presentation(
      "field F 101\n"
      "vertex x\n"
      "vertex y\n"
      "vertex z\n"
      "arrow a x y\n"
      "arrow b y z\n"));
}

}  // namespace

TEST_CASE("socle and trace conditions across the corpus") {
  SUBCASE("two-loop example passes at both vertices") {
    AlgebraBasis A = load_algebra("ex211.alg");
    ConditionReport rep = check_all_conditions(A);
    check_report_shape(A, rep);
    CHECK(rep.all_pass);
    for (int v : {vx(A, "x"), vx(A, "y")}) {
      const ConditionEntry& e = entry_at(rep, v);
      CHECK(e.socle_dim == 1);
      CHECK(e.trace_meet_dim == 0);
      CHECK(e.kernel_meet_dim == 1);
      CHECK(e.overall);
    }
    // The witness at x is the socle line spanned by the loop.
    const Field& F = A.field();
    const ConditionEntry& ex = entry_at(rep, vx(A, "x"));
    REQUIRE(ex.witness_line.size() == 2);
    CHECK(F.is_zero(ex.witness_line[0]));
    CHECK(!F.is_zero(ex.witness_line[1]));
  }

  SUBCASE("three-loop example fails only at the second vertex") {
    AlgebraBasis A = load_algebra("ex45.alg");
    ConditionReport rep = check_all_conditions(A);
    check_report_shape(A, rep);
    CHECK(!rep.all_pass);

    const ConditionEntry& ex = entry_at(rep, vx(A, "x"));
    CHECK(ex.socle_dim == 1);
    CHECK(ex.kernel_meet_dim == 1);
    CHECK(ex.overall);

    const ConditionEntry& ey = entry_at(rep, vx(A, "y"));
    CHECK(ey.socle_dim == 2);
    CHECK(ey.trace_meet_dim == 0);
    CHECK(ey.kernel_meet_dim == 0);
    CHECK(ey.cond1);
    CHECK(ey.cond2);
    CHECK(!ey.cond3_kernel_form);
    CHECK(!ey.overall);
  }

  SUBCASE("three-vertex example passes everywhere") {
    AlgebraBasis A = load_algebra("ex47.alg");
    ConditionReport rep = check_all_conditions(A);
    check_report_shape(A, rep);
    CHECK(rep.all_pass);
    for (const ConditionEntry& e : rep.entries) {
      CHECK(e.socle_dim == 1);
      CHECK(e.trace_meet_dim == 0);
      CHECK(e.kernel_meet_dim == 1);
    }
  }

  SUBCASE("kronecker fails at both vertices for different reasons") {
    AlgebraBasis A = load_algebra("kronecker.alg");
    ConditionReport rep = check_all_conditions(A);
    check_report_shape(A, rep);
    CHECK(!rep.all_pass);

    const ConditionEntry& ex = entry_at(rep, vx(A, "x"));
    CHECK(!ex.cond1);
    CHECK(ex.socle_dim == 0);
    CHECK(!ex.overall);

    const ConditionEntry& ey = entry_at(rep, vx(A, "y"));
    CHECK(ey.cond1);
    CHECK(ey.cond2);
    CHECK(!ey.cond3_kernel_form);
    CHECK(!ey.overall);
  }

  SUBCASE("path algebra of one arrow fails at both ends") {
    AlgebraBasis A = load_algebra("a2.alg");
    ConditionReport rep = check_all_conditions(A);
    check_report_shape(A, rep);
    const ConditionEntry& ex = entry_at(rep, vx(A, "x"));
    const ConditionEntry& ey = entry_at(rep, vx(A, "y"));
    CHECK(!ex.cond1);
    CHECK(ey.cond1);
    CHECK(!ey.cond3_kernel_form);
    CHECK(!rep.all_pass);
  }

  SUBCASE("one-vertex algebras pass vacuously") {
    for (const char* name : {"local3.alg", "empty.alg"}) {
      AlgebraBasis A = load_algebra(name);
      ConditionReport rep = check_all_conditions(A);
      check_report_shape(A, rep);
      CHECK(rep.all_pass);
      CHECK(entry_at(rep, 0).trace_meet_dim == 0);
      CHECK(entry_at(rep, 0).kernel_meet_dim == entry_at(rep, 0).socle_dim);
    }
  }
}

TEST_CASE("weak directedness of the piece digraph") {
  SUBCASE("corpus algebras are directed with the declared order") {
    for (const char* name :
         {"ex211.alg", "ex45.alg", "ex47.alg", "kronecker.alg", "a2.alg"}) {
      AlgebraBasis A = load_algebra(name);
      WeaklyDirectedOrder wd = is_weakly_directed(A);
      REQUIRE(wd.directed);
      REQUIRE(wd.order.size() == static_cast<std::size_t>(A.num_vertices()));
      CHECK(wd.cycle.empty());
      // No nonzero paths from a later vertex back to an earlier one.
      for (std::size_t i = 0; i < wd.order.size(); ++i)
        for (std::size_t j = i + 1; j < wd.order.size(); ++j)
          CHECK(A.piece_dim(wd.order[j], wd.order[i]) == 0);
    }
    AlgebraBasis A = load_algebra("ex47.alg");
    CHECK(is_weakly_directed(A).order ==
          std::vector<int>{vx(A, "x"), vx(A, "y"), vx(A, "z")});
  }

  SUBCASE("a two-way cycle is rejected with a witness") {
    AlgebraBasis A = two_way_cycle();
    WeaklyDirectedOrder wd = is_weakly_directed(A);
    CHECK(!wd.directed);
    CHECK(wd.order.empty());
    REQUIRE(wd.cycle.size() == 2);
    // Consecutive cycle vertices are joined by nonzero pieces, wrapping.
    for (std::size_t i = 0; i < wd.cycle.size(); ++i) {
      int u = wd.cycle[i];
      int w = wd.cycle[(i + 1) % wd.cycle.size()];
      CHECK(A.piece_dim(u, w) > 0);
    }
  }
}

TEST_CASE("local socle shortcut agrees with the full conditions") {
  SUBCASE("vertex by vertex agreement on directed corpus algebras") {
    for (const char* name : {"ex211.alg", "ex45.alg", "ex47.alg",
                             "kronecker.alg", "a2.alg", "local3.alg",
                             "empty.alg"}) {
      AlgebraBasis A = load_algebra(name);
      std::vector<WdVertexVerdict> wd = check_wd_conditions(A);
      ConditionReport rep = check_all_conditions(A);
      REQUIRE(wd.size() == rep.entries.size());
      for (std::size_t v = 0; v < wd.size(); ++v) {
        CHECK(wd[v].vertex == static_cast<int>(v));
        CHECK(wd[v].pass == rep.entries[v].overall);
      }
    }
  }

  SUBCASE("the failing product at the second vertex is reported") {
    AlgebraBasis A = load_algebra("ex45.alg");
    std::vector<WdVertexVerdict> wd = check_wd_conditions(A);
    const WdVertexVerdict& vy = wd[static_cast<std::size_t>(vx(A, "y"))];
    CHECK(vy.socle_ok);
    CHECK(!vy.products_ok);
    CHECK(!vy.pass);
    CHECK(vy.failing_product.find("be") != std::string::npos);
    const WdVertexVerdict& vxv = wd[static_cast<std::size_t>(vx(A, "x"))];
    CHECK(vxv.pass);
    CHECK(vxv.failing_product.empty());
  }

  SUBCASE("refuses algebras that are not weakly directed") {
    AlgebraBasis A = two_way_cycle();
    CHECK_THROWS_AS(check_wd_conditions(A), AlgebraError);
  }
}

TEST_CASE("corner deletion at extremal vertices") {
  SUBCASE("deleting the sink of the three-vertex example") {
    AlgebraBasis A = load_algebra("ex47.alg");
    AlgebraBasis B = corner_delete(A, vx(A, "z"));
    CHECK(B.num_vertices() == 2);
    CHECK(B.dim() == 8);
    int bx = vx(B, "x"), by = vx(B, "y");
    CHECK(B.piece_dim(bx, bx) == 3);
    CHECK(B.piece_dim(bx, by) == 2);
    CHECK(B.piece_dim(by, by) == 3);
    CHECK(B.piece_dim(by, bx) == 0);
    CHECK(check_all_conditions(B).all_pass);
    for (const WdVertexVerdict& v : check_wd_conditions(B)) CHECK(v.pass);
  }

  SUBCASE("deleting the source of the three-vertex example") {
    AlgebraBasis A = load_algebra("ex47.alg");
    AlgebraBasis B = corner_delete(A, vx(A, "x"));
    CHECK(B.num_vertices() == 2);
    CHECK(B.dim() == 8);
    int by = vx(B, "y"), bz = vx(B, "z");
    CHECK(B.piece_dim(by, bz) == 2);
    CHECK(B.piece_dim(bz, by) == 0);
    CHECK(check_all_conditions(B).all_pass);
  }

  SUBCASE("two-loop example shrinks to a local algebra either way") {
    AlgebraBasis A = load_algebra("ex211.alg");
    AlgebraBasis Bx = corner_delete(A, vx(A, "y"));
    CHECK(Bx.num_vertices() == 1);
    CHECK(Bx.dim() == 2);
    AlgebraBasis By = corner_delete(A, vx(A, "x"));
    CHECK(By.num_vertices() == 1);
    CHECK(By.dim() == 2);
  }

  SUBCASE("rejects non-extremal and lone vertices") {
    AlgebraBasis line = a3_line();
    CHECK_THROWS_AS(corner_delete(line, vx(line, "y")), AlgebraError);
    AlgebraBasis mid = corner_delete(line, vx(line, "x"));
    CHECK(mid.dim() == 3);
    AlgebraBasis local = load_algebra("local3.alg");
    CHECK_THROWS_AS(corner_delete(local, 0), AlgebraError);
  }
}

TEST_CASE("triangular vertex splits") {
  SUBCASE("two-loop example splits one way") {
    AlgebraBasis A = load_algebra("ex211.alg");
    std::vector<IdempotentSplit> splits = triangular_split(A);
    REQUIRE(splits.size() == 1);
    CHECK(splits[0].e_block == std::vector<int>{vx(A, "x")});
    CHECK(splits[0].f_block == std::vector<int>{vx(A, "y")});
    // Basis counting for the split: dim A = dim eAe + dim fAf + dim fAe.
    int x = vx(A, "x"), y = vx(A, "y");
    CHECK(A.piece_dim(x, x) + A.piece_dim(y, y) + A.piece_dim(x, y) == A.dim());
  }

  SUBCASE("three-vertex example splits at either end") {
    AlgebraBasis A = load_algebra("ex47.alg");
    std::vector<IdempotentSplit> splits = triangular_split(A);
    REQUIRE(splits.size() == 2);
    int x = vx(A, "x"), y = vx(A, "y"), z = vx(A, "z");
    CHECK(splits[0].e_block == std::vector<int>{x});
    CHECK(splits[1].e_block == std::vector<int>{x, y});
    CHECK(splits[1].f_block == std::vector<int>{z});
  }

  SUBCASE("local algebras admit none") {
    CHECK(triangular_split(load_algebra("local3.alg")).empty());
    REQUIRE(triangular_split(load_algebra("kronecker.alg")).size() == 1);
  }
}

TEST_CASE("finitistic dimension probe") {
  SUBCASE("two-loop example yields no finite-dimension witness") {
    AlgebraBasis A = load_algebra("ex211.alg");
    FindimSample sample;
    sample.submodule_dim_bound = 4;
    FindimReport rep = findim_probe(A, sample, 20);
    CHECK(!rep.witness_found);
    CHECK(rep.modules_tested > 0);
    CHECK(rep.nonprojective_tested > 0);
    // Every nonprojective quotient found here resolves forever.
    CHECK(rep.truncated_resolutions == rep.nonprojective_tested);
  }

  SUBCASE("one arrow gives a projective-dimension-one witness") {
    AlgebraBasis A = load_algebra("a2.alg");
    FindimReport rep = findim_probe(A, FindimSample{}, 20);
    REQUIRE(rep.witness_found);
    CHECK(rep.witness_vertex == vx(A, "x"));
    CHECK(rep.witness_pd == 1);
    CHECK(rep.witness_dims == std::vector<std::size_t>{1, 0});
  }

  SUBCASE("selfinjective local algebra stays consistent with zero") {
    AlgebraBasis A = load_algebra("local3.alg");
    FindimSample sample;
    sample.submodule_dim_bound = 4;
    FindimReport rep = findim_probe(A, sample, 20);
    CHECK(!rep.witness_found);
    CHECK(rep.nonprojective_tested > 0);
  }
}
