#include "doctest.h"

#include <cstdlib>
#include <random>

#include "cobarlie/dgl.hpp"
#include "cobarlie/errors.hpp"
#include "cobarlie/freelie.hpp"

using namespace cobarlie;
using namespace cobarlie::dgl;
using simplicial::parse_expression;
using simplicial::sphere;
using simplicial::wedge;

namespace {

// Words in generators of the given degrees with total degree t: the reduced
// tensor algebra that computes loop-space homology of a wedge of spheres.
size_t tensor_words(const std::vector<int>& degrees, int t) {
  std::vector<size_t> c(t + 1, 0);
  c[0] = 1;
  for (int s = 1; s <= t; ++s)
    for (int d : degrees)
      if (d <= s) c[s] += c[s - d];
  return t == 0 ? 0 : c[t];
}

// Homotopy ranks of a wedge of spheres: free graded Lie algebra on generators
// in degree k-1, counted by weight.
size_t free_lie_rank(int m, int gen_degree, int t) {
  if (t % gen_degree) return 0;
  return freelie::lie_rank(t / gen_degree, m, gen_degree % 2 == 1);
}

SparseVec random_chain(std::mt19937& rng, size_t dim) {
  SparseVec v;
  if (dim == 0) return v;
  for (int k = 0; k < 4; ++k)
    axpy(v, Rational(static_cast<long long>(rng() % 5) - 2), SparseVec{{static_cast<uint32_t>(rng() % dim), Rational(1)}});
  return v;
}

Rational sgn(int e) { return Rational(e % 2 ? -1 : 1); }

}  // namespace

TEST_SUITE("dgl") {
  TEST_CASE("cobar algebra R^N") {
    auto R1 = build_R(sphere(2), 1, 4);
    CHECK(R1.bigraded.columns.size() == 1);
    CHECK(homalg::homology_rank(R1.total.complex, 1) == 1);
    CHECK(homalg::homology_rank(R1.total.complex, 2) == 0);

    // Loop-space homology against the tensor-algebra oracle.
    struct Case {
      const char* expr;
      std::vector<int> degrees;
      int N, q_max, T;
    };
    for (const auto& c : {Case{"S2", {1}, 3, 7, 3}, Case{"S3", {2}, 2, 8, 5}, Case{"S2 v S2", {1, 1}, 3, 7, 3}}) {
      auto R = build_R(parse_expression(c.expr), c.N, c.q_max);
      for (int t = 1; t <= c.T; ++t) CHECK(homalg::homology_rank(R.total.complex, t) == tensor_words(c.degrees, t));
    }
  }

  TEST_CASE("Leibniz square on chains") {
    PowerTower tw(sphere(2), 6);
    CHECK(leibniz_square(tw, 1, 1));
    CHECK(leibniz_square(tw, 1, 2));
    CHECK(leibniz_square(tw, 2, 1));
    PowerTower tw2(wedge(sphere(2), sphere(3)), 6);
    CHECK(leibniz_square(tw2, 1, 1));
    CHECK(leibniz_square(tw2, 2, 1));
  }

  TEST_CASE("projector columns") {
    auto P1 = build_P(sphere(2), 1, 5);
    const auto& C = P1.tower->at(1).complex();
    for (int q = 0; q <= 5; ++q) CHECK(P1.summands.at(1).complex.dim(q) == C.dim(q));

    auto P2 = build_P(sphere(2), 2, 5);
    CHECK(homalg::homology_rank(P2.summands.at(2).complex, 4) == 1);
    auto Q2 = build_P(sphere(3), 2, 7);
    CHECK(homalg::homology_rank(Q2.summands.at(2).complex, 6) == 0);
    CHECK(homalg::homology_rank(Q2.tower->at(2).complex(), 6) == 1);
    CHECK(P2.certificates.all());
    CHECK(P2.certificates.closure.at(1));
    CHECK(P2.certificates.bracket.at({1, 1}));
  }

  TEST_CASE("homotopy ranks against the free Lie oracle") {
    struct Case {
      const char* expr;
      int m, gen_degree, N, q_max, T;
    };
    for (const auto& c : {Case{"S2", 1, 1, 3, 7, 3}, Case{"S3", 1, 2, 2, 8, 4}, Case{"S2 v S2", 2, 1, 2, 5, 2},
                          Case{"S4", 1, 3, 2, 9, 6}}) {
      auto P = build_P(parse_expression(c.expr), c.N, c.q_max);
      CHECK(P.certificates.all());
      auto R = homotopy_ranks(P, c.T);
      for (int t = 1; t <= c.T; ++t) {
        INFO(c.expr << " t=" << t);
        CHECK(R.ranks.at(t) == free_lie_rank(c.m, c.gen_degree, t));
        CHECK(R.representatives.at(t).size() == R.ranks.at(t));
      }
    }
  }

  TEST_CASE("window rule") {
    auto P = build_P(sphere(2), 2, 6);
    CHECK(P.stable_top() == 2);
    CHECK_NOTHROW(homotopy_ranks(P, 2));
    CHECK_THROWS_AS(homotopy_ranks(P, 3), InvalidInput);
    CHECK_THROWS_AS(homotopy_ranks(P, 0), InvalidInput);
    auto Q = build_P(sphere(2), 3, 5);
    CHECK_THROWS_AS(homotopy_ranks(Q, 2), InvalidInput);
    // Higher connectivity widens the window past N.
    auto S = build_P(sphere(3), 2, 8);
    CHECK(S.stable_top() == 5);
    CHECK_THROWS_AS(build_P(sphere(2), 0, 4), InvalidInput);
    CHECK_THROWS_AS(build_P(sphere(2), 4, 10, 200), BudgetExceeded);
  }

  TEST_CASE("Whitehead brackets") {
    auto P = build_P(sphere(2), 3, 7);
    auto R = homotopy_ranks(P, 3);
    auto E = whitehead_bracket(P, R, 1, 1, 7, 3);
    REQUIRE(E.matrix.size() == 1);
    REQUIRE(E.matrix[0].size() == 1);
    CHECK(!E.matrix[0][0].is_zero());
    CHECK(E.representative_independent);
    // [g1, g1] is the generator of H_2 up to a scalar: it is a nonzero class.
    SparseVec z = bracket_chains(P, 1, R.representatives.at(1)[0], 1, R.representatives.at(1)[0]);
    homalg::HomologyBasis H2(P.total.complex, 2);
    CHECK(!H2.is_boundary(z));
    auto E12 = whitehead_bracket(P, R, 1, 2);
    CHECK(E12.matrix.size() == 1);
    CHECK(E12.matrix[0].empty());

    auto S = build_P(sphere(3), 2, 8);
    auto RS = homotopy_ranks(S, 4);
    auto ES = whitehead_bracket(S, RS, 2, 2);
    REQUIRE(ES.matrix.size() == 1);
    CHECK(ES.matrix[0].empty());
    SparseVec zs = bracket_chains(S, 2, RS.representatives.at(2)[0], 2, RS.representatives.at(2)[0]);
    CHECK(homalg::HomologyBasis(S.total.complex, 4).is_boundary(zs));

    auto W = build_P(wedge(sphere(2), sphere(2)), 2, 5);
    auto RW = homotopy_ranks(W, 2);
    auto EW = whitehead_bracket(W, RW, 1, 1, 11, 2);
    REQUIRE(EW.matrix.size() == 4);
    // Odd degree 1: [x,y] = [y,x].
    CHECK(EW.matrix[1] == EW.matrix[2]);
    CHECK(EW.representative_independent);
    std::vector<SparseVec> cols;
    for (const auto& row : EW.matrix) {
      SparseVec v;
      for (size_t k = 0; k < row.size(); ++k)
        if (!row[k].is_zero()) v.push_back({static_cast<uint32_t>(k), row[k]});
      cols.push_back(v);
    }
    CHECK(rank(SparseMatrix::from_columns(3, cols)) == 3);
    CHECK(bracket_table(W, RW).size() == 1);
  }

  TEST_CASE("d.g. Lie identities on random chains") {
    auto P = build_P(wedge(sphere(2), sphere(3)), 3, 7);
    const auto& C = P.total.complex;
    std::mt19937 rng(2024);
    for (int trial = 0; trial < 6; ++trial) {
      int s = 1 + trial % 2, t = 1 + (trial / 2) % 2, u = 1;
      if (s + t + u > C.hi()) continue;
      SparseVec x = random_chain(rng, C.dim(s)), y = random_chain(rng, C.dim(t)), z = random_chain(rng, C.dim(u));
      // Antisymmetry.
      SparseVec xy = bracket_chains(P, s, x, t, y), yx = bracket_chains(P, t, y, s, x);
      CHECK(to_string(xy) == to_string(scale(yx, -sgn(s * t))));
      // Leibniz.
      SparseVec lhs = C.d(s + t).apply(xy);
      SparseVec rhs = s > C.lo() ? bracket_chains(P, s - 1, C.d(s).apply(x), t, y) : SparseVec{};
      if (t > C.lo()) axpy(rhs, sgn(s), bracket_chains(P, s, x, t - 1, C.d(t).apply(y)));
      CHECK(to_string(lhs) == to_string(rhs));
      // Jacobi.
      SparseVec j = scale(bracket_chains(P, s, x, t + u, bracket_chains(P, t, y, u, z)), sgn(s * u));
      axpy(j, sgn(t * s), bracket_chains(P, t, y, u + s, bracket_chains(P, u, z, s, x)));
      axpy(j, sgn(u * t), bracket_chains(P, u, z, s + t, bracket_chains(P, s, x, t, y)));
      CHECK(j.empty());
    }
  }

  TEST_CASE("truncation stability and thread cap") {
    auto A = homotopy_ranks(build_P(sphere(2), 2, 6), 2);
    auto B = homotopy_ranks(build_P(sphere(2), 3, 7), 2);
    CHECK(A.ranks == B.ranks);
    auto Bonly = homotopy_ranks(build_P(sphere(2), 3, 7), 2, false);
    CHECK(Bonly.ranks == B.ranks);
    CHECK(Bonly.representatives.empty());
    // Raising q_max does not move the ranks.
    auto C = homotopy_ranks(build_P(sphere(2), 2, 7), 2);
    CHECK(A.ranks == C.ranks);
    setenv("COBARLIE_THREADS", "1", 1);
    CHECK(worker_count() == 1);
    auto D = homotopy_ranks(build_P(sphere(2), 2, 6), 2);
    CHECK(D.ranks == A.ranks);
    unsetenv("COBARLIE_THREADS");
    CHECK(describe(build_P(sphere(2), 1, 3), 1, {{0, Rational(2)}}).find("2*") == 0);
  }
}
