#include "doctest.h"

#include <random>

#include "cobarlie/errors.hpp"
#include "cobarlie/simplicial.hpp"

using namespace cobarlie;
using namespace cobarlie::simplicial;
using fincat::SetMap;
using homalg::homology_rank;

namespace {

std::vector<size_t> ranks(const homalg::ChainComplex& C, int top) {
  std::vector<size_t> r;
  for (int q = 0; q <= top; ++q) r.push_back(homology_rank(C, q));
  return r;
}

// All q-simplices of X, degenerate ones included.
std::vector<Simplex> all_simplices(const SimplicialSpace& X, int q) {
  std::vector<Simplex> out;
  for (uint32_t c = 0; c < X.cells().size(); ++c)
    for (uint32_t m = 0; m < (1u << q); ++m)
      if (__builtin_popcount(m) == X.cell(c).dim) out.push_back({c, m << 1});
  return out;
}

SetMap random_surjection(std::mt19937& rng, int m, int n) {
  while (true) {
    std::vector<uint8_t> im(m);
    for (auto& v : im) v = static_cast<uint8_t>(1 + rng() % n);
    SetMap f(n, im);
    if (f.is_surjection()) return f;
  }
}

SetMap block_swap(int p, int q) {
  // Output coordinate j reads input coordinate f(j): (x, y) ↦ (y, x).
  std::vector<uint8_t> im;
  for (int j = 1; j <= q; ++j) im.push_back(static_cast<uint8_t>(p + j));
  for (int j = 1; j <= p; ++j) im.push_back(static_cast<uint8_t>(j));
  return SetMap(p + q, im);
}

}  // namespace

TEST_SUITE("simplicial") {
  TEST_CASE("sphere models") {
    auto S2 = sphere(2);
    CHECK(S2.cells().size() == 2);
    CHECK(S2.cell(1).dim == 2);
    CHECK_THROWS_AS(sphere(1), InvalidInput);
    auto S3 = sphere(3);
    for (int q = 3; q <= 9; ++q) {
      size_t c = 1;
      for (int i = 0; i < 3; ++i) c = c * (q - i) / (i + 1);
      CHECK(S3.count_simplices(q) == 1 + c);
      CHECK(all_simplices(S3, q).size() == 1 + c);
    }
    CHECK(ranks(normalized_chains(S2, 4), 4) == std::vector<size_t>{1, 0, 1, 0, 0});
  }

  TEST_CASE("simplicial identities on all simplices") {
    for (const auto& X : {sphere(2), product(sphere(2), sphere(3)), wedge(sphere(2), sphere(4)),
                          product(product(sphere(2), sphere(2)), sphere(2))}) {
      for (int q = 2; q <= 6; ++q)
        for (const auto& s : all_simplices(X, q)) {
          for (int j = 1; j <= q; ++j)
            for (int i = 0; i < j; ++i)
              REQUIRE(X.face(X.face(s, q, j), q - 1, i) == X.face(X.face(s, q, i), q - 1, j - 1));
          for (int j = 0; j <= q; ++j) {
            Simplex t = X.degeneracy(s, q, j);
            for (int i = 0; i <= q + 1; ++i) {
              Simplex lhs = X.face(t, q + 1, i);
              if (i == j || i == j + 1) {
                REQUIRE(lhs == s);
              } else if (i < j) {
                REQUIRE(lhs == X.degeneracy(X.face(s, q, i), q - 1, j - 1));
              } else {
                REQUIRE(lhs == X.degeneracy(X.face(s, q, i - 1), q - 1, j));
              }
            }
          }
        }
    }
  }

  TEST_CASE("wedges and products") {
    auto W = wedge(sphere(2), sphere(2));
    CHECK(W.cells().size() == 3);
    CHECK(ranks(normalized_chains(W, 3), 3) == std::vector<size_t>{1, 0, 2, 0});
    auto P = product(sphere(2), point());
    REQUIRE(P.cells().size() == 2);
    CHECK(P.cell(1).dim == 2);
    auto P22 = product(sphere(2), sphere(2));
    CHECK(P22.connectivity() == 2);
    CHECK(ranks(normalized_chains(P22, 5), 5) == std::vector<size_t>{1, 0, 2, 0, 1, 0});
    auto P23 = product(sphere(2), sphere(3));
    CHECK(ranks(normalized_chains(P23, 6), 6) == std::vector<size_t>{1, 0, 1, 1, 0, 1, 0});
    for (const auto& c : P23.cells()) CHECK(c.dim != 1);
  }

  TEST_CASE("expressions and JSON") {
    auto X = parse_expression("S2 x S2 v S2");
    CHECK(ranks(normalized_chains(X, 5), 5) == std::vector<size_t>{1, 0, 3, 0, 1, 0});
    auto Y = parse_expression("S2 x (S2 v S2)");
    CHECK(ranks(normalized_chains(Y, 5), 5) == std::vector<size_t>{1, 0, 3, 0, 2, 0});
    CHECK(parse_expression("S3").name() == "S3");
    CHECK(parse_expression("S2 v S2").name() == "S2 v S2");
    CHECK_THROWS_AS(parse_expression("S2 v"), InvalidInput);
    CHECK_THROWS_AS(parse_expression("T2"), InvalidInput);
    CHECK_THROWS_AS(parse_expression("S1"), InvalidInput);

    auto Z = parse_json(to_json(product(sphere(2), sphere(2))));
    CHECK(ranks(normalized_chains(Z, 5), 5) == std::vector<size_t>{1, 0, 2, 0, 1, 0});
    auto S = parse_json(R"({"vertices":1,"cells":[{"id":"e","dim":3,"faces":[
        {"degeneracies":[1,0],"cell":"*"},{"degeneracies":[1,0],"cell":"*"},
        {"degeneracies":[1,0],"cell":"*"},{"degeneracies":[1,0],"cell":"*"}]}]})");
    CHECK(ranks(normalized_chains(S, 4), 4) == std::vector<size_t>{1, 0, 0, 1, 0});
    CHECK_THROWS_AS(parse_json(R"({"vertices":2,"cells":[]})"), InvalidInput);
    CHECK_THROWS_AS(parse_json(R"({"vertices":1,"cells":[{"id":"a","dim":1,"faces":[{"cell":"*"},{"cell":"*"}]}]})"),
                    InvalidInput);
    // d_0 d_1 = d_0 d_0 fails on h: d_0 b = g but d_0 a = e.
    CHECK_THROWS_AS(parse_json(R"({"vertices":1,"cells":[
        {"id":"e","dim":2,"faces":[{"degeneracies":[0],"cell":"*"},{"degeneracies":[0],"cell":"*"},{"degeneracies":[0],"cell":"*"}]},
        {"id":"g","dim":2,"faces":[{"degeneracies":[0],"cell":"*"},{"degeneracies":[0],"cell":"*"},{"degeneracies":[0],"cell":"*"}]},
        {"id":"a","dim":3,"faces":[{"cell":"e"},{"degeneracies":[1,0],"cell":"*"},{"degeneracies":[1,0],"cell":"*"},{"degeneracies":[1,0],"cell":"*"}]},
        {"id":"b","dim":3,"faces":[{"cell":"g"},{"degeneracies":[1,0],"cell":"*"},{"degeneracies":[1,0],"cell":"*"},{"degeneracies":[1,0],"cell":"*"}]},
        {"id":"h","dim":4,"faces":[{"cell":"a"},{"cell":"b"},{"degeneracies":[2,1,0],"cell":"*"},
         {"degeneracies":[2,1,0],"cell":"*"},{"degeneracies":[2,1,0],"cell":"*"}]}]})"),
                    InvalidInput);
    CHECK_THROWS_AS(parse_json("{not json"), InvalidInput);
  }

  TEST_CASE("relative chains of powers") {
    auto S2 = sphere(2);
    PowerChains P1(S2, 1, 4);
    std::vector<size_t> dims;
    for (int q = 0; q <= 4; ++q) dims.push_back(P1.complex().dim(q));
    CHECK(dims == std::vector<size_t>{0, 0, 1, 0, 0});
    PowerChains P2(S2, 2, 6);
    CHECK(ranks(P2.complex(), 5) == std::vector<size_t>{0, 0, 0, 0, 1, 0});
    PowerChains P3(S2, 3, 7);
    CHECK(ranks(P3.complex(), 6) == std::vector<size_t>{0, 0, 0, 0, 0, 0, 1});
    PowerChains Q2(sphere(3), 2, 7);
    CHECK(ranks(Q2.complex(), 7) == std::vector<size_t>{0, 0, 0, 0, 0, 0, 1, 0});
    PowerChains W2(wedge(S2, S2), 2, 5);
    CHECK(homology_rank(W2.complex(), 4) == 4);
    PowerChains P0(S2, 0, 3);
    CHECK(ranks(P0.complex(), 3) == std::vector<size_t>{1, 0, 0, 0});
    CHECK_THROWS_AS(PowerChains(S2, 4, 10, 100), BudgetExceeded);
    // Top homology needs the next degree.
    PowerChains T(S2, 2, 3);
    CHECK_THROWS_AS(homology_rank(T.complex(), 3), InvalidInput);
    CHECK(PowerChains(S2, 2, 4).complex().valid_top() == 4);
  }

  TEST_CASE("induced maps") {
    auto S2 = sphere(2);
    PowerChains P1(S2, 1, 6), P2(S2, 2, 6), P3(S2, 3, 6);
    // δ_1 : [2] -> [1] induces the diagonal X -> X × X.
    Tuple x{{1, full_mask(2)}};
    CHECK(induced_map(fincat::delta(1, 1), x) == Tuple{x[0], x[0]});
    auto D = induced_chain_map(fincat::delta(1, 1), P1, P2);
    CHECK(homalg::is_chain_map(D, P1.complex(), P2.complex()));
    auto sw = induced_chain_map(fincat::transposition(2, 1, 2), P2, P2);
    CHECK(homalg::is_chain_map(sw, P2.complex(), P2.complex()));
    CHECK(sw.at(4) * sw.at(4) == SparseMatrix::identity(P2.complex().dim(4)));
    CHECK_THROWS_AS(induced_chain_map(SetMap(2, {1, 1}), P2, P2), InvalidInput);

    // Contravariant functoriality on random surjections.
    std::mt19937 rng(41);
    std::vector<const PowerChains*> pw{nullptr, &P1, &P2, &P3};
    for (int trial = 0; trial < 30; ++trial) {
      int l = 1 + rng() % 3, m = 1 + rng() % 3, n = 1 + rng() % 3;
      if (l < m || m < n) continue;
      SetMap b = random_surjection(rng, l, m), a = random_surjection(rng, m, n);
      auto lhs = induced_chain_map(fincat::compose(a, b), *pw[n], *pw[l]);
      auto rhs = homalg::compose(induced_chain_map(b, *pw[m], *pw[l]), induced_chain_map(a, *pw[n], *pw[m]));
      for (int q = 0; q <= 6; ++q) CHECK(lhs.at(q) == rhs.at(q));
    }
    // F(f_1) F(f_2) = 0, and F(w_n) squares to n F(w_n).
    auto f1 = induced_chain_map(fincat::cobar_differential(1), P1, P2);
    auto f2 = induced_chain_map(fincat::cobar_differential(2), P2, P3);
    for (int q = 0; q <= 6; ++q) CHECK((f2.at(q) * f1.at(q)).is_zero());
    for (int n = 1; n <= 3; ++n) {
      auto W = induced_chain_map(fincat::w_element(n).as_morphism(), *pw[n], *pw[n]);
      for (int q = 0; q <= 6; ++q) CHECK(W.at(q) * W.at(q) == W.at(q).scaled(Rational(n)));
    }
  }

  TEST_CASE("Eilenberg-Zilber shuffle") {
    auto S2 = sphere(2);
    auto X = wedge(S2, sphere(3));
    for (const auto& sp : {S2, X}) {
      PowerChains P0(sp, 0, 7), P1(sp, 1, 7), P2(sp, 2, 7), P3(sp, 3, 7);
      std::vector<const PowerChains*> pw{&P0, &P1, &P2, &P3};
      // Chain maps, and quasi-isomorphisms onto the relative chains of the product.
      for (int p = 0; p <= 2; ++p)
        for (int q = 0; p + q <= 3; ++q) {
          auto sh = ez_shuffle(*pw[p], *pw[q], *pw[p + q]);
          CHECK(homalg::is_chain_map(sh.map, sh.tensor, pw[p + q]->complex()));
          int top = std::min(sh.tensor.valid_top(), pw[p + q]->complex().valid_top());
          CHECK(homalg::is_quasi_iso(sh.map, sh.tensor, pw[p + q]->complex(), 0, std::min(top, 5)));
        }
      // Unit: shuffling with the empty tuple is the identity.
      for (int q = 0; q <= 7; ++q)
        for (uint32_t i = 0; i < P2.basis(q).size(); ++i) {
          CHECK(ez_pair(P0, 0, 0, P2, q, i, P2) == SparseVec{{i, Rational(1)}});
          CHECK(ez_pair(P2, q, i, P0, 0, 0, P2) == SparseVec{{i, Rational(1)}});
        }
      // Commutativity: swap ∘ ez(x ⊗ y) = (-1)^{ab} ez(y ⊗ x).
      auto swap = induced_chain_map(block_swap(1, 2), P3, P3);
      for (int a = 0; a <= 3; ++a)
        for (int b = 0; a + b <= 7; ++b)
          for (uint32_t i = 0; i < P1.basis(a).size(); ++i)
            for (uint32_t j = 0; j < P2.basis(b).size(); ++j) {
              SparseVec lhs = swap.at(a + b).apply(ez_pair(P1, a, i, P2, b, j, P3));
              SparseVec rhs = scale(ez_pair(P2, b, j, P1, a, i, P3), Rational((a * b) % 2 ? -1 : 1));
              CHECK(to_string(lhs) == to_string(rhs));
            }
      // Associativity on triples of single coordinates.
      for (int a = 2; a <= 3; ++a)
        for (int b = 2; a + b <= 5; ++b)
          for (int c = 2; a + b + c <= 7; ++c)
            for (uint32_t i = 0; i < P1.basis(a).size(); ++i)
              for (uint32_t j = 0; j < P1.basis(b).size(); ++j)
                for (uint32_t k = 0; k < P1.basis(c).size(); ++k) {
                  SparseVec left, right;
                  for (const auto& e : ez_pair(P1, a, i, P1, b, j, P2))
                    axpy(left, e.val, ez_pair(P2, a + b, e.idx, P1, c, k, P3));
                  for (const auto& e : ez_pair(P1, b, j, P1, c, k, P2))
                    axpy(right, e.val, ez_pair(P1, a, i, P2, b + c, e.idx, P3));
                  CHECK(to_string(left) == to_string(right));
                }
      // Σ_2 × Σ_1 equivariance: ez(σx ⊗ y) = (σ ⊔ 1) ez(x ⊗ y).
      auto s2 = induced_chain_map(fincat::transposition(2, 1, 2), P2, P2);
      auto s3 = induced_chain_map(fincat::transposition(3, 1, 2), P3, P3);
      for (int a = 0; a <= 5; ++a)
        for (int b = 0; a + b <= 7; ++b)
          for (uint32_t i = 0; i < P2.basis(a).size(); ++i)
            for (uint32_t j = 0; j < P1.basis(b).size(); ++j) {
              SparseVec lhs;
              for (const auto& e : s2.at(a).col(i)) axpy(lhs, e.val, ez_pair(P2, a, e.idx, P1, b, j, P3));
              SparseVec rhs = s3.at(a + b).apply(ez_pair(P2, a, i, P1, b, j, P3));
              CHECK(to_string(lhs) == to_string(rhs));
            }
    }
  }
}
