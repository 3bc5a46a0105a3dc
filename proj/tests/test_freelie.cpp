#include "doctest.h"

#include <random>

#include "cobarlie/freelie.hpp"

using namespace cobarlie;
using namespace cobarlie::freelie;
using fincat::bracket_element;
using fincat::w_element;

namespace {

// Möbius function, for the necklace-count oracles.
int mobius(int n) {
  int r = 1;
  for (int p = 2; p * p <= n; ++p)
    if (n % p == 0) {
      n /= p;
      if (n % p == 0) return 0;
      r = -r;
    }
  return n > 1 ? -r : r;
}

long witt(int n, int m) {
  long s = 0;
  for (int d = 1; d <= n; ++d)
    if (n % d == 0) {
      long p = 1;
      for (int k = 0; k < n / d; ++k) p *= m;
      s += mobius(d) * p;
    }
  return s / n;
}

// Lyndon words of length n over m letters, by Duval's algorithm.
long lyndon_count(int n, int m) {
  long count = 0;
  std::vector<int> w{-1};
  while (!w.empty()) {
    ++w.back();
    if (static_cast<int>(w.size()) == n) ++count;
    size_t k = w.size();
    while (static_cast<int>(w.size()) < n) w.push_back(w[w.size() - k]);
    while (!w.empty() && w.back() == m - 1) w.pop_back();
  }
  return count;
}

TensorElement random_lie(std::mt19937& rng, int n, const GradedGenerators& g) {
  TensorElement t;
  t.weight = n;
  for (int k = 0; k < 3; ++k) {
    Word w(n);
    for (auto& l : w) l = static_cast<uint8_t>(rng() % g.size());
    t = t + right_action(w_element(n), Tensor::word(w), g) * Rational(int(rng() % 5) - 2);
  }
  return t;
}

}  // namespace

TEST_SUITE("freelie") {
  TEST_CASE("w_n realizes the left-normed bracket") {
    auto odd = GradedGenerators::uniform(3, 1);
    CHECK(right_action(w_element(2), Tensor::word({0, 1}), odd) == Tensor::word({0, 1}) + Tensor::word({1, 0}));
    CHECK(right_action(w_element(1), gen(0), odd) == gen(0));
    Tensor w3 = right_action(w_element(3), Tensor::word({0, 1, 2}), odd);
    Tensor hand = Tensor::word({0, 1, 2}) + Tensor::word({1, 0, 2}) - Tensor::word({2, 0, 1}) - Tensor::word({2, 1, 0});
    CHECK(w3 == hand);
    for (int deg : {0, 1, 2, 3}) {
      auto g = GradedGenerators::uniform(3, deg);
      for (int n = 1; n <= 5; ++n)
        for (const auto& w : all_words(3, n)) REQUIRE(right_action(w_element(n), Tensor::word(w), g) == left_normed(w, g));
    }
    // Mixed parities.
    GradedGenerators mixed({"a", "b", "c"}, {1, 2, 0});
    for (int n = 1; n <= 4; ++n)
      for (const auto& w : all_words(3, n)) REQUIRE(right_action(w_element(n), Tensor::word(w), mixed) == left_normed(w, mixed));
  }

  TEST_CASE("s_n realizes the ungraded left-normed commutator") {
    auto g = GradedGenerators::uniform(3, 0);
    for (int n = 1; n <= 5; ++n)
      for (const auto& w : all_words(3, n))
        REQUIRE(fincat::realize(fincat::s_element(n).as_morphism(), {0, 0, 0})(Tensor::word(w)) == left_normed(w, g));
  }

  TEST_CASE("bracket via B_{p,q}: antisymmetry, Jacobi, closure") {
    std::mt19937 rng(5);
    for (int deg : {1, 0}) {
      auto g = GradedGenerators::uniform(2, deg);
      for (int p = 1; p <= 4; ++p)
        for (int q = 1; p + q <= 5; ++q) {
          auto a = random_lie(rng, p, g), b = random_lie(rng, q, g);
          auto ab = bracket_via_B(a, b, g);
          CHECK(ab == bracket(a, b, g));
          int sgn = (deg * p * deg * q) % 2 ? 1 : -1;
          CHECK(ab == bracket_via_B(b, a, g) * Rational(sgn));
          CHECK(in_lie(ab, g));
          for (int r = 1; p + q + r <= 5; ++r) {
            auto c = random_lie(rng, r, g);
            int da = deg * p, db = deg * q, dc = deg * r;
            auto term = [&](const TensorElement& x, const TensorElement& y, const TensorElement& z, int dx, int dz) {
              return bracket_via_B(x, bracket_via_B(y, z, g), g) * Rational((dx * dz) % 2 ? -1 : 1);
            };
            CHECK((term(a, b, c, da, dc) + term(b, c, a, db, da) + term(c, a, b, dc, db)).is_zero());
          }
        }
    }
  }

  TEST_CASE("stacked-rank check: brackets of Lie elements stay Lie") {
    auto g = GradedGenerators::uniform(2, 1);
    for (int p = 1; p <= 4; ++p)
      for (int q = 1; p + q <= 5; ++q) {
        auto Wpq = action_matrix(w_element(p + q), g);
        EchelonBasis img(Wpq.rows());
        for (const auto& c : Wpq.columns()) img.insert(c);
        size_t before = img.rank();
        auto B = fincat::realize(bracket_element(p, q).as_morphism(), g.action_degrees());
        for (const auto& u : all_words(2, p))
          for (const auto& v : all_words(2, q)) {
            auto x = concat(right_action(w_element(p), Tensor::word(u), g), right_action(w_element(q), Tensor::word(v), g));
            img.insert(to_vector(B(x), 2));
          }
        CHECK(img.rank() == before);
      }
  }

  TEST_CASE("psi lands on brackets") {
    auto g = GradedGenerators::uniform(2, 1);
    for (int p = 1; p <= 3; ++p)
      for (int q = 1; p + q <= 4; ++q)
        for (const auto& u : all_words(2, p))
          for (const auto& v : all_words(2, q)) {
            Word uv = u;
            uv.insert(uv.end(), v.begin(), v.end());
            auto lhs = right_action(w_element(p + q), right_action(fincat::psi(p, q), Tensor::word(uv), g), g);
            auto rhs = bracket(right_action(w_element(p), Tensor::word(u), g), right_action(w_element(q), Tensor::word(v), g), g);
            CHECK(lhs == rhs);
          }
  }

  TEST_CASE("derivation d") {
    auto g = GradedGenerators::uniform(2, 1);
    CHECK(derivation_d(gen(0), g) == Tensor::word({0, 0}));
    CHECK(derivation_d(Tensor::word({0, 1}), g) == Tensor::word({0, 0, 1}) - Tensor::word({0, 1, 1}));
    for (int n = 1; n <= 5; ++n)
      for (const auto& w : all_words(2, n)) CHECK(derivation_d(derivation_d(Tensor::word(w), g), g).is_zero());
    std::mt19937 rng(9);
    for (int n = 1; n <= 4; ++n)
      for (int k = 0; k < 4; ++k) CHECK(in_lie(derivation_d(random_lie(rng, n, g), g), g));
    CHECK_THROWS(derivation_d(gen(0), GradedGenerators::uniform(2, 2)));
  }

  TEST_CASE("degree derivation D and Quillen's rho") {
    auto g = GradedGenerators::uniform(2, 1);
    auto x = right_action(w_element(2), Tensor::word({0, 1}), g);
    CHECK(degree_derivation_D(x, g) == x * Rational(2));
    CHECK_THROWS(degree_derivation_D(Tensor::word({0, 1}), g));
    std::mt19937 rng(13);
    for (int n = 1; n <= 5; ++n) {
      auto l = random_lie(rng, n, g);
      CHECK(degree_derivation_D(l, g) == right_action(w_element(n), l, g));
    }
    for (int p = 1; p <= 3; ++p)
      for (int q = 1; p + q <= 5; ++q) {
        auto a = random_lie(rng, p, g), b = random_lie(rng, q, g);
        auto Dab = degree_derivation_D(bracket(a, b, g), g);
        CHECK(Dab == bracket(degree_derivation_D(a, g), b, g) + bracket(a, degree_derivation_D(b, g), g));
      }
    CHECK(quillen_rho(gen(1), g) == gen(1));
    for (int deg : {1, 0}) {
      auto gg = GradedGenerators::uniform(2, deg);
      for (int n = 1; n <= 4; ++n)
        for (const auto& w : all_words(2, n)) {
          auto l = right_action(w_element(n), Tensor::word(w), gg);
          CHECK(quillen_rho(l, gg) == l);
          CHECK(right_action(w_element(n), l, gg) * Rational(1, n) == l);
        }
    }
  }

  TEST_CASE("lie_rank: two computations, frozen values, necklace oracle") {
    CHECK(lie_rank(2, 2, true) == 3);
    CHECK(lie_rank(2, 1, false) == 0);
    CHECK(lie_rank(2, 1, true) == 1);
    CHECK(lie_rank(3, 1, true) == 0);
    for (int n = 1; n <= 5; ++n)
      for (int m = 1; m <= 3; ++m) {
        CHECK(long(lie_rank(n, m, false)) == witt(n, m));
        CHECK(lyndon_count(n, m) == witt(n, m));
      }
    // Odd generators: values produced once by the matrix oracle.
    const size_t frozen[5][3] = {{1, 2, 3}, {1, 3, 6}, {0, 2, 8}, {0, 3, 18}, {0, 6, 48}};
    for (int n = 1; n <= 5; ++n)
      for (int m = 1; m <= 3; ++m) CHECK(lie_rank(n, m, true) == frozen[n - 1][m - 1]);
  }
}
