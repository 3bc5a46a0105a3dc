#include "doctest.h"

#include <random>

#include "cobarlie/linalg.hpp"
#include "cobarlie/rational.hpp"

using cobarlie::Rational;

TEST_SUITE("rational") {
  TEST_CASE("small arithmetic is exact and canonical") {
    Rational a(1, 3), b(1, 6);
    CHECK((a + b) == Rational(1, 2));
    CHECK((a - b).str() == "1/6");
    CHECK((a * b) == Rational(1, 18));
    CHECK((a / b) == Rational(2));
    CHECK(Rational(4, -6).str() == "-2/3");
    CHECK(Rational::parse("-10/4") == Rational(-5, 2));
    CHECK(Rational::parse("7").is_integer());
  }

  TEST_CASE("promotion to big values and demotion back") {
    Rational big(1);
    for (int i = 0; i < 5; ++i) big *= Rational(1000000007);
    CHECK(big.str() == "1000000035000000490000003430000012005000016807");
    Rational back = big / big;
    CHECK(back.is_one());
    Rational frac = Rational(1) / big;
    CHECK((frac * big).is_one());
    Rational sum = big + Rational(-1) * big;
    CHECK(sum.is_zero());
    Rational copy = big;
    CHECK(copy == big);
    CHECK(Rational(3) < big);
  }

  TEST_CASE("agrees with GMP on random sequences") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<long long> dist(-(1LL << 40), 1LL << 40);
    Rational x(1);
    mpq_class y(1);
    for (int i = 0; i < 400; ++i) {
      long long n = dist(rng), d = dist(rng);
      if (d == 0) d = 1;
      Rational r(n, d);
      mpq_class q{mpz_class(static_cast<long>(n)), mpz_class(static_cast<long>(d))};
      q.canonicalize();
      switch (i % 4) {
        case 0: x += r; y += q; break;
        case 1: x *= r; y *= q; break;
        case 2: x -= r; y -= q; break;
        default: if (n != 0) { x /= r; y /= q; } break;
      }
      REQUIRE(x.to_mpq() == y);
    }
  }
}

TEST_SUITE("homalg") {
  TEST_CASE("sparse rank agrees with fraction-free elimination") {
    using namespace cobarlie;
    std::mt19937 rng(11);
    for (int trial = 0; trial < 30; ++trial) {
      size_t R = 3 + rng() % 8, C = 3 + rng() % 8;
      std::vector<SparseVec> cols(C);
      for (size_t j = 0; j < C; ++j) {
        std::vector<Entry> e;
        for (size_t i = 0; i < R; ++i)
          if (rng() % 3 == 0) e.push_back({uint32_t(i), Rational(int(rng() % 7) - 3, 1 + rng() % 4)});
        cols[j] = from_pairs(e);
      }
      if (trial % 3 == 0 && C > 2) cols[2] = add(cols[0], cols[1]);
      SparseMatrix m = SparseMatrix::from_columns(R, cols);
      size_t r = rank(m);
      CHECK(r == bareiss_rank(m));
      std::vector<uint32_t> perm(R);
      for (size_t i = 0; i < R; ++i) perm[i] = uint32_t(R - 1 - i);
      CHECK(rank(m.permute_rows(perm)) == r);
      auto ker = kernel_basis(m);
      CHECK(ker.size() + r == C);
      for (const auto& k : ker) CHECK(m.apply(k).empty());
    }
  }
}
