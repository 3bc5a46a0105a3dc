#pragma once

#include <map>
#include <set>
#include <memory>
#include <string>
#include <vector>

#include "cobarlie/homalg.hpp"
#include "cobarlie/simplicial.hpp"

namespace cobarlie::dgl {

using simplicial::PowerChains;
using simplicial::SimplicialSpace;

// Worker cap from COBARLIE_THREADS (default: hardware concurrency).
unsigned worker_count();

// Relative chains C(X^n, fat wedge) for n = 0..n_max, built on demand.
class PowerTower {
 public:
  PowerTower(SimplicialSpace X, int q_max, size_t budget = 0);
  const SimplicialSpace& space() const { return X_; }
  int q_max() const { return q_max_; }
  const PowerChains& at(int n);
  // Already built columns only.
  const PowerChains& at(int n) const;
  // Builds the columns lo..hi concurrently.
  void prepare(int lo, int hi);

 private:
  SimplicialSpace X_;
  int q_max_;
  size_t budget_;
  std::map<int, std::unique_ptr<PowerChains>> cols_;
};

// The cobar d.g.a. R^N: columns C(X^n, fat), n = 1..N, with external maps F(f_n).
struct CobarR {
  std::string space;
  int N = 0, q_max = 0;
  std::shared_ptr<PowerTower> tower;
  homalg::BigradedComplex bigraded;
  homalg::TotalComplex total;
};

CobarR build_R(const SimplicialSpace& X, int N, int q_max, size_t budget = 0);

// Checks F(f_{p+q})∘N(p,q) = N(p+1,q)∘(F(f_p)⊗1) + (-1)^p N(p,q+1)∘(1⊗F(f_q))
// on every pair of basis chains of internal degree a + b <= tower.q_max().
bool leibniz_square(PowerTower& tower, int p, int q);

inline constexpr size_t kFullCheckCells = 200000;
inline constexpr size_t kSampleCells = 20000;

struct Certificates {
  std::map<int, bool> closure;                      // n -> F(f_n)F(w_n) = F(w_{n+1})F(φ_n)
  std::map<std::pair<int, int>, bool> bracket;      // (p,q) -> ψ square on chains
  bool total_square_zero = false;
  // Columns whose closure/ψ checks ran on a stride sample of basis chains
  // (more than kFullCheckCells cells in some degree) instead of all of them.
  std::set<int> sampled;
  bool all() const;
};

// The d.g. Lie algebra P^N: per column the image of e_n = F(w_n)/n.
struct CobarLieComplex {
  std::string space;
  int N = 0, q_max = 0;
  int connectivity = 0;
  std::shared_ptr<PowerTower> tower;
  std::map<int, homalg::Summand> summands;  // n -> image of e_n
  homalg::BigradedComplex bigraded;
  homalg::TotalComplex total;
  Certificates certificates;

  // Largest T for which H_t(P^N) = H_t(P) for all t <= T.
  int stable_top() const;
};

// Throws VerificationFailure when a closure certificate fails.
CobarLieComplex build_P(const SimplicialSpace& X, int N, int q_max, size_t budget = 0);

// Bracket of two total chains of degrees s and t (vectors in total.complex),
// [x, y] = μ(x, y) - (-1)^{st} μ(y, x) with μ = (-1)^{p b} N on a column-p
// chain x and a column-q chain y of internal degree b. Terms beyond column N
// are dropped.
SparseVec bracket_chains(const CobarLieComplex& P, int s, const SparseVec& x, int t, const SparseVec& y);

struct HomotopyReport {
  std::string space;
  int N = 0, q_max = 0, T = 0;
  std::map<int, size_t> ranks;                         // t -> rank H_t(P^N)
  std::map<int, std::vector<SparseVec>> representatives;  // total-complex cycles
};

// Refuses T outside the window 1 <= T, q_max >= T + N + 1, T <= stable_top().
// Without representatives only the ranks are filled in.
HomotopyReport homotopy_ranks(const CobarLieComplex& P, int T, bool representatives = true);

struct BracketEntry {
  int s = 0, t = 0;
  // Row i * rank_t + j holds the coordinates of [g_i, g_j] in H_{s+t}.
  std::vector<std::vector<Rational>> matrix;
  bool representative_independent = true;
};

// Pairing H_s × H_t -> H_{s+t} on the report's representatives. With probes > 0
// the representatives are perturbed by random boundaries and the result compared.
BracketEntry whitehead_bracket(const CobarLieComplex& P, const HomotopyReport& R, int s, int t,
                               unsigned seed = 0, int probes = 0);

// All entries with 1 <= s <= t, s + t <= T.
std::vector<BracketEntry> bracket_table(const CobarLieComplex& P, const HomotopyReport& R,
                                        unsigned seed = 0, int probes = 1);

// Readable form of a total-complex vector: column, internal degree, tuple labels.
std::string describe(const CobarLieComplex& P, int t, const SparseVec& v);

}  // namespace cobarlie::dgl
