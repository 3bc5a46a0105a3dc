#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "cobarlie/fincat.hpp"
#include "cobarlie/homalg.hpp"
#include "cobarlie/simplicial.hpp"

namespace cobarlie::bar {

// Finite-dimensional connected commutative d.g. algebra, cohomologically
// graded. Basis element 0 is the unit and spans A^0; the augmentation is the
// projection onto it, so IA is spanned by the remaining basis elements.
struct CDGAlgebra {
  std::string name;
  std::vector<std::string> names;
  std::vector<int> degree;
  std::vector<std::vector<SparseVec>> mult;  // mult[i][j] = e_i e_j
  std::vector<SparseVec> d;                  // d[i] = d(e_i)

  size_t dim() const { return names.size(); }
  SparseVec multiply(const SparseVec& a, const SparseVec& b) const;
  SparseVec differential(const SparseVec& a) const;
  // Smallest degree of IA (0 when IA = 0).
  int connectivity() const;
  // Throws InvalidInput naming the first violated law.
  void validate() const;
};

CDGAlgebra trivial_algebra();
// Cohomology ring of a wedge/product expression in spheres, e.g. "S2 v S2", "S2 x S3".
CDGAlgebra cohomology_algebra(const std::string& expr);
// A ⊕ Q u ⊕ Q du with |u| = k and all products with u, du zero: quasi-isomorphic to A.
CDGAlgebra acyclic_extension(const CDGAlgebra& A, int k);

// {"name", "generators":[{"name","degree"}], "relations":[{"left","right","result":{name:coef}}],
//  "differential":[{"source","result":{name:coef}}]}. Generators are a basis of IA;
// unlisted products are zero and the reversed order follows by graded commutativity.
CDGAlgebra parse_cdga(const std::string& text);
// "trivial", "H(<expr>)", or a path ending in ".json".
CDGAlgebra load_cdga(const std::string& spec);
std::string to_json(const CDGAlgebra& A);

// A bar word [a_1|...|a_s] as indices into the basis of A (all nonzero).
using BarWord = std::vector<uint32_t>;

// The truncated bar construction: words of length <= N and internal degree
// <= t_max, graded by total degree k = t - s. Stored as a homalg complex in
// degree -k so that the cohomological differential lowers the index.
struct BarComplexData {
  CDGAlgebra A;
  int N = 0, t_max = 0;
  int k_valid = 0;  // cohomology is exact through this total degree
  std::map<int, std::vector<BarWord>> basis;
  std::map<BarWord, uint32_t> index;
  std::map<int, SparseMatrix> d_internal, d_external;  // k -> matrix into k + 1
  homalg::ChainComplex complex;
  bool functorial_agrees = false;

  int internal_degree(const BarWord& w) const;
  int total_degree(const BarWord& w) const;
  SparseVec unit(const BarWord& w) const;  // basis vector, throws if outside the truncation
  size_t cohomology_rank(int k) const;
};

// Classical differential on a single word, as (k+1)-vector.
SparseVec bar_differential(const BarComplexData& B, const BarWord& w);

// Builds both the classical and the D-functorial complexes and compares them;
// throws VerificationFailure on disagreement or when d_B^2 != 0.
BarComplexData bar_complex(const CDGAlgebra& A, int N, int t_max);

// A^{⊗m} -> A^{⊗n} for a surjection f : [m] -> [n]: slot k receives the
// product of the factors in the fiber of k, with the Koszul sign of the
// regrouping. Returns (word, coefficient) pairs with words over the basis of A.
std::vector<std::pair<BarWord, Rational>> functor_map(const CDGAlgebra& A, const fincat::SetMap& f, const BarWord& w);

// Signed shuffles of two words; Koszul signs on the suspended degrees.
std::vector<std::pair<BarWord, int>> shuffle_words(const CDGAlgebra& A, const BarWord& u, const BarWord& v);
// Shuffle product of vectors of total degrees k1 and k2; words beyond the truncation are dropped.
SparseVec shuffle_product(const BarComplexData& B, int k1, const SparseVec& u, int k2, const SparseVec& v);

// Increasing filtration by word length.
homalg::FilteredComplex bar_filtration(const BarComplexData& B);

struct QBar;
QBar qbar(const CDGAlgebra& A, int N, int t_max);

// Indecomposables J/J^2, J = words of positive length, J^2 = image of the shuffle product.
struct QBar {
  BarComplexData bar;
  int k_valid = 0;
  homalg::ChainComplex complex;                 // degree -k
  std::map<int, std::vector<BarWord>> basis;    // complement representatives
  std::map<std::pair<int, int>, size_t> dim;    // (n, t) -> dim QBar
  std::map<std::pair<int, int>, size_t> dual_projector_rank;  // (n, t) -> rank of w_n^∨
  bool dual_projector_kills_shuffles = false;
  // Cobracket (1 - τ)(π ⊗ π)Δ̄ into QBar ⊗ QBar.
  homalg::ChainComplex tensor;
  homalg::ChainMap cobracket;

  // QBar coordinates (degree k) of a bar vector of total degree k.
  SparseVec project(int k, const SparseVec& v) const;
  size_t cohomology_rank(int k) const;
  // Rank of the map induced by the cobracket on H^k.
  size_t cobracket_rank(int k) const;

  std::map<int, std::vector<std::pair<int, int>>> bidegree;  // k -> (n, t) of each basis element

 private:
  friend QBar qbar(const CDGAlgebra& A, int N, int t_max);
  std::map<int, EchelonBasis> reducer_;
  std::map<int, uint32_t> shuffle_count_;
};

// Throws VerificationFailure when the shuffle cokernel and the dual projector image disagree.
QBar qbar(const CDGAlgebra& A, int N, int t_max);

struct Comparison {
  std::string space, algebra;
  int N = 0, T = 0, q_max = 0, t_max = 0;
  std::map<int, size_t> bar_ranks, cobar_ranks;
  std::map<int, size_t> cobracket_ranks, bracket_ranks;  // k >= 2
  bool ranks_match = false;
  bool brackets_match = false;
};

// qbar ranks against homotopy ranks of P^N for t <= T, with q_max = t_max = T + N + 1.
Comparison compare(const simplicial::SimplicialSpace& X, const CDGAlgebra& A, int N, int T);

}  // namespace cobarlie::bar
