#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "cobarlie/linalg.hpp"

namespace cobarlie::homalg {

// Homologically graded complex C_lo .. C_hi over Q, with d(q) : C_q -> C_{q-1}.
// Degrees outside the range are zero. valid_top is the highest degree whose
// homology is trustworthy (lower than hi for truncated complexes).
class ChainComplex {
 public:
  ChainComplex() = default;
  ChainComplex(int lo, std::vector<size_t> dims);

  int lo() const { return lo_; }
  int hi() const { return lo_ + static_cast<int>(dims_.size()) - 1; }
  size_t dim(int q) const;
  size_t total_dim() const;
  const SparseMatrix& d(int q) const;
  void set_d(int q, SparseMatrix m);

  int valid_top() const { return valid_top_; }
  void set_valid_top(int t) { valid_top_ = t; }

  std::vector<std::vector<std::string>> labels;  // optional, per degree from lo
  const std::string& label(int q, size_t i) const;

  // True iff d(q-1)d(q) = 0 everywhere; *bad receives the first failing q.
  bool is_complex(int* bad = nullptr) const;

 private:
  int lo_ = 0;
  int valid_top_ = -1;
  std::vector<size_t> dims_;
  std::vector<SparseMatrix> d_;
};

// A family of matrices f(q) : C_q -> D_{q + shift}.
struct ChainMap {
  int shift = 0;
  std::map<int, SparseMatrix> m;
  const SparseMatrix& at(int q) const { return m.at(q); }
  bool has(int q) const { return m.count(q) != 0; }
};

ChainMap identity_map(const ChainComplex& C);
ChainMap compose(const ChainMap& f, const ChainMap& g);  // f∘g
// Checks D.d ∘ f = f ∘ C.d in every degree where both sides are defined.
bool is_chain_map(const ChainMap& f, const ChainComplex& C, const ChainComplex& D);

size_t boundary_rank(const ChainComplex& C, int q);
// Rank of H_q; throws InvalidInput if q is outside the trustworthy range.
size_t homology_rank(const ChainComplex& C, int q);
std::map<int, size_t> homology_ranks(const ChainComplex& C);

// Basis of H_q together with a coordinate map for cycles.
class HomologyBasis {
 public:
  HomologyBasis(const ChainComplex& C, int q);
  int degree() const { return q_; }
  size_t rank() const { return reps_.size(); }
  const std::vector<SparseVec>& representatives() const { return reps_; }
  bool is_cycle(const SparseVec& z) const;
  bool is_boundary(const SparseVec& z) const;
  // Coordinates of the class of z in the representative basis.
  std::vector<Rational> coordinates(const SparseVec& z) const;

 private:
  int q_;
  const SparseMatrix* d_;
  size_t nb_ = 0;
  EchelonBasis red_;
  std::vector<SparseVec> reps_;
};

// Rank of H_q(f) : H_q(C) -> H_q(D) for a degree-preserving chain map.
size_t induced_rank(const ChainMap& f, const ChainComplex& C, const ChainComplex& D, int q);
// H_q(f) is an isomorphism for every q in [lo, hi].
bool is_quasi_iso(const ChainMap& f, const ChainComplex& C, const ChainComplex& D, int lo, int hi);

// Column space of an idempotent chain map, with its induced boundary.
struct Summand {
  ChainComplex complex;
  ChainMap inclusion;   // im -> C
  ChainMap projection;  // C -> im
};
Summand image_summand(const ChainComplex& C, const ChainMap& e);

ChainComplex tensor_product(const ChainComplex& A, const ChainComplex& B, int lo, int hi);
// Index of the basis element a⊗b inside (A⊗B)_{p+q}.
struct TensorLayout {
  std::map<int, std::map<int, size_t>> offset;  // offset[t][p]
};
TensorLayout tensor_layout(const ChainComplex& A, const ChainComplex& B, int lo, int hi);

// Columns indexed by external degree n, each an internal chain complex, with
// external maps column n -> column n+1 preserving the internal degree q.
struct BigradedComplex {
  std::map<int, ChainComplex> columns;
  std::map<int, ChainMap> external;
};

struct TotalComplex {
  ChainComplex complex;
  // offset[t][n]: where the block (n, q = t + n) starts inside degree t.
  std::map<int, std::map<int, size_t>> offset;
};

// Total degree t = q - n, differential internal + (-1)^q external. Verifies ∂∂ = 0.
TotalComplex total_complex(const BigradedComplex& B, int t_lo, int t_hi);

// Increasing filtration by coordinate subcomplexes: F[p][q] lists the basis
// indices of A_q lying in F_p. Levels below the first key are zero; the last
// level must be everything.
struct FilteredComplex {
  ChainComplex A;
  std::map<int, std::map<int, std::vector<uint32_t>>> F;
  std::vector<uint32_t> level(int p, int q) const;
};

ChainComplex associated_graded(const FilteredComplex& F, int p);

struct LemmaPQ {
  std::map<int, size_t> dim_P, dim_Q, dim_PQ;
  ChainComplex P, PQ;
  std::map<int, size_t> H_A, H_P, H_PQ, H_gr;  // H_gr[n] = dim H_n(gr_n A)
  bool P_to_A_quasi_iso = false;
  bool P_to_PQ_quasi_iso = false;
  bool PQ_matches_gr = false;     // dim (P/Q)_n = dim H_n(gr_n A)
  bool truncations_hold = false;  // gr_r(A/P) = τ_{<r} gr_r A, gr_r(Q) = τ_{>r} gr_r A
};

// Checks hypotheses (i)-(iv) structurally and (v) by rank on [lo, hi];
// throws InvalidInput naming the offending (p, q).
LemmaPQ lemma_PQ(const FilteredComplex& F, int lo, int hi);

}  // namespace cobarlie::homalg
