#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cobarlie/fincat.hpp"
#include "cobarlie/homalg.hpp"

namespace cobarlie::simplicial {

// A q-simplex of a space: a nondegenerate cell together with a monotone
// surjection η : [q] -> [dim cell], stored as its jump mask (bit j set, for
// 1 <= j <= q, iff η(j) = η(j-1) + 1). The dimension q is carried by context.
struct Simplex {
  uint32_t cell = 0;
  uint32_t mask = 0;
  friend bool operator==(const Simplex&, const Simplex&) = default;
};

// Dimensions are limited to 30 so masks fit in 32 bits.
inline constexpr int kMaxDim = 30;
inline uint32_t full_mask(int q) { return (1u << (q + 1)) - 2u; }

class SimplicialSpace {
 public:
  struct Cell {
    std::string name;
    int dim = 0;
    std::vector<Simplex> faces;  // d_0 .. d_dim, each a (dim-1)-simplex
    int left = -1, right = -1;   // components when built by product()
  };

  SimplicialSpace() = default;
  // Validates faces, the simplicial identities and reducedness. Cell 0 must be
  // the basepoint.
  explicit SimplicialSpace(std::vector<Cell> cells, std::string name = "");

  const std::vector<Cell>& cells() const { return cells_; }
  const Cell& cell(uint32_t c) const { return cells_.at(c); }
  const std::string& name() const { return name_; }
  int max_dim() const;
  // Smallest positive cell dimension (0 for the point).
  int connectivity() const;

  Simplex face(Simplex s, int q, int i) const;        // d_i of a q-simplex
  Simplex degeneracy(Simplex s, int q, int j) const;  // s_j of a q-simplex
  // All q-simplices, degenerate ones included: Σ_cells C(q, dim).
  size_t count_simplices(int q) const;

 private:
  std::vector<Cell> cells_;
  std::string name_;
};

SimplicialSpace point();
SimplicialSpace sphere(int k);
SimplicialSpace wedge(const SimplicialSpace& X, const SimplicialSpace& Y);
SimplicialSpace product(const SimplicialSpace& X, const SimplicialSpace& Y);

// "S2", "S2 v S3", "S2 x S2", "pt", with parentheses; x binds tighter than v.
SimplicialSpace parse_expression(const std::string& expr);
// {"vertices":1,"cells":[{"id","dim","faces":[{"degeneracies":[...],"cell"}]}]}
// The basepoint is referred to as "*". A degeneracy word [j1,...,jr] on z
// denotes s_{j1}...s_{jr} z.
SimplicialSpace parse_json(const std::string& text);
// Expression, or a path to a JSON file when the argument ends in ".json".
SimplicialSpace load_space(const std::string& spec);
std::string to_json(const SimplicialSpace& X);

// Normalized chains of X through degree q_max; basis = cells.
homalg::ChainComplex normalized_chains(const SimplicialSpace& X, int q_max);

using Tuple = std::vector<Simplex>;

struct TupleHash {
  size_t operator()(const Tuple& t) const;
};

// (x_1..x_n) ↦ (x_{f(1)}, ..., x_{f(m)}) for f : [m] -> [n].
Tuple induced_map(const fincat::SetMap& f, const Tuple& x);

// Normalized chains of X^n relative to the fat wedge, through degree q_max.
// Basis in degree q: jointly nondegenerate n-tuples of q-simplices with no
// basepoint coordinate, in a fixed enumeration order.
class PowerChains {
 public:
  // budget caps the number of basis elements (0: unlimited).
  PowerChains(const SimplicialSpace& X, int n, int q_max, size_t budget = 0);

  const SimplicialSpace& space() const { return X_; }
  int n() const { return n_; }
  int q_max() const { return q_max_; }
  const homalg::ChainComplex& complex() const { return C_; }
  const std::vector<Tuple>& basis(int q) const;
  // Index of a basis tuple in degree q, or -1 if the tuple is degenerate,
  // in the fat wedge, or unknown.
  int64_t index(int q, const Tuple& t) const;
  // Face d_i of a tuple; returns false when the face is zero in relative chains.
  bool face(const Tuple& t, int q, int i, Tuple& out) const;
  std::string label(int q, const Tuple& t) const;

 private:
  SimplicialSpace X_;
  int n_, q_max_;
  std::vector<std::vector<Tuple>> basis_;
  std::vector<std::unordered_map<Tuple, uint32_t, TupleHash>> index_;
  homalg::ChainComplex C_;
};

// Chain map F(f) : C(X^n, fat) -> C(X^m, fat) for a surjection f : [m] -> [n];
// src is the n-th power, dst the m-th. Coordinates move without signs.
homalg::ChainMap induced_chain_map(const fincat::SetMap& f, const PowerChains& src, const PowerChains& dst);
homalg::ChainMap induced_chain_map(const fincat::DMorphism& f, const PowerChains& src, const PowerChains& dst);
// F(f) applied to one vector of src in degree q, without building the matrix.
SparseVec apply_induced(const fincat::DMorphism& f, const PowerChains& src, const PowerChains& dst, int q,
                        const SparseVec& v);

// Shuffle of a p-tuple and a q-tuple: signed sum of (a+b)-tuples.
std::vector<std::pair<Tuple, int>> shuffle_tuples(const Tuple& x, int a, const Tuple& y, int b);

// The Eilenberg-Zilber shuffle C(X^p) ⊗ C(X^q) -> C(X^{p+q}) on relative
// chains, as a chain map out of homalg::tensor_product(A, B, 0, hi).
struct Shuffle {
  homalg::ChainComplex tensor;
  homalg::TensorLayout layout;
  homalg::ChainMap map;
};
Shuffle ez_shuffle(const PowerChains& A, const PowerChains& B, const PowerChains& target);
// Image of a single pair of basis elements.
SparseVec ez_pair(const PowerChains& A, int a, uint32_t i, const PowerChains& B, int b, uint32_t j,
                  const PowerChains& target);

}  // namespace cobarlie::simplicial
