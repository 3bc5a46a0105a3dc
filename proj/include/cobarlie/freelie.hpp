#pragma once

#include <string>
#include <vector>

#include "cobarlie/fincat.hpp"
#include "cobarlie/linalg.hpp"

namespace cobarlie::freelie {

using fincat::GroupRingElement;
using fincat::Tensor;
using fincat::Word;
using TensorElement = fincat::Tensor;

// Generators of a free graded Lie algebra, with their Lie degrees.
struct GradedGenerators {
  std::vector<std::string> names;
  std::vector<int> degree;

  GradedGenerators() = default;
  GradedGenerators(std::vector<std::string> names, std::vector<int> degree);
  static GradedGenerators uniform(int m, int deg);

  size_t size() const { return names.size(); }
  int word_degree(const Word& w) const;
  // Degrees governing the Koszul signs of the symmetric-group action: the
  // suspension of the Lie grading, so that w_n acts as the left-normed bracket.
  std::vector<int> action_degrees() const;
};

// Letter i of gens as a weight-1 tensor.
TensorElement gen(size_t i);

TensorElement right_action(const GroupRingElement& g, const TensorElement& t, const GradedGenerators& gens);
// Graded commutator [a,b] = ab - (-1)^{|a||b|} ba on homogeneous elements.
TensorElement bracket(const TensorElement& a, const TensorElement& b, const GradedGenerators& gens);
// [a,b] computed as the right action of B_{p,q} on a⊗b.
TensorElement bracket_via_B(const TensorElement& a, const TensorElement& b, const GradedGenerators& gens);
// [[…[x1,x2]…],xn] for a word.
TensorElement left_normed(const Word& w, const GradedGenerators& gens);

TensorElement derivation_d(const TensorElement& t, const GradedGenerators& gens);
TensorElement degree_derivation_D(const TensorElement& t, const GradedGenerators& gens);
TensorElement quillen_rho(const TensorElement& t, const GradedGenerators& gens);

// All words of length n over m letters, in lexicographic order.
std::vector<Word> all_words(int m, int n);
// Matrix of t ↦ right_action(g, t) on the weight-n tensor space.
SparseMatrix action_matrix(const GroupRingElement& g, const GradedGenerators& gens);
SparseVec to_vector(const TensorElement& t, int m);
TensorElement from_vector(const SparseVec& v, int m, int n);
// Membership in L_n = image of right_action(w_n, ·), decided by rank.
bool in_lie(const TensorElement& t, const GradedGenerators& gens);

struct LieRank {
  size_t by_rank;
  Rational by_trace;
};
LieRank lie_rank_both(int n, const GradedGenerators& gens);
// Dimension of L_n on m generators of the given parity; aborts on
// disagreement between the rank and the trace computations.
size_t lie_rank(int n, int m, bool odd);

}  // namespace cobarlie::freelie
