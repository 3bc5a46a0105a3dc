#include "cobarlie/freelie.hpp"

#include <set>

#include "cobarlie/errors.hpp"

namespace cobarlie::freelie {

using fincat::realize;

GradedGenerators::GradedGenerators(std::vector<std::string> n, std::vector<int> d)
    : names(std::move(n)), degree(std::move(d)) {
  if (names.size() != degree.size()) throw InvalidInput("generator names and degrees differ in length");
  std::set<std::string> seen(names.begin(), names.end());
  if (seen.size() != names.size()) throw InvalidInput("generator names must be distinct");
  for (int x : degree)
    if (x < 0) throw InvalidInput("generator degrees must be nonnegative");
}

GradedGenerators GradedGenerators::uniform(int m, int deg) {
  std::vector<std::string> n;
  for (int i = 1; i <= m; ++i) n.push_back("v" + std::to_string(i));
  return GradedGenerators(std::move(n), std::vector<int>(m, deg));
}

int GradedGenerators::word_degree(const Word& w) const {
  int s = 0;
  for (uint8_t l : w) s += degree.at(l);
  return s;
}

std::vector<int> GradedGenerators::action_degrees() const {
  std::vector<int> d = degree;
  for (int& x : d) ++x;
  return d;
}

TensorElement gen(size_t i) { return Tensor::word(Word{static_cast<uint8_t>(i)}); }

namespace {

// Sign of s^{⊗n}: (sV)^{⊗n} -> V^{⊗n} on a word. Conjugating the suspended
// action by it matches the Lie-graded signs when generator parities are mixed.
Tensor decalage(const Tensor& t, const GradedGenerators& gens) {
  Tensor r;
  r.weight = t.weight;
  for (const auto& [w, c] : t.terms) {
    int e = 0;
    for (size_t i = 0; i < w.size(); ++i) e += static_cast<int>(w.size() - 1 - i) * gens.degree.at(w[i]);
    r.add(w, e % 2 ? -c : c);
  }
  return r;
}

}  // namespace

TensorElement right_action(const GroupRingElement& g, const TensorElement& t, const GradedGenerators& gens) {
  if (!t.terms.empty() && t.weight != g.n()) throw InvalidInput("group ring size differs from tensor weight");
  return decalage(realize(g.as_morphism(), gens.action_degrees())(decalage(t, gens)), gens);
}

namespace {

int homogeneous_degree(const TensorElement& t, const GradedGenerators& gens) {
  if (t.terms.empty()) return 0;
  int d = gens.word_degree(t.terms.begin()->first);
  for (const auto& [w, c] : t.terms)
    if (gens.word_degree(w) % 2 != d % 2) throw InvalidInput("bracket of an inhomogeneous element");
  return d;
}

}  // namespace

TensorElement bracket(const TensorElement& a, const TensorElement& b, const GradedGenerators& gens) {
  int da = homogeneous_degree(a, gens), db = homogeneous_degree(b, gens);
  Rational s((da * db) % 2 ? 1 : -1);
  return concat(a, b) + concat(b, a) * s;
}

TensorElement bracket_via_B(const TensorElement& a, const TensorElement& b, const GradedGenerators& gens) {
  if (a.terms.empty() || b.terms.empty()) return Tensor{a.weight + b.weight, {}};
  return right_action(fincat::bracket_element(a.weight, b.weight), concat(a, b), gens);
}

TensorElement left_normed(const Word& w, const GradedGenerators& gens) {
  TensorElement acc = gen(w.at(0));
  for (size_t k = 1; k < w.size(); ++k) acc = bracket(acc, gen(w[k]), gens);
  return acc;
}

TensorElement derivation_d(const TensorElement& t, const GradedGenerators& gens) {
  for (int d : gens.degree)
    if (d != 1) throw InvalidInput("derivation d is defined for degree-1 generators");
  if (t.terms.empty()) return Tensor{t.weight + 1, {}};
  return realize(fincat::cobar_differential(t.weight), gens.action_degrees())(t);
}

TensorElement degree_derivation_D(const TensorElement& t, const GradedGenerators& gens) {
  if (!in_lie(t, gens)) throw InvalidInput("degree derivation D applied outside L_n");
  return t * Rational(t.weight);
}

TensorElement quillen_rho(const TensorElement& t, const GradedGenerators& gens) {
  Tensor r;
  r.weight = t.weight;
  if (t.weight == 0) return r;
  for (const auto& [w, c] : t.terms) {
    TensorElement acc = gen(w.back());
    for (size_t k = w.size() - 1; k-- > 0;) acc = bracket(gen(w[k]), acc, gens);
    r = r + acc * c;
  }
  return r * Rational(1, t.weight);
}

std::vector<Word> all_words(int m, int n) {
  std::vector<Word> out;
  Word w(n, 0);
  while (true) {
    out.push_back(w);
    int k = n - 1;
    while (k >= 0 && w[k] == m - 1) w[k--] = 0;
    if (k < 0) break;
    ++w[k];
  }
  if (m == 0) out.clear();
  return out;
}

namespace {

uint32_t word_index(const Word& w, int m) {
  uint32_t idx = 0;
  for (uint8_t l : w) idx = idx * m + l;
  return idx;
}

}  // namespace

SparseVec to_vector(const TensorElement& t, int m) {
  std::vector<Entry> e;
  for (const auto& [w, c] : t.terms) e.push_back({word_index(w, m), c});
  return from_pairs(std::move(e));
}

TensorElement from_vector(const SparseVec& v, int m, int n) {
  Tensor t;
  t.weight = n;
  for (const auto& e : v) {
    Word w(n);
    uint32_t x = e.idx;
    for (int k = n - 1; k >= 0; --k) {
      w[k] = static_cast<uint8_t>(x % m);
      x /= m;
    }
    t.add(w, e.val);
  }
  return t;
}

SparseMatrix action_matrix(const GroupRingElement& g, const GradedGenerators& gens) {
  int m = static_cast<int>(gens.size()), n = g.n();
  auto words = all_words(m, n);
  std::vector<SparseVec> cols;
  cols.reserve(words.size());
  auto R = realize(g.as_morphism(), gens.action_degrees());
  for (const auto& w : words) cols.push_back(to_vector(decalage(R(decalage(Tensor::word(w), gens)), gens), m));
  return SparseMatrix::from_columns(words.size(), std::move(cols));
}

bool in_lie(const TensorElement& t, const GradedGenerators& gens) {
  if (t.terms.empty()) return true;
  SparseMatrix W = action_matrix(fincat::w_element(t.weight), gens);
  EchelonBasis b(W.rows());
  for (const auto& c : W.columns()) b.insert(c);
  return b.contains(to_vector(t, static_cast<int>(gens.size())));
}

LieRank lie_rank_both(int n, const GradedGenerators& gens) {
  SparseMatrix W = action_matrix(fincat::w_element(n), gens);
  Rational tr;
  for (size_t j = 0; j < W.cols(); ++j) tr += coeff(W.col(j), static_cast<uint32_t>(j));
  return {rank(W), tr / Rational(n)};
}

size_t lie_rank(int n, int m, bool odd) {
  if (n < 1) throw InvalidInput("lie_rank needs n >= 1");
  LieRank r = lie_rank_both(n, GradedGenerators::uniform(m, odd ? 1 : 0));
  if (!(Rational(static_cast<long long>(r.by_rank)) == r.by_trace))
    throw VerificationFailure("lie_rank: rank " + std::to_string(r.by_rank) + " differs from trace/n " +
                              r.by_trace.str());
  return r.by_rank;
}

}  // namespace cobarlie::freelie
