#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "cobarlie/rational.hpp"

namespace cobarlie::fincat {

// A map [m] -> [n] between standard finite sets. Images are 1-based.
class SetMap {
 public:
  SetMap() = default;
  SetMap(int codomain, std::vector<uint8_t> images);

  static SetMap identity(int n);

  int domain() const { return static_cast<int>(images_.size()); }
  int codomain() const { return codomain_; }
  int operator()(int j) const { return images_[j - 1]; }
  const std::vector<uint8_t>& images() const { return images_; }

  bool is_bijection() const;
  bool is_surjection() const;
  int sign() const;  // for bijections only
  SetMap inverse() const;
  std::string str() const;

  friend bool operator<(const SetMap& a, const SetMap& b) {
    return a.codomain_ != b.codomain_ ? a.codomain_ < b.codomain_ : a.images_ < b.images_;
  }
  friend bool operator==(const SetMap& a, const SetMap& b) {
    return a.codomain_ == b.codomain_ && a.images_ == b.images_;
  }

 private:
  int codomain_ = 0;
  std::vector<uint8_t> images_;
};

// a∘b: apply b first.
SetMap compose(const SetMap& a, const SetMap& b);
SetMap disjoint_union(const SetMap& a, const SetMap& b);

// Formal rational combination of set maps [m] -> [n].
class DMorphism {
 public:
  DMorphism() = default;
  DMorphism(int domain, int codomain) : dom_(domain), cod_(codomain) {}
  DMorphism(const SetMap& f, Rational c = Rational(1));

  static DMorphism identity(int n) { return DMorphism(SetMap::identity(n)); }

  int domain() const { return dom_; }
  int codomain() const { return cod_; }
  const std::map<SetMap, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  Rational coefficient(const SetMap& f) const;

  void add_term(const SetMap& f, const Rational& c);
  DMorphism operator+(const DMorphism& o) const;
  DMorphism operator-(const DMorphism& o) const;
  DMorphism operator*(const Rational& c) const;
  friend bool operator==(const DMorphism& a, const DMorphism& b) {
    return a.dom_ == b.dom_ && a.cod_ == b.cod_ && a.terms_ == b.terms_;
  }
  std::string str() const;

 private:
  int dom_ = 0;
  int cod_ = 0;
  std::map<SetMap, Rational> terms_;
};

DMorphism compose(const DMorphism& a, const DMorphism& b);
DMorphism disjoint_union(const DMorphism& a, const DMorphism& b);

// Element of Q[Σ_n] viewed inside Hom_D([n],[n]); product is composition.
class GroupRingElement {
 public:
  GroupRingElement() = default;
  explicit GroupRingElement(int n) : m_(n, n) {}
  explicit GroupRingElement(const DMorphism& m);
  GroupRingElement(const SetMap& perm, Rational c = Rational(1));

  static GroupRingElement one(int n) { return GroupRingElement(SetMap::identity(n)); }

  int n() const { return m_.domain(); }
  const DMorphism& as_morphism() const { return m_; }
  const std::map<SetMap, Rational>& terms() const { return m_.terms(); }
  bool is_zero() const { return m_.is_zero(); }

  GroupRingElement operator+(const GroupRingElement& o) const { return GroupRingElement(m_ + o.m_); }
  GroupRingElement operator-(const GroupRingElement& o) const { return GroupRingElement(m_ - o.m_); }
  GroupRingElement operator*(const Rational& c) const { return GroupRingElement(m_ * c); }
  GroupRingElement operator*(const GroupRingElement& o) const {
    return GroupRingElement(compose(m_, o.m_));
  }
  friend bool operator==(const GroupRingElement& a, const GroupRingElement& b) { return a.m_ == b.m_; }
  // ε twist: σ ↦ sign(σ)σ.
  GroupRingElement sign_twist() const;
  std::string str() const { return m_.str(); }

 private:
  DMorphism m_;
};

GroupRingElement ring_multiply(const GroupRingElement& a, const GroupRingElement& b);
GroupRingElement disjoint_union(const GroupRingElement& a, const GroupRingElement& b);

// Named elements.
SetMap delta(int i, int n);                 // δ_i : [n+1] -> [n]
SetMap cycle(int n, int i);                 // σ_(12…i) in Σ_n: moves letter i to the front
SetMap transposition(int n, int a, int b);
SetMap rotation(int n, int p);              // ρ^p : j ↦ j+p mod n
DMorphism cobar_differential(int n);        // f_n : [n+1] -> [n]
GroupRingElement s_element(int n);
GroupRingElement w_element(int n, bool flip_sign = false);
GroupRingElement bracket_element(int p, int q);
DMorphism phi(int n);
GroupRingElement psi(int p, int q);

// Tensors over a finite alphabet: words are sequences of letter indices.
using Word = std::vector<uint8_t>;
struct Tensor {
  int weight = 0;
  std::map<Word, Rational> terms;

  static Tensor word(const Word& w, Rational c = Rational(1));
  void add(const Word& w, const Rational& c);
  Tensor operator+(const Tensor& o) const;
  Tensor operator-(const Tensor& o) const;
  Tensor operator*(const Rational& c) const;
  friend bool operator==(const Tensor& a, const Tensor& b) {
    return a.weight == b.weight && a.terms == b.terms;
  }
  bool is_zero() const { return terms.empty(); }
  std::string str(const std::vector<std::string>& names = {}) const;
};

// Tensor concatenation a⊗b.
Tensor concat(const Tensor& a, const Tensor& b);

// Koszul sign of rearranging the letters of w by the set map f, i.e. of
// x ↦ (x_{f(1)},…,x_{f(a)}), where duplicated letters stay adjacent and carry
// no sign. degrees[letter] gives each letter's degree.
int koszul_sign(const SetMap& f, const Word& w, const std::vector<int>& degrees);

// Contravariant realization on Q[S]^{⊗b} -> Q[S]^{⊗a} for m : [a] -> [b].
class Realization {
 public:
  Realization(DMorphism m, std::vector<int> degrees) : m_(std::move(m)), degrees_(std::move(degrees)) {}
  Tensor operator()(const Tensor& t) const;
  const DMorphism& morphism() const { return m_; }

 private:
  DMorphism m_;
  std::vector<int> degrees_;
};

Realization realize(const DMorphism& m, const std::vector<int>& degrees);

// Reads off the morphism [a] -> [b] corresponding to a natural transformation
// Hom_D([b],-) -> Hom_D([a],-), given by its effect on ungraded words.
DMorphism yoneda_extract(const std::function<Tensor(const Tensor&)>& transform, int b);

}  // namespace cobarlie::fincat
