#include "cobarlie/fincat.hpp"

#include <numeric>
#include <sstream>

#include "cobarlie/errors.hpp"

namespace cobarlie::fincat {

SetMap::SetMap(int codomain, std::vector<uint8_t> images) : codomain_(codomain), images_(std::move(images)) {
  if (codomain < 0) throw InvalidInput("negative codomain size");
  for (uint8_t v : images_)
    if (v < 1 || v > codomain) throw InvalidInput("set map image out of range");
}

SetMap SetMap::identity(int n) {
  std::vector<uint8_t> im(n);
  std::iota(im.begin(), im.end(), 1);
  return SetMap(n, std::move(im));
}

bool SetMap::is_surjection() const {
  std::vector<bool> hit(codomain_ + 1, false);
  for (uint8_t v : images_) hit[v] = true;
  for (int k = 1; k <= codomain_; ++k)
    if (!hit[k]) return false;
  return true;
}

bool SetMap::is_bijection() const { return domain() == codomain_ && is_surjection(); }

int SetMap::sign() const {
  int inv = 0;
  for (size_t i = 0; i < images_.size(); ++i)
    for (size_t j = i + 1; j < images_.size(); ++j)
      if (images_[i] > images_[j]) ++inv;
  return inv % 2 ? -1 : 1;
}

SetMap SetMap::inverse() const {
  if (!is_bijection()) throw InvalidInput("inverse of a non-bijection");
  std::vector<uint8_t> im(images_.size());
  for (size_t j = 0; j < images_.size(); ++j) im[images_[j] - 1] = static_cast<uint8_t>(j + 1);
  return SetMap(codomain_, std::move(im));
}

std::string SetMap::str() const {
  std::ostringstream os;
  os << "(";
  for (size_t j = 0; j < images_.size(); ++j) os << (j ? "," : "") << int(images_[j]);
  os << ")->[" << codomain_ << "]";
  return os.str();
}

SetMap compose(const SetMap& a, const SetMap& b) {
  if (b.codomain() != a.domain()) throw InvalidInput("set map composition size mismatch");
  std::vector<uint8_t> im(b.domain());
  for (int j = 1; j <= b.domain(); ++j) im[j - 1] = static_cast<uint8_t>(a(b(j)));
  return SetMap(a.codomain(), std::move(im));
}

SetMap disjoint_union(const SetMap& a, const SetMap& b) {
  std::vector<uint8_t> im = a.images();
  for (uint8_t v : b.images()) im.push_back(static_cast<uint8_t>(v + a.codomain()));
  return SetMap(a.codomain() + b.codomain(), std::move(im));
}

DMorphism::DMorphism(const SetMap& f, Rational c) : dom_(f.domain()), cod_(f.codomain()) { add_term(f, c); }

Rational DMorphism::coefficient(const SetMap& f) const {
  auto it = terms_.find(f);
  return it == terms_.end() ? Rational() : it->second;
}

void DMorphism::add_term(const SetMap& f, const Rational& c) {
  if (f.domain() != dom_ || f.codomain() != cod_) throw InvalidInput("term size mismatch in DMorphism");
  if (c.is_zero()) return;
  auto [it, fresh] = terms_.emplace(f, c);
  if (!fresh) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

DMorphism DMorphism::operator+(const DMorphism& o) const {
  if (dom_ != o.dom_ || cod_ != o.cod_) throw InvalidInput("DMorphism sum size mismatch");
  DMorphism r = *this;
  for (const auto& [f, c] : o.terms_) r.add_term(f, c);
  return r;
}

DMorphism DMorphism::operator-(const DMorphism& o) const { return *this + o * Rational(-1); }

DMorphism DMorphism::operator*(const Rational& c) const {
  DMorphism r(dom_, cod_);
  if (c.is_zero()) return r;
  for (const auto& [f, v] : terms_) r.terms_.emplace(f, v * c);
  return r;
}

std::string DMorphism::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [f, c] : terms_) {
    os << (first ? "" : " + ") << c << "*" << f.str();
    first = false;
  }
  return os.str();
}

DMorphism compose(const DMorphism& a, const DMorphism& b) {
  if (b.codomain() != a.domain()) throw InvalidInput("DMorphism composition size mismatch");
  DMorphism r(b.domain(), a.codomain());
  for (const auto& [f, c] : a.terms())
    for (const auto& [g, d] : b.terms()) r.add_term(compose(f, g), c * d);
  return r;
}

DMorphism disjoint_union(const DMorphism& a, const DMorphism& b) {
  DMorphism r(a.domain() + b.domain(), a.codomain() + b.codomain());
  for (const auto& [f, c] : a.terms())
    for (const auto& [g, d] : b.terms()) r.add_term(disjoint_union(f, g), c * d);
  return r;
}

GroupRingElement::GroupRingElement(const DMorphism& m) : m_(m) {
  if (m.domain() != m.codomain()) throw InvalidInput("group ring element must be an endomorphism");
  for (const auto& [f, c] : m.terms())
    if (!f.is_bijection()) throw InvalidInput("group ring term is not a permutation");
}

GroupRingElement::GroupRingElement(const SetMap& perm, Rational c) : GroupRingElement(DMorphism(perm, c)) {}

GroupRingElement GroupRingElement::sign_twist() const {
  DMorphism r(n(), n());
  for (const auto& [f, c] : terms()) r.add_term(f, f.sign() > 0 ? c : -c);
  return GroupRingElement(r);
}

GroupRingElement ring_multiply(const GroupRingElement& a, const GroupRingElement& b) { return a * b; }

GroupRingElement disjoint_union(const GroupRingElement& a, const GroupRingElement& b) {
  return GroupRingElement(disjoint_union(a.as_morphism(), b.as_morphism()));
}

SetMap delta(int i, int n) {
  if (n < 1 || i < 1 || i > n + 1) throw InvalidInput("delta index out of range");
  std::vector<uint8_t> im(n + 1);
  for (int j = 1; j <= n + 1; ++j) im[j - 1] = static_cast<uint8_t>(j <= i ? j : j - 1);
  if (i == n + 1) im[n] = static_cast<uint8_t>(n);
  return SetMap(n, std::move(im));
}

SetMap cycle(int n, int i) {
  if (i < 1 || i > n) throw InvalidInput("cycle length out of range");
  std::vector<uint8_t> im(n);
  std::iota(im.begin(), im.end(), 1);
  im[0] = static_cast<uint8_t>(i);
  for (int j = 2; j <= i; ++j) im[j - 1] = static_cast<uint8_t>(j - 1);
  return SetMap(n, std::move(im));
}

SetMap transposition(int n, int a, int b) {
  std::vector<uint8_t> im(n);
  std::iota(im.begin(), im.end(), 1);
  std::swap(im[a - 1], im[b - 1]);
  return SetMap(n, std::move(im));
}

SetMap rotation(int n, int p) {
  std::vector<uint8_t> im(n);
  for (int j = 1; j <= n; ++j) im[j - 1] = static_cast<uint8_t>(((j - 1 + p) % n + n) % n + 1);
  return SetMap(n, std::move(im));
}

DMorphism cobar_differential(int n) {
  if (n < 1) throw InvalidInput("cobar_differential needs n >= 1");
  DMorphism f(n + 1, n);
  for (int i = 1; i <= n; ++i) f.add_term(delta(i, n), Rational(i % 2 ? 1 : -1));
  return f;
}

GroupRingElement s_element(int n) {
  if (n < 1) throw InvalidInput("s_element needs n >= 1");
  GroupRingElement s = GroupRingElement::one(n);
  for (int i = 2; i <= n; ++i) s = s * (GroupRingElement::one(n) - GroupRingElement(cycle(n, i)));
  return s;
}

GroupRingElement w_element(int n, bool flip_sign) {
  if (n < 1) throw InvalidInput("w_element needs n >= 1");
  GroupRingElement w = GroupRingElement::one(n);
  for (int i = 2; i <= n; ++i) {
    SetMap c = cycle(n, i);
    int eps = c.sign();
    if (flip_sign && i == 3) eps = -eps;
    w = w * (GroupRingElement::one(n) - GroupRingElement(c, Rational(eps)));
  }
  return w;
}

GroupRingElement bracket_element(int p, int q) {
  if (p < 1 || q < 1) throw InvalidInput("bracket_element needs p, q >= 1");
  int n = p + q;
  Rational c((p * q) % 2 ? 1 : -1);
  return GroupRingElement::one(n) + GroupRingElement(rotation(n, p), c);
}

DMorphism phi(int n) {
  DMorphism wf = compose(w_element(n).as_morphism(), cobar_differential(n));
  DMorphism ph = wf * Rational(1, n + 1);
  if (!(compose(ph, w_element(n + 1).as_morphism()) == wf))
    throw VerificationFailure("phi diagram fails at n=" + std::to_string(n));
  return ph;
}

GroupRingElement psi(int p, int q) {
  GroupRingElement wb = disjoint_union(w_element(p), w_element(q)) * bracket_element(p, q);
  GroupRingElement ps = wb * Rational(1, p + q);
  if (!(ps * w_element(p + q) == wb))
    throw VerificationFailure("psi diagram fails at (p,q)=(" + std::to_string(p) + "," + std::to_string(q) + ")");
  return ps;
}

Tensor Tensor::word(const Word& w, Rational c) {
  Tensor t;
  t.weight = static_cast<int>(w.size());
  t.add(w, c);
  return t;
}

void Tensor::add(const Word& w, const Rational& c) {
  if (static_cast<int>(w.size()) != weight) throw InvalidInput("word length differs from tensor weight");
  if (c.is_zero()) return;
  auto [it, fresh] = terms.emplace(w, c);
  if (!fresh) {
    it->second += c;
    if (it->second.is_zero()) terms.erase(it);
  }
}

Tensor Tensor::operator+(const Tensor& o) const {
  if (terms.empty()) return o;
  if (o.terms.empty()) return *this;
  if (weight != o.weight) throw InvalidInput("tensor weight mismatch");
  Tensor r = *this;
  for (const auto& [w, c] : o.terms) r.add(w, c);
  return r;
}

Tensor Tensor::operator-(const Tensor& o) const { return *this + o * Rational(-1); }

Tensor Tensor::operator*(const Rational& c) const {
  Tensor r;
  r.weight = weight;
  if (c.is_zero()) return r;
  for (const auto& [w, v] : terms) r.terms.emplace(w, v * c);
  return r;
}

std::string Tensor::str(const std::vector<std::string>& names) const {
  if (terms.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [w, c] : terms) {
    os << (first ? "" : " + ") << c << "*";
    for (size_t k = 0; k < w.size(); ++k) {
      if (k) os << "⊗";
      if (w[k] < names.size())
        os << names[w[k]];
      else
        os << "v" << int(w[k]) + 1;
    }
    first = false;
  }
  return os.str();
}

Tensor concat(const Tensor& a, const Tensor& b) {
  Tensor r;
  r.weight = a.weight + b.weight;
  for (const auto& [u, c] : a.terms)
    for (const auto& [v, d] : b.terms) {
      Word w = u;
      w.insert(w.end(), v.begin(), v.end());
      r.add(w, c * d);
    }
  return r;
}

int koszul_sign(const SetMap& f, const Word& w, const std::vector<int>& degrees) {
  int parity = 0;
  const int a = f.domain();
  for (int j = 1; j <= a; ++j)
    for (int k = j + 1; k <= a; ++k)
      if (f(j) > f(k)) parity ^= (degrees[w[f(j) - 1]] & degrees[w[f(k) - 1]] & 1);
  return parity ? -1 : 1;
}

Tensor Realization::operator()(const Tensor& t) const {
  Tensor r;
  r.weight = m_.domain();
  if (t.terms.empty()) return r;
  if (t.weight != m_.codomain()) throw InvalidInput("realization applied to tensor of wrong weight");
  for (const auto& [f, c] : m_.terms())
    for (const auto& [x, v] : t.terms) {
      Word y(f.domain());
      for (int j = 1; j <= f.domain(); ++j) y[j - 1] = x[f(j) - 1];
      r.add(y, koszul_sign(f, x, degrees_) > 0 ? c * v : -(c * v));
    }
  return r;
}

Realization realize(const DMorphism& m, const std::vector<int>& degrees) { return Realization(m, degrees); }

DMorphism yoneda_extract(const std::function<Tensor(const Tensor&)>& transform, int b) {
  Word id(b);
  std::iota(id.begin(), id.end(), 0);
  Tensor out = transform(Tensor::word(id));
  DMorphism m(out.weight, b);
  for (const auto& [y, c] : out.terms) {
    std::vector<uint8_t> im(y.size());
    for (size_t j = 0; j < y.size(); ++j) im[j] = static_cast<uint8_t>(y[j] + 1);
    m.add_term(SetMap(b, std::move(im)), c);
  }
  return m;
}

}  // namespace cobarlie::fincat
