#include "cobarlie/bar.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "cobarlie/dgl.hpp"
#include "cobarlie/errors.hpp"
#include "cobarlie/freelie.hpp"
#include "json.hpp"

namespace cobarlie::bar {

namespace {

using json = nlohmann::json;

Rational parity(long long e) { return Rational(e % 2 ? -1 : 1); }

SparseVec basis_vec(uint32_t i) { return {{i, Rational(1)}}; }

CDGAlgebra make_empty(const std::string& name) {
  CDGAlgebra A;
  A.name = name;
  A.names = {"1"};
  A.degree = {0};
  A.mult = {{basis_vec(0)}};
  A.d = {{}};
  return A;
}

CDGAlgebra sphere_algebra(int k) {
  CDGAlgebra A = make_empty("H(S" + std::to_string(k) + ")");
  A.names.push_back("s" + std::to_string(k));
  A.degree.push_back(k);
  A.mult = {{basis_vec(0), basis_vec(1)}, {basis_vec(1), {}}};
  A.d = {{}, {}};
  return A;
}

std::string fresh_name(std::string n, const std::set<std::string>& taken) {
  while (taken.count(n)) n += "'";
  return n;
}

CDGAlgebra wedge_algebra(const CDGAlgebra& X, const CDGAlgebra& Y) {
  CDGAlgebra A = make_empty("");
  size_t mx = X.dim(), my = Y.dim();
  size_t n = mx + my - 1;
  std::set<std::string> taken{"1"};
  // Y's element j >= 1 becomes mx - 1 + j.
  auto shift = [&](const SparseVec& v, bool fromY) {
    SparseVec out;
    for (const auto& e : v) {
      uint32_t i = e.idx == 0 ? 0 : (fromY ? static_cast<uint32_t>(mx - 1 + e.idx) : e.idx);
      out.push_back({i, e.val});
    }
    return out;
  };
  for (size_t i = 1; i < mx; ++i) {
    A.names.push_back(fresh_name(X.names[i], taken));
    taken.insert(A.names.back());
    A.degree.push_back(X.degree[i]);
  }
  for (size_t j = 1; j < my; ++j) {
    A.names.push_back(fresh_name(Y.names[j], taken));
    taken.insert(A.names.back());
    A.degree.push_back(Y.degree[j]);
  }
  A.mult.assign(n, std::vector<SparseVec>(n));
  A.d.assign(n, {});
  for (size_t i = 0; i < n; ++i) {
    A.mult[0][i] = basis_vec(static_cast<uint32_t>(i));
    A.mult[i][0] = basis_vec(static_cast<uint32_t>(i));
  }
  for (size_t i = 1; i < mx; ++i) {
    A.d[i] = shift(X.d[i], false);
    for (size_t j = 1; j < mx; ++j) A.mult[i][j] = shift(X.mult[i][j], false);
  }
  for (size_t i = 1; i < my; ++i) {
    A.d[mx - 1 + i] = shift(Y.d[i], true);
    for (size_t j = 1; j < my; ++j) A.mult[mx - 1 + i][mx - 1 + j] = shift(Y.mult[i][j], true);
  }
  return A;
}

CDGAlgebra product_algebra(const CDGAlgebra& X, const CDGAlgebra& Y) {
  CDGAlgebra A;
  size_t mx = X.dim(), my = Y.dim(), n = mx * my;
  auto id = [my](size_t i, size_t j) { return static_cast<uint32_t>(i * my + j); };
  A.names.resize(n);
  A.degree.resize(n);
  std::vector<std::string> yn = Y.names;
  std::set<std::string> taken(X.names.begin(), X.names.end());
  for (size_t j = 1; j < my; ++j) {
    yn[j] = fresh_name(yn[j], taken);
    taken.insert(yn[j]);
  }
  for (size_t i = 0; i < mx; ++i)
    for (size_t j = 0; j < my; ++j) {
      std::string nm = i == 0 ? yn[j] : j == 0 ? X.names[i] : X.names[i] + "*" + yn[j];
      A.names[id(i, j)] = nm;
      A.degree[id(i, j)] = X.degree[i] + Y.degree[j];
    }
  auto tensor = [&](const SparseVec& a, const SparseVec& b, const Rational& c) {
    std::vector<Entry> out;
    for (const auto& x : a)
      for (const auto& y : b) out.push_back({id(x.idx, y.idx), c * x.val * y.val});
    return from_pairs(std::move(out));
  };
  A.mult.assign(n, std::vector<SparseVec>(n));
  A.d.assign(n, {});
  for (size_t a = 0; a < mx; ++a)
    for (size_t b = 0; b < my; ++b) {
      SparseVec dv = tensor(X.d[a], basis_vec(static_cast<uint32_t>(b)), Rational(1));
      dv = add(dv, tensor(basis_vec(static_cast<uint32_t>(a)), Y.d[b], parity(X.degree[a])));
      A.d[id(a, b)] = dv;
      for (size_t c = 0; c < mx; ++c)
        for (size_t e = 0; e < my; ++e)
          A.mult[id(a, b)][id(c, e)] = tensor(X.mult[a][c], Y.mult[b][e], parity(Y.degree[b] * X.degree[c]));
    }
  return A;
}

// wedge/product expressions in spheres
class HParser {
 public:
  explicit HParser(std::string s) : s_(std::move(s)) {}
  CDGAlgebra parse() {
    CDGAlgebra A = expr();
    skip();
    if (pos_ != s_.size()) fail("trailing characters");
    return A;
  }

 private:
  std::string s_;
  size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& msg) {
    throw InvalidInput("cohomology expression '" + s_ + "': " + msg + " at position " + std::to_string(pos_));
  }
  void skip() {
    while (pos_ < s_.size() && s_[pos_] == ' ') ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  CDGAlgebra expr() {
    CDGAlgebra A = term();
    while (eat('v')) A = wedge_algebra(A, term());
    return A;
  }
  CDGAlgebra term() {
    CDGAlgebra A = factor();
    while (eat('x')) A = product_algebra(A, factor());
    return A;
  }
  CDGAlgebra factor() {
    skip();
    if (eat('(')) {
      CDGAlgebra A = expr();
      if (!eat(')')) fail("expected ')'");
      return A;
    }
    if (s_.compare(pos_, 2, "pt") == 0) {
      pos_ += 2;
      return make_empty("");
    }
    if (!eat('S')) fail("expected a sphere");
    size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected sphere dimension");
    int k = std::stoi(s_.substr(start, pos_ - start));
    if (k < 1 || k > 60) fail("sphere dimension out of range");
    return sphere_algebra(k);
  }
};

Rational json_coef(const json& v) {
  if (v.is_number_integer()) return Rational(v.get<long long>());
  if (v.is_string()) return Rational::parse(v.get<std::string>());
  throw InvalidInput("CDGA JSON: coefficients must be integers or \"p/q\" strings");
}

}  // namespace

SparseVec CDGAlgebra::multiply(const SparseVec& a, const SparseVec& b) const {
  SparseVec out;
  for (const auto& x : a)
    for (const auto& y : b) axpy(out, x.val * y.val, mult[x.idx][y.idx]);
  return out;
}

SparseVec CDGAlgebra::differential(const SparseVec& a) const {
  SparseVec out;
  for (const auto& x : a) axpy(out, x.val, d[x.idx]);
  return out;
}

int CDGAlgebra::connectivity() const {
  int r = 0;
  for (size_t i = 1; i < dim(); ++i) r = r == 0 ? degree[i] : std::min(r, degree[i]);
  return r;
}

void CDGAlgebra::validate() const {
  size_t n = dim();
  auto bad = [&](const std::string& law, const std::string& where) {
    throw InvalidInput("CDGA " + name + " violates " + law + (where.empty() ? "" : " at " + where));
  };
  if (n == 0 || names[0] != "1" || degree[0] != 0) bad("the unit convention (basis element 0 must be 1)", "");
  if (degree.size() != n || mult.size() != n || d.size() != n) bad("shape consistency", "");
  for (size_t i = 1; i < n; ++i)
    if (degree[i] < 1) bad("connectivity (A^0 = Q, no negative degrees)", names[i]);
  auto homogeneous = [&](const SparseVec& v, int deg) {
    for (const auto& e : v)
      if (e.idx >= n || degree[e.idx] != deg) return false;
    return true;
  };
  for (size_t i = 0; i < n; ++i) {
    if (mult[i].size() != n) bad("shape consistency", names[i]);
    if (!(mult[0][i] == basis_vec(static_cast<uint32_t>(i))) || !(mult[i][0] == basis_vec(static_cast<uint32_t>(i))))
      bad("the unit law", names[i]);
    if (!homogeneous(d[i], degree[i] + 1)) bad("degree of the differential", names[i]);
    for (size_t j = 0; j < n; ++j) {
      std::string w = names[i] + "*" + names[j];
      if (!homogeneous(mult[i][j], degree[i] + degree[j])) bad("degree of the product", w);
      if (!(mult[i][j] == scale(mult[j][i], parity(static_cast<long long>(degree[i]) * degree[j]))))
        bad("graded commutativity", w);
    }
  }
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j)
      for (size_t k = 0; k < n; ++k) {
        SparseVec l = multiply(mult[i][j], basis_vec(static_cast<uint32_t>(k)));
        SparseVec r = multiply(basis_vec(static_cast<uint32_t>(i)), mult[j][k]);
        if (!(l == r)) bad("associativity", names[i] + "*" + names[j] + "*" + names[k]);
      }
  for (size_t i = 0; i < n; ++i) {
    if (!differential(d[i]).empty()) bad("d^2 = 0", names[i]);
    for (size_t j = 0; j < n; ++j) {
      SparseVec l = differential(mult[i][j]);
      SparseVec r = multiply(d[i], basis_vec(static_cast<uint32_t>(j)));
      axpy(r, parity(degree[i]), multiply(basis_vec(static_cast<uint32_t>(i)), d[j]));
      if (!(l == r)) bad("the Leibniz rule", names[i] + "*" + names[j]);
    }
  }
}

CDGAlgebra trivial_algebra() { return make_empty("trivial"); }

CDGAlgebra cohomology_algebra(const std::string& expr) {
  CDGAlgebra A = HParser(expr).parse();
  A.name = "H(" + expr + ")";
  A.validate();
  return A;
}

CDGAlgebra acyclic_extension(const CDGAlgebra& A, int k) {
  if (k < 1) throw InvalidInput("acyclic extension degree must be positive");
  CDGAlgebra B = A;
  B.name = A.name + "+acyclic(" + std::to_string(k) + ")";
  std::set<std::string> taken(A.names.begin(), A.names.end());
  uint32_t u = static_cast<uint32_t>(A.dim()), v = u + 1;
  B.names.push_back(fresh_name("u", taken));
  taken.insert(B.names.back());
  B.names.push_back(fresh_name("du", taken));
  B.degree.push_back(k);
  B.degree.push_back(k + 1);
  for (auto& row : B.mult) row.resize(A.dim() + 2);
  B.mult.resize(A.dim() + 2, std::vector<SparseVec>(A.dim() + 2));
  B.mult[0][u] = B.mult[u][0] = basis_vec(u);
  B.mult[0][v] = B.mult[v][0] = basis_vec(v);
  B.d.push_back(basis_vec(v));
  B.d.push_back({});
  B.validate();
  return B;
}

CDGAlgebra parse_cdga(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("CDGA JSON: ") + e.what());
  }
  try {
    CDGAlgebra A = make_empty(j.value("name", std::string("custom")));
    std::map<std::string, uint32_t> id{{"1", 0}};
    for (const auto& g : j.at("generators")) {
      std::string nm = g.at("name").get<std::string>();
      if (id.count(nm)) throw InvalidInput("CDGA JSON: duplicate generator " + nm);
      id[nm] = static_cast<uint32_t>(A.names.size());
      A.names.push_back(nm);
      A.degree.push_back(g.at("degree").get<int>());
    }
    size_t n = A.names.size();
    A.mult.assign(n, std::vector<SparseVec>(n));
    A.d.assign(n, {});
    for (size_t i = 0; i < n; ++i) A.mult[0][i] = A.mult[i][0] = basis_vec(static_cast<uint32_t>(i));
    auto lookup = [&](const std::string& nm) {
      auto it = id.find(nm);
      if (it == id.end()) throw InvalidInput("CDGA JSON: unknown element " + nm);
      return it->second;
    };
    auto vec = [&](const json& r) {
      std::vector<Entry> out;
      for (const auto& [nm, c] : r.items()) out.push_back({lookup(nm), json_coef(c)});
      return from_pairs(std::move(out));
    };
    std::set<std::pair<uint32_t, uint32_t>> given;
    for (const auto& r : j.value("relations", json::array())) {
      uint32_t a = lookup(r.at("left").get<std::string>()), b = lookup(r.at("right").get<std::string>());
      if (a == 0 || b == 0) throw InvalidInput("CDGA JSON: products with the unit are fixed");
      SparseVec v = vec(r.at("result"));
      A.mult[a][b] = v;
      given.insert({a, b});
      if (!given.count({b, a})) A.mult[b][a] = scale(v, parity(static_cast<long long>(A.degree[a]) * A.degree[b]));
    }
    for (const auto& r : j.value("differential", json::array()))
      A.d[lookup(r.at("source").get<std::string>())] = vec(r.at("result"));
    A.validate();
    return A;
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("CDGA JSON: ") + e.what());
  }
}

CDGAlgebra load_cdga(const std::string& spec) {
  if (spec == "trivial") return trivial_algebra();
  if (spec.size() > 3 && spec.compare(0, 2, "H(") == 0 && spec.back() == ')')
    return cohomology_algebra(spec.substr(2, spec.size() - 3));
  if (spec.size() > 5 && spec.compare(spec.size() - 5, 5, ".json") == 0) {
    std::ifstream in(spec);
    if (!in) throw InvalidInput("cannot read CDGA file " + spec);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_cdga(ss.str());
  }
  throw InvalidInput("unknown CDGA '" + spec + "': expected trivial, H(<expr>) or a .json path");
}

std::string to_json(const CDGAlgebra& A) {
  json j;
  j["name"] = A.name;
  j["generators"] = json::array();
  for (size_t i = 1; i < A.dim(); ++i) j["generators"].push_back({{"name", A.names[i]}, {"degree", A.degree[i]}});
  auto vec = [&](const SparseVec& v) {
    json r = json::object();
    for (const auto& e : v) r[A.names[e.idx]] = e.val.str();
    return r;
  };
  j["relations"] = json::array();
  for (size_t a = 1; a < A.dim(); ++a)
    for (size_t b = a; b < A.dim(); ++b)
      if (!A.mult[a][b].empty())
        j["relations"].push_back({{"left", A.names[a]}, {"right", A.names[b]}, {"result", vec(A.mult[a][b])}});
  j["differential"] = json::array();
  for (size_t a = 1; a < A.dim(); ++a)
    if (!A.d[a].empty()) j["differential"].push_back({{"source", A.names[a]}, {"result", vec(A.d[a])}});
  return j.dump(2);
}

int BarComplexData::internal_degree(const BarWord& w) const {
  int t = 0;
  for (auto a : w) t += A.degree[a];
  return t;
}

int BarComplexData::total_degree(const BarWord& w) const {
  return internal_degree(w) - static_cast<int>(w.size());
}

SparseVec BarComplexData::unit(const BarWord& w) const {
  auto it = index.find(w);
  if (it == index.end()) throw InvalidInput("bar word outside the truncation");
  return basis_vec(it->second);
}

size_t BarComplexData::cohomology_rank(int k) const {
  if (k > k_valid) throw InvalidInput("bar cohomology requested beyond the truncation window");
  return homalg::homology_rank(complex, -k);
}

namespace {

// Expands a word with slot i replaced by the vector v (over A's basis).
void replace_slot(const BarComplexData& B, const BarWord& w, size_t i, const SparseVec& v, const Rational& c,
                  std::vector<Entry>& out) {
  for (const auto& e : v) {
    BarWord x = w;
    x[i] = e.idx;
    auto it = B.index.find(x);
    if (it != B.index.end()) out.push_back({it->second, c * e.val});
  }
}

SparseVec internal_part(const BarComplexData& B, const BarWord& w, bool suspended) {
  std::vector<Entry> out;
  long long eps = 0;
  for (size_t i = 0; i < w.size(); ++i) {
    // classical: -(-1)^{Σ_{j<i}(|a_j|-1)}; Koszul on unsuspended tensors: (-1)^{Σ_{j<i}|a_j|}
    Rational c = suspended ? -parity(eps) : parity(eps);
    replace_slot(B, w, i, B.A.d[w[i]], c, out);
    eps += B.A.degree[w[i]] - (suspended ? 1 : 0);
  }
  return from_pairs(std::move(out));
}

SparseVec merge_slots(const BarComplexData& B, const BarWord& w, size_t i, const Rational& c) {
  std::vector<Entry> out;
  BarWord base(w.begin(), w.end());
  base.erase(base.begin() + static_cast<long>(i) + 1);
  replace_slot(B, base, i, B.A.mult[w[i]][w[i + 1]], c, out);
  return from_pairs(std::move(out));
}

SparseVec external_part(const BarComplexData& B, const BarWord& w) {
  SparseVec out;
  long long eps = 0;
  for (size_t i = 0; i + 1 < w.size(); ++i) {
    eps += B.A.degree[w[i]] - 1;
    out = add(out, merge_slots(B, w, i, parity(eps)));
  }
  return out;
}

Rational theta(const CDGAlgebra& A, const BarWord& w) {
  long long s = static_cast<long long>(w.size()), e = s;
  for (long long i = 0; i < s; ++i) e += (s - 1 - i) * A.degree[w[i]];
  return parity(e);
}

}  // namespace

SparseVec bar_differential(const BarComplexData& B, const BarWord& w) {
  return add(internal_part(B, w, true), external_part(B, w));
}

std::vector<std::pair<BarWord, Rational>> functor_map(const CDGAlgebra& A, const fincat::SetMap& f, const BarWord& w) {
  if (f.domain() != static_cast<int>(w.size())) throw InvalidInput("set map does not match the tensor length");
  if (!f.is_surjection()) throw InvalidInput("functor_map is defined on surjections only");
  // Stable regrouping of the factors by fiber; Koszul sign of the reordering.
  std::vector<int> order(w.size());
  for (size_t j = 0; j < w.size(); ++j) order[j] = static_cast<int>(j);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return f(a + 1) < f(b + 1); });
  long long e = 0;
  for (size_t x = 0; x < order.size(); ++x)
    for (size_t y = x + 1; y < order.size(); ++y)
      if (order[x] > order[y]) e += static_cast<long long>(A.degree[w[order[x]]]) * A.degree[w[order[y]]];
  std::vector<std::pair<BarWord, Rational>> terms{{{}, parity(e)}};
  size_t pos = 0;
  for (int k = 1; k <= f.codomain(); ++k) {
    SparseVec prod = basis_vec(0);
    while (pos < order.size() && f(order[pos] + 1) == k) prod = A.multiply(prod, basis_vec(w[order[pos++]]));
    std::vector<std::pair<BarWord, Rational>> next;
    for (const auto& [word, c] : terms)
      for (const auto& x : prod) {
        BarWord nw = word;
        nw.push_back(x.idx);
        next.push_back({nw, c * x.val});
      }
    terms = std::move(next);
  }
  return terms;
}

BarComplexData bar_complex(const CDGAlgebra& A, int N, int t_max) {
  A.validate();
  if (N < 0 || t_max < 0) throw InvalidInput("bar truncation must be nonnegative");
  BarComplexData B;
  B.A = A;
  B.N = N;
  B.t_max = t_max;
  B.k_valid = t_max - N - 1;
  std::vector<BarWord> all{{}};
  std::function<void(BarWord&, int)> grow = [&](BarWord& w, int t) {
    if (static_cast<int>(w.size()) == N) return;
    for (uint32_t a = 1; a < A.dim(); ++a) {
      if (t + A.degree[a] > t_max) continue;
      w.push_back(a);
      all.push_back(w);
      grow(w, t + A.degree[a]);
      w.pop_back();
    }
  };
  BarWord w0;
  grow(w0, 0);
  int k_hi = 0;
  for (const auto& w : all) {
    int k = B.total_degree(w);
    k_hi = std::max(k_hi, k);
    B.index[w] = static_cast<uint32_t>(B.basis[k].size());
    B.basis[k].push_back(w);
  }
  std::vector<size_t> dims;
  for (int k = k_hi; k >= 0; --k) dims.push_back(B.basis.count(k) ? B.basis[k].size() : 0);
  B.complex = homalg::ChainComplex(-k_hi, dims);
  // Index maps are per degree, so rebuild them keyed by (degree-local) position.
  B.functorial_agrees = true;
  for (int k = 0; k < k_hi; ++k) {
    size_t src = B.basis.count(k) ? B.basis[k].size() : 0, dst = B.basis.count(k + 1) ? B.basis[k + 1].size() : 0;
    std::vector<SparseVec> di(src), de(src), dtot(src);
    for (size_t j = 0; j < src; ++j) {
      const BarWord& w = B.basis[k][j];
      di[j] = internal_part(B, w, true);
      de[j] = external_part(B, w);
      dtot[j] = add(di[j], de[j]);
      // θ d_cl = d_func θ, with d_func = (-1)^s d_I^Koszul + Σ (-1)^{i-1} A(δ_i).
      SparseVec lhs;
      for (const auto& e : dtot[j]) lhs.push_back({e.idx, e.val * theta(A, B.basis[k + 1][e.idx])});
      SparseVec func = scale(internal_part(B, w, false), parity(static_cast<long long>(w.size())));
      int s = static_cast<int>(w.size());
      for (int i = 1; i < s; ++i) {
        std::vector<Entry> acc;
        for (const auto& [nw, c] : functor_map(A, fincat::delta(i, s - 1), w)) {
          auto it = B.index.find(nw);
          if (it != B.index.end()) acc.push_back({it->second, c * parity(i - 1)});
        }
        func = add(func, from_pairs(std::move(acc)));
      }
      if (!(lhs == scale(func, theta(A, w)))) B.functorial_agrees = false;
    }
    B.d_internal[k] = SparseMatrix::from_columns(dst, std::move(di));
    B.d_external[k] = SparseMatrix::from_columns(dst, std::move(de));
    B.complex.set_d(-k, SparseMatrix::from_columns(dst, std::move(dtot)));
  }
  if (!B.functorial_agrees) throw VerificationFailure("classical and D-functorial bar differentials disagree");
  int bad = 0;
  if (!B.complex.is_complex(&bad)) throw VerificationFailure("bar differential does not square to zero");
  return B;
}

std::vector<std::pair<BarWord, int>> shuffle_words(const CDGAlgebra& A, const BarWord& u, const BarWord& v) {
  std::vector<std::pair<BarWord, int>> out;
  size_t p = u.size(), q = v.size();
  BarWord cur;
  std::function<void(size_t, size_t, long long)> go = [&](size_t i, size_t j, long long e) {
    if (i == p && j == q) {
      out.push_back({cur, e % 2 ? -1 : 1});
      return;
    }
    if (i < p) {
      cur.push_back(u[i]);
      go(i + 1, j, e);
      cur.pop_back();
    }
    if (j < q) {
      // v_j passes the remaining u_i, ..., u_{p-1}.
      long long sv = A.degree[v[j]] - 1, su = 0;
      for (size_t r = i; r < p; ++r) su += A.degree[u[r]] - 1;
      cur.push_back(v[j]);
      go(i, j + 1, e + sv * su);
      cur.pop_back();
    }
  };
  go(0, 0, 0);
  return out;
}

SparseVec shuffle_product(const BarComplexData& B, int k1, const SparseVec& u, int k2, const SparseVec& v) {
  std::vector<Entry> out;
  const auto& bu = B.basis.at(k1);
  const auto& bv = B.basis.at(k2);
  for (const auto& x : u)
    for (const auto& y : v)
      for (const auto& [w, s] : shuffle_words(B.A, bu[x.idx], bv[y.idx])) {
        auto it = B.index.find(w);
        if (it != B.index.end()) out.push_back({it->second, x.val * y.val * Rational(s)});
      }
  return from_pairs(std::move(out));
}

homalg::FilteredComplex bar_filtration(const BarComplexData& B) {
  homalg::FilteredComplex F;
  F.A = B.complex;
  for (int s = 0; s <= B.N; ++s)
    for (const auto& [k, words] : B.basis) {
      auto& lvl = F.F[s][-k];
      for (uint32_t i = 0; i < words.size(); ++i)
        if (static_cast<int>(words[i].size()) <= s) lvl.push_back(i);
    }
  return F;
}

SparseVec QBar::project(int k, const SparseVec& v) const {
  auto it = reducer_.find(k);
  if (it == reducer_.end() || !bar.basis.count(k)) return {};
  SparseVec w;
  const auto& words = bar.basis.at(k);
  for (const auto& e : v)
    if (!words[e.idx].empty()) w.push_back(e);
  SparseVec comb;
  if (!it->second.reduce(w, &comb).empty()) throw VerificationFailure("QBar projection failed to reduce");
  uint32_t base = shuffle_count_.at(k);
  SparseVec out;
  for (const auto& e : comb) out.push_back({e.idx - base, -e.val});
  return out;
}

size_t QBar::cohomology_rank(int k) const {
  if (k > k_valid) throw InvalidInput("QBar cohomology requested beyond the truncation window");
  return homalg::homology_rank(complex, -k);
}

size_t QBar::cobracket_rank(int k) const {
  if (k > k_valid) throw InvalidInput("cobracket requested beyond the truncation window");
  return homalg::induced_rank(cobracket, complex, tensor, -k);
}

QBar qbar(const CDGAlgebra& A, int N, int t_max) {
  QBar Q;
  Q.bar = bar_complex(A, N, t_max);
  const BarComplexData& B = Q.bar;
  Q.k_valid = B.k_valid;
  int k_hi = B.basis.empty() ? 0 : B.basis.rbegin()->first;

  // Words grouped by (length, internal degree).
  std::map<std::pair<int, int>, std::vector<BarWord>> by_lt;
  for (const auto& [k, words] : B.basis)
    for (const auto& w : words) by_lt[{static_cast<int>(w.size()), B.internal_degree(w)}].push_back(w);

  std::map<int, std::vector<SparseVec>> shuffles;  // k -> generators of J^2
  for (const auto& [lt, words] : by_lt) {
    auto [n, t] = lt;
    int k = t - n;
    for (int p = 1; 2 * p <= n; ++p)
      for (const auto& [lt1, w1s] : by_lt) {
        if (lt1.first != p) continue;
        auto it2 = by_lt.find({n - p, t - lt1.second});
        if (it2 == by_lt.end()) continue;
        for (const auto& u : w1s)
          for (const auto& v : it2->second) {
            std::vector<Entry> acc;
            for (const auto& [w, s] : shuffle_words(A, u, v)) acc.push_back({B.index.at(w), Rational(s)});
            SparseVec g = from_pairs(std::move(acc));
            if (!g.empty()) shuffles[k].push_back(std::move(g));
          }
      }
  }

  // Complement of J^2 inside J, degree by degree.
  std::vector<size_t> dims;
  for (int k = 0; k <= k_hi; ++k) {
    const auto& words = B.basis.count(k) ? B.basis.at(k) : std::vector<BarWord>{};
    uint32_t nJ = static_cast<uint32_t>(shuffles[k].size());
    auto& red = Q.reducer_.emplace(k, EchelonBasis(words.size(), true, nJ)).first->second;
    Q.shuffle_count_[k] = nJ;
    for (uint32_t g = 0; g < nJ; ++g) red.insert(shuffles[k][g], g);
    for (uint32_t i = 0; i < words.size(); ++i) {
      if (words[i].empty()) continue;
      uint32_t tag = nJ + static_cast<uint32_t>(Q.basis[k].size());
      if (red.insert(basis_vec(i), tag)) {
        Q.basis[k].push_back(words[i]);
        std::pair<int, int> bd{static_cast<int>(words[i].size()), B.internal_degree(words[i])};
        Q.bidegree[k].push_back(bd);
        ++Q.dim[bd];
      }
    }
  }
  for (int k = k_hi; k >= 0; --k) dims.push_back(Q.basis.count(k) ? Q.basis[k].size() : 0);
  Q.complex = homalg::ChainComplex(-k_hi, dims);
  for (int k = 0; k < k_hi; ++k) {
    for (const auto& g : shuffles[k])
      if (!Q.project(k + 1, B.complex.d(-k).apply(g)).empty())
        throw VerificationFailure("bar differential does not preserve the shuffle ideal");
    std::vector<SparseVec> cols;
    for (const auto& w : Q.basis[k]) cols.push_back(Q.project(k + 1, bar_differential(B, w)));
    Q.complex.set_d(-k, SparseMatrix::from_columns(Q.basis.count(k + 1) ? Q.basis[k + 1].size() : 0, std::move(cols)));
  }

  // Dual projector image per bidegree.
  size_t m = A.dim() - 1;
  Q.dual_projector_kills_shuffles = true;
  if (m > 0) {
    std::vector<std::string> names(A.names.begin() + 1, A.names.end());
    std::vector<int> lie_deg;
    for (size_t i = 1; i < A.dim(); ++i) lie_deg.push_back(A.degree[i] - 1);
    freelie::GradedGenerators gens(names, lie_deg);
    auto word_index = [&](const BarWord& w) {
      fincat::Word x;
      for (auto a : w) x.push_back(static_cast<uint8_t>(a - 1));
      return freelie::to_vector(fincat::Tensor::word(x), static_cast<int>(m)).at(0).idx;
    };
    for (int n = 1; n <= N; ++n) {
      SparseMatrix M = freelie::action_matrix(fincat::w_element(n), gens);
      SparseMatrix Mt = M.transpose();
      std::map<int, std::vector<uint32_t>> by_t;
      for (const auto& [lt, words] : by_lt)
        if (lt.first == n)
          for (const auto& w : words) by_t[lt.second].push_back(word_index(w));
      for (const auto& [t, idx] : by_t) {
        std::set<uint32_t> rows(idx.begin(), idx.end());
        std::vector<SparseVec> cols;
        for (auto c : idx) {
          SparseVec col;
          for (const auto& e : Mt.col(c))
            if (rows.count(e.idx)) col.push_back(e);
          cols.push_back(col);
        }
        size_t r = rank(SparseMatrix::from_columns(Mt.rows(), std::move(cols)));
        Q.dual_projector_rank[{n, t}] = r;
        size_t qd = Q.dim.count({n, t}) ? Q.dim.at({n, t}) : 0;
        if (r != qd) {
          std::ostringstream os;
          os << "dual projector rank " << r << " differs from dim QBar = " << qd << " at (n, t) = (" << n << ", "
             << t << ")";
          throw VerificationFailure(os.str());
        }
      }
      for (const auto& [k, gs] : shuffles)
        for (const auto& g : gs) {
          const BarWord& first = B.basis.at(k)[g.front().idx];
          if (static_cast<int>(first.size()) != n) continue;
          std::vector<Entry> y;
          for (const auto& e : g) y.push_back({word_index(B.basis.at(k)[e.idx]), e.val});
          if (!Mt.apply(from_pairs(std::move(y))).empty()) Q.dual_projector_kills_shuffles = false;
        }
    }
  }
  if (!Q.dual_projector_kills_shuffles) throw VerificationFailure("dual projector does not kill the shuffle ideal");

  // Cobracket into QBar ⊗ QBar.
  Q.tensor = homalg::tensor_product(Q.complex, Q.complex, Q.complex.lo(), 0);
  homalg::TensorLayout L = homalg::tensor_layout(Q.complex, Q.complex, Q.complex.lo(), 0);
  auto delta = [&](int k, const SparseVec& v) {
    std::vector<Entry> acc;
    for (const auto& e : v) {
      const BarWord& w = B.basis.at(k)[e.idx];
      for (size_t j = 1; j < w.size(); ++j) {
        BarWord w1(w.begin(), w.begin() + static_cast<long>(j)), w2(w.begin() + static_cast<long>(j), w.end());
        int k1 = B.total_degree(w1), k2 = B.total_degree(w2);
        SparseVec x = Q.project(k1, B.unit(w1)), y = Q.project(k2, B.unit(w2));
        size_t d1 = Q.complex.dim(-k1), d2 = Q.complex.dim(-k2);
        Rational tw = -parity(static_cast<long long>(k1) * k2);
        for (const auto& a : x)
          for (const auto& b : y) {
            acc.push_back({static_cast<uint32_t>(L.offset.at(-k).at(-k1) + a.idx * d2 + b.idx), e.val * a.val * b.val});
            acc.push_back(
                {static_cast<uint32_t>(L.offset.at(-k).at(-k2) + b.idx * d1 + a.idx), tw * e.val * a.val * b.val});
          }
      }
    }
    return from_pairs(std::move(acc));
  };
  for (int k = 0; k <= k_hi; ++k) {
    for (const auto& g : shuffles[k])
      if (!delta(k, g).empty()) throw VerificationFailure("cobracket does not vanish on the shuffle ideal");
    std::vector<SparseVec> cols;
    for (const auto& w : Q.basis[k]) cols.push_back(delta(k, B.unit(w)));
    Q.cobracket.m[-k] = SparseMatrix::from_columns(Q.tensor.dim(-k), std::move(cols));
  }
  for (int k = 0; k < std::min(Q.k_valid + 1, k_hi); ++k)
    if (!(Q.tensor.d(-k) * Q.cobracket.at(-k) == Q.cobracket.at(-k - 1) * Q.complex.d(-k)))
      throw VerificationFailure("cobracket is not a chain map at total degree " + std::to_string(k));
  return Q;
}

Comparison compare(const simplicial::SimplicialSpace& X, const CDGAlgebra& A, int N, int T) {
  Comparison C;
  C.space = X.name();
  C.algebra = A.name;
  C.N = N;
  C.T = T;
  C.q_max = C.t_max = T + N + 1;
  int r = A.connectivity();
  if (r > 0 && T > (r - 1) * (N + 1) - 1)
    throw InvalidInput("window violation on the bar side: T = " + std::to_string(T) + " for N = " + std::to_string(N));
  auto P = dgl::build_P(X, N, C.q_max);
  auto R = dgl::homotopy_ranks(P, T);
  QBar Q = qbar(A, N, C.t_max);
  for (int k = 1; k <= T; ++k) {
    C.cobar_ranks[k] = R.ranks.at(k);
    C.bar_ranks[k] = Q.cohomology_rank(k);
  }
  C.ranks_match = C.cobar_ranks == C.bar_ranks;
  auto table = dgl::bracket_table(P, R, 0, 0);
  for (int k = 2; k <= T; ++k) {
    std::vector<SparseVec> rows;
    for (const auto& E : table)
      if (E.s + E.t == k)
        for (const auto& row : E.matrix) {
          SparseVec v;
          for (size_t i = 0; i < row.size(); ++i)
            if (!row[i].is_zero()) v.push_back({static_cast<uint32_t>(i), row[i]});
          rows.push_back(v);
        }
    C.bracket_ranks[k] = span_rank(R.ranks.at(k), rows);
    C.cobracket_ranks[k] = Q.cobracket_rank(k);
  }
  C.brackets_match = C.bracket_ranks == C.cobracket_ranks;
  return C;
}

}  // namespace cobarlie::bar
