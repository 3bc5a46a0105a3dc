#include "cobarlie/simplicial.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

#include "cobarlie/errors.hpp"
#include "json.hpp"

namespace cobarlie::simplicial {

namespace {

using Values = std::vector<int>;

Values values_of(uint32_t mask, int q) {
  Values v(q + 1, 0);
  for (int j = 1; j <= q; ++j) v[j] = v[j - 1] + ((mask >> j) & 1);
  return v;
}

uint32_t mask_of(const Values& v) {
  uint32_t m = 0;
  for (size_t j = 1; j < v.size(); ++j) {
    int step = v[j] - v[j - 1];
    if (step == 1) {
      m |= 1u << j;
    } else if (step != 0) {
      throw VerificationFailure("non-monotone simplicial operator");
    }
  }
  return m;
}

std::string bits(uint32_t mask, int q) {
  std::string s;
  for (int j = 1; j <= q; ++j) s += ((mask >> j) & 1) ? '1' : '0';
  return s;
}

// Drops the positions in `drop` (bits 1..q) and renumbers the remaining ones.
uint32_t compress(uint32_t mask, uint32_t drop, int q) {
  uint32_t out = 0;
  int pos = 0;
  for (int j = 1; j <= q; ++j) {
    if ((drop >> j) & 1) continue;
    ++pos;
    if ((mask >> j) & 1) out |= 1u << pos;
  }
  return out;
}

// All masks on bits 1..q with the given popcount.
std::vector<uint32_t> masks_with(int q, int k) {
  std::vector<uint32_t> out;
  if (k > q || k < 0) return out;
  if (k == 0) return {0u};
  // Gosper's hack: successive integers with k bits set.
  uint64_t m = (uint64_t{1} << k) - 1;
  while (m < (uint64_t{1} << q)) {
    out.push_back(static_cast<uint32_t>(m << 1));
    uint64_t c = m & (~m + 1), r = m + c;
    m = (((r ^ m) >> 2) / c) | r;
  }
  return out;
}

size_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  size_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

SimplicialSpace::SimplicialSpace(std::vector<Cell> cells, std::string name)
    : cells_(std::move(cells)), name_(std::move(name)) {
  if (cells_.empty() || cells_[0].dim != 0 || !cells_[0].faces.empty())
    throw InvalidInput("cell 0 must be the basepoint vertex");
  for (size_t c = 0; c < cells_.size(); ++c) {
    const Cell& z = cells_[c];
    if (c > 0 && z.dim == 0) throw InvalidInput("space is not reduced: more than one vertex");
    if (z.dim == 1) throw InvalidInput("space is not reduced: nondegenerate 1-simplex " + z.name);
    if (z.dim < 0 || z.dim > kMaxDim) throw InvalidInput("cell dimension out of range: " + z.name);
    if (c == 0) continue;
    if (static_cast<int>(z.faces.size()) != z.dim + 1) throw InvalidInput("wrong number of faces on " + z.name);
    for (const auto& f : z.faces) {
      if (f.cell >= cells_.size()) throw InvalidInput("face refers to unknown cell on " + z.name);
      if ((f.mask & ~full_mask(z.dim - 1)) != 0 || std::popcount(f.mask) != cells_[f.cell].dim)
        throw InvalidInput("face of " + z.name + " has the wrong dimension");
    }
  }
  for (size_t c = 1; c < cells_.size(); ++c) {
    int k = cells_[c].dim;
    Simplex z{static_cast<uint32_t>(c), full_mask(k)};
    for (int j = 1; j <= k; ++j)
      for (int i = 0; i < j; ++i)
        if (!(face(face(z, k, j), k - 1, i) == face(face(z, k, i), k - 1, j - 1))) {
          std::ostringstream os;
          os << "simplicial identity d_" << i << " d_" << j << " = d_" << j - 1 << " d_" << i << " fails on "
             << cells_[c].name;
          throw InvalidInput(os.str());
        }
  }
}

int SimplicialSpace::max_dim() const {
  int m = 0;
  for (const auto& c : cells_) m = std::max(m, c.dim);
  return m;
}

int SimplicialSpace::connectivity() const {
  int r = 0;
  for (const auto& c : cells_)
    if (c.dim > 0 && (r == 0 || c.dim < r)) r = c.dim;
  return r;
}

Simplex SimplicialSpace::face(Simplex s, int q, int i) const {
  if (q < 1 || i < 0 || i > q) throw InvalidInput("face index out of range");
  Values v = values_of(s.mask, q);
  bool lost = i == 0 ? v[1] != v[0] : i == q ? v[q] != v[q - 1] : (v[i] != v[i - 1] && v[i] != v[i + 1]);
  Values w;
  w.reserve(q);
  for (int t = 0; t <= q; ++t)
    if (t != i) w.push_back(v[t]);
  if (!lost) return {s.cell, mask_of(w)};
  int m = v[i];
  for (int& x : w)
    if (x > m) --x;
  const Cell& z = cells_[s.cell];
  Simplex f = z.faces[m];
  Values zeta = values_of(f.mask, z.dim - 1);
  for (int& x : w) x = zeta[x];
  return {f.cell, mask_of(w)};
}

Simplex SimplicialSpace::degeneracy(Simplex s, int q, int j) const {
  if (j < 0 || j > q || q + 1 > kMaxDim) throw InvalidInput("degeneracy index out of range");
  Values v = values_of(s.mask, q), w;
  for (int t = 0; t <= q + 1; ++t) w.push_back(t <= j ? v[t] : v[t - 1]);
  return {s.cell, mask_of(w)};
}

size_t SimplicialSpace::count_simplices(int q) const {
  size_t n = 0;
  for (const auto& c : cells_) n += binomial(q, c.dim);
  return n;
}

SimplicialSpace point() { return SimplicialSpace({{"*", 0, {}}}, "pt"); }

SimplicialSpace sphere(int k) {
  if (k < 2) throw InvalidInput("sphere(k) needs k >= 2 to be reduced");
  if (k > kMaxDim) throw InvalidInput("sphere dimension too large");
  SimplicialSpace::Cell e{"e" + std::to_string(k), k, std::vector<Simplex>(k + 1, Simplex{0, 0})};
  return SimplicialSpace({{"*", 0, {}}, e}, "S" + std::to_string(k));
}

SimplicialSpace wedge(const SimplicialSpace& X, const SimplicialSpace& Y) {
  auto cells = X.cells();
  uint32_t off = static_cast<uint32_t>(cells.size()) - 1;
  for (size_t c = 1; c < Y.cells().size(); ++c) {
    auto z = Y.cells()[c];
    for (auto& f : z.faces)
      if (f.cell != 0) f.cell += off;
    z.left = z.right = -1;
    cells.push_back(std::move(z));
  }
  std::map<std::string, int> seen;
  for (auto& z : cells)
    if (seen[z.name]++) z.name += "'" + std::to_string(seen[z.name] - 1);
  return SimplicialSpace(std::move(cells), "(" + X.name() + " v " + Y.name() + ")");
}

SimplicialSpace product(const SimplicialSpace& X, const SimplicialSpace& Y) {
  using Key = std::tuple<uint32_t, uint32_t, uint32_t, uint32_t>;  // a, m1, b, m2 (q = popcount(m1|m2))
  std::map<Key, uint32_t> id;
  std::vector<Key> keys;
  std::vector<int> dims;
  int qmax = X.max_dim() + Y.max_dim();
  if (qmax > kMaxDim) throw InvalidInput("product dimension too large");
  for (int q = 0; q <= qmax; ++q)
    for (uint32_t a = 0; a < X.cells().size(); ++a)
      for (uint32_t b = 0; b < Y.cells().size(); ++b) {
        int ka = X.cell(a).dim, kb = Y.cell(b).dim;
        if (q < std::max(ka, kb) || q > ka + kb) continue;
        for (uint32_t m1 : masks_with(q, ka))
          for (uint32_t m2 : masks_with(q, kb))
            if ((m1 | m2) == full_mask(q)) {
              Key k{a, m1, b, m2};
              id[k] = static_cast<uint32_t>(keys.size());
              keys.push_back(k);
              dims.push_back(q);
            }
      }
  std::vector<SimplicialSpace::Cell> cells;
  for (size_t c = 0; c < keys.size(); ++c) {
    auto [a, m1, b, m2] = keys[c];
    int q = dims[c];
    SimplicialSpace::Cell z;
    z.dim = q;
    z.left = static_cast<int>(a);
    z.right = static_cast<int>(b);
    if (c == 0) {
      z.name = "*";
    } else {
      z.name = "(" + X.cell(a).name + "," + Y.cell(b).name + ")";
      if (q != X.cell(a).dim || q != Y.cell(b).dim) z.name += "[" + bits(m1, q) + "|" + bits(m2, q) + "]";
    }
    for (int i = 0; q > 0 && i <= q; ++i) {
      Simplex x = X.face({a, m1}, q, i), y = Y.face({b, m2}, q, i);
      uint32_t flat = full_mask(q - 1) & ~x.mask & ~y.mask;
      int qq = q - 1 - std::popcount(flat);
      Key k{x.cell, compress(x.mask, flat, q - 1), y.cell, compress(y.mask, flat, q - 1)};
      auto it = id.find(k);
      if (it == id.end() || dims[it->second] != qq) throw VerificationFailure("product face not found");
      z.faces.push_back({it->second, full_mask(q - 1) & ~flat});
    }
    cells.push_back(std::move(z));
  }
  return SimplicialSpace(std::move(cells), "(" + X.name() + " x " + Y.name() + ")");
}

namespace {

class ExprParser {
 public:
  explicit ExprParser(const std::string& s) : s_(s) {}

  SimplicialSpace parse() {
    SimplicialSpace X = wedge_expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return X;
  }

 private:
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& msg) {
    throw InvalidInput("space expression '" + s_ + "': " + msg + " at position " + std::to_string(pos_));
  }
  SimplicialSpace wedge_expr() {
    SimplicialSpace X = product_expr();
    while (eat('v')) X = wedge(X, product_expr());
    return X;
  }
  SimplicialSpace product_expr() {
    SimplicialSpace X = term();
    while (eat('x')) X = product(X, term());
    return X;
  }
  SimplicialSpace term() {
    skip();
    if (eat('(')) {
      SimplicialSpace X = wedge_expr();
      if (!eat(')')) fail("missing ')'");
      return X;
    }
    if (s_.compare(pos_, 2, "pt") == 0) {
      pos_ += 2;
      return point();
    }
    if (pos_ < s_.size() && s_[pos_] == 'S') {
      ++pos_;
      size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_ || pos_ - start > 2) fail("expected sphere dimension");
      return sphere(std::stoi(s_.substr(start, pos_ - start)));
    }
    fail("expected S<k>, pt or '('");
  }

  const std::string& s_;
  size_t pos_ = 0;
};

}  // namespace

SimplicialSpace parse_expression(const std::string& expr) {
  SimplicialSpace X = ExprParser(expr).parse();
  std::string name = X.name();
  // Drop the outermost parentheses added by wedge/product.
  if (name.size() > 2 && name.front() == '(' && name.back() == ')') name = name.substr(1, name.size() - 2);
  return SimplicialSpace(X.cells(), name);
}

SimplicialSpace parse_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw InvalidInput(std::string("space JSON: ") + e.what());
  }
  try {
    if (j.value("vertices", 1) != 1) throw InvalidInput("space JSON: exactly one vertex is required (reduced)");
    std::vector<SimplicialSpace::Cell> cells{{"*", 0, {}}};
    std::map<std::string, uint32_t> ids{{"*", 0}};
    const auto& arr = j.at("cells");
    for (const auto& c : arr) {
      std::string id = c.at("id").get<std::string>();
      if (ids.count(id)) throw InvalidInput("space JSON: duplicate cell id " + id);
      ids[id] = static_cast<uint32_t>(cells.size());
      cells.push_back({id, c.at("dim").get<int>(), {}});
      if (cells.back().dim < 0 || cells.back().dim > kMaxDim) throw InvalidInput("space JSON: bad dimension for " + id);
    }
    for (size_t k = 0; k < arr.size(); ++k) {
      auto& z = cells[k + 1];
      for (const auto& f : arr[k].at("faces")) {
        std::string cid = f.at("cell").get<std::string>();
        if (!ids.count(cid)) throw InvalidInput("space JSON: unknown face cell " + cid);
        uint32_t c = ids[cid];
        int d = cells[c].dim;
        Simplex s{c, full_mask(d)};
        auto word = f.value("degeneracies", std::vector<int>{});
        for (auto it = word.rbegin(); it != word.rend(); ++it) {
          if (*it < 0 || *it > d) throw InvalidInput("space JSON: degeneracy index out of range on " + z.name);
          Values v = values_of(s.mask, d), w;
          for (int t = 0; t <= d + 1; ++t) w.push_back(t <= *it ? v[t] : v[t - 1]);
          s.mask = mask_of(w);
          ++d;
        }
        if (d != z.dim - 1) throw InvalidInput("space JSON: face of " + z.name + " has the wrong dimension");
        z.faces.push_back(s);
      }
    }
    return SimplicialSpace(std::move(cells), j.value("name", std::string("custom")));
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("space JSON: ") + e.what());
  }
}

SimplicialSpace load_space(const std::string& spec) {
  if (spec.size() > 5 && spec.substr(spec.size() - 5) == ".json") {
    std::ifstream in(spec);
    if (!in) throw InvalidInput("cannot read space file " + spec);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_json(ss.str());
  }
  return parse_expression(spec);
}

std::string to_json(const SimplicialSpace& X) {
  nlohmann::json cells = nlohmann::json::array();
  for (size_t c = 1; c < X.cells().size(); ++c) {
    const auto& z = X.cells()[c];
    nlohmann::json faces = nlohmann::json::array();
    for (const auto& f : z.faces) {
      // Peel degeneracies outermost first: a flat step at j comes from s_{j-1}.
      std::vector<int> word;
      uint32_t m = f.mask;
      int q = z.dim - 1;
      while (true) {
        int j = 1;
        while (j <= q && ((m >> j) & 1)) ++j;
        if (j > q) break;
        word.push_back(j - 1);
        m = compress(m, 1u << j, q);
        --q;
      }
      faces.push_back({{"degeneracies", word}, {"cell", X.cell(f.cell).name}});
    }
    cells.push_back({{"id", z.name}, {"dim", z.dim}, {"faces", faces}});
  }
  nlohmann::json j{{"name", X.name()}, {"vertices", 1}, {"cells", cells}};
  return j.dump();
}

homalg::ChainComplex normalized_chains(const SimplicialSpace& X, int q_max) {
  std::vector<std::vector<uint32_t>> by_dim(q_max + 1);
  std::vector<uint32_t> pos(X.cells().size());
  for (uint32_t c = 0; c < X.cells().size(); ++c) {
    int d = X.cell(c).dim;
    if (d > q_max) continue;
    pos[c] = static_cast<uint32_t>(by_dim[d].size());
    by_dim[d].push_back(c);
  }
  std::vector<size_t> dims;
  for (const auto& v : by_dim) dims.push_back(v.size());
  homalg::ChainComplex C(0, dims);
  for (int q = 0; q <= q_max; ++q) {
    std::vector<std::string> names;
    for (uint32_t c : by_dim[q]) names.push_back(X.cell(c).name);
    C.labels.push_back(std::move(names));
  }
  for (int q = 1; q <= q_max; ++q) {
    std::vector<SparseVec> cols;
    for (uint32_t c : by_dim[q]) {
      std::vector<Entry> acc;
      for (int i = 0; i <= q; ++i) {
        Simplex f = X.cell(c).faces[i];
        if (X.cell(f.cell).dim == q - 1) acc.push_back({pos[f.cell], Rational(i % 2 ? -1 : 1)});
      }
      cols.push_back(from_pairs(std::move(acc)));
    }
    C.set_d(q, SparseMatrix::from_columns(dims[q - 1], std::move(cols)));
  }
  C.set_valid_top(q_max >= X.max_dim() ? q_max : q_max - 1);
  return C;
}

size_t TupleHash::operator()(const Tuple& t) const {
  size_t h = 1469598103934665603ull;
  for (const auto& s : t) {
    h ^= (static_cast<uint64_t>(s.cell) << 32) | s.mask;
    h *= 1099511628211ull;
  }
  return h;
}

Tuple induced_map(const fincat::SetMap& f, const Tuple& x) {
  Tuple out;
  out.reserve(f.domain());
  for (int j = 1; j <= f.domain(); ++j) {
    int k = f(j);
    if (k < 1 || k > static_cast<int>(x.size())) throw InvalidInput("set map does not match tuple length");
    out.push_back(x[k - 1]);
  }
  return out;
}

PowerChains::PowerChains(const SimplicialSpace& X, int n, int q_max, size_t budget)
    : X_(X), n_(n), q_max_(q_max), basis_(q_max + 1), index_(q_max + 1) {
  if (n < 0) throw InvalidInput("negative power");
  if (q_max < 0 || q_max > kMaxDim) throw InvalidInput("q_max out of range");
  size_t total = 0;
  for (int q = 0; q <= q_max; ++q) {
    auto& B = basis_[q];
    if (n == 0) {
      if (q == 0) B.push_back({});
    } else {
      std::vector<Simplex> opts;
      for (uint32_t c = 1; c < X.cells().size(); ++c)
        for (uint32_t m : masks_with(q, X.cell(c).dim)) opts.push_back({c, m});
      int maxd = X.max_dim();
      Tuple cur(n);
      // Depth-first over coordinates; prune when the remaining coordinates
      // cannot cover the missing jump positions.
      auto rec = [&](auto&& self, int k, uint32_t covered) -> void {
        if (k == n) {
          if (covered == full_mask(q)) {
            B.push_back(cur);
            if (budget && total + B.size() > budget) throw BudgetExceeded("relative chains exceed the basis budget");
          }
          return;
        }
        for (const auto& o : opts) {
          uint32_t c2 = covered | o.mask;
          if (std::popcount(full_mask(q) & ~c2) > (n - k - 1) * maxd) continue;
          cur[k] = o;
          self(self, k + 1, c2);
        }
      };
      rec(rec, 0, 0);
    }
    total += B.size();
    for (size_t i = 0; i < B.size(); ++i) index_[q][B[i]] = static_cast<uint32_t>(i);
  }
  std::vector<size_t> dims;
  for (const auto& b : basis_) dims.push_back(b.size());
  C_ = homalg::ChainComplex(0, dims);
  for (int q = 1; q <= q_max; ++q) {
    std::vector<SparseVec> cols;
    cols.reserve(basis_[q].size());
    Tuple f;
    for (const auto& t : basis_[q]) {
      std::vector<Entry> acc;
      for (int i = 0; i <= q; ++i)
        if (face(t, q, i, f)) {
          int64_t k = index(q - 1, f);
          if (k < 0) throw VerificationFailure("face of a relative simplex missing from the basis");
          acc.push_back({static_cast<uint32_t>(k), Rational(i % 2 ? -1 : 1)});
        }
      cols.push_back(from_pairs(std::move(acc)));
    }
    C_.set_d(q, SparseMatrix::from_columns(dims[q - 1], std::move(cols)));
  }
  C_.set_valid_top(n == 0 || q_max >= n * X.max_dim() ? q_max : q_max - 1);
}

const std::vector<Tuple>& PowerChains::basis(int q) const {
  static const std::vector<Tuple> none;
  if (q < 0 || q > q_max_) return none;
  return basis_[q];
}

int64_t PowerChains::index(int q, const Tuple& t) const {
  if (q < 0 || q > q_max_) return -1;
  auto it = index_[q].find(t);
  return it == index_[q].end() ? -1 : it->second;
}

bool PowerChains::face(const Tuple& t, int q, int i, Tuple& out) const {
  out.resize(t.size());
  uint32_t covered = 0;
  for (size_t k = 0; k < t.size(); ++k) {
    out[k] = X_.face(t[k], q, i);
    if (out[k].cell == 0) return false;
    covered |= out[k].mask;
  }
  return covered == full_mask(q - 1);
}

std::string PowerChains::label(int q, const Tuple& t) const {
  std::string s = "(";
  for (size_t k = 0; k < t.size(); ++k) {
    if (k) s += ",";
    s += X_.cell(t[k].cell).name;
    if (X_.cell(t[k].cell).dim != q) s += "[" + bits(t[k].mask, q) + "]";
  }
  return s + ")";
}

homalg::ChainMap induced_chain_map(const fincat::SetMap& f, const PowerChains& src, const PowerChains& dst) {
  return induced_chain_map(fincat::DMorphism(f), src, dst);
}

homalg::ChainMap induced_chain_map(const fincat::DMorphism& f, const PowerChains& src, const PowerChains& dst) {
  if (f.domain() != dst.n() || f.codomain() != src.n()) throw InvalidInput("set map does not match the powers");
  for (const auto& [g, c] : f.terms())
    if (!g.is_surjection()) throw InvalidInput("induced maps are only defined for surjections: " + g.str());
  homalg::ChainMap F;
  int top = std::min(src.q_max(), dst.q_max());
  for (int q = 0; q <= top; ++q) {
    std::vector<SparseVec> cols;
    for (const auto& t : src.basis(q)) {
      std::vector<Entry> acc;
      for (const auto& [g, c] : f.terms()) {
        int64_t k = dst.index(q, induced_map(g, t));
        if (k < 0) throw VerificationFailure("induced map left the relative basis");
        acc.push_back({static_cast<uint32_t>(k), c});
      }
      cols.push_back(from_pairs(std::move(acc)));
    }
    F.m[q] = SparseMatrix::from_columns(dst.basis(q).size(), std::move(cols));
  }
  return F;
}

SparseVec apply_induced(const fincat::DMorphism& f, const PowerChains& src, const PowerChains& dst, int q,
                        const SparseVec& v) {
  if (f.domain() != dst.n() || f.codomain() != src.n()) throw InvalidInput("set map does not match the powers");
  std::vector<Entry> acc;
  acc.reserve(v.size() * f.terms().size());
  for (const auto& e : v) {
    const Tuple& t = src.basis(q)[e.idx];
    for (const auto& [g, c] : f.terms()) {
      int64_t k = dst.index(q, induced_map(g, t));
      if (k < 0) throw VerificationFailure("induced map left the relative basis");
      acc.push_back({static_cast<uint32_t>(k), c * e.val});
    }
  }
  return from_pairs(std::move(acc));
}

std::vector<std::pair<Tuple, int>> shuffle_tuples(const Tuple& x, int a, const Tuple& y, int b) {
  std::vector<std::pair<Tuple, int>> out;
  int q = a + b;
  if (q > kMaxDim) throw InvalidInput("shuffle dimension too large");
  for (uint32_t S : masks_with(q, a)) {
    // S marks the x-steps among positions 1..q.
    int sign = 0, ys = 0;
    std::vector<int> xpos, ypos;
    for (int k = 1; k <= q; ++k) {
      if ((S >> k) & 1) {
        xpos.push_back(k);
        sign += ys;
      } else {
        ypos.push_back(k);
        ++ys;
      }
    }
    Tuple t;
    t.reserve(x.size() + y.size());
    for (const auto& s : x) {
      uint32_t m = 0;
      for (int r = 0; r < a; ++r)
        if ((s.mask >> (r + 1)) & 1) m |= 1u << xpos[r];
      t.push_back({s.cell, m});
    }
    for (const auto& s : y) {
      uint32_t m = 0;
      for (int r = 0; r < b; ++r)
        if ((s.mask >> (r + 1)) & 1) m |= 1u << ypos[r];
      t.push_back({s.cell, m});
    }
    out.emplace_back(std::move(t), sign % 2 ? -1 : 1);
  }
  return out;
}

SparseVec ez_pair(const PowerChains& A, int a, uint32_t i, const PowerChains& B, int b, uint32_t j,
                  const PowerChains& target) {
  std::vector<Entry> acc;
  for (auto& [t, s] : shuffle_tuples(A.basis(a).at(i), a, B.basis(b).at(j), b)) {
    int64_t k = target.index(a + b, t);
    if (k < 0) throw VerificationFailure("shuffle left the relative basis");
    acc.push_back({static_cast<uint32_t>(k), Rational(s)});
  }
  return from_pairs(std::move(acc));
}

Shuffle ez_shuffle(const PowerChains& A, const PowerChains& B, const PowerChains& target) {
  if (target.n() != A.n() + B.n()) throw InvalidInput("shuffle target has the wrong power");
  int hi = std::min(A.q_max() + B.q_max(), target.q_max());
  Shuffle sh;
  sh.tensor = homalg::tensor_product(A.complex(), B.complex(), 0, hi);
  sh.layout = homalg::tensor_layout(A.complex(), B.complex(), 0, hi);
  for (int t = 0; t <= hi; ++t) {
    std::vector<SparseVec> cols(sh.tensor.dim(t));
    for (auto [p, off] : sh.layout.offset[t]) {
      int q = t - p;
      size_t nb = B.basis(q).size();
      for (size_t i = 0; i < A.basis(p).size(); ++i)
        for (size_t j = 0; j < nb; ++j)
          cols[off + i * nb + j] = ez_pair(A, p, static_cast<uint32_t>(i), B, q, static_cast<uint32_t>(j), target);
    }
    sh.map.m[t] = SparseMatrix::from_columns(target.basis(t).size(), std::move(cols));
  }
  return sh;
}

}  // namespace cobarlie::simplicial
