#include "cobarlie/homalg.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

#include "cobarlie/errors.hpp"

namespace cobarlie::homalg {

namespace {

const SparseMatrix& empty_matrix() {
  static const SparseMatrix z;
  return z;
}

size_t span_dim(size_t ambient, const std::vector<SparseVec>& a, const std::vector<SparseVec>& b = {}) {
  EchelonBasis e(ambient);
  for (const auto& v : a) e.insert(v);
  for (const auto& v : b) e.insert(v);
  return e.rank();
}

std::vector<SparseVec> units(size_t ambient, const std::vector<uint32_t>& idx) {
  std::vector<SparseVec> out;
  for (uint32_t i : idx) {
    if (i >= ambient) throw InvalidInput("filtration index beyond basis");
    out.push_back({{i, Rational(1)}});
  }
  return out;
}

// Coordinates of v in the span of the tracked inputs of e; v must lie in it.
SparseVec coords_in(const EchelonBasis& e, const SparseVec& v, const char* what) {
  SparseVec comb;
  if (!e.reduce(v, &comb).empty()) throw VerificationFailure(std::string(what) + ": vector outside subspace");
  return comb;
}

}  // namespace

ChainComplex::ChainComplex(int lo, std::vector<size_t> dims) : lo_(lo), dims_(std::move(dims)) {
  valid_top_ = hi();
  // d_[k] is d(lo + k) for k = 0 .. size, the last one leaving the top degree.
  for (size_t k = 0; k <= dims_.size(); ++k) {
    size_t rows = k == 0 ? 0 : dims_[k - 1];
    size_t cols = k < dims_.size() ? dims_[k] : 0;
    d_.emplace_back(rows, cols);
  }
}

size_t ChainComplex::dim(int q) const {
  if (q < lo_ || q > hi()) return 0;
  return dims_[q - lo_];
}

size_t ChainComplex::total_dim() const {
  size_t s = 0;
  for (size_t d : dims_) s += d;
  return s;
}

const SparseMatrix& ChainComplex::d(int q) const {
  if (q < lo_ || q > hi() + 1) return empty_matrix();
  return d_[q - lo_];
}

void ChainComplex::set_d(int q, SparseMatrix m) {
  if (q <= lo_ || q > hi()) throw InvalidInput("boundary degree out of range");
  if (m.rows() != dim(q - 1) || m.cols() != dim(q)) throw InvalidInput("boundary matrix has wrong shape");
  d_[q - lo_] = std::move(m);
}

const std::string& ChainComplex::label(int q, size_t i) const {
  static const std::string none;
  if (q < lo_ || static_cast<size_t>(q - lo_) >= labels.size() || i >= labels[q - lo_].size()) return none;
  return labels[q - lo_][i];
}

bool ChainComplex::is_complex(int* bad) const {
  for (int q = lo_ + 2; q <= hi(); ++q)
    if (!(d(q - 1) * d(q)).is_zero()) {
      if (bad) *bad = q;
      return false;
    }
  return true;
}

ChainMap identity_map(const ChainComplex& C) {
  ChainMap f;
  for (int q = C.lo(); q <= C.hi(); ++q) f.m[q] = SparseMatrix::identity(C.dim(q));
  return f;
}

ChainMap compose(const ChainMap& f, const ChainMap& g) {
  ChainMap h;
  h.shift = f.shift + g.shift;
  for (const auto& [q, gm] : g.m) {
    auto it = f.m.find(q + g.shift);
    if (it != f.m.end()) h.m[q] = it->second * gm;
  }
  return h;
}

bool is_chain_map(const ChainMap& f, const ChainComplex& C, const ChainComplex& D) {
  for (const auto& [q, fq] : f.m) {
    if (fq.cols() != C.dim(q) || fq.rows() != D.dim(q + f.shift)) return false;
    auto below = f.m.find(q - 1);
    if (below == f.m.end()) continue;
    const SparseMatrix& dD = D.d(q + f.shift);
    const SparseMatrix& dC = C.d(q);
    for (size_t j = 0; j < fq.cols(); ++j)
      if (!(dD.apply(fq.col(j)) == below->second.apply(dC.col(j)))) return false;
  }
  return true;
}

size_t boundary_rank(const ChainComplex& C, int q) { return rank(C.d(q)); }

size_t homology_rank(const ChainComplex& C, int q) {
  if (q > C.valid_top()) {
    std::ostringstream os;
    os << "homology in degree " << q << " is beyond the computed range (top " << C.valid_top() << ")";
    throw InvalidInput(os.str());
  }
  if (q < C.lo() || q > C.hi()) return 0;
  return C.dim(q) - boundary_rank(C, q) - boundary_rank(C, q + 1);
}

std::map<int, size_t> homology_ranks(const ChainComplex& C) {
  std::map<int, size_t> out;
  for (int q = C.lo(); q <= std::min(C.hi(), C.valid_top()); ++q) out[q] = homology_rank(C, q);
  return out;
}

HomologyBasis::HomologyBasis(const ChainComplex& C, int q)
    : q_(q), d_(&C.d(q)), nb_(C.d(q + 1).cols()), red_(C.dim(q), true, static_cast<uint32_t>(nb_)) {
  size_t expect = homology_rank(C, q);
  const SparseMatrix& up = C.d(q + 1);
  for (size_t j = 0; j < up.cols(); ++j) red_.insert(up.col(j), static_cast<uint32_t>(j));
  if (expect == 0) return;
  std::vector<SparseVec> ker;
  if (C.dim(q - 1) == 0) {
    for (size_t i = 0; i < C.dim(q); ++i) ker.push_back({{static_cast<uint32_t>(i), Rational(1)}});
  } else {
    ker = kernel_basis(C.d(q));
  }
  for (auto& z : ker) {
    if (red_.insert(z, static_cast<uint32_t>(nb_ + reps_.size()))) reps_.push_back(std::move(z));
    if (reps_.size() == expect) break;
  }
  if (reps_.size() != expect) throw VerificationFailure("homology representatives disagree with rank count");
}

bool HomologyBasis::is_cycle(const SparseVec& z) const { return d_->rows() == 0 || d_->apply(z).empty(); }

bool HomologyBasis::is_boundary(const SparseVec& z) const {
  if (!is_cycle(z)) return false;
  auto c = coordinates(z);
  return std::all_of(c.begin(), c.end(), [](const Rational& r) { return r.is_zero(); });
}

std::vector<Rational> HomologyBasis::coordinates(const SparseVec& z) const {
  if (!is_cycle(z)) throw InvalidInput("coordinates requested for a non-cycle");
  SparseVec comb;
  if (!red_.reduce(z, &comb).empty()) throw VerificationFailure("cycle not spanned by boundaries and representatives");
  std::vector<Rational> out(reps_.size());
  for (const auto& e : comb) out.at(e.idx - nb_) = e.val;
  return out;
}

size_t induced_rank(const ChainMap& f, const ChainComplex& C, const ChainComplex& D, int q) {
  if (f.shift != 0) throw InvalidInput("induced_rank needs a degree-preserving map");
  if (q > C.valid_top() || q > D.valid_top()) throw InvalidInput("induced_rank beyond computed range");
  if (C.dim(q) == 0 || D.dim(q) == 0) return 0;
  EchelonBasis b(D.dim(q));
  const SparseMatrix& up = D.d(q + 1);
  for (size_t j = 0; j < up.cols(); ++j) b.insert(up.col(j));
  size_t base = b.rank();
  std::vector<SparseVec> ker;
  if (C.dim(q - 1) == 0) {
    for (size_t i = 0; i < C.dim(q); ++i) ker.push_back({{static_cast<uint32_t>(i), Rational(1)}});
  } else {
    ker = kernel_basis(C.d(q));
  }
  const SparseMatrix& fq = f.at(q);
  for (const auto& z : ker) b.insert(fq.apply(z));
  return b.rank() - base;
}

bool is_quasi_iso(const ChainMap& f, const ChainComplex& C, const ChainComplex& D, int lo, int hi) {
  for (int q = lo; q <= hi; ++q) {
    size_t hc = homology_rank(C, q), hd = homology_rank(D, q);
    if (hc != hd) return false;
    if (hc && induced_rank(f, C, D, q) != hc) return false;
  }
  return true;
}

namespace {

// Connected components of the support graph of a square matrix. Every
// component is invariant under the matrix, so an idempotent splits blockwise.
std::vector<std::vector<uint32_t>> support_blocks(const SparseMatrix& m) {
  std::vector<uint32_t> parent(m.cols());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](uint32_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (uint32_t j = 0; j < m.cols(); ++j)
    for (const auto& en : m.col(j)) {
      uint32_t a = find(j), b = find(en.idx);
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  std::vector<std::vector<uint32_t>> blocks;
  std::vector<int32_t> slot(m.cols(), -1);
  for (uint32_t j = 0; j < m.cols(); ++j) {
    uint32_t r = find(j);
    if (slot[r] < 0) {
      slot[r] = static_cast<int32_t>(blocks.size());
      blocks.emplace_back();
    }
    blocks[slot[r]].push_back(j);
  }
  return blocks;
}

// Reduced column echelon basis of the image of one block: every returned
// vector has a 1 at its pivot and 0 at the other pivots.
std::vector<SparseVec> reduced_image_basis(const SparseMatrix& e, const std::vector<uint32_t>& block) {
  Rational tr;
  for (uint32_t j : block) tr += coeff(e.col(j), j);
  if (!tr.is_integer() || tr.sign() < 0) throw InvalidInput("idempotent has a non-integral trace");
  size_t want = static_cast<size_t>(std::stoll(tr.str()));
  EchelonBasis ech(e.rows());
  for (uint32_t j : block) {
    if (ech.rank() == want) break;
    ech.insert(e.col(j));
  }
  std::vector<SparseVec> vs = ech.vectors();
  std::sort(vs.begin(), vs.end(), [](const SparseVec& x, const SparseVec& y) { return x.back().idx < y.back().idx; });
  // Pivots are the last indices; clear each pivot from the later vectors.
  for (size_t i = 0; i < vs.size(); ++i) {
    uint32_t p = vs[i].back().idx;
    for (size_t k = i + 1; k < vs.size(); ++k) {
      Rational c = coeff(vs[k], p);
      if (!c.is_zero()) axpy(vs[k], -c, vs[i]);
    }
  }
  return vs;
}

}  // namespace

Summand image_summand(const ChainComplex& C, const ChainMap& e) {
  if (e.shift != 0) throw InvalidInput("idempotent must preserve degree");
  std::vector<std::vector<SparseVec>> basis;
  // pivot_slot[k][row] = index of the basis vector pivoting at row, or -1.
  std::vector<std::vector<int32_t>> pivot_slot;
  for (int q = C.lo(); q <= C.hi(); ++q) {
    const SparseMatrix& eq = e.at(q);
    if (eq.rows() != C.dim(q) || eq.cols() != C.dim(q)) throw InvalidInput("idempotent has wrong shape");
    for (size_t j = 0; j < eq.cols(); ++j)
      if (!(eq.apply(eq.col(j)) == eq.col(j))) {
        std::ostringstream os;
        os << "map is not idempotent in degree " << q;
        throw InvalidInput(os.str());
      }
    auto& bq = basis.emplace_back();
    for (const auto& block : support_blocks(eq))
      for (auto& v : reduced_image_basis(eq, block)) bq.push_back(std::move(v));
    std::sort(bq.begin(), bq.end(), [](const SparseVec& x, const SparseVec& y) { return x.back().idx < y.back().idx; });
    auto& slot = pivot_slot.emplace_back(C.dim(q), -1);
    for (size_t i = 0; i < bq.size(); ++i) slot[bq[i].back().idx] = static_cast<int32_t>(i);
  }
  if (!is_chain_map(e, C, C)) throw InvalidInput("idempotent is not a chain map");

  // Coordinates of a vector of the image: its entries at the pivots.
  auto coords = [&](size_t k, const SparseVec& v) {
    SparseVec c;
    for (const auto& en : v)
      if (int32_t s = pivot_slot[k][en.idx]; s >= 0) c.push_back({static_cast<uint32_t>(s), en.val});
    std::sort(c.begin(), c.end(), [](const Entry& x, const Entry& y) { return x.idx < y.idx; });
    return c;
  };
  auto expand = [&](size_t k, const SparseVec& c) {
    SparseVec v;
    for (const auto& en : c) axpy(v, en.val, basis[k][en.idx]);
    return v;
  };

  std::vector<size_t> dims;
  for (const auto& bq : basis) dims.push_back(bq.size());
  Summand s;
  s.complex = ChainComplex(C.lo(), dims);
  s.complex.set_valid_top(C.valid_top());
  for (int q = C.lo(); q <= C.hi(); ++q) {
    size_t k = q - C.lo();
    const SparseMatrix& eq = e.at(q);
    std::vector<SparseVec> pc;
    pc.reserve(eq.cols());
    for (size_t j = 0; j < eq.cols(); ++j) {
      SparseVec c = coords(k, eq.col(j));
      if (!(expand(k, c) == eq.col(j))) throw VerificationFailure("inclusion∘projection != e");
      pc.push_back(std::move(c));
    }
    s.projection.m[q] = SparseMatrix::from_columns(dims[k], std::move(pc));
    if (q > C.lo()) {
      std::vector<SparseVec> dc;
      dc.reserve(dims[k]);
      for (const auto& b : basis[k]) {
        SparseVec db = C.d(q).apply(b);
        SparseVec c = coords(k - 1, db);
        if (!(expand(k - 1, c) == db)) throw VerificationFailure("induced boundary leaves the image");
        dc.push_back(std::move(c));
      }
      s.complex.set_d(q, SparseMatrix::from_columns(dims[k - 1], std::move(dc)));
    }
  }
  for (int q = C.lo(); q <= C.hi(); ++q)
    s.inclusion.m[q] = SparseMatrix::from_columns(C.dim(q), std::move(basis[q - C.lo()]));
  return s;
}

TensorLayout tensor_layout(const ChainComplex& A, const ChainComplex& B, int lo, int hi) {
  TensorLayout L;
  for (int t = lo; t <= hi; ++t) {
    size_t off = 0;
    auto& row = L.offset[t];
    for (int p = A.lo(); p <= A.hi(); ++p) {
      int q = t - p;
      if (q < B.lo() || q > B.hi()) continue;
      row[p] = off;
      off += A.dim(p) * B.dim(q);
    }
  }
  return L;
}

ChainComplex tensor_product(const ChainComplex& A, const ChainComplex& B, int lo, int hi) {
  TensorLayout L = tensor_layout(A, B, lo, hi);
  std::vector<size_t> dims;
  for (int t = lo; t <= hi; ++t) {
    size_t n = 0;
    for (auto [p, off] : L.offset[t]) n = std::max(n, off + A.dim(p) * B.dim(t - p));
    dims.push_back(n);
  }
  ChainComplex T(lo, dims);
  for (int t = lo + 1; t <= hi; ++t) {
    std::vector<SparseVec> cols(dims[t - lo]);
    for (auto [p, off] : L.offset[t]) {
      int q = t - p;
      size_t nb = B.dim(q);
      const SparseMatrix& dA = A.d(p);
      const SparseMatrix& dB = B.d(q);
      auto down = L.offset[t - 1];
      for (size_t a = 0; a < A.dim(p); ++a)
        for (size_t b = 0; b < nb; ++b) {
          std::vector<Entry> acc;
          if (down.count(p - 1))
            for (const auto& e : dA.col(a))
              acc.push_back({static_cast<uint32_t>(down[p - 1] + e.idx * B.dim(q) + b), e.val});
          if (down.count(p)) {
            Rational sg(p % 2 ? -1 : 1);
            for (const auto& e : dB.col(b))
              acc.push_back({static_cast<uint32_t>(down[p] + a * B.dim(q - 1) + e.idx), sg * e.val});
          }
          cols[off + a * nb + b] = from_pairs(std::move(acc));
        }
    }
    T.set_d(t, SparseMatrix::from_columns(dims[t - 1 - lo], std::move(cols)));
  }
  // H_t needs every block of degree t + 1; a truncated factor limits t further.
  int top = hi >= A.hi() + B.hi() ? hi : hi - 1;
  if (A.valid_top() < A.hi()) top = std::min(top, A.valid_top() + B.lo());
  if (B.valid_top() < B.hi()) top = std::min(top, B.valid_top() + A.lo());
  T.set_valid_top(top);
  return T;
}

TotalComplex total_complex(const BigradedComplex& B, int t_lo, int t_hi) {
  TotalComplex out;
  std::vector<size_t> dims;
  for (int t = t_lo; t <= t_hi; ++t) {
    size_t off = 0;
    auto& row = out.offset[t];
    for (const auto& [n, col] : B.columns) {
      int q = t + n;
      if (q < col.lo() || q > col.hi()) continue;
      row[n] = off;
      off += col.dim(q);
    }
    dims.push_back(off);
  }
  out.complex = ChainComplex(t_lo, dims);
  for (int t = t_lo + 1; t <= t_hi; ++t) {
    std::vector<SparseVec> cols(dims[t - t_lo]);
    const auto& down = out.offset[t - 1];
    for (auto [n, off] : out.offset[t]) {
      const ChainComplex& col = B.columns.at(n);
      int q = t + n;
      auto ext = B.external.find(n);
      const SparseMatrix* E = nullptr;
      if (ext != B.external.end() && down.count(n + 1) && ext->second.has(q)) E = &ext->second.at(q);
      Rational sg(q % 2 ? -1 : 1);
      for (size_t j = 0; j < col.dim(q); ++j) {
        std::vector<Entry> acc;
        if (down.count(n) && q - 1 >= col.lo())
          for (const auto& e : col.d(q).col(j)) acc.push_back({static_cast<uint32_t>(down.at(n) + e.idx), e.val});
        if (E)
          for (const auto& e : E->col(j)) acc.push_back({static_cast<uint32_t>(down.at(n + 1) + e.idx), sg * e.val});
        cols[off + j] = from_pairs(std::move(acc));
      }
    }
    out.complex.set_d(t, SparseMatrix::from_columns(dims[t - 1 - t_lo], std::move(cols)));
  }
  out.complex.set_valid_top(t_hi - 1);
  int bad = 0;
  if (!out.complex.is_complex(&bad)) {
    std::ostringstream os;
    os << "total differential does not square to zero at t = " << bad;
    throw VerificationFailure(os.str());
  }
  return out;
}

std::vector<uint32_t> FilteredComplex::level(int p, int q) const {
  auto it = F.upper_bound(p);
  if (it == F.begin()) return {};
  --it;
  auto jt = it->second.find(q);
  if (jt == it->second.end()) return {};
  std::vector<uint32_t> v = jt->second;
  std::sort(v.begin(), v.end());
  return v;
}

namespace {

std::vector<uint32_t> difference(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
  std::vector<uint32_t> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::string at_pq(const char* what, int p, int q) {
  std::ostringstream os;
  os << what << " at (p, q) = (" << p << ", " << q << ")";
  return os.str();
}

// Restricts the columns of m to cols and keeps only rows in rows, renumbered.
SparseMatrix restrict(const SparseMatrix& m, const std::vector<uint32_t>& rows, const std::vector<uint32_t>& cols) {
  std::map<uint32_t, uint32_t> pos;
  for (size_t i = 0; i < rows.size(); ++i) pos[rows[i]] = static_cast<uint32_t>(i);
  std::vector<SparseVec> out;
  for (uint32_t j : cols) {
    SparseVec c;
    if (j < m.cols())
      for (const auto& e : m.col(j)) {
        auto it = pos.find(e.idx);
        if (it != pos.end()) c.push_back({it->second, e.val});
      }
    out.push_back(from_pairs(std::move(c)));
  }
  return SparseMatrix::from_columns(rows.size(), std::move(out));
}

}  // namespace

ChainComplex associated_graded(const FilteredComplex& F, int p) {
  const ChainComplex& A = F.A;
  std::vector<std::vector<uint32_t>> S;
  std::vector<size_t> dims;
  for (int q = A.lo(); q <= A.hi(); ++q) {
    S.push_back(difference(F.level(p, q), F.level(p - 1, q)));
    dims.push_back(S.back().size());
  }
  ChainComplex G(A.lo(), dims);
  for (int q = A.lo() + 1; q <= A.hi(); ++q)
    G.set_d(q, restrict(A.d(q), S[q - 1 - A.lo()], S[q - A.lo()]));
  G.set_valid_top(A.valid_top());
  return G;
}

LemmaPQ lemma_PQ(const FilteredComplex& F, int lo, int hi) {
  const ChainComplex& A = F.A;
  if (F.F.empty()) throw InvalidInput("empty filtration");
  int bad = 0;
  if (!A.is_complex(&bad)) throw InvalidInput(at_pq("hypothesis (i): d∘d != 0", 0, bad));
  int p_lo = F.F.begin()->first, p_hi = F.F.rbegin()->first;

  // (ii) increasing filtration by subcomplexes; (iii) exhaustive; (iv) zero below p_lo.
  for (int p = p_lo; p <= p_hi; ++p)
    for (int q = A.lo(); q <= A.hi(); ++q) {
      auto cur = F.level(p, q), prev = F.level(p - 1, q);
      if (!std::includes(cur.begin(), cur.end(), prev.begin(), prev.end()))
        throw InvalidInput(at_pq("hypothesis (ii): filtration not increasing", p, q));
      if (std::adjacent_find(cur.begin(), cur.end()) != cur.end())
        throw InvalidInput(at_pq("repeated filtration index", p, q));
      if (!cur.empty() && cur.back() >= A.dim(q)) throw InvalidInput(at_pq("filtration index beyond basis", p, q));
      if (q > A.lo()) {
        auto below = F.level(p, q - 1);
        for (uint32_t j : cur)
          for (const auto& e : A.d(q).col(j))
            if (!std::binary_search(below.begin(), below.end(), e.idx))
              throw InvalidInput(at_pq("hypothesis (ii): F_p is not a subcomplex", p, q));
      }
    }
  for (int q = A.lo(); q <= A.hi(); ++q)
    if (F.level(p_hi, q).size() != A.dim(q)) throw InvalidInput(at_pq("hypothesis (iii): filtration not exhaustive", p_hi, q));

  LemmaPQ R;
  // (v) H_q(gr_p A) = 0 for p != q within the window.
  std::map<int, ChainComplex> gr;
  for (int p = p_lo; p <= p_hi; ++p) {
    gr[p] = associated_graded(F, p);
    for (int q = lo; q <= hi; ++q)
      if (q != p && homology_rank(gr[p], q) != 0) throw InvalidInput(at_pq("hypothesis (v): H_q(gr_p A) != 0", p, q));
  }
  auto gr_at = [&](int p) -> const ChainComplex& {
    static const ChainComplex zero;
    auto it = gr.find(p);
    return it == gr.end() ? zero : it->second;
  };

  // Spanning sets and bases of P_n and Q_n inside A_n.
  std::map<int, std::vector<SparseVec>> Pb, Qs;
  for (int n = A.lo(); n <= A.hi(); ++n) {
    auto Fn = F.level(n, n), Fm = F.level(n - 1, n - 1);
    std::vector<uint32_t> outside;
    for (uint32_t i = 0; i < A.dim(n - 1); ++i)
      if (!std::binary_search(Fm.begin(), Fm.end(), i)) outside.push_back(i);
    SparseMatrix M = restrict(A.d(n), outside, Fn);
    std::vector<SparseVec> ker;
    if (outside.empty()) {
      for (size_t i = 0; i < Fn.size(); ++i) ker.push_back({{static_cast<uint32_t>(i), Rational(1)}});
    } else {
      ker = kernel_basis(M);
    }
    for (const auto& k : ker) {
      SparseVec v;
      for (const auto& e : k) v.push_back({Fn[e.idx], e.val});
      Pb[n].push_back(from_pairs(std::move(v)));
    }
    for (uint32_t j : F.level(n, n + 1)) {
      auto b = A.d(n + 1).col(j);
      if (!b.empty()) Qs[n].push_back(b);
    }
    for (auto& u : units(A.dim(n), F.level(n - 1, n))) Qs[n].push_back(u);
  }

  // P as a complex, and P/Q via a complement of Q in P.
  std::vector<size_t> pd, qd;
  std::map<int, EchelonBasis> Pred, Qred;
  std::map<int, std::vector<SparseVec>> comp;
  for (int n = A.lo(); n <= A.hi(); ++n) {
    R.dim_P[n] = Pb[n].size();
    pd.push_back(Pb[n].size());
    EchelonBasis pr(A.dim(n), true);
    for (size_t k = 0; k < Pb[n].size(); ++k) pr.insert(Pb[n][k], static_cast<uint32_t>(k));
    for (const auto& v : Qs[n])
      if (!pr.contains(v)) throw VerificationFailure("Q is not contained in P");
    uint32_t base = static_cast<uint32_t>(Qs[n].size());
    EchelonBasis qr(A.dim(n), true, base);
    for (size_t k = 0; k < Qs[n].size(); ++k) qr.insert(Qs[n][k], static_cast<uint32_t>(k));
    R.dim_Q[n] = qr.rank();
    for (const auto& v : Pb[n])
      if (qr.insert(v, base + static_cast<uint32_t>(comp[n].size()))) comp[n].push_back(v);
    R.dim_PQ[n] = comp[n].size();
    qd.push_back(comp[n].size());
    Pred.emplace(n, std::move(pr));
    Qred.emplace(n, std::move(qr));
  }
  R.P = ChainComplex(A.lo(), pd);
  R.PQ = ChainComplex(A.lo(), qd);
  R.P.set_valid_top(A.valid_top());
  R.PQ.set_valid_top(A.valid_top());
  ChainMap incl, proj;
  for (int n = A.lo(); n <= A.hi(); ++n) {
    uint32_t base = static_cast<uint32_t>(Qs[n].size());
    incl.m[n] = SparseMatrix::from_columns(A.dim(n), Pb[n]);
    std::vector<SparseVec> pc;
    for (const auto& v : Pb[n]) {
      SparseVec c = coords_in(Qred.at(n), v, "P/Q projection");
      for (auto& e : c) e.idx -= base;
      pc.push_back(std::move(c));
    }
    proj.m[n] = SparseMatrix::from_columns(comp[n].size(), std::move(pc));
    if (n > A.lo()) {
      std::vector<SparseVec> dp, dq;
      for (const auto& v : Pb[n]) dp.push_back(coords_in(Pred.at(n - 1), A.d(n).apply(v), "P boundary"));
      uint32_t b1 = static_cast<uint32_t>(Qs[n - 1].size());
      for (const auto& v : comp[n]) {
        SparseVec c = coords_in(Qred.at(n - 1), A.d(n).apply(v), "P/Q boundary");
        for (auto& e : c) e.idx -= b1;
        dq.push_back(std::move(c));
      }
      R.P.set_d(n, SparseMatrix::from_columns(pd[n - 1 - A.lo()], std::move(dp)));
      R.PQ.set_d(n, SparseMatrix::from_columns(qd[n - 1 - A.lo()], std::move(dq)));
    }
  }
  if (!R.P.is_complex() || !R.PQ.is_complex()) throw VerificationFailure("P or P/Q fails d∘d = 0");
  if (!is_chain_map(incl, R.P, A) || !is_chain_map(proj, R.P, R.PQ))
    throw VerificationFailure("P -> A or P -> P/Q is not a chain map");

  R.P_to_A_quasi_iso = is_quasi_iso(incl, R.P, A, lo, hi);
  R.P_to_PQ_quasi_iso = is_quasi_iso(proj, R.P, R.PQ, lo, hi);
  R.PQ_matches_gr = true;
  for (int q = lo; q <= hi; ++q) {
    R.H_A[q] = homology_rank(A, q);
    R.H_P[q] = homology_rank(R.P, q);
    R.H_PQ[q] = homology_rank(R.PQ, q);
    R.H_gr[q] = gr.count(q) ? homology_rank(gr.at(q), q) : 0;
    if (R.dim_PQ[q] != R.H_gr[q]) R.PQ_matches_gr = false;
  }

  // Truncation identities, degreewise by dimension.
  R.truncations_hold = true;
  for (int r = p_lo; r <= p_hi; ++r) {
    const ChainComplex& D = gr_at(r);
    for (int k = lo; k <= hi; ++k) {
      size_t ak = A.dim(k);
      auto Fr = units(ak, F.level(r, k)), Fr1 = units(ak, F.level(r - 1, k));
      // gr_r(A/P)_k = dim(F_r + P) - dim(F_{r-1} + P)
      size_t ap = span_dim(ak, Fr, Pb[k]) - span_dim(ak, Fr1, Pb[k]);
      // gr_r(Q)_k = dim(F_r ∩ Q) - dim(F_{r-1} ∩ Q)
      size_t dq = R.dim_Q[k];
      size_t gq = (Fr.size() + dq - span_dim(ak, Fr, Qs[k])) - (Fr1.size() + dq - span_dim(ak, Fr1, Qs[k]));
      size_t low = k < r ? D.dim(k) : k == r ? rank(D.d(r)) : 0;
      size_t high = k > r ? D.dim(k) : k == r ? rank(D.d(r + 1)) : 0;
      if (ap != low || gq != high) R.truncations_hold = false;
    }
  }
  return R;
}

}  // namespace cobarlie::homalg
