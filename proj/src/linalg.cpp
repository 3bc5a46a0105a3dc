#include "cobarlie/linalg.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace cobarlie {

void axpy(SparseVec& y, const Rational& a, const SparseVec& x) {
  if (a.is_zero() || x.empty()) return;
  SparseVec out;
  out.reserve(y.size() + x.size());
  size_t i = 0, j = 0;
  while (i < y.size() || j < x.size()) {
    if (j == x.size() || (i < y.size() && y[i].idx < x[j].idx)) {
      out.push_back(std::move(y[i++]));
    } else if (i == y.size() || x[j].idx < y[i].idx) {
      out.push_back({x[j].idx, a * x[j].val});
      ++j;
    } else {
      Rational s = y[i].val + a * x[j].val;
      if (!s.is_zero()) out.push_back({x[j].idx, std::move(s)});
      ++i;
      ++j;
    }
  }
  y.swap(out);
}

SparseVec scale(const SparseVec& x, const Rational& a) {
  SparseVec out;
  if (a.is_zero()) return out;
  out.reserve(x.size());
  for (const auto& e : x) out.push_back({e.idx, e.val * a});
  return out;
}

SparseVec add(const SparseVec& x, const SparseVec& y) {
  SparseVec out = x;
  axpy(out, Rational(1), y);
  return out;
}

Rational coeff(const SparseVec& x, uint32_t idx) {
  auto it = std::lower_bound(x.begin(), x.end(), idx,
                             [](const Entry& e, uint32_t i) { return e.idx < i; });
  if (it != x.end() && it->idx == idx) return it->val;
  return Rational();
}

SparseVec from_pairs(std::vector<Entry> pairs) {
  std::sort(pairs.begin(), pairs.end(), [](const Entry& a, const Entry& b) { return a.idx < b.idx; });
  SparseVec out;
  out.reserve(pairs.size());
  for (auto& p : pairs) {
    if (!out.empty() && out.back().idx == p.idx) {
      out.back().val += p.val;
      if (out.back().val.is_zero()) out.pop_back();
    } else if (!p.val.is_zero()) {
      out.push_back(std::move(p));
    }
  }
  return out;
}

std::string to_string(const SparseVec& v) {
  std::ostringstream os;
  os << "{";
  for (size_t k = 0; k < v.size(); ++k) os << (k ? ", " : "") << v[k].idx << ": " << v[k].val;
  os << "}";
  return os.str();
}

SparseMatrix SparseMatrix::identity(size_t n) {
  SparseMatrix m(n, n);
  for (size_t i = 0; i < n; ++i) m.columns_[i].push_back({static_cast<uint32_t>(i), Rational(1)});
  return m;
}

SparseMatrix SparseMatrix::from_columns(size_t rows, std::vector<SparseVec> cols) {
  SparseMatrix m;
  m.rows_ = rows;
  m.cols_ = cols.size();
  m.columns_ = std::move(cols);
  for (const auto& c : m.columns_)
    if (!c.empty() && c.back().idx >= rows) throw std::out_of_range("column entry beyond row count");
  return m;
}

size_t SparseMatrix::nnz() const {
  size_t n = 0;
  for (const auto& c : columns_) n += c.size();
  return n;
}

SparseVec SparseMatrix::apply(const SparseVec& v) const {
  std::vector<Entry> acc;
  for (const auto& e : v) {
    if (e.idx >= cols_) throw std::out_of_range("vector longer than matrix domain");
    for (const auto& f : columns_[e.idx]) acc.push_back({f.idx, f.val * e.val});
  }
  return from_pairs(std::move(acc));
}

SparseMatrix SparseMatrix::operator*(const SparseMatrix& o) const {
  if (cols_ != o.rows_) throw std::invalid_argument("matrix product size mismatch");
  SparseMatrix r(rows_, o.cols_);
  for (size_t j = 0; j < o.cols_; ++j) r.columns_[j] = apply(o.columns_[j]);
  return r;
}

SparseMatrix SparseMatrix::operator+(const SparseMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix sum size mismatch");
  SparseMatrix r = *this;
  for (size_t j = 0; j < cols_; ++j) axpy(r.columns_[j], Rational(1), o.columns_[j]);
  return r;
}

SparseMatrix SparseMatrix::operator-(const SparseMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix difference size mismatch");
  SparseMatrix r = *this;
  for (size_t j = 0; j < cols_; ++j) axpy(r.columns_[j], Rational(-1), o.columns_[j]);
  return r;
}

SparseMatrix SparseMatrix::scaled(const Rational& a) const {
  SparseMatrix r(rows_, cols_);
  for (size_t j = 0; j < cols_; ++j) r.columns_[j] = scale(columns_[j], a);
  return r;
}

SparseMatrix SparseMatrix::transpose() const {
  SparseMatrix t(cols_, rows_);
  for (size_t j = 0; j < cols_; ++j)
    for (const auto& e : columns_[j]) t.columns_[e.idx].push_back({static_cast<uint32_t>(j), e.val});
  return t;
}

SparseMatrix SparseMatrix::permute_rows(const std::vector<uint32_t>& perm) const {
  SparseMatrix r(rows_, cols_);
  for (size_t j = 0; j < cols_; ++j) {
    std::vector<Entry> c;
    for (const auto& e : columns_[j]) c.push_back({perm.at(e.idx), e.val});
    r.columns_[j] = from_pairs(std::move(c));
  }
  return r;
}

bool SparseMatrix::operator==(const SparseMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) return false;
  for (size_t j = 0; j < cols_; ++j) {
    const auto& a = columns_[j];
    const auto& b = o.columns_[j];
    if (a.size() != b.size()) return false;
    for (size_t k = 0; k < a.size(); ++k)
      if (a[k].idx != b[k].idx || a[k].val != b[k].val) return false;
  }
  return true;
}

std::string SparseMatrix::triplets() const {
  std::ostringstream os;
  os << rows_ << " " << cols_ << " " << nnz() << "\n";
  for (size_t j = 0; j < cols_; ++j)
    for (const auto& e : columns_[j]) os << e.idx << " " << j << " " << e.val << "\n";
  return os.str();
}

EchelonBasis::EchelonBasis(size_t ambient, bool track, uint32_t track_from)
    : ambient_(ambient), track_(track), track_from_(track_from), pivot_(ambient, -1) {}

SparseVec EchelonBasis::reduce(SparseVec v, SparseVec* comb) const {
  if (comb) comb->clear();
  while (!v.empty()) {
    uint32_t low = v.back().idx;
    if (low >= ambient_) throw std::out_of_range("vector outside ambient space");
    int32_t p = pivot_[low];
    if (p < 0) break;
    Rational c = v.back().val;
    axpy(v, -c, vecs_[p]);
    if (comb && track_) axpy(*comb, c, combs_[p]);
  }
  return v;
}

bool EchelonBasis::insert(SparseVec v, uint32_t tag, SparseVec* relation) {
  SparseVec comb;
  v = reduce(std::move(v), track_ ? &comb : nullptr);
  if (v.empty()) {
    if (relation && track_) {
      // v_in - sum comb_k input_k = 0
      *relation = scale(comb, Rational(-1));
      if (tag >= track_from_) axpy(*relation, Rational(1), SparseVec{{tag, Rational(1)}});
    }
    return false;
  }
  Rational inv = Rational(1) / v.back().val;
  pivot_[v.back().idx] = static_cast<int32_t>(vecs_.size());
  vecs_.push_back(scale(v, inv));
  if (track_) {
    // stored = inv * (input_tag - comb)
    SparseVec c = scale(comb, -inv);
    if (tag >= track_from_) axpy(c, inv, SparseVec{{tag, Rational(1)}});
    combs_.push_back(std::move(c));
  }
  return true;
}

size_t rank(const SparseMatrix& m) {
  EchelonBasis b(m.rows());
  for (size_t j = 0; j < m.cols(); ++j) b.insert(m.col(j));
  return b.rank();
}

std::vector<SparseVec> kernel_basis(const SparseMatrix& m) {
  EchelonBasis b(m.rows(), true);
  std::vector<SparseVec> ker;
  for (size_t j = 0; j < m.cols(); ++j) {
    SparseVec rel;
    if (!b.insert(m.col(j), static_cast<uint32_t>(j), &rel)) ker.push_back(std::move(rel));
  }
  return ker;
}

size_t bareiss_rank(const SparseMatrix& m) {
  size_t R = m.rows(), C = m.cols();
  std::vector<std::vector<mpz_class>> a(R, std::vector<mpz_class>(C));
  for (size_t j = 0; j < C; ++j) {
    mpz_class l = 1;
    for (const auto& e : m.col(j)) {
      mpq_class q = e.val.to_mpq();
      mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den_mpz_t());
    }
    for (const auto& e : m.col(j)) {
      mpq_class q = e.val.to_mpq() * l;
      a[e.idx][j] = q.get_num();
    }
  }
  mpz_class prev = 1;
  size_t r = 0;
  for (size_t c = 0; c < C && r < R; ++c) {
    size_t p = r;
    while (p < R && a[p][c] == 0) ++p;
    if (p == R) continue;
    std::swap(a[p], a[r]);
    for (size_t i = r + 1; i < R; ++i) {
      for (size_t k = c + 1; k < C; ++k) {
        a[i][k] = (a[r][c] * a[i][k] - a[i][c] * a[r][k]);
        mpz_divexact(a[i][k].get_mpz_t(), a[i][k].get_mpz_t(), prev.get_mpz_t());
      }
      a[i][c] = 0;
    }
    prev = a[r][c];
    ++r;
  }
  return r;
}

size_t span_rank(size_t ambient, const std::vector<SparseVec>& vs) {
  EchelonBasis b(ambient);
  for (const auto& v : vs) b.insert(v);
  return b.rank();
}

}  // namespace cobarlie
