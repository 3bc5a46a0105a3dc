#include "cobarlie/dgl.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <functional>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include "cobarlie/errors.hpp"
#include "cobarlie/fincat.hpp"

namespace cobarlie::dgl {

using homalg::ChainMap;
using simplicial::induced_chain_map;

unsigned worker_count() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("COBARLIE_THREADS")) {
    int v = std::atoi(env);
    if (v >= 1) return std::min<unsigned>(hw, static_cast<unsigned>(v));
  }
  return hw;
}

namespace {

// Runs jobs on at most worker_count() threads; rethrows the first exception.
void run_parallel(std::vector<std::function<void()>> jobs) {
  unsigned workers = std::min<unsigned>(worker_count(), static_cast<unsigned>(jobs.size()));
  if (workers <= 1) {
    for (auto& j : jobs) j();
    return;
  }
  std::atomic<size_t> next{0};
  std::exception_ptr err;
  std::mutex mu;
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (size_t i; (i = next++) < jobs.size();) {
        try {
          jobs[i]();
        } catch (...) {
          std::lock_guard<std::mutex> lock(mu);
          if (!err) err = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

ChainMap restrict_map(const ChainMap& f, const homalg::Summand& src, const homalg::Summand& dst, int lo, int hi,
                      int n) {
  ChainMap r;
  for (int q = lo; q <= hi; ++q) {
    SparseMatrix img = f.at(q) * src.inclusion.at(q);
    SparseMatrix back = dst.projection.at(q) * img;
    if (!(dst.inclusion.at(q) * back == img)) {
      std::ostringstream os;
      os << "F(f_" << n << ") leaves the projector image in internal degree " << q;
      throw VerificationFailure(os.str());
    }
    r.m[q] = std::move(back);
  }
  return r;
}

// N(x ⊗ y) for chain vectors of C(X^p)_a and C(X^q)_b.
SparseVec shuffle_vectors(const PowerChains& A, int a, const SparseVec& x, const PowerChains& B, int b,
                          const SparseVec& y, const PowerChains& T) {
  SparseVec out;
  for (const auto& ex : x)
    for (const auto& ey : y) axpy(out, ex.val * ey.val, simplicial::ez_pair(A, a, ex.idx, B, b, ey.idx, T));
  return out;
}

SparseVec block(const SparseVec& v, size_t off, size_t len) {
  SparseVec out;
  for (const auto& e : v)
    if (e.idx >= off && e.idx < off + len) out.push_back({static_cast<uint32_t>(e.idx - off), e.val});
  return out;
}

}  // namespace

PowerTower::PowerTower(SimplicialSpace X, int q_max, size_t budget)
    : X_(std::move(X)), q_max_(q_max), budget_(budget) {}

const PowerChains& PowerTower::at(int n) {
  auto it = cols_.find(n);
  if (it == cols_.end()) it = cols_.emplace(n, std::make_unique<PowerChains>(X_, n, q_max_, budget_)).first;
  return *it->second;
}

const PowerChains& PowerTower::at(int n) const {
  auto it = cols_.find(n);
  if (it == cols_.end()) throw InvalidInput("power " + std::to_string(n) + " has not been built");
  return *it->second;
}

void PowerTower::prepare(int lo, int hi) {
  std::vector<int> todo;
  for (int n = lo; n <= hi; ++n)
    if (!cols_.count(n)) todo.push_back(n);
  std::vector<std::unique_ptr<PowerChains>> built(todo.size());
  std::vector<std::function<void()>> jobs;
  for (size_t k = 0; k < todo.size(); ++k)
    jobs.push_back([&, k] { built[k] = std::make_unique<PowerChains>(X_, todo[k], q_max_, budget_); });
  run_parallel(std::move(jobs));
  for (size_t k = 0; k < todo.size(); ++k) cols_[todo[k]] = std::move(built[k]);
}

CobarR build_R(const SimplicialSpace& X, int N, int q_max, size_t budget) {
  if (N < 1) throw InvalidInput("N must be at least 1");
  if (q_max < 0) throw InvalidInput("q_max must be nonnegative");
  CobarR R;
  R.space = X.name();
  R.N = N;
  R.q_max = q_max;
  R.tower = std::make_shared<PowerTower>(X, q_max, budget);
  R.tower->prepare(1, N);
  for (int n = 1; n <= N; ++n) R.bigraded.columns[n] = R.tower->at(n).complex();
  for (int n = 1; n < N; ++n)
    R.bigraded.external[n] = induced_chain_map(fincat::cobar_differential(n), R.tower->at(n), R.tower->at(n + 1));
  R.total = homalg::total_complex(R.bigraded, 0, q_max - N);
  return R;
}

bool leibniz_square(PowerTower& tower, int p, int q) {
  if (p < 1 || q < 1) throw InvalidInput("leibniz_square needs p, q >= 1");
  const int Q = tower.q_max();
  tower.prepare(1, p + q + 1);
  const PowerChains &Cp = tower.at(p), &Cq = tower.at(q), &Cp1 = tower.at(p + 1), &Cq1 = tower.at(q + 1),
                    &Cn = tower.at(p + q), &Cn1 = tower.at(p + q + 1);
  ChainMap fp = induced_chain_map(fincat::cobar_differential(p), Cp, Cp1);
  ChainMap fq = induced_chain_map(fincat::cobar_differential(q), Cq, Cq1);
  ChainMap fn = induced_chain_map(fincat::cobar_differential(p + q), Cn, Cn1);
  Rational sign(p % 2 ? -1 : 1);
  for (int a = 0; a <= Q; ++a)
    for (int b = 0; a + b <= Q; ++b)
      for (uint32_t i = 0; i < Cp.basis(a).size(); ++i)
        for (uint32_t j = 0; j < Cq.basis(b).size(); ++j) {
          SparseVec lhs = fn.at(a + b).apply(simplicial::ez_pair(Cp, a, i, Cq, b, j, Cn));
          SparseVec rhs = shuffle_vectors(Cp1, a, fp.at(a).col(i), Cq, b, {{j, Rational(1)}}, Cn1);
          axpy(rhs, sign, shuffle_vectors(Cp, a, {{i, Rational(1)}}, Cq1, b, fq.at(b).col(j), Cn1));
          if (!(lhs == rhs)) return false;
        }
  return true;
}

bool Certificates::all() const {
  if (!total_square_zero) return false;
  for (const auto& [n, ok] : closure)
    if (!ok) return false;
  for (const auto& [pq, ok] : bracket)
    if (!ok) return false;
  return true;
}

int CobarLieComplex::stable_top() const {
  int top = q_max - N - 1;
  if (connectivity > 0) top = std::min(top, (connectivity - 1) * (N + 1) - 1);
  return top;
}

CobarLieComplex build_P(const SimplicialSpace& X, int N, int q_max, size_t budget) {
  if (N < 1) throw InvalidInput("N must be at least 1");
  if (q_max < 0) throw InvalidInput("q_max must be nonnegative");
  CobarLieComplex P;
  P.space = X.name();
  P.N = N;
  P.q_max = q_max;
  P.connectivity = X.connectivity();
  P.tower = std::make_shared<PowerTower>(X, q_max, budget);
  PowerTower& tw = *P.tower;
  tw.prepare(1, N);

  for (int n = 1; n <= N; ++n) P.summands[n] = homalg::Summand();
  {
    std::vector<std::function<void()>> jobs;
    for (int n = 1; n <= N; ++n) {
      const PowerChains& C = tw.at(n);
      jobs.push_back([&P, &C, n] {
        ChainMap e = induced_chain_map(fincat::w_element(n).as_morphism(), C, C);
        for (auto& [q, m] : e.m) m = m.scaled(Rational(1, n));
        P.summands.at(n) = homalg::image_summand(C.complex(), e);
      });
    }
    run_parallel(std::move(jobs));
  }

  // Both certificates compare F(a1)∘F(b1) with F(a2)∘F(b2) column by column;
  // F(bk) runs from src to mk, F(ak) from mk to dst.
  auto agree = [&](const fincat::DMorphism& a1, const fincat::DMorphism& b1, const PowerChains& m1,
                   const fincat::DMorphism& a2, const fincat::DMorphism& b2, const PowerChains& m2,
                   const PowerChains& src, const PowerChains& dst) {
    for (int q = 0; q <= q_max; ++q) {
      size_t cells = src.basis(q).size();
      size_t stride = 1;
      if (cells > kFullCheckCells) {
        stride = cells / kSampleCells;
        P.certificates.sampled.insert(src.n());
      }
      for (size_t j = 0; j < cells; j += stride) {
        SparseVec x{{static_cast<uint32_t>(j), Rational(1)}};
        if (!(apply_induced(a1, m1, dst, q, apply_induced(b1, src, m1, q, x)) ==
              apply_induced(a2, m2, dst, q, apply_induced(b2, src, m2, q, x))))
          return false;
      }
    }
    return true;
  };
  for (int n = 1; n < N; ++n) {
    const PowerChains &C = tw.at(n), &D = tw.at(n + 1);
    fincat::DMorphism f(fincat::cobar_differential(n));
    bool ok = agree(f, fincat::w_element(n).as_morphism(), C, fincat::w_element(n + 1).as_morphism(),
                    fincat::DMorphism(fincat::phi(n)), D, C, D);
    P.certificates.closure[n] = ok;
    if (!ok) throw VerificationFailure("closure certificate fails at n = " + std::to_string(n));
    P.bigraded.external[n] = restrict_map(induced_chain_map(f, C, D), P.summands[n], P.summands[n + 1], 0, q_max, n);
  }
  for (int p = 1; p < N; ++p)
    for (int q = 1; p + q <= N; ++q) {
      const PowerChains& C = tw.at(p + q);
      bool ok = agree(fincat::bracket_element(p, q).as_morphism(),
                      fincat::disjoint_union(fincat::w_element(p), fincat::w_element(q)).as_morphism(), C,
                      fincat::w_element(p + q).as_morphism(), fincat::psi(p, q).as_morphism(), C, C, C);
      P.certificates.bracket[{p, q}] = ok;
      if (!ok)
        throw VerificationFailure("bracket certificate fails at (p, q) = (" + std::to_string(p) + ", " +
                                  std::to_string(q) + ")");
    }

  for (int n = 1; n <= N; ++n) P.bigraded.columns[n] = P.summands[n].complex;
  P.total = homalg::total_complex(P.bigraded, 0, q_max - N);
  P.certificates.total_square_zero = true;
  return P;
}

SparseVec bracket_chains(const CobarLieComplex& P, int s, const SparseVec& x, int t, const SparseVec& y) {
  auto& off = P.total.offset;
  if (!off.count(s) || !off.count(t) || !off.count(s + t))
    throw InvalidInput("bracket degrees outside the assembled total complex");
  const PowerTower& tw = *P.tower;
  auto chains = [&](int n) -> const PowerChains& { return tw.at(n); };
  SparseVec out;
  const auto& target = off.at(s + t);
  const Rational st_sign((s * t) % 2 ? -1 : 1);
  for (auto [p, offx] : off.at(s))
    for (auto [q, offy] : off.at(t)) {
      if (p + q > P.N || !target.count(p + q)) continue;
      int a = s + p, b = t + q;
      const auto &Sp = P.summands.at(p), &Sq = P.summands.at(q), &Sn = P.summands.at(p + q);
      SparseVec xp = Sp.inclusion.at(a).apply(block(x, offx, Sp.complex.dim(a)));
      SparseVec yq = Sq.inclusion.at(b).apply(block(y, offy, Sq.complex.dim(b)));
      if (xp.empty() || yq.empty()) continue;
      const PowerChains &Cp = chains(p), &Cq = chains(q), &Cn = chains(p + q);
      SparseVec v = scale(shuffle_vectors(Cp, a, xp, Cq, b, yq, Cn), Rational((p * b) % 2 ? -1 : 1));
      axpy(v, -st_sign * Rational((q * a) % 2 ? -1 : 1), shuffle_vectors(Cq, b, yq, Cp, a, xp, Cn));
      SparseVec c = Sn.projection.at(a + b).apply(v);
      if (!(Sn.inclusion.at(a + b).apply(c) == v)) throw VerificationFailure("bracket leaves the projector image");
      size_t base = target.at(p + q);
      for (const auto& e : c) axpy(out, e.val, SparseVec{{static_cast<uint32_t>(base + e.idx), Rational(1)}});
    }
  return out;
}

HomotopyReport homotopy_ranks(const CobarLieComplex& P, int T, bool representatives) {
  if (T < 1) throw InvalidInput("T must be at least 1");
  if (P.q_max < T + P.N + 1) {
    std::ostringstream os;
    os << "window violation: q_max = " << P.q_max << " < T + N + 1 = " << T + P.N + 1;
    throw InvalidInput(os.str());
  }
  if (T > P.stable_top()) {
    std::ostringstream os;
    os << "window violation: T = " << T << " exceeds the stable range t <= " << P.stable_top()
       << " for N = " << P.N << " (connectivity " << P.connectivity << ")";
    throw InvalidInput(os.str());
  }
  HomotopyReport R;
  R.space = P.space;
  R.N = P.N;
  R.q_max = P.q_max;
  R.T = T;
  for (int t = 1; t <= T; ++t) {
    if (!representatives) {
      R.ranks[t] = homalg::homology_rank(P.total.complex, t);
      continue;
    }
    homalg::HomologyBasis H(P.total.complex, t);
    R.ranks[t] = H.rank();
    R.representatives[t] = H.representatives();
  }
  return R;
}

BracketEntry whitehead_bracket(const CobarLieComplex& P, const HomotopyReport& R, int s, int t, unsigned seed,
                               int probes) {
  if (s < 1 || t < 1 || s + t > R.T) throw InvalidInput("bracket degrees outside the reported window");
  const auto& C = P.total.complex;
  homalg::HomologyBasis target(C, s + t);
  const auto &xs = R.representatives.at(s), &ys = R.representatives.at(t);
  auto pairing = [&](const std::vector<SparseVec>& X, const std::vector<SparseVec>& Y) {
    std::vector<std::vector<Rational>> M;
    for (const auto& x : X)
      for (const auto& y : Y) {
        SparseVec z = bracket_chains(P, s, x, t, y);
        if (!target.is_cycle(z)) throw VerificationFailure("bracket of cycles is not a cycle");
        M.push_back(target.coordinates(z));
      }
    return M;
  };
  BracketEntry E;
  E.s = s;
  E.t = t;
  E.matrix = pairing(xs, ys);

  std::mt19937 rng(seed);
  auto perturb = [&](std::vector<SparseVec> reps, int deg) {
    size_t dim = C.dim(deg + 1);
    for (auto& r : reps) {
      if (dim == 0) break;
      SparseVec z;
      for (int k = 0; k < 3; ++k)
        axpy(z, Rational(static_cast<long long>(rng() % 7) - 3),
             SparseVec{{static_cast<uint32_t>(rng() % dim), Rational(1)}});
      r = add(r, C.d(deg + 1).apply(z));
    }
    return reps;
  };
  for (int k = 0; k < probes; ++k)
    if (pairing(perturb(xs, s), perturb(ys, t)) != E.matrix) E.representative_independent = false;
  return E;
}

std::vector<BracketEntry> bracket_table(const CobarLieComplex& P, const HomotopyReport& R, unsigned seed,
                                        int probes) {
  std::vector<BracketEntry> out;
  for (int s = 1; s <= R.T; ++s)
    for (int t = s; s + t <= R.T; ++t) {
      if (R.ranks.at(s) == 0 || R.ranks.at(t) == 0) continue;
      out.push_back(whitehead_bracket(P, R, s, t, seed + static_cast<unsigned>(100 * s + t), probes));
    }
  return out;
}

std::string describe(const CobarLieComplex& P, int t, const SparseVec& v) {
  std::ostringstream os;
  bool first = true;
  const PowerTower& tw = *P.tower;
  for (auto [n, off] : P.total.offset.at(t)) {
    int q = t + n;
    const auto& S = P.summands.at(n);
    SparseVec c = S.inclusion.at(q).apply(block(v, off, S.complex.dim(q)));
    const PowerChains& C = tw.at(n);
    for (const auto& e : c) {
      if (!first) os << " + ";
      first = false;
      os << e.val.str() << "*" << C.label(q, C.basis(q)[e.idx]);
    }
  }
  return first ? "0" : os.str();
}

}  // namespace cobarlie::dgl
