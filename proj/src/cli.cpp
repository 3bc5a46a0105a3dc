#include "cobarlie/cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "cobarlie/bar.hpp"
#include "cobarlie/dgl.hpp"
#include "cobarlie/errors.hpp"
#include "cobarlie/fincat.hpp"
#include "cobarlie/freelie.hpp"
#include "cobarlie/report.hpp"

namespace cobarlie::cli {

using report::IdentityResult;

namespace {

std::string first_term(const fincat::DMorphism& diff) {
  if (diff.is_zero()) return "";
  const auto& [f, c] = *diff.terms().begin();
  return c.str() + "*" + f.str();
}

IdentityResult check(std::string identity, std::string instance, const fincat::DMorphism& lhs,
                     const fincat::DMorphism& rhs) {
  IdentityResult r{std::move(identity), std::move(instance), lhs == rhs, ""};
  if (!r.pass) r.counterexample = first_term(lhs - rhs);
  return r;
}

std::string n_inst(int n) { return "n=" + std::to_string(n); }
std::string pq_inst(int p, int q) { return "p=" + std::to_string(p) + ",q=" + std::to_string(q); }

}  // namespace

std::vector<IdentityResult> run_verify(int n_max, int pq_max, bool flip_sign) {
  using namespace fincat;
  if (n_max < 1 || pq_max < 2) throw InvalidInput("verify needs n_max >= 1 and pq_max >= 2");
  if (n_max > 8 || pq_max > 8) throw InvalidInput("verify sizes above 8 are not supported");
  std::vector<IdentityResult> out;
  auto w = [flip_sign](int n) { return w_element(n, flip_sign); };

  for (int n = 1; n <= n_max; ++n) {
    GroupRingElement s = s_element(n);
    out.push_back(check("s_n^2 = n s_n", n_inst(n), (s * s).as_morphism(), (s * Rational(n)).as_morphism()));
  }
  for (int n = 1; n <= n_max; ++n) {
    GroupRingElement x = w(n);
    out.push_back(check("w_n^2 = n w_n", n_inst(n), (x * x).as_morphism(), (x * Rational(n)).as_morphism()));
  }
  for (int n = 1; n <= n_max; ++n)
    out.push_back(check("f_n f_{n+1} = 0", n_inst(n), compose(cobar_differential(n), cobar_differential(n + 1)),
                        DMorphism(n + 2, n)));
  for (int p = 1; p < pq_max; ++p)
    for (int q = 1; p + q <= pq_max; ++q) {
      DMorphism lhs = disjoint_union(cobar_differential(p), DMorphism::identity(q)) +
                      disjoint_union(DMorphism::identity(p), cobar_differential(q)) * Rational(p % 2 ? -1 : 1);
      out.push_back(check("f_p ⊔ Id_q + (-1)^p Id_p ⊔ f_q = f_{p+q}", pq_inst(p, q), lhs, cobar_differential(p + q)));
    }
  for (int n = 1; n <= std::min(n_max, 5); ++n) {
    DMorphism wf = compose(w(n).as_morphism(), cobar_differential(n));
    DMorphism ph = wf * Rational(1, n + 1);
    out.push_back(check("w_n f_n = phi_n w_{n+1}", n_inst(n), wf, compose(ph, w(n + 1).as_morphism())));
  }
  for (int p = 1; p < pq_max; ++p)
    for (int q = 1; p + q <= pq_max; ++q) {
      GroupRingElement wb = disjoint_union(w(p), w(q)) * bracket_element(p, q);
      GroupRingElement ps = wb * Rational(1, p + q);
      out.push_back(check("(w_p ⊔ w_q) B_{p,q} = psi_{p,q} w_{p+q}", pq_inst(p, q), wb.as_morphism(),
                          (ps * w(p + q)).as_morphism()));
    }
  // w_n realizes the left-normed bracket on generators of mixed parity.
  freelie::GradedGenerators gens({"a", "b", "c"}, {1, 2, 0});
  for (int n = 1; n <= std::min(n_max, 5); ++n) {
    IdentityResult r{"w_n acts as the left-normed bracket", n_inst(n), true, ""};
    for (const auto& word : freelie::all_words(3, n)) {
      Tensor lhs = freelie::right_action(w(n), Tensor::word(word), gens);
      Tensor rhs = freelie::left_normed(word, gens);
      if (!(lhs == rhs)) {
        r.pass = false;
        r.counterexample = "word " + Tensor::word(word).str(gens.names) + ": " + (lhs - rhs).str(gens.names);
        break;
      }
    }
    out.push_back(r);
  }
  for (int n = 1; n <= n_max; ++n)
    for (bool odd : {false, true}) {
      IdentityResult r{"dim L_n: rank = trace / n", n_inst(n) + (odd ? ",odd" : ",even"), true, ""};
      auto lr = freelie::lie_rank_both(n, freelie::GradedGenerators::uniform(2, odd ? 1 : 0));
      if (!(Rational(static_cast<long long>(lr.by_rank)) == lr.by_trace)) {
        r.pass = false;
        r.counterexample = "rank " + std::to_string(lr.by_rank) + " vs trace/n " + lr.by_trace.str();
      }
      out.push_back(r);
    }
  return out;
}

namespace {

struct Config {
  std::string space, cdga, out;
  int N = 0, T = 0, q_max = 0;
  unsigned seed = 0;
  size_t budget = 0;
  int n_max = 6, pq_max = 6;
  bool flip = false, verbose = false;
};

void emit(const Config& c, const std::string& text, std::ostream& out) {
  if (c.out.empty() || c.out == "-") {
    out << text;
    return;
  }
  std::ofstream f(c.out);
  if (!f) throw InvalidInput("cannot write " + c.out);
  f << text;
}

// Window rule applied before any construction.
void check_window(const simplicial::SimplicialSpace& X, const Config& c) {
  if (c.N < 1) throw InvalidInput("window violation: N must be at least 1");
  if (c.T < 1) throw InvalidInput("window violation: T must be at least 1");
  if (c.q_max < c.T + c.N + 1)
    throw InvalidInput("window violation: q_max = " + std::to_string(c.q_max) + " < T + N + 1 = " +
                       std::to_string(c.T + c.N + 1));
  int r = X.connectivity();
  int top = std::min(c.q_max - c.N - 1, (r - 1) * (c.N + 1) - 1);
  if (c.T > top)
    throw InvalidInput("window violation: T = " + std::to_string(c.T) + " exceeds the stable range " +
                       std::to_string(top) + " for N = " + std::to_string(c.N) + " on a space with connectivity " +
                       std::to_string(r) + "; raise N");
}

int cmd_verify(const Config& c, std::ostream& out, std::ostream& err) {
  auto results = run_verify(c.n_max, c.pq_max, c.flip);
  bool all = true;
  for (const auto& r : results) {
    all = all && r.pass;
    if (!r.pass) err << "FAIL " << r.identity << " [" << r.instance << "]: " << r.counterexample << "\n";
  }
  emit(c, report::verify_json(results, c.n_max, c.pq_max, c.flip), out);
  return all ? kOk : kVerificationFailed;
}

int cmd_homotopy(const Config& c, std::ostream& out, std::ostream& err) {
  auto X = simplicial::load_space(c.space);
  check_window(X, c);
  if (c.verbose) err << "building P^" << c.N << " on " << X.name() << " up to internal degree " << c.q_max << "\n";
  auto P = dgl::build_P(X, c.N, c.q_max, c.budget);
  auto R = dgl::homotopy_ranks(P, c.T);
  auto table = dgl::bracket_table(P, R, c.seed, 1);
  emit(c, report::homotopy_json(P, R, table), out);
  bool ok = P.certificates.all();
  for (const auto& E : table) ok = ok && E.representative_independent;
  return ok ? kOk : kVerificationFailed;
}

int cmd_bar(const Config& c, std::ostream& out, std::ostream& err) {
  auto A = bar::load_cdga(c.cdga);
  if (c.N < 1 || c.T < 1) throw InvalidInput("bar needs N >= 1 and T >= 1");
  if (c.verbose) err << "bar construction of " << A.name << "\n";
  int t_max = c.q_max > 0 ? c.q_max : c.T + c.N + 1;
  if (t_max < c.T + c.N + 1) throw InvalidInput("window violation: t_max < T + N + 1");
  auto Q = bar::qbar(A, c.N, t_max);
  emit(c, report::bar_json(Q, c.T), out);
  return kOk;
}

int cmd_compare(const Config& c, std::ostream& out, std::ostream& err) {
  auto X = simplicial::load_space(c.space);
  auto A = bar::load_cdga(c.cdga);
  Config w = c;
  w.q_max = c.T + c.N + 1;
  check_window(X, w);
  if (c.verbose) err << "comparing " << X.name() << " with " << A.name << "\n";
  auto C = bar::compare(X, A, c.N, c.T);
  emit(c, report::comparison_json(C), out);
  return C.ranks_match && C.brackets_match ? kOk : kVerificationFailed;
}

int cmd_show(const Config& c, std::ostream& out) {
  std::string text;
  if (!c.space.empty()) text += simplicial::to_json(simplicial::load_space(c.space)) + "\n";
  if (!c.cdga.empty()) text += bar::to_json(bar::load_cdga(c.cdga)) + "\n";
  if (text.empty()) throw InvalidInput("show needs --space or --cdga");
  emit(c, text, out);
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"cobarlie: rational homotopy Lie algebras from the cobar construction"};
  app.require_subcommand(1);
  Config c;
  std::optional<int> qmax;

  auto common = [&](CLI::App* s) {
    s->add_option("--out,-o", c.out, "output path (default stdout)");
    s->add_flag("--verbose,-v", c.verbose, "progress on stderr");
  };
  auto window = [&](CLI::App* s) {
    s->add_option("-N", c.N, "truncation degree")->required();
    s->add_option("-T", c.T, "top degree t")->required();
  };

  auto* verify = app.add_subcommand("verify", "run the exact identity suites");
  verify->add_option("--n-max", c.n_max, "largest n for single-index identities")->capture_default_str();
  verify->add_option("--pq-max", c.pq_max, "largest p + q for two-index identities")->capture_default_str();
  verify->add_flag("--debug-flip-sign", c.flip, "mutation testing only: flip one sign in w_n");
  common(verify);

  auto* homotopy = app.add_subcommand("homotopy", "homotopy ranks and brackets from P^N");
  homotopy->add_option("--space", c.space, "space expression or JSON path")->required();
  window(homotopy);
  homotopy->add_option("--qmax", qmax, "internal degree bound (default T + N + 1)");
  homotopy->add_option("--seed", c.seed, "seed for representative probes");
  homotopy->add_option("--budget", c.budget, "cap on basis elements per column");
  common(homotopy);

  auto* barc = app.add_subcommand("bar", "bar construction and indecomposables of a CDGA");
  barc->add_option("--cdga", c.cdga, "trivial, H(<expr>) or a JSON path")->required();
  window(barc);
  barc->add_option("--qmax", qmax, "internal degree bound (default T + N + 1)");
  common(barc);

  auto* cmp = app.add_subcommand("compare", "compare P^N with the indecomposables of a CDGA");
  cmp->add_option("--space", c.space, "space expression or JSON path")->required();
  cmp->add_option("--cdga", c.cdga, "trivial, H(<expr>) or a JSON path")->required();
  window(cmp);
  cmp->add_option("--seed", c.seed, "unused; accepted for uniformity");
  common(cmp);

  auto* show = app.add_subcommand("show", "print the JSON form of a space or CDGA");
  show->add_option("--space", c.space, "space expression or JSON path");
  show->add_option("--cdga", c.cdga, "trivial, H(<expr>) or a JSON path");
  common(show);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInvalidInput;
  }
  if (qmax) c.q_max = *qmax;
  else c.q_max = c.T + c.N + 1;

  try {
    if (*verify) return cmd_verify(c, out, err);
    if (*homotopy) return cmd_homotopy(c, out, err);
    if (*barc) {
      if (!qmax) c.q_max = 0;
      return cmd_bar(c, out, err);
    }
    if (*cmp) return cmd_compare(c, out, err);
    return cmd_show(c, out);
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const BudgetExceeded& e) {
    err << "budget exceeded: " << e.what() << "\n";
    return kBudgetExceeded;
  } catch (const VerificationFailure& e) {
    err << "verification failed: " << e.what() << "\n";
    return kVerificationFailed;
  }
}

}  // namespace cobarlie::cli
