#include "cobarlie/report.hpp"

#include "json.hpp"

namespace cobarlie::report {

namespace {

using ojson = nlohmann::ordered_json;

ojson exact(const Rational& r) {
  if (r.is_integer()) {
    try {
      return std::stoll(r.str());
    } catch (const std::out_of_range&) {
    }
  }
  return r.str();
}

ojson ranks(const std::map<int, size_t>& m) {
  ojson o = ojson::object();
  for (const auto& [t, r] : m) o[std::to_string(t)] = r;
  return o;
}

std::string dump(const ojson& j) { return j.dump(2) + "\n"; }

}  // namespace

std::string homotopy_json(const dgl::CobarLieComplex& P, const dgl::HomotopyReport& R,
                          const std::vector<dgl::BracketEntry>& brackets) {
  ojson j;
  j["space"] = R.space;
  j["N"] = R.N;
  j["q_max"] = R.q_max;
  j["T"] = R.T;
  j["stable_top"] = P.stable_top();
  j["ranks"] = ranks(R.ranks);
  j["brackets"] = ojson::array();
  for (const auto& E : brackets) {
    ojson m = ojson::array();
    for (const auto& row : E.matrix) {
      ojson r = ojson::array();
      for (const auto& x : row) r.push_back(exact(x));
      m.push_back(r);
    }
    j["brackets"].push_back(
        {{"s", E.s}, {"t", E.t}, {"matrix", m}, {"representative_independent", E.representative_independent}});
  }
  ojson c;
  ojson closure = ojson::object();
  for (const auto& [n, ok] : P.certificates.closure) closure[std::to_string(n)] = ok;
  ojson br = ojson::object();
  for (const auto& [pq, ok] : P.certificates.bracket)
    br[std::to_string(pq.first) + "," + std::to_string(pq.second)] = ok;
  c["closure"] = closure;
  c["bracket"] = br;
  c["total_square_zero"] = P.certificates.total_square_zero;
  if (!P.certificates.sampled.empty()) c["sampled_columns"] = P.certificates.sampled;
  c["all"] = P.certificates.all();
  j["certificates"] = c;
  return dump(j);
}

std::string bar_json(const bar::QBar& Q, int T) {
  ojson j;
  j["algebra"] = Q.bar.A.name;
  j["N"] = Q.bar.N;
  j["t_max"] = Q.bar.t_max;
  j["T"] = T;
  std::map<int, size_t> b, q, c;
  for (int k = 1; k <= T; ++k) {
    b[k] = Q.bar.cohomology_rank(k);
    q[k] = Q.cohomology_rank(k);
    if (k >= 2) c[k] = Q.cobracket_rank(k);
  }
  j["bar_ranks"] = ranks(b);
  j["qbar_ranks"] = ranks(q);
  j["cobracket_ranks"] = ranks(c);
  ojson dims = ojson::array();
  for (const auto& [nt, d] : Q.dim)
    dims.push_back({{"n", nt.first}, {"t", nt.second}, {"dim", d}, {"dual_projector_rank", Q.dual_projector_rank.at(nt)}});
  j["qbar_dims"] = dims;
  j["certificates"] = {{"functorial_differential", Q.bar.functorial_agrees},
                       {"dual_projector_kills_shuffles", Q.dual_projector_kills_shuffles}};
  return dump(j);
}

std::string comparison_json(const bar::Comparison& C) {
  ojson j;
  j["space"] = C.space;
  j["algebra"] = C.algebra;
  j["N"] = C.N;
  j["T"] = C.T;
  j["q_max"] = C.q_max;
  j["t_max"] = C.t_max;
  j["cobar_ranks"] = ranks(C.cobar_ranks);
  j["bar_ranks"] = ranks(C.bar_ranks);
  j["bracket_ranks"] = ranks(C.bracket_ranks);
  j["cobracket_ranks"] = ranks(C.cobracket_ranks);
  j["ranks_match"] = C.ranks_match;
  j["brackets_match"] = C.brackets_match;
  j["match"] = C.ranks_match && C.brackets_match;
  return dump(j);
}

std::string verify_json(const std::vector<IdentityResult>& results, int n_max, int pq_max, bool flipped) {
  ojson j;
  j["n_max"] = n_max;
  j["pq_max"] = pq_max;
  if (flipped) j["debug_flip_sign"] = true;
  bool all = true;
  ojson arr = ojson::array();
  for (const auto& r : results) {
    ojson e{{"identity", r.identity}, {"instance", r.instance}, {"pass", r.pass}};
    if (!r.pass) e["counterexample"] = r.counterexample;
    arr.push_back(e);
    all = all && r.pass;
  }
  j["results"] = arr;
  j["all_pass"] = all;
  return dump(j);
}

}  // namespace cobarlie::report
