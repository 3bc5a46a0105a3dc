#pragma once

#include <string>
#include <vector>

#include "cobarlie/bar.hpp"
#include "cobarlie/dgl.hpp"

namespace cobarlie::report {

// Outcome of one identity check in the verify suite.
struct IdentityResult {
  std::string identity;
  std::string instance;  // e.g. "n=3" or "p=1,q=2"
  bool pass = true;
  std::string counterexample;  // first offending term when pass is false
};

// Exact numbers: integers stay integers, everything else is a "p/q" string.
// All writers produce stable, byte-identical output for equal inputs.
std::string homotopy_json(const dgl::CobarLieComplex& P, const dgl::HomotopyReport& R,
                          const std::vector<dgl::BracketEntry>& brackets);
std::string bar_json(const bar::QBar& Q, int T);
std::string comparison_json(const bar::Comparison& C);
std::string verify_json(const std::vector<IdentityResult>& results, int n_max, int pq_max, bool flipped);

}  // namespace cobarlie::report
