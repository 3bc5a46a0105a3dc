#pragma once

#include <random>
#include <vector>

#include "cobarlie/homalg.hpp"

namespace testsupport {

using cobarlie::Rational;
using cobarlie::SparseMatrix;
using cobarlie::SparseVec;

// Random unipotent upper-triangular change of basis and its inverse.
inline std::pair<SparseMatrix, SparseMatrix> random_basis_change(std::mt19937& rng, size_t n) {
  std::vector<std::vector<Rational>> U(n, std::vector<Rational>(n));
  for (size_t i = 0; i < n; ++i) {
    U[i][i] = Rational(1);
    for (size_t j = i + 1; j < n; ++j)
      if (rng() % 3 == 0) U[i][j] = Rational(int(rng() % 5) - 2, 1 + rng() % 2);
  }
  // Back-substitution for U^{-1}.
  std::vector<std::vector<Rational>> V(n, std::vector<Rational>(n));
  for (size_t c = 0; c < n; ++c)
    for (size_t ii = n; ii-- > 0;) {
      Rational s = ii == c ? Rational(1) : Rational(0);
      for (size_t k = ii + 1; k < n; ++k) s = s - U[ii][k] * V[k][c];
      V[ii][c] = s;
    }
  auto to_sparse = [n](const std::vector<std::vector<Rational>>& M) {
    std::vector<SparseVec> cols(n);
    for (size_t j = 0; j < n; ++j)
      for (size_t i = 0; i < n; ++i)
        if (!M[i][j].is_zero()) cols[j].push_back({static_cast<uint32_t>(i), M[i][j]});
    return SparseMatrix::from_columns(n, std::move(cols));
  };
  return {to_sparse(U), to_sparse(V)};
}

// A random complex on degrees 0..top, built as a sum of elementary pieces
// (isolated classes and acyclic pairs) in a scrambled basis, so that the
// homology ranks are known in advance.
struct RandomComplex {
  cobarlie::homalg::ChainComplex C;
  std::vector<size_t> betti;
  std::vector<SparseMatrix> to_std, from_std;  // per degree: scrambled <-> elementary basis
  std::vector<std::vector<bool>> is_class;     // per degree: elementary generator is a homology class
};

inline RandomComplex random_complex(std::mt19937& rng, int top) {
  RandomComplex R;
  std::vector<size_t> dims(top + 1, 0);
  R.betti.assign(top + 1, 0);
  R.is_class.assign(top + 1, {});
  // pairs[q] = number of acyclic pairs (q -> q-1).
  std::vector<size_t> pairs(top + 1, 0);
  for (int q = 0; q <= top; ++q) {
    R.betti[q] = rng() % 3;
    if (q > 0) pairs[q] = rng() % 3;
  }
  // Degree q basis: classes, then tops of pairs (q -> q-1), then bottoms of pairs (q+1 -> q).
  for (int q = 0; q <= top; ++q) {
    size_t bottoms = q < top ? pairs[q + 1] : 0;
    dims[q] = R.betti[q] + pairs[q] + bottoms;
    R.is_class[q].assign(dims[q], false);
    for (size_t i = 0; i < R.betti[q]; ++i) R.is_class[q][i] = true;
  }
  R.C = cobarlie::homalg::ChainComplex(0, dims);
  for (int q = 0; q <= top; ++q) {
    auto [U, V] = random_basis_change(rng, dims[q]);
    R.to_std.push_back(V);
    R.from_std.push_back(U);
  }
  for (int q = 1; q <= top; ++q) {
    std::vector<SparseVec> cols(dims[q]);
    for (size_t k = 0; k < pairs[q]; ++k) {
      uint32_t row = static_cast<uint32_t>(R.betti[q - 1] + pairs[q - 1] + k);
      cols[R.betti[q] + k] = {{row, Rational(1 + static_cast<int>(rng() % 3))}};
    }
    SparseMatrix D = SparseMatrix::from_columns(dims[q - 1], std::move(cols));
    R.C.set_d(q, R.from_std[q - 1] * D * R.to_std[q]);
  }
  return R;
}

}  // namespace testsupport
