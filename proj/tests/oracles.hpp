#pragma once

// Slow, independent reference computations used by the unit and acceptance
// tests. Nothing here calls the enumeration or dimension routines under test.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <vector>

#include <Eigen/Dense>

#include "fdalg/algebra_core.hpp"
#include "fdalg/matrix_numeric.hpp"

namespace oracle {

using fdalg::BlockStructure;
using fdalg::CMatrix;

// Every matrix with row i satisfying sum_j e_ij c_j = b_i, filled row by row
// in row-major lexicographic order, kept when each column is hit.
inline std::vector<std::vector<int>> brute_embeddings(const BlockStructure& c, const BlockStructure& b) {
  const int rows = b.size(), cols = c.size();
  std::vector<int> e(static_cast<std::size_t>(rows * cols), 0);
  std::vector<std::vector<int>> out;
  auto rec = [&](auto&& self, int k, int rem) -> void {
    const int i = k / cols, j = k % cols;
    if (k == rows * cols) {
      for (int jj = 0; jj < cols; ++jj) {
        bool hit = false;
        for (int ii = 0; ii < rows; ++ii) hit |= e[static_cast<std::size_t>(ii * cols + jj)] > 0;
        if (!hit) return;
      }
      out.push_back(e);
      return;
    }
    for (int v = 0; v * c[j] <= rem; ++v) {
      const int left = rem - v * c[j];
      if (j == cols - 1 && left != 0) continue;
      e[static_cast<std::size_t>(k)] = v;
      self(self, k + 1, j == cols - 1 ? (i + 1 < rows ? b[i + 1] : 0) : left);
    }
    e[static_cast<std::size_t>(k)] = 0;
  };
  rec(rec, 0, b[0]);
  return out;
}

// Smallest row-major entry vector over all column permutations that map each
// block of c to a block of the same size.
inline std::vector<int> perm_min(const BlockStructure& c, int rows, const std::vector<int>& e) {
  const int cols = c.size();
  std::vector<int> perm(static_cast<std::size_t>(cols));
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<int> best;
  do {
    bool ok = true;
    for (int j = 0; j < cols; ++j) ok &= c[perm[static_cast<std::size_t>(j)]] == c[j];
    if (!ok) continue;
    std::vector<int> v(e.size());
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j)
        v[static_cast<std::size_t>(i * cols + j)] = e[static_cast<std::size_t>(i * cols + perm[static_cast<std::size_t>(j)])];
    if (best.empty() || v < best) best = v;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

// Same minimum as perm_min, by sorting the columns of each run of equal
// block sizes as column vectors.
inline std::vector<int> group_sort(const BlockStructure& c, int rows, const std::vector<int>& e) {
  const int cols = c.size();
  std::vector<std::vector<int>> colv(static_cast<std::size_t>(cols), std::vector<int>(static_cast<std::size_t>(rows)));
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) colv[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = e[static_cast<std::size_t>(i * cols + j)];
  for (int lo = 0; lo < cols;) {
    int hi = lo;
    while (hi < cols && c[hi] == c[lo]) ++hi;
    std::sort(colv.begin() + lo, colv.begin() + hi);
    lo = hi;
  }
  std::vector<int> v(e.size());
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) v[static_cast<std::size_t>(i * cols + j)] = colv[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
  return v;
}

// Non-increasing block lists with sum at most `total` and blocks at most `cap`.
inline std::vector<BlockStructure> candidate_structures(int total, int cap) {
  std::vector<BlockStructure> out;
  std::vector<int> cur;
  auto rec = [&](auto&& self, int rem, int mx) -> void {
    if (!cur.empty()) out.emplace_back(cur);
    for (int x = std::min(mx, rem); x >= 1; --x) {
      cur.push_back(x);
      self(self, rem - x, x);
      cur.pop_back();
    }
  };
  rec(rec, total, cap);
  return out;
}

// Number of classes of unital subalgebras of b: embeddings modulo permutations
// of isomorphic source blocks, over every candidate source structure.
inline int brute_class_count(const BlockStructure& b) {
  const auto blocks = b.blocks();
  const int cap = *std::max_element(blocks.begin(), blocks.end());
  int count = 0;
  for (const auto& c : candidate_structures(b.block_sum(), cap)) {
    std::set<std::vector<int>> reps;
    for (const auto& e : brute_embeddings(c, b)) reps.insert(group_sort(c, b.size(), e));
    count += static_cast<int>(reps.size());
  }
  return count;
}

// Kronecker product I_m (x) a.
inline CMatrix amplify(const CMatrix& a, int m) {
  const auto n = a.rows();
  CMatrix out = CMatrix::Zero(n * m, n * m);
  for (int k = 0; k < m; ++k) out.block(k * n, k * n, n, n) = a;
  return out;
}

// Numerical rank by the ratio test of a plain double-precision SVD.
inline int numeric_rank(const CMatrix& m, double rel = 1e-9) {
  const Eigen::MatrixXcd d = m.cast<std::complex<double>>();
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(d);
  const auto sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) r += sv(i) > rel * sv(0);
  return r;
}

inline double op_norm(const CMatrix& m) {
  const Eigen::MatrixXcd d = m.cast<std::complex<double>>();
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(d);
  return svd.singularValues()(0);
}

// 2x2 rotation by angle t.
inline CMatrix rotation(double t) {
  CMatrix r(2, 2);
  r << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
  return r;
}

}  // namespace oracle
