#include "fuzzyblock/kbt/simplex.hpp"

#include <cmath>
#include <limits>

#include "fuzzyblock/error.hpp"

namespace fuzzyblock::kbt {

namespace {

constexpr double kPivotEps = 1e-12;
constexpr double kFeasEps = 1e-9;

// Slack form: x_B = b - A x_N,  z = v + c x_N.
struct Tableau {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  Eigen::VectorXd c;
  double v = 0.0;
  std::vector<int> nonbasic;
  std::vector<int> basic;

  int rows() const { return static_cast<int>(A.rows()); }
  int cols() const { return static_cast<int>(A.cols()); }

  void pivot(int l, int e) {
    const double inv = 1.0 / A(l, e);
    b(l) *= inv;
    for (int j = 0; j < cols(); ++j) {
      if (j != e) A(l, j) *= inv;
    }
    A(l, e) = inv;
    for (int i = 0; i < rows(); ++i) {
      if (i == l) continue;
      const double f = A(i, e);
      if (f == 0.0) continue;
      b(i) -= f * b(l);
      for (int j = 0; j < cols(); ++j) {
        if (j != e) A(i, j) -= f * A(l, j);
      }
      A(i, e) = -f * inv;
    }
    const double f = c(e);
    v += f * b(l);
    for (int j = 0; j < cols(); ++j) {
      if (j != e) c(j) -= f * A(l, j);
    }
    c(e) = -f * inv;
    std::swap(nonbasic[e], basic[l]);
  }

  // Bland's rule: lowest variable id enters; ties in the ratio test leave by lowest id.
  LpStatus run(int max_iter) {
    for (int iter = 0; iter < max_iter; ++iter) {
      int e = -1;
      for (int j = 0; j < cols(); ++j) {
        if (c(j) > kPivotEps && (e < 0 || nonbasic[j] < nonbasic[e])) e = j;
      }
      if (e < 0) return LpStatus::Optimal;
      int l = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < rows(); ++i) {
        if (A(i, e) <= kPivotEps) continue;
        const double ratio = b(i) / A(i, e);
        if (l < 0 || ratio < best - kPivotEps || (std::abs(ratio - best) <= kPivotEps && basic[i] < basic[l])) {
          best = ratio;
          l = i;
        }
      }
      if (l < 0) return LpStatus::Unbounded;
      pivot(l, e);
    }
    return LpStatus::IterationLimit;
  }
};

}  // namespace

LpResult solve_lp(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, const Eigen::VectorXd& c) {
  const int m = static_cast<int>(A.rows());
  const int n = static_cast<int>(A.cols());
  require(b.size() == m && c.size() == n, "solve_lp: dimension mismatch");
  const int max_iter = 200 * (m + n) + 1000;

  Tableau t;
  t.nonbasic.resize(n);
  t.basic.resize(m);
  for (int j = 0; j < n; ++j) t.nonbasic[j] = j;
  for (int i = 0; i < m; ++i) t.basic[i] = n + i;

  LpResult out;
  const bool origin_feasible = m == 0 || b.minCoeff() >= 0.0;
  if (origin_feasible) {
    t.A = A;
    t.b = b;
    t.c = c;
  } else {
    // Phase 1: maximize -x0 subject to A x - x0 <= b.
    const int x0 = n + m;
    t.A.resize(m, n + 1);
    t.A.leftCols(n) = A;
    t.A.col(n).setConstant(-1.0);
    t.b = b;
    t.c = Eigen::VectorXd::Zero(n + 1);
    t.c(n) = -1.0;
    t.nonbasic.push_back(x0);
    int l = 0;
    b.minCoeff(&l);
    t.pivot(l, n);
    const LpStatus s = t.run(max_iter);
    if (s != LpStatus::Optimal) {
      out.status = LpStatus::IterationLimit;
      return out;
    }
    if (t.v < -kFeasEps) {
      out.status = LpStatus::Infeasible;
      return out;
    }
    for (int i = 0; i < m; ++i) {
      if (t.basic[i] != x0) continue;
      int e = -1;
      for (int j = 0; j < t.cols(); ++j) {
        if (std::abs(t.A(i, j)) > kPivotEps && (e < 0 || t.nonbasic[j] < t.nonbasic[e])) e = j;
      }
      if (e >= 0) t.pivot(i, e);
      break;
    }
    int col = -1;
    for (int j = 0; j < t.cols(); ++j) {
      if (t.nonbasic[j] == x0) col = j;
    }
    if (col < 0) {
      out.status = LpStatus::IterationLimit;
      return out;
    }
    const int last = t.cols() - 1;
    if (col != last) {
      t.A.col(col).swap(t.A.col(last));
      std::swap(t.nonbasic[col], t.nonbasic[last]);
    }
    t.A.conservativeResize(m, n);
    t.nonbasic.pop_back();

    // Restate the original objective over the current nonbasic set.
    t.c = Eigen::VectorXd::Zero(n);
    t.v = 0.0;
    for (int j = 0; j < n; ++j) {
      if (t.nonbasic[j] < n) t.c(j) += c(t.nonbasic[j]);
    }
    for (int i = 0; i < m; ++i) {
      if (t.basic[i] >= n) continue;
      const double ck = c(t.basic[i]);
      t.v += ck * t.b(i);
      t.c -= ck * t.A.row(i).transpose();
    }
  }

  out.status = t.run(max_iter);
  if (out.status != LpStatus::Optimal) return out;
  out.objective = t.v;
  out.x = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < m; ++i) {
    if (t.basic[i] < n) out.x(t.basic[i]) = t.b(i);
  }
  return out;
}

}  // namespace fuzzyblock::kbt
