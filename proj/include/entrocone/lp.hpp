#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "errors.hpp"

namespace entrocone {

struct FeasibilityResult {
  bool feasible = false;
  double infeasibility = 0;  // phase-1 optimum: sum of artificial variables
  std::vector<double> x;
};

/// Phase-1 simplex for {x >= 0 : A x = b}. Dense tableau, Bland's rule.
/// Rows with negative b are negated first. feasible means the artificial
/// sum reached tol or less.
inline FeasibilityResult lp_feasible(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, double tol = 1e-8) {
  const int m = static_cast<int>(A.rows());
  const int n = static_cast<int>(A.cols());
  if (b.size() != m) throw SizeError("lp_feasible: rhs length differs from row count");
  // columns: n structural, m artificial, then rhs
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m + 1, n + m + 1);
  std::vector<int> basis(m);
  for (int i = 0; i < m; ++i) {
    double s = b(i) < 0 ? -1.0 : 1.0;
    T.block(i, 0, 1, n) = s * A.row(i);
    T(i, n + i) = 1;
    T(i, n + m) = s * b(i);
    basis[i] = n + i;
  }
  // objective row holds reduced costs of minimizing the artificial sum
  for (int i = 0; i < m; ++i) T.row(m) -= T.row(i);
  for (int i = 0; i < m; ++i) T(m, n + i) = 0;

  const double eps = 1e-12;
  const int max_iter = 50 * (n + m) + 1000;
  for (int iter = 0; iter < max_iter; ++iter) {
    int enter = -1;
    for (int j = 0; j < n + m; ++j)
      if (T(m, j) < -eps) {
        enter = j;
        break;
      }
    if (enter < 0) break;
    int leave = -1;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < m; ++i) {
      if (T(i, enter) > eps) {
        double ratio = T(i, n + m) / T(i, enter);
        if (ratio < best - eps || (std::abs(ratio - best) <= eps && basis[i] < basis[leave])) {
          best = ratio;
          leave = i;
        }
      }
    }
    if (leave < 0) break;  // cannot happen in phase 1, the objective is bounded below
    T.row(leave) /= T(leave, enter);
    for (int i = 0; i <= m; ++i)
      if (i != leave && T(i, enter) != 0) T.row(i) -= T(i, enter) * T.row(leave);
    basis[leave] = enter;
  }

  FeasibilityResult r;
  r.infeasibility = std::max(0.0, -T(m, n + m));
  r.feasible = r.infeasibility <= tol;
  r.x.assign(n, 0.0);
  for (int i = 0; i < m; ++i)
    if (basis[i] < n) r.x[basis[i]] = T(i, n + m);
  return r;
}

/// Is y a convex combination of the columns of G?
inline bool in_convex_hull(const Eigen::MatrixXd& G, const Eigen::VectorXd& y, double tol = 1e-8) {
  Eigen::MatrixXd A(G.rows() + 1, G.cols());
  A.topRows(G.rows()) = G;
  A.row(G.rows()).setOnes();
  Eigen::VectorXd b(y.size() + 1);
  b.head(y.size()) = y;
  b(y.size()) = 1;
  return lp_feasible(A, b, tol).feasible;
}

}  // namespace entrocone
