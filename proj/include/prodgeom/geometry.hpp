#pragma once

/**
 * @file geometry.hpp
 * @brief Extrinsic geometry of the graph hypersurface L(x) = (x, f(x)) in
 * Euclidean (n+1)-space.
 *
 * With p = grad f, H = Hess f and W = sqrt(1 + |p|^2):
 *
 *   metric                    g = I + p p^T          (det g = W^2)
 *   unit normal               xi = (-p, 1) / W
 *   second fundamental form   h = H / W
 *   shape operator            S = g^{-1} h
 *   Gauss-Kronecker           G = det S = det H / W^(n+2)
 *   Riemann (Gauss equation)  R_ijkl = h_ik h_jl - h_il h_jk
 *
 * The graph is flat exactly when every R_ijkl vanishes, i.e. every 2x2
 * minor of the Hessian is zero (rank H <= 1).
 */

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "prodgeom/autodiff.hpp"
#include "prodgeom/prodfun.hpp"

namespace prodgeom {

inline constexpr double kFlatnessThreshold = 1e-9;
inline constexpr double kVanishingCurvatureThreshold = 1e-10;

struct GraphGeometry {
  Point point;
  double value = 0.0;
  double W = 1.0;
  Vector unit_normal;
  Matrix metric;
  Matrix second_fundamental_form;
  Matrix shape_operator;
  Vector principal_curvatures;  // ascending
  double hessian_det = 0.0;
  double gauss_kronecker = 0.0;
  double scaled_gauss_kronecker = 0.0;  // |det H| / prod_i |row_i(H)|
  double max_riemann = 0.0;             // max |R_ijkl|
  double flatness_residual = 0.0;       // max |R_ijkl| / (1 + |h|_F^2)
};

/// Product of row norms of m, the Hadamard bound on |det m|.
inline double hadamard_bound(const Matrix& m) {
  double b = 1.0;
  for (Eigen::Index r = 0; r < m.rows(); ++r) b *= m.row(r).norm();
  return b;
}

/// |det m| relative to its Hadamard bound; 0 for a zero row.
inline double relative_det(const Matrix& m, double det) {
  const double b = hadamard_bound(m);
  return b > 0.0 ? std::abs(det) / b : 0.0;
}

/// (x, f(x)).
inline Point graph_point(const FunctionExpr& expr, std::span<const double> x) {
  Point p(x.begin(), x.end());
  p.push_back(evaluate(expr, x));
  return p;
}

/// Largest |h_ik h_jl - h_il h_jk| over i < j, k < l.
inline double max_riemann_component(const Matrix& h) {
  const Eigen::Index n = h.rows();
  double m = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j)
      for (Eigen::Index k = 0; k < n; ++k)
        for (Eigen::Index l = k + 1; l < n; ++l)
          m = std::max(m, std::abs(h(i, k) * h(j, l) - h(i, l) * h(j, k)));
  return m;
}

inline GraphGeometry graph_geometry_from_jet(const Jet2& jet, std::span<const double> x) {
  const Eigen::Index n = jet.gradient.size();
  GraphGeometry g;
  g.point.assign(x.begin(), x.end());
  g.value = jet.value;
  g.W = std::sqrt(1.0 + jet.gradient.squaredNorm());

  g.unit_normal.resize(n + 1);
  g.unit_normal.head(n) = -jet.gradient / g.W;
  g.unit_normal[n] = 1.0 / g.W;

  g.metric = Matrix::Identity(n, n) + jet.gradient * jet.gradient.transpose();
  g.second_fundamental_form = jet.hessian / g.W;
  g.shape_operator = g.metric.ldlt().solve(g.second_fundamental_form);

  Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> pencil(g.second_fundamental_form, g.metric,
                                                          Eigen::EigenvaluesOnly);
  g.principal_curvatures = pencil.eigenvalues();

  g.hessian_det = jet.hessian.determinant();
  g.gauss_kronecker = g.hessian_det / std::pow(g.W, static_cast<double>(n + 2));
  g.scaled_gauss_kronecker = relative_det(jet.hessian, g.hessian_det);

  g.max_riemann = max_riemann_component(g.second_fundamental_form);
  g.flatness_residual = g.max_riemann / (1.0 + g.second_fundamental_form.squaredNorm());
  return g;
}

inline GraphGeometry graph_geometry(const FunctionExpr& expr, std::span<const double> x) {
  return graph_geometry_from_jet(evaluate_jet(expr, x), x);
}

/// det(Hess f) / W^(n+2).
inline double gauss_kronecker(const FunctionExpr& expr, std::span<const double> x) {
  const Jet2 jet = evaluate_jet(expr, x);
  const double W = std::sqrt(1.0 + jet.gradient.squaredNorm());
  return jet.hessian.determinant() / std::pow(W, static_cast<double>(jet.size() + 2));
}

inline double flatness_residual(const FunctionExpr& expr, std::span<const double> x) {
  const Jet2 jet = evaluate_jet(expr, x);
  const double W = std::sqrt(1.0 + jet.gradient.squaredNorm());
  const Matrix h = jet.hessian / W;
  return max_riemann_component(h) / (1.0 + h.squaredNorm());
}

}  // namespace prodgeom
