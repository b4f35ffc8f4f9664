#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace afc {

/// Nodes and weights of a one-dimensional quadrature rule.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
};

/// Gauss-Legendre rule with n nodes on [a, b]. Nodes are ascending.
QuadratureRule gauss_legendre(std::size_t n, double a, double b);

/// Composite Simpson rule on n uniform nodes (endpoints included); n must be odd and >= 3.
QuadratureRule simpson(std::size_t n, double a, double b);

/// Natural cubic spline through (x, y); x strictly increasing.
class CubicSpline {
 public:
  CubicSpline() = default;
  CubicSpline(std::vector<double> x, std::vector<double> y);

  /// Evaluates the spline. Outside [x.front(), x.back()] the end cubic is extended.
  double operator()(double x) const;

  double x_min() const { return x_.front(); }
  double x_max() const { return x_.back(); }
  bool empty() const { return x_.empty(); }

 private:
  std::vector<double> x_;
  std::vector<double> y_;
  std::vector<double> m_;  // second derivatives at the knots
};

}  // namespace afc
