#pragma once

#include <Eigen/Dense>
#include <deque>
#include <functional>

// Minimal L-BFGS minimizer with Armijo backtracking, used by the
// tomography reconstructions.  Deterministic: no randomized restarts.

namespace ionlink::detail {

struct LbfgsResult {
  Eigen::VectorXd x;
  double value = 0.0;
  double gradient_norm = 0.0;
  int iterations = 0;
  bool converged = false;
};

// objective(x, grad) returns f(x) and fills grad.
inline LbfgsResult lbfgs_minimize(
    const std::function<double(const Eigen::VectorXd&, Eigen::VectorXd&)>& objective,
    Eigen::VectorXd x0, int max_iterations, double gradient_tolerance) {
  using Eigen::VectorXd;
  const int memory = 8;
  std::deque<VectorXd> s_hist, y_hist;

  VectorXd x = std::move(x0);
  VectorXd grad(x.size());
  double f = objective(x, grad);

  LbfgsResult result;
  for (int iter = 0; iter < max_iterations; ++iter) {
    const double gnorm = grad.lpNorm<Eigen::Infinity>();
    if (gnorm < gradient_tolerance) {
      result.converged = true;
      result.iterations = iter;
      break;
    }

    // Two-loop recursion.
    VectorXd q = grad;
    std::vector<double> alpha(s_hist.size());
    for (int i = static_cast<int>(s_hist.size()) - 1; i >= 0; --i) {
      const double rho = 1.0 / y_hist[i].dot(s_hist[i]);
      alpha[static_cast<std::size_t>(i)] = rho * s_hist[i].dot(q);
      q -= alpha[static_cast<std::size_t>(i)] * y_hist[i];
    }
    if (!s_hist.empty()) {
      const double gamma =
          s_hist.back().dot(y_hist.back()) / y_hist.back().squaredNorm();
      q *= gamma;
    }
    for (std::size_t i = 0; i < s_hist.size(); ++i) {
      const double rho = 1.0 / y_hist[i].dot(s_hist[i]);
      const double beta = rho * y_hist[i].dot(q);
      q += (alpha[i] - beta) * s_hist[i];
    }
    VectorXd direction = -q;
    if (direction.dot(grad) >= 0.0) direction = -grad;  // safeguard

    // Armijo backtracking.
    const double slope = grad.dot(direction);
    double step = 1.0;
    VectorXd x_new;
    VectorXd grad_new(x.size());
    double f_new = f;
    bool improved = false;
    for (int ls = 0; ls < 60; ++ls) {
      x_new = x + step * direction;
      f_new = objective(x_new, grad_new);
      if (f_new <= f + 1e-4 * step * slope) {
        improved = true;
        break;
      }
      step *= 0.5;
    }
    if (!improved) {
      // No descent possible at machine precision.
      result.iterations = iter;
      result.converged = gnorm < 1e-6;
      break;
    }

    VectorXd s = x_new - x;
    VectorXd y = grad_new - grad;
    if (y.dot(s) > 1e-14 * y.norm() * s.norm()) {
      s_hist.push_back(std::move(s));
      y_hist.push_back(std::move(y));
      if (static_cast<int>(s_hist.size()) > memory) {
        s_hist.pop_front();
        y_hist.pop_front();
      }
    }
    x = std::move(x_new);
    grad = std::move(grad_new);
    f = f_new;
    result.iterations = iter + 1;
  }

  result.x = std::move(x);
  result.value = f;
  result.gradient_norm = grad.lpNorm<Eigen::Infinity>();
  if (result.gradient_norm < gradient_tolerance) result.converged = true;
  return result;
}

}  // namespace ionlink::detail
