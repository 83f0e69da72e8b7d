#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <vector>

// Test-only oracles, independent of the library implementations they
// check: a Floquet exponent extracted from direct integration of the
// periodic ODE, quadrature, a DFT probe, and chi-squared helpers.

namespace oracles {

// Characteristic exponent of u'' + 2 q cos(2 tau) u = 0 from the trace of
// the monodromy matrix over one period [0, pi]: tr M = 2 cos(pi beta).
inline double monodromy_beta(double q, int steps = 100000) {
  const double h = 3.14159265358979323846 / steps;
  auto accel = [q](double tau, double u) { return -2.0 * q * std::cos(2.0 * tau) * u; };
  auto integrate = [&](double u0, double v0, int component) {
    double u = u0, v = v0, tau = 0.0;
    for (int i = 0; i < steps; ++i) {
      const double k1u = v, k1v = accel(tau, u);
      const double k2u = v + 0.5 * h * k1v, k2v = accel(tau + 0.5 * h, u + 0.5 * h * k1u);
      const double k3u = v + 0.5 * h * k2v, k3v = accel(tau + 0.5 * h, u + 0.5 * h * k2u);
      const double k4u = v + h * k3v, k4v = accel(tau + h, u + h * k3u);
      u += h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
      v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
      tau += h;
    }
    return component == 0 ? u : v;
  };
  const double m00 = integrate(1.0, 0.0, 0);
  const double m11 = integrate(0.0, 1.0, 1);
  const double half_trace = 0.5 * (m00 + m11);
  if (std::abs(half_trace) >= 1.0) return std::nan("");  // unstable
  return std::acos(half_trace) / 3.14159265358979323846;
}

inline double integrate_trapezoid(const std::function<double(double)>& f, double a, double b,
                                  int n) {
  const double h = (b - a) / n;
  double sum = 0.5 * (f(a) + f(b));
  for (int i = 1; i < n; ++i) sum += f(a + i * h);
  return sum * h;
}

// |sum x_k exp(-i omega t_k)| / n: single-frequency spectral probe.
inline double dft_magnitude(const std::vector<double>& xs, const std::vector<double>& ts,
                            double omega) {
  std::complex<double> acc(0.0, 0.0);
  for (std::size_t k = 0; k < xs.size(); ++k) {
    acc += xs[k] * std::exp(std::complex<double>(0.0, -omega * ts[k]));
  }
  return std::abs(acc) / static_cast<double>(xs.size());
}

// 99th percentile of chi-squared with df degrees of freedom
// (Wilson-Hilferty approximation, accurate to well under 1% for df >= 10).
inline double chi2_quantile_99(double df) {
  const double z99 = 2.3263478740408408;
  const double c = 2.0 / (9.0 * df);
  const double t = 1.0 - c + z99 * std::sqrt(c);
  return df * t * t * t;
}

}  // namespace oracles
