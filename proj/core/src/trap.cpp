#include "ionlink/trap.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ionlink/errors.hpp"

namespace ionlink::trap {

namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw std::domain_error(msg);
}

// Continued fraction for C_{+/-2}/C_0:
//   1 / (K_{s*2} - 1 / (K_{s*4} - ...)), K_{2n} = (2n + beta)^2 / q,
// truncated after `depth` levels.  For beta in (0,1) and q < 0.9 every
// denominator stays above 1, so the backward evaluation is stable.
double side_fraction(double beta, double q, int sign, int depth) {
  auto K = [&](int level) {
    const double v = 2.0 * sign * level + beta;
    return v * v / q;
  };
  double tail = K(depth);
  for (int level = depth - 1; level >= 1; --level) {
    tail = K(level) - 1.0 / tail;
  }
  return 1.0 / tail;
}

double beta_equation_rhs(double beta, double q, int depth) {
  return q * (side_fraction(beta, q, +1, depth) + side_fraction(beta, q, -1, depth));
}

double solve_beta(double q, int depth) {
  auto g = [&](double b) { return b * b - beta_equation_rhs(b, q, depth); };
  double lo = 1e-15;
  double hi = 1.0 - 1e-12;
  if (!(g(lo) < 0.0 && g(hi) > 0.0)) {
    throw instability_error("mathieu_beta: no characteristic exponent in (0, 1)");
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

void TrapConfig::validate() const {
  require(electrode_distance > 0.0, "TrapConfig: electrode distance must be positive");
  require(particle_mass > 0.0, "TrapConfig: particle mass must be positive");
  require(drive_frequency > 0.0, "TrapConfig: drive frequency must be positive");
  require(particle_charge != 0.0, "TrapConfig: particle charge must be nonzero");
  require(geometric_scale > 0.0 && geometric_scale <= 1.5,
          "TrapConfig: geometric scale must be in (0, 1.5]");
  if (static_voltage != 0.0) {
    require(axial_distance > 0.0, "TrapConfig: axial distance must be positive");
  }
}

TrapConfig TrapConfig::from_lab_units(double v0_volts, double drive_freq_mhz,
                                      double r_mm, double mass_amu,
                                      double charge_e, double eta,
                                      double u0_volts, double z0_mm) {
  TrapConfig cfg;
  cfg.drive_voltage = v0_volts;
  cfg.drive_frequency = constants::mhz_to_rad_per_s(drive_freq_mhz);
  cfg.electrode_distance = constants::mm_to_m(r_mm);
  cfg.particle_mass = constants::amu_to_kg(mass_amu);
  cfg.particle_charge = charge_e * constants::elementary_charge;
  cfg.geometric_scale = eta;
  cfg.static_voltage = u0_volts;
  cfg.axial_distance = constants::mm_to_m(z0_mm);
  return cfg;
}

double stability_q(const TrapConfig& trap) {
  trap.validate();
  const double r2 = trap.electrode_distance * trap.electrode_distance;
  const double w2 = trap.drive_frequency * trap.drive_frequency;
  return trap.geometric_scale * 2.0 * trap.particle_charge * trap.drive_voltage /
         (trap.particle_mass * r2 * w2);
}

double mathieu_beta(double q, int depth) {
  if (!(q >= 0.0)) throw std::domain_error("mathieu_beta: q must be nonnegative");
  if (q >= kStabilityLimitQ) {
    throw instability_error("mathieu_beta: drive outside the stable region (q >= 0.9)");
  }
  if (depth < 2) throw std::domain_error("mathieu_beta: depth must be at least 2");
  if (q == 0.0) return 0.0;
  const double beta = solve_beta(q, depth);
  const double beta_next = solve_beta(q, depth + 1);
  if (std::abs(beta - beta_next) > 1e-12) {
    throw convergence_error("mathieu_beta: continued fraction not converged at requested depth");
  }
  return beta;
}

MathieuSolution mathieu_coefficients(double q, double beta, int n_max) {
  if (n_max < 1) throw std::domain_error("mathieu_coefficients: n_max must be positive");
  MathieuSolution sol;
  sol.q = q;
  sol.beta = beta;
  sol.n_max = n_max;
  sol.coefficient_ratios.assign(static_cast<std::size_t>(2 * n_max + 1), 0.0);
  auto at = [&](int n) -> double& {
    return sol.coefficient_ratios[static_cast<std::size_t>(n + n_max)];
  };
  at(0) = 1.0;
  if (q == 0.0) return sol;

  const int tail_depth = n_max + 24;
  for (int sign : {+1, -1}) {
    double running = 1.0;
    for (int n = 1; n <= n_max; ++n) {
      // C_{2n}/C_{2n-2} along this side, from the continued fraction that
      // starts at level n and recedes away from the center.
      auto K = [&](int level) {
        const double v = 2.0 * sign * level + beta;
        return v * v / q;
      };
      double tail = K(tail_depth);
      for (int level = tail_depth - 1; level >= n; --level) {
        tail = K(level) - 1.0 / tail;
      }
      running /= tail;
      at(sign * n) = running;
    }
  }

  for (int n = 1; n <= n_max; ++n) {
    if (std::abs(sol.ratio(n)) > std::abs(sol.ratio(n - 1)) ||
        std::abs(sol.ratio(-n)) > std::abs(sol.ratio(-(n - 1)))) {
      throw convergence_error("mathieu_coefficients: ratios do not decay with |n|");
    }
  }
  return sol;
}

double MathieuSolution::max_recursion_residual() const {
  if (q == 0.0) return 0.0;
  double worst = 0.0;
  for (int n = -(n_max - 1); n <= n_max - 1; ++n) {
    const double k2n = (2.0 * n + beta) * (2.0 * n + beta) / q;
    const double res = ratio(n - 1) + ratio(n + 1) - k2n * ratio(n);
    worst = std::max(worst, std::abs(res));
  }
  return worst;
}

double secular_frequency(const TrapConfig& trap) {
  const double q = stability_q(trap);
  if (std::abs(q) >= kStabilityLimitQ) {
    throw instability_error("secular_frequency: drive outside the stable region");
  }
  const double r2 = trap.electrode_distance * trap.electrode_distance;
  return trap.geometric_scale * trap.particle_charge * trap.drive_voltage /
         (std::sqrt(2.0) * trap.particle_mass * trap.drive_frequency * r2);
}

double axial_frequency(const TrapConfig& trap) {
  trap.validate();
  if (trap.static_voltage == 0.0) return 0.0;
  const double eu = trap.particle_charge * trap.static_voltage;
  if (eu < 0.0) {
    throw std::domain_error("axial_frequency: static potential is anti-trapping along z");
  }
  return std::sqrt(2.0 * eu / (trap.particle_mass * trap.axial_distance * trap.axial_distance));
}

double transverse_frequency_with_axial(const TrapConfig& trap) {
  const double wx = secular_frequency(trap);
  const double wz = axial_frequency(trap);
  if (wz == 0.0) return wx;
  const double radicand = wx * wx - 0.5 * wz * wz;
  if (radicand <= 0.0) {
    throw instability_error(
        "transverse_frequency_with_axial: axial potential destabilizes transverse confinement");
  }
  return std::sqrt(radicand);
}

double pseudopotential_energy(double field_amplitude, const TrapConfig& trap) {
  trap.validate();
  if (field_amplitude < 0.0) {
    throw std::domain_error("pseudopotential_energy: field amplitude must be nonnegative");
  }
  const double e = trap.particle_charge;
  const double w2 = trap.drive_frequency * trap.drive_frequency;
  return e * e * field_amplitude * field_amplitude / (4.0 * trap.particle_mass * w2);
}

double pseudopotential_energy_ev(double field_amplitude, const TrapConfig& trap) {
  return constants::joule_to_ev(pseudopotential_energy(field_amplitude, trap));
}

namespace {

void check_uniform_grid(const std::vector<double>& times) {
  if (times.size() < 2) throw std::domain_error("trajectory: need at least two time samples");
  const double dt = times[1] - times[0];
  if (!(dt > 0.0)) throw std::domain_error("trajectory: time grid must be increasing");
  for (std::size_t i = 2; i < times.size(); ++i) {
    const double step = times[i] - times[i - 1];
    if (std::abs(step - dt) > 1e-9 * dt) {
      throw std::domain_error("trajectory: time grid must be uniform");
    }
  }
}

}  // namespace

Trajectory trajectory_closed_form(const TrapConfig& trap, double amplitude,
                                  const std::vector<double>& times) {
  check_uniform_grid(times);
  const double q = stability_q(trap);
  if (std::abs(q) >= kStabilityLimitQ) {
    throw instability_error("trajectory_closed_form: drive outside the stable region");
  }
  const double wx = secular_frequency(trap);
  Trajectory out;
  out.times = times;
  out.positions.reserve(times.size());
  for (double t : times) {
    out.positions.push_back(amplitude * std::cos(wx * t) *
                            (1.0 + 0.5 * q * std::cos(trap.drive_frequency * t)));
  }
  out.secular_frequency = wx;
  out.micromotion_fraction = 0.5 * q;
  return out;
}

Trajectory trajectory_numeric(const TrapConfig& trap, double x0, double v0,
                              const std::vector<double>& times,
                              int steps_per_drive_period) {
  trap.validate();
  check_uniform_grid(times);
  if (steps_per_drive_period < 200) steps_per_drive_period = 200;

  const double drive_period = 2.0 * constants::pi / trap.drive_frequency;
  const double dt_out = times[1] - times[0];
  if (dt_out > drive_period / 20.0) {
    throw std::domain_error(
        "trajectory_numeric: output grid coarser than 20 samples per drive period");
  }

  const double strength = trap.particle_charge * trap.drive_voltage * trap.geometric_scale /
                          (trap.particle_mass * trap.electrode_distance * trap.electrode_distance);
  const double omega = trap.drive_frequency;
  auto accel = [&](double t, double x) { return -strength * std::cos(omega * t) * x; };

  const int substeps =
      std::max(1, static_cast<int>(std::ceil(dt_out / (drive_period / steps_per_drive_period))));
  const double h = dt_out / substeps;

  Trajectory out;
  out.times = times;
  out.positions.resize(times.size());
  double x = x0;
  double v = v0;
  double t = times[0];
  out.positions[0] = x;
  for (std::size_t i = 1; i < times.size(); ++i) {
    for (int s = 0; s < substeps; ++s) {
      const double k1x = v, k1v = accel(t, x);
      const double k2x = v + 0.5 * h * k1v, k2v = accel(t + 0.5 * h, x + 0.5 * h * k1x);
      const double k3x = v + 0.5 * h * k2v, k3v = accel(t + 0.5 * h, x + 0.5 * h * k2x);
      const double k4x = v + h * k3v, k4v = accel(t + h, x + h * k3x);
      x += h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
      v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
      t += h;
    }
    t = times[i];  // avoid drift across many substeps
    out.positions[i] = x;
  }

  const double q = stability_q(trap);
  const double r2 = trap.electrode_distance * trap.electrode_distance;
  out.secular_frequency = trap.geometric_scale * trap.particle_charge * trap.drive_voltage /
                          (std::sqrt(2.0) * trap.particle_mass * trap.drive_frequency * r2);
  out.micromotion_fraction = 0.5 * q;
  return out;
}

PrincipalAxes principal_axes(const std::function<double(double, double)>& potential,
                             double x0, double y0, double characteristic_length,
                             double step_scale) {
  if (!(characteristic_length > 0.0) || !(step_scale > 0.0)) {
    throw std::domain_error("principal_axes: step parameters must be positive");
  }
  const double h = step_scale * characteristic_length;
  const double fxx =
      (potential(x0 + h, y0) - 2.0 * potential(x0, y0) + potential(x0 - h, y0)) / (h * h);
  const double fyy =
      (potential(x0, y0 + h) - 2.0 * potential(x0, y0) + potential(x0, y0 - h)) / (h * h);
  const double fxy = (potential(x0 + h, y0 + h) - potential(x0 + h, y0 - h) -
                      potential(x0 - h, y0 + h) + potential(x0 - h, y0 - h)) /
                     (4.0 * h * h);

  // Closed-form eigenpairs of the symmetric 2x2 Hessian.
  const double mean = 0.5 * (fxx + fyy);
  const double half_gap = 0.5 * (fxx - fyy);
  const double radius = std::hypot(half_gap, fxy);
  PrincipalAxes out;
  out.eigenvalues = {mean - radius, mean + radius};

  const double scale = std::max({std::abs(fxx), std::abs(fyy), std::abs(fxy), 1e-300});
  out.degenerate = (2.0 * radius) < 1e-9 * scale;

  if (out.degenerate) {
    out.axes = {{{1.0, 0.0}, {0.0, 1.0}}};
    return out;
  }
  // Eigenvector for the larger eigenvalue.
  double vx, vy;
  if (std::abs(fxy) > 1e-300) {
    vx = fxy;
    vy = out.eigenvalues[1] - fxx;
  } else if (fxx >= fyy) {
    vx = 1.0;
    vy = 0.0;
  } else {
    vx = 0.0;
    vy = 1.0;
  }
  const double norm = std::hypot(vx, vy);
  vx /= norm;
  vy /= norm;
  out.axes[1] = {vx, vy};
  out.axes[0] = {-vy, vx};
  return out;
}

}  // namespace ionlink::trap
