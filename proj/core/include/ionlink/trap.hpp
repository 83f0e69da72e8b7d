#pragma once

#include <array>
#include <functional>
#include <vector>

#include "ionlink/constants.hpp"

// Closed-form and numerical solutions for a charged particle in an rf
// quadrupole trap: stability parameter, characteristic exponent from the
// two-sided continued fraction, Floquet coefficients, trajectories,
// secular/axial frequencies, pseudopotential and principal axes.

namespace ionlink::trap {

struct TrapConfig {
  double drive_voltage = 0.0;       // V0, volts
  double drive_frequency = 0.0;     // Omega, rad/s
  double electrode_distance = 0.0;  // R, meters
  double static_voltage = 0.0;      // U0, volts
  double axial_distance = 0.0;      // z0, meters (required only if U0 != 0)
  double particle_mass = 0.0;       // kg
  double particle_charge = constants::elementary_charge;  // C, nonzero
  double geometric_scale = 1.0;     // dimensionless, in (0, 1.5]

  // Throws std::domain_error when lengths/mass/frequency are not strictly
  // positive, the charge is zero, or the geometric scale is out of range.
  void validate() const;

  // Lab-unit constructor: volts, MHz (drive frequency / 2 pi), mm, amu,
  // charge in units of e.
  static TrapConfig from_lab_units(double v0_volts, double drive_freq_mhz,
                                   double r_mm, double mass_amu,
                                   double charge_e = 1.0, double eta = 1.0,
                                   double u0_volts = 0.0, double z0_mm = 0.0);
};

// Dimensionless drive-strength parameter 2 e V0 eta / (m R^2 Omega^2).
double stability_q(const TrapConfig& trap);

inline constexpr double kStabilityLimitQ = 0.9;

// Characteristic exponent beta in (0, 1) for 0 <= q < 0.9, from the
// two-sided continued fraction truncated at `depth` levels.  Throws
// instability_error outside the stable range and convergence_error when
// depth and depth+1 disagree by more than 1e-12.
double mathieu_beta(double q, int depth = 24);

struct MathieuSolution {
  double q = 0.0;
  double beta = 0.0;
  int n_max = 0;
  // C_{2n}/C_0 for n in [-n_max, n_max]; entry [n_max] is exactly 1.
  std::vector<double> coefficient_ratios;

  double ratio(int n) const { return coefficient_ratios[static_cast<std::size_t>(n + n_max)]; }
  // Largest |C_{2n-2} + C_{2n+2} - K_{2n} C_{2n}| / C_0 over interior n.
  double max_recursion_residual() const;
};

// Floquet coefficient ratios from the continued fractions; requires beta
// consistent with mathieu_beta(q).
MathieuSolution mathieu_coefficients(double q, double beta, int n_max);

// Lowest-order secular frequency e V0 eta / (sqrt(2) m Omega R^2); throws
// instability_error when the resulting q is outside the stable region.
double secular_frequency(const TrapConfig& trap);

// sqrt(2 e U0 / (m z0^2)); zero when U0 == 0, domain error when e*U0 < 0.
double axial_frequency(const TrapConfig& trap);

// sqrt(omega_x^2 - omega_z^2 / 2); instability_error when the radicand is
// not positive.
double transverse_frequency_with_axial(const TrapConfig& trap);

// Trap-depth energy e^2 E0^2 / (4 m Omega^2) in joules for a field
// amplitude E0 at the point of interest.
double pseudopotential_energy(double field_amplitude, const TrapConfig& trap);
double pseudopotential_energy_ev(double field_amplitude, const TrapConfig& trap);

struct Trajectory {
  std::vector<double> times;      // s, uniformly spaced
  std::vector<double> positions;  // m
  double secular_frequency = 0.0;     // rad/s (lowest-order prediction)
  double micromotion_fraction = 0.0;  // q/2
};

// x(t) = A cos(omega_x t) (1 + (q/2) cos(Omega t)) on a uniform time grid.
Trajectory trajectory_closed_form(const TrapConfig& trap, double amplitude,
                                  const std::vector<double>& times);

// Fixed-step RK4 integration of x'' + (e V0 eta / (m R^2)) cos(Omega t) x = 0
// with at least `steps_per_drive_period` internal substeps per drive period
// (default 200).  The output grid itself must resolve the drive with at
// least 20 samples per period.  Valid for any q, including unstable drive.
Trajectory trajectory_numeric(const TrapConfig& trap, double x0, double v0,
                              const std::vector<double>& times,
                              int steps_per_drive_period = 200);

struct PrincipalAxes {
  std::array<double, 2> eigenvalues;                // ascending
  std::array<std::array<double, 2>, 2> axes;        // orthonormal, axes[i] pairs with eigenvalues[i]
  bool degenerate = false;                          // relative eigenvalue gap < 1e-9
};

// Eigenpairs of the central-finite-difference Hessian of a 2D potential at
// (x0, y0).  Step h = step_scale * characteristic_length.
PrincipalAxes principal_axes(const std::function<double(double, double)>& potential,
                             double x0, double y0,
                             double characteristic_length = 1.0,
                             double step_scale = 1e-4);

}  // namespace ionlink::trap
