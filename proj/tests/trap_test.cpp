#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "ionlink/constants.hpp"
#include "ionlink/errors.hpp"
#include "ionlink/trap.hpp"
#include "oracles.hpp"

using namespace ionlink;
namespace c = ionlink::constants;

namespace {

trap::TrapConfig reference_trap(double eta = 1.0) {
  return trap::TrapConfig::from_lab_units(1000.0, 38.0, 0.46, 171.0, 1.0, eta);
}

}  // namespace

TEST_CASE("stability q for the reference trap parameters") {
  const double q = trap::stability_q(reference_trap());
  CHECK(q == doctest::Approx(0.0935).epsilon(0.006));
  CHECK(std::abs(q - 0.0935) < 5e-4);
}

TEST_CASE("stability q is linear in drive voltage and vanishes without drive") {
  trap::TrapConfig cfg = reference_trap();
  const double q1 = trap::stability_q(cfg);
  cfg.drive_voltage *= 2.0;
  CHECK(trap::stability_q(cfg) == doctest::Approx(2.0 * q1).epsilon(1e-12));
  cfg.drive_voltage = 0.0;
  CHECK(trap::stability_q(cfg) == 0.0);
}

TEST_CASE("stability q rejects nonpositive geometry") {
  trap::TrapConfig cfg = reference_trap();
  cfg.electrode_distance = 0.0;
  CHECK_THROWS_AS(trap::stability_q(cfg), std::domain_error);
  cfg = reference_trap();
  cfg.particle_mass = -1.0;
  CHECK_THROWS_AS(trap::stability_q(cfg), std::domain_error);
  cfg = reference_trap();
  cfg.drive_frequency = 0.0;
  CHECK_THROWS_AS(trap::stability_q(cfg), std::domain_error);
}

TEST_CASE("characteristic exponent: limits and lowest order") {
  CHECK(trap::mathieu_beta(0.0) == 0.0);
  const double q = 0.0935;
  CHECK(std::abs(trap::mathieu_beta(q) - q / std::sqrt(2.0)) < 1e-3);
  CHECK_THROWS_AS(trap::mathieu_beta(0.9), instability_error);
  CHECK_THROWS_AS(trap::mathieu_beta(1.4), instability_error);
  CHECK_THROWS_AS(trap::mathieu_beta(-0.1), std::domain_error);
}

TEST_CASE("characteristic exponent matches the ODE monodromy oracle") {
  for (double q : {0.05, 0.0935, 0.3, 0.6}) {
    const double cf = trap::mathieu_beta(q);
    const double ode = oracles::monodromy_beta(q, 40000);
    CHECK(std::abs(cf - ode) < 1e-6);
  }
}

TEST_CASE("characteristic exponent increases monotonically with q") {
  double prev = 0.0;
  for (double q = 0.02; q < 0.9; q += 0.02) {
    const double beta = trap::mathieu_beta(q);
    CHECK(beta > prev);
    prev = beta;
  }
}

TEST_CASE("Floquet coefficient ratios") {
  SUBCASE("small-q limit C_{+-2}/C_0 -> q/4") {
    const double q = 1e-6;
    const double beta = trap::mathieu_beta(q);
    const auto sol = trap::mathieu_coefficients(q, beta, 3);
    CHECK(sol.ratio(1) == doctest::Approx(q / 4.0).epsilon(1e-3));
    CHECK(sol.ratio(-1) == doctest::Approx(q / 4.0).epsilon(1e-3));
  }
  SUBCASE("q = 0 leaves only the central coefficient") {
    const auto sol = trap::mathieu_coefficients(0.0, 0.0, 4);
    CHECK(sol.ratio(0) == 1.0);
    for (int n = 1; n <= 4; ++n) {
      CHECK(sol.ratio(n) == 0.0);
      CHECK(sol.ratio(-n) == 0.0);
    }
  }
  SUBCASE("recursion residual below 1e-12 at every interior index") {
    for (double q : {0.0935, 0.3, 0.7}) {
      const double beta = trap::mathieu_beta(q);
      const auto sol = trap::mathieu_coefficients(q, beta, 6);
      CHECK(sol.max_recursion_residual() < 1e-12);
    }
  }
  SUBCASE("ratios decay with |n|") {
    const auto sol = trap::mathieu_coefficients(0.3, trap::mathieu_beta(0.3), 8);
    for (int n = 1; n <= 8; ++n) {
      CHECK(std::abs(sol.ratio(n)) <= std::abs(sol.ratio(n - 1)));
      CHECK(std::abs(sol.ratio(-n)) <= std::abs(sol.ratio(-n + 1)));
    }
  }
}

TEST_CASE("secular frequency against the quoted values") {
  const double f_hyp = trap::secular_frequency(reference_trap()) / (2.0 * c::pi);
  CHECK(std::abs(f_hyp - 1.26e6) < 0.01 * 1.26e6);
  const double f_sim = trap::secular_frequency(reference_trap(0.93)) / (2.0 * c::pi);
  CHECK(std::abs(f_sim - 1.17e6) < 0.01 * 1.17e6);

  trap::TrapConfig cfg = reference_trap();
  cfg.drive_voltage = 0.0;
  CHECK(trap::secular_frequency(cfg) == 0.0);
}

TEST_CASE("secular frequency scalings") {
  const trap::TrapConfig base = reference_trap();
  const double w = trap::secular_frequency(base);
  trap::TrapConfig cfg = base;
  cfg.drive_voltage *= 3.0;
  CHECK(trap::secular_frequency(cfg) == doctest::Approx(3.0 * w).epsilon(1e-12));
  cfg = base;
  cfg.geometric_scale = 0.5;
  CHECK(trap::secular_frequency(cfg) == doctest::Approx(0.5 * w).epsilon(1e-12));
  cfg = base;
  cfg.particle_mass *= 2.0;
  CHECK(trap::secular_frequency(cfg) == doctest::Approx(0.5 * w).epsilon(1e-12));
  cfg = base;
  cfg.drive_frequency *= 2.0;
  CHECK(trap::secular_frequency(cfg) == doctest::Approx(0.5 * w).epsilon(1e-12));
  cfg = base;
  cfg.electrode_distance *= 2.0;
  CHECK(trap::secular_frequency(cfg) == doctest::Approx(0.25 * w).epsilon(1e-12));
}

TEST_CASE("axial frequency") {
  trap::TrapConfig cfg = trap::TrapConfig::from_lab_units(1000.0, 38.0, 0.46, 171.0, 1.0, 1.0,
                                                          80.0, 3.0);
  // Direct arithmetic: sqrt(2 e U0 / (m z0^2)).
  const double expected = std::sqrt(2.0 * c::elementary_charge * 80.0 /
                                    (171.0 * c::atomic_mass_unit * 3e-3 * 3e-3));
  CHECK(trap::axial_frequency(cfg) == doctest::Approx(expected).epsilon(1e-12));

  trap::TrapConfig quad = cfg;
  quad.static_voltage *= 4.0;
  CHECK(trap::axial_frequency(quad) ==
        doctest::Approx(2.0 * trap::axial_frequency(cfg)).epsilon(1e-12));

  trap::TrapConfig off = cfg;
  off.static_voltage = 0.0;
  CHECK(trap::axial_frequency(off) == 0.0);

  trap::TrapConfig anti = cfg;
  anti.static_voltage = -80.0;
  CHECK_THROWS_AS(trap::axial_frequency(anti), std::domain_error);
}

TEST_CASE("axial potential weakens the transverse confinement") {
  trap::TrapConfig cfg = reference_trap();
  SUBCASE("no static potential reproduces the secular frequency exactly") {
    CHECK(trap::transverse_frequency_with_axial(cfg) == trap::secular_frequency(cfg));
  }
  SUBCASE("quadrature combination") {
    cfg.static_voltage = 80.0;
    cfg.axial_distance = 3e-3;
    const double wx = trap::secular_frequency(cfg);
    const double wz = trap::axial_frequency(cfg);
    CHECK(trap::transverse_frequency_with_axial(cfg) ==
          doctest::Approx(std::sqrt(wx * wx - 0.5 * wz * wz)).epsilon(1e-12));
  }
  SUBCASE("destabilized transverse confinement raises instability") {
    // Choose U0 so that omega_z = sqrt(2) omega_x.
    const double wx = trap::secular_frequency(cfg);
    const double u0 = wx * wx * (171.0 * c::atomic_mass_unit) * 3e-3 * 3e-3 /
                      c::elementary_charge;  // gives omega_z^2 = 2 omega_x^2
    cfg.static_voltage = u0;
    cfg.axial_distance = 3e-3;
    CHECK_THROWS_AS(trap::transverse_frequency_with_axial(cfg), instability_error);
  }
}

TEST_CASE("pseudopotential energy") {
  const trap::TrapConfig cfg = reference_trap();
  CHECK(trap::pseudopotential_energy(0.0, cfg) == 0.0);
  const double e1 = trap::pseudopotential_energy(1e6, cfg);
  CHECK(trap::pseudopotential_energy(2e6, cfg) == doctest::Approx(4.0 * e1).epsilon(1e-12));
  // Field amplitude at r = R: |E0| = V0 / R; the resulting well depth is on
  // the eV scale for the reference parameters.
  const double e0 = cfg.drive_voltage / cfg.electrode_distance;
  const double depth_ev = trap::pseudopotential_energy_ev(e0, cfg);
  CHECK(depth_ev > 1.0);
  CHECK(depth_ev < 100.0);
}

TEST_CASE("closed-form trajectory") {
  const trap::TrapConfig cfg = reference_trap();
  const double q = trap::stability_q(cfg);
  const double wx = trap::secular_frequency(cfg);
  const double drive_period = 2.0 * c::pi / cfg.drive_frequency;
  const double secular_period = 2.0 * c::pi / wx;

  SUBCASE("micromotion fraction is q/2") {
    std::vector<double> times;
    for (int i = 0; i < 2000; ++i) times.push_back(i * drive_period / 50.0);
    const auto traj = trap::trajectory_closed_form(cfg, 1e-6, times);
    CHECK(traj.micromotion_fraction == doctest::Approx(0.5 * q).epsilon(1e-12));
    CHECK(std::abs(traj.micromotion_fraction - 0.047) < 1e-3);
    for (double x : traj.positions) CHECK(std::isfinite(x));
  }

  SUBCASE("q -> 0 leaves a pure harmonic at the secular frequency") {
    trap::TrapConfig weak = cfg;
    weak.drive_voltage = 1e-3;  // q ~ 1e-7
    const double w = trap::secular_frequency(weak);
    std::vector<double> times;
    for (int i = 0; i < 512; ++i) times.push_back(i * drive_period / 25.0);
    const auto traj = trap::trajectory_closed_form(weak, 1e-6, times);
    for (std::size_t i = 0; i < times.size(); ++i) {
      CHECK(std::abs(traj.positions[i] - 1e-6 * std::cos(w * times[i])) < 1e-6 * 1e-6);
    }
  }

  SUBCASE("agreement with the integrated equation of motion") {
    auto rms_distance = [&](double periods) {
      std::vector<double> times;
      const double dt = drive_period / 40.0;
      const auto samples = static_cast<std::size_t>(std::ceil(periods * secular_period / dt));
      times.reserve(samples);
      for (std::size_t i = 0; i < samples; ++i) times.push_back(i * dt);
      const double amp = 1e-6;
      const auto closed = trap::trajectory_closed_form(cfg, amp, times);
      const auto numeric = trap::trajectory_numeric(cfg, amp * (1.0 + 0.5 * q), 0.0, times);
      double err2 = 0.0, ref2 = 0.0;
      for (std::size_t i = 0; i < times.size(); ++i) {
        const double d = closed.positions[i] - numeric.positions[i];
        err2 += d * d;
        ref2 += numeric.positions[i] * numeric.positions[i];
      }
      return std::sqrt(err2 / ref2);
    };
    // Over a couple of secular cycles the first-order form tracks the
    // integrated motion to a couple of percent; over ten cycles the
    // O(q^2) secular-frequency error accumulates to several percent.
    CHECK(rms_distance(1.0) < 0.01);
    CHECK(rms_distance(2.0) < 0.02);
    CHECK(rms_distance(10.0) < 0.07);
  }
}

TEST_CASE("numeric trajectory") {
  const trap::TrapConfig cfg = reference_trap();
  const double drive_period = 2.0 * c::pi / cfg.drive_frequency;

  SUBCASE("no drive keeps the particle fixed") {
    trap::TrapConfig off = cfg;
    off.drive_voltage = 0.0;
    std::vector<double> times;
    for (int i = 0; i < 200; ++i) times.push_back(i * drive_period / 25.0);
    const auto traj = trap::trajectory_numeric(off, 1e-6, 0.0, times);
    for (double x : traj.positions) CHECK(x == doctest::Approx(1e-6).epsilon(1e-12));
  }

  SUBCASE("spectrum shows the secular line and drive sidebands") {
    const double wx = trap::secular_frequency(cfg);
    std::vector<double> times;
    const double dt = drive_period / 32.0;
    const double total = 40.0 * 2.0 * c::pi / wx;
    for (double t = 0.0; t < total; t += dt) times.push_back(t);
    const auto traj = trap::trajectory_numeric(cfg, 1e-6, 0.0, times);

    const double peak_secular = oracles::dft_magnitude(traj.positions, traj.times, wx);
    const double peak_lower =
        oracles::dft_magnitude(traj.positions, traj.times, cfg.drive_frequency - wx);
    const double peak_upper =
        oracles::dft_magnitude(traj.positions, traj.times, cfg.drive_frequency + wx);
    const double background =
        oracles::dft_magnitude(traj.positions, traj.times, 0.43 * cfg.drive_frequency);
    CHECK(peak_secular > 20.0 * background);
    CHECK(peak_lower > 5.0 * background);
    CHECK(peak_upper > 5.0 * background);
    // Sidebands sit at roughly q/4 of the carrier.
    CHECK(peak_lower / peak_secular > 0.01);
    CHECK(peak_lower / peak_secular < 0.1);
  }

  SUBCASE("unstable drive grows exponentially") {
    trap::TrapConfig hot = cfg;
    hot.drive_voltage *= 1.2 / trap::stability_q(cfg);  // q = 1.2
    std::vector<double> times;
    for (int i = 0; i < 4000; ++i) times.push_back(i * drive_period / 40.0);
    const auto traj = trap::trajectory_numeric(hot, 1e-9, 0.0, times);
    double late_max = 0.0;
    for (std::size_t i = traj.positions.size() - 200; i < traj.positions.size(); ++i) {
      late_max = std::max(late_max, std::abs(traj.positions[i]));
    }
    CHECK(late_max > 50.0 * 1e-9);
  }

  SUBCASE("grid coarser than 20 samples per drive period is rejected") {
    std::vector<double> times;
    for (int i = 0; i < 100; ++i) times.push_back(i * drive_period / 10.0);
    CHECK_THROWS_AS(trap::trajectory_numeric(cfg, 1e-6, 0.0, times), std::domain_error);
  }
}

TEST_CASE("principal axes from the potential Hessian") {
  SUBCASE("quadrupole potential aligns with the coordinate axes") {
    auto phi = [](double x, double y) { return 0.5 * (x * x - y * y); };
    const auto axes = trap::principal_axes(phi, 0.0, 0.0);
    CHECK(!axes.degenerate);
    CHECK(axes.eigenvalues[0] == doctest::Approx(-1.0).epsilon(1e-6));
    CHECK(axes.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(std::abs(std::abs(axes.axes[1][0]) - 1.0) < 1e-9);  // largest curvature along x
    CHECK(std::abs(axes.axes[1][1]) < 1e-9);
  }

  SUBCASE("rotated anisotropic bowl reports the rotation") {
    const double angle = c::pi / 4.0;
    auto phi = [angle](double x, double y) {
      const double xr = std::cos(angle) * x + std::sin(angle) * y;
      const double yr = -std::sin(angle) * x + std::cos(angle) * y;
      return 2.0 * xr * xr + 0.5 * yr * yr;
    };
    const auto axes = trap::principal_axes(phi, 0.0, 0.0);
    CHECK(!axes.degenerate);
    const double measured = std::atan2(axes.axes[1][1], axes.axes[1][0]);
    CHECK(std::abs(std::remainder(measured - angle, c::pi)) < 1e-6);
  }

  SUBCASE("isotropic bowl is flagged degenerate") {
    auto phi = [](double x, double y) { return x * x + y * y; };
    CHECK(trap::principal_axes(phi, 0.0, 0.0).degenerate);
  }

  SUBCASE("orthonormal eigenvectors, invariant under potential scaling") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> coef(-2.0, 2.0);
    for (int trial = 0; trial < 50; ++trial) {
      const double a = coef(rng), b = coef(rng), d = coef(rng);
      auto phi = [=](double x, double y) { return a * x * x + b * x * y + d * y * y; };
      const auto axes = trap::principal_axes(phi, 0.0, 0.0);
      const double dot = axes.axes[0][0] * axes.axes[1][0] + axes.axes[0][1] * axes.axes[1][1];
      CHECK(std::abs(dot) < 1e-12);
      for (const auto& v : axes.axes) {
        CHECK(std::abs(std::hypot(v[0], v[1]) - 1.0) < 1e-12);
      }
      const double scale = 7.5;
      auto phi_scaled = [=](double x, double y) { return scale * phi(x, y); };
      const auto axes2 = trap::principal_axes(phi_scaled, 0.0, 0.0);
      CHECK(axes2.degenerate == axes.degenerate);
      if (!axes.degenerate) {
        const double align = std::abs(axes.axes[1][0] * axes2.axes[1][0] +
                                      axes.axes[1][1] * axes2.axes[1][1]);
        CHECK(align == doctest::Approx(1.0).epsilon(1e-9));
      }
    }
  }
}
