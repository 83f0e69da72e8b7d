#include "ionlink/teleport.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ionlink/constants.hpp"
#include "ionlink/errors.hpp"
#include "ionlink/rng.hpp"

namespace ionlink::teleport {

using quantum::CMat;
using quantum::DensityMatrix;
using quantum::PureState;

namespace {
constexpr double kRoot2Inv = 0.70710678118654752440;
constexpr double kPi = constants::pi;

void check_amplitudes(Complex alpha, Complex beta) {
  if (std::abs(std::norm(alpha) + std::norm(beta) - 1.0) > quantum::kNormTolerance) {
    throw std::invalid_argument("teleport: |alpha|^2 + |beta|^2 must be 1");
  }
}

void check_error(double eps, const char* name) {
  if (eps < 0.0 || eps > 0.5) {
    throw std::domain_error(std::string("teleport: ") + name + " must be in [0, 0.5]");
  }
}

void check_visibility(double v) {
  if (v < 0.0 || v > 1.0) throw std::domain_error("teleport: visibility must be in [0, 1]");
}

}  // namespace

void ProtocolConfig::validate() const {
  check_amplitudes(input_alpha, input_beta);
  check_visibility(visibility);
  check_error(detection_error_a, "detection_error_a");
  check_error(detection_error_b, "detection_error_b");
  chain.validate();
}

IdealRun run_ideal(Complex alpha, Complex beta) {
  check_amplitudes(alpha, beta);
  const gate::IonPhotonState ion_a = gate::excite_entangle(alpha, beta);
  const gate::IonPhotonState ion_b = gate::excite_entangle(kRoot2Inv, kRoot2Inv);
  const gate::HeraldResult herald = gate::herald_project(ion_a, ion_b);

  IdealRun run;
  run.heralded = herald.ion_state;
  run.theta = herald.theta;

  const PureState rotated = quantum::rotate(herald.ion_state, 0, quantum::Axis::y, kPi / 2.0);
  for (int outcome = 0; outcome < 2; ++outcome) {
    Eigen::Vector2cd sub;
    sub << rotated.amplitude(2 * outcome), rotated.amplitude(2 * outcome + 1);
    const double norm = sub.norm();
    if (norm <= 0.0) {
      throw zero_probability_error("run_ideal: measurement branch has zero probability");
    }
    quantum::CVec v = sub / norm;
    const PureState pre = PureState(v);
    run.pre_correction[static_cast<std::size_t>(outcome)] = pre;
    const quantum::Axis axis = outcome == 0 ? quantum::Axis::x : quantum::Axis::y;
    run.corrected[static_cast<std::size_t>(outcome)] = quantum::rotate(pre, 0, axis, kPi);
  }
  return run;
}

RunRecord montecarlo_protocol(const ProtocolConfig& config, double max_wall_time,
                              std::uint64_t run_index) {
  config.validate();
  if (!(max_wall_time > 0.0)) {
    throw std::domain_error("montecarlo_protocol: max wall time must be positive");
  }
  const double p = gate::success_probability(config.chain, 0.25);
  if (!(p > 0.0)) {
    throw zero_probability_error("montecarlo_protocol: chain success probability is zero");
  }

  Philox4x32 rng(config.master_seed, run_index);
  RunRecord record;
  const std::uint64_t attempts = rng.geometric_trials(p);
  const double wall = static_cast<double>(attempts) / config.chain.attempt_rate;
  if (wall > max_wall_time) {
    record.heralded = false;
    record.attempts_before_herald =
        static_cast<std::uint64_t>(std::floor(max_wall_time * config.chain.attempt_rate));
    record.herald_wall_time = max_wall_time;
    return record;
  }
  record.heralded = true;
  record.attempts_before_herald = attempts;
  record.herald_wall_time = wall;
  record.measurement_outcome_a = rng.coin() ? 1 : 0;  // ideal branch probabilities are 1/2
  record.conditional_rotation_axis = record.measurement_outcome_a == 0 ? 'x' : 'y';
  record.classical_bits_sent = 2;
  record.final_rho_b =
      combined_error_model(config.input_alpha, config.input_beta, config.visibility,
                           config.detection_error_a, config.detection_error_b);
  return record;
}

double ModeOverlap::intensity1() const {
  double sum = 0.0;
  for (const auto& v : mode1) sum += std::norm(v);
  return sum * grid_step;
}

double ModeOverlap::intensity2() const {
  double sum = 0.0;
  for (const auto& v : mode2) sum += std::norm(v);
  return sum * grid_step;
}

double visibility_from_modes(const ModeOverlap& overlap) {
  if (overlap.mode1.size() != overlap.mode2.size() || overlap.mode1.empty()) {
    throw std::invalid_argument("visibility_from_modes: modes must share a nonempty grid");
  }
  if (!(overlap.grid_step > 0.0)) {
    throw std::invalid_argument("visibility_from_modes: grid step must be positive");
  }
  const double i1 = overlap.intensity1();
  const double i2 = overlap.intensity2();
  if (!(i1 > 0.0) || std::abs(i1 - i2) > 1e-6 * std::max(i1, i2)) {
    throw std::invalid_argument("visibility_from_modes: incident intensities must be equal");
  }
  Complex acc = 0.0;
  for (std::size_t k = 0; k < overlap.mode1.size(); ++k) {
    acc += overlap.mode2[k] * std::conj(overlap.mode1[k]);
  }
  const double v = acc.real() * overlap.grid_step / i1;
  return std::clamp(v, 0.0, 1.0);
}

DensityMatrix rho_b_mode_mismatch(Complex alpha, Complex beta, double visibility) {
  check_amplitudes(alpha, beta);
  check_visibility(visibility);
  const double v2 = visibility * visibility;
  const double a2 = std::norm(alpha);
  const double b2 = std::norm(beta);
  CMat rho(2, 2);
  rho(0, 0) = a2 + b2 * (1.0 - v2);
  rho(0, 1) = alpha * std::conj(beta) * v2;
  rho(1, 0) = beta * std::conj(alpha) * v2;
  rho(1, 1) = b2 + a2 * (1.0 - v2);
  rho /= (2.0 - v2);
  return DensityMatrix(std::move(rho));
}

double fidelity_vs_visibility(double visibility) {
  check_visibility(visibility);
  return 1.0 / (2.0 - visibility * visibility);
}

DensityMatrix rho_b_imperfect_detection(Complex alpha, Complex beta, double eps_a) {
  check_amplitudes(alpha, beta);
  check_error(eps_a, "eps_a");
  CMat rho(2, 2);
  rho(0, 0) = std::norm(alpha);
  rho(0, 1) = (1.0 - 2.0 * eps_a) * alpha * std::conj(beta);
  rho(1, 0) = (1.0 - 2.0 * eps_a) * beta * std::conj(alpha);
  rho(1, 1) = std::norm(beta);
  return DensityMatrix(std::move(rho));
}

namespace {

struct SixProbabilities {
  double p0, p1, p_plus, p_minus, p_plus_i, p_minus_i;
};

// The six readout probabilities with the eps_b-corrupted measurement
// operators M0 = sqrt(1-e)|0><0| + sqrt(e)|1><1| (and M1 swapped), applied
// after the pre-measurement rotations R_y(pi/2) (x basis) and R_x(pi/2)
// (y basis).
SixProbabilities corrupted_probabilities(const DensityMatrix& rho, double eps_b) {
  auto p_dark = [&](const DensityMatrix& r) {  // outcome 0
    return (1.0 - eps_b) * r.matrix()(0, 0).real() + eps_b * r.matrix()(1, 1).real();
  };
  SixProbabilities p{};
  p.p0 = p_dark(rho);
  p.p1 = 1.0 - p.p0;
  const DensityMatrix rho_x = quantum::rotate(rho, 0, quantum::Axis::y, kPi / 2.0);
  p.p_minus = p_dark(rho_x);   // outcome 0 after R_y(pi/2) <-> (|0> - |1>)/sqrt(2)
  p.p_plus = 1.0 - p.p_minus;
  const DensityMatrix rho_y = quantum::rotate(rho, 0, quantum::Axis::x, kPi / 2.0);
  p.p_plus_i = p_dark(rho_y);  // outcome 0 after R_x(pi/2) <-> (|0> + i|1>)/sqrt(2)
  p.p_minus_i = 1.0 - p.p_plus_i;
  return p;
}

DensityMatrix reconstruct_from_six(const SixProbabilities& p) {
  return quantum::stokes_reconstruct(p.p0, p.p1, p.p_plus, p.p_minus, p.p_plus_i, p.p_minus_i);
}

}  // namespace

double reconstructed_fidelity_with_detection(Complex alpha, Complex beta, double eps_a,
                                             double eps_b) {
  check_error(eps_b, "eps_b");
  const DensityMatrix rho_b = rho_b_imperfect_detection(alpha, beta, eps_a);
  const DensityMatrix recon = reconstruct_from_six(corrupted_probabilities(rho_b, eps_b));
  return quantum::fidelity(recon, PureState::qubit(alpha, beta));
}

DensityMatrix combined_error_model(Complex alpha, Complex beta, double visibility, double eps_a,
                                   double eps_b) {
  check_error(eps_a, "eps_a");
  check_error(eps_b, "eps_b");
  const DensityMatrix rho_v = rho_b_mode_mismatch(alpha, beta, visibility);
  // A misread ion-a measurement applies the wrong conditional rotation,
  // which flips the sign of the coherence: mix with weight eps_a.
  CMat rho = rho_v.matrix();
  rho(0, 1) *= (1.0 - 2.0 * eps_a);
  rho(1, 0) *= (1.0 - 2.0 * eps_a);
  const DensityMatrix pre_readout{std::move(rho)};
  return reconstruct_from_six(corrupted_probabilities(pre_readout, eps_b));
}

std::array<PureState, 6> mub_states() {
  const double r = kRoot2Inv;
  const Complex i(0.0, 1.0);
  return {PureState::qubit(1, 0),      PureState::qubit(0, 1),
          PureState::qubit(r, r),      PureState::qubit(r, -r),
          PureState::qubit(r, i * r),  PureState::qubit(r, -i * r)};
}

SuiteResult run_protocol_suite(const ProtocolConfig& config, int shots_per_basis,
                               std::uint64_t seed, bool analytic, int heralds_per_state) {
  config.validate();
  if (!analytic && shots_per_basis < 1) {
    throw std::invalid_argument("run_protocol_suite: shots_per_basis must be >= 1");
  }
  if (heralds_per_state < 0) {
    throw std::invalid_argument("run_protocol_suite: heralds_per_state must be >= 0");
  }

  const double p_success = gate::success_probability(config.chain, 0.25);
  SuiteResult result;
  const auto states = mub_states();
  double fidelity_sum = 0.0;

  for (std::size_t s = 0; s < states.size(); ++s) {
    const Complex alpha = states[s].amplitude(0);
    const Complex beta = states[s].amplitude(1);

    const DensityMatrix rho_v = rho_b_mode_mismatch(alpha, beta, config.visibility);
    CMat m = rho_v.matrix();
    m(0, 1) *= (1.0 - 2.0 * config.detection_error_a);
    m(1, 0) *= (1.0 - 2.0 * config.detection_error_a);
    const DensityMatrix pre_readout{std::move(m)};
    const SixProbabilities exact =
        corrupted_probabilities(pre_readout, config.detection_error_b);

    SixProbabilities used = exact;
    if (!analytic) {
      // One RNG substream per (state, readout basis); outcomes are
      // Bernoulli draws from the corrupted probabilities.
      auto sample = [&](double p_exact, int basis_index) {
        Philox4x32 rng(seed, (s << 4) | static_cast<std::uint64_t>(basis_index));
        std::uint64_t hits = 0;
        for (int k = 0; k < shots_per_basis; ++k) {
          if (rng.uniform() < p_exact) ++hits;
        }
        return static_cast<double>(hits) / static_cast<double>(shots_per_basis);
      };
      used.p0 = sample(exact.p0, 0);
      used.p1 = 1.0 - used.p0;
      used.p_minus = sample(exact.p_minus, 1);
      used.p_plus = 1.0 - used.p_minus;
      used.p_plus_i = sample(exact.p_plus_i, 2);
      used.p_minus_i = 1.0 - used.p_plus_i;
    }

    SuiteStateResult state_result;
    state_result.ideal = states[s];
    state_result.reconstructed = reconstruct_from_six(used);
    state_result.fidelity = quantum::fidelity(state_result.reconstructed, states[s]);
    if (p_success > 0.0) {
      Philox4x32 herald_rng(seed, (s << 4) | 0x8u);
      state_result.herald_attempts.reserve(static_cast<std::size_t>(heralds_per_state));
      for (int h = 0; h < heralds_per_state; ++h) {
        state_result.herald_attempts.push_back(herald_rng.geometric_trials(p_success));
      }
    }
    fidelity_sum += state_result.fidelity;
    result.states.push_back(std::move(state_result));
  }
  result.average_fidelity = fidelity_sum / static_cast<double>(states.size());
  return result;
}

}  // namespace ionlink::teleport
