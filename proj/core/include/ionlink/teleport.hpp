#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "ionlink/gate.hpp"
#include "ionlink/quantum.hpp"

// The heralded teleportation protocol: ideal state evolution, a seeded
// Monte Carlo driver with geometric herald statistics, the two analytic
// error models (interferometer visibility and imperfect state detection),
// their composition, and the six-state tomography suite.

namespace ionlink::teleport {

using quantum::Complex;

struct ProtocolConfig {
  Complex input_alpha{1.0, 0.0};
  Complex input_beta{0.0, 0.0};
  double visibility = 0.98;           // V
  double detection_error_a = 0.015;   // epsilon_a (error probability)
  double detection_error_b = 0.025;   // epsilon_b
  gate::OpticalChain chain{};
  std::uint64_t master_seed = 0;

  void validate() const;
};

struct IdealRun {
  quantum::PureState heralded;  // alpha|01> - beta|10>
  double theta = 0.25;
  // Ion-b state per measurement branch of ion a, before and after the
  // conditional correction (branch 0 -> R_x(pi), branch 1 -> R_y(pi)).
  std::array<quantum::PureState, 2> pre_correction;
  std::array<quantum::PureState, 2> corrected;
};

// Noise-free protocol: prepare b in (|0>+|1>)/sqrt(2), entangle, herald,
// rotate a by R_y(pi/2), measure a, correct b.  Both branches recover
// alpha|0> + beta|1> up to a global phase.
IdealRun run_ideal(Complex alpha, Complex beta);

struct RunRecord {
  std::uint64_t attempts_before_herald = 0;
  double herald_wall_time = 0.0;  // attempts / attempt_rate, s
  bool heralded = false;          // false: timed out, partial record
  int measurement_outcome_a = -1;
  char conditional_rotation_axis = '-';  // 'x' on outcome 0, 'y' on outcome 1
  int classical_bits_sent = 0;           // herald announcement + measurement result
  std::optional<quantum::DensityMatrix> final_rho_b;
};

// One heralded attempt sequence.  Herald timing is drawn from the exact
// geometric distribution at P = success_probability(chain, 1/4) rather
// than by simulating every attempt; the error-model pipeline produces the
// final ion-b state.  Deterministic under master_seed (+ run_index
// substream).
RunRecord montecarlo_protocol(const ProtocolConfig& config, double max_wall_time,
                              std::uint64_t run_index = 0);

// Sampled transverse mode profiles on a common uniform grid.
struct ModeOverlap {
  std::vector<Complex> mode1, mode2;
  double grid_step = 1.0;

  double intensity1() const;
  double intensity2() const;
};

// V = Re( integral mode2 * conj(mode1) ) / I by the grid quadrature;
// requires equal total intensities within 1e-6 relative.
double visibility_from_modes(const ModeOverlap& overlap);

// Ion-b density matrix after the protocol with interferometer visibility
// V: [[|a|^2 + |b|^2 (1-V^2), a b* V^2], [b a* V^2, |b|^2 + |a|^2 (1-V^2)]]
// / (2 - V^2).
quantum::DensityMatrix rho_b_mode_mismatch(Complex alpha, Complex beta, double visibility);

// State-independent teleportation fidelity 1 / (2 - V^2).
double fidelity_vs_visibility(double visibility);

// Ion-b density matrix when only the measurement of ion a is imperfect:
// off-diagonals shrink by (1 - 2 eps_a).
quantum::DensityMatrix rho_b_imperfect_detection(Complex alpha, Complex beta, double eps_a);

// Full detection-error pipeline: imperfect ion-a measurement, the six
// eps_b-corrupted readout probabilities (with pre-measurement rotations),
// Stokes reconstruction, fidelity to the ideal state.  Closed forms:
// 1 - eps_b on the poles, (1 + (1-2 eps_a)(1-2 eps_b))/2 on the equator.
double reconstructed_fidelity_with_detection(Complex alpha, Complex beta, double eps_a,
                                             double eps_b);

// Visibility first (interference precedes measurement), then the
// detection-error measurement/reconstruction applied to that state.
quantum::DensityMatrix combined_error_model(Complex alpha, Complex beta, double visibility,
                                            double eps_a, double eps_b);

// The six mutually unbiased single-qubit states: +/-x, +/-y, |0>, |1>.
std::array<quantum::PureState, 6> mub_states();

struct SuiteStateResult {
  quantum::PureState ideal;
  quantum::DensityMatrix reconstructed;
  double fidelity = 0.0;
  std::vector<std::uint64_t> herald_attempts;  // geometric samples, timing statistics
};

struct SuiteResult {
  std::vector<SuiteStateResult> states;
  double average_fidelity = 0.0;
};

// Tomography of all six teleported states.  With `analytic` the exact
// error-model probabilities are used (infinite shots); otherwise
// shots_per_basis measurement outcomes are sampled per readout basis and
// heralds_per_state geometric herald samples are recorded.
SuiteResult run_protocol_suite(const ProtocolConfig& config, int shots_per_basis,
                               std::uint64_t seed, bool analytic = false,
                               int heralds_per_state = 50);

}  // namespace ionlink::teleport
