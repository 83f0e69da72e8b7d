#pragma once

#include <Eigen/Dense>
#include <map>
#include <optional>
#include <vector>

#include "ionlink/quantum.hpp"

// Ion-photon entanglement, beamsplitter algebra over frequency-encoded
// photons, the heralded two-ion gate (coincidence projection onto the
// antisymmetric photon Bell state), and the success-probability budget of
// the photon collection/detection chain.

namespace ionlink::gate {

using quantum::Complex;

enum class Freq { blue = 0, red = 1 };
enum class BellLabel { phi_plus = 0, phi_minus = 1, psi_plus = 2, psi_minus = 3 };

// Joint state of one ion and the frequency mode of its emitted photon;
// basis index 2*ion + freq.  Ideal emission correlates |0> with blue and
// |1> with red.
struct IonPhotonState {
  Eigen::Vector4cd amps = Eigen::Vector4cd::Zero();

  Complex amp(int ion, Freq f) const { return amps(2 * ion + static_cast<int>(f)); }
  void validate() const;  // unit norm
};

// alpha |0, blue> + beta |1, red>; |alpha|^2 + |beta|^2 must be 1.
IonPhotonState excite_entangle(Complex alpha, Complex beta);

// Two-photon (or one-photon) occupation-number state over four
// single-photon modes (port, frequency).  Ports are {1,2} before the
// beamsplitter and {3,4} after; the occupancy array is indexed
// [2*(port - first_port) + freq].
struct PhotonicState {
  using Occupancy = std::array<int, 4>;
  std::map<Occupancy, Complex> amps;
  int first_port = 1;

  double norm_squared() const;
};

PhotonicState single_photon_input(int port, Freq f);
PhotonicState two_photon_input(Freq f_port1, Freq f_port2);
// The four photon Bell states over input ports 1, 2 (a in port 1, b in 2):
// phi+- = (BB +- RR)/sqrt(2), psi+- = (BR +- RB)/sqrt(2).
PhotonicState bell_photon_state(BellLabel label);

// 50:50 beamsplitter, a3 = (a1 - a2)/sqrt(2), a4 = (a1 + a2)/sqrt(2),
// applied per frequency mode.  Unitary; input must be over ports 1, 2.
PhotonicState beamsplitter_transform(const PhotonicState& in);

// Probability of finding exactly one photon in port 3 and one in port 4.
double coincidence_probability(const PhotonicState& out);

// Amplitudes of the joint two-ion-two-photon state resolved in the photon
// Bell basis: component[label] is the (unnormalized) ion-ion amplitude
// vector over {00, 01, 10, 11}.
struct BellDecomposition {
  std::array<Eigen::Vector4cd, 4> components;

  const Eigen::Vector4cd& operator[](BellLabel label) const {
    return components[static_cast<std::size_t>(label)];
  }
  double total_weight() const;  // sums to 1 for normalized inputs
};

BellDecomposition bell_decompose(const IonPhotonState& a, const IonPhotonState& b);

struct HeraldResult {
  quantum::PureState ion_state;  // normalized, spanned by |01> and |10>
  double theta = 0.0;            // herald weight (|alpha delta|^2 + |beta gamma|^2)/2
};

// Projection of the joint state onto a photon coincidence (the psi- Bell
// state).  Throws zero_probability_error when the coincidence can never
// occur (theta = 0).
HeraldResult herald_project(const IonPhotonState& a, const IonPhotonState& b);

// The heralded gate as an operator: (1/2) sigma_z^a (I - sigma_z^a sigma_z^b)
// = diag(0, 1, -1, 0); renormalized action on any product input equals
// herald_project up to a global phase.
Eigen::Matrix4cd gate_operator();

struct OpticalChain {
  double p_pi = 0.5;                   // correct-polarization fraction
  double pmt_quantum_efficiency = 0.15;
  double fiber_transmission = 0.2;
  double optics_transmission = 0.95;
  double branching_xi = 0.995;         // 1 - branching into the D state
  double solid_angle_fraction = 0.02;  // light-collection solid angle / 4 pi
  double attempt_rate = 75e3;          // Hz

  void validate() const;
  double chain_factor() const;  // product of the six per-photon factors
};

// theta * (chain factor)^2: net probability that one attempt heralds.
double success_probability(const OpticalChain& chain, double theta);

struct GateTableRow {
  Complex alpha, beta;    // ion a preparation
  Complex gamma, delta;   // ion b preparation
  std::optional<quantum::PureState> expected;  // empty on the never-heralding row
  quantum::ParityCombination measurement;
  double theta_theory = 0.0;
};

struct GateTableEntry {
  double theta = 0.0;
  bool heralds = false;
  std::optional<double> fidelity_parity;  // from the row's parity combination
  std::optional<double> fidelity_direct;  // <expected| rho |expected>
};

// The eight characterization rows: four equatorial-pair preparations, two
// half-fixed rows, |0>|1>, and the never-heralding |0>|0>.
std::vector<GateTableRow> standard_gate_table();

// Ideal-simulation evaluation; the |0>|0> row completes with
// heralds = false instead of throwing.
std::vector<GateTableEntry> evaluate_gate_table(const std::vector<GateTableRow>& rows);

}  // namespace ionlink::gate
