#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

// One- and two-qubit state algebra: pure states, density matrices, Bloch
// rotations, fidelity, parity observables, Stokes and maximum-likelihood
// tomography, process tomography, concurrence and entanglement of
// formation.
//
// Measurement conventions follow the fluorescence readout used throughout:
// a z measurement distinguishes |0> (dark) from |1> (bright), and the x/y
// bases are reached by the pre-detection rotations R_y(pi/2) and R_x(pi/2).
// With R_axis(angle) = exp(-i angle sigma_axis / 2) this maps outcome 0 in
// the x basis to (|0>-|1>)/sqrt(2) and outcome 0 in the y basis to
// (|0>+i|1>)/sqrt(2).

namespace ionlink::quantum {

using Complex = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

inline constexpr double kNormTolerance = 1e-12;
inline constexpr double kEigenvalueFloor = -1e-10;

class DensityMatrix;

class PureState {
 public:
  PureState() : amps_(CVec::Zero(2)) { amps_(0) = 1.0; }
  explicit PureState(CVec amplitudes);  // dimension 2^n, unit norm within 1e-12

  static PureState qubit(Complex a0, Complex a1);
  static PureState two_qubit(Complex a00, Complex a01, Complex a10, Complex a11);

  int qubit_count() const;
  Eigen::Index dim() const { return amps_.size(); }
  const CVec& amplitudes() const { return amps_; }
  Complex amplitude(Eigen::Index i) const { return amps_(i); }
  DensityMatrix projector() const;

  // |<a|b>|^2; global phases drop out.
  double overlap(const PureState& other) const;

 private:
  CVec amps_;
};

class DensityMatrix {
 public:
  DensityMatrix() : m_(CMat::Identity(2, 2) * 0.5) {}
  // Strict constructor: Hermitian within 1e-12, trace 1 within 1e-12,
  // eigenvalues >= -1e-10 (tiny negatives are clipped and the matrix
  // renormalized); anything worse throws std::invalid_argument.
  explicit DensityMatrix(CMat matrix);

  // For matrices produced by linear reconstruction from measured counts:
  // Hermitizes, projects onto the PSD cone (clips all negative
  // eigenvalues) and renormalizes the trace.
  static DensityMatrix from_measured(CMat matrix);

  static DensityMatrix maximally_mixed(int n_qubits);

  int qubit_count() const;
  Eigen::Index dim() const { return m_.rows(); }
  const CMat& matrix() const { return m_; }

 private:
  struct unchecked_tag {};
  DensityMatrix(CMat matrix, unchecked_tag) : m_(std::move(matrix)) {}
  CMat m_;
};

enum class Axis { x, y };
enum class Basis { x, y, z, i };  // i = trace that qubit out

// 2x2 rotation exp(-i angle sigma_axis / 2).
Eigen::Matrix2cd rotation_matrix(Axis axis, double angle);
// Rotation about the equatorial axis cos(phase) x + sin(phase) y, the knob
// a microwave pulse of given phase actually turns.
Eigen::Matrix2cd equatorial_rotation(double phase, double angle);

PureState rotate(const PureState& state, int qubit, Axis axis, double angle);
DensityMatrix rotate(const DensityMatrix& rho, int qubit, Axis axis, double angle);
PureState apply_single_qubit(const PureState& state, int qubit, const Eigen::Matrix2cd& u);
DensityMatrix apply_single_qubit(const DensityMatrix& rho, int qubit, const Eigen::Matrix2cd& u);

// <psi| rho |psi>.
double fidelity(const DensityMatrix& rho, const PureState& ideal);

// Projector onto outcome (0 or 1) for a measurement in basis 'x', 'y' or
// 'z' under the pre-rotation convention above.
Eigen::Matrix2cd measurement_projector(char basis, int outcome);

// Probability of a joint outcome (one bit per qubit, qubit 0 first) when
// every qubit is measured in the given basis characters, e.g. "xy".
double outcome_probability(const DensityMatrix& rho, const std::string& bases,
                           const std::vector<int>& outcomes);

// Parity: expectation of the +/-1-valued readout product, bright = |1| = +1.
// Basis::i traces the qubit out (single-qubit parity).
double parity(const DensityMatrix& rho, Basis basis_a, Basis basis_b);

struct ParityCombination {
  double constant = 1.0;
  // (coefficient, basis_a, basis_b) terms inside 1/4 ( constant + sum ... ).
  std::vector<std::tuple<double, Basis, Basis>> terms;
};

double fidelity_from_parities(const std::map<std::pair<Basis, Basis>, double>& parities,
                              const ParityCombination& combination);

// Single-qubit Stokes reconstruction from the six basis-state
// probabilities; complementary pairs must sum to 1 within 1e-9.  The
// result is projected onto the physical cone (relevant only for noisy
// inputs).
DensityMatrix stokes_reconstruct(double p0, double p1, double p_plus, double p_minus,
                                 double p_plus_i, double p_minus_i);

struct TomographySetting {
  std::string bases;                           // one of {x,y,z} per qubit, e.g. "xy"
  std::map<std::string, std::uint64_t> counts;  // outcome bitstring -> count
};

struct TomographyCounts {
  std::vector<TomographySetting> settings;
};

struct MlOptions {
  int max_iterations = 5000;
  double gradient_tolerance = 1e-10;
};

// Maximum-likelihood state reconstruction over the physical density
// matrices, parameterized as T^dagger T / tr(T^dagger T) with T lower
// triangular (positive semidefinite by construction).  Deterministic:
// quasi-Newton ascent from the maximally mixed state.
DensityMatrix ml_tomography(const TomographyCounts& counts, int n_qubits,
                            const MlOptions& options = {});

// Wootters concurrence of a 2-qubit state.
double concurrence(const DensityMatrix& rho);
// Entanglement of formation h((1 + sqrt(1 - C^2))/2), h = binary entropy.
double entanglement_of_formation(const DensityMatrix& rho);
double entanglement_of_formation_from_concurrence(double c);

struct ProcessMatrix {
  Eigen::Matrix4cd chi;  // Pauli basis {I, X, Y, Z}
};

ProcessMatrix identity_process();
// Fixed informationally complete inputs {|0>, |1>, |+>, |+i>}.
std::array<PureState, 4> standard_process_inputs();

// Linear-inversion process tomography followed by projection onto the PSD
// cone; optional least-squares refinement over chi = T^dagger T.
ProcessMatrix process_tomography(const std::array<PureState, 4>& inputs,
                                 const std::array<DensityMatrix, 4>& outputs,
                                 bool ml_refine = false);

// Re tr(chi_ideal chi), clipped to [0, 1].
double process_fidelity(const ProcessMatrix& chi, const ProcessMatrix& chi_ideal);

// Average gate fidelity from process fidelity for a qubit channel.
inline double average_from_process_fidelity(double f_process) {
  return (2.0 * f_process + 1.0) / 3.0;
}

Eigen::Matrix2cd pauli(int index);  // 0 = I, 1 = X, 2 = Y, 3 = Z

}  // namespace ionlink::quantum
