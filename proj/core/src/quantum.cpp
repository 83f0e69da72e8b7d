#include "ionlink/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "ionlink/errors.hpp"
#include "lbfgs.hpp"

namespace ionlink::quantum {

namespace {

int log2_dim(Eigen::Index dim) {
  int n = 0;
  Eigen::Index d = dim;
  while (d > 1) {
    if (d % 2 != 0) throw std::invalid_argument("state dimension must be a power of 2");
    d /= 2;
    ++n;
  }
  if (n < 1) throw std::invalid_argument("state must hold at least one qubit");
  return n;
}

CMat kron(const CMat& a, const CMat& b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

CMat embed_single_qubit(const Eigen::Matrix2cd& u, int qubit, int n_qubits) {
  if (qubit < 0 || qubit >= n_qubits) throw std::invalid_argument("qubit index out of range");
  CMat full = CMat::Identity(1, 1);
  for (int k = 0; k < n_qubits; ++k) {
    full = kron(full, k == qubit ? CMat(u) : CMat(CMat::Identity(2, 2)));
  }
  return full;
}

}  // namespace

Eigen::Matrix2cd pauli(int index) {
  Eigen::Matrix2cd m;
  const Complex i(0.0, 1.0);
  switch (index) {
    case 0: m << 1, 0, 0, 1; break;
    case 1: m << 0, 1, 1, 0; break;
    case 2: m << 0, -i, i, 0; break;
    case 3: m << 1, 0, 0, -1; break;
    default: throw std::invalid_argument("pauli: index must be 0..3");
  }
  return m;
}

PureState::PureState(CVec amplitudes) : amps_(std::move(amplitudes)) {
  log2_dim(amps_.size());
  const double norm = amps_.norm();
  if (std::abs(norm - 1.0) > kNormTolerance) {
    throw std::invalid_argument("PureState: amplitudes must have unit norm");
  }
  amps_ /= norm;
}

PureState PureState::qubit(Complex a0, Complex a1) {
  CVec v(2);
  v << a0, a1;
  return PureState(std::move(v));
}

PureState PureState::two_qubit(Complex a00, Complex a01, Complex a10, Complex a11) {
  CVec v(4);
  v << a00, a01, a10, a11;
  return PureState(std::move(v));
}

int PureState::qubit_count() const { return log2_dim(amps_.size()); }

DensityMatrix PureState::projector() const {
  return DensityMatrix(amps_ * amps_.adjoint());
}

double PureState::overlap(const PureState& other) const {
  if (dim() != other.dim()) throw std::invalid_argument("overlap: dimension mismatch");
  return std::norm(amps_.dot(other.amps_));
}

DensityMatrix::DensityMatrix(CMat matrix) : m_(std::move(matrix)) {
  if (m_.rows() != m_.cols()) throw std::invalid_argument("DensityMatrix: must be square");
  log2_dim(m_.rows());
  const double herm_err = (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
  if (herm_err > kNormTolerance) {
    throw std::invalid_argument("DensityMatrix: not Hermitian within tolerance");
  }
  m_ = 0.5 * (m_ + m_.adjoint().eval());
  const double tr = m_.trace().real();
  if (std::abs(tr - 1.0) > kNormTolerance) {
    throw std::invalid_argument("DensityMatrix: trace must be 1 within tolerance");
  }
  m_ /= tr;

  Eigen::SelfAdjointEigenSolver<CMat> es(m_);
  const auto& evals = es.eigenvalues();
  if (evals.minCoeff() < kEigenvalueFloor) {
    throw std::invalid_argument("DensityMatrix: negative eigenvalue beyond tolerance");
  }
  if (evals.minCoeff() < 0.0) {
    Eigen::VectorXd clipped = evals.cwiseMax(0.0);
    clipped /= clipped.sum();
    m_ = es.eigenvectors() * clipped.asDiagonal() * es.eigenvectors().adjoint();
  }
}

DensityMatrix DensityMatrix::from_measured(CMat matrix) {
  if (matrix.rows() != matrix.cols()) {
    throw std::invalid_argument("DensityMatrix: must be square");
  }
  log2_dim(matrix.rows());
  CMat h = 0.5 * (matrix + matrix.adjoint().eval());
  Eigen::SelfAdjointEigenSolver<CMat> es(h);
  Eigen::VectorXd clipped = es.eigenvalues().cwiseMax(0.0);
  const double total = clipped.sum();
  if (!(total > 0.0)) {
    throw std::invalid_argument("DensityMatrix: reconstruction has no positive weight");
  }
  clipped /= total;
  CMat rho = es.eigenvectors() * clipped.asDiagonal() * es.eigenvectors().adjoint();
  return DensityMatrix(std::move(rho), unchecked_tag{});
}

DensityMatrix DensityMatrix::maximally_mixed(int n_qubits) {
  const Eigen::Index dim = Eigen::Index(1) << n_qubits;
  return DensityMatrix(CMat::Identity(dim, dim) / static_cast<double>(dim));
}

int DensityMatrix::qubit_count() const { return log2_dim(m_.rows()); }

Eigen::Matrix2cd rotation_matrix(Axis axis, double angle) {
  const Eigen::Matrix2cd sigma = (axis == Axis::x) ? pauli(1) : pauli(2);
  return std::cos(0.5 * angle) * Eigen::Matrix2cd::Identity() -
         Complex(0.0, 1.0) * std::sin(0.5 * angle) * sigma;
}

Eigen::Matrix2cd equatorial_rotation(double phase, double angle) {
  const Eigen::Matrix2cd sigma = std::cos(phase) * pauli(1) + std::sin(phase) * pauli(2);
  return std::cos(0.5 * angle) * Eigen::Matrix2cd::Identity() -
         Complex(0.0, 1.0) * std::sin(0.5 * angle) * sigma;
}

PureState apply_single_qubit(const PureState& state, int qubit, const Eigen::Matrix2cd& u) {
  const CMat full = embed_single_qubit(u, qubit, state.qubit_count());
  return PureState(full * state.amplitudes());
}

DensityMatrix apply_single_qubit(const DensityMatrix& rho, int qubit,
                                 const Eigen::Matrix2cd& u) {
  const CMat full = embed_single_qubit(u, qubit, rho.qubit_count());
  return DensityMatrix(full * rho.matrix() * full.adjoint());
}

PureState rotate(const PureState& state, int qubit, Axis axis, double angle) {
  if (!std::isfinite(angle)) throw std::invalid_argument("rotate: angle must be finite");
  return apply_single_qubit(state, qubit, rotation_matrix(axis, angle));
}

DensityMatrix rotate(const DensityMatrix& rho, int qubit, Axis axis, double angle) {
  if (!std::isfinite(angle)) throw std::invalid_argument("rotate: angle must be finite");
  return apply_single_qubit(rho, qubit, rotation_matrix(axis, angle));
}

double fidelity(const DensityMatrix& rho, const PureState& ideal) {
  if (rho.dim() != ideal.dim()) throw std::invalid_argument("fidelity: dimension mismatch");
  const Complex value = ideal.amplitudes().adjoint() * rho.matrix() * ideal.amplitudes();
  return std::clamp(value.real(), 0.0, 1.0);
}

Eigen::Matrix2cd measurement_projector(char basis, int outcome) {
  if (outcome != 0 && outcome != 1) throw std::invalid_argument("outcome must be 0 or 1");
  Eigen::Vector2cd ket;
  const Complex i(0.0, 1.0);
  const double r = 1.0 / std::sqrt(2.0);
  switch (basis) {
    case 'z':
      ket = outcome == 0 ? Eigen::Vector2cd(1, 0) : Eigen::Vector2cd(0, 1);
      break;
    case 'x':  // pre-rotation R_y(pi/2): outcome 0 <-> (|0> - |1>)/sqrt(2)
      ket = outcome == 0 ? Eigen::Vector2cd(r, -r) : Eigen::Vector2cd(r, r);
      break;
    case 'y':  // pre-rotation R_x(pi/2): outcome 0 <-> (|0> + i|1>)/sqrt(2)
      ket = outcome == 0 ? Eigen::Vector2cd(r, i * r) : Eigen::Vector2cd(r, -i * r);
      break;
    default:
      throw std::invalid_argument("measurement basis must be one of x, y, z");
  }
  return ket * ket.adjoint();
}

double outcome_probability(const DensityMatrix& rho, const std::string& bases,
                           const std::vector<int>& outcomes) {
  const int n = rho.qubit_count();
  if (static_cast<int>(bases.size()) != n || static_cast<int>(outcomes.size()) != n) {
    throw std::invalid_argument("outcome_probability: need one basis and outcome per qubit");
  }
  CMat proj = CMat::Identity(1, 1);
  for (int k = 0; k < n; ++k) {
    proj = kron(proj, measurement_projector(bases[static_cast<std::size_t>(k)],
                                            outcomes[static_cast<std::size_t>(k)]));
  }
  return std::clamp((proj * rho.matrix()).trace().real(), 0.0, 1.0);
}

namespace {

char basis_char(Basis b) {
  switch (b) {
    case Basis::x: return 'x';
    case Basis::y: return 'y';
    case Basis::z: return 'z';
    default: return 'i';
  }
}

}  // namespace

double parity(const DensityMatrix& rho, Basis basis_a, Basis basis_b) {
  if (rho.qubit_count() != 2) throw std::invalid_argument("parity: need a 2-qubit state");
  const bool measure_a = basis_a != Basis::i;
  const bool measure_b = basis_b != Basis::i;
  if (!measure_a && !measure_b) return 1.0;

  auto readout = [](int outcome) { return outcome == 1 ? 1.0 : -1.0; };  // bright = |1>
  double sum = 0.0;
  for (int oa = 0; oa < (measure_a ? 2 : 1); ++oa) {
    for (int ob = 0; ob < (measure_b ? 2 : 1); ++ob) {
      CMat proj = kron(measure_a ? CMat(measurement_projector(basis_char(basis_a), oa))
                                 : CMat(CMat::Identity(2, 2)),
                       measure_b ? CMat(measurement_projector(basis_char(basis_b), ob))
                                 : CMat(CMat::Identity(2, 2)));
      const double p = (proj * rho.matrix()).trace().real();
      double weight = 1.0;
      if (measure_a) weight *= readout(oa);
      if (measure_b) weight *= readout(ob);
      sum += weight * p;
    }
  }
  return std::clamp(sum, -1.0, 1.0);
}

double fidelity_from_parities(const std::map<std::pair<Basis, Basis>, double>& parities,
                              const ParityCombination& combination) {
  double sum = combination.constant;
  for (const auto& [coef, a, b] : combination.terms) {
    const auto it = parities.find({a, b});
    if (it == parities.end()) {
      throw insufficient_data_error("fidelity_from_parities: missing parity value");
    }
    sum += coef * it->second;
  }
  return 0.25 * sum;
}

DensityMatrix stokes_reconstruct(double p0, double p1, double p_plus, double p_minus,
                                 double p_plus_i, double p_minus_i) {
  auto check_pair = [](double a, double b, const char* what) {
    if (std::abs(a + b - 1.0) > 1e-9) {
      throw std::invalid_argument(std::string("stokes_reconstruct: probabilities for ") + what +
                                  " do not sum to 1");
    }
  };
  check_pair(p0, p1, "the z basis");
  check_pair(p_plus, p_minus, "the x basis");
  check_pair(p_plus_i, p_minus_i, "the y basis");

  const double s1 = p_plus - p_minus;
  const double s2 = p_plus_i - p_minus_i;
  const double s3 = p0 - p1;
  CMat rho = 0.5 * (CMat(pauli(0)) + s1 * CMat(pauli(1)) + s2 * CMat(pauli(2)) +
                    s3 * CMat(pauli(3)));
  return DensityMatrix::from_measured(std::move(rho));
}

namespace {

struct MlProblem {
  std::vector<CMat> projectors;
  std::vector<double> counts;
  double total = 0.0;
  Eigen::Index dim = 0;

  // Lower-triangular T from the real parameter vector: real diagonal plus
  // complex strictly-lower entries.
  CMat unpack(const Eigen::VectorXd& x) const {
    CMat t = CMat::Zero(dim, dim);
    Eigen::Index idx = 0;
    for (Eigen::Index r = 0; r < dim; ++r) {
      for (Eigen::Index c = 0; c < r; ++c) {
        t(r, c) = Complex(x(idx), x(idx + 1));
        idx += 2;
      }
      t(r, r) = Complex(x(idx), 0.0);
      ++idx;
    }
    return t;
  }

  Eigen::Index parameter_count() const { return dim * dim; }

  // Negative mean log-likelihood and its gradient.
  double objective(const Eigen::VectorXd& x, Eigen::VectorXd& grad) const {
    const CMat t = unpack(x);
    const double tau = t.squaredNorm();
    const CMat rho = (t.adjoint() * t) / tau;

    double nll = 0.0;
    CMat weighted = CMat::Zero(dim, dim);
    for (std::size_t k = 0; k < projectors.size(); ++k) {
      double p = (projectors[k] * rho).trace().real();
      p = std::max(p, 1e-300);
      nll -= counts[k] * std::log(p);
      weighted += (counts[k] / p) * projectors[k];
    }
    nll /= total;

    // d(-LL)/dT* = -(T W - N T)/tau, W = sum (n/p) Pi, evaluated on T^dagger T;
    // here rho = T^dagger T / tau so the roles of rows/columns follow T.
    const CMat g_conj = -(t * weighted - total * t) / (tau * total);
    grad.resize(parameter_count());
    Eigen::Index idx = 0;
    for (Eigen::Index r = 0; r < dim; ++r) {
      for (Eigen::Index c = 0; c < r; ++c) {
        grad(idx) = 2.0 * g_conj(r, c).real();
        grad(idx + 1) = 2.0 * g_conj(r, c).imag();
        idx += 2;
      }
      grad(idx) = 2.0 * g_conj(r, r).real();
      ++idx;
    }
    return nll;
  }
};

}  // namespace

DensityMatrix ml_tomography(const TomographyCounts& counts, int n_qubits,
                            const MlOptions& options) {
  if (n_qubits < 1 || n_qubits > 2) {
    throw std::invalid_argument("ml_tomography: supported for 1 or 2 qubits");
  }
  const std::size_t needed = n_qubits == 1 ? 3 : 9;
  std::set<std::string> seen;
  for (const auto& setting : counts.settings) {
    if (setting.bases.size() != static_cast<std::size_t>(n_qubits)) {
      throw std::invalid_argument("ml_tomography: basis string length mismatch");
    }
    std::uint64_t total = 0;
    for (const auto& [outcome, n] : setting.counts) total += n;
    if (total == 0) {
      throw insufficient_data_error("ml_tomography: setting with zero total counts");
    }
    seen.insert(setting.bases);
  }
  if (seen.size() < needed) {
    throw insufficient_data_error("ml_tomography: need all 3^n basis settings");
  }

  MlProblem problem;
  problem.dim = Eigen::Index(1) << n_qubits;
  for (const auto& setting : counts.settings) {
    for (const auto& [outcome, n] : setting.counts) {
      if (outcome.size() != static_cast<std::size_t>(n_qubits)) {
        throw std::invalid_argument("ml_tomography: outcome bitstring length mismatch");
      }
      if (n == 0) continue;
      CMat proj = CMat::Identity(1, 1);
      for (int k = 0; k < n_qubits; ++k) {
        const int bit = outcome[static_cast<std::size_t>(k)] == '1' ? 1 : 0;
        proj = kron(proj, measurement_projector(setting.bases[static_cast<std::size_t>(k)], bit));
      }
      problem.projectors.push_back(std::move(proj));
      problem.counts.push_back(static_cast<double>(n));
      problem.total += static_cast<double>(n);
    }
  }

  Eigen::VectorXd x0 = Eigen::VectorXd::Zero(problem.parameter_count());
  {
    // T = I / sqrt(dim): the maximally mixed starting point.
    Eigen::Index idx = 0;
    const double diag = 1.0 / std::sqrt(static_cast<double>(problem.dim));
    for (Eigen::Index r = 0; r < problem.dim; ++r) {
      idx += 2 * r;
      x0(idx) = diag;
      ++idx;
    }
  }

  auto fn = [&problem](const Eigen::VectorXd& x, Eigen::VectorXd& grad) {
    return problem.objective(x, grad);
  };
  const auto result = detail::lbfgs_minimize(fn, x0, options.max_iterations,
                                             options.gradient_tolerance);
  if (!result.converged) {
    throw convergence_error("ml_tomography: optimizer did not converge");
  }
  const CMat t = problem.unpack(result.x);
  CMat rho = (t.adjoint() * t) / t.squaredNorm();
  return DensityMatrix::from_measured(std::move(rho));
}

double concurrence(const DensityMatrix& rho) {
  if (rho.qubit_count() != 2) throw std::invalid_argument("concurrence: need a 2-qubit state");
  const CMat yy = kron(pauli(2), pauli(2));
  const CMat rho_tilde = yy * rho.matrix().conjugate() * yy;
  Eigen::ComplexEigenSolver<CMat> es(rho.matrix() * rho_tilde);
  std::array<double, 4> lambda{};
  for (int k = 0; k < 4; ++k) {
    lambda[static_cast<std::size_t>(k)] = std::sqrt(std::max(0.0, es.eigenvalues()(k).real()));
  }
  std::sort(lambda.begin(), lambda.end(), std::greater<>());
  return std::max(0.0, lambda[0] - lambda[1] - lambda[2] - lambda[3]);
}

double entanglement_of_formation_from_concurrence(double c) {
  c = std::clamp(c, 0.0, 1.0);
  const double x = 0.5 * (1.0 + std::sqrt(1.0 - c * c));
  auto plogp = [](double p) { return p > 0.0 ? -p * std::log2(p) : 0.0; };
  return plogp(x) + plogp(1.0 - x);
}

double entanglement_of_formation(const DensityMatrix& rho) {
  return entanglement_of_formation_from_concurrence(concurrence(rho));
}

ProcessMatrix identity_process() {
  ProcessMatrix chi;
  chi.chi.setZero();
  chi.chi(0, 0) = 1.0;
  return chi;
}

std::array<PureState, 4> standard_process_inputs() {
  const double r = 1.0 / std::sqrt(2.0);
  return {PureState::qubit(1, 0), PureState::qubit(0, 1), PureState::qubit(r, r),
          PureState::qubit(r, Complex(0.0, r))};
}

namespace {

Eigen::Vector4cd vec_col_major(const Eigen::Matrix2cd& m) {
  Eigen::Vector4cd v;
  v << m(0, 0), m(1, 0), m(0, 1), m(1, 1);
  return v;
}

Eigen::Matrix4cd chi_from_superoperator(const Eigen::Matrix4cd& s) {
  Eigen::Matrix4cd chi;
  for (int m = 0; m < 4; ++m) {
    for (int n = 0; n < 4; ++n) {
      const Eigen::Matrix4cd basis =
          kron(CMat(pauli(n).transpose()), CMat(pauli(m)));
      chi(m, n) = (basis.adjoint() * s).trace() / 4.0;
    }
  }
  return chi;
}

Eigen::Matrix4cd project_chi(const Eigen::Matrix4cd& raw) {
  Eigen::Matrix4cd h = 0.5 * (raw + raw.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(h);
  Eigen::Vector4d clipped = es.eigenvalues().cwiseMax(0.0);
  const double total = clipped.sum();
  if (!(total > 0.0)) throw std::invalid_argument("process matrix has no positive weight");
  clipped /= total;
  return es.eigenvectors() * clipped.asDiagonal() * es.eigenvectors().adjoint();
}

Eigen::Matrix2cd apply_chi(const Eigen::Matrix4cd& chi, const Eigen::Matrix2cd& rho) {
  Eigen::Matrix2cd out = Eigen::Matrix2cd::Zero();
  for (int m = 0; m < 4; ++m) {
    for (int n = 0; n < 4; ++n) {
      out += chi(m, n) * pauli(m) * rho * pauli(n);
    }
  }
  return out;
}

}  // namespace

ProcessMatrix process_tomography(const std::array<PureState, 4>& inputs,
                                 const std::array<DensityMatrix, 4>& outputs,
                                 bool ml_refine) {
  Eigen::Matrix4cd a, b;
  for (int k = 0; k < 4; ++k) {
    const auto& in = inputs[static_cast<std::size_t>(k)];
    const auto& out = outputs[static_cast<std::size_t>(k)];
    if (in.dim() != 2 || out.dim() != 2) {
      throw std::invalid_argument("process_tomography: single-qubit states required");
    }
    a.col(k) = vec_col_major(in.projector().matrix());
    b.col(k) = vec_col_major(out.matrix());
  }
  Eigen::FullPivLU<Eigen::Matrix4cd> lu(a);
  if (!lu.isInvertible()) {
    throw insufficient_data_error("process_tomography: input states are not informationally complete");
  }
  const Eigen::Matrix4cd s = b * lu.inverse();
  Eigen::Matrix4cd chi = project_chi(chi_from_superoperator(s));

  if (ml_refine) {
    // Least-squares refinement over chi = T^dagger T / tr with numerical
    // gradients; initialized from the linear inversion.
    Eigen::LLT<Eigen::Matrix4cd> llt(chi + 1e-12 * Eigen::Matrix4cd::Identity());
    Eigen::Matrix4cd t0 = llt.matrixL().adjoint();
    auto pack = [](const Eigen::Matrix4cd& t) {
      Eigen::VectorXd x(16);
      Eigen::Index idx = 0;
      for (Eigen::Index r = 0; r < 4; ++r) {
        for (Eigen::Index c = 0; c < r; ++c) {
          x(idx) = t(r, c).real();
          x(idx + 1) = t(r, c).imag();
          idx += 2;
        }
        x(idx) = t(r, r).real();
        ++idx;
      }
      return x;
    };
    auto unpack = [](const Eigen::VectorXd& x) {
      Eigen::Matrix4cd t = Eigen::Matrix4cd::Zero();
      Eigen::Index idx = 0;
      for (Eigen::Index r = 0; r < 4; ++r) {
        for (Eigen::Index c = 0; c < r; ++c) {
          t(r, c) = Complex(x(idx), x(idx + 1));
          idx += 2;
        }
        t(r, r) = Complex(x(idx), 0.0);
        ++idx;
      }
      return t;
    };
    auto loss_only = [&](const Eigen::VectorXd& x) {
      const Eigen::Matrix4cd t = unpack(x);
      const Eigen::Matrix4cd c = (t.adjoint() * t) / t.squaredNorm();
      double loss = 0.0;
      for (int k = 0; k < 4; ++k) {
        const Eigen::Matrix2cd pred =
            apply_chi(c, inputs[static_cast<std::size_t>(k)].projector().matrix());
        loss += (pred - outputs[static_cast<std::size_t>(k)].matrix()).squaredNorm();
      }
      return loss;
    };
    auto fn = [&](const Eigen::VectorXd& x, Eigen::VectorXd& grad) {
      const double f = loss_only(x);
      grad.resize(x.size());
      const double h = 1e-7;
      for (Eigen::Index i = 0; i < x.size(); ++i) {
        Eigen::VectorXd xp = x;
        xp(i) += h;
        Eigen::VectorXd xm = x;
        xm(i) -= h;
        grad(i) = (loss_only(xp) - loss_only(xm)) / (2.0 * h);
      }
      return f;
    };
    const auto result = detail::lbfgs_minimize(fn, pack(t0), 2000, 1e-9);
    const Eigen::Matrix4cd t = unpack(result.x);
    chi = (t.adjoint() * t) / t.squaredNorm();
  }

  ProcessMatrix out;
  out.chi = chi;
  return out;
}

double process_fidelity(const ProcessMatrix& chi, const ProcessMatrix& chi_ideal) {
  const double value = (chi_ideal.chi * chi.chi).trace().real();
  return std::clamp(value, 0.0, 1.0);
}

}  // namespace ionlink::quantum
