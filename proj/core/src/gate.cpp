#include "ionlink/gate.hpp"

#include <cmath>
#include <stdexcept>

#include "ionlink/errors.hpp"

namespace ionlink::gate {

namespace {
constexpr double kRoot2Inv = 0.70710678118654752440;
}

void IonPhotonState::validate() const {
  if (std::abs(amps.norm() - 1.0) > quantum::kNormTolerance) {
    throw std::invalid_argument("IonPhotonState: amplitudes must have unit norm");
  }
}

IonPhotonState excite_entangle(Complex alpha, Complex beta) {
  if (std::abs(std::norm(alpha) + std::norm(beta) - 1.0) > quantum::kNormTolerance) {
    throw std::invalid_argument("excite_entangle: |alpha|^2 + |beta|^2 must be 1");
  }
  IonPhotonState s;
  s.amps(2 * 0 + static_cast<int>(Freq::blue)) = alpha;
  s.amps(2 * 1 + static_cast<int>(Freq::red)) = beta;
  return s;
}

double PhotonicState::norm_squared() const {
  double sum = 0.0;
  for (const auto& [occ, amp] : amps) sum += std::norm(amp);
  return sum;
}

namespace {

// A creation-operator monomial: list of (slot, coefficient-free) factors.
// slot = 2*(port - first_port) + freq over two ports.
struct Monomial {
  std::vector<int> slots;
  Complex coef;
};

double occupancy_norm(const PhotonicState::Occupancy& occ) {
  double f = 1.0;
  for (int n : occ) {
    for (int k = 2; k <= n; ++k) f *= k;
  }
  return std::sqrt(f);
}

std::vector<int> occupancy_to_slots(const PhotonicState::Occupancy& occ) {
  std::vector<int> slots;
  for (int s = 0; s < 4; ++s) {
    for (int k = 0; k < occ[static_cast<std::size_t>(s)]; ++k) slots.push_back(s);
  }
  return slots;
}

}  // namespace

PhotonicState single_photon_input(int port, Freq f) {
  if (port != 1 && port != 2) throw std::invalid_argument("input port must be 1 or 2");
  PhotonicState s;
  s.first_port = 1;
  PhotonicState::Occupancy occ{0, 0, 0, 0};
  occ[static_cast<std::size_t>(2 * (port - 1) + static_cast<int>(f))] = 1;
  s.amps[occ] = 1.0;
  return s;
}

PhotonicState two_photon_input(Freq f_port1, Freq f_port2) {
  PhotonicState s;
  s.first_port = 1;
  PhotonicState::Occupancy occ{0, 0, 0, 0};
  occ[static_cast<std::size_t>(static_cast<int>(f_port1))] += 1;
  occ[static_cast<std::size_t>(2 + static_cast<int>(f_port2))] += 1;
  // Same port+frequency twice would need the sqrt(2) bosonic factor, but
  // ports differ here by construction.
  s.amps[occ] = 1.0;
  return s;
}

PhotonicState bell_photon_state(BellLabel label) {
  PhotonicState s;
  s.first_port = 1;
  auto add = [&s](Freq f1, Freq f2, Complex c) {
    PhotonicState::Occupancy occ{0, 0, 0, 0};
    occ[static_cast<std::size_t>(static_cast<int>(f1))] += 1;
    occ[static_cast<std::size_t>(2 + static_cast<int>(f2))] += 1;
    s.amps[occ] += c;
  };
  switch (label) {
    case BellLabel::phi_plus:
      add(Freq::blue, Freq::blue, kRoot2Inv);
      add(Freq::red, Freq::red, kRoot2Inv);
      break;
    case BellLabel::phi_minus:
      add(Freq::blue, Freq::blue, kRoot2Inv);
      add(Freq::red, Freq::red, -kRoot2Inv);
      break;
    case BellLabel::psi_plus:
      add(Freq::blue, Freq::red, kRoot2Inv);
      add(Freq::red, Freq::blue, kRoot2Inv);
      break;
    case BellLabel::psi_minus:
      add(Freq::blue, Freq::red, kRoot2Inv);
      add(Freq::red, Freq::blue, -kRoot2Inv);
      break;
  }
  return s;
}

PhotonicState beamsplitter_transform(const PhotonicState& in) {
  if (in.first_port != 1) {
    throw std::invalid_argument("beamsplitter_transform: input must be over ports 1, 2");
  }
  // a1f -> (a3f + a4f)/sqrt(2), a2f -> (-a3f + a4f)/sqrt(2).
  // Output slot = 2*(port - 3) + freq.
  auto expansion = [](int slot) {
    const int port = slot / 2;   // 0 = port 1, 1 = port 2
    const int freq = slot % 2;
    const double sign = port == 0 ? 1.0 : -1.0;
    return std::array<std::pair<int, Complex>, 2>{
        std::pair<int, Complex>{0 * 2 + freq, sign * kRoot2Inv},
        std::pair<int, Complex>{1 * 2 + freq, kRoot2Inv}};
  };

  PhotonicState out;
  out.first_port = 3;
  for (const auto& [occ, amp] : in.amps) {
    const auto slots = occupancy_to_slots(occ);
    if (slots.size() > 2) {
      throw std::invalid_argument("beamsplitter_transform: supports at most two photons");
    }
    // The monomial coefficient carries 1/sqrt(n!) for repeated modes.
    const Complex base = amp / occupancy_norm(occ);
    std::vector<Monomial> terms{{{}, base}};
    for (int slot : slots) {
      std::vector<Monomial> next;
      for (const auto& term : terms) {
        for (const auto& [out_slot, coef] : expansion(slot)) {
          Monomial t = term;
          t.slots.push_back(out_slot);
          t.coef *= coef;
          next.push_back(std::move(t));
        }
      }
      terms = std::move(next);
    }
    for (const auto& term : terms) {
      PhotonicState::Occupancy o{0, 0, 0, 0};
      for (int s : term.slots) o[static_cast<std::size_t>(s)] += 1;
      out.amps[o] += term.coef * occupancy_norm(o);
    }
  }
  // Drop numerically dead entries so state comparisons stay readable.
  for (auto it = out.amps.begin(); it != out.amps.end();) {
    it = std::abs(it->second) < 1e-15 ? out.amps.erase(it) : std::next(it);
  }
  return out;
}

double coincidence_probability(const PhotonicState& out) {
  if (out.first_port != 3) {
    throw std::invalid_argument("coincidence_probability: expected a beamsplitter output state");
  }
  double sum = 0.0;
  for (const auto& [occ, amp] : out.amps) {
    const int port3 = occ[0] + occ[1];
    const int port4 = occ[2] + occ[3];
    if (port3 == 1 && port4 == 1) sum += std::norm(amp);
  }
  return sum;
}

BellDecomposition bell_decompose(const IonPhotonState& a, const IonPhotonState& b) {
  a.validate();
  b.validate();
  // Photon-pair amplitudes per ion-ion basis state.
  // joint(ion_a, ion_b; f_a, f_b) = a.amp(ion_a, f_a) * b.amp(ion_b, f_b).
  BellDecomposition out;
  for (auto& c : out.components) c.setZero();
  for (int ia = 0; ia < 2; ++ia) {
    for (int ib = 0; ib < 2; ++ib) {
      const int ion_index = 2 * ia + ib;
      const Complex bb = a.amp(ia, Freq::blue) * b.amp(ib, Freq::blue);
      const Complex br = a.amp(ia, Freq::blue) * b.amp(ib, Freq::red);
      const Complex rb = a.amp(ia, Freq::red) * b.amp(ib, Freq::blue);
      const Complex rr = a.amp(ia, Freq::red) * b.amp(ib, Freq::red);
      out.components[0](ion_index) = kRoot2Inv * (bb + rr);
      out.components[1](ion_index) = kRoot2Inv * (bb - rr);
      out.components[2](ion_index) = kRoot2Inv * (br + rb);
      out.components[3](ion_index) = kRoot2Inv * (br - rb);
    }
  }
  return out;
}

double BellDecomposition::total_weight() const {
  double sum = 0.0;
  for (const auto& c : components) sum += c.squaredNorm();
  return sum;
}

HeraldResult herald_project(const IonPhotonState& a, const IonPhotonState& b) {
  const BellDecomposition decomp = bell_decompose(a, b);
  const Eigen::Vector4cd& amp = decomp[BellLabel::psi_minus];
  const double theta = amp.squaredNorm();
  if (theta <= 0.0) {
    throw zero_probability_error("herald_project: a coincident detection can never occur");
  }
  HeraldResult result;
  result.theta = theta;
  result.ion_state = quantum::PureState(amp / amp.norm());
  return result;
}

Eigen::Matrix4cd gate_operator() {
  Eigen::Matrix4cd g = Eigen::Matrix4cd::Zero();
  g(1, 1) = 1.0;
  g(2, 2) = -1.0;
  return g;
}

void OpticalChain::validate() const {
  auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!in_unit(p_pi) || !in_unit(pmt_quantum_efficiency) || !in_unit(fiber_transmission) ||
      !in_unit(optics_transmission) || !in_unit(branching_xi) || !in_unit(solid_angle_fraction)) {
    throw std::domain_error("OpticalChain: every factor must be in [0, 1]");
  }
  if (!(attempt_rate > 0.0)) throw std::domain_error("OpticalChain: attempt rate must be > 0");
}

double OpticalChain::chain_factor() const {
  validate();
  return p_pi * pmt_quantum_efficiency * fiber_transmission * optics_transmission * branching_xi *
         solid_angle_fraction;
}

double success_probability(const OpticalChain& chain, double theta) {
  if (theta < 0.0 || theta > 0.5 + 1e-12) {
    throw std::domain_error("success_probability: theta must be in [0, 1/2]");
  }
  const double f = chain.chain_factor();
  return theta * f * f;
}

std::vector<GateTableRow> standard_gate_table() {
  using quantum::Basis;
  using quantum::ParityCombination;
  using quantum::PureState;
  const double r = kRoot2Inv;
  const Complex i(0.0, 1.0);

  ParityCombination singlet{1.0,
                            {{-1.0, Basis::x, Basis::x},
                             {-1.0, Basis::y, Basis::y},
                             {-1.0, Basis::z, Basis::z}}};
  ParityCombination psi_minus_i{1.0,
                                {{-1.0, Basis::x, Basis::y},
                                 {+1.0, Basis::y, Basis::x},
                                 {-1.0, Basis::z, Basis::z}}};
  ParityCombination triplet{1.0,
                            {{+1.0, Basis::x, Basis::x},
                             {+1.0, Basis::y, Basis::y},
                             {-1.0, Basis::z, Basis::z}}};
  ParityCombination psi_plus_i{1.0,
                               {{+1.0, Basis::x, Basis::y},
                                {-1.0, Basis::y, Basis::x},
                                {-1.0, Basis::z, Basis::z}}};
  ParityCombination product01{1.0,
                              {{+1.0, Basis::i, Basis::z},
                               {-1.0, Basis::z, Basis::i},
                               {-1.0, Basis::z, Basis::z}}};

  std::vector<GateTableRow> rows;
  rows.push_back({r, r, r, r,
                  PureState::two_qubit(0, r, -r, 0), singlet, 0.25});
  rows.push_back({r, i * r, r, r,
                  PureState::two_qubit(0, r, -i * r, 0), psi_minus_i, 0.25});
  rows.push_back({r, -r, r, r,
                  PureState::two_qubit(0, r, r, 0), triplet, 0.25});
  rows.push_back({r, -i * r, r, r,
                  PureState::two_qubit(0, r, i * r, 0), psi_plus_i, 0.25});
  rows.push_back({r, r, 0, 1,
                  PureState::two_qubit(0, 1, 0, 0), product01, 0.25});
  rows.push_back({1, 0, r, r,
                  PureState::two_qubit(0, 1, 0, 0), product01, 0.25});
  rows.push_back({1, 0, 0, 1,
                  PureState::two_qubit(0, 1, 0, 0), product01, 0.5});
  rows.push_back({1, 0, 1, 0, std::nullopt, ParityCombination{}, 0.0});
  return rows;
}

std::vector<GateTableEntry> evaluate_gate_table(const std::vector<GateTableRow>& rows) {
  std::vector<GateTableEntry> out;
  out.reserve(rows.size());
  for (const auto& row : rows) {
    GateTableEntry entry;
    const IonPhotonState a = excite_entangle(row.alpha, row.beta);
    const IonPhotonState b = excite_entangle(row.gamma, row.delta);
    const BellDecomposition decomp = bell_decompose(a, b);
    entry.theta = decomp[BellLabel::psi_minus].squaredNorm();
    entry.heralds = entry.theta > 0.0;
    if (entry.heralds && row.expected.has_value()) {
      const HeraldResult herald = herald_project(a, b);
      const quantum::DensityMatrix rho = herald.ion_state.projector();
      std::map<std::pair<quantum::Basis, quantum::Basis>, double> parities;
      for (const auto& [coef, ba, bb] : row.measurement.terms) {
        parities[{ba, bb}] = quantum::parity(rho, ba, bb);
      }
      entry.fidelity_parity = quantum::fidelity_from_parities(parities, row.measurement);
      entry.fidelity_direct = quantum::fidelity(rho, *row.expected);
    }
    out.push_back(std::move(entry));
  }
  return out;
}

}  // namespace ionlink::gate
