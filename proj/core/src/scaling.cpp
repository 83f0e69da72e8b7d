#include "ionlink/scaling.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "ionlink/constants.hpp"

namespace ionlink::scaling {

void ScalingQuery::validate() const {
  if (!(success_probability > 0.0) || success_probability > 1.0) {
    throw std::domain_error("ScalingQuery: success probability must be in (0, 1]");
  }
  if (!(attempt_period > 0.0)) {
    throw std::domain_error("ScalingQuery: attempt period must be positive");
  }
  if (!(qubit_count >= 2.0)) {
    throw std::domain_error("ScalingQuery: qubit count must be at least 2");
  }
  if (!(node_count >= 2.0)) {
    throw std::domain_error("ScalingQuery: node count must be at least 2");
  }
  if (!(coherence_time > 0.0)) {
    throw std::domain_error("ScalingQuery: coherence time must be positive");
  }
}

ClusterTime cluster_state_time(const ScalingQuery& query) {
  query.validate();
  const double p = query.success_probability;
  const double n = query.qubit_count;
  const double n_c = std::ceil(4.0 / p);

  ClusterTime out;
  out.critical_chain_size = n_c;
  out.fusion_stage = n > n_c;

  const double log10_inv_p = -std::log10(p);
  const double chain_qubits = out.fusion_stage ? n_c : n;
  // Dominant chain-growth term t_a (1/P)^(log2(chain + 1)), in log10 space.
  const double log10_grow = std::log10(query.attempt_period) +
                            std::log2(chain_qubits + 1.0) * log10_inv_p;

  double total_log10 = log10_grow;
  if (out.fusion_stage) {
    const double fuse = (query.attempt_period / p) * std::log2(n - n_c);
    const double grow = std::pow(10.0, log10_grow);
    if (std::isfinite(grow)) {
      total_log10 = std::log10(grow + fuse);
    }
    // else the fusion term is negligible against an overflowing first term
  }

  out.log10_seconds = total_log10;
  out.log10_years = total_log10 - std::log10(constants::seconds_per_year);
  if (total_log10 < std::log10(std::numeric_limits<double>::max())) {
    out.seconds = std::pow(10.0, total_log10);
  }
  return out;
}

double repeater_connect_time(double t_success, double nodes) {
  if (!(t_success >= 0.0)) {
    throw std::domain_error("repeater_connect_time: success time must be nonnegative");
  }
  if (nodes <= 1.0) return 0.0;
  return t_success * std::log(nodes);
}

double required_success_rate(double nodes, double coherence_time) {
  if (!(coherence_time > 0.0)) {
    throw std::domain_error("required_success_rate: coherence time must be positive");
  }
  if (nodes <= 1.0) return 0.0;
  return std::log(nodes) / coherence_time;
}

}  // namespace ionlink::scaling
