#pragma once

#include <optional>

// Closed-form scaling estimates for photon-mediated entanglement: 1D
// cluster-state construction time and repeater connection time.  The
// cluster formula spans hundreds of orders of magnitude, so the dominant
// term is evaluated in log10 space and the linear-scale value is reported
// only when representable.

namespace ionlink::scaling {

struct ScalingQuery {
  double success_probability = 0.0;  // P, in (0, 1]
  double attempt_period = 0.0;       // t_a, s
  double qubit_count = 2;            // n
  double node_count = 2;             // N
  double coherence_time = 2.5;       // s

  void validate() const;
};

struct ClusterTime {
  double log10_seconds = 0.0;
  std::optional<double> seconds;  // set when the value fits in a double
  double log10_years = 0.0;
  double critical_chain_size = 0.0;  // n_c = ceil(4/P)
  // True when n > n_c and the two-stage (grow then fuse) formula applies;
  // false when n <= n_c, where the estimate is the growth of a single
  // n-qubit chain and no fusion stage exists.
  bool fusion_stage = false;
};

// T(n) = t_a (1/P)^(log2(n_c + 1)) + (t_a / P) log2(n - n_c) for n > n_c;
// t_a (1/P)^(log2(n + 1)) otherwise.
ClusterTime cluster_state_time(const ScalingQuery& query);

// T_success * ln(N); zero for N <= 1.
double repeater_connect_time(double t_success, double nodes);

// ln(N) / coherence_time: the mean two-node success rate needed to connect
// N nodes within the coherence time.
double required_success_rate(double nodes, double coherence_time);

}  // namespace ionlink::scaling
