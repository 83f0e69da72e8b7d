#pragma once

#include <cstdint>
#include <vector>

// Pulse-train single-photon correlation functions behind a 50:50
// beamsplitter, a Monte Carlo photon-routing simulator, and the
// time-difference histogramming used to analyze timestamped detections.

namespace ionlink::photons {

struct EmitterConfig {
  double excited_lifetime = 8.12e-9;  // tau, s
  double pulse_period = 0.0;          // tp, s; must exceed 5 tau
  int pulse_count = 1;                // N+1 pulses in the train
  double dark_count_rate = 0.0;       // counts/s per detection channel
  double collection_probability = 1.0;

  void validate() const;
  int repetitions_n() const { return pulse_count - 1; }
};

// Probability density (1/s) of a detection at time t for an N+1 pulse
// train: (1/tau) sum_k exp(-(t - k tp)/tau) step(t - k tp).
double first_order_correlation(const EmitterConfig& config, double t);

// Joint detection density behind the beamsplitter for a single emitter:
// (1/8 tau) sum_{k,n} (1 - delta_kn) exp(-|t_d + tp (k - n)|/tau).
double joint_detection_single_emitter(const EmitterConfig& config, double t_d);

// Two identical emitters, one per input port: exactly 4x the single-emitter
// result; the central peak vanishes.
double joint_detection_identical_pair(const EmitterConfig& config, double t_d);

// Two distinguishable emitters: (1/4 tau) sum (2 - delta_kn) exp(...); the
// central peak is half the adjacent peak in the large-N limit.
double joint_detection_distinguishable_pair(const EmitterConfig& config, double t_d);

// Fitted pulsed-excitation scattering rate A sin^2(B sqrt(P)/2).
double excitation_scattering_rate(double average_power, double fit_a, double fit_b);

// Probability of a spontaneous decay within the excitation pulse,
// 1 - exp(-duration/tau); meaningful as a double-emission probability only
// for duration well below tau (ratio ~0.1 or less).
double double_emission_probability(double pulse_duration, double tau);

// Timestamped detection, tick = 4 ps (TDC resolution).
inline constexpr double kTickSeconds = 4e-12;

struct EventRecord {
  std::uint64_t timestamp_ticks = 0;
  std::uint8_t channel = 0;  // 0 or 1

  double seconds() const { return static_cast<double>(timestamp_ticks) * kTickSeconds; }
  friend bool operator==(const EventRecord&, const EventRecord&) = default;
  friend bool operator<(const EventRecord& a, const EventRecord& b) {
    return a.timestamp_ticks != b.timestamp_ticks ? a.timestamp_ticks < b.timestamp_ticks
                                                  : a.channel < b.channel;
  }
};

struct MonteCarloOptions {
  int workers = 1;  // result is independent of the worker count
};

// Per-pulse emission with exponential delay and 50:50 routing.  With
// `identical` both photons of a pulse exit by the same port; otherwise each
// photon routes independently.  Dark counts are homogeneous Poisson
// processes, uncorrelated between channels.  Deterministic under a fixed
// seed: every pulse owns a counter-based RNG substream.
std::vector<EventRecord> montecarlo_event_stream(const EmitterConfig& config, bool identical,
                                                 std::uint64_t seed, double duration,
                                                 const MonteCarloOptions& options = {});

struct CorrelationHistogram {
  enum class Normalization { counts, probability_density };

  double bin_width = 0.0;  // s
  double start = 0.0;      // left edge of bin 0, s
  std::vector<double> counts;
  Normalization normalization = Normalization::counts;

  std::size_t size() const { return counts.size(); }
  double bin_center(std::size_t i) const { return start + (static_cast<double>(i) + 0.5) * bin_width; }
  double total() const;
  // Sum of bin values whose centers lie within [t0 - half_window, t0 + half_window].
  double window_sum(double t0, double half_window) const;
};

// Cross-channel time-difference histogram: one count per (channel-0,
// channel-1) event pair with t1 - t0 in [-span, +span).
CorrelationHistogram histogram_events(const std::vector<EventRecord>& events, double bin_width,
                                      double span);

enum class PairKind { single_emitter, identical, distinguishable };

// Analytic joint-detection curve sampled at bin centers
// (probability-density normalization).
CorrelationHistogram analytic_histogram(const EmitterConfig& config, PairKind kind,
                                        double bin_width, double span);

// 1 - (central window) / (0.5 * mean adjacent-peak window); windows are
// +/- 5 tau around t_d = 0 and t_d = +/- tp.  Clipped to [0, 1].
double interference_contrast(const CorrelationHistogram& histogram, double pulse_period,
                             double lifetime);

}  // namespace ionlink::photons
