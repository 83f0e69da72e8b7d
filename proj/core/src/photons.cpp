#include "ionlink/photons.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "ionlink/errors.hpp"
#include "ionlink/rng.hpp"

namespace ionlink::photons {

void EmitterConfig::validate() const {
  if (!(excited_lifetime > 0.0)) {
    throw std::domain_error("EmitterConfig: lifetime must be positive");
  }
  if (!(pulse_period > 5.0 * excited_lifetime)) {
    throw std::domain_error("EmitterConfig: pulses must be well separated (tp > 5 tau)");
  }
  if (pulse_count < 1) throw std::domain_error("EmitterConfig: pulse count must be positive");
  if (dark_count_rate < 0.0) throw std::domain_error("EmitterConfig: dark rate must be >= 0");
  if (collection_probability < 0.0 || collection_probability > 1.0) {
    throw std::domain_error("EmitterConfig: collection probability must be in [0, 1]");
  }
}

double first_order_correlation(const EmitterConfig& config, double t) {
  config.validate();
  const double tau = config.excited_lifetime;
  double sum = 0.0;
  for (int k = 0; k <= config.repetitions_n(); ++k) {
    const double u = t - k * config.pulse_period;
    if (u >= 0.0) sum += std::exp(-u / tau);
  }
  return sum / tau;
}

namespace {

// sum over pulse-index differences m = k - n != 0, grouped by multiplicity
// N+1-|m|; the m = 0 diagonal enters with `diagonal_weight`.
double train_sum(const EmitterConfig& config, double t_d, double diagonal_weight,
                 double offdiag_weight) {
  const double tau = config.excited_lifetime;
  const double tp = config.pulse_period;
  const int n = config.repetitions_n();
  double sum = diagonal_weight * (n + 1) * std::exp(-std::abs(t_d) / tau);
  for (int m = 1; m <= n; ++m) {
    const double mult = static_cast<double>(n + 1 - m);
    sum += offdiag_weight * mult *
           (std::exp(-std::abs(t_d - m * tp) / tau) + std::exp(-std::abs(t_d + m * tp) / tau));
  }
  return sum;
}

}  // namespace

double joint_detection_single_emitter(const EmitterConfig& config, double t_d) {
  config.validate();
  return train_sum(config, t_d, 0.0, 1.0) / (8.0 * config.excited_lifetime);
}

double joint_detection_identical_pair(const EmitterConfig& config, double t_d) {
  return 4.0 * joint_detection_single_emitter(config, t_d);
}

double joint_detection_distinguishable_pair(const EmitterConfig& config, double t_d) {
  config.validate();
  return train_sum(config, t_d, 1.0, 2.0) / (4.0 * config.excited_lifetime);
}

double excitation_scattering_rate(double average_power, double fit_a, double fit_b) {
  if (average_power < 0.0) {
    throw std::domain_error("excitation_scattering_rate: power must be nonnegative");
  }
  const double s = std::sin(0.5 * fit_b * std::sqrt(average_power));
  return fit_a * s * s;
}

double double_emission_probability(double pulse_duration, double tau) {
  if (pulse_duration < 0.0 || !(tau > 0.0)) {
    throw std::domain_error("double_emission_probability: bad duration or lifetime");
  }
  return -std::expm1(-pulse_duration / tau);
}

namespace {

constexpr std::uint64_t kDarkStreamBase = 1ull << 62;
constexpr std::uint64_t kPulsesPerDarkBlock = 1ull << 16;

std::uint64_t to_ticks(double seconds) {
  return static_cast<std::uint64_t>(std::llround(seconds / kTickSeconds));
}

// Photon events for pulses [first, last).  Each pulse draws from its own
// RNG substream, so any partition of the pulse range yields identical
// events.
void simulate_pulses(const EmitterConfig& config, bool identical, std::uint64_t seed,
                     std::uint64_t first, std::uint64_t last, std::vector<EventRecord>& out) {
  const double tau = config.excited_lifetime;
  const double tp = config.pulse_period;
  const double pc = config.collection_probability;
  for (std::uint64_t k = first; k < last; ++k) {
    Philox4x32 rng(seed, k);
    const bool got0 = rng.uniform() < pc;
    const double delay0 = rng.exponential(tau);
    const bool got1 = rng.uniform() < pc;
    const double delay1 = rng.exponential(tau);
    const double t0 = static_cast<double>(k) * tp;
    if (identical && got0 && got1) {
      // Interference pairs the photons: both exit by the same port.
      const std::uint8_t ch = rng.coin() ? 1 : 0;
      out.push_back({to_ticks(t0 + delay0), ch});
      out.push_back({to_ticks(t0 + delay1), ch});
    } else {
      if (got0) out.push_back({to_ticks(t0 + delay0), static_cast<std::uint8_t>(rng.coin())});
      if (got1) out.push_back({to_ticks(t0 + delay1), static_cast<std::uint8_t>(rng.coin())});
    }
  }
}

void simulate_dark(const EmitterConfig& config, std::uint64_t seed, double total_time,
                   std::vector<EventRecord>& out) {
  if (config.dark_count_rate <= 0.0) return;
  const double block_span = static_cast<double>(kPulsesPerDarkBlock) * config.pulse_period;
  const std::uint64_t blocks =
      static_cast<std::uint64_t>(std::ceil(total_time / block_span));
  for (std::uint64_t b = 0; b < blocks; ++b) {
    Philox4x32 rng(seed, kDarkStreamBase + b);
    const double begin = static_cast<double>(b) * block_span;
    const double span = std::min(block_span, total_time - begin);
    for (std::uint8_t ch = 0; ch < 2; ++ch) {
      const std::uint64_t n = rng.poisson(config.dark_count_rate * span);
      for (std::uint64_t i = 0; i < n; ++i) {
        out.push_back({to_ticks(begin + span * rng.uniform()), ch});
      }
    }
  }
}

}  // namespace

std::vector<EventRecord> montecarlo_event_stream(const EmitterConfig& config, bool identical,
                                                 std::uint64_t seed, double duration,
                                                 const MonteCarloOptions& options) {
  config.validate();
  if (!(duration > 0.0)) throw std::domain_error("montecarlo_event_stream: duration must be > 0");
  const std::uint64_t pulses =
      static_cast<std::uint64_t>(std::floor(duration / config.pulse_period));
  const double total_time = static_cast<double>(pulses) * config.pulse_period;

  std::vector<EventRecord> events;
  const int workers = std::max(1, options.workers);
  if (workers == 1 || pulses < 2 * static_cast<std::uint64_t>(workers)) {
    simulate_pulses(config, identical, seed, 0, pulses, events);
  } else {
    std::vector<std::vector<EventRecord>> parts(static_cast<std::size_t>(workers));
    std::vector<std::thread> pool;
    const std::uint64_t chunk = (pulses + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      const std::uint64_t first = std::min(pulses, static_cast<std::uint64_t>(w) * chunk);
      const std::uint64_t last = std::min(pulses, first + chunk);
      pool.emplace_back([&, w, first, last] {
        simulate_pulses(config, identical, seed, first, last, parts[static_cast<std::size_t>(w)]);
      });
    }
    for (auto& th : pool) th.join();
    for (auto& part : parts) {
      events.insert(events.end(), part.begin(), part.end());
    }
  }
  simulate_dark(config, seed, total_time, events);
  std::sort(events.begin(), events.end());
  return events;
}

double CorrelationHistogram::total() const {
  double sum = 0.0;
  for (double c : counts) sum += c;
  return sum;
}

double CorrelationHistogram::window_sum(double t0, double half_window) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const double c = bin_center(i);
    if (c >= t0 - half_window && c <= t0 + half_window) sum += counts[i];
  }
  return sum;
}

CorrelationHistogram histogram_events(const std::vector<EventRecord>& events, double bin_width,
                                      double span) {
  if (!(bin_width > 0.0) || !(span > 0.0)) {
    throw std::domain_error("histogram_events: bin width and span must be positive");
  }
  CorrelationHistogram hist;
  hist.bin_width = bin_width;
  hist.start = -span;
  const std::size_t bins = static_cast<std::size_t>(std::llround(2.0 * span / bin_width));
  hist.counts.assign(std::max<std::size_t>(bins, 1), 0.0);
  hist.normalization = CorrelationHistogram::Normalization::counts;
  if (events.empty()) return hist;

  std::vector<double> ch0, ch1;
  for (const auto& e : events) {
    if (e.channel == 0) {
      ch0.push_back(e.seconds());
    } else {
      ch1.push_back(e.seconds());
    }
  }
  std::sort(ch0.begin(), ch0.end());
  std::sort(ch1.begin(), ch1.end());

  std::size_t lo = 0;
  for (const double t0 : ch0) {
    while (lo < ch1.size() && ch1[lo] < t0 - span) ++lo;
    for (std::size_t j = lo; j < ch1.size() && ch1[j] < t0 + span; ++j) {
      const double td = ch1[j] - t0;
      const auto bin = static_cast<std::size_t>((td + span) / bin_width);
      if (bin < hist.counts.size()) hist.counts[bin] += 1.0;
    }
  }
  return hist;
}

CorrelationHistogram analytic_histogram(const EmitterConfig& config, PairKind kind,
                                        double bin_width, double span) {
  if (!(bin_width > 0.0) || !(span > 0.0)) {
    throw std::domain_error("analytic_histogram: bin width and span must be positive");
  }
  CorrelationHistogram hist;
  hist.bin_width = bin_width;
  hist.start = -span;
  const std::size_t bins = static_cast<std::size_t>(std::llround(2.0 * span / bin_width));
  hist.counts.resize(std::max<std::size_t>(bins, 1));
  hist.normalization = CorrelationHistogram::Normalization::probability_density;
  for (std::size_t i = 0; i < hist.counts.size(); ++i) {
    const double td = hist.bin_center(i);
    switch (kind) {
      case PairKind::single_emitter:
        hist.counts[i] = joint_detection_single_emitter(config, td);
        break;
      case PairKind::identical:
        hist.counts[i] = joint_detection_identical_pair(config, td);
        break;
      case PairKind::distinguishable:
        hist.counts[i] = joint_detection_distinguishable_pair(config, td);
        break;
    }
  }
  return hist;
}

double interference_contrast(const CorrelationHistogram& histogram, double pulse_period,
                             double lifetime) {
  if (!(pulse_period > 0.0) || !(lifetime > 0.0)) {
    throw std::domain_error("interference_contrast: need positive pulse period and lifetime");
  }
  const double window = 5.0 * lifetime;
  const double left_edge = histogram.start;
  const double right_edge = histogram.start + histogram.bin_width *
                                                  static_cast<double>(histogram.counts.size());
  if (left_edge > -(pulse_period + window) || right_edge < pulse_period + window) {
    throw std::domain_error("interference_contrast: histogram span must cover the adjacent peaks");
  }
  const double central = histogram.window_sum(0.0, window);
  const double adjacent =
      0.5 * (histogram.window_sum(pulse_period, window) + histogram.window_sum(-pulse_period, window));
  if (adjacent <= 0.0) {
    throw std::domain_error("interference_contrast: empty adjacent peaks");
  }
  const double contrast = 1.0 - central / (0.5 * adjacent);
  return std::clamp(contrast, 0.0, 1.0);
}

}  // namespace ionlink::photons
