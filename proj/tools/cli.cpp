#include "cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "ionlink/constants.hpp"
#include "ionlink/errors.hpp"
#include "ionlink/events.hpp"
#include "ionlink/gate.hpp"
#include "ionlink/photons.hpp"
#include "ionlink/quantum.hpp"
#include "ionlink/scaling.hpp"
#include "ionlink/serialize.hpp"
#include "ionlink/teleport.hpp"
#include "ionlink/trap.hpp"
#include "sha256.hpp"

namespace ionlink::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::string format_double(double v, int precision = 12) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
  return buf;
}

std::string human_duration(double seconds, double log10_seconds) {
  char buf[64];
  const double log10_years = log10_seconds - std::log10(constants::seconds_per_year);
  if (log10_years > 9.0 || !std::isfinite(seconds)) {
    std::snprintf(buf, sizeof(buf), "about 10^%.1f years", log10_years);
  } else if (seconds < 1e-6) {
    std::snprintf(buf, sizeof(buf), "%.3g ns", seconds * 1e9);
  } else if (seconds < 1e-3) {
    std::snprintf(buf, sizeof(buf), "%.3g us", seconds * 1e6);
  } else if (seconds < 1.0) {
    std::snprintf(buf, sizeof(buf), "%.3g ms", seconds * 1e3);
  } else if (seconds < 120.0) {
    std::snprintf(buf, sizeof(buf), "%.3g s", seconds);
  } else if (seconds < 7200.0) {
    std::snprintf(buf, sizeof(buf), "%.3g minutes", seconds / 60.0);
  } else if (seconds < 2.0 * 86400.0) {
    std::snprintf(buf, sizeof(buf), "%.3g hours", seconds / 3600.0);
  } else if (seconds < 2.0 * constants::seconds_per_year) {
    std::snprintf(buf, sizeof(buf), "%.3g days", seconds / 86400.0);
  } else {
    std::snprintf(buf, sizeof(buf), "%.3g years", seconds / constants::seconds_per_year);
  }
  return buf;
}

void atomic_write(const fs::path& path, const std::string& content) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!f) throw std::runtime_error("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

struct RunContext {
  fs::path out_dir = ".";
  std::string subcommand;
  std::string config_bytes;
  std::uint64_t master_seed = 0;
  bool to_stdout = false;
  std::ostream* out = nullptr;
  std::vector<std::string> artifacts;

  void emit(const std::string& name, const std::string& content) {
    fs::create_directories(out_dir);
    atomic_write(out_dir / name, content);
    artifacts.push_back(name);
    if (to_stdout) (*out) << content;
  }

  void finish() {
    json manifest{{"schema_version", 1},
                  {"subcommand", subcommand},
                  {"config_digest", "sha256:" + Sha256::of(config_bytes)},
                  {"master_seed", master_seed},
                  {"artifacts", artifacts}};
    fs::create_directories(out_dir);
    atomic_write(out_dir / "manifest.json", manifest.dump(2) + "\n");
  }
};

json load_config_file(const std::string& path, std::string& raw_bytes) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::invalid_argument("cannot read config file " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  raw_bytes = ss.str();
  json j = json::parse(raw_bytes);
  const int version = j.value("schema_version", 1);
  if (version != 1) {
    throw std::invalid_argument("unsupported config schema_version " + std::to_string(version));
  }
  return j;
}

// ---------------------------------------------------------------- trap --

struct TrapArgs {
  double v0 = 1000.0;
  double freq_mhz = 38.0;
  double r_mm = 0.46;
  double mass_amu = 171.0;
  double charge_e = 1.0;
  double eta = 1.0;
  double u0 = 0.0;
  double z0_mm = 0.0;
  bool trajectory = false;
  bool numeric = false;
  double amplitude_nm = 100.0;
  double secular_periods = 3.0;
  int samples_per_drive = 40;
};

int run_trap(const TrapArgs& args, RunContext& ctx) {
  const trap::TrapConfig cfg = trap::TrapConfig::from_lab_units(
      args.v0, args.freq_mhz, args.r_mm, args.mass_amu, args.charge_e, args.eta, args.u0,
      args.z0_mm);
  const double q = trap::stability_q(cfg);
  const double beta = trap::mathieu_beta(q);
  const double omega_sec = trap::secular_frequency(cfg);
  const double omega_ax = trap::axial_frequency(cfg);
  const double omega_transverse =
      omega_ax > 0.0 ? trap::transverse_frequency_with_axial(cfg) : omega_sec;

  json summary{{"stability_q", q},
               {"beta", beta},
               {"secular_frequency_mhz", omega_sec / (2.0 * constants::pi * 1e6)},
               {"axial_frequency_mhz", omega_ax / (2.0 * constants::pi * 1e6)},
               {"transverse_frequency_mhz", omega_transverse / (2.0 * constants::pi * 1e6)},
               {"micromotion_fraction", 0.5 * q},
               {"geometric_scale", args.eta}};
  ctx.emit("trap_summary.json", summary.dump(2) + "\n");

  auto& out = *ctx.out;
  out << "quantity                     value\n";
  out << "stability q                  " << format_double(q, 4) << "\n";
  out << "beta                         " << format_double(beta, 6) << "\n";
  out << "f_secular (MHz)              " << format_double(omega_sec / (2e6 * constants::pi), 3)
      << "\n";
  if (omega_ax > 0.0) {
    out << "f_axial (MHz)                " << format_double(omega_ax / (2e6 * constants::pi), 3)
        << "\n";
    out << "f_transverse (MHz)           "
        << format_double(omega_transverse / (2e6 * constants::pi), 3) << "\n";
  }
  out << "micromotion fraction (q/2)   " << format_double(0.5 * q, 4) << "\n";

  if (args.trajectory) {
    const double secular_period = 2.0 * constants::pi / omega_sec;
    const double drive_period = 2.0 * constants::pi / cfg.drive_frequency;
    const double dt = drive_period / args.samples_per_drive;
    const auto samples =
        static_cast<std::size_t>(std::ceil(args.secular_periods * secular_period / dt));
    std::vector<double> times(samples);
    for (std::size_t i = 0; i < samples; ++i) times[i] = static_cast<double>(i) * dt;
    const double amplitude = constants::nm_to_m(args.amplitude_nm);
    const trap::Trajectory traj =
        args.numeric
            ? trap::trajectory_numeric(cfg, amplitude * (1.0 + 0.5 * q), 0.0, times)
            : trap::trajectory_closed_form(cfg, amplitude, times);
    std::string csv = "time_s,position_m\n";
    char line[80];
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
      std::snprintf(line, sizeof(line), "%.12g,%.12g\n", traj.times[i], traj.positions[i]);
      csv += line;
    }
    ctx.emit("trajectory.csv", csv);
  }
  return kExitOk;
}

// ----------------------------------------------------------- correlate --

struct CorrelateArgs {
  std::string analytic;  // first-order | single | identical | distinguishable
  std::string simulate;  // identical | distinguishable
  std::string events_path;
  bool binary = false;
  bool contrast = false;
  double tau_ns = 8.12;
  double tp_ns = 162.4;
  int pulses = 21;
  double bin_ns = 1.0;
  double span_ns = 0.0;  // 0: 2.5 * tp
  double collection = 1.0;
  double dark_cps = 0.0;
  int workers = 1;
};

photons::EmitterConfig emitter_from_args(const CorrelateArgs& args) {
  photons::EmitterConfig cfg;
  cfg.excited_lifetime = constants::ns_to_s(args.tau_ns);
  cfg.pulse_period = constants::ns_to_s(args.tp_ns);
  cfg.pulse_count = args.pulses;
  cfg.dark_count_rate = args.dark_cps;
  cfg.collection_probability = args.collection;
  cfg.validate();
  return cfg;
}

int run_correlate(const CorrelateArgs& args, RunContext& ctx) {
  const int modes = (!args.analytic.empty() ? 1 : 0) + (!args.simulate.empty() ? 1 : 0) +
                    (!args.events_path.empty() ? 1 : 0);
  if (modes != 1) {
    throw std::invalid_argument(
        "correlate: choose exactly one of --analytic, --simulate, --events");
  }
  const double span =
      args.span_ns > 0.0 ? constants::ns_to_s(args.span_ns)
                         : 2.5 * constants::ns_to_s(args.tp_ns);
  const double bin = constants::ns_to_s(args.bin_ns);

  if (!args.analytic.empty()) {
    const photons::EmitterConfig cfg = emitter_from_args(args);
    if (args.analytic == "first-order") {
      std::string csv = "time_s,density_per_s\n";
      char line[80];
      const double t_max = cfg.pulse_period * (cfg.pulse_count + 1);
      const auto samples = static_cast<std::size_t>(std::llround(t_max / bin));
      for (std::size_t i = 0; i < samples; ++i) {
        const double t = (static_cast<double>(i) + 0.5) * bin;
        std::snprintf(line, sizeof(line), "%.12g,%.12g\n", t,
                      photons::first_order_correlation(cfg, t));
        csv += line;
      }
      ctx.emit("correlate_curve.csv", csv);
    } else {
      photons::PairKind kind;
      if (args.analytic == "single") {
        kind = photons::PairKind::single_emitter;
      } else if (args.analytic == "identical") {
        kind = photons::PairKind::identical;
      } else if (args.analytic == "distinguishable") {
        kind = photons::PairKind::distinguishable;
      } else {
        throw std::invalid_argument("correlate: unknown --analytic kind " + args.analytic);
      }
      const photons::CorrelationHistogram hist = photons::analytic_histogram(cfg, kind, bin, span);
      ctx.emit("correlate_curve.csv", io::histogram_to_csv(hist));
      if (args.contrast) {
        const double c =
            photons::interference_contrast(hist, cfg.pulse_period, cfg.excited_lifetime);
        (*ctx.out) << "contrast " << format_double(c, 6) << "\n";
      }
    }
    return kExitOk;
  }

  if (!args.simulate.empty()) {
    bool identical;
    if (args.simulate == "identical") {
      identical = true;
    } else if (args.simulate == "distinguishable") {
      identical = false;
    } else {
      throw std::invalid_argument("correlate: unknown --simulate kind " + args.simulate);
    }
    photons::EmitterConfig cfg = emitter_from_args(args);
    const double duration = static_cast<double>(args.pulses) * cfg.pulse_period;
    const auto events = photons::montecarlo_event_stream(cfg, identical, ctx.master_seed,
                                                         duration, {args.workers});
    std::ostringstream stream;
    io::write_event_stream(stream, events, args.binary);
    ctx.emit(args.binary ? "events.bin" : "events.csv", stream.str());
    (*ctx.out) << "events " << events.size() << "\n";
    return kExitOk;
  }

  std::ifstream f(args.events_path, std::ios::binary);
  if (!f) throw std::invalid_argument("correlate: cannot read events file " + args.events_path);
  const auto events = io::parse_event_stream(f, args.binary);
  const photons::CorrelationHistogram hist = photons::histogram_events(events, bin, span);
  ctx.emit("histogram.csv", io::histogram_to_csv(hist));
  if (args.contrast) {
    const double c = photons::interference_contrast(hist, constants::ns_to_s(args.tp_ns),
                                                    constants::ns_to_s(args.tau_ns));
    (*ctx.out) << "contrast " << format_double(c, 6) << "\n";
  }
  return kExitOk;
}

// ---------------------------------------------------------------- gate --

struct GateArgs {
  bool table = false;
  double theta = 0.25;
};

int run_gate(const GateArgs& args, const gate::OpticalChain& chain, RunContext& ctx) {
  auto& out = *ctx.out;
  const double factor = chain.chain_factor();
  json summary{{"chain_factor", factor},
               {"chain_factor_squared", factor * factor},
               {"success_probability_theta", args.theta},
               {"success_probability", gate::success_probability(chain, args.theta)},
               {"attempt_rate_hz", chain.attempt_rate}};

  if (args.table) {
    const auto rows = gate::standard_gate_table();
    const auto entries = gate::evaluate_gate_table(rows);
    std::string csv = "row,theta_theory,theta,fidelity\n";
    out << "row  input            theta(theory)  theta     fidelity\n";
    static const char* kInputs[] = {"(0+1)(0+1)", "(0+i1)(0+1)", "(0-1)(0+1)", "(0-i1)(0+1)",
                                    "(0+1)|1>",   "|0>(0+1)",    "|0>|1>",     "|0>|0>"};
    json table = json::array();
    for (std::size_t i = 0; i < entries.size(); ++i) {
      const auto& e = entries[i];
      char line[160];
      const std::string fid = e.fidelity_parity ? format_double(*e.fidelity_parity, 6) : "--";
      std::snprintf(line, sizeof(line), "%-4zu %-16s %-14s %-9s %s\n", i + 1, kInputs[i],
                    format_double(rows[i].theta_theory, 4).c_str(),
                    format_double(e.theta, 4).c_str(), fid.c_str());
      out << line;
      csv += std::to_string(i + 1) + "," + format_double(rows[i].theta_theory) + "," +
             format_double(e.theta) + "," + (e.fidelity_parity ? format_double(*e.fidelity_parity) : "") +
             "\n";
      table.push_back(json{{"row", i + 1},
                           {"theta_theory", rows[i].theta_theory},
                           {"theta", e.theta},
                           {"heralds", e.heralds},
                           {"fidelity", e.fidelity_parity ? json(*e.fidelity_parity) : json()}});
    }
    ctx.emit("gate_table.csv", csv);
    summary["table"] = std::move(table);
  }
  out << "chain factor^2 " << format_double(factor * factor, 6) << "\n";
  out << "P(success | theta=" << format_double(args.theta, 4) << ") "
      << format_double(gate::success_probability(chain, args.theta), 6) << "\n";
  ctx.emit("gate_summary.json", summary.dump(2) + "\n");
  return kExitOk;
}

// ------------------------------------------------------------ teleport --

struct TeleportArgs {
  int shots_per_basis = 1000;
  int heralds = 50;
  bool analytic = false;
  double visibility = 0.98;
  double eps_a = 0.015;
  double eps_b = 0.025;
};

int run_teleport(const TeleportArgs& args, const gate::OpticalChain& chain, RunContext& ctx) {
  teleport::ProtocolConfig config;
  config.visibility = args.visibility;
  config.detection_error_a = args.eps_a;
  config.detection_error_b = args.eps_b;
  config.chain = chain;
  config.master_seed = ctx.master_seed;

  const teleport::SuiteResult suite = teleport::run_protocol_suite(
      config, args.shots_per_basis, ctx.master_seed, args.analytic, args.heralds);

  static const char* kNames[] = {"|0>", "|1>", "+x", "-x", "+y", "-y"};
  json states = json::array();
  std::vector<std::uint64_t> all_attempts;
  auto& out = *ctx.out;
  out << "state  fidelity\n";
  for (std::size_t i = 0; i < suite.states.size(); ++i) {
    const auto& s = suite.states[i];
    out << kNames[i] << "     " << format_double(s.fidelity, 6) << "\n";
    states.push_back(json{{"state", kNames[i]},
                          {"fidelity", s.fidelity},
                          {"rho", io::density_matrix_to_json(s.reconstructed)}});
    all_attempts.insert(all_attempts.end(), s.herald_attempts.begin(), s.herald_attempts.end());
  }
  out << "average fidelity " << format_double(suite.average_fidelity, 6) << "\n";

  json result{{"states", std::move(states)},
              {"average_fidelity", suite.average_fidelity},
              {"analytic", args.analytic},
              {"shots_per_basis", args.shots_per_basis}};
  ctx.emit("teleport_suite.json", result.dump(2) + "\n");

  if (!all_attempts.empty()) {
    const std::uint64_t max_attempts = *std::max_element(all_attempts.begin(), all_attempts.end());
    const int bins = 20;
    const double width = static_cast<double>(max_attempts) / bins;
    std::vector<std::uint64_t> hist(static_cast<std::size_t>(bins), 0);
    for (std::uint64_t a : all_attempts) {
      auto idx = width > 0.0 ? static_cast<std::size_t>(static_cast<double>(a - 1) / width)
                             : std::size_t{0};
      if (idx >= hist.size()) idx = hist.size() - 1;
      ++hist[idx];
    }
    std::string csv = "attempts_bin_start,attempts_bin_end,count\n";
    for (int b = 0; b < bins; ++b) {
      csv += format_double(b * width) + "," + format_double((b + 1) * width) + "," +
             std::to_string(hist[static_cast<std::size_t>(b)]) + "\n";
    }
    ctx.emit("attempts_histogram.csv", csv);
  }
  return kExitOk;
}

// ---------------------------------------------------------- tomography --

struct TomographyArgs {
  std::string counts_path;
  int qubits = 1;
  std::string method = "ml";
};

int run_tomography(const TomographyArgs& args, RunContext& ctx) {
  std::ifstream f(args.counts_path);
  if (!f) throw std::invalid_argument("tomography: cannot read counts file " + args.counts_path);
  const json j = json::parse(f);
  const quantum::TomographyCounts counts = io::tomography_counts_from_json(j);

  quantum::DensityMatrix rho;
  if (args.method == "ml") {
    rho = quantum::ml_tomography(counts, args.qubits);
  } else if (args.method == "stokes") {
    if (args.qubits != 1) {
      throw std::invalid_argument("tomography: --method stokes supports one qubit");
    }
    double p[3][2] = {};
    bool have[3] = {};
    for (const auto& s : counts.settings) {
      const int b = s.bases == "z" ? 0 : s.bases == "x" ? 1 : s.bases == "y" ? 2 : -1;
      if (b < 0) throw std::invalid_argument("tomography: unknown basis " + s.bases);
      double total = 0.0;
      for (const auto& [outcome, n] : s.counts) total += static_cast<double>(n);
      if (total <= 0.0) throw insufficient_data_error("tomography: empty setting");
      double n0 = 0.0;
      if (auto it = s.counts.find("0"); it != s.counts.end()) {
        n0 = static_cast<double>(it->second);
      }
      p[b][0] = n0 / total;
      p[b][1] = 1.0 - p[b][0];
      have[b] = true;
    }
    if (!have[0] || !have[1] || !have[2]) {
      throw insufficient_data_error("tomography: stokes needs z, x and y settings");
    }
    // Outcome 0 in the x (y) setting corresponds to |0>-|1> (|0>+i|1>).
    rho = quantum::stokes_reconstruct(p[0][0], p[0][1], p[1][1], p[1][0], p[2][0], p[2][1]);
  } else {
    throw std::invalid_argument("tomography: unknown --method " + args.method);
  }

  json result{{"qubits", args.qubits}, {"method", args.method},
              {"rho", io::density_matrix_to_json(rho)}};
  ctx.emit("rho.json", result.dump(2) + "\n");

  auto& out = *ctx.out;
  const double purity = (rho.matrix() * rho.matrix()).trace().real();
  out << "reconstructed " << rho.dim() << "x" << rho.dim() << " density matrix, purity "
      << format_double(purity, 6) << "\n";
  if (args.qubits == 2) {
    out << "concurrence " << format_double(quantum::concurrence(rho), 6) << "\n";
  }
  return kExitOk;
}

// --------------------------------------------------------------- scale --

struct ScaleArgs {
  double p = 0.1;
  double ta_ns = 100.0;
  double n = 100.0;
  double nodes = 10.0;
  double coherence_s = 2.5;
};

int run_scale(const ScaleArgs& args, RunContext& ctx) {
  scaling::ScalingQuery query;
  query.success_probability = args.p;
  query.attempt_period = constants::ns_to_s(args.ta_ns);
  query.qubit_count = args.n;
  query.node_count = args.nodes;
  query.coherence_time = args.coherence_s;

  const scaling::ClusterTime cluster = scaling::cluster_state_time(query);
  const double two_node_time = 1.0;  // reference T_success of 1 s
  const double connect = scaling::repeater_connect_time(two_node_time, args.nodes);
  const double rate = scaling::required_success_rate(args.nodes, args.coherence_s);

  json result{{"cluster_log10_seconds", cluster.log10_seconds},
              {"cluster_log10_years", cluster.log10_years},
              {"critical_chain_size", cluster.critical_chain_size},
              {"fusion_stage", cluster.fusion_stage},
              {"repeater_connect_time_per_tsuccess", connect},
              {"required_success_rate_hz", rate}};
  if (cluster.seconds) result["cluster_seconds"] = *cluster.seconds;
  ctx.emit("scale.json", result.dump(2) + "\n");

  auto& out = *ctx.out;
  out << "cluster state time: "
      << human_duration(cluster.seconds.value_or(std::numeric_limits<double>::infinity()),
                        cluster.log10_seconds)
      << "\n";
  if (!cluster.fusion_stage) {
    out << "note: chain below the critical fusion size; single-chain growth estimate\n";
  }
  out << "repeater connect time: " << format_double(connect, 4) << " x T_success\n";
  out << "required success rate for " << format_double(args.nodes, 4) << " nodes: "
      << format_double(rate, 4) << " Hz\n";
  return kExitOk;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"ionlink: simulation of photon-linked trapped-ion qubits"};
  app.require_subcommand(1);

  RunContext ctx;
  ctx.out = &out;
  std::string out_dir = ".";
  std::string config_path;
  std::uint64_t seed = 0;
  bool to_stdout = false;
  app.add_option("--out-dir", out_dir, "directory for artifacts");
  app.add_option("--config", config_path, "JSON configuration file");
  app.add_option("--seed", seed, "master random seed");
  app.add_flag("--stdout", to_stdout, "echo artifacts to stdout");

  TrapArgs trap_args;
  auto* trap_cmd = app.add_subcommand("trap", "trap frequencies, stability and trajectories");
  trap_cmd->add_option("--V0", trap_args.v0, "rf amplitude (V)");
  trap_cmd->add_option("--freq-mhz", trap_args.freq_mhz, "rf drive frequency/2pi (MHz)");
  trap_cmd->add_option("--R-mm", trap_args.r_mm, "electrode distance (mm)");
  trap_cmd->add_option("--mass-amu", trap_args.mass_amu, "particle mass (amu)");
  trap_cmd->add_option("--charge", trap_args.charge_e, "charge (units of e)");
  trap_cmd->add_option("--eta", trap_args.eta, "geometric scale factor");
  trap_cmd->add_option("--U0", trap_args.u0, "static voltage (V)");
  trap_cmd->add_option("--z0-mm", trap_args.z0_mm, "static electrode distance (mm)");
  trap_cmd->add_flag("--trajectory", trap_args.trajectory, "emit trajectory CSV");
  trap_cmd->add_flag("--numeric", trap_args.numeric, "integrate instead of the closed form");
  trap_cmd->add_option("--amplitude-nm", trap_args.amplitude_nm, "secular amplitude (nm)");
  trap_cmd->add_option("--secular-periods", trap_args.secular_periods, "trajectory length");
  trap_cmd->add_option("--samples-per-drive", trap_args.samples_per_drive,
                       "output samples per drive period");

  CorrelateArgs corr_args;
  auto* corr_cmd = app.add_subcommand("correlate", "correlation curves, event files, histograms");
  corr_cmd->add_option("--analytic", corr_args.analytic,
                       "first-order | single | identical | distinguishable");
  corr_cmd->add_option("--simulate", corr_args.simulate, "identical | distinguishable");
  corr_cmd->add_option("--events", corr_args.events_path, "event file to histogram");
  corr_cmd->add_flag("--binary", corr_args.binary, "binary event records");
  corr_cmd->add_flag("--contrast", corr_args.contrast, "print interference contrast");
  corr_cmd->add_option("--tau-ns", corr_args.tau_ns, "excited-state lifetime (ns)");
  corr_cmd->add_option("--tp-ns", corr_args.tp_ns, "pulse period (ns)");
  corr_cmd->add_option("--pulses", corr_args.pulses, "pulse count");
  corr_cmd->add_option("--bin-ns", corr_args.bin_ns, "histogram bin (ns)");
  corr_cmd->add_option("--span-ns", corr_args.span_ns, "histogram half span (ns)");
  corr_cmd->add_option("--collection", corr_args.collection, "collection probability");
  corr_cmd->add_option("--dark-cps", corr_args.dark_cps, "dark counts per second per channel");
  corr_cmd->add_option("--workers", corr_args.workers, "simulation worker threads");

  GateArgs gate_args;
  auto* gate_cmd = app.add_subcommand("gate", "heralded-gate table and success budget");
  gate_cmd->add_flag("--table", gate_args.table, "evaluate the eight characterization rows");
  gate_cmd->add_option("--theta", gate_args.theta, "herald weight for the success probability");
  gate::OpticalChain chain;
  gate_cmd->add_option("--p-pi", chain.p_pi, "correct-polarization fraction");
  gate_cmd->add_option("--pmt-eta", chain.pmt_quantum_efficiency, "PMT quantum efficiency");
  gate_cmd->add_option("--fiber", chain.fiber_transmission, "fiber coupling/transmission");
  gate_cmd->add_option("--optics", chain.optics_transmission, "other optics transmission");
  gate_cmd->add_option("--xi", chain.branching_xi, "branching factor");
  gate_cmd->add_option("--solid-angle", chain.solid_angle_fraction, "collection solid angle/4pi");
  double attempt_rate_khz = 0.0;
  auto* rate_opt =
      gate_cmd->add_option("--attempt-rate-khz", attempt_rate_khz, "attempt rate (kHz)");

  TeleportArgs tele_args;
  auto* tele_cmd = app.add_subcommand("teleport", "teleportation suite with error models");
  tele_cmd->add_option("--shots-per-basis", tele_args.shots_per_basis, "readout shots per basis");
  tele_cmd->add_option("--heralds", tele_args.heralds, "herald samples per state");
  tele_cmd->add_flag("--analytic", tele_args.analytic, "exact probabilities, no sampling");
  tele_cmd->add_option("--visibility", tele_args.visibility, "interferometer visibility");
  tele_cmd->add_option("--eps-a", tele_args.eps_a, "ion-a detection error");
  tele_cmd->add_option("--eps-b", tele_args.eps_b, "ion-b detection error");

  TomographyArgs tomo_args;
  auto* tomo_cmd = app.add_subcommand("tomography", "state reconstruction from counts");
  tomo_cmd->add_option("--counts", tomo_args.counts_path, "tomography counts JSON")->required();
  tomo_cmd->add_option("--qubits", tomo_args.qubits, "number of qubits (1 or 2)");
  tomo_cmd->add_option("--method", tomo_args.method, "ml | stokes");

  ScaleArgs scale_args;
  auto* scale_cmd = app.add_subcommand("scale", "repeater and cluster-state timing");
  scale_cmd->add_option("--P", scale_args.p, "per-attempt success probability");
  scale_cmd->add_option("--ta-ns", scale_args.ta_ns, "attempt period (ns)");
  scale_cmd->add_option("--n", scale_args.n, "cluster-state qubits");
  scale_cmd->add_option("--nodes", scale_args.nodes, "repeater nodes");
  scale_cmd->add_option("--coherence-s", scale_args.coherence_s, "memory coherence time (s)");

  // CLI11's vector overload wants the arguments reversed.
  auto reversed_args = [&args] { return std::vector<std::string>(args.rbegin(), args.rend()); };
  try {
    auto rev = reversed_args();
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    err << e.what() << "\n";
    return kExitUsage;
  }

  ctx.out_dir = out_dir;
  ctx.master_seed = seed;
  ctx.to_stdout = to_stdout;

  try {
    json config;
    if (!config_path.empty()) {
      config = load_config_file(config_path, ctx.config_bytes);
      if (config.contains("chain")) chain = io::optical_chain_from_json(config.at("chain"));
      if (config.contains("protocol")) {
        const auto pc = io::protocol_config_from_json(config.at("protocol"));
        tele_args.visibility = pc.visibility;
        tele_args.eps_a = pc.detection_error_a;
        tele_args.eps_b = pc.detection_error_b;
        chain = pc.chain;
      }
      if (config.contains("emitter")) {
        const auto ec = io::emitter_config_from_json(config.at("emitter"));
        corr_args.tau_ns = ec.excited_lifetime / 1e-9;
        corr_args.tp_ns = ec.pulse_period / 1e-9;
        corr_args.pulses = ec.pulse_count;
        corr_args.dark_cps = ec.dark_count_rate;
        corr_args.collection = ec.collection_probability;
      }
    }
    // Command-line flags take precedence; CLI11 already wrote parsed
    // values over the struct fields, so re-parse to restore them.
    if (!config_path.empty()) {
      auto rev = reversed_args();
      app.parse(rev);
    }

    if (rate_opt->count() > 0) chain.attempt_rate = attempt_rate_khz * 1e3;

    if (ctx.config_bytes.empty()) {
      json effective{{"schema_version", 1},
                     {"seed", seed},
                     {"chain", io::optical_chain_to_json(chain)}};
      ctx.config_bytes = effective.dump();
    }

    int code = kExitRuntime;
    if (trap_cmd->parsed()) {
      ctx.subcommand = "trap";
      code = run_trap(trap_args, ctx);
    } else if (corr_cmd->parsed()) {
      ctx.subcommand = "correlate";
      code = run_correlate(corr_args, ctx);
    } else if (gate_cmd->parsed()) {
      ctx.subcommand = "gate";
      code = run_gate(gate_args, chain, ctx);
    } else if (tele_cmd->parsed()) {
      ctx.subcommand = "teleport";
      code = run_teleport(tele_args, chain, ctx);
    } else if (tomo_cmd->parsed()) {
      ctx.subcommand = "tomography";
      code = run_tomography(tomo_args, ctx);
    } else if (scale_cmd->parsed()) {
      ctx.subcommand = "scale";
      code = run_scale(scale_args, ctx);
    }
    if (code == kExitOk) ctx.finish();
    return code;
  } catch (const std::domain_error& e) {
    err << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    err << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

}  // namespace ionlink::cli
