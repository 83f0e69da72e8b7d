#include "ionlink/serialize.hpp"

#include <cstdio>
#include <nlohmann/json.hpp>

namespace ionlink::io {

using nlohmann::json;

json density_matrix_to_json(const quantum::DensityMatrix& rho) {
  const auto& m = rho.matrix();
  json real = json::array();
  json imag = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json real_row = json::array();
    json imag_row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      real_row.push_back(m(r, c).real());
      imag_row.push_back(m(r, c).imag());
    }
    real.push_back(std::move(real_row));
    imag.push_back(std::move(imag_row));
  }
  return json{{"real", std::move(real)}, {"imag", std::move(imag)}};
}

quantum::DensityMatrix density_matrix_from_json(const json& j) {
  const auto& real = j.at("real");
  const auto& imag = j.at("imag");
  const auto rows = static_cast<Eigen::Index>(real.size());
  quantum::CMat m(rows, rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < rows; ++c) {
      m(r, c) = quantum::Complex(
          real.at(static_cast<std::size_t>(r)).at(static_cast<std::size_t>(c)).get<double>(),
          imag.at(static_cast<std::size_t>(r)).at(static_cast<std::size_t>(c)).get<double>());
    }
  }
  return quantum::DensityMatrix::from_measured(std::move(m));
}

json tomography_counts_to_json(const quantum::TomographyCounts& counts) {
  json settings = json::array();
  for (const auto& s : counts.settings) {
    json c = json::object();
    for (const auto& [outcome, n] : s.counts) c[outcome] = n;
    settings.push_back(json{{"basis", s.bases}, {"counts", std::move(c)}});
  }
  return json{{"settings", std::move(settings)}};
}

quantum::TomographyCounts tomography_counts_from_json(const json& j) {
  quantum::TomographyCounts counts;
  for (const auto& s : j.at("settings")) {
    quantum::TomographySetting setting;
    setting.bases = s.at("basis").get<std::string>();
    for (const auto& [outcome, n] : s.at("counts").items()) {
      setting.counts[outcome] = n.get<std::uint64_t>();
    }
    counts.settings.push_back(std::move(setting));
  }
  return counts;
}

json optical_chain_to_json(const gate::OpticalChain& chain) {
  return json{{"p_pi", chain.p_pi},
              {"pmt_quantum_efficiency", chain.pmt_quantum_efficiency},
              {"fiber_transmission", chain.fiber_transmission},
              {"optics_transmission", chain.optics_transmission},
              {"branching_xi", chain.branching_xi},
              {"solid_angle_fraction", chain.solid_angle_fraction},
              {"attempt_rate", chain.attempt_rate}};
}

gate::OpticalChain optical_chain_from_json(const json& j) {
  gate::OpticalChain chain;
  chain.p_pi = j.value("p_pi", chain.p_pi);
  chain.pmt_quantum_efficiency = j.value("pmt_quantum_efficiency", chain.pmt_quantum_efficiency);
  chain.fiber_transmission = j.value("fiber_transmission", chain.fiber_transmission);
  chain.optics_transmission = j.value("optics_transmission", chain.optics_transmission);
  chain.branching_xi = j.value("branching_xi", chain.branching_xi);
  chain.solid_angle_fraction = j.value("solid_angle_fraction", chain.solid_angle_fraction);
  chain.attempt_rate = j.value("attempt_rate", chain.attempt_rate);
  chain.validate();
  return chain;
}

json protocol_config_to_json(const teleport::ProtocolConfig& config) {
  return json{{"input_alpha", {config.input_alpha.real(), config.input_alpha.imag()}},
              {"input_beta", {config.input_beta.real(), config.input_beta.imag()}},
              {"visibility", config.visibility},
              {"detection_error_a", config.detection_error_a},
              {"detection_error_b", config.detection_error_b},
              {"chain", optical_chain_to_json(config.chain)},
              {"master_seed", config.master_seed}};
}

teleport::ProtocolConfig protocol_config_from_json(const json& j) {
  teleport::ProtocolConfig config;
  if (j.contains("input_alpha")) {
    const auto& a = j.at("input_alpha");
    config.input_alpha = quantum::Complex(a.at(0).get<double>(), a.at(1).get<double>());
  }
  if (j.contains("input_beta")) {
    const auto& b = j.at("input_beta");
    config.input_beta = quantum::Complex(b.at(0).get<double>(), b.at(1).get<double>());
  }
  config.visibility = j.value("visibility", config.visibility);
  config.detection_error_a = j.value("detection_error_a", config.detection_error_a);
  config.detection_error_b = j.value("detection_error_b", config.detection_error_b);
  if (j.contains("chain")) config.chain = optical_chain_from_json(j.at("chain"));
  config.master_seed = j.value("master_seed", config.master_seed);
  config.validate();
  return config;
}

json emitter_config_to_json(const photons::EmitterConfig& config) {
  return json{{"excited_lifetime", config.excited_lifetime},
              {"pulse_period", config.pulse_period},
              {"pulse_count", config.pulse_count},
              {"dark_count_rate", config.dark_count_rate},
              {"collection_probability", config.collection_probability}};
}

photons::EmitterConfig emitter_config_from_json(const json& j) {
  photons::EmitterConfig config;
  config.excited_lifetime = j.value("excited_lifetime", config.excited_lifetime);
  config.pulse_period = j.value("pulse_period", config.pulse_period);
  config.pulse_count = j.value("pulse_count", config.pulse_count);
  config.dark_count_rate = j.value("dark_count_rate", config.dark_count_rate);
  config.collection_probability = j.value("collection_probability", config.collection_probability);
  config.validate();
  return config;
}

std::string histogram_to_csv(const photons::CorrelationHistogram& histogram) {
  std::string out = "bin_start_s,bin_end_s,count\n";
  char line[96];
  for (std::size_t i = 0; i < histogram.size(); ++i) {
    const double start = histogram.start + static_cast<double>(i) * histogram.bin_width;
    std::snprintf(line, sizeof(line), "%.12g,%.12g,%.12g\n", start, start + histogram.bin_width,
                  histogram.counts[i]);
    out += line;
  }
  return out;
}

}  // namespace ionlink::io
