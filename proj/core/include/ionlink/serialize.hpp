#pragma once

#include <nlohmann/json_fwd.hpp>
#include <string>

#include "ionlink/gate.hpp"
#include "ionlink/photons.hpp"
#include "ionlink/quantum.hpp"
#include "ionlink/teleport.hpp"

// JSON wire formats: density matrices as separate real/imaginary 2D
// arrays, tomography counts as
//   {"settings": [{"basis": "xy", "counts": {"00": n, ...}}, ...]},
// plus the optical-chain and protocol configs.

namespace ionlink::io {

nlohmann::json density_matrix_to_json(const quantum::DensityMatrix& rho);
quantum::DensityMatrix density_matrix_from_json(const nlohmann::json& j);

nlohmann::json tomography_counts_to_json(const quantum::TomographyCounts& counts);
quantum::TomographyCounts tomography_counts_from_json(const nlohmann::json& j);

nlohmann::json optical_chain_to_json(const gate::OpticalChain& chain);
gate::OpticalChain optical_chain_from_json(const nlohmann::json& j);

nlohmann::json protocol_config_to_json(const teleport::ProtocolConfig& config);
teleport::ProtocolConfig protocol_config_from_json(const nlohmann::json& j);

nlohmann::json emitter_config_to_json(const photons::EmitterConfig& config);
photons::EmitterConfig emitter_config_from_json(const nlohmann::json& j);

// Histogram CSV: header then bin_start_s,bin_end_s,count rows.
std::string histogram_to_csv(const photons::CorrelationHistogram& histogram);

}  // namespace ionlink::io
