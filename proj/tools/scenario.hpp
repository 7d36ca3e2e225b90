#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "rissec/snrdist.hpp"

namespace rissec::app {

using snrdist::ScenarioConfig;

// Scenario files are JSON with sections geometry, fading, ris, power,
// secrecy. Powers are in dBm, distances in meters.
ScenarioConfig scenario_from_json(const nlohmann::json& j);
nlohmann::json scenario_to_json(const ScenarioConfig& cfg);

// `name_or_path` is a file path or the stem of a bundled scenario
// (e.g. "paper_default").
ScenarioConfig load_scenario(const std::string& name_or_path);
void save_scenario(const ScenarioConfig& cfg, const std::string& path);
std::string bundled_scenario_dir();

// Sweepable parameters: gammabar_R2 and gammabar_E2 (dB, realized by
// rescaling σ²_R or σ²_E), N, R_s, any distance d_* (m), P_s (dBm), m_<link>
// or m_all for the fading severity.
void apply_param(ScenarioConfig& cfg, const std::string& name, double value);
double gammabar_R2_dB(const ScenarioConfig& cfg);
double gammabar_E2_dB(const ScenarioConfig& cfg);

}  // namespace rissec::app
