#include "scenario.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <system_error>

#include "rissec/errors.hpp"

namespace rissec::app {

using json = nlohmann::json;
using snrdist::dbm_to_watt;

namespace {

double watt_to_dbm(double w) { return 10.0 * std::log10(w) + 30.0; }

void reject_unknown(const json& j, const std::string& where, std::set<std::string> allowed) {
    for (const auto& [key, _] : j.items())
        if (!allowed.count(key)) throw ConfigError(where + "." + key + ": unknown key");
}

const json& section(const json& j, const std::string& key) {
    if (!j.contains(key)) throw ConfigError(key + ": missing section");
    if (!j[key].is_object()) throw ConfigError(key + ": expected an object");
    return j[key];
}

double number(const json& j, const std::string& where, const std::string& key) {
    if (!j.contains(key)) throw ConfigError(where + "." + key + ": missing");
    if (!j[key].is_number()) throw ConfigError(where + "." + key + ": expected a number");
    return j[key].get<double>();
}

double number_or(const json& j, const std::string& where, const std::string& key, double fallback) {
    return j.contains(key) ? number(j, where, key) : fallback;
}

double path_loss(const ScenarioConfig& cfg, double d1, double d2, double d3) {
    return std::pow(d1 * d2 * d3, cfg.geometry.chi);
}

}  // namespace

ScenarioConfig scenario_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("scenario: expected a JSON object");
    reject_unknown(j, "scenario", {"name", "geometry", "fading", "ris", "power", "secrecy", "direct_links"});
    ScenarioConfig cfg;

    const json& g = section(j, "geometry");
    reject_unknown(g, "geometry", {"d_ST", "d_TTheta", "d_ThetaR", "d_ThetaE", "d_TR", "d_TE", "chi"});
    auto& geo = cfg.geometry;
    geo.d_ST = number(g, "geometry", "d_ST");
    geo.d_TTheta = number(g, "geometry", "d_TTheta");
    geo.d_ThetaR = number(g, "geometry", "d_ThetaR");
    geo.d_ThetaE = number(g, "geometry", "d_ThetaE");
    geo.d_TR = number_or(g, "geometry", "d_TR", geo.d_TR);
    geo.d_TE = number_or(g, "geometry", "d_TE", geo.d_TE);
    geo.chi = number(g, "geometry", "chi");

    const json& f = section(j, "fading");
    std::set<std::string> names(snrdist::link_names().begin(), snrdist::link_names().end());
    reject_unknown(f, "fading", names);
    for (const auto& [link, block] : f.items()) {
        std::string where = "fading." + link;
        if (!block.is_object()) throw ConfigError(where + ": expected an object");
        reject_unknown(block, where, {"m", "m_s", "omega"});
        cfg.fading[link] = {number(block, where, "m"), number(block, where, "m_s"),
                            number_or(block, where, "omega", 1.0)};
    }

    if (j.contains("ris")) {
        const json& r = section(j, "ris");
        reject_unknown(r, "ris", {"N"});
        if (!r.contains("N") || !r["N"].is_number_integer()) throw ConfigError("ris.N: expected an integer");
        cfg.N = r["N"].get<int>();
    }

    const json& p = section(j, "power");
    reject_unknown(p, "power", {"P_s_dBm", "sigma2_R_dBm", "sigma2_E_dBm", "sigma2_T_dBm"});
    cfg.P_s = dbm_to_watt(number(p, "power", "P_s_dBm"));
    cfg.sigma2_R = dbm_to_watt(number(p, "power", "sigma2_R_dBm"));
    cfg.sigma2_E = dbm_to_watt(number(p, "power", "sigma2_E_dBm"));
    if (p.contains("sigma2_T_dBm")) cfg.sigma2_T = dbm_to_watt(number(p, "power", "sigma2_T_dBm"));

    if (j.contains("secrecy")) {
        const json& s = section(j, "secrecy");
        reject_unknown(s, "secrecy", {"R_s", "base"});
        cfg.R_s = number_or(s, "secrecy", "R_s", cfg.R_s);
        if (s.contains("base")) {
            if (!s["base"].is_string()) throw ConfigError("secrecy.base: expected \"bits\" or \"nats\"");
            auto b = s["base"].get<std::string>();
            if (b == "bits") cfg.base = snrdist::LogBase::bits;
            else if (b == "nats") cfg.base = snrdist::LogBase::nats;
            else throw ConfigError("secrecy.base: expected \"bits\" or \"nats\", got \"" + b + "\"");
        }
    }
    if (j.contains("direct_links")) {
        if (!j["direct_links"].is_boolean()) throw ConfigError("scenario.direct_links: expected true or false");
        cfg.direct_links = j["direct_links"].get<bool>();
    }
    cfg.validate();
    return cfg;
}

json scenario_to_json(const ScenarioConfig& cfg) {
    const auto& g = cfg.geometry;
    json j;
    j["geometry"] = {{"d_ST", g.d_ST},     {"d_TTheta", g.d_TTheta}, {"d_ThetaR", g.d_ThetaR},
                     {"d_ThetaE", g.d_ThetaE}, {"d_TR", g.d_TR},     {"d_TE", g.d_TE},
                     {"chi", g.chi}};
    for (const auto& [link, fp] : cfg.fading) j["fading"][link] = {{"m", fp.m}, {"m_s", fp.m_s}, {"omega", fp.omega}};
    j["ris"] = {{"N", cfg.N}};
    j["power"] = {{"P_s_dBm", watt_to_dbm(cfg.P_s)},
                  {"sigma2_R_dBm", watt_to_dbm(cfg.sigma2_R)},
                  {"sigma2_E_dBm", watt_to_dbm(cfg.sigma2_E)}};
    if (cfg.sigma2_T) j["power"]["sigma2_T_dBm"] = watt_to_dbm(*cfg.sigma2_T);
    j["secrecy"] = {{"R_s", cfg.R_s}, {"base", cfg.base == snrdist::LogBase::bits ? "bits" : "nats"}};
    j["direct_links"] = cfg.direct_links;
    return j;
}

std::string bundled_scenario_dir() {
    namespace fs = std::filesystem;
    if (const char* env = std::getenv("RISSEC_SCENARIO_DIR")) return env;
    // installed layout: <prefix>/bin/rissec next to <prefix>/share/rissec/scenarios
    std::error_code ec;
    fs::path exe = fs::read_symlink("/proc/self/exe", ec);
    if (!ec) {
        fs::path share = exe.parent_path().parent_path() / "share" / "rissec" / "scenarios";
        if (fs::is_directory(share, ec)) return share.string();
    }
    return RISSEC_SCENARIO_DIR;
}

ScenarioConfig load_scenario(const std::string& name_or_path) {
    namespace fs = std::filesystem;
    fs::path path = name_or_path;
    if (!fs::exists(path)) {
        fs::path bundled = fs::path(bundled_scenario_dir()) / (name_or_path + ".json");
        if (!fs::exists(bundled))
            throw ConfigError("scenario '" + name_or_path + "': no such file or bundled scenario (searched " +
                              bundled.parent_path().string() + ")");
        path = bundled;
    }
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot read " + path.string());
    json j;
    try {
        j = json::parse(is);
    } catch (const json::parse_error& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
    try {
        return scenario_from_json(j);
    } catch (const ConfigError& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

void save_scenario(const ScenarioConfig& cfg, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw ConfigError("cannot open " + path + " for writing");
    os << scenario_to_json(cfg).dump(2) << '\n';
}

double gammabar_R2_dB(const ScenarioConfig& cfg) {
    const auto& g = cfg.geometry;
    return 10.0 * std::log10(cfg.P_s / (path_loss(cfg, g.d_ST, g.d_TTheta, g.d_ThetaR) * cfg.sigma2_R));
}

double gammabar_E2_dB(const ScenarioConfig& cfg) {
    const auto& g = cfg.geometry;
    return 10.0 * std::log10(cfg.P_s / (path_loss(cfg, g.d_ST, g.d_TTheta, g.d_ThetaE) * cfg.sigma2_E));
}

void apply_param(ScenarioConfig& cfg, const std::string& name, double value) {
    auto& g = cfg.geometry;
    if (name == "gammabar_R2") {
        cfg.sigma2_R = cfg.P_s / path_loss(cfg, g.d_ST, g.d_TTheta, g.d_ThetaR) / snrdist::db_to_linear(value);
    } else if (name == "gammabar_E2") {
        cfg.sigma2_E = cfg.P_s / path_loss(cfg, g.d_ST, g.d_TTheta, g.d_ThetaE) / snrdist::db_to_linear(value);
    } else if (name == "N") {
        if (value != std::floor(value) || value < 1) throw ConfigError("N: expected a positive integer, got " + std::to_string(value));
        cfg.N = static_cast<int>(value);
    } else if (name == "R_s") {
        cfg.R_s = value;
    } else if (name == "P_s") {
        cfg.P_s = dbm_to_watt(value);
    } else if (name == "d_ST") {
        g.d_ST = value;
    } else if (name == "d_TTheta") {
        g.d_TTheta = value;
    } else if (name == "d_ThetaR") {
        g.d_ThetaR = value;
    } else if (name == "d_ThetaE") {
        g.d_ThetaE = value;
    } else if (name == "d_TR") {
        g.d_TR = value;
    } else if (name == "d_TE") {
        g.d_TE = value;
    } else if (name == "m_all") {
        for (auto& [_, fp] : cfg.fading) fp.m = value;
    } else if (name.rfind("m_", 0) == 0 && cfg.fading.count(name.substr(2))) {
        cfg.fading[name.substr(2)].m = value;
    } else {
        throw ConfigError("unknown parameter '" + name +
                          "' (expected gammabar_R2, gammabar_E2, N, R_s, P_s, d_<link>, m_<link> or m_all)");
    }
    cfg.validate();
}

}  // namespace rissec::app
