#include "runner.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "rissec/errors.hpp"
#include "scenario.hpp"

namespace rissec::app {

namespace mc = rissec::montecarlo;
using snrdist::DerivedConstants;
using snrdist::Receiver;
using snrdist::SnrDistribution;

std::vector<Metric> parse_metrics(const std::string& s) {
    if (s == "asc") return {Metric::asc};
    if (s == "sop") return {Metric::sop};
    if (s == "both") return {Metric::asc, Metric::sop};
    throw ConfigError("--metric: expected asc, sop or both, got '" + s + "'");
}

std::vector<Engine> parse_engines(const std::string& s) {
    if (s == "all") return {Engine::exact, Engine::asymptotic, Engine::mc};
    std::vector<Engine> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok == "exact") out.push_back(Engine::exact);
        else if (tok == "asymptotic") out.push_back(Engine::asymptotic);
        else if (tok == "mc") out.push_back(Engine::mc);
        else if (!tok.empty()) throw ConfigError("--engine: unknown engine '" + tok + "'");
    }
    if (out.empty()) throw ConfigError("--engine: the engine set is empty");
    return out;
}

std::string to_string(Metric m) { return m == Metric::asc ? "asc" : "sop"; }

std::string to_string(Engine e) {
    switch (e) {
        case Engine::exact: return "exact";
        case Engine::asymptotic: return "asymptotic";
        case Engine::mc: return "mc";
    }
    return "?";
}

std::string to_string(Trend t) {
    switch (t) {
        case Trend::constant: return "constant";
        case Trend::non_decreasing: return "non-decreasing";
        case Trend::non_increasing: return "non-increasing";
        case Trend::mixed: return "mixed";
    }
    return "?";
}

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::string utc_timestamp() {
    std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// shortest text that reads back to the same double
std::string fmt(double v) {
    char buf[40];
    auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c == '\n' ? ' ' : c;
    }
    return out + "\"";
}

void record_result(Row& row, const secrecy::SecrecyResult& r) {
    row.result = r.value;
    row.stderr_ = r.error_estimate;
    if (r.low_confidence) row.flags.push_back("low_confidence");
    for (const auto& w : r.warnings) row.flags.push_back("warning: " + w);
}

// Evaluates one sweep point; errors are recorded in the rows.
std::vector<Row> evaluate_point(const SweepSpec& spec, double value, unsigned mc_threads) {
    std::vector<Row> rows;
    ScenarioConfig cfg = spec.base;
    std::string setup_error;
    try {
        if (!spec.param.empty()) apply_param(cfg, spec.param, value);
    } catch (const std::exception& e) {
        setup_error = e.what();
    }
    std::optional<mc::SampleBatch> batch;
    for (Metric m : spec.metrics)
        for (Engine e : spec.engines) {
            Row row;
            row.param = spec.param.empty() ? "none" : spec.param;
            row.value = value;
            row.metric = m;
            row.engine = e;
            auto t0 = Clock::now();
            try {
                if (!setup_error.empty()) throw ConfigError(setup_error);
                if (e == Engine::mc) {
                    if (!batch) batch = mc::simulate_batch(cfg, spec.mc.trials, spec.mc.seed, spec.mc.mode, mc_threads);
                    auto est = m == Metric::asc ? mc::estimate_asc(*batch, cfg.base)
                                                : mc::estimate_sop(*batch, cfg.R_s, cfg.base);
                    row.result = est.mean;
                    row.stderr_ = est.standard_error;
                    row.flags.push_back("mode=" + mc::to_string(spec.mc.mode));
                } else {
                    auto k = snrdist::derive_constants(cfg);
                    auto q = secrecy::make_query(cfg, k, e == Engine::exact ? secrecy::Mode::exact
                                                                              : secrecy::Mode::asymptotic);
                    record_result(row, m == Metric::asc ? secrecy::asc(q) : secrecy::sop(q));
                }
            } catch (const ConvergenceError& ex) {
                row.numerical_failure = true;
                row.flags.push_back(std::string("error: ") + ex.what());
            } catch (const std::exception& ex) {
                row.flags.push_back(std::string("error: ") + ex.what());
            }
            row.elapsed_ms = ms_since(t0);
            rows.push_back(std::move(row));
        }
    return rows;
}

}  // namespace

RunRecord run_sweep(const SweepSpec& spec) {
    if (spec.metrics.empty()) throw ConfigError("--metric: the metric set is empty");
    if (spec.engines.empty()) throw ConfigError("--engine: the engine set is empty");
    if (!spec.param.empty() && spec.values.empty()) throw ConfigError("--values: the value list is empty");
    spec.base.validate();
    if (!spec.param.empty()) {
        // reject unknown names before any work
        ScenarioConfig probe = spec.base;
        apply_param(probe, spec.param, spec.values.front());
    }
    std::vector<double> values = spec.param.empty() ? std::vector<double>{0.0} : spec.values;
    std::vector<std::vector<Row>> per_point(values.size());

    unsigned jobs = std::max(1u, std::min<unsigned>(spec.jobs, static_cast<unsigned>(values.size())));
    unsigned mc_threads = jobs > 1 ? 1 : spec.mc.threads;
    std::size_t next = 0;
    std::mutex mu;
    auto worker = [&] {
        for (;;) {
            std::size_t i;
            {
                std::lock_guard lock(mu);
                if (next == values.size()) return;
                i = next++;
            }
            per_point[i] = evaluate_point(spec, values[i], mc_threads);
        }
    };
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    RunRecord run;
    run.timestamp = utc_timestamp();
    run.fingerprint = snrdist::fingerprint(spec.base);
    run.version = RISSEC_VERSION;
    for (auto& rows : per_point)
        for (auto& r : rows) run.rows.push_back(std::move(r));
    return run;
}

void write_csv(std::ostream& os, const RunRecord& run, bool timing) {
    os << "param,value,metric,engine,result,stderr,elapsed_ms,flags\n";
    for (const auto& r : run.rows) {
        std::string flags;
        for (const auto& f : r.flags) flags += (flags.empty() ? "" : ";") + f;
        os << csv_field(r.param) << ',' << fmt(r.value) << ',' << to_string(r.metric) << ','
           << to_string(r.engine) << ',' << (r.result ? fmt(*r.result) : "") << ','
           << (r.stderr_ ? fmt(*r.stderr_) : "") << ',' << (timing ? fmt(std::round(r.elapsed_ms * 1000) / 1000) : "")
           << ',' << csv_field(flags) << '\n';
    }
}

std::vector<Row> series(const RunRecord& run, Metric m, Engine e) {
    std::vector<Row> out;
    for (const auto& r : run.rows)
        if (r.metric == m && r.engine == e) out.push_back(r);
    return out;
}

Trend trend(const std::vector<Row>& s) {
    bool up = false, down = false;
    const Row* prev = nullptr;
    for (const auto& r : s) {
        if (!r.result) continue;
        if (prev) {
            double e1 = prev->stderr_.value_or(0), e2 = r.stderr_.value_or(0);
            double tol = 3 * std::hypot(e1, e2) + 1e-12 * std::max(std::abs(*prev->result), std::abs(*r.result));
            double d = *r.result - *prev->result;
            if (d > tol) up = true;
            if (d < -tol) down = true;
        }
        prev = &r;
    }
    if (up && down) return Trend::mixed;
    if (up) return Trend::non_decreasing;
    if (down) return Trend::non_increasing;
    return Trend::constant;
}

void write_trend_footer(std::ostream& os, const RunRecord& run) {
    if (run.rows.empty() || run.rows.front().param == "none") return;
    os << "# trends in " << run.rows.front().param << " (ties within 3 standard errors)\n";
    for (Metric m : {Metric::asc, Metric::sop})
        for (Engine e : {Engine::exact, Engine::asymptotic, Engine::mc}) {
            auto s = series(run, m, e);
            if (s.empty()) continue;
            std::size_t failed = std::count_if(s.begin(), s.end(), [](const Row& r) { return !r.result; });
            os << "# " << to_string(m) << ' ' << to_string(e) << ": " << to_string(trend(s));
            if (failed) os << " (" << failed << " point(s) without result)";
            os << '\n';
        }
}

void write_plot_data(std::ostream& os, const RunRecord& run) {
    std::vector<std::pair<Metric, Engine>> cols;
    std::vector<double> values;
    for (const auto& r : run.rows) {
        if (std::find(cols.begin(), cols.end(), std::pair{r.metric, r.engine}) == cols.end())
            cols.emplace_back(r.metric, r.engine);
        if (values.empty() || values.back() != r.value) values.push_back(r.value);
    }
    os << (run.rows.empty() ? "value" : run.rows.front().param);
    for (auto [m, e] : cols) os << ',' << to_string(m) << '_' << to_string(e) << ',' << to_string(m) << '_' << to_string(e) << "_stderr";
    os << '\n';
    std::size_t i = 0;
    for (double v : values) {
        os << fmt(v);
        for (std::size_t c = 0; c < cols.size(); ++c, ++i) {
            const Row& r = run.rows[i];
            os << ',' << (r.result ? fmt(*r.result) : "") << ',' << (r.stderr_ ? fmt(*r.stderr_) : "");
        }
        os << '\n';
    }
}

void write_record_json(std::ostream& os, const RunRecord& run) {
    nlohmann::json j;
    j["timestamp"] = run.timestamp;
    char fp[24];
    std::snprintf(fp, sizeof fp, "%016llx", static_cast<unsigned long long>(run.fingerprint));
    j["fingerprint"] = fp;
    j["version"] = run.version;
    j["points"] = nlohmann::json::array();
    for (const auto& r : run.rows) {
        nlohmann::json p{{"param", r.param},   {"value", r.value},
                         {"metric", to_string(r.metric)}, {"engine", to_string(r.engine)},
                         {"elapsed_ms", r.elapsed_ms}, {"flags", r.flags}};
        p["result"] = r.result ? nlohmann::json(*r.result) : nlohmann::json(nullptr);
        p["stderr"] = r.stderr_ ? nlohmann::json(*r.stderr_) : nlohmann::json(nullptr);
        j["points"].push_back(p);
    }
    os << j.dump(2) << '\n';
}

// ---- validate ----

bool ValidateReport::all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return !c.counted || c.pass; });
}

namespace {

DerivedConstants analytic_constants(const ScenarioConfig& cfg, const ValidateOptions& opt) {
    auto k = snrdist::derive_constants(cfg);
    if (opt.perturb) {
        snrdist::perturb_constant(k, opt.perturb->first, opt.perturb->second);
        snrdist::rebuild_laws(k, cfg);
    }
    return k;
}

Check compare(std::string name, std::string link_case, double analytic, const mc::McEstimate& est) {
    Check c{std::move(name), std::move(link_case), analytic, est.mean, est.standard_error, 0, {}, true, true, {}};
    c.z = est.standard_error > 0 ? (analytic - est.mean) / est.standard_error
                                 : (analytic == est.mean ? 0 : INFINITY);
    c.pass = std::isfinite(c.z) && std::abs(c.z) < 3;
    return c;
}

void check_case(const ScenarioConfig& cfg, const ValidateOptions& opt, ValidateReport& rep) {
    const std::string lc = cfg.direct_links ? "direct" : "no-direct";
    auto batch = mc::simulate_batch(cfg, opt.mc.trials, opt.mc.seed, opt.mc.mode, opt.mc.threads);
    auto k = analytic_constants(cfg, opt);

    auto guarded = [&](const std::string& name, auto&& fn) {
        try {
            fn();
        } catch (const std::exception& e) {
            Check c{name, lc, NAN, NAN, NAN, NAN, {}, true, false, std::string("error: ") + e.what()};
            rep.checks.push_back(c);
        }
    };

    for (Receiver who : {Receiver::reader, Receiver::eve}) {
        const bool reader = who == Receiver::reader;
        std::string name = reader ? "dist gamma_R" : "dist gamma_E";
        guarded(name, [&] {
            SnrDistribution h(who, cfg.direct_links, k);
            Check c = compare(name, lc, h.mean(), mc::estimate_mean(batch, reader ? mc::Which::reader : mc::Which::eve));
            auto ecdf = mc::empirical_cdf(batch, reader ? mc::Which::reader : mc::Which::eve);
            mc::CdfTable table([&](double v) { return h.cdf(v); }, ecdf.quantile(1e-7) * 0.5,
                               ecdf.sorted().back() * 2);
            c.cvm = mc::cvm_statistic(ecdf, [&](double v) { return table(v); });
            c.pass = c.pass && *c.cvm < mc::cvm_critical(0.05);
            c.note = "mean vs sample mean; CvM crit 0.461";
            rep.checks.push_back(c);
        });
    }

    auto q = secrecy::make_query(cfg, k);
    guarded("ASC", [&] { rep.checks.push_back(compare("ASC", lc, secrecy::asc(q).value, mc::estimate_asc(batch, cfg.base))); });
    guarded("SOP", [&] {
        rep.checks.push_back(compare("SOP", lc, secrecy::sop(q).value, mc::estimate_sop(batch, cfg.R_s, cfg.base)));
    });

    // SOP at the sample median secrecy rate: informative even when SOP(R_s)
    // saturates at 0 or 1.
    guarded("SOP@median", [&] {
        auto cs = mc::secrecy_rates(batch, cfg.base);
        mc::EmpiricalCdf ecdf(cs);
        double r = ecdf.quantile(0.5);
        if (!(r > 0)) r = ecdf.quantile(0.9);
        if (!(r > 0)) return;
        ScenarioConfig at = cfg;
        at.R_s = r;
        auto kq = analytic_constants(at, opt);
        auto qm = secrecy::make_query(at, kq);
        Check c = compare("SOP@median", lc, secrecy::sop(qm).value, mc::estimate_sop(batch, r, cfg.base));
        char buf[48];
        std::snprintf(buf, sizeof buf, "R_s = %.4g", r);
        c.note = buf;
        rep.checks.push_back(c);
    });

    if (!cfg.direct_links) {
        auto qa = secrecy::make_query(cfg, k, secrecy::Mode::asymptotic);
        for (Metric m : {Metric::asc, Metric::sop}) {
            std::string name = m == Metric::asc ? "ASC asymptotic" : "SOP asymptotic";
            guarded(name, [&] {
                auto r = m == Metric::asc ? secrecy::asc(qa) : secrecy::sop(qa);
                auto est = m == Metric::asc ? mc::estimate_asc(batch, cfg.base) : mc::estimate_sop(batch, cfg.R_s, cfg.base);
                Check c = compare(name, lc, r.value, est);
                c.counted = false;
                c.note = "high-SNR approximation, reported only";
                rep.checks.push_back(c);
            });
        }
    }
}

}  // namespace

ValidateReport validate(const ScenarioConfig& cfg, const ValidateOptions& opt) {
    if (opt.mc.trials < 2) throw ConfigError("--trials: validation needs at least 2 trials");
    if (opt.perturb) {
        const auto& names = snrdist::perturbable_constants();
        if (std::find(names.begin(), names.end(), opt.perturb->first) == names.end())
            throw ConfigError("--perturb: unknown derived constant '" + opt.perturb->first + "'");
    }
    ValidateReport rep;
    rep.low_power = opt.mc.trials < 10000;
    ScenarioConfig c = cfg;
    const bool have_direct = cfg.fading.count("TR") && cfg.fading.count("TE");
    std::vector<bool> cases;
    if (opt.both_cases) {
        cases.push_back(false);
        if (have_direct) cases.push_back(true);
    } else {
        cases.push_back(cfg.direct_links);
    }
    for (bool d : cases) {
        c.direct_links = d;
        check_case(c, opt, rep);
    }
    return rep;
}

void print_report(std::ostream& os, const ValidateReport& r) {
    char line[256];
    std::snprintf(line, sizeof line, "%-16s %-10s %14s %14s %11s %8s %8s  %s\n", "check", "case", "analytic", "mc",
                  "stderr", "z", "cvm", "verdict");
    os << line;
    for (const auto& c : r.checks) {
        std::string verdict = !c.counted ? "info" : c.pass ? "pass" : "FAIL";
        std::string cvm = c.cvm ? fmt(std::round(*c.cvm * 1e4) / 1e4) : "-";
        char z[16] = "-";
        if (c.counted) std::snprintf(z, sizeof z, "%.2f", c.z);
        std::snprintf(line, sizeof line, "%-16s %-10s %14.7g %14.7g %11.3g %8s %8s  %s", c.name.c_str(),
                      c.link_case.c_str(), c.analytic, c.mc, c.stderr_, z, cvm.c_str(), verdict.c_str());
        os << line;
        if (!c.note.empty()) os << "  (" << c.note << ")";
        os << '\n';
    }
    if (r.low_power) os << "note: fewer than 10^4 trials, the checks have low power\n";
    os << (r.all_pass() ? "validate: all checks pass\n" : "validate: FAILED\n");
}

}  // namespace rissec::app
