#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>

#include <CLI11.hpp>

#include "rissec/errors.hpp"
#include "runner.hpp"
#include "scenario.hpp"

using namespace rissec;
using namespace rissec::app;

namespace {

enum Exit { ok = 0, validation_failed = 1, config_error = 2, numerical_error = 3 };

struct Common {
    std::string scenario = "paper_default";
    std::string out;
    std::string base;
    std::size_t trials = 0;
    std::uint64_t seed = 1;
    std::string mc_mode = "matched";
    bool direct = false;
    std::vector<std::string> sets;
};

ScenarioConfig load(const Common& c) {
    ScenarioConfig cfg = load_scenario(c.scenario);
    if (c.direct) cfg.direct_links = true;
    for (const auto& kv : c.sets) {
        auto eq = kv.find('=');
        if (eq == std::string::npos) throw ConfigError("--set: expected <param>=<value>, got '" + kv + "'");
        double v;
        try {
            v = std::stod(kv.substr(eq + 1));
        } catch (const std::exception&) {
            throw ConfigError("--set " + kv.substr(0, eq) + ": value is not a number");
        }
        apply_param(cfg, kv.substr(0, eq), v);
    }
    if (c.base == "bits") cfg.base = snrdist::LogBase::bits;
    else if (c.base == "nats") cfg.base = snrdist::LogBase::nats;
    else if (!c.base.empty()) throw ConfigError("--base: expected bits or nats, got '" + c.base + "'");
    cfg.validate();
    return cfg;
}

// stdout unless a path is given
struct Output {
    std::unique_ptr<std::ofstream> file;
    std::ostream* os = &std::cout;
    explicit Output(const std::string& path) {
        if (path.empty() || path == "-") return;
        file = std::make_unique<std::ofstream>(path);
        if (!*file) throw ConfigError("--out: cannot open " + path + " for writing");
        os = file.get();
    }
};

void add_common(CLI::App* cmd, Common& c, std::size_t default_trials) {
    c.trials = default_trials;
    cmd->add_option("--scenario", c.scenario, "scenario file or bundled name")->capture_default_str();
    cmd->add_option("--out", c.out, "output path (default stdout)");
    cmd->add_option("--base", c.base, "logarithm base: bits or nats (default: from scenario)");
    cmd->add_option("--trials", c.trials, "Monte-Carlo trials")->capture_default_str();
    cmd->add_option("--seed", c.seed, "Monte-Carlo seed")->capture_default_str();
    cmd->add_option("--mc-mode", c.mc_mode, "Monte-Carlo sampler: matched, paper or physical")->capture_default_str();
    cmd->add_option("--set", c.sets, "override a sweepable parameter: <param>=<value> (repeatable)");
    cmd->add_flag("--direct", c.direct, "enable the direct tag-reader and tag-Eve links");
}

McSettings mc_settings(const Common& c) {
    return {c.trials, c.seed, montecarlo::parse_mode(c.mc_mode), 0};
}

int finish_run(const RunRecord& run, const std::string& out, bool timing, const std::string& record,
               const std::string& plot, bool footer) {
    Output o(out);
    write_csv(*o.os, run, timing);
    if (footer) write_trend_footer(*o.os, run);
    if (!record.empty()) {
        Output r(record);
        write_record_json(*r.os, run);
    }
    if (!plot.empty()) {
        Output p(plot);
        write_plot_data(*p.os, run);
    }
    int code = ok;
    for (const auto& row : run.rows) {
        if (row.numerical_failure) code = numerical_error;
        for (const auto& f : row.flags)
            if (f.rfind("error: ", 0) == 0) std::cerr << to_string(row.metric) << '/' << to_string(row.engine) << " at "
                                                      << row.param << '=' << row.value << ": " << f.substr(7) << '\n';
    }
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Secrecy metrics for RIS-assisted backscatter links"};
    app.require_subcommand(1);
    app.set_version_flag("--version", RISSEC_VERSION);

    Common ec, sc, vc, dc;
    std::string e_metric = "both", e_engine = "exact", s_metric = "both", s_engine = "exact";
    std::string param, record, plot, perturb;
    std::vector<double> values;
    bool timing = false, single_case = false;
    unsigned jobs = 1;

    auto* eval = app.add_subcommand("eval", "evaluate ASC/SOP for one scenario");
    add_common(eval, ec, 100000);
    eval->add_option("--metric", e_metric, "asc, sop or both")->capture_default_str();
    eval->add_option("--engine", e_engine, "comma list of exact, asymptotic, mc; or all")->capture_default_str();
    eval->add_flag("--timing", timing, "fill the elapsed_ms column");
    eval->add_option("--record", record, "write the run record (JSON)");

    auto* sweep = app.add_subcommand("sweep", "sweep one parameter");
    add_common(sweep, sc, 100000);
    sweep->add_option("--param", param, "gammabar_R2, gammabar_E2, N, R_s, P_s, d_<link>, m_<link>, m_all")->required();
    sweep->add_option("--values", values, "comma-separated values")->delimiter(',')->required();
    sweep->add_option("--metric", s_metric, "asc, sop or both")->capture_default_str();
    sweep->add_option("--engine", s_engine, "comma list of exact, asymptotic, mc; or all")->capture_default_str();
    sweep->add_option("--jobs", jobs, "sweep points evaluated in parallel")->capture_default_str();
    sweep->add_flag("--timing", timing, "fill the elapsed_ms column");
    sweep->add_option("--record", record, "write the run record (JSON)");
    sweep->add_option("--plot-data", plot, "write a wide plot-ready CSV");

    auto* val = app.add_subcommand("validate", "compare every closed form with Monte Carlo");
    add_common(val, vc, 1000000);
    val->add_option("--perturb", perturb, "negative control: <constant>=<factor>");
    val->add_flag("--single-case", single_case, "only the scenario's own link case");

    auto* dump = app.add_subcommand("dump-samples", "write raw SNR samples as CSV");
    add_common(dump, dc, 100000);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return config_error;
    }

    try {
        if (*eval || *sweep) {
            const bool is_sweep = static_cast<bool>(*sweep);
            const Common& c = is_sweep ? sc : ec;
            SweepSpec spec;
            spec.base = load(c);
            spec.metrics = parse_metrics(is_sweep ? s_metric : e_metric);
            spec.engines = parse_engines(is_sweep ? s_engine : e_engine);
            spec.mc = mc_settings(c);
            if (is_sweep) {
                spec.param = param;
                spec.values = values;
                spec.jobs = jobs;
            }
            return finish_run(run_sweep(spec), c.out, timing, record, plot, is_sweep);
        }
        if (*val) {
            ValidateOptions opt;
            opt.mc = mc_settings(vc);
            opt.both_cases = !single_case;
            if (!perturb.empty()) {
                auto eq = perturb.find('=');
                if (eq == std::string::npos) throw ConfigError("--perturb: expected <constant>=<factor>");
                opt.perturb = std::make_pair(perturb.substr(0, eq), std::stod(perturb.substr(eq + 1)));
            }
            auto rep = validate(load(vc), opt);
            Output o(vc.out);
            print_report(*o.os, rep);
            return rep.all_pass() ? ok : validation_failed;
        }
        if (*dump) {
            auto batch = montecarlo::simulate_batch(load(dc), dc.trials, dc.seed, montecarlo::parse_mode(dc.mc_mode));
            if (dc.out.empty()) throw ConfigError("--out: dump-samples needs an output path");
            montecarlo::dump_samples_csv(batch, dc.out);
            return ok;
        }
    } catch (const ConvergenceError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return numerical_error;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: --perturb: factor is not a number\n";
        return config_error;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return config_error;
    }
    return ok;
}
