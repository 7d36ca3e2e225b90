#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rissec/montecarlo.hpp"
#include "rissec/secrecy.hpp"

namespace rissec::app {

using snrdist::ScenarioConfig;

enum class Metric { asc, sop };
enum class Engine { exact, asymptotic, mc };

std::vector<Metric> parse_metrics(const std::string& s);  // asc|sop|both
std::vector<Engine> parse_engines(const std::string& s);  // comma list of exact|asymptotic|mc, or all
std::string to_string(Metric m);
std::string to_string(Engine e);

struct McSettings {
    std::size_t trials = 100000;
    std::uint64_t seed = 1;
    montecarlo::Mode mode = montecarlo::Mode::matched;
    unsigned threads = 0;
};

struct SweepSpec {
    ScenarioConfig base;
    std::string param;  // empty: evaluate the base scenario once
    std::vector<double> values;
    std::vector<Metric> metrics{Metric::asc, Metric::sop};
    std::vector<Engine> engines{Engine::exact};
    McSettings mc;
    unsigned jobs = 1;
};

struct Row {
    std::string param;
    double value = 0;
    Metric metric = Metric::asc;
    Engine engine = Engine::exact;
    std::optional<double> result, stderr_;
    double elapsed_ms = 0;
    std::vector<std::string> flags;
    bool numerical_failure = false;
};

struct RunRecord {
    std::string timestamp;
    std::uint64_t fingerprint = 0;
    std::string version;
    std::vector<Row> rows;  // sweep index major, then metric, then engine
};

RunRecord run_sweep(const SweepSpec& spec);

// CSV with header param,value,metric,engine,result,stderr,elapsed_ms,flags.
// elapsed_ms is left empty unless `timing` so that equal inputs give equal bytes.
void write_csv(std::ostream& os, const RunRecord& run, bool timing);
// Comment block summarizing the trend of each (metric, engine) series.
void write_trend_footer(std::ostream& os, const RunRecord& run);
// Wide table: value, then <metric>_<engine> and <metric>_<engine>_stderr columns.
void write_plot_data(std::ostream& os, const RunRecord& run);
void write_record_json(std::ostream& os, const RunRecord& run);

enum class Trend { constant, non_decreasing, non_increasing, mixed };
std::string to_string(Trend t);
// Differences within 3 combined standard errors (or the relative slack for
// deterministic engines) count as ties.
Trend trend(const std::vector<Row>& series);
std::vector<Row> series(const RunRecord& run, Metric m, Engine e);

struct Check {
    std::string name, link_case;
    double analytic = 0, mc = 0, stderr_ = 0, z = 0;
    std::optional<double> cvm;  // distributions only
    bool counted = true;        // false: informational row
    bool pass = true;
    std::string note;
};

struct ValidateOptions {
    McSettings mc{1000000, 1, montecarlo::Mode::matched, 0};
    // Negative control: scale one derived constant of the analytic side.
    std::optional<std::pair<std::string, double>> perturb;
    // Run the direct-link case as well when the scenario carries TR/TE fading.
    bool both_cases = true;
};

struct ValidateReport {
    std::vector<Check> checks;
    bool low_power = false;
    bool all_pass() const;
};

ValidateReport validate(const ScenarioConfig& cfg, const ValidateOptions& opt);
void print_report(std::ostream& os, const ValidateReport& r);

}  // namespace rissec::app
