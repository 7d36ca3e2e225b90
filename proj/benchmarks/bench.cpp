#include <benchmark/benchmark.h>

#include <vector>

#include "rissec/montecarlo.hpp"
#include "rissec/secrecy.hpp"
#include "rissec/specfun.hpp"
#include "scenario.hpp"

using namespace rissec;
using namespace rissec::specfun;

namespace {

const snrdist::ScenarioConfig& paper_default() {
    static const auto cfg = app::load_scenario("paper_default");
    return cfg;
}

void BM_loggamma(benchmark::State& st) {
    cplx z{0.37, 12.5};
    for (auto _ : st) {
        benchmark::DoNotOptimize(log_gamma_complex(z));
        z += cplx{1e-9, 0};
    }
}
BENCHMARK(BM_loggamma);

void BM_meijer_g(benchmark::State& st) {
    MeijerGSpec s{3, 1, 1, 3, {-5.0}, {3.0, 7.5, 8.0}};
    for (auto _ : st) benchmark::DoNotOptimize(meijer_g(s, 0.8));
}
BENCHMARK(BM_meijer_g)->Unit(benchmark::kMicrosecond);

void BM_fox_h_bivariate(benchmark::State& st) {
    FoxHSpec s;
    s.r = 2;
    s.n_outer = 1;
    s.outer_upper = {{0.0, {1.0, 1.0}}};
    s.vars = {{1, 0, 0, 1, {}, {{0.0, 1.0}}}, {1, 0, 0, 1, {}, {{0.0, 1.0}}}};
    for (auto _ : st) benchmark::DoNotOptimize(fox_h_bivariate(s, 0.7, 2.0));
}
BENCHMARK(BM_fox_h_bivariate)->Unit(benchmark::kMillisecond);

void BM_fox_h_4var(benchmark::State& st) {
    FoxHSpec s;
    s.r = 4;
    s.vars.assign(4, {1, 0, 0, 1, {}, {{0.0, 1.0}}});
    std::vector<double> x{0.5, 1.0, 2.0, 3.0};
    ContourSpec cs;
    cs.rel_tol = 1e-4;
    for (auto _ : st) benchmark::DoNotOptimize(fox_h_multivariate(s, x, cs));
}
BENCHMARK(BM_fox_h_4var)->Unit(benchmark::kMillisecond);

void BM_cdf(benchmark::State& st) {
    bool direct = st.range(0);
    auto cfg = paper_default();
    cfg.direct_links = direct;
    auto k = snrdist::derive_constants(cfg);
    snrdist::SnrDistribution h(snrdist::Receiver::reader, direct, k);
    double m = h.mean();
    for (auto _ : st) benchmark::DoNotOptimize(h.cdf(m));
}
BENCHMARK(BM_cdf)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);

void BM_asc(benchmark::State& st) {
    auto cfg = paper_default();
    cfg.direct_links = st.range(0);
    auto q = secrecy::make_query(cfg, snrdist::derive_constants(cfg));
    for (auto _ : st) benchmark::DoNotOptimize(secrecy::asc(q));
}
BENCHMARK(BM_asc)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_sop(benchmark::State& st) {
    auto cfg = paper_default();
    cfg.direct_links = st.range(0);
    auto q = secrecy::make_query(cfg, snrdist::derive_constants(cfg));
    for (auto _ : st) benchmark::DoNotOptimize(secrecy::sop(q));
}
BENCHMARK(BM_sop)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_simulate_batch(benchmark::State& st) {
    auto cfg = paper_default();
    cfg.direct_links = true;
    auto mode = static_cast<montecarlo::Mode>(st.range(0));
    for (auto _ : st) benchmark::DoNotOptimize(montecarlo::simulate_batch(cfg, 100000, 1, mode, 1));
    st.SetItemsProcessed(st.iterations() * 100000);
    st.SetLabel(montecarlo::to_string(mode));
}
BENCHMARK(BM_simulate_batch)
    ->Arg(int(montecarlo::Mode::matched))
    ->Arg(int(montecarlo::Mode::paper))
    ->Arg(int(montecarlo::Mode::physical))
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
