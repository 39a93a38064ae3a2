// Acceptance run: prints one [PASS]/[FAIL] line per criterion and exits
// nonzero if any fails. Pass --regen-golden to rewrite the frozen fixture
// costs instead of comparing against them.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "solarsched/app.hpp"
#include "solarsched/automatic.hpp"
#include "solarsched/forecast.hpp"
#include "solarsched/metrics.hpp"
#include "solarsched/simulation.hpp"
#include "solarsched/stats.hpp"
#include "solarsched/synthetic.hpp"
#include "support/builders.hpp"
#include "support/dp_oracle.hpp"

#ifndef SOLARSCHED_GOLDEN_DIR
#define SOLARSCHED_GOLDEN_DIR "tests/golden"
#endif

using namespace solarsched;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

struct Verdict {
    bool ok;
    std::string title;
    std::string detail;
};

// Collected by criterion number and printed in order at the end.
std::map<int, Verdict> verdicts;

void verdict(int id, bool ok, const std::string& title, const std::string& detail) {
    verdicts[id] = {ok, title, detail};
    std::fprintf(stderr, "criterion %d done\n", id);
}

std::string fmt(double v, int digits = 4) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Invariant tallies shared by criteria 1-3.
struct InvariantTally {
    std::size_t schedules = 0;
    std::size_t wash_checked = 0;
    std::size_t wash_violations = 0;
    std::size_t cycle_checked = 0;
    std::size_t cycle_violations = 0;
    double worst_wash = 0.0;
    double worst_cycle = 0.0;

    void check(const LPInstance& inst, const DispatchSchedule& s) {
        ++schedules;
        const auto& b = inst.battery;
        constexpr double kSlack = 1e-6;
        double prev = inst.soc0_kwh;
        for (std::size_t h = 0; h < s.horizon(); ++h) {
            if (inst.import_price[h] > inst.export_price[h] && s.export_kwh[h] < inst.limits.export_kwh - kSlack) {
                ++wash_checked;
                const double m = std::min(s.import_kwh[h], s.export_kwh[h]);
                worst_wash = std::max(worst_wash, m);
                if (m > 1e-9) ++wash_violations;
            }
            const double lo = std::min(prev, s.soc_kwh[h]);
            const double hi = std::max(prev, s.soc_kwh[h]);
            if (lo > b.soc_min_kwh + kSlack && hi < b.soc_max_kwh - kSlack) {
                ++cycle_checked;
                const double m = std::min(s.charge_kwh[h], s.discharge_kwh[h]);
                worst_cycle = std::max(worst_cycle, m);
                if (m > 1e-9) ++cycle_violations;
            }
            prev = s.soc_kwh[h];
        }
    }
};

// Cost of running the automatic rules over an instance's actual series.
double automatic_cost(const LPInstance& inst) {
    SocState soc{inst.soc0_kwh};
    double cost = 0.0;
    for (std::size_t h = 0; h < inst.horizon(); ++h) {
        const auto f = automatic_step(inst.battery, soc, inst.load_kwh[h], inst.pv_kwh[h]);
        cost += inst.import_price[h] * f.import_kwh - inst.export_price[h] * f.export_kwh;
        soc = f.soc_end;
    }
    return cost;
}

struct PhysicalTally {
    std::size_t runs = 0;
    std::size_t hours = 0;
    double worst_residual = 0.0;
    double worst_soc_excursion = 0.0;

    void add(const CostReport& r, const BatteryConfig& b) {
        ++runs;
        hours += r.hours_simulated;
        worst_residual = std::max(worst_residual, r.max_balance_residual_kwh);
        worst_soc_excursion = std::max({worst_soc_excursion, b.soc_min_kwh - r.min_soc_kwh, r.max_soc_kwh - b.soc_max_kwh});
    }
    bool ok() const { return worst_residual <= 1e-9 && worst_soc_excursion <= 1e-9; }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::vector<fs::path> files_under(const fs::path& dir) {
    std::vector<fs::path> out;
    for (const auto& e : fs::recursive_directory_iterator(dir)) {
        if (e.is_regular_file()) out.push_back(fs::relative(e.path(), dir));
    }
    std::sort(out.begin(), out.end());
    return out;
}

// The bundled fixture pipeline: generate the site, then simulate all tariffs
// and strategies through the same entry point as the CLI.
std::vector<ResultRow> run_pipeline(const fs::path& dir, std::uint64_t seed, MatrixResult& matrix) {
    fs::remove_all(dir);
    FixtureOptions fx;
    fx.site_id = "fixture";
    fx.days = 90;
    fx.seed = 1;
    app::write_fixture(dir / "data", fx);
    app::RunConfig cfg;
    cfg.data = {dir / "data" / "fixture.csv"};
    cfg.nwp = {dir / "data" / "fixture_nwp.csv"};
    cfg.tariffs = app::parse_tariff_list("all");
    cfg.out_dir = dir / "out";
    cfg.seed = seed;
    cfg.traces = true;
    std::ostringstream log;
    return app::run_simulate(cfg, log, &matrix);
}

const ResultRow* find_row(const std::vector<ResultRow>& rows, const std::string& tariff, StrategyKind k) {
    for (const auto& r : rows) {
        if (r.tariff == tariff && r.strategy == k) return &r;
    }
    return nullptr;
}

double per_kwh(const ResultRow& r) { return r.total_cost_c / r.total_load_kwh; }

// ---------------------------------------------------------------------------

void criteria_1_to_3(InvariantTally& tally) {
    // 1: LP against the DP oracle on small random instances.
    {
        Rng rng(20180718, 1);
        const auto t0 = Clock::now();
        int mismatches = 0;
        double worst_gap = 0.0;
        double worst_rel = 0.0;
        for (int i = 0; i < 200; ++i) {
            const auto inst = fixtures::random_small_instance(rng);
            const auto s = solve(inst);
            if (s.status != ScheduleStatus::optimal) {
                ++mismatches;
                continue;
            }
            tally.check(inst, s);
            const double oracle = fixtures::dp_oracle_cost(inst);
            const double gap = std::abs(s.objective_c - oracle);
            const double tol = std::max(0.5, 0.005 * std::abs(oracle));
            worst_gap = std::max(worst_gap, gap);
            worst_rel = std::max(worst_rel, gap / tol);
            if (gap > tol) ++mismatches;
        }
        const double secs = seconds_since(t0);
        verdict(1, mismatches == 0 && secs < 60.0, "LP matches DP oracle",
                "200 instances, " + std::to_string(mismatches) + " outside tolerance, worst |gap| " +
                    fmt(worst_gap, 6) + " c (" + fmt(100.0 * worst_rel, 1) + "% of allowance), " + fmt(secs, 2) +
                    " s");
    }

    // 2: perfect-forecast LP never loses to the automatic rules on a window.
    {
        Rng rng(20180718, 2);
        const auto names = bundled_tariff_names();
        int violations = 0;
        double worst = -1e300;
        double mean_saving = 0.0;
        for (int i = 0; i < 500; ++i) {
            std::vector<double> load, pv;
            fixtures::random_day(rng, load, pv, 48);
            const std::size_t offset = rng.index(24);
            const auto from = static_cast<std::ptrdiff_t>(offset);
            load = std::vector<double>(load.begin() + from, load.begin() + from + 24);
            pv = std::vector<double>(pv.begin() + from, pv.begin() + from + 24);
            const auto start = fixtures::monday(static_cast<int>(rng.index(24 * 7)));
            const auto ds = fixtures::make_dataset(load, pv, start);
            const auto tariff = bundled_tariff(names[rng.index(names.size())]);
            BatteryConfig battery;
            const SocState soc0{rng.uniform(battery.soc_min_kwh, battery.soc_max_kwh)};
            const auto inst = build_instance(tariff, perfect(ds, start, 24), start, soc0, battery);
            const auto s = solve(inst);
            if (s.status != ScheduleStatus::optimal) {
                ++violations;
                continue;
            }
            tally.check(inst, s);
            const double autoc = automatic_cost(inst);
            const double excess = s.objective_c - autoc;
            worst = std::max(worst, excess);
            mean_saving += (autoc - s.objective_c) / 500.0;
            if (excess > 1e-6) ++violations;
        }
        verdict(2, violations == 0, "LP dominates automatic",
                "500 windows, " + std::to_string(violations) + " violations, max(LP - automatic) " +
                    fmt(worst, 9) + " c, mean saving " + fmt(mean_saving, 3) + " c");
    }

    // 3: invariants over every schedule solved above.
    verdict(3, tally.wash_violations == 0 && tally.cycle_violations == 0, "no wash trading, no cycling",
            std::to_string(tally.schedules) + " schedules; min(I,E) checked on " +
                std::to_string(tally.wash_checked) + " hours (" + std::to_string(tally.wash_violations) +
                " violations, worst " + fmt(tally.worst_wash, 12) + "), min(Q,R) on " +
                std::to_string(tally.cycle_checked) + " hours (" + std::to_string(tally.cycle_violations) +
                " violations, worst " + fmt(tally.worst_cycle, 12) + ")");
}

void criterion_7() {
    using V = std::vector<double>;
    bool ok = true;
    ok &= std::abs(mape(V{2, 4}, V{1, 5}) - 37.5) <= 1e-12;
    ok &= std::abs(nmae(V{2, 2}, V{1, 3}) - 0.5) <= 1e-12;
    ok &= std::abs(nrmse(V{2, 2}, V{1, 3}) - std::sqrt(2.0 / 8.0)) <= 1e-12;
    ok &= std::abs(pinball(V{0, 2}, V{1, 1}, 0.5) - 0.5) <= 1e-12;
    const V s{0.3, 1.7, 2.2, 0.05, 4.0};
    ok &= mape(s, s) == 0.0 && nmae(s, s) == 0.0 && nrmse(s, s) == 0.0;
    const V zero(s.size(), 0.0);
    ok &= std::abs(nmae(s, zero) - 1.0) <= 1e-12 && std::abs(nrmse(s, zero) - 1.0) <= 1e-12;
    bool threw = false;
    try {
        mape(V{0, 1}, V{1, 1});
    } catch (const Error&) {
        threw = true;
    }
    ok &= threw;
    verdict(7, ok, "metrics exactness", "MAPE 37.5, NMAE 0.5, NRMSE sqrt(2/8), identity 0, zero forecast 1");
}

void criterion_8() {
    struct Probe {
        int day;  // days after Monday
        int hour;
    };
    const std::array<Probe, 7> probes{{{0, 3}, {0, 8}, {2, 10}, {3, 15}, {4, 18}, {4, 21}, {5, 12}}};
    struct Expect {
        const char* name;
        double feed_in;
        std::array<double, 7> import;
        std::array<Period, 7> period;
    };
    constexpr auto O = Period::off_peak;
    constexpr auto S = Period::shoulder;
    constexpr auto P = Period::peak;
    const std::array<Expect, 10> table{{
        {"tariff1", 11.3, {23.4, 43.6, 43.6, 43.6, 43.6, 43.6, 23.4}, {O, P, P, P, P, P, O}},
        {"tariff2", 11.3, {20.3, 36.5, 36.5, 36.5, 36.5, 36.5, 20.3}, {O, P, P, P, P, P, O}},
        {"tariff3", 11.3, {20.6, 40.3, 40.3, 40.3, 40.3, 40.3, 20.6}, {O, P, P, P, P, P, O}},
        {"tariff4", 11.3, {21.6, 40.6, 40.6, 40.6, 40.6, 40.6, 21.6}, {O, P, P, P, P, P, O}},
        {"tariff5", 11.3, {18.8, 40.4, 40.4, 40.4, 40.4, 40.4, 18.8}, {O, P, P, P, P, P, O}},
        {"tariff6", 12.5, {15.2, 25.0, 25.0, 54.9, 54.9, 25.0, 25.0}, {O, S, S, P, P, S, S}},
        {"tariff7", 12.5, {17.8, 32.3, 32.3, 42.1, 42.1, 32.3, 17.8}, {O, S, S, P, P, S, O}},
        {"tariff8", 12.5, {18.6, 36.1, 33.8, 33.8, 36.1, 33.8, 18.6}, {O, P, S, S, P, S, O}},
        {"tariff9", 12.5, {14.4, 27.5, 19.0, 19.0, 27.5, 19.0, 19.0}, {O, P, S, S, P, S, S}},
        {"tariff10", 11.0, {20.3, 25.6, 25.6, 25.6, 36.0, 25.6, 25.6}, {O, S, S, S, P, S, S}},
    }};
    int checked = 0;
    std::vector<std::string> wrong;
    for (const auto& e : table) {
        const auto tariff = bundled_tariff(e.name);
        for (std::size_t i = 0; i < probes.size(); ++i) {
            const auto t = fixtures::monday(probes[i].day * 24 + probes[i].hour);
            const auto r = tariff.rates_at(t);
            ++checked;
            if (r.import_rate != Price::from_cents(e.import[i]) || r.export_rate != Price::from_cents(e.feed_in) ||
                r.period != e.period[i])
                wrong.push_back(std::string(e.name) + "@" + t.to_iso(600));
        }
    }
    std::string detail = std::to_string(checked) + " probes, " + std::to_string(wrong.size()) + " wrong";
    for (const auto& w : wrong) detail += " " + w;
    verdict(8, checked == 70 && wrong.empty(), "tariff probes", detail);
}

void criterion_9() {
    const auto t0 = Clock::now();
    FixtureOptions fo;
    fo.site_id = "qrf";
    fo.days = 60;
    fo.seed = 3;
    const auto fx = make_fixture(fo);
    const QuantileForecaster forecaster(fx.data, fx.nwp);
    const TrainingWindow window;
    const LocalHour first = fx.data.start().day_start() + 24 * window.days;

    struct Series {
        std::vector<double> actual, q40, q50, q60, clim;
    };
    Series load, pv;
    std::size_t non_monotone = 0;
    for (LocalHour t = first; t < fx.data.end(); ++t) {
        const auto* rec = fx.data.present_at(t);
        if (!rec) continue;
        const auto fc = forecaster.forecast(t, 1);
        if (!fc.available[0]) continue;
        if (!fc.load[0].monotone() || !fc.pv[0].monotone()) ++non_monotone;
        std::vector<double> past_load, past_pv;
        for (int d = 1; d <= window.days; ++d) {
            if (const auto* p = fx.data.present_at(t - 24 * d)) {
                past_load.push_back(p->load_kwh);
                past_pv.push_back(p->pv_kwh);
            }
        }
        const auto push = [](Series& s, double y, const QuantileTriple& q, double clim) {
            s.actual.push_back(y);
            s.q40.push_back(q.q40);
            s.q50.push_back(q.q50);
            s.q60.push_back(q.q60);
            s.clim.push_back(clim);
        };
        push(load, rec->load_kwh, fc.load[0], quantile(past_load, 0.5));
        // PV is scored in daylight only; at night every band collapses to zero.
        if (fc.pv[0].q60 > 0.0 || rec->pv_kwh > 0.0) push(pv, rec->pv_kwh, fc.pv[0], quantile(past_pv, 0.5));
    }
    const auto coverage = [](const Series& s) {
        std::size_t in = 0;
        for (std::size_t i = 0; i < s.actual.size(); ++i) {
            if (s.actual[i] >= s.q40[i] && s.actual[i] <= s.q60[i]) ++in;
        }
        return 100.0 * static_cast<double>(in) / static_cast<double>(s.actual.size());
    };
    const double cov_load = coverage(load);
    const double cov_pv = coverage(pv);
    const double pb_load = pinball(load.actual, load.q50, 0.5);
    const double pb_load_clim = pinball(load.actual, load.clim, 0.5);
    const double pb_pv = pinball(pv.actual, pv.q50, 0.5);
    const double pb_pv_clim = pinball(pv.actual, pv.clim, 0.5);
    const bool ok = non_monotone == 0 && std::abs(cov_load - 20.0) <= 10.0 && std::abs(cov_pv - 20.0) <= 10.0 &&
                    pb_load < pb_load_clim && pb_pv < pb_pv_clim;
    verdict(9, ok, "quantile forecaster",
            std::to_string(load.actual.size()) + " load / " + std::to_string(pv.actual.size()) +
                " daylight PV hours, non-monotone " + std::to_string(non_monotone) + ", (q40,q60) coverage load " +
                fmt(cov_load, 1) + "% pv " + fmt(cov_pv, 1) + "%, q50 pinball load " + fmt(pb_load) + " vs " +
                fmt(pb_load_clim) + " climatology, pv " + fmt(pb_pv) + " vs " + fmt(pb_pv_clim) + ", " +
                fmt(seconds_since(t0), 1) + " s");
}

void criterion_10(PhysicalTally& physical) {
    const auto fx = make_fixture({.site_id = "fixture", .days = 90, .seed = 1});
    const auto flat = fixtures::flat_tariff(25.0, 10.0);
    const BatteryConfig battery;
    SimulationOptions opt;
    const auto au = simulate(fx.data, flat, battery, StrategyKind::automatic, opt);
    physical.add(au, battery);
    std::string detail = "automatic " + fmt(au.cost_c_per_kwh) + " c/kWh;";
    bool ok = true;
    for (auto k : {StrategyKind::perfect, StrategyKind::pv_persist, StrategyKind::pv_load_persist,
                   StrategyKind::load_persist, StrategyKind::persist_1h}) {
        const auto r = simulate(fx.data, flat, battery, k, opt);
        physical.add(r, battery);
        const double dev = 100.0 * (r.total_cost_c - au.total_cost_c) / std::abs(au.total_cost_c);
        detail += " " + std::string(to_string(k)) + " " + (dev >= 0 ? "+" : "") + fmt(dev, 4) + "%";
        if (k == StrategyKind::perfect) ok = std::abs(dev) <= 0.1;
    }
    verdict(10, ok, "flat tariff neutrality (perfect within 0.1%)", detail);
}

struct GoldenCompare {
    bool ok = true;
    std::string detail;
};

GoldenCompare compare_golden(const std::vector<ResultRow>& rows, const fs::path& golden, bool regen) {
    if (regen) {
        fs::create_directories(golden.parent_path());
        std::ofstream out(golden, std::ios::binary);
        write_results(out, rows);
        return {true, "golden regenerated at " + golden.string()};
    }
    std::ifstream in(golden);
    if (!in) return {false, "golden file missing: " + golden.string()};
    const auto expect = read_results(in, golden.string());
    if (expect.size() != rows.size()) {
        return {false, "golden has " + std::to_string(expect.size()) + " rows, run has " + std::to_string(rows.size())};
    }
    double worst = 0.0;
    std::size_t bad = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& a = rows[i];
        const auto& b = expect[i];
        const double scale = std::max(1.0, std::abs(b.total_cost_c));
        const double rel = std::abs(a.total_cost_c - b.total_cost_c) / scale;
        worst = std::max(worst, rel);
        if (a.site_id != b.site_id || a.tariff != b.tariff || a.strategy != b.strategy || rel > 1e-6 ||
            a.hours_simulated != b.hours_simulated)
            ++bad;
    }
    return {bad == 0, std::to_string(rows.size()) + " golden cells, " + std::to_string(bad) +
                          " differ, worst relative cost gap " + fmt(worst * 1e6, 3) + "e-6"};
}

void criteria_4_5_6_11(const fs::path& work, bool regen, PhysicalTally& physical) {
    const auto t0 = Clock::now();
    MatrixResult matrix_a;
    MatrixResult matrix_b;
    const auto rows = run_pipeline(work / "run_a", 20180718, matrix_a);
    const double first_secs = seconds_since(t0);
    const auto rows_b = run_pipeline(work / "run_b", 20180718, matrix_b);

    // 4: every cell of both fixture runs plus the flat-tariff runs.
    const BatteryConfig battery;
    for (const auto* m : {&matrix_a, &matrix_b}) {
        for (const auto& cell : m->cells) physical.add(cell, battery);
    }
    verdict(4, physical.ok(), "conservation and SoC bounds",
            std::to_string(physical.runs) + " runs, " + std::to_string(physical.hours) +
                " simulated hours, worst balance residual " + fmt(physical.worst_residual * 1e9, 3) +
                "e-9 kWh, worst SoC excursion " + fmt(physical.worst_soc_excursion, 12) + " kWh");

    // 5: ordering on Tariff 1 plus the frozen golden costs.
    {
        const std::string t1 = bundled_tariff("tariff1").name();
        std::map<StrategyKind, double> c;
        bool have_all = true;
        for (auto k : kAllStrategies) {
            const auto* r = find_row(rows, t1, k);
            if (!r) have_all = false;
            else c[k] = per_kwh(*r);
        }
        using K = StrategyKind;
        bool ok = have_all;
        std::string detail;
        if (have_all) {
            const std::vector<K> persistence{K::pv_persist, K::pv_load_persist, K::load_persist};
            const std::vector<K> quantile{K::q50_50, K::q60_40};
            double mean_p = 0.0;
            for (auto k : persistence) mean_p += c[k] / persistence.size();
            double mean_q = 0.0;
            for (auto k : quantile) mean_q += c[k] / quantile.size();
            ok &= c[K::no_solar] > c[K::no_battery] && c[K::no_battery] > c[K::automatic];
            for (auto k : persistence) ok &= c[K::automatic] > c[k];
            ok &= mean_p >= mean_q;
            for (auto k : kAllStrategies) ok &= c[k] >= c[K::perfect] - 1e-12;
            for (auto k : kAllStrategies) detail += std::string(to_string(k)) + "=" + fmt(c[k]) + " ";
            detail += "| persistence mean " + fmt(mean_p) + " >= quantile mean " + fmt(mean_q);
        }
        const auto golden = compare_golden(rows, fs::path(SOLARSCHED_GOLDEN_DIR) / "fixture_costs.csv", regen);
        verdict(5, ok && golden.ok, "strategy ordering on fixture, Tariff 1", detail + " | " + golden.detail);
    }

    // 6: perfect forecasts beat automatic.
    {
        const std::string t1 = bundled_tariff("tariff1").name();
        const auto* au = find_row(rows, t1, StrategyKind::automatic);
        const auto* pf = find_row(rows, t1, StrategyKind::perfect);
        const bool ok = au && pf && pf->total_cost_c < au->total_cost_c;
        std::string detail;
        if (au && pf) {
            detail = "Tariff 1 saving " + fmt(100.0 * (au->total_cost_c - pf->total_cost_c) / au->total_cost_c, 2) +
                     "%; all tariffs:";
            for (const auto& name : bundled_tariff_names()) {
                const std::string tn = bundled_tariff(name).name();
                const auto* a = find_row(rows, tn, StrategyKind::automatic);
                const auto* p = find_row(rows, tn, StrategyKind::perfect);
                if (a && p) detail += " " + fmt(100.0 * (a->total_cost_c - p->total_cost_c) / a->total_cost_c, 2);
            }
        }
        verdict(6, ok, "perfect forecast saves over automatic", detail);
    }

    // 11: byte-identical repeat.
    {
        const auto a = work / "run_a";
        const auto b = work / "run_b";
        const auto fa = files_under(a);
        const auto fb = files_under(b);
        std::size_t differing = 0;
        for (const auto& f : fa) {
            if (std::find(fb.begin(), fb.end(), f) == fb.end() || slurp(a / f) != slurp(b / f)) ++differing;
        }
        const bool ok = fa == fb && differing == 0 && rows.size() == rows_b.size();
        verdict(11, ok, "deterministic repeat",
                std::to_string(fa.size()) + " files compared, " + std::to_string(differing) + " differ, " +
                    fmt(first_secs, 1) + " s per run");
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App cli{"Acceptance checks"};
    fs::path work = fs::temp_directory_path() / "solarsched_acceptance";
    bool regen = false;
    cli.add_option("--work-dir", work, "Scratch directory for pipeline runs");
    cli.add_flag("--regen-golden", regen, "Rewrite the golden fixture costs");
    CLI11_PARSE(cli, argc, argv);

    try {
        InvariantTally tally;
        PhysicalTally physical;
        criteria_1_to_3(tally);
        criterion_10(physical);
        criteria_4_5_6_11(work, regen, physical);
        criterion_7();
        criterion_8();
        criterion_9();
    } catch (const std::exception& e) {
        std::printf("[FAIL] acceptance aborted: %s\n", e.what());
        return 1;
    }
    int failures = 0;
    for (const auto& [id, v] : verdicts) {
        std::printf("[%s] %2d %s: %s\n", v.ok ? "PASS" : "FAIL", id, v.title.c_str(), v.detail.c_str());
        if (!v.ok) ++failures;
    }
    std::printf("%s: %d failing criteria\n", failures == 0 ? "OK" : "FAILED", failures);
    return failures == 0 ? 0 : 1;
}
