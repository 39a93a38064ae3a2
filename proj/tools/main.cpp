#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "solarsched/app.hpp"

namespace app = solarsched::app;
using solarsched::BatteryConfig;
using solarsched::GridLimits;

namespace {

struct BatteryFlags {
    std::optional<double> capacity;
    std::optional<double> soc_min;
    std::optional<double> soc_max;
    std::optional<double> rate;
    std::optional<double> loss;
    std::optional<double> import_limit;
    std::optional<double> export_limit;

    void add(CLI::App& cmd) {
        cmd.add_option("--capacity", capacity, "Battery capacity (kWh)");
        cmd.add_option("--soc-min", soc_min, "Minimum state of charge (kWh)");
        cmd.add_option("--soc-max", soc_max, "Maximum state of charge (kWh)");
        cmd.add_option("--rate", rate, "Charge/discharge limit per hour (kWh)");
        cmd.add_option("--loss", loss, "Per-direction loss factor");
        cmd.add_option("--import-limit", import_limit, "Grid import limit per hour (kWh)");
        cmd.add_option("--export-limit", export_limit, "Grid export limit per hour (kWh)");
    }

    void apply(BatteryConfig& b, GridLimits& g) const {
        if (capacity) b.capacity_kwh = *capacity;
        if (soc_min) b.soc_min_kwh = *soc_min;
        if (soc_max) b.soc_max_kwh = *soc_max;
        if (rate) b.rate_limit_kwh = *rate;
        if (loss) b.loss_factor = *loss;
        if (import_limit) g.import_kwh = *import_limit;
        if (export_limit) g.export_kwh = *export_limit;
    }
};

solarsched::QuantileLevel parse_level(const std::string& s) {
    if (s == "q40" || s == "40") return solarsched::QuantileLevel::q40;
    if (s == "q50" || s == "50") return solarsched::QuantileLevel::q50;
    if (s == "q60" || s == "60") return solarsched::QuantileLevel::q60;
    throw app::UsageError("quantile must be one of q40, q50, q60");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App cli{"Solar-plus-battery scheduling and tariff simulation"};
    cli.require_subcommand(1);

    // simulate
    auto* sim = cli.add_subcommand("simulate", "Replay datasets under dispatch strategies and write cost tables");
    std::optional<std::string> sim_config;
    std::vector<std::string> sim_data;
    std::vector<std::string> sim_nwp;
    std::optional<std::string> sim_tariffs;
    std::optional<std::string> sim_strategies;
    std::optional<std::string> sim_out;
    std::optional<std::uint64_t> sim_seed;
    std::optional<int> sim_jobs;
    std::optional<int> sim_offset;
    std::optional<std::string> sim_window;
    std::optional<std::string> sim_weighting;
    bool sim_force = false;
    bool sim_traces = false;
    BatteryFlags sim_battery;
    sim->add_option("--config", sim_config, "JSON run config; flags override its values");
    sim->add_option("--data", sim_data, "Hourly dataset CSV (repeatable)");
    sim->add_option("--nwp", sim_nwp, "NWP extract CSV, one per dataset (repeatable)");
    sim->add_option("--tariff,--tariffs", sim_tariffs, "Bundled tariff names or config paths, comma separated, or 'all'");
    sim->add_option("--strategies", sim_strategies, "Comma separated strategy names, or 'all'");
    sim->add_option("--out", sim_out, "Output directory");
    sim->add_option("--seed", sim_seed, "Seed for forest training");
    sim->add_option("--jobs", sim_jobs, "Maximum worker threads")->check(CLI::NonNegativeNumber);
    sim->add_option("--utc-offset", sim_offset, "UTC offset of the data, minutes");
    sim->add_option("--window", sim_window, "Hours where schedules run")->check(CLI::IsMember({"non_peak", "off_peak"}));
    sim->add_option("--weighting", sim_weighting, "Cost table averaging")->check(CLI::IsMember({"load", "unweighted"}));
    sim->add_flag("--force", sim_force, "Simulate datasets that fail the eligibility filters");
    sim->add_flag("--traces", sim_traces, "Write an hourly trace per run");
    sim_battery.add(*sim);

    // schedule
    auto* sched = cli.add_subcommand("schedule", "Solve one scheduling program and print the schedule CSV");
    app::ScheduleRequest sched_req;
    std::string sched_forecast;
    std::string sched_load_q = "q50";
    std::string sched_pv_q = "q50";
    BatteryFlags sched_battery;
    sched->add_option("--tariff", sched_req.tariff, "Bundled tariff name or config path")->capture_default_str();
    sched->add_option("--forecast", sched_forecast, "Forecast CSV")->required();
    sched->add_option("--soc", sched_req.soc_kwh, "Initial state of charge (kWh)")->required();
    sched->add_option("--horizon", sched_req.horizon, "Hours to schedule")->capture_default_str();
    sched->add_option("--load-quantile", sched_load_q, "Load quantile fed to the program")->capture_default_str();
    sched->add_option("--pv-quantile", sched_pv_q, "PV quantile fed to the program")->capture_default_str();
    sched->add_option("--utc-offset", sched_req.utc_offset_minutes, "UTC offset of the forecast, minutes")
        ->capture_default_str();
    sched_battery.add(*sched);

    // forecast-eval
    auto* eval = cli.add_subcommand("forecast-eval", "Score forecasts and print percentile error rows");
    app::ForecastEvalRequest eval_req;
    std::vector<std::string> eval_data;
    std::vector<std::string> eval_nwp;
    std::string eval_model = "qrf";
    std::optional<std::string> eval_per_site;
    eval->add_option("--data", eval_data, "Hourly dataset CSV (repeatable)")->required();
    eval->add_option("--nwp", eval_nwp, "NWP extract CSV per dataset");
    eval->add_option("--model", eval_model, "qrf, persist_24h, persist_1h, perfect or climatology")
        ->capture_default_str();
    eval->add_option("--seed", eval_req.seed, "Seed for forest training")->capture_default_str();
    eval->add_option("--trees", eval_req.forecaster.forest.num_trees, "Trees per forest")->capture_default_str();
    eval->add_option("--utc-offset", eval_req.utc_offset_minutes, "UTC offset, minutes")->capture_default_str();
    eval->add_option("--per-site", eval_per_site, "Also write per-site errors to this CSV");

    // report
    auto* rep = cli.add_subcommand("report", "Rebuild cost tables and plot data from results.csv");
    app::ReportRequest rep_req;
    std::string rep_results;
    std::string rep_out = "out";
    std::string rep_weighting = "load";
    rep->add_option("--results", rep_results, "results.csv from a simulate run")->required();
    rep->add_option("--out", rep_out, "Output directory")->capture_default_str();
    rep->add_option("--weighting", rep_weighting, "Cost table averaging")
        ->check(CLI::IsMember({"load", "unweighted"}))
        ->capture_default_str();

    // fixture
    auto* fix = cli.add_subcommand("fixture", "Write the synthetic dataset and NWP extract");
    solarsched::FixtureOptions fix_opts;
    std::string fix_out = ".";
    fix->add_option("--out", fix_out, "Output directory")->capture_default_str();
    fix->add_option("--site-id", fix_opts.site_id, "Site identifier and file stem")->capture_default_str();
    fix->add_option("--days", fix_opts.days, "Number of days")->capture_default_str();
    fix->add_option("--ratio", fix_opts.pv_load_ratio, "PV/load energy ratio")->capture_default_str();
    fix->add_option("--seed", fix_opts.seed, "Generator seed")->capture_default_str();

    try {
        cli.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = cli.exit(e);
        return code == 0 ? app::kExitOk : app::kExitUsage;
    }

    try {
        if (*sim) {
            app::RunConfig cfg;
            if (sim_config) cfg = app::load_run_config(*sim_config);
            if (!sim_data.empty()) cfg.data.assign(sim_data.begin(), sim_data.end());
            if (!sim_nwp.empty()) cfg.nwp.assign(sim_nwp.begin(), sim_nwp.end());
            if (sim_tariffs) cfg.tariffs = app::parse_tariff_list(*sim_tariffs);
            if (sim_strategies) cfg.strategies = app::parse_strategy_list(*sim_strategies);
            if (sim_out) cfg.out_dir = *sim_out;
            if (sim_seed) cfg.seed = *sim_seed;
            if (sim_jobs) cfg.jobs = *sim_jobs;
            if (sim_offset) cfg.utc_offset_minutes = *sim_offset;
            if (sim_window)
                cfg.window = *sim_window == "off_peak" ? solarsched::OptimizeWindow::off_peak
                                                       : solarsched::OptimizeWindow::non_peak;
            if (sim_weighting)
                cfg.weighting = *sim_weighting == "unweighted" ? solarsched::Weighting::unweighted
                                                               : solarsched::Weighting::load;
            cfg.force = cfg.force || sim_force;
            cfg.traces = cfg.traces || sim_traces;
            sim_battery.apply(cfg.battery, cfg.limits);
            const auto rows = app::run_simulate(cfg, std::cerr);
            solarsched::write_cost_table(std::cout, solarsched::cost_table(rows, cfg.weighting));
        } else if (*sched) {
            sched_req.forecast = sched_forecast;
            sched_req.quantiles = {parse_level(sched_load_q), parse_level(sched_pv_q)};
            sched_battery.apply(sched_req.battery, sched_req.limits);
            const auto schedule = app::run_schedule(sched_req);
            solarsched::write_schedule(std::cout, schedule, sched_req.utc_offset_minutes);
        } else if (*eval) {
            const auto model = app::eval_model_from_string(eval_model);
            if (!model) throw app::UsageError("unknown model '" + eval_model + "'");
            eval_req.model = *model;
            eval_req.data.assign(eval_data.begin(), eval_data.end());
            eval_req.nwp.assign(eval_nwp.begin(), eval_nwp.end());
            std::vector<solarsched::SiteErrors> per_site;
            const auto table = app::run_forecast_eval(eval_req, &per_site);
            solarsched::write_percentile_table(std::cout, table);
            if (eval_per_site) {
                std::ofstream out(*eval_per_site);
                if (!out) throw solarsched::Error("cannot write '" + *eval_per_site + "'");
                out << "site_id,load_nmae,load_nrmse,pv_nmae,pv_nrmse\n";
                for (const auto& s : per_site)
                    out << s.site_id << ',' << s.load.nmae << ',' << s.load.nrmse << ',' << s.pv.nmae << ','
                        << s.pv.nrmse << '\n';
            }
        } else if (*rep) {
            rep_req.results = rep_results;
            rep_req.out_dir = rep_out;
            rep_req.weighting = rep_weighting == "unweighted" ? solarsched::Weighting::unweighted
                                                              : solarsched::Weighting::load;
            for (const auto& p : app::run_report(rep_req)) std::cerr << "wrote " << p.string() << '\n';
        } else if (*fix) {
            app::write_fixture(fix_out, fix_opts);
        }
    } catch (const app::UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return app::kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return app::kExitRuntime;
    }
    return app::kExitOk;
}
