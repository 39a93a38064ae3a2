#include "solarsched/app.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "solarsched/metrics.hpp"
#include "solarsched/stats.hpp"

namespace solarsched::app {

using nlohmann::json;

namespace {

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ',')) {
        const auto a = item.find_first_not_of(" \t");
        const auto b = item.find_last_not_of(" \t");
        if (a != std::string::npos) out.push_back(item.substr(a, b - a + 1));
    }
    return out;
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
    const std::filesystem::path path(p);
    return path.is_absolute() || base.empty() ? path : base / path;
}

std::vector<std::string> string_or_array(const json& v, const char* key) {
    if (v.is_string()) return {v.get<std::string>()};
    if (!v.is_array()) throw UsageError(std::string("config key '") + key + "' must be a string or array");
    std::vector<std::string> out;
    for (const auto& e : v) {
        if (!e.is_string()) throw UsageError(std::string("config key '") + key + "' must hold strings");
        out.push_back(e.get<std::string>());
    }
    return out;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    return out;
}

std::vector<NwpTable> load_nwp_list(const std::vector<std::filesystem::path>& paths, std::size_t expected,
                                    int offset) {
    std::vector<NwpTable> out;
    if (paths.empty()) return out;
    if (paths.size() != expected)
        throw UsageError("got " + std::to_string(paths.size()) + " NWP files for " + std::to_string(expected) +
                         " datasets");
    for (const auto& p : paths) out.push_back(load_nwp(p, offset));
    return out;
}

InverterDataset load_site(const std::filesystem::path& path, int offset) {
    auto ds = load_dataset(path, offset);
    return ds;
}

}  // namespace

std::vector<StrategyKind> parse_strategy_list(const std::string& text) {
    if (text == "all") return {kAllStrategies.begin(), kAllStrategies.end()};
    std::vector<StrategyKind> out;
    for (const auto& name : split_list(text)) {
        const auto kind = strategy_from_string(name);
        if (!kind) throw UsageError("unknown strategy '" + name + "'");
        if (std::find(out.begin(), out.end(), *kind) == out.end()) out.push_back(*kind);
    }
    if (out.empty()) throw UsageError("empty strategy list");
    return out;
}

std::vector<std::string> parse_tariff_list(const std::string& text) {
    if (text == "all") return bundled_tariff_names();
    auto out = split_list(text);
    if (out.empty()) throw UsageError("empty tariff list");
    return out;
}

void apply_run_config_json(RunConfig& cfg, const std::string& json_text, const std::filesystem::path& base_dir) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw UsageError(std::string("run config: ") + e.what());
    }
    if (!doc.is_object()) throw UsageError("run config must be a JSON object");
    try {
        for (const auto& [key, v] : doc.items()) {
            if (key == "data") {
                cfg.data.clear();
                for (const auto& p : string_or_array(v, "data")) cfg.data.push_back(resolve(base_dir, p));
            } else if (key == "nwp") {
                cfg.nwp.clear();
                for (const auto& p : string_or_array(v, "nwp")) cfg.nwp.push_back(resolve(base_dir, p));
            } else if (key == "tariffs") {
                cfg.tariffs.clear();
                for (const auto& t : string_or_array(v, "tariffs")) {
                    const bool bundled = bundled_tariff_config(t).has_value() || t == "all";
                    if (t == "all") {
                        const auto all = bundled_tariff_names();
                        cfg.tariffs.insert(cfg.tariffs.end(), all.begin(), all.end());
                    } else {
                        cfg.tariffs.push_back(bundled ? t : resolve(base_dir, t).string());
                    }
                }
            } else if (key == "strategies") {
                const auto names = string_or_array(v, "strategies");
                std::string joined;
                for (const auto& n : names) joined += (joined.empty() ? "" : ",") + n;
                cfg.strategies = parse_strategy_list(joined);
            } else if (key == "battery") {
                if (!v.is_object()) throw UsageError("config key 'battery' must be an object");
                for (const auto& [bk, bv] : v.items()) {
                    const double x = bv.get<double>();
                    if (bk == "capacity_kwh") cfg.battery.capacity_kwh = x;
                    else if (bk == "soc_min_kwh") cfg.battery.soc_min_kwh = x;
                    else if (bk == "soc_max_kwh") cfg.battery.soc_max_kwh = x;
                    else if (bk == "rate_limit_kwh") cfg.battery.rate_limit_kwh = x;
                    else if (bk == "loss_factor") cfg.battery.loss_factor = x;
                    else throw UsageError("unknown battery key '" + bk + "'");
                }
            } else if (key == "limits") {
                if (!v.is_object()) throw UsageError("config key 'limits' must be an object");
                for (const auto& [lk, lv] : v.items()) {
                    if (lk == "import_kwh") cfg.limits.import_kwh = lv.get<double>();
                    else if (lk == "export_kwh") cfg.limits.export_kwh = lv.get<double>();
                    else throw UsageError("unknown limits key '" + lk + "'");
                }
            } else if (key == "out_dir") {
                cfg.out_dir = resolve(base_dir, v.get<std::string>());
            } else if (key == "seed") {
                cfg.seed = v.get<std::uint64_t>();
            } else if (key == "utc_offset_minutes") {
                cfg.utc_offset_minutes = v.get<int>();
            } else if (key == "jobs") {
                cfg.jobs = v.get<int>();
            } else if (key == "force") {
                cfg.force = v.get<bool>();
            } else if (key == "traces") {
                cfg.traces = v.get<bool>();
            } else if (key == "window") {
                const auto w = v.get<std::string>();
                if (w == "non_peak") cfg.window = OptimizeWindow::non_peak;
                else if (w == "off_peak") cfg.window = OptimizeWindow::off_peak;
                else throw UsageError("window must be non_peak or off_peak");
            } else if (key == "weighting") {
                const auto w = v.get<std::string>();
                if (w == "load") cfg.weighting = Weighting::load;
                else if (w == "unweighted") cfg.weighting = Weighting::unweighted;
                else throw UsageError("weighting must be load or unweighted");
            } else {
                throw UsageError("unknown run config key '" + key + "'");
            }
        }
    } catch (const json::type_error& e) {
        throw UsageError(std::string("run config: ") + e.what());
    }
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open run config '" + path.string() + "'");
    std::ostringstream text;
    text << in.rdbuf();
    RunConfig cfg;
    apply_run_config_json(cfg, text.str(), path.parent_path());
    return cfg;
}

std::vector<ResultRow> run_simulate(const RunConfig& cfg, std::ostream& log, MatrixResult* result_out) {
    if (cfg.data.empty()) throw UsageError("no datasets given");
    if (cfg.tariffs.empty()) throw UsageError("no tariffs given");
    if (cfg.strategies.empty()) throw UsageError("no strategies given");
    cfg.battery.validate();

    std::vector<TariffSchedule> tariffs;
    for (const auto& t : cfg.tariffs) tariffs.push_back(resolve_tariff(t));
    auto nwps = load_nwp_list(cfg.nwp, cfg.data.size(), cfg.utc_offset_minutes);

    EligibilityThresholds thresholds;
    std::vector<SiteInput> sites;
    for (std::size_t i = 0; i < cfg.data.size(); ++i) {
        auto ds = load_site(cfg.data[i], cfg.utc_offset_minutes);
        if (!cfg.force) {
            const auto rep = ds.present_count() > 0 ? eligibility(ds, thresholds) : EligibilityReport{};
            if (!rep.eligible) {
                log << "skipping " << ds.site_id() << ": not eligible (use --force to include)\n";
                continue;
            }
        }
        SiteInput site{std::move(ds), std::nullopt};
        if (!nwps.empty()) site.nwp = std::move(nwps[i]);
        sites.push_back(std::move(site));
    }
    if (sites.empty()) throw Error("no eligible datasets to simulate");

    MatrixOptions options;
    options.simulation.limits = cfg.limits;
    options.simulation.window = cfg.window;
    options.simulation.force = cfg.force;
    options.simulation.record_trace = cfg.traces;
    options.forecaster.forest.seed = cfg.seed;
    options.jobs = cfg.jobs;

    log << "simulating " << sites.size() << " site(s) x " << tariffs.size() << " tariff(s) x "
        << cfg.strategies.size() << " strateg" << (cfg.strategies.size() == 1 ? "y" : "ies") << '\n';
    const auto result = simulate_matrix(sites, tariffs, cfg.strategies, cfg.battery, options);
    const auto rows = result_rows(result);

    const auto written = write_reports(cfg.out_dir, rows, cfg.weighting);
    if (cfg.traces) {
        const auto dir = cfg.out_dir / "traces";
        std::filesystem::create_directories(dir);
        for (std::size_t s = 0; s < result.site_ids.size(); ++s) {
            for (std::size_t t = 0; t < result.tariff_names.size(); ++t) {
                for (std::size_t k = 0; k < result.strategies.size(); ++k) {
                    const auto path = dir / (result.site_ids[s] + "_" + slug(result.tariff_names[t]) + "_" +
                                             std::string(to_string(result.strategies[k])) + ".csv");
                    auto out = open_out(path);
                    write_trace(out, result.cell(s, t, k), sites[s].data.utc_offset_minutes());
                }
            }
        }
    }
    for (const auto& p : written) log << "wrote " << p.string() << '\n';
    if (result_out) *result_out = result;
    return rows;
}

DispatchSchedule run_schedule(const ScheduleRequest& request) {
    request.battery.validate();
    const auto tariff = resolve_tariff(request.tariff);
    std::ifstream in(request.forecast);
    if (!in) throw Error("cannot open forecast '" + request.forecast.string() + "'");
    const auto fc = read_forecast(in, request.utc_offset_minutes, request.forecast.string());
    const auto inst = build_instance(tariff, fc, fc.start, SocState{request.soc_kwh}, request.battery,
                                     request.limits, request.quantiles, request.horizon);
    auto schedule = solve(inst);
    if (schedule.status != ScheduleStatus::optimal) {
        std::string msg = "schedule is infeasible";
        for (const auto& d : schedule.diagnostics) msg += "\n  " + d;
        throw Error(msg);
    }
    return schedule;
}

std::optional<EvalModel> eval_model_from_string(const std::string& name) {
    if (name == "qrf") return EvalModel::qrf;
    if (name == "persist_24h") return EvalModel::persist_24h;
    if (name == "persist_1h") return EvalModel::persist_1h;
    if (name == "perfect") return EvalModel::perfect;
    if (name == "climatology") return EvalModel::climatology;
    return std::nullopt;
}

PercentileTable run_forecast_eval(const ForecastEvalRequest& request, std::vector<SiteErrors>* per_site) {
    if (request.data.empty()) throw UsageError("no datasets given");
    if (request.model == EvalModel::qrf && request.nwp.size() != request.data.size())
        throw UsageError("the qrf model needs one NWP file per dataset");
    const auto nwps = request.model == EvalModel::qrf
                          ? load_nwp_list(request.nwp, request.data.size(), request.utc_offset_minutes)
                          : std::vector<NwpTable>{};

    const auto window_hours = static_cast<std::int64_t>(request.forecaster.window.days) * 24;
    std::vector<SiteErrors> sites;
    for (std::size_t i = 0; i < request.data.size(); ++i) {
        const auto ds = load_site(request.data[i], request.utc_offset_minutes);
        const LocalHour first = ds.start().day_start() + window_hours;
        if (first + 24 > ds.end())
            throw Error("dataset '" + ds.site_id() + "' is too short: need at least " +
                        std::to_string(request.forecaster.window.days + 1) + " days of history");

        std::optional<QuantileForecaster> qrf;
        if (request.model == EvalModel::qrf) {
            auto opts = request.forecaster;
            opts.forest.seed = request.seed;
            qrf.emplace(ds, nwps[i], opts);
        }

        const double nan = std::numeric_limits<double>::quiet_NaN();
        std::vector<double> load_actual, load_pred, pv_actual, pv_pred;
        for (LocalHour t = first; t < ds.end(); ++t) {
            const auto* r = ds.present_at(t);
            if (!r) continue;
            double lp = nan;
            double pp = nan;
            switch (request.model) {
                case EvalModel::perfect:
                    lp = r->load_kwh;
                    pp = r->pv_kwh;
                    break;
                case EvalModel::persist_24h:
                case EvalModel::persist_1h: {
                    const auto* src = ds.present_at(t - (request.model == EvalModel::persist_24h ? 24 : 1));
                    if (src) {
                        lp = src->load_kwh;
                        pp = src->pv_kwh;
                    }
                    break;
                }
                case EvalModel::climatology: {
                    std::vector<double> loads, pvs;
                    for (std::int64_t d = 1; d <= request.forecaster.window.days; ++d) {
                        if (const auto* src = ds.present_at(t - 24 * d)) {
                            loads.push_back(src->load_kwh);
                            pvs.push_back(src->pv_kwh);
                        }
                    }
                    if (!loads.empty()) {
                        lp = quantile(loads, 0.5);
                        pp = quantile(pvs, 0.5);
                    }
                    break;
                }
                case EvalModel::qrf: {
                    const auto fc = qrf->forecast(t, 1);
                    if (fc.available[0]) {
                        lp = fc.load[0].q50;
                        pp = fc.pv[0].q50;
                    }
                    break;
                }
            }
            load_actual.push_back(r->load_kwh);
            load_pred.push_back(lp);
            pv_actual.push_back(r->pv_kwh);
            pv_pred.push_back(pp);
        }
        SiteErrors e;
        e.site_id = ds.site_id();
        e.load = error_report(load_actual, load_pred);
        e.pv = error_report(pv_actual, pv_pred);
        sites.push_back(std::move(e));
    }
    if (per_site) *per_site = sites;
    return percentile_table(sites);
}

std::vector<std::filesystem::path> run_report(const ReportRequest& request) {
    std::ifstream in(request.results);
    if (!in) throw Error("cannot open results '" + request.results.string() + "'");
    const auto rows = read_results(in, request.results.string());
    if (rows.empty()) throw Error(request.results.string() + ": no result rows");
    std::filesystem::create_directories(request.out_dir);
    std::vector<std::filesystem::path> written;
    {
        const auto path = request.out_dir / "costs.csv";
        auto out = open_out(path);
        write_cost_table(out, cost_table(rows, request.weighting));
        written.push_back(path);
    }
    {
        const auto path = request.out_dir / "savecounts.csv";
        auto out = open_out(path);
        write_save_count_table(out, save_count_table(rows));
        written.push_back(path);
    }
    const auto plots = write_plot_data(request.out_dir, rows);
    written.insert(written.end(), plots.begin(), plots.end());
    return written;
}

void write_fixture(const std::filesystem::path& dir, const FixtureOptions& options) {
    const auto fx = make_fixture(options);
    std::filesystem::create_directories(dir);
    {
        auto out = open_out(dir / (options.site_id + ".csv"));
        write_dataset(out, fx.data);
    }
    {
        auto out = open_out(dir / (options.site_id + "_nwp.csv"));
        write_nwp(out, fx.nwp, options.utc_offset_minutes);
    }
}

}  // namespace solarsched::app
