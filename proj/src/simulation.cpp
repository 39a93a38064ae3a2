#include "solarsched/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <memory>

#include "csv_util.hpp"
#include "solarsched/error.hpp"

namespace solarsched {

namespace {

struct StrategyInfo {
    StrategyKind kind;
    std::string_view name;
    std::string_view display;
};

constexpr StrategyInfo kStrategyInfo[] = {
    {StrategyKind::no_solar, "no_solar", "No Solar"},
    {StrategyKind::no_battery, "no_battery", "No Battery"},
    {StrategyKind::automatic, "automatic", "Automatic"},
    {StrategyKind::pv_persist, "pv_persist", "PV Persist"},
    {StrategyKind::pv_load_persist, "pv_load_persist", "PV and Load Persisted"},
    {StrategyKind::q50_50, "q50_50", "50-50"},
    {StrategyKind::load_persist, "load_persist", "Load Persisted"},
    {StrategyKind::q60_40, "q60_40", "60-40"},
    {StrategyKind::persist_1h, "persist_1h", "Persist last hour"},
    {StrategyKind::perfect, "perfect", "Perfect Forecast"},
};

const StrategyInfo& info(StrategyKind kind) { return kStrategyInfo[static_cast<int>(kind)]; }

QuantileSelection selection_for(StrategyKind kind) {
    if (kind == StrategyKind::q60_40) return {QuantileLevel::q60, QuantileLevel::q40};
    return {};
}

ForecastSet forecast_for(StrategyKind kind, const InverterDataset& ds, LocalHour t, std::size_t horizon,
                         const QuantileForecaster* forecaster) {
    switch (kind) {
        case StrategyKind::pv_persist: return persistence_24h(ds, t, horizon, PersistSeries::pv);
        case StrategyKind::pv_load_persist: return persistence_24h(ds, t, horizon, PersistSeries::both);
        case StrategyKind::load_persist: return persistence_24h(ds, t, horizon, PersistSeries::load);
        case StrategyKind::persist_1h: return persistence_1h(ds, t, horizon);
        case StrategyKind::q50_50:
        case StrategyKind::q60_40: return forecaster->forecast(t, horizon);
        default: break;
    }
    return perfect(ds, t, horizon);
}

bool in_optimise_window(const TariffSchedule& tariff, LocalHour t, OptimizeWindow window) {
    if (t.is_weekend()) return false;
    const Period p = tariff.period_at(t.weekday(), t.hour_of_day());
    return window == OptimizeWindow::non_peak ? p != Period::peak : p == Period::off_peak;
}

}  // namespace

std::string_view to_string(StrategyKind kind) { return info(kind).name; }
std::string_view display_name(StrategyKind kind) { return info(kind).display; }

std::optional<StrategyKind> strategy_from_string(std::string_view name) {
    for (const auto& s : kStrategyInfo) {
        if (s.name == name) return s.kind;
    }
    return std::nullopt;
}

bool is_optimised(StrategyKind kind) {
    return kind != StrategyKind::no_solar && kind != StrategyKind::no_battery && kind != StrategyKind::automatic;
}

bool needs_quantile_model(StrategyKind kind) { return kind == StrategyKind::q50_50 || kind == StrategyKind::q60_40; }

std::string_view to_string(HourMode mode) {
    switch (mode) {
        case HourMode::gap: return "gap";
        case HourMode::grid_only: return "grid_only";
        case HourMode::net_metered: return "net_metered";
        case HourMode::automatic: return "automatic";
        case HourMode::scheduled: return "scheduled";
        case HourMode::fallback: return "fallback";
    }
    return "?";
}

double hour_cost(double import_price, double export_price, const HourlyFlows& flows) {
    return import_price * flows.import_kwh - export_price * flows.export_kwh;
}

CostReport simulate(const InverterDataset& ds, const TariffSchedule& tariff, const BatteryConfig& battery,
                    StrategyKind strategy, const SimulationOptions& options, const QuantileForecaster* forecaster) {
    battery.validate();
    if (options.horizon == 0) throw Error("simulation horizon must be positive");
    if (tariff.utc_offset_minutes() && *tariff.utc_offset_minutes() != ds.utc_offset_minutes())
        throw Error("dataset '" + ds.site_id() + "' is at UTC offset " + std::to_string(ds.utc_offset_minutes()) +
                    " min but tariff '" + tariff.name() + "' is defined for " +
                    std::to_string(*tariff.utc_offset_minutes()) + " min");
    if (!options.force) {
        const auto rep = eligibility(ds, options.thresholds);
        if (!rep.eligible)
            throw Error("dataset '" + ds.site_id() + "' is not eligible for optimisation (mean load " +
                        csv::fixed(rep.mean_load_w, 1) + " W, mean PV " + csv::fixed(rep.mean_pv_w, 1) +
                        " W, completeness " + csv::fixed(rep.completeness, 3) + ", PV/load " +
                        csv::fixed(rep.pv_load_ratio, 3) + ")");
    }
    if (needs_quantile_model(strategy) && forecaster == nullptr)
        throw Error("strategy " + std::string(to_string(strategy)) + " needs a quantile forecaster");

    CostReport rep;
    rep.hours_total = ds.size();
    SocState soc{battery.soc_min_kwh};
    rep.min_soc_kwh = soc.soc_kwh;
    rep.max_soc_kwh = soc.soc_kwh;
    const auto records = ds.records();

    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& rec = records[i];
        const LocalHour t = rec.timestamp;
        const auto rates = tariff.rates_at(t);
        const double tp = rates.import_rate.cents();
        const double fp = rates.export_rate.cents();

        TraceRow row;
        row.hour = t;
        if (!rec.present) {
            ++rep.hours_automatic_fallback;
            row.soc_kwh = soc.soc_kwh;
            if (options.record_trace) rep.trace.push_back(row);
            continue;
        }

        HourlyFlows flows;
        flows.soc_end = soc;
        double pv_seen = rec.pv_kwh;
        switch (strategy) {
            case StrategyKind::no_solar:
                row.mode = HourMode::grid_only;
                pv_seen = 0.0;
                flows.import_kwh = rec.load_kwh;
                break;
            case StrategyKind::no_battery: {
                row.mode = HourMode::net_metered;
                const double net = rec.load_kwh - rec.pv_kwh;
                flows.import_kwh = std::max(net, 0.0);
                flows.export_kwh = std::max(-net, 0.0);
                break;
            }
            case StrategyKind::automatic:
                row.mode = HourMode::automatic;
                flows = automatic_step(battery, soc, rec.load_kwh, rec.pv_kwh);
                break;
            default: {
                if (!in_optimise_window(tariff, t, options.window)) {
                    row.mode = HourMode::automatic;
                    flows = automatic_step(battery, soc, rec.load_kwh, rec.pv_kwh);
                    break;
                }
                const std::size_t horizon = std::min(options.horizon, records.size() - i);
                const auto fc = forecast_for(strategy, ds, t, horizon, forecaster);
                std::optional<BatteryCommand> cmd;
                if (fc.available[0]) {
                    const auto inst = build_instance(tariff, fc, t, soc, battery, options.limits,
                                                     selection_for(strategy), horizon);
                    const auto sched = solve(inst);
                    ++rep.lp_solves;
                    if (sched.status == ScheduleStatus::optimal) cmd = first_command(sched);
                }
                if (!cmd) {
                    row.mode = HourMode::fallback;
                    ++rep.hours_automatic_fallback;
                    flows = automatic_step(battery, soc, rec.load_kwh, rec.pv_kwh);
                } else if (cmd->mode == CommandMode::automatic) {
                    row.mode = HourMode::scheduled;
                    flows = automatic_step(battery, soc, rec.load_kwh, rec.pv_kwh);
                } else {
                    row.mode = HourMode::scheduled;
                    flows = execute_flow(battery, soc, rec.load_kwh, rec.pv_kwh, clamp_command(battery, soc, *cmd));
                }
                break;
            }
        }

        const double cost = hour_cost(tp, fp, flows);
        const double residual = std::abs(rec.load_kwh - pv_seen - (flows.discharge_kwh - flows.charge_kwh) -
                                         (flows.import_kwh - flows.export_kwh));
        rep.max_balance_residual_kwh = std::max(rep.max_balance_residual_kwh, residual);
        rep.total_cost_c += cost;
        rep.total_load_kwh += rec.load_kwh;
        ++rep.hours_simulated;
        soc = flows.soc_end;
        rep.min_soc_kwh = std::min(rep.min_soc_kwh, soc.soc_kwh);
        rep.max_soc_kwh = std::max(rep.max_soc_kwh, soc.soc_kwh);

        if (options.record_trace) {
            row.load_kwh = rec.load_kwh;
            row.pv_kwh = pv_seen;
            row.import_kwh = flows.import_kwh;
            row.export_kwh = flows.export_kwh;
            row.discharge_kwh = flows.discharge_kwh;
            row.charge_kwh = flows.charge_kwh;
            row.soc_kwh = soc.soc_kwh;
            row.cost_c = cost;
            rep.trace.push_back(row);
        }
    }
    rep.cost_c_per_kwh = rep.total_load_kwh > 0.0 ? rep.total_cost_c / rep.total_load_kwh : 0.0;
    return rep;
}

const CostReport& MatrixResult::cell(std::size_t site, std::size_t tariff, std::size_t strategy) const {
    return cells.at((site * tariff_names.size() + tariff) * strategies.size() + strategy);
}

namespace {

MatrixResult run_matrix(std::span<const SiteInput> sites, std::span<const TariffSchedule> tariffs,
                        std::span<const StrategyKind> strategies, const BatteryConfig& battery,
                        const MatrixOptions& options, bool parallel) {
    if (sites.empty() || tariffs.empty() || strategies.empty())
        throw Error("simulation matrix needs at least one site, tariff and strategy");

    MatrixResult out;
    out.strategies.assign(strategies.begin(), strategies.end());
    for (const auto& t : tariffs) {
        out.tariff_names.push_back(t.name());
        out.tariff_index.push_back(t.price_ratio_index());
    }
    const bool want_qrf = std::any_of(strategies.begin(), strategies.end(), needs_quantile_model);

    std::vector<std::unique_ptr<QuantileForecaster>> forecasters(sites.size());
    for (std::size_t s = 0; s < sites.size(); ++s) {
        const auto& site = sites[s];
        out.site_ids.push_back(site.data.site_id());
        EligibilityReport rep;
        if (site.data.present_count() > 0) rep = eligibility(site.data, options.simulation.thresholds);
        out.eligibility.push_back(rep);
        if (want_qrf) {
            if (!site.nwp)
                throw Error("site '" + site.data.site_id() + "': quantile strategies need an NWP extract");
            forecasters[s] = std::make_unique<QuantileForecaster>(site.data, *site.nwp, options.forecaster);
        }
    }

    const std::size_t nt = tariffs.size();
    const std::size_t nk = strategies.size();
    const std::size_t total = sites.size() * nt * nk;
    out.cells.resize(total);
    std::vector<std::exception_ptr> errors(total);

    const auto run_cell = [&](std::size_t c) {
        const std::size_t s = c / (nt * nk);
        const std::size_t t = (c / nk) % nt;
        const std::size_t k = c % nk;
        try {
            out.cells[c] = simulate(sites[s].data, tariffs[t], battery, strategies[k], options.simulation,
                                    forecasters[s].get());
        } catch (...) {
            errors[c] = std::current_exception();
        }
    };

    if (parallel) {
        const int threads = options.jobs > 0 ? options.jobs : 0;
        const auto n = static_cast<std::int64_t>(total);
        if (threads > 0) {
#pragma omp parallel for schedule(dynamic) num_threads(threads)
            for (std::int64_t c = 0; c < n; ++c) run_cell(static_cast<std::size_t>(c));
        } else {
#pragma omp parallel for schedule(dynamic)
            for (std::int64_t c = 0; c < n; ++c) run_cell(static_cast<std::size_t>(c));
        }
    } else {
        for (std::size_t c = 0; c < total; ++c) run_cell(c);
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return out;
}

}  // namespace

MatrixResult simulate_matrix(std::span<const SiteInput> sites, std::span<const TariffSchedule> tariffs,
                             std::span<const StrategyKind> strategies, const BatteryConfig& battery,
                             const MatrixOptions& options) {
    return run_matrix(sites, tariffs, strategies, battery, options, true);
}

MatrixResult simulate_matrix_serial(std::span<const SiteInput> sites, std::span<const TariffSchedule> tariffs,
                                    std::span<const StrategyKind> strategies, const BatteryConfig& battery,
                                    const MatrixOptions& options) {
    return run_matrix(sites, tariffs, strategies, battery, options, false);
}

}  // namespace solarsched
