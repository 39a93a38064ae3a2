#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "solarsched/automatic.hpp"
#include "solarsched/battery.hpp"
#include "solarsched/features.hpp"
#include "solarsched/forecast.hpp"
#include "solarsched/scheduler.hpp"
#include "solarsched/tariff.hpp"
#include "solarsched/timeseries.hpp"

namespace solarsched {

// The ten evaluated dispatch strategies, in reporting order.
enum class StrategyKind {
    no_solar,
    no_battery,
    automatic,
    pv_persist,
    pv_load_persist,
    q50_50,
    load_persist,
    q60_40,
    persist_1h,
    perfect,
};

inline constexpr std::array<StrategyKind, 10> kAllStrategies{
    StrategyKind::no_solar,    StrategyKind::no_battery,      StrategyKind::automatic,
    StrategyKind::pv_persist,  StrategyKind::pv_load_persist, StrategyKind::q50_50,
    StrategyKind::load_persist, StrategyKind::q60_40,         StrategyKind::persist_1h,
    StrategyKind::perfect,
};

std::string_view to_string(StrategyKind kind);
std::optional<StrategyKind> strategy_from_string(std::string_view name);
// Column heading used in the cost tables.
std::string_view display_name(StrategyKind kind);
// True for strategies that re-solve the program from a forecast.
bool is_optimised(StrategyKind kind);
bool needs_quantile_model(StrategyKind kind);

// Hours in which forecast strategies may execute LP commands.
enum class OptimizeWindow {
    non_peak,  // any weekday hour outside the peak period
    off_peak,  // weekday off-peak hours only (stops before shoulder)
};

struct SimulationOptions {
    GridLimits limits;
    OptimizeWindow window = OptimizeWindow::non_peak;
    std::size_t horizon = 24;
    bool record_trace = false;
    // Simulate even when the dataset fails the eligibility filters.
    bool force = false;
    EligibilityThresholds thresholds;
};

enum class HourMode { gap, grid_only, net_metered, automatic, scheduled, fallback };
std::string_view to_string(HourMode mode);

struct TraceRow {
    LocalHour hour;
    HourMode mode = HourMode::gap;
    double load_kwh = 0.0;
    double pv_kwh = 0.0;
    double import_kwh = 0.0;
    double export_kwh = 0.0;
    double discharge_kwh = 0.0;
    double charge_kwh = 0.0;
    double soc_kwh = 0.0;
    double cost_c = 0.0;
};

struct CostReport {
    double total_cost_c = 0.0;
    double total_load_kwh = 0.0;
    // Zero when no load was simulated.
    double cost_c_per_kwh = 0.0;
    std::size_t hours_total = 0;
    std::size_t hours_simulated = 0;
    // Hours run in automatic mode because no forecast or schedule was usable
    // (gap hours included).
    std::size_t hours_automatic_fallback = 0;
    std::size_t lp_solves = 0;
    // Largest |load - pv - (q - r) - (i - e)| over simulated hours.
    double max_balance_residual_kwh = 0.0;
    double min_soc_kwh = 0.0;
    double max_soc_kwh = 0.0;
    std::vector<TraceRow> trace;
};

// t*I - f*E for one hour, prices in c/kWh.
double hour_cost(double import_price, double export_price, const HourlyFlows& flows);

// Replays the dataset hour by hour under one strategy, starting at soc_min.
// Quantile strategies need `forecaster`. Throws on a timezone mismatch or
// an ineligible dataset (unless options.force).
CostReport simulate(const InverterDataset& ds, const TariffSchedule& tariff, const BatteryConfig& battery,
                    StrategyKind strategy, const SimulationOptions& options = {},
                    const QuantileForecaster* forecaster = nullptr);

struct SiteInput {
    InverterDataset data;
    std::optional<NwpTable> nwp;
};

// Cells indexed [site][tariff][strategy].
struct MatrixResult {
    std::vector<std::string> site_ids;
    std::vector<EligibilityReport> eligibility;
    std::vector<std::string> tariff_names;
    std::vector<double> tariff_index;
    std::vector<StrategyKind> strategies;
    std::vector<CostReport> cells;

    const CostReport& cell(std::size_t site, std::size_t tariff, std::size_t strategy) const;
};

struct MatrixOptions {
    SimulationOptions simulation;
    QuantileForecasterOptions forecaster;
    // Upper bound on OpenMP threads for the cell loop; 0 keeps the default.
    int jobs = 0;
};

// Builds one quantile forecaster per site when a quantile strategy is
// requested, then runs every (site, tariff, strategy) cell with OpenMP.
MatrixResult simulate_matrix(std::span<const SiteInput> sites, std::span<const TariffSchedule> tariffs,
                             std::span<const StrategyKind> strategies, const BatteryConfig& battery,
                             const MatrixOptions& options = {});
// Single-threaded reference; produces identical results.
MatrixResult simulate_matrix_serial(std::span<const SiteInput> sites, std::span<const TariffSchedule> tariffs,
                                    std::span<const StrategyKind> strategies, const BatteryConfig& battery,
                                    const MatrixOptions& options = {});

}  // namespace solarsched
