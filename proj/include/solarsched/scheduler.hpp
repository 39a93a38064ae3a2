#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "solarsched/battery.hpp"
#include "solarsched/forecast_set.hpp"
#include "solarsched/local_time.hpp"
#include "solarsched/tariff.hpp"

namespace solarsched {

struct GridLimits {
    double import_kwh = 15.0;
    double export_kwh = 15.0;
};

// Which quantile of each forecast series feeds the program.
struct QuantileSelection {
    QuantileLevel load = QuantileLevel::q50;
    QuantileLevel pv = QuantileLevel::q50;
};

// Throughput penalty (c/kWh) applied to every unit of charge and discharge.
inline constexpr double kThroughputPenalty = 1e-6;

struct LPInstance {
    LocalHour start;
    std::vector<double> import_price;  // c/kWh
    std::vector<double> export_price;  // c/kWh
    std::vector<double> load_kwh;
    std::vector<double> pv_kwh;
    double soc0_kwh = 0.0;
    BatteryConfig battery;
    GridLimits limits;
    double throughput_penalty = kThroughputPenalty;

    std::size_t horizon() const { return load_kwh.size(); }
    void validate() const;
};

enum class ScheduleStatus { optimal, infeasible };

struct DispatchSchedule {
    ScheduleStatus status = ScheduleStatus::infeasible;
    LocalHour start;
    std::vector<double> import_kwh;
    std::vector<double> export_kwh;
    std::vector<double> discharge_kwh;
    std::vector<double> charge_kwh;
    std::vector<double> soc_kwh;
    // Sum of t*I - f*E, excluding the throughput penalty.
    double objective_c = 0.0;
    // Human-readable constraint names when infeasible.
    std::vector<std::string> diagnostics;

    std::size_t horizon() const { return import_kwh.size(); }
    double battery_flow(std::size_t h) const { return discharge_kwh[h] - charge_kwh[h]; }
};

// Tariff prices for each hour from `start`, forecasts from the chosen
// quantiles. Uses the first `horizon` hours of the forecast.
LPInstance build_instance(const TariffSchedule& tariff, const ForecastSet& forecast, LocalHour start,
                          SocState soc0, const BatteryConfig& battery, const GridLimits& limits = {},
                          QuantileSelection quantiles = {}, std::size_t horizon = 24);

DispatchSchedule solve(const LPInstance& instance);

// |B| below this is treated as "no command".
inline constexpr double kCommandEpsilon = 1e-6;

BatteryCommand command_for_flow(double battery_flow_kwh);
// Command for the first hour of an optimal schedule. Throws on infeasible.
BatteryCommand first_command(const DispatchSchedule& schedule);

std::string describe(const BatteryCommand& cmd);

// CSV `hour,import_kwh,export_kwh,discharge_kwh,charge_kwh,soc_kwh,command`.
void write_schedule(std::ostream& out, const DispatchSchedule& schedule, int utc_offset_minutes);

}  // namespace solarsched
