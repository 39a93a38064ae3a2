#include "solarsched/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "csv_util.hpp"
#include "solarsched/error.hpp"
#include "solarsched/simplex.hpp"

namespace solarsched {

void LPInstance::validate() const {
    const std::size_t h = horizon();
    if (h == 0) throw Error("LP horizon is empty");
    if (import_price.size() != h || export_price.size() != h || pv_kwh.size() != h)
        throw Error("LP vectors must all have the horizon length");
    const auto non_negative = [](const std::vector<double>& v) {
        return std::all_of(v.begin(), v.end(), [](double x) { return x >= 0.0; });
    };
    if (!non_negative(import_price) || !non_negative(export_price)) throw Error("LP prices must be non-negative");
    if (!non_negative(load_kwh) || !non_negative(pv_kwh)) throw Error("LP forecasts must be non-negative");
    battery.validate();
    if (soc0_kwh < battery.soc_min_kwh - kSocTolerance || soc0_kwh > battery.soc_max_kwh + kSocTolerance)
        throw Error("initial SoC " + csv::format(soc0_kwh) + " kWh outside battery bounds");
    if (limits.import_kwh < 0.0 || limits.export_kwh < 0.0) throw Error("grid limits must be non-negative");
}

LPInstance build_instance(const TariffSchedule& tariff, const ForecastSet& forecast, LocalHour start, SocState soc0,
                          const BatteryConfig& battery, const GridLimits& limits, QuantileSelection quantiles,
                          std::size_t horizon) {
    if (horizon == 0) throw Error("LP horizon must be at least one hour");
    const std::int64_t offset = start - forecast.start;
    if (offset < 0 || static_cast<std::size_t>(offset) + horizon > forecast.horizon())
        throw Error("forecast horizon too short: need " + std::to_string(horizon) + " hours from start, have " +
                    std::to_string(std::max<std::int64_t>(0, static_cast<std::int64_t>(forecast.horizon()) - offset)));

    LPInstance inst;
    inst.start = start;
    inst.soc0_kwh = soc0.soc_kwh;
    inst.battery = battery;
    inst.limits = limits;
    for (std::size_t h = 0; h < horizon; ++h) {
        const auto rates = tariff.rates_at(start + static_cast<std::int64_t>(h));
        const std::size_t k = static_cast<std::size_t>(offset) + h;
        inst.import_price.push_back(rates.import_rate.cents());
        inst.export_price.push_back(rates.export_rate.cents());
        inst.load_kwh.push_back(std::max(0.0, select(forecast.load[k], quantiles.load)));
        inst.pv_kwh.push_back(std::max(0.0, select(forecast.pv[k], quantiles.pv)));
    }
    return inst;
}

namespace {

struct HourColumns {
    std::size_t imp, exp, dis, chg, flow, soc;
};

}  // namespace

DispatchSchedule solve(const LPInstance& inst) {
    inst.validate();
    const std::size_t horizon = inst.horizon();
    const auto& bat = inst.battery;

    lp::Program prog;
    std::vector<HourColumns> cols(horizon);
    for (std::size_t h = 0; h < horizon; ++h) {
        auto& c = cols[h];
        c.imp = prog.add_variable(inst.import_price[h], 0.0, inst.limits.import_kwh);
        c.exp = prog.add_variable(-inst.export_price[h], 0.0, inst.limits.export_kwh);
        c.dis = prog.add_variable(inst.throughput_penalty, 0.0, lp::kInfinity);
        c.chg = prog.add_variable(inst.throughput_penalty, 0.0, lp::kInfinity);
        c.flow = prog.add_variable(0.0, -bat.rate_limit_kwh, bat.rate_limit_kwh);
        c.soc = prog.add_variable(0.0, bat.soc_min_kwh, bat.soc_max_kwh);
    }
    for (std::size_t h = 0; h < horizon; ++h) {
        const auto& c = cols[h];
        const std::string tag = "[h=" + std::to_string(h) + "]";
        // Load - PV = B + I - E, with B = Q - R.
        prog.add_row({{c.dis, 1.0}, {c.chg, -1.0}, {c.imp, 1.0}, {c.exp, -1.0}},
                     inst.load_kwh[h] - inst.pv_kwh[h], "balance" + tag);
        prog.add_row({{c.dis, 1.0}, {c.chg, -1.0}, {c.flow, -1.0}}, 0.0, "rate" + tag);
        // S_h = S_{h-1} - Q_h (1 + loss) + R_h (1 - loss)
        std::vector<std::pair<std::size_t, double>> soc_terms{
            {c.soc, 1.0}, {c.dis, 1.0 + bat.loss_factor}, {c.chg, -(1.0 - bat.loss_factor)}};
        double rhs = 0.0;
        if (h == 0) rhs = inst.soc0_kwh;
        else soc_terms.emplace_back(cols[h - 1].soc, -1.0);
        prog.add_row(soc_terms, rhs, "soc" + tag);
    }

    const lp::Solution sol = lp::solve(prog);

    DispatchSchedule out;
    out.start = inst.start;
    if (sol.status != lp::Status::optimal) {
        out.status = ScheduleStatus::infeasible;
        for (const auto r : sol.violated_rows) out.diagnostics.push_back("constraint " + prog.row_names[r] + " violated");
        for (std::size_t h = 0; h < horizon; ++h) {
            const double net = inst.load_kwh[h] - inst.pv_kwh[h];
            if (net > inst.limits.import_kwh + bat.rate_limit_kwh)
                out.diagnostics.push_back("hour " + std::to_string(h) + ": net load " + csv::format(net) +
                                          " kWh exceeds import limit + battery rate");
            if (-net > inst.limits.export_kwh + bat.rate_limit_kwh)
                out.diagnostics.push_back("hour " + std::to_string(h) + ": net generation " + csv::format(-net) +
                                          " kWh exceeds export limit + battery rate");
        }
        if (sol.status == lp::Status::iteration_limit) out.diagnostics.push_back("simplex iteration limit reached");
        if (out.diagnostics.empty()) out.diagnostics.push_back("no feasible schedule within battery and grid limits");
        return out;
    }

    out.status = ScheduleStatus::optimal;
    out.import_kwh.resize(horizon);
    out.export_kwh.resize(horizon);
    out.discharge_kwh.resize(horizon);
    out.charge_kwh.resize(horizon);
    out.soc_kwh.resize(horizon);
    for (std::size_t h = 0; h < horizon; ++h) {
        const auto& c = cols[h];
        out.import_kwh[h] = sol.x[c.imp];
        out.export_kwh[h] = sol.x[c.exp];
        out.discharge_kwh[h] = sol.x[c.dis];
        out.charge_kwh[h] = sol.x[c.chg];
        out.soc_kwh[h] = sol.x[c.soc];
        out.objective_c += inst.import_price[h] * out.import_kwh[h] - inst.export_price[h] * out.export_kwh[h];
    }
    return out;
}

BatteryCommand command_for_flow(double battery_flow_kwh) {
    if (battery_flow_kwh > kCommandEpsilon) return {CommandMode::discharge, battery_flow_kwh};
    if (battery_flow_kwh < -kCommandEpsilon) return {CommandMode::charge, -battery_flow_kwh};
    return {CommandMode::automatic, 0.0};
}

BatteryCommand first_command(const DispatchSchedule& schedule) {
    if (schedule.status != ScheduleStatus::optimal || schedule.horizon() == 0)
        throw Error("no command available from an infeasible schedule");
    return command_for_flow(schedule.battery_flow(0));
}

std::string describe(const BatteryCommand& cmd) {
    switch (cmd.mode) {
        case CommandMode::charge: return "charge@" + csv::fixed(cmd.rate_kwh, 6);
        case CommandMode::discharge: return "discharge@" + csv::fixed(cmd.rate_kwh, 6);
        case CommandMode::automatic: break;
    }
    return "automatic";
}

void write_schedule(std::ostream& out, const DispatchSchedule& s, int utc_offset_minutes) {
    out << "hour,import_kwh,export_kwh,discharge_kwh,charge_kwh,soc_kwh,command\n";
    for (std::size_t h = 0; h < s.horizon(); ++h) {
        out << (s.start + static_cast<std::int64_t>(h)).to_iso(utc_offset_minutes) << ','
            << csv::fixed(s.import_kwh[h], 6) << ',' << csv::fixed(s.export_kwh[h], 6) << ','
            << csv::fixed(s.discharge_kwh[h], 6) << ',' << csv::fixed(s.charge_kwh[h], 6) << ','
            << csv::fixed(s.soc_kwh[h], 6) << ',' << describe(command_for_flow(s.battery_flow(h))) << '\n';
    }
}

}  // namespace solarsched
