#include "solarsched/battery.hpp"

#include <algorithm>
#include <string>

#include "csv_util.hpp"
#include "solarsched/error.hpp"

namespace solarsched {

void BatteryConfig::validate() const {
    if (!(capacity_kwh > 0.0)) throw Error("battery capacity must be positive");
    if (!(soc_min_kwh >= 0.0 && soc_min_kwh < soc_max_kwh && soc_max_kwh <= capacity_kwh))
        throw Error("battery bounds must satisfy 0 <= soc_min < soc_max <= capacity (got soc_min=" +
                    csv::format(soc_min_kwh) + ", soc_max=" + csv::format(soc_max_kwh) +
                    ", capacity=" + csv::format(capacity_kwh) + ")");
    if (!(loss_factor >= 0.0 && loss_factor < 1.0)) throw Error("loss_factor must be in [0, 1)");
    if (!(rate_limit_kwh > 0.0)) throw Error("rate limit must be positive");
}

double max_discharge(const BatteryConfig& cfg, SocState prev) {
    const double room = std::max(0.0, prev.soc_kwh - cfg.soc_min_kwh);
    return std::min(cfg.rate_limit_kwh, room / (1.0 + cfg.loss_factor));
}

double max_charge(const BatteryConfig& cfg, SocState prev) {
    const double room = std::max(0.0, cfg.soc_max_kwh - prev.soc_kwh);
    return std::min(cfg.rate_limit_kwh, room / (1.0 - cfg.loss_factor));
}

SocState soc_transition(const BatteryConfig& cfg, SocState prev, double discharge_kwh, double charge_kwh) {
    if (discharge_kwh < 0.0 || charge_kwh < 0.0) throw Error("battery flows must be non-negative");
    if (discharge_kwh + charge_kwh > cfg.rate_limit_kwh + kSocTolerance)
        throw Error("battery flow " + csv::format(discharge_kwh + charge_kwh) + " kWh exceeds rate limit " +
                    csv::format(cfg.rate_limit_kwh) + " kWh/h");
    double next = prev.soc_kwh - discharge_kwh * (1.0 + cfg.loss_factor) + charge_kwh * (1.0 - cfg.loss_factor);
    if (next < cfg.soc_min_kwh - kSocTolerance || next > cfg.soc_max_kwh + kSocTolerance)
        throw Error("state of charge " + csv::format(next) + " kWh outside [" + csv::format(cfg.soc_min_kwh) + ", " +
                    csv::format(cfg.soc_max_kwh) + "]");
    next = std::clamp(next, cfg.soc_min_kwh, cfg.soc_max_kwh);
    return {next};
}

BatteryFlow clamp_command(const BatteryConfig& cfg, SocState prev, const BatteryCommand& cmd) {
    const double rate = std::clamp(cmd.rate_kwh, 0.0, cfg.rate_limit_kwh);
    switch (cmd.mode) {
        case CommandMode::charge: return {0.0, std::min(rate, max_charge(cfg, prev))};
        case CommandMode::discharge: return {std::min(rate, max_discharge(cfg, prev)), 0.0};
        case CommandMode::automatic: break;
    }
    return {};
}

}  // namespace solarsched
