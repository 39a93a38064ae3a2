#include "solarsched/automatic.hpp"

#include <algorithm>

namespace solarsched {

HourlyFlows automatic_step(const BatteryConfig& cfg, SocState prev, double load_kwh, double pv_kwh) {
    HourlyFlows f;
    if (load_kwh > pv_kwh) {
        const double deficit = load_kwh - pv_kwh;
        f.discharge_kwh = std::min(deficit, max_discharge(cfg, prev));
        f.import_kwh = deficit - f.discharge_kwh;
    } else if (pv_kwh > load_kwh) {
        const double surplus = pv_kwh - load_kwh;
        f.charge_kwh = std::min(surplus, max_charge(cfg, prev));
        f.export_kwh = surplus - f.charge_kwh;
    }
    f.soc_end = soc_transition(cfg, prev, f.discharge_kwh, f.charge_kwh);
    return f;
}

HourlyFlows execute_flow(const BatteryConfig& cfg, SocState prev, double load_kwh, double pv_kwh,
                         BatteryFlow flow) {
    HourlyFlows f;
    f.discharge_kwh = flow.discharge_kwh;
    f.charge_kwh = flow.charge_kwh;
    f.soc_end = soc_transition(cfg, prev, flow.discharge_kwh, flow.charge_kwh);
    const double net = load_kwh - pv_kwh - (flow.discharge_kwh - flow.charge_kwh);
    f.import_kwh = std::max(net, 0.0);
    f.export_kwh = std::max(-net, 0.0);
    return f;
}

}  // namespace solarsched
