#pragma once

#include "solarsched/battery.hpp"

namespace solarsched {

// Energy flows through the inverter during one hour.
struct HourlyFlows {
    double import_kwh = 0.0;
    double export_kwh = 0.0;
    double discharge_kwh = 0.0;
    double charge_kwh = 0.0;
    SocState soc_end;
};

// Default inverter behaviour: load is served by PV, then battery, then grid;
// surplus PV goes to the battery, then the grid. Never charges from the grid
// and never exports battery energy.
HourlyFlows automatic_step(const BatteryConfig& cfg, SocState prev, double load_kwh, double pv_kwh);

// Executes a fixed battery flow and settles the grid from the balance
// load - pv = (q - r) + (import - export).
HourlyFlows execute_flow(const BatteryConfig& cfg, SocState prev, double load_kwh, double pv_kwh,
                         BatteryFlow flow);

}  // namespace solarsched
