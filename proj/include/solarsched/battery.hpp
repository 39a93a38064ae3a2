#pragma once

namespace solarsched {

// Physical limits of the battery/inverter pair. All energies in kWh.
struct BatteryConfig {
    double capacity_kwh = 6.5;
    double soc_min_kwh = 1.3;
    double soc_max_kwh = 6.5;
    // Maximum charge or discharge energy per hour.
    double rate_limit_kwh = 4.6;
    // Symmetric per-direction loss used by the SoC transition.
    double loss_factor = 0.08;

    // Throws solarsched::Error when the invariants do not hold.
    void validate() const;
};

struct SocState {
    double soc_kwh = 0.0;
};

enum class CommandMode { automatic, charge, discharge };

struct BatteryCommand {
    CommandMode mode = CommandMode::automatic;
    double rate_kwh = 0.0;
};

struct BatteryFlow {
    double discharge_kwh = 0.0;
    double charge_kwh = 0.0;
};

// Absolute slack tolerated on SoC bounds before a transition is rejected.
inline constexpr double kSocTolerance = 1e-9;

// SoC after delivering `discharge_kwh` and storing `charge_kwh` in one hour:
// s - q(1+loss) + r(1-loss). Throws if the result leaves [soc_min, soc_max]
// or the flows break the rate limit.
SocState soc_transition(const BatteryConfig& cfg, SocState prev, double discharge_kwh, double charge_kwh);

// Largest flow no greater than the commanded rate that keeps SoC in bounds.
// Automatic commands clamp to (0, 0); the caller handles automatic dispatch.
BatteryFlow clamp_command(const BatteryConfig& cfg, SocState prev, const BatteryCommand& cmd);

// Deliverable energy ceilings from the current state.
double max_discharge(const BatteryConfig& cfg, SocState prev);
double max_charge(const BatteryConfig& cfg, SocState prev);

}  // namespace solarsched
