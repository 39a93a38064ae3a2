#pragma once

#include <chrono>
#include <cstdint>
#include <string>

#include "solarsched/features.hpp"
#include "solarsched/timeseries.hpp"

namespace solarsched {

struct FixtureOptions {
    std::string site_id = "synthetic";
    std::chrono::year_month_day start{std::chrono::year{2018}, std::chrono::July, std::chrono::day{2}};
    int days = 90;
    int utc_offset_minutes = 600;
    // Long-run sum(pv)/sum(load) after scaling.
    double pv_load_ratio = 0.8;
    double mean_load_kwh = 0.65;
    std::uint64_t seed = 1;
    // Values are rounded to this resolution (kWh) before the ratio is fixed.
    double resolution_kwh = 0.001;
};

struct Fixture {
    InverterDataset data;
    NwpTable nwp;
};

// Synthetic site: clear-sky PV shaped by a day-to-day cloud process that the
// NWP extract observes with noise, and an evening-peaked load that responds to
// temperature, with noise that grows with the signal.
Fixture make_fixture(const FixtureOptions& options = {});

}  // namespace solarsched
