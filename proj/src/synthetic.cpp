#include "solarsched/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "solarsched/error.hpp"
#include "solarsched/random.hpp"

namespace solarsched {

namespace {

constexpr double kSunrise = 6.5;
constexpr double kSunset = 17.5;
constexpr double kPeakIrradiance = 850.0;  // W/m^2 at solar noon, clear sky
constexpr double kGridDistances[kGridPoints] = {5.0, 12.0, 18.0, 25.0};

enum Stream : std::uint64_t { kWeather = 1, kPv = 2, kLoad = 3, kNwp = 4 };

double clear_sky(double hour_mid) {
    if (hour_mid <= kSunrise || hour_mid >= kSunset) return 0.0;
    return std::sin(std::numbers::pi * (hour_mid - kSunrise) / (kSunset - kSunrise));
}

double round_to(double v, double step) { return step > 0.0 ? std::round(v / step) * step : v; }

// Mean daily load shape: overnight base, a morning bump and an evening peak.
double load_shape(int hour, bool weekend) {
    const auto bump = [](double h, double centre, double width) {
        const double z = (h - centre) / width;
        return std::exp(-0.5 * z * z);
    };
    const double h = hour + 0.5;
    double v = 0.35 + 0.45 * bump(h, 7.5, 1.2) + 0.6 * bump(h, 12.5, 3.0) + 1.3 * bump(h, 19.0, 1.8);
    if (weekend) v += 0.35 * bump(h, 13.0, 3.0);
    return v;
}

}  // namespace

Fixture make_fixture(const FixtureOptions& options) {
    if (options.days <= 0) throw Error("fixture needs at least one day");
    if (!(options.pv_load_ratio >= 0.0) || !(options.mean_load_kwh > 0.0))
        throw Error("fixture PV/load ratio must be non-negative and mean load positive");

    const LocalHour start = LocalHour::from_civil(options.start, 0);
    const auto days = static_cast<std::size_t>(options.days);
    const std::size_t n = days * 24;

    // Daily weather: clearness index and mean temperature follow AR(1) paths.
    Rng weather(options.seed, kWeather);
    std::vector<double> clearness(days);
    std::vector<double> mean_temp(days);
    std::vector<double> mean_pressure(days);
    double c = 0.65;
    double temp = 12.0;
    double pres = 1015.0;
    for (std::size_t d = 0; d < days; ++d) {
        c = std::clamp(0.62 + 0.8 * (c - 0.62) + 0.12 * weather.normal(), 0.08, 1.0);
        temp = 12.0 + 0.7 * (temp - 12.0) + 2.5 * weather.normal();
        pres = 1015.0 + 0.8 * (pres - 1015.0) + 4.0 * weather.normal();
        clearness[d] = c;
        mean_temp[d] = temp;
        mean_pressure[d] = pres;
    }

    std::vector<double> hour_clearness(n);
    std::vector<double> temperature(n);
    std::vector<double> pv_raw(n);
    std::vector<double> load_raw(n);
    Rng pv_rng(options.seed, kPv);
    Rng load_rng(options.seed, kLoad);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t d = i / 24;
        const LocalHour t = start + static_cast<std::int64_t>(i);
        const int h = t.hour_of_day();
        hour_clearness[i] = std::clamp(clearness[d] + 0.08 * pv_rng.normal(), 0.03, 1.0);
        temperature[i] = mean_temp[d] + 4.0 * std::sin(2.0 * std::numbers::pi * (h - 9.0) / 24.0);
        // Local cloud the NWP grid does not resolve; spread grows under broken cloud.
        const double local = 1.0 + 0.35 * (1.0 - hour_clearness[i]) * pv_rng.normal();
        pv_raw[i] = clear_sky(h + 0.5) * std::clamp(hour_clearness[i] * local, 0.02, 1.0);

        const double heating = 0.06 * std::max(0.0, 16.0 - temperature[i]);
        const double mean = load_shape(h, t.is_weekend()) * (1.0 + heating);
        // Noise grows with the signal.
        load_raw[i] = std::max(0.02, mean * (1.0 + 0.3 * load_rng.normal()));
    }

    double load_sum = 0.0;
    for (double v : load_raw) load_sum += v;
    const double load_scale = options.mean_load_kwh * static_cast<double>(n) / load_sum;
    std::vector<HourlyRecord> records(n);
    load_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        records[i].timestamp = start + static_cast<std::int64_t>(i);
        records[i].load_kwh = round_to(load_raw[i] * load_scale, options.resolution_kwh);
        load_sum += records[i].load_kwh;
    }
    double pv_sum = 0.0;
    for (double v : pv_raw) pv_sum += v;
    const double pv_scale = pv_sum > 0.0 ? options.pv_load_ratio * load_sum / pv_sum : 0.0;
    for (std::size_t i = 0; i < n; ++i) records[i].pv_kwh = round_to(pv_raw[i] * pv_scale, options.resolution_kwh);

    // NWP: each grid point sees the hour's cloudiness and temperature with its
    // own error, larger further from the site.
    Rng nwp_rng(options.seed, kNwp);
    std::vector<std::optional<GridHour>> hours(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t d = i / 24;
        const int h = (start + static_cast<std::int64_t>(i)).hour_of_day();
        GridHour g;
        for (std::size_t k = 0; k < kGridPoints; ++k) {
            const double err = 0.04 + 0.004 * kGridDistances[k];
            const double seen = std::clamp(hour_clearness[i] + err * nwp_rng.normal(), 0.0, 1.0);
            auto& p = g[k];
            p.grid_id = static_cast<int>(k + 1);
            p.distance_km = kGridDistances[k];
            p.dswrf = round_to(kPeakIrradiance * clear_sky(h + 0.5) * seen, 0.1);
            p.tcc = round_to(std::clamp(1.0 - seen + 0.05 * nwp_rng.normal(), 0.0, 1.0), 0.001);
            p.temp_2m = round_to(temperature[i] + 0.02 * kGridDistances[k] + 0.6 * nwp_rng.normal(), 0.01);
            p.rh_1000 = round_to(std::clamp(75.0 - 1.5 * (temperature[i] - 12.0) + 4.0 * nwp_rng.normal(), 5.0, 100.0),
                                 0.1);
            p.pressure = round_to(mean_pressure[d] + 0.5 * nwp_rng.normal(), 0.1);
            p.u10 = round_to(3.0 * nwp_rng.normal(), 0.01);
            p.v10 = round_to(3.0 * nwp_rng.normal(), 0.01);
        }
        hours[i] = g;
    }

    return Fixture{InverterDataset(options.site_id, options.utc_offset_minutes, std::move(records)),
                   NwpTable(start, std::move(hours))};
}

}  // namespace solarsched
