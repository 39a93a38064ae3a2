#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "solarsched/local_time.hpp"

namespace solarsched {

struct QuantileTriple {
    double q40 = 0.0;
    double q50 = 0.0;
    double q60 = 0.0;

    static QuantileTriple point(double v) { return {v, v, v}; }
    bool monotone() const { return q40 <= q50 && q50 <= q60; }
    bool operator==(const QuantileTriple&) const = default;
};

enum class QuantileLevel { q40, q50, q60 };

inline double select(const QuantileTriple& q, QuantileLevel level) {
    switch (level) {
        case QuantileLevel::q40: return q.q40;
        case QuantileLevel::q60: return q.q60;
        case QuantileLevel::q50: break;
    }
    return q.q50;
}

// Per-hour quantile forecasts of load and PV starting at `start`.
// Hours with available[h] == false had no usable source value.
struct ForecastSet {
    LocalHour start;
    std::vector<QuantileTriple> load;
    std::vector<QuantileTriple> pv;
    std::vector<bool> available;

    std::size_t horizon() const { return load.size(); }

    static ForecastSet sized(LocalHour start, std::size_t horizon);

    // Throws unless both series are non-negative and q40 <= q50 <= q60.
    void validate() const;
};

// CSV `timestamp,series,q40,q50,q60`, series in {load,pv}, one row per hour
// and series.
void write_forecast(std::ostream& out, const ForecastSet& fc, int utc_offset_minutes);
ForecastSet read_forecast(std::istream& in, int utc_offset_minutes, const std::string& source_name = "<stream>");

}  // namespace solarsched
