#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace solarsched {

// Pairs where either side is NaN are treated as gaps and skipped by every
// metric below. Mismatched lengths throw.

// Mean absolute percentage error, in percent. Throws on a zero actual.
double mape(std::span<const double> actual, std::span<const double> predicted);
// sum|s - p| / sum|s|. Throws when the actuals sum to zero.
double nmae(std::span<const double> actual, std::span<const double> predicted);
// sqrt(sum (s - p)^2 / sum s^2). Throws when the actuals are all zero.
double nrmse(std::span<const double> actual, std::span<const double> predicted);
// Mean of tau*(s-p)+ + (1-tau)*(p-s)+. Requires 0 < tau < 1.
double pinball(std::span<const double> actual, std::span<const double> predicted, double tau);

struct ErrorReport {
    double mape = 0.0;  // NaN when any actual is zero
    double nmae = 0.0;
    double nrmse = 0.0;
    std::size_t n = 0;
};

ErrorReport error_report(std::span<const double> actual, std::span<const double> predicted);

inline constexpr std::array<double, 7> kPercentileRows{0, 20, 25, 50, 75, 80, 100};

struct SiteErrors {
    std::string site_id;
    ErrorReport load;
    ErrorReport pv;
};

// Percentile rows {0,20,25,50,75,80,100} of per-site NMAE/NRMSE for load
// and PV, as fractions.
struct PercentileTable {
    struct Row {
        double percentile;
        double load_nmae;
        double load_nrmse;
        double pv_nmae;
        double pv_nrmse;
    };
    std::vector<Row> rows;
};

PercentileTable percentile_table(std::span<const SiteErrors> sites);
// CSV `percentile,load_nmae,load_nrmse,pv_nmae,pv_nrmse`.
void write_percentile_table(std::ostream& out, const PercentileTable& table);

}  // namespace solarsched
