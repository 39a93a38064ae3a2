#include "solarsched/metrics.hpp"

#include <cmath>
#include <limits>
#include <ostream>

#include "csv_util.hpp"
#include "solarsched/error.hpp"
#include "solarsched/stats.hpp"

namespace solarsched {

namespace {

void check_lengths(std::span<const double> a, std::span<const double> p) {
    if (a.size() != p.size()) throw Error("actual and predicted series differ in length");
}

template <typename F>
std::size_t for_each_pair(std::span<const double> a, std::span<const double> p, F&& f) {
    check_lengths(a, p);
    std::size_t n = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::isnan(a[i]) || std::isnan(p[i])) continue;
        f(a[i], p[i]);
        ++n;
    }
    return n;
}

}  // namespace

double mape(std::span<const double> actual, std::span<const double> predicted) {
    double sum = 0.0;
    const auto n = for_each_pair(actual, predicted, [&](double s, double p) {
        if (s == 0.0) throw Error("MAPE undefined: zero actual value");
        sum += std::abs((s - p) / s);
    });
    if (n == 0) throw Error("MAPE of an empty series");
    return sum / static_cast<double>(n) * 100.0;
}

double nmae(std::span<const double> actual, std::span<const double> predicted) {
    double num = 0.0;
    double den = 0.0;
    for_each_pair(actual, predicted, [&](double s, double p) {
        num += std::abs(s - p);
        den += std::abs(s);
    });
    if (den == 0.0) throw Error("NMAE undefined: actual values sum to zero");
    return num / den;
}

double nrmse(std::span<const double> actual, std::span<const double> predicted) {
    double num = 0.0;
    double den = 0.0;
    for_each_pair(actual, predicted, [&](double s, double p) {
        num += (s - p) * (s - p);
        den += s * s;
    });
    if (den == 0.0) throw Error("NRMSE undefined: actual values are all zero");
    return std::sqrt(num / den);
}

double pinball(std::span<const double> actual, std::span<const double> predicted, double tau) {
    if (!(tau > 0.0 && tau < 1.0)) throw Error("pinball quantile level must lie in (0, 1)");
    double sum = 0.0;
    const auto n = for_each_pair(actual, predicted, [&](double s, double p) {
        sum += s >= p ? tau * (s - p) : (1.0 - tau) * (p - s);
    });
    if (n == 0) throw Error("pinball loss of an empty series");
    return sum / static_cast<double>(n);
}

ErrorReport error_report(std::span<const double> actual, std::span<const double> predicted) {
    ErrorReport r;
    r.n = for_each_pair(actual, predicted, [](double, double) {});
    r.nmae = nmae(actual, predicted);
    r.nrmse = nrmse(actual, predicted);
    try {
        r.mape = mape(actual, predicted);
    } catch (const Error&) {
        r.mape = std::numeric_limits<double>::quiet_NaN();
    }
    return r;
}

PercentileTable percentile_table(std::span<const SiteErrors> sites) {
    if (sites.empty()) throw Error("percentile table needs at least one site");
    std::vector<double> ln, lr, pn, pr;
    for (const auto& s : sites) {
        ln.push_back(s.load.nmae);
        lr.push_back(s.load.nrmse);
        pn.push_back(s.pv.nmae);
        pr.push_back(s.pv.nrmse);
    }
    PercentileTable t;
    for (double pct : kPercentileRows) {
        const double p = pct / 100.0;
        t.rows.push_back({pct, quantile(ln, p), quantile(lr, p), quantile(pn, p), quantile(pr, p)});
    }
    return t;
}

void write_percentile_table(std::ostream& out, const PercentileTable& table) {
    out << "percentile,load_nmae,load_nrmse,pv_nmae,pv_nrmse\n";
    for (const auto& r : table.rows) {
        out << csv::fixed(r.percentile, 0) << ',' << csv::fixed(r.load_nmae, 6) << ',' << csv::fixed(r.load_nrmse, 6)
            << ',' << csv::fixed(r.pv_nmae, 6) << ',' << csv::fixed(r.pv_nrmse, 6) << '\n';
    }
}

}  // namespace solarsched
