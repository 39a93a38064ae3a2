#include "solarsched/forecast_set.hpp"

#include <istream>
#include <map>
#include <optional>
#include <ostream>

#include "csv_util.hpp"
#include "solarsched/error.hpp"

namespace solarsched {

ForecastSet ForecastSet::sized(LocalHour start, std::size_t horizon) {
    ForecastSet fc;
    fc.start = start;
    fc.load.assign(horizon, {});
    fc.pv.assign(horizon, {});
    fc.available.assign(horizon, true);
    return fc;
}

void ForecastSet::validate() const {
    if (pv.size() != load.size() || available.size() != load.size())
        throw Error("forecast series lengths differ");
    for (std::size_t h = 0; h < load.size(); ++h) {
        for (const auto* q : {&load[h], &pv[h]}) {
            if (!q->monotone()) throw Error("forecast quantiles not monotone at hour " + std::to_string(h));
            if (q->q40 < 0.0) throw Error("negative forecast at hour " + std::to_string(h));
        }
    }
}

void write_forecast(std::ostream& out, const ForecastSet& fc, int utc_offset_minutes) {
    out << "timestamp,series,q40,q50,q60\n";
    for (std::size_t h = 0; h < fc.horizon(); ++h) {
        const auto ts = (fc.start + static_cast<std::int64_t>(h)).to_iso(utc_offset_minutes);
        for (const auto& [name, q] : {std::pair{"load", fc.load[h]}, std::pair{"pv", fc.pv[h]}}) {
            out << ts << ',' << name << ',';
            if (fc.available[h]) out << csv::format(q.q40) << ',' << csv::format(q.q50) << ',' << csv::format(q.q60);
            else out << ",,";
            out << '\n';
        }
    }
}

ForecastSet read_forecast(std::istream& in, int utc_offset_minutes, const std::string& source_name) {
    csv::LineReader reader(in, source_name);
    reader.expect_header({"timestamp", "series", "q40", "q50", "q60"});

    struct Entry {
        std::optional<QuantileTriple> load;
        std::optional<QuantileTriple> pv;
        bool available = true;
    };
    std::map<LocalHour, Entry> rows;
    std::string line;
    while (reader.next(line)) {
        const auto cols = csv::split(line);
        if (cols.size() != 5) reader.fail("expected 5 columns");
        ParsedTimestamp ts;
        try {
            ts = parse_iso_hour(cols[0]);
        } catch (const Error& e) {
            reader.fail(e.what());
        }
        if (ts.utc_offset_minutes != utc_offset_minutes) reader.fail("UTC offset differs from configured offset");
        auto& e = rows[ts.hour];
        QuantileTriple q;
        if (cols[2].empty() && cols[3].empty() && cols[4].empty()) {
            e.available = false;
        } else {
            const auto a = csv::parse_double(cols[2]);
            const auto b = csv::parse_double(cols[3]);
            const auto c = csv::parse_double(cols[4]);
            if (!a || !b || !c) reader.fail("malformed quantile value");
            q = {*a, *b, *c};
            if (!q.monotone()) reader.fail("quantiles must satisfy q40 <= q50 <= q60");
            if (q.q40 < 0.0) reader.fail("negative forecast value");
        }
        std::optional<QuantileTriple>* slot = nullptr;
        if (cols[1] == "load") slot = &e.load;
        else if (cols[1] == "pv") slot = &e.pv;
        else reader.fail("series must be load or pv");
        if (*slot) reader.fail("duplicate " + std::string(cols[1]) + " row");
        *slot = q;
    }
    if (rows.empty()) reader.fail("forecast has no rows");

    const LocalHour start = rows.begin()->first;
    const LocalHour last = rows.rbegin()->first;
    if (static_cast<std::size_t>(last - start) + 1 != rows.size())
        throw Error(source_name + ": forecast hours must be contiguous");
    auto fc = ForecastSet::sized(start, rows.size());
    std::size_t h = 0;
    for (const auto& [t, e] : rows) {
        if (!e.load || !e.pv) throw Error(source_name + ": hour " + t.to_iso(utc_offset_minutes) + " lacks a load or pv row");
        fc.load[h] = *e.load;
        fc.pv[h] = *e.pv;
        fc.available[h] = e.available;
        ++h;
    }
    return fc;
}

}  // namespace solarsched
