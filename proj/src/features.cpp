#include "solarsched/features.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <ostream>

#include "csv_util.hpp"
#include "solarsched/error.hpp"

namespace solarsched {

NwpTable::NwpTable(LocalHour start, std::vector<std::optional<GridHour>> hours)
    : start_(start), hours_(std::move(hours)) {}

const GridHour* NwpTable::at(LocalHour t) const {
    if (t < start_ || t >= end()) return nullptr;
    const auto& h = hours_[static_cast<std::size_t>(t - start_)];
    return h ? &*h : nullptr;
}

NwpTable read_nwp(std::istream& in, int utc_offset_minutes, const std::string& source_name) {
    csv::LineReader reader(in, source_name);
    reader.expect_header({"timestamp", "grid_id", "distance_km", "temp_2m", "rh_1000", "dswrf", "pressure", "u10",
                          "v10", "tcc"});
    std::map<LocalHour, std::vector<GridPointRecord>> by_hour;
    std::string line;
    while (reader.next(line)) {
        const auto cols = csv::split(line);
        if (cols.size() != 10) reader.fail("expected 10 columns, got " + std::to_string(cols.size()));
        ParsedTimestamp ts;
        try {
            ts = parse_iso_hour(cols[0]);
        } catch (const Error& e) {
            reader.fail(e.what());
        }
        if (ts.utc_offset_minutes != utc_offset_minutes) reader.fail("UTC offset differs from configured offset");
        const auto id = csv::parse_int(cols[1]);
        if (!id) reader.fail("malformed grid_id");
        GridPointRecord rec;
        rec.grid_id = static_cast<int>(*id);
        double* fields[] = {&rec.distance_km, &rec.temp_2m, &rec.rh_1000, &rec.dswrf,
                            &rec.pressure,    &rec.u10,     &rec.v10,     &rec.tcc};
        for (std::size_t i = 0; i < 8; ++i) {
            const auto v = csv::parse_double(cols[2 + i]);
            if (!v) reader.fail("missing or malformed value in column " + std::to_string(3 + i));
            *fields[i] = *v;
        }
        if (!(rec.distance_km >= 0.0)) reader.fail("distance_km must be non-negative");
        auto& bucket = by_hour[ts.hour];
        for (const auto& r : bucket) {
            if (r.grid_id == rec.grid_id) reader.fail("duplicate grid point " + std::to_string(rec.grid_id));
        }
        bucket.push_back(rec);
    }
    if (by_hour.empty()) return {};

    const LocalHour start = by_hour.begin()->first;
    const LocalHour last = by_hour.rbegin()->first;
    std::vector<std::optional<GridHour>> hours(static_cast<std::size_t>(last - start) + 1);
    for (auto& [t, recs] : by_hour) {
        if (recs.size() != kGridPoints)
            throw Error(source_name + ": " + t.to_iso(utc_offset_minutes) + " has " + std::to_string(recs.size()) +
                        " grid points, expected " + std::to_string(kGridPoints));
        std::sort(recs.begin(), recs.end(), [](const auto& a, const auto& b) { return a.grid_id < b.grid_id; });
        GridHour g;
        std::copy(recs.begin(), recs.end(), g.begin());
        hours[static_cast<std::size_t>(t - start)] = g;
    }
    return NwpTable(start, std::move(hours));
}

NwpTable load_nwp(const std::filesystem::path& path, int utc_offset_minutes) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open NWP file '" + path.string() + "'");
    return read_nwp(in, utc_offset_minutes, path.string());
}

void write_nwp(std::ostream& out, const NwpTable& table, int utc_offset_minutes) {
    out << "timestamp,grid_id,distance_km,temp_2m,rh_1000,dswrf,pressure,u10,v10,tcc\n";
    for (auto t = table.start(); t < table.end(); ++t) {
        const auto* g = table.at(t);
        if (!g) continue;
        const auto ts = t.to_iso(utc_offset_minutes);
        for (const auto& r : *g) {
            out << ts << ',' << r.grid_id << ',' << csv::format(r.distance_km) << ',' << csv::format(r.temp_2m) << ','
                << csv::format(r.rh_1000) << ',' << csv::format(r.dswrf) << ',' << csv::format(r.pressure) << ','
                << csv::format(r.u10) << ',' << csv::format(r.v10) << ',' << csv::format(r.tcc) << '\n';
        }
    }
}

double idw(std::span<const double> values, std::span<const double> distances) {
    if (values.size() != distances.size() || values.empty()) throw Error("IDW needs matching non-empty inputs");
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (distances[i] < 0.0) throw Error("IDW distance must be non-negative");
        if (distances[i] == 0.0) return values[i];
        num += values[i] / distances[i];
        den += 1.0 / distances[i];
    }
    return num / den;
}

namespace {

template <typename Get>
SampledValue sample(const GridHour& g, Get get) {
    std::array<double, kGridPoints> v{};
    std::array<double, kGridPoints> d{};
    std::size_t nearest = 0;
    for (std::size_t i = 0; i < kGridPoints; ++i) {
        v[i] = get(g[i]);
        d[i] = g[i].distance_km;
        if (d[i] < d[nearest]) nearest = i;
    }
    return {v[nearest], idw(v, d)};
}

void append(std::vector<double>& out, const SampledValue& s) {
    out.push_back(s.nearest);
    out.push_back(s.idw);
}

void append_names(std::vector<std::string>& out, const std::string& base) {
    out.push_back(base);
    out.push_back(base + "_idw");
}

}  // namespace

std::vector<double> FeatureVector::flatten() const {
    std::vector<double> out{sin_hour, cos_hour, sin_jday, cos_jday};
    append(out, temperature_2m);
    append(out, rel_humidity_1000hpa);
    out.push_back(is_weekend ? 1.0 : 0.0);
    if (pv) {
        append(out, pv->dswrf);
        for (const auto& s : pv->dswrf_lead) append(out, s);
        for (const auto& s : pv->dswrf_lag) append(out, s);
        append(out, pv->pressure);
        append(out, pv->pressure_diff);
        append(out, pv->wind_u10);
        append(out, pv->wind_v10);
        append(out, pv->total_cloud_cover);
        append(out, pv->tcc_times_dswrf);
        if (reserved_module_columns) out.insert(out.end(), 4, 0.0);
    }
    return out;
}

std::vector<std::string> feature_names(FeatureKind kind, const FeatureOptions& options) {
    std::vector<std::string> out{"sin_hour", "cos_hour", "sin_jday", "cos_jday"};
    append_names(out, "temp_2m");
    append_names(out, "rh_1000");
    out.emplace_back("is_weekend");
    if (kind == FeatureKind::pv) {
        append_names(out, "dswrf");
        for (int k = 1; k <= 3; ++k) append_names(out, "dswrf_lead" + std::to_string(k));
        for (int k = 1; k <= 3; ++k) append_names(out, "dswrf_lag" + std::to_string(k));
        append_names(out, "pressure");
        append_names(out, "pressure_diff");
        append_names(out, "u10");
        append_names(out, "v10");
        append_names(out, "tcc");
        append_names(out, "tcc_dswrf");
        if (options.reserve_module_columns) {
            append_names(out, "wind_chill_index");
            append_names(out, "solar_module_temperature");
        }
    }
    return out;
}

void encode_calendar(FeatureVector& fv, LocalHour t) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    const double h = t.hour_of_day();
    const double j = t.day_of_year();
    fv.sin_hour = std::sin(two_pi * h / 24.0);
    fv.cos_hour = std::cos(two_pi * h / 24.0);
    fv.sin_jday = std::sin(two_pi * j / 365.0);
    fv.cos_jday = std::cos(two_pi * j / 365.0);
    fv.is_weekend = t.is_weekend();
}

std::optional<FeatureVector> build_features(const NwpTable& nwp, LocalHour t, FeatureKind kind,
                                            const FeatureOptions& options) {
    const GridHour* here = nwp.at(t);
    if (!here) return std::nullopt;

    FeatureVector fv;
    encode_calendar(fv, t);
    fv.temperature_2m = sample(*here, [](const auto& r) { return r.temp_2m; });
    fv.rel_humidity_1000hpa = sample(*here, [](const auto& r) { return r.rh_1000; });
    if (kind == FeatureKind::load) return fv;

    const auto dswrf = [](const auto& r) { return r.dswrf; };
    const auto near_or_here = [&](std::int64_t dt) {
        const GridHour* g = nwp.at(t + dt);
        return g ? g : here;
    };
    PvFeatures pv;
    pv.dswrf = sample(*here, dswrf);
    for (int k = 0; k < 3; ++k) {
        pv.dswrf_lead[static_cast<std::size_t>(k)] = sample(*near_or_here(k + 1), dswrf);
        pv.dswrf_lag[static_cast<std::size_t>(k)] = sample(*near_or_here(-(k + 1)), dswrf);
    }
    pv.pressure = sample(*here, [](const auto& r) { return r.pressure; });
    const auto prev_pressure = sample(*near_or_here(-1), [](const auto& r) { return r.pressure; });
    pv.pressure_diff = {pv.pressure.nearest - prev_pressure.nearest, pv.pressure.idw - prev_pressure.idw};
    pv.wind_u10 = sample(*here, [](const auto& r) { return r.u10; });
    pv.wind_v10 = sample(*here, [](const auto& r) { return r.v10; });
    pv.total_cloud_cover = sample(*here, [](const auto& r) { return r.tcc; });
    pv.tcc_times_dswrf = sample(*here, [](const auto& r) { return r.tcc * r.dswrf; });
    fv.pv = pv;
    fv.reserved_module_columns = options.reserve_module_columns;
    return fv;
}

}  // namespace solarsched
