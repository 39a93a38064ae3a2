#include "solarsched/timeseries.hpp"

#include <fstream>
#include <limits>
#include <ostream>

#include "csv_util.hpp"
#include "solarsched/error.hpp"

namespace solarsched {

InverterDataset::InverterDataset(std::string site_id, int utc_offset_minutes, std::vector<HourlyRecord> records)
    : site_id_(std::move(site_id)), utc_offset_minutes_(utc_offset_minutes), records_(std::move(records)) {
    if (records_.empty()) throw Error("dataset '" + site_id_ + "' has no records");
    for (std::size_t i = 0; i < records_.size(); ++i) {
        auto& r = records_[i];
        if (i > 0 && r.timestamp - records_[i - 1].timestamp != 1)
            throw Error("dataset '" + site_id_ + "': records must be consecutive hours");
        if (r.present) {
            if (!(r.load_kwh >= 0.0) || !(r.pv_kwh >= 0.0))
                throw Error("dataset '" + site_id_ + "': negative energy at " + r.timestamp.to_iso(utc_offset_minutes));
        } else {
            r.load_kwh = 0.0;
            r.pv_kwh = 0.0;
        }
    }
}

const HourlyRecord* InverterDataset::at(LocalHour t) const {
    if (!contains(t)) return nullptr;
    return &records_[static_cast<std::size_t>(t - start())];
}

const HourlyRecord* InverterDataset::present_at(LocalHour t) const {
    const auto* r = at(t);
    return (r && r->present) ? r : nullptr;
}

std::size_t InverterDataset::present_count() const {
    std::size_t n = 0;
    for (const auto& r : records_) n += r.present ? 1 : 0;
    return n;
}

InverterDataset read_dataset(std::istream& in, int utc_offset_minutes, std::string site_id,
                             const std::string& source_name) {
    csv::LineReader reader(in, source_name);
    reader.expect_header({"timestamp", "load_kwh", "pv_kwh"});

    std::vector<HourlyRecord> records;
    std::string line;
    while (reader.next(line)) {
        const auto cols = csv::split(line);
        if (cols.size() != 3) reader.fail("expected 3 columns, got " + std::to_string(cols.size()));
        ParsedTimestamp ts;
        try {
            ts = parse_iso_hour(cols[0]);
        } catch (const ParseError&) {
            throw;
        } catch (const Error& e) {
            reader.fail(e.what());
        }
        if (ts.utc_offset_minutes != utc_offset_minutes)
            reader.fail("UTC offset " + std::to_string(ts.utc_offset_minutes) + " min differs from configured " +
                        std::to_string(utc_offset_minutes) + " min");

        HourlyRecord rec{ts.hour, 0.0, 0.0, true};
        if (cols[1].empty() && cols[2].empty()) {
            rec.present = false;
        } else {
            const auto load = csv::parse_double(cols[1]);
            const auto pv = csv::parse_double(cols[2]);
            if (!load || !pv) reader.fail("malformed energy value");
            if (*load < 0.0 || *pv < 0.0) reader.fail("negative energy");
            rec.load_kwh = *load;
            rec.pv_kwh = *pv;
        }

        if (!records.empty()) {
            const auto prev = records.back().timestamp;
            if (rec.timestamp == prev) reader.fail("duplicate hour " + std::string(cols[0]));
            if (rec.timestamp < prev) reader.fail("timestamps not increasing");
            for (auto t = prev + 1; t < rec.timestamp; ++t) records.push_back({t, 0.0, 0.0, false});
        }
        records.push_back(rec);
    }
    if (records.empty()) reader.fail("no data rows");
    return InverterDataset(std::move(site_id), utc_offset_minutes, std::move(records));
}

InverterDataset load_dataset(const std::filesystem::path& path, int utc_offset_minutes) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open dataset '" + path.string() + "'");
    return read_dataset(in, utc_offset_minutes, path.stem().string(), path.string());
}

void write_dataset(std::ostream& out, const InverterDataset& ds) {
    out << "timestamp,load_kwh,pv_kwh\n";
    for (const auto& r : ds.records()) {
        out << r.timestamp.to_iso(ds.utc_offset_minutes()) << ',';
        if (r.present) out << csv::format(r.load_kwh) << ',' << csv::format(r.pv_kwh);
        else out << ',';
        out << '\n';
    }
}

EligibilityReport eligibility(const InverterDataset& ds, const EligibilityThresholds& thresholds) {
    double load = 0.0;
    double pv = 0.0;
    std::size_t n = 0;
    for (const auto& r : ds.records()) {
        if (!r.present) continue;
        load += r.load_kwh;
        pv += r.pv_kwh;
        ++n;
    }
    if (n == 0) throw Error("dataset '" + ds.site_id() + "' has no present records");

    EligibilityReport rep;
    rep.mean_load_w = load / static_cast<double>(n) * 1000.0;
    rep.mean_pv_w = pv / static_cast<double>(n) * 1000.0;
    rep.completeness = static_cast<double>(n) / static_cast<double>(ds.size());
    rep.pv_load_ratio = load > 0.0 ? pv / load : std::numeric_limits<double>::infinity();
    rep.eligible = rep.mean_load_w >= thresholds.min_mean_load_w && rep.mean_pv_w >= thresholds.min_mean_pv_w &&
                   rep.completeness >= thresholds.min_completeness &&
                   rep.pv_load_ratio < thresholds.max_pv_load_ratio;
    return rep;
}

}  // namespace solarsched
