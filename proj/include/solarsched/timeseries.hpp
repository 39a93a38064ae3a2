#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "solarsched/local_time.hpp"

namespace solarsched {

// One hour of metered energy. Gap hours carry present=false and zero values.
struct HourlyRecord {
    LocalHour timestamp;
    double load_kwh = 0.0;
    double pv_kwh = 0.0;
    bool present = true;

    bool operator==(const HourlyRecord&) const = default;
};

// Contiguous hourly history for a single inverter site.
class InverterDataset {
public:
    // Validates ordering (strictly increasing, exactly one hour apart) and
    // non-negative energies on present records.
    InverterDataset(std::string site_id, int utc_offset_minutes, std::vector<HourlyRecord> records);

    const std::string& site_id() const { return site_id_; }
    int utc_offset_minutes() const { return utc_offset_minutes_; }
    std::span<const HourlyRecord> records() const { return records_; }
    std::size_t size() const { return records_.size(); }
    bool empty() const { return records_.empty(); }

    LocalHour start() const { return records_.front().timestamp; }
    // One past the last hour.
    LocalHour end() const { return records_.back().timestamp + 1; }

    bool contains(LocalHour t) const { return !empty() && t >= start() && t < end(); }
    // Record at hour t, or nullptr outside the dataset.
    const HourlyRecord* at(LocalHour t) const;
    // Present record at hour t, or nullptr if absent or a gap.
    const HourlyRecord* present_at(LocalHour t) const;

    std::size_t present_count() const;

    bool operator==(const InverterDataset&) const = default;

private:
    std::string site_id_;
    int utc_offset_minutes_ = 0;
    std::vector<HourlyRecord> records_;
};

struct EligibilityReport {
    double mean_load_w = 0.0;
    double mean_pv_w = 0.0;
    double completeness = 0.0;
    double pv_load_ratio = 0.0;
    bool eligible = false;
};

struct EligibilityThresholds {
    double min_mean_load_w = 200.0;
    double min_mean_pv_w = 200.0;
    double min_completeness = 0.9;
    // Sites at or above this long-run PV/load ratio are not optimised.
    double max_pv_load_ratio = 1.0;
};

// Reads `timestamp,load_kwh,pv_kwh`. Missing hours between the first and last
// row are filled as gaps; a row whose two values are both empty is an explicit
// gap. Every row must carry the given UTC offset.
InverterDataset load_dataset(const std::filesystem::path& path, int utc_offset_minutes);
InverterDataset read_dataset(std::istream& in, int utc_offset_minutes, std::string site_id,
                             const std::string& source_name = "<stream>");

// Writes the CSV form accepted by load_dataset; gaps become empty-valued rows.
void write_dataset(std::ostream& out, const InverterDataset& ds);

EligibilityReport eligibility(const InverterDataset& ds, const EligibilityThresholds& thresholds = {});

}  // namespace solarsched
