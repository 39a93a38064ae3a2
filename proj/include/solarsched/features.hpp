#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "solarsched/local_time.hpp"

namespace solarsched {

// One NWP grid point's variables for one hour.
struct GridPointRecord {
    int grid_id = 0;
    double distance_km = 0.0;
    double temp_2m = 0.0;     // deg C
    double rh_1000 = 0.0;     // %
    double dswrf = 0.0;       // W/m^2
    double pressure = 0.0;    // hPa
    double u10 = 0.0;         // m/s
    double v10 = 0.0;         // m/s
    double tcc = 0.0;         // fraction
};

inline constexpr std::size_t kGridPoints = 4;
using GridHour = std::array<GridPointRecord, kGridPoints>;

// Hourly NWP extract for the four grid points around a site.
class NwpTable {
public:
    NwpTable() = default;
    NwpTable(LocalHour start, std::vector<std::optional<GridHour>> hours);

    LocalHour start() const { return start_; }
    LocalHour end() const { return start_ + static_cast<std::int64_t>(hours_.size()); }
    const GridHour* at(LocalHour t) const;
    bool empty() const { return hours_.empty(); }

private:
    LocalHour start_;
    std::vector<std::optional<GridHour>> hours_;
};

// CSV `timestamp,grid_id,distance_km,temp_2m,rh_1000,dswrf,pressure,u10,v10,tcc`
// with four rows (one per grid point) per timestamp.
NwpTable read_nwp(std::istream& in, int utc_offset_minutes, const std::string& source_name = "<stream>");
NwpTable load_nwp(const std::filesystem::path& path, int utc_offset_minutes);
void write_nwp(std::ostream& out, const NwpTable& table, int utc_offset_minutes);

// Inverse-distance weighted value: sum(v_i/d_i) / sum(1/d_i). A zero
// distance returns that point's value.
double idw(std::span<const double> values, std::span<const double> distances);

enum class FeatureKind { load, pv };

struct FeatureOptions {
    // Adds zero-filled wind_chill_index and solar_module_temperature columns
    // (nearest and IDW) so models trained with them keep a stable shape.
    bool reserve_module_columns = false;
};

// Variables sampled at a single grid point ("nearest") and interpolated ("idw").
struct SampledValue {
    double nearest = 0.0;
    double idw = 0.0;
};

struct PvFeatures {
    SampledValue dswrf;
    // Index 0..2: 1, 2, 3 hours ahead; same for lags (behind).
    std::array<SampledValue, 3> dswrf_lead;
    std::array<SampledValue, 3> dswrf_lag;
    SampledValue pressure;
    SampledValue pressure_diff;  // 1-hour backward difference
    SampledValue wind_u10;
    SampledValue wind_v10;
    SampledValue total_cloud_cover;
    SampledValue tcc_times_dswrf;
};

struct FeatureVector {
    double sin_hour = 0.0;
    double cos_hour = 1.0;
    double sin_jday = 0.0;
    double cos_jday = 1.0;
    SampledValue temperature_2m;
    SampledValue rel_humidity_1000hpa;
    bool is_weekend = false;
    std::optional<PvFeatures> pv;
    bool reserved_module_columns = false;

    std::vector<double> flatten() const;
};

std::vector<std::string> feature_names(FeatureKind kind, const FeatureOptions& options = {});

// Calendar encodings only (sin/cos of 2*pi*h/24 and 2*pi*j/365).
void encode_calendar(FeatureVector& fv, LocalHour t);

// Full feature vector for hour t. Leads/lags and the pressure difference reuse
// the hour-t values when neighbouring hours are missing from the table.
// Returns nullopt when the table has no record for t.
std::optional<FeatureVector> build_features(const NwpTable& nwp, LocalHour t, FeatureKind kind,
                                            const FeatureOptions& options = {});

}  // namespace solarsched
