#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <vector>

#include "solarsched/features.hpp"
#include "solarsched/forecast_set.hpp"
#include "solarsched/quantile_forest.hpp"
#include "solarsched/timeseries.hpp"

namespace solarsched {

enum class PersistSeries { load, pv, both };

// Days searched back (same hour of day) when a source hour is a gap.
inline constexpr int kGapLookbackDays = 7;

// Actual values as a point forecast. Gap hours take the most recent present
// value at the same hour of day within a week, else are flagged unavailable.
ForecastSet perfect(const InverterDataset& ds, LocalHour start, std::size_t horizon);

// Each hour repeats the value 24 hours earlier (for hours beyond a day, the
// matching hour of the day before `start`). Sources before the dataset begins
// fall back to actuals. The series not persisted comes from the actuals.
ForecastSet persistence_24h(const InverterDataset& ds, LocalHour start, std::size_t horizon,
                            PersistSeries series);

// Every hour repeats the single value observed at start - 1h, both series.
ForecastSet persistence_1h(const InverterDataset& ds, LocalHour start, std::size_t horizon);

struct QuantileModel {
    QuantileForest forest;
    FeatureKind target = FeatureKind::load;
    FeatureOptions features;
    LocalHour window_start;
    LocalHour window_end;  // exclusive
};

struct TrainingWindow {
    int days = 30;
    std::size_t min_rows = 24;
};

// Training table for hours in [window_end - days, window_end) that are present
// in the dataset and covered by the NWP table.
TrainingSet training_rows(const InverterDataset& ds, const NwpTable& nwp, FeatureKind target,
                          LocalHour window_end, const TrainingWindow& window,
                          const FeatureOptions& features = {});

// Throws when the window yields fewer than window.min_rows rows.
QuantileModel train_quantile_model(const InverterDataset& ds, const NwpTable& nwp, FeatureKind target,
                                   LocalHour window_end, const TrainingWindow& window = {},
                                   const ForestOptions& forest = {}, const FeatureOptions& features = {});

// Monotone, non-negative 40/50/60 quantiles. Throws on a shape mismatch.
QuantileTriple predict_quantiles(const QuantileModel& model, const FeatureVector& fv);

struct QuantileForecasterOptions {
    TrainingWindow window;
    ForestOptions forest;
    FeatureOptions features;
    // Models are refit at each local midnight and forecast this many hours.
    std::size_t coverage_hours = 48;
};

// Rolling quantile forecasts for one site. Every local day gets fresh load
// and PV models trained on the preceding window; days without enough history
// use actuals, mirroring the persistence warm-up. Everything is computed up
// front so forecast() is const and safe to call concurrently.
class QuantileForecaster {
public:
    QuantileForecaster(const InverterDataset& ds, const NwpTable& nwp, QuantileForecasterOptions options = {});

    // Forecast issued at `start` (uses the model of start's day).
    ForecastSet forecast(LocalHour start, std::size_t horizon) const;

    std::size_t days_modelled() const { return modelled_days_; }

private:
    struct DayForecast {
        LocalHour day_start;
        std::vector<QuantileTriple> load;
        std::vector<QuantileTriple> pv;
        std::vector<bool> available;
    };

    const InverterDataset* ds_;
    QuantileForecasterOptions options_;
    std::map<std::int64_t, DayForecast> days_;
    std::size_t modelled_days_ = 0;
};

}  // namespace solarsched
