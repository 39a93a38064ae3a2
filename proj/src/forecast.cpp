#include "solarsched/forecast.hpp"

#include <algorithm>

#include "solarsched/error.hpp"

namespace solarsched {

namespace {

// Most recent present record at the same hour of day, starting at `t` and
// stepping back a day at a time, never before `floor`.
const HourlyRecord* same_hour_lookback(const InverterDataset& ds, LocalHour t, LocalHour floor) {
    for (int k = 0; k <= kGapLookbackDays; ++k) {
        const LocalHour src = t - 24 * k;
        if (src < floor) break;
        if (const auto* r = ds.present_at(src)) return r;
    }
    return nullptr;
}

}  // namespace

ForecastSet perfect(const InverterDataset& ds, LocalHour start, std::size_t horizon) {
    auto fc = ForecastSet::sized(start, horizon);
    for (std::size_t h = 0; h < horizon; ++h) {
        const LocalHour t = start + static_cast<std::int64_t>(h);
        const HourlyRecord* r = ds.present_at(t);
        if (!r) {
            // Gap: same hour on one of the previous days.
            for (int k = 1; k <= kGapLookbackDays && !r; ++k) r = ds.present_at(t - 24 * k);
        }
        if (r) {
            fc.load[h] = QuantileTriple::point(r->load_kwh);
            fc.pv[h] = QuantileTriple::point(r->pv_kwh);
        } else {
            fc.available[h] = false;
        }
    }
    return fc;
}

ForecastSet persistence_24h(const InverterDataset& ds, LocalHour start, std::size_t horizon, PersistSeries series) {
    auto fc = perfect(ds, start, horizon);
    const bool do_load = series != PersistSeries::pv;
    const bool do_pv = series != PersistSeries::load;
    for (std::size_t h = 0; h < horizon; ++h) {
        const LocalHour t = start + static_cast<std::int64_t>(h);
        const LocalHour src = t - 24 * (static_cast<std::int64_t>(h / 24) + 1);
        if (ds.empty() || src < ds.start()) continue;  // warm-up: actuals already in place
        const HourlyRecord* r = same_hour_lookback(ds, src, ds.start());
        if (!r) {
            fc.available[h] = false;
            continue;
        }
        if (do_load) fc.load[h] = QuantileTriple::point(r->load_kwh);
        if (do_pv) fc.pv[h] = QuantileTriple::point(r->pv_kwh);
    }
    return fc;
}

ForecastSet persistence_1h(const InverterDataset& ds, LocalHour start, std::size_t horizon) {
    const LocalHour src = start - 1;
    if (ds.empty() || src < ds.start()) return perfect(ds, start, horizon);
    auto fc = ForecastSet::sized(start, horizon);
    const HourlyRecord* r = same_hour_lookback(ds, src, ds.start());
    for (std::size_t h = 0; h < horizon; ++h) {
        if (!r) {
            fc.available[h] = false;
            continue;
        }
        fc.load[h] = QuantileTriple::point(r->load_kwh);
        fc.pv[h] = QuantileTriple::point(r->pv_kwh);
    }
    return fc;
}

TrainingSet training_rows(const InverterDataset& ds, const NwpTable& nwp, FeatureKind target, LocalHour window_end,
                          const TrainingWindow& window, const FeatureOptions& features) {
    TrainingSet set;
    set.num_features = feature_names(target, features).size();
    const LocalHour window_start = window_end - 24 * static_cast<std::int64_t>(window.days);
    for (LocalHour t = window_start; t < window_end; ++t) {
        const auto* r = ds.present_at(t);
        if (!r) continue;
        const auto fv = build_features(nwp, t, target, features);
        if (!fv) continue;
        set.add(fv->flatten(), target == FeatureKind::load ? r->load_kwh : r->pv_kwh);
    }
    return set;
}

QuantileModel train_quantile_model(const InverterDataset& ds, const NwpTable& nwp, FeatureKind target,
                                   LocalHour window_end, const TrainingWindow& window, const ForestOptions& forest,
                                   const FeatureOptions& features) {
    const auto rows = training_rows(ds, nwp, target, window_end, window, features);
    if (rows.size() == 0) throw Error("empty training window");
    if (rows.size() < window.min_rows)
        throw Error("training window has " + std::to_string(rows.size()) + " rows, need at least " +
                    std::to_string(window.min_rows));
    QuantileModel m{QuantileForest::train(rows, forest), target, features,
                    window_end - 24 * static_cast<std::int64_t>(window.days), window_end};
    return m;
}

QuantileTriple predict_quantiles(const QuantileModel& model, const FeatureVector& fv) {
    if ((model.target == FeatureKind::pv) != fv.pv.has_value())
        throw Error("feature vector kind does not match the model target");
    return model.forest.predict(fv.flatten());
}

QuantileForecaster::QuantileForecaster(const InverterDataset& ds, const NwpTable& nwp, QuantileForecasterOptions options)
    : ds_(&ds), options_(std::move(options)) {
    if (ds.empty()) return;
    const auto coverage = static_cast<std::int64_t>(options_.coverage_hours);
    for (LocalHour day = ds.start().day_start(); day < ds.end(); day = day + 24) {
        DayForecast df;
        df.day_start = day;
        const auto load_rows = training_rows(ds, nwp, FeatureKind::load, day, options_.window, options_.features);
        const auto pv_rows = training_rows(ds, nwp, FeatureKind::pv, day, options_.window, options_.features);
        if (load_rows.size() >= options_.window.min_rows && pv_rows.size() >= options_.window.min_rows &&
            load_rows.size() > 0 && pv_rows.size() > 0) {
            // Distinct streams per day and series keep the models independent.
            ForestOptions load_opts = options_.forest;
            load_opts.seed = options_.forest.seed ^ static_cast<std::uint64_t>(day.index() * 2);
            ForestOptions pv_opts = options_.forest;
            pv_opts.seed = options_.forest.seed ^ static_cast<std::uint64_t>(day.index() * 2 + 1);
            const auto load_model = QuantileForest::train(load_rows, load_opts);
            const auto pv_model = QuantileForest::train(pv_rows, pv_opts);
            df.load.resize(options_.coverage_hours);
            df.pv.resize(options_.coverage_hours);
            df.available.assign(options_.coverage_hours, true);
            for (std::int64_t h = 0; h < coverage; ++h) {
                const auto i = static_cast<std::size_t>(h);
                const auto lf = build_features(nwp, day + h, FeatureKind::load, options_.features);
                const auto pf = build_features(nwp, day + h, FeatureKind::pv, options_.features);
                if (!lf || !pf) {
                    df.available[i] = false;
                    continue;
                }
                df.load[i] = load_model.predict(lf->flatten());
                df.pv[i] = pv_model.predict(pf->flatten());
            }
            ++modelled_days_;
        }
        days_.emplace(day.index(), std::move(df));
    }
}

ForecastSet QuantileForecaster::forecast(LocalHour start, std::size_t horizon) const {
    const auto it = days_.find(start.day_start().index());
    if (it == days_.end() || it->second.load.empty()) return perfect(*ds_, start, horizon);
    const DayForecast& df = it->second;
    auto fc = ForecastSet::sized(start, horizon);
    for (std::size_t h = 0; h < horizon; ++h) {
        const auto offset = static_cast<std::size_t>((start + static_cast<std::int64_t>(h)) - df.day_start);
        if (offset >= df.load.size() || !df.available[offset]) {
            fc.available[h] = false;
            continue;
        }
        fc.load[h] = df.load[offset];
        fc.pv[h] = df.pv[offset];
    }
    return fc;
}

}  // namespace solarsched
