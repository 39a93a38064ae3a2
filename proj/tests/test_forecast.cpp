#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "solarsched/error.hpp"
#include "solarsched/forecast.hpp"
#include "solarsched/metrics.hpp"
#include "solarsched/stats.hpp"
#include "solarsched/synthetic.hpp"
#include "support/builders.hpp"

using namespace solarsched;
using solarsched::fixtures::make_dataset;
using solarsched::fixtures::monday;

namespace {

// Three identical days with hour-dependent values.
InverterDataset periodic(int days) {
    std::vector<double> load, pv;
    for (int d = 0; d < days; ++d) {
        for (int h = 0; h < 24; ++h) {
            load.push_back(0.2 + 0.05 * h);
            pv.push_back(h >= 7 && h <= 17 ? 0.1 * (h - 6) : 0.0);
        }
    }
    return make_dataset(load, pv);
}

GridHour flat_grid(double value, std::array<double, 4> dist = {5, 10, 20, 40}) {
    GridHour g{};
    for (std::size_t i = 0; i < kGridPoints; ++i) {
        g[i].grid_id = static_cast<int>(i + 1);
        g[i].distance_km = dist[i];
        g[i].temp_2m = value;
        g[i].rh_1000 = value;
        g[i].dswrf = value;
        g[i].pressure = value;
        g[i].u10 = value;
        g[i].v10 = value;
        g[i].tcc = 0.5;
    }
    return g;
}

std::vector<double> q50s(const std::vector<QuantileTriple>& v) {
    std::vector<double> out;
    for (const auto& q : v) out.push_back(q.q50);
    return out;
}

}  // namespace

TEST(Persistence24h, RepeatsYesterday) {
    std::vector<double> load(48, 0.5), pv(48, 0.0);
    pv[14] = 2.0;
    const auto ds = make_dataset(load, pv);
    const auto fc = persistence_24h(ds, monday(24), 24, PersistSeries::pv);
    EXPECT_DOUBLE_EQ(fc.pv[14].q50, 2.0);
    EXPECT_DOUBLE_EQ(fc.pv[14].q40, 2.0);
    EXPECT_DOUBLE_EQ(fc.pv[14].q60, 2.0);
}

TEST(Persistence24h, SeriesSelectionKeepsOtherActual) {
    std::vector<double> load, pv;
    for (int i = 0; i < 48; ++i) {
        load.push_back(i < 24 ? 1.0 : 2.0);
        pv.push_back(i < 24 ? 0.5 : 0.7);
    }
    const auto ds = make_dataset(load, pv);
    const auto pv_only = persistence_24h(ds, monday(24), 24, PersistSeries::pv);
    EXPECT_DOUBLE_EQ(pv_only.pv[3].q50, 0.5);
    EXPECT_DOUBLE_EQ(pv_only.load[3].q50, 2.0);
    const auto load_only = persistence_24h(ds, monday(24), 24, PersistSeries::load);
    EXPECT_DOUBLE_EQ(load_only.pv[3].q50, 0.7);
    EXPECT_DOUBLE_EQ(load_only.load[3].q50, 1.0);
    const auto both = persistence_24h(ds, monday(24), 24, PersistSeries::both);
    EXPECT_DOUBLE_EQ(both.pv[3].q50, 0.5);
    EXPECT_DOUBLE_EQ(both.load[3].q50, 1.0);
}

TEST(Persistence24h, ExactOnPeriodicData) {
    const auto ds = periodic(4);
    for (int start = 24; start < 72; start += 5) {
        const auto fc = persistence_24h(ds, monday(start), 24, PersistSeries::both);
        const auto act = perfect(ds, monday(start), 24);
        EXPECT_EQ(nmae(q50s(act.load), q50s(fc.load)), 0.0);
        EXPECT_EQ(nmae(q50s(act.pv), q50s(fc.pv)), 0.0);
    }
}

TEST(Persistence24h, WarmupUsesActuals) {
    const auto ds = periodic(2);
    const auto fc = persistence_24h(ds, monday(3), 24, PersistSeries::both);
    const auto act = perfect(ds, monday(3), 24);
    EXPECT_EQ(fc.load, act.load);
    EXPECT_EQ(fc.pv, act.pv);
}

TEST(Persistence24h, GapFallsBackAWeek) {
    std::vector<HourlyRecord> recs;
    for (int i = 0; i < 24 * 4; ++i) recs.push_back({monday() + i, 1.0 + i / 24, 0.0, true});
    recs[24 * 2 + 10].present = false;  // source for day 3 hour 10
    const InverterDataset ds("g", 600, recs);
    const auto fc = persistence_24h(ds, monday(72), 24, PersistSeries::load);
    EXPECT_TRUE(fc.available[10]);
    EXPECT_DOUBLE_EQ(fc.load[10].q50, 2.0);
    EXPECT_DOUBLE_EQ(fc.load[11].q50, 3.0);
}

TEST(Persistence24h, NoSourceWithinWeekIsUnavailable) {
    std::vector<HourlyRecord> recs;
    for (int i = 0; i < 48; ++i) recs.push_back({monday() + i, 1.0, 0.0, i == 0 || i > 24});
    const InverterDataset ds("g", 600, recs);
    const auto fc = persistence_24h(ds, monday(26), 24, PersistSeries::load);
    EXPECT_FALSE(fc.available[0]);
    EXPECT_TRUE(fc.available[22]);
}

TEST(Persistence1h, FlatAcrossHorizon) {
    std::vector<double> load(30, 0.5), pv(30, 0.0);
    load[9] = 1.3;
    pv[9] = 0.8;
    const auto ds = make_dataset(load, pv);
    const auto fc = persistence_1h(ds, monday(10), 24);
    for (std::size_t h = 0; h < 24; ++h) {
        EXPECT_DOUBLE_EQ(fc.load[h].q50, 1.3);
        EXPECT_DOUBLE_EQ(fc.pv[h].q50, 0.8);
    }
}

TEST(Persistence1h, GapAtSourceUsesPreviousDays) {
    std::vector<HourlyRecord> recs;
    for (int i = 0; i < 40; ++i) recs.push_back({monday() + i, 0.1 * (i % 24), 0.0, i != 33});
    const InverterDataset ds("g", 600, recs);
    const auto fc = persistence_1h(ds, monday(34), 4);
    EXPECT_TRUE(fc.available[0]);
    EXPECT_DOUBLE_EQ(fc.load[0].q50, 0.1 * 9);
    std::vector<HourlyRecord> early;
    for (int i = 0; i < 10; ++i) early.push_back({monday() + i, 0.5, 0.0, i != 4});
    const auto none = persistence_1h(InverterDataset("e", 600, early), monday(5), 3);
    EXPECT_FALSE(none.available[0]);
}

TEST(Perfect, EqualsActuals) {
    const auto ds = periodic(2);
    const auto fc = perfect(ds, monday(5), 24);
    for (std::size_t h = 0; h < 24; ++h) {
        EXPECT_EQ(fc.load[h], QuantileTriple::point(ds.records()[5 + h].load_kwh));
        EXPECT_TRUE(fc.load[h].monotone());
    }
}

TEST(ForecastSet, CsvRoundTrip) {
    auto fc = ForecastSet::sized(monday(), 3);
    fc.load = {{0.1, 0.2, 0.3}, {0.4, 0.5, 0.6}, {1, 1, 1}};
    fc.pv = {{0, 0, 0}, {0.25, 0.5, 0.75}, {2, 2, 2}};
    std::stringstream buf;
    write_forecast(buf, fc, 600);
    const auto back = read_forecast(buf, 600);
    EXPECT_EQ(back.start, fc.start);
    EXPECT_EQ(back.load, fc.load);
    EXPECT_EQ(back.pv, fc.pv);
    fc.load[1] = {0.6, 0.5, 0.4};
    EXPECT_THROW(fc.validate(), Error);
}

TEST(Features, CalendarEncodings) {
    FeatureVector fv;
    encode_calendar(fv, monday(6));
    EXPECT_NEAR(fv.sin_hour, 1.0, 1e-12);
    EXPECT_NEAR(fv.cos_hour, 0.0, 1e-12);
    EXPECT_NEAR(fv.sin_hour * fv.sin_hour + fv.cos_hour * fv.cos_hour, 1.0, 1e-12);
    const auto dec31 = LocalHour::from_civil(std::chrono::year{2018} / std::chrono::December / std::chrono::day{31}, 0);
    encode_calendar(fv, dec31);
    EXPECT_NEAR(fv.sin_jday, 0.0, 1e-12);
    EXPECT_NEAR(fv.cos_jday, 1.0, 1e-12);
    FeatureVector a, b;
    encode_calendar(a, monday(5));
    encode_calendar(b, monday(5 + 24));
    EXPECT_NEAR(a.sin_hour, b.sin_hour, 1e-12);
    EXPECT_NEAR(a.cos_hour, b.cos_hour, 1e-12);
}

TEST(Features, IdwProperties) {
    const std::vector<double> same{3.5, 3.5, 3.5, 3.5};
    const std::vector<double> d{1.0, 2.5, 7.0, 11.0};
    EXPECT_NEAR(idw(same, d), 3.5, 1e-12);
    const std::vector<double> v{1.0, 2.0, 3.0, 4.0};
    std::vector<double> scaled;
    for (double x : d) scaled.push_back(x * 17.0);
    EXPECT_NEAR(idw(v, d), idw(v, scaled), 1e-12);
    EXPECT_NEAR(idw(v, std::vector<double>{1, 1, 1, 1}), 2.5, 1e-12);
    EXPECT_DOUBLE_EQ(idw(v, std::vector<double>{3, 0, 2, 2}), 2.0);
}

TEST(Features, BuildFromTable) {
    std::vector<std::optional<GridHour>> hours(3, flat_grid(12.0));
    hours[1] = std::nullopt;
    const NwpTable nwp(monday(), hours);
    const auto fv = build_features(nwp, monday(0), FeatureKind::pv);
    ASSERT_TRUE(fv.has_value());
    EXPECT_DOUBLE_EQ(fv->temperature_2m.idw, 12.0);
    ASSERT_TRUE(fv->pv.has_value());
    EXPECT_DOUBLE_EQ(fv->pv->dswrf_lead[0].nearest, 12.0);  // missing neighbour reuses hour t
    EXPECT_DOUBLE_EQ(fv->pv->tcc_times_dswrf.idw, 6.0);
    EXPECT_FALSE(build_features(nwp, monday(1), FeatureKind::pv).has_value());
    EXPECT_EQ(build_features(nwp, monday(0), FeatureKind::load)->flatten().size(),
              feature_names(FeatureKind::load).size());
    EXPECT_EQ(fv->flatten().size(), feature_names(FeatureKind::pv).size());
    FeatureOptions reserve;
    reserve.reserve_module_columns = true;
    EXPECT_EQ(build_features(nwp, monday(0), FeatureKind::pv, reserve)->flatten().size(),
              feature_names(FeatureKind::pv, reserve).size());
}

TEST(Features, NwpCsvRoundTrip) {
    const auto fx = make_fixture({.days = 2});
    std::stringstream buf;
    write_nwp(buf, fx.nwp, 600);
    const auto back = read_nwp(buf, 600);
    EXPECT_EQ(back.start(), fx.nwp.start());
    EXPECT_EQ(back.end(), fx.nwp.end());
    for (auto t = back.start(); t < back.end(); ++t) {
        ASSERT_NE(back.at(t), nullptr);
        EXPECT_DOUBLE_EQ((*back.at(t))[2].dswrf, (*fx.nwp.at(t))[2].dswrf);
    }
}

TEST(Stats, LinearInterpolationQuantiles) {
    const std::vector<double> v{5, 1, 4, 2, 3};
    EXPECT_NEAR(quantile(v, 0.4), 2.6, 1e-12);
    EXPECT_NEAR(quantile(v, 0.5), 3.0, 1e-12);
    EXPECT_NEAR(quantile(v, 0.6), 3.4, 1e-12);
    EXPECT_TRUE(std::isnan(quantile(std::vector<double>{}, 0.5)));
}

TEST(QuantileForest, SingleLeafFromFiveSamples) {
    QuantileForest::Tree tree;
    tree.nodes.push_back({-1, 0.0, 0, 0, 0, 5});
    tree.leaf_values = {1, 2, 3, 4, 5};
    const QuantileForest forest(1, {tree});
    const std::vector<double> x{0.0};
    const auto q = forest.predict(x);
    EXPECT_NEAR(q.q40, 2.6, 1e-12);
    EXPECT_NEAR(q.q50, 3.0, 1e-12);
    EXPECT_NEAR(q.q60, 3.4, 1e-12);
    EXPECT_THROW(forest.predict(std::vector<double>{1.0, 2.0}), Error);
}

TEST(QuantileForest, ConstantTargetPredictsConstant) {
    TrainingSet data;
    data.num_features = 2;
    Rng rng(1);
    for (int i = 0; i < 60; ++i) data.add(std::vector<double>{rng.uniform(), rng.uniform()}, 1.75);
    const auto forest = QuantileForest::train(data, {.num_trees = 20});
    const auto q = forest.predict(std::vector<double>{0.3, 0.9});
    EXPECT_DOUBLE_EQ(q.q40, 1.75);
    EXPECT_DOUBLE_EQ(q.q50, 1.75);
    EXPECT_DOUBLE_EQ(q.q60, 1.75);
}

TEST(QuantileForest, LearnsStepFunction) {
    TrainingSet data;
    data.num_features = 1;
    for (int i = 0; i < 400; ++i) {
        const double x = i / 400.0;
        data.add(std::vector<double>{x}, x < 0.5 ? 0.0 : 2.0);
    }
    const auto forest = QuantileForest::train(data, {.num_trees = 30, .min_leaf_size = 5});
    EXPECT_NEAR(forest.predict(std::vector<double>{0.2}).q50, 0.0, 1e-12);
    EXPECT_NEAR(forest.predict(std::vector<double>{0.8}).q50, 2.0, 1e-12);
    const auto q = forest.predict(std::vector<double>{0.9});
    EXPECT_DOUBLE_EQ(q.q40, q.q60);
}

TEST(QuantileForest, ParallelMatchesSerial) {
    TrainingSet data;
    data.num_features = 4;
    Rng rng(8);
    for (int i = 0; i < 300; ++i) {
        std::vector<double> x{rng.uniform(), rng.uniform(), rng.uniform(), rng.uniform()};
        data.add(x, x[0] * 3 + rng.normal() * x[1]);
    }
    const ForestOptions opt{.num_trees = 40, .seed = 77};
    EXPECT_EQ(QuantileForest::train(data, opt), QuantileForest::train_serial(data, opt));
    const ForestOptions other{.num_trees = 40, .seed = 78};
    EXPECT_NE(QuantileForest::train(data, opt), QuantileForest::train(data, other));
}

TEST(QuantileModel, NightPvPredictsZero) {
    const auto fx = make_fixture({.days = 35});
    const auto model =
        train_quantile_model(fx.data, fx.nwp, FeatureKind::pv, fx.data.start() + 24 * 31, {}, {.num_trees = 30});
    const auto t = fx.data.start() + 24 * 31 + 2;  // 02:00
    const auto fv = build_features(fx.nwp, t, FeatureKind::pv);
    ASSERT_TRUE(fv.has_value());
    const auto q = predict_quantiles(model, *fv);
    EXPECT_EQ(q.q60, 0.0);
    const auto load_fv = build_features(fx.nwp, t, FeatureKind::load);
    EXPECT_THROW(predict_quantiles(model, *load_fv), Error);
}

TEST(QuantileModel, EmptyWindowThrows) {
    const auto fx = make_fixture({.days = 3});
    try {
        train_quantile_model(fx.data, fx.nwp, FeatureKind::load, fx.data.start());
        FAIL() << "expected an error";
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find("empty training window"), std::string::npos);
    }
}

TEST(QuantileForecaster, MonotoneAndDeterministic) {
    const auto fx = make_fixture({.days = 10});
    QuantileForecasterOptions opt;
    opt.forest.num_trees = 20;
    const QuantileForecaster a(fx.data, fx.nwp, opt);
    const QuantileForecaster b(fx.data, fx.nwp, opt);
    for (int h = 24; h < 24 * 10; h += 7) {
        const auto fa = a.forecast(fx.data.start() + h, 24);
        EXPECT_NO_THROW(fa.validate());
        const auto fb = b.forecast(fx.data.start() + h, 24);
        EXPECT_EQ(fa.load, fb.load);
        EXPECT_EQ(fa.pv, fb.pv);
    }
    EXPECT_GT(a.days_modelled(), 0u);
}
