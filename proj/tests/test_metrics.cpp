#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "solarsched/error.hpp"
#include "solarsched/metrics.hpp"
#include "solarsched/random.hpp"

using namespace solarsched;

using V = std::vector<double>;

TEST(Mape, HandExample) {
    EXPECT_NEAR(mape(V{2, 4}, V{1, 5}), 37.5, 1e-12);
    EXPECT_EQ(mape(V{2, 4}, V{2, 4}), 0.0);
}

TEST(Mape, ZeroActualThrows) {
    try {
        mape(V{0, 4}, V{1, 5});
        FAIL();
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find("zero actual"), std::string::npos);
    }
}

TEST(Nmae, HandExamples) {
    EXPECT_NEAR(nmae(V{2, 2}, V{1, 3}), 0.5, 1e-12);
    EXPECT_EQ(nmae(V{2, 2}, V{2, 2}), 0.0);
    EXPECT_NEAR(nmae(V{2, 3, 0.5}, V{0, 0, 0}), 1.0, 1e-12);
    EXPECT_THROW(nmae(V{0, 0}, V{1, 1}), Error);
}

TEST(Nrmse, HandExamples) {
    EXPECT_NEAR(nrmse(V{2, 2}, V{1, 3}), std::sqrt(2.0 / 8.0), 1e-12);
    EXPECT_NEAR(nrmse(V{2, 2}, V{1, 3}), 0.5, 1e-12);
    EXPECT_EQ(nrmse(V{2, 2}, V{2, 2}), 0.0);
    EXPECT_NEAR(nrmse(V{2, 3, 0.5}, V{0, 0, 0}), 1.0, 1e-12);
    EXPECT_THROW(nrmse(V{0, 0}, V{1, 1}), Error);
}

TEST(Pinball, Examples) {
    EXPECT_NEAR(pinball(V{0, 2}, V{1, 1}, 0.5), 0.5, 1e-12);
    EXPECT_EQ(pinball(V{1, 2}, V{1, 2}, 0.3), 0.0);
    const double under = pinball(V{1}, V{0}, 0.9);
    const double over = pinball(V{0}, V{1}, 0.9);
    EXPECT_NEAR(under / over, 9.0, 1e-12);
    EXPECT_THROW(pinball(V{1}, V{1}, 0.0), Error);
    EXPECT_THROW(pinball(V{1}, V{1}, 1.0), Error);
}

TEST(Metrics, MismatchedLengthsThrow) {
    EXPECT_THROW(nmae(V{1, 2}, V{1}), Error);
    EXPECT_THROW(mape(V{1, 2}, V{1}), Error);
}

TEST(Metrics, GapsSkippedPairwise) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    EXPECT_NEAR(nmae(V{2, nan, 2}, V{1, 5, 3}), 0.5, 1e-12);
    EXPECT_NEAR(nrmse(V{2, 7, 2}, V{1, nan, 3}), 0.5, 1e-12);
    EXPECT_NEAR(mape(V{2, 0, 4}, V{1, nan, 5}), 37.5, 1e-12);
    const auto rep = error_report(V{2, nan, 2}, V{1, 1, 3});
    EXPECT_EQ(rep.n, 2u);
}

TEST(Metrics, ScaleInvariance) {
    Rng rng(4);
    V s, p;
    for (int i = 0; i < 50; ++i) {
        s.push_back(rng.uniform(0.1, 3));
        p.push_back(rng.uniform(0, 3));
    }
    for (double c : {0.01, 3.0, 1000.0}) {
        V sc, pc;
        for (std::size_t i = 0; i < s.size(); ++i) {
            sc.push_back(s[i] * c);
            pc.push_back(p[i] * c);
        }
        EXPECT_NEAR(nmae(s, p), nmae(sc, pc), 1e-12);
        EXPECT_NEAR(nrmse(s, p), nrmse(sc, pc), 1e-12);
    }
}

TEST(ErrorReport, MapeNanWhenZeroActual) {
    const auto rep = error_report(V{0, 2}, V{0, 1});
    EXPECT_TRUE(std::isnan(rep.mape));
    EXPECT_NEAR(rep.nmae, 0.5, 1e-12);
}

TEST(PercentileTable, Shape) {
    std::vector<SiteErrors> sites;
    for (int i = 0; i < 5; ++i) {
        SiteErrors e;
        e.site_id = "s" + std::to_string(i);
        e.load.nmae = 0.1 * i;
        e.load.nrmse = 0.2 * i;
        e.pv.nmae = 1.0 - 0.1 * i;
        e.pv.nrmse = 0.5;
        sites.push_back(e);
    }
    const auto table = percentile_table(sites);
    ASSERT_EQ(table.rows.size(), kPercentileRows.size());
    EXPECT_EQ(table.rows.front().percentile, 0.0);
    EXPECT_EQ(table.rows.back().percentile, 100.0);
    EXPECT_NEAR(table.rows[3].load_nmae, 0.2, 1e-12);
    EXPECT_NEAR(table.rows[1].load_nmae, 0.08, 1e-12);
    EXPECT_NEAR(table.rows.back().pv_nmae, 1.0, 1e-12);
    std::ostringstream out;
    write_percentile_table(out, table);
    EXPECT_EQ(out.str().rfind("percentile,load_nmae,load_nrmse,pv_nmae,pv_nrmse\n", 0), 0u);
}
