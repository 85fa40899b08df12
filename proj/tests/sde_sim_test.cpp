#include "evperm/error.hpp"
#include "evperm/experiments.hpp"
#include "evperm/sde_sim.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace evperm {
namespace {

SimConfig config_for(VolModel model, double c, std::uint64_t seed) {
    SimConfig cfg;
    cfg.model = model;
    cfg.jump_c = c;
    cfg.seed = seed;
    return cfg;
}

TEST(SimulateDay, Shape) {
    const SimulatedDay day = simulate_day(config_for(VolModel::a, 0.0, 1));
    EXPECT_EQ(day.returns.size(), 390u);
    EXPECT_EQ(day.sigma2_path.size(), 390u);
    EXPECT_EQ(day.v1_path.size(), 390u);
    EXPECT_EQ(day.v2_path.size(), 390u);
    EXPECT_EQ(day.event_index, 195u);
    EXPECT_TRUE(std::all_of(day.returns.begin(), day.returns.end(), [](double x) { return std::isfinite(x); }));
}

TEST(SimulateDay, DeterministicInSeed) {
    const SimulatedDay a = simulate_day(config_for(VolModel::b, 1.0, 9));
    const SimulatedDay b = simulate_day(config_for(VolModel::b, 1.0, 9));
    const SimulatedDay c = simulate_day(config_for(VolModel::b, 1.0, 10));
    EXPECT_EQ(a.returns, b.returns);
    EXPECT_NE(a.returns, c.returns);
}

TEST(SimulateDay, NoJumpWithoutC) {
    for (VolModel m : {VolModel::a, VolModel::b}) {
        const SimulatedDay day = simulate_day(config_for(m, 0.0, 2));
        EXPECT_EQ(day.sigma2_before_event, day.sigma2_after_event);
    }
}

TEST(SimulateDay, JumpRaisesVarianceByTwiceC) {
    for (VolModel m : {VolModel::a, VolModel::b}) {
        const SimulatedDay day = simulate_day(config_for(m, 3.5, 3));
        EXPECT_NEAR(day.sigma2_after_event - day.sigma2_before_event, 7.0, 1e-12);
        EXPECT_NEAR(day.sigma2_path[195] - day.sigma2_path[194], 7.0, 0.5);
    }
}

TEST(SimulateDay, JumpOnlyShiftsFactorsFromEventOnwards) {
    // Same seed with and without a jump: identical paths before the event.
    const SimulatedDay base = simulate_day(config_for(VolModel::a, 0.0, 4));
    const SimulatedDay jumped = simulate_day(config_for(VolModel::a, 2.0, 4));
    for (std::size_t i = 0; i < 195; ++i) EXPECT_EQ(base.returns[i], jumped.returns[i]);
    EXPECT_NE(base.returns[195], jumped.returns[195]);
}

TEST(SimulateDay, FrozenFactorsGiveStandardNormalReturns) {
    SimConfig cfg = config_for(VolModel::a, 0.0, 5);
    cfg.vol_of_vol_scale = 0.0;
    std::vector<double> all;
    for (std::uint64_t s = 0; s < 20; ++s) {
        cfg.seed = s;
        const SimulatedDay day = simulate_day(cfg);
        for (double v : day.sigma2_path) EXPECT_NEAR(v, 1.0, 1e-12);
        all.insert(all.end(), day.returns.begin(), day.returns.end());
    }
    const double n = static_cast<double>(all.size());
    const double mean = std::accumulate(all.begin(), all.end(), 0.0) / n;
    double var = 0.0;
    for (double x : all) var += (x - mean) * (x - mean);
    var /= n - 1;
    EXPECT_NEAR(mean, 0.0, 0.05);
    EXPECT_NEAR(var, 1.0, 0.05);

    // A single day also looks standard normal.
    const SimulatedDay day = simulate_day(cfg);
    double sumsq = 0.0;
    for (double x : day.returns) sumsq += x * x;
    EXPECT_NEAR(sumsq / 390.0, 1.0, 0.15);
}

TEST(SimulateDay, VariancesStayNonNegative) {
    for (VolModel m : {VolModel::a, VolModel::b}) {
        for (std::uint64_t s = 0; s < 10; ++s) {
            SimConfig cfg = config_for(m, 0.0, s);
            cfg.driver = s % 2 ? LevyDriver::truncated_stable(1.5, 10) : LevyDriver::brownian();
            cfg.vol_of_vol_scale = 4.0;  // push the fast factor towards zero often
            const SimulatedDay day = simulate_day(cfg);
            for (std::size_t i = 0; i < day.returns.size(); ++i) {
                EXPECT_GE(day.sigma2_path[i], 0.0);
                EXPECT_GE(day.v1_path[i], 0.0);
                EXPECT_GE(day.v2_path[i], 0.0);
                ASSERT_TRUE(std::isfinite(day.returns[i]));
            }
        }
    }
}

TEST(SimulateDay, StableDriverRuns) {
    SimConfig cfg = config_for(VolModel::b, 1.0, 6);
    cfg.driver = LevyDriver::truncated_stable(1.5, 10);
    const SimulatedDay day = simulate_day(cfg);
    EXPECT_EQ(day.returns.size(), 390u);
}

TEST(SimConfig, Validation) {
    SimConfig cfg;
    EXPECT_NO_THROW(cfg.validate(90));
    EXPECT_THROW(cfg.validate(195), ValidationError);

    auto bad = [](auto mutate) {
        SimConfig c;
        mutate(c);
        return c;
    };
    EXPECT_THROW(bad([](SimConfig& c) { c.jump_c = -1; }).validate(), ValidationError);
    EXPECT_THROW(bad([](SimConfig& c) { c.rho = 1.5; }).validate(), ValidationError);
    EXPECT_THROW(bad([](SimConfig& c) { c.mesh_per_interval = 0; }).validate(), ValidationError);
    EXPECT_THROW(bad([](SimConfig& c) { c.event_index = 390; }).validate(), ValidationError);
    EXPECT_THROW(bad([](SimConfig& c) { c.v1_0 = -0.1; }).validate(), ValidationError);
    EXPECT_THROW(bad([](SimConfig& c) { c.driver.beta = 1.5; }).validate(), ValidationError);
    EXPECT_THROW(bad([](SimConfig& c) { c.burn_in_days = -1; }).validate(), ValidationError);
    EXPECT_THROW(simulate_day(bad([](SimConfig& c) { c.intervals_per_day = 0; })), ValidationError);
}

TEST(ExtractWindow, DropsEventObservation) {
    const std::vector<double> series{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
    const SplitSample s = extract_window(series, 5, 2, 2);
    EXPECT_EQ(std::vector<double>(s.pre().begin(), s.pre().end()), (std::vector<double>{3, 4}));
    EXPECT_EQ(std::vector<double>(s.post().begin(), s.post().end()), (std::vector<double>{6, 7}));

    const SplitSample u = extract_window(series, 5, 5, 4);
    EXPECT_EQ(u.k1(), 5u);
    EXPECT_EQ(u.k2(), 4u);
    EXPECT_EQ(u.pre().front(), 0.0);
    EXPECT_EQ(u.post().back(), 9.0);
}

TEST(ExtractWindow, RangeErrors) {
    const std::vector<double> series{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
    EXPECT_THROW(extract_window(series, 5, 6, 2), RangeError);
    EXPECT_THROW(extract_window(series, 5, 2, 5), RangeError);
    EXPECT_THROW(extract_window(series, 10, 1, 1), RangeError);
    EXPECT_THROW(extract_window(series, 5, 0, 2), RangeError);
}

TEST(ExtractWindow, FromDay) {
    const SimulatedDay day = simulate_day(config_for(VolModel::a, 0.0, 7));
    const SplitSample s = extract_window(day, 90, 90);
    EXPECT_EQ(s.pre().front(), day.returns[105]);
    EXPECT_EQ(s.post().back(), day.returns[285]);
}

TEST(SimulateDay, MeshRefinementLeavesNullRateStable) {
    ExperimentGrid grid;
    grid.k_values = {30};
    grid.trials = 2000;
    grid.permutations = 1000;
    grid.threads = 1;
    const double coarse = run_grid(grid).find(VolModel::a, LevyDriver::brownian(), 30, 0.0, TestKind::perm)->rate();
    grid.day_template.mesh_per_interval = 120;
    const double fine = run_grid(grid).find(VolModel::a, LevyDriver::brownian(), 30, 0.0, TestKind::perm)->rate();
    EXPECT_LT(std::fabs(fine - coarse), 0.015) << coarse << " vs " << fine;
}

}  // namespace
}  // namespace evperm
