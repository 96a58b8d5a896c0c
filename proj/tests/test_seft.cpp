// Copyright 2026 The Scramblon Lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "generators.hpp"
#include "scramblon/brownian.hpp"
#include "scramblon/errors.hpp"
#include "scramblon/seft.hpp"

using namespace scramblon;
using namespace scramblon::seft;

namespace {

constexpr double kKappa = brownian::kLyapunov;

SourceFunction exp_source() {
    return SourceFunction::sample(graded_grid(80.0, 40001, 3.0), [](double y) { return std::exp(-y); });
}

const std::vector<Transform> kRational{[](double x) { return 1.0 / (1.0 + x); }};

std::vector<SizeDistribution> master_snapshots(int N, std::vector<double> times) {
    brownian::BrownianParams p;
    p.N = N;
    p.dt = brownian::build_rates(N).max_stable_dt();
    p.t_max = times.back();
    p.record_times = std::move(times);
    return brownian::integrate_master(p);
}

}  // namespace

TEST(forward, limits) {
    const auto h = exp_source();
    const auto zero = forward_size_distribution(h, kRational, 0.0, 101);
    EXPECT_NEAR(mean_size(zero), 0.0, 1e-12);
    const auto inf = forward_size_distribution(h, kRational, std::numeric_limits<double>::infinity(), 101);
    EXPECT_NEAR(mean_size(inf), kScrambledSize, 0.01);
    EXPECT_THROW(forward_size_distribution(h, kRational, -1.0, 101), ConfigError);
}

TEST(forward, closed_form_late_density) {
    // h = e^{-y}, f = 1/(1+x) gives the late-time Brownian density with
    // lambda = e^{kappa t} / (s_sc N).
    const int N = 100000;
    const double t = 8.0 / kKappa;
    const double lambda = std::exp(kKappa * t) / (kScrambledSize * N);
    const auto h = SourceFunction::sample(graded_grid(80.0, 100001, 2.0), [](double y) { return std::exp(-y); });
    const auto d = forward_size_distribution(h, kRational, lambda, 4001);
    // Both sides normalized by the same trapezoid rule.
    const auto ref_d = brownian::analytic_late(N, t, 4001);
    double worst = 0.0;
    for (std::size_t k = 0; k < d.size(); ++k) {
        const double s = d.grid()[k];
        if (s > 0.5) break;  // the y grid ends at 80; beyond this h is below 1e-30
        const double ref = ref_d.density()[k];
        worst = std::max(worst, std::abs(d.density()[k] - ref) / ref);
    }
    EXPECT_LT(worst, 1e-6);
}

TEST(forward, per_direction_transforms_average) {
    const std::vector<Transform> three{kRational[0], kRational[0], kRational[0]};
    const auto a = forward_size_distribution(exp_source(), three, 0.5, 201);
    const auto b = forward_size_distribution(exp_source(), kRational, 0.5, 201);
    EXPECT_LT(distribution_distance(a, b).sup, 1e-8);
    const std::vector<Transform> two{kRational[0], kRational[0]};
    EXPECT_THROW(forward_size_distribution(exp_source(), two, 0.5, 201), ConfigError);
}

TEST(forward, rejects_non_monotone_transform) {
    const std::vector<Transform> bad{[](double x) { return std::cos(x); }};
    EXPECT_THROW(forward_size_distribution(exp_source(), bad, 1.0, 101), ConfigError);
}

TEST(forward, narrow_distribution_is_a_point_mass) {
    const auto h = SourceFunction::normalized(uniform_grid(1.0, 1.001, 11), std::vector<double>(11, 1.0));
    const auto d = forward_size_distribution(h, kRational, 1.0, 101);
    EXPECT_FALSE(d.warnings().empty());
    EXPECT_NEAR(mean_size(d), 0.375, 0.01);
}

// ---------------------------------------------------------------------------

TEST(fit_kappa, exact_exponential) {
    std::vector<std::pair<double, double>> pts;
    for (double t : {0.1, 0.3, 0.5, 0.7}) pts.emplace_back(t, std::exp(kKappa * t) / 10000.0);
    const auto fit = fit_kappa(pts);
    EXPECT_NEAR(fit.kappa, kKappa, 1e-12);
    EXPECT_NEAR(fit.log_intercept, -std::log(10000.0), 1e-10);
    EXPECT_NEAR(fit.r_squared, 1.0, 1e-12);
    EXPECT_FALSE(fit.degenerate);
}

TEST(fit_kappa, analytic_early_means) {
    std::vector<std::pair<double, double>> pts;
    for (double kt0 : {2.0, 2.5, 3.0, 3.5}) {
        const double t0 = kt0 / kKappa;
        const auto e = brownian::analytic_early(10000, t0, graded_grid(1.0, 4001, 2.0));
        pts.emplace_back(t0, mean_size(e.distribution));
    }
    EXPECT_NEAR(fit_kappa(pts).kappa, kKappa, 0.01);
}

TEST(fit_kappa, master_early_data) {
    const auto snaps = master_snapshots(10000, {0.5, 0.8, 1.1, 1.4});
    EXPECT_NEAR(fit_kappa(snaps).kappa, kKappa, 0.03);
}

TEST(fit_kappa, degenerate_and_guards) {
    const std::vector<std::pair<double, double>> flat{{0.1, 0.01}, {0.2, 0.01}, {0.3, 0.01}};
    const auto fit = fit_kappa(flat);
    EXPECT_TRUE(fit.degenerate);
    EXPECT_TRUE(std::isnan(fit.r_squared));
    const std::vector<std::pair<double, double>> two{{0.1, 0.01}, {0.2, 0.02}};
    EXPECT_THROW(fit_kappa(two), ConfigError);
    const std::vector<std::pair<double, double>> late{{0.1, 0.01}, {0.2, 0.02}, {0.3, 0.2}};
    EXPECT_THROW(fit_kappa(late), ConfigError);
    const std::vector<std::pair<double, double>> same{{0.1, 0.01}, {0.1, 0.02}, {0.1, 0.03}};
    EXPECT_THROW(fit_kappa(same), ConfigError);
}

// ---------------------------------------------------------------------------

TEST(predict_late, reproduces_closed_form) {
    const int N = 10000;
    const double t0 = 1.0 / kKappa;
    const auto early = brownian::analytic_early(N, t0, 100001).distribution;
    for (double kt : {4.0, 7.0, 10.0}) {
        const double t = kt / kKappa;
        const auto late = predict_late(early, kKappa, t);
        EXPECT_LT(distribution_distance(late, brownian::analytic_late(N, t, 512)).l1, 1e-2) << kt;
    }
}

TEST(predict_late, zero_elapsed_time_is_near_identity) {
    const int N = 100000;
    const double t0 = 4.0 / kKappa;
    const auto early = brownian::analytic_early(N, t0, 4001).distribution;
    PredictionConfig cfg;
    cfg.output_grid_size = 4001;
    const auto same = predict_late(early, kKappa, t0, cfg);
    EXPECT_LT(distribution_distance(same, early).l1, 0.05);
}

TEST(predict_late, point_mass_input) {
    const auto early = ContinuumDistribution::point_mass(uniform_grid(0.0, 1.0, 1001), 0.02, 0.0);
    const double t = 1.0;
    const auto late = predict_late(early, kKappa, t);
    EXPECT_NEAR(mean_size(late), predict_mean(early, kKappa, t), 2.0 / 511.0);
}

TEST(predict_late, guards) {
    const auto early = brownian::analytic_early(10000, 0.5, 1001).distribution;
    EXPECT_THROW(predict_late(early, kKappa, 0.1), ConfigError);
    EXPECT_THROW(predict_late(early, 0.0, 1.0), ConfigError);
    PredictionConfig cfg;
    cfg.method = DeltaMethod::gaussian_delta;
    cfg.sigma = 1e-3;
    EXPECT_THROW(predict_late(early, kKappa, 1.0, cfg), ConfigError);
    EXPECT_THROW(delta_method_from_string("nope"), ConfigError);
    EXPECT_EQ(delta_method_from_string("gaussian_delta"), DeltaMethod::gaussian_delta);
}

TEST(predict_late, warns_outside_early_regime) {
    const auto early = brownian::analytic_early(100, 1.0, 1001).distribution;
    EXPECT_FALSE(predict_late(early, kKappa, 2.0).warnings().empty());
}

TEST(predict_mean, limits) {
    const auto early = brownian::analytic_early(10000, 0.5, graded_grid(1.0, 4001, 2.0)).distribution;
    // Only the s = 0 node survives, with its quadrature weight (~1e-4 here).
    EXPECT_NEAR(predict_mean(early, kKappa, 50.0), kScrambledSize, 2e-4);
    // At zero elapsed time the map is the identity to first order in sbar0.
    EXPECT_NEAR(predict_mean(early, kKappa, 0.5), mean_size(early), 0.02 * mean_size(early));
}

TEST(predict_mean, matches_moment_formula) {
    const int N = 100000;
    const double t0 = 3.0 / kKappa;
    const auto early = brownian::analytic_early(N, t0, graded_grid(1.0, 4001, 2.0)).distribution;
    for (double kt : {3.0, 6.0, 9.0, 12.0}) {
        const double t = kt / kKappa;
        EXPECT_NEAR(predict_mean(early, kKappa, t) / kScrambledSize, brownian::moment_formula(N, t), 1e-3) << kt;
    }
}

TEST(predict_mean, agrees_with_predicted_distribution) {
    const auto early = brownian::analytic_early(10000, 0.5, graded_grid(1.0, 4001, 2.0)).distribution;
    for (double kt : {5.0, 8.0}) {
        PredictionConfig cfg;
        cfg.output_grid_size = 2001;
        const double t = kt / kKappa;
        EXPECT_NEAR(mean_size(predict_late(early, kKappa, t, cfg)), predict_mean(early, kKappa, t), 2e-3) << kt;
    }
}

// ---------------------------------------------------------------------------

TEST(distance, examples) {
    const auto s = uniform_grid(0.0, 1.0, 10001);
    std::vector<double> flat(s.size(), 1.0), ramp;
    for (double v : s) ramp.push_back(2.0 * v);
    const ContinuumDistribution a(s, flat, 0.0), b(s, ramp, 0.0);
    const auto d = distribution_distance(a, b);
    EXPECT_NEAR(d.l1, 0.5, 1e-6);
    EXPECT_NEAR(d.sup, 1.0, 1e-12);
    EXPECT_NEAR(d.ks, 0.25, 1e-6);
    const auto z = distribution_distance(a, a);
    EXPECT_EQ(z.l1, 0.0);
    EXPECT_EQ(z.ks, 0.0);
    // Different grids are compared on their union.
    const ContinuumDistribution c(uniform_grid(0.0, 1.0, 3), {1.0, 1.0, 1.0}, 0.0);
    EXPECT_NEAR(distribution_distance(a, c).l1, 0.0, 1e-12);
}

TEST(distance, band_containment) {
    const std::vector<double> v{1, 2, 3, 4}, lo{0, 2, 3.5, 5}, hi{2, 2, 4, 6};
    EXPECT_DOUBLE_EQ(band_containment(v, lo, hi, 0.0), 0.5);
    EXPECT_DOUBLE_EQ(band_containment(v, lo, hi, 1.0), 1.0);
    EXPECT_THROW(band_containment(v, lo, std::vector<double>{1.0}, 0.0), ConfigError);
}

// ---------------------------------------------------------------------------
// Properties.

TEST(seft_property, consistency_map_is_increasing_and_concave) {
    proptest::Gen gen(101);
    for (int trial = 0; trial < 50; ++trial) {
        const auto early = gen.early_density(1001, gen.uniform(0.002, 0.07));
        const ConsistencyMap map(early, kKappa, gen.uniform(0.0, 3.0));
        EXPECT_NEAR(map.g(0.0), 0.0, 1e-15);
        double prev = 0.0, prev_slope = map.g_prime(0.0);
        for (double s = 0.005; s <= 1.0; s += 0.005) {
            const double cur = map.g(s);
            const double slope = map.g_prime(s);
            EXPECT_GE(cur, prev);
            EXPECT_LE(cur, kScrambledSize);
            EXPECT_LE(slope, prev_slope * (1 + 1e-12) + 1e-300);
            prev = cur;
            prev_slope = slope;
        }
        const double target = 0.5 * map.g(1.0);
        EXPECT_NEAR(map.g(map.inverse(target, 1.0)), target, 1e-12);
    }
}

TEST(seft_property, predictions_normalized_and_below_scrambled_size) {
    proptest::Gen gen(102);
    for (int trial = 0; trial < 30; ++trial) {
        const auto early = gen.early_density(2001, gen.uniform(0.005, 0.05));
        const double t = gen.uniform(0.0, 8.0 / kKappa);
        const auto late = predict_late(early, kKappa, t);
        EXPECT_NEAR(trapezoid(late.grid(), late.density()), 1.0, 1e-9);
        const double spacing = late.grid()[1];
        for (std::size_t k = 0; k < late.size(); ++k) {
            if (late.grid()[k] > kScrambledSize + spacing) {
                EXPECT_EQ(late.density()[k], 0.0);
            }
        }
    }
}

TEST(seft_property, delta_methods_agree) {
    proptest::Gen gen(103);
    for (int trial = 0; trial < 10; ++trial) {
        const auto early = gen.early_density(2001, gen.uniform(0.005, 0.03));
        const double t = gen.uniform(4.0, 8.0) / kKappa;
        PredictionConfig cov, gauss;
        cov.output_grid_size = gauss.output_grid_size = 1001;
        gauss.method = DeltaMethod::gaussian_delta;
        gauss.sigma = 0.004;
        const auto a = predict_late(early, kKappa, t, cov);
        const auto b = predict_late(early, kKappa, t, gauss);
        // Smoothing by a Gaussian moves mass by about sigma: the Wasserstein
        // distance int |CDF_a - CDF_b| stays below sigma.
        const auto ca = cumulative_trapezoid(a.grid(), a.density());
        const auto cb = cumulative_trapezoid(b.grid(), b.density());
        std::vector<double> gap(ca.size());
        for (std::size_t k = 0; k < gap.size(); ++k) gap[k] = std::abs(ca[k] - cb[k]);
        EXPECT_LT(trapezoid(a.grid(), gap), gauss.sigma);
    }
}

TEST(seft_property, choice_of_t0_does_not_matter) {
    const int N = 100000;
    for (double kt : {6.0, 9.0}) {
        const double t = kt / kKappa;
        const auto grid = graded_grid(1.0, 20001, 2.0);
        const auto a = predict_late(brownian::analytic_early(N, 2.0 / kKappa, grid).distribution, kKappa, t);
        const auto b = predict_late(brownian::analytic_early(N, 3.0 / kKappa, grid).distribution, kKappa, t);
        EXPECT_LT(distribution_distance(a, b).l1, 1e-2) << kt;
    }
}

// ---------------------------------------------------------------------------

TEST(protocol, rejects_stationary_input) {
    const std::vector<SizeDistribution> data{brownian::stationary_distribution(50)};
    EXPECT_THROW(run_protocol(data), ConfigError);
}

TEST(protocol, rejects_missing_t0_window) {
    const auto snaps = master_snapshots(1000, {0.1, 0.2, 0.3, 3.0});
    EXPECT_THROW(run_protocol(snaps), ConfigError);
}

TEST(protocol, small_N_is_flagged_finite_size) {
    const auto snaps = master_snapshots(16, {0.01, 0.02, 0.03, 0.04, 2.0, 8.0 / kKappa});
    ProtocolOptions opt;
    opt.fit_window_hi = 0.1;
    opt.t0_window_lo = 0.09;
    opt.t0_window_hi = 0.1;
    opt.kappa = kKappa;
    const auto report = run_protocol(snaps, opt);
    ASSERT_FALSE(report.per_time.empty());
    EXPECT_TRUE(report.per_time.back().finite_size_flag);
}

TEST(protocol, large_N_band) {
    const auto snaps = master_snapshots(10000, {0.5, 0.8, 1.1, 1.4, 1.8, 1.85, 1.9, 8.0 / kKappa});
    const auto report = run_protocol(snaps);
    EXPECT_NEAR(report.fit.kappa, kKappa, 0.03);
    ASSERT_EQ(report.per_time.size(), 1u);
    const auto& b = report.per_time[0];
    for (std::size_t k = 0; k < b.s.size(); ++k) EXPECT_LE(b.lo[k], b.hi[k]);
    EXPECT_LT(b.l1, 0.05);
    EXPECT_FALSE(b.finite_size_flag);
}
