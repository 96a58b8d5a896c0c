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

#include <algorithm>
#include <cmath>
#include <filesystem>

#include <gtest/gtest.h>

#include "generators.hpp"
#include "scramblon/core.hpp"
#include "scramblon/csv.hpp"
#include "scramblon/errors.hpp"

using namespace scramblon;

namespace {

SizeDistribution geometric(int N, double kt0) {
    const double q = std::exp(-kt0);
    std::vector<double> p(static_cast<std::size_t>(N));
    double total = 0.0;
    for (int n = 1; n <= N; ++n) {
        p[n - 1] = q * std::pow(1.0 - q, n - 1);
        total += p[n - 1];
    }
    // The geometric tail past N is below 1e-70 here; fold it back.
    for (double& v : p) v /= total;
    return SizeDistribution(std::move(p), kt0 / 3.0);
}

SourceFunction exp_source(double y_max = 60.0, std::size_t n = 20001) {
    return SourceFunction::sample(graded_grid(y_max, n, 2.0), [](double y) { return std::exp(-y); });
}

}  // namespace

TEST(grid, uniform_and_graded_endpoints) {
    const auto u = uniform_grid(0.0, 1.0, 5);
    ASSERT_EQ(u.size(), 5u);
    EXPECT_EQ(u.front(), 0.0);
    EXPECT_EQ(u.back(), 1.0);
    EXPECT_DOUBLE_EQ(u[2], 0.5);
    const auto g = graded_grid(2.0, 3, 2.0);
    EXPECT_EQ(g[0], 0.0);
    EXPECT_DOUBLE_EQ(g[1], 0.5);
    EXPECT_DOUBLE_EQ(g[2], 2.0);
}

TEST(grid, trapezoid_is_exact_for_linear) {
    const auto x = graded_grid(3.0, 17, 1.7);
    std::vector<double> f;
    for (double v : x) f.push_back(2.0 * v + 1.0);
    EXPECT_NEAR(trapezoid(x, f), 9.0 + 3.0, 1e-12);
    const auto w = trapezoid_weights(x);
    double s = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) s += w[k] * f[k];
    EXPECT_NEAR(s, 12.0, 1e-12);
    EXPECT_NEAR(cumulative_trapezoid(x, f).back(), 12.0, 1e-12);
}

TEST(grid, interpolation_clamps_at_ends) {
    const std::vector<double> x{0.0, 1.0, 2.0};
    const std::vector<double> f{1.0, 3.0, 2.0};
    EXPECT_DOUBLE_EQ(interpolate_linear(x, f, 0.5), 2.0);
    EXPECT_DOUBLE_EQ(interpolate_linear(x, f, -1.0), 1.0);
    EXPECT_DOUBLE_EQ(interpolate_linear(x, f, 5.0), 2.0);
}

TEST(size_distribution, validation_and_clamping) {
    EXPECT_THROW(SizeDistribution({0.5, 0.6}, 0.0), ConfigError);
    EXPECT_THROW(SizeDistribution({1.0 + 1e-11, -1e-11}, 0.0), ConfigError);
    const SizeDistribution d({1.0, -5e-13}, 0.0);
    EXPECT_EQ(d(2), 0.0);
    EXPECT_THROW(SizeDistribution({}, 0.0), ConfigError);
    const auto pm = SizeDistribution::point_mass(7, 3);
    EXPECT_EQ(pm(3), 1.0);
    EXPECT_EQ(pm.N(), 7);
}

TEST(continuum, validation) {
    EXPECT_THROW(ContinuumDistribution({0.0, 0.5, 0.4}, {1, 1, 1}, 0.0), ConfigError);
    EXPECT_THROW(ContinuumDistribution({0.0, 1.0}, {1.0, 1.5}, 0.0), ConfigError);
    EXPECT_THROW(ContinuumDistribution({0.0, 1.0}, {2.0, -0.1}, 0.0), ConfigError);
    const auto d = ContinuumDistribution::normalized({0.0, 1.0}, {3.0, 3.0}, 0.0);
    EXPECT_DOUBLE_EQ(d.raw_mass(), 3.0);
    EXPECT_DOUBLE_EQ(d.at(0.3), 1.0);
    EXPECT_EQ(d.at(1.5), 0.0);
}

TEST(to_continuum, point_mass_peaks_at_one_over_N) {
    const auto c = to_continuum(SizeDistribution::point_mass(100, 1), 101);
    const auto rho = c.density();
    const double peak = *std::max_element(rho.begin(), rho.end());
    EXPECT_EQ(rho[1], peak);  // s = 0.01
    EXPECT_NEAR(trapezoid(c.grid(), c.density()), 1.0, 1e-12);
}

TEST(to_continuum, uniform_is_flat) {
    std::vector<double> p(10, 0.1);
    const auto c = to_continuum(SizeDistribution(p, 0.0), 101);
    for (double v : c.density()) EXPECT_NEAR(v, 1.0, 1e-12);
}

TEST(to_continuum, geometric_approaches_exponential) {
    // Thermodynamic limit of the early-time geometric law: N e^{-kt0} exp(-s N e^{-kt0}).
    const int N = 10000;
    const auto c = to_continuum(geometric(N, 4.0), N + 1);
    const double mu = N * std::exp(-4.0);
    std::vector<double> diff;
    for (std::size_t k = 0; k < c.size(); ++k) {
        diff.push_back(std::abs(c.density()[k] - mu * std::exp(-mu * c.grid()[k])));
    }
    EXPECT_LT(trapezoid(c.grid(), diff), 0.02);
}

TEST(to_continuum, coarse_grid_warns) {
    const auto c = to_continuum(SizeDistribution::point_mass(1000, 500), 11);
    EXPECT_FALSE(c.warnings().empty());
}

TEST(mean_size, examples) {
    EXPECT_DOUBLE_EQ(mean_size(SizeDistribution::point_mass(100, 1)), 0.01);
    std::vector<double> p(10, 0.1);
    EXPECT_NEAR(mean_size(SizeDistribution(p, 0.0)), 0.55, 1e-15);
}

TEST(generating_function, examples) {
    proptest::Gen gen(11);
    const auto d = gen.size_distribution(37);
    EXPECT_NEAR(generating_function(d, 0.0), 1.0, 1e-12);
    EXPECT_NEAR(generating_function(SizeDistribution::point_mass(100, 1), 100.0), std::exp(-1.0), 1e-15);

    // Exponential continuum, closed-form Laplace integral mu / (mu + nu).
    const double mu = 200.0;
    auto s = uniform_grid(0.0, 1.0, 200001);
    std::vector<double> rho;
    for (double v : s) rho.push_back(mu * std::exp(-mu * v));
    const auto c = ContinuumDistribution::normalized(s, rho, 0.0);
    for (double nu : {1.0, 50.0, 400.0}) {
        EXPECT_NEAR(generating_function(c, nu), mu / (mu + nu), 1e-5) << nu;
    }
}

TEST(laplace, examples) {
    const auto h = exp_source();
    EXPECT_NEAR(laplace_of_source(h, 0.0).value, 1.0, 1e-6);
    for (double x : {0.5, 1.0, 3.0, 10.0}) {
        EXPECT_NEAR(laplace_of_source(h, x).value, 1.0 / (1.0 + x), 1e-6) << x;
    }
    // Sifting by a narrow Gaussian at y = 1: exact value e^{-1 + sigma^2/2}.
    const double sigma = 0.01;
    auto y = uniform_grid(0.0, 2.0, 20001);
    std::vector<double> v;
    for (double yy : y) v.push_back(std::exp(-0.5 * (yy - 1) * (yy - 1) / (sigma * sigma)));
    const auto peak = SourceFunction::normalized(y, v);
    EXPECT_NEAR(laplace_of_source(peak, 1.0).value, std::exp(-1.0), 1e-3);
}

TEST(laplace, underflow_is_flagged) {
    const auto h = SourceFunction::normalized(uniform_grid(1.0, 2.0, 11), std::vector<double>(11, 1.0));
    const auto r = laplace_of_source(h, 1e6);
    EXPECT_TRUE(r.underflow);
    EXPECT_EQ(r.value, 0.0);
    EXPECT_THROW(laplace_of_source(h, -1.0), ConfigError);
}

TEST(laplace, derivative_matches_closed_form) {
    const LaplaceTransform f(exp_source());
    for (double x : {0.0, 0.7, 4.0}) {
        EXPECT_NEAR(f.derivative(x), -1.0 / ((1 + x) * (1 + x)), 1e-5) << x;
    }
}

TEST(source_function, needs_unit_mass) {
    EXPECT_THROW(SourceFunction(uniform_grid(0.0, 1.0, 3), {1.0, 1.0, 3.0}), ConfigError);
    const auto h = SourceFunction::normalized(uniform_grid(0.0, 1.0, 3), {1.0, 1.0, 3.0});
    EXPECT_DOUBLE_EQ(h.weight_normalization(), 1.5);
}

TEST(params, lambda_and_guards) {
    const ScramblonParams p{3.0, 7500.0};
    p.validate();
    EXPECT_NEAR(p.lambda(2.0), std::exp(6.0) / 7500.0, 1e-15);
    EXPECT_THROW((ScramblonParams{-1.0, 1.0}.validate()), ConfigError);
    EXPECT_THROW((ScramblonParams{1.0, 1.0, 0.5}.validate()), ConfigError);
}

// ---------------------------------------------------------------------------
// Properties.

TEST(core_property, round_trip_mean) {
    proptest::Gen gen(2024);
    for (int trial = 0; trial < 200; ++trial) {
        // Grids much coarser than the size lattice. Near the lattice scale the
        // half-cells at n = 1 and n = N cost O(P(1) + P(N)) and the bound fails.
        const std::size_t grid = static_cast<std::size_t>(gen.integer(32, 2048));
        const int N = gen.integer(8 * static_cast<int>(grid), 100000);
        // Features narrower than ten grid cells alias; the bound is for resolved data.
        const auto d = gen.smooth_size_distribution(N, 10.0 * N / static_cast<double>(grid));
        const auto c = to_continuum(d, grid);
        EXPECT_NEAR(mean_size(c), mean_size(d), 2.0 / static_cast<double>(grid)) << "N=" << N << " grid=" << grid;
    }
}

TEST(core_property, generating_function_log_convex) {
    proptest::Gen gen(7);
    for (int trial = 0; trial < 100; ++trial) {
        const auto d = gen.size_distribution(gen.integer(2, 500));
        const double step = 0.25;
        double prev2 = std::log(generating_function(d, 0.0));
        double prev1 = std::log(generating_function(d, step));
        for (int k = 2; k < 200; ++k) {
            const double cur = std::log(generating_function(d, k * step));
            EXPECT_GE(cur - 2.0 * prev1 + prev2, -1e-8);
            prev2 = prev1;
            prev1 = cur;
        }
    }
}

TEST(core_property, generating_function_decreasing) {
    proptest::Gen gen(8);
    for (int trial = 0; trial < 50; ++trial) {
        const auto d = gen.size_distribution(gen.integer(2, 500));
        double prev = generating_function(d, 0.0);
        for (double nu = 0.5; nu < 100.0; nu += 0.5) {
            const double cur = generating_function(d, nu);
            EXPECT_LE(cur, prev + 1e-15);
            prev = cur;
        }
    }
}

TEST(core_property, laplace_alternating_signs) {
    proptest::Gen gen(9);
    for (int trial = 0; trial < 30; ++trial) {
        // Random positive mixture of bumps and exponentials.
        const auto y = uniform_grid(0.0, 20.0, 4001);
        const double a = gen.uniform(0.2, 3.0), c = gen.uniform(1.0, 10.0), w = gen.uniform(0.1, 2.0);
        std::vector<double> h;
        for (double v : y) h.push_back(std::exp(-a * v) + std::exp(-0.5 * (v - c) * (v - c) / (w * w)));
        const auto src = SourceFunction::normalized(y, h);
        const double dx = 0.05;
        const double scale = 1.0;
        for (double x = dx; x < 5.0; x += dx) {
            const double f0 = laplace_of_source(src, x - dx).value;
            const double f1 = laplace_of_source(src, x).value;
            const double f2 = laplace_of_source(src, x + dx).value;
            EXPECT_GE(f1, 0.0);
            EXPECT_LE((f2 - f0) / (2 * dx), 1e-6 * scale);
            EXPECT_GE((f2 - 2 * f1 + f0) / (dx * dx), -1e-6 * scale);
        }
    }
}

// ---------------------------------------------------------------------------

TEST(csv, round_trip_is_exact) {
    const auto dir = std::filesystem::temp_directory_path() / "scramblon_csv_test";
    proptest::Gen gen(3);
    const auto d = gen.size_distribution(50, 1.25);
    csv::write_size(dir / "p.csv", d);
    const auto back = csv::read_size(dir / "p.csv", 1.25);
    ASSERT_EQ(back.N(), d.N());
    for (int n = 1; n <= d.N(); ++n) EXPECT_EQ(back(n), d(n));

    const auto c = to_continuum(d, 300);
    csv::write_continuum(dir / "c.csv", c);
    const auto cb = csv::read_continuum(dir / "c.csv", 0.0);
    for (std::size_t k = 0; k < c.size(); ++k) {
        EXPECT_EQ(cb.grid()[k], c.grid()[k]);
        EXPECT_EQ(cb.density()[k], c.density()[k]);
    }
    std::filesystem::remove_all(dir);
}

TEST(csv, missing_file_is_io_error) {
    EXPECT_THROW(csv::read_size("/nonexistent/dir/p.csv", 0.0), IoError);
    EXPECT_THROW(csv::read_table("/nonexistent/dir/p.csv"), IoError);
}
