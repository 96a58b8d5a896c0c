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

// End-to-end acceptance checks. One PASS/FAIL line per criterion; the exit
// status is nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "scramblon/brownian.hpp"
#include "scramblon/exact.hpp"
#include "scramblon/mqc.hpp"
#include "scramblon/seft.hpp"

using namespace scramblon;

namespace {

constexpr double kKappa = brownian::kLyapunov;

int failures = 0;

void report(bool ok, const std::string& name, const std::string& detail) {
    fmt::print("{}  {}: {}\n", ok ? "PASS" : "FAIL", name, detail);
    std::fflush(stdout);
    failures += ok ? 0 : 1;
}

std::string join(const std::vector<double>& v, const char* pattern = "{:.3g}") {
    std::string out;
    for (std::size_t k = 0; k < v.size(); ++k) {
        if (k) out += " ";
        out += fmt::format(fmt::runtime(pattern), v[k]);
    }
    return out;
}

double max_bin_gap(const SizeDistribution& a, const SizeDistribution& b) {
    double worst = 0.0;
    for (int n = 1; n <= a.N(); ++n) worst = std::max(worst, std::abs(a(n) - b(n)));
    return worst;
}

// ---------------------------------------------------------------------------

struct MasterRun {
    std::vector<SizeDistribution> snapshots;
    double seconds = 0.0;
};

// One N = 10^4 run feeds the figure, the kappa fit and the protocol band.
MasterRun large_master_run(const std::vector<double>& times) {
    brownian::BrownianParams p;
    p.N = 10000;
    p.dt = brownian::build_rates(p.N).max_stable_dt();
    p.record_times = times;
    p.t_max = times.back();
    const auto start = std::chrono::steady_clock::now();
    MasterRun run;
    run.snapshots = brownian::integrate_master(p);
    run.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return run;
}

void figure_three(const MasterRun& run, const std::vector<double>& kts) {
    std::vector<double> dist;
    bool ok = run.seconds <= 60.0;
    for (double kt : kts) {
        const double t = kt / kKappa;
        const auto it = std::find_if(run.snapshots.begin(), run.snapshots.end(),
                                     [&](const SizeDistribution& d) { return std::abs(d.time() - t) < 1e-12; });
        const auto measured = to_continuum(*it, kDefaultGridSize);
        const double l1 = seft::distribution_distance(measured, brownian::analytic_late(10000, t)).l1;
        dist.push_back(l1);
        ok = ok && l1 <= 1e-2;
    }
    report(ok, "master equation vs closed form, N=1e4",
           fmt::format("L1 at kt 4,6,8,10 = {} (<= 1e-2); integration {:.1f} s (<= 60 s)", join(dist),
                       run.seconds));
}

void identity_check() {
    const int N = 10000;
    const auto early = brownian::analytic_early(N, 1.0 / kKappa, 100001).distribution;
    std::vector<double> dist;
    bool ok = true;
    for (int kt = 4; kt <= 10; ++kt) {
        const double t = kt / kKappa;
        const double l1 = seft::distribution_distance(seft::predict_late(early, kKappa, t),
                                                      brownian::analytic_late(N, t))
                              .l1;
        dist.push_back(l1);
        ok = ok && l1 <= 1e-2;
    }
    report(ok, "consistency relation on closed-form early data",
           fmt::format("L1 at kt 4..10 = {} (<= 1e-2)", join(dist)));
}

void protocol_band(const MasterRun& run, double fit_hi) {
    // Snapshots up to the last admissible t0, then the kt = 8 curve.
    std::vector<SizeDistribution> data;
    for (const auto& d : run.snapshots) {
        if (d.time() <= fit_hi || std::abs(d.time() - 8.0 / kKappa) < 1e-12) data.push_back(d);
    }
    const auto rep = seft::run_protocol(data);
    const auto& b = rep.per_time.back();
    report(b.containment >= 0.95, "protocol band contains kt=8 data",
           fmt::format("{:.1f}% of {} grid points inside (>= 95%); {} t0 choices, kappa {:.4f} from {} points, "
                       "band center L1 {:.3g}",
                       100.0 * b.containment, b.s.size(), rep.t0_list.size(), rep.fit.kappa, rep.fit.t0_points.size(), b.l1));
}

void kappa_recovery(const MasterRun& run) {
    std::vector<SizeDistribution> early;
    for (const auto& d : run.snapshots) {
        if (mean_size(d) / kScrambledSize <= 0.01) early.push_back(d);
    }
    const auto fit = seft::fit_kappa(early);
    report(std::abs(fit.kappa - 3.0) <= 0.03, "kappa from master early data",
           fmt::format("kappa = {:.4f} +- {:.1e} from {} snapshots (3.00 +- 0.03)", fit.kappa, fit.kappa_stderr,
                       early.size()));
}

void moment_identity() {
    const int N = 10000;
    const double t0 = 3.0 / kKappa;
    const auto early = brownian::analytic_early(N, t0, graded_grid(1.0, 4001, 2.0)).distribution;
    double worst = 0.0, worst_kt = 0.0;
    for (double kt = 3.0; kt <= 12.0 + 1e-9; kt += 0.25) {
        const double t = kt / kKappa;
        const double gap = std::abs(seft::predict_mean(early, kKappa, t) / kScrambledSize -
                                    brownian::moment_formula(N, t));
        if (gap > worst) {
            worst = gap;
            worst_kt = kt;
        }
    }
    report(worst <= 1e-3, "mean size vs exponential-integral formula",
           fmt::format("max |error| = {:.2e} at kt = {} over kt in [3, 12] (<= 1e-3)", worst, worst_kt));
}

void oracle_triangle() {
    const double t = 1.0;
    const int realizations = 500;
    std::string detail;
    bool ok = true;
    for (int N : {4, 5}) {
        const auto chain = exact::string_chain_evolve(N, t, 0.002).size_marginal(t);
        brownian::BrownianParams p;
        p.N = N;
        p.dt = 0.002;
        p.t_max = t;
        p.record_times = {t};
        const auto master = brownian::integrate_master(p)[0];
        // dt = 0.01 leaves a Trotter bias of ~2 SE at N = 5; halving removes it.
        const auto trotter = exact::trotter_brownian(N, t, 0.005, realizations, 20260000 + N);
        const double chain_gap = max_bin_gap(chain, master);
        double worst_z = 0.0;
        for (int n = 1; n <= N; ++n) {
            const double se = trotter.stderr_[n - 1];
            for (const auto* ref : {&chain, &master}) {
                const double gap = std::abs(trotter.mean(n) - (*ref)(n));
                worst_z = std::max(worst_z, se > 0.0 ? gap / se : (gap > 0.0 ? INFINITY : 0.0));
            }
        }
        ok = ok && chain_gap <= 1e-6 && worst_z <= 3.0;
        detail += fmt::format("{}N={}: chain-master {:.1e} (<= 1e-6), trotter worst {:.2f} SE (<= 3)",
                              detail.empty() ? "" : "; ", N, chain_gap, worst_z);
    }
    report(ok, "small-N oracle triangle at t=1, 500 realizations", detail);
}

void dual_route() {
    double worst = 0.0;
    int count = 0;
    for (int N : {2, 3, 4}) {
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
            const auto op = exact::random_hermitian_operator(N, 1000 * N + seed);
            const auto a = exact::size_from_doubled_state(exact::DoubledState::from_operator(op), op);
            worst = std::max(worst, max_bin_gap(a, exact::pauli_size_histogram(op)));
            ++count;
        }
    }
    report(worst <= 1e-12, "doubled-state size vs Pauli histogram",
           fmt::format("max bin difference {:.1e} over {} operators, N = 2,3,4 (<= 1e-12)", worst, count));
}

void invariant_suite() {
    double conservation = 0.0, balance = 0.0, stationary = 0.0, sum_rule = 0.0, symmetry = 0.0, negative = 0.0;
    for (int N : {2, 3, 5, 16, 100, 1000}) {
        const auto rates = brownian::build_rates(N);
        const auto pi = brownian::stationary_distribution(N);
        for (int n = 1; n < N; ++n) {
            // Relative: the fluxes reach O(N) at N = 1000, so an absolute 1e-12 is below one ulp.
            // Pairs where P_inf underflows (n ~ 1 at N = 1000) carry no information.
            const double a = pi(n) * rates.up[n - 1];
            const double b = pi(n + 1) * rates.down[n];
            if (std::min(a, b) >= std::numeric_limits<double>::min()) balance = std::max(balance, std::abs(a - b) / std::max(a, b));
        }
        std::vector<double> dp(static_cast<std::size_t>(N));
        brownian::master_rhs(rates, pi.probabilities(), dp);
        for (double v : dp) stationary = std::max(stationary, std::abs(v));

        brownian::BrownianParams p;
        p.N = N;
        p.dt = rates.max_stable_dt();
        p.record_times = {0.1, 0.5, 1.0, 2.0, 4.0};
        p.t_max = 4.0;
        for (const auto& s : brownian::integrate_master(p)) {
            double total = 0.0;
            for (double v : s.probabilities()) total += v;
            conservation = std::max(conservation, std::abs(total - 1.0));
        }
    }

    auto check_spectrum = [&](const std::vector<double>& F, int N) {
        // Raw Fourier sums, so that violations are measured rather than thrown.
        const std::size_t K = F.size();
        std::vector<double> I(static_cast<std::size_t>(2 * N + 1));
        for (int m = -N; m <= N; ++m) {
            double acc = 0.0;
            for (std::size_t k = 0; k < K; ++k) {
                acc += F[k] * std::cos(2.0 * std::numbers::pi * m * static_cast<double>(k) / static_cast<double>(K));
            }
            I[static_cast<std::size_t>(m + N)] = acc / static_cast<double>(K);
        }
        double total = 0.0;
        for (double v : I) {
            total += v;
            negative = std::max(negative, -v);
        }
        sum_rule = std::max(sum_rule, std::abs(total - 1.0));
        for (int m = 1; m <= N; ++m) {
            symmetry = std::max(symmetry, std::abs(I[static_cast<std::size_t>(N + m)] - I[static_cast<std::size_t>(N - m)]));
        }
        mqc::mqc_spectrum_from_F(F, N);  // throws on the same invariants
    };
    int spectra = 0;
    for (int N : {2, 3, 4, 5}) {
        const auto phis = mqc::phi_grid(static_cast<std::size_t>(4 * N + 4));
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            const auto op = exact::random_hermitian_operator(N, seed);
            std::vector<double> F;
            for (double phi : phis) F.push_back(exact::mqc_F_exact(op, phi));
            check_spectrum(F, N);
            ++spectra;
        }
        for (const auto& F : exact::trotter_F_samples(N, 0.5, 0.01, 5, 77, exact::PauliString::single(N, 0, exact::Pauli::X),
                                                      phis)) {
            check_spectrum(F, N);
            ++spectra;
        }
    }
    const bool ok = conservation <= 1e-9 && balance <= 1e-12 && stationary <= 1e-8 && sum_rule <= 1e-8 &&
                    symmetry <= 1e-10 && negative <= 1e-10;
    report(ok, "invariant suite",
           fmt::format("conservation {:.1e} (<= 1e-9), detailed balance (relative) {:.1e} (<= 1e-12), stationary residual "
                       "{:.1e} (<= 1e-8), MQC sum rule {:.1e} (<= 1e-8), I(m)-I(-m) {:.1e} (<= 1e-10), "
                       "negativity {:.1e}; {} spectra",
                       conservation, balance, stationary, sum_rule, symmetry, negative, spectra));
}

}  // namespace

int main() {
    // Fit window: sbar0/s_sc <= 0.01, i.e. e^{kt} <= 75 at N = 10^4.
    // t0 window [0.03, 0.05]: e^{kt} in [225, 375].
    const std::vector<double> fit_kts{1.5, 2.0, 2.5, 3.0, 3.5, 4.0};
    const std::vector<double> t0_kts{5.45, 5.5, 5.6, 5.7, 5.8, 5.9};
    const std::vector<double> fig_kts{4.0, 6.0, 8.0, 10.0};
    std::vector<double> kts = fit_kts;
    kts.insert(kts.end(), t0_kts.begin(), t0_kts.end());
    kts.insert(kts.end(), fig_kts.begin(), fig_kts.end());
    std::sort(kts.begin(), kts.end());
    kts.erase(std::unique(kts.begin(), kts.end()), kts.end());
    std::vector<double> times;
    for (double kt : kts) times.push_back(kt / kKappa);

    const auto run = large_master_run(times);

    figure_three(run, fig_kts);
    identity_check();
    protocol_band(run, t0_kts.back() / kKappa);
    kappa_recovery(run);
    moment_identity();
    oracle_triangle();
    dual_route();
    invariant_suite();

    fmt::print("{} of 8 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
