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
#include <numeric>

#include <fmt/format.h>

#include "scramblon/errors.hpp"
#include "scramblon/parallel.hpp"
#include "scramblon/seft.hpp"

namespace scramblon::seft {

namespace {

void validate_options(const ProtocolOptions& o) {
    if (!(o.t0_window_lo > 0.0) || !(o.t0_window_hi >= o.t0_window_lo)) {
        throw ConfigError(fmt::format("bad t0 window [{}, {}]", o.t0_window_lo, o.t0_window_hi));
    }
    if (o.t0_window_hi > kEarlyRegimeBound) {
        throw ConfigError(fmt::format("t0 window upper edge {} exceeds the early regime bound {}", o.t0_window_hi,
                                      kEarlyRegimeBound));
    }
    if (!(o.fit_window_hi > 0.0) || o.fit_window_hi > kEarlyRegimeBound) {
        throw ConfigError(fmt::format("fit window upper edge must lie in (0, {}] (got {})", kEarlyRegimeBound,
                                      o.fit_window_hi));
    }
    if (o.early_grid_size < 2) {
        throw ConfigError("early_grid_size must be >= 2");
    }
    o.prediction.validate();
}

}  // namespace

ProtocolReport run_protocol(std::span<const SizeDistribution> size_data, const ProtocolOptions& options) {
    validate_options(options);
    if (size_data.empty()) {
        throw ConfigError("protocol needs size data");
    }
    std::vector<std::size_t> order(size_data.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return size_data[a].time() < size_data[b].time(); });
    const int N = size_data[order.front()].N();
    for (std::size_t k = 0; k < order.size(); ++k) {
        const auto& d = size_data[order[k]];
        if (d.N() != N) {
            throw ConfigError(fmt::format("snapshots disagree on N ({} vs {})", d.N(), N));
        }
        if (!std::isfinite(d.time())) {
            throw ConfigError("snapshot time must be finite (stationary data has no early times)");
        }
        if (k > 0 && d.time() == size_data[order[k - 1]].time()) {
            throw ConfigError(fmt::format("duplicate snapshot time {}", d.time()));
        }
    }

    ProtocolReport report;
    std::vector<double> ratio(order.size());
    std::vector<std::size_t> admissible;
    for (std::size_t k = 0; k < order.size(); ++k) {
        ratio[k] = mean_size(size_data[order[k]]) / kScrambledSize;
        if (ratio[k] >= options.t0_window_lo && ratio[k] <= options.t0_window_hi) {
            admissible.push_back(k);
        }
    }
    if (admissible.empty()) {
        std::vector<std::size_t> by_gap(order.size());
        std::iota(by_gap.begin(), by_gap.end(), 0);
        const double mid = 0.5 * (options.t0_window_lo + options.t0_window_hi);
        std::sort(by_gap.begin(), by_gap.end(),
                  [&](std::size_t a, std::size_t b) { return std::abs(ratio[a] - mid) < std::abs(ratio[b] - mid); });
        std::string closest;
        for (std::size_t k = 0; k < std::min<std::size_t>(3, by_gap.size()); ++k) {
            closest += fmt::format("{}{:.4g} (t={:.6g})", k ? ", " : "", ratio[by_gap[k]],
                                   size_data[order[by_gap[k]]].time());
        }
        throw ConfigError(fmt::format("no snapshot has sbar0/s_sc in [{}, {}]; closest: {}", options.t0_window_lo,
                                      options.t0_window_hi, closest));
    }

    if (options.kappa) {
        report.fit.kappa = *options.kappa;
        report.kappa_fixed = true;
    } else {
        std::vector<std::pair<double, double>> points;
        for (std::size_t k = 0; k < order.size(); ++k) {
            if (ratio[k] <= options.fit_window_hi) {
                points.emplace_back(size_data[order[k]].time(), ratio[k] * kScrambledSize);
            }
        }
        if (points.size() < 3) {
            throw ConfigError(fmt::format("only {} snapshots with sbar0/s_sc <= {}; the kappa fit needs 3",
                                          points.size(), options.fit_window_hi));
        }
        report.fit = fit_kappa(points);
        if (report.fit.degenerate) {
            throw ConfigError("early sizes do not grow; kappa cannot be extracted");
        }
    }

    for (std::size_t k : admissible) {
        report.t0_list.push_back(size_data[order[k]].time());
        report.t0_mean_ratio.push_back(ratio[k]);
    }
    std::vector<std::size_t> late;
    for (std::size_t k = admissible.back() + 1; k < order.size(); ++k) {
        late.push_back(k);
    }
    if (late.empty()) {
        throw ConfigError("protocol needs at least one snapshot after the last admissible t0");
    }

    // predictions[i][j]: from admissible t0 i to late time j.
    std::vector<std::vector<ContinuumDistribution>> predictions(admissible.size());
    const double kappa = report.fit.kappa;
    parallel_for(admissible.size(), [&](std::size_t i) {
        const auto early = to_continuum(size_data[order[admissible[i]]], options.early_grid_size);
        for (std::size_t j : late) {
            predictions[i].push_back(predict_late(early, kappa, size_data[order[j]].time(), options.prediction));
        }
    });
    for (const auto& row : predictions) {
        for (const auto& p : row) {
            for (const auto& w : p.warnings()) {
                if (std::find(report.warnings.begin(), report.warnings.end(), w) == report.warnings.end()) {
                    report.warnings.push_back(w);
                }
            }
        }
    }

    for (std::size_t j = 0; j < late.size(); ++j) {
        const auto& snap = size_data[order[late[j]]];
        const auto measured = to_continuum(snap, options.prediction.output_grid_size);
        BandSnapshot b;
        b.t = snap.time();
        b.s.assign(measured.grid().begin(), measured.grid().end());
        b.measured.assign(measured.density().begin(), measured.density().end());
        b.lo = std::vector<double>(predictions[0][j].density().begin(), predictions[0][j].density().end());
        b.hi = b.lo;
        for (std::size_t i = 1; i < predictions.size(); ++i) {
            const auto rho = predictions[i][j].density();
            for (std::size_t k = 0; k < rho.size(); ++k) {
                b.lo[k] = std::min(b.lo[k], rho[k]);
                b.hi[k] = std::max(b.hi[k], rho[k]);
            }
        }
        b.center.resize(b.lo.size());
        for (std::size_t k = 0; k < b.lo.size(); ++k) b.center[k] = 0.5 * (b.lo[k] + b.hi[k]);
        const auto center = ContinuumDistribution::normalized(b.s, b.center, b.t);
        const Distance d = distribution_distance(center, measured);
        b.l1 = d.l1;
        b.sup = d.sup;
        b.ks = d.ks;
        const double peak = *std::max_element(b.measured.begin(), b.measured.end());
        b.containment = band_containment(b.measured, b.lo, b.hi, options.containment_tolerance * peak);
        if (b.l1 > options.finite_size_l1) {
            b.finite_size_flag = true;
            report.warnings.push_back(fmt::format(
                "t={:.6g}: band center deviates from data by L1={:.3g}; expected finite-size effect at N={}", b.t,
                b.l1, N));
        }
        report.per_time.push_back(std::move(b));
    }
    return report;
}

}  // namespace scramblon::seft
