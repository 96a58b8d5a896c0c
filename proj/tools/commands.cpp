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

#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>

#include <fmt/format.h>

#include "run_output.hpp"
#include "scramblon/brownian.hpp"
#include "scramblon/csv.hpp"
#include "scramblon/errors.hpp"
#include "scramblon/exact.hpp"
#include "scramblon/mqc.hpp"
#include "scramblon/seft.hpp"

namespace scramblon::cli {

namespace fs = std::filesystem;

namespace {

constexpr double kKappa = brownian::kLyapunov;

class Stopwatch {
   public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

   private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

json common_json(const CommonOptions& c) {
    return json{{"output_dir", c.output_dir}, {"seed", c.seed}};
}

exact::PauliString single_site(int N, const std::string& op) {
    if (op.size() != 1 || std::string("XYZxyz").find(op[0]) == std::string::npos) {
        throw ConfigError(fmt::format("operator must be one of X, Y, Z (got '{}')", op));
    }
    const char c = static_cast<char>(std::toupper(static_cast<unsigned char>(op[0])));
    const auto p = c == 'X' ? exact::Pauli::X : c == 'Y' ? exact::Pauli::Y : exact::Pauli::Z;
    return exact::PauliString::single(N, 0, p);
}

std::vector<SizeDistribution> load_snapshots(const std::vector<std::string>& inputs, const std::vector<double>& times) {
    if (inputs.empty()) {
        throw ConfigError("no input snapshots given");
    }
    if (!times.empty() && times.size() != inputs.size()) {
        throw ConfigError(fmt::format("{} inputs but {} times", inputs.size(), times.size()));
    }
    std::vector<SizeDistribution> out;
    for (std::size_t k = 0; k < inputs.size(); ++k) {
        const double t = times.empty() ? snapshot_time(inputs[k]) : times[k];
        out.push_back(csv::read_size(inputs[k], t));
    }
    return out;
}

ContinuumDistribution load_any(const std::string& path, std::size_t grid_size) {
    const auto table = csv::read_table(path);
    if (table.header.size() == 2 && table.header[0] == "n" && table.header[1] == "p") {
        return to_continuum(csv::read_size(path, 0.0), grid_size);
    }
    return csv::read_continuum(path, 0.0);
}

}  // namespace

int cmd_simulate_master(const CommonOptions& common, const MasterOptions& o) {
    Stopwatch clock;
    if (o.kt.empty()) {
        throw ConfigError("--kt needs at least one time");
    }
    auto kts = o.kt;
    std::sort(kts.begin(), kts.end());
    brownian::BrownianParams params;
    params.N = o.N;
    params.t_max = kts.back() / kKappa;
    for (double kt : kts) params.record_times.push_back(kt / kKappa);
    if (o.N < 2) {
        params.dt = 1.0;
        params.validate();  // reports the N guard
    }
    params.dt = o.dt > 0.0 ? o.dt : brownian::build_rates(o.N).max_stable_dt();
    params.validate();
    const auto snaps = brownian::integrate_master(params);

    const json config = {{"common", common_json(common)},
                         {"N", o.N},
                         {"kt", kts},
                         {"dt", params.dt},
                         {"grid_size", o.grid_size},
                         {"analytic", o.analytic}};
    const fs::path dir = common.output_dir;
    for (std::size_t k = 0; k < kts.size(); ++k) {
        const std::string label = kt_label(kts[k]);
        const fs::path file = dir / fmt::format("master_N{}_kt{}.csv", o.N, label);
        csv::write_size(file, snaps[k]);
        write_sidecar(file, {{"command", "simulate-master"},
                             {"N", o.N},
                             {"t", snaps[k].time()},
                             {"kt", kts[k]},
                             {"dt", params.dt},
                             {"seed", common.seed},
                             {"config", config},
                             {"wall_time_s", clock.seconds()}});
        fmt::print("wrote {} (kt={}, mean size {:.6g})\n", file.string(), label, mean_size(snaps[k]));
        if (o.analytic) {
            const fs::path af = dir / fmt::format("analytic_late_N{}_kt{}.csv", o.N, label);
            csv::write_continuum(af, brownian::analytic_late(o.N, snaps[k].time(), o.grid_size));
            write_sidecar(af, {{"command", "simulate-master"},
                               {"N", o.N},
                               {"t", snaps[k].time()},
                               {"kt", kts[k]},
                               {"seed", common.seed},
                               {"config", config},
                               {"wall_time_s", clock.seconds()}});
        }
    }
    return 0;
}

int cmd_simulate_exact(const CommonOptions& common, const ExactOptions& o) {
    Stopwatch clock;
    const auto initial = single_site(std::max(o.N, 1), o.op);
    const auto result = exact::trotter_brownian(o.N, o.t, o.dt, o.realizations, common.seed, initial);
    const json config = {{"common", common_json(common)}, {"N", o.N},   {"t", o.t},         {"dt", o.dt},
                         {"realizations", o.realizations}, {"op", o.op}, {"chain", o.chain}};
    const std::string label = kt_label(kKappa * o.t);
    const fs::path dir = common.output_dir;
    const fs::path file = dir / fmt::format("exact_N{}_kt{}.csv", o.N, label);
    const fs::path err = dir / fmt::format("exact_N{}_kt{}_stderr.csv", o.N, label);
    csv::write_size(file, result.mean);
    std::vector<double> n(static_cast<std::size_t>(o.N));
    for (int k = 0; k < o.N; ++k) n[k] = k + 1;
    csv::write_columns(err, {"n", "stderr"}, {n, result.stderr_}, {true, false});
    json meta = {{"command", "simulate-exact"},
                 {"N", o.N},
                 {"t", o.t},
                 {"kt", kKappa * o.t},
                 {"dt", o.dt},
                 {"realizations", o.realizations},
                 {"seed", common.seed},
                 {"max_norm_drift", result.max_norm_drift},
                 {"config", config}};
    meta["wall_time_s"] = clock.seconds();
    write_sidecar(file, meta);
    write_sidecar(err, meta);
    fmt::print("wrote {} ({} realizations, seed {})\n", file.string(), o.realizations, common.seed);
    if (o.chain) {
        const fs::path cf = dir / fmt::format("chain_N{}_kt{}.csv", o.N, label);
        const double chain_dt = std::min(o.dt, 0.05 / o.N);
        const auto weights = exact::string_chain_evolve(o.N, o.t, chain_dt, initial);
        csv::write_size(cf, weights.size_marginal(o.t));
        json cmeta = meta;
        cmeta["dt"] = chain_dt;
        cmeta["wall_time_s"] = clock.seconds();
        write_sidecar(cf, cmeta);
        fmt::print("wrote {}\n", cf.string());
    }
    return 0;
}

int cmd_fit_kappa(const CommonOptions& common, const FitOptions& o) {
    const auto data = load_snapshots(o.inputs, o.times);
    const auto fit = seft::fit_kappa(data);
    json points = json::array();
    for (const auto& [t0, sbar] : fit.t0_points) points.push_back({{"t0", t0}, {"sbar0", sbar}});
    const json report = {{"command", "fit-kappa"},
                         {"kappa", fit.kappa},
                         {"kappa_stderr", fit.kappa_stderr},
                         {"log_intercept", fit.log_intercept},
                         {"r_squared", fit.degenerate ? json(nullptr) : json(fit.r_squared)},
                         {"degenerate", fit.degenerate},
                         {"points", points},
                         {"config", {{"common", common_json(common)}, {"inputs", o.inputs}, {"times", o.times}}}};
    const fs::path file = fs::path(common.output_dir) / "kappa_fit.json";
    write_json(file, report);
    fmt::print("kappa = {:.6f} +- {:.2g}{}\n", fit.kappa, fit.kappa_stderr, fit.degenerate ? " (degenerate)" : "");
    return 0;
}

int cmd_predict(const CommonOptions& common, const PredictOptions& o) {
    Stopwatch clock;
    const auto data = load_snapshots(o.inputs, o.times);
    seft::ProtocolOptions opt;
    opt.t0_window_lo = o.t0_lo;
    opt.t0_window_hi = o.t0_hi;
    opt.fit_window_hi = o.fit_window;
    opt.early_grid_size = o.early_grid_size;
    opt.prediction.method = seft::delta_method_from_string(o.method);
    opt.prediction.sigma = o.sigma;
    opt.prediction.output_grid_size = o.grid_size;
    if (o.kappa < 0.0) {
        throw ConfigError(fmt::format("--kappa must be positive (got {})", o.kappa));
    }
    if (o.kappa > 0.0) opt.kappa = o.kappa;
    const auto report = seft::run_protocol(data, opt);

    const json config = {{"common", common_json(common)},
                         {"inputs", o.inputs},
                         {"times", o.times},
                         {"method", o.method},
                         {"sigma", o.sigma},
                         {"t0_window", {o.t0_lo, o.t0_hi}},
                         {"fit_window", o.fit_window},
                         {"kappa", o.kappa},
                         {"early_grid_size", o.early_grid_size},
                         {"grid_size", o.grid_size}};
    const fs::path dir = common.output_dir;
    json per_time = json::array();
    for (const auto& b : report.per_time) {
        const double kt = report.fit.kappa * b.t;
        const fs::path band = dir / fmt::format("band_kt{}.csv", kt_label(kKappa * b.t));
        csv::write_columns(band, {"s", "lo", "hi", "center", "measured"}, {b.s, b.lo, b.hi, b.center, b.measured});
        write_sidecar(band, {{"command", "predict"},
                             {"t", b.t},
                             {"kt", kKappa * b.t},
                             {"seed", common.seed},
                             {"config", config},
                             {"wall_time_s", clock.seconds()}});
        per_time.push_back({{"t", b.t},
                            {"kappa_t", kt},
                            {"l1", b.l1},
                            {"sup", b.sup},
                            {"ks", b.ks},
                            {"containment", b.containment},
                            {"finite_size_flag", b.finite_size_flag},
                            {"band", band.filename().string()}});
        fmt::print("t={:.6g}: L1={:.4g} sup={:.4g} KS={:.4g} containment={:.3f}{}\n", b.t, b.l1, b.sup, b.ks,
                   b.containment, b.finite_size_flag ? " [finite-size deviation]" : "");
    }
    json out = {{"command", "predict"},
                {"kappa", report.fit.kappa},
                {"kappa_stderr", report.kappa_fixed ? 0.0 : report.fit.kappa_stderr},
                {"kappa_fixed", report.kappa_fixed},
                {"t0_list", report.t0_list},
                {"t0_mean_ratio", report.t0_mean_ratio},
                {"per_time", per_time},
                {"warnings", report.warnings},
                {"config", config}};
    out["wall_time_s"] = clock.seconds();
    write_json(dir / "protocol_report.json", out);
    fmt::print("kappa = {:.6f}, {} t0 choices, report {}\n", report.fit.kappa, report.t0_list.size(),
               (dir / "protocol_report.json").string());
    return 0;
}

int cmd_mqc(const CommonOptions& common, const MqcOptions& o) {
    Stopwatch clock;
    const auto initial = single_site(std::max(o.N, 1), o.op);
    const std::size_t K = o.phis == 0 ? static_cast<std::size_t>(4 * o.N + 4) : o.phis;
    const auto phis = mqc::phi_grid(K);
    const auto samples = exact::trotter_F_samples(o.N, o.t, o.dt, o.realizations, common.seed, initial, phis);
    std::vector<double> F(K, 0.0);
    for (const auto& row : samples) {
        for (std::size_t k = 0; k < K; ++k) F[k] += row[k];
    }
    for (double& v : F) v /= static_cast<double>(samples.size());
    const auto spectrum = mqc::mqc_spectrum_from_F(F, o.N, o.t);

    const json config = {{"common", common_json(common)}, {"N", o.N},       {"t", o.t},
                         {"dt", o.dt},                     {"realizations", o.realizations},
                         {"op", o.op},                     {"phis", K},     {"u_max", o.u_max},
                         {"u_points", o.u_points},         {"seft", o.seft}};
    const std::string label = kt_label(kKappa * o.t);
    const fs::path dir = common.output_dir;
    const fs::path file = dir / fmt::format("mqc_N{}_kt{}.csv", o.N, label);
    std::vector<double> m;
    for (int k = -o.N; k <= o.N; ++k) m.push_back(k);
    csv::write_columns(file, {"m", "I"}, {m, spectrum.I}, {true, false});
    json meta = {{"command", "mqc"},
                 {"N", o.N},
                 {"t", o.t},
                 {"kt", kKappa * o.t},
                 {"dt", o.dt},
                 {"realizations", o.realizations},
                 {"seed", common.seed},
                 {"config", config}};
    meta["wall_time_s"] = clock.seconds();
    write_sidecar(file, meta);
    fmt::print("wrote {} (width in m: {:.4g})\n", file.string(), spectrum.width());

    if (o.seft) {
        // Brownian-calibrated inputs: h(y) = e^{-y}, f(x) = 1/(1+x), lambda = e^{kt}/(s_sc N).
        if (o.u_points < 2 || !(o.u_max > 0.0)) {
            throw ConfigError("u grid needs u_points >= 2 and u_max > 0");
        }
        const auto y = graded_grid(60.0, 4001, 3.0);
        const auto h = SourceFunction::normalized(y, [&] {
            std::vector<double> v;
            for (double yy : y) v.push_back(std::exp(-yy));
            return v;
        }());
        const Transform f = [](double x) { return 1.0 / (1.0 + x); };
        const double lambda = std::exp(kKappa * o.t) / (kScrambledSize * o.N);
        const auto u = uniform_grid(-o.u_max, o.u_max, o.u_points);
        const auto I = mqc::seft_I(h, f, lambda, u);
        const fs::path sf = dir / fmt::format("mqc_seft_N{}_kt{}.csv", o.N, label);
        csv::write_columns(sf, {"u", "I_continuum"}, {u, *I});
        json smeta = meta;
        smeta["lambda"] = lambda;
        smeta["wall_time_s"] = clock.seconds();
        write_sidecar(sf, smeta);
        fmt::print("wrote {}\n", sf.string());
    }
    return 0;
}

int cmd_compare(const CommonOptions& common, const CompareOptions& o) {
    const auto a = load_any(o.a, o.grid_size);
    const auto b = load_any(o.b, o.grid_size);
    const auto d = seft::distribution_distance(a, b);
    const json out = {{"command", "compare"},
                      {"a", o.a},
                      {"b", o.b},
                      {"l1", d.l1},
                      {"sup", d.sup},
                      {"ks", d.ks},
                      {"config", {{"common", common_json(common)}, {"grid_size", o.grid_size}}}};
    write_json(fs::path(common.output_dir) / "compare.json", out);
    fmt::print("L1={:.6g} sup={:.6g} KS={:.6g}\n", d.l1, d.sup, d.ks);
    return 0;
}

}  // namespace scramblon::cli
