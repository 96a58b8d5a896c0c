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

#include <cstdlib>
#include <functional>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "commands.hpp"
#include "scramblon/errors.hpp"

using namespace scramblon;
using namespace scramblon::cli;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitGuard = 3;
constexpr int kExitIo = 4;

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Operator size dynamics and scramblon-theory predictions."};
    app.require_subcommand(1);
    app.set_config("--config", "", "INI file; sections are subcommand names, flags override it");

    CommonOptions common;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--output-dir", common.output_dir, "Directory for CSV/JSON outputs (env SCRAMBLON_OUT)");
        sub->add_option("--seed", common.seed, "Random seed");
    };

    std::function<int()> run;

    MasterOptions master;
    auto* sm = app.add_subcommand("simulate-master", "Integrate the size master equation");
    add_common(sm);
    sm->add_option("--N", master.N, "Number of spins")->required();
    sm->add_option("--kt", master.kt, "Snapshot times kappa*t")->delimiter(',');
    sm->add_option("--dt", master.dt, "RK4 step (default: largest stable step)");
    sm->add_option("--grid-size", master.grid_size, "Points of the analytic s-grid");
    sm->add_flag("--analytic,!--no-analytic", master.analytic, "Also write the closed-form late-time density");
    sm->callback([&] { run = [&] { return cmd_simulate_master(common, master); }; });

    ExactOptions ex;
    auto* se = app.add_subcommand("simulate-exact", "Trotterized Brownian circuit at small N");
    add_common(se);
    se->add_option("--N", ex.N, "Number of spins (<= 6)");
    se->add_option("--t", ex.t, "Evolution time");
    se->add_option("--dt", ex.dt, "Trotter step (<= 0.05)");
    se->add_option("--realizations", ex.realizations, "Noise realizations (>= 2)");
    se->add_option("--op", ex.op, "Initial single-site Pauli on site 0 (X, Y or Z)");
    se->add_flag("--chain", ex.chain, "Also write the Pauli-string chain marginal");
    se->callback([&] { run = [&] { return cmd_simulate_exact(common, ex); }; });

    FitOptions fit;
    auto* sf = app.add_subcommand("fit-kappa", "Fit the Lyapunov exponent from early snapshots");
    add_common(sf);
    sf->add_option("--input", fit.inputs, "Snapshot CSVs (n,p)")->required();
    sf->add_option("--times", fit.times, "Snapshot times (default: from sidecars)")->delimiter(',');
    sf->callback([&] { run = [&] { return cmd_fit_kappa(common, fit); }; });

    PredictOptions pred;
    auto* sp = app.add_subcommand("predict", "Run the early-to-late prediction protocol");
    add_common(sp);
    sp->add_option("--input", pred.inputs, "Snapshot CSVs (n,p)")->required();
    sp->add_option("--times", pred.times, "Snapshot times (default: from sidecars)")->delimiter(',');
    sp->add_option("--method", pred.method, "change_of_variables | gaussian_delta");
    sp->add_option("--sigma", pred.sigma, "Gaussian delta width");
    sp->add_option("--t0-lo", pred.t0_lo, "Lower edge of the t0 window in sbar0/s_sc");
    sp->add_option("--t0-hi", pred.t0_hi, "Upper edge of the t0 window in sbar0/s_sc");
    sp->add_option("--fit-window", pred.fit_window, "Snapshots with sbar0/s_sc up to this feed the kappa fit");
    sp->add_option("--kappa", pred.kappa, "Use this kappa instead of fitting");
    sp->add_option("--early-grid", pred.early_grid_size, "Continuum resolution of early snapshots");
    sp->add_option("--grid-size", pred.grid_size, "Output s-grid points");
    sp->callback([&] { run = [&] { return cmd_predict(common, pred); }; });

    MqcOptions mq;
    auto* sq = app.add_subcommand("mqc", "Multiple-quantum coherence spectra");
    add_common(sq);
    sq->add_option("--N", mq.N, "Number of spins (<= 6)");
    sq->add_option("--t", mq.t, "Evolution time");
    sq->add_option("--dt", mq.dt, "Trotter step (<= 0.05)");
    sq->add_option("--realizations", mq.realizations, "Noise realizations");
    sq->add_option("--op", mq.op, "Initial single-site Pauli on site 0 (X, Y or Z)");
    sq->add_option("--phis", mq.phis, "Rotation angles on [0, 2pi) (default 4N+4)");
    sq->add_option("--u-max", mq.u_max, "Half-width of the continuum u grid");
    sq->add_option("--u-points", mq.u_points, "Points of the continuum u grid");
    sq->add_flag("--seft,!--no-seft", mq.seft, "Also write the continuum prediction");
    sq->callback([&] { run = [&] { return cmd_mqc(common, mq); }; });

    CompareOptions cmp;
    auto* sc = app.add_subcommand("compare", "Distances between two distributions");
    add_common(sc);
    sc->add_option("a", cmp.a, "First CSV (n,p or s,density)")->required();
    sc->add_option("b", cmp.b, "Second CSV")->required();
    sc->add_option("--grid-size", cmp.grid_size, "Continuum grid for n,p inputs");
    sc->callback([&] { run = [&] { return cmd_compare(common, cmp); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    // Flag > environment > config file > default.
    if (const char* env = std::getenv("SCRAMBLON_OUT"); env != nullptr && *env != '\0') {
        const bool from_flag = [&] {
            for (int k = 1; k < argc; ++k) {
                const std::string a = argv[k];
                if (a == "--output-dir" || a.rfind("--output-dir=", 0) == 0) return true;
            }
            return false;
        }();
        if (!from_flag) common.output_dir = env;
    }

    try {
        return run();
    } catch (const ConfigError& e) {
        fmt::print(stderr, "config error: {}\n", e.what());
        return kExitConfig;
    } catch (const GuardError& e) {
        fmt::print(stderr, "numerical guard: {}\n", e.what());
        return kExitGuard;
    } catch (const IoError& e) {
        fmt::print(stderr, "i/o error: {}\n", e.what());
        return kExitIo;
    }
}
