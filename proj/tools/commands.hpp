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

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace scramblon::cli {

struct CommonOptions {
    std::string output_dir = "out";
    std::uint64_t seed = 1;
};

struct MasterOptions {
    int N = 0;
    std::vector<double> kt{4, 6, 8, 10};
    double dt = 0.0;  // 0: largest stable step
    std::size_t grid_size = 512;
    bool analytic = true;
};

struct ExactOptions {
    int N = 4;
    double t = 1.0;
    double dt = 0.01;
    int realizations = 500;
    std::string op = "Z";
    bool chain = false;
};

struct FitOptions {
    std::vector<std::string> inputs;
    std::vector<double> times;
};

struct PredictOptions {
    std::vector<std::string> inputs;
    std::vector<double> times;
    std::string method = "change_of_variables";
    double sigma = 1e-2;
    double t0_lo = 0.03;
    double t0_hi = 0.05;
    double fit_window = 0.01;
    double kappa = 0.0;  // 0: fit
    std::size_t early_grid_size = 2049;
    std::size_t grid_size = 512;
};

struct MqcOptions {
    int N = 4;
    double t = 0.0;
    double dt = 0.01;
    int realizations = 100;
    std::string op = "X";
    std::size_t phis = 0;  // 0: 4N + 4
    double u_max = 4.0;
    std::size_t u_points = 401;
    bool seft = true;
};

struct CompareOptions {
    std::string a;
    std::string b;
    std::size_t grid_size = 512;
};

int cmd_simulate_master(const CommonOptions& common, const MasterOptions& o);
int cmd_simulate_exact(const CommonOptions& common, const ExactOptions& o);
int cmd_fit_kappa(const CommonOptions& common, const FitOptions& o);
int cmd_predict(const CommonOptions& common, const PredictOptions& o);
int cmd_mqc(const CommonOptions& common, const MqcOptions& o);
int cmd_compare(const CommonOptions& common, const CompareOptions& o);

}  // namespace scramblon::cli
