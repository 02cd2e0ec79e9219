/*
 * csm-recon : joint image reconstruction and motion estimation for dynamic MRI
 *
 * Copyright 2026 the csm-recon authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <string>
#include <vector>

#include "csm/metrics.hpp"
#include "csm/phantom.hpp"
#include "csm/types.hpp"

namespace csm {

/// Benchmark sweep: every method at every acceleration on one phantom, scored
/// against the fully sampled sum-of-squares gold standard.
struct BenchPlan {
  PhantomSpec phantom;
  Index coils = 4;
  double noise_sigma = 0.01;
  std::vector<double> accels = {4, 6, 8, 10, 12};
  std::vector<std::string> methods = {"zerofill", "cs", "ls", "csm"};
  ModelParams params;
  SolverConfig solver;
  double ls_rel_l = 0.01;  // L+S thresholds relative to the zero-filled scale
  double ls_rel_s = 0.025;
  Index center_lines = 8;
  double density_power = 3.0;
  std::uint64_t seed = 0;
  bool freeze_mask = false;
  Rect profile_region;  // zero-sized: centered h/8 x w/8 box
  int threads = 1;      // worker pool size over cells

  void validate() const;
};

struct BenchCell {
  std::string method;
  double accel = 0;
  MetricReport report;
  double wall_time = 0;  // optimization seconds
  int outer_iters = 0;
  std::string error;  // empty on success; failures stay confined to the cell
  std::vector<double> objective_trace, d_error_trace;   // joint method only
  std::vector<double> profile;                          // temporal ROI profile
  std::vector<double> mean_disp, max_disp;              // per-pair flow summary
};

struct BenchResult {
  std::vector<BenchCell> cells;  // acceleration-major, methods in plan order
  std::vector<double> gold_profile;
};

BenchResult run_bench(const BenchPlan& plan);

/// Emits bench.csv (method, accel, ssim, slmse, rmse, wall_time, status),
/// per-method metric curves, per-cell temporal profiles, and per-acceleration
/// displacement summaries into `out_dir`.
void write_bench_csvs(const BenchPlan& plan, const BenchResult& result,
                      const std::string& out_dir);

}  // namespace csm
