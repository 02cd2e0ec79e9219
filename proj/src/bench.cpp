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

#include "csm/bench.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <thread>

#include "csm/recon.hpp"
#include "csm/sampling.hpp"

namespace csm {

namespace {

struct AccelData {
  SamplingMask mask;
  KSpaceData y;
};

Rect default_region(Index h, Index w) {
  const Index rh = std::max<Index>(h / 8, 1), rw = std::max<Index>(w / 8, 1);
  return {h / 2 - rh / 2, w / 2 - rw / 2, rh, rw};
}

std::string format_accel(double a) {
  std::ostringstream ss;
  ss << a;
  return ss.str();
}

std::string sanitize(std::string msg) {
  std::replace(msg.begin(), msg.end(), ',', ';');
  std::replace(msg.begin(), msg.end(), '\n', ' ');
  return msg;
}

ReconResult run_method(const std::string& method, const KSpaceData& y, const CoilMaps& maps,
                       const SamplingMask& mask, const BenchPlan& plan) {
  if (method == "zerofill") return zero_fill(y, maps);
  if (method == "cs") return reconstruct_cs(y, maps, mask, plan.params.gamma, plan.solver);
  if (method == "ls") {
    const auto [ll, ls] = ls_default_lambdas(y, maps, plan.ls_rel_l, plan.ls_rel_s);
    return reconstruct_ls(y, maps, mask, ll, ls, plan.solver);
  }
  if (method == "csm") return reconstruct_csm(y, maps, mask, plan.params, plan.solver);
  throw DataError("bench: unknown method: " + method);
}

}  // namespace

void BenchPlan::validate() const {
  phantom.validate();
  params.validate();
  solver.validate();
  if (coils < 1) throw DataError("bench: need at least one coil");
  if (accels.empty()) throw DataError("bench: no accelerations");
  for (double a : accels)
    if (a <= 1.0) throw DataError("bench: accelerations must exceed 1");
  if (methods.empty()) throw DataError("bench: at least one method required");
  for (const auto& m : methods)
    if (m != "zerofill" && m != "cs" && m != "ls" && m != "csm")
      throw DataError("bench: unknown method: " + m);
  if (noise_sigma < 0) throw DataError("bench: negative noise sigma");
}

BenchResult run_bench(const BenchPlan& plan) {
  plan.validate();
  const ImageSequence truth = generate_phantom(plan.phantom);
  const CoilMaps maps =
      generate_coilmaps(plan.coils, plan.phantom.height, plan.phantom.width, plan.seed);

  const SamplingMask full =
      SamplingMask::full(plan.phantom.frames, plan.phantom.height, plan.phantom.width);
  const KSpaceData y_full = acquire(truth, maps, full, 0.0, plan.seed);
  const ImageSequence gold = gold_standard(y_full, maps);
  const std::vector<ReField> gold_mag = magnitude(gold);

  const Rect region = plan.profile_region.height > 0 && plan.profile_region.width > 0
                          ? plan.profile_region
                          : default_region(plan.phantom.height, plan.phantom.width);

  // Shared per-acceleration data so every method scores the same measurements.
  std::vector<AccelData> per_accel;
  for (std::size_t i = 0; i < plan.accels.size(); ++i) {
    AccelData d;
    d.mask = make_mask(plan.phantom.frames, plan.phantom.height, plan.phantom.width,
                       plan.accels[i], plan.center_lines, plan.density_power,
                       plan.seed ^ (0x6d61736b00ULL + i), plan.freeze_mask);
    d.y = acquire(truth, maps, d.mask, plan.noise_sigma, plan.seed ^ (0x6e6f697300ULL + i));
    per_accel.push_back(std::move(d));
  }

  BenchResult result;
  result.gold_profile = temporal_profile(gold, region);
  result.cells.resize(plan.accels.size() * plan.methods.size());

  const auto run_cell = [&](std::size_t idx) {
    const std::size_t ia = idx / plan.methods.size();
    const std::size_t im = idx % plan.methods.size();
    BenchCell cell;
    cell.method = plan.methods[im];
    cell.accel = plan.accels[ia];
    try {
      const AccelData& d = per_accel[ia];
      const ReconResult r = run_method(cell.method, d.y, maps, d.mask, plan);
      cell.report = compute_report(gold_mag, magnitude(r.image));
      cell.wall_time = r.wall_time;
      cell.outer_iters = r.outer_iters;
      cell.objective_trace = r.objective_trace;
      cell.d_error_trace = r.d_error_trace;
      cell.profile = temporal_profile(r.image, region);
      if (r.flow) {
        for (Index k = 0; k < r.flow->pairs; ++k) {
          const auto sk = static_cast<std::size_t>(k);
          const ReField disp =
              (r.flow->vx[sk].square() + r.flow->vy[sk].square()).sqrt();
          cell.mean_disp.push_back(disp.mean());
          cell.max_disp.push_back(disp.maxCoeff());
        }
      }
    } catch (const std::exception& e) {
      cell.error = e.what();
    }
    result.cells[idx] = std::move(cell);
  };

  const std::size_t n_cells = result.cells.size();
  const int workers =
      std::max(1, std::min<int>(plan.threads, static_cast<int>(n_cells)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n_cells; ++i) run_cell(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < workers; ++t)
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < n_cells; i = next.fetch_add(1)) run_cell(i);
      });
    for (auto& t : pool) t.join();
  }
  return result;
}

void write_bench_csvs(const BenchPlan& plan, const BenchResult& result,
                      const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  const auto open = [&](const std::string& name) {
    std::ofstream f(fs::path(out_dir) / name, std::ios::trunc);
    if (!f) throw DataError("bench: cannot write " + name);
    f << std::setprecision(17);
    return f;
  };

  {
    auto f = open("bench.csv");
    f << "method,accel,ssim,slmse,rmse,wall_time,status\n";
    for (const auto& c : result.cells) {
      f << c.method << "," << format_accel(c.accel) << ",";
      if (c.error.empty())
        f << c.report.ssim << "," << c.report.slmse << "," << c.report.rmse;
      else
        f << ",,";
      f << "," << std::setprecision(3) << c.wall_time << std::setprecision(17) << ","
        << (c.error.empty() ? "ok" : "error: " + sanitize(c.error)) << "\n";
    }
  }

  for (const auto& method : plan.methods) {
    auto f = open("curve_" + method + ".csv");
    f << "accel,ssim,slmse,rmse\n";
    for (const auto& c : result.cells)
      if (c.method == method && c.error.empty())
        f << format_accel(c.accel) << "," << c.report.ssim << "," << c.report.slmse << ","
          << c.report.rmse << "\n";
  }

  {
    auto f = open("profile_gold.csv");
    f << "frame,mean_intensity\n";
    for (std::size_t k = 0; k < result.gold_profile.size(); ++k)
      f << k << "," << result.gold_profile[k] << "\n";
  }
  for (const auto& c : result.cells) {
    if (!c.error.empty()) continue;
    auto f = open("profile_" + c.method + "_" + format_accel(c.accel) + "x.csv");
    f << "frame,mean_intensity\n";
    for (std::size_t k = 0; k < c.profile.size(); ++k) f << k << "," << c.profile[k] << "\n";
    if (!c.mean_disp.empty()) {
      auto g = open("displacement_" + format_accel(c.accel) + "x.csv");
      g << "pair,mean_disp,max_disp\n";
      for (std::size_t k = 0; k < c.mean_disp.size(); ++k)
        g << k << "," << c.mean_disp[k] << "," << c.max_disp[k] << "\n";
    }
  }
}

}  // namespace csm
