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

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>

#include "csm/bench.hpp"
#include "csm/io.hpp"
#include "csm/metrics.hpp"
#include "csm/recon.hpp"
#include "csm/sampling.hpp"

namespace fs = std::filesystem;
using namespace csm;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitSolver = 4;

struct Common {
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  int threads = 1;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--out-dir", c.out_dir, "Output directory")->capture_default_str();
  cmd->add_option("--seed", c.seed, "Seed for every random draw")->capture_default_str();
  cmd->add_option("--threads", c.threads, "Worker threads (benchmark cells)")
      ->capture_default_str();
}

struct PhantomFlags {
  std::string kind = "cine";
  Index frames = 24;
  Index size = 128;
  Index height = 0, width = 0;  // override --size when set
  double amplitude = 6.0;
  int period = 24;
  double uptake = 0.3;
  bool respiration = false;
  Index coils = 4;
};

void add_phantom_flags(CLI::App* cmd, PhantomFlags& p) {
  cmd->add_option("--kind", p.kind, "Phantom kind")
      ->check(CLI::IsMember({"cine", "perfusion", "static"}))
      ->capture_default_str();
  cmd->add_option("--frames", p.frames, "Number of frames (>= 2)")->capture_default_str();
  cmd->add_option("--size", p.size, "Grid size (height = width)")->capture_default_str();
  cmd->add_option("--height", p.height, "Grid height (overrides --size)");
  cmd->add_option("--width", p.width, "Grid width (overrides --size)");
  cmd->add_option("--amplitude", p.amplitude, "Motion amplitude in pixels")
      ->capture_default_str();
  cmd->add_option("--period", p.period, "Frames per contraction cycle")->capture_default_str();
  cmd->add_option("--uptake-rate", p.uptake, "Perfusion time-to-peak (normalized)")
      ->capture_default_str();
  cmd->add_flag("--respiration", p.respiration, "Add a slow respiratory translation");
  cmd->add_option("--coils", p.coils, "Number of synthetic coils")->capture_default_str();
}

PhantomSpec to_spec(const PhantomFlags& p, std::uint64_t seed) {
  PhantomSpec spec;
  spec.kind = p.kind == "cine"        ? PhantomKind::Cine
              : p.kind == "perfusion" ? PhantomKind::Perfusion
                                      : PhantomKind::Static;
  spec.frames = p.frames;
  spec.height = p.height > 0 ? p.height : p.size;
  spec.width = p.width > 0 ? p.width : p.size;
  spec.motion_amplitude = p.amplitude;
  spec.period = p.period;
  spec.uptake_rate = p.uptake;
  spec.respiration = p.respiration;
  spec.seed = seed;
  return spec;
}

struct MaskFlags {
  double accel = 8.0;
  Index center_lines = 8;
  double density_power = 3.0;
  bool freeze = false;
};

void add_mask_flags(CLI::App* cmd, MaskFlags& m) {
  cmd->add_option("--accel", m.accel, "Acceleration factor (> 1)")->capture_default_str();
  cmd->add_option("--center-lines", m.center_lines, "Fully sampled central rows")
      ->capture_default_str();
  cmd->add_option("--density-power", m.density_power, "Variable-density falloff exponent")
      ->capture_default_str();
  cmd->add_flag("--freeze-mask", m.freeze, "Reuse the frame-0 pattern in every frame");
}

struct ParamFlags {
  double gamma = 0.05;
  double delta = 0.1;
  double beta = 0.45;
  double zeta_stop = 1e-5;
  int max_outer = 10;
  int max_inner = 300;
  double inner_tol = 1e-5;
  double ls_rel_l = 0.01;
  double ls_rel_s = 0.025;
  double noise_sigma = 0.01;
};

void add_param_flags(CLI::App* cmd, ParamFlags& p) {
  cmd->add_option("--gamma", p.gamma, "Sparsity weight")->capture_default_str();
  cmd->add_option("--delta", p.delta, "Flow regularity weight")->capture_default_str();
  cmd->add_option("--beta", p.beta, "Motion coupling weight")->capture_default_str();
  cmd->add_option("--zeta-stop", p.zeta_stop, "Outer-loop tolerance")->capture_default_str();
  cmd->add_option("--max-outer", p.max_outer, "Outer iteration cap")->capture_default_str();
  cmd->add_option("--max-inner", p.max_inner, "Inner iteration cap")->capture_default_str();
  cmd->add_option("--inner-tol", p.inner_tol, "Inner relative-change tolerance")
      ->capture_default_str();
  cmd->add_option("--ls-rel-l", p.ls_rel_l, "L+S low-rank threshold, relative")
      ->capture_default_str();
  cmd->add_option("--ls-rel-s", p.ls_rel_s, "L+S sparse threshold, relative")
      ->capture_default_str();
  cmd->add_option("--noise-sigma", p.noise_sigma, "Acquisition noise std")
      ->capture_default_str();
}

ModelParams to_params(const ParamFlags& p) {
  ModelParams m;
  m.gamma = p.gamma;
  m.delta = p.delta;
  m.beta = p.beta;
  m.zeta_stop = p.zeta_stop;
  m.max_outer = p.max_outer;
  return m;
}

SolverConfig to_solver(const ParamFlags& p) {
  SolverConfig cfg;
  cfg.max_inner = p.max_inner;
  cfg.inner_tol = p.inner_tol;
  return cfg;
}

Rect parse_region(const std::vector<long long>& raw) {
  if (raw.size() != 4) throw DataError("region expects row,col,height,width");
  return {raw[0], raw[1], raw[2], raw[3]};
}

void write_metrics_csv(std::ostream& out, const MetricReport& rep, bool per_frame) {
  out << std::setprecision(17);
  out << "ssim,slmse,rmse\n";
  out << rep.ssim << "," << rep.slmse << "," << rep.rmse << "\n";
  if (per_frame) {
    out << "frame,ssim,slmse,rmse\n";
    for (std::size_t k = 0; k < rep.per_frame_ssim.size(); ++k)
      out << k << "," << rep.per_frame_ssim[k] << "," << rep.per_frame_slmse[k] << ","
          << rep.per_frame_rmse[k] << "\n";
  }
}

int run_phantom(const Common& c, const PhantomFlags& p) {
  const PhantomSpec spec = to_spec(p, c.seed);
  const ImageSequence truth = generate_phantom(spec);
  const CoilMaps maps = generate_coilmaps(p.coils, spec.height, spec.width, c.seed);
  fs::create_directories(c.out_dir);
  save_dataset((fs::path(c.out_dir) / "truth.csmd").string(), truth);
  save_dataset((fs::path(c.out_dir) / "maps.csmd").string(), maps);
  std::cout << "wrote truth.csmd and maps.csmd to " << c.out_dir << "\n";
  return 0;
}

int run_mask(const Common& c, const PhantomFlags& p, const MaskFlags& m) {
  const Index h = p.height > 0 ? p.height : p.size;
  const Index w = p.width > 0 ? p.width : p.size;
  const SamplingMask mask =
      make_mask(p.frames, h, w, m.accel, m.center_lines, m.density_power, c.seed, m.freeze);
  fs::create_directories(c.out_dir);
  save_dataset((fs::path(c.out_dir) / "mask.csmd").string(), mask);
  std::cout << "wrote mask.csmd (achieved acceleration " << mask.achieved_accel() << ")\n";
  return 0;
}

int run_recon(const Common& c, const PhantomFlags& p, const MaskFlags& m, const ParamFlags& prm,
              const std::string& method, const std::string& truth_path,
              const std::string& maps_path) {
  ImageSequence truth;
  CoilMaps maps;
  if (!truth_path.empty() && !maps_path.empty()) {
    truth = load_image(truth_path);
    maps = load_coils(maps_path);
  } else if (truth_path.empty() && maps_path.empty()) {
    const PhantomSpec spec = to_spec(p, c.seed);
    truth = generate_phantom(spec);
    maps = generate_coilmaps(p.coils, spec.height, spec.width, c.seed);
  } else {
    throw DataError("recon: provide both --truth and --maps, or neither");
  }
  if (maps.height != truth.height || maps.width != truth.width)
    throw DataError("recon: coil maps do not match the truth image");

  const SamplingMask mask = make_mask(truth.frames, truth.height, truth.width, m.accel,
                                      m.center_lines, m.density_power, c.seed, m.freeze);
  const KSpaceData y = acquire(truth, maps, mask, prm.noise_sigma, c.seed);

  ReconResult res;
  const SolverConfig cfg = to_solver(prm);
  if (method == "zerofill") {
    res = zero_fill(y, maps);
  } else if (method == "cs") {
    res = reconstruct_cs(y, maps, mask, prm.gamma, cfg);
  } else if (method == "ls") {
    const auto [ll, ls] = ls_default_lambdas(y, maps, prm.ls_rel_l, prm.ls_rel_s);
    res = reconstruct_ls(y, maps, mask, ll, ls, cfg);
  } else {
    res = reconstruct_csm(y, maps, mask, to_params(prm), cfg);
  }

  fs::create_directories(c.out_dir);
  const fs::path dir(c.out_dir);
  save_dataset((dir / "mask.csmd").string(), mask);
  save_dataset((dir / "kspace.csmd").string(), y);
  save_dataset((dir / "recon.csmd").string(), res.image);
  if (res.flow) save_dataset((dir / "flow.csmd").string(), *res.flow);
  res.write_trace_csv((dir / "trace.csv").string());
  std::cout << "method=" << method << " outer_iters=" << res.outer_iters
            << " wall_time=" << std::setprecision(3) << res.wall_time << "s\n";
  return 0;
}

int run_metrics(const Common& c, const std::string& gold_path, const std::string& cand_path,
                const std::vector<long long>& region_raw, const std::string& out_file,
                bool per_frame) {
  const ImageSequence gold = load_image(gold_path);
  const ImageSequence cand = load_image(cand_path);
  if (gold.frames != cand.frames || gold.height != cand.height || gold.width != cand.width)
    throw DataError("metrics: image dims differ");
  const MetricReport rep = compute_report(magnitude(gold), magnitude(cand));

  if (out_file.empty()) {
    write_metrics_csv(std::cout, rep, per_frame);
  } else {
    fs::create_directories(c.out_dir);
    std::ofstream out(fs::path(c.out_dir) / out_file, std::ios::trunc);
    if (!out) throw DataError("metrics: cannot write output");
    write_metrics_csv(out, rep, per_frame);
  }
  if (!region_raw.empty()) {
    const Rect region = parse_region(region_raw);
    const auto prof = temporal_profile(cand, region);
    fs::create_directories(c.out_dir);
    std::ofstream out(fs::path(c.out_dir) / "profile.csv", std::ios::trunc);
    out << std::setprecision(17) << "frame,mean_intensity\n";
    for (std::size_t k = 0; k < prof.size(); ++k) out << k << "," << prof[k] << "\n";
  }
  return 0;
}

int run_bench(const Common& c, const PhantomFlags& p, const MaskFlags& m, const ParamFlags& prm,
              const std::vector<double>& accels, const std::vector<std::string>& methods,
              const std::vector<long long>& region_raw) {
  BenchPlan plan;
  plan.phantom = to_spec(p, c.seed);
  plan.coils = p.coils;
  plan.noise_sigma = prm.noise_sigma;
  if (!accels.empty()) plan.accels = accels;
  if (!methods.empty()) plan.methods = methods;
  plan.params = to_params(prm);
  plan.solver = to_solver(prm);
  plan.ls_rel_l = prm.ls_rel_l;
  plan.ls_rel_s = prm.ls_rel_s;
  plan.center_lines = m.center_lines;
  plan.density_power = m.density_power;
  plan.freeze_mask = m.freeze;
  plan.seed = c.seed;
  plan.threads = c.threads;
  if (!region_raw.empty()) plan.profile_region = parse_region(region_raw);

  const BenchResult result = run_bench(plan);
  write_bench_csvs(plan, result, c.out_dir);
  int failures = 0;
  for (const auto& cell : result.cells)
    if (!cell.error.empty()) ++failures;
  std::cout << "bench: " << result.cells.size() - failures << "/" << result.cells.size()
            << " cells ok, results in " << c.out_dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dynamic MRI reconstruction with joint motion estimation"};
  app.require_subcommand(1);

  Common common_phantom, common_mask, common_recon, common_metrics, common_bench;
  PhantomFlags ph_phantom, ph_recon, ph_bench;
  PhantomFlags ph_mask;  // reuses frames/size flags for mask dims
  MaskFlags mk_mask, mk_recon, mk_bench;
  ParamFlags prm_recon, prm_bench;

  auto* cmd_phantom = app.add_subcommand("phantom", "Generate a phantom and coil maps");
  add_common(cmd_phantom, common_phantom);
  add_phantom_flags(cmd_phantom, ph_phantom);

  auto* cmd_mask = app.add_subcommand("mask", "Generate a k-t undersampling mask");
  add_common(cmd_mask, common_mask);
  cmd_mask->add_option("--frames", ph_mask.frames, "Number of frames")->capture_default_str();
  cmd_mask->add_option("--size", ph_mask.size, "Grid size (height = width)")
      ->capture_default_str();
  cmd_mask->add_option("--height", ph_mask.height, "Grid height (overrides --size)");
  cmd_mask->add_option("--width", ph_mask.width, "Grid width (overrides --size)");
  add_mask_flags(cmd_mask, mk_mask);

  auto* cmd_recon = app.add_subcommand("recon", "Reconstruct an undersampled acquisition");
  add_common(cmd_recon, common_recon);
  add_phantom_flags(cmd_recon, ph_recon);
  add_mask_flags(cmd_recon, mk_recon);
  add_param_flags(cmd_recon, prm_recon);
  std::string method = "csm", truth_path, maps_path;
  cmd_recon->add_option("--method", method, "Reconstruction method")
      ->check(CLI::IsMember({"zerofill", "cs", "ls", "csm"}))
      ->capture_default_str();
  cmd_recon->add_option("--truth", truth_path, "Truth image file (else synthesized)");
  cmd_recon->add_option("--maps", maps_path, "Coil maps file (else synthesized)");

  auto* cmd_metrics = app.add_subcommand("metrics", "Score a reconstruction against a gold file");
  add_common(cmd_metrics, common_metrics);
  std::string gold_path, cand_path, metrics_out;
  std::vector<long long> metrics_region;
  bool per_frame = false;
  cmd_metrics->add_option("--gold", gold_path, "Gold-standard image file")->required();
  cmd_metrics->add_option("--candidate", cand_path, "Candidate image file")->required();
  cmd_metrics->add_option("--region", metrics_region,
                          "Temporal-profile region: row,col,height,width")
      ->delimiter(',');
  cmd_metrics->add_option("--out", metrics_out, "Write CSV here instead of stdout");
  cmd_metrics->add_flag("--per-frame", per_frame, "Append a per-frame breakdown");

  auto* cmd_bench = app.add_subcommand("bench", "Run the full method x acceleration benchmark");
  add_common(cmd_bench, common_bench);
  add_phantom_flags(cmd_bench, ph_bench);
  add_mask_flags(cmd_bench, mk_bench);
  add_param_flags(cmd_bench, prm_bench);
  std::vector<double> accels;
  std::vector<std::string> methods;
  std::vector<long long> bench_region;
  cmd_bench->add_option("--accels", accels, "Acceleration factors")->delimiter(',');
  cmd_bench
      ->add_option("--methods", methods, "Methods to run")
      ->delimiter(',')
      ->check(CLI::IsMember({"zerofill", "cs", "ls", "csm"}));
  cmd_bench->add_option("--region", bench_region, "Profile region: row,col,height,width")
      ->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (cmd_phantom->parsed()) return run_phantom(common_phantom, ph_phantom);
    if (cmd_mask->parsed()) return run_mask(common_mask, ph_mask, mk_mask);
    if (cmd_recon->parsed())
      return run_recon(common_recon, ph_recon, mk_recon, prm_recon, method, truth_path,
                       maps_path);
    if (cmd_metrics->parsed())
      return run_metrics(common_metrics, gold_path, cand_path, metrics_region, metrics_out,
                         per_frame);
    if (cmd_bench->parsed())
      return run_bench(common_bench, ph_bench, mk_bench, prm_bench, accels, methods,
                       bench_region);
  } catch (const SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return kExitSolver;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
