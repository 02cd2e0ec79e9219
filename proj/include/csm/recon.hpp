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

#include <optional>
#include <string>
#include <vector>

#include "csm/types.hpp"

namespace csm {

struct ReconResult {
  ImageSequence image;
  std::optional<FlowField> flow;        // motion-coupled method only
  std::vector<double> objective_trace;  // joint objective, one entry per outer iteration
  std::vector<double> d_error_trace;    // outer-loop stopping quantity per iteration
  std::vector<double> wall_trace;       // cumulative seconds at each outer iteration
  int outer_iters = 0;
  double wall_time = 0.0;                      // optimization time in seconds
  std::optional<ImageSequence> low_rank, sparse;  // L+S baseline components

  /// Rows: outer_iter, objective, d_error, wall_time.
  void write_trace_csv(const std::string& path) const;
};

/// Direct inverse transform of the zero-filled k-space.
ReconResult zero_fill(const KSpaceData& y, const CoilMaps& maps);

/// Per-frame minimizer of 1/2 ||A u - y||^2 + gamma TV(u), TV isotropic on
/// complex u, solved jointly over all frames by the primal-dual iteration.
ReconResult reconstruct_cs(const KSpaceData& y, const CoilMaps& maps, const SamplingMask& mask,
                           double gamma, const SolverConfig& cfg);

/// Alternating joint reconstruction: repeat { u-step: primal-dual solve of the
/// motion-coupled data/TV problem with the flow frozen; v-step: TV-L1 flow on
/// the magnitude frames } until the normalized change d_error drops below
/// params.zeta_stop or params.max_outer is reached. With beta = 0 the
/// coupling vanishes and the call degenerates to reconstruct_cs exactly
/// (the flow solve is skipped and the field stays zero).
ReconResult reconstruct_csm(const KSpaceData& y, const CoilMaps& maps, const SamplingMask& mask,
                            const ModelParams& params, const SolverConfig& cfg);

/// Low-rank plus sparse baseline: iterative singular-value thresholding of
/// the space x time (Casorati) matrix at lambda_l, soft-thresholding of the
/// temporal-Fourier transform of the residual at lambda_s, and a data
/// consistency step per iteration.
ReconResult reconstruct_ls(const KSpaceData& y, const CoilMaps& maps, const SamplingMask& mask,
                           double lambda_l, double lambda_s, const SolverConfig& cfg);

/// Scale-relative default thresholds for the baseline: lambda_l relative to
/// the spectral norm of the zero-filled Casorati matrix, lambda_s relative to
/// its largest magnitude.
std::pair<double, double> ls_default_lambdas(const KSpaceData& y, const CoilMaps& maps,
                                             double rel_l = 0.01, double rel_s = 0.025);

/// Exact evaluation of the four-term joint objective
///   sum_k 1/2 ||A u_k - y_k||^2 + gamma TV(u_k)
/// + delta sum_pairs sum_l TV(v_l) + beta sum_pairs || grad u_k . v_k + u_t ||_1.
double objective_eq7(const ImageSequence& u, const FlowField& v, const KSpaceData& y,
                     const CoilMaps& maps, const SamplingMask& mask, const ModelParams& params);

/// Sum-of-squares combination sqrt(sum_c |Finv y_c|^2) of fully sampled data;
/// real nonnegative image. Throws if the mask is not full.
ImageSequence gold_standard(const KSpaceData& y_full, const CoilMaps& maps);

}  // namespace csm
