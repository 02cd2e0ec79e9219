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

#include <vector>

#include "csm/types.hpp"

namespace csm {

/// Image-quality summary between a gold standard and a candidate.
struct MetricReport {
  double ssim = 0.0;   // in [-1, 1], 1 means identical
  double slmse = 0.0;  // <= 1, 1 means identical
  double rmse = 0.0;   // >= 0 on jointly normalized magnitudes
  std::vector<double> per_frame_ssim, per_frame_slmse, per_frame_rmse;
};

/// Mean structural similarity over all 8x8 sliding windows with uniform
/// weights. Both images are divided by max(|gold|) first; the default
/// stability constants are c1 = 0.01^2 and c2 = 0.03^2 on that [0,1] range.
double ssim(const ReField& gold, const ReField& candidate, double c1 = 1e-4, double c2 = 9e-4,
            Index window = 8);

/// Inverted normalized localized MSE over patch x patch tiles at the given
/// stride: 1 - sum_w ||gold_w - cand_w||^2 / sum_w ||gold_w||^2. With
/// raw_ratio the bare ratio is returned instead (0 means identical).
double slmse(const ReField& gold, const ReField& candidate, Index patch = 20, Index step = 10,
             bool raw_ratio = false);

/// sqrt(mean |gold - candidate|^2), no normalization.
double rmse(const ReField& gold, const ReField& candidate);

/// Mean |u| over a rectangular region, one value per frame.
std::vector<double> temporal_profile(const ImageSequence& u, const Rect& region);

/// Magnitude of a complex sequence, frame by frame.
std::vector<ReField> magnitude(const ImageSequence& u);

/// Full report between two magnitude sequences: per-frame SSIM and sLMSE
/// (averaged), and RMSE pooled over all frames after dividing both sequences
/// by the gold standard's global maximum.
MetricReport compute_report(const std::vector<ReField>& gold, const std::vector<ReField>& candidate);

}  // namespace csm
