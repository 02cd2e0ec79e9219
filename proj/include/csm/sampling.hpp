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

#include "csm/types.hpp"

namespace csm {

/// Variable-density random Cartesian k-t undersampling over full phase-encode
/// rows. Per frame, the `center_lines` rows nearest the grid center are always
/// on; the remaining rows are drawn without replacement with probability
/// proportional to (1 - |r|/r_max)^density_power, where r is the row offset
/// from the center. Rows are drawn until the exact per-frame target count
/// round(height/accel) is reached, so the achieved acceleration stays within
/// 5% of the request. Each frame seeds its own generator as seed XOR frame
/// index; `freeze` reuses the frame-0 pattern for every frame (ablation mode).
SamplingMask make_mask(Index frames, Index height, Index width, double accel,
                       Index center_lines, double density_power, std::uint64_t seed,
                       bool freeze = false);

}  // namespace csm
