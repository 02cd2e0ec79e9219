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

// Centered, unitary 2-D discrete Fourier transform: zero frequency sits at
// (height/2, width/2) and forward/inverse both carry 1/sqrt(H*W). The
// centering is exact for any grid size (pre/post modulation, not fftshift),
// so the adjoint equals the inverse to machine precision.

CxField fft2_centered(const CxField& u);
CxField ifft2_centered(const CxField& y);

/// Unitary 1-D DFT along the frame axis of a per-pixel time series stack
/// (used by the low-rank plus sparse baseline). Not centered.
std::vector<CxField> fft_time(const std::vector<CxField>& frames, bool inverse);

}  // namespace csm
