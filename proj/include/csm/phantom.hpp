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

enum class PhantomKind { Cine, Perfusion, Static };

/// Deterministic synthetic dynamic phantom description.
struct PhantomSpec {
  PhantomKind kind = PhantomKind::Cine;
  Index frames = 24;
  Index height = 128;
  Index width = 128;
  double motion_amplitude = 6.0;  // pixels
  int period = 24;                // frames per contraction cycle
  double uptake_rate = 0.3;       // perfusion only: normalized time-to-peak
  std::uint64_t seed = 0;
  bool respiration = false;  // adds a slow sinusoidal heart translation

  void validate() const;
};

/// Piecewise-constant anatomy: a torso ellipse, three fixed texture discs, a
/// "ventricle" ellipse whose radii breathe sinusoidally, and two bright
/// papillary discs that ride the contraction. Magnitude lies in [0, 1] and is
/// antialiased by 2x supersampling; a smooth low-order polynomial phase makes
/// the result genuinely complex. Deterministic in the spec.
ImageSequence generate_phantom(const PhantomSpec& spec);

/// Ventricle semi-axes (a, b) at frame k — the analytic truth behind the
/// blood-pool area of the cine phantom.
std::pair<double, double> cine_ventricle_axes(const PhantomSpec& spec, Index k);

/// Intensity levels of the phantom tissue classes, for analytic cross-checks.
struct PhantomLevels {
  double torso = 0.35;
  double ventricle = 0.75;
  double papillary = 1.0;
  double texture = 0.55;
};
PhantomLevels phantom_levels();

/// Smooth complex Gaussian-profile coil sensitivities centered on points
/// equally spaced around the image border, jointly normalized so the
/// sum-of-squares is exactly 1 at every pixel.
CoilMaps generate_coilmaps(Index coils, Index height, Index width, std::uint64_t seed);

/// encode(truth, maps, mask) plus i.i.d. complex Gaussian noise of standard
/// deviation noise_sigma added at sampled locations only.
KSpaceData acquire(const ImageSequence& truth, const CoilMaps& maps, const SamplingMask& mask,
                   double noise_sigma, std::uint64_t seed);

}  // namespace csm
