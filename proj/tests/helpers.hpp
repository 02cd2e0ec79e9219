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

#include "csm/rng.hpp"
#include "csm/types.hpp"

namespace csm::testing {

inline CxField random_cx_field(Index h, Index w, Rng& rng) {
  CxField f(h, w);
  for (Index r = 0; r < h; ++r)
    for (Index c = 0; c < w; ++c) f(r, c) = Cx(rng.normal(), rng.normal());
  return f;
}

inline ReField random_re_field(Index h, Index w, Rng& rng) {
  ReField f(h, w);
  for (Index r = 0; r < h; ++r)
    for (Index c = 0; c < w; ++c) f(r, c) = rng.normal();
  return f;
}

/// Forced float32 rounding. The volatile keeps the vectorizer from folding
/// the double->float->double round trip away at -O3.
inline double f32_round(double v) {
  volatile float f = static_cast<float>(v);
  return static_cast<double>(f);
}

/// Values representable in float32, so container round-trips are bitwise.
inline CxField random_f32_field(Index h, Index w, Rng& rng) {
  CxField f(h, w);
  for (Index r = 0; r < h; ++r)
    for (Index c = 0; c < w; ++c) {
      const double re = f32_round(rng.normal());
      const double im = f32_round(rng.normal());
      f(r, c) = Cx(re, im);
    }
  return f;
}

inline ImageSequence random_image(Index frames, Index h, Index w, std::uint64_t seed,
                                  bool f32 = false) {
  Rng rng(seed);
  ImageSequence u;
  u.frames = frames;
  u.height = h;
  u.width = w;
  for (Index k = 0; k < frames; ++k)
    u.data.push_back(f32 ? random_f32_field(h, w, rng) : random_cx_field(h, w, rng));
  return u;
}

inline bool bitwise_equal(const CxField& a, const CxField& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (Index r = 0; r < a.rows(); ++r)
    for (Index c = 0; c < a.cols(); ++c)
      if (a(r, c) != b(r, c)) return false;
  return true;
}

}  // namespace csm::testing
