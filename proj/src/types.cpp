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

#include "csm/types.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace csm {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw DataError(msg);
}

bool all_finite(const CxField& f) {
  return f.real().isFinite().all() && f.imag().isFinite().all();
}

}  // namespace

ImageSequence ImageSequence::zeros(Index frames, Index height, Index width) {
  ImageSequence seq;
  seq.frames = frames;
  seq.height = height;
  seq.width = width;
  seq.data.assign(static_cast<std::size_t>(frames), CxField::Zero(height, width));
  return seq;
}

void ImageSequence::validate() const {
  require(frames >= 1, "image: frames must be >= 1");
  require(height >= 1 && width >= 1, "image: degenerate plane dims");
  require(static_cast<Index>(data.size()) == frames, "image: frame count mismatch");
  for (const auto& f : data) {
    require(f.rows() == height && f.cols() == width, "image: frame dims differ");
    require(all_finite(f), "image: non-finite entry");
  }
}

SamplingMask SamplingMask::full(Index frames, Index height, Index width) {
  SamplingMask m;
  m.frames = frames;
  m.height = height;
  m.width = width;
  m.accel_requested = 1.0;
  m.center_lines = height;
  m.data.assign(static_cast<std::size_t>(frames), ByteField::Constant(height, width, 1));
  return m;
}

bool SamplingMask::is_full() const {
  for (const auto& f : data)
    if (!(f == 1).all()) return false;
  return true;
}

double SamplingMask::achieved_accel() const {
  double ones = 0;
  for (const auto& f : data) ones += f.cast<double>().sum();
  if (ones == 0) return std::numeric_limits<double>::infinity();
  return static_cast<double>(frames * height * width) / ones;
}

void SamplingMask::validate() const {
  require(frames >= 1 && height >= 1 && width >= 1, "mask: degenerate dims");
  require(static_cast<Index>(data.size()) == frames, "mask: frame count mismatch");
  for (const auto& f : data) {
    require(f.rows() == height && f.cols() == width, "mask: frame dims differ");
    require(((f == 0) || (f == 1)).all(), "mask: non-binary entry");
  }
  require(center_lines >= 0 && center_lines <= height, "mask: bad center_lines");
  // Rows nearest the grid center must be on in every frame.
  const Index center = height / 2;
  std::vector<Index> order(static_cast<std::size_t>(height));
  for (Index r = 0; r < height; ++r) order[static_cast<std::size_t>(r)] = r;
  std::sort(order.begin(), order.end(), [center](Index a, Index b) {
    const Index da = std::abs(a - center), db = std::abs(b - center);
    return da != db ? da < db : a < b;
  });
  for (const auto& f : data)
    for (Index i = 0; i < center_lines; ++i)
      require((f.row(order[static_cast<std::size_t>(i)]) == 1).all(),
              "mask: center block not fully sampled");
  if (accel_requested > 1.0) {
    const double achieved = achieved_accel();
    require(std::abs(achieved - accel_requested) <= 0.05 * accel_requested,
            "mask: achieved acceleration deviates more than 5% from requested");
  }
}

KSpaceData KSpaceData::zeros(Index frames, Index coils, Index height, Index width) {
  KSpaceData y;
  y.frames = frames;
  y.coils = coils;
  y.height = height;
  y.width = width;
  y.data.assign(static_cast<std::size_t>(frames * coils), CxField::Zero(height, width));
  y.mask = SamplingMask::full(frames, height, width);
  return y;
}

void KSpaceData::validate() const {
  require(frames >= 1 && coils >= 1, "kspace: degenerate counts");
  require(static_cast<Index>(data.size()) == frames * coils, "kspace: plane count mismatch");
  mask.validate();
  require(mask.frames == frames && mask.height == height && mask.width == width,
          "kspace: mask dims mismatch");
  for (Index k = 0; k < frames; ++k) {
    const auto& m = mask.frame(k);
    for (Index c = 0; c < coils; ++c) {
      const auto& plane = at(k, c);
      require(plane.rows() == height && plane.cols() == width, "kspace: plane dims differ");
      require(all_finite(plane), "kspace: non-finite entry");
      require(((m.cast<double>() > 0.0) || (plane.abs() == 0.0)).all(),
              "kspace: nonzero entry at unsampled position");
    }
  }
  require(noise_sigma >= 0.0, "kspace: negative noise sigma");
}

FlowField FlowField::zeros(Index pairs, Index height, Index width) {
  FlowField v;
  v.pairs = pairs;
  v.height = height;
  v.width = width;
  v.vx.assign(static_cast<std::size_t>(pairs), ReField::Zero(height, width));
  v.vy.assign(static_cast<std::size_t>(pairs), ReField::Zero(height, width));
  return v;
}

double FlowField::max_abs() const {
  double m = 0;
  for (Index k = 0; k < pairs; ++k) {
    m = std::max(m, vx[static_cast<std::size_t>(k)].abs().maxCoeff());
    m = std::max(m, vy[static_cast<std::size_t>(k)].abs().maxCoeff());
  }
  return m;
}

void FlowField::validate() const {
  require(pairs >= 1 && height >= 1 && width >= 1, "flow: degenerate dims");
  require(static_cast<Index>(vx.size()) == pairs && static_cast<Index>(vy.size()) == pairs,
          "flow: component count mismatch");
  for (Index k = 0; k < pairs; ++k) {
    const auto& x = vx[static_cast<std::size_t>(k)];
    const auto& y = vy[static_cast<std::size_t>(k)];
    require(x.rows() == height && x.cols() == width && y.rows() == height && y.cols() == width,
            "flow: plane dims differ");
    require(x.isFinite().all() && y.isFinite().all(), "flow: non-finite entry");
  }
}

void CoilMaps::validate(double sos_tol) const {
  require(coils >= 1, "coils: need at least one coil");
  require(static_cast<Index>(maps.size()) == coils, "coils: map count mismatch");
  ReField sos = ReField::Zero(height, width);
  for (const auto& m : maps) {
    require(m.rows() == height && m.cols() == width, "coils: map dims differ");
    require(all_finite(m), "coils: non-finite entry");
    sos += m.abs2();
  }
  require(((sos - 1.0).abs() <= sos_tol).all(),
          "coils: sum-of-squares deviates from 1");
}

void ModelParams::validate() const {
  require(gamma >= 0 && delta >= 0 && beta >= 0, "params: negative weight");
  require(zeta_stop > 0, "params: zeta_stop must be positive");
  require(max_outer >= 1, "params: max_outer must be >= 1");
}

void SolverConfig::validate() const {
  require(tau >= 0 && sigma >= 0, "solver: step sizes must be nonnegative");
  require(theta >= 0 && theta <= 1, "solver: theta outside [0,1]");
  require(max_inner >= 1, "solver: max_inner must be >= 1");
  require(inner_tol > 0, "solver: inner_tol must be positive");
}

}  // namespace csm
