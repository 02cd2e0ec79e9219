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

#include "csm/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "csm/rng.hpp"

namespace csm {

namespace {

ByteField draw_frame(Index height, Index width, Index rows_on, Index center_lines,
                     double density_power, Rng& rng) {
  const Index center = height / 2;
  std::vector<Index> order(static_cast<std::size_t>(height));
  for (Index r = 0; r < height; ++r) order[static_cast<std::size_t>(r)] = r;
  std::sort(order.begin(), order.end(), [center](Index a, Index b) {
    const Index da = std::abs(a - center), db = std::abs(b - center);
    return da != db ? da < db : a < b;
  });

  std::vector<bool> on(static_cast<std::size_t>(height), false);
  for (Index i = 0; i < center_lines; ++i) on[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = true;

  double r_max = 0;
  for (Index r = 0; r < height; ++r)
    r_max = std::max(r_max, static_cast<double>(std::abs(r - center)));
  if (r_max == 0) r_max = 1;

  std::vector<Index> candidates;
  std::vector<double> weights;
  for (Index r = 0; r < height; ++r) {
    if (on[static_cast<std::size_t>(r)]) continue;
    candidates.push_back(r);
    const double falloff = 1.0 - static_cast<double>(std::abs(r - center)) / r_max;
    weights.push_back(std::max(std::pow(std::max(falloff, 0.0), density_power), 1e-12));
  }

  for (Index picked = center_lines; picked < rows_on; ++picked) {
    double total = 0;
    for (double w : weights) total += w;
    const double target = rng.uniform() * total;
    double acc = 0;
    std::size_t chosen = weights.size() - 1;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      acc += weights[i];
      if (target < acc) {
        chosen = i;
        break;
      }
    }
    on[static_cast<std::size_t>(candidates[chosen])] = true;
    candidates.erase(candidates.begin() + static_cast<std::ptrdiff_t>(chosen));
    weights.erase(weights.begin() + static_cast<std::ptrdiff_t>(chosen));
  }

  ByteField f = ByteField::Zero(height, width);
  for (Index r = 0; r < height; ++r)
    if (on[static_cast<std::size_t>(r)]) f.row(r).setConstant(1);
  return f;
}

}  // namespace

SamplingMask make_mask(Index frames, Index height, Index width, double accel,
                       Index center_lines, double density_power, std::uint64_t seed,
                       bool freeze) {
  if (frames < 1 || height < 1 || width < 1) throw DataError("mask: degenerate dims");
  if (accel <= 1.0) throw DataError("mask: acceleration must exceed 1");
  if (center_lines < 0) throw DataError("mask: negative center_lines");
  if (density_power < 0) throw DataError("mask: negative density_power");
  const double rows_exact = static_cast<double>(height) / accel;
  if (static_cast<double>(center_lines) > std::ceil(rows_exact))
    throw DataError("mask: center_lines exceeds the sampled-row budget");
  if (accel > static_cast<double>(height) / std::max<Index>(center_lines, 1))
    throw DataError("mask: acceleration infeasible with this center block");

  const Index rows_on =
      std::clamp<Index>(static_cast<Index>(std::llround(rows_exact)), std::max<Index>(center_lines, 1), height);
  const double achieved = static_cast<double>(height) / static_cast<double>(rows_on);
  if (std::abs(achieved - accel) > 0.05 * accel)
    throw DataError("mask: acceleration/center_lines combination infeasible");

  SamplingMask m;
  m.frames = frames;
  m.height = height;
  m.width = width;
  m.accel_requested = accel;
  m.seed = seed;
  m.center_lines = center_lines;
  m.data.reserve(static_cast<std::size_t>(frames));
  for (Index k = 0; k < frames; ++k) {
    if (freeze && k > 0) {
      m.data.push_back(m.data.front());
      continue;
    }
    Rng rng(seed ^ static_cast<std::uint64_t>(k));
    m.data.push_back(draw_frame(height, width, rows_on, center_lines, density_power, rng));
  }
  m.validate();
  return m;
}

}  // namespace csm
