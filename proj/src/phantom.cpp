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

#include "csm/phantom.hpp"

#include <cmath>
#include <numbers>

#include "csm/operators.hpp"
#include "csm/rng.hpp"

namespace csm {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Ellipse {
  double cy, cx, a, b;  // a along columns, b along rows
  bool contains(double y, double x) const {
    const double dx = (x - cx) / a, dy = (y - cy) / b;
    return dx * dx + dy * dy <= 1.0;
  }
};

struct Disc {
  double cy, cx, r;
  bool contains(double y, double x) const {
    const double dx = x - cx, dy = y - cy;
    return dx * dx + dy * dy <= r * r;
  }
};

struct FrameGeometry {
  Ellipse torso;
  std::vector<Disc> texture;
  Ellipse ventricle;
  Disc papillary[2];
  double uptake = 0.0;  // perfusion enhancement of the ventricle region
};

double cycle_phase(Index k, int period) {
  return static_cast<double>(k % static_cast<Index>(period)) / static_cast<double>(period);
}

double gamma_variate(double t, double t_peak) {
  if (t <= 0.0) return 0.0;
  const double alpha = 3.0;
  const double ratio = t / t_peak;
  return std::pow(ratio, alpha) * std::exp(alpha * (1.0 - ratio));
}

FrameGeometry frame_geometry(const PhantomSpec& spec, Index k) {
  const double h = static_cast<double>(spec.height), w = static_cast<double>(spec.width);
  const double s = std::min(h, w);
  const double cy = h / 2.0, cx = w / 2.0;

  FrameGeometry g;
  g.torso = {cy, cx, 0.45 * w, 0.42 * h};
  g.texture = {
      {cy - 0.30 * s, cx - 0.26 * s, 0.045 * s},
      {cy + 0.28 * s, cx - 0.20 * s, 0.06 * s},
      {cy + 0.05 * s, cx + 0.33 * s, 0.05 * s},
  };

  const Index geom_frame = spec.kind == PhantomKind::Static ? 0 : k;
  auto [a, b] = cine_ventricle_axes(spec, geom_frame);
  double heart_cy = cy, heart_cx = cx;
  if (spec.respiration && spec.kind != PhantomKind::Static) {
    const int resp_period = 5 * spec.period;
    heart_cy += 0.5 * spec.motion_amplitude * std::sin(kTwoPi * cycle_phase(geom_frame, resp_period));
  }
  g.ventricle = {heart_cy, heart_cx, a, b};

  const double rho = 0.55 * 0.5 * (a + b);
  const double disc_r = 0.03 * s;
  const double angles[2] = {200.0 * std::numbers::pi / 180.0, 340.0 * std::numbers::pi / 180.0};
  for (int i = 0; i < 2; ++i) {
    g.papillary[i] = {heart_cy + rho * std::sin(angles[i]), heart_cx + rho * std::cos(angles[i]),
                      disc_r};
  }

  if (spec.kind == PhantomKind::Perfusion) {
    const double t_peak = std::clamp(spec.uptake_rate, 0.05, 0.95);
    const double t = spec.frames > 1 ? static_cast<double>(k) / static_cast<double>(spec.frames - 1)
                                     : 0.0;
    g.uptake = gamma_variate(t, t_peak);
  }
  return g;
}

double sample_magnitude(const FrameGeometry& g, const PhantomLevels& lv, double y, double x) {
  double v = 0.0;
  if (g.torso.contains(y, x)) v = lv.torso;
  for (const auto& d : g.texture)
    if (d.contains(y, x)) v = lv.texture;
  if (g.ventricle.contains(y, x)) v = std::min(lv.ventricle + 0.2 * g.uptake, 0.95);
  for (const auto& d : g.papillary)
    if (d.contains(y, x)) v = lv.papillary;
  return v;
}

ReField rasterize(const PhantomSpec& spec, const FrameGeometry& g) {
  const PhantomLevels lv = phantom_levels();
  ReField m(spec.height, spec.width);
  // 2x supersampling: four samples per pixel at +-1/4 offsets.
  constexpr double off[2] = {-0.25, 0.25};
  for (Index r = 0; r < spec.height; ++r)
    for (Index c = 0; c < spec.width; ++c) {
      double acc = 0.0;
      for (double oy : off)
        for (double ox : off)
          acc += sample_magnitude(g, lv, static_cast<double>(r) + oy, static_cast<double>(c) + ox);
      m(r, c) = acc / 4.0;
    }
  return m;
}

ReField polynomial_phase(const PhantomSpec& spec) {
  Rng rng(spec.seed ^ 0x70686173ULL);  // distinct stream from other draws
  double p[6];
  p[0] = (rng.uniform() - 0.5) * std::numbers::pi / 2.0;
  for (int i = 1; i < 6; ++i) p[i] = (rng.uniform() - 0.5) * 1.6;
  ReField phi(spec.height, spec.width);
  for (Index r = 0; r < spec.height; ++r)
    for (Index c = 0; c < spec.width; ++c) {
      const double yn = (static_cast<double>(r) - static_cast<double>(spec.height) / 2.0) /
                        static_cast<double>(spec.height);
      const double xn = (static_cast<double>(c) - static_cast<double>(spec.width) / 2.0) /
                        static_cast<double>(spec.width);
      phi(r, c) = p[0] + p[1] * xn + p[2] * yn + p[3] * xn * yn + p[4] * xn * xn + p[5] * yn * yn;
    }
  return phi;
}

}  // namespace

void PhantomSpec::validate() const {
  if (frames < 2) throw DataError("phantom: at least two frames required");
  if (height < 8 || width < 8) throw DataError("phantom: grid too small");
  if (motion_amplitude < 0) throw DataError("phantom: negative motion amplitude");
  if (period < 1) throw DataError("phantom: period must be >= 1");
  if (kind == PhantomKind::Perfusion && uptake_rate <= 0)
    throw DataError("phantom: uptake_rate must be positive");
}

PhantomLevels phantom_levels() { return {}; }

std::pair<double, double> cine_ventricle_axes(const PhantomSpec& spec, Index k) {
  const double s = static_cast<double>(std::min(spec.height, spec.width));
  const double a0 = 0.20 * s, b0 = 0.17 * s;
  double osc = 0.0;
  if (spec.kind == PhantomKind::Cine)
    osc = spec.motion_amplitude * std::sin(kTwoPi * cycle_phase(k, spec.period));
  // Keep the papillary discs strictly inside at peak contraction.
  const double a = std::max(a0 + osc, 0.08 * s);
  const double b = std::max(b0 + osc, 0.08 * s);
  return {a, b};
}

ImageSequence generate_phantom(const PhantomSpec& spec) {
  spec.validate();
  ImageSequence u;
  u.frames = spec.frames;
  u.height = spec.height;
  u.width = spec.width;
  const ReField phi = polynomial_phase(spec);
  const CxField phase = (Cx(0, 1) * phi.cast<Cx>()).exp();

  if (spec.kind == PhantomKind::Static) {
    const ReField m = rasterize(spec, frame_geometry(spec, 0));
    const CxField f = m.cast<Cx>() * phase;
    u.data.assign(static_cast<std::size_t>(spec.frames), f);
  } else {
    u.data.reserve(static_cast<std::size_t>(spec.frames));
    for (Index k = 0; k < spec.frames; ++k) {
      const ReField m = rasterize(spec, frame_geometry(spec, k));
      u.data.push_back(m.cast<Cx>() * phase);
    }
  }
  u.validate();
  return u;
}

CoilMaps generate_coilmaps(Index coils, Index height, Index width, std::uint64_t seed) {
  if (coils < 1) throw DataError("coilmaps: need at least one coil");
  if (height < 1 || width < 1) throw DataError("coilmaps: degenerate dims");
  const double h = static_cast<double>(height), w = static_cast<double>(width);
  const double s = std::min(h, w);
  const double cy = h / 2.0, cx = w / 2.0;
  const double radius = 0.52 * s, sigma = 0.45 * s;

  Rng rng(seed ^ 0x636f696cULL);
  CoilMaps cm;
  cm.coils = coils;
  cm.height = height;
  cm.width = width;
  for (Index c = 0; c < coils; ++c) {
    const double theta = kTwoPi * (static_cast<double>(c) + 0.5) / static_cast<double>(coils);
    const double py = cy + radius * std::sin(theta);
    const double px = cx + radius * std::cos(theta);
    const double ky = (rng.uniform() - 0.5) * 0.6 / s;
    const double kx = (rng.uniform() - 0.5) * 0.6 / s;
    CxField m(height, width);
    for (Index r = 0; r < height; ++r)
      for (Index col = 0; col < width; ++col) {
        const double dy = static_cast<double>(r) - py, dx = static_cast<double>(col) - px;
        const double mag = std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma));
        const double ph = kTwoPi * (ky * static_cast<double>(r) + kx * static_cast<double>(col));
        m(r, col) = mag * Cx(std::cos(ph), std::sin(ph));
      }
    cm.maps.push_back(m);
  }

  ReField sos = ReField::Zero(height, width);
  for (const auto& m : cm.maps) sos += m.abs2();
  const ReField root = sos.sqrt();
  for (auto& m : cm.maps) m /= root.cast<Cx>();
  cm.validate();
  return cm;
}

KSpaceData acquire(const ImageSequence& truth, const CoilMaps& maps, const SamplingMask& mask,
                   double noise_sigma, std::uint64_t seed) {
  if (noise_sigma < 0) throw DataError("acquire: negative noise sigma");
  KSpaceData y = encode(truth, maps, mask);
  y.noise_sigma = noise_sigma;
  if (noise_sigma > 0) {
    Rng rng(seed ^ 0x6e6f697365ULL);
    for (Index k = 0; k < y.frames; ++k) {
      const auto& m = mask.frame(k);
      for (Index c = 0; c < y.coils; ++c) {
        auto& plane = y.at(k, c);
        for (Index r = 0; r < y.height; ++r)
          for (Index col = 0; col < y.width; ++col)
            if (m(r, col)) plane(r, col) += rng.complex_normal(noise_sigma);
      }
    }
  }
  return y;
}

}  // namespace csm
