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

#include "csm/operators.hpp"

#include "csm/fft.hpp"

namespace csm {

std::vector<CxField> temporal_diff(const ImageSequence& u) {
  if (u.frames < 2) throw DataError("temporal_diff: need at least two frames");
  std::vector<CxField> out;
  out.reserve(static_cast<std::size_t>(u.frames - 1));
  for (Index k = 0; k + 1 < u.frames; ++k) out.push_back(u.frame(k + 1) - u.frame(k));
  return out;
}

std::vector<CxField> motion_op(const ImageSequence& u, const FlowField& v) {
  if (u.frames < 2) throw DataError("motion_op: need at least two frames");
  if (v.pairs != u.frames - 1 || v.height != u.height || v.width != u.width)
    throw DataError("motion_op: flow dims do not match image");
  std::vector<CxField> out;
  out.reserve(static_cast<std::size_t>(v.pairs));
  CxField gx, gy;
  for (Index k = 0; k < v.pairs; ++k) {
    grad(u.frame(k), gx, gy);
    const auto sk = static_cast<std::size_t>(k);
    out.push_back(gx * v.vx[sk].cast<Cx>() + gy * v.vy[sk].cast<Cx>() + u.frame(k + 1) -
                  u.frame(k));
  }
  return out;
}

void encode_frame(const CxField& u, const CoilMaps& maps, const ByteField& mask_frame,
                  CxField* out_coils) {
  for (Index c = 0; c < maps.coils; ++c) {
    CxField weighted = maps.coil(c) * u;
    CxField y = fft2_centered(weighted);
    out_coils[c] = y * mask_frame.cast<double>().cast<Cx>();
  }
}

CxField encode_adjoint_frame(const CxField* y_coils, const CoilMaps& maps,
                             const ByteField& mask_frame) {
  CxField acc = CxField::Zero(maps.height, maps.width);
  const CxField m = mask_frame.cast<double>().cast<Cx>();
  for (Index c = 0; c < maps.coils; ++c) {
    CxField img = ifft2_centered(CxField(y_coils[c] * m));
    acc += maps.coil(c).conjugate() * img;
  }
  return acc;
}

KSpaceData encode(const ImageSequence& u, const CoilMaps& maps, const SamplingMask& mask) {
  if (u.height != maps.height || u.width != maps.width)
    throw DataError("encode: coil map dims do not match image");
  if (mask.frames != u.frames || mask.height != u.height || mask.width != u.width)
    throw DataError("encode: mask dims do not match image");
  KSpaceData y;
  y.frames = u.frames;
  y.coils = maps.coils;
  y.height = u.height;
  y.width = u.width;
  y.mask = mask;
  y.data.resize(static_cast<std::size_t>(y.frames * y.coils));
  for (Index k = 0; k < u.frames; ++k)
    encode_frame(u.frame(k), maps, mask.frame(k), &y.data[static_cast<std::size_t>(k * y.coils)]);
  return y;
}

ImageSequence encode_adjoint(const KSpaceData& y, const CoilMaps& maps) {
  if (y.height != maps.height || y.width != maps.width || y.coils != maps.coils)
    throw DataError("encode_adjoint: coil map dims do not match k-space");
  ImageSequence u = ImageSequence::zeros(y.frames, y.height, y.width);
  for (Index k = 0; k < y.frames; ++k)
    u.frame(k) = encode_adjoint_frame(&y.data[static_cast<std::size_t>(k * y.coils)], maps,
                                      y.mask.frame(k));
  return u;
}

CxVec to_vector(const ImageSequence& u) {
  CxVec x(u.size());
  Index at = 0;
  for (const auto& f : u.data) {
    x.segment(at, f.size()) = Eigen::Map<const CxVec>(f.data(), f.size());
    at += f.size();
  }
  return x;
}

ImageSequence image_from_vector(const CxVec& x, Index frames, Index height, Index width) {
  if (x.size() != frames * height * width) throw DataError("image_from_vector: length mismatch");
  ImageSequence u;
  u.frames = frames;
  u.height = height;
  u.width = width;
  u.data.reserve(static_cast<std::size_t>(frames));
  for (Index k = 0; k < frames; ++k)
    u.data.push_back(
        Eigen::Map<const CxField>(x.data() + k * height * width, height, width));
  return u;
}

CxVec to_vector(const KSpaceData& y) {
  CxVec x(y.frames * y.coils * y.height * y.width);
  Index at = 0;
  for (const auto& f : y.data) {
    x.segment(at, f.size()) = Eigen::Map<const CxVec>(f.data(), f.size());
    at += f.size();
  }
  return x;
}

}  // namespace csm
