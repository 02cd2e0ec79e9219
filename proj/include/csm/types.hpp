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

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <vector>

#include "csm/errors.hpp"

namespace csm {

using Index = Eigen::Index;
using Cx = std::complex<double>;

// 2-D fields are row-major so that the in-memory layout matches the on-disk
// row-major convention and FFTW's native ordering.
using CxField = Eigen::Array<Cx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ReField = Eigen::Array<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ByteField = Eigen::Array<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using CxVec = Eigen::VectorXcd;
using ReVec = Eigen::VectorXd;

/// Rectangular region of interest: [row, row+height) x [col, col+width).
struct Rect {
  Index row = 0;
  Index col = 0;
  Index height = 0;
  Index width = 0;
};

/// Dynamic complex image stack u, one height x width plane per frame.
struct ImageSequence {
  Index frames = 0;
  Index height = 0;
  Index width = 0;
  std::vector<CxField> data;  // data[frame](row, col)

  static ImageSequence zeros(Index frames, Index height, Index width);

  CxField& frame(Index k) { return data[static_cast<std::size_t>(k)]; }
  const CxField& frame(Index k) const { return data[static_cast<std::size_t>(k)]; }

  Index pixels() const { return height * width; }
  Index size() const { return frames * height * width; }

  /// Throws DataError if any invariant is broken (shape consistency,
  /// finiteness of every entry).
  void validate() const;
};

/// Binary k-t sampling pattern over full phase-encode rows.
struct SamplingMask {
  Index frames = 0;
  Index height = 0;
  Index width = 0;
  std::vector<ByteField> data;  // data[frame](row, col), entries in {0,1}
  double accel_requested = 1.0;
  std::uint64_t seed = 0;
  Index center_lines = 0;

  static SamplingMask full(Index frames, Index height, Index width);

  ByteField& frame(Index k) { return data[static_cast<std::size_t>(k)]; }
  const ByteField& frame(Index k) const { return data[static_cast<std::size_t>(k)]; }

  bool is_full() const;
  /// total entries / sampled entries.
  double achieved_accel() const;

  void validate() const;
};

/// Per-frame, per-coil sampled Fourier measurements with their mask.
struct KSpaceData {
  Index frames = 0;
  Index coils = 0;
  Index height = 0;
  Index width = 0;
  std::vector<CxField> data;  // data[frame * coils + coil](row, col)
  SamplingMask mask;
  double noise_sigma = 0.0;

  static KSpaceData zeros(Index frames, Index coils, Index height, Index width);

  CxField& at(Index frame, Index coil) { return data[static_cast<std::size_t>(frame * coils + coil)]; }
  const CxField& at(Index frame, Index coil) const {
    return data[static_cast<std::size_t>(frame * coils + coil)];
  }

  void validate() const;
};

/// Per-frame-pair displacement field (vx, vy) in pixels/frame.
/// vx moves along columns, vy along rows.
struct FlowField {
  Index pairs = 0;
  Index height = 0;
  Index width = 0;
  std::vector<ReField> vx;  // vx[pair](row, col)
  std::vector<ReField> vy;

  static FlowField zeros(Index pairs, Index height, Index width);

  Index size() const { return pairs * height * width * 2; }
  double max_abs() const;

  void validate() const;
};

/// Complex coil sensitivity maps, sum-of-squares normalized per pixel.
struct CoilMaps {
  Index coils = 0;
  Index height = 0;
  Index width = 0;
  std::vector<CxField> maps;  // maps[coil](row, col)

  CxField& coil(Index c) { return maps[static_cast<std::size_t>(c)]; }
  const CxField& coil(Index c) const { return maps[static_cast<std::size_t>(c)]; }

  /// `sos_tol` is the allowed deviation of sum_c |c|^2 from 1. Maps built in
  /// double precision hold 1e-10; maps loaded from the float32 container only
  /// hold float precision, so the loader passes a wider tolerance.
  void validate(double sos_tol = 1e-10) const;
};

/// Model weights of the joint objective and outer-loop stopping rule.
struct ModelParams {
  double gamma = 0.05;     // sparsity weight
  double delta = 0.1;      // flow regularity weight
  double beta = 0.45;      // motion data-fidelity weight
  double zeta_stop = 1e-5; // outer-loop tolerance on d_error
  int max_outer = 10;

  void validate() const;
};

/// Primal-dual solver constants. tau/sigma of 0 mean "auto": both are set to
/// 1/||K|| via the power method.
struct SolverConfig {
  double tau = 0.0;
  double sigma = 0.0;
  double theta = 1.0;
  int max_inner = 300;
  double inner_tol = 1e-5;

  void validate() const;
};

}  // namespace csm
