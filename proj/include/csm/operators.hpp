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

#include <cmath>
#include <functional>
#include <memory>
#include <type_traits>
#include <vector>

#include "csm/rng.hpp"
#include "csm/types.hpp"

namespace csm {

/// A linear map between flattened vectors together with its exact adjoint.
template <typename Scalar>
struct LinearOperator {
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  Index domain = 0;  // input length
  Index range = 0;   // output length
  std::function<Vec(const Vec&)> apply;
  std::function<Vec(const Vec&)> adjoint;
};

using CxOperator = LinearOperator<Cx>;
using ReOperator = LinearOperator<double>;

// ---------------------------------------------------------------------------
// Spatial differences. Forward differences with Neumann boundary: the last
// row/column difference is zero; div is the exact negative adjoint of grad
// (backward differences, ignoring the unused boundary entries of p).

template <typename Field>
void grad(const Field& u, Field& gx, Field& gy) {
  const Index h = u.rows(), w = u.cols();
  if (h < 2 || w < 2) throw DataError("grad: field must be at least 2x2");
  gx.resize(h, w);
  gy.resize(h, w);
  gx.rightCols(1).setZero();
  gy.bottomRows(1).setZero();
  gx.leftCols(w - 1) = u.rightCols(w - 1) - u.leftCols(w - 1);
  gy.topRows(h - 1) = u.bottomRows(h - 1) - u.topRows(h - 1);
}

template <typename Field>
Field div(const Field& px, const Field& py) {
  const Index h = px.rows(), w = px.cols();
  if (py.rows() != h || py.cols() != w) throw DataError("div: component dims differ");
  if (h < 2 || w < 2) throw DataError("div: field must be at least 2x2");
  Field out(h, w);
  out.col(0) = px.col(0);
  out.rightCols(1) = -px.col(w - 2);
  if (w > 2) out.middleCols(1, w - 2) = px.middleCols(1, w - 2) - px.middleCols(0, w - 2);
  out.row(0) += py.row(0);
  out.bottomRows(1) -= py.row(h - 2);
  if (h > 2) out.middleRows(1, h - 2) += py.middleRows(1, h - 2) - py.middleRows(0, h - 2);
  return out;
}

// ---------------------------------------------------------------------------
// Temporal difference and the motion coupling term.

/// out[k] = u[k+1] - u[k] for k = 0..frames-2.
std::vector<CxField> temporal_diff(const ImageSequence& u);

/// out[k] = grad(u[k]) . v[k] + u[k+1] - u[k]. The flow is treated as data;
/// the map is linear in u and its adjoint is motion_adjoint below.
std::vector<CxField> motion_op(const ImageSequence& u, const FlowField& v);

// ---------------------------------------------------------------------------
// Multi-coil Fourier encoding: y = mask .* F(coil .* u) per frame and coil,
// with F the centered unitary 2-D DFT.

KSpaceData encode(const ImageSequence& u, const CoilMaps& maps, const SamplingMask& mask);

/// u[k] = sum_c conj(coil_c) .* Finv(mask .* y[k,c]).
ImageSequence encode_adjoint(const KSpaceData& y, const CoilMaps& maps);

// Per-plane kernels shared by the public operations and the solver closures.
// They skip validation; callers guarantee consistent dims.
void encode_frame(const CxField& u, const CoilMaps& maps, const ByteField& mask_frame,
                  CxField* out_coils);
CxField encode_adjoint_frame(const CxField* y_coils, const CoilMaps& maps,
                             const ByteField& mask_frame);

// ---------------------------------------------------------------------------
// Flattening between domain objects and solver vectors. Layout is frame-major
// and row-major within a plane, matching the container format.

CxVec to_vector(const ImageSequence& u);
ImageSequence image_from_vector(const CxVec& x, Index frames, Index height, Index width);
CxVec to_vector(const KSpaceData& y);

// ---------------------------------------------------------------------------
// Operator combinators and spectral-norm estimation.

/// Vertical stack [ops[0]; ops[1]; ...] over a common domain.
template <typename Scalar>
LinearOperator<Scalar> stack_operators(std::vector<LinearOperator<Scalar>> ops) {
  if (ops.empty()) throw DataError("stack: no operators");
  using Vec = typename LinearOperator<Scalar>::Vec;
  LinearOperator<Scalar> st;
  st.domain = ops[0].domain;
  for (const auto& op : ops) {
    if (op.domain != st.domain) throw DataError("stack: domain mismatch");
    st.range += op.range;
  }
  auto shared = std::make_shared<std::vector<LinearOperator<Scalar>>>(std::move(ops));
  const Index range = st.range, domain = st.domain;
  st.apply = [shared, range](const Vec& x) {
    Vec out(range);
    Index at = 0;
    for (const auto& op : *shared) {
      out.segment(at, op.range) = op.apply(x);
      at += op.range;
    }
    return out;
  };
  st.adjoint = [shared, domain](const Vec& r) {
    Vec out = Vec::Zero(domain);
    Index at = 0;
    for (const auto& op : *shared) {
      out += op.adjoint(r.segment(at, op.range));
      at += op.range;
    }
    return out;
  };
  return st;
}

/// Power-method estimate of ||A|| = sqrt(lambda_max(A* A)). Converges from
/// below; deterministic given the seed. A zero operator yields 0.
template <typename Scalar>
double operator_norm(const LinearOperator<Scalar>& op, int iters, std::uint64_t seed) {
  if (iters < 1) throw DataError("operator_norm: iters must be >= 1");
  using Vec = typename LinearOperator<Scalar>::Vec;
  Rng rng(seed);
  Vec x(op.domain);
  for (Index i = 0; i < op.domain; ++i) {
    if constexpr (std::is_same_v<Scalar, Cx>)
      x(i) = Cx(rng.normal(), rng.normal());
    else
      x(i) = rng.normal();
  }
  double nx = x.norm();
  if (nx == 0.0) return 0.0;
  x /= nx;
  double lambda = 0.0;
  for (int it = 0; it < iters; ++it) {
    Vec y = op.adjoint(op.apply(x));
    lambda = y.norm();
    if (lambda == 0.0) return 0.0;
    x = y / lambda;
  }
  return std::sqrt(lambda);
}

}  // namespace csm
