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
#include <Eigen/SVD>

#include "csm/types.hpp"

namespace csm {

// Proximal maps used by the two sub-problems and the baselines. All maps act
// in place on Eigen vectors/segments.

/// L1 prox: soft-threshold by t. Complex entries shrink in modulus.
inline void soft_threshold(Eigen::Ref<ReVec> x, double t) {
  x = x.array().sign() * (x.array().abs() - t).max(0.0);
}

inline void soft_threshold(Eigen::Ref<CxVec> x, double t) {
  for (Index i = 0; i < x.size(); ++i) {
    const double m = std::abs(x(i));
    x(i) = m > t ? x(i) * ((m - t) / m) : Cx(0, 0);
  }
}

/// Dual of the (weighted) L1 norm: clamp to [-radius, radius].
inline void project_interval(Eigen::Ref<ReVec> r, double radius) {
  r = r.cwiseMax(-radius).cwiseMin(radius);
}

/// Dual of the complex-modulus L1 norm: pointwise disc projection.
inline void project_disc(Eigen::Ref<CxVec> r, double radius) {
  for (Index i = 0; i < r.size(); ++i) {
    const double m = std::abs(r(i));
    if (m > radius) r(i) *= radius / m;
  }
}

/// Dual of isotropic TV: q = [qx; qy] halves, projected pointwise onto the
/// ball of given radius in the joint norm sqrt(|qx|^2 + |qy|^2). For complex
/// fields this couples all four real components of a pixel.
template <typename Scalar>
void project_pair_ball(Eigen::Ref<Eigen::Matrix<Scalar, Eigen::Dynamic, 1>> q, double radius) {
  const Index n = q.size() / 2;
  for (Index i = 0; i < n; ++i) {
    const double m = std::sqrt(std::norm(q(i)) + std::norm(q(n + i)));
    if (m > radius) {
      const double s = radius / m;
      q(i) *= s;
      q(n + i) *= s;
    }
  }
}

/// Conjugate prox of the quadratic data term 1/2 ||z - y||^2:
/// r <- (r - sigma*y) / (1 + sigma), applied to r already holding r + sigma*K xbar.
template <typename Vec>
void quad_conjugate(Eigen::Ref<Vec> r, const Vec& y, double sigma) {
  r = (r - sigma * y) / (1.0 + sigma);
}

/// Singular-value soft-threshold (nuclear-norm prox) of a complex matrix.
inline Eigen::MatrixXcd sv_soft_threshold(const Eigen::MatrixXcd& m, double t) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Eigen::VectorXd s = (svd.singularValues().array() - t).max(0.0);
  return svd.matrixU() * s.asDiagonal() * svd.matrixV().adjoint();
}

}  // namespace csm
