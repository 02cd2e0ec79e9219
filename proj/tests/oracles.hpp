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

// Brute-force reference implementations used only by tests. They share no
// code with the library paths they check: direct summations and dense loops
// throughout.

#include <complex>
#include <cstdint>
#include <vector>

#include "csm/operators.hpp"
#include "csm/types.hpp"

namespace csm::oracle {

/// Direct O(N^2) centered unitary DFT for grids up to 16x16.
CxField oracle_dft(const CxField& u);

/// 1-D ROF  min_x 1/2||x - f||^2 + lambda TV(x)  for vectors up to 64
/// samples, solved by projected gradient on the dual to tolerance 1e-8.
ReVec oracle_rof_1d(const ReVec& f, double lambda);

/// LASSO  min_x 1/2||Ax - b||^2 + lambda||x||_1  by cyclic coordinate
/// descent, iterated to stagnation.
ReVec oracle_lasso_cd(const Eigen::MatrixXd& a, const ReVec& b, double lambda);

/// Max relative adjoint-pairing error |<Ax,y> - <x,A*y>| over random draws,
/// scaled by (||Ax||*||y|| + ||x||*||A*y||).
template <typename Scalar>
double oracle_adjoint(const LinearOperator<Scalar>& op, int trials, std::uint64_t seed) {
  using Vec = typename LinearOperator<Scalar>::Vec;
  Rng rng(seed);
  const auto draw = [&rng](Index n) {
    Vec v(n);
    for (Index i = 0; i < n; ++i) {
      if constexpr (std::is_same_v<Scalar, Cx>)
        v(i) = Cx(rng.normal(), rng.normal());
      else
        v(i) = rng.normal();
    }
    return v;
  };
  double worst = 0;
  for (int t = 0; t < trials; ++t) {
    const Vec x = draw(op.domain);
    const Vec y = draw(op.range);
    const Vec ax = op.apply(x);
    const Vec aty = op.adjoint(y);
    const Scalar lhs = y.dot(ax);   // <Ax, y> with Eigen's conjugate-first dot
    const Scalar rhs = aty.dot(x);  // <x, A*y>
    const double denom = ax.norm() * y.norm() + x.norm() * aty.norm() + 1e-300;
    worst = std::max(worst, std::abs(lhs - rhs) / denom);
  }
  return worst;
}

/// Literal loop implementations of the SSIM (8x8 uniform sliding window) and
/// inverted normalized localized MSE (20x20 patches, step 10).
std::pair<double, double> oracle_metrics(const ReField& gold, const ReField& candidate);

}  // namespace csm::oracle
