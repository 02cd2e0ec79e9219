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

#include <string>
#include <vector>

#include "csm/operators.hpp"
#include "csm/types.hpp"

namespace csm {

/// Saddle-point problem min_x max_r <Kx, r> + G(x) - F*(r). The prox maps
/// receive (point, step) and return the proximal point.
template <typename Scalar>
struct SaddleProblem {
  using Vec = typename LinearOperator<Scalar>::Vec;
  LinearOperator<Scalar> K;
  std::function<Vec(const Vec&, double)> prox_g;      // identity when empty
  std::function<Vec(const Vec&, double)> prox_fstar;  // required
  Vec x0, r0;                                         // zero-filled when empty
  double op_norm = 0.0;            // ||K||; estimated by power method when 0
  std::function<double(const Vec&)> objective;  // optional, recorded in trace
};

struct PdhgTrace {
  std::vector<double> primal_residual;  // relative change per iteration
  std::vector<double> objective;        // present when an evaluator was given
};

template <typename Scalar>
struct PdhgResult {
  typename LinearOperator<Scalar>::Vec x, r;
  PdhgTrace trace;
  int iters = 0;
};

/// Writes "iteration,primal_residual[,objective]" rows.
void write_trace_csv(const std::string& path, const PdhgTrace& trace);

namespace detail {
constexpr std::uint64_t kNormSeed = 0x575d1f3efca0a27bULL;
constexpr double kRelChangeFloor = 1e-12;
}  // namespace detail

/// First-order primal-dual iteration with over-relaxation theta:
///   r    <- prox_F*(r + sigma K xbar)
///   x+   <- prox_G(x - tau K* r)
///   xbar <- x+ + theta (x+ - x)
/// Stops when the relative change of x drops below cfg.inner_tol or at
/// cfg.max_inner. Throws SolverError on invalid steps or non-finite iterates.
template <typename Scalar>
PdhgResult<Scalar> pdhg_solve(const SaddleProblem<Scalar>& p, const SolverConfig& cfg) {
  using Vec = typename LinearOperator<Scalar>::Vec;
  cfg.validate();
  if (!p.prox_fstar) throw SolverError("pdhg: prox_fstar is required");

  const double norm_k =
      p.op_norm > 0.0 ? p.op_norm : operator_norm(p.K, 100, detail::kNormSeed);

  double tau = cfg.tau, sigma = cfg.sigma;
  if (tau <= 0.0 || sigma <= 0.0) {
    const double step = norm_k > 0.0 ? 1.0 / norm_k : 1.0;
    tau = sigma = step;
  }
  if (tau * sigma * norm_k * norm_k > 1.0 + 1e-9)
    throw SolverError("pdhg: step sizes violate tau*sigma*||K||^2 <= 1");

  Vec x = p.x0.size() ? p.x0 : Vec::Zero(p.K.domain);
  Vec r = p.r0.size() ? p.r0 : Vec::Zero(p.K.range);
  if (x.size() != p.K.domain || r.size() != p.K.range)
    throw SolverError("pdhg: initial point dims do not match K");
  Vec xbar = x;

  PdhgResult<Scalar> res;
  for (int it = 1; it <= cfg.max_inner; ++it) {
    r = p.prox_fstar(Vec(r + sigma * p.K.apply(xbar)), sigma);
    Vec x_new = Vec(x - tau * p.K.adjoint(r));
    if (p.prox_g) x_new = p.prox_g(x_new, tau);

    const double change = (x_new - x).norm();
    const double rel = change / std::max(x.norm(), detail::kRelChangeFloor);
    if (!std::isfinite(rel) || !x_new.allFinite())
      throw SolverError("pdhg: non-finite iterate at iteration " + std::to_string(it));

    xbar = x_new + cfg.theta * (x_new - x);
    x = std::move(x_new);
    res.trace.primal_residual.push_back(rel);
    if (p.objective) res.trace.objective.push_back(p.objective(x));
    res.iters = it;
    if (rel < cfg.inner_tol) break;
  }
  res.x = std::move(x);
  res.r = std::move(r);
  return res;
}

}  // namespace csm
