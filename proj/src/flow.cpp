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

#include "csm/flow.hpp"

#include <cmath>

#include "csm/operators.hpp"
#include "csm/pdhg.hpp"
#include "csm/prox.hpp"

namespace csm {

namespace {

struct NormalizedPair {
  ReField a, b;  // frames mapped to [0,1] by one affine map
};

NormalizedPair normalize_jointly(const ReField& u_k, const ReField& u_k1) {
  const double lo = std::min(u_k.minCoeff(), u_k1.minCoeff());
  const double hi = std::max(u_k.maxCoeff(), u_k1.maxCoeff());
  if (hi - lo <= 0.0) return {ReField::Zero(u_k.rows(), u_k.cols()),
                              ReField::Zero(u_k.rows(), u_k.cols())};
  return {ReField((u_k - lo) / (hi - lo)), ReField((u_k1 - lo) / (hi - lo))};
}

ReVec flatten(const ReField& f) { return Eigen::Map<const ReVec>(f.data(), f.size()); }

ReField unflatten(const ReVec& x, Index h, Index w) {
  return Eigen::Map<const ReField>(x.data(), h, w);
}

double tv_iso(const ReField& f) {
  ReField gx, gy;
  grad(f, gx, gy);
  return (gx.square() + gy.square()).sqrt().sum();
}

}  // namespace

FlowPair estimate_flow_pair(const ReField& u_k, const ReField& u_k1, double weight,
                            const SolverConfig& cfg, const FlowPair* init) {
  if (u_k.rows() != u_k1.rows() || u_k.cols() != u_k1.cols())
    throw DataError("flow: frame dims differ");
  if (u_k.rows() < 2 || u_k.cols() < 2) throw DataError("flow: degenerate dims");
  if (weight <= 0) throw DataError("flow: weight must be positive");

  const Index h = u_k.rows(), w = u_k.cols(), n = h * w;
  const auto [a, b] = normalize_jointly(u_k, u_k1);
  ReField gx, gy;
  grad(a, gx, gy);
  const ReVec gxv = flatten(gx), gyv = flatten(gy);
  const ReVec ut = flatten(ReField(b - a));

  // x = [vx; vy]; K x = [gx.vx + gy.vy; grad vx; grad vy].
  ReOperator K;
  K.domain = 2 * n;
  K.range = n + 4 * n;
  K.apply = [=](const ReVec& x) {
    ReVec out(5 * n);
    out.segment(0, n) = gxv.cwiseProduct(x.segment(0, n)) + gyv.cwiseProduct(x.segment(n, n));
    ReField cx, cy;
    grad(unflatten(x.segment(0, n), h, w), cx, cy);
    out.segment(n, n) = flatten(cx);
    out.segment(2 * n, n) = flatten(cy);
    grad(unflatten(x.segment(n, n), h, w), cx, cy);
    out.segment(3 * n, n) = flatten(cx);
    out.segment(4 * n, n) = flatten(cy);
    return out;
  };
  K.adjoint = [=](const ReVec& r) {
    ReVec out(2 * n);
    out.segment(0, n) = gxv.cwiseProduct(r.segment(0, n));
    out.segment(n, n) = gyv.cwiseProduct(r.segment(0, n));
    out.segment(0, n) -= flatten(
        div(unflatten(r.segment(n, n), h, w), unflatten(r.segment(2 * n, n), h, w)));
    out.segment(n, n) -= flatten(
        div(unflatten(r.segment(3 * n, n), h, w), unflatten(r.segment(4 * n, n), h, w)));
    return out;
  };

  SaddleProblem<double> p;
  p.K = K;
  p.prox_fstar = [=](const ReVec& v, double sigma) {
    ReVec r = v;
    r.segment(0, n) += sigma * ut;
    project_interval(r.segment(0, n), 1.0);
    project_pair_ball<double>(r.segment(n, 2 * n), weight);
    project_pair_ball<double>(r.segment(3 * n, 2 * n), weight);
    return r;
  };
  if (init) {
    p.x0 = ReVec(2 * n);
    p.x0.segment(0, n) = flatten(init->vx);
    p.x0.segment(n, n) = flatten(init->vy);
  }

  const auto res = pdhg_solve(p, cfg);
  return {unflatten(res.x.segment(0, n), h, w), unflatten(res.x.segment(n, n), h, w)};
}

double flow_pair_objective(const ReField& u_k, const ReField& u_k1, double weight,
                           const ReField& vx, const ReField& vy) {
  const auto [a, b] = normalize_jointly(u_k, u_k1);
  ReField gx, gy;
  grad(a, gx, gy);
  const double data = (gx * vx + gy * vy + (b - a)).abs().sum();
  return data + weight * (tv_iso(vx) + tv_iso(vy));
}

FlowField estimate_flow(const ImageSequence& u, const ModelParams& params,
                        const SolverConfig& cfg, const FlowField* init) {
  if (u.frames < 2) throw DataError("flow: need at least two frames");
  if (params.beta <= 0) throw DataError("flow: weight delta/beta undefined for beta = 0");
  const double weight = params.delta / params.beta;

  FlowField v;
  v.pairs = u.frames - 1;
  v.height = u.height;
  v.width = u.width;
  for (Index k = 0; k + 1 < u.frames; ++k) {
    const ReField mk = u.frame(k).abs();
    const ReField mk1 = u.frame(k + 1).abs();
    FlowPair warm;
    const FlowPair* warm_ptr = nullptr;
    if (init && init->pairs == v.pairs) {
      warm = {init->vx[static_cast<std::size_t>(k)], init->vy[static_cast<std::size_t>(k)]};
      warm_ptr = &warm;
    }
    FlowPair pair = estimate_flow_pair(mk, mk1, weight, cfg, warm_ptr);
    v.vx.push_back(std::move(pair.vx));
    v.vy.push_back(std::move(pair.vy));
  }
  v.validate();
  return v;
}

}  // namespace csm
