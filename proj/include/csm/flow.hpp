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

#include <utility>

#include "csm/types.hpp"

namespace csm {

/// One displacement field per flow component.
struct FlowPair {
  ReField vx, vy;
};

/// TV-L1 flow between two real frames: minimizes
///   || grad(u_k) . v + (u_k1 - u_k) ||_1 + weight * sum_l ||grad(v_l)||_1
/// with isotropic TV per component, solved by the primal-dual iteration on
/// the stacked operator [pointwise data map; grad vx; grad vy].
///
/// Both frames are first mapped to [0,1] by one joint affine map, which makes
/// `weight` comparable across datasets. Sign convention: v points along the
/// apparent motion from u_k to u_k1, i.e. it solves grad(u_k).v + u_t = 0.
/// `init` warm-starts the primal iterate.
FlowPair estimate_flow_pair(const ReField& u_k, const ReField& u_k1, double weight,
                            const SolverConfig& cfg, const FlowPair* init = nullptr);

/// Flow energy as the pair solver sees it: the same joint normalization is
/// applied to the frames before evaluating data and regularity terms.
double flow_pair_objective(const ReField& u_k, const ReField& u_k1, double weight,
                           const ReField& vx, const ReField& vy);

/// Independent per-pair flow over the magnitude images of u, with weight
/// delta/beta. `init` warm-starts each pair from a previous field.
FlowField estimate_flow(const ImageSequence& u, const ModelParams& params,
                        const SolverConfig& cfg, const FlowField* init = nullptr);

}  // namespace csm
