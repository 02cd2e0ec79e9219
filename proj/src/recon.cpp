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

#include "csm/recon.hpp"

#include <chrono>
#include <fstream>
#include <iomanip>

#include "csm/fft.hpp"
#include "csm/flow.hpp"
#include "csm/operators.hpp"
#include "csm/pdhg.hpp"
#include "csm/prox.hpp"

namespace csm {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Layout of the stacked dual vector for the reconstruction operator:
// [per-frame k-space | per-frame gradient pairs | per-pair motion residual].
struct ReconLayout {
  Index frames, coils, h, w;
  bool motion;
  Index n() const { return h * w; }
  Index data_len() const { return frames * coils * n(); }
  Index tv_len() const { return frames * 2 * n(); }
  Index motion_len() const { return motion ? (frames - 1) * n() : 0; }
  Index range() const { return data_len() + tv_len() + motion_len(); }
  Index domain() const { return frames * n(); }
};

CxField map_frame(const CxVec& x, const ReconLayout& L, Index k) {
  return Eigen::Map<const CxField>(x.data() + k * L.n(), L.h, L.w);
}

CxOperator make_recon_operator(const CoilMaps& maps, const SamplingMask& mask,
                               const FlowField* flow, const ReconLayout& L) {
  const CoilMaps maps_copy = maps;
  const SamplingMask mask_copy = mask;
  const FlowField flow_copy = flow ? *flow : FlowField{};
  const bool with_motion = L.motion;

  CxOperator K;
  K.domain = L.domain();
  K.range = L.range();
  K.apply = [maps_copy, mask_copy, flow_copy, with_motion, L](const CxVec& x) {
    CxVec out(L.range());
    std::vector<CxField> coil_buf(static_cast<std::size_t>(L.coils));
    std::vector<CxField> gx(static_cast<std::size_t>(L.frames)),
        gy(static_cast<std::size_t>(L.frames));
    for (Index k = 0; k < L.frames; ++k) {
      const CxField u = map_frame(x, L, k);
      encode_frame(u, maps_copy, mask_copy.frame(k), coil_buf.data());
      for (Index c = 0; c < L.coils; ++c)
        Eigen::Map<CxField>(out.data() + (k * L.coils + c) * L.n(), L.h, L.w) =
            coil_buf[static_cast<std::size_t>(c)];
      grad(u, gx[static_cast<std::size_t>(k)], gy[static_cast<std::size_t>(k)]);
      const Index tv_at = L.data_len() + k * 2 * L.n();
      Eigen::Map<CxField>(out.data() + tv_at, L.h, L.w) = gx[static_cast<std::size_t>(k)];
      Eigen::Map<CxField>(out.data() + tv_at + L.n(), L.h, L.w) = gy[static_cast<std::size_t>(k)];
    }
    if (with_motion) {
      for (Index k = 0; k + 1 < L.frames; ++k) {
        const auto sk = static_cast<std::size_t>(k);
        Eigen::Map<CxField>(out.data() + L.data_len() + L.tv_len() + k * L.n(), L.h, L.w) =
            gx[sk] * flow_copy.vx[sk].cast<Cx>() + gy[sk] * flow_copy.vy[sk].cast<Cx>() +
            map_frame(x, L, k + 1) - map_frame(x, L, k);
      }
    }
    return out;
  };
  K.adjoint = [maps_copy, mask_copy, flow_copy, with_motion, L](const CxVec& r) {
    CxVec out = CxVec::Zero(L.domain());
    std::vector<CxField> coil_buf(static_cast<std::size_t>(L.coils));
    for (Index k = 0; k < L.frames; ++k) {
      Eigen::Map<CxField> acc(out.data() + k * L.n(), L.h, L.w);
      for (Index c = 0; c < L.coils; ++c)
        coil_buf[static_cast<std::size_t>(c)] =
            Eigen::Map<const CxField>(r.data() + (k * L.coils + c) * L.n(), L.h, L.w);
      acc += encode_adjoint_frame(coil_buf.data(), maps_copy, mask_copy.frame(k));

      const Index tv_at = L.data_len() + k * 2 * L.n();
      const CxField px = Eigen::Map<const CxField>(r.data() + tv_at, L.h, L.w);
      const CxField py = Eigen::Map<const CxField>(r.data() + tv_at + L.n(), L.h, L.w);
      acc -= div(px, py);
    }
    if (with_motion) {
      for (Index k = 0; k + 1 < L.frames; ++k) {
        const auto sk = static_cast<std::size_t>(k);
        const CxField wk = Eigen::Map<const CxField>(
            r.data() + L.data_len() + L.tv_len() + k * L.n(), L.h, L.w);
        Eigen::Map<CxField> acc_k(out.data() + k * L.n(), L.h, L.w);
        Eigen::Map<CxField> acc_k1(out.data() + (k + 1) * L.n(), L.h, L.w);
        acc_k -= div(CxField(wk * flow_copy.vx[sk].cast<Cx>()),
                     CxField(wk * flow_copy.vy[sk].cast<Cx>()));
        acc_k -= wk;
        acc_k1 += wk;
      }
    }
    return out;
  };
  return K;
}

std::function<CxVec(const CxVec&, double)> make_recon_prox(const CxVec& y_flat, double gamma,
                                                           double beta, const ReconLayout& L) {
  return [y_flat, gamma, beta, L](const CxVec& v, double sigma) {
    CxVec r = v;
    auto data = r.segment(0, L.data_len());
    quad_conjugate<CxVec>(data, y_flat, sigma);
    for (Index k = 0; k < L.frames; ++k)
      project_pair_ball<Cx>(r.segment(L.data_len() + k * 2 * L.n(), 2 * L.n()), gamma);
    if (L.motion) project_disc(r.segment(L.data_len() + L.tv_len(), L.motion_len()), beta);
    return r;
  };
}

double tv_complex(const CxField& u) {
  CxField gx, gy;
  grad(u, gx, gy);
  return (gx.abs2() + gy.abs2()).sqrt().sum();
}

double tv_iso_real(const ReField& f) {
  ReField gx, gy;
  grad(f, gx, gy);
  return (gx.square() + gy.square()).sqrt().sum();
}

ReconLayout layout_for(const KSpaceData& y, bool motion) {
  return ReconLayout{y.frames, y.coils, y.height, y.width, motion};
}

void check_recon_dims(const KSpaceData& y, const CoilMaps& maps, const SamplingMask& mask) {
  if (maps.height != y.height || maps.width != y.width || maps.coils != y.coils)
    throw DataError("recon: coil maps do not match k-space dims");
  if (mask.frames != y.frames || mask.height != y.height || mask.width != y.width)
    throw DataError("recon: mask does not match k-space dims");
}

// One primal-dual solve of the data/TV(/motion) problem; shared by the plain
// sparse reconstruction and each outer iteration of the joint method.
PdhgResult<Cx> solve_u_step(const KSpaceData& y, const CoilMaps& maps, const SamplingMask& mask,
                            double gamma, double beta, const FlowField* flow,
                            const SolverConfig& cfg, const CxVec* x0, const CxVec* r0) {
  const ReconLayout L = layout_for(y, flow != nullptr);
  SaddleProblem<Cx> p;
  p.K = make_recon_operator(maps, mask, flow, L);
  p.prox_fstar = make_recon_prox(to_vector(y), gamma, beta, L);
  if (x0) p.x0 = *x0;
  if (r0) p.r0 = *r0;
  return pdhg_solve(p, cfg);
}

}  // namespace

void ReconResult::write_trace_csv(const std::string& path) const {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw DataError("trace: cannot open for writing: " + path);
  out << "outer_iter,objective,d_error,wall_time\n";
  out << std::setprecision(17);
  for (std::size_t i = 0; i < objective_trace.size(); ++i) {
    const double derr = i < d_error_trace.size() ? d_error_trace[i] : 0.0;
    const double wall = i < wall_trace.size() ? wall_trace[i] : 0.0;
    out << (i + 1) << "," << objective_trace[i] << "," << derr << "," << wall << "\n";
  }
  if (!out) throw DataError("trace: write failed: " + path);
}

ReconResult zero_fill(const KSpaceData& y, const CoilMaps& maps) {
  const auto t0 = Clock::now();
  ReconResult res;
  res.image = encode_adjoint(y, maps);
  res.outer_iters = 1;
  res.wall_time = seconds_since(t0);
  return res;
}

ReconResult reconstruct_cs(const KSpaceData& y, const CoilMaps& maps, const SamplingMask& mask,
                           double gamma, const SolverConfig& cfg) {
  if (gamma <= 0) throw DataError("recon: gamma must be positive");
  check_recon_dims(y, maps, mask);
  const auto t0 = Clock::now();
  const auto sol = solve_u_step(y, maps, mask, gamma, 0.0, nullptr, cfg, nullptr, nullptr);
  ReconResult res;
  res.image = image_from_vector(sol.x, y.frames, y.height, y.width);
  res.outer_iters = 1;
  res.wall_time = seconds_since(t0);
  ModelParams p;
  p.gamma = gamma;
  p.delta = 0;
  p.beta = 0;
  res.objective_trace = {objective_eq7(res.image, FlowField::zeros(std::max<Index>(y.frames - 1, 1), y.height, y.width),
                                       y, maps, mask, p)};
  res.d_error_trace = {0.0};
  res.wall_trace = {res.wall_time};
  return res;
}

ReconResult reconstruct_csm(const KSpaceData& y, const CoilMaps& maps, const SamplingMask& mask,
                            const ModelParams& params, const SolverConfig& cfg) {
  params.validate();
  check_recon_dims(y, maps, mask);
  if (y.frames < 2) throw DataError("recon: joint method needs at least two frames");

  // beta = 0 removes the coupling term and fixes the flow at zero, so the
  // problem is exactly the plain sparse reconstruction.
  if (params.beta == 0.0) {
    ReconResult res = reconstruct_cs(y, maps, mask, params.gamma, cfg);
    res.flow = FlowField::zeros(y.frames - 1, y.height, y.width);
    return res;
  }

  const auto t0 = Clock::now();
  const Index n_img = y.frames * y.height * y.width;
  const Index n_flow = (y.frames - 1) * y.height * y.width * 2;

  ImageSequence u = ImageSequence::zeros(y.frames, y.height, y.width);
  FlowField v = FlowField::zeros(y.frames - 1, y.height, y.width);
  CxVec x = CxVec::Zero(n_img);
  CxVec r;  // dual warm start across outer iterations

  ReconResult res;
  for (int outer = 1; outer <= params.max_outer; ++outer) {
    const ImageSequence u_prev = u;
    const FlowField v_prev = v;

    const auto sol = solve_u_step(y, maps, mask, params.gamma, params.beta, &v, cfg, &x,
                                  r.size() ? &r : nullptr);
    x = sol.x;
    r = sol.r;
    u = image_from_vector(x, y.frames, y.height, y.width);

    v = estimate_flow(u, params, cfg, &v_prev);

    double du = 0;
    for (Index k = 0; k < u.frames; ++k) du += (u.frame(k) - u_prev.frame(k)).abs().sum();
    du /= static_cast<double>(n_img);
    double dv = 0;
    for (Index k = 0; k + 1 < y.frames; ++k) {
      const auto sk = static_cast<std::size_t>(k);
      dv += (v.vx[sk] - v_prev.vx[sk]).abs().sum() + (v.vy[sk] - v_prev.vy[sk]).abs().sum();
    }
    dv /= static_cast<double>(n_flow);
    const double d_error = du + dv;
    if (!std::isfinite(d_error)) throw SolverError("recon: non-finite outer change");

    res.objective_trace.push_back(objective_eq7(u, v, y, maps, mask, params));
    res.d_error_trace.push_back(d_error);
    res.wall_trace.push_back(seconds_since(t0));
    res.outer_iters = outer;
    if (d_error <= params.zeta_stop) break;
  }

  res.image = std::move(u);
  res.flow = std::move(v);
  res.wall_time = seconds_since(t0);
  return res;
}

std::pair<double, double> ls_default_lambdas(const KSpaceData& y, const CoilMaps& maps,
                                             double rel_l, double rel_s) {
  const ImageSequence m0 = encode_adjoint(y, maps);
  Eigen::MatrixXcd casorati(m0.pixels(), m0.frames);
  for (Index k = 0; k < m0.frames; ++k)
    casorati.col(k) = Eigen::Map<const CxVec>(m0.frame(k).data(), m0.pixels());
  const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(casorati);
  const double spectral = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
  double max_abs = 0;
  for (const auto& f : m0.data) max_abs = std::max(max_abs, f.abs().maxCoeff());
  return {rel_l * spectral, rel_s * max_abs};
}

ReconResult reconstruct_ls(const KSpaceData& y, const CoilMaps& maps, const SamplingMask& mask,
                           double lambda_l, double lambda_s, const SolverConfig& cfg) {
  if (lambda_l <= 0 || lambda_s <= 0) throw DataError("recon: L+S thresholds must be positive");
  check_recon_dims(y, maps, mask);
  cfg.validate();
  const auto t0 = Clock::now();

  const Index npx = y.height * y.width, nt = y.frames;
  ReconResult res;

  double ynorm = 0;
  for (const auto& f : y.data) ynorm += f.abs2().sum();
  if (ynorm == 0) {
    res.image = ImageSequence::zeros(nt, y.height, y.width);
    res.low_rank = ImageSequence::zeros(nt, y.height, y.width);
    res.sparse = ImageSequence::zeros(nt, y.height, y.width);
    res.outer_iters = 0;
    res.wall_time = seconds_since(t0);
    return res;
  }

  const auto to_casorati = [&](const std::vector<CxField>& frames) {
    Eigen::MatrixXcd m(npx, nt);
    for (Index k = 0; k < nt; ++k)
      m.col(k) = Eigen::Map<const CxVec>(frames[static_cast<std::size_t>(k)].data(), npx);
    return m;
  };
  const auto from_casorati = [&](const Eigen::MatrixXcd& m) {
    std::vector<CxField> frames;
    for (Index k = 0; k < nt; ++k)
      frames.push_back(Eigen::Map<const CxField>(m.col(k).data(), y.height, y.width));
    return frames;
  };

  ImageSequence m_img = encode_adjoint(y, maps);
  std::vector<CxField> s_frames(static_cast<std::size_t>(nt), CxField::Zero(y.height, y.width));
  std::vector<CxField> l_frames = s_frames;
  double prev_norm = 0;
  int iters = 0;

  for (int it = 1; it <= cfg.max_inner; ++it) {
    iters = it;
    // Low-rank step on M - S.
    std::vector<CxField> ms(static_cast<std::size_t>(nt));
    for (Index k = 0; k < nt; ++k)
      ms[static_cast<std::size_t>(k)] = m_img.frame(k) - s_frames[static_cast<std::size_t>(k)];
    l_frames = from_casorati(sv_soft_threshold(to_casorati(ms), lambda_l));

    // Sparse step in the temporal-Fourier domain of M - L.
    std::vector<CxField> ml(static_cast<std::size_t>(nt));
    for (Index k = 0; k < nt; ++k)
      ml[static_cast<std::size_t>(k)] = m_img.frame(k) - l_frames[static_cast<std::size_t>(k)];
    std::vector<CxField> spec = fft_time(ml, false);
    for (auto& f : spec) {
      Eigen::Map<CxVec> v(f.data(), f.size());
      soft_threshold(v, lambda_s);
    }
    s_frames = fft_time(spec, true);

    // Data consistency: M = (L + S) - A*(A(L + S) - y).
    ImageSequence ls = ImageSequence::zeros(nt, y.height, y.width);
    for (Index k = 0; k < nt; ++k)
      ls.frame(k) = l_frames[static_cast<std::size_t>(k)] + s_frames[static_cast<std::size_t>(k)];
    KSpaceData forward = encode(ls, maps, mask);
    for (std::size_t i = 0; i < forward.data.size(); ++i) forward.data[i] -= y.data[i];
    const ImageSequence correction = encode_adjoint(forward, maps);
    double change = 0, norm = 0;
    for (Index k = 0; k < nt; ++k) {
      CxField next = ls.frame(k) - correction.frame(k);
      change += (next - m_img.frame(k)).abs2().sum();
      norm += next.abs2().sum();
      m_img.frame(k) = std::move(next);
    }
    change = std::sqrt(change);
    norm = std::sqrt(norm);
    if (!std::isfinite(norm)) throw SolverError("recon: L+S iterate diverged");
    if (prev_norm > 0 && change / prev_norm < cfg.inner_tol) break;
    prev_norm = std::max(norm, 1e-12);
  }

  res.image = std::move(m_img);
  ImageSequence lr = ImageSequence::zeros(nt, y.height, y.width), sp = lr;
  for (Index k = 0; k < nt; ++k) {
    lr.frame(k) = l_frames[static_cast<std::size_t>(k)];
    sp.frame(k) = s_frames[static_cast<std::size_t>(k)];
  }
  res.low_rank = std::move(lr);
  res.sparse = std::move(sp);
  res.outer_iters = iters;
  res.wall_time = seconds_since(t0);
  return res;
}

double objective_eq7(const ImageSequence& u, const FlowField& v, const KSpaceData& y,
                     const CoilMaps& maps, const SamplingMask& mask,
                     const ModelParams& params) {
  check_recon_dims(y, maps, mask);
  if (u.frames != y.frames || u.height != y.height || u.width != y.width)
    throw DataError("objective: image dims do not match k-space");

  double data = 0;
  std::vector<CxField> coil_buf(static_cast<std::size_t>(y.coils));
  for (Index k = 0; k < u.frames; ++k) {
    encode_frame(u.frame(k), maps, mask.frame(k), coil_buf.data());
    for (Index c = 0; c < y.coils; ++c)
      data += (coil_buf[static_cast<std::size_t>(c)] - y.at(k, c)).abs2().sum();
  }
  data *= 0.5;

  double tv = 0;
  for (Index k = 0; k < u.frames; ++k) tv += tv_complex(u.frame(k));

  double flow_reg = 0;
  double motion = 0;
  if (u.frames >= 2 && v.pairs == u.frames - 1) {
    for (Index k = 0; k + 1 < u.frames; ++k) {
      const auto sk = static_cast<std::size_t>(k);
      flow_reg += tv_iso_real(v.vx[sk]) + tv_iso_real(v.vy[sk]);
    }
    const auto coupling = motion_op(u, v);
    for (const auto& m : coupling) motion += m.abs().sum();
  }
  return data + params.gamma * tv + params.delta * flow_reg + params.beta * motion;
}

ImageSequence gold_standard(const KSpaceData& y_full, const CoilMaps& maps) {
  if (maps.coils != y_full.coils || maps.height != y_full.height || maps.width != y_full.width)
    throw DataError("gold: coil maps do not match k-space dims");
  if (!y_full.mask.is_full()) throw DataError("gold: requires fully sampled data");
  ImageSequence out = ImageSequence::zeros(y_full.frames, y_full.height, y_full.width);
  for (Index k = 0; k < y_full.frames; ++k) {
    ReField acc = ReField::Zero(y_full.height, y_full.width);
    for (Index c = 0; c < y_full.coils; ++c) acc += ifft2_centered(y_full.at(k, c)).abs2();
    out.frame(k) = acc.sqrt().cast<Cx>();
  }
  return out;
}

}  // namespace csm
