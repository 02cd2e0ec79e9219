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

#include "csm/metrics.hpp"

#include <cmath>

namespace csm {

namespace {

void check_same_dims(const ReField& a, const ReField& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DataError(std::string(what) + ": image dims differ");
  if (a.size() == 0) throw DataError(std::string(what) + ": empty image");
}

// Inclusive-prefix integral table; window sums in O(1).
ReField integral(const ReField& f) {
  ReField s(f.rows(), f.cols());
  for (Index r = 0; r < f.rows(); ++r) {
    double run = 0;
    for (Index c = 0; c < f.cols(); ++c) {
      run += f(r, c);
      s(r, c) = run + (r > 0 ? s(r - 1, c) : 0.0);
    }
  }
  return s;
}

double box_sum(const ReField& s, Index r0, Index c0, Index n) {
  const Index r1 = r0 + n - 1, c1 = c0 + n - 1;
  double v = s(r1, c1);
  if (r0 > 0) v -= s(r0 - 1, c1);
  if (c0 > 0) v -= s(r1, c0 - 1);
  if (r0 > 0 && c0 > 0) v += s(r0 - 1, c0 - 1);
  return v;
}

}  // namespace

double ssim(const ReField& gold, const ReField& candidate, double c1, double c2, Index window) {
  check_same_dims(gold, candidate, "ssim");
  if (window < 1 || window > gold.rows() || window > gold.cols())
    throw DataError("ssim: window larger than image");

  const double scale = gold.abs().maxCoeff();
  const ReField a = scale > 0 ? ReField(gold / scale) : gold;
  const ReField b = scale > 0 ? ReField(candidate / scale) : candidate;

  const ReField sa = integral(a), sb = integral(b);
  const ReField saa = integral(a * a), sbb = integral(b * b), sab = integral(a * b);

  const double n = static_cast<double>(window * window);
  double acc = 0;
  Index count = 0;
  for (Index r = 0; r + window <= a.rows(); ++r)
    for (Index c = 0; c + window <= a.cols(); ++c) {
      const double mu_a = box_sum(sa, r, c, window) / n;
      const double mu_b = box_sum(sb, r, c, window) / n;
      const double var_a = box_sum(saa, r, c, window) / n - mu_a * mu_a;
      const double var_b = box_sum(sbb, r, c, window) / n - mu_b * mu_b;
      const double cov = box_sum(sab, r, c, window) / n - mu_a * mu_b;
      const double num = (2 * mu_a * mu_b + c1) * (2 * cov + c2);
      const double den = (mu_a * mu_a + mu_b * mu_b + c1) * (var_a + var_b + c2);
      acc += num / den;
      ++count;
    }
  return acc / static_cast<double>(count);
}

double slmse(const ReField& gold, const ReField& candidate, Index patch, Index step,
             bool raw_ratio) {
  check_same_dims(gold, candidate, "slmse");
  if (gold.rows() < patch || gold.cols() < patch)
    throw DataError("slmse: image smaller than one patch");
  if (step < 1) throw DataError("slmse: step must be positive");

  double num = 0, den = 0;
  for (Index r = 0; r + patch <= gold.rows(); r += step)
    for (Index c = 0; c + patch <= gold.cols(); c += step) {
      const auto g = gold.block(r, c, patch, patch);
      const auto q = candidate.block(r, c, patch, patch);
      num += (g - q).square().sum();
      den += g.square().sum();
    }
  const double ratio = den > 0 ? num / den : (num > 0 ? 1.0 : 0.0);
  return raw_ratio ? ratio : 1.0 - ratio;
}

double rmse(const ReField& gold, const ReField& candidate) {
  check_same_dims(gold, candidate, "rmse");
  return std::sqrt((gold - candidate).square().mean());
}

std::vector<double> temporal_profile(const ImageSequence& u, const Rect& region) {
  if (region.row < 0 || region.col < 0 || region.height < 1 || region.width < 1 ||
      region.row + region.height > u.height || region.col + region.width > u.width)
    throw DataError("temporal_profile: region out of bounds");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(u.frames));
  for (Index k = 0; k < u.frames; ++k)
    out.push_back(
        u.frame(k).block(region.row, region.col, region.height, region.width).abs().mean());
  return out;
}

std::vector<ReField> magnitude(const ImageSequence& u) {
  std::vector<ReField> out;
  out.reserve(u.data.size());
  for (const auto& f : u.data) out.push_back(f.abs());
  return out;
}

MetricReport compute_report(const std::vector<ReField>& gold,
                            const std::vector<ReField>& candidate) {
  if (gold.size() != candidate.size() || gold.empty())
    throw DataError("report: sequence lengths differ or empty");
  MetricReport rep;
  double global = 0;
  for (const auto& g : gold) global = std::max(global, g.abs().maxCoeff());
  const double scale = global > 0 ? global : 1.0;

  double sq_acc = 0;
  Index n_acc = 0;
  for (std::size_t k = 0; k < gold.size(); ++k) {
    check_same_dims(gold[k], candidate[k], "report");
    rep.per_frame_ssim.push_back(ssim(gold[k], candidate[k]));
    rep.per_frame_slmse.push_back(slmse(gold[k], candidate[k]));
    rep.per_frame_rmse.push_back(rmse(ReField(gold[k] / scale), ReField(candidate[k] / scale)));
    sq_acc += ((gold[k] - candidate[k]) / scale).square().sum();
    n_acc += gold[k].size();
  }
  const auto mean = [](const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
  };
  rep.ssim = mean(rep.per_frame_ssim);
  rep.slmse = mean(rep.per_frame_slmse);
  rep.rmse = std::sqrt(sq_acc / static_cast<double>(n_acc));
  return rep;
}

}  // namespace csm
