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

#include "oracles.hpp"

#include <cmath>
#include <numbers>

#include "csm/errors.hpp"

namespace csm::oracle {

CxField oracle_dft(const CxField& u) {
  const Index h = u.rows(), w = u.cols();
  if (h > 16 || w > 16) throw DataError("oracle_dft: size cap exceeded");
  const Index ch = h / 2, cw = w / 2;
  CxField out(h, w);
  const double scale = 1.0 / std::sqrt(static_cast<double>(h * w));
  for (Index k1 = 0; k1 < h; ++k1)
    for (Index k2 = 0; k2 < w; ++k2) {
      Cx acc(0, 0);
      for (Index x1 = 0; x1 < h; ++x1)
        for (Index x2 = 0; x2 < w; ++x2) {
          const double phase =
              -2.0 * std::numbers::pi *
              (static_cast<double>((k1 - ch) * (x1 - ch)) / static_cast<double>(h) +
               static_cast<double>((k2 - cw) * (x2 - cw)) / static_cast<double>(w));
          acc += u(x1, x2) * Cx(std::cos(phase), std::sin(phase));
        }
      out(k1, k2) = acc * scale;
    }
  return out;
}

ReVec oracle_rof_1d(const ReVec& f, double lambda) {
  const Index n = f.size();
  if (n > 64) throw DataError("oracle_rof_1d: size cap exceeded");
  if (n < 2) return f;
  ReVec p = ReVec::Zero(n - 1);
  const double step = 0.2;  // < 1 / ||D D^T|| = 1/4
  for (int it = 0; it < 2000000; ++it) {
    // x(p) = f - D^T p; gradient of 1/2||x - f||^2 in p is -D x.
    ReVec x(n);
    for (Index i = 0; i < n; ++i) {
      double dtp = 0;
      if (i < n - 1) dtp -= p(i);
      if (i > 0) dtp += p(i - 1);
      x(i) = f(i) - dtp;
    }
    double max_change = 0;
    for (Index i = 0; i < n - 1; ++i) {
      double next = p(i) + step * (x(i + 1) - x(i));
      next = std::min(lambda, std::max(-lambda, next));
      max_change = std::max(max_change, std::abs(next - p(i)));
      p(i) = next;
    }
    if (max_change < 1e-13) break;
  }
  ReVec x(n);
  for (Index i = 0; i < n; ++i) {
    double dtp = 0;
    if (i < n - 1) dtp -= p(i);
    if (i > 0) dtp += p(i - 1);
    x(i) = f(i) - dtp;
  }
  return x;
}

ReVec oracle_lasso_cd(const Eigen::MatrixXd& a, const ReVec& b, double lambda) {
  const Index n = a.cols();
  ReVec x = ReVec::Zero(n);
  ReVec col_sq(n);
  for (Index j = 0; j < n; ++j) col_sq(j) = a.col(j).squaredNorm();
  for (int sweep = 0; sweep < 1000000; ++sweep) {
    double max_change = 0;
    for (Index j = 0; j < n; ++j) {
      if (col_sq(j) == 0) continue;
      const ReVec resid = b - a * x + a.col(j) * x(j);
      const double rho = a.col(j).dot(resid);
      double next = 0;
      if (rho > lambda)
        next = (rho - lambda) / col_sq(j);
      else if (rho < -lambda)
        next = (rho + lambda) / col_sq(j);
      max_change = std::max(max_change, std::abs(next - x(j)));
      x(j) = next;
    }
    if (max_change < 1e-14) break;
  }
  return x;
}

std::pair<double, double> oracle_metrics(const ReField& gold, const ReField& candidate) {
  const Index h = gold.rows(), w = gold.cols();
  if (candidate.rows() != h || candidate.cols() != w)
    throw DataError("oracle_metrics: dims differ");

  // SSIM with the same conventions as the library: both images divided by
  // max|gold|, 8x8 uniform sliding windows, biased moments, c = (1e-4, 9e-4).
  double scale = 0;
  for (Index r = 0; r < h; ++r)
    for (Index c = 0; c < w; ++c) scale = std::max(scale, std::abs(gold(r, c)));
  if (scale == 0) scale = 1;
  const double c1 = 1e-4, c2 = 9e-4;
  const Index win = 8;
  double ssim_acc = 0;
  Index windows = 0;
  for (Index r0 = 0; r0 + win <= h; ++r0)
    for (Index c0 = 0; c0 + win <= w; ++c0) {
      double mu_a = 0, mu_b = 0;
      for (Index r = r0; r < r0 + win; ++r)
        for (Index c = c0; c < c0 + win; ++c) {
          mu_a += gold(r, c) / scale;
          mu_b += candidate(r, c) / scale;
        }
      const double n = static_cast<double>(win * win);
      mu_a /= n;
      mu_b /= n;
      double var_a = 0, var_b = 0, cov = 0;
      for (Index r = r0; r < r0 + win; ++r)
        for (Index c = c0; c < c0 + win; ++c) {
          const double da = gold(r, c) / scale - mu_a;
          const double db = candidate(r, c) / scale - mu_b;
          var_a += da * da;
          var_b += db * db;
          cov += da * db;
        }
      var_a /= n;
      var_b /= n;
      cov /= n;
      ssim_acc += ((2 * mu_a * mu_b + c1) * (2 * cov + c2)) /
                  ((mu_a * mu_a + mu_b * mu_b + c1) * (var_a + var_b + c2));
      ++windows;
    }
  const double ssim_val = ssim_acc / static_cast<double>(windows);

  // LMSE over 20x20 patches at step 10, inverted and normalized.
  const Index patch = 20, step = 10;
  if (h < patch || w < patch) throw DataError("oracle_metrics: image smaller than one patch");
  double num = 0, den = 0;
  for (Index r0 = 0; r0 + patch <= h; r0 += step)
    for (Index c0 = 0; c0 + patch <= w; c0 += step)
      for (Index r = r0; r < r0 + patch; ++r)
        for (Index c = c0; c < c0 + patch; ++c) {
          const double d = gold(r, c) - candidate(r, c);
          num += d * d;
          den += gold(r, c) * gold(r, c);
        }
  const double slmse_val = den > 0 ? 1.0 - num / den : (num > 0 ? 0.0 : 1.0);
  return {ssim_val, slmse_val};
}

}  // namespace csm::oracle
