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

#include "csm/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace csm {

namespace {

// One cached FFTW plan pair + centering modulations per grid shape. Plans are
// created with FFTW_ESTIMATE so planning never measures (bitwise reproducible
// runs) and FFTW_UNALIGNED so they execute on any caller buffer.
struct PlanEntry {
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
  CxVec row_pre, col_pre;    // exp(+2*pi*i * c * x / N) per axis
  CxVec row_post, col_post;  // exp(+2*pi*i * (k - c) * c / N) per axis
};

class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  const PlanEntry& get2d(Index h, Index w) {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = plans2d_.find({h, w});
    if (it != plans2d_.end()) return it->second;

    PlanEntry e;
    std::vector<Cx> probe(static_cast<std::size_t>(h * w));
    auto* buf = reinterpret_cast<fftw_complex*>(probe.data());
    e.fwd = fftw_plan_dft_2d(static_cast<int>(h), static_cast<int>(w), buf, buf, FFTW_FORWARD,
                             FFTW_ESTIMATE | FFTW_UNALIGNED);
    e.bwd = fftw_plan_dft_2d(static_cast<int>(h), static_cast<int>(w), buf, buf, FFTW_BACKWARD,
                             FFTW_ESTIMATE | FFTW_UNALIGNED);
    e.row_pre = premod(h);
    e.col_pre = premod(w);
    e.row_post = postmod(h);
    e.col_post = postmod(w);
    return plans2d_.emplace(std::make_pair(h, w), std::move(e)).first->second;
  }

  fftw_plan get1d(Index n, bool inverse) {
    std::lock_guard<std::mutex> lock(mu_);
    auto key = std::make_pair(n, inverse);
    auto it = plans1d_.find(key);
    if (it != plans1d_.end()) return it->second;
    std::vector<Cx> probe(static_cast<std::size_t>(n));
    auto* buf = reinterpret_cast<fftw_complex*>(probe.data());
    fftw_plan p = fftw_plan_dft_1d(static_cast<int>(n), buf, buf,
                                   inverse ? FFTW_BACKWARD : FFTW_FORWARD,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans1d_.emplace(key, p);
    return p;
  }

 private:
  static CxVec premod(Index n) {
    const Index c = n / 2;
    CxVec v(n);
    for (Index x = 0; x < n; ++x) {
      const double phi = 2.0 * std::numbers::pi * static_cast<double>(c) *
                         static_cast<double>(x) / static_cast<double>(n);
      v(x) = Cx(std::cos(phi), std::sin(phi));
    }
    return v;
  }

  static CxVec postmod(Index n) {
    const Index c = n / 2;
    CxVec v(n);
    for (Index k = 0; k < n; ++k) {
      const double phi = 2.0 * std::numbers::pi * static_cast<double>(k - c) *
                         static_cast<double>(c) / static_cast<double>(n);
      v(k) = Cx(std::cos(phi), std::sin(phi));
    }
    return v;
  }

  std::mutex mu_;
  std::map<std::pair<Index, Index>, PlanEntry> plans2d_;
  std::map<std::pair<Index, bool>, fftw_plan> plans1d_;
};

void run2d(fftw_plan plan, CxField& buf) {
  auto* p = reinterpret_cast<fftw_complex*>(buf.data());
  fftw_execute_dft(plan, p, p);
}

}  // namespace

CxField fft2_centered(const CxField& u) {
  if (u.rows() < 1 || u.cols() < 1) throw DataError("fft: empty field");
  const auto& e = PlanCache::instance().get2d(u.rows(), u.cols());
  CxField buf(u.rows(), u.cols());
  for (Index r = 0; r < u.rows(); ++r)
    for (Index c = 0; c < u.cols(); ++c) buf(r, c) = u(r, c) * e.row_pre(r) * e.col_pre(c);
  run2d(e.fwd, buf);
  const double scale = 1.0 / std::sqrt(static_cast<double>(u.rows() * u.cols()));
  for (Index r = 0; r < u.rows(); ++r)
    for (Index c = 0; c < u.cols(); ++c) buf(r, c) *= e.row_post(r) * e.col_post(c) * scale;
  return buf;
}

CxField ifft2_centered(const CxField& y) {
  if (y.rows() < 1 || y.cols() < 1) throw DataError("fft: empty field");
  const auto& e = PlanCache::instance().get2d(y.rows(), y.cols());
  CxField buf(y.rows(), y.cols());
  for (Index r = 0; r < y.rows(); ++r)
    for (Index c = 0; c < y.cols(); ++c)
      buf(r, c) = y(r, c) * std::conj(e.row_post(r) * e.col_post(c));
  run2d(e.bwd, buf);
  const double scale = 1.0 / std::sqrt(static_cast<double>(y.rows() * y.cols()));
  for (Index r = 0; r < y.rows(); ++r)
    for (Index c = 0; c < y.cols(); ++c)
      buf(r, c) *= std::conj(e.row_pre(r) * e.col_pre(c)) * scale;
  return buf;
}

std::vector<CxField> fft_time(const std::vector<CxField>& frames, bool inverse) {
  const Index nt = static_cast<Index>(frames.size());
  if (nt < 1) throw DataError("fft: empty frame stack");
  const Index h = frames[0].rows(), w = frames[0].cols();
  for (const auto& f : frames)
    if (f.rows() != h || f.cols() != w) throw DataError("fft: ragged frame stack");

  fftw_plan plan = PlanCache::instance().get1d(nt, inverse);
  std::vector<CxField> out(frames.size(), CxField(h, w));
  std::vector<Cx> series(static_cast<std::size_t>(nt));
  const double scale = 1.0 / std::sqrt(static_cast<double>(nt));
  for (Index r = 0; r < h; ++r)
    for (Index c = 0; c < w; ++c) {
      for (Index t = 0; t < nt; ++t) series[static_cast<std::size_t>(t)] = frames[static_cast<std::size_t>(t)](r, c);
      auto* p = reinterpret_cast<fftw_complex*>(series.data());
      fftw_execute_dft(plan, p, p);
      for (Index t = 0; t < nt; ++t) out[static_cast<std::size_t>(t)](r, c) = series[static_cast<std::size_t>(t)] * scale;
    }
  return out;
}

}  // namespace csm
