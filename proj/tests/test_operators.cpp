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

#include <doctest.h>

#include "csm/fft.hpp"
#include "csm/operators.hpp"
#include "csm/phantom.hpp"
#include "csm/sampling.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace csm;
using csm::oracle::oracle_adjoint;

namespace {

// Flattened-field wrappers so every public operator can face the adjoint and
// linearity oracles through one interface.
CxOperator grad_as_operator(Index h, Index w) {
  CxOperator op;
  op.domain = h * w;
  op.range = 2 * h * w;
  op.apply = [h, w](const CxVec& x) {
    const CxField u = Eigen::Map<const CxField>(x.data(), h, w);
    CxField gx, gy;
    grad(u, gx, gy);
    CxVec out(2 * h * w);
    out.segment(0, h * w) = Eigen::Map<const CxVec>(gx.data(), h * w);
    out.segment(h * w, h * w) = Eigen::Map<const CxVec>(gy.data(), h * w);
    return out;
  };
  op.adjoint = [h, w](const CxVec& r) {
    const CxField px = Eigen::Map<const CxField>(r.data(), h, w);
    const CxField py = Eigen::Map<const CxField>(r.data() + h * w, h, w);
    const CxField d = -div(px, py);
    return CxVec(Eigen::Map<const CxVec>(d.data(), h * w));
  };
  return op;
}

CxOperator temporal_as_operator(Index frames, Index h, Index w) {
  CxOperator op;
  const Index n = h * w;
  op.domain = frames * n;
  op.range = (frames - 1) * n;
  op.apply = [frames, h, w, n](const CxVec& x) {
    const ImageSequence u = image_from_vector(x, frames, h, w);
    const auto diffs = temporal_diff(u);
    CxVec out((frames - 1) * n);
    for (Index k = 0; k + 1 < frames; ++k)
      out.segment(k * n, n) =
          Eigen::Map<const CxVec>(diffs[static_cast<std::size_t>(k)].data(), n);
    return out;
  };
  op.adjoint = [frames, n](const CxVec& r) {
    CxVec out = CxVec::Zero(frames * n);
    for (Index k = 0; k + 1 < frames; ++k) {
      out.segment(k * n, n) -= r.segment(k * n, n);
      out.segment((k + 1) * n, n) += r.segment(k * n, n);
    }
    return out;
  };
  return op;
}

CxOperator motion_as_operator(const FlowField& v, Index frames, Index h, Index w) {
  CxOperator op;
  const Index n = h * w;
  op.domain = frames * n;
  op.range = (frames - 1) * n;
  op.apply = [v, frames, h, w, n](const CxVec& x) {
    const ImageSequence u = image_from_vector(x, frames, h, w);
    const auto planes = motion_op(u, v);
    CxVec out((frames - 1) * n);
    for (Index k = 0; k + 1 < frames; ++k)
      out.segment(k * n, n) =
          Eigen::Map<const CxVec>(planes[static_cast<std::size_t>(k)].data(), n);
    return out;
  };
  op.adjoint = [v, frames, h, w, n](const CxVec& r) {
    CxVec out = CxVec::Zero(frames * n);
    for (Index k = 0; k + 1 < frames; ++k) {
      const auto sk = static_cast<std::size_t>(k);
      const CxField wk = Eigen::Map<const CxField>(r.data() + k * n, h, w);
      Eigen::Map<CxField> acc_k(out.data() + k * n, h, w);
      Eigen::Map<CxField> acc_k1(out.data() + (k + 1) * n, h, w);
      acc_k -= div(CxField(wk * v.vx[sk].cast<Cx>()), CxField(wk * v.vy[sk].cast<Cx>()));
      acc_k -= wk;
      acc_k1 += wk;
    }
    return out;
  };
  return op;
}

CxOperator encode_as_operator(const CoilMaps& maps, const SamplingMask& mask) {
  CxOperator op;
  const Index n = maps.height * maps.width;
  const Index frames = mask.frames, coils = maps.coils;
  op.domain = frames * n;
  op.range = frames * coils * n;
  op.apply = [maps, mask, frames, coils, n](const CxVec& x) {
    const ImageSequence u = image_from_vector(x, frames, maps.height, maps.width);
    return to_vector(encode(u, maps, mask));
  };
  op.adjoint = [maps, mask, frames, coils, n](const CxVec& r) {
    std::vector<CxField> coil_buf(static_cast<std::size_t>(coils));
    CxVec out(frames * n);
    for (Index k = 0; k < frames; ++k) {
      for (Index c = 0; c < coils; ++c)
        coil_buf[static_cast<std::size_t>(c)] =
            Eigen::Map<const CxField>(r.data() + (k * coils + c) * n, maps.height, maps.width);
      const CxField acc = encode_adjoint_frame(coil_buf.data(), maps, mask.frame(k));
      out.segment(k * n, n) = Eigen::Map<const CxVec>(acc.data(), n);
    }
    return out;
  };
  return op;
}

template <typename Scalar>
void check_linearity(const LinearOperator<Scalar>& op, std::uint64_t seed) {
  using Vec = typename LinearOperator<Scalar>::Vec;
  Rng rng(seed);
  Vec x(op.domain), y(op.domain);
  for (Index i = 0; i < op.domain; ++i) {
    x(i) = Scalar(rng.normal());
    y(i) = Scalar(rng.normal());
  }
  const Scalar alpha(1.7), beta(-0.4);
  const Vec lhs = op.apply(alpha * x + beta * y);
  const Vec rhs = alpha * op.apply(x) + beta * op.apply(y);
  CHECK((lhs - rhs).norm() <= 1e-12 * std::max(1.0, rhs.norm()));
}

}  // namespace

TEST_CASE("fft matches the direct centered unitary oracle on 8x8") {
  Rng rng(11);
  for (int t = 0; t < 5; ++t) {
    const CxField u = testing::random_cx_field(8, 8, rng);
    const CxField fast = fft2_centered(u);
    const CxField slow = oracle::oracle_dft(u);
    CHECK((fast - slow).abs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("fft of the center impulse is flat with modulus 1/sqrt(N)") {
  CxField u = CxField::Zero(16, 16);
  u(8, 8) = Cx(1, 0);
  const CxField y = fft2_centered(u);
  CHECK((y.abs() - 1.0 / 16.0).abs().maxCoeff() <= 1e-12);
  // The DC bin carries the impulse with zero phase.
  CHECK(std::abs(y(8, 8) - Cx(1.0 / 16.0, 0)) <= 1e-12);
}

TEST_CASE("fft is unitary and inverse matches adjoint") {
  Rng rng(3);
  const CxField u = testing::random_cx_field(12, 10, rng);  // non-square, even
  const CxField y = fft2_centered(u);
  CHECK(std::abs(std::sqrt(u.abs2().sum()) - std::sqrt(y.abs2().sum())) <= 1e-12);
  CHECK((ifft2_centered(y) - u).abs().maxCoeff() <= 1e-12);

  const CxField u_odd = testing::random_cx_field(7, 9, rng);  // odd dims
  CHECK((ifft2_centered(fft2_centered(u_odd)) - u_odd).abs().maxCoeff() <= 1e-12);
}

TEST_CASE("grad of a constant field is zero; ramp has unit x-derivative") {
  const CxField c = CxField::Constant(6, 6, Cx(3.5, -1));
  CxField gx, gy;
  grad(c, gx, gy);
  CHECK(gx.abs().maxCoeff() == 0.0);
  CHECK(gy.abs().maxCoeff() == 0.0);

  CxField ramp(4, 5);
  for (Index r = 0; r < 4; ++r)
    for (Index col = 0; col < 5; ++col) ramp(r, col) = Cx(static_cast<double>(col), 0);
  grad(ramp, gx, gy);
  CHECK((gx.leftCols(4).real() == 1.0).all());
  CHECK((gx.rightCols(1).real() == 0.0).all());
  CHECK(gy.abs().maxCoeff() == 0.0);
}

TEST_CASE("div is the exact negative adjoint of grad") {
  const auto op = grad_as_operator(16, 16);
  CHECK(oracle_adjoint(op, 20, 101) <= 1e-10);
  check_linearity(op, 5);

  // div(grad(constant)) = 0 and div(0) = 0.
  CxField gx, gy;
  grad(CxField(CxField::Constant(8, 8, Cx(2, 2))), gx, gy);
  CHECK(div(gx, gy).abs().maxCoeff() == 0.0);
}

TEST_CASE("temporal difference: zeros on static input, ones on a unit step") {
  ImageSequence stat = ImageSequence::zeros(3, 4, 4);
  stat.frame(0).setConstant(Cx(1, 1));
  stat.frame(1).setConstant(Cx(1, 1));
  stat.frame(2).setConstant(Cx(1, 1));
  for (const auto& d : temporal_diff(stat)) CHECK(d.abs().maxCoeff() == 0.0);

  ImageSequence step = ImageSequence::zeros(2, 4, 4);
  step.frame(1).setConstant(Cx(1, 0));
  const auto diffs = temporal_diff(step);
  REQUIRE(diffs.size() == 1);
  CHECK((diffs[0].real() == 1.0).all());

  ImageSequence single = ImageSequence::zeros(1, 4, 4);
  CHECK_THROWS_AS(temporal_diff(single), DataError);

  CHECK(oracle_adjoint(temporal_as_operator(4, 6, 6), 20, 77) <= 1e-10);
}

TEST_CASE("motion operator with zero flow reduces to the temporal difference") {
  const ImageSequence u = testing::random_image(4, 8, 8, 21);
  const FlowField zero = FlowField::zeros(3, 8, 8);
  const auto coupled = motion_op(u, zero);
  const auto diffs = temporal_diff(u);
  for (std::size_t k = 0; k < coupled.size(); ++k)
    CHECK(testing::bitwise_equal(coupled[k], diffs[k]));
}

TEST_CASE("motion operator on a static sequence measures grad . v only") {
  ImageSequence u = ImageSequence::zeros(3, 8, 8);
  const CxField plane = CxField::Constant(8, 8, Cx(0.7, -0.2));
  for (Index k = 0; k < 3; ++k) u.frame(k) = plane;
  FlowField v = FlowField::zeros(2, 8, 8);
  v.vx[0].setConstant(1.5);
  v.vy[1].setConstant(-2.0);
  for (const auto& m : motion_op(u, v)) CHECK(m.abs().maxCoeff() == 0.0);
}

TEST_CASE("motion operator passes the adjoint oracle for random flow") {
  Rng rng(31);
  FlowField v = FlowField::zeros(3, 8, 8);
  for (Index k = 0; k < 3; ++k) {
    v.vx[static_cast<std::size_t>(k)] = testing::random_re_field(8, 8, rng);
    v.vy[static_cast<std::size_t>(k)] = testing::random_re_field(8, 8, rng);
  }
  const auto op = motion_as_operator(v, 4, 8, 8);
  CHECK(oracle_adjoint(op, 20, 303) <= 1e-9);
  check_linearity(op, 17);
}

TEST_CASE("encode basics: zero image, impulse modulus, exact zeros off-mask") {
  const CoilMaps maps = generate_coilmaps(3, 16, 16, 2);
  const SamplingMask mask = make_mask(2, 16, 16, 4.0, 2, 3.0, 11);

  const ImageSequence zero = ImageSequence::zeros(2, 16, 16);
  const KSpaceData y0 = encode(zero, maps, mask);
  for (const auto& p : y0.data) CHECK(p.abs().maxCoeff() == 0.0);

  // Single unit coil, full mask, impulse at the grid center.
  CoilMaps unit;
  unit.coils = 1;
  unit.height = 16;
  unit.width = 16;
  unit.maps = {CxField::Constant(16, 16, Cx(1, 0))};
  ImageSequence impulse = ImageSequence::zeros(1, 16, 16);
  impulse.frame(0)(8, 8) = Cx(1, 0);
  const KSpaceData yi = encode(impulse, unit, SamplingMask::full(1, 16, 16));
  CHECK((yi.at(0, 0).abs() - 1.0 / 16.0).abs().maxCoeff() <= 1e-12);

  const KSpaceData ym = encode(testing::random_image(2, 16, 16, 8), maps, mask);
  ym.validate();  // exact zeros at unsampled positions
}

TEST_CASE("encode adjoint: identity on full mask with a unit coil") {
  CoilMaps unit;
  unit.coils = 1;
  unit.height = 12;
  unit.width = 12;
  unit.maps = {CxField::Constant(12, 12, Cx(1, 0))};
  const ImageSequence u = testing::random_image(3, 12, 12, 5);
  const KSpaceData y = encode(u, unit, SamplingMask::full(3, 12, 12));
  const ImageSequence back = encode_adjoint(y, unit);
  for (Index k = 0; k < 3; ++k)
    CHECK((back.frame(k) - u.frame(k)).abs().maxCoeff() <= 1e-10);

  const KSpaceData zero = KSpaceData::zeros(2, 1, 12, 12);
  const ImageSequence z = encode_adjoint(zero, unit);
  for (Index k = 0; k < 2; ++k) CHECK(z.frame(k).abs().maxCoeff() == 0.0);
}

TEST_CASE("encode passes the adjoint oracle with random maps and mask") {
  const CoilMaps maps = generate_coilmaps(3, 16, 16, 23);
  const SamplingMask mask = make_mask(3, 16, 16, 4.0, 2, 3.0, 29);
  const auto op = encode_as_operator(maps, mask);
  CHECK(oracle_adjoint(op, 20, 404) <= 1e-9);
  check_linearity(op, 31);
}

TEST_CASE("operator norms: identity, scaling, and the gradient bound") {
  CxOperator id;
  id.domain = id.range = 64;
  id.apply = [](const CxVec& x) { return x; };
  id.adjoint = [](const CxVec& x) { return x; };
  CHECK(operator_norm(id, 50, 1) == doctest::Approx(1.0).epsilon(1e-6));

  CxOperator twice = id;
  twice.apply = [](const CxVec& x) { return CxVec(2.0 * x); };
  twice.adjoint = twice.apply;
  CHECK(operator_norm(twice, 50, 1) == doctest::Approx(2.0).epsilon(1e-6));

  CxOperator zero = id;
  zero.apply = [](const CxVec& x) { return CxVec(CxVec::Zero(x.size())); };
  zero.adjoint = zero.apply;
  CHECK(operator_norm(zero, 10, 1) == 0.0);

  // Forward-difference gradient norm is bounded by sqrt(8), approached from below.
  const auto g16 = grad_as_operator(16, 16);
  const double est = operator_norm(g16, 200, 7);
  CHECK(est <= std::sqrt(8.0) + 1e-12);
  CHECK(est > 2.0);
}

TEST_CASE("operator stacking concatenates ranges and sums adjoints") {
  const auto g = grad_as_operator(8, 8);
  auto st = stack_operators<Cx>({g, g});
  CHECK(st.range == 2 * g.range);
  CHECK(oracle_adjoint(st, 10, 88) <= 1e-10);
}
