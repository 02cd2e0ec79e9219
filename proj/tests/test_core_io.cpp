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
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "csm/io.hpp"
#include "csm/phantom.hpp"
#include "csm/sampling.hpp"
#include "helpers.hpp"

using namespace csm;
namespace fs = std::filesystem;

namespace {

struct TmpDir {
  fs::path path;
  TmpDir() {
    path = fs::temp_directory_path() / ("csm_test_" + std::to_string(::getpid()) + "_" +
                                        std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TmpDir() { fs::remove_all(path); }
  static int& counter() {
    static int c = 0;
    return c;
  }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("image round-trip is bitwise on float-representable data") {
  TmpDir tmp;
  const ImageSequence img = testing::random_image(2, 8, 8, 41, /*f32=*/true);
  save_dataset(tmp.file("img.csmd"), img);
  const ImageSequence back = load_image(tmp.file("img.csmd"));
  REQUIRE(back.frames == 2);
  for (Index k = 0; k < 2; ++k) CHECK(testing::bitwise_equal(back.frame(k), img.frame(k)));
}

TEST_CASE("all payload kinds survive save/load") {
  TmpDir tmp;
  Rng rng(7);

  SamplingMask mask = make_mask(3, 32, 16, 4.0, 2, 3.0, 99);
  save_dataset(tmp.file("m.csmd"), mask);
  const SamplingMask mask2 = load_mask(tmp.file("m.csmd"));
  CHECK(mask2.seed == mask.seed);
  CHECK(mask2.accel_requested == mask.accel_requested);
  CHECK(mask2.center_lines == mask.center_lines);
  for (Index k = 0; k < 3; ++k) CHECK((mask2.frame(k) == mask.frame(k)).all());

  CoilMaps maps = generate_coilmaps(3, 16, 16, 5);
  save_dataset(tmp.file("c.csmd"), maps);
  const CoilMaps maps2 = load_coils(tmp.file("c.csmd"));
  CHECK(maps2.coils == 3);

  FlowField flow = FlowField::zeros(2, 8, 8);
  flow.vx[0].setConstant(0.5);
  flow.vy[1].setConstant(-0.25);
  save_dataset(tmp.file("f.csmd"), flow);
  const FlowField flow2 = load_flow(tmp.file("f.csmd"));
  CHECK(flow2.vx[0](3, 3) == 0.5);
  CHECK(flow2.vy[1](2, 2) == -0.25);

  const ImageSequence truth = testing::random_image(3, 32, 16, 13, true);
  const KSpaceData y = acquire(truth, generate_coilmaps(2, 32, 16, 3), mask, 0.0, 1);
  save_dataset(tmp.file("y.csmd"), y);
  const KSpaceData y2 = load_kspace(tmp.file("y.csmd"));
  CHECK(y2.coils == 2);
  CHECK(y2.noise_sigma == 0.0);
  for (Index k = 0; k < 3; ++k) CHECK((y2.mask.frame(k) == mask.frame(k)).all());
}

TEST_CASE("kspace zeros at unsampled positions survive the round trip") {
  TmpDir tmp;
  const ImageSequence truth = testing::random_image(2, 16, 16, 3, true);
  const SamplingMask mask = make_mask(2, 16, 16, 4.0, 2, 3.0, 17);
  const CoilMaps maps = generate_coilmaps(2, 16, 16, 9);
  const KSpaceData y = acquire(truth, maps, mask, 0.01, 23);
  save_dataset(tmp.file("y.csmd"), y);
  const KSpaceData back = load_kspace(tmp.file("y.csmd"));
  for (Index k = 0; k < back.frames; ++k)
    for (Index c = 0; c < back.coils; ++c)
      for (Index r = 0; r < back.height; ++r)
        if (!back.mask.frame(k)(r, 0))
          CHECK(back.at(k, c).row(r).abs().maxCoeff() == 0.0);
}

TEST_CASE("corrupt header json yields a structured parse error") {
  TmpDir tmp;
  const CoilMaps maps = generate_coilmaps(3, 8, 8, 2);
  const std::string path = tmp.file("c.csmd");
  save_dataset(path, maps);

  // Overwrite one byte inside the JSON header.
  std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
  f.seekp(13);
  f.put('{');
  f.close();

  CHECK_THROWS_AS(load_dataset(path), DataError);
}

TEST_CASE("truncated raw section yields a size-mismatch error") {
  TmpDir tmp;
  const ImageSequence img = testing::random_image(2, 8, 8, 4, true);
  const std::string path = tmp.file("img.csmd");
  save_dataset(path, img);
  const auto full = fs::file_size(path);
  fs::resize_file(path, full - 16);
  CHECK_THROWS_AS(load_dataset(path), DataError);
}

TEST_CASE("mask file containing value 2 is rejected on load") {
  TmpDir tmp;
  SamplingMask mask = make_mask(2, 16, 16, 4.0, 2, 3.0, 5);
  const std::string path = tmp.file("m.csmd");
  save_dataset(path, mask);

  // Header is fixed-size up to its length field; patch one payload byte.
  std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
  f.seekg(0, std::ios::end);
  const auto size = static_cast<long>(f.tellg());
  f.seekp(size - 1);
  f.put(static_cast<char>(2));
  f.close();

  CHECK_THROWS_AS(load_dataset(path), DataError);
}

TEST_CASE("missing file raises a data error") {
  CHECK_THROWS_AS(load_dataset("/nonexistent/definitely_missing.csmd"), DataError);
}

TEST_CASE("validation is total: broken invariants are rejected, not repaired") {
  ImageSequence img = testing::random_image(2, 4, 4, 1);
  img.frame(1)(0, 0) = Cx(std::numeric_limits<double>::quiet_NaN(), 0);
  CHECK_THROWS_AS(img.validate(), DataError);

  SamplingMask m = SamplingMask::full(1, 4, 4);
  m.frame(0)(2, 2) = 2;
  CHECK_THROWS_AS(m.validate(), DataError);

  CoilMaps cm = generate_coilmaps(2, 8, 8, 3);
  cm.maps[0] *= 1.5;
  CHECK_THROWS_AS(cm.validate(), DataError);

  ModelParams p;
  p.zeta_stop = 0;
  CHECK_THROWS_AS(p.validate(), DataError);

  SolverConfig cfg;
  cfg.max_inner = 0;
  CHECK_THROWS_AS(cfg.validate(), DataError);
}

TEST_CASE("save rejects dims outside the container limits") {
  ImageSequence img;
  img.frames = 1;
  img.height = 1;
  img.width = 1;
  img.data = {CxField::Zero(1, 1)};
  img.data[0](0, 0) = Cx(1e300, 0);  // not representable in float32
  CHECK_THROWS_AS(save_dataset("/tmp/csm_overflow.csmd", Payload(img)), DataError);
}
