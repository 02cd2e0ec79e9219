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

#include "csm/io.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <json.hpp>
#include <limits>
#include <vector>

namespace csm {

namespace {

using nlohmann::json;

constexpr char kMagic[8] = {'C', 'S', 'M', 'D', '0', '0', '0', '1'};
constexpr Index kMaxDim = 2147483647;  // 2^31 - 1

void check_dim(Index d) {
  if (d < 0 || d > kMaxDim) throw DataError("io: dimension not representable");
}

float to_f32(double v) {
  if (std::isfinite(v) && std::abs(v) > static_cast<double>(std::numeric_limits<float>::max()))
    throw DataError("io: value outside float32 range");
  return static_cast<float>(v);
}

void append_cx(std::vector<float>& raw, const CxField& f) {
  for (Index r = 0; r < f.rows(); ++r)
    for (Index c = 0; c < f.cols(); ++c) {
      raw.push_back(to_f32(f(r, c).real()));
      raw.push_back(to_f32(f(r, c).imag()));
    }
}

struct Blob {
  json header;
  std::vector<float> f32;   // used for c64 and f32 dtypes
  std::vector<std::uint8_t> u8;
};

json mask_extras(const SamplingMask& m) {
  return json{{"accel_requested", m.accel_requested},
              {"seed", m.seed},
              {"center_lines", m.center_lines}};
}

SamplingMask mask_from_extras(const json& extras, Index frames, Index height, Index width) {
  SamplingMask m;
  m.frames = frames;
  m.height = height;
  m.width = width;
  m.accel_requested = extras.at("accel_requested").get<double>();
  m.seed = extras.at("seed").get<std::uint64_t>();
  m.center_lines = extras.at("center_lines").get<Index>();
  return m;
}

Blob encode_payload(const Payload& payload) {
  Blob b;
  if (const auto* img = std::get_if<ImageSequence>(&payload)) {
    img->validate();
    for (Index d : {img->frames, img->height, img->width}) check_dim(d);
    b.header = {{"kind", "image"},
                {"dtype", "c64"},
                {"shape", {img->frames, img->height, img->width}},
                {"extras", json::object()}};
    for (const auto& f : img->data) append_cx(b.f32, f);
  } else if (const auto* y = std::get_if<KSpaceData>(&payload)) {
    y->validate();
    for (Index d : {y->frames, y->coils, y->height, y->width}) check_dim(d);
    // The mask rides along in the header so one file round-trips the whole
    // measurement record; rows are stored as per-frame on-row indices.
    json rows = json::array();
    for (Index k = 0; k < y->frames; ++k) {
      json fr = json::array();
      for (Index r = 0; r < y->height; ++r) {
        const bool all_on = (y->mask.frame(k).row(r) == 1).all();
        const bool all_off = (y->mask.frame(k).row(r) == 0).all();
        if (!all_on && !all_off)
          throw DataError("io: kspace mask is not row-structured");
        if (all_on) fr.push_back(r);
      }
      rows.push_back(fr);
    }
    b.header = {{"kind", "kspace"},
                {"dtype", "c64"},
                {"shape", {y->frames, y->coils, y->height, y->width}},
                {"extras",
                 {{"noise_sigma", y->noise_sigma},
                  {"mask_rows", rows},
                  {"mask", mask_extras(y->mask)}}}};
    for (const auto& f : y->data) append_cx(b.f32, f);
  } else if (const auto* m = std::get_if<SamplingMask>(&payload)) {
    m->validate();
    for (Index d : {m->frames, m->height, m->width}) check_dim(d);
    b.header = {{"kind", "mask"},
                {"dtype", "u8"},
                {"shape", {m->frames, m->height, m->width}},
                {"extras", mask_extras(*m)}};
    for (const auto& f : m->data)
      for (Index r = 0; r < f.rows(); ++r)
        for (Index c = 0; c < f.cols(); ++c) b.u8.push_back(f(r, c));
  } else if (const auto* v = std::get_if<FlowField>(&payload)) {
    v->validate();
    for (Index d : {v->pairs, v->height, v->width}) check_dim(d);
    b.header = {{"kind", "flow"},
                {"dtype", "f32"},
                {"shape", {v->pairs, v->height, v->width, Index{2}}},
                {"extras", json::object()}};
    for (Index k = 0; k < v->pairs; ++k)
      for (Index r = 0; r < v->height; ++r)
        for (Index c = 0; c < v->width; ++c) {
          b.f32.push_back(to_f32(v->vx[static_cast<std::size_t>(k)](r, c)));
          b.f32.push_back(to_f32(v->vy[static_cast<std::size_t>(k)](r, c)));
        }
  } else if (const auto* cm = std::get_if<CoilMaps>(&payload)) {
    cm->validate();
    for (Index d : {cm->coils, cm->height, cm->width}) check_dim(d);
    b.header = {{"kind", "coils"},
                {"dtype", "c64"},
                {"shape", {cm->coils, cm->height, cm->width}},
                {"extras", json::object()}};
    for (const auto& f : cm->maps) append_cx(b.f32, f);
  } else {
    throw DataError("io: unknown payload kind");
  }
  return b;
}

std::vector<Index> parse_shape(const json& header, std::size_t rank) {
  const auto& sh = header.at("shape");
  if (!sh.is_array() || sh.size() != rank) throw DataError("io: unexpected shape rank");
  std::vector<Index> dims;
  for (const auto& d : sh) {
    const Index v = d.get<Index>();
    check_dim(v);
    if (v < 1) throw DataError("io: non-positive dimension");
    dims.push_back(v);
  }
  return dims;
}

CxField read_cx_plane(const float*& p, Index rows, Index cols) {
  CxField f(rows, cols);
  for (Index r = 0; r < rows; ++r)
    for (Index c = 0; c < cols; ++c) {
      f(r, c) = Cx(static_cast<double>(p[0]), static_cast<double>(p[1]));
      p += 2;
    }
  return f;
}

}  // namespace

void save_dataset(const std::string& path, const Payload& payload) {
  const Blob b = encode_payload(payload);
  const std::string header = b.header.dump();
  if (header.size() > static_cast<std::size_t>(kMaxDim))
    throw DataError("io: header too large");

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("io: cannot open for writing: " + path);
  out.write(kMagic, sizeof(kMagic));
  const std::uint32_t hlen = static_cast<std::uint32_t>(header.size());
  std::uint8_t lenbuf[4] = {static_cast<std::uint8_t>(hlen & 0xff),
                            static_cast<std::uint8_t>((hlen >> 8) & 0xff),
                            static_cast<std::uint8_t>((hlen >> 16) & 0xff),
                            static_cast<std::uint8_t>((hlen >> 24) & 0xff)};
  out.write(reinterpret_cast<const char*>(lenbuf), 4);
  out.write(header.data(), static_cast<std::streamsize>(header.size()));
  // Little-endian hosts write the raw arrays directly.
  if (!b.f32.empty())
    out.write(reinterpret_cast<const char*>(b.f32.data()),
              static_cast<std::streamsize>(b.f32.size() * sizeof(float)));
  if (!b.u8.empty())
    out.write(reinterpret_cast<const char*>(b.u8.data()),
              static_cast<std::streamsize>(b.u8.size()));
  if (!out) throw DataError("io: write failed: " + path);
}

Payload load_dataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("io: cannot open: " + path);

  char magic[8];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, kMagic, 8) != 0) throw DataError("io: bad magic: " + path);

  std::uint8_t lenbuf[4];
  in.read(reinterpret_cast<char*>(lenbuf), 4);
  if (!in) throw DataError("io: truncated header length");
  const std::uint32_t hlen = static_cast<std::uint32_t>(lenbuf[0]) |
                             (static_cast<std::uint32_t>(lenbuf[1]) << 8) |
                             (static_cast<std::uint32_t>(lenbuf[2]) << 16) |
                             (static_cast<std::uint32_t>(lenbuf[3]) << 24);
  std::string htext(hlen, '\0');
  in.read(htext.data(), static_cast<std::streamsize>(hlen));
  if (!in) throw DataError("io: truncated header");

  json header;
  try {
    header = json::parse(htext);
  } catch (const json::exception& e) {
    throw DataError(std::string("io: header parse error: ") + e.what());
  }

  std::string kind, dtype;
  try {
    kind = header.at("kind").get<std::string>();
    dtype = header.at("dtype").get<std::string>();
  } catch (const json::exception& e) {
    throw DataError(std::string("io: malformed header: ") + e.what());
  }

  const auto read_raw_f32 = [&](std::size_t count) {
    std::vector<float> raw(count);
    in.read(reinterpret_cast<char*>(raw.data()),
            static_cast<std::streamsize>(count * sizeof(float)));
    if (static_cast<std::size_t>(in.gcount()) != count * sizeof(float))
      throw DataError("io: payload size mismatch");
    if (in.peek() != std::char_traits<char>::eof())
      throw DataError("io: trailing bytes after payload");
    return raw;
  };

  try {
    if (kind == "image") {
      if (dtype != "c64") throw DataError("io: image must be c64");
      const auto dims = parse_shape(header, 3);
      ImageSequence img;
      img.frames = dims[0];
      img.height = dims[1];
      img.width = dims[2];
      const auto raw = read_raw_f32(static_cast<std::size_t>(img.size()) * 2);
      const float* p = raw.data();
      for (Index k = 0; k < img.frames; ++k)
        img.data.push_back(read_cx_plane(p, img.height, img.width));
      img.validate();
      return img;
    }
    if (kind == "kspace") {
      if (dtype != "c64") throw DataError("io: kspace must be c64");
      const auto dims = parse_shape(header, 4);
      KSpaceData y;
      y.frames = dims[0];
      y.coils = dims[1];
      y.height = dims[2];
      y.width = dims[3];
      const auto& extras = header.at("extras");
      y.noise_sigma = extras.at("noise_sigma").get<double>();
      y.mask = mask_from_extras(extras.at("mask"), y.frames, y.height, y.width);
      const auto& rows = extras.at("mask_rows");
      if (!rows.is_array() || static_cast<Index>(rows.size()) != y.frames)
        throw DataError("io: mask_rows frame count mismatch");
      for (Index k = 0; k < y.frames; ++k) {
        ByteField m = ByteField::Zero(y.height, y.width);
        for (const auto& r : rows[static_cast<std::size_t>(k)]) {
          const Index row = r.get<Index>();
          if (row < 0 || row >= y.height) throw DataError("io: mask row out of range");
          m.row(row).setConstant(1);
        }
        y.mask.data.push_back(m);
      }
      const auto raw =
          read_raw_f32(static_cast<std::size_t>(y.frames * y.coils * y.height * y.width) * 2);
      const float* p = raw.data();
      for (Index i = 0; i < y.frames * y.coils; ++i)
        y.data.push_back(read_cx_plane(p, y.height, y.width));
      y.validate();
      return y;
    }
    if (kind == "mask") {
      if (dtype != "u8") throw DataError("io: mask must be u8");
      const auto dims = parse_shape(header, 3);
      SamplingMask m = mask_from_extras(header.at("extras"), dims[0], dims[1], dims[2]);
      const std::size_t count = static_cast<std::size_t>(dims[0] * dims[1] * dims[2]);
      std::vector<std::uint8_t> raw(count);
      in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(count));
      if (static_cast<std::size_t>(in.gcount()) != count)
        throw DataError("io: payload size mismatch");
      if (in.peek() != std::char_traits<char>::eof())
        throw DataError("io: trailing bytes after payload");
      const std::uint8_t* p = raw.data();
      for (Index k = 0; k < m.frames; ++k) {
        ByteField f(m.height, m.width);
        for (Index r = 0; r < m.height; ++r)
          for (Index c = 0; c < m.width; ++c) f(r, c) = *p++;
        m.data.push_back(f);
      }
      m.validate();
      return m;
    }
    if (kind == "flow") {
      if (dtype != "f32") throw DataError("io: flow must be f32");
      const auto dims = parse_shape(header, 4);
      if (dims[3] != 2) throw DataError("io: flow component axis must be 2");
      FlowField v;
      v.pairs = dims[0];
      v.height = dims[1];
      v.width = dims[2];
      const auto raw = read_raw_f32(static_cast<std::size_t>(v.pairs * v.height * v.width * 2));
      const float* p = raw.data();
      for (Index k = 0; k < v.pairs; ++k) {
        ReField x(v.height, v.width), yv(v.height, v.width);
        for (Index r = 0; r < v.height; ++r)
          for (Index c = 0; c < v.width; ++c) {
            x(r, c) = static_cast<double>(*p++);
            yv(r, c) = static_cast<double>(*p++);
          }
        v.vx.push_back(x);
        v.vy.push_back(yv);
      }
      v.validate();
      return v;
    }
    if (kind == "coils") {
      if (dtype != "c64") throw DataError("io: coils must be c64");
      const auto dims = parse_shape(header, 3);
      CoilMaps cm;
      cm.coils = dims[0];
      cm.height = dims[1];
      cm.width = dims[2];
      const auto raw = read_raw_f32(static_cast<std::size_t>(cm.coils * cm.height * cm.width) * 2);
      const float* p = raw.data();
      for (Index c = 0; c < cm.coils; ++c)
        cm.maps.push_back(read_cx_plane(p, cm.height, cm.width));
      // Float32 quantization perturbs the double-precision normalization.
      cm.validate(1e-5);
      return cm;
    }
  } catch (const json::exception& e) {
    throw DataError(std::string("io: malformed header: ") + e.what());
  }
  throw DataError("io: unknown kind: " + kind);
}

namespace {
template <typename T>
T load_as(const std::string& path, const char* what) {
  Payload p = load_dataset(path);
  if (auto* v = std::get_if<T>(&p)) return std::move(*v);
  throw DataError(std::string("io: ") + path + " does not hold a " + what);
}
}  // namespace

ImageSequence load_image(const std::string& path) { return load_as<ImageSequence>(path, "image"); }
KSpaceData load_kspace(const std::string& path) { return load_as<KSpaceData>(path, "kspace"); }
SamplingMask load_mask(const std::string& path) { return load_as<SamplingMask>(path, "mask"); }
FlowField load_flow(const std::string& path) { return load_as<FlowField>(path, "flow"); }
CoilMaps load_coils(const std::string& path) { return load_as<CoilMaps>(path, "coils"); }

}  // namespace csm
