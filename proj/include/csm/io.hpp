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
#include <variant>

#include "csm/types.hpp"

namespace csm {

using Payload = std::variant<ImageSequence, KSpaceData, SamplingMask, FlowField, CoilMaps>;

// Container format: 8-byte magic "CSMD0001", 4-byte little-endian header
// length, UTF-8 JSON header {kind, dtype, shape, extras}, then the raw
// little-endian payload, row-major. Complex dtype "c64" is stored as
// interleaved float32 (re, im) pairs; real data as "f32"; masks as "u8".

/// Writes `payload` to `path`. The payload's invariants must hold; they are
/// re-checked before writing. Throws DataError on IO failure or dims that do
/// not fit the format (> 2^31 - 1 per axis, values outside float32 range).
void save_dataset(const std::string& path, const Payload& payload);

/// Reads a dataset written by save_dataset. Invariants are re-validated on
/// load; any violation is a DataError, never silently repaired.
Payload load_dataset(const std::string& path);

// Typed loaders; throw DataError if the file holds a different kind.
ImageSequence load_image(const std::string& path);
KSpaceData load_kspace(const std::string& path);
SamplingMask load_mask(const std::string& path);
FlowField load_flow(const std::string& path);
CoilMaps load_coils(const std::string& path);

}  // namespace csm
