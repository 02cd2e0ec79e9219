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

#include <stdexcept>
#include <string>

namespace csm {

/// Base class for all library errors.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Invalid data: broken invariants, dimension mismatches, malformed or
/// unreadable files. Maps to CLI exit code 3.
struct DataError : Error {
  explicit DataError(const std::string& msg) : Error(msg) {}
};

/// Solver failure: non-finite iterates, invalid step sizes. CLI exit code 4.
struct SolverError : Error {
  explicit SolverError(const std::string& msg) : Error(msg) {}
};

}  // namespace csm
