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

#include "csm/pdhg.hpp"

#include <fstream>
#include <iomanip>

namespace csm {

void write_trace_csv(const std::string& path, const PdhgTrace& trace) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw DataError("trace: cannot open for writing: " + path);
  const bool with_obj = !trace.objective.empty();
  out << "iteration,primal_residual" << (with_obj ? ",objective" : "") << "\n";
  out << std::setprecision(17);
  for (std::size_t i = 0; i < trace.primal_residual.size(); ++i) {
    out << (i + 1) << "," << trace.primal_residual[i];
    if (with_obj) out << "," << trace.objective[i];
    out << "\n";
  }
  if (!out) throw DataError("trace: write failed: " + path);
}

}  // namespace csm
