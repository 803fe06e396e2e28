// Copyright 2026 The lqglearn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LQGLEARN_IO_HPP_
#define LQGLEARN_IO_HPP_

#include <map>
#include <string>
#include <vector>

#include "lqg/linalg.hpp"
#include "lqg/system.hpp"

namespace lqg {

// Dataset file: a text header line followed by little-endian float64 records
// per trajectory in the fixed order y_0, u_0, c_0, ..., y_T, c_T. States are
// diagnostic-only and are not persisted. Throws IoError on failure.
void save_dataset(const Dataset& ds, const LqgSystem& sys, const std::string& path);

// Loads a dataset; dims/horizon come from the header and are returned through
// the out-parameters for consistency checks against the config's system.
Dataset load_dataset(const std::string& path, Eigen::Index& T, Eigen::Index& d_x,
                     Eigen::Index& d_y, Eigen::Index& d_u);

// Interchange export: rows "traj_id,t,kind,component_index,value" with
// kind in {y, u, c}.
void export_dataset_csv(const Dataset& ds, const std::string& path);

// Per-index matrix blocks as little-endian float64, one .bin data file plus a
// plain-text manifest (index, rows, cols per line, then key=value metadata).
// Used for StateRepresentation, LatentModel, and Controller persistence.
void save_matrix_blocks(const std::vector<Matrix>& blocks,
                        const std::map<std::string, std::string>& meta,
                        const std::string& path_base);

std::vector<Matrix> load_matrix_blocks(const std::string& path_base,
                                       std::map<std::string, std::string>* meta = nullptr);

}  // namespace lqg

#endif  // LQGLEARN_IO_HPP_
