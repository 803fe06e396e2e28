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

#include "lqg/io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "lqg/errors.hpp"

namespace lqg {

namespace {

constexpr int kDatasetVersion = 1;

// The sandbox targets are little-endian; the format is pinned to LE floats.
static_assert(std::endian::native == std::endian::little,
              "dataset format assumes a little-endian host");

void write_doubles(std::ostream& os, const double* data, std::size_t count) {
  os.write(reinterpret_cast<const char*>(data),
           static_cast<std::streamsize>(count * sizeof(double)));
}

void read_doubles(std::istream& is, double* data, std::size_t count) {
  is.read(reinterpret_cast<char*>(data),
          static_cast<std::streamsize>(count * sizeof(double)));
  if (!is) throw IoError("dataset: truncated float record");
}

}  // namespace

void save_dataset(const Dataset& ds, const LqgSystem& sys, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open for writing: " + path);
  os << "lqg-dataset v" << kDatasetVersion << " tag=" << ds.system_tag
     << " n=" << ds.n << " T=" << sys.T << " d_x=" << sys.d_x
     << " d_y=" << sys.d_y << " d_u=" << sys.d_u << " sigma_u=" << ds.sigma_u
     << " master_seed=" << ds.master_seed << "\n";
  for (const Trajectory& traj : ds.trajectories) {
    for (Eigen::Index t = 0; t <= sys.T; ++t) {
      write_doubles(os, traj.y[t].data(), static_cast<std::size_t>(sys.d_y));
      if (t < sys.T)
        write_doubles(os, traj.u[t].data(), static_cast<std::size_t>(sys.d_u));
      write_doubles(os, &traj.c[t], 1);
    }
  }
  if (!os) throw IoError("write failure: " + path);
}

Dataset load_dataset(const std::string& path, Eigen::Index& T, Eigen::Index& d_x,
                     Eigen::Index& d_y, Eigen::Index& d_u) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open for reading: " + path);
  std::string header;
  if (!std::getline(is, header)) throw IoError("dataset: missing header: " + path);

  Dataset ds;
  int version = 0;
  std::istringstream hs(header);
  std::string token;
  hs >> token;
  if (token != "lqg-dataset") throw IoError("dataset: bad magic in " + path);
  hs >> token;
  if (token.size() < 2 || token[0] != 'v') throw IoError("dataset: bad version");
  version = std::stoi(token.substr(1));
  if (version != kDatasetVersion)
    throw IoError("dataset: unsupported version " + std::to_string(version));
  T = d_x = d_y = d_u = -1;
  while (hs >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos) throw IoError("dataset: malformed header field");
    const std::string key = token.substr(0, eq);
    const std::string val = token.substr(eq + 1);
    if (key == "tag") ds.system_tag = val;
    else if (key == "n") ds.n = std::stoll(val);
    else if (key == "T") T = std::stoll(val);
    else if (key == "d_x") d_x = std::stoll(val);
    else if (key == "d_y") d_y = std::stoll(val);
    else if (key == "d_u") d_u = std::stoll(val);
    else if (key == "sigma_u") ds.sigma_u = std::stod(val);
    else if (key == "master_seed") ds.master_seed = std::stoull(val);
    else throw IoError("dataset: unknown header field " + key);
  }
  if (T < 1 || d_x < 1 || d_y < 1 || d_u < 1 || ds.n < 1)
    throw IoError("dataset: incomplete header in " + path);

  ds.trajectories.resize(ds.n);
  for (Trajectory& traj : ds.trajectories) {
    traj.y.resize(T + 1);
    traj.u.resize(T);
    traj.c.resize(T + 1);
    for (Eigen::Index t = 0; t <= T; ++t) {
      traj.y[t].resize(d_y);
      read_doubles(is, traj.y[t].data(), static_cast<std::size_t>(d_y));
      if (t < T) {
        traj.u[t].resize(d_u);
        read_doubles(is, traj.u[t].data(), static_cast<std::size_t>(d_u));
      }
      read_doubles(is, &traj.c[t], 1);
    }
  }
  return ds;
}

void export_dataset_csv(const Dataset& ds, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open for writing: " + path);
  os << "traj_id,t,kind,component_index,value\n";
  os.precision(17);
  for (Eigen::Index i = 0; i < ds.n; ++i) {
    const Trajectory& traj = ds.trajectories[i];
    const auto T = static_cast<Eigen::Index>(traj.c.size()) - 1;
    for (Eigen::Index t = 0; t <= T; ++t) {
      for (Eigen::Index j = 0; j < traj.y[t].size(); ++j)
        os << i << ',' << t << ",y," << j << ',' << traj.y[t][j] << '\n';
      if (t < T)
        for (Eigen::Index j = 0; j < traj.u[t].size(); ++j)
          os << i << ',' << t << ",u," << j << ',' << traj.u[t][j] << '\n';
      os << i << ',' << t << ",c,0," << traj.c[t] << '\n';
    }
  }
  if (!os) throw IoError("write failure: " + path);
}

void save_matrix_blocks(const std::vector<Matrix>& blocks,
                        const std::map<std::string, std::string>& meta,
                        const std::string& path_base) {
  std::ofstream bin(path_base + ".bin", std::ios::binary);
  std::ofstream man(path_base + ".txt");
  if (!bin || !man) throw IoError("cannot open for writing: " + path_base);
  man << "lqg-blocks v1 count=" << blocks.size() << "\n";
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const Matrix& m = blocks[i];
    man << i << ' ' << m.rows() << ' ' << m.cols() << "\n";
    // Eigen default storage is column-major; written as-is.
    write_doubles(bin, m.data(), static_cast<std::size_t>(m.size()));
  }
  for (const auto& [key, val] : meta) man << key << '=' << val << "\n";
  if (!bin || !man) throw IoError("write failure: " + path_base);
}

std::vector<Matrix> load_matrix_blocks(const std::string& path_base,
                                       std::map<std::string, std::string>* meta) {
  std::ifstream bin(path_base + ".bin", std::ios::binary);
  std::ifstream man(path_base + ".txt");
  if (!bin || !man) throw IoError("cannot open for reading: " + path_base);
  std::string magic, version, count_field;
  man >> magic >> version >> count_field;
  if (magic != "lqg-blocks" || version != "v1" ||
      count_field.rfind("count=", 0) != 0)
    throw IoError("blocks: bad manifest header in " + path_base);
  const auto count = std::stoull(count_field.substr(6));
  std::vector<Matrix> blocks;
  blocks.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::size_t idx = 0;
    Eigen::Index rows = 0, cols = 0;
    if (!(man >> idx >> rows >> cols) || idx != i || rows < 0 || cols < 0)
      throw IoError("blocks: malformed manifest entry in " + path_base);
    Matrix m(rows, cols);
    read_doubles(bin, m.data(), static_cast<std::size_t>(m.size()));
    blocks.push_back(std::move(m));
  }
  if (meta) {
    std::string line;
    std::getline(man, line);  // finish the current line
    while (std::getline(man, line)) {
      const auto eq = line.find('=');
      if (eq != std::string::npos)
        (*meta)[line.substr(0, eq)] = line.substr(eq + 1);
    }
  }
  return blocks;
}

}  // namespace lqg
