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

#include "lqg/normalization.hpp"

#include <algorithm>
#include <string>

#include <Eigen/Dense>

#include "lqg/errors.hpp"

namespace lqg {

NormalizedSystem normalize(const LqgSystem& sys, Eigen::Index ell, Eigen::Index m) {
  const GramianReport gr = cost_observability_gramians(sys, ell, m);
  if (gr.min_eigenvalue <= 1e-8)
    throw NumericalError(
        "normalize: near-singular cost-observability Gramian, min eigenvalue " +
        std::to_string(gr.min_eigenvalue));

  NormalizedSystem ns;
  ns.forward.resize(sys.T + 1);
  ns.inverse.resize(sys.T + 1);
  for (Eigen::Index t = 0; t <= sys.T; ++t) {
    ns.forward[t] = psd_sqrt(gr.gramians[t]);
    ns.inverse[t] = psd_inv_sqrt(gr.gramians[t]);
  }

  LqgSystem& p = ns.system;
  p.T = sys.T;
  p.d_x = sys.d_x;
  p.d_y = sys.d_y;
  p.d_u = sys.d_u;
  for (Eigen::Index t = 0; t < sys.T; ++t) {
    p.A.push_back(ns.forward[t + 1] * sys.A[t] * ns.inverse[t]);
    p.B.push_back(ns.forward[t + 1] * sys.B[t]);
    p.R.push_back(sys.R[t]);
    p.Sigma_w.push_back(0.5 * (ns.forward[t + 1] * sys.Sigma_w[t] * ns.forward[t + 1] +
                               (ns.forward[t + 1] * sys.Sigma_w[t] * ns.forward[t + 1])
                                   .transpose()));
  }
  for (Eigen::Index t = 0; t <= sys.T; ++t) {
    p.C.push_back(sys.C[t] * ns.inverse[t]);
    p.Q.push_back(0.5 * (ns.inverse[t] * sys.Q[t] * ns.inverse[t] +
                         (ns.inverse[t] * sys.Q[t] * ns.inverse[t]).transpose()));
    p.Sigma_v.push_back(sys.Sigma_v[t]);
  }
  p.Sigma0 = 0.5 * (ns.forward[0] * sys.Sigma0 * ns.forward[0] +
                    (ns.forward[0] * sys.Sigma0 * ns.forward[0]).transpose());
  p.validate();
  return ns;
}

NormalizationReport verify_normalization(const NormalizedSystem& ns, Eigen::Index ell,
                                         Eigen::Index m) {
  NormalizationReport rep;
  const GramianReport gr = cost_observability_gramians(ns.system, ell, m);
  const Matrix I = Matrix::Identity(ns.system.d_x, ns.system.d_x);
  for (Eigen::Index t = 0; t <= ns.system.T; ++t) {
    rep.max_gramian_deviation =
        std::max(rep.max_gramian_deviation, op_norm(gr.gramians[t] - I));
    rep.max_roundtrip_deviation = std::max(
        rep.max_roundtrip_deviation, op_norm(ns.forward[t] * ns.inverse[t] - I));
  }
  return rep;
}

}  // namespace lqg
