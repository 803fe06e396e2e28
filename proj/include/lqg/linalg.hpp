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

#ifndef LQGLEARN_LINALG_HPP_
#define LQGLEARN_LINALG_HPP_

#include <Eigen/Core>

namespace lqg {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Symmetric vectorization. Lower triangle stacked column by column,
// off-diagonals scaled by sqrt(2) so that |svec(S)|_2 = |S|_F.
Vector svec(const Matrix& S, double rel_tol = 1e-9);

// Inverse of svec. The input length must be a triangular number.
Matrix smat(const Vector& v);

// Side dimension implied by a svec length; throws on non-triangular length.
Eigen::Index smat_dim(Eigen::Index svec_len);

struct EigSym {
  Vector values;   // descending
  Matrix vectors;  // orthonormal columns, deterministic sign/tie convention
};

// Symmetric eigendecomposition with a fixed convention: eigenvalues
// descending; each eigenvector's largest-magnitude entry nonnegative;
// exact eigenvalue ties broken by lexicographic order of eigenvectors.
EigSym eig_sym_desc(const Matrix& S);

// Frobenius-nearest PSD matrix (eigenvalue clipping).
Matrix psd_project(const Matrix& S);

struct FactorResult {
  Matrix factor;        // r x d, factor^T factor approximates the input
  double residual_fro;  // |factor^T factor - N|_F
};

// PSD-projects N, then rank-truncates to r: factor = Sigma_r^{1/2} U_r^T,
// zero-padded to r rows when d <= r.
FactorResult low_rank_factor(const Matrix& N, Eigen::Index r);

// Zeroes singular values strictly below theta, keeping singular vectors.
Matrix trunc_sv(const Matrix& M, double theta);

// Orthonormal S minimizing |S A - B|_F (orthogonal Procrustes): S = U V^T
// from the SVD U Sigma V^T = B A^T.
Matrix procrustes_align(const Matrix& A, const Matrix& B);

// Minimum-Frobenius-norm W minimizing |X W - Y|_F, via SVD with singular
// values below rel_tol * sigma_max treated as zero.
Matrix min_norm_lstsq(const Matrix& X, const Matrix& Y, double rel_tol = 1e-10);

// Unique symmetric PSD square root.
Matrix psd_sqrt(const Matrix& S);

// Symmetric inverse square root; throws NumericalError when the minimum
// eigenvalue is at most rel_tol times the maximum.
Matrix psd_inv_sqrt(const Matrix& S, double rel_tol = 1e-12);

// Operator (spectral) norm.
double op_norm(const Matrix& M);

}  // namespace lqg

#endif  // LQGLEARN_LINALG_HPP_
