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

#include "lqg/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lqg/errors.hpp"

namespace lqg {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

void check_symmetric(const Matrix& S, double rel_tol, const char* op) {
  if (S.rows() != S.cols())
    throw ValidationError(std::string(op) + ": input is not square");
  const double dev = (S - S.transpose()).cwiseAbs().maxCoeff();
  const double scale = std::max(1.0, S.cwiseAbs().maxCoeff());
  if (dev > rel_tol * scale)
    throw ValidationError(std::string(op) + ": input not symmetric, max deviation " +
                          std::to_string(dev));
}

Matrix symmetrize(const Matrix& S) { return 0.5 * (S + S.transpose()); }

}  // namespace

Eigen::Index smat_dim(Eigen::Index svec_len) {
  // d(d+1)/2 = len  =>  d = (-1 + sqrt(1 + 8 len)) / 2
  const auto d = static_cast<Eigen::Index>(
      std::llround((std::sqrt(8.0 * static_cast<double>(svec_len) + 1.0) - 1.0) / 2.0));
  if (d < 1 || d * (d + 1) / 2 != svec_len)
    throw ValidationError("smat: length " + std::to_string(svec_len) +
                          " is not a triangular number");
  return d;
}

Vector svec(const Matrix& S, double rel_tol) {
  check_symmetric(S, rel_tol, "svec");
  const Eigen::Index d = S.rows();
  Vector v(d * (d + 1) / 2);
  Eigen::Index k = 0;
  for (Eigen::Index j = 0; j < d; ++j) {
    v[k++] = S(j, j);
    for (Eigen::Index i = j + 1; i < d; ++i) v[k++] = kSqrt2 * S(i, j);
  }
  return v;
}

Matrix smat(const Vector& v) {
  const Eigen::Index d = smat_dim(v.size());
  Matrix S(d, d);
  Eigen::Index k = 0;
  for (Eigen::Index j = 0; j < d; ++j) {
    S(j, j) = v[k++];
    for (Eigen::Index i = j + 1; i < d; ++i) {
      const double x = v[k++] / kSqrt2;
      S(i, j) = x;
      S(j, i) = x;
    }
  }
  return S;
}

EigSym eig_sym_desc(const Matrix& S) {
  check_symmetric(S, 1e-9, "eig_sym_desc");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(symmetrize(S));
  if (solver.info() != Eigen::Success)
    throw NumericalError("eig_sym_desc: eigendecomposition failed");
  const Eigen::Index d = S.rows();
  // Eigen returns ascending order; flip to descending.
  std::vector<Eigen::Index> order(d);
  std::iota(order.begin(), order.end(), 0);
  std::reverse(order.begin(), order.end());

  EigSym out;
  out.values.resize(d);
  out.vectors.resize(d, d);
  for (Eigen::Index c = 0; c < d; ++c) {
    out.values[c] = solver.eigenvalues()[order[c]];
    Vector col = solver.eigenvectors().col(order[c]);
    // Sign convention: first largest-magnitude entry nonnegative.
    Eigen::Index arg = 0;
    col.cwiseAbs().maxCoeff(&arg);
    if (col[arg] < 0.0) col = -col;
    out.vectors.col(c) = col;
  }
  // Tie-break exactly equal eigenvalues by lexicographic column order.
  Eigen::Index start = 0;
  while (start < d) {
    Eigen::Index end = start + 1;
    while (end < d && out.values[end] == out.values[start]) ++end;
    if (end - start > 1) {
      std::vector<Eigen::Index> cols(end - start);
      std::iota(cols.begin(), cols.end(), start);
      Matrix block = out.vectors.middleCols(start, end - start);
      std::sort(cols.begin(), cols.end(), [&](Eigen::Index a, Eigen::Index b) {
        for (Eigen::Index i = 0; i < d; ++i) {
          const double x = out.vectors(i, a), y = out.vectors(i, b);
          if (x != y) return x > y;
        }
        return false;
      });
      for (Eigen::Index c = 0; c < end - start; ++c)
        block.col(c) = out.vectors.col(cols[c]);
      out.vectors.middleCols(start, end - start) = block;
    }
    start = end;
  }
  return out;
}

Matrix psd_project(const Matrix& S) {
  const EigSym es = eig_sym_desc(S);
  return symmetrize(es.vectors * es.values.cwiseMax(0.0).asDiagonal() *
                    es.vectors.transpose());
}

FactorResult low_rank_factor(const Matrix& N, Eigen::Index r) {
  if (r < 1) throw ValidationError("low_rank_factor: rank must be >= 1");
  const EigSym es = eig_sym_desc(N);
  const Eigen::Index d = N.rows();
  const Eigen::Index k = std::min(d, r);
  FactorResult out;
  out.factor = Matrix::Zero(r, d);
  for (Eigen::Index i = 0; i < k; ++i) {
    const double lam = std::max(es.values[i], 0.0);
    out.factor.row(i) = std::sqrt(lam) * es.vectors.col(i).transpose();
  }
  out.residual_fro = (out.factor.transpose() * out.factor - N).norm();
  return out;
}

Matrix trunc_sv(const Matrix& M, double theta) {
  if (theta < 0.0) throw ValidationError("trunc_sv: threshold must be >= 0");
  if (theta == 0.0) return M;
  Eigen::JacobiSVD<Matrix> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Vector sv = svd.singularValues();
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv[i] < theta) sv[i] = 0.0;  // keep sigma >= theta
  return svd.matrixU() * sv.asDiagonal() * svd.matrixV().transpose();
}

Matrix procrustes_align(const Matrix& A, const Matrix& B) {
  if (A.rows() != B.rows() || A.cols() != B.cols())
    throw ValidationError("procrustes_align: shape mismatch");
  const Matrix G = B * A.transpose();
  Eigen::JacobiSVD<Matrix> svd(G, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().transpose();
}

Matrix min_norm_lstsq(const Matrix& X, const Matrix& Y, double rel_tol) {
  if (X.rows() != Y.rows())
    throw ValidationError("min_norm_lstsq: row-count mismatch");
  if (X.rows() < 1) throw ValidationError("min_norm_lstsq: empty design");
  const Eigen::Index n = X.rows(), p = X.cols();
  if (n > 4 * p) {
    // Tall design: SVD via the Gram matrix, same cutoff semantics.
    const Matrix G = X.transpose() * X;
    const EigSym es = eig_sym_desc(G);
    const double smax = std::sqrt(std::max(es.values[0], 0.0));
    const double cut = rel_tol * smax;
    const Matrix XtY = X.transpose() * Y;
    Matrix W = Matrix::Zero(p, Y.cols());
    for (Eigen::Index i = 0; i < p; ++i) {
      const double s = std::sqrt(std::max(es.values[i], 0.0));
      if (s <= cut || s == 0.0) continue;
      const Vector vi = es.vectors.col(i);
      W.noalias() += vi * ((vi.transpose() * XtY) / (s * s));
    }
    return W;
  }
  Eigen::BDCSVD<Matrix> svd(X, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& sv = svd.singularValues();
  const double smax = sv.size() > 0 ? sv[0] : 0.0;
  const double cut = rel_tol * smax;
  Vector inv = Vector::Zero(sv.size());
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv[i] > cut && sv[i] > 0.0) inv[i] = 1.0 / sv[i];
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose() * Y;
}

Matrix psd_sqrt(const Matrix& S) {
  const EigSym es = eig_sym_desc(S);
  return symmetrize(es.vectors * es.values.cwiseMax(0.0).cwiseSqrt().asDiagonal() *
                    es.vectors.transpose());
}

Matrix psd_inv_sqrt(const Matrix& S, double rel_tol) {
  const EigSym es = eig_sym_desc(S);
  const double lam_max = es.values[0];
  const double lam_min = es.values[es.values.size() - 1];
  if (lam_max <= 0.0 || lam_min <= rel_tol * lam_max)
    throw NumericalError("psd_inv_sqrt: near-singular input, min eigenvalue " +
                         std::to_string(lam_min));
  Vector inv = es.values.cwiseSqrt().cwiseInverse();
  return symmetrize(es.vectors * inv.asDiagonal() * es.vectors.transpose());
}

double op_norm(const Matrix& M) {
  if (M.size() == 0) return 0.0;
  return M.jacobiSvd().singularValues()[0];
}

}  // namespace lqg
