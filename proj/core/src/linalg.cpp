#include "curvhom/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace curvhom {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid_argument";
    case ErrorKind::DimensionMismatch: return "dimension_mismatch";
    case ErrorKind::SingularMatrix: return "singular_matrix";
    case ErrorKind::DerivativeOrder: return "derivative_order";
    case ErrorKind::NotPositiveDefinite: return "not_positive_definite";
    case ErrorKind::DegeneratePlane: return "degenerate_plane";
    case ErrorKind::IndefinitePlane: return "indefinite_plane";
    case ErrorKind::SamplingFailed: return "sampling_failed";
    case ErrorKind::Convergence: return "convergence";
    case ErrorKind::Schema: return "schema";
  }
  return "unknown";
}

BilinearForm::BilinearForm(Matrix m) : m_(std::move(m)) {
  require(m_.rows() == m_.cols(), ErrorKind::DimensionMismatch,
          "bilinear form must be square");
  for (Eigen::Index i = 0; i < m_.rows(); ++i)
    for (Eigen::Index j = i + 1; j < m_.cols(); ++j)
      if (m_(i, j) != m_(j, i))
        fail(ErrorKind::InvalidArgument, "bilinear form is not symmetric at (" +
                                             std::to_string(i) + "," + std::to_string(j) + ")");
}

BilinearForm BilinearForm::identity(int dim) {
  return BilinearForm(Matrix::Identity(dim, dim));
}

BilinearForm BilinearForm::zero(int dim) {
  return BilinearForm(Matrix::Zero(dim, dim));
}

BilinearForm BilinearForm::symmetrized(const Matrix& m) {
  require(m.rows() == m.cols(), ErrorKind::DimensionMismatch,
          "bilinear form must be square");
  Matrix s = 0.5 * (m + m.transpose());
  return BilinearForm(std::move(s));
}

bool BilinearForm::nondegenerate(double tol) const {
  return dim() == 0 || std::abs(determinant()) > tol;
}

Matrix BilinearForm::inverse(double tol) const {
  require(nondegenerate(tol), ErrorKind::SingularMatrix,
          "metric is singular (|det| <= tolerance)");
  Eigen::FullPivLU<Matrix> lu(m_);
  Matrix inv = lu.inverse();
  // Restore exact symmetry lost to pivoting.
  return 0.5 * (inv + inv.transpose());
}

Signature BilinearForm::signature(double tol) const {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m_, Eigen::EigenvaluesOnly);
  const Vector& ev = es.eigenvalues();
  double scale = ev.size() ? ev.cwiseAbs().maxCoeff() : 0.0;
  Signature s;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) < -tol * std::max(1.0, scale)) ++s.neg;
    else if (ev(i) > tol * std::max(1.0, scale)) ++s.pos;
  }
  return s;
}

bool BilinearForm::positive_definite() const {
  Eigen::LLT<Matrix> llt(m_);
  return llt.info() == Eigen::Success;
}

bool LinearMap::invertible(double tol) const {
  return m_.rows() == m_.cols() && std::abs(m_.determinant()) > tol;
}

LinearMap LinearMap::inverse(double tol) const {
  require(m_.rows() == m_.cols(), ErrorKind::DimensionMismatch,
          "only square maps can be inverted");
  require(invertible(tol), ErrorKind::SingularMatrix,
          "linear map is not invertible");
  return LinearMap(Eigen::FullPivLU<Matrix>(m_).inverse());
}

double max_abs(const Matrix& m) {
  return m.size() ? m.cwiseAbs().maxCoeff() : 0.0;
}

int numerical_rank(const Matrix& m, double rel_tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(m);
  const Vector& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  double cut = rel_tol * sv(0) * static_cast<double>(std::max(m.rows(), m.cols()));
  int r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cut) ++r;
  return r;
}

Matrix kernel_basis(const Matrix& m, double rel_tol) {
  const auto n = m.cols();
  if (m.rows() == 0 || max_abs(m) == 0.0) return Matrix::Identity(n, n);
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
  const Vector& sv = svd.singularValues();
  double cut = rel_tol * sv(0) * static_cast<double>(std::max(m.rows(), n));
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cut) ++rank;
  return svd.matrixV().rightCols(n - rank);
}

}  // namespace curvhom
