#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

#include "curvhom/error.hpp"

namespace curvhom {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Counts of negative and positive directions of an orthonormalized
/// nondegenerate form. A "(p,q)" signature is stored as {neg = p, pos = q}.
struct Signature {
  int neg = 0;
  int pos = 0;

  int dim() const { return neg + pos; }
  friend bool operator==(const Signature&, const Signature&) = default;
};

/// Symmetric real form on R^dim. Symmetry is exact: construction rejects
/// any matrix with A(i,j) != A(j,i).
class BilinearForm {
 public:
  BilinearForm() = default;
  explicit BilinearForm(Matrix m);

  static BilinearForm identity(int dim);
  static BilinearForm zero(int dim);
  /// Symmetrizes (A + A^T)/2; for inputs that are symmetric up to roundoff.
  static BilinearForm symmetrized(const Matrix& m);

  int dim() const { return static_cast<int>(m_.rows()); }
  double operator()(int i, int j) const { return m_(i, j); }
  double operator()(const Vector& x, const Vector& y) const {
    return x.dot(m_ * y);
  }
  const Matrix& matrix() const { return m_; }

  double determinant() const { return m_.determinant(); }
  bool nondegenerate(double tol = 1e-12) const;
  /// Throws SingularMatrix when |det| <= tol.
  Matrix inverse(double tol = 1e-12) const;
  Signature signature(double tol = 1e-10) const;
  bool positive_definite() const;

 private:
  Matrix m_;
};

/// Linear map R^source -> R^target stored as a target x source matrix.
/// Columns are the images of the source basis vectors.
class LinearMap {
 public:
  LinearMap() = default;
  explicit LinearMap(Matrix m) : m_(std::move(m)) {}

  static LinearMap identity(int dim) {
    return LinearMap(Matrix::Identity(dim, dim));
  }

  int source_dim() const { return static_cast<int>(m_.cols()); }
  int target_dim() const { return static_cast<int>(m_.rows()); }
  const Matrix& matrix() const { return m_; }
  Vector operator()(const Vector& v) const { return m_ * v; }

  bool invertible(double tol = 1e-12) const;
  LinearMap inverse(double tol = 1e-12) const;

 private:
  Matrix m_;
};

/// Largest absolute entry; 0 for empty matrices.
double max_abs(const Matrix& m);

/// Number of singular values above rel_tol * sigma_max * dim.
int numerical_rank(const Matrix& m, double rel_tol);

/// Orthonormal (Euclidean) basis of the kernel of m, as columns.
Matrix kernel_basis(const Matrix& m, double rel_tol);

}  // namespace curvhom
