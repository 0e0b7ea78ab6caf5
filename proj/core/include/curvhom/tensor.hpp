#pragma once

#include <array>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "curvhom/linalg.hpp"

namespace curvhom {

enum class Variance { Covariant, Contravariant };

/// Dense multi-index array over R^dim with a variance per slot.
///
/// Components are stored row-major: the last slot varies fastest. The
/// accessor is total, so every index tuple in [0, dim)^rank is addressable.
class Tensor {
 public:
  Tensor() = default;
  Tensor(int dim, std::vector<Variance> variances);

  /// All slots covariant, all components zero.
  static Tensor covariant(int dim, int rank);

  int dim() const { return dim_; }
  int rank() const { return static_cast<int>(variances_.size()); }
  const std::vector<Variance>& variances() const { return variances_; }
  bool all_covariant() const;

  std::span<double> components() { return data_; }
  std::span<const double> components() const { return data_; }
  std::size_t size() const { return data_.size(); }

  std::size_t offset(std::span<const int> idx) const;

  double& at(std::span<const int> idx) { return data_[offset(idx)]; }
  double at(std::span<const int> idx) const { return data_[offset(idx)]; }
  double& at(std::initializer_list<int> idx) {
    return at(std::span<const int>(idx.begin(), idx.size()));
  }
  double at(std::initializer_list<int> idx) const {
    return at(std::span<const int>(idx.begin(), idx.size()));
  }

  template <class... I>
  double& operator()(I... i) {
    const std::array<int, sizeof...(I)> idx{static_cast<int>(i)...};
    return data_[offset(idx)];
  }
  template <class... I>
  double operator()(I... i) const {
    const std::array<int, sizeof...(I)> idx{static_cast<int>(i)...};
    return data_[offset(idx)];
  }

  /// Decodes a flat offset into its index tuple.
  void unflatten(std::size_t flat, std::span<int> idx) const;

  double max_abs() const;
  bool is_zero() const { return max_abs() == 0.0; }

  /// Evaluates a fully covariant tensor on the given vectors.
  double evaluate(std::span<const Vector> args) const;

 private:
  int dim_ = 0;
  std::vector<Variance> variances_;
  std::vector<double> data_;
};

/// Componentwise max |a - b|; throws on shape mismatch.
double max_abs_diff(const Tensor& a, const Tensor& b);

/// True when shapes agree and every component differs by at most tol.
bool approx_equal(const Tensor& a, const Tensor& b, double tol);

/// Traces slots a and b. Two covariant slots are traced against the inverse
/// metric, two contravariant slots against the metric, and a mixed pair
/// against the Kronecker delta.
Tensor contract(const Tensor& t, int slot_a, int slot_b,
                const BilinearForm& metric);

/// (pullback t)(v1..vk) = t(m v1, ..., m vk). Requires all slots covariant.
Tensor pullback(const Tensor& t, const LinearMap& m);

/// Rank-2 covariant tensor holding the form's components.
Tensor to_tensor(const BilinearForm& g);

/// Outer product of two tensors of the same dimension.
Tensor outer(const Tensor& a, const Tensor& b);

}  // namespace curvhom
