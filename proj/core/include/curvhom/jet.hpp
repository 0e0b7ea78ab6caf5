#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <unordered_map>
#include <vector>

#include "curvhom/profile.hpp"

namespace curvhom {

/// Monomial basis for truncated Taylor expansions in `nvars` variables up to
/// total degree `max_order`, in graded order. Because the ordering is
/// graded, the monomials of degree <= k form a prefix of length size(k), so
/// a jet of lower order is simply a shorter coefficient vector.
class JetSpace {
 public:
  JetSpace(int nvars, int max_order);

  int nvars() const { return nvars_; }
  int max_order() const { return max_order_; }
  std::size_t size(int order) const { return prefix_[static_cast<std::size_t>(order)]; }
  int degree(std::size_t idx) const { return degree_[idx]; }
  std::span<const std::uint8_t> exponents(std::size_t idx) const {
    return {&exps_[idx * static_cast<std::size_t>(nvars_)], static_cast<std::size_t>(nvars_)};
  }
  /// Index of the monomial with the given exponents; throws if the degree
  /// exceeds max_order.
  std::size_t index_of(std::span<const int> alpha) const;
  /// alpha! for the monomial at idx.
  double factorial_weight(std::size_t idx) const { return fact_[idx]; }

  /// Product monomial of i and j; valid for j < size(max_order - degree(i)).
  std::size_t product(std::size_t i, std::size_t j) const { return mul_[i][j]; }

  struct DerivTerm {
    std::size_t target;
    double factor;
  };
  /// d/dx_var of monomial idx, or factor 0 when the exponent is 0.
  const DerivTerm& derivative(std::size_t idx, int var) const {
    return deriv_[idx * static_cast<std::size_t>(nvars_) + static_cast<std::size_t>(var)];
  }

  /// Shared instance per (nvars, max_order); spaces are immutable.
  static std::shared_ptr<const JetSpace> make(int nvars, int max_order);

 private:
  std::uint64_t key(std::span<const int> alpha) const;

  int nvars_;
  int max_order_;
  std::vector<std::size_t> prefix_;
  std::vector<std::uint8_t> exps_;
  std::vector<int> degree_;
  std::vector<double> fact_;
  std::unordered_map<std::uint64_t, std::size_t> lookup_;
  std::vector<std::vector<std::size_t>> mul_;
  std::vector<DerivTerm> deriv_;
};

using JetSpacePtr = std::shared_ptr<const JetSpace>;

/// Truncated Taylor expansion sum_alpha c_alpha x^alpha about a base point,
/// with c_alpha = d^alpha f / alpha!. Arithmetic truncates to the lower of
/// the operand orders.
class Jet {
 public:
  Jet() = default;
  Jet(JetSpacePtr space, int order);

  static Jet constant(JetSpacePtr space, int order, double v);
  /// The coordinate function x_var with value `at` at the base point.
  static Jet variable(JetSpacePtr space, int order, int var, double at);

  const JetSpacePtr& space() const { return space_; }
  int order() const { return order_; }
  std::span<const double> coeffs() const { return c_; }
  std::span<double> coeffs() { return c_; }

  double value() const { return c_.empty() ? 0.0 : c_[0]; }
  /// d^alpha f at the base point.
  double partial(std::span<const int> alpha) const;
  /// Partial along a list of variable indices (with repetition).
  double partial_along(std::span<const int> vars) const;
  bool is_zero() const;

  Jet derivative(int var) const;
  Jet truncated(int order) const;

  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator*=(double s);
  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(Jet a, double s) { return a *= s; }
  friend Jet operator*(double s, Jet a) { return a *= s; }
  friend Jet operator*(const Jet& a, const Jet& b);

  /// this += a * b, truncated to this->order().
  void add_product(const Jet& a, const Jet& b, double scale = 1.0);

 private:
  JetSpacePtr space_;
  int order_ = 0;
  std::vector<double> c_;
};

/// psi(x_var) expanded about x_var = at: coefficients psi^(m)(at) / m!.
Jet compose_coordinate(const ScalarProfile& psi, JetSpacePtr space, int order,
                       int var, double at);

/// Taylor expansion of d^shift f about x0 in the variables vars[0..p), where
/// vars maps profile variable i to jet variable vars[i].
Jet taylor_expand(const MultiProfile& f, std::span<const double> x0,
                  std::span<const int> shift, JetSpacePtr space, int order,
                  std::span<const int> vars);

}  // namespace curvhom
