#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace curvhom {

/// Deepest derivative any profile is asked for (∇²R of the third family
/// needs ψ'''').
inline constexpr int kMaxProfileOrder = 4;

/// Smooth function R -> R exposed through its derivatives up to order 4.
class ScalarProfile {
 public:
  using Oracle = std::function<double(double u, int order)>;

  enum class Kind { Polynomial, Oracle };

  /// Zero polynomial.
  ScalarProfile();

  /// sum_k coeffs[k] u^k
  static ScalarProfile polynomial(std::vector<double> coeffs);
  static ScalarProfile monomial(double coeff, int power);
  /// e^u, tagged "exp" so it survives a JSON round trip.
  static ScalarProfile exponential();
  static ScalarProfile oracle(std::string tag, Oracle fn);

  Kind kind() const { return kind_; }
  const std::string& tag() const { return tag_; }
  const std::vector<double>& coeffs() const { return coeffs_; }

  /// k-th derivative at u. Throws DerivativeOrder for k outside [0, 4].
  double derivative(double u, int order) const;
  double operator()(double u) const { return derivative(u, 0); }

 private:
  Kind kind_ = Kind::Polynomial;
  std::string tag_ = "polynomial";
  std::vector<double> coeffs_;
  Oracle oracle_;
};

/// One term coeff * prod_i x_i^exponents[i] of a multivariate polynomial.
struct Monomial {
  std::vector<int> exponents;
  double coeff = 0.0;
};

/// Smooth function R^p -> R exposed through mixed partials of total order
/// at most 4. alpha[i] is the number of derivatives in x_i.
class MultiProfile {
 public:
  using Oracle =
      std::function<double(std::span<const double> x, std::span<const int> alpha)>;

  enum class Kind { Polynomial, Oracle };

  MultiProfile() = default;

  static MultiProfile polynomial(int nvars, std::vector<Monomial> terms);
  /// x_1^2 + ... + x_p^2
  static MultiProfile sum_of_squares(int nvars);
  static MultiProfile oracle(int nvars, std::string tag, Oracle fn);

  Kind kind() const { return kind_; }
  int nvars() const { return nvars_; }
  const std::string& tag() const { return tag_; }
  const std::vector<Monomial>& terms() const { return terms_; }

  double partial(std::span<const double> x, std::span<const int> alpha) const;
  double value(std::span<const double> x) const;

  /// Hessian matrix H_ij = d_i d_j f at x.
  std::vector<double> hessian(std::span<const double> x) const;
  std::vector<double> gradient(std::span<const double> x) const;

 private:
  Kind kind_ = Kind::Polynomial;
  int nvars_ = 0;
  std::string tag_ = "polynomial";
  std::vector<Monomial> terms_;
  Oracle oracle_;
};

/// Polynomials evaluate exactly; oracle values are returned as supplied.
double eval_profile(const ScalarProfile& p, double u, int order);
double eval_profile(const MultiProfile& p, std::span<const double> x,
                    std::span<const int> alpha);

/// Oracle partials are keyed by derivative counts, so symmetry under index
/// permutation holds by construction; what can go wrong is inconsistency
/// between orders. Compares central differences of every partial of order
/// <= 3 along each axis with the next-order partial and returns the largest
/// relative deviation over the given points.
double oracle_consistency_defect(const MultiProfile& p,
                                 std::span<const std::vector<double>> points,
                                 double step = 1e-4);

// JSON: {"kind":"polynomial","coeffs":[c0,c1,...]}, {"kind":"exp"},
// {"kind":"polynomial","terms":[{"exponents":[...],"coeff":c}]}.
ScalarProfile scalar_profile_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ScalarProfile& p);
MultiProfile multi_profile_from_json(const nlohmann::json& j, int nvars);
nlohmann::json to_json(const MultiProfile& p);

}  // namespace curvhom
