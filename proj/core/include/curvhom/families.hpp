#pragma once

#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "curvhom/jet.hpp"
#include "curvhom/linalg.hpp"
#include "curvhom/profile.hpp"
#include "curvhom/tensor.hpp"

namespace curvhom {

enum class FamilyKind { One = 1, Two = 2, Three = 3 };

/// Coordinates (x_1..x_p, y_1..y_p); indices are 0-based.
struct Coords1 {
  int p;
  int x(int i) const { return i; }
  int y(int i) const { return p + i; }
};

/// Coordinates (u_1..u_s, t_1..t_s, v_1..v_s).
struct Coords2 {
  int s;
  int u(int i) const { return i; }
  int t(int i) const { return s + i; }
  int v(int i) const { return 2 * s + i; }
};

/// Coordinates (u_1..u_r, v_1..v_r, x, y).
struct Coords3 {
  int r;
  int u(int i) const { return i; }
  int v(int i) const { return r + i; }
  int x() const { return 2 * r; }
  int y() const { return 2 * r + 1; }
};

/// One of the three metric families:
///   1: R^{2p}, g(dx_i,dx_j) = d_i f d_j f, g(dx_i,dy_i) = 1;
///   2: R^{3s}, g(du_i,du_j) = -2(F + sum u_k t_k) delta_ij,
///      g(du_i,dv_j) = delta_ij, g(dt_i,dt_j) = -delta_ij, F = sum f_i(u_i);
///   3: R^{2r+2}, g(dx,dy) = 1, g(du_i,dv_j) = delta_ij,
///      g(dx,dx) = -2 sum u_i v_{i+1} - 2 psi(u_r).
class FamilySpec {
 public:
  static FamilySpec family1(int p, MultiProfile f);
  static FamilySpec family2(std::vector<ScalarProfile> f);
  static FamilySpec family3(int r, ScalarProfile psi);

  FamilyKind kind() const { return kind_; }
  /// p, s or r.
  int size() const { return size_; }
  int dim() const;
  std::string name() const;

  const MultiProfile& f() const;
  const std::vector<ScalarProfile>& fs() const;
  const ScalarProfile& psi() const;

  Coords1 coords1() const { return {size_}; }
  Coords2 coords2() const { return {size_}; }
  Coords3 coords3() const { return {size_}; }

  /// Highest order of metric partials available from the profile oracles:
  /// family 1 metrics are products of first partials of f, so they lose one
  /// order against the profile's depth of 4.
  int max_metric_order() const { return kind_ == FamilyKind::One ? 3 : 4; }

 private:
  FamilyKind kind_ = FamilyKind::One;
  int size_ = 0;
  MultiProfile f_;
  std::vector<ScalarProfile> fs_;
  ScalarProfile psi_;
};

void check_point(const FamilySpec& spec, const Vector& P);

BilinearForm metric_at(const FamilySpec& spec, const Vector& P);

/// Metric components as Taylor jets about P in all coordinates, truncated at
/// `order`. Partials are exact: every component is a polynomial in the
/// coordinates and in profile derivatives.
class MetricJets {
 public:
  MetricJets(JetSpacePtr space, int order, std::vector<Jet> jets);

  int dim() const { return space_->nvars(); }
  int order() const { return order_; }
  const JetSpacePtr& space() const { return space_; }
  const Jet& jet(int a, int b) const {
    return jets_[static_cast<std::size_t>(a * dim() + b)];
  }
  const std::vector<Jet>& jets() const { return jets_; }

  BilinearForm value() const;
  /// d/dz_{vars[0]} ... d/dz_{vars[k-1]} g_ab at P.
  double partial(int a, int b, std::span<const int> vars) const;
  /// dg(a,b,c) = d_c g_ab.
  Tensor first_partials() const;
  /// d2g(a,b,c,d) = d_c d_d g_ab.
  Tensor second_partials() const;

 private:
  JetSpacePtr space_;
  int order_;
  std::vector<Jet> jets_;
};

/// Throws DerivativeOrder when order exceeds spec.max_metric_order().
MetricJets metric_jets(const FamilySpec& spec, const Vector& P, int order);

/// Closed-form connection coefficients Gamma(a,b,c) = Gamma_ab^c, slots
/// (covariant, covariant, contravariant), written out per family from the
/// hand-derived tables.
Tensor christoffel_oracle(const FamilySpec& spec, const Vector& P);

struct CurvatureOracle {
  Tensor R;       ///< rank 4
  Tensor nablaR;  ///< rank 5, last slot is the differentiation direction
};

/// Closed-form nonzero components of R and nabla R, expanded over the
/// curvature symmetries.
CurvatureOracle curvature_oracle(const FamilySpec& spec, const Vector& P);

// JSON: {"family":1,"p":3,"profiles":[multi]} |
//       {"family":2,"s":2,"profiles":[scalar,...] | "zero" | "symmetric" | "u^N"} |
//       {"family":3,"r":2,"psi":scalar | "u^N" | "exp" | "symmetric"}.
FamilySpec family_from_json(const nlohmann::json& j);
nlohmann::json to_json(const FamilySpec& spec);

/// Profiles for which the family is a symmetric space: f = sum x_i^2,
/// F = -sum u_i^4 / 6, psi = u_r^2.
FamilySpec symmetric_family(FamilyKind kind, int size);

}  // namespace curvhom
