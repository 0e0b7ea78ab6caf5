#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "curvhom/families.hpp"
#include "curvhom/linalg.hpp"
#include "curvhom/tensor.hpp"

namespace curvhom {

// Sign convention: R(x,y,z,w) = g((nabla_x nabla_y - nabla_y nabla_x - nabla_[x,y]) z, w).
// Flipping it negates every R component, which the closed-form oracle
// comparisons detect.

struct Christoffels {
  Tensor first;   ///< first(i,j,k) = Gamma_ijk = g(nabla_i d_j, d_k), all covariant
  Tensor second;  ///< second(i,j,k) = Gamma_ij^k, slots (cov, cov, contra)
};

/// dg(a,b,c) = d_c g_ab. Throws SingularMatrix for a degenerate g.
Christoffels christoffels(const BilinearForm& g, const Tensor& dg);

/// d2g(a,b,c,d) = d_c d_d g_ab.
Tensor riemann(const BilinearForm& g, const Tensor& dg, const Tensor& d2g);

/// nabla T(i_1..i_k; e) for an all-covariant T given dT(i_1..i_k, e) = d_e T.
Tensor covariant_derivative(const Tensor& gamma, const Tensor& T, const Tensor& dT);

/// nabla R(a,b,c,d; e); dR(a,b,c,d,e) = d_e R_abcd.
Tensor covariant_derivative_R(const Tensor& gamma, const Tensor& R, const Tensor& dR);

/// nabla^2 R(a,b,c,d; e, f) = (nabla_f nabla R)(a,b,c,d; e).
Tensor second_covariant_derivative_R(const Tensor& gamma, const Tensor& nablaR,
                                     const Tensor& d_nablaR);

struct CurvaturePackage {
  Vector point;
  BilinearForm g;
  Tensor gamma;  ///< Gamma_ab^c
  Tensor R;
  std::optional<Tensor> nablaR;
  std::optional<Tensor> nabla2R;
};

/// Curvature data at P from exact metric jets. depth 0 gives R, 1 adds
/// nabla R, 2 adds nabla^2 R. The partials feeding each covariant derivative
/// come from differentiating the jet expressions, never from finite
/// differences. Family 1 supports depth <= 1.
CurvaturePackage curvature_package(const FamilySpec& spec, const Vector& P, int depth = 1);

/// Same, from an arbitrary metric given as jets of order depth + 2.
CurvaturePackage curvature_package(const MetricJets& g, const Vector& P, int depth);

/// Engine connection coefficients Gamma_ab^c at P (cheap: order-1 jets).
Tensor christoffel_symbols(const FamilySpec& spec, const Vector& P);

/// Inverse metric as jets of the same order (Neumann series about P).
std::vector<Jet> inverse_metric_jets(const MetricJets& g);

struct IdentityCheck {
  std::string name;
  double max_violation = 0.0;
  bool pass = true;
};

struct SymmetryReport {
  double scale = 0.0;  ///< max |component|
  double tol = 0.0;
  std::vector<IdentityCheck> checks;

  bool pass() const;
  double max_violation() const;
};

/// A(x,y,z,w) = -A(y,x,z,w) = -A(x,y,w,z) = A(z,w,x,y) and the first
/// Bianchi sum. A check passes when its violation is <= tol * max(1, scale).
SymmetryReport check_curvature_symmetries(const Tensor& A, double tol = 1e-10);

/// The same four identities on the first four slots for every fixed last
/// slot, plus A(x,y,z,w;v) + A(x,y,w,v;z) + A(x,y,v,z;w) = 0.
SymmetryReport check_nabla_symmetries(const Tensor& A1, double tol = 1e-10);

/// [{"index":[...], "value":v}] for every |component| > zero_tol.
nlohmann::json nonzero_components(const Tensor& t, double zero_tol = 0.0);
nlohmann::json to_json(const CurvaturePackage& pkg, double zero_tol = 1e-14);
nlohmann::json to_json(const SymmetryReport& r);

}  // namespace curvhom
