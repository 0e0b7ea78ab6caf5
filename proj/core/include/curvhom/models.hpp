#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "curvhom/curvature.hpp"
#include "curvhom/families.hpp"
#include "curvhom/linalg.hpp"
#include "curvhom/tensor.hpp"

namespace curvhom {

/// U1p: basis (X_1..X_p, Y_1..Y_p).
/// U2s: basis (U_1..U_s, T_1..T_s, V_1..V_s).
/// U3r, U3r1: basis (U_1..U_r, V_1..V_r, X, Y); U3r1 also carries A^1.
enum class ModelKind { U1p, U2s, U3r, U3r1 };

struct ModelSpace {
  ModelKind kind = ModelKind::U1p;
  int size = 0;
  BilinearForm g;
  Tensor A;
  std::optional<Tensor> A1;
  std::vector<std::string> labels;

  int dim() const { return g.dim(); }
};

/// Exact integer-valued model with all symmetry images filled in.
ModelSpace build_model(ModelKind which, int size);

/// The model matching a family: U1p, U2s, or U3r (order 0) / U3r1 (order 1).
ModelKind model_for(FamilyKind kind, int order = 0);

std::string to_string(ModelKind kind);

/// R(x1,x2,x3,x4) = phi(x1,x4) phi(x2,x3) - phi(x1,x3) phi(x2,x4).
Tensor curvature_from_bilinear(const BilinearForm& phi);

struct NormalizedBasis {
  Vector point;
  std::vector<std::string> labels;
  /// Columns are the basis vectors in coordinates (the isomorphism from the
  /// model space onto T_P).
  LinearMap phi;
};

/// Cholesky H_f = L L^T, X_i = sum_j (L^{-1})_ij d_j^x, Y_i = sum_j L_ji d_j^y,
/// then X_i -> X_i - 1/2 sum_j c_ij Y_j with c_ij = g(X_i, X_j) at P.
/// Throws NotPositiveDefinite when H_f(P) is not positive definite.
NormalizedBasis normalize_family1(const FamilySpec& spec, const Vector& P);

/// U_i = d_i^u + eps_i d_i^t + rho_i d_i^v, T_i = d_i^t + eps_i d_i^v,
/// V_i = d_i^v with eps_i = -1/2 f_i'' - 1/4 |u|^2 and
/// rho_i = 1/2 (eps_i^2 - g(d_i^u, d_i^u)).
NormalizedBasis normalize_family2(const FamilySpec& spec, const Vector& P);

/// X = e0 (d_x - 1/2 g(d_x,d_x) d_y), Y = d_y / e0, U_i = e_i d_{u_i},
/// V_i = d_{v_i} / e_i. Order 0: e_r = psi''^{-1/2}, e0 = 1, e_i = e_r.
/// Order 1: e_r = psi''/psi''', e0 = (e_r^2 psi'')^{-1/2}, e_i = e_{i+1}/e0^2.
/// Throws InvalidArgument when psi'' <= 0, or psi''' = 0 for order 1.
NormalizedBasis normalize_family3(const FamilySpec& spec, const Vector& P, int order = 0);

/// Dispatches on the family; order only matters for family 3.
NormalizedBasis normalize(const FamilySpec& spec, const Vector& P, int order = 0);

struct ModelMatchReport {
  double g_deviation = 0.0;
  double A_deviation = 0.0;
  std::optional<double> A1_deviation;
  double tol = 0.0;

  bool pass() const;
};

/// Pulls g, R (and nabla R when the model has A^1) back along the basis and
/// compares with the model componentwise.
ModelMatchReport verify_model_match(const NormalizedBasis& basis, const CurvaturePackage& pkg,
                                    const ModelSpace& model, double tol = 1e-10);

/// Basis (as columns) of {eta : A(e_i, e_j, e_k, eta) = 0 for all i, j, k}.
Matrix annihilator(const Tensor& A, double tol = 1e-10);

/// B1p on R^p = span{X_i}; B2s on R^{2s} = span{U_1..U_s, T_1..T_s}.
enum class ReducedModel { B1p, B2s };

Tensor reduced_model(ReducedModel which, int size);

struct IrreducibilityVerdict {
  int trials = 0;
  /// Constructed pairs satisfy the vanishing hypothesis.
  double max_hypothesis_residual = 0.0;
  /// Distance of constructed pairs from the concluded form (proportional
  /// pair for B1p, T-span membership for B2s).
  double max_conclusion_residual = 0.0;
  /// Proportionality factors recovered on B1p trials.
  std::vector<double> lambdas;
  /// Generic pairs for which some basis pair (eta1, eta2) violates the
  /// hypothesis by more than tol.
  int generic_violations = 0;
  double tol = 0.0;

  bool pass() const;
};

/// Seeded random pairs (xi1, xi2): constructed ones satisfy the hypothesis
/// (xi2 = lambda xi1 for B1p; both in span{T} for B2s) and must satisfy the
/// conclusion; generic ones must violate the hypothesis.
IrreducibilityVerdict irreducibility_witness_probe(ReducedModel which, int size,
                                                   std::uint64_t seed, int trials = 20,
                                                   double tol = 1e-10);

/// max over (i,j,k,l) pairs of the hypothesis residuals for a given pair.
double reduced_hypothesis_residual(ReducedModel which, const Tensor& B, const Vector& xi1,
                                   const Vector& xi2);

struct InjectivityReport {
  int pairs = 0;
  double min_form_distance = 0.0;
  double min_curvature_distance = 0.0;
};

/// Distinct positive-definite pairs phi1 != phi2: smallest ||R(phi1) - R(phi2)||
/// (max norm) seen over the seeded pairs.
InjectivityReport bilinear_injectivity_probe(int dim, int pairs, std::uint64_t seed);

nlohmann::json to_json(const NormalizedBasis& b);
nlohmann::json to_json(const ModelMatchReport& r);

}  // namespace curvhom
