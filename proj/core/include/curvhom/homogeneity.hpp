#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "curvhom/families.hpp"
#include "curvhom/linalg.hpp"

namespace curvhom {

/// Contraction of nabla R (x-block) with itself through five copies of
/// H_f^{-1}. Evaluated in an H_f-orthonormal frame as a sum of squares.
/// Throws NotPositiveDefinite when H_f(P) is not positive definite.
double alpha1(const FamilySpec& spec, const Vector& P);

/// The literal ten-index sum; O(p^10), kept as the reference for alpha1.
double alpha1_bruteforce(const FamilySpec& spec, const Vector& P);

/// Sum of squares of nabla R over all five-index tuples from the u-block.
double alpha2(const FamilySpec& spec, const Vector& P);

enum class KPCase { BothNonzero, OnlyQuartic, OnlyMixed, Empty };

std::string to_string(KPCase c);

struct KPClass {
  KPCase label = KPCase::Empty;
  bool quartic_nonzero = false;  ///< psi''''(u_r) != 0
  bool mixed_nonzero = false;    ///< u_{r-1} != 0
  double quartic = 0.0;
  double mixed = 0.0;
  /// Some indicator lies within a factor 10 of the zero threshold.
  bool marginal = false;
};

KPCase kp_case(bool quartic_nonzero, bool mixed_nonzero);

/// Family-3 K_P case at P, decided by psi''''(u_r) and u_{r-1}.
KPClass kp_classify(const FamilySpec& spec, const Vector& P, double zero_tol = 1e-10);

/// Coordinates that occur as the last slot of a nonzero engine nabla^2 R
/// component at P. When psi''' != 0 this is {x, u_r}, {u_r}, {x} or {}
/// according to the K_P case.
std::vector<int> kp_support(const FamilySpec& spec, const Vector& P, double zero_tol = 1e-10);

struct KPComparison {
  KPClass p;
  KPClass q;
  bool differ = false;
};

KPComparison kp_scan(const FamilySpec& spec, const Vector& P, const Vector& Q,
                     double zero_tol = 1e-10);

enum class Invariant { Alpha1, Alpha2 };

std::string to_string(Invariant inv);

struct ScanReport {
  std::string invariant;
  std::vector<Vector> points;
  std::vector<double> values;
  double spread = 0.0;
  double tol = 0.0;
  bool constant = true;
};

/// Non-constant when spread > tol * (1 + max |value|). A non-constant
/// verdict is evidence on the sampled points, not a proof.
ScanReport constancy_scan(Invariant inv, const FamilySpec& spec, const std::vector<Vector>& points,
                          double tol = 1e-9);

nlohmann::json to_json(const KPClass& c);
nlohmann::json to_json(const ScanReport& r);

}  // namespace curvhom
