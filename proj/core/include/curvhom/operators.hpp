#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "curvhom/families.hpp"
#include "curvhom/linalg.hpp"
#include "curvhom/random.hpp"
#include "curvhom/tensor.hpp"

namespace curvhom {

/// Operator on a tangent space, as a matrix acting on coordinate columns.
using Endomorphism = Matrix;

/// g(J(x)y, z) = R(y, x, x, z).
Endomorphism jacobi(const Tensor& R, const BilinearForm& g, const Vector& x);

/// rho(x, x) = Tr J(x).
double ricci(const Tensor& R, const BilinearForm& g, const Vector& x);

/// Curvature operator R(x, y): g(R(x, y) z, w) = R(x, y, z, w).
Endomorphism curvature_operator(const Tensor& R, const BilinearForm& g, const Vector& x,
                                const Vector& y);

/// g(S y, z) = R(e1, e2, y, z) for an orthonormal pair {e1, e2}. Throws
/// InvalidArgument when the pair is not orthonormal within 1e-10.
Endomorphism skew_curvature_operator(const Tensor& R, const BilinearForm& g,
                                     const Vector& e1, const Vector& e2);

/// Gram-Schmidt in the definite form induced on span{v1, v2}. The result
/// has g(e1,e1) = g(e2,e2) = +-1 and g(e1,e2) = 0, and is positively
/// oriented relative to (v1, v2) when orientation = +1 (e2 is flipped for
/// -1). Throws DegeneratePlane or IndefinitePlane.
std::pair<Vector, Vector> orthonormalize_plane(const BilinearForm& g, const Vector& v1,
                                               const Vector& v2, int orientation = 1);

inline constexpr double kDefaultRankTol = 1e-8;

/// Smallest n with ||A^n|| <= tol * ||A||^n (spectral norms), or nullopt if
/// no n <= dim qualifies. The zero operator has index 1.
std::optional<int> nilpotency_index(const Endomorphism& A, double tol = kDefaultRankTol);

/// rank(A^k) for k = 1..dim. A^k counts singular values above
/// tol * sigma_max(A)^k * dim; sigma_max(A)^k bounds every singular value of
/// A^k, so roundoff in powers past the nilpotency index reads as zero.
std::vector<int> rank_sequence(const Endomorphism& A, double tol = kDefaultRankTol);

/// Coefficients c_1..c_n of det(lambda I - A) = lambda^n + c_1 lambda^{n-1} + ...
/// from power traces (Newton's identities).
std::vector<double> characteristic_coefficients(const Endomorphism& A);

struct SamplerConfig {
  std::uint64_t seed = 0;
  int count = 100;
  /// Raw draws allowed per accepted sample.
  int rejection_cap = 10000;
  /// Raw draws are uniform in [-box, box]^n, either in coordinates or in
  /// an orthonormal frame of g.
  double box = 2.0;
  /// Fraction of raw draws taken in the orthonormal frame. Coordinate boxes
  /// alone can make one causal cone vanishingly thin where g is badly
  /// scaled.
  double frame_fraction = 0.5;
  /// Fraction of coordinate draws whose coordinates are each zeroed with
  /// probability 1/2. Coordinate-aligned strata have measure zero, so a pure
  /// box draw never lands on them; Jordan types that only change there are
  /// otherwise invisible to the probes.
  double sparse_fraction = 0.25;
};

/// One unit vector of causal sign +1 or -1 drawn from rng. Raw draws with
/// |g(v,v)| < 1e-3 ||v||^2 ||g|| are rejected before normalization.
Vector draw_unit_vector(Rng& rng, const BilinearForm& g, int sign, const SamplerConfig& cfg);

/// cfg.count unit vectors; sample i uses substream(cfg.seed, i).
std::vector<Vector> sample_unit_vectors(const BilinearForm& g, int sign,
                                        const SamplerConfig& cfg);

/// An orthonormal pair spanning a plane on which g is definite with the
/// requested sign.
std::pair<Vector, Vector> draw_plane(Rng& rng, const BilinearForm& g, int sign,
                                     const SamplerConfig& cfg);

struct ProbeSample {
  int point_index = 0;
  std::vector<Vector> vectors;  ///< x for Jacobi probes, (e1, e2) for planes
  std::vector<int> ranks;
  std::vector<double> charpoly;
};

struct ProbeOptions {
  double rank_tol = kDefaultRankTol;
  /// Characteristic coefficients c_k agree when |diff| <= tol * max(1, ||A||)^k.
  double charpoly_tol = 1e-8;
  /// Keep drawing (up to 10x cfg.count) while no witness has appeared.
  bool search_witness = false;
};

struct ProbeVerdict {
  bool constant = true;
  int samples = 0;
  std::vector<int> ranks;  ///< rank sequence of the first sample
  std::optional<std::pair<ProbeSample, ProbeSample>> witness;
};

/// Compares the Jordan data (rank sequence and characteristic coefficients)
/// of J(x) over unit vectors of the given sign at the given points. Sample i
/// sits at points[i % points.size()] and draws from substream(cfg.seed, i).
ProbeVerdict jordan_probe(const FamilySpec& spec, const std::vector<Vector>& points, int sign,
                          const SamplerConfig& cfg, const ProbeOptions& opt = {});

/// Same for the skew-symmetric curvature operator over oriented planes.
ProbeVerdict ip_probe(const FamilySpec& spec, const std::vector<Vector>& points, int sign,
                      const SamplerConfig& cfg, const ProbeOptions& opt = {});

nlohmann::json to_json(const ProbeVerdict& v);

}  // namespace curvhom
