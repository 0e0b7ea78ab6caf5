#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "curvhom/families.hpp"
#include "curvhom/linalg.hpp"
#include "curvhom/random.hpp"

namespace curvhom {

/// Coordinate ordering z_1..z_n in which Gamma_ab^c != 0 only for
/// z(c) > z(a), z(b), and Gamma_ab^c depends on z_1..z_{c-1} only.
struct TriangularOrder {
  /// perm[i] is the coordinate index of z_{i+1}.
  std::vector<int> perm;
  /// rank[coord] is the position of coord in perm.
  std::vector<int> rank;
  /// Consecutive runs of perm that can be integrated together: no
  /// coefficient feeding a block involves or depends on the block itself.
  std::vector<std::vector<int>> blocks;
  int points_checked = 0;
};

/// Family 1: (x, y). Family 2: (u, t, v). Family 3: (x, u_1..u_r, v_r..v_1, y).
/// Blocks are {x}, {y}; {u}, {t}, {v}; singletons for family 3. Verified on `checks` seeded random points against christoffel_oracle;
/// a violation throws InvalidArgument.
TriangularOrder triangular_order(const FamilySpec& spec, int checks = 50,
                                 std::uint64_t seed = 0x7a11);

/// First violation of the triangular hypothesis for `order` at P, or an
/// empty string. Checked per coordinate and per block; dependence is tested
/// by replacing the coordinates at or above the cut with NaN and with
/// random values and comparing coefficients bit for bit.
std::string triangular_violation(const FamilySpec& spec, const TriangularOrder& order,
                                 const Vector& P, Rng& rng);

/// Sampled geodesic on [0, t_max]. Between nodes the curve is the quintic
/// Hermite interpolant of position, velocity and acceleration.
class Geodesic {
 public:
  struct State {
    Vector position;
    Vector velocity;
  };

  Geodesic(FamilySpec spec, Vector P, Vector v, double t_max, std::string method,
           double tol, Matrix pos, Matrix vel, Matrix acc);

  const FamilySpec& spec() const { return spec_; }
  const Vector& initial_point() const { return P_; }
  const Vector& initial_velocity() const { return v_; }
  double t_max() const { return t_max_; }
  const std::string& method() const { return method_; }
  double tolerance() const { return tol_; }
  /// Number of grid intervals.
  int intervals() const { return static_cast<int>(pos_.cols()) - 1; }

  /// Throws InvalidArgument outside [0, t_max].
  State at(double t) const;
  Vector position(double t) const { return at(t).position; }
  Vector velocity(double t) const { return at(t).velocity; }
  /// Grid node k.
  State node(int k) const;

 private:
  FamilySpec spec_;
  Vector P_;
  Vector v_;
  double t_max_;
  std::string method_;
  double tol_;
  // Column k holds node k.
  Matrix pos_;
  Matrix vel_;
  Matrix acc_;
};

inline constexpr double kDefaultGeodesicTol = 1e-12;
inline constexpr int kMaxGeodesicIntervals = 1 << 20;

/// Solves the geodesic equation block by block in triangular order. Each
/// z_c = P_c + v_c t - int_0^t (t - r) h_c(r) dr with h_c = sum Gamma_ab^c
/// zdot_a zdot_b built from lower blocks; cumulative fourth-order quadrature
/// on a uniform grid doubled from 64 intervals until two grids agree within
/// tol (1 + |z|). Throws Convergence past 2^20 intervals.
Geodesic integrate_recursive(const FamilySpec& spec, const Vector& P, const Vector& v,
                             double t_max, double tol = kDefaultGeodesicTol);

/// Classical RK4 on z'' = -Gamma(z', z') with the engine Christoffels.
Geodesic integrate_rk4(const FamilySpec& spec, const Vector& P, const Vector& v, double t_max,
                       double step);

Vector exp_map(const FamilySpec& spec, const Vector& P, const Vector& v,
               double tol = kDefaultGeodesicTol);

/// Initial velocity of the geodesic from P to Q on [0, 1], solved
/// explicitly block by block: v_c = Q_c - P_c + int_0^1 (1 - r) h_c(r) dr.
Vector log_map(const FamilySpec& spec, const Vector& P, const Vector& Q,
               double tol = kDefaultGeodesicTol);

/// exp_P(-log_P(Q)).
Vector geodesic_symmetry(const FamilySpec& spec, const Vector& P, const Vector& Q,
                         double tol = kDefaultGeodesicTol);

using PointMap = std::function<Vector(const Vector&)>;

struct IsometryReport {
  std::vector<Vector> samples;
  std::vector<double> deviations;
  double max_deviation = 0.0;
  int worst_sample = -1;
  double tol = 0.0;
  double step = 0.0;

  bool pass() const { return max_deviation < tol; }
};

/// Max-abs deviation of D^T g(map(x)) D from g(x), D the central-difference
/// Jacobian of map at x.
IsometryReport isometry_check(const FamilySpec& spec, const PointMap& map,
                              const std::vector<Vector>& samples, double tol = 1e-5,
                              double step = 1e-4);

/// g(gamma'(t), gamma'(t)) at each t.
std::vector<double> energy_along(const Geodesic& gamma, const std::vector<double>& ts);

/// Trajectory rows [{t, position, velocity, energy}] at `samples` + 1 evenly
/// spaced parameters.
nlohmann::json trajectory_json(const Geodesic& gamma, int samples);
nlohmann::json to_json(const TriangularOrder& order);
nlohmann::json to_json(const IsometryReport& r);

}  // namespace curvhom
