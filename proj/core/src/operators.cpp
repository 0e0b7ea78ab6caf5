#include "curvhom/operators.hpp"

#include <algorithm>
#include <cmath>

#include "curvhom/curvature.hpp"

namespace curvhom {

namespace {

void check_operator_inputs(const Tensor& R, const BilinearForm& g) {
  require(R.rank() == 4 && R.all_covariant(), ErrorKind::DimensionMismatch,
          "curvature operators need a covariant rank-4 tensor");
  require(R.dim() == g.dim(), ErrorKind::DimensionMismatch,
          "curvature tensor and metric dimensions differ");
}

double spectral_norm(const Matrix& A) {
  if (A.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(A);
  return svd.singularValues()(0);
}

}  // namespace

Endomorphism jacobi(const Tensor& R, const BilinearForm& g, const Vector& x) {
  check_operator_inputs(R, g);
  const int n = g.dim();
  require(x.size() == n, ErrorKind::DimensionMismatch, "vector dimension differs from metric");
  Matrix M = Matrix::Zero(n, n);
  for (int y = 0; y < n; ++y)
    for (int b = 0; b < n; ++b) {
      if (x(b) == 0.0) continue;
      for (int c = 0; c < n; ++c) {
        if (x(c) == 0.0) continue;
        const double w = x(b) * x(c);
        for (int z = 0; z < n; ++z) M(y, z) += w * R(y, b, c, z);
      }
    }
  // g(Jy, z) = y^T J^T G z = M(y, z)  =>  J = G^{-1} M^T.
  return g.inverse() * M.transpose();
}

double ricci(const Tensor& R, const BilinearForm& g, const Vector& x) {
  return jacobi(R, g, x).trace();
}

Endomorphism curvature_operator(const Tensor& R, const BilinearForm& g, const Vector& x,
                                const Vector& y) {
  check_operator_inputs(R, g);
  const int n = g.dim();
  require(x.size() == n && y.size() == n, ErrorKind::DimensionMismatch,
          "vectors must match the metric dimension");
  Matrix N = Matrix::Zero(n, n);
  for (int a = 0; a < n; ++a) {
    if (x(a) == 0.0) continue;
    for (int b = 0; b < n; ++b) {
      const double w = x(a) * y(b);
      if (w == 0.0) continue;
      for (int z = 0; z < n; ++z)
        for (int v = 0; v < n; ++v) N(z, v) += w * R(a, b, z, v);
    }
  }
  return g.inverse() * N.transpose();
}

Endomorphism skew_curvature_operator(const Tensor& R, const BilinearForm& g, const Vector& e1,
                                     const Vector& e2) {
  const double tol = 1e-10;
  require(e1.size() == g.dim() && e2.size() == g.dim(), ErrorKind::DimensionMismatch,
          "plane vectors must match the metric dimension");
  require(std::abs(std::abs(g(e1, e1)) - 1.0) <= tol &&
              std::abs(std::abs(g(e2, e2)) - 1.0) <= tol && std::abs(g(e1, e2)) <= tol,
          ErrorKind::InvalidArgument, "skew curvature operator needs an orthonormal pair");
  return curvature_operator(R, g, e1, e2);
}

std::pair<Vector, Vector> orthonormalize_plane(const BilinearForm& g, const Vector& v1,
                                               const Vector& v2, int orientation) {
  require(v1.size() == g.dim() && v2.size() == g.dim(), ErrorKind::DimensionMismatch,
          "plane vectors must match the metric dimension");
  require(orientation == 1 || orientation == -1, ErrorKind::InvalidArgument,
          "orientation must be +1 or -1");
  const double a = g(v1, v1), b = g(v1, v2), c = g(v2, v2);
  const double det = a * c - b * b;
  const double scale = std::max(1.0, g.matrix().cwiseAbs().maxCoeff()) * v1.squaredNorm() *
                       v2.squaredNorm();
  if (std::abs(det) <= 1e-12 * scale) fail(ErrorKind::DegeneratePlane, "degenerate plane");
  if (det < 0) fail(ErrorKind::IndefinitePlane, "indefinite plane");
  const double sigma = a > 0 ? 1.0 : -1.0;
  Vector e1 = v1 / std::sqrt(std::abs(a));
  Vector w = v2 - sigma * g(v2, e1) * e1;
  Vector e2 = w / std::sqrt(std::abs(g(w, w)));
  if (orientation < 0) e2 = -e2;
  return {e1, e2};
}

std::optional<int> nilpotency_index(const Endomorphism& A, double tol) {
  const double normA = spectral_norm(A);
  if (normA == 0.0) return 1;
  Matrix power = A;
  for (int k = 1; k <= A.rows(); ++k) {
    if (k > 1) power = power * A;
    if (spectral_norm(power) <= tol * std::pow(normA, k)) return k;
  }
  return std::nullopt;
}

std::vector<int> rank_sequence(const Endomorphism& A, double tol) {
  const auto n = static_cast<int>(A.rows());
  std::vector<int> ranks(static_cast<std::size_t>(n), 0);
  const double normA = spectral_norm(A);
  if (normA == 0.0) return ranks;
  Matrix power = A;
  for (int k = 1; k <= n; ++k) {
    if (k > 1) power = power * A;
    Eigen::JacobiSVD<Matrix> svd(power);
    const double threshold = tol * std::pow(normA, k) * n;
    int r = 0;
    for (int i = 0; i < svd.singularValues().size(); ++i)
      if (svd.singularValues()(i) > threshold) ++r;
    ranks[static_cast<std::size_t>(k - 1)] = r;
  }
  return ranks;
}

std::vector<double> characteristic_coefficients(const Endomorphism& A) {
  const auto n = static_cast<std::size_t>(A.rows());
  std::vector<double> traces(n + 1, 0.0), c(n + 1, 0.0);
  Matrix power = Matrix::Identity(A.rows(), A.cols());
  for (std::size_t k = 1; k <= n; ++k) {
    power = power * A;
    traces[k] = power.trace();
  }
  for (std::size_t k = 1; k <= n; ++k) {
    double s = traces[k];
    for (std::size_t i = 1; i < k; ++i) s += c[i] * traces[k - i];
    c[k] = -s / static_cast<double>(k);
  }
  return std::vector<double>(c.begin() + 1, c.end());
}

namespace {

// Columns map an orthonormal frame of g (g = diag(+-1) there) to coordinates.
Matrix orthonormal_frame(const BilinearForm& g) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(g.matrix());
  Matrix B = eig.eigenvectors();
  for (int i = 0; i < B.cols(); ++i) {
    const double lam = std::abs(eig.eigenvalues()(i));
    require(lam > 1e-300, ErrorKind::SingularMatrix, "sampling needs a nondegenerate metric");
    B.col(i) /= std::sqrt(lam);
  }
  return B;
}

Vector raw_draw(Rng& rng, const Matrix& frame, const SamplerConfig& cfg) {
  const auto n = static_cast<int>(frame.rows());
  Vector v = uniform_vector(rng, n, -cfg.box, cfg.box);
  if (uniform(rng, 0.0, 1.0) < cfg.frame_fraction) return frame * v;
  if (uniform(rng, 0.0, 1.0) < cfg.sparse_fraction) {
    for (int i = 0; i < n; ++i)
      if (uniform(rng, 0.0, 1.0) < 0.5) v(i) = 0.0;
  }
  return v;
}

}  // namespace

Vector draw_unit_vector(Rng& rng, const BilinearForm& g, int sign, const SamplerConfig& cfg) {
  require(sign == 1 || sign == -1, ErrorKind::InvalidArgument, "sign must be +1 or -1");
  const Matrix frame = orthonormal_frame(g);
  const double gnorm = std::max(g.matrix().cwiseAbs().maxCoeff(), 1e-300);
  for (int attempt = 0; attempt < cfg.rejection_cap; ++attempt) {
    Vector v = raw_draw(rng, frame, cfg);
    const double q = g(v, v);
    if (sign * q <= 1e-3 * v.squaredNorm() * gnorm) continue;
    return v / std::sqrt(std::abs(q));
  }
  fail(ErrorKind::SamplingFailed, "no unit vector of sign " + std::to_string(sign) +
                                      " after " + std::to_string(cfg.rejection_cap) + " draws");
}

std::vector<Vector> sample_unit_vectors(const BilinearForm& g, int sign,
                                        const SamplerConfig& cfg) {
  require(cfg.count >= 1, ErrorKind::InvalidArgument, "sample count must be positive");
  std::vector<Vector> out;
  out.reserve(static_cast<std::size_t>(cfg.count));
  for (int i = 0; i < cfg.count; ++i) {
    Rng rng = substream(cfg.seed, static_cast<std::uint64_t>(i));
    out.push_back(draw_unit_vector(rng, g, sign, cfg));
  }
  return out;
}

std::pair<Vector, Vector> draw_plane(Rng& rng, const BilinearForm& g, int sign,
                                     const SamplerConfig& cfg) {
  require(sign == 1 || sign == -1, ErrorKind::InvalidArgument, "sign must be +1 or -1");
  const Matrix frame = orthonormal_frame(g);
  const double gnorm = std::max(g.matrix().cwiseAbs().maxCoeff(), 1e-300);
  for (int attempt = 0; attempt < cfg.rejection_cap; ++attempt) {
    const Vector v1 = raw_draw(rng, frame, cfg);
    const Vector v2 = raw_draw(rng, frame, cfg);
    const double a = g(v1, v1), b = g(v1, v2), c = g(v2, v2);
    const double scale = 1e-3 * gnorm;
    if (sign * a <= scale * v1.squaredNorm() || sign * c <= scale * v2.squaredNorm()) continue;
    if (a * c - b * b <= scale * scale * v1.squaredNorm() * v2.squaredNorm()) continue;
    return orthonormalize_plane(g, v1, v2, 1);
  }
  fail(ErrorKind::SamplingFailed, "no definite plane of sign " + std::to_string(sign) +
                                      " after " + std::to_string(cfg.rejection_cap) + " draws");
}

namespace {

bool same_jordan_data(const ProbeSample& a, const ProbeSample& b, double scale_a,
                      double scale_b, const ProbeOptions& opt) {
  if (a.ranks != b.ranks) return false;
  for (std::size_t k = 0; k < a.charpoly.size(); ++k) {
    const double s = std::pow(std::max({1.0, scale_a, scale_b}), static_cast<double>(k + 1));
    if (std::abs(a.charpoly[k] - b.charpoly[k]) > opt.charpoly_tol * s) return false;
  }
  return true;
}

template <class Draw>
ProbeVerdict run_probe(const FamilySpec& spec, const std::vector<Vector>& points,
                       const SamplerConfig& cfg, const ProbeOptions& opt, Draw&& draw) {
  require(!points.empty(), ErrorKind::InvalidArgument, "probe needs at least one point");
  require(cfg.count >= 2, ErrorKind::InvalidArgument, "probe needs at least two samples");
  std::vector<CurvaturePackage> pkgs;
  pkgs.reserve(points.size());
  for (const auto& P : points) pkgs.push_back(curvature_package(spec, P, 0));

  ProbeVerdict verdict;
  ProbeSample first;
  double first_scale = 0.0;
  const int cap = opt.search_witness ? 10 * cfg.count : cfg.count;
  for (int i = 0; i < cap; ++i) {
    if (i >= cfg.count && !verdict.constant) break;
    const auto pi = static_cast<std::size_t>(i) % points.size();
    Rng rng = substream(cfg.seed, static_cast<std::uint64_t>(i));
    ProbeSample s;
    s.point_index = static_cast<int>(pi);
    const Endomorphism A = draw(rng, pkgs[pi], s.vectors);
    s.ranks = rank_sequence(A, opt.rank_tol);
    s.charpoly = characteristic_coefficients(A);
    const double scale = spectral_norm(A);
    ++verdict.samples;
    if (i == 0) {
      first = s;
      first_scale = scale;
      verdict.ranks = s.ranks;
      continue;
    }
    if (verdict.constant && !same_jordan_data(first, s, first_scale, scale, opt)) {
      verdict.constant = false;
      verdict.witness = std::make_pair(first, s);
    }
  }
  return verdict;
}

}  // namespace

ProbeVerdict jordan_probe(const FamilySpec& spec, const std::vector<Vector>& points, int sign,
                          const SamplerConfig& cfg, const ProbeOptions& opt) {
  return run_probe(spec, points, cfg, opt,
                   [&](Rng& rng, const CurvaturePackage& pkg, std::vector<Vector>& used) {
                     Vector x = draw_unit_vector(rng, pkg.g, sign, cfg);
                     used = {x};
                     return jacobi(pkg.R, pkg.g, x);
                   });
}

ProbeVerdict ip_probe(const FamilySpec& spec, const std::vector<Vector>& points, int sign,
                      const SamplerConfig& cfg, const ProbeOptions& opt) {
  return run_probe(spec, points, cfg, opt,
                   [&](Rng& rng, const CurvaturePackage& pkg, std::vector<Vector>& used) {
                     auto [e1, e2] = draw_plane(rng, pkg.g, sign, cfg);
                     used = {e1, e2};
                     return skew_curvature_operator(pkg.R, pkg.g, e1, e2);
                   });
}

namespace {

nlohmann::json sample_json(const ProbeSample& s) {
  nlohmann::json j;
  j["point_index"] = s.point_index;
  auto vs = nlohmann::json::array();
  for (const auto& v : s.vectors) vs.push_back(std::vector<double>(v.data(), v.data() + v.size()));
  j["vectors"] = vs;
  j["ranks"] = s.ranks;
  j["charpoly"] = s.charpoly;
  return j;
}

}  // namespace

nlohmann::json to_json(const ProbeVerdict& v) {
  nlohmann::json j;
  j["constant"] = v.constant;
  j["samples"] = v.samples;
  j["ranks"] = v.ranks;
  if (v.witness) j["witness"] = {sample_json(v.witness->first), sample_json(v.witness->second)};
  return j;
}

}  // namespace curvhom
