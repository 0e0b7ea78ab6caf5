#include "curvhom/models.hpp"

#include <algorithm>
#include <cmath>

#include "curvhom/random.hpp"
#include "curvhom/symmetry.hpp"

namespace curvhom {

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::U1p: return "U1p";
    case ModelKind::U2s: return "U2s";
    case ModelKind::U3r: return "U3r";
    case ModelKind::U3r1: return "U3r1";
  }
  return "unknown";
}

ModelKind model_for(FamilyKind kind, int order) {
  switch (kind) {
    case FamilyKind::One: return ModelKind::U1p;
    case FamilyKind::Two: return ModelKind::U2s;
    case FamilyKind::Three: return order >= 1 ? ModelKind::U3r1 : ModelKind::U3r;
  }
  fail(ErrorKind::InvalidArgument, "unknown family");
}

namespace {

std::vector<std::string> indexed(const std::string& stem, int n) {
  std::vector<std::string> out;
  for (int i = 1; i <= n; ++i) out.push_back(stem + std::to_string(i));
  return out;
}

std::vector<std::string> concat(std::initializer_list<std::vector<std::string>> parts) {
  std::vector<std::string> out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

}  // namespace

ModelSpace build_model(ModelKind which, int size) {
  require(size >= 2, ErrorKind::InvalidArgument, "model size must be at least 2");
  ModelSpace m;
  m.kind = which;
  m.size = size;
  switch (which) {
    case ModelKind::U1p: {
      const int p = size, n = 2 * p;
      Matrix g = Matrix::Zero(n, n);
      for (int i = 0; i < p; ++i) g(i, p + i) = g(p + i, i) = 1.0;
      m.g = BilinearForm(g);
      m.A = Tensor::covariant(n, 4);
      for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j)
          for (int k = 0; k < p; ++k)
            for (int l = 0; l < p; ++l)
              m.A(i, j, k, l) = (i == l && j == k ? 1.0 : 0.0) - (i == k && j == l ? 1.0 : 0.0);
      m.labels = concat({indexed("X", p), indexed("Y", p)});
      break;
    }
    case ModelKind::U2s: {
      const int s = size, n = 3 * s;
      const Coords2 c{s};
      Matrix g = Matrix::Zero(n, n);
      for (int i = 0; i < s; ++i) {
        g(c.u(i), c.v(i)) = g(c.v(i), c.u(i)) = 1.0;
        g(c.t(i), c.t(i)) = -1.0;
      }
      m.g = BilinearForm(g);
      m.A = Tensor::covariant(n, 4);
      for (int i = 0; i < s; ++i)
        for (int j = 0; j < s; ++j)
          for (int k = 0; k < s; ++k)
            for (int l = 0; l < s; ++l) {
              const double v =
                  (i == l && j == k ? 1.0 : 0.0) - (i == k && j == l ? 1.0 : 0.0);
              if (v != 0.0) set_with_images(m.A, {c.u(i), c.u(j), c.u(k), c.t(l)}, v);
            }
      m.labels = concat({indexed("U", s), indexed("T", s), indexed("V", s)});
      break;
    }
    case ModelKind::U3r:
    case ModelKind::U3r1: {
      const int r = size, n = 2 * r + 2;
      const Coords3 c{r};
      Matrix g = Matrix::Zero(n, n);
      g(c.x(), c.y()) = g(c.y(), c.x()) = 1.0;
      for (int i = 0; i < r; ++i) g(c.u(i), c.v(i)) = g(c.v(i), c.u(i)) = 1.0;
      m.g = BilinearForm(g);
      m.A = Tensor::covariant(n, 4);
      set_with_images(m.A, {c.x(), c.u(r - 1), c.u(r - 1), c.x()}, 1.0);
      for (int i = 0; i + 1 < r; ++i) set_with_images(m.A, {c.x(), c.u(i), c.v(i + 1), c.x()}, 1.0);
      if (which == ModelKind::U3r1) {
        Tensor A1 = Tensor::covariant(n, 5);
        set_with_images(A1, {c.x(), c.u(r - 1), c.u(r - 1), c.x(), c.u(r - 1)}, 1.0);
        m.A1 = std::move(A1);
      }
      m.labels = concat({indexed("U", r), indexed("V", r), {"X", "Y"}});
      break;
    }
  }
  return m;
}

Tensor curvature_from_bilinear(const BilinearForm& phi) {
  const int n = phi.dim();
  Tensor R = Tensor::covariant(n, 4);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) R(a, b, c, d) = phi(a, d) * phi(b, c) - phi(a, c) * phi(b, d);
  return R;
}

NormalizedBasis normalize_family1(const FamilySpec& spec, const Vector& P) {
  require(spec.kind() == FamilyKind::One, ErrorKind::InvalidArgument,
          "normalize_family1 needs a family-1 spec");
  check_point(spec, P);
  const int p = spec.size(), n = 2 * p;
  const auto Hv = spec.f().hessian(std::span<const double>(P.data(), static_cast<std::size_t>(p)));
  Matrix H(p, p);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j) H(i, j) = Hv[static_cast<std::size_t>(i * p + j)];
  Eigen::LLT<Matrix> llt(H);
  require(llt.info() == Eigen::Success && BilinearForm::symmetrized(H).positive_definite(),
          ErrorKind::NotPositiveDefinite, "Hessian of f is not positive definite at P");
  const Matrix L = llt.matrixL();
  const Matrix xi = L.triangularView<Eigen::Lower>().solve(Matrix::Identity(p, p));

  Matrix B = Matrix::Zero(n, n);
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j < p; ++j) {
      B(j, i) = xi(i, j);         // X_i
      B(p + j, p + i) = L(j, i);  // Y_i
    }
  }
  const Matrix G = metric_at(spec, P).matrix();
  const Matrix c = B.leftCols(p).transpose() * G * B.leftCols(p);
  B.leftCols(p) -= 0.5 * B.rightCols(p) * c;

  NormalizedBasis out;
  out.point = P;
  out.labels = build_model(ModelKind::U1p, p).labels;
  out.phi = LinearMap(B);
  return out;
}

NormalizedBasis normalize_family2(const FamilySpec& spec, const Vector& P) {
  require(spec.kind() == FamilyKind::Two, ErrorKind::InvalidArgument,
          "normalize_family2 needs a family-2 spec");
  check_point(spec, P);
  const int s = spec.size(), n = 3 * s;
  const Coords2 c{s};
  const BilinearForm g = metric_at(spec, P);
  double u2 = 0.0;
  for (int i = 0; i < s; ++i) u2 += P(c.u(i)) * P(c.u(i));
  Matrix B = Matrix::Zero(n, n);
  for (int i = 0; i < s; ++i) {
    const double fpp = spec.fs()[static_cast<std::size_t>(i)].derivative(P(c.u(i)), 2);
    const double eps = -0.5 * fpp - 0.25 * u2;
    const double rho = 0.5 * (eps * eps - g(c.u(i), c.u(i)));
    B(c.u(i), c.u(i)) = 1.0;
    B(c.t(i), c.u(i)) = eps;
    B(c.v(i), c.u(i)) = rho;
    B(c.t(i), c.t(i)) = 1.0;
    B(c.v(i), c.t(i)) = eps;
    B(c.v(i), c.v(i)) = 1.0;
  }
  NormalizedBasis out;
  out.point = P;
  out.labels = build_model(ModelKind::U2s, s).labels;
  out.phi = LinearMap(B);
  return out;
}

NormalizedBasis normalize_family3(const FamilySpec& spec, const Vector& P, int order) {
  require(spec.kind() == FamilyKind::Three, ErrorKind::InvalidArgument,
          "normalize_family3 needs a family-3 spec");
  require(order == 0 || order == 1, ErrorKind::InvalidArgument, "order must be 0 or 1");
  check_point(spec, P);
  const int r = spec.size(), n = 2 * r + 2;
  const Coords3 c{r};
  const double ur = P(c.u(r - 1));
  const double d2 = spec.psi().derivative(ur, 2);
  require(d2 > 0.0, ErrorKind::InvalidArgument, "normalization needs psi'' > 0 at P");
  std::vector<double> eps(static_cast<std::size_t>(r));
  double e0 = 1.0;
  if (order == 0) {
    std::fill(eps.begin(), eps.end(), 1.0 / std::sqrt(d2));
  } else {
    const double d3 = spec.psi().derivative(ur, 3);
    require(d3 != 0.0, ErrorKind::InvalidArgument, "order-1 normalization needs psi''' != 0 at P");
    eps.back() = d2 / d3;
    e0 = 1.0 / std::sqrt(eps.back() * eps.back() * d2);
    for (int i = r - 2; i >= 0; --i)
      eps[static_cast<std::size_t>(i)] = eps[static_cast<std::size_t>(i + 1)] / (e0 * e0);
  }
  const double gxx = metric_at(spec, P)(c.x(), c.x());
  Matrix B = Matrix::Zero(n, n);
  for (int i = 0; i < r; ++i) {
    B(c.u(i), c.u(i)) = eps[static_cast<std::size_t>(i)];
    B(c.v(i), c.v(i)) = 1.0 / eps[static_cast<std::size_t>(i)];
  }
  B(c.x(), c.x()) = e0;
  B(c.y(), c.x()) = -0.5 * gxx * e0;
  B(c.y(), c.y()) = 1.0 / e0;
  NormalizedBasis out;
  out.point = P;
  out.labels = build_model(model_for(FamilyKind::Three, order), r).labels;
  out.phi = LinearMap(B);
  return out;
}

NormalizedBasis normalize(const FamilySpec& spec, const Vector& P, int order) {
  switch (spec.kind()) {
    case FamilyKind::One: return normalize_family1(spec, P);
    case FamilyKind::Two: return normalize_family2(spec, P);
    case FamilyKind::Three: return normalize_family3(spec, P, order);
  }
  fail(ErrorKind::InvalidArgument, "unknown family");
}

bool ModelMatchReport::pass() const {
  return g_deviation <= tol && A_deviation <= tol && (!A1_deviation || *A1_deviation <= tol);
}

ModelMatchReport verify_model_match(const NormalizedBasis& basis, const CurvaturePackage& pkg,
                                    const ModelSpace& model, double tol) {
  require(basis.phi.source_dim() == model.dim() && basis.phi.target_dim() == pkg.g.dim(),
          ErrorKind::DimensionMismatch, "basis, package and model dimensions differ");
  ModelMatchReport rep;
  rep.tol = tol;
  rep.g_deviation = max_abs_diff(pullback(to_tensor(pkg.g), basis.phi), to_tensor(model.g));
  rep.A_deviation = max_abs_diff(pullback(pkg.R, basis.phi), model.A);
  if (model.A1) {
    require(pkg.nablaR.has_value(), ErrorKind::InvalidArgument,
            "matching a 1-model needs nabla R in the curvature package");
    rep.A1_deviation = max_abs_diff(pullback(*pkg.nablaR, basis.phi), *model.A1);
  }
  return rep;
}

Matrix annihilator(const Tensor& A, double tol) {
  require(A.rank() == 4, ErrorKind::DimensionMismatch, "annihilator needs a rank-4 tensor");
  const int n = A.dim();
  Matrix M(n * n * n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int e = 0; e < n; ++e) M((i * n + j) * n + k, e) = A(i, j, k, e);
  if (max_abs(M) == 0.0) return Matrix::Identity(n, n);
  return kernel_basis(M, tol);
}

Tensor reduced_model(ReducedModel which, int size) {
  require(size >= 2, ErrorKind::InvalidArgument, "model size must be at least 2");
  if (which == ReducedModel::B1p) {
    const int p = size;
    Tensor B = Tensor::covariant(p, 4);
    for (int i = 0; i < p; ++i)
      for (int j = 0; j < p; ++j)
        for (int k = 0; k < p; ++k)
          for (int l = 0; l < p; ++l)
            B(i, j, k, l) = (i == l && j == k ? 1.0 : 0.0) - (i == k && j == l ? 1.0 : 0.0);
    return B;
  }
  const int s = size;
  Tensor B = Tensor::covariant(2 * s, 4);
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < s; ++j)
      for (int k = 0; k < s; ++k)
        for (int l = 0; l < s; ++l) {
          const double v = (i == l && j == k ? 1.0 : 0.0) - (i == k && j == l ? 1.0 : 0.0);
          if (v != 0.0) set_with_images(B, {i, j, k, s + l}, v);
        }
  return B;
}

namespace {

// C(a,b) = B(xi1, xi2, e_a, e_b) when first_pair, else B(xi1, e_a, e_b, xi2).
Matrix partial_evaluation(const Tensor& B, const Vector& xi1, const Vector& xi2, bool first_pair) {
  const int n = B.dim();
  Matrix C = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    if (xi1(i) == 0.0) continue;
    for (int j = 0; j < n; ++j) {
      const double w = xi1(i) * xi2(j);
      if (w == 0.0) continue;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          C(a, b) += w * (first_pair ? B(i, j, a, b) : B(i, a, b, j));
    }
  }
  return C;
}

}  // namespace

double reduced_hypothesis_residual(ReducedModel which, const Tensor& B, const Vector& xi1,
                                   const Vector& xi2) {
  double r = max_abs(partial_evaluation(B, xi1, xi2, true));
  if (which == ReducedModel::B2s) r = std::max(r, max_abs(partial_evaluation(B, xi1, xi2, false)));
  return r;
}

bool IrreducibilityVerdict::pass() const {
  return max_hypothesis_residual <= tol && max_conclusion_residual <= tol &&
         generic_violations == trials;
}

IrreducibilityVerdict irreducibility_witness_probe(ReducedModel which, int size,
                                                   std::uint64_t seed, int trials, double tol) {
  require(trials >= 1, ErrorKind::InvalidArgument, "trials must be positive");
  const Tensor B = reduced_model(which, size);
  const int n = B.dim();
  IrreducibilityVerdict v;
  v.trials = trials;
  v.tol = tol;
  for (int t = 0; t < trials; ++t) {
    Rng rng = substream(seed, static_cast<std::uint64_t>(t));
    Vector xi1, xi2;
    if (which == ReducedModel::B1p) {
      xi1 = uniform_vector(rng, n, -1.0, 1.0);
      const double lambda = uniform(rng, -3.0, 3.0);
      xi2 = lambda * xi1;
    } else {
      xi1 = Vector::Zero(n);
      xi2 = Vector::Zero(n);
      xi1.tail(size) = uniform_vector(rng, size, -1.0, 1.0);
      xi2.tail(size) = uniform_vector(rng, size, -1.0, 1.0);
    }
    v.max_hypothesis_residual =
        std::max(v.max_hypothesis_residual, reduced_hypothesis_residual(which, B, xi1, xi2));
    if (which == ReducedModel::B1p) {
      const double lambda = xi2.dot(xi1) / xi1.squaredNorm();
      v.lambdas.push_back(lambda);
      v.max_conclusion_residual =
          std::max(v.max_conclusion_residual, (xi2 - lambda * xi1).cwiseAbs().maxCoeff());
    } else {
      v.max_conclusion_residual =
          std::max({v.max_conclusion_residual, xi1.head(size).cwiseAbs().maxCoeff(),
                    xi2.head(size).cwiseAbs().maxCoeff()});
    }
    const Vector g1 = uniform_vector(rng, n, -1.0, 1.0);
    const Vector g2 = uniform_vector(rng, n, -1.0, 1.0);
    if (reduced_hypothesis_residual(which, B, g1, g2) > tol) ++v.generic_violations;
  }
  return v;
}

InjectivityReport bilinear_injectivity_probe(int dim, int pairs, std::uint64_t seed) {
  require(dim >= 1 && pairs >= 1, ErrorKind::InvalidArgument, "dim and pairs must be positive");
  InjectivityReport rep;
  rep.min_form_distance = std::numeric_limits<double>::infinity();
  rep.min_curvature_distance = std::numeric_limits<double>::infinity();
  auto random_pd = [dim](Rng& rng) {
    Matrix Q(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) Q(i, j) = uniform(rng, -1.0, 1.0);
    return BilinearForm::symmetrized(Q * Q.transpose() + 0.1 * Matrix::Identity(dim, dim));
  };
  for (int k = 0; k < pairs; ++k) {
    Rng rng = substream(seed, static_cast<std::uint64_t>(k));
    const BilinearForm a = random_pd(rng);
    BilinearForm b = random_pd(rng);
    while (max_abs(a.matrix() - b.matrix()) <= 1e-3) b = random_pd(rng);
    rep.min_form_distance = std::min(rep.min_form_distance, max_abs(a.matrix() - b.matrix()));
    rep.min_curvature_distance =
        std::min(rep.min_curvature_distance,
                 max_abs_diff(curvature_from_bilinear(a), curvature_from_bilinear(b)));
    ++rep.pairs;
  }
  return rep;
}

nlohmann::json to_json(const NormalizedBasis& b) {
  nlohmann::json j;
  j["point"] = std::vector<double>(b.point.data(), b.point.data() + b.point.size());
  for (std::size_t k = 0; k < b.labels.size(); ++k) {
    const Vector col = b.phi.matrix().col(static_cast<int>(k));
    j["basis"][b.labels[k]] = std::vector<double>(col.data(), col.data() + col.size());
  }
  return j;
}

nlohmann::json to_json(const ModelMatchReport& r) {
  nlohmann::json j;
  j["g_deviation"] = r.g_deviation;
  j["A_deviation"] = r.A_deviation;
  if (r.A1_deviation) j["A1_deviation"] = *r.A1_deviation;
  j["tol"] = r.tol;
  j["pass"] = r.pass();
  return j;
}

}  // namespace curvhom
