#include "oracles.hpp"

#include <algorithm>
#include <cmath>

#include "curvhom/curvature.hpp"

namespace curvhom::testing {

namespace {

constexpr double kW1[4] = {1.0, -8.0, 8.0, -1.0};
constexpr int kS1[4] = {-2, -1, 1, 2};

Matrix shifted_metric(const FamilySpec& spec, const Vector& P, int c, double dc, int d = -1,
                      double dd = 0.0) {
  Vector Q = P;
  Q(c) += dc;
  if (d >= 0) Q(d) += dd;
  return metric_at(spec, Q).matrix();
}

}  // namespace

Tensor fd_metric_first(const FamilySpec& spec, const Vector& P, double h) {
  const int n = spec.dim();
  Tensor out = Tensor::covariant(n, 3);
  for (int c = 0; c < n; ++c) {
    Matrix acc = Matrix::Zero(n, n);
    for (int k = 0; k < 4; ++k) acc += kW1[k] * shifted_metric(spec, P, c, kS1[k] * h);
    acc /= 12.0 * h;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) out(a, b, c) = acc(a, b);
  }
  return out;
}

Tensor fd_metric_second(const FamilySpec& spec, const Vector& P, double h) {
  const int n = spec.dim();
  Tensor out = Tensor::covariant(n, 4);
  const Matrix g0 = metric_at(spec, P).matrix();
  for (int c = 0; c < n; ++c)
    for (int d = c; d < n; ++d) {
      Matrix acc = Matrix::Zero(n, n);
      if (c == d) {
        acc = -shifted_metric(spec, P, c, 2 * h) + 16.0 * shifted_metric(spec, P, c, h) -
              30.0 * g0 + 16.0 * shifted_metric(spec, P, c, -h) -
              shifted_metric(spec, P, c, -2 * h);
        acc /= 12.0 * h * h;
      } else {
        for (int i = 0; i < 4; ++i)
          for (int j = 0; j < 4; ++j)
            acc += kW1[i] * kW1[j] * shifted_metric(spec, P, c, kS1[i] * h, d, kS1[j] * h);
        acc /= 144.0 * h * h;
      }
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) out(a, b, c, d) = out(a, b, d, c) = acc(a, b);
    }
  return out;
}

Tensor fd_christoffel(const FamilySpec& spec, const Vector& P, double h) {
  const int n = spec.dim();
  const Tensor dg = fd_metric_first(spec, P, h);
  const Matrix ginv = metric_at(spec, P).matrix().inverse();
  Tensor out(n, {Variance::Covariant, Variance::Covariant, Variance::Contravariant});
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        double s = 0.0;
        for (int m = 0; m < n; ++m)
          s += ginv(c, m) * 0.5 * (dg(m, a, b) + dg(m, b, a) - dg(a, b, m));
        out(a, b, c) = s;
      }
  return out;
}

Tensor fd_riemann(const FamilySpec& spec, const Vector& P, double h_outer, double h_inner) {
  const int n = spec.dim();
  const Tensor G = fd_christoffel(spec, P, h_inner);
  // dG[e](a,b,c) = d_e Gamma_ab^c
  std::vector<Tensor> dG;
  for (int e = 0; e < n; ++e) {
    Tensor acc = Tensor::covariant(n, 3);
    for (int k = 0; k < 4; ++k) {
      Vector Q = P;
      Q(e) += kS1[k] * h_outer;
      const Tensor Gk = fd_christoffel(spec, Q, h_inner);
      for (std::size_t i = 0; i < acc.size(); ++i)
        acc.components()[i] += kW1[k] * Gk.components()[i] / (12.0 * h_outer);
    }
    dG.push_back(std::move(acc));
  }
  const Matrix g = metric_at(spec, P).matrix();
  Tensor R = Tensor::covariant(n, 4);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        Vector up = Vector::Zero(n);
        for (int m = 0; m < n; ++m) {
          up(m) += dG[a](b, c, m) - dG[b](a, c, m);
          for (int k = 0; k < n; ++k) up(m) += G(b, c, k) * G(a, k, m) - G(a, c, k) * G(b, k, m);
        }
        const Vector low = g * up;
        for (int d = 0; d < n; ++d) R(a, b, c, d) = low(d);
      }
  return R;
}

Tensor fd_nabla_riemann(const FamilySpec& spec, const Vector& P, double h) {
  const int n = spec.dim();
  const Tensor R = fd_riemann(spec, P);
  const Tensor G = fd_christoffel(spec, P);
  std::vector<Tensor> dR;
  for (int e = 0; e < n; ++e) {
    Tensor acc = Tensor::covariant(n, 4);
    for (int k = 0; k < 4; ++k) {
      Vector Q = P;
      Q(e) += kS1[k] * h;
      const Tensor Rk = fd_riemann(spec, Q);
      for (std::size_t i = 0; i < acc.size(); ++i)
        acc.components()[i] += kW1[k] * Rk.components()[i] / (12.0 * h);
    }
    dR.push_back(std::move(acc));
  }
  Tensor out = Tensor::covariant(n, 5);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d)
          for (int e = 0; e < n; ++e) {
            double s = dR[e](a, b, c, d);
            for (int m = 0; m < n; ++m)
              s -= G(e, a, m) * R(m, b, c, d) + G(e, b, m) * R(a, m, c, d) +
                   G(e, c, m) * R(a, b, m, d) + G(e, d, m) * R(a, b, c, m);
            out(a, b, c, d, e) = s;
          }
  return out;
}

double fd_nabla2_entry(const FamilySpec& spec, const Vector& P, std::array<int, 6> idx,
                       double h) {
  const int n = spec.dim();
  const auto [a, b, c, d, e, f] = idx;
  const Tensor N0 = *curvature_package(spec, P, 1).nablaR;
  const Tensor G = fd_christoffel(spec, P);
  double s = 0.0;
  for (int k = 0; k < 4; ++k) {
    Vector Q = P;
    Q(f) += kS1[k] * h;
    s += kW1[k] * (*curvature_package(spec, Q, 1).nablaR)(a, b, c, d, e);
  }
  s /= 12.0 * h;
  for (int m = 0; m < n; ++m)
    s -= G(f, a, m) * N0(m, b, c, d, e) + G(f, b, m) * N0(a, m, c, d, e) +
         G(f, c, m) * N0(a, b, m, d, e) + G(f, d, m) * N0(a, b, c, m, e) +
         G(f, e, m) * N0(a, b, c, d, m);
  return s;
}

double scaled_diff(const Tensor& a, const Tensor& b) {
  return max_abs_diff(a, b) / std::max(1.0, b.max_abs());
}

double jacobi_defect(const Matrix& J, const BilinearForm& g, const Vector& x) {
  const Matrix& G = g.matrix();
  const double adj = max_abs(G * J - J.transpose() * G);
  return std::max(adj, (J * x).cwiseAbs().maxCoeff());
}

}  // namespace curvhom::testing
