#pragma once

// Coordinate formulas shared by the double-valued API and the jet path.
// Arrays are flat row-major over [0, n)^rank; the connection is stored as
// second[(i*n + j)*n + k] = Gamma_ij^k and first[(i*n + j)*n + k] = Gamma_ijk.

#include <cstddef>
#include <vector>

#include "curvhom/jet.hpp"

namespace curvhom::detail {

inline bool is_zero_value(double v) { return v == 0.0; }
inline bool is_zero_value(const Jet& j) { return j.is_zero(); }

inline void fma_into(double& acc, double a, double b, double s) { acc += s * a * b; }
inline void fma_into(Jet& acc, const Jet& a, const Jet& b, double s) {
  acc.add_product(a, b, s);
}

inline std::size_t ipow(int n, int k) {
  std::size_t r = 1;
  for (int i = 0; i < k; ++i) r *= static_cast<std::size_t>(n);
  return r;
}

/// Gamma_ijk = 1/2 (d_i g_jk + d_j g_ik - d_k g_ij), with dg[(a*n+b)*n+c] = d_c g_ab.
template <class T>
std::vector<T> first_kind(int n, const std::vector<T>& dg) {
  const auto N = static_cast<std::size_t>(n);
  auto at = [&](std::size_t a, std::size_t b, std::size_t c) -> const T& {
    return dg[(a * N + b) * N + c];
  };
  std::vector<T> out;
  out.reserve(N * N * N);
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j)
      for (std::size_t k = 0; k < N; ++k) {
        T v = at(j, k, i);
        v += at(i, k, j);
        v -= at(i, j, k);
        v *= 0.5;
        out.push_back(std::move(v));
      }
  return out;
}

/// Gamma_ij^k = sum_l g^{kl} Gamma_ijl.
template <class T>
std::vector<T> second_kind(int n, const std::vector<T>& ginv, const std::vector<T>& first,
                           const T& zero) {
  const auto N = static_cast<std::size_t>(n);
  std::vector<T> out(N * N * N, zero);
  for (std::size_t k = 0; k < N; ++k)
    for (std::size_t l = 0; l < N; ++l) {
      const T& gi = ginv[k * N + l];
      if (is_zero_value(gi)) continue;
      for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) {
          const T& f = first[(i * N + j) * N + l];
          if (is_zero_value(f)) continue;
          fma_into(out[(i * N + j) * N + k], gi, f, 1.0);
        }
    }
  return out;
}

/// R_abcd = d_a Gamma_bcd - d_b Gamma_acd - Gamma_bc^e Gamma_ade + Gamma_ac^e Gamma_bde,
/// the component form of g((nabla_a nabla_b - nabla_b nabla_a) d_c, d_d).
/// dfirst[((a*n+b)*n+c)*n+d] = d_a Gamma_bcd.
template <class T>
std::vector<T> riemann_kernel(int n, const std::vector<T>& dfirst, const std::vector<T>& first,
                              const std::vector<T>& second) {
  const auto N = static_cast<std::size_t>(n);
  auto idx4 = [N](std::size_t a, std::size_t b, std::size_t c, std::size_t d) {
    return ((a * N + b) * N + c) * N + d;
  };
  std::vector<T> R;
  R.reserve(N * N * N * N);
  for (std::size_t a = 0; a < N; ++a)
    for (std::size_t b = 0; b < N; ++b)
      for (std::size_t c = 0; c < N; ++c)
        for (std::size_t d = 0; d < N; ++d) {
          T v = dfirst[idx4(a, b, c, d)];
          v -= dfirst[idx4(b, a, c, d)];
          R.push_back(std::move(v));
        }
  for (std::size_t p = 0; p < N; ++p)
    for (std::size_t c = 0; c < N; ++c)
      for (std::size_t e = 0; e < N; ++e) {
        const T& g2 = second[(p * N + c) * N + e];
        if (is_zero_value(g2)) continue;
        for (std::size_t q = 0; q < N; ++q)
          for (std::size_t d = 0; d < N; ++d) {
            const T& g1 = first[(q * N + d) * N + e];
            if (is_zero_value(g1)) continue;
            // p plays b in the first product and a in the second.
            fma_into(R[idx4(q, p, c, d)], g2, g1, -1.0);
            fma_into(R[idx4(p, q, c, d)], g2, g1, 1.0);
          }
      }
  return R;
}

/// Covariant derivative of an all-covariant rank-k tensor t, given its
/// coordinate partials dt (rank k+1, last slot is the direction):
///   (nabla t)(i_1..i_k; e) = d_e t(i_1..i_k) - sum_s sum_f Gamma_{e i_s}^f t(..f at s..).
template <class T>
std::vector<T> covariant_derivative_kernel(int n, int rank, const std::vector<T>& t,
                                           const std::vector<T>& dt,
                                           const std::vector<T>& second) {
  const auto N = static_cast<std::size_t>(n);
  std::vector<T> out = dt;
  for (std::size_t e = 0; e < N; ++e)
    for (std::size_t a = 0; a < N; ++a)
      for (std::size_t f = 0; f < N; ++f) {
        const T& gam = second[(e * N + a) * N + f];
        if (is_zero_value(gam)) continue;
        for (int s = 0; s < rank; ++s) {
          const std::size_t hi_count = ipow(n, s);
          const std::size_t lo_count = ipow(n, rank - 1 - s);
          for (std::size_t hi = 0; hi < hi_count; ++hi)
            for (std::size_t lo = 0; lo < lo_count; ++lo) {
              const T& tv = t[(hi * N + f) * lo_count + lo];
              if (is_zero_value(tv)) continue;
              const std::size_t base = (hi * N + a) * lo_count + lo;
              fma_into(out[base * N + e], gam, tv, -1.0);
            }
        }
      }
  return out;
}

}  // namespace curvhom::detail
