#include "curvhom/geodesics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "curvhom/curvature.hpp"
#include "curvhom/error.hpp"

namespace curvhom {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

TriangularOrder structural_order(const FamilySpec& spec) {
  TriangularOrder o;
  const int n = spec.dim();
  const int m = spec.size();
  auto range = [](int from, int count) {
    std::vector<int> out(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = from + i;
    return out;
  };
  switch (spec.kind()) {
    case FamilyKind::One:
      o.blocks = {range(0, m), range(m, m)};
      break;
    case FamilyKind::Two:
      o.blocks = {range(0, m), range(m, m), range(2 * m, m)};
      break;
    case FamilyKind::Three: {
      const Coords3 c = spec.coords3();
      o.blocks.push_back({c.x()});
      for (int i = 0; i < m; ++i) o.blocks.push_back({c.u(i)});
      for (int i = m - 1; i >= 0; --i) o.blocks.push_back({c.v(i)});
      o.blocks.push_back({c.y()});
      break;
    }
  }
  for (const auto& b : o.blocks) o.perm.insert(o.perm.end(), b.begin(), b.end());
  o.rank.assign(static_cast<std::size_t>(n), -1);
  for (int i = 0; i < n; ++i) o.rank[static_cast<std::size_t>(o.perm[static_cast<std::size_t>(i)])] = i;
  return o;
}

// Compares Gamma(., ., c) for c in `targets` between the full point and
// copies whose coordinates of rank >= cut are replaced.
std::string check_cut(const FamilySpec& spec, const TriangularOrder& o, const Vector& P,
                      const Tensor& G, const std::vector<int>& targets, int cut, Rng& rng) {
  const int n = spec.dim();
  auto rank = [&](int coord) { return o.rank[static_cast<std::size_t>(coord)]; };
  for (int c : targets)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        if (G(a, b, c) != 0.0 && (rank(a) >= cut || rank(b) >= cut))
          return "Gamma(" + std::to_string(a) + "," + std::to_string(b) + "," +
                 std::to_string(c) + ") feeds z_" + std::to_string(rank(c) + 1) +
                 " from a coordinate at or above the cut";
  for (int mode = 0; mode < 2; ++mode) {
    Vector Q = P;
    for (int i = 0; i < n; ++i)
      if (rank(i) >= cut) Q(i) = mode == 0 ? kNaN : uniform(rng, -3.0, 3.0);
    const Tensor H = christoffel_oracle(spec, Q);
    for (int c : targets)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          if (!(H(a, b, c) == G(a, b, c)))
            return "Gamma(" + std::to_string(a) + "," + std::to_string(b) + "," +
                   std::to_string(c) + ") depends on coordinates at or above z_" +
                   std::to_string(cut + 1) + (mode == 0 ? " (NaN mask)" : " (random shift)");
  }
  return {};
}

struct GridSolution {
  Matrix pos, vel, acc;
  Vector v;
};

// Cumulative integrals I_k = int_0^{t_k} f and J_k = int_0^{t_k} r f(r) dr
// with Simpson at even nodes and a one-interval four-point rule at odd ones.
void cumulative(const std::vector<double>& f, double dt, std::vector<double>& I,
                std::vector<double>& J) {
  const std::size_t N = f.size() - 1;
  std::vector<double> rf(f.size());
  for (std::size_t k = 0; k <= N; ++k) rf[k] = static_cast<double>(k) * dt * f[k];
  auto run = [&](const std::vector<double>& g, std::vector<double>& out) {
    out.assign(N + 1, 0.0);
    // Neumaier-compensated running sum over the Simpson panels.
    double sum = 0.0, comp = 0.0;
    for (std::size_t k = 2; k <= N; k += 2) {
      const double term = dt / 3.0 * (g[k - 2] + 4.0 * g[k - 1] + g[k]);
      const double next = sum + term;
      comp += std::abs(sum) >= std::abs(term) ? (sum - next) + term : (term - next) + sum;
      sum = next;
      out[k] = sum + comp;
    }
    for (std::size_t k = 1; k <= N; k += 2) {
      const std::size_t j = k - 1;
      out[k] = out[j] + (j + 3 <= N
                             ? dt / 24.0 * (9.0 * g[j] + 19.0 * g[j + 1] - 5.0 * g[j + 2] + g[j + 3])
                             : dt / 24.0 * (g[j - 2] - 5.0 * g[j - 1] + 19.0 * g[j] + 9.0 * g[j + 1]));
    }
  };
  run(f, I);
  run(rf, J);
}

// log_mode: `data` is the endpoint Q on [0, T]; otherwise the initial velocity.
GridSolution solve_grid(const FamilySpec& spec, const TriangularOrder& o, const Vector& P,
                        const Vector& data, bool log_mode, double T, int N) {
  const int n = spec.dim();
  const double dt = T / N;
  GridSolution s;
  s.pos = Matrix::Constant(n, N + 1, kNaN);
  s.vel = Matrix::Constant(n, N + 1, kNaN);
  s.acc = Matrix::Constant(n, N + 1, kNaN);
  s.v = Vector::Zero(n);
  std::vector<int> known;
  std::vector<std::vector<double>> h;
  std::vector<double> I, J;
  Vector x(n);
  for (const auto& block : o.blocks) {
    h.assign(block.size(), std::vector<double>(static_cast<std::size_t>(N + 1), 0.0));
    if (!known.empty()) {
      for (int k = 0; k <= N; ++k) {
        x.setConstant(kNaN);
        for (int a : known) x(a) = s.pos(a, k);
        const Tensor G = christoffel_oracle(spec, x);
        for (std::size_t bi = 0; bi < block.size(); ++bi) {
          double sum = 0.0;
          for (int a : known)
            for (int b : known) {
              const double gamma = G(a, b, block[bi]);
              if (gamma != 0.0) sum += gamma * s.vel(a, k) * s.vel(b, k);
            }
          if (!std::isfinite(sum))
            fail(ErrorKind::Convergence,
                 "non-finite geodesic forcing for coordinate " + std::to_string(block[bi]));
          h[bi][static_cast<std::size_t>(k)] = sum;
        }
      }
    }
    for (std::size_t bi = 0; bi < block.size(); ++bi) {
      const int c = block[bi];
      cumulative(h[bi], dt, I, J);
      const auto end = static_cast<std::size_t>(N);
      const double vc = log_mode ? data(c) - P(c) + (T * I[end] - J[end]) : data(c);
      s.v(c) = vc;
      for (int k = 0; k <= N; ++k) {
        const auto kk = static_cast<std::size_t>(k);
        const double t = k * dt;
        s.pos(c, k) = P(c) + vc * t - (t * I[kk] - J[kk]);
        s.vel(c, k) = vc - I[kk];
        s.acc(c, k) = -h[bi][kk];
      }
    }
    known.insert(known.end(), block.begin(), block.end());
  }
  return s;
}

double refinement_error(const GridSolution& coarse, const GridSolution& fine, bool log_mode) {
  double err = 0.0;
  auto rel = [](double a, double b) { return std::abs(a - b) / (1.0 + std::abs(b)); };
  for (Eigen::Index k = 0; k < coarse.pos.cols(); ++k)
    for (Eigen::Index c = 0; c < coarse.pos.rows(); ++c) {
      err = std::max(err, rel(coarse.pos(c, k), fine.pos(c, 2 * k)));
      err = std::max(err, rel(coarse.vel(c, k), fine.vel(c, 2 * k)));
    }
  if (log_mode)
    for (Eigen::Index c = 0; c < coarse.v.size(); ++c)
      err = std::max(err, rel(coarse.v(c), fine.v(c)));
  return err;
}

GridSolution solve_refined(const FamilySpec& spec, const Vector& P, const Vector& data,
                           bool log_mode, double T, double tol, int& intervals) {
  const TriangularOrder o = structural_order(spec);
  int N = 64;
  GridSolution prev = solve_grid(spec, o, P, data, log_mode, T, N);
  double err = 0.0;
  while (2 * N <= kMaxGeodesicIntervals) {
    N *= 2;
    GridSolution cur = solve_grid(spec, o, P, data, log_mode, T, N);
    err = refinement_error(prev, cur, log_mode);
    if (err <= tol) {
      intervals = N;
      return cur;
    }
    prev = std::move(cur);
  }
  fail(ErrorKind::Convergence, "geodesic quadrature did not reach tol " + std::to_string(tol) +
                                   " within 2^20 intervals (last refinement error " +
                                   std::to_string(err) + ")");
}

void check_vectors(const FamilySpec& spec, const Vector& P, const Vector& w) {
  check_point(spec, P);
  if (w.size() != spec.dim())
    fail(ErrorKind::DimensionMismatch, "vector has dimension " + std::to_string(w.size()) +
                                           ", expected " + std::to_string(spec.dim()));
}

Vector geodesic_rhs_acc(const FamilySpec& spec, const Vector& z, const Vector& zd) {
  const Tensor G = christoffel_symbols(spec, z);
  const int n = spec.dim();
  Vector a = Vector::Zero(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double w = zd(i) * zd(j);
      if (w == 0.0) continue;
      for (int k = 0; k < n; ++k) a(k) -= G(i, j, k) * w;
    }
  return a;
}

}  // namespace

std::string triangular_violation(const FamilySpec& spec, const TriangularOrder& order,
                                 const Vector& P, Rng& rng) {
  check_point(spec, P);
  const Tensor G = christoffel_oracle(spec, P);
  for (int c = 0; c < spec.dim(); ++c) {
    auto msg = check_cut(spec, order, P, G, {c}, order.rank[static_cast<std::size_t>(c)], rng);
    if (!msg.empty()) return msg;
  }
  for (const auto& block : order.blocks) {
    auto msg = check_cut(spec, order, P, G, block,
                         order.rank[static_cast<std::size_t>(block.front())], rng);
    if (!msg.empty()) return "block: " + msg;
  }
  return {};
}

TriangularOrder triangular_order(const FamilySpec& spec, int checks, std::uint64_t seed) {
  TriangularOrder o = structural_order(spec);
  for (int i = 0; i < checks; ++i) {
    Rng rng = substream(seed, static_cast<std::uint64_t>(i));
    const Vector P = uniform_vector(rng, spec.dim(), -2.0, 2.0);
    const auto msg = triangular_violation(spec, o, P, rng);
    require(msg.empty(), ErrorKind::InvalidArgument,
            "triangular order fails for " + spec.name() + ": " + msg);
  }
  o.points_checked = checks;
  return o;
}

Geodesic::Geodesic(FamilySpec spec, Vector P, Vector v, double t_max, std::string method,
                   double tol, Matrix pos, Matrix vel, Matrix acc)
    : spec_(std::move(spec)),
      P_(std::move(P)),
      v_(std::move(v)),
      t_max_(t_max),
      method_(std::move(method)),
      tol_(tol),
      pos_(std::move(pos)),
      vel_(std::move(vel)),
      acc_(std::move(acc)) {
  require(pos_.cols() >= 2 && vel_.cols() == pos_.cols() && acc_.cols() == pos_.cols(),
          ErrorKind::InvalidArgument, "geodesic needs matching node arrays");
  require((pos_.col(0) - P_).cwiseAbs().maxCoeff() <= 1e-12 &&
              (vel_.col(0) - v_).cwiseAbs().maxCoeff() <= 1e-12,
          ErrorKind::InvalidArgument, "geodesic does not start at (P, v)");
}

Geodesic::State Geodesic::node(int k) const {
  require(k >= 0 && k <= intervals(), ErrorKind::InvalidArgument, "node index out of range");
  return {pos_.col(k), vel_.col(k)};
}

Geodesic::State Geodesic::at(double t) const {
  if (!(t >= 0.0 && t <= t_max_ * (1.0 + 1e-14)))
    fail(ErrorKind::InvalidArgument, "parameter " + std::to_string(t) + " outside [0, t_max]");
  const int N = intervals();
  const double dt = t_max_ / N;
  const int k = std::min(static_cast<int>(t / dt), N - 1);
  const double s = std::clamp((t - k * dt) / dt, 0.0, 1.0);
  const double s2 = s * s, s3 = s2 * s, s4 = s3 * s, s5 = s4 * s;
  const double h0 = 1 - 10 * s3 + 15 * s4 - 6 * s5;
  const double h1 = s - 6 * s3 + 8 * s4 - 3 * s5;
  const double h2 = 0.5 * s2 - 1.5 * s3 + 1.5 * s4 - 0.5 * s5;
  const double h3 = 0.5 * s3 - s4 + 0.5 * s5;
  const double h4 = -4 * s3 + 7 * s4 - 3 * s5;
  const double h5 = 10 * s3 - 15 * s4 + 6 * s5;
  const double d0 = -30 * s2 + 60 * s3 - 30 * s4;
  const double d1 = 1 - 18 * s2 + 32 * s3 - 15 * s4;
  const double d2 = s - 4.5 * s2 + 6 * s3 - 2.5 * s4;
  const double d3 = 1.5 * s2 - 4 * s3 + 2.5 * s4;
  const double d4 = -12 * s2 + 28 * s3 - 15 * s4;
  const double d5 = 30 * s2 - 60 * s3 + 30 * s4;
  State st;
  st.position = h0 * pos_.col(k) + h1 * dt * vel_.col(k) + h2 * dt * dt * acc_.col(k) +
                h3 * dt * dt * acc_.col(k + 1) + h4 * dt * vel_.col(k + 1) +
                h5 * pos_.col(k + 1);
  st.velocity = (d0 * pos_.col(k) + d1 * dt * vel_.col(k) + d2 * dt * dt * acc_.col(k) +
                 d3 * dt * dt * acc_.col(k + 1) + d4 * dt * vel_.col(k + 1) +
                 d5 * pos_.col(k + 1)) /
                dt;
  return st;
}

Geodesic integrate_recursive(const FamilySpec& spec, const Vector& P, const Vector& v,
                             double t_max, double tol) {
  check_vectors(spec, P, v);
  require(t_max > 0.0 && std::isfinite(t_max), ErrorKind::InvalidArgument,
          "t_max must be positive");
  require(tol > 0.0, ErrorKind::InvalidArgument, "tolerance must be positive");
  int N = 0;
  GridSolution s = solve_refined(spec, P, v, false, t_max, tol, N);
  return Geodesic(spec, P, v, t_max, "recursive", tol, std::move(s.pos), std::move(s.vel),
                  std::move(s.acc));
}

Geodesic integrate_rk4(const FamilySpec& spec, const Vector& P, const Vector& v, double t_max,
                       double step) {
  check_vectors(spec, P, v);
  require(step > 0.0 && t_max > 0.0, ErrorKind::InvalidArgument,
          "step and t_max must be positive");
  const int N = std::max(1, static_cast<int>(std::ceil(t_max / step - 1e-9)));
  const double h = t_max / N;
  const int n = spec.dim();
  Matrix pos(n, N + 1), vel(n, N + 1), acc(n, N + 1);
  Vector z = P, zd = v;
  for (int k = 0; k <= N; ++k) {
    pos.col(k) = z;
    vel.col(k) = zd;
    const Vector a1 = geodesic_rhs_acc(spec, z, zd);
    acc.col(k) = a1;
    if (k == N) break;
    const Vector z2 = z + 0.5 * h * zd, zd2 = zd + 0.5 * h * a1;
    const Vector a2 = geodesic_rhs_acc(spec, z2, zd2);
    const Vector z3 = z + 0.5 * h * zd2, zd3 = zd + 0.5 * h * a2;
    const Vector a3 = geodesic_rhs_acc(spec, z3, zd3);
    const Vector z4 = z + h * zd3, zd4 = zd + h * a3;
    const Vector a4 = geodesic_rhs_acc(spec, z4, zd4);
    z += h / 6.0 * (zd + 2.0 * zd2 + 2.0 * zd3 + zd4);
    zd += h / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4);
  }
  return Geodesic(spec, P, v, t_max, "rk4", step, std::move(pos), std::move(vel), std::move(acc));
}

Vector exp_map(const FamilySpec& spec, const Vector& P, const Vector& v, double tol) {
  check_vectors(spec, P, v);
  int N = 0;
  const GridSolution s = solve_refined(spec, P, v, false, 1.0, tol, N);
  return s.pos.col(s.pos.cols() - 1);
}

Vector log_map(const FamilySpec& spec, const Vector& P, const Vector& Q, double tol) {
  check_vectors(spec, P, Q);
  int N = 0;
  return solve_refined(spec, P, Q, true, 1.0, tol, N).v;
}

Vector geodesic_symmetry(const FamilySpec& spec, const Vector& P, const Vector& Q, double tol) {
  return exp_map(spec, P, -log_map(spec, P, Q, tol), tol);
}

IsometryReport isometry_check(const FamilySpec& spec, const PointMap& map,
                              const std::vector<Vector>& samples, double tol, double step) {
  IsometryReport rep;
  rep.samples = samples;
  rep.tol = tol;
  rep.step = step;
  const int n = spec.dim();
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const Vector& x = samples[i];
    check_point(spec, x);
    Matrix D(n, n);
    for (int j = 0; j < n; ++j) {
      Vector xp = x, xm = x;
      xp(j) += step;
      xm(j) -= step;
      D.col(j) = (map(xp) - map(xm)) / (2.0 * step);
    }
    const Matrix pulled = D.transpose() * metric_at(spec, map(x)).matrix() * D;
    const double dev = (pulled - metric_at(spec, x).matrix()).cwiseAbs().maxCoeff();
    rep.deviations.push_back(dev);
    if (rep.worst_sample < 0 || dev > rep.max_deviation) {
      rep.max_deviation = dev;
      rep.worst_sample = static_cast<int>(i);
    }
  }
  return rep;
}

std::vector<double> energy_along(const Geodesic& gamma, const std::vector<double>& ts) {
  std::vector<double> out;
  out.reserve(ts.size());
  for (double t : ts) {
    const auto st = gamma.at(t);
    out.push_back(metric_at(gamma.spec(), st.position)(st.velocity, st.velocity));
  }
  return out;
}

nlohmann::json trajectory_json(const Geodesic& gamma, int samples) {
  require(samples >= 1, ErrorKind::InvalidArgument, "trajectory needs at least one sample");
  auto rows = nlohmann::json::array();
  auto vec = [](const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); };
  for (int i = 0; i <= samples; ++i) {
    const double t = gamma.t_max() * i / samples;
    const auto st = gamma.at(t);
    rows.push_back({{"t", t},
                    {"position", vec(st.position)},
                    {"velocity", vec(st.velocity)},
                    {"energy", metric_at(gamma.spec(), st.position)(st.velocity, st.velocity)}});
  }
  return rows;
}

nlohmann::json to_json(const TriangularOrder& order) {
  return {{"perm", order.perm}, {"blocks", order.blocks}, {"points_checked", order.points_checked}};
}

nlohmann::json to_json(const IsometryReport& r) {
  nlohmann::json j;
  j["tol"] = r.tol;
  j["step"] = r.step;
  j["max_deviation"] = r.max_deviation;
  j["deviations"] = r.deviations;
  j["pass"] = r.pass();
  if (r.worst_sample >= 0) {
    const Vector& w = r.samples[static_cast<std::size_t>(r.worst_sample)];
    j["witness"] = std::vector<double>(w.data(), w.data() + w.size());
  }
  return j;
}

}  // namespace curvhom
