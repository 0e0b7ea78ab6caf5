#include "curvhom/families.hpp"

#include <cmath>
#include <string>

#include "curvhom/error.hpp"
#include "curvhom/symmetry.hpp"

namespace curvhom {

FamilySpec FamilySpec::family1(int p, MultiProfile f) {
  require(p >= 2, ErrorKind::InvalidArgument, "family 1 needs p >= 2");
  require(f.nvars() == p, ErrorKind::DimensionMismatch,
          "family 1 profile must take p variables");
  FamilySpec s;
  s.kind_ = FamilyKind::One;
  s.size_ = p;
  s.f_ = std::move(f);
  return s;
}

FamilySpec FamilySpec::family2(std::vector<ScalarProfile> f) {
  require(f.size() >= 2, ErrorKind::InvalidArgument, "family 2 needs s >= 2");
  FamilySpec s;
  s.kind_ = FamilyKind::Two;
  s.size_ = static_cast<int>(f.size());
  s.fs_ = std::move(f);
  return s;
}

FamilySpec FamilySpec::family3(int r, ScalarProfile psi) {
  require(r >= 2, ErrorKind::InvalidArgument, "family 3 needs r >= 2");
  FamilySpec s;
  s.kind_ = FamilyKind::Three;
  s.size_ = r;
  s.psi_ = std::move(psi);
  return s;
}

int FamilySpec::dim() const {
  switch (kind_) {
    case FamilyKind::One: return 2 * size_;
    case FamilyKind::Two: return 3 * size_;
    case FamilyKind::Three: return 2 * size_ + 2;
  }
  return 0;
}

std::string FamilySpec::name() const {
  switch (kind_) {
    case FamilyKind::One: return "family1(p=" + std::to_string(size_) + ")";
    case FamilyKind::Two: return "family2(s=" + std::to_string(size_) + ")";
    case FamilyKind::Three: return "family3(r=" + std::to_string(size_) + ")";
  }
  return "";
}

const MultiProfile& FamilySpec::f() const {
  require(kind_ == FamilyKind::One, ErrorKind::InvalidArgument, "not a family 1 spec");
  return f_;
}

const std::vector<ScalarProfile>& FamilySpec::fs() const {
  require(kind_ == FamilyKind::Two, ErrorKind::InvalidArgument, "not a family 2 spec");
  return fs_;
}

const ScalarProfile& FamilySpec::psi() const {
  require(kind_ == FamilyKind::Three, ErrorKind::InvalidArgument, "not a family 3 spec");
  return psi_;
}

void check_point(const FamilySpec& spec, const Vector& P) {
  if (P.size() != spec.dim())
    fail(ErrorKind::DimensionMismatch, "point has " + std::to_string(P.size()) +
                                           " coordinates, " + spec.name() + " needs " +
                                           std::to_string(spec.dim()));
}

namespace {

std::vector<double> x_part(const FamilySpec& spec, const Vector& P) {
  return std::vector<double>(P.data(), P.data() + spec.size());
}

}  // namespace

BilinearForm metric_at(const FamilySpec& spec, const Vector& P) {
  check_point(spec, P);
  const int n = spec.dim();
  Matrix g = Matrix::Zero(n, n);
  switch (spec.kind()) {
    case FamilyKind::One: {
      const auto c = spec.coords1();
      const auto grad = spec.f().gradient(x_part(spec, P));
      for (int i = 0; i < c.p; ++i) {
        for (int j = 0; j < c.p; ++j)
          g(c.x(i), c.x(j)) = grad[static_cast<std::size_t>(i)] * grad[static_cast<std::size_t>(j)];
        g(c.x(i), c.y(i)) = g(c.y(i), c.x(i)) = 1.0;
      }
      break;
    }
    case FamilyKind::Two: {
      const auto c = spec.coords2();
      double phi = 0.0;
      for (int k = 0; k < c.s; ++k)
        phi += spec.fs()[static_cast<std::size_t>(k)](P(c.u(k))) + P(c.u(k)) * P(c.t(k));
      for (int i = 0; i < c.s; ++i) {
        g(c.u(i), c.u(i)) = -2.0 * phi;
        g(c.u(i), c.v(i)) = g(c.v(i), c.u(i)) = 1.0;
        g(c.t(i), c.t(i)) = -1.0;
      }
      break;
    }
    case FamilyKind::Three: {
      const auto c = spec.coords3();
      double gxx = -2.0 * spec.psi()(P(c.u(c.r - 1)));
      for (int i = 0; i + 1 < c.r; ++i) gxx -= 2.0 * P(c.u(i)) * P(c.v(i + 1));
      g(c.x(), c.x()) = gxx;
      g(c.x(), c.y()) = g(c.y(), c.x()) = 1.0;
      for (int i = 0; i < c.r; ++i) g(c.u(i), c.v(i)) = g(c.v(i), c.u(i)) = 1.0;
      break;
    }
  }
  return BilinearForm(std::move(g));
}

MetricJets::MetricJets(JetSpacePtr space, int order, std::vector<Jet> jets)
    : space_(std::move(space)), order_(order), jets_(std::move(jets)) {
  require(static_cast<int>(jets_.size()) == dim() * dim(), ErrorKind::DimensionMismatch,
          "metric jet table must be dim x dim");
}

BilinearForm MetricJets::value() const {
  const int n = dim();
  Matrix g(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) g(a, b) = jet(a, b).value();
  return BilinearForm(std::move(g));
}

double MetricJets::partial(int a, int b, std::span<const int> vars) const {
  return jet(a, b).partial_along(vars);
}

Tensor MetricJets::first_partials() const {
  const int n = dim();
  Tensor t = Tensor::covariant(n, 3);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        const int v[1] = {c};
        t(a, b, c) = partial(a, b, v);
      }
  return t;
}

Tensor MetricJets::second_partials() const {
  const int n = dim();
  Tensor t = Tensor::covariant(n, 4);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          const int v[2] = {c, d};
          t(a, b, c, d) = partial(a, b, v);
        }
  return t;
}

MetricJets metric_jets(const FamilySpec& spec, const Vector& P, int order) {
  check_point(spec, P);
  require(order >= 0 && order <= spec.max_metric_order(), ErrorKind::DerivativeOrder,
          "metric partials of order " + std::to_string(order) +
              " are unavailable for " + spec.name() + " (max " +
              std::to_string(spec.max_metric_order()) + ")");
  const int n = spec.dim();
  auto space = JetSpace::make(n, order);
  std::vector<Jet> g(static_cast<std::size_t>(n * n), Jet(space, order));
  auto at = [&](int a, int b) -> Jet& { return g[static_cast<std::size_t>(a * n + b)]; };
  auto var = [&](int i) { return Jet::variable(space, order, i, P(i)); };
  const Jet one = Jet::constant(space, order, 1.0);

  switch (spec.kind()) {
    case FamilyKind::One: {
      const auto c = spec.coords1();
      const auto x0 = x_part(spec, P);
      std::vector<int> vars(static_cast<std::size_t>(c.p));
      for (int i = 0; i < c.p; ++i) vars[static_cast<std::size_t>(i)] = c.x(i);
      std::vector<Jet> df;
      for (int i = 0; i < c.p; ++i) {
        std::vector<int> shift(static_cast<std::size_t>(c.p), 0);
        shift[static_cast<std::size_t>(i)] = 1;
        df.push_back(taylor_expand(spec.f(), x0, shift, space, order, vars));
      }
      for (int i = 0; i < c.p; ++i) {
        for (int j = 0; j < c.p; ++j)
          at(c.x(i), c.x(j)) = df[static_cast<std::size_t>(i)] * df[static_cast<std::size_t>(j)];
        at(c.x(i), c.y(i)) = one;
        at(c.y(i), c.x(i)) = one;
      }
      break;
    }
    case FamilyKind::Two: {
      const auto c = spec.coords2();
      Jet phi(space, order);
      for (int k = 0; k < c.s; ++k) {
        phi += compose_coordinate(spec.fs()[static_cast<std::size_t>(k)], space, order,
                                  c.u(k), P(c.u(k)));
        phi.add_product(var(c.u(k)), var(c.t(k)));
      }
      phi *= -2.0;
      for (int i = 0; i < c.s; ++i) {
        at(c.u(i), c.u(i)) = phi;
        at(c.u(i), c.v(i)) = one;
        at(c.v(i), c.u(i)) = one;
        at(c.t(i), c.t(i)) = Jet::constant(space, order, -1.0);
      }
      break;
    }
    case FamilyKind::Three: {
      const auto c = spec.coords3();
      Jet gxx = compose_coordinate(spec.psi(), space, order, c.u(c.r - 1), P(c.u(c.r - 1)));
      for (int i = 0; i + 1 < c.r; ++i) gxx.add_product(var(c.u(i)), var(c.v(i + 1)));
      gxx *= -2.0;
      at(c.x(), c.x()) = gxx;
      at(c.x(), c.y()) = one;
      at(c.y(), c.x()) = one;
      for (int i = 0; i < c.r; ++i) {
        at(c.u(i), c.v(i)) = one;
        at(c.v(i), c.u(i)) = one;
      }
      break;
    }
  }
  return MetricJets(space, order, std::move(g));
}

namespace {

Tensor connection_tensor(int n) {
  return Tensor(n, {Variance::Covariant, Variance::Covariant, Variance::Contravariant});
}

// Family 1: the x-block first-kind symbols
//   Gamma_ijk = 1/2 (d_i g_jk + d_j g_ik - d_k g_ij),  d_k g_ij = H_ik f_j + f_i H_jk,
// raised into the y-block: nabla_{dx_i} dx_j = sum_k Gamma_ijk dy_k.
Tensor christoffel1(const FamilySpec& spec, const Vector& P) {
  const auto c = spec.coords1();
  const auto x0 = x_part(spec, P);
  const auto grad = spec.f().gradient(x0);
  const auto hess = spec.f().hessian(x0);
  const auto p = static_cast<std::size_t>(c.p);
  auto dg = [&](std::size_t i, std::size_t j, std::size_t k) {
    return hess[i * p + k] * grad[j] + grad[i] * hess[j * p + k];
  };
  Tensor G = connection_tensor(spec.dim());
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j)
      for (std::size_t k = 0; k < p; ++k)
        G(c.x(static_cast<int>(i)), c.x(static_cast<int>(j)), c.y(static_cast<int>(k))) =
            0.5 * (dg(j, k, i) + dg(i, k, j) - dg(i, j, k));
  return G;
}

// Family 2, with a_k = f_k'(u_k) + t_k:
//   nabla_{du_i} du_i = -a_i dv_i + sum_{k != i} a_k dv_k - sum_k u_k dt_k,
//   nabla_{du_i} du_j = -a_j dv_i - a_i dv_j                (i != j),
//   nabla_{du_i} dt_j = nabla_{dt_j} du_i = -u_j dv_i.
Tensor christoffel2(const FamilySpec& spec, const Vector& P) {
  const auto c = spec.coords2();
  std::vector<double> a(static_cast<std::size_t>(c.s));
  for (int k = 0; k < c.s; ++k)
    a[static_cast<std::size_t>(k)] =
        spec.fs()[static_cast<std::size_t>(k)].derivative(P(c.u(k)), 1) + P(c.t(k));
  Tensor G = connection_tensor(spec.dim());
  for (int i = 0; i < c.s; ++i) {
    for (int k = 0; k < c.s; ++k) {
      G(c.u(i), c.u(i), c.v(k)) = (k == i ? -1.0 : 1.0) * a[static_cast<std::size_t>(k)];
      G(c.u(i), c.u(i), c.t(k)) = -P(c.u(k));
    }
    for (int j = 0; j < c.s; ++j) {
      if (j != i) {
        G(c.u(i), c.u(j), c.v(i)) = -a[static_cast<std::size_t>(j)];
        G(c.u(i), c.u(j), c.v(j)) = -a[static_cast<std::size_t>(i)];
      }
      G(c.u(i), c.t(j), c.v(i)) = -P(c.u(j));
      G(c.t(j), c.u(i), c.v(i)) = -P(c.u(j));
    }
  }
  return G;
}

// Family 3:
//   nabla_{dx} dx = sum u_i du_{i+1} + sum v_{i+1} dv_i + psi'(u_r) dv_r,
//   nabla_{dx} du_i = -v_{i+1} dy,  nabla_{dx} dv_{i+1} = -u_i dy   (i < r),
//   nabla_{dx} du_r = -psi'(u_r) dy,
// each mixed entry symmetric in its two lower slots.
Tensor christoffel3(const FamilySpec& spec, const Vector& P) {
  const auto c = spec.coords3();
  const int r = c.r;
  const double dpsi = spec.psi().derivative(P(c.u(r - 1)), 1);
  Tensor G = connection_tensor(spec.dim());
  const int x = c.x(), y = c.y();
  for (int i = 0; i + 1 < r; ++i) {
    G(x, x, c.u(i + 1)) = P(c.u(i));
    G(x, x, c.v(i)) = P(c.v(i + 1));
    G(x, c.u(i), y) = G(c.u(i), x, y) = -P(c.v(i + 1));
    G(x, c.v(i + 1), y) = G(c.v(i + 1), x, y) = -P(c.u(i));
  }
  G(x, x, c.v(r - 1)) = dpsi;
  G(x, c.u(r - 1), y) = G(c.u(r - 1), x, y) = -dpsi;
  return G;
}

CurvatureOracle oracle1(const FamilySpec& spec, const Vector& P) {
  const auto c = spec.coords1();
  const int n = spec.dim();
  const auto x0 = x_part(spec, P);
  const auto p = static_cast<std::size_t>(c.p);
  const auto H = spec.f().hessian(x0);
  std::vector<double> T(p * p * p);
  std::vector<int> alpha(p);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j)
      for (std::size_t k = 0; k < p; ++k) {
        std::fill(alpha.begin(), alpha.end(), 0);
        ++alpha[i];
        ++alpha[j];
        ++alpha[k];
        T[(i * p + j) * p + k] = spec.f().partial(x0, alpha);
      }
  auto h = [&](std::size_t i, std::size_t j) { return H[i * p + j]; };
  auto t3 = [&](std::size_t i, std::size_t j, std::size_t k) { return T[(i * p + j) * p + k]; };

  CurvatureOracle out{Tensor::covariant(n, 4), Tensor::covariant(n, 5)};
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j)
      for (std::size_t k = 0; k < p; ++k)
        for (std::size_t l = 0; l < p; ++l) {
          const int xi = c.x(static_cast<int>(i)), xj = c.x(static_cast<int>(j));
          const int xk = c.x(static_cast<int>(k)), xl = c.x(static_cast<int>(l));
          out.R(xi, xj, xk, xl) = h(i, l) * h(j, k) - h(i, k) * h(j, l);
          for (std::size_t m = 0; m < p; ++m)
            out.nablaR(xi, xj, xk, xl, c.x(static_cast<int>(m))) =
                t3(i, l, m) * h(j, k) + h(i, l) * t3(j, k, m) -
                t3(i, k, m) * h(j, l) - h(i, k) * t3(j, l, m);
        }
  return out;
}

CurvatureOracle oracle2(const FamilySpec& spec, const Vector& P) {
  const auto c = spec.coords2();
  const int n = spec.dim();
  double usq = 0.0;
  for (int k = 0; k < c.s; ++k) usq += P(c.u(k)) * P(c.u(k));
  auto f = [&](int i, int order) {
    return spec.fs()[static_cast<std::size_t>(i)].derivative(P(c.u(i)), order);
  };
  CurvatureOracle out{Tensor::covariant(n, 4), Tensor::covariant(n, 5)};
  for (int i = 0; i < c.s; ++i)
    for (int j = 0; j < c.s; ++j) {
      if (i == j) continue;
      const int ui = c.u(i), uj = c.u(j);
      set_with_images(out.R, {ui, uj, uj, ui}, f(i, 2) + f(j, 2) + usq, 1e-12);
      set_with_images(out.R, {ui, uj, uj, c.t(i)}, 1.0);
      set_with_images(out.nablaR, {ui, uj, uj, ui, ui}, f(i, 3) + 4.0 * P(ui), 1e-12);
      // With a third index k the |u|^2 term and the -sum u_k dt_k part of
      // nabla_{du_j} du_j leave two more orbits.
      for (int k = 0; k < c.s; ++k) {
        if (k == i || k == j) continue;
        const int uk = c.u(k);
        set_with_images(out.nablaR, {ui, uj, uj, ui, uk}, 2.0 * P(uk), 1e-12);
        set_with_images(out.nablaR, {ui, uj, ui, uk, uj}, -P(uk), 1e-12);
      }
    }
  return out;
}

CurvatureOracle oracle3(const FamilySpec& spec, const Vector& P) {
  const auto c = spec.coords3();
  const int n = spec.dim();
  const int r = c.r;
  const double ur = P(c.u(r - 1));
  const int x = c.x(), urr = c.u(r - 1);
  CurvatureOracle out{Tensor::covariant(n, 4), Tensor::covariant(n, 5)};
  set_with_images(out.R, {x, urr, urr, x}, spec.psi().derivative(ur, 2));
  for (int i = 0; i + 1 < r; ++i) set_with_images(out.R, {x, c.u(i), c.v(i + 1), x}, 1.0);
  set_with_images(out.nablaR, {x, urr, urr, x, urr}, spec.psi().derivative(ur, 3));
  return out;
}

}  // namespace

Tensor christoffel_oracle(const FamilySpec& spec, const Vector& P) {
  check_point(spec, P);
  switch (spec.kind()) {
    case FamilyKind::One: return christoffel1(spec, P);
    case FamilyKind::Two: return christoffel2(spec, P);
    case FamilyKind::Three: return christoffel3(spec, P);
  }
  return {};
}

CurvatureOracle curvature_oracle(const FamilySpec& spec, const Vector& P) {
  check_point(spec, P);
  switch (spec.kind()) {
    case FamilyKind::One: return oracle1(spec, P);
    case FamilyKind::Two: return oracle2(spec, P);
    case FamilyKind::Three: return oracle3(spec, P);
  }
  return {};
}

namespace {

int size_field(const nlohmann::json& j, const char* key) {
  require(j.contains(key), ErrorKind::Schema, std::string("missing field \"/") + key + "\"");
  require(j.at(key).is_number_integer(), ErrorKind::Schema,
          std::string("field \"/") + key + "\" must be an integer");
  return j.at(key).get<int>();
}

// "zero", "exp", "u^N", or a JSON profile object.
ScalarProfile scalar_shorthand(const nlohmann::json& j, const std::string& where) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "zero") return ScalarProfile();
    if (s == "exp") return ScalarProfile::exponential();
    if (s.rfind("u^", 0) == 0) {
      try {
        std::size_t used = 0;
        const int k = std::stoi(s.substr(2), &used);
        if (used == s.size() - 2 && k >= 0) return ScalarProfile::monomial(1.0, k);
      } catch (const std::exception&) {
      }
    }
    fail(ErrorKind::Schema, "unknown profile shorthand \"" + s + "\" at " + where);
  }
  try {
    return scalar_profile_from_json(j);
  } catch (const Error& e) {
    fail(ErrorKind::Schema, std::string(e.what()) + " at " + where);
  }
}

}  // namespace

FamilySpec symmetric_family(FamilyKind kind, int size) {
  switch (kind) {
    case FamilyKind::One:
      return FamilySpec::family1(size, MultiProfile::sum_of_squares(size));
    case FamilyKind::Two:
      return FamilySpec::family2(std::vector<ScalarProfile>(
          static_cast<std::size_t>(size), ScalarProfile::monomial(-1.0 / 6.0, 4)));
    case FamilyKind::Three:
      return FamilySpec::family3(size, ScalarProfile::monomial(1.0, 2));
  }
  fail(ErrorKind::InvalidArgument, "unknown family");
}

FamilySpec family_from_json(const nlohmann::json& j) {
  require(j.is_object(), ErrorKind::Schema, "family spec must be a JSON object");
  require(j.contains("family") && j.at("family").is_number_integer(), ErrorKind::Schema,
          "missing integer field \"/family\"");
  const int fam = j.at("family").get<int>();
  try {
    switch (fam) {
      case 1: {
        const int p = size_field(j, "p");
        require(p >= 2, ErrorKind::Schema, "\"/p\" must be >= 2");
        require(j.contains("profiles"), ErrorKind::Schema, "missing field \"/profiles\"");
        const auto& pr = j.at("profiles");
        if (pr.is_string()) {
          require(pr.get<std::string>() == "symmetric", ErrorKind::Schema,
                  "family 1 \"/profiles\" shorthand must be \"symmetric\"");
          return symmetric_family(FamilyKind::One, p);
        }
        const auto& obj = pr.is_array() ? pr.at(0) : pr;
        require(!pr.is_array() || pr.size() == 1, ErrorKind::Schema,
                "family 1 \"/profiles\" takes exactly one multivariate profile");
        return FamilySpec::family1(p, multi_profile_from_json(obj, p));
      }
      case 2: {
        const int s = size_field(j, "s");
        require(s >= 2, ErrorKind::Schema, "\"/s\" must be >= 2");
        require(j.contains("profiles"), ErrorKind::Schema, "missing field \"/profiles\"");
        const auto& pr = j.at("profiles");
        if (pr.is_string() && pr.get<std::string>() == "symmetric")
          return symmetric_family(FamilyKind::Two, s);
        std::vector<ScalarProfile> fs;
        if (pr.is_array()) {
          require(static_cast<int>(pr.size()) == s, ErrorKind::Schema,
                  "\"/profiles\" must list s = " + std::to_string(s) + " profiles");
          for (std::size_t i = 0; i < pr.size(); ++i)
            fs.push_back(scalar_shorthand(pr[i], "/profiles/" + std::to_string(i)));
        } else {
          fs.assign(static_cast<std::size_t>(s), scalar_shorthand(pr, "/profiles"));
        }
        return FamilySpec::family2(std::move(fs));
      }
      case 3: {
        const int r = size_field(j, "r");
        require(r >= 2, ErrorKind::Schema, "\"/r\" must be >= 2");
        const char* key = j.contains("psi") ? "psi" : "profiles";
        require(j.contains(key), ErrorKind::Schema, "missing field \"/psi\"");
        const auto& pr = j.at(key);
        if (pr.is_string() && pr.get<std::string>() == "symmetric")
          return symmetric_family(FamilyKind::Three, r);
        const auto& obj = pr.is_array() ? pr.at(0) : pr;
        require(!pr.is_array() || pr.size() == 1, ErrorKind::Schema,
                "family 3 takes exactly one profile psi");
        return FamilySpec::family3(r, scalar_shorthand(obj, std::string("/") + key));
      }
      default:
        fail(ErrorKind::Schema, "\"/family\" must be 1, 2 or 3");
    }
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Schema) throw;
    fail(ErrorKind::Schema, e.what());
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::Schema, e.what());
  }
}

nlohmann::json to_json(const FamilySpec& spec) {
  nlohmann::json j;
  j["family"] = static_cast<int>(spec.kind());
  switch (spec.kind()) {
    case FamilyKind::One:
      j["p"] = spec.size();
      j["profiles"] = nlohmann::json::array({to_json(spec.f())});
      break;
    case FamilyKind::Two: {
      j["s"] = spec.size();
      auto arr = nlohmann::json::array();
      for (const auto& f : spec.fs()) arr.push_back(to_json(f));
      j["profiles"] = arr;
      break;
    }
    case FamilyKind::Three:
      j["r"] = spec.size();
      j["psi"] = to_json(spec.psi());
      break;
  }
  return j;
}

}  // namespace curvhom
