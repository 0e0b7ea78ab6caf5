#include "curvhom/profile.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "curvhom/error.hpp"

namespace curvhom {

namespace {

void check_order(int order) {
  if (order < 0 || order > kMaxProfileOrder)
    fail(ErrorKind::DerivativeOrder,
         "derivative order " + std::to_string(order) + " outside supported range [0, 4]");
}

// n (n-1) ... (n-k+1)
double falling(int n, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= static_cast<double>(n - i);
  return r;
}

double ipow(double x, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

}  // namespace

ScalarProfile::ScalarProfile() : coeffs_{0.0} {}

ScalarProfile ScalarProfile::polynomial(std::vector<double> coeffs) {
  ScalarProfile p;
  p.coeffs_ = coeffs.empty() ? std::vector<double>{0.0} : std::move(coeffs);
  return p;
}

ScalarProfile ScalarProfile::monomial(double coeff, int power) {
  require(power >= 0, ErrorKind::InvalidArgument, "negative monomial power");
  std::vector<double> c(static_cast<std::size_t>(power) + 1, 0.0);
  c.back() = coeff;
  return polynomial(std::move(c));
}

ScalarProfile ScalarProfile::exponential() {
  return oracle("exp", [](double u, int) { return std::exp(u); });
}

ScalarProfile ScalarProfile::oracle(std::string tag, Oracle fn) {
  require(static_cast<bool>(fn), ErrorKind::InvalidArgument, "empty oracle");
  ScalarProfile p;
  p.kind_ = Kind::Oracle;
  p.tag_ = std::move(tag);
  p.coeffs_.clear();
  p.oracle_ = std::move(fn);
  return p;
}

double ScalarProfile::derivative(double u, int order) const {
  check_order(order);
  if (kind_ == Kind::Oracle) return oracle_(u, order);
  // Horner on the differentiated coefficients.
  double acc = 0.0;
  const int deg = static_cast<int>(coeffs_.size()) - 1;
  for (int k = deg; k >= order; --k)
    acc = acc * u + coeffs_[static_cast<std::size_t>(k)] * falling(k, order);
  return acc;
}

MultiProfile MultiProfile::polynomial(int nvars, std::vector<Monomial> terms) {
  require(nvars >= 1, ErrorKind::InvalidArgument, "profile needs >= 1 variable");
  for (const auto& t : terms) {
    require(static_cast<int>(t.exponents.size()) == nvars,
            ErrorKind::DimensionMismatch, "monomial exponent count != nvars");
    for (int e : t.exponents)
      require(e >= 0, ErrorKind::InvalidArgument, "negative exponent");
  }
  MultiProfile p;
  p.nvars_ = nvars;
  p.terms_ = std::move(terms);
  return p;
}

MultiProfile MultiProfile::sum_of_squares(int nvars) {
  std::vector<Monomial> terms;
  for (int i = 0; i < nvars; ++i) {
    Monomial m;
    m.exponents.assign(static_cast<std::size_t>(nvars), 0);
    m.exponents[static_cast<std::size_t>(i)] = 2;
    m.coeff = 1.0;
    terms.push_back(std::move(m));
  }
  return polynomial(nvars, std::move(terms));
}

MultiProfile MultiProfile::oracle(int nvars, std::string tag, Oracle fn) {
  require(nvars >= 1, ErrorKind::InvalidArgument, "profile needs >= 1 variable");
  require(static_cast<bool>(fn), ErrorKind::InvalidArgument, "empty oracle");
  MultiProfile p;
  p.kind_ = Kind::Oracle;
  p.nvars_ = nvars;
  p.tag_ = std::move(tag);
  p.oracle_ = std::move(fn);
  return p;
}

double MultiProfile::partial(std::span<const double> x,
                             std::span<const int> alpha) const {
  require(static_cast<int>(x.size()) == nvars_ &&
              static_cast<int>(alpha.size()) == nvars_,
          ErrorKind::DimensionMismatch, "profile argument size");
  int total = 0;
  for (int a : alpha) {
    require(a >= 0, ErrorKind::DerivativeOrder, "negative derivative count");
    total += a;
  }
  check_order(total);
  if (kind_ == Kind::Oracle) return oracle_(x, alpha);
  double acc = 0.0;
  for (const auto& t : terms_) {
    double v = t.coeff;
    for (int i = 0; i < nvars_ && v != 0.0; ++i) {
      const int e = t.exponents[static_cast<std::size_t>(i)];
      const int a = alpha[static_cast<std::size_t>(i)];
      if (a > e) {
        v = 0.0;
        break;
      }
      v *= falling(e, a) * ipow(x[static_cast<std::size_t>(i)], e - a);
    }
    acc += v;
  }
  return acc;
}

double MultiProfile::value(std::span<const double> x) const {
  std::vector<int> alpha(static_cast<std::size_t>(nvars_), 0);
  return partial(x, alpha);
}

std::vector<double> MultiProfile::gradient(std::span<const double> x) const {
  std::vector<double> g(static_cast<std::size_t>(nvars_));
  std::vector<int> alpha(static_cast<std::size_t>(nvars_), 0);
  for (int i = 0; i < nvars_; ++i) {
    alpha[static_cast<std::size_t>(i)] = 1;
    g[static_cast<std::size_t>(i)] = partial(x, alpha);
    alpha[static_cast<std::size_t>(i)] = 0;
  }
  return g;
}

std::vector<double> MultiProfile::hessian(std::span<const double> x) const {
  const auto n = static_cast<std::size_t>(nvars_);
  std::vector<double> h(n * n);
  std::vector<int> alpha(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      ++alpha[i];
      ++alpha[j];
      h[i * n + j] = h[j * n + i] = partial(x, alpha);
      --alpha[i];
      --alpha[j];
    }
  return h;
}

double eval_profile(const ScalarProfile& p, double u, int order) {
  return p.derivative(u, order);
}

double eval_profile(const MultiProfile& p, std::span<const double> x,
                    std::span<const int> alpha) {
  return p.partial(x, alpha);
}

double oracle_consistency_defect(const MultiProfile& p,
                                 std::span<const std::vector<double>> points,
                                 double step) {
  const int n = p.nvars();
  double worst = 0.0;
  std::vector<int> alpha(static_cast<std::size_t>(n), 0);
  // Enumerate alpha with |alpha| <= 3 by odometer.
  auto visit = [&](auto&& self, int var, int remaining) -> void {
    if (var == n) {
      for (const auto& x : points) {
        for (int i = 0; i < n; ++i) {
          std::vector<double> xp = x, xm = x;
          xp[static_cast<std::size_t>(i)] += step;
          xm[static_cast<std::size_t>(i)] -= step;
          const double fd = (p.partial(xp, alpha) - p.partial(xm, alpha)) / (2 * step);
          ++alpha[static_cast<std::size_t>(i)];
          const double exact = p.partial(x, alpha);
          --alpha[static_cast<std::size_t>(i)];
          worst = std::max(worst, std::abs(fd - exact) / std::max(1.0, std::abs(exact)));
        }
      }
      return;
    }
    for (int k = 0; k <= remaining; ++k) {
      alpha[static_cast<std::size_t>(var)] = k;
      self(self, var + 1, remaining - k);
    }
    alpha[static_cast<std::size_t>(var)] = 0;
  };
  visit(visit, 0, kMaxProfileOrder - 1);
  return worst;
}

ScalarProfile scalar_profile_from_json(const nlohmann::json& j) {
  require(j.is_object() && j.contains("kind"), ErrorKind::Schema,
          "profile must be an object with a \"kind\" field");
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "polynomial") {
    require(j.contains("coeffs") && j.at("coeffs").is_array(), ErrorKind::Schema,
            "scalar polynomial profile needs a \"coeffs\" array");
    return ScalarProfile::polynomial(j.at("coeffs").get<std::vector<double>>());
  }
  if (kind == "exp") return ScalarProfile::exponential();
  fail(ErrorKind::Schema, "unknown scalar profile kind \"" + kind + "\"");
}

nlohmann::json to_json(const ScalarProfile& p) {
  if (p.kind() == ScalarProfile::Kind::Polynomial)
    return {{"kind", "polynomial"}, {"coeffs", p.coeffs()}};
  return {{"kind", p.tag()}};
}

MultiProfile multi_profile_from_json(const nlohmann::json& j, int nvars) {
  require(j.is_object() && j.contains("kind"), ErrorKind::Schema,
          "profile must be an object with a \"kind\" field");
  const auto kind = j.at("kind").get<std::string>();
  require(kind == "polynomial", ErrorKind::Schema,
          "unknown multivariate profile kind \"" + kind + "\"");
  require(j.contains("terms") && j.at("terms").is_array(), ErrorKind::Schema,
          "multivariate polynomial profile needs a \"terms\" array");
  std::vector<Monomial> terms;
  for (const auto& t : j.at("terms")) {
    require(t.contains("exponents") && t.contains("coeff"), ErrorKind::Schema,
            "term needs \"exponents\" and \"coeff\"");
    Monomial m;
    m.exponents = t.at("exponents").get<std::vector<int>>();
    m.coeff = t.at("coeff").get<double>();
    require(static_cast<int>(m.exponents.size()) == nvars, ErrorKind::Schema,
            "term exponent count must equal " + std::to_string(nvars));
    terms.push_back(std::move(m));
  }
  return MultiProfile::polynomial(nvars, std::move(terms));
}

nlohmann::json to_json(const MultiProfile& p) {
  if (p.kind() == MultiProfile::Kind::Oracle) return {{"kind", p.tag()}};
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& t : p.terms())
    terms.push_back({{"exponents", t.exponents}, {"coeff", t.coeff}});
  return {{"kind", "polynomial"}, {"terms", terms}};
}

}  // namespace curvhom
