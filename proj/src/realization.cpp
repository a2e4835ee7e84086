#include "rikitake/realization.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rikitake/integrate.hpp"

namespace rikitake {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

double get(const Params& p, const std::string& key, double fallback) {
  const auto it = p.find(key);
  return it == p.end() ? fallback : it->second;
}

void check_keys(const Params& p) {
  for (const auto& [key, value] : p) {
    if (key != "k" && key != "lambda" && key != "eta" && key != "sign")
      throw ParameterError("realization: unknown parameter '" + key + "'");
    if (!std::isfinite(value)) throw ParameterError("realization: parameter '" + key + "' is not finite");
  }
}

double sqrt_k(double k) {
  if (!(k > 0)) throw DomainError("k", "leaf value must be positive, got " + fmt(k));
  return std::sqrt(k);
}

// Shared shape of the AB realizations: z = s p and
//   x = A sinh(w q),  y = (A / w) cosh(w q)      with A^2 = u(p) > 0, w^2 = 1 - 2 lambda > 0
//   x = -B sin(w q),  y = (B / w) cos(w q)       with B^2 = -u(p) > 0, w^2 = 2 lambda - 1 > 0
// so that -x^2 + (1 - 2 lambda) y^2 = u(p) and {x, y} = u'(p) / 2.
struct Radicand {
  double u, du;
  const char* name;
};

Vector ab_point(double lambda, int s, double q, double p, const Radicand& r) {
  const double a = 1 - 2 * lambda;
  Vector out(3);
  if (a > 0) {
    if (!(r.u > 0)) throw DomainError(r.name, "radicand must be positive for lambda < 1/2, got " + fmt(r.u));
    const double w = std::sqrt(a), A = std::sqrt(r.u);
    out << A * std::sinh(w * q), A / w * std::cosh(w * q), s * p;
  } else {
    if (!(r.u < 0)) throw DomainError(r.name, "radicand must be negative for lambda > 1/2, got " + fmt(r.u));
    const double w = std::sqrt(-a), B = std::sqrt(-r.u);
    out << -B * std::sin(w * q), B / w * std::cos(w * q), s * p;
  }
  return out;
}

Matrix ab_jacobian(double lambda, int s, double q, const Radicand& r) {
  const double a = 1 - 2 * lambda;
  Matrix j = Matrix::Zero(3, 2);
  if (a > 0) {
    const double w = std::sqrt(a), A = std::sqrt(r.u), dA = r.du / (2 * A);
    const double sh = std::sinh(w * q), ch = std::cosh(w * q);
    j << A * w * ch, dA * sh, A * sh, dA / w * ch, 0, s;
  } else {
    const double w = std::sqrt(-a), B = std::sqrt(-r.u), dB = -r.du / (2 * B);
    const double sn = std::sin(w * q), cs = std::cos(w * q);
    j << -B * w * cs, -dB * sn, -B * sn, dB / w * cs, 0, s;
  }
  return j;
}

Radicand pencil_radicand(double k, double lambda, double p) {
  return {4 * k + 2 * lambda * p * p, 4 * lambda * p, "4k+2 lambda p^2"};
}

// u(p) = 2 lambda ((e^{eta p} - 1) / eta)^2 + 4 k e^{eta p}
Radicand deformed_radicand(double k, double lambda, double eta, double p) {
  const double e = std::exp(eta * p);
  const double m = std::abs(eta) < 1e-8 ? p * (1 + eta * p / 2) : std::expm1(eta * p) / eta;
  return {2 * lambda * m * m + 4 * k * e, 4 * lambda * m * e + 4 * k * eta * e,
          "2 lambda ((e^{eta p}-1)/eta)^2+4k e^{eta p}"};
}

void require_not_half(double lambda) {
  if (lambda == 0.5) throw ParameterError("realization: lambda = 1/2 has no real realization");
}

}  // namespace

std::vector<std::string> realization_ids() {
  return {"case-a", "case-ab-pencil", "case-a-book", "case-a-heisenberg", "case-ab-deformed"};
}

Vector SymplecticRealization::operator()(double q, double p) const {
  if (!std::isfinite(q) || !std::isfinite(p)) throw ContractError("realization: (q, p) must be finite");
  const int s = sign;
  if (id == "case-a") {
    const double r = 2 * sqrt_k(k);
    return (Vector(3) << r * std::sinh(q), r * std::cosh(q), s * p).finished();
  }
  if (id == "case-ab-pencil") return ab_point(lambda, s, q, p, pencil_radicand(k, lambda, p));
  if (id == "case-ab-deformed") return ab_point(lambda, s, q, p, deformed_radicand(k, lambda, eta, p));
  if (id == "case-a-book") {
    const double f = std::exp(-s * eta * p / 2) * sqrt_k(k);
    return (Vector(3) << f * std::sinh(q), f * std::cosh(q), p).finished();
  }
  if (id == "case-a-heisenberg") {
    const double g = -s * std::exp(eta * q) * sqrt_k(k);
    return (Vector(3) << g * std::sinh(q), g * std::cosh(q), p).finished();
  }
  throw ParameterError("unknown realization '" + id + "'");
}

Matrix SymplecticRealization::jacobian(double q, double p) const {
  const int s = sign;
  Matrix j = Matrix::Zero(3, 2);
  if (id == "case-a") {
    const double r = 2 * sqrt_k(k);
    j << r * std::cosh(q), 0, r * std::sinh(q), 0, 0, s;
    return j;
  }
  if (id == "case-ab-pencil") return ab_jacobian(lambda, s, q, pencil_radicand(k, lambda, p));
  if (id == "case-ab-deformed") return ab_jacobian(lambda, s, q, deformed_radicand(k, lambda, eta, p));
  if (id == "case-a-book") {
    const double f = std::exp(-s * eta * p / 2) * sqrt_k(k), df = -s * eta / 2 * f;
    j << f * std::cosh(q), df * std::sinh(q), f * std::sinh(q), df * std::cosh(q), 0, 1;
    return j;
  }
  if (id == "case-a-heisenberg") {
    const double g = -s * std::exp(eta * q) * sqrt_k(k);
    const double sh = std::sinh(q), ch = std::cosh(q);
    j << g * (eta * sh + ch), 0, g * (eta * ch + sh), 0, 0, 1;
    return j;
  }
  throw ParameterError("unknown realization '" + id + "'");
}

SymplecticRealization make_realization(const std::string& id, const Params& params, int sign) {
  check_keys(params);
  if (sign != 1 && sign != -1) throw ParameterError("realization: sign must be +1 or -1");
  const double k = get(params, "k", 1), lambda = get(params, "lambda", 0), eta = get(params, "eta", 1);

  auto make = [&](PoissonStructure target, std::size_t casimir_index, double scale) {
    ScalarField c = target.casimirs().at(casimir_index);
    return SymplecticRealization{id, k, lambda, eta, sign, std::move(target), std::move(c), scale};
  };
  if (id == "case-a") return make(poincare_structure(), 0, 1);
  if (id == "case-ab-pencil") {
    require_not_half(lambda);
    // C_lambda = (x^2 + (2 lambda - 1) y^2 + 2 lambda z^2) / (8 lambda - 4) = k / (1 - 2 lambda) on the leaf
    return make(ab_pencil_structure(lambda), 0, 1 - 2 * lambda);
  }
  if (id == "case-a-book") return make(book_structure(eta), 0, 1);
  if (id == "case-a-heisenberg") return make(heisenberg_structure(eta), 0, 1);
  if (id == "case-ab-deformed") {
    require_not_half(lambda);
    return make(ab_deformed_structure(lambda, eta), 0, 1);
  }
  throw ParameterError("unknown realization '" + id + "'");
}

double pushforward_residual(const SymplecticRealization& r, double q, double p) {
  const Matrix j = r.jacobian(q, p);
  const Matrix canonical = j.col(0) * j.col(1).transpose() - j.col(1) * j.col(0).transpose();
  return (canonical - r.target.pi(r(q, p))).cwiseAbs().maxCoeff();
}

namespace {

const std::vector<std::pair<double, double>>& reference_points() {
  static const std::vector<std::pair<double, double>> pts{{0.3, 0.2}, {-0.4, 0.5}, {0.7, -0.3}};
  return pts;
}

struct SignScore {
  bool certified = true;  // pushforward residual < 1e-9 at every reference point
  bool on_leaf = true;    // image inside the Casimir's domain with leaf value k
  double residual = 0;
};

SignScore score(const std::string& id, const Params& params, int sign) {
  const auto r = make_realization(id, params, sign);
  SignScore s;
  for (const auto& [q, p] : reference_points()) {
    try {
      const double res = pushforward_residual(r, q, p);
      s.residual = std::max(s.residual, res);
      if (!(res < 1e-9)) s.certified = false;
      const Vector x = r(q, p);
      if (!r.casimir.in_domain(x) || std::abs(r.leaf_value(q, p) - r.k) > 1e-10 * std::max(1.0, std::abs(r.k)))
        s.on_leaf = false;
    } catch (const DomainError&) {
      s.certified = s.on_leaf = false;
      s.residual = INFINITY;
    }
  }
  return s;
}

}  // namespace

int resolve_sign(const std::string& id, const Params& params) {
  Params base = params;
  base.erase("sign");
  const SignScore plus = score(id, base, 1), minus = score(id, base, -1);
  if (plus.certified != minus.certified) return plus.certified ? 1 : -1;
  if (plus.on_leaf != minus.on_leaf) return plus.on_leaf ? 1 : -1;
  if (!plus.certified && minus.residual < plus.residual) return -1;
  return 1;
}

SymplecticRealization build_realization(const std::string& id, const Params& params) {
  const auto it = params.find("sign");
  if (it != params.end()) return make_realization(id, params, static_cast<int>(it->second));
  return make_realization(id, params, resolve_sign(id, params));
}

Vector realize(const std::string& id, const Params& params, double q, double p) {
  return build_realization(id, params)(q, p);
}

double pushforward_residual(const std::string& id, const Params& params, double q, double p) {
  return pushforward_residual(build_realization(id, params), q, p);
}

// ---------------------------------------------------------------------------
// Reductions

namespace {

EffectivePotentialSpec natural(std::string id, std::string formula, Params params,
                               std::function<double(double)> v, std::function<double(double)> dv) {
  EffectivePotentialSpec s;
  s.id = std::move(id);
  s.formula = std::move(formula);
  s.params = std::move(params);
  s.potential = v;
  s.hamiltonian = [v](double q, double p) { return p * p / 2 + v(q); };
  s.velocity_sq = [v](double q, double E) { return 2 * (E - v(q)); };
  s.momentum = [v](double q, double E) { return std::sqrt(std::max(0.0, 2 * (E - v(q)))); };
  s.canonical_rhs = [dv](const Vector& x) { return (Vector(2) << x[1], -dv(x[0])).finished(); };
  return s;
}

}  // namespace

EffectivePotentialSpec case_a_potential(double k, double alpha) {
  const double c = std::log(2 * sqrt_k(k));
  return natural(
      "case-a", "p^2/2 + 2k sinh^2 q - alpha (log(2 sqrt k) + q)", {{"k", k}, {"alpha", alpha}},
      [=](double q) { return 2 * k * std::sinh(q) * std::sinh(q) - alpha * (c + q); },
      [=](double q) { return 2 * k * std::sinh(2 * q) - alpha; });
}

EffectivePotentialSpec ab_lambda0_potential(double k) {
  return natural(
      "case-ab-lambda0", "p^2/2 + k cosh 2q", {{"k", k}}, [=](double q) { return k * std::cosh(2 * q); },
      [=](double q) { return 2 * k * std::sinh(2 * q); });
}

EffectivePotentialSpec ab_lambda1_reduction(double k) {
  EffectivePotentialSpec s;
  s.id = "case-ab-lambda1";
  s.formula = "-cos 2q (p^2/2 + k)";
  s.params = {{"k", k}};
  s.hamiltonian = [=](double q, double p) { return -std::cos(2 * q) * (p * p / 2 + k); };
  // qdot = -cos 2q p, and p^2 = -2 (E + k cos 2q) / cos 2q on the level set
  s.velocity_sq = [=](double q, double E) { return -2 * std::cos(2 * q) * (E + k * std::cos(2 * q)); };
  s.momentum = [=](double q, double E) {
    const double c = std::cos(2 * q);
    const double p = std::sqrt(std::max(0.0, -2 * (E + k * c) / c));
    return c > 0 ? -p : p;
  };
  s.canonical_rhs = [=](const Vector& x) {
    const double c = std::cos(2 * x[0]), sn = std::sin(2 * x[0]);
    return (Vector(2) << -c * x[1], -2 * sn * (x[1] * x[1] / 2 + k)).finished();
  };
  return s;
}

namespace {

struct Simpson {
  const EffectivePotentialSpec& spec;
  double E;
  int depth_limit = 50;

  double f(double s) const {
    const double v = spec.velocity_sq(s, E);
    if (!(v > spec.guard))
      throw DomainError("s", "turning point: E - V <= guard at s = " + fmt(s) + " (radicand " + fmt(v) + ")");
    return 1 / std::sqrt(v);
  }

  double adapt(double a, double b, double fa, double fm, double fb, double whole, double tol, int depth) const {
    const double m = (a + b) / 2, lm = (a + m) / 2, rm = (m + b) / 2;
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6 * (fa + 4 * flm + fm), right = (b - m) / 6 * (fm + 4 * frm + fb);
    const double diff = left + right - whole;
    if (depth >= depth_limit || std::abs(diff) <= 15 * tol) return left + right + diff / 15;
    return adapt(a, m, fa, flm, fm, left, tol / 2, depth + 1) + adapt(m, b, fm, frm, fb, right, tol / 2, depth + 1);
  }
};

}  // namespace

double time_of_flight(const EffectivePotentialSpec& spec, double E, double q0, double q1, double tol) {
  if (q0 == q1) return 0;
  if (q1 < q0) return -time_of_flight(spec, E, q1, q0, tol);
  const Simpson s{spec, E};
  const double m = (q0 + q1) / 2;
  const double fa = s.f(q0), fm = s.f(m), fb = s.f(q1);
  return s.adapt(q0, q1, fa, fm, fb, (q1 - q0) / 6 * (fa + 4 * fm + fb), tol, 0);
}

double time_of_flight_ode(const EffectivePotentialSpec& spec, double E, double q0, double q1) {
  if (q0 == q1) return 0;
  if (q1 < q0) throw ContractError("time_of_flight_ode: expects q1 > q0");
  IntegratorConfig cfg;
  cfg.abs_tol = cfg.rel_tol = 1e-12;
  cfg.h = 0;
  cfg.t_end = 20;
  const Vector x0 = (Vector(2) << q0, spec.momentum(q0, E)).finished();
  const auto traj = integrate(spec.canonical_rhs, {"q", "p"}, {}, x0, cfg);

  std::size_t i = 1;
  while (i < traj.size() && traj.states[i][0] < q1) ++i;
  if (i == traj.size()) throw DomainError("q1", "not reached by the reduced flow");

  // bisect the final step by re-integrating from the last sample below q1
  const Vector base = traj.states[i - 1];
  double lo = 0, hi = traj.times[i] - traj.times[i - 1];
  for (int it = 0; it < 60 && hi - lo > 1e-14; ++it) {
    const double mid = (lo + hi) / 2;
    IntegratorConfig short_cfg = cfg;
    short_cfg.t_end = mid;
    const auto part = integrate(spec.canonical_rhs, {"q", "p"}, {}, base, short_cfg);
    (part.states.back()[0] < q1 ? lo : hi) = mid;
  }
  return traj.times[i - 1] + (lo + hi) / 2;
}

}  // namespace rikitake
