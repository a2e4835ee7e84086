#include "rikitake/systems.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace rikitake {

namespace {

constexpr double kSeriesThreshold = 1e-8;

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double d : v) out[i++] = d;
  return out;
}

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

double get(const Params& p, const std::string& key) { return p.at(key); }

void require_nonzero_eta(const std::string& id, double eta) {
  if (eta == 0.0)
    throw ParameterError(id + ": eta = 0 is the undeformed system; use limit_eta_zero or the "
                              "undeformed entry");
}

void require_lambda_not_half(const std::string& id, double lambda) {
  if (lambda == 0.5)
    throw ParameterError(id + ": lambda = 1/2 makes the Casimir denominator 8 lambda - 4 vanish");
}

}  // namespace

// ---------------------------------------------------------------------------
// Small-eta safe pieces

double sinh_over(double eta, double z) {
  if (std::abs(eta) < kSeriesThreshold) {
    const double e2z2 = eta * eta * z * z;
    return z * (1 + e2z2 / 6 + e2z2 * e2z2 / 120);
  }
  return std::sinh(eta * z) / eta;
}

double exp2_minus1_over(double eta, double z) {
  if (std::abs(eta) < kSeriesThreshold) {
    const double ez = eta * z;
    return z * (1 + ez + 2 * ez * ez / 3);
  }
  return std::expm1(2 * eta * z) / (2 * eta);
}

double cosh_minus1_over_sq(double eta, double z) {
  if (std::abs(eta) < kSeriesThreshold) {
    const double z2 = z * z, e2 = eta * eta;
    return z2 / 2 + e2 * z2 * z2 / 24 + e2 * e2 * z2 * z2 * z2 / 720;
  }
  const double s = std::sinh(eta * z / 2) / eta;
  return 2 * s * s;
}

// ---------------------------------------------------------------------------
// Structures

PoissonStructure ab_pencil_structure(double lambda) {
  const double a = 1 - 2 * lambda;
  std::vector<ScalarField> casimirs;
  if (lambda != 0.5) {
    const double d = 8 * lambda - 4;
    casimirs.emplace_back(
        "C_lambda", 3,
        [=](const Vector& v) {
          return (v[0] * v[0] - a * v[1] * v[1] + 2 * lambda * v[2] * v[2]) / d;
        },
        [=](const Vector& v) { return vec({2 * v[0] / d, -2 * a * v[1] / d, 4 * lambda * v[2] / d}); });
  }
  return PoissonStructure(
      "ab-pencil(lambda=" + fmt(lambda) + ")", {"x", "y", "z"},
      [=](const Vector& v, Matrix& m) {
        m(0, 1) = 2 * lambda * v[2];
        m(0, 2) = a * v[1];
        m(1, 2) = v[0];
      },
      [=](const Vector&, std::vector<Matrix>& d) {
        d[2](0, 1) = 2 * lambda;
        d[1](0, 2) = a;
        d[0](1, 2) = 1;
      },
      std::move(casimirs));
}

ScalarField casimir_a() {
  return ScalarField(
      "C_A", 3, [](const Vector& v) { return (v[1] * v[1] - v[0] * v[0]) / 4; },
      [](const Vector& v) { return vec({-v[0] / 2, v[1] / 2, 0}); });
}

PoissonStructure poincare_structure() {
  const auto p = ab_pencil_structure(0);
  return PoissonStructure(
      "poincare", p.coords(), [p](const Vector& v, Matrix& m) { m = p.pi(v); },
      [](const Vector&, std::vector<Matrix>& d) {
        d[1](0, 2) = 1;
        d[0](1, 2) = 1;
      },
      {casimir_a()});
}

PoissonStructure book_structure(double eta) {
  ScalarField c(
      "C_eta", 3,
      [=](const Vector& v) { return std::exp(-eta * v[2]) * (v[1] * v[1] - v[0] * v[0]); },
      [=](const Vector& v) {
        const double e = std::exp(-eta * v[2]);
        return vec({-2 * v[0] * e, 2 * v[1] * e, -eta * e * (v[1] * v[1] - v[0] * v[0])});
      });
  return PoissonStructure(
      "book(eta=" + fmt(eta) + ")", {"x", "y", "z"},
      [=](const Vector& v, Matrix& m) {
        m(0, 1) = eta / 2 * (v[1] * v[1] - v[0] * v[0]);
        m(0, 2) = v[1];
        m(1, 2) = v[0];
      },
      [=](const Vector& v, std::vector<Matrix>& d) {
        d[0](0, 1) = -eta * v[0];
        d[1](0, 1) = eta * v[1];
        d[1](0, 2) = 1;
        d[0](1, 2) = 1;
      },
      {c});
}

PoissonStructure heisenberg_structure(double eta) {
  // (y^2 - x^2)^{1-eta} (y - x)^{2 eta} = (y - x)^{1+eta} (y + x)^{1-eta}
  ScalarField c(
      "C_eta", 3,
      [=](const Vector& v) {
        return std::pow(v[1] - v[0], 1 + eta) * std::pow(v[1] + v[0], 1 - eta);
      },
      [=](const Vector& v) {
        const double dm = v[1] - v[0], dp = v[1] + v[0];
        const double c = std::pow(dm, 1 + eta) * std::pow(dp, 1 - eta);
        const double a = (1 + eta) / dm, b = (1 - eta) / dp;
        return vec({c * (b - a), c * (a + b), 0});
      },
      [](const Vector& v) { return v[1] > std::abs(v[0]); }, "y > |x|");
  return PoissonStructure(
      "heisenberg-weyl(eta=" + fmt(eta) + ")", {"x", "y", "z"},
      [=](const Vector& v, Matrix& m) {
        m(0, 2) = eta * v[0] + v[1];
        m(1, 2) = v[0] + eta * v[1];
      },
      [=](const Vector&, std::vector<Matrix>& d) {
        d[0](0, 2) = eta;
        d[1](0, 2) = 1;
        d[0](1, 2) = 1;
        d[1](1, 2) = eta;
      },
      {c});
}

namespace {

/// e^{-eta z}(-x^2 + (1-2 lambda) y^2)/4 - lambda (cosh(eta z) - 1)/eta^2
ScalarField ab_deformed_casimir(double lambda, double eta) {
  const double a = 1 - 2 * lambda;
  return ScalarField(
      "C_lambda_eta", 3,
      [=](const Vector& v) {
        return std::exp(-eta * v[2]) * (-v[0] * v[0] + a * v[1] * v[1]) / 4 -
               lambda * cosh_minus1_over_sq(eta, v[2]);
      },
      [=](const Vector& v) {
        const double e = std::exp(-eta * v[2]);
        const double q = -v[0] * v[0] + a * v[1] * v[1];
        return vec({-v[0] * e / 2, a * v[1] * e / 2,
                    -eta * e * q / 4 - lambda * sinh_over(eta, v[2])});
      });
}

/// H_{0,eta} = -C_{1,eta} = e^{-eta z}(x^2+y^2)/4 + (cosh(eta z) - 1)/eta^2
ScalarField ab_deformed_h0(double eta) {
  return ScalarField(
      "H0_eta", 3,
      [=](const Vector& v) {
        return std::exp(-eta * v[2]) * (v[0] * v[0] + v[1] * v[1]) / 4 +
               cosh_minus1_over_sq(eta, v[2]);
      },
      [=](const Vector& v) {
        const double e = std::exp(-eta * v[2]);
        return vec({v[0] * e / 2, v[1] * e / 2,
                    -eta * e * (v[0] * v[0] + v[1] * v[1]) / 4 + sinh_over(eta, v[2])});
      });
}

/// H_{1,eta} = C_{0,eta} = e^{-eta z}(y^2 - x^2)/4
ScalarField ab_deformed_h1(double eta) {
  return ScalarField(
      "H1_eta", 3,
      [=](const Vector& v) { return std::exp(-eta * v[2]) * (v[1] * v[1] - v[0] * v[0]) / 4; },
      [=](const Vector& v) {
        const double e = std::exp(-eta * v[2]);
        return vec({-v[0] * e / 2, v[1] * e / 2, -eta * e * (v[1] * v[1] - v[0] * v[0]) / 4});
      });
}

ScalarField sum(const ScalarField& a, const ScalarField& b, std::string name) {
  return ScalarField(
      std::move(name), a.arity(), [=](const Vector& v) { return a(v) + b(v); },
      [=](const Vector& v) { return Vector(a.gradient(v) + b.gradient(v)); },
      [=](const Vector& v) { return a.in_domain(v) && b.in_domain(v); });
}

/// Endpoint Hamiltonians are used as printed; interior members use their sum.
ScalarField pencil_hamiltonian(double lambda, const ScalarField& h0, const ScalarField& h1) {
  if (lambda == 0.0) return h0;
  if (lambda == 1.0) return h1;
  return sum(h0, h1, h0.name() + "+" + h1.name());
}

}  // namespace

PoissonStructure ab_deformed_structure(double lambda, double eta) {
  const double a = 1 - 2 * lambda;
  return PoissonStructure(
      "ab-deformed(lambda=" + fmt(lambda) + ", eta=" + fmt(eta) + ")", {"x", "y", "z"},
      [=](const Vector& v, Matrix& m) {
        m(0, 1) = eta / 2 * (-v[0] * v[0] + a * v[1] * v[1]) + 2 * lambda * exp2_minus1_over(eta, v[2]);
        m(0, 2) = a * v[1];
        m(1, 2) = v[0];
      },
      [=](const Vector& v, std::vector<Matrix>& d) {
        d[0](0, 1) = -eta * v[0];
        d[1](0, 1) = eta * a * v[1];
        d[2](0, 1) = 2 * lambda * std::exp(2 * eta * v[2]);
        d[1](0, 2) = a;
        d[0](1, 2) = 1;
      },
      {ab_deformed_casimir(lambda, eta)});
}

ScalarField primed_casimir(double lambda, double eta) {
  const double a = 2 * lambda - 1;
  return ScalarField(
      "C_lambda_eta", 3,
      [=](const Vector& v) {
        return -lambda * cosh_minus1_over_sq(eta, v[2]) - (v[0] * v[0] + a * v[1] * v[1]) / 4;
      },
      [=](const Vector& v) { return vec({-v[0] / 2, -a * v[1] / 2, -lambda * sinh_over(eta, v[2])}); });
}

PoissonStructure primed_structure(double lambda, double eta) {
  const double a = 1 - 2 * lambda;
  return PoissonStructure(
      "ab-primed(lambda=" + fmt(lambda) + ", eta=" + fmt(eta) + ")", {"x'", "y'", "z'"},
      [=](const Vector& v, Matrix& m) {
        m(0, 1) = 2 * lambda * sinh_over(eta, v[2]);
        m(0, 2) = a * v[1];
        m(1, 2) = v[0];
      },
      [=](const Vector& v, std::vector<Matrix>& d) {
        d[2](0, 1) = 2 * lambda * std::cosh(eta * v[2]);
        d[1](0, 2) = a;
        d[0](1, 2) = 1;
      },
      {primed_casimir(lambda, eta)});
}

namespace {

ScalarField primed_h0(double eta) {
  return ScalarField(
      "H0_eta", 3,
      [=](const Vector& v) { return (v[0] * v[0] + v[1] * v[1]) / 4 + cosh_minus1_over_sq(eta, v[2]); },
      [=](const Vector& v) { return vec({v[0] / 2, v[1] / 2, sinh_over(eta, v[2])}); });
}

ScalarField primed_h1() {
  return ScalarField(
      "H1_eta", 3, [](const Vector& v) { return (v[1] * v[1] - v[0] * v[0]) / 4; },
      [](const Vector& v) { return vec({-v[0] / 2, v[1] / 2, 0}); });
}

}  // namespace

ScalarField primed_hamiltonian(double lambda, double eta) {
  return pencil_hamiltonian(lambda, primed_h0(eta), primed_h1());
}

Vector primed_rhs(const Vector& s, double eta) {
  const double sh = sinh_over(eta, s[2]);
  return vec({s[1] * sh, s[0] * sh, -s[0] * s[1]});
}

ScalarField hamiltonian_a(double alpha) {
  return ScalarField(
      "H_A", 3,
      [=](const Vector& v) { return (v[0] * v[0] + v[2] * v[2]) / 2 - alpha * std::log(v[0] + v[1]); },
      [=](const Vector& v) {
        const double r = alpha / (v[0] + v[1]);
        return vec({v[0] - r, -r, v[2]});
      },
      [](const Vector& v) { return v[0] + v[1] > 0; }, "x + y > 0");
}

// ---------------------------------------------------------------------------
// Case B (4D, coordinates x, y, z, I)

namespace {

PoissonStructure case_b_structure(double lambda, double beta) {
  const double a = 1 - 2 * lambda;
  std::vector<ScalarField> casimirs;
  casimirs.emplace_back(
      "I", 4, [](const Vector& v) { return v[3]; }, [](const Vector&) { return vec({0, 0, 0, 1}); });
  if (lambda != 0.5) {
    // (x^2 + (2 lambda - 1) y^2 + 2 lambda z^2 + 4 beta (1 - lambda) z I) / (8 lambda - 4)
    const double d = 8 * lambda - 4, b = 4 * beta * (1 - lambda);
    casimirs.emplace_back(
        "C_lambda", 4,
        [=](const Vector& v) {
          return (v[0] * v[0] - a * v[1] * v[1] + 2 * lambda * v[2] * v[2] + b * v[2] * v[3]) / d;
        },
        [=](const Vector& v) {
          return vec({2 * v[0] / d, -2 * a * v[1] / d, (4 * lambda * v[2] + b * v[3]) / d, b * v[2] / d});
        });
  }
  return PoissonStructure(
      "case-b-pencil(lambda=" + fmt(lambda) + ", beta=" + fmt(beta) + ")", {"x", "y", "z", "I"},
      [=](const Vector& v, Matrix& m) {
        m(0, 1) = (1 - lambda) * 2 * beta * v[3] + 2 * lambda * v[2];
        m(0, 2) = a * v[1];
        m(1, 2) = v[0];
      },
      [=](const Vector&, std::vector<Matrix>& d) {
        d[3](0, 1) = 2 * beta * (1 - lambda);
        d[2](0, 1) = 2 * lambda;
        d[1](0, 2) = a;
        d[0](1, 2) = 1;
      },
      std::move(casimirs));
}

ScalarField case_b_h0() {
  return ScalarField(
      "H0", 4, [](const Vector& v) { return (v[0] * v[0] + v[1] * v[1] + 2 * v[2] * v[2]) / 4; },
      [](const Vector& v) { return vec({v[0] / 2, v[1] / 2, v[2], 0}); });
}

/// -(x^2 - y^2 + 4 beta z I)/4: the printed H1 at I = 1, made homogeneous in I
/// so that it is a Casimir of the first structure for every I.
ScalarField case_b_h1(double beta) {
  return ScalarField(
      "H1", 4,
      [=](const Vector& v) { return -(v[0] * v[0] - v[1] * v[1] + 4 * beta * v[2] * v[3]) / 4; },
      [=](const Vector& v) { return vec({-v[0] / 2, v[1] / 2, -beta * v[3], -beta * v[2]}); });
}

/// -((x^2 - y^2)/I + 4 beta z)/4
ScalarField case_b_c0(double beta) {
  return ScalarField(
      "C0", 4,
      [=](const Vector& v) { return -((v[0] * v[0] - v[1] * v[1]) / v[3] + 4 * beta * v[2]) / 4; },
      [=](const Vector& v) {
        const double i = v[3];
        return vec({-v[0] / (2 * i), v[1] / (2 * i), -beta, (v[0] * v[0] - v[1] * v[1]) / (4 * i * i)});
      },
      [](const Vector& v) { return v[3] != 0; }, "I != 0");
}

Vector case_b_rhs(const Vector& v, double beta) {
  return vec({v[1] * (v[2] + beta * v[3]), v[0] * (v[2] - beta * v[3]), -v[0] * v[1], 0});
}

Vector ab_rhs(const Vector& v) { return vec({v[1] * v[2], v[0] * v[2], -v[0] * v[1]}); }

Vector ab_deformed_rhs(const Vector& v, double eta) {
  const double sh = sinh_over(eta, v[2]);
  const double e = std::exp(-eta * v[2]);
  return vec({v[1] * (sh - eta * v[0] * v[0] * e / 2), v[0] * (sh - eta * v[1] * v[1] * e / 2),
              -e * v[0] * v[1]});
}

HamiltonianSystem make(const std::string& id, const std::vector<std::string>& coords,
                       PoissonStructure structure, ScalarField h, HamiltonianSystem::VectorFieldFn vf,
                       const Params& params, std::vector<ScalarField> extra = {}) {
  HamiltonianSystem s;
  s.id = id;
  s.coords = coords;
  s.invariants.push_back(h);
  for (const auto& c : structure.casimirs()) s.invariants.push_back(c);
  for (auto& e : extra) s.invariants.push_back(std::move(e));
  s.structure = std::move(structure);
  s.hamiltonian = std::move(h);
  s.handcoded_vf = std::move(vf);
  s.params = params;
  return s;
}

const std::vector<std::string> kXYZ{"x", "y", "z"};
const std::vector<std::string> kPrimed{"x'", "y'", "z'"};

}  // namespace

// ---------------------------------------------------------------------------
// Catalog

const std::vector<SystemSpec>& catalog() {
  static const std::vector<SystemSpec> entries{
      {"rikitake-general", "generalized Rikitake dynamical system given by",
       "x' = -mu x + y(z + beta1), y' = -mu y + x(z - beta2), z' = alpha - xy; no Poisson structure",
       kXYZ,
       {{"mu", 0, "friction"}, {"beta1", 0, "shift in x'"}, {"beta2", 0, "shift in y'"}, {"alpha", 1, "torque"}},
       false, false},
      {"case-a", "has a Lie-Poisson Hamiltonian structure",
       "Poincare bracket, H = (x^2+z^2)/2 - alpha log(x+y), C = (y^2-x^2)/4", kXYZ,
       {{"alpha", 1, "torque"}}, false, false},
      {"case-b-pencil", "non-trivial central extension of the Poincare",
       "4D pencil {x,y} = 2(1-lambda) beta I + 2 lambda z, {y,z} = x, {z,x} = (2 lambda - 1) y, I central",
       {"x", "y", "z", "I"},
       {{"beta", 1, "central charge"}, {"lambda", 0, "pencil parameter"}}, true, false},
      {"case-ab-pencil", "admits the bi-Hamiltonian description",
       "{x,y} = 2 lambda z, {y,z} = x, {z,x} = (2 lambda - 1) y, C = (x^2+(2 lambda-1)y^2+2 lambda z^2)/(8 lambda-4)",
       kXYZ, {{"lambda", 0, "pencil parameter"}}, true, false},
      {"case-a-book", "The deformed equations coming from",
       "book deformation: {x,y} = eta (y^2-x^2)/2, {x,z} = y, {y,z} = x; C = e^{-eta z}(y^2-x^2)", kXYZ,
       {{"alpha", 1, "torque"}, {"eta", 1, "deformation"}}, false, true},
      {"case-a-heisenberg", "The Heisenberg-Weyl deformation",
       "{x,z} = eta x + y, {y,z} = x + eta y; C = (y^2-x^2)^{1-eta}(y-x)^{2 eta} on y > |x|", kXYZ,
       {{"alpha", 1, "torque"}, {"eta", 1, "deformation"}}, false, true},
      {"case-ab-deformed", "The Casimir function for this Poisson-Lie group structure",
       "bi-Hamiltonian deformation of the AB pencil; H0 = -C_{1,eta}, H1 = C_{0,eta}", kXYZ,
       {{"eta", 1, "deformation"}, {"lambda", 0, "pencil parameter"}}, true, true},
      {"case-ab-primed", "Under the transformation",
       "primed variables x' = e^{-eta z/2} x: {x',y'} = 2 lambda sinh(eta z')/eta", kPrimed,
       {{"eta", 1, "deformation"}, {"lambda", 1, "pencil parameter"}}, true, true},
  };
  return entries;
}

const SystemSpec& find_spec(const std::string& id) {
  for (const auto& s : catalog())
    if (s.id == id) return s;
  throw ParameterError("unknown system id '" + id + "'");
}

Params resolve_params(const std::string& id, const Params& given) {
  const auto& spec = find_spec(id);
  Params out;
  for (const auto& p : spec.params) out[p.name] = p.default_value;
  for (const auto& [k, v] : given) {
    if (!out.count(k)) throw ParameterError(id + ": unknown parameter '" + k + "'");
    if (!std::isfinite(v)) throw ParameterError(id + ": parameter '" + k + "' is not finite");
    out[k] = v;
  }
  return out;
}

HamiltonianSystem build(const std::string& id, const Params& given) {
  const Params p = resolve_params(id, given);
  if (id == "rikitake-general") {
    const double mu = get(p, "mu"), b1 = get(p, "beta1"), b2 = get(p, "beta2"), alpha = get(p, "alpha");
    HamiltonianSystem s;
    s.id = id;
    s.coords = kXYZ;
    s.params = p;
    s.handcoded_vf = [=](const Vector& v) {
      return vec({-mu * v[0] + v[1] * (v[2] + b1), -mu * v[1] + v[0] * (v[2] - b2), alpha - v[0] * v[1]});
    };
    // First integrals in the two integrable regimes.
    if (mu == 0 && b1 == 0 && b2 == 0) {
      s.invariants = {hamiltonian_a(alpha), casimir_a()};
    } else if (mu == 0 && alpha == 0 && b1 == b2) {
      s.invariants = {
          ScalarField(
              "H", 3, [=](const Vector& v) { return (v[1] * v[1] + v[2] * v[2]) / 2 - b1 * v[2]; },
              [=](const Vector& v) { return vec({0, v[1], v[2] - b1}); }),
          ScalarField(
              "C", 3, [](const Vector& v) { return (v[0] * v[0] + v[1] * v[1] + 2 * v[2] * v[2]) / 4; },
              [](const Vector& v) { return vec({v[0] / 2, v[1] / 2, v[2]}); })};
    }
    return s;
  }
  if (id == "case-a") {
    const double alpha = get(p, "alpha");
    return make(id, kXYZ, poincare_structure(), hamiltonian_a(alpha),
                [=](const Vector& v) { return vec({v[1] * v[2], v[0] * v[2], alpha - v[0] * v[1]}); }, p);
  }
  if (id == "case-b-pencil") {
    const double beta = get(p, "beta"), lambda = get(p, "lambda");
    require_lambda_not_half(id, lambda);
    auto h = pencil_hamiltonian(lambda, case_b_h0(), case_b_h1(beta));
    return make(id, {"x", "y", "z", "I"}, case_b_structure(lambda, beta), h,
                [=](const Vector& v) { return case_b_rhs(v, beta); }, p);
  }
  if (id == "case-ab-pencil") {
    const double lambda = get(p, "lambda");
    require_lambda_not_half(id, lambda);
    const ScalarField h0("H0", 3,
                         [](const Vector& v) { return (v[0] * v[0] + v[1] * v[1] + 2 * v[2] * v[2]) / 4; },
                         [](const Vector& v) { return vec({v[0] / 2, v[1] / 2, v[2]}); });
    return make(id, kXYZ, ab_pencil_structure(lambda), pencil_hamiltonian(lambda, h0, casimir_a().renamed("H1")),
                ab_rhs, p);
  }
  if (id == "case-a-book") {
    const double alpha = get(p, "alpha"), eta = get(p, "eta");
    require_nonzero_eta(id, eta);
    return make(id, kXYZ, book_structure(eta), hamiltonian_a(alpha),
                [=](const Vector& v) {
                  const double d = eta / 2 * (v[0] - v[1]);
                  return vec({v[1] * v[2] + d * alpha, v[0] * v[2] + d * (v[0] * (v[0] + v[1]) - alpha),
                              alpha - v[0] * v[1]});
                },
                p);
  }
  if (id == "case-a-heisenberg") {
    const double alpha = get(p, "alpha"), eta = get(p, "eta");
    require_nonzero_eta(id, eta);
    return make(id, kXYZ, heisenberg_structure(eta), hamiltonian_a(alpha),
                [=](const Vector& v) {
                  return vec({v[2] * (v[1] + eta * v[0]), v[2] * (v[0] + eta * v[1]),
                              alpha - v[0] * v[1] + eta * (alpha - v[0] * v[0])});
                },
                p);
  }
  if (id == "case-ab-deformed") {
    const double eta = get(p, "eta"), lambda = get(p, "lambda");
    require_nonzero_eta(id, eta);
    return make(id, kXYZ, ab_deformed_structure(lambda, eta),
                pencil_hamiltonian(lambda, ab_deformed_h0(eta), ab_deformed_h1(eta)),
                [=](const Vector& v) { return ab_deformed_rhs(v, eta); }, p);
  }
  if (id == "case-ab-primed") {
    const double eta = get(p, "eta"), lambda = get(p, "lambda");
    require_nonzero_eta(id, eta);
    return make(id, kPrimed, primed_structure(lambda, eta), primed_hamiltonian(lambda, eta),
                [=](const Vector& v) { return primed_rhs(v, eta); }, p);
  }
  throw ParameterError("unknown system id '" + id + "'");
}

std::pair<HamiltonianSystem, HamiltonianSystem> build_pair(const std::string& id, const Params& given) {
  const auto& spec = find_spec(id);
  if (!spec.bihamiltonian) throw ParameterError(id + " carries a single Hamiltonian structure");
  Params p0 = resolve_params(id, given), p1 = p0;
  p0["lambda"] = 0;
  p1["lambda"] = 1;
  return {build(id, p0), build(id, p1)};
}

HamiltonianSystem limit_eta_zero(const std::string& id, const Params& given) {
  const auto& spec = find_spec(id);
  if (!spec.deformed) throw ParameterError(id + " has no deformation parameter");
  Params p = resolve_params(id, given);
  p["eta"] = 0;
  if (id == "case-a-book" || id == "case-a-heisenberg") {
    const double alpha = get(p, "alpha");
    // Both deformations tend to the Poincare bracket; their Casimirs to y^2 - x^2.
    ScalarField c("C", 3, [](const Vector& v) { return v[1] * v[1] - v[0] * v[0]; },
                  [](const Vector& v) { return vec({-2 * v[0], 2 * v[1], 0}); });
    const auto base = poincare_structure();
    PoissonStructure pi(
        base.name(), base.coords(), [base](const Vector& v, Matrix& m) { m = base.pi(v); },
        [base](const Vector& v, std::vector<Matrix>& d) { d = base.partials(v); }, {c});
    return make(id, kXYZ, pi, hamiltonian_a(alpha),
                [=](const Vector& v) { return vec({v[1] * v[2], v[0] * v[2], alpha - v[0] * v[1]}); }, p);
  }
  const double lambda = get(p, "lambda");
  const double a = 1 - 2 * lambda;
  // C_{lambda,0} = (-x^2 + (1 - 2 lambda) y^2 - 2 lambda z^2)/4
  ScalarField c("C_lambda_0", 3,
                [=](const Vector& v) { return (-v[0] * v[0] + a * v[1] * v[1] - 2 * lambda * v[2] * v[2]) / 4; },
                [=](const Vector& v) { return vec({-v[0] / 2, a * v[1] / 2, -lambda * v[2]}); });
  const auto base = ab_pencil_structure(lambda);
  PoissonStructure pi(
      base.name(), base.coords(), [base](const Vector& v, Matrix& m) { m = base.pi(v); },
      [base](const Vector& v, std::vector<Matrix>& d) { d = base.partials(v); }, {c});
  const ScalarField h0("H0", 3,
                       [](const Vector& v) { return (v[0] * v[0] + v[1] * v[1] + 2 * v[2] * v[2]) / 4; },
                       [](const Vector& v) { return vec({v[0] / 2, v[1] / 2, v[2]}); });
  const auto& coords = id == "case-ab-primed" ? kPrimed : kXYZ;
  return make(id, coords, pi, pencil_hamiltonian(lambda, h0, casimir_a().renamed("H1")), ab_rhs, p);
}

HamiltonianSystem build_or_limit(const std::string& id, const Params& given) {
  const Params p = resolve_params(id, given);
  if (find_spec(id).deformed && get(p, "eta") == 0.0) return limit_eta_zero(id, p);
  return build(id, p);
}

double bihamiltonian_agreement(const std::pair<HamiltonianSystem, HamiltonianSystem>& pair,
                               const Vector& x) {
  return (hamiltonian_vector_field(pair.first, x) - hamiltonian_vector_field(pair.second, x))
      .cwiseAbs()
      .maxCoeff();
}

double bihamiltonian_agreement(const std::string& id, const Params& params, const Vector& x) {
  return bihamiltonian_agreement(build_pair(id, params), x);
}

Vector figure_initial_condition(const std::string& id) {
  if (find_spec(id).coords.size() == 4) return vec({0.5, 1, 1, 1});
  return vec({0.5, 1, 1});
}

}  // namespace rikitake
