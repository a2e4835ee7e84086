#include "rikitake/coupling.hpp"

#include <cmath>
#include <sstream>

#include "rikitake/systems.hpp"

namespace rikitake {

namespace {

using Grad = std::function<Vector(const Vector&)>;

ScalarField component(std::string name, std::function<double(const Vector&)> eval, Grad grad) {
  return ScalarField(std::move(name), 6, std::move(eval), std::move(grad));
}

Vector vec6(double a, double b, double c, double d, double e, double f) {
  return (Vector(6) << a, b, c, d, e, f).finished();
}

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

Vector CoproductMap::apply(const Vector& s) const {
  if (s.size() != 6) throw ContractError("coproduct expects a 6D product state");
  return (Vector(3) << components[0](s), components[1](s), components[2](s)).finished();
}

Matrix CoproductMap::jacobian(const Vector& s) const {
  Matrix j(3, 6);
  for (int r = 0; r < 3; ++r) j.row(r) = components[static_cast<std::size_t>(r)].gradient(s).transpose();
  return j;
}

Vector apply_coproduct(const CoproductMap& cp, const Vector& s) { return cp.apply(s); }

CoproductMap primitive_coproduct() {
  auto sum = [](int i, const char* name) {
    return component(
        name, [i](const Vector& s) { return s[i] + s[i + 3]; },
        [i](const Vector&) {
          Vector g = Vector::Zero(6);
          g[i] = g[i + 3] = 1;
          return g;
        });
  };
  return {"primitive", 0, {sum(0, "Dx"), sum(1, "Dy"), sum(2, "Dz")}};
}

CoproductMap book_coproduct(double eta) {
  auto scaled = [eta](int i, const char* name) {
    return component(
        name, [=](const Vector& s) { return s[i] * std::exp(eta * s[5]) + s[i + 3]; },
        [=](const Vector& s) {
          const double e = std::exp(eta * s[5]);
          Vector g = Vector::Zero(6);
          g[i] = e;
          g[i + 3] = 1;
          g[5] = eta * s[i] * e;
          return g;
        });
  };
  auto dz = primitive_coproduct().components[2];
  return {"book(eta=" + fmt(eta) + ")", eta, {scaled(0, "Dx"), scaled(1, "Dy"), dz}};
}

CoproductMap heisenberg_coproduct(double eta) {
  const auto p = primitive_coproduct();
  auto dz = component(
      "Dz", [=](const Vector& s) { return s[2] + s[5] - eta * s[1] * s[3]; },
      [=](const Vector& s) { return vec6(0, -eta * s[3], 1, -eta * s[1], 0, 1); });
  return {"heisenberg-weyl(eta=" + fmt(eta) + ")", eta, {p.components[0], p.components[1], dz}};
}

CoproductMap heisenberg_coproduct_tensor_reading(double eta) {
  const auto p = primitive_coproduct();
  auto dz = component(
      "Dz", [=](const Vector& s) { return s[2] + s[5] - eta * s[0] * s[4]; },
      [=](const Vector& s) { return vec6(-eta * s[4], 0, 1, 0, -eta * s[0], 1); });
  return {"heisenberg-weyl-tensor(eta=" + fmt(eta) + ")", eta, {p.components[0], p.components[1], dz}};
}

CoproductMap primed_coproduct(double eta) {
  auto mixed = [eta](int i, const char* name) {
    return component(
        name,
        [=](const Vector& s) { return s[i] * std::exp(eta * s[5] / 2) + std::exp(-eta * s[2] / 2) * s[i + 3]; },
        [=](const Vector& s) {
          const double e2 = std::exp(eta * s[5] / 2), e1 = std::exp(-eta * s[2] / 2);
          Vector g = Vector::Zero(6);
          g[i] = e2;
          g[i + 3] = e1;
          g[2] = -eta / 2 * e1 * s[i + 3];
          g[5] = eta / 2 * s[i] * e2;
          return g;
        });
  };
  auto dz = primitive_coproduct().components[2];
  return {"primed(eta=" + fmt(eta) + ")", eta, {mixed(0, "Dx'"), mixed(1, "Dy'"), dz}};
}

Vector coproduct_from_group(const MatrixLieGroupRep& rep, const Vector& s1, const Vector& s2, double eta) {
  const Eigen::Matrix3d g = rep.element(s1.head<3>(), eta) * rep.element(s2.head<3>(), eta);
  return rep.chart_inverse(g, eta);
}

double poisson_map_residual(const PoissonStructure& structure3, const CoproductMap& cp, const Vector& s) {
  const auto sum = direct_sum(structure3, structure3);
  const Matrix pi6 = sum.pi(s);
  const Matrix j = cp.jacobian(s);
  const Matrix lhs = j * pi6 * j.transpose();
  const Matrix rhs = structure3.pi(cp.apply(s));
  return (lhs - rhs).cwiseAbs().maxCoeff();
}

ScalarField coproduct_of(const ScalarField& f, const CoproductMap& cp, std::string name) {
  return ScalarField(
      std::move(name), 6, [=](const Vector& s) { return f(cp.apply(s)); },
      [=](const Vector& s) { return Vector(cp.jacobian(s).transpose() * f.gradient(cp.apply(s))); },
      [=](const Vector& s) { return f.in_domain(cp.apply(s)); });
}

// ---------------------------------------------------------------------------
// Cluster chart

Vector to_cluster(const Vector& s, double eta) {
  const Vector d = primed_coproduct(eta).apply(s);
  return vec6(d[0], d[1], d[2], s[0], s[1], s[2]);
}

Vector from_cluster(const Vector& c, double eta) {
  const double z1 = c[5], z2 = c[2] - z1;
  const double back = std::exp(eta * z1 / 2), fwd = std::exp(eta * z2 / 2);
  return vec6(c[3], c[4], z1, (c[0] - c[3] * fwd) * back, (c[1] - c[4] * fwd) * back, z2);
}

Matrix cluster_chart_jacobian(const Vector& s, double eta) {
  Matrix j = Matrix::Zero(6, 6);
  j.topRows(3) = primed_coproduct(eta).jacobian(s);
  j.block(3, 0, 3, 3).setIdentity();
  return j;
}

Vector cluster_rhs(int lambda, double eta, const Vector& c) {
  if (lambda != 0 && lambda != 1) throw ParameterError("coupled system: lambda must be 0 or 1");
  const double xp = c[0], yp = c[1], zp = c[2], x1 = c[3], y1 = c[4], z1 = c[5];
  const double shp = sinh_over(eta, zp);
  const double e = std::exp(eta * (zp - z1) / 2);
  Vector out(6);
  out[0] = yp * shp;
  out[1] = xp * shp;
  out[2] = -xp * yp;
  if (lambda == 1) {
    const double sh1 = sinh_over(eta, z1);
    out[3] = eta * y1 / 4 * (yp * yp - xp * xp) + e * (yp * sh1 + eta * y1 * (xp * x1 - yp * y1) / 4);
    out[4] = eta * x1 / 4 * (xp * xp - yp * yp) + e * (xp * sh1 + eta * x1 * (-xp * x1 + yp * y1) / 4);
  } else {
    const double common =
        shp + eta * e * (xp * x1 + yp * y1) / 4 - eta * (xp * xp + yp * yp) / 4;
    out[3] = y1 * common;
    out[4] = x1 * common;
  }
  out[5] = -e * (xp * y1 + yp * x1) / 2;
  return out;
}

HamiltonianSystem coupled_system(int lambda, double eta) {
  if (lambda != 0 && lambda != 1) throw ParameterError("coupled system: lambda must be 0 or 1");
  const double l = lambda;
  const auto one = primed_structure(l, eta);
  const auto cp = primed_coproduct(eta);
  HamiltonianSystem s;
  s.id = "coupled-ab-primed";
  s.structure = direct_sum(one, one);
  s.coords = s.structure->coords();
  s.hamiltonian = coproduct_of(primed_hamiltonian(l, eta), cp, "Delta(H)");
  s.invariants.push_back(*s.hamiltonian);
  s.invariants.push_back(coproduct_of(primed_casimir(l, eta), cp, "Delta(C)"));
  for (const auto& c : s.structure->casimirs()) s.invariants.push_back(c);
  s.handcoded_vf = [lambda, eta](const Vector& x) {
    return Vector(cluster_chart_jacobian(x, eta).partialPivLu().solve(cluster_rhs(lambda, eta, to_cluster(x, eta))));
  };
  s.params = {{"lambda", l}, {"eta", eta}};
  return s;
}

double cluster_dynamics_residual(const HamiltonianSystem& coupled, const CoproductMap& cp,
                                 const HamiltonianSystem::VectorFieldFn& one_copy, const Vector& s) {
  const Vector f6 = hamiltonian_vector_field(coupled, s);
  return (cp.jacobian(s) * f6 - one_copy(cp.apply(s))).cwiseAbs().maxCoeff();
}

double cluster_dynamics_residual(int lambda, double eta, const Vector& s) {
  return cluster_dynamics_residual(coupled_system(lambda, eta), primed_coproduct(eta),
                                   [eta](const Vector& x) { return primed_rhs(x, eta); }, s);
}

}  // namespace rikitake
