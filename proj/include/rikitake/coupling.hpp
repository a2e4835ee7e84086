#pragma once

#include <array>
#include <string>

#include "rikitake/liebialg.hpp"
#include "rikitake/poisson.hpp"

namespace rikitake {

/// Closed-form coproduct (Delta x, Delta y, Delta z) on the product state
/// s = (x1, y1, z1, x2, y2, z2); the first copy is the left tensor leg.
struct CoproductMap {
  std::string name;
  double eta = 0;
  std::array<ScalarField, 3> components;

  Vector apply(const Vector& s) const;
  Matrix jacobian(const Vector& s) const;  // 3 x 6
};

CoproductMap primitive_coproduct();                // u1 + u2
CoproductMap book_coproduct(double eta);           // x1 e^{eta z2} + x2, ..., z1 + z2
CoproductMap heisenberg_coproduct(double eta);     // x1 + x2, y1 + y2, z1 + z2 - eta y1 x2
/// z1 + z2 - eta x1 y2: the literal reading of the tensor form x (x) y, kept to
/// show that the group law selects the coordinate form above.
CoproductMap heisenberg_coproduct_tensor_reading(double eta);
CoproductMap primed_coproduct(double eta);         // x1' e^{eta z2/2} + e^{-eta z1/2} x2', ...

Vector apply_coproduct(const CoproductMap& cp, const Vector& s);

/// Coordinates of G(s1) G(s2) read back through the chart.
Vector coproduct_from_group(const MatrixLieGroupRep& rep, const Vector& s1, const Vector& s2, double eta);

/// max over coordinate pairs of |{Delta u, Delta v}_{Pi (+) Pi}(s) - Pi^{uv}(Delta(s))|.
double poisson_map_residual(const PoissonStructure& structure3, const CoproductMap& cp, const Vector& s);

/// f o Delta, with the chain-rule gradient.
ScalarField coproduct_of(const ScalarField& f, const CoproductMap& cp, std::string name);

/// Two coupled copies of the primed AB system at lambda in {0, 1}:
/// structure Pi (+) Pi, Hamiltonian Delta(H), invariants Delta(H), Delta(C)
/// and each copy's Casimir. Integrated in the two-copy coordinates; the
/// hand-coded field is the cluster-coordinate system pulled back through the chart.
HamiltonianSystem coupled_system(int lambda, double eta);

/// (x+, y+, z+, x1', y1', z1') from the two-copy state, and back.
Vector to_cluster(const Vector& s, double eta);
Vector from_cluster(const Vector& c, double eta);
Matrix cluster_chart_jacobian(const Vector& s, double eta);  // d(cluster)/d(s)

/// Displayed 6D equations in cluster coordinates.
Vector cluster_rhs(int lambda, double eta, const Vector& c);

/// ||J_Delta(s) F6(s) - F3(Delta(s))||_max with F6 = Pi6 grad Delta(H).
double cluster_dynamics_residual(int lambda, double eta, const Vector& s);
double cluster_dynamics_residual(const HamiltonianSystem& coupled, const CoproductMap& cp,
                                 const HamiltonianSystem::VectorFieldFn& one_copy, const Vector& s);

}  // namespace rikitake
