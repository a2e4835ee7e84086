#pragma once

#include <functional>
#include <string>
#include <vector>

#include "rikitake/poisson.hpp"
#include "rikitake/systems.hpp"

namespace rikitake {

/// Map (q, p) -> (x, y, z) onto a symplectic leaf of a target bracket.
///
/// The sign switch s has a per-entry meaning; s = +1 is the printed form:
///   case-a, case-ab-pencil, case-ab-deformed   z = s p
///   case-a-book                                exponent e^{-s eta p / 2}
///   case-a-heisenberg                          overall prefactor -s on x and y
struct SymplecticRealization {
  std::string id;
  double k = 1;
  double lambda = 0;
  double eta = 0;
  int sign = 1;
  PoissonStructure target;
  ScalarField casimir;        // target Casimir
  double casimir_scale = 1;   // casimir_scale * casimir(phi(q, p)) == k

  Vector operator()(double q, double p) const;
  Matrix jacobian(double q, double p) const;  // 3 x 2, columns d/dq and d/dp
  double leaf_value(double q, double p) const { return casimir_scale * casimir((*this)(q, p)); }
};

std::vector<std::string> realization_ids();

/// Params: k (default 1), lambda (0), eta (1). Unknown keys raise ParameterError.
SymplecticRealization make_realization(const std::string& id, const Params& params, int sign);

/// Sign chosen by pushforward residual at fixed reference points; a tie goes to
/// the sign whose image stays in the Casimir's domain with leaf value k, then to +1.
int resolve_sign(const std::string& id, const Params& params);
SymplecticRealization build_realization(const std::string& id, const Params& params);

/// With params["sign"] present that sign is used, otherwise the resolved one.
Vector realize(const std::string& id, const Params& params, double q, double p);

/// max over pairs |(d_q u d_p v - d_p u d_q v) - Pi^{uv}(phi(q, p))|.
double pushforward_residual(const SymplecticRealization& r, double q, double p);
double pushforward_residual(const std::string& id, const Params& params, double q, double p);

/// One-degree-of-freedom reduction H(q, p) = E. The flight time from q0 to q1 is
/// the integral of 1 / sqrt(velocity_sq(s)) with velocity_sq = qdot^2 on the level set.
struct EffectivePotentialSpec {
  std::string id;
  std::string formula;
  Params params;
  std::function<double(double q, double p)> hamiltonian;
  std::function<double(double q)> potential;            // empty for non-natural reductions
  std::function<double(double s, double E)> velocity_sq;
  std::function<double(double q, double E)> momentum;   // p on the level set with qdot > 0
  std::function<Vector(const Vector&)> canonical_rhs;   // (qdot, pdot)
  double guard = 1e-10;
};

EffectivePotentialSpec case_a_potential(double k, double alpha);     // 2k sinh^2 q - alpha (log 2 sqrt k + q)
EffectivePotentialSpec ab_lambda0_potential(double k);               // k cosh 2q
EffectivePotentialSpec ab_lambda1_reduction(double k);               // -cos 2q (p^2/2 + k)

/// Adaptive Simpson to absolute tolerance tol. Throws DomainError("s", ...) when
/// velocity_sq <= guard somewhere on [q0, q1].
double time_of_flight(const EffectivePotentialSpec& spec, double E, double q0, double q1, double tol = 1e-8);

/// Oracle: integrate the canonical equations from (q0, p(q0)) until q reaches q1.
double time_of_flight_ode(const EffectivePotentialSpec& spec, double E, double q0, double q1);

}  // namespace rikitake
