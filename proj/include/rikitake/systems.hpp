#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "rikitake/poisson.hpp"

namespace rikitake {

using Params = std::map<std::string, double>;

struct ParamSpec {
  std::string name;
  double default_value;
  std::string description;
};

/// One catalog entry. `anchor` is the phrase of the source text the entry
/// transcribes, kept for cross-referencing in listings.
struct SystemSpec {
  std::string id;
  std::string anchor;
  std::string summary;
  std::vector<std::string> coords;
  std::vector<ParamSpec> params;
  bool bihamiltonian = false;  // build_pair available
  bool deformed = false;       // carries eta, limit_eta_zero available
};

/// Stable ordering: rikitake-general, case-a, case-b-pencil, case-ab-pencil,
/// case-a-book, case-a-heisenberg, case-ab-deformed, case-ab-primed.
const std::vector<SystemSpec>& catalog();

/// Throws ParameterError for unknown ids.
const SystemSpec& find_spec(const std::string& id);

/// Defaults filled in; unknown names and non-finite values raise ParameterError.
Params resolve_params(const std::string& id, const Params& given = {});

/// Builds the entry at the given parameters. Pencil entries return the member
/// at `lambda` with Hamiltonian H0 + H1 (the printed H0 or H1 at lambda = 0, 1),
/// which generates the same flow for every lambda.
///
/// The central generator of case B is labeled I (W in the cocommutator basis).
/// Deformed entries reject eta = 0; use limit_eta_zero instead.
HamiltonianSystem build(const std::string& id, const Params& params = {});

/// The two Hamiltonian structures of a bi-Hamiltonian entry: (Pi_0, H_0), (Pi_1, H_1).
std::pair<HamiltonianSystem, HamiltonianSystem> build_pair(const std::string& id,
                                                           const Params& params = {});

/// Hand-coded eta -> 0 form of a deformed entry: the undeformed bracket and the
/// limit Casimir, with the Hamiltonian's limit.
HamiltonianSystem limit_eta_zero(const std::string& id, const Params& params = {});

/// build() for eta != 0, limit_eta_zero() for eta == 0.
HamiltonianSystem build_or_limit(const std::string& id, const Params& params = {});

/// ||Pi_0 grad H_0 - Pi_1 grad H_1||_max at x.
double bihamiltonian_agreement(const std::string& id, const Params& params, const Vector& x);
double bihamiltonian_agreement(const std::pair<HamiltonianSystem, HamiltonianSystem>& pair,
                               const Vector& x);

/// (0.5, 1, 1), padded with I = 1 for the 4D entry.
Vector figure_initial_condition(const std::string& id);

/// Numerically safe pieces of the deformed brackets; a series is used for |eta| < 1e-8.
double sinh_over(double eta, double z);         // sinh(eta z) / eta
double exp2_minus1_over(double eta, double z);  // (e^{2 eta z} - 1) / (2 eta)
double cosh_minus1_over_sq(double eta, double z);  // (cosh(eta z) - 1) / eta^2

/// Named building blocks reused by other modules.
PoissonStructure poincare_structure();
PoissonStructure ab_pencil_structure(double lambda);
PoissonStructure book_structure(double eta);
PoissonStructure heisenberg_structure(double eta);
PoissonStructure ab_deformed_structure(double lambda, double eta);
PoissonStructure primed_structure(double lambda, double eta);

ScalarField hamiltonian_a(double alpha);  // (x^2+z^2)/2 - alpha log(x+y), needs x+y > 0
ScalarField casimir_a();                  // (y^2-x^2)/4
ScalarField primed_hamiltonian(double lambda, double eta);
ScalarField primed_casimir(double lambda, double eta);

/// One-copy primed flow x' = y' sinh(eta z')/eta, y' = x' sinh(eta z')/eta, z' = -x'y'.
Vector primed_rhs(const Vector& s, double eta);

}  // namespace rikitake
