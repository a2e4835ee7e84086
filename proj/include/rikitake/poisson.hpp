#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rikitake/errors.hpp"

namespace rikitake {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Fixed seed for every randomized property check in the library and tests.
inline constexpr std::uint64_t kSampleSeed = 0x5249'4b49'5441'4b45ULL;  // "RIKITAKE"

/// Central finite-difference step used for gradient and Jacobi cross-checks.
inline constexpr double kFiniteDifferenceStep = 1e-6;

/// A labeled point of phase space.
class StatePoint {
public:
  StatePoint(Vector coords, std::vector<std::string> names);

  const Vector& coords() const noexcept { return coords_; }
  const std::vector<std::string>& names() const noexcept { return names_; }
  int dim() const noexcept { return static_cast<int>(coords_.size()); }
  double operator[](int i) const { return coords_[i]; }

  operator const Vector&() const noexcept { return coords_; }  // NOLINT

private:
  Vector coords_;
  std::vector<std::string> names_;
};

/// Real-valued function on R^arity with a hand-coded gradient.
///
/// Evaluation outside the declared domain, or a non-finite value or gradient,
/// throws DomainError carrying the field name. Fields are immutable and cheap
/// to copy (the callables are shared).
class ScalarField {
public:
  using EvalFn = std::function<double(const Vector&)>;
  using GradFn = std::function<Vector(const Vector&)>;
  using DomainFn = std::function<bool(const Vector&)>;

  ScalarField(std::string name, int arity, EvalFn eval, GradFn grad,
              DomainFn domain = {}, std::string domain_note = {});

  double operator()(const Vector& x) const;
  Vector gradient(const Vector& x) const;
  bool in_domain(const Vector& x) const;

  const std::string& name() const noexcept { return name_; }
  int arity() const noexcept { return arity_; }
  ScalarField renamed(std::string name) const;

private:
  void check(const Vector& x) const;

  std::string name_;
  int arity_;
  EvalFn eval_;
  GradFn grad_;
  DomainFn domain_;
  std::string domain_note_;
};

/// Central differences of f at x with step h.
Vector finite_difference_gradient(const ScalarField& f, const Vector& x,
                                  double h = kFiniteDifferenceStep);

/// Max relative mismatch |analytic - fd| / max(1, |analytic|) over components.
double gradient_check(const ScalarField& f, const Vector& x,
                      double h = kFiniteDifferenceStep);

/// Antisymmetric bivector field Pi(x) over named coordinates.
///
/// Only the strictly upper triangle (i < j) is supplied by the caller; the
/// lower triangle is mirrored with a sign flip, so antisymmetry is exact.
class PoissonStructure {
public:
  /// Fills pi(i, j) for i < j. The matrix arrives zeroed.
  using UpperFn = std::function<void(const Vector&, Matrix&)>;
  /// Fills partials[l](i, j) = d Pi^{ij} / d x_l for i < j. Matrices arrive zeroed.
  using UpperPartialsFn = std::function<void(const Vector&, std::vector<Matrix>&)>;

  PoissonStructure(std::string name, std::vector<std::string> coords, UpperFn upper,
                   UpperPartialsFn partials = {}, std::vector<ScalarField> casimirs = {});

  const std::string& name() const noexcept { return name_; }
  int dim() const noexcept { return static_cast<int>(coords_.size()); }
  const std::vector<std::string>& coords() const noexcept { return coords_; }
  const std::vector<ScalarField>& casimirs() const noexcept { return casimirs_; }
  bool has_analytic_partials() const noexcept { return static_cast<bool>(partials_); }

  Matrix pi(const Vector& x) const;

  /// Analytic partials when available, otherwise central finite differences.
  std::vector<Matrix> partials(const Vector& x) const;
  std::vector<Matrix> finite_difference_partials(const Vector& x,
                                                 double h = kFiniteDifferenceStep) const;

  PoissonStructure with_casimir(ScalarField c) const;
  PoissonStructure without_analytic_partials() const;
  PoissonStructure renamed(std::string name) const;

private:
  void check_dim(const Vector& x) const;

  std::string name_;
  std::vector<std::string> coords_;
  UpperFn upper_;
  UpperPartialsFn partials_;
  std::vector<ScalarField> casimirs_;
};

/// A flow x' = F(x). Hamiltonian entries carry a structure and Hamiltonian with
/// F = Pi grad H; `handcoded_vf` holds the explicit right-hand side when known.
struct HamiltonianSystem {
  using VectorFieldFn = std::function<Vector(const Vector&)>;

  std::string id;
  std::vector<std::string> coords;
  std::optional<PoissonStructure> structure;
  std::optional<ScalarField> hamiltonian;
  std::vector<ScalarField> invariants;
  VectorFieldFn handcoded_vf;
  std::map<std::string, double> params;

  int dim() const noexcept { return static_cast<int>(coords.size()); }
  bool is_hamiltonian() const noexcept { return structure.has_value() && hamiltonian.has_value(); }
};

enum class PartialsMode { Automatic, Analytic, FiniteDifference };

/// {f, g}(x) = grad f . Pi(x) . grad g
double bracket(const PoissonStructure& structure, const ScalarField& f, const ScalarField& g,
               const Vector& x);

/// Pi(x) grad H(x). Throws ContractError for non-Hamiltonian systems.
Vector hamiltonian_vector_field(const HamiltonianSystem& system, const Vector& x);

/// The hand-coded right-hand side when present, otherwise Pi grad H.
Vector vector_field(const HamiltonianSystem& system, const Vector& x);

/// max over i<j<k of the cyclic Schouten sum; zero for Poisson bivectors.
double jacobi_residual(const PoissonStructure& structure, const Vector& x,
                       PartialsMode mode = PartialsMode::Automatic);

/// max_i |{c, x_i}(x)|
double casimir_residual(const PoissonStructure& structure, const ScalarField& c, const Vector& x);

/// {x,y} = f dF/dz, {y,z} = f dF/dx, {z,x} = f dF/dy, with F registered as Casimir.
/// With F = (y^2 - x^2)/4 the Poincare bracket needs f = -2; with
/// F = (x^2 + y^2 + 2 z^2)/4 the so(3) bracket needs f = 2.
PoissonStructure generic3d(const ScalarField& f, const ScalarField& F);

/// Block-diagonal bracket on the concatenated coordinates. Coordinates are
/// suffixed "1"/"2" and each factor's Casimirs are lifted to the sum.
PoissonStructure direct_sum(const PoissonStructure& a, const PoissonStructure& b);

/// Compose a field on R^n with the projection onto coordinates [offset, offset+n) of R^total.
ScalarField lift(const ScalarField& f, int offset, int total, std::string name);

/// Uniform samples in [lo, hi]^dim, keeping only points accepted by `keep`.
std::vector<Vector> sample_points(int dim, int count, double lo, double hi,
                                  std::uint64_t seed = kSampleSeed,
                                  const std::function<bool(const Vector&)>& keep = {});

/// Coordinate function x_i as a ScalarField.
ScalarField coordinate(int index, int arity, std::string name);

}  // namespace rikitake
