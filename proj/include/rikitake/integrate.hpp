#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rikitake/poisson.hpp"

namespace rikitake {

enum class Method { Rk4Fixed, Adaptive45 };

std::string to_string(Method m);
Method parse_method(const std::string& name);  // "rk4-fixed" | "adaptive-45"

struct IntegratorConfig {
  Method method = Method::Adaptive45;
  double h = 1e-2;          // fixed step, or initial step for adaptive-45 (0 picks one)
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  double t_end = 50;
  std::size_t max_steps = 20'000'000;
  /// Output grid spacing. Adaptive steps are clamped to land on multiples of
  /// sample_dt; 0 records every accepted step.
  double sample_dt = 0;
  int sample_stride = 1;    // keep every k-th recorded sample (the last one always)

  /// Throws ParameterError naming the offending field.
  void validate() const;
};

enum class TrajectoryStatus { Complete, MaxSteps, StepUnderflow, DomainError };
std::string to_string(TrajectoryStatus s);

struct Trajectory {
  std::string system_id;
  std::map<std::string, double> params;
  IntegratorConfig config;
  std::uint64_t seed = kSampleSeed;

  std::vector<std::string> coords;
  std::vector<std::string> invariant_names;
  std::vector<double> times;
  std::vector<Vector> states;
  std::vector<std::vector<double>> invariant_values;  // [sample][invariant]

  TrajectoryStatus status = TrajectoryStatus::Complete;
  std::string message;  // diagnostic for truncated runs
  std::size_t accepted_steps = 0;
  std::size_t rejected_steps = 0;

  bool truncated() const noexcept { return status != TrajectoryStatus::Complete; }
  std::size_t size() const noexcept { return times.size(); }

  /// max_t |I(t) - I(0)| / max(1, |I(0)|) per invariant.
  std::vector<double> drift() const;
  double max_drift() const;
};

/// Integrates vector_field(system, .) from x0. Domain errors raised by the
/// field or an invariant end the run with the last valid state kept.
Trajectory integrate(const HamiltonianSystem& system, const Vector& x0, const IntegratorConfig& config);

/// Same for a bare right-hand side.
Trajectory integrate(const HamiltonianSystem::VectorFieldFn& f, const std::vector<std::string>& coords,
                     const std::vector<ScalarField>& invariants, const Vector& x0,
                     const IntegratorConfig& config);

struct OrbitClosure {
  double period;
  double distance;  // closest approach to x0 during the first return
};

/// First return to within eps of the initial state after leaving the ball of
/// radius 2 eps; the closest point is located on the polyline of samples.
std::optional<OrbitClosure> orbit_closure(const Trajectory& traj, double eps);

}  // namespace rikitake
