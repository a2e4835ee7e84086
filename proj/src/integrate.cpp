#include "rikitake/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rikitake {

std::string to_string(Method m) { return m == Method::Rk4Fixed ? "rk4-fixed" : "adaptive-45"; }

Method parse_method(const std::string& name) {
  if (name == "rk4-fixed") return Method::Rk4Fixed;
  if (name == "adaptive-45") return Method::Adaptive45;
  throw ParameterError("method: expected rk4-fixed or adaptive-45, got '" + name + "'");
}

std::string to_string(TrajectoryStatus s) {
  switch (s) {
    case TrajectoryStatus::Complete: return "complete";
    case TrajectoryStatus::MaxSteps: return "max-steps";
    case TrajectoryStatus::StepUnderflow: return "step-underflow";
    case TrajectoryStatus::DomainError: return "domain-error";
  }
  return "unknown";
}

void IntegratorConfig::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0) || !std::isfinite(v)) throw ParameterError(std::string(name) + " must be positive");
  };
  positive(t_end, "t_end");
  if (method == Method::Rk4Fixed) positive(h, "h");
  else if (!(h >= 0) || !std::isfinite(h)) throw ParameterError("h must be nonnegative");
  positive(abs_tol, "abs_tol");
  positive(rel_tol, "rel_tol");
  if (!(sample_dt >= 0) || !std::isfinite(sample_dt)) throw ParameterError("sample_dt must be nonnegative");
  if (sample_stride < 1) throw ParameterError("sample_stride must be at least 1");
  if (max_steps == 0) throw ParameterError("max_steps must be positive");
}

std::vector<double> Trajectory::drift() const {
  if (invariant_values.empty()) return {};
  const auto& first = invariant_values.front();
  std::vector<double> out(first.size(), 0.0);
  for (const auto& row : invariant_values)
    for (std::size_t i = 0; i < row.size(); ++i)
      out[i] = std::max(out[i], std::abs(row[i] - first[i]) / std::max(1.0, std::abs(first[i])));
  return out;
}

double Trajectory::max_drift() const {
  const auto d = drift();
  return d.empty() ? 0.0 : *std::max_element(d.begin(), d.end());
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

constexpr double kSafety = 0.9;
constexpr double kBeta = 0.04;           // PI term
constexpr double kAlpha = 0.2 - 0.75 * kBeta;
constexpr double kMinFactor = 0.2, kMaxFactor = 10.0;
constexpr double kMinStep = 1e-12;

class Recorder {
public:
  Recorder(Trajectory& traj, const std::vector<ScalarField>& invariants, int stride)
      : traj_(traj), invariants_(invariants), stride_(stride) {}

  /// Evaluates invariants first so a domain error leaves the trajectory untouched.
  void record(double t, const Vector& x, bool force = false) {
    const bool keep = force || (count_ % stride_ == 0);
    ++count_;
    if (!keep) {
      pending_ = {t, x};
      return;
    }
    push(t, x);
  }

  /// Makes sure the last visited state is stored.
  void flush() {
    if (pending_ && (traj_.times.empty() || traj_.times.back() < pending_->first)) {
      try {
        push(pending_->first, pending_->second);
      } catch (const DomainError&) {
      }
    }
    pending_.reset();
  }

private:
  void push(double t, const Vector& x) {
    std::vector<double> values;
    values.reserve(invariants_.size());
    for (const auto& f : invariants_) values.push_back(f(x));
    traj_.times.push_back(t);
    traj_.states.push_back(x);
    traj_.invariant_values.push_back(std::move(values));
    pending_.reset();
  }

  Trajectory& traj_;
  const std::vector<ScalarField>& invariants_;
  int stride_;
  std::size_t count_ = 0;
  std::optional<std::pair<double, Vector>> pending_;
};

void rk4(const HamiltonianSystem::VectorFieldFn& f, const Vector& x0, const IntegratorConfig& cfg,
         Trajectory& traj, Recorder& rec) {
  const auto n = static_cast<std::size_t>(std::ceil(cfg.t_end / cfg.h - 1e-9));
  const double h = cfg.t_end / static_cast<double>(n);
  const std::size_t every =
      cfg.sample_dt > 0 ? std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(cfg.sample_dt / h))) : 1;
  Vector x = x0;
  for (std::size_t i = 1; i <= n; ++i) {
    if (i > cfg.max_steps) {
      traj.status = TrajectoryStatus::MaxSteps;
      traj.message = "max_steps reached";
      return;
    }
    const Vector k1 = f(x);
    const Vector k2 = f(x + h / 2 * k1);
    const Vector k3 = f(x + h / 2 * k2);
    const Vector k4 = f(x + h * k3);
    const Vector next = x + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    if (!next.allFinite()) throw DomainError("state", "non-finite state");
    x = next;
    ++traj.accepted_steps;
    if (i % every == 0 || i == n) rec.record(static_cast<double>(i) * h, x, i == n);
  }
}

double error_norm(const Vector& err, const Vector& x, const Vector& next, const IntegratorConfig& cfg) {
  double sum = 0;
  for (Eigen::Index i = 0; i < err.size(); ++i) {
    const double scale = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(x[i]), std::abs(next[i]));
    const double r = err[i] / scale;
    sum += r * r;
  }
  return std::sqrt(sum / static_cast<double>(err.size()));
}

double initial_step(const HamiltonianSystem::VectorFieldFn& f, const Vector& x0, const Vector& f0,
                    const IntegratorConfig& cfg) {
  // Simplified Hairer-Wanner starting step.
  auto scaled = [&](const Vector& v) {
    double s = 0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      const double r = v[i] / (cfg.abs_tol + cfg.rel_tol * std::abs(x0[i]));
      s += r * r;
    }
    return std::sqrt(s / static_cast<double>(v.size()));
  };
  const double d0 = scaled(x0), d1 = scaled(f0);
  double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
  h0 = std::min(h0, cfg.t_end / 10);
  const Vector f1 = f(x0 + h0 * f0);
  const double d2 = scaled(f1 - f0) / h0;
  const double m = std::max(d1, d2);
  const double h1 = m <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / m, 1.0 / 5);
  return std::min(100 * h0, h1);
}

void dopri(const HamiltonianSystem::VectorFieldFn& f, const Vector& x0, const IntegratorConfig& cfg,
           Trajectory& traj, Recorder& rec) {
  const double h_max = cfg.t_end / 10;
  Vector x = x0;
  Vector k1 = f(x);
  double t = 0;
  double h = cfg.h > 0 ? cfg.h : initial_step(f, x0, k1, cfg);
  h = std::clamp(h, kMinStep, h_max);
  double err_old = 1e-4;
  std::size_t grid_index = 1;
  std::size_t steps = 0;

  while (t < cfg.t_end) {
    if (steps++ >= cfg.max_steps) {
      traj.status = TrajectoryStatus::MaxSteps;
      traj.message = "max_steps reached at t = " + std::to_string(t);
      return;
    }
    // Land exactly on the next output time (grid or t_end).
    double target = cfg.t_end;
    if (cfg.sample_dt > 0)
      target = std::min(cfg.t_end, static_cast<double>(grid_index) * cfg.sample_dt);
    double step = h;
    bool hits_target = false;
    if (t + step >= target - 1e-12 * std::max(1.0, std::abs(target))) {
      step = target - t;
      hits_target = true;
    }

    const Vector k2 = f(x + step * (a21 * k1));
    const Vector k3 = f(x + step * (a31 * k1 + a32 * k2));
    const Vector k4 = f(x + step * (a41 * k1 + a42 * k2 + a43 * k3));
    const Vector k5 = f(x + step * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const Vector k6 = f(x + step * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    const Vector next = x + step * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const Vector k7 = f(next);
    const Vector err = step * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    double e = error_norm(err, x, next, cfg);
    if (!std::isfinite(e)) e = 1e10;

    const double fac_pi = std::pow(e, kAlpha) / std::pow(err_old, kBeta);
    const double fac = std::clamp(fac_pi / kSafety, 1 / kMaxFactor, 1 / kMinFactor);

    if (e <= 1.0) {
      t = hits_target ? target : t + step;
      x = next;
      k1 = k7;
      err_old = std::max(e, 1e-4);
      ++traj.accepted_steps;
      const bool at_end = t >= cfg.t_end;
      if (cfg.sample_dt <= 0) {
        rec.record(t, x, at_end);
      } else if (hits_target) {
        rec.record(t, x, at_end);
        ++grid_index;
      }
      // Clamped steps do not inform the controller's proposal for the next one.
      if (!hits_target || step >= h) h = std::clamp(step / fac, kMinStep, h_max);
    } else {
      ++traj.rejected_steps;
      h = step / std::min(1 / kMinFactor, std::pow(e, kAlpha) / kSafety);
      if (h < kMinStep) {
        traj.status = TrajectoryStatus::StepUnderflow;
        traj.message = "step size fell below 1e-12 at t = " + std::to_string(t);
        return;
      }
    }
  }
}

}  // namespace

Trajectory integrate(const HamiltonianSystem::VectorFieldFn& f, const std::vector<std::string>& coords,
                     const std::vector<ScalarField>& invariants, const Vector& x0,
                     const IntegratorConfig& config) {
  config.validate();
  if (static_cast<std::size_t>(x0.size()) != coords.size())
    throw ContractError("integrate: initial state has " + std::to_string(x0.size()) + " entries for " +
                        std::to_string(coords.size()) + " coordinates");
  Trajectory traj;
  traj.config = config;
  traj.coords = coords;
  for (const auto& inv : invariants) traj.invariant_names.push_back(inv.name());
  Recorder rec(traj, invariants, config.sample_stride);
  rec.record(0.0, x0, true);  // domain errors at x0 propagate to the caller
  try {
    if (config.method == Method::Rk4Fixed) rk4(f, x0, config, traj, rec);
    else dopri(f, x0, config, traj, rec);
  } catch (const DomainError& e) {
    traj.status = TrajectoryStatus::DomainError;
    traj.message = e.what();
  }
  rec.flush();
  return traj;
}

Trajectory integrate(const HamiltonianSystem& system, const Vector& x0, const IntegratorConfig& config) {
  const auto f = [&system](const Vector& x) { return vector_field(system, x); };
  Trajectory traj = integrate(f, system.coords, system.invariants, x0, config);
  traj.system_id = system.id;
  traj.params = system.params;
  return traj;
}

std::optional<OrbitClosure> orbit_closure(const Trajectory& traj, double eps) {
  if (!(eps > 0)) throw ParameterError("orbit_closure: eps must be positive");
  if (traj.states.size() < 2) return std::nullopt;
  const Vector& x0 = traj.states.front();
  bool left = false;
  std::optional<OrbitClosure> best;
  for (std::size_t k = 1; k < traj.states.size(); ++k) {
    const Vector& a = traj.states[k - 1];
    const Vector& b = traj.states[k];
    if (!left) {
      left = (b - x0).norm() > 2 * eps;
      continue;
    }
    const Vector ab = b - a;
    const double len2 = ab.squaredNorm();
    const double u = len2 > 0 ? std::clamp((x0 - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
    const double d = (a + u * ab - x0).norm();
    if (d <= eps) {
      if (!best || d < best->distance)
        best = OrbitClosure{traj.times[k - 1] + u * (traj.times[k] - traj.times[k - 1]), d};
    } else if (best) {
      break;  // the first return passage is over
    }
  }
  return best;
}

}  // namespace rikitake
