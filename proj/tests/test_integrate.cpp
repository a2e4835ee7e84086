#include "doctest.h"

#include <cmath>
#include <numbers>

#include "rikitake/integrate.hpp"
#include "rikitake/systems.hpp"

using namespace rikitake;

namespace {

Vector v3(double a, double b, double c) { return (Vector(3) << a, b, c).finished(); }

IntegratorConfig adaptive(double t_end, double tol = 1e-10) {
  IntegratorConfig c;
  c.t_end = t_end;
  c.abs_tol = c.rel_tol = tol;
  c.h = 0;
  return c;
}

Trajectory harmonic(double t_end, double sample_dt = 0) {
  auto cfg = adaptive(t_end);
  cfg.sample_dt = sample_dt;
  return integrate([](const Vector& x) { return Vector((Vector(2) << x[1], -x[0]).finished()); }, {"x", "y"}, {},
                   (Vector(2) << 1, 0).finished(), cfg);
}

}  // namespace

TEST_CASE("config validation") {
  IntegratorConfig c;
  CHECK_NOTHROW(c.validate());
  c.t_end = 0;
  CHECK_THROWS_AS(c.validate(), ParameterError);
  c = IntegratorConfig{};
  c.method = Method::Rk4Fixed;
  c.h = 0;
  CHECK_THROWS_AS(c.validate(), ParameterError);
  c = IntegratorConfig{};
  c.abs_tol = -1;
  CHECK_THROWS_AS(c.validate(), ParameterError);
  CHECK(parse_method("rk4-fixed") == Method::Rk4Fixed);
  CHECK_THROWS_AS(parse_method("euler"), ParameterError);
}

TEST_CASE("harmonic oscillator") {
  const auto t = harmonic(10);
  CHECK_FALSE(t.truncated());
  CHECK(t.times.back() == 10.0);
  CHECK(std::abs(t.states.back()[0] - std::cos(10.0)) < 1e-8);
  for (std::size_t i = 1; i < t.times.size(); ++i) CHECK(t.times[i] > t.times[i - 1]);
  const auto c = orbit_closure(t, 1e-3);
  REQUIRE(c.has_value());
  CHECK(std::abs(c->period - 2 * std::numbers::pi) < 1e-4);
  CHECK(c->distance < 1e-3);
}

TEST_CASE("sample grid") {
  const auto t = harmonic(1, 0.1);
  REQUIRE(t.times.size() == 11);
  for (std::size_t i = 0; i < t.times.size(); ++i) CHECK(t.times[i] == doctest::Approx(0.1 * static_cast<double>(i)).epsilon(1e-12));
  CHECK(std::abs(t.states.back()[0] - std::cos(1.0)) < 1e-9);
  auto cfg = adaptive(1);
  cfg.sample_stride = 3;
  cfg.sample_dt = 0.1;
  const auto s = integrate([](const Vector& x) { return Vector(-x); }, {"u"}, {}, Vector::Ones(1), cfg);
  CHECK(s.times.size() == 5);  // 0, 0.3, 0.6, 0.9 and the final 1.0
  CHECK(s.times.back() == 1.0);
}

TEST_CASE("equilibrium stays put and has no closure") {
  const auto s = build("case-ab-pencil");
  const auto t = integrate(s, v3(0, 0, 1), adaptive(10));
  CHECK_FALSE(t.truncated());
  CHECK(t.states.back() == v3(0, 0, 1));
  CHECK_FALSE(orbit_closure(t, 1e-3).has_value());
}

TEST_CASE("book-deformed case A conserves H and C_eta") {
  const auto s = build("case-a-book", {{"alpha", 1}, {"eta", 1}});
  const auto t = integrate(s, v3(0.5, 1, 1), adaptive(50));
  CHECK_FALSE(t.truncated());
  REQUIRE(t.invariant_names.size() == 2);
  for (double d : t.drift()) CHECK(d < 1e-6);
}

TEST_CASE("book orbit closes") {
  auto cfg = adaptive(50);
  cfg.sample_dt = 0.01;
  const auto t = integrate(build("case-a-book"), v3(0.5, 1, 1), cfg);
  const auto c = orbit_closure(t, 1e-3);
  REQUIRE(c.has_value());
  CHECK(c->distance < 1e-3);
  CHECK(c->period == doctest::Approx(4.86060).epsilon(1e-5));  // frozen; 4.8605993 at sample_dt 1e-3
}

TEST_CASE("rk4 converges at order four") {
  const auto s = build("case-ab-pencil");
  const Vector x0 = v3(0.5, 1, 1);
  const auto ref = integrate(s, x0, adaptive(5, 1e-13)).states.back();
  auto run = [&](double h) {
    IntegratorConfig c;
    c.method = Method::Rk4Fixed;
    c.h = h;
    c.t_end = 5;
    return (integrate(s, x0, c).states.back() - ref).cwiseAbs().maxCoeff();
  };
  const double ratio = run(0.04) / run(0.02);
  CHECK(ratio == doctest::Approx(16).epsilon(0.25));
}

TEST_CASE("determinism") {
  const auto s = build("case-ab-deformed");
  const auto a = integrate(s, v3(0.5, 1, 1), adaptive(20));
  const auto b = integrate(s, v3(0.5, 1, 1), adaptive(20));
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a.times[i] == b.times[i]);
    CHECK(a.states[i] == b.states[i]);
  }
}

TEST_CASE("domain errors truncate the run") {
  const ScalarField guard("guard", 1, [](const Vector& x) { return std::sqrt(1 - x[0]); },
                          [](const Vector& x) { return Vector(Vector::Constant(1, -0.5 / std::sqrt(1 - x[0]))); },
                          [](const Vector& x) { return x[0] < 1; });
  auto cfg = adaptive(3);
  cfg.sample_dt = 0.01;
  const auto t = integrate([](const Vector&) { return Vector(Vector::Ones(1)); }, {"u"}, {guard}, Vector::Zero(1), cfg);
  CHECK(t.status == TrajectoryStatus::DomainError);
  CHECK(t.truncated());
  CHECK(t.times.back() <= 1.0);
  CHECK(t.times.back() > 0.95);
  CHECK(t.message.find("guard") != std::string::npos);

  // Blow-up of u' = u^2 at t = 1.
  const auto b = integrate([](const Vector& x) { return Vector(x.cwiseProduct(x)); }, {"u"}, {}, Vector::Ones(1), adaptive(2));
  CHECK(b.truncated());
  CHECK(b.times.back() < 1.0);

  // A domain error at the initial state is the caller's problem.
  CHECK_THROWS_AS(integrate(build("case-a"), v3(-1, 0, 0), adaptive(1)), DomainError);
}

TEST_CASE("max steps") {
  auto cfg = adaptive(10);
  cfg.max_steps = 5;
  const auto t = integrate(build("case-ab-pencil"), v3(0.5, 1, 1), cfg);
  CHECK(t.status == TrajectoryStatus::MaxSteps);
}
