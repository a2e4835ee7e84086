#include "doctest.h"

#include <cmath>

#include "rikitake/coupling.hpp"
#include "rikitake/integrate.hpp"
#include "rikitake/systems.hpp"

using namespace rikitake;

namespace {

Vector v3(double a, double b, double c) { return (Vector(3) << a, b, c).finished(); }
Vector v6(double a, double b, double c, double d, double e, double f) {
  return (Vector(6) << a, b, c, d, e, f).finished();
}
Vector join(const Vector& a, const Vector& b) {
  Vector out(a.size() + b.size());
  out << a, b;
  return out;
}

std::vector<Vector> points6(int count = 100, double lo = -1, double hi = 1) {
  return sample_points(6, count, lo, hi, kSampleSeed);
}

}  // namespace

TEST_CASE("closed-form coproducts match the group law") {
  struct Case {
    MatrixLieGroupRep rep;
    CoproductMap (*make)(double);
  };
  const std::vector<Case> cases{{book_group_rep(), book_coproduct},
                                {heisenberg_group_rep(), heisenberg_coproduct},
                                {primed_book_group_rep(), primed_coproduct}};
  for (const auto& c : cases) {
    for (double eta : {-0.5, 1.0, 2.0}) {
      const auto cp = c.make(eta);
      double worst = 0;
      for (const auto& s : points6()) {
        const Vector oracle = coproduct_from_group(c.rep, s.head(3), s.tail(3), eta);
        worst = std::max(worst, (oracle - cp.apply(s)).cwiseAbs().maxCoeff());
      }
      CAPTURE(cp.name);
      CHECK(worst < 1e-12);
    }
  }
}

TEST_CASE("group oracle examples") {
  const auto book = book_group_rep();
  for (double eta : {-1.0, 0.5, 2.0}) {
    const Vector d = coproduct_from_group(book, v3(1, 0, 0), v3(0, 1, 0), eta);
    CHECK(d[0] == doctest::Approx(1).epsilon(1e-14));
    CHECK(d[1] == doctest::Approx(1).epsilon(1e-14));
    CHECK(std::abs(d[2]) < 1e-14);
    const Vector s1 = v3(0.3, -0.7, 1.1);
    CHECK((coproduct_from_group(book, s1, v3(0, 0, 0), eta) - s1).cwiseAbs().maxCoeff() < 1e-14);
  }

  // Heisenberg-Weyl: the product fixes z1 + z2 - eta y1 x2 = 3 + 6 - 2*4 = 1.
  const Vector h = coproduct_from_group(heisenberg_group_rep(), v3(1, 2, 3), v3(4, 5, 6), 1);
  CHECK(h[0] == doctest::Approx(5));
  CHECK(h[1] == doctest::Approx(7));
  CHECK(h[2] == doctest::Approx(1));
  const Vector s = v6(1, 2, 3, 4, 5, 6);
  CHECK(heisenberg_coproduct(1).apply(s)[2] == doctest::Approx(1));
  CHECK(heisenberg_coproduct_tensor_reading(1).apply(s)[2] == doctest::Approx(4));
}

TEST_CASE("apply_coproduct examples and counit") {
  for (double eta : {-2.0, 0.0, 1.0}) {
    const Vector p = apply_coproduct(primed_coproduct(eta), v6(1, 0, 0, 0, 0, 0));
    CHECK((p - v3(1, 0, 0)).cwiseAbs().maxCoeff() == 0);
  }
  CHECK(apply_coproduct(primed_coproduct(1), v6(0, 0, 2, 0, 0, 3))[2] == 5);
  CHECK(apply_coproduct(primed_coproduct(0), v6(1, 0, 0, 1, 0, 0))[0] == 2);

  for (const auto& cp : {book_coproduct(1.5), heisenberg_coproduct(-0.7), primed_coproduct(2), primitive_coproduct()}) {
    for (const auto& s : points6(20)) {
      const Vector left = join(s.head(3), Vector::Zero(3));
      const Vector right = join(Vector::Zero(3), s.head(3));
      CHECK((cp.apply(left) - s.head(3)).cwiseAbs().maxCoeff() < 1e-15);
      CHECK((cp.apply(right) - s.head(3)).cwiseAbs().maxCoeff() < 1e-15);
    }
  }
}

TEST_CASE("coproducts are coassociative") {
  const auto points = sample_points(9, 50, -1, 1, kSampleSeed);
  for (const auto& cp : {book_coproduct(1.5), heisenberg_coproduct(-0.7), primed_coproduct(2)}) {
    double worst = 0;
    for (const auto& s : points) {
      const Vector a = cp.apply(join(cp.apply(s.head(6)), s.tail(3)));
      const Vector b = cp.apply(join(s.head(3), cp.apply(s.tail(6))));
      worst = std::max(worst, (a - b).cwiseAbs().maxCoeff());
    }
    CAPTURE(cp.name);
    CHECK(worst < 1e-12);
  }
  for (const auto& rep : {book_group_rep(), heisenberg_group_rep(), primed_book_group_rep()}) {
    for (const auto& s : points) {
      const Eigen::Matrix3d g1 = rep.element(s.segment<3>(0), 1.3), g2 = rep.element(s.segment<3>(3), 1.3),
                            g3 = rep.element(s.segment<3>(6), 1.3);
      CHECK(((g1 * g2) * g3 - g1 * (g2 * g3)).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("coproduct gradients agree with finite differences") {
  for (const auto& cp : {book_coproduct(1.5), heisenberg_coproduct(-0.7), primed_coproduct(2)}) {
    for (const auto& f : cp.components) {
      for (const auto& s : points6(10)) CHECK(gradient_check(f, s) < 1e-6);
    }
  }
}

TEST_CASE("coproducts are Poisson maps") {
  const auto pts = points6();
  auto worst = [&](const PoissonStructure& p, const CoproductMap& cp) {
    double w = 0;
    for (const auto& s : pts) w = std::max(w, poisson_map_residual(p, cp, s));
    return w;
  };
  for (double eta : {-0.5, 1.0, 2.0}) {
    CHECK(worst(book_structure(eta), book_coproduct(eta)) < 1e-9);
    CHECK(worst(heisenberg_structure(eta), heisenberg_coproduct(eta)) < 1e-9);
    // The opposite group law is also a Poisson map here; only the product oracle separates the two.
    CHECK(worst(heisenberg_structure(eta), heisenberg_coproduct_tensor_reading(eta)) < 1e-9);
    for (double lambda : {0.0, 0.25, 1.0}) CHECK(worst(primed_structure(lambda, eta), primed_coproduct(eta)) < 1e-9);
  }
  CHECK(worst(poincare_structure(), primitive_coproduct()) < 1e-14);
  CHECK(poisson_map_residual(book_structure(1), heisenberg_coproduct(1), pts[0]) > 1e-3);
}

TEST_CASE("cluster chart round trip") {
  for (double eta : {-2.0, 0.0, 1.0, 2.0}) {
    double worst = 0;
    for (const auto& s : points6()) {
      worst = std::max(worst, (from_cluster(to_cluster(s, eta), eta) - s).cwiseAbs().maxCoeff());
      worst = std::max(worst, (to_cluster(from_cluster(s, eta), eta) - s).cwiseAbs().maxCoeff());
    }
    CHECK(worst < 1e-12);
  }
}

TEST_CASE("cluster equations") {
  const Vector c = v6(0.5, 1, 1, 0.3, 0.8, -0.2);
  const Vector f1 = cluster_rhs(1, 1, c);
  CHECK(f1[0] == doctest::Approx(std::sinh(1.0)).epsilon(1e-14));
  CHECK(f1[1] == doctest::Approx(0.5 * std::sinh(1.0)).epsilon(1e-14));
  CHECK(f1[2] == doctest::Approx(-0.5).epsilon(1e-14));

  for (const auto& p : sample_points(6, 50, -1, 1, kSampleSeed)) {
    const Vector a = cluster_rhs(0, 0.7, p), b = cluster_rhs(1, 0.7, p);
    CHECK((a.head(3) - b.head(3)).cwiseAbs().maxCoeff() == 0);
    CHECK((a.head(3) - primed_rhs(p.head(3), 0.7)).cwiseAbs().maxCoeff() < 1e-15);
  }
  const Vector a = cluster_rhs(0, 1, c), b = cluster_rhs(1, 1, c);
  CHECK((a.tail(3) - b.tail(3)).cwiseAbs().maxCoeff() > 1e-2);
  CHECK_THROWS_AS(cluster_rhs(2, 1, c), ParameterError);
}

TEST_CASE("hand-coded cluster equations agree with the Hamiltonian field") {
  for (int lambda : {0, 1}) {
    for (double eta : {-1.0, 0.0, 1.0, 2.0}) {
      const auto sys = coupled_system(lambda, eta);
      double worst = 0;
      for (const auto& s : points6()) {
        const Vector hand = sys.handcoded_vf(s);
        const Vector ham = hamiltonian_vector_field(sys, s);
        worst = std::max(worst, (hand - ham).cwiseAbs().maxCoeff() / std::max(1.0, ham.cwiseAbs().maxCoeff()));
      }
      CAPTURE(lambda);
      CAPTURE(eta);
      CHECK(worst < 1e-10);
    }
  }
}

TEST_CASE("cluster dynamics residual") {
  double worst = 0;
  for (const auto& s : points6()) worst = std::max(worst, cluster_dynamics_residual(1, 1, s));
  CHECK(worst < 1e-8);
  for (const auto& s : points6(20)) CHECK(cluster_dynamics_residual(0, 1, s) < 1e-8);

  const auto flat = coupled_system(1, 0);
  const auto one = [](const Vector& x) { return primed_rhs(x, 0); };
  for (const auto& s : points6(20)) CHECK(cluster_dynamics_residual(flat, primitive_coproduct(), one, s) < 1e-10);

  const auto sys = coupled_system(1, 1);
  const auto deformed = [](const Vector& x) { return primed_rhs(x, 1); };
  CHECK(cluster_dynamics_residual(sys, primitive_coproduct(), deformed, points6()[3]) > 1e-3);
}

TEST_CASE("coupled flow conserves the coproduct invariants") {
  IntegratorConfig cfg;
  cfg.t_end = 20;
  cfg.sample_dt = 0.1;
  for (int lambda : {0, 1}) {
    const auto sys = coupled_system(lambda, 1);
    const auto traj = integrate(sys, v6(0.5, 1, 1, 0.3, 0.8, -0.2), cfg);
    REQUIRE(traj.status == TrajectoryStatus::Complete);
    CHECK(sys.invariants.size() == 4);
    for (double d : traj.drift()) CHECK(d < 1e-6);
  }
}
