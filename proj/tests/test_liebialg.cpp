#include "doctest.h"

#include "rikitake/errors.hpp"
#include "rikitake/liebialg.hpp"

#include <cmath>

using namespace rikitake;

namespace {

const std::vector<std::string> kXYZ{"X", "Y", "Z"};
const std::vector<std::string> kXYZW{"X", "Y", "Z", "W"};

Cocommutator flat4(std::initializer_list<std::pair<int, int>> entries) {
  std::vector<Rational> v(24, Rational(0));
  for (const auto& [i, value] : entries) v[static_cast<std::size_t>(i)] = value;
  return Cocommutator::from_flat(kXYZW, v);
}

// Flat layout for dim 4: i*6 + pair, pairs XY XZ XW YZ YW ZW.
Cocommutator v1() { return flat4({{5, -2}, {6, -1}, {13, -1}, {14, 1}}); }
Cocommutator v2() { return flat4({{0, -1}, {11, -2}, {15, 1}, {16, 1}}); }

bool same_constants(const LieAlgebra& a, const LieAlgebra& b) {
  if (a.dim() != b.dim()) return false;
  for (int k = 0; k < a.dim(); ++k)
    for (int i = 0; i < a.dim(); ++i)
      for (int j = 0; j < a.dim(); ++j)
        if (a.c(k, i, j) != b.c(k, i, j)) return false;
  return true;
}

std::vector<std::vector<Rational>> span_of(const std::vector<Cocommutator>& basis) {
  std::vector<std::vector<Rational>> vs;
  for (const auto& b : basis) vs.push_back(b.flatten());
  return rref_basis(vs);
}

}  // namespace

TEST_CASE("rational parsing") {
  CHECK(parse_rational("3/4") == Rational(3, 4));
  CHECK(parse_rational("-2") == Rational(-2));
  CHECK(parse_rational("0.25") == Rational(1, 4));
  CHECK(parse_rational("-1.5") == Rational(-3, 2));
  CHECK(parse_rational("0.08") == Rational(2, 25));
  CHECK(parse_rational("010") == Rational(10));
  CHECK_THROWS(parse_rational("1/0"));
  CHECK_THROWS(parse_rational("abc"));
  CHECK(to_string(Rational(-3, 6)) == "-1/2");
}

TEST_CASE("jacobi check") {
  CHECK(jacobi_check(poincare_algebra()).empty());
  CHECK(jacobi_check(so3_ab_algebra()).empty());
  CHECK(jacobi_check(extended_so3_algebra()).empty());
  CHECK(jacobi_check(extended_poincare_algebra(1)).empty());
  for (const auto& l : default_lambda_samples()) {
    CHECK(jacobi_check(case_b_pencil(1).at(l)).empty());
    CHECK(jacobi_check(case_ab_pencil().at(l)).empty());
  }

  // [X,Y]=Z, [X,Z]=Y, [Y,Z]=X is sl(2,R) in disguise: the cyclic sum cancels.
  LieAlgebra sl2(kXYZ);
  sl2.add_bracket(0, 1, 2, 1).add_bracket(0, 2, 1, 1).add_bracket(1, 2, 0, 1);
  CHECK(jacobi_check(sl2).empty());

  // [X,Y]=X, [X,Z]=Y: [[X,Y],Z] + [[Y,Z],X] + [[Z,X],Y] = Y.
  LieAlgebra bad(kXYZ);
  bad.add_bracket(0, 1, 0, 1).add_bracket(0, 2, 1, 1);
  const auto r = jacobi_check(bad);
  REQUIRE(r.size() == 1);
  CHECK(r[0].value == 1);
  CHECK(r[0].index == std::vector<int>{0, 1, 2, 1});
}

TEST_CASE("cocycle residual") {
  CHECK(cocycle_residual(poincare_algebra(), book_cocommutator()).empty());
  CHECK(cocycle_residual(poincare_algebra(), heisenberg_cocommutator()).empty());
  CHECK(cocycle_residual(so3_ab_algebra(), Cocommutator(kXYZ)).empty());
  Cocommutator d(kXYZ);
  d.add(0, 0, 1, 1);
  CHECK_FALSE(cocycle_residual(poincare_algebra(), d).empty());
  CHECK_THROWS_AS(cocycle_residual(poincare_algebra(), Cocommutator(kXYZW)), ContractError);
}

TEST_CASE("co-Jacobi residual") {
  CHECK(cojacobi_residual(book_cocommutator()).empty());
  CHECK(cojacobi_residual(heisenberg_cocommutator()).empty());
  CHECK(cojacobi_residual(Cocommutator(kXYZ)).empty());
  CHECK_FALSE(cojacobi_residual(case_b_cocycle_family(1, 1)).empty());
  CHECK_FALSE(cojacobi_residual(v1()).empty());
  CHECK(cojacobi_residual(flat4({{5, -2}, {6, -1}, {13, -1}, {14, 1}, {0, -1}, {11, -2}, {15, 1}, {16, 1}})).empty());
}

TEST_CASE("dualize") {
  const auto book = dualize(book_cocommutator());
  CHECK(book.labels().front() == "X*");
  CHECK(same_constants(book, book_algebra()));
  CHECK(same_constants(dualize(book_cocommutator(Rational(3, 2))), book_algebra(Rational(3, 2))));
  CHECK(same_constants(dualize(heisenberg_cocommutator()), heisenberg_algebra()));
  const auto abelian = dualize(Cocommutator(kXYZ));
  CHECK(jacobi_check(abelian).empty());
  CHECK(same_constants(abelian, LieAlgebra(kXYZ)));
  // Double duality closes back on the Poincare constants.
  CHECK(same_constants(dualize(poincare_dual_cocommutator()), poincare_algebra()));
  CHECK_THROWS_AS(dualize(case_b_cocycle_family(1, 1)), CoJacobiError);
  try {
    dualize(case_b_cocycle_family(1, 1));
  } catch (const CoJacobiError& e) {
    CHECK_FALSE(e.residuals().empty());
  }
}

TEST_CASE("flatten and render") {
  const auto d = book_cocommutator();
  CHECK(Cocommutator::from_flat(kXYZ, d.flatten()) == d);
  CHECK(d.f(0, 2, 0) == -1);
  CHECK(d.to_string() == "delta(X) = X^Z; delta(Y) = Y^Z; delta(Z) = 0");
  CHECK(v1().to_string() == "delta(X) = -2 Z^W; delta(Y) = -X^Y; delta(Z) = -X^Z + X^W; delta(W) = 0");
}

TEST_CASE("common cocycles of the case-B pencil, beta = 1") {
  const auto basis = solve_common_cocycle(case_b_pencil(1), default_lambda_samples());
  CHECK(basis.size() == 2);
  CHECK(span_of(basis) == span_of({v1(), v2()}));
  for (const auto& b : basis)
    for (const auto& l : default_lambda_samples()) CHECK(cocycle_residual(case_b_pencil(1).at(l), b).empty());

  // The printed one-parameter family is minus v1 and fails co-Jacobi for every c2 != 0.
  CHECK(in_span(basis, case_b_cocycle_family(1, 1)));
  CHECK(case_b_cocycle_family(1, -1) == v1());
  CHECK_FALSE(cojacobi_residual(case_b_cocycle_family(1, Rational(2, 7))).empty());

  // On the span the co-Jacobi residual is a multiple of t0^2 - t1^2.
  const auto variety = cojacobi_variety({v1(), v2()});
  CHECK(variety.span_dimension == 2);
  CHECK_FALSE(variety.identically_satisfied);
  CHECK(variety.forms.size() == 1);
  REQUIRE(variety.surviving_dimension.has_value());
  CHECK(*variety.surviving_dimension == 1);
  REQUIRE(variety.surviving_examples.size() == 2);
  for (const auto& d : variety.surviving_examples) {
    CHECK_FALSE(d.is_zero());
    CHECK(cojacobi_residual(d).empty());
    for (const auto& l : default_lambda_samples()) CHECK(cocycle_residual(case_b_pencil(1).at(l), d).empty());
  }
}

TEST_CASE("common cocycles of the case-B pencil, beta = 0") {
  const auto basis = solve_common_cocycle(case_b_pencil(0), default_lambda_samples());
  CHECK(basis.size() == 3);
  Cocommutator book(kXYZW);
  book.add(0, 0, 2, 1).add(1, 1, 2, 1);
  CHECK(in_span(basis, book));
  const auto variety = cojacobi_variety(basis);
  CHECK(variety.identically_satisfied);
  CHECK(variety.surviving_dimension == 3);
}

TEST_CASE("common cocycles of the AB pencil") {
  const auto basis = solve_common_cocycle(case_ab_pencil(), default_lambda_samples());
  CHECK(basis.size() == 3);
  CHECK(in_span(basis, book_cocommutator()));
  CHECK_FALSE(in_span(basis, heisenberg_cocommutator()));
  const auto variety = cojacobi_variety(basis);
  CHECK(variety.identically_satisfied);
  CHECK(cojacobi_residual(book_cocommutator()).empty());
}

TEST_CASE("nullspace is independent of the lambda samples") {
  const std::vector<Rational> other{Rational(-1), Rational(1, 5), Rational(3), Rational(7, 2)};
  CHECK(span_of(solve_common_cocycle(case_b_pencil(1), other)) ==
        span_of(solve_common_cocycle(case_b_pencil(1), default_lambda_samples())));
  CHECK(span_of(solve_common_cocycle(case_ab_pencil(), other)) ==
        span_of(solve_common_cocycle(case_ab_pencil(), default_lambda_samples())));
  CHECK_THROWS_AS(solve_common_cocycle(case_ab_pencil(), {Rational(0), Rational(1), Rational(1)}), ContractError);
}

TEST_CASE("abelian pencil: every cocommutator is a cocycle") {
  const LiePencil abelian{LieAlgebra(kXYZ), LieAlgebra(kXYZ)};
  CHECK(solve_common_cocycle(abelian, default_lambda_samples()).size() == 9);
}

TEST_CASE("co-Jacobi variety on small spans") {
  CHECK(cojacobi_variety({}).surviving_dimension == 0);
  const auto single = cojacobi_variety({case_b_cocycle_family(1, 1)});
  CHECK(single.surviving_dimension == 0);
  CHECK(single.surviving_examples.empty());
}

TEST_CASE("matrix representations of the dual groups") {
  CHECK(commutator_check(book_group_rep(), book_algebra()).empty());
  CHECK(commutator_check(heisenberg_group_rep(), heisenberg_algebra()).empty());
  CHECK(commutator_check(primed_book_group_rep(), book_algebra()).empty());
  CHECK_FALSE(commutator_check(book_group_rep(), heisenberg_algebra()).empty());

  const Eigen::Vector3d s(0.3, -0.7, 1.1);
  for (double eta : {0.5, 1.0, -2.0}) {
    const auto g = book_group_rep().element(s, eta);
    CHECK(g(0, 0) == doctest::Approx(std::exp(-eta * s[2])));
    CHECK(g(0, 2) == doctest::Approx(eta * s[0] * std::exp(-eta * s[2])));
    CHECK(g(1, 2) == doctest::Approx(eta * s[1] * std::exp(-eta * s[2])));
    CHECK((book_group_rep().chart_inverse(g, eta) - s).cwiseAbs().maxCoeff() < 1e-12);
    const auto h = heisenberg_group_rep().element(s, eta);
    CHECK(h(0, 1) == doctest::Approx(eta * s[0]));
    CHECK(h(0, 2) == doctest::Approx(eta * eta * s[0] * s[1] + eta * s[2]));
    CHECK((heisenberg_group_rep().chart_inverse(h, eta) - s).cwiseAbs().maxCoeff() < 1e-12);
    const auto p = primed_book_group_rep().element(s, eta);
    CHECK((primed_book_group_rep().chart_inverse(p, eta) - s).cwiseAbs().maxCoeff() < 1e-12);
  }
}
