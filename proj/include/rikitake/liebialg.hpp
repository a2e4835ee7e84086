#pragma once

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_int.hpp>

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace rikitake {

using Rational = boost::multiprecision::cpp_rational;

/// Parses "p", "p/q" or a terminating decimal such as "0.25" into an exact rational.
Rational parse_rational(const std::string& text);
std::string to_string(const Rational& r);

/// One nonzero entry of an exact residual tensor.
struct Residual {
  std::vector<int> index;
  Rational value;
  std::string label;  // human-readable location, e.g. "Jacobi(X,Y,Z)->W"
};
using ResidualList = std::vector<Residual>;

/// Finite-dimensional Lie algebra given by exact structure constants
/// [e_i, e_j] = c^k_ij e_k, stored antisymmetrically.
class LieAlgebra {
public:
  explicit LieAlgebra(std::vector<std::string> labels);

  int dim() const noexcept { return static_cast<int>(labels_.size()); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  /// c^k_ij
  const Rational& c(int k, int i, int j) const { return c_[index(k, i, j)]; }

  /// Adds v * e_k to [e_i, e_j] (and -v * e_k to [e_j, e_i]).
  LieAlgebra& add_bracket(int i, int j, int k, const Rational& v);

  bool operator==(const LieAlgebra& other) const;

  /// (1 - t) * a + t * b over a common basis.
  static LieAlgebra interpolate(const LieAlgebra& a, const LieAlgebra& b, const Rational& t);

private:
  std::size_t index(int k, int i, int j) const {
    const auto n = static_cast<std::size_t>(dim());
    return (static_cast<std::size_t>(k) * n + static_cast<std::size_t>(i)) * n +
           static_cast<std::size_t>(j);
  }

  std::vector<std::string> labels_;
  std::vector<Rational> c_;
};

/// (1 - lambda) [,]_0 + lambda [,]_1
class LiePencil {
public:
  LiePencil(LieAlgebra first, LieAlgebra second);

  LieAlgebra at(const Rational& lambda) const { return LieAlgebra::interpolate(first_, second_, lambda); }
  int dim() const noexcept { return first_.dim(); }
  const LieAlgebra& first() const noexcept { return first_; }
  const LieAlgebra& second() const noexcept { return second_; }

private:
  LieAlgebra first_;
  LieAlgebra second_;
};

/// delta(e_i) = sum_{j<k} f_i^{jk} e_j ^ e_k with e_j ^ e_k = e_j (x) e_k - e_k (x) e_j.
/// Coefficients are antisymmetric in the upper indices; only j < k is stored.
class Cocommutator {
public:
  explicit Cocommutator(std::vector<std::string> labels);

  int dim() const noexcept { return static_cast<int>(labels_.size()); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  /// f_i^{jk}, any j, k (antisymmetry applied on read).
  Rational f(int i, int j, int k) const;

  /// Adds v * e_j ^ e_k to delta(e_i).
  Cocommutator& add(int i, int j, int k, const Rational& v);

  bool is_zero() const;
  bool operator==(const Cocommutator& other) const;

  /// Flat coordinates (i major, then (j,k) with j<k lexicographic).
  static int coefficient_count(int dim) { return dim * dim * (dim - 1) / 2; }
  std::vector<Rational> flatten() const;
  static Cocommutator from_flat(std::vector<std::string> labels, const std::vector<Rational>& flat);

  std::string to_string() const;

private:
  std::size_t pair_index(int j, int k) const;  // requires j < k

  std::vector<std::string> labels_;
  std::vector<Rational> coeffs_;  // dim * dim(dim-1)/2
};

/// Cyclic Jacobi sums; empty iff the Jacobi identity holds exactly.
ResidualList jacobi_check(const LieAlgebra& g);

/// delta([e_i,e_j]) - ad_{e_i} delta(e_j) + ad_{e_j} delta(e_i), on the e_a ^ e_b basis.
ResidualList cocycle_residual(const LieAlgebra& g, const Cocommutator& d);

/// Jacobi identity of the dual bracket [e^j, e^k] = f_i^{jk} e^i.
ResidualList cojacobi_residual(const Cocommutator& d);

/// Thrown by dualize when the co-Jacobi condition fails.
class CoJacobiError : public std::runtime_error {
public:
  CoJacobiError(ResidualList residuals);
  const ResidualList& residuals() const noexcept { return residuals_; }

private:
  ResidualList residuals_;
};

/// Dual Lie algebra [e^j, e^k] = f_i^{jk} e^i on labels "<label>*".
LieAlgebra dualize(const Cocommutator& d);

/// Exact basis of the cocommutators that are 1-cocycles for every sampled pencil member.
/// Requires at least 4 distinct samples. The co-Jacobi condition is NOT applied.
std::vector<Cocommutator> solve_common_cocycle(const LiePencil& pencil,
                                               const std::vector<Rational>& lambda_samples);

/// Default lambda samples {0, 1/3, 1/2, 1, 2}.
std::vector<Rational> default_lambda_samples();

/// Reduced row-echelon form of the span of `vectors` (zero rows dropped).
std::vector<std::vector<Rational>> rref_basis(const std::vector<std::vector<Rational>>& vectors);

/// Co-Jacobi restricted to span(basis): each residual component is a quadratic
/// form in the span coordinates t. Reports which nonzero cocommutators survive.
struct CoJacobiVariety {
  int span_dimension = 0;
  /// Residual quadratic forms, one symmetric matrix per independent component.
  std::vector<std::vector<std::vector<Rational>>> forms;
  bool identically_satisfied = false;
  /// Dimension of the real cone { t : all forms vanish }; nullopt when undecided
  /// (only decided for span_dimension <= 2 or identically satisfied forms).
  std::optional<int> surviving_dimension;
  /// Rational nonzero members of the cone that were found (one per line when
  /// the cone is a finite union of lines).
  std::vector<Cocommutator> surviving_examples;
};
CoJacobiVariety cojacobi_variety(const std::vector<Cocommutator>& basis);

/// True iff d lies in the span of basis (exact).
bool in_span(const std::vector<Cocommutator>& basis, const Cocommutator& d);

// ---------------------------------------------------------------------------
// Catalog algebras (bases X, Y, Z[, W]).

LieAlgebra poincare_algebra();                          // [X,Y]=0, [X,Z]=Y, [Y,Z]=X
LieAlgebra so3_ab_algebra();                            // [X,Y]=2Z, [X,Z]=-Y, [Y,Z]=X
LieAlgebra extended_poincare_algebra(const Rational& beta);  // [X,Y]=2 beta W, [Y,Z]=X, [Z,X]=-Y
LieAlgebra extended_so3_algebra();                      // [X,Y]=2Z, [Y,Z]=X, [Z,X]=Y
LiePencil case_b_pencil(const Rational& beta);
LiePencil case_ab_pencil();

Cocommutator book_cocommutator(const Rational& eta = 1);        // delta(X)=eta X^Z, delta(Y)=eta Y^Z
Cocommutator heisenberg_cocommutator(const Rational& eta = 1);  // delta(Z)=eta X^Y
Cocommutator poincare_dual_cocommutator();  // on x*,y*,z*: delta(x)=y^z, delta(y)=x^z
/// delta(X)=2 beta c2 Z^W, delta(Y)=c2 X^Y, delta(Z)=c2 (X^Z - X^W), delta(W)=0
Cocommutator case_b_cocycle_family(const Rational& beta, const Rational& c2);
LieAlgebra book_algebra(const Rational& eta = 1);        // [x,z]=eta x, [y,z]=eta y
LieAlgebra heisenberg_algebra(const Rational& eta = 1);  // [x,y]=eta z

// ---------------------------------------------------------------------------
// Matrix group parametrizations of the dual groups.

/// Faithful 3x3 representation of a 3D Lie algebra plus an ordered-exponential
/// chart G(s) = prod_f exp(weight_f * s[coord_f] * rho(coord_f)).
struct MatrixLieGroupRep {
  struct Factor {
    int coord;
    double weight;
  };
  std::string name;
  std::function<std::vector<Eigen::Matrix3d>(double eta)> generators;
  std::vector<Factor> parametrization;
  /// Inverse of the chart: group element -> coordinates.
  std::function<Eigen::Vector3d(const Eigen::Matrix3d&, double eta)> chart_inverse;

  Eigen::Matrix3d element(const Eigen::Vector3d& s, double eta) const;
};

MatrixLieGroupRep book_group_rep();        // G = exp(z rz) exp(y ry) exp(x rx)
MatrixLieGroupRep heisenberg_group_rep();  // G = exp(x rx) exp(y ry) exp(z rz)
/// Book group in the primed chart x' = e^{-eta z/2} x, y' = e^{-eta z/2} y:
/// G = exp(z/2 rz) exp(x' rx) exp(y' ry) exp(z/2 rz).
MatrixLieGroupRep primed_book_group_rep();

/// [rho_i, rho_j] - c^k_ij rho_k at eta = 1; entries above 1e-12 are reported.
ResidualList commutator_check(const MatrixLieGroupRep& rep, const LieAlgebra& g);

}  // namespace rikitake
