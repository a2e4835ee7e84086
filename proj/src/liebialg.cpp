#include "rikitake/liebialg.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

#include "rikitake/errors.hpp"

namespace rikitake {

namespace mp = boost::multiprecision;

namespace {

/// Decimal integer with optional sign; cpp_int alone would read "010" as octal.
mp::cpp_int parse_integer(std::string digits, const std::string& text) {
  bool negative = false;
  if (!digits.empty() && (digits.front() == '-' || digits.front() == '+')) {
    negative = digits.front() == '-';
    digits.erase(0, 1);
  }
  if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
    throw ContractError("malformed rational '" + text + "'");
  digits.erase(0, std::min(digits.find_first_not_of('0'), digits.size() - 1));
  const mp::cpp_int v(digits);
  return negative ? mp::cpp_int(-v) : v;
}

}  // namespace

Rational parse_rational(const std::string& text) {
  if (text.empty()) throw ContractError("empty rational");
  const auto slash = text.find('/');
  if (slash != std::string::npos) {
    const auto num = parse_integer(text.substr(0, slash), text);
    const auto den = parse_integer(text.substr(slash + 1), text);
    if (den == 0) throw ContractError("zero denominator in '" + text + "'");
    return Rational(num, den);
  }
  const auto dot = text.find('.');
  if (dot == std::string::npos) return Rational(parse_integer(text, text));
  std::string digits = text.substr(0, dot) + text.substr(dot + 1);
  if (digits == "-" || digits == "+") throw ContractError("malformed rational '" + text + "'");
  const mp::cpp_int den = mp::pow(mp::cpp_int(10), static_cast<unsigned>(text.size() - dot - 1));
  return Rational(parse_integer(digits, text), den);
}

std::string to_string(const Rational& r) {
  std::ostringstream os;
  os << r;
  return os.str();
}

// ---------------------------------------------------------------------------
// LieAlgebra

LieAlgebra::LieAlgebra(std::vector<std::string> labels) : labels_(std::move(labels)) {
  const auto n = labels_.size();
  c_.assign(n * n * n, Rational(0));
}

LieAlgebra& LieAlgebra::add_bracket(int i, int j, int k, const Rational& v) {
  if (i == j) throw ContractError("add_bracket: [e_i, e_i] is zero by antisymmetry");
  c_[index(k, i, j)] += v;
  c_[index(k, j, i)] -= v;
  return *this;
}

bool LieAlgebra::operator==(const LieAlgebra& other) const {
  return labels_.size() == other.labels_.size() && c_ == other.c_;
}

LieAlgebra LieAlgebra::interpolate(const LieAlgebra& a, const LieAlgebra& b, const Rational& t) {
  if (a.dim() != b.dim()) throw ContractError("pencil members differ in dimension");
  LieAlgebra out(a.labels_);
  for (std::size_t u = 0; u < out.c_.size(); ++u) out.c_[u] = (1 - t) * a.c_[u] + t * b.c_[u];
  return out;
}

LiePencil::LiePencil(LieAlgebra first, LieAlgebra second)
    : first_(std::move(first)), second_(std::move(second)) {
  if (first_.dim() != second_.dim()) throw ContractError("pencil members differ in dimension");
}

// ---------------------------------------------------------------------------
// Cocommutator

Cocommutator::Cocommutator(std::vector<std::string> labels) : labels_(std::move(labels)) {
  coeffs_.assign(static_cast<std::size_t>(coefficient_count(dim())), Rational(0));
}

std::size_t Cocommutator::pair_index(int j, int k) const {
  // Position of (j,k), j<k, in lexicographic order.
  const int n = dim();
  return static_cast<std::size_t>(j * n - j * (j + 1) / 2 + (k - j - 1));
}

Rational Cocommutator::f(int i, int j, int k) const {
  if (j == k) return 0;
  const std::size_t pairs = static_cast<std::size_t>(dim() * (dim() - 1) / 2);
  if (j < k) return coeffs_[static_cast<std::size_t>(i) * pairs + pair_index(j, k)];
  return -coeffs_[static_cast<std::size_t>(i) * pairs + pair_index(k, j)];
}

Cocommutator& Cocommutator::add(int i, int j, int k, const Rational& v) {
  if (j == k) throw ContractError("e_j ^ e_j vanishes");
  const std::size_t pairs = static_cast<std::size_t>(dim() * (dim() - 1) / 2);
  if (j < k)
    coeffs_[static_cast<std::size_t>(i) * pairs + pair_index(j, k)] += v;
  else
    coeffs_[static_cast<std::size_t>(i) * pairs + pair_index(k, j)] -= v;
  return *this;
}

bool Cocommutator::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Rational& r) { return r == 0; });
}

bool Cocommutator::operator==(const Cocommutator& other) const {
  return labels_.size() == other.labels_.size() && coeffs_ == other.coeffs_;
}

std::vector<Rational> Cocommutator::flatten() const { return coeffs_; }

Cocommutator Cocommutator::from_flat(std::vector<std::string> labels,
                                     const std::vector<Rational>& flat) {
  Cocommutator d(std::move(labels));
  if (flat.size() != d.coeffs_.size()) throw ContractError("from_flat: wrong coefficient count");
  d.coeffs_ = flat;
  return d;
}

std::string Cocommutator::to_string() const {
  std::ostringstream os;
  const int n = dim();
  for (int i = 0; i < n; ++i) {
    os << "delta(" << labels_[i] << ") = ";
    bool any = false;
    for (int j = 0; j < n; ++j)
      for (int k = j + 1; k < n; ++k) {
        const Rational v = f(i, j, k);
        if (v == 0) continue;
        if (any) os << (v < 0 ? " - " : " + ");
        else if (v < 0) os << "-";
        const Rational a = v < 0 ? Rational(-v) : v;
        if (a != 1) os << a << " ";
        os << labels_[j] << "^" << labels_[k];
        any = true;
      }
    if (!any) os << "0";
    if (i + 1 < n) os << "; ";
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Residual machinery

namespace {

/// Cyclic Jacobi sum for an arbitrary bracket-constant accessor c(k, i, j).
template <class C>
ResidualList jacobi_from(int n, const std::vector<std::string>& labels, C&& c) {
  ResidualList out;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          Rational s = 0;
          for (int m = 0; m < n; ++m)
            s += c(m, i, j) * c(l, m, k) + c(m, j, k) * c(l, m, i) + c(m, k, i) * c(l, m, j);
          if (s != 0)
            out.push_back({{i, j, k, l}, s,
                           "Jacobi(" + labels[i] + "," + labels[j] + "," + labels[k] + ")->" +
                               labels[l]});
        }
  return out;
}

/// Full cocycle residual vector, ordered by (i<j) then (a<b).
std::vector<Rational> cocycle_vector(const LieAlgebra& g, const Cocommutator& d) {
  const int n = g.dim();
  std::vector<Rational> out;
  out.reserve(static_cast<std::size_t>(n * (n - 1) / 2 * n * (n - 1) / 2));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
          Rational r = 0;
          for (int m = 0; m < n; ++m) r += g.c(m, i, j) * d.f(m, a, b);
          // ad_{e_i} delta(e_j) on e_a (x) e_b: c^a_ip f_j^{pb} + c^b_ip f_j^{ap}
          for (int p = 0; p < n; ++p) {
            r -= g.c(a, i, p) * d.f(j, p, b) + g.c(b, i, p) * d.f(j, a, p);
            r += g.c(a, j, p) * d.f(i, p, b) + g.c(b, j, p) * d.f(i, a, p);
          }
          out.push_back(r);
        }
  return out;
}

/// In-place reduced row echelon form; returns pivot columns.
std::vector<int> rref(std::vector<std::vector<Rational>>& m, int cols) {
  std::vector<int> pivots;
  std::size_t row = 0;
  for (int col = 0; col < cols && row < m.size(); ++col) {
    std::size_t piv = row;
    while (piv < m.size() && m[piv][col] == 0) ++piv;
    if (piv == m.size()) continue;
    std::swap(m[row], m[piv]);
    const Rational inv = 1 / m[row][col];
    for (auto& v : m[row]) v *= inv;
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r == row || m[r][col] == 0) continue;
      const Rational factor = m[r][col];
      for (int c = col; c < cols; ++c) m[r][c] -= factor * m[row][c];
    }
    pivots.push_back(col);
    ++row;
  }
  m.resize(row);
  return pivots;
}

std::vector<std::vector<Rational>> nullspace(std::vector<std::vector<Rational>> rows, int cols) {
  const auto pivots = rref(rows, cols);
  std::vector<bool> is_pivot(static_cast<std::size_t>(cols), false);
  for (int p : pivots) is_pivot[static_cast<std::size_t>(p)] = true;
  std::vector<std::vector<Rational>> basis;
  for (int free = 0; free < cols; ++free) {
    if (is_pivot[static_cast<std::size_t>(free)]) continue;
    std::vector<Rational> v(static_cast<std::size_t>(cols), Rational(0));
    v[static_cast<std::size_t>(free)] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r)
      v[static_cast<std::size_t>(pivots[r])] = -rows[r][static_cast<std::size_t>(free)];
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace

ResidualList jacobi_check(const LieAlgebra& g) {
  return jacobi_from(g.dim(), g.labels(), [&g](int k, int i, int j) { return g.c(k, i, j); });
}

ResidualList cocycle_residual(const LieAlgebra& g, const Cocommutator& d) {
  if (g.dim() != d.dim()) throw ContractError("cocycle_residual: dimension mismatch");
  const int n = g.dim();
  const auto& L = g.labels();
  const auto v = cocycle_vector(g, d);
  ResidualList out;
  std::size_t u = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b, ++u)
          if (v[u] != 0)
            out.push_back({{i, j, a, b}, v[u],
                           "cocycle[" + L[i] + "," + L[j] + "] on " + L[a] + "^" + L[b]});
  return out;
}

ResidualList cojacobi_residual(const Cocommutator& d) {
  // Dual constants: c'^i_{jk} = f_i^{jk}.
  std::vector<std::string> labels;
  for (const auto& l : d.labels()) labels.push_back(l + "*");
  return jacobi_from(d.dim(), labels, [&d](int i, int j, int k) { return d.f(i, j, k); });
}

CoJacobiError::CoJacobiError(ResidualList residuals)
    : std::runtime_error("co-Jacobi condition fails (" + std::to_string(residuals.size()) +
                         " nonzero residuals)"),
      residuals_(std::move(residuals)) {}

LieAlgebra dualize(const Cocommutator& d) {
  auto residuals = cojacobi_residual(d);
  if (!residuals.empty()) throw CoJacobiError(std::move(residuals));
  std::vector<std::string> labels;
  for (const auto& l : d.labels()) labels.push_back(l + "*");
  LieAlgebra g(labels);
  const int n = d.dim();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = j + 1; k < n; ++k) {
        const Rational v = d.f(i, j, k);
        if (v != 0) g.add_bracket(j, k, i, v);
      }
  return g;
}

std::vector<Rational> default_lambda_samples() {
  return {Rational(0), Rational(1, 3), Rational(1, 2), Rational(1), Rational(2)};
}

std::vector<Cocommutator> solve_common_cocycle(const LiePencil& pencil,
                                               const std::vector<Rational>& lambda_samples) {
  const std::set<Rational> distinct(lambda_samples.begin(), lambda_samples.end());
  if (distinct.size() < 4)
    throw ContractError("solve_common_cocycle: need at least 4 distinct lambda samples");
  const int n = pencil.dim();
  const auto& labels = pencil.first().labels();
  const int unknowns = Cocommutator::coefficient_count(n);

  // Columns are the images of unit cocommutators; the cocycle map is linear.
  std::vector<std::vector<Rational>> rows;
  for (const auto& lambda : distinct) {
    const LieAlgebra g = pencil.at(lambda);
    std::vector<std::vector<Rational>> columns;
    for (int u = 0; u < unknowns; ++u) {
      std::vector<Rational> flat(static_cast<std::size_t>(unknowns), Rational(0));
      flat[static_cast<std::size_t>(u)] = 1;
      columns.push_back(cocycle_vector(g, Cocommutator::from_flat(labels, flat)));
    }
    const std::size_t m = columns.front().size();
    for (std::size_t r = 0; r < m; ++r) {
      std::vector<Rational> row(static_cast<std::size_t>(unknowns));
      bool nonzero = false;
      for (int u = 0; u < unknowns; ++u) {
        row[static_cast<std::size_t>(u)] = columns[static_cast<std::size_t>(u)][r];
        nonzero = nonzero || row[static_cast<std::size_t>(u)] != 0;
      }
      if (nonzero) rows.push_back(std::move(row));
    }
  }
  std::vector<Cocommutator> basis;
  for (auto& v : nullspace(std::move(rows), unknowns))
    basis.push_back(Cocommutator::from_flat(labels, v));
  return basis;
}

std::vector<std::vector<Rational>> rref_basis(const std::vector<std::vector<Rational>>& vectors) {
  if (vectors.empty()) return {};
  auto m = vectors;
  rref(m, static_cast<int>(m.front().size()));
  return m;
}

bool in_span(const std::vector<Cocommutator>& basis, const Cocommutator& d) {
  std::vector<std::vector<Rational>> vs;
  for (const auto& b : basis) vs.push_back(b.flatten());
  const auto before = rref_basis(vs).size();
  vs.push_back(d.flatten());
  return rref_basis(vs).size() == before;
}

// ---------------------------------------------------------------------------
// Co-Jacobi on a span

namespace {

/// Whether a nonnegative rational is the square of a rational; sets root if so.
bool rational_sqrt(const Rational& q, Rational& root) {
  if (q < 0) return false;
  const mp::cpp_int num = mp::numerator(q), den = mp::denominator(q);
  const mp::cpp_int sn = mp::sqrt(num), sd = mp::sqrt(den);
  if (sn * sn != num || sd * sd != den) return false;
  root = Rational(sn, sd);
  return true;
}

using Poly = std::vector<Rational>;  // coefficients, lowest degree first

void trim(Poly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

Poly poly_mod(Poly a, const Poly& b) {
  trim(a);
  while (a.size() >= b.size() && !a.empty()) {
    const Rational factor = a.back() / b.back();
    const std::size_t shift = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= factor * b[i];
    trim(a);
  }
  return a;
}

Poly poly_gcd(Poly a, Poly b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = poly_mod(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

}  // namespace

CoJacobiVariety cojacobi_variety(const std::vector<Cocommutator>& basis) {
  CoJacobiVariety out;
  out.span_dimension = static_cast<int>(basis.size());
  const int d = out.span_dimension;
  if (d == 0) {
    out.identically_satisfied = true;
    out.surviving_dimension = 0;
    return out;
  }
  const int n = basis.front().dim();
  const auto& labels = basis.front().labels();

  // Bilinear Jacobi B(u, v) per component (i<j<k, l).
  auto bilinear = [n](const Cocommutator& u, const Cocommutator& v, int i, int j, int k, int l) {
    Rational s = 0;
    for (int m = 0; m < n; ++m)
      s += u.f(m, i, j) * v.f(l, m, k) + u.f(m, j, k) * v.f(l, m, i) + u.f(m, k, i) * v.f(l, m, j);
    return s;
  };

  // Each form flattened to its upper-triangle coefficients of t_a t_b.
  std::vector<std::vector<Rational>> flat_forms;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          std::vector<Rational> coeffs;
          bool nonzero = false;
          for (int a = 0; a < d; ++a)
            for (int b = a; b < d; ++b) {
              Rational v = bilinear(basis[a], basis[b], i, j, k, l);
              if (a != b) v += bilinear(basis[b], basis[a], i, j, k, l);
              nonzero = nonzero || v != 0;
              coeffs.push_back(v);
            }
          if (nonzero) flat_forms.push_back(std::move(coeffs));
        }
  const auto independent = rref_basis(flat_forms);
  for (const auto& coeffs : independent) {
    std::vector<std::vector<Rational>> sym(static_cast<std::size_t>(d),
                                           std::vector<Rational>(static_cast<std::size_t>(d)));
    std::size_t u = 0;
    for (int a = 0; a < d; ++a)
      for (int b = a; b < d; ++b, ++u) {
        const Rational v = a == b ? coeffs[u] : coeffs[u] / 2;
        sym[a][b] = v;
        sym[b][a] = v;
      }
    out.forms.push_back(std::move(sym));
  }

  auto combine = [&](const std::vector<Rational>& t) {
    std::vector<Rational> flat(static_cast<std::size_t>(Cocommutator::coefficient_count(n)),
                               Rational(0));
    for (int a = 0; a < d; ++a) {
      const auto fa = basis[a].flatten();
      for (std::size_t u = 0; u < flat.size(); ++u) flat[u] += t[a] * fa[u];
    }
    return Cocommutator::from_flat(labels, flat);
  };

  if (independent.empty()) {
    out.identically_satisfied = true;
    out.surviving_dimension = d;
    out.surviving_examples = basis;
    return out;
  }
  if (d == 1 || (d == 2 && independent.size() == 3)) {
    out.surviving_dimension = 0;
    return out;
  }
  if (d != 2) return out;  // undecided

  // Binary quadratic forms a t0^2 + b t0 t1 + c t1^2 (coefficients [a, b, c]).
  std::vector<std::vector<Rational>> lines;
  bool irrational_line = false;
  const bool infinity_root = std::all_of(independent.begin(), independent.end(),
                                         [](const auto& f) { return f[0] == 0; });
  if (infinity_root) lines.push_back({Rational(1), Rational(0)});
  if (independent.size() == 1) {
    const auto& f = independent.front();
    const Rational& a = f[0];
    const Rational& b = f[1];
    const Rational& c = f[2];
    // Finite roots in s = t0 / t1 of a s^2 + b s + c.
    if (a == 0) {
      if (b != 0) lines.push_back({-c / b, Rational(1)});
      else if (c == 0) lines.push_back({Rational(0), Rational(1)});
    } else {
      const Rational disc = b * b - 4 * a * c;
      Rational root;
      if (disc == 0) {
        lines.push_back({-b / (2 * a), Rational(1)});
      } else if (rational_sqrt(disc, root)) {
        lines.push_back({(-b + root) / (2 * a), Rational(1)});
        lines.push_back({(-b - root) / (2 * a), Rational(1)});
      } else if (disc > 0) {
        irrational_line = true;
      }
    }
  } else {
    const auto& f = independent[0];
    const auto& g = independent[1];
    const Poly gcd = poly_gcd({f[2], f[1], f[0]}, {g[2], g[1], g[0]});
    if (gcd.size() == 2) lines.push_back({-gcd[0] / gcd[1], Rational(1)});
  }
  out.surviving_dimension = (lines.empty() && !irrational_line) ? 0 : 1;
  for (const auto& t : lines) out.surviving_examples.push_back(combine(t));
  return out;
}

// ---------------------------------------------------------------------------
// Catalog algebras

namespace {
const std::vector<std::string> kXYZ{"X", "Y", "Z"};
const std::vector<std::string> kXYZW{"X", "Y", "Z", "W"};
const std::vector<std::string> kDual3{"x", "y", "z"};
}  // namespace

LieAlgebra poincare_algebra() {
  LieAlgebra g(kXYZ);
  g.add_bracket(0, 2, 1, 1).add_bracket(1, 2, 0, 1);
  return g;
}

LieAlgebra so3_ab_algebra() {
  LieAlgebra g(kXYZ);
  g.add_bracket(0, 1, 2, 2).add_bracket(0, 2, 1, -1).add_bracket(1, 2, 0, 1);
  return g;
}

LieAlgebra extended_poincare_algebra(const Rational& beta) {
  LieAlgebra g(kXYZW);
  if (beta != 0) g.add_bracket(0, 1, 3, 2 * beta);
  g.add_bracket(1, 2, 0, 1).add_bracket(2, 0, 1, -1);
  return g;
}

LieAlgebra extended_so3_algebra() {
  LieAlgebra g(kXYZW);
  g.add_bracket(0, 1, 2, 2).add_bracket(1, 2, 0, 1).add_bracket(2, 0, 1, 1);
  return g;
}

LiePencil case_b_pencil(const Rational& beta) {
  return LiePencil(extended_poincare_algebra(beta), extended_so3_algebra());
}

LiePencil case_ab_pencil() { return LiePencil(poincare_algebra(), so3_ab_algebra()); }

Cocommutator book_cocommutator(const Rational& eta) {
  Cocommutator d(kXYZ);
  d.add(0, 0, 2, eta).add(1, 1, 2, eta);
  return d;
}

Cocommutator heisenberg_cocommutator(const Rational& eta) {
  Cocommutator d(kXYZ);
  d.add(2, 0, 1, eta);
  return d;
}

Cocommutator poincare_dual_cocommutator() {
  Cocommutator d(kDual3);
  d.add(0, 1, 2, 1).add(1, 0, 2, 1);
  return d;
}

Cocommutator case_b_cocycle_family(const Rational& beta, const Rational& c2) {
  Cocommutator d(kXYZW);
  if (beta * c2 != 0) d.add(0, 2, 3, 2 * beta * c2);
  if (c2 != 0) d.add(1, 0, 1, c2).add(2, 0, 2, c2).add(2, 0, 3, -c2);
  return d;
}

LieAlgebra book_algebra(const Rational& eta) {
  LieAlgebra g(kDual3);
  g.add_bracket(0, 2, 0, eta).add_bracket(1, 2, 1, eta);
  return g;
}

LieAlgebra heisenberg_algebra(const Rational& eta) {
  LieAlgebra g(kDual3);
  g.add_bracket(0, 1, 2, eta);
  return g;
}

// ---------------------------------------------------------------------------
// Matrix groups

Eigen::Matrix3d MatrixLieGroupRep::element(const Eigen::Vector3d& s, double eta) const {
  const auto gens = generators(eta);
  Eigen::Matrix3d g = Eigen::Matrix3d::Identity();
  for (const auto& f : parametrization) {
    const Eigen::Matrix3d a = (f.weight * s[f.coord]) * gens[static_cast<std::size_t>(f.coord)];
    g = g * a.exp();
  }
  return g;
}

namespace {

Eigen::Matrix3d unit(int r, int c) {
  Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
  m(r, c) = 1;
  return m;
}

std::vector<Eigen::Matrix3d> book_generators(double eta) {
  Eigen::Matrix3d rz = Eigen::Matrix3d::Zero();
  rz(0, 0) = -eta;
  rz(1, 1) = -eta;
  return {eta * unit(0, 2), eta * unit(1, 2), rz};
}

}  // namespace

MatrixLieGroupRep book_group_rep() {
  MatrixLieGroupRep rep;
  rep.name = "book";
  rep.generators = book_generators;
  rep.parametrization = {{2, 1.0}, {1, 1.0}, {0, 1.0}};
  rep.chart_inverse = [](const Eigen::Matrix3d& m, double eta) {
    // m = [[e^{-eta z}, 0, eta x e^{-eta z}], [0, e^{-eta z}, eta y e^{-eta z}], [0, 0, 1]]
    return Eigen::Vector3d(m(0, 2) / (eta * m(0, 0)), m(1, 2) / (eta * m(1, 1)),
                           -std::log(m(0, 0)) / eta);
  };
  return rep;
}

MatrixLieGroupRep heisenberg_group_rep() {
  MatrixLieGroupRep rep;
  rep.name = "heisenberg-weyl";
  rep.generators = [](double eta) -> std::vector<Eigen::Matrix3d> {
    return {eta * unit(0, 1), eta * unit(1, 2), eta * unit(0, 2)};
  };
  rep.parametrization = {{0, 1.0}, {1, 1.0}, {2, 1.0}};
  rep.chart_inverse = [](const Eigen::Matrix3d& m, double eta) {
    // m = [[1, eta x, eta^2 x y + eta z], [0, 1, eta y], [0, 0, 1]]
    const double x = m(0, 1) / eta, y = m(1, 2) / eta;
    return Eigen::Vector3d(x, y, (m(0, 2) - eta * eta * x * y) / eta);
  };
  return rep;
}

MatrixLieGroupRep primed_book_group_rep() {
  MatrixLieGroupRep rep;
  rep.name = "book-primed";
  rep.generators = book_generators;
  rep.parametrization = {{2, 0.5}, {0, 1.0}, {1, 1.0}, {2, 0.5}};
  rep.chart_inverse = [](const Eigen::Matrix3d& m, double eta) {
    const double z = -std::log(m(0, 0)) / eta;
    const double half = std::exp(-0.5 * eta * z);
    return Eigen::Vector3d(m(0, 2) / (eta * half), m(1, 2) / (eta * half), z);
  };
  return rep;
}

ResidualList commutator_check(const MatrixLieGroupRep& rep, const LieAlgebra& g) {
  const auto gens = rep.generators(1.0);
  const int n = static_cast<int>(gens.size());
  if (n != g.dim()) throw ContractError("commutator_check: dimension mismatch");
  ResidualList out;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      Eigen::Matrix3d diff = gens[i] * gens[j] - gens[j] * gens[i];
      for (int k = 0; k < n; ++k) diff -= g.c(k, i, j).convert_to<double>() * gens[k];
      for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c)
          if (std::abs(diff(r, c)) > 1e-12)
            out.push_back({{i, j, r, c}, Rational(diff(r, c)),
                           "[rho(" + g.labels()[i] + "), rho(" + g.labels()[j] + ")] entry (" +
                               std::to_string(r) + "," + std::to_string(c) + ")"});
    }
  return out;
}

}  // namespace rikitake
