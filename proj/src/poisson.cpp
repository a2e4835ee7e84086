#include "rikitake/poisson.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace rikitake {

namespace {

bool all_finite(const Vector& v) { return v.allFinite(); }

std::string format_point(const Vector& x) {
  std::ostringstream os;
  os << '(';
  for (Eigen::Index i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x[i];
  os << ')';
  return os.str();
}

}  // namespace

StatePoint::StatePoint(Vector coords, std::vector<std::string> names)
    : coords_(std::move(coords)), names_(std::move(names)) {
  if (static_cast<std::size_t>(coords_.size()) != names_.size())
    throw ContractError("StatePoint: " + std::to_string(coords_.size()) + " coordinates but " +
                        std::to_string(names_.size()) + " names");
  if (!all_finite(coords_)) throw ContractError("StatePoint: non-finite coordinate");
}

// ---------------------------------------------------------------------------
// ScalarField

ScalarField::ScalarField(std::string name, int arity, EvalFn eval, GradFn grad,
                         DomainFn domain, std::string domain_note)
    : name_(std::move(name)),
      arity_(arity),
      eval_(std::move(eval)),
      grad_(std::move(grad)),
      domain_(std::move(domain)),
      domain_note_(std::move(domain_note)) {}

bool ScalarField::in_domain(const Vector& x) const {
  return x.size() == arity_ && x.allFinite() && (!domain_ || domain_(x));
}

void ScalarField::check(const Vector& x) const {
  if (x.size() != arity_)
    throw ContractError(name_ + ": expected " + std::to_string(arity_) + " coordinates, got " +
                        std::to_string(x.size()));
  if (domain_ && !domain_(x))
    throw DomainError(name_, "outside smooth domain" +
                                 (domain_note_.empty() ? std::string{} : " (" + domain_note_ + ")") +
                                 " at " + format_point(x));
}

double ScalarField::operator()(const Vector& x) const {
  check(x);
  const double v = eval_(x);
  if (!std::isfinite(v)) throw DomainError(name_, "non-finite value at " + format_point(x));
  return v;
}

Vector ScalarField::gradient(const Vector& x) const {
  check(x);
  Vector g = grad_(x);
  if (g.size() != arity_) throw ContractError(name_ + ": gradient has wrong length");
  if (!all_finite(g)) throw DomainError(name_, "non-finite gradient at " + format_point(x));
  return g;
}

ScalarField ScalarField::renamed(std::string name) const {
  ScalarField copy = *this;
  copy.name_ = std::move(name);
  return copy;
}

Vector finite_difference_gradient(const ScalarField& f, const Vector& x, double h) {
  Vector g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Vector xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    g[i] = (f(xp) - f(xm)) / (2 * h);
  }
  return g;
}

double gradient_check(const ScalarField& f, const Vector& x, double h) {
  const Vector analytic = f.gradient(x);
  const Vector numeric = finite_difference_gradient(f, x, h);
  double worst = 0;
  for (Eigen::Index i = 0; i < x.size(); ++i)
    worst = std::max(worst, std::abs(analytic[i] - numeric[i]) / std::max(1.0, std::abs(analytic[i])));
  return worst;
}

// ---------------------------------------------------------------------------
// PoissonStructure

PoissonStructure::PoissonStructure(std::string name, std::vector<std::string> coords,
                                   UpperFn upper, UpperPartialsFn partials,
                                   std::vector<ScalarField> casimirs)
    : name_(std::move(name)),
      coords_(std::move(coords)),
      upper_(std::move(upper)),
      partials_(std::move(partials)),
      casimirs_(std::move(casimirs)) {
  for (const auto& c : casimirs_)
    if (c.arity() != dim())
      throw ContractError(name_ + ": Casimir " + c.name() + " has arity " +
                          std::to_string(c.arity()));
}

void PoissonStructure::check_dim(const Vector& x) const {
  if (x.size() != dim())
    throw ContractError(name_ + ": expected " + std::to_string(dim()) + " coordinates, got " +
                        std::to_string(x.size()));
}

Matrix PoissonStructure::pi(const Vector& x) const {
  check_dim(x);
  const int n = dim();
  Matrix m = Matrix::Zero(n, n);
  upper_(x, m);
  for (int i = 0; i < n; ++i) {
    m(i, i) = 0;
    for (int j = i + 1; j < n; ++j) m(j, i) = -m(i, j);
  }
  return m;
}

std::vector<Matrix> PoissonStructure::partials(const Vector& x) const {
  if (!partials_) return finite_difference_partials(x);
  check_dim(x);
  const int n = dim();
  std::vector<Matrix> d(n, Matrix::Zero(n, n));
  partials_(x, d);
  for (auto& m : d)
    for (int i = 0; i < n; ++i) {
      m(i, i) = 0;
      for (int j = i + 1; j < n; ++j) m(j, i) = -m(i, j);
    }
  return d;
}

std::vector<Matrix> PoissonStructure::finite_difference_partials(const Vector& x, double h) const {
  check_dim(x);
  const int n = dim();
  std::vector<Matrix> d(n);
  for (int l = 0; l < n; ++l) {
    Vector xp = x, xm = x;
    xp[l] += h;
    xm[l] -= h;
    d[l] = (pi(xp) - pi(xm)) / (2 * h);
  }
  return d;
}

PoissonStructure PoissonStructure::with_casimir(ScalarField c) const {
  PoissonStructure copy = *this;
  if (c.arity() != dim()) throw ContractError(name_ + ": Casimir arity mismatch");
  copy.casimirs_.push_back(std::move(c));
  return copy;
}

PoissonStructure PoissonStructure::without_analytic_partials() const {
  PoissonStructure copy = *this;
  copy.partials_ = {};
  return copy;
}

PoissonStructure PoissonStructure::renamed(std::string name) const {
  PoissonStructure copy = *this;
  copy.name_ = std::move(name);
  return copy;
}

// ---------------------------------------------------------------------------
// Operations

double bracket(const PoissonStructure& structure, const ScalarField& f, const ScalarField& g,
               const Vector& x) {
  if (f.arity() != structure.dim() || g.arity() != structure.dim())
    throw ContractError("bracket: field arity does not match " + structure.name());
  return f.gradient(x).dot(structure.pi(x) * g.gradient(x));
}

Vector hamiltonian_vector_field(const HamiltonianSystem& system, const Vector& x) {
  if (!system.is_hamiltonian())
    throw ContractError(system.id + ": no Hamiltonian structure attached");
  if (x.size() != system.dim())
    throw ContractError(system.id + ": state has wrong dimension");
  return system.structure->pi(x) * system.hamiltonian->gradient(x);
}

Vector vector_field(const HamiltonianSystem& system, const Vector& x) {
  if (x.size() != system.dim()) throw ContractError(system.id + ": state has wrong dimension");
  if (system.handcoded_vf) {
    Vector v = system.handcoded_vf(x);
    if (!v.allFinite()) throw DomainError(system.id, "non-finite vector field at " + format_point(x));
    return v;
  }
  return hamiltonian_vector_field(system, x);
}

double jacobi_residual(const PoissonStructure& structure, const Vector& x, PartialsMode mode) {
  const int n = structure.dim();
  const Matrix p = structure.pi(x);
  std::vector<Matrix> d;
  switch (mode) {
    case PartialsMode::Automatic: d = structure.partials(x); break;
    case PartialsMode::FiniteDifference: d = structure.finite_difference_partials(x); break;
    case PartialsMode::Analytic:
      if (!structure.has_analytic_partials())
        throw ContractError(structure.name() + ": no analytic partials");
      d = structure.partials(x);
      break;
  }
  auto term = [&](int i, int j, int k) {
    double s = 0;
    for (int l = 0; l < n; ++l) s += p(i, l) * d[l](j, k);
    return s;
  };
  double worst = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k)
        worst = std::max(worst, std::abs(term(i, j, k) + term(j, k, i) + term(k, i, j)));
  return worst;
}

double casimir_residual(const PoissonStructure& structure, const ScalarField& c, const Vector& x) {
  if (c.arity() != structure.dim())
    throw ContractError("casimir_residual: arity mismatch for " + c.name());
  const Vector row = structure.pi(x).transpose() * c.gradient(x);
  return row.cwiseAbs().maxCoeff();
}

PoissonStructure generic3d(const ScalarField& f, const ScalarField& F) {
  if (f.arity() != 3 || F.arity() != 3) throw ContractError("generic3d: fields must be 3D");
  auto upper = [f, F](const Vector& x, Matrix& m) {
    const double s = f(x);
    const Vector g = F.gradient(x);
    m(0, 1) = s * g[2];   // {x,y} = f F_z
    m(1, 2) = s * g[0];   // {y,z} = f F_x
    m(0, 2) = -s * g[1];  // {x,z} = -{z,x} = -f F_y
  };
  return PoissonStructure("generic3d(" + f.name() + ", " + F.name() + ")", {"x", "y", "z"}, upper,
                          {}, {F});
}

ScalarField lift(const ScalarField& f, int offset, int total, std::string name) {
  const int n = f.arity();
  if (offset < 0 || offset + n > total) throw ContractError("lift: block out of range");
  return ScalarField(
      std::move(name), total,
      [f, offset, n](const Vector& x) { return f(x.segment(offset, n)); },
      [f, offset, n, total](const Vector& x) {
        Vector g = Vector::Zero(total);
        g.segment(offset, n) = f.gradient(x.segment(offset, n));
        return g;
      },
      [f, offset, n](const Vector& x) { return f.in_domain(x.segment(offset, n)); });
}

PoissonStructure direct_sum(const PoissonStructure& a, const PoissonStructure& b) {
  const int na = a.dim(), nb = b.dim(), n = na + nb;
  std::vector<std::string> names;
  for (const auto& c : a.coords()) names.push_back(c + "1");
  for (const auto& c : b.coords()) names.push_back(c + "2");

  auto upper = [a, b, na, nb](const Vector& x, Matrix& m) {
    m.topLeftCorner(na, na) = a.pi(x.head(na));
    m.bottomRightCorner(nb, nb) = b.pi(x.tail(nb));
  };
  PoissonStructure::UpperPartialsFn partials;
  if (a.has_analytic_partials() && b.has_analytic_partials()) {
    partials = [a, b, na, nb](const Vector& x, std::vector<Matrix>& d) {
      const auto da = a.partials(x.head(na));
      const auto db = b.partials(x.tail(nb));
      for (int l = 0; l < na; ++l) d[l].topLeftCorner(na, na) = da[l];
      for (int l = 0; l < nb; ++l) d[na + l].bottomRightCorner(nb, nb) = db[l];
    };
  }
  std::vector<ScalarField> casimirs;
  for (const auto& c : a.casimirs()) casimirs.push_back(lift(c, 0, n, c.name() + "[1]"));
  for (const auto& c : b.casimirs()) casimirs.push_back(lift(c, na, n, c.name() + "[2]"));
  return PoissonStructure(a.name() + " (+) " + b.name(), std::move(names), upper, partials,
                          std::move(casimirs));
}

std::vector<Vector> sample_points(int dim, int count, double lo, double hi, std::uint64_t seed,
                                  const std::function<bool(const Vector&)>& keep) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<Vector> out;
  out.reserve(count);
  // Rejection sampling; the cap guards against empty acceptance regions.
  const long long cap = 1000LL * count + 1000;
  for (long long tries = 0; static_cast<int>(out.size()) < count && tries < cap; ++tries) {
    Vector x(dim);
    for (int i = 0; i < dim; ++i) x[i] = dist(rng);
    if (!keep || keep(x)) out.push_back(std::move(x));
  }
  if (static_cast<int>(out.size()) < count)
    throw ContractError("sample_points: acceptance region too small");
  return out;
}

ScalarField coordinate(int index, int arity, std::string name) {
  return ScalarField(
      std::move(name), arity, [index](const Vector& x) { return x[index]; },
      [index, arity](const Vector&) {
        Vector g = Vector::Zero(arity);
        g[index] = 1;
        return g;
      });
}

}  // namespace rikitake
