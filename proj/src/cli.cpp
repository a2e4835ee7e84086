#include "rikitake/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "rikitake/coupling.hpp"
#include "rikitake/io.hpp"
#include "rikitake/liebialg.hpp"
#include "rikitake/realization.hpp"

namespace rikitake::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

// ---------------------------------------------------------------------------
// Strict JSON access

void reject_unknown(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ConfigError(path.empty() ? "config" : path, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }))
      throw ConfigError(path.empty() ? key : path + "." + key, "unknown key");
  }
}

double number(const json& v, const std::string& path) {
  if (!v.is_number()) throw ConfigError(path, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError(path, "must be finite");
  return d;
}

bool boolean(const json& v, const std::string& path) {
  if (!v.is_boolean()) throw ConfigError(path, "expected true or false");
  return v.get<bool>();
}

std::string text(const json& v, const std::string& path) {
  if (!v.is_string()) throw ConfigError(path, "expected a string");
  return v.get<std::string>();
}

Vector vector_of(const json& v, const std::string& path) {
  if (!v.is_array() || v.empty()) throw ConfigError(path, "expected a non-empty array of numbers");
  Vector out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<Eigen::Index>(i)] = number(v[i], path + "[" + std::to_string(i) + "]");
  return out;
}

void parse_integrator(const json& j, IntegratorConfig& cfg) {
  reject_unknown(j, "integrator", {"method", "h", "abs_tol", "rel_tol", "t_end", "max_steps", "sample_dt", "sample_stride"});
  if (j.contains("method")) {
    try {
      cfg.method = parse_method(text(j["method"], "integrator.method"));
    } catch (const ParameterError& e) {
      throw ConfigError("integrator.method", e.what());
    }
  }
  if (j.contains("h")) cfg.h = number(j["h"], "integrator.h");
  if (j.contains("abs_tol")) cfg.abs_tol = number(j["abs_tol"], "integrator.abs_tol");
  if (j.contains("rel_tol")) cfg.rel_tol = number(j["rel_tol"], "integrator.rel_tol");
  if (j.contains("t_end")) cfg.t_end = number(j["t_end"], "integrator.t_end");
  if (j.contains("sample_dt")) cfg.sample_dt = number(j["sample_dt"], "integrator.sample_dt");
  if (j.contains("max_steps")) {
    const double v = number(j["max_steps"], "integrator.max_steps");
    if (v < 1 || v != std::floor(v)) throw ConfigError("integrator.max_steps", "expected a positive integer");
    cfg.max_steps = static_cast<std::size_t>(v);
  }
  if (j.contains("sample_stride")) {
    const double v = number(j["sample_stride"], "integrator.sample_stride");
    if (v < 1 || v != std::floor(v)) throw ConfigError("integrator.sample_stride", "expected a positive integer");
    cfg.sample_stride = static_cast<int>(v);
  }
  try {
    cfg.validate();
  } catch (const ParameterError& e) {
    throw ConfigError("integrator", e.what());
  }
}

void parse_output(const json& j, RunConfig& cfg) {
  reject_unknown(j, "output", {"dir", "name", "csv", "svg", "report", "projections"});
  if (j.contains("dir")) cfg.out_dir = text(j["dir"], "output.dir");
  if (j.contains("name")) cfg.name = text(j["name"], "output.name");
  if (j.contains("csv")) cfg.emit.csv = boolean(j["csv"], "output.csv");
  if (j.contains("svg")) cfg.emit.svg = boolean(j["svg"], "output.svg");
  if (j.contains("report")) cfg.emit.report = boolean(j["report"], "output.report");
  if (j.contains("projections")) {
    const auto& p = j["projections"];
    if (!p.is_array()) throw ConfigError("output.projections", "expected an array of strings");
    cfg.projections.clear();
    for (std::size_t i = 0; i < p.size(); ++i)
      cfg.projections.push_back(text(p[i], "output.projections[" + std::to_string(i) + "]"));
  }
}

// ---------------------------------------------------------------------------
// Small helpers

std::string fmt(double v) { return io::format_double(v); }

std::string out_dir(const RunConfig& cfg, const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("RIKITAKE_OUT_DIR"); env && *env) return env;
  return cfg.out_dir;
}

json invariant_report(const Trajectory& traj) {
  json inv = json::array();
  const auto drift = traj.drift();
  for (std::size_t i = 0; i < traj.invariant_names.size(); ++i)
    inv.push_back({{"name", traj.invariant_names[i]},
                   {"initial", traj.invariant_values.empty() ? 0.0 : traj.invariant_values.front()[i]},
                   {"drift", drift[i]}});
  return inv;
}

json trajectory_report(const Trajectory& traj) {
  json r{{"system", traj.system_id},
         {"params", traj.params},
         {"status", to_string(traj.status)},
         {"samples", traj.size()},
         {"accepted_steps", traj.accepted_steps},
         {"rejected_steps", traj.rejected_steps},
         {"t_final", traj.times.empty() ? 0.0 : traj.times.back()},
         {"invariants", invariant_report(traj)},
         {"max_drift", traj.max_drift()}};
  if (!traj.message.empty()) r["message"] = traj.message;
  if (const auto c = orbit_closure(traj, 1e-3)) r["closure"] = {{"period", c->period}, {"distance", c->distance}};
  else r["closure"] = nullptr;
  return r;
}

std::vector<io::SvgSeries> projection_series(const std::vector<std::pair<std::string, const Trajectory*>>& runs,
                                             int a, int b) {
  std::vector<io::SvgSeries> out;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    io::SvgSeries s;
    s.label = runs[i].first;
    s.color = io::figure_colors()[i % io::figure_colors().size()];
    for (const auto& x : runs[i].second->states) {
      s.xs.push_back(x[a]);
      s.ys.push_back(x[b]);
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<std::string> default_projections(const std::vector<std::string>& coords) {
  return {coords[0] + ":" + coords[2], coords[1] + ":" + coords[2]};
}

Trajectory run_system(const HamiltonianSystem& sys, const Vector& x0, const IntegratorConfig& icfg) {
  Trajectory t = integrate(sys, x0, icfg);
  t.system_id = sys.id;
  t.params = sys.params;
  return t;
}

// ---------------------------------------------------------------------------
// list

int cmd_list(std::ostream& out) {
  for (const auto& s : catalog()) {
    out << s.id << "\n";
    out << "  anchor: \"" << s.anchor << "\"\n";
    out << "  " << s.summary << "\n";
    out << "  coords:";
    for (const auto& c : s.coords) out << ' ' << c;
    out << "\n  params:";
    for (const auto& p : s.params) out << ' ' << p.name << '=' << fmt(p.default_value) << " (" << p.description << ')';
    if (s.params.empty()) out << " none";
    out << "\n";
    if (s.bihamiltonian) out << "  bi-Hamiltonian pair available\n";
    if (s.deformed) out << "  eta = 0 runs the undeformed limit\n";
  }
  return kOk;
}

// ---------------------------------------------------------------------------
// simulate

int simulate_one(const RunConfig& cfg, const std::string& dir_flag, std::ostream& out, std::ostream& err) {
  HamiltonianSystem sys;
  Vector x0;
  try {
    sys = build_or_limit(cfg.system, cfg.params);
    x0 = cfg.initial ? *cfg.initial : figure_initial_condition(cfg.system);
    if (x0.size() != sys.dim())
      throw ConfigError("initial", "expected " + std::to_string(sys.dim()) + " values, got " + std::to_string(x0.size()));
    for (const auto& p : cfg.projections) parse_projection(p, sys.coords);
  } catch (const ConfigError& e) {
    err << "invalid config: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const ParameterError& e) {
    err << "invalid config: params: " << e.what() << "\n";
    return kInvalidInput;
  }

  Trajectory traj;
  try {
    traj = run_system(sys, x0, cfg.integrator);
  } catch (const DomainError& e) {
    err << "domain error at the initial condition: " << e.what() << "\n";
    return kRuntimeDomain;
  }

  const fs::path dir = out_dir(cfg, dir_flag);
  fs::create_directories(dir);
  const std::string name = cfg.name.empty() ? cfg.system : cfg.name;
  if (cfg.emit.csv) io::write_csv(io::trajectory_table(traj), dir / (name + ".csv"));
  if (cfg.emit.svg) {
    const auto projections = cfg.projections.empty() ? default_projections(sys.coords) : cfg.projections;
    for (const auto& p : projections) {
      const auto [a, b] = parse_projection(p, sys.coords);
      io::write_text(dir / (name + "_" + sys.coords[a] + sys.coords[b] + ".svg"),
                     io::svg_plot(projection_series({{name, &traj}}, a, b), sys.coords[a], sys.coords[b], name));
    }
  }
  json report = trajectory_report(traj);
  report["config"] = to_json(cfg, false);
  report["config_hash"] = config_hash(cfg, false);
  if (cfg.emit.report) io::write_text(dir / (name + "_report.json"), report.dump(2) + "\n");

  out << name << ": " << to_string(traj.status) << ", " << traj.size() << " samples, max drift "
      << fmt(traj.max_drift()) << "\n";
  if (traj.truncated()) {
    err << "run truncated at t = " << fmt(traj.times.back()) << ": " << traj.message
        << " (output holds the samples up to that point)\n";
    return kRuntimeDomain;
  }
  return kOk;
}

int simulate_preset(const Preset& preset, const std::string& dir_flag, std::ostream& out, std::ostream& err) {
  RunConfig base;
  base.system = preset.system;
  base.integrator.t_end = 50;
  base.integrator.sample_dt = 0.01;

  struct Slot {
    Trajectory traj;
    std::string error;
  };
  std::vector<Slot> slots(preset.etas.size());
  std::vector<std::thread> workers;
  const Vector x0 = figure_initial_condition(preset.system);
  for (std::size_t i = 0; i < preset.etas.size(); ++i) {
    workers.emplace_back([&, i] {
      try {
        const auto sys = build_or_limit(preset.system, {{"eta", preset.etas[i]}});
        slots[i].traj = run_system(sys, x0, base.integrator);
      } catch (const std::exception& e) {
        slots[i].error = e.what();
      }
    });
  }
  for (auto& w : workers) w.join();

  const fs::path dir = out_dir(base, dir_flag);
  fs::create_directories(dir);
  json runs = json::array();
  std::vector<std::pair<std::string, const Trajectory*>> series;
  bool failed = false;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    const double eta = preset.etas[i];
    const std::string label = "eta = " + fmt(eta);
    if (!slots[i].error.empty()) {
      err << preset.name << " " << label << ": " << slots[i].error << "\n";
      failed = true;
      continue;
    }
    const auto& traj = slots[i].traj;
    io::write_csv(io::trajectory_table(traj), dir / (preset.name + "_eta_" + fmt(eta) + ".csv"));
    json r = trajectory_report(traj);
    r["eta"] = eta;
    r["color"] = io::figure_colors()[i % io::figure_colors().size()];
    runs.push_back(r);
    series.emplace_back(label, &traj);
    failed = failed || traj.truncated();
    out << preset.name << " " << label << ": " << to_string(traj.status) << ", max drift " << fmt(traj.max_drift());
    if (const auto c = orbit_closure(traj, 1e-3)) out << ", closes after t = " << fmt(c->period);
    else out << ", no closure within 1e-3";
    out << "\n";
  }
  const auto& coords = find_spec(preset.system).coords;
  for (const auto& p : preset.projections) {
    const auto [a, b] = parse_projection(p, coords);
    io::write_text(dir / (preset.name + "_" + coords[a] + coords[b] + ".svg"),
                   io::svg_plot(projection_series(series, a, b), coords[a], coords[b],
                                preset.name + ": " + preset.system + " " + coords[a] + coords[b] + " projection"));
  }
  json cfg = to_json(base, false);
  cfg["preset"] = preset.name;
  json report{{"preset", preset.name}, {"system", preset.system}, {"initial", std::vector<double>(x0.data(), x0.data() + x0.size())},
              {"config", cfg}, {"config_hash", io::hex64(io::fnv1a(cfg.dump()))}, {"runs", runs}};
  io::write_text(dir / (preset.name + "_report.json"), report.dump(2) + "\n");
  return failed ? kRuntimeDomain : kOk;
}

// ---------------------------------------------------------------------------
// verify

PoissonStructure broken_fixture() {
  // {x,y} = x^2 breaks Jacobi: the cyclic sum at (1,1,1) is 2
  return PoissonStructure("broken-fixture", {"x", "y", "z"}, [](const Vector& v, Matrix& m) {
    m(0, 1) = v[0] * v[0];
    m(0, 2) = v[1];
    m(1, 2) = v[0];
  });
}

VerifyResult check(std::string scope, std::string property, double value, double tol, std::string detail = {}) {
  return {std::move(scope), std::move(property), value, tol, value < tol, std::move(detail)};
}

std::vector<Params> verify_variants(const SystemSpec& spec) {
  std::vector<Params> out;
  const bool has_lambda = std::any_of(spec.params.begin(), spec.params.end(), [](const ParamSpec& p) { return p.name == "lambda"; });
  if (has_lambda) {
    for (double l : {0.0, 0.25, 1.0}) out.push_back({{"lambda", l}});
  } else {
    out.push_back({});
  }
  return out;
}

std::string describe(const Params& p) {
  std::string s;
  for (const auto& [k, v] : p) s += (s.empty() ? "" : ", ") + k + "=" + fmt(v);
  return s;
}

void verify_system(const SystemSpec& spec, std::vector<VerifyResult>& out) {
  for (const auto& params : verify_variants(spec)) {
    const auto sys = build(spec.id, params);
    const std::string detail = describe(resolve_params(spec.id, params));
    const auto pts = sample_points(sys.dim(), 100, -2, 2, kSampleSeed, [&](const Vector& x) {
      if (sys.hamiltonian && !sys.hamiltonian->in_domain(x)) return false;
      return std::all_of(sys.invariants.begin(), sys.invariants.end(), [&](const ScalarField& f) { return f.in_domain(x); });
    });
    if (!sys.structure) {
      double worst = 0;
      for (const auto& x : pts) {
        const Vector f = vector_field(sys, x);
        worst = std::max(worst, f.allFinite() ? 0.0 : INFINITY);
      }
      out.push_back(check(spec.id, "vector_field_finite", worst, 1e-300, detail + " (no Poisson structure)"));
      continue;
    }
    double jac = 0;
    for (const auto& x : pts) jac = std::max(jac, jacobi_residual(*sys.structure, x, PartialsMode::Analytic));
    out.push_back(check(spec.id, "jacobi_residual", jac, 1e-9, detail));
    for (const auto& c : sys.structure->casimirs()) {
      double worst = 0;
      for (const auto& x : pts) worst = std::max(worst, casimir_residual(*sys.structure, c, x));
      out.push_back(check(spec.id, "casimir_residual[" + c.name() + "]", worst, 1e-9, detail));
    }
    if (sys.handcoded_vf && sys.is_hamiltonian()) {
      double worst = 0;
      for (const auto& x : pts) {
        const Vector ham = hamiltonian_vector_field(sys, x);
        worst = std::max(worst, (sys.handcoded_vf(x) - ham).cwiseAbs().maxCoeff() / std::max(1.0, ham.cwiseAbs().maxCoeff()));
      }
      out.push_back(check(spec.id, "handcoded_vs_hamiltonian_field", worst, 1e-9, detail));
    }
    if (spec.bihamiltonian) {
      const auto pair = build_pair(spec.id, params);
      double worst = 0;
      for (const auto& x : pts) {
        try {
          worst = std::max(worst, bihamiltonian_agreement(pair, x));
        } catch (const DomainError&) {
        }
      }
      out.push_back(check(spec.id, "bihamiltonian_agreement", worst, 1e-10, detail));
    }
  }
}

void verify_global(std::vector<VerifyResult>& out) {
  const auto pts6 = sample_points(6, 100, -1, 1, kSampleSeed);
  struct Pair {
    const char* name;
    PoissonStructure structure;
    CoproductMap cp;
    MatrixLieGroupRep rep;
  };
  const std::vector<Pair> pairs{{"book", book_structure(1), book_coproduct(1), book_group_rep()},
                                {"heisenberg-weyl", heisenberg_structure(1), heisenberg_coproduct(1), heisenberg_group_rep()},
                                {"primed", primed_structure(1, 1), primed_coproduct(1), primed_book_group_rep()}};
  for (const auto& p : pairs) {
    double pm = 0, oracle = 0;
    for (const auto& s : pts6) {
      pm = std::max(pm, poisson_map_residual(p.structure, p.cp, s));
      oracle = std::max(oracle, (coproduct_from_group(p.rep, s.head(3), s.tail(3), 1) - p.cp.apply(s)).cwiseAbs().maxCoeff());
    }
    out.push_back(check(std::string("coproduct:") + p.name, "poisson_map_residual", pm, 1e-9, "eta=1"));
    out.push_back(check(std::string("coproduct:") + p.name, "group_law_oracle", oracle, 1e-12, "eta=1"));
  }

  std::mt19937_64 rng(kSampleSeed);
  std::uniform_real_distribution<double> uq(-1, 1), up(-0.6, 0.6);
  std::vector<std::pair<double, double>> qp;
  for (int i = 0; i < 100; ++i) qp.emplace_back(uq(rng), up(rng));
  const std::vector<std::pair<std::string, Params>> realizations{
      {"case-a", {{"k", 1.3}}},
      {"case-ab-pencil", {{"k", 1}, {"lambda", 0.25}}},
      {"case-a-book", {{"k", 1.5}, {"eta", 1}}},
      {"case-a-heisenberg", {{"k", 0.7}, {"eta", 1}}},
      {"case-ab-deformed", {{"k", 1}, {"lambda", 0.25}, {"eta", 1}}}};
  for (const auto& [id, params] : realizations) {
    const auto r = build_realization(id, params);
    double push = 0, leaf = 0;
    for (const auto& [q, p] : qp) {
      push = std::max(push, pushforward_residual(r, q, p));
      leaf = std::max(leaf, std::abs(r.leaf_value(q, p) - r.k) / std::abs(r.k));
    }
    const std::string detail = describe(params) + ", sign " + std::to_string(r.sign);
    out.push_back(check("realization:" + id, "pushforward_residual", push, 1e-9, detail));
    out.push_back(check("realization:" + id, "casimir_constancy", leaf, 1e-10, detail));
  }

  for (int lambda : {0, 1}) {
    double worst = 0;
    for (const auto& s : pts6) worst = std::max(worst, cluster_dynamics_residual(lambda, 1, s));
    out.push_back(check("coupled", "cluster_dynamics_residual", worst, 1e-8, "lambda=" + std::to_string(lambda) + ", eta=1"));
  }
}

void print_results(const std::vector<VerifyResult>& results, bool as_json, std::ostream& out) {
  if (as_json) {
    json arr = json::array();
    for (const auto& r : results)
      arr.push_back({{"scope", r.scope}, {"property", r.property}, {"value", r.value}, {"tolerance", r.tolerance},
                     {"pass", r.pass}, {"detail", r.detail}});
    out << arr.dump(2) << "\n";
    return;
  }
  for (const auto& r : results) {
    out << (r.pass ? "PASS " : "FAIL ") << r.scope << " " << r.property << " " << fmt(r.value) << " (tol "
        << fmt(r.tolerance) << ")";
    if (!r.detail.empty()) out << " [" << r.detail << "]";
    out << "\n";
  }
}

// ---------------------------------------------------------------------------
// cocycle

int cmd_cocycle(const std::string& beta_text, bool as_json, std::ostream& out, std::ostream& err) {
  Rational beta;
  try {
    beta = parse_rational(beta_text);
  } catch (const std::exception& e) {
    err << "invalid --beta '" << beta_text << "': " << e.what() << "\n";
    return kInvalidInput;
  }
  const auto samples = default_lambda_samples();
  const auto basis = solve_common_cocycle(case_b_pencil(beta), samples);
  const auto variety = cojacobi_variety(basis);

  Cocommutator book(case_b_pencil(beta).at(0).labels());
  book.add(0, 0, 2, 1).add(1, 1, 2, 1);
  const bool book_in_span = in_span(basis, book);
  const bool book_survives = book_in_span && cojacobi_residual(book).empty();

  std::string sample_text;
  for (const auto& l : samples) sample_text += (sample_text.empty() ? "" : ", ") + to_string(l);

  if (as_json) {
    json j{{"beta", to_string(beta)},
           {"lambda_samples", sample_text},
           {"pre_filter_dimension", basis.size()},
           {"basis", json::array()},
           {"cojacobi_identically_satisfied", variety.identically_satisfied},
           {"cojacobi_forms", variety.forms.size()},
           {"post_filter_dimension", variety.surviving_dimension ? json(*variety.surviving_dimension) : json(nullptr)},
           {"surviving_examples", json::array()},
           {"book_cocommutator_in_span", book_in_span},
           {"book_cocommutator_survives", book_survives}};
    for (const auto& b : basis) j["basis"].push_back(b.to_string());
    for (const auto& d : variety.surviving_examples) j["surviving_examples"].push_back(d.to_string());
    out << j.dump(2) << "\n";
    return kOk;
  }
  out << "case-B pencil, beta = " << to_string(beta) << ", lambda samples {" << sample_text << "}\n";
  out << "common cocycle nullspace dimension (before co-Jacobi): " << basis.size() << "\n";
  for (std::size_t i = 0; i < basis.size(); ++i) out << "  basis[" << i << "]: " << basis[i].to_string() << "\n";
  if (variety.identically_satisfied) {
    out << "co-Jacobi holds identically on the span\n";
  } else {
    out << "co-Jacobi on the span: " << variety.forms.size() << " independent quadratic form(s)\n";
  }
  out << "surviving dimension (after co-Jacobi): ";
  if (variety.surviving_dimension) out << *variety.surviving_dimension << "\n";
  else out << "undecided\n";
  for (const auto& d : variety.surviving_examples) out << "  survivor: " << d.to_string() << "\n";
  out << "book cocommutator " << book.to_string() << ": " << (book_in_span ? "in span" : "not in span")
      << (book_survives ? ", survives co-Jacobi" : "") << "\n";
  return kOk;
}

// ---------------------------------------------------------------------------
// couple

RunConfig default_couple_config() {
  RunConfig c;
  c.system = "coupled-ab-primed";
  c.initial = (Vector(6) << 0.5, 1, 1, 0.3, 0.8, -0.2).finished();
  c.integrator.t_end = 20;
  c.integrator.sample_dt = 0.01;
  return c;
}

int cmd_couple(RunConfig cfg, const std::string& dir_flag, std::ostream& out, std::ostream& err) {
  HamiltonianSystem sys;
  try {
    sys = coupled_system(cfg.lambda, cfg.eta);
    if (cfg.initial->size() != 6) throw ConfigError("initial", "expected 6 values");
  } catch (const ConfigError& e) {
    err << "invalid config: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const ParameterError& e) {
    err << "invalid config: " << e.what() << "\n";
    return kInvalidInput;
  }
  const double eta = cfg.eta, lambda = cfg.lambda;
  const Vector x0 = cfg.initial_is_cluster ? from_cluster(*cfg.initial, eta) : *cfg.initial;
  Trajectory traj, ref;
  try {
    traj = run_system(sys, x0, cfg.integrator);
    const Vector c0 = to_cluster(x0, eta).head(3);
    ref = integrate([eta](const Vector& x) { return primed_rhs(x, eta); }, {"x'", "y'", "z'"},
                    {primed_hamiltonian(lambda, eta), primed_casimir(lambda, eta)}, c0, cfg.integrator);
  } catch (const DomainError& e) {
    err << "domain error at the initial condition: " << e.what() << "\n";
    return kRuntimeDomain;
  }

  auto table = io::trajectory_table(traj);
  std::vector<double> xp, yp, zp, residual;
  double deviation = 0;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const Vector c = to_cluster(traj.states[i], eta);
    xp.push_back(c[0]);
    yp.push_back(c[1]);
    zp.push_back(c[2]);
    residual.push_back(cluster_dynamics_residual(cfg.lambda, eta, traj.states[i]));
    if (i < ref.size()) deviation = std::max(deviation, (c.head(3) - ref.states[i]).cwiseAbs().maxCoeff());
  }
  io::append_column(table, "x+", xp);
  io::append_column(table, "y+", yp);
  io::append_column(table, "z+", zp);
  io::append_column(table, "cluster_residual", residual);

  const fs::path dir = out_dir(cfg, dir_flag);
  fs::create_directories(dir);
  const std::string name =
      cfg.name.empty() ? "couple_lambda" + std::to_string(cfg.lambda) + "_eta_" + fmt(eta) : cfg.name;
  if (cfg.emit.csv) io::write_csv(table, dir / (name + ".csv"));
  json report = trajectory_report(traj);
  report["lambda"] = cfg.lambda;
  report["eta"] = eta;
  report["cluster_vs_one_copy_max_deviation"] = deviation;
  report["one_copy_samples"] = ref.size();
  report["max_cluster_residual"] = residual.empty() ? 0.0 : *std::max_element(residual.begin(), residual.end());
  report["config"] = to_json(cfg, true);
  report["config_hash"] = config_hash(cfg, true);
  if (cfg.emit.report) io::write_text(dir / (name + "_report.json"), report.dump(2) + "\n");

  out << name << ": " << to_string(traj.status) << ", " << traj.size() << " samples, max drift "
      << fmt(traj.max_drift()) << ", cluster vs one-copy deviation " << fmt(deviation) << "\n";
  if (traj.truncated() || ref.truncated()) {
    err << "run truncated: " << traj.message << ref.message << "\n";
    return kRuntimeDomain;
  }
  return kOk;
}

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config", std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Public

RunConfig parse_run_config(const json& j) {
  reject_unknown(j, "", {"system", "params", "initial", "integrator", "output"});
  RunConfig c;
  if (!j.contains("system")) throw ConfigError("system", "required");
  c.system = text(j["system"], "system");
  try {
    find_spec(c.system);
  } catch (const ParameterError& e) {
    throw ConfigError("system", e.what());
  }
  if (j.contains("params")) {
    const auto& p = j["params"];
    if (!p.is_object()) throw ConfigError("params", "expected an object");
    for (const auto& [key, value] : p.items()) c.params[key] = number(value, "params." + key);
    try {
      resolve_params(c.system, c.params);
    } catch (const ParameterError& e) {
      throw ConfigError("params", e.what());
    }
  }
  if (j.contains("initial")) c.initial = vector_of(j["initial"], "initial");
  if (j.contains("integrator")) parse_integrator(j["integrator"], c.integrator);
  if (j.contains("output")) parse_output(j["output"], c);
  return c;
}

RunConfig parse_couple_config(const json& j) {
  reject_unknown(j, "", {"lambda", "eta", "initial", "initial_cluster", "integrator", "output"});
  RunConfig c = default_couple_config();
  if (j.contains("lambda")) {
    const double l = number(j["lambda"], "lambda");
    if (l != 0 && l != 1) throw ConfigError("lambda", "must be 0 or 1");
    c.lambda = static_cast<int>(l);
  }
  if (j.contains("eta")) c.eta = number(j["eta"], "eta");
  if (j.contains("initial") && j.contains("initial_cluster"))
    throw ConfigError("initial_cluster", "give either initial or initial_cluster, not both");
  for (const char* key : {"initial", "initial_cluster"}) {
    if (!j.contains(key)) continue;
    c.initial = vector_of(j[key], key);
    c.initial_is_cluster = std::string(key) == "initial_cluster";
    if (c.initial->size() != 6) throw ConfigError(key, "expected 6 values");
  }
  if (j.contains("integrator")) parse_integrator(j["integrator"], c.integrator);
  if (j.contains("output")) parse_output(j["output"], c);
  return c;
}

RunConfig load_config(const fs::path& path, bool couple) {
  const json j = read_json(path);
  return couple ? parse_couple_config(j) : parse_run_config(j);
}

json to_json(const RunConfig& c, bool couple) {
  const auto& i = c.integrator;
  json j;
  if (couple) {
    j["lambda"] = c.lambda;
    j["eta"] = c.eta;
  } else {
    j["system"] = c.system;
    j["params"] = resolve_params(c.system, c.params);
  }
  if (c.initial)
    j[couple && c.initial_is_cluster ? "initial_cluster" : "initial"] =
        std::vector<double>(c.initial->data(), c.initial->data() + c.initial->size());
  j["integrator"] = {{"method", to_string(i.method)}, {"h", i.h},          {"abs_tol", i.abs_tol},
                     {"rel_tol", i.rel_tol},          {"t_end", i.t_end},  {"max_steps", i.max_steps},
                     {"sample_dt", i.sample_dt},      {"sample_stride", i.sample_stride}};
  j["output"] = {{"dir", c.out_dir},     {"name", c.name},     {"csv", c.emit.csv},
                 {"svg", c.emit.svg},    {"report", c.emit.report}, {"projections", c.projections}};
  return j;
}

std::string config_hash(const RunConfig& c, bool couple) {
  json j = to_json(c, couple);
  j["output"].erase("dir");  // where the files go does not change what they contain
  return io::hex64(io::fnv1a(j.dump()));
}

std::pair<int, int> parse_projection(const std::string& proj, const std::vector<std::string>& coords) {
  auto index = [&](const std::string& name) {
    const auto it = std::find(coords.begin(), coords.end(), name);
    return it == coords.end() ? -1 : static_cast<int>(it - coords.begin());
  };
  if (const auto colon = proj.find(':'); colon != std::string::npos) {
    const int a = index(proj.substr(0, colon)), b = index(proj.substr(colon + 1));
    if (a >= 0 && b >= 0) return {a, b};
  } else {
    for (std::size_t cut = 1; cut < proj.size(); ++cut) {
      const int a = index(proj.substr(0, cut)), b = index(proj.substr(cut));
      if (a >= 0 && b >= 0) return {a, b};
    }
  }
  throw ConfigError("output.projections", "cannot split '" + proj + "' into two coordinates");
}

const std::vector<Preset>& presets() {
  static const std::vector<Preset> p{
      {"figure1", "case-a-book", {-0.5, -0.25, 0, 1, 2}, {"xz", "yz"}},
      {"figure2", "case-a-heisenberg", {-0.5, -0.25, 0, 1, 2}, {"xz", "yx"}},
      {"figure3", "case-ab-deformed", {-2, -1, 0, 1, 2}, {"yz", "xz"}},
  };
  return p;
}

std::vector<VerifyResult> verify(const std::string& scope, bool inject_broken) {
  std::vector<VerifyResult> out;
  if (scope == "all") {
    for (const auto& spec : catalog()) verify_system(spec, out);
    verify_global(out);
  } else {
    verify_system(find_spec(scope), out);
  }
  if (inject_broken) {
    const auto b = broken_fixture();
    double worst = 0;
    for (const auto& x : sample_points(3, 100, -2, 2, kSampleSeed))
      worst = std::max(worst, jacobi_residual(b, x, PartialsMode::FiniteDifference));
    out.push_back(check("broken-fixture", "jacobi_residual", worst, 1e-9, "{x,y} = x^2, {x,z} = y, {y,z} = x"));
  }
  return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Lie-Poisson Rikitake systems: build, verify, integrate and couple"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  auto* list = app.add_subcommand("list", "print catalog ids, parameters and anchors");

  std::string config_path, preset_name, out_flag;
  auto* sim = app.add_subcommand("simulate", "integrate a catalog system from a JSON config or a figure preset");
  sim->add_option("--config", config_path, "JSON run config");
  sim->add_option("--preset", preset_name, "figure preset")->check(CLI::IsMember({"figure1", "figure2", "figure3"}));
  sim->add_option("--out", out_flag, "output directory (overrides RIKITAKE_OUT_DIR and the config)");

  std::string scope = "all";
  bool inject = false, as_json = false;
  auto* ver = app.add_subcommand("verify", "run the property suites");
  ver->add_option("scope", scope, "all or a catalog id");
  ver->add_flag("--inject-broken", inject, "add a fixture whose bracket violates Jacobi");
  ver->add_flag("--json", as_json, "machine-readable output");

  std::string beta = "1";
  auto* coc = app.add_subcommand("cocycle", "common cocycles of the case-B pencil");
  coc->add_option("--beta", beta, "central charge (rational, e.g. 1 or 3/2)");
  coc->add_flag("--json", as_json, "machine-readable output");

  std::optional<int> lambda_flag;
  std::optional<double> eta_flag;
  auto* cpl = app.add_subcommand("couple", "integrate two coproduct-coupled primed AB copies");
  cpl->add_option("--lambda", lambda_flag, "0 or 1")->check(CLI::IsMember({0, 1}));
  cpl->add_option("--eta", eta_flag, "deformation parameter");
  cpl->add_option("--config", config_path, "JSON couple config");
  cpl->add_option("--out", out_flag, "output directory");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n" << "run with --help for usage\n";
    return kInvalidInput;
  }

  try {
    if (list->parsed()) return cmd_list(out);
    if (sim->parsed()) {
      if (config_path.empty() == preset_name.empty()) {
        err << "simulate needs exactly one of --config or --preset\n";
        return kInvalidInput;
      }
      if (!preset_name.empty()) {
        for (const auto& p : presets())
          if (p.name == preset_name) return simulate_preset(p, out_flag, out, err);
      }
      return simulate_one(load_config(config_path, false), out_flag, out, err);
    }
    if (ver->parsed()) {
      std::vector<VerifyResult> results;
      try {
        results = verify(scope, inject);
      } catch (const ParameterError& e) {
        err << e.what() << "\n";
        return kInvalidInput;
      }
      print_results(results, as_json, out);
      const auto failed = std::count_if(results.begin(), results.end(), [](const VerifyResult& r) { return !r.pass; });
      if (!as_json) out << results.size() - static_cast<std::size_t>(failed) << "/" << results.size() << " properties pass\n";
      return failed ? kVerifyFailed : kOk;
    }
    if (coc->parsed()) return cmd_cocycle(beta, as_json, out, err);
    if (cpl->parsed()) {
      RunConfig cfg = config_path.empty() ? default_couple_config() : load_config(config_path, true);
      if (lambda_flag) cfg.lambda = *lambda_flag;
      if (eta_flag) {
        if (!std::isfinite(*eta_flag)) throw ConfigError("eta", "must be finite");
        cfg.eta = *eta_flag;
      }
      return cmd_couple(cfg, out_flag, out, err);
    }
  } catch (const ConfigError& e) {
    err << "invalid config: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << "\n";
    return kRuntimeDomain;
  }
  return kInvalidInput;
}

}  // namespace rikitake::cli
