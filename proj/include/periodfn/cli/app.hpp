#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "periodfn/cli/io.hpp"
#include "periodfn/criterion.hpp"
#include "periodfn/gallery.hpp"
#include "periodfn/parallel.hpp"
#include "periodfn/period.hpp"
#include "periodfn/polyfamily.hpp"

namespace periodfn::cli {

enum ExitCode : int {
  kOk = 0,
  kNegative = 1,
  kInvalid = 2,
  kPartial = 3,
  kIndeterminate = 4,
};

struct RunConfig {
  std::optional<SystemSpec> system;
  std::optional<double> emin, emax;
  int n = 10;
  std::optional<double> e0;
  int resolution = 512;
  int depth = 4;
  double tol = 1e-10;
  std::string format = "csv";
  std::optional<std::string> out;
  PeriodMethod method = PeriodMethod::Theta;
  std::optional<std::string> batch;
  int threads = 1;
};

/// Flags as given on the command line; unset ones leave the config untouched.
struct FlagValues {
  std::optional<std::string> config;
  std::optional<std::string> system;
  std::optional<double> emin, emax, e0, tol;
  std::optional<int> n, resolution, depth, threads;
  std::optional<std::string> format, out, method, batch;
};

inline const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {"system", "emin", "emax",   "n",      "e0",    "resolution", "depth",
                                                "tol",    "format", "out", "method", "batch", "threads"};
  return keys;
}

inline void apply_config_json(RunConfig& cfg, const json& j) {
  if (!j.is_object()) throw Error(ErrorKind::InvalidConfig, "config must be a JSON object");
  for (const auto& [key, value] : j.items())
    if (std::find(config_keys().begin(), config_keys().end(), key) == config_keys().end())
      throw Error(ErrorKind::InvalidConfig, "unknown config key: " + key);
  auto number = [&](const char* key) -> std::optional<double> {
    if (!j.contains(key)) return std::nullopt;
    if (!j.at(key).is_number()) throw Error(ErrorKind::InvalidConfig, std::string("'") + key + "' must be a number");
    return j.at(key).get<double>();
  };
  auto integer = [&](const char* key) -> std::optional<int> {
    if (!j.contains(key)) return std::nullopt;
    if (!j.at(key).is_number_integer()) throw Error(ErrorKind::InvalidConfig, std::string("'") + key + "' must be an integer");
    return j.at(key).get<int>();
  };
  auto text = [&](const char* key) -> std::optional<std::string> {
    if (!j.contains(key)) return std::nullopt;
    if (!j.at(key).is_string()) throw Error(ErrorKind::InvalidConfig, std::string("'") + key + "' must be a string");
    return j.at(key).get<std::string>();
  };
  if (j.contains("system")) cfg.system = system_spec_from_json(j.at("system"));
  if (auto v = number("emin")) cfg.emin = v;
  if (auto v = number("emax")) cfg.emax = v;
  if (auto v = number("e0")) cfg.e0 = v;
  if (auto v = number("tol")) cfg.tol = *v;
  if (auto v = integer("n")) cfg.n = *v;
  if (auto v = integer("resolution")) cfg.resolution = *v;
  if (auto v = integer("depth")) cfg.depth = *v;
  if (auto v = integer("threads")) cfg.threads = *v;
  if (auto v = text("format")) cfg.format = *v;
  if (auto v = text("out")) cfg.out = v;
  if (auto v = text("batch")) cfg.batch = v;
  if (auto v = text("method")) {
    const auto m = parse_period_method(*v);
    if (!m) throw Error(ErrorKind::InvalidConfig, "unknown method: " + *v);
    cfg.method = *m;
  }
}

inline RunConfig build_config(const FlagValues& f) {
  RunConfig cfg;
  if (f.config) {
    std::ifstream in(*f.config);
    if (!in) throw Error(ErrorKind::InvalidConfig, "cannot read config file " + *f.config);
    json j;
    try {
      j = json::parse(in);
    } catch (const json::exception& e) {
      throw Error(ErrorKind::InvalidConfig, std::string("config is not valid JSON: ") + e.what());
    }
    apply_config_json(cfg, j);
  }
  if (f.system) cfg.system = parse_system_spec(*f.system);
  if (f.emin) cfg.emin = f.emin;
  if (f.emax) cfg.emax = f.emax;
  if (f.e0) cfg.e0 = f.e0;
  if (f.tol) cfg.tol = *f.tol;
  if (f.n) cfg.n = *f.n;
  if (f.resolution) cfg.resolution = *f.resolution;
  if (f.depth) cfg.depth = *f.depth;
  if (f.threads) cfg.threads = *f.threads;
  if (f.format) cfg.format = *f.format;
  if (f.out) cfg.out = f.out;
  if (f.batch) cfg.batch = f.batch;
  if (f.method) {
    const auto m = parse_period_method(*f.method);
    if (!m) throw Error(ErrorKind::InvalidConfig, "unknown method: " + *f.method);
    cfg.method = *m;
  }

  if (cfg.format != "csv" && cfg.format != "json") throw Error(ErrorKind::InvalidConfig, "format must be csv or json");
  if (!(cfg.tol > 0.0) || !std::isfinite(cfg.tol)) throw Error(ErrorKind::InvalidConfig, "tol must be positive");
  if (cfg.n < 1) throw Error(ErrorKind::InvalidConfig, "n must be at least 1");
  if (cfg.resolution < 2) throw Error(ErrorKind::InvalidConfig, "resolution must be at least 2");
  if (cfg.depth < 0) throw Error(ErrorKind::InvalidConfig, "depth must be nonnegative");
  if (cfg.threads < 1) throw Error(ErrorKind::InvalidConfig, "threads must be at least 1");
  for (const auto* v : {&cfg.emin, &cfg.emax, &cfg.e0})
    if (*v && !(**v > 0.0 && std::isfinite(**v))) throw Error(ErrorKind::InvalidConfig, "energies must be positive and finite");
  if (cfg.emin && cfg.emax && !(*cfg.emin < *cfg.emax))
    throw Error(ErrorKind::InvalidConfig, "emin must be smaller than emax");
  return cfg;
}

namespace detail {

inline const SystemSpec& require_system(const RunConfig& cfg) {
  if (!cfg.system) throw Error(ErrorKind::InvalidConfig, "a system is required (--system or config 'system')");
  return *cfg.system;
}

inline void emit(const RunConfig& cfg, std::ostream& out, const std::string& text) {
  if (cfg.out) {
    std::ofstream f(*cfg.out, std::ios::binary);
    if (!f) throw Error(ErrorKind::InvalidConfig, "cannot write " + *cfg.out);
    f << text;
    return;
  }
  out << text;
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

inline std::vector<double> energy_grid(const RunConfig& cfg, const ResolvedSystem& sys) {
  const double e_star = sys.H.require_annulus().e_star;
  double hi;
  if (cfg.emax) {
    hi = *cfg.emax;
  } else if (std::isfinite(e_star)) {
    hi = e_star * (1.0 - 1e-3);
  } else if (sys.example) {
    hi = sys.example->check_e;
  } else {
    throw Error(ErrorKind::InvalidConfig, "the annulus is unbounded; --emax is required");
  }
  if (cfg.n == 1) return {cfg.emin.value_or(hi)};
  const double lo = cfg.emin.value_or(hi / cfg.n);
  if (!(lo < hi)) throw Error(ErrorKind::InvalidConfig, "energy grid is empty");
  std::vector<double> grid(cfg.n);
  for (int i = 0; i < cfg.n; ++i) grid[i] = i == cfg.n - 1 ? hi : lo + (hi - lo) * i / (cfg.n - 1);
  return grid;
}

inline QuadratureOptions quadrature_options(const RunConfig& cfg) {
  QuadratureOptions q;
  q.abs_tol = 0.0;
  q.rel_tol = cfg.tol;
  return q;
}

inline PeriodSample sample_period(const SeparableHamiltonian& H, double E, const RunConfig& cfg) {
  if (cfg.method == PeriodMethod::Ode) {
    OracleOptions o;
    o.tol = std::min(cfg.tol, 1e-11);
    return return_time_oracle(H, E, o);
  }
  return period(H, E, cfg.method, quadrature_options(cfg));
}

}  // namespace detail

/// period and derivative: one row per grid energy.
inline int cmd_curve(const RunConfig& cfg, bool derivative, std::ostream& out) {
  const ResolvedSystem sys = resolve(detail::require_system(cfg));
  const std::vector<double> grid = detail::energy_grid(cfg, sys);
  std::vector<CurveRow> rows(grid.size());
  const PeriodMethod method = derivative ? PeriodMethod::Theta : cfg.method;
  periodfn::detail::parallel_for(grid.size(), cfg.threads, [&](std::size_t i) {
    CurveRow& r = rows[i];
    r.E = grid[i];
    r.method = std::string(to_string(method));
    try {
      if (derivative) {
        const PeriodSample s = period(sys.H, grid[i], PeriodMethod::Theta, detail::quadrature_options(cfg));
        const DerivativeEstimate d = period_derivative(sys.H, grid[i]);
        r.T = s.period;
        r.dTdE = d.value;
        r.err = d.error;
      } else {
        const PeriodSample s = detail::sample_period(sys.H, grid[i], cfg);
        r.T = s.period;
        r.err = s.error;
      }
    } catch (const Error& e) {
      r.failure = e.what();
    }
  });
  const bool gaps = std::any_of(rows.begin(), rows.end(), [](const CurveRow& r) { return !r.failure.empty(); });
  detail::emit(cfg, out, cfg.format == "json" ? detail::dump(curve_json(sys.label, rows)) : curve_csv(rows));
  return gaps ? kPartial : kOk;
}

inline int certificate_exit(const SignCertificate& c) {
  switch (c.verdict) {
    case Verdict::NonNegative:
    case Verdict::NonPositive: return kOk;
    case Verdict::Mixed: return kNegative;
    case Verdict::Indeterminate: return kIndeterminate;
  }
  return kIndeterminate;
}

inline int cmd_criterion(const RunConfig& cfg, std::ostream& out) {
  const ResolvedSystem sys = resolve(detail::require_system(cfg));
  const double e_star = sys.H.require_annulus().e_star;
  double e0;
  if (cfg.e0) e0 = *cfg.e0;
  else if (std::isfinite(e_star)) e0 = e_star;
  else if (sys.example) e0 = sys.example->check_e;
  else e0 = 1.0;
  CertificateOptions opt;
  opt.resolution = cfg.resolution;
  opt.depth = cfg.depth;
  opt.threads = cfg.threads;
  const SignCertificate c = sign_certificate(sys.H, e0, opt);
  if (cfg.format == "json") {
    json j = to_json(c);
    j["system"] = sys.label;
    detail::emit(cfg, out, detail::dump(j));
  } else {
    std::string s = "system,verdict,e0,resolution,depth,positive,negative,zero,margin,reason\n";
    s += csv_escape(sys.label) + "," + std::string(to_string(c.verdict)) + "," + format_double(c.e0) + "," +
         std::to_string(c.resolution) + "," + std::to_string(c.depth) + "," + std::to_string(c.positive) + "," +
         std::to_string(c.negative) + "," + std::to_string(c.zero) + "," + format_double(c.margin) + "," +
         csv_escape(c.reason) + "\n";
    detail::emit(cfg, out, s);
  }
  return certificate_exit(c);
}

namespace detail {

inline FamilyParams family_of(const SystemSpec& s) {
  if (s.kind == SystemSpec::Kind::Family) return s.family;
  if (s.kind == SystemSpec::Kind::Raw) return normalize(s.raw);
  if (s.kind == SystemSpec::Kind::Builtin) {
    const ExampleSystem ex = builtin(s.name);
    if (ex.family) return *ex.family;
  }
  throw Error(ErrorKind::InvalidConfig, "classify needs family parameters or a raw quintuple");
}

inline std::vector<std::string> read_batch(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidConfig, "cannot read batch file " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos || line[b] == '#') continue;
    const auto e = line.find_last_not_of(" \t\r");
    lines.push_back(line.substr(b, e - b + 1));
  }
  return lines;
}

}  // namespace detail

inline int cmd_classify(const RunConfig& cfg, std::ostream& out) {
  std::vector<std::string> specs;
  if (cfg.batch) {
    specs = detail::read_batch(*cfg.batch);
  }
  std::vector<std::optional<FamilyClassification>> results;
  std::vector<std::string> failures;
  if (cfg.batch) {
    results.resize(specs.size());
    failures.resize(specs.size());
    periodfn::detail::parallel_for(specs.size(), cfg.threads, [&](std::size_t i) {
      try {
        results[i] = classify(detail::family_of(parse_system_spec(specs[i])));
      } catch (const Error& e) {
        failures[i] = e.what();
      }
    });
  } else {
    results.push_back(classify(detail::family_of(detail::require_system(cfg))));
    failures.emplace_back();
  }

  if (cfg.format == "json") {
    json arr = json::array();
    for (std::size_t i = 0; i < results.size(); ++i) {
      if (results[i]) arr.push_back(to_json(*results[i]));
      else arr.push_back({{"input", specs[i]}, {"error", failures[i]}});
    }
    detail::emit(cfg, out, detail::dump(cfg.batch ? arr : arr.at(0)));
  } else {
    std::string s;
    for (const auto& h : classification_csv_header()) s += (s.empty() ? "" : ",") + h;
    s += "\n";
    for (std::size_t i = 0; i < results.size(); ++i) {
      if (results[i]) s += classification_csv_row(*results[i]) + "\n";
      else s += ",,,error,,,,,,," + csv_escape(specs[i] + ": " + failures[i]) + "\n";
    }
    detail::emit(cfg, out, s);
  }
  if (cfg.batch)
    return std::any_of(failures.begin(), failures.end(), [](const std::string& f) { return !f.empty(); }) ? kPartial : kOk;
  return results[0]->verdict == FamilyVerdict::IndeterminateNearOrigin ? kIndeterminate : kOk;
}

// ---- verify ----

struct VerifyCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct VerifyReport {
  std::string system;
  FamilyVerdict expected = FamilyVerdict::OutsideTheorem;
  double e_check = 0.0;
  std::vector<VerifyCheck> checks;
  bool passed() const {
    return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const VerifyCheck& c) { return c.passed; });
  }
};

namespace detail {

inline std::string short_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

inline std::vector<double> log_energies(double hi, int count) {
  std::vector<double> e(count);
  const double lo = 1e-3 * hi, top = 0.95 * hi;
  for (int i = 0; i < count; ++i) e[i] = lo * std::pow(top / lo, static_cast<double>(i) / (count - 1));
  return e;
}

}  // namespace detail

/// Certificate, classification, derivative signs and cross-method periods on one interval.
inline VerifyReport verify_system(const ResolvedSystem& sys, std::optional<double> emax, const RunConfig& cfg) {
  VerifyReport rep;
  rep.system = sys.label;
  const ValidationReport v = validate_center(sys.H);
  rep.checks.push_back({"center hypotheses", v.passed, v.passed ? "all hold" : "a hypothesis fails"});
  if (!v.passed) return rep;
  const double e_star = sys.H.require_annulus().e_star;

  std::optional<double> e_hi;
  if (sys.example) {
    rep.expected = sys.example->expected;
    e_hi = sys.example->check_e;
  } else if (sys.family) {
    const FamilyClassification c = classify(*sys.family);
    std::string info = c.case_label + " " + std::string(to_string(c.verdict));
    bool ok = true;
    if (c.monotone() || c.verdict == FamilyVerdict::Constant) {
      rep.expected = c.verdict;
      e_hi = std::isfinite(c.e0) ? c.e0 * sys.energy_scale : 10.0 * sys.energy_scale;
    } else if (c.remark) {
      rep.expected = c.remark->verdict;
      e_hi = 0.9 * c.remark->e_hi * sys.energy_scale;
      info += "; remark regime " + std::string(to_string(c.remark->verdict)) + " below " +
                detail::short_number(c.remark->e_hi);
    } else {
      ok = false;
    }
    rep.checks.push_back({"classification", ok, info});
  }
  if (emax) e_hi = *emax;
  if (!e_hi) e_hi = std::isfinite(e_star) ? e_star : 10.0;
  e_hi = std::min(*e_hi, e_star);
  rep.e_check = *e_hi;

  CertificateOptions opt;
  opt.resolution = cfg.resolution;
  opt.depth = cfg.depth;
  opt.threads = cfg.threads;
  const SignCertificate cert = sign_certificate(sys.H, *e_hi, opt);
  if (rep.expected == FamilyVerdict::OutsideTheorem && !sys.family) {
    // Explicit systems: the certificate itself sets the expectation.
    if (cert.identically_zero) rep.expected = FamilyVerdict::Constant;
    else if (cert.verdict == Verdict::NonNegative) rep.expected = FamilyVerdict::Increasing;
    else if (cert.verdict == Verdict::NonPositive) rep.expected = FamilyVerdict::Decreasing;
  }
  {
    bool ok = false;
    if (rep.expected == FamilyVerdict::Constant) ok = cert.identically_zero;
    else if (rep.expected == FamilyVerdict::Increasing) ok = cert.certifies(Verdict::NonNegative);
    else if (rep.expected == FamilyVerdict::Decreasing) ok = cert.certifies(Verdict::NonPositive);
    std::string info = std::string(to_string(cert.verdict)) + " on H <= " + detail::short_number(*e_hi);
    if (!cert.reason.empty()) info += " (" + cert.reason + ")";
    rep.checks.push_back({"sign certificate", ok, info});
  }
  if (rep.expected == FamilyVerdict::OutsideTheorem) {
    rep.checks.push_back({"expected monotonicity", false, "no verdict to compare against"});
    return rep;
  }

  const std::vector<double> energies = detail::log_energies(*e_hi, 10);
  std::vector<std::optional<DerivativeEstimate>> ds(energies.size());
  std::vector<std::string> fail(energies.size());
  periodfn::detail::parallel_for(energies.size(), cfg.threads, [&](std::size_t i) {
    try {
      ds[i] = period_derivative(sys.H, energies[i]);
    } catch (const Error& e) {
      fail[i] = e.what();
    }
  });
  {
    int agree = 0, flat = 0, against = 0, failed = 0;
    for (std::size_t i = 0; i < ds.size(); ++i) {
      if (!ds[i]) {
        ++failed;
        continue;
      }
      if (rep.expected == FamilyVerdict::Constant) {
        const double T = period(sys.H, energies[i]).period;
        (std::abs(ds[i]->value) * energies[i] / T <= 1e-6 ? agree : against)++;
        continue;
      }
      const int s = derivative_sign(*ds[i]);
      const int want = rep.expected == FamilyVerdict::Increasing ? 1 : -1;
      if (s == 0) ++flat;
      else (s == want ? agree : against)++;
    }
    const bool ok = against == 0 && failed == 0 && agree > 0;
    rep.checks.push_back({"derivative signs", ok,
                          std::to_string(agree) + " agree, " + std::to_string(flat) + " flat, " +
                              std::to_string(against) + " disagree, " + std::to_string(failed) + " failed"});
  }

  {
    const std::vector<double> es = detail::log_energies(*e_hi, 5);
    std::vector<double> rel(es.size(), kInf);
    periodfn::detail::parallel_for(es.size(), cfg.threads, [&](std::size_t i) {
      try {
        const double a = period(sys.H, es[i], PeriodMethod::Theta).period;
        const double b = period(sys.H, es[i], PeriodMethod::Ode).period;
        rel[i] = std::abs(a - b) / a;
      } catch (const Error&) {
      }
    });
    const double worst = *std::max_element(rel.begin(), rel.end());
    rep.checks.push_back({"cross-method periods", worst <= 1e-6, "max relative gap " + detail::short_number(worst)});
  }
  return rep;
}

inline json to_json(const VerifyReport& r) {
  json checks = json::array();
  for (const auto& c : r.checks) checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  return {{"system", r.system},
          {"expected", std::string(to_string(r.expected))},
          {"interval", {0.0, r.e_check}},
          {"checks", checks},
          {"passed", r.passed()}};
}

inline int emit_verify(const RunConfig& cfg, const VerifyReport& rep, std::ostream& out) {
  if (cfg.format == "json") {
    detail::emit(cfg, out, detail::dump(to_json(rep)));
  } else {
    std::string s = "check,passed,detail\n";
    for (const auto& c : rep.checks) s += csv_escape(c.name) + "," + (c.passed ? "true" : "false") + "," + csv_escape(c.detail) + "\n";
    detail::emit(cfg, out, s);
  }
  return rep.passed() ? kOk : kNegative;
}

inline int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  const ResolvedSystem sys = resolve(detail::require_system(cfg));
  return emit_verify(cfg, verify_system(sys, cfg.emax, cfg), out);
}

inline int cmd_examples_list(const RunConfig& cfg, std::ostream& out) {
  const auto all = list_examples();
  if (cfg.format == "json") {
    json arr = json::array();
    for (const auto& e : all)
      arr.push_back({{"name", e.name},
                     {"expected", std::string(to_string(e.expected))},
                     {"e_hi", number_or_null(e.e_hi)},
                     {"note", e.note}});
    detail::emit(cfg, out, detail::dump(arr));
  } else {
    std::string s = "name,expected,e_hi,note\n";
    for (const auto& e : all)
      s += e.name + "," + std::string(to_string(e.expected)) + "," + format_double(e.e_hi) + "," + csv_escape(e.note) + "\n";
    detail::emit(cfg, out, s);
  }
  return kOk;
}

inline int cmd_examples_run(const RunConfig& cfg, const std::string& name, std::ostream& out) {
  SystemSpec spec;
  spec.kind = SystemSpec::Kind::Builtin;
  spec.name = name;
  return emit_verify(cfg, verify_system(resolve(spec), cfg.emax, cfg), out);
}

namespace detail {

inline bool is_input_error(ErrorKind k) {
  switch (k) {
    case ErrorKind::InvalidConfig:
    case ErrorKind::UnknownExample:
    case ErrorKind::NonPositiveLinearPart:
    case ErrorKind::InvalidGeometry:
    case ErrorKind::EnergyOutOfAnnulus:
    case ErrorKind::DomainViolation:
    case ErrorKind::NoConjugate:
    case ErrorKind::CaseMismatch:
      return true;
    default:
      return false;
  }
}

inline void add_common(CLI::App* sub, FlagValues& f) {
  sub->add_option("--config", f.config, "JSON config file; flags override its values");
  sub->add_option("--system", f.system, "builtin name, a,b,c or a1,a2,a3,b1,b2");
  sub->add_option("--emin", f.emin, "lowest energy of the grid");
  sub->add_option("--emax", f.emax, "highest energy of the grid or verified interval");
  sub->add_option("--n", f.n, "number of grid energies");
  sub->add_option("--e0", f.e0, "certificate energy");
  sub->add_option("--resolution", f.resolution, "certificate grid resolution");
  sub->add_option("--depth", f.depth, "certificate refinement depth");
  sub->add_option("--tol", f.tol, "relative quadrature tolerance");
  sub->add_option("--format", f.format, "csv or json");
  sub->add_option("--out", f.out, "output file (default stdout)");
  sub->add_option("--method", f.method, "theta, raw or ode");
  sub->add_option("--batch", f.batch, "file with one parameter set per line");
  sub->add_option("--threads", f.threads, "worker threads");
}

}  // namespace detail

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Period function of planar separable Hamiltonian centers"};
  app.require_subcommand(1);
  FlagValues flags;
  std::string example_name;
  auto* period_cmd = app.add_subcommand("period", "period T(E) on an energy grid");
  auto* deriv_cmd = app.add_subcommand("derivative", "dT/dE on an energy grid");
  auto* crit_cmd = app.add_subcommand("criterion", "sampled sign certificate of M on {H <= E0}");
  auto* class_cmd = app.add_subcommand("classify", "case analysis of the polynomial family");
  auto* verify_cmd = app.add_subcommand("verify", "end-to-end consistency checks");
  auto* ex_cmd = app.add_subcommand("examples", "built-in example systems");
  ex_cmd->require_subcommand(1);
  auto* ex_list = ex_cmd->add_subcommand("list", "list built-in systems");
  auto* ex_run = ex_cmd->add_subcommand("run", "verify one built-in system");
  ex_run->add_option("name", example_name, "example name")->required();
  for (auto* s : {period_cmd, deriv_cmd, crit_cmd, class_cmd, verify_cmd, ex_list, ex_run}) detail::add_common(s, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInvalid;
  }

  try {
    const RunConfig cfg = build_config(flags);
    if (period_cmd->parsed()) return cmd_curve(cfg, false, out);
    if (deriv_cmd->parsed()) return cmd_curve(cfg, true, out);
    if (crit_cmd->parsed()) return cmd_criterion(cfg, out);
    if (class_cmd->parsed()) return cmd_classify(cfg, out);
    if (verify_cmd->parsed()) return cmd_verify(cfg, out);
    if (ex_list->parsed()) return cmd_examples_list(cfg, out);
    if (ex_run->parsed()) return cmd_examples_run(cfg, example_name, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return detail::is_input_error(e.kind()) ? kInvalid : kPartial;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInvalid;
  }
  return kInvalid;
}

}  // namespace periodfn::cli
