#pragma once

#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "periodfn/criterion.hpp"
#include "periodfn/error.hpp"
#include "periodfn/gallery.hpp"
#include "periodfn/period.hpp"
#include "periodfn/polyfamily.hpp"

namespace periodfn::cli {

using json = nlohmann::json;

/// Shortest text that round-trips: 17 significant digits, empty for non-finite.
inline std::string format_double(double v) {
  if (!std::isfinite(v)) return std::isnan(v) ? "" : (v > 0 ? "inf" : "-inf");
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

template <class T>
json optional_number(const std::optional<T>& v) {
  return v ? number_or_null(*v) : json(nullptr);
}

// ---- system specifications ----

/// One of: a built-in example name, normalized family parameters (a, b, c),
/// the raw quintuple (a1, a2, a3, b1, b2), or explicit F and G.
struct SystemSpec {
  enum class Kind { Builtin, Family, Raw, Explicit };
  Kind kind = Kind::Builtin;
  std::string name;
  FamilyParams family;
  NormalizationInput raw;
  json explicit_fg;
};

inline std::vector<double> parse_number_list(std::string_view text) {
  std::vector<double> out;
  std::string item;
  std::istringstream in{std::string(text)};
  while (std::getline(in, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t\r");
    if (b == std::string::npos) throw Error(ErrorKind::InvalidConfig, "empty entry in parameter list");
    item = item.substr(b, e - b + 1);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw Error(ErrorKind::InvalidConfig, "not a number: " + item);
    }
    if (used != item.size() || !std::isfinite(v)) throw Error(ErrorKind::InvalidConfig, "not a number: " + item);
    out.push_back(v);
  }
  return out;
}

inline SystemSpec parse_system_spec(std::string_view text) {
  SystemSpec s;
  if (text.empty()) throw Error(ErrorKind::InvalidConfig, "empty system specification");
  const bool numeric = text.find(',') != std::string_view::npos ||
                       text.find_first_not_of("0123456789+-.eE ") == std::string_view::npos;
  if (!numeric) {
    s.kind = SystemSpec::Kind::Builtin;
    s.name = std::string(text);
    return s;
  }
  const auto v = parse_number_list(text);
  if (v.size() == 3) {
    s.kind = SystemSpec::Kind::Family;
    s.family = {v[0], v[1], v[2]};
  } else if (v.size() == 5) {
    s.kind = SystemSpec::Kind::Raw;
    s.raw = {v[0], v[1], v[2], v[3], v[4]};
  } else {
    throw Error(ErrorKind::InvalidConfig, "system needs a name, 3 family parameters or 5 raw coefficients");
  }
  return s;
}

inline double number_field(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number()) throw Error(ErrorKind::InvalidConfig, std::string("field '") + key + "' must be a number");
  return j.at(key).get<double>();
}

/// {"family": "polynomial", "coefficients": [...]} and the other closed families.
inline SmoothFunction smooth_function_from_json(const json& j) {
  if (!j.is_object() || !j.contains("family") || !j.at("family").is_string())
    throw Error(ErrorKind::InvalidConfig, "function spec needs a 'family' string");
  const std::string fam = j.at("family").get<std::string>();
  const double amp = number_field(j, "amplitude", 1.0);
  const double freq = number_field(j, "frequency", 1.0);
  if (fam == "polynomial") {
    if (!j.contains("coefficients") || !j.at("coefficients").is_array())
      throw Error(ErrorKind::InvalidConfig, "polynomial needs a 'coefficients' array");
    std::vector<double> c;
    for (const auto& v : j.at("coefficients")) {
      if (!v.is_number()) throw Error(ErrorKind::InvalidConfig, "polynomial coefficients must be numbers");
      c.push_back(v.get<double>());
    }
    return SmoothFunction::polynomial(std::move(c));
  }
  if (fam == "trig-cos") return SmoothFunction::trig_cos(amp, freq);
  if (fam == "cosh") return SmoothFunction::cosh(amp, freq);
  if (fam == "sqrt-relativistic") return SmoothFunction::sqrt_relativistic(amp, freq);
  if (fam == "log-potential" || fam == "power-law") {
    const double a = number_field(j, "a", 1.0), b = number_field(j, "b", 1.0);
    const double u0 = number_field(j, "u0", 1.0), k = number_field(j, "k", 1.0);
    if (fam == "log-potential") return SmoothFunction::log_potential(a, b, u0, k);
    return SmoothFunction::power_law(a, number_field(j, "m", 1.0), b, number_field(j, "n", 1.0), u0, k);
  }
  throw Error(ErrorKind::InvalidConfig, "unknown function family: " + fam);
}

inline SystemSpec system_spec_from_json(const json& j) {
  if (j.is_string()) return parse_system_spec(j.get<std::string>());
  if (!j.is_object()) throw Error(ErrorKind::InvalidConfig, "'system' must be a string or an object");
  int present = 0;
  SystemSpec s;
  auto numbers = [&](const char* key, std::size_t n) {
    const json& arr = j.at(key);
    if (!arr.is_array() || arr.size() != n)
      throw Error(ErrorKind::InvalidConfig, std::string("'") + key + "' needs " + std::to_string(n) + " numbers");
    std::vector<double> v;
    for (const auto& x : arr) {
      if (!x.is_number()) throw Error(ErrorKind::InvalidConfig, std::string("'") + key + "' entries must be numbers");
      v.push_back(x.get<double>());
    }
    return v;
  };
  if (j.contains("builtin")) {
    ++present;
    if (!j.at("builtin").is_string()) throw Error(ErrorKind::InvalidConfig, "'builtin' must be a string");
    s.kind = SystemSpec::Kind::Builtin;
    s.name = j.at("builtin").get<std::string>();
  }
  if (j.contains("family")) {
    ++present;
    const auto v = numbers("family", 3);
    s.kind = SystemSpec::Kind::Family;
    s.family = {v[0], v[1], v[2]};
  }
  if (j.contains("raw")) {
    ++present;
    const auto v = numbers("raw", 5);
    s.kind = SystemSpec::Kind::Raw;
    s.raw = {v[0], v[1], v[2], v[3], v[4]};
  }
  if (j.contains("F") || j.contains("G")) {
    ++present;
    if (!j.contains("F") || !j.contains("G")) throw Error(ErrorKind::InvalidConfig, "explicit systems need both F and G");
    s.kind = SystemSpec::Kind::Explicit;
    s.explicit_fg = j;
  }
  if (present != 1) throw Error(ErrorKind::InvalidConfig, "exactly one system specification is required");
  return s;
}

/// A system ready for computation.
struct ResolvedSystem {
  ResolvedSystem(std::string l, SeparableHamiltonian h, std::optional<FamilyParams> f = std::nullopt)
      : label(std::move(l)), H(std::move(h)), family(f) {}

  std::string label;
  SeparableHamiltonian H;
  std::optional<FamilyParams> family;  ///< normalized parameters, for raw input too
  double energy_scale = 1.0;           ///< raw energy = energy_scale * normalized energy
  std::optional<ExampleSystem> example;
};

inline std::string family_label(const FamilyParams& p) {
  return "family(" + format_double(p.a) + "," + format_double(p.b) + "," + format_double(p.c) + ")";
}

inline ResolvedSystem resolve(const SystemSpec& s) {
  switch (s.kind) {
    case SystemSpec::Kind::Builtin: {
      ExampleSystem ex = builtin(s.name);
      ResolvedSystem r{ex.name, ex.H};
      r.family = ex.family;
      r.example = std::move(ex);
      return r;
    }
    case SystemSpec::Kind::Family:
      return {family_label(s.family), family_hamiltonian(s.family), s.family};
    case SystemSpec::Kind::Raw: {
      const FamilyParams p = normalize(s.raw);
      ResolvedSystem r{"raw(" + format_double(s.raw.a1) + "," + format_double(s.raw.a2) + "," +
                           format_double(s.raw.a3) + "," + format_double(s.raw.b1) + "," + format_double(s.raw.b2) + ")",
                       raw_hamiltonian(s.raw), p};
      r.energy_scale = s.raw.a1;
      return r;
    }
    case SystemSpec::Kind::Explicit:
      return {"explicit", SeparableHamiltonian(smooth_function_from_json(s.explicit_fg.at("F")),
                                               smooth_function_from_json(s.explicit_fg.at("G")))};
  }
  throw Error(ErrorKind::InvalidConfig, "unresolvable system");
}

// ---- records ----

inline json to_json(const Witness& w) { return {{"x", w.x}, {"y", w.y}, {"M", w.M}, {"H", w.H}}; }

inline json witness_or_null(const std::optional<Witness>& w) { return w ? to_json(*w) : json(nullptr); }

inline json to_json(const SignCertificate& c) {
  return {{"verdict", std::string(to_string(c.verdict))},
          {"sampled", true},
          {"e0", c.e0},
          {"resolution", c.resolution},
          {"depth", c.depth},
          {"open_region", c.open_region},
          {"identically_zero", c.identically_zero},
          {"positive", c.positive},
          {"negative", c.negative},
          {"zero", c.zero},
          {"weak", c.weak},
          {"margin", number_or_null(c.margin)},
          {"max_positive", witness_or_null(c.max_positive)},
          {"min_negative", witness_or_null(c.min_negative)},
          {"lowest_positive", witness_or_null(c.lowest_positive)},
          {"lowest_negative", witness_or_null(c.lowest_negative)},
          {"box", {{"x_minus", c.x_minus}, {"x_plus", c.x_plus}, {"y_plus", c.y_plus}}},
          {"reason", c.reason}};
}

inline json to_json(const FamilyClassification& c) {
  json j = {{"a", c.params.a},
            {"b", c.params.b},
            {"c", c.params.c},
            {"case", c.case_label},
            {"verdict", std::string(to_string(c.verdict))},
            {"e0", number_or_null(c.e0)},
            {"c0", optional_number(c.c0)},
            {"c1", optional_number(c.c1)},
            {"x0", optional_number(c.geometry.x0)},
            {"r0", optional_number(c.geometry.r0)},
            {"x1", optional_number(c.x1)},
            {"x_m", optional_number(c.x_m)},
            {"y_m", optional_number(c.y_m)},
            {"note", c.note}};
  if (c.remark)
    j["remark"] = {{"verdict", std::string(to_string(c.remark->verdict))},
                   {"e_hi", c.remark->e_hi},
                   {"x_c", c.remark->x_c}};
  else
    j["remark"] = nullptr;
  return j;
}

inline const std::vector<std::string>& classification_csv_header() {
  static const std::vector<std::string> h = {"a", "b", "c", "case", "verdict", "e0", "c0", "c1", "remark", "remark_e_hi", "note"};
  return h;
}

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return out + "\"";
}

inline std::string classification_csv_row(const FamilyClassification& c) {
  auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
  std::string row = format_double(c.params.a) + "," + format_double(c.params.b) + "," + format_double(c.params.c) + "," +
                    c.case_label + "," + std::string(to_string(c.verdict)) + "," + format_double(c.e0) + "," +
                    opt(c.c0) + "," + opt(c.c1) + ",";
  if (c.remark) row += std::string(to_string(c.remark->verdict)) + "," + format_double(c.remark->e_hi);
  else row += ",";
  return row + "," + csv_escape(c.note);
}

/// One output row of a period or derivative run.
struct CurveRow {
  double E = 0.0;
  double T = std::nan("");
  double dTdE = std::nan("");
  std::string method;
  double err = std::nan("");
  std::string failure;
};

inline constexpr std::string_view kCurveCsvHeader = "E,T,dTdE,method,err";

inline std::string curve_csv(const std::vector<CurveRow>& rows) {
  std::string out(kCurveCsvHeader);
  out += '\n';
  for (const auto& r : rows)
    out += format_double(r.E) + "," + format_double(r.T) + "," + format_double(r.dTdE) + "," + r.method + "," +
           format_double(r.err) + "\n";
  return out;
}

inline json curve_json(const std::string& system, const std::vector<CurveRow>& rows) {
  json arr = json::array();
  for (const auto& r : rows) {
    json j = {{"E", r.E},
              {"T", number_or_null(r.T)},
              {"dTdE", number_or_null(r.dTdE)},
              {"method", r.method},
              {"err", number_or_null(r.err)}};
    if (!r.failure.empty()) j["failure"] = r.failure;
    arr.push_back(std::move(j));
  }
  return {{"system", system}, {"rows", std::move(arr)}};
}

/// Parses the CSV written by curve_csv back into rows.
inline std::vector<CurveRow> parse_curve_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  if (line != kCurveCsvHeader) throw Error(ErrorKind::InvalidConfig, "unexpected CSV header: " + line);
  auto num = [](const std::string& f) {
    if (f.empty()) return std::nan("");
    if (f == "inf") return kInf;
    if (f == "-inf") return -kInf;
    return std::stod(f);
  };
  std::vector<CurveRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::string item;
    std::istringstream ls(line);
    while (std::getline(ls, item, ',')) f.push_back(item);
    while (f.size() < 5) f.emplace_back();
    CurveRow r;
    r.E = num(f[0]);
    r.T = num(f[1]);
    r.dTdE = num(f[2]);
    r.method = f[3];
    r.err = num(f[4]);
    rows.push_back(r);
  }
  return rows;
}

}  // namespace periodfn::cli
