#include "resonance/report_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "resonance/error.hpp"

namespace resonance {

using nlohmann::json;

namespace {

const char* const kKnownKeys[] = {"theorem", "q",     "ell",    "sigma",    "X",
                                  "Y",       "delta", "tau",    "kappa",    "eta",
                                  "margin",  "excluded", "output", "oracle"};

std::size_t line_of(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + byte, '\n'));
}

std::size_t line_of_key(std::string_view text, std::string_view key) {
  const std::string quoted = "\"" + std::string(key) + "\"";
  const auto pos = text.find(quoted);
  return pos == std::string_view::npos ? 0 : line_of(text, pos);
}

[[noreturn]] void fail_at(std::size_t line, const std::string& message) {
  throw Error(ErrorKind::Validation,
              line ? "line " + std::to_string(line) + ": " + message : message);
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json complex_json(std::complex<double> z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

json config_json(const ExperimentConfig& c) {
  json j{{"theorem", static_cast<int>(c.theorem)},
         {"q", c.q},
         {"ell", c.ell},
         {"X", c.X},
         {"Y", c.Y},
         {"excluded", c.excluded},
         {"oracle", c.oracle}};
  j["sigma"] = c.sigma ? json(*c.sigma) : json(nullptr);
  if (!c.output.empty()) j["output"] = c.output;
  return j;
}

json report_object(const TheoremReport& r) {
  json j{{"config", config_json(r.config)},
         {"S1", r.S1},
         {"S2", complex_json(r.S2)},
         {"ratio", r.ratio},
         {"bound", r.bound},
         {"margin", r.margin},
         {"functional", std::string(to_string(theorem_functional(r.config.theorem)))},
         {"argmax_index", r.argmax_index},
         {"max_value", r.max_value},
         {"near_max", r.near_max},
         {"certificate_functional",
          std::string(to_string(certificate_functional(r.config.theorem)))},
         {"certificate_argmax", r.certificate_argmax},
         {"certificate_max", r.certificate_max},
         {"excluded_contribution", r.excluded_contribution},
         {"certificate", r.certificate},
         {"eligible_mean", r.eligible_mean},
         {"seconds", r.seconds},
         {"inequality_ok", r.inequality_ok},
         {"certificate_ok", r.certificate_ok},
         {"passed", r.passed()}};
  j["abs_logderiv_max"] = r.abs_logderiv_max ? json(*r.abs_logderiv_max) : json(nullptr);
  j["oracle_gap"] = r.oracle_gap ? json(*r.oracle_gap) : json(nullptr);
  if (!r.failure.empty()) j["failure"] = r.failure;
  return j;
}

template <typename T>
T get_as(const json& doc, std::string_view text, const char* key, const char* kind) {
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception&) {
    fail_at(line_of_key(text, key), std::string("\"") + key + "\" must be " + kind);
  }
}

std::optional<double> optional_real(const json& doc, std::string_view text, const char* key) {
  if (!doc.contains(key) || doc.at(key).is_null()) return std::nullopt;
  if (!doc.at(key).is_number()) fail_at(line_of_key(text, key), std::string("\"") + key + "\" must be a number");
  return doc.at(key).get<double>();
}

std::uint64_t unsigned_key(const json& doc, std::string_view text, const char* key) {
  const json& v = doc.at(key);
  if (!v.is_number_integer() || (v.is_number_integer() && v.get<long long>() < 0)) {
    fail_at(line_of_key(text, key), std::string("\"") + key + "\" must be a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

}  // namespace

ConfigDocument parse_config_document(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    fail_at(line_of(text, e.byte > 0 ? e.byte - 1 : 0), std::string("parse error: ") + e.what());
  }
  if (!doc.is_object()) fail_at(1, "config must be a JSON object");
  for (const auto& item : doc.items()) {
    if (std::find(std::begin(kKnownKeys), std::end(kKnownKeys), item.key()) == std::end(kKnownKeys)) {
      fail_at(line_of_key(text, item.key()), "unknown key \"" + item.key() + "\"");
    }
  }
  for (const char* key : {"theorem", "q"}) {
    if (!doc.contains(key)) fail_at(0, std::string("missing required key \"") + key + "\"");
  }

  ConfigDocument out;
  ExperimentConfig& c = out.config;
  const long theorem = get_as<long>(doc, text, "theorem", "an integer in 1..4");
  if (theorem < 1 || theorem > 4 || !doc.at("theorem").is_number_integer()) {
    fail_at(line_of_key(text, "theorem"), "\"theorem\" must be 1, 2, 3 or 4");
  }
  c.theorem = static_cast<Theorem>(theorem);
  c.q = unsigned_key(doc, text, "q");
  if (doc.contains("ell")) {
    if (!doc.at("ell").is_number_integer()) fail_at(line_of_key(text, "ell"), "\"ell\" must be an integer");
    c.ell = doc.at("ell").get<long>();
  }
  c.sigma = optional_real(doc, text, "sigma");
  if (auto X = optional_real(doc, text, "X")) {
    c.X = *X;
    out.has_X = true;
  }
  if (doc.contains("Y")) c.Y = unsigned_key(doc, text, "Y");
  out.delta = optional_real(doc, text, "delta");
  out.tau = optional_real(doc, text, "tau");
  out.kappa = optional_real(doc, text, "kappa");
  out.eta = optional_real(doc, text, "eta");
  out.margin = optional_real(doc, text, "margin");
  if (doc.contains("excluded")) {
    c.excluded = get_as<std::vector<std::uint64_t>>(doc, text, "excluded",
                                                   "an array of character indices");
  }
  if (doc.contains("output")) c.output = get_as<std::string>(doc, text, "output", "a string");
  if (doc.contains("oracle")) c.oracle = get_as<bool>(doc, text, "oracle", "a boolean");

  const std::pair<const char*, Theorem> owners[] = {{"delta", Theorem::One},
                                                    {"kappa", Theorem::Two},
                                                    {"tau", Theorem::Three},
                                                    {"eta", Theorem::Four}};
  for (const auto& [key, owner] : owners) {
    if (doc.contains(key) && owner != c.theorem) {
      fail_at(line_of_key(text, key), std::string("\"") + key + "\" does not apply to theorem " +
                                          std::to_string(theorem));
    }
  }
  return out;
}

ExperimentConfig resolve(const ConfigDocument& doc) {
  ExperimentConfig c = doc.config;
  if (!doc.has_X) {
    const std::optional<double> parameter =
        doc.delta ? doc.delta : doc.kappa ? doc.kappa : doc.tau ? doc.tau : doc.eta;
    if (parameter) {
      c.X = X_from_parameter(c.theorem, c.q, *parameter);
    } else {
      c.X = default_X(c.theorem, c.q, doc.margin.value_or(0.01), c.sigma).X;
    }
  }
  validate(c);
  return c;
}

ExperimentConfig parse_config(std::string_view text) {
  return resolve(parse_config_document(text));
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Validation, "cannot open config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_config(buf.str());
  } catch (const Error& e) {
    throw Error(e.kind(), path + ": " + e.what());
  }
}

std::string report_json(const TheoremReport& report) { return report_object(report).dump(2); }

std::string sweep_json(const SweepResult& result) {
  json rows = json::array();
  for (const auto& r : result.rows) rows.push_back(report_object(r));
  json buckets = json::array();
  for (const auto& b : result.buckets) {
    buckets.push_back({{"lower", b.lower},
                       {"upper", b.upper},
                       {"count", b.count},
                       {"mean_normalized", b.mean_normalized},
                       {"max_normalized", b.max_normalized}});
  }
  json j{{"theorem", static_cast<int>(result.theorem)},
         {"ell", result.ell},
         {"rows", rows},
         {"normalized", result.normalized},
         {"ratio_over_bound", result.ratio_over_bound},
         {"buckets", buckets},
         {"all_passed", result.all_passed()}};
  return j.dump(2);
}

std::string oracle_json(const OracleTable& table) {
  json rows = json::array();
  for (const auto& r : table.rows) {
    rows.push_back({{"index", r.index}, {"exact", complex_json(r.exact)}, {"rel_errors", r.rel_errors}});
  }
  json max_error = json::array();
  for (double e : table.max_error) max_error.push_back(number_or_null(e));
  json j{{"q", table.q},         {"sigma", table.sigma},    {"Y", table.Ys},
         {"rows", rows},         {"max_error", max_error}, {"near_zero", table.near_zero}};
  return j.dump(2);
}

std::string csv_field(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

std::string csv_row(const TheoremReport& r) {
  const ExperimentConfig& c = r.config;
  const std::string fields[] = {std::to_string(c.q),
                                std::to_string(c.ell),
                                c.sigma ? fmt(*c.sigma) : fmt(effective_sigma(c)),
                                fmt(c.X),
                                std::to_string(c.Y),
                                fmt(r.S1),
                                fmt(r.S2.real()),
                                fmt(r.S2.imag()),
                                fmt(r.ratio),
                                fmt(r.bound),
                                fmt(r.margin),
                                std::to_string(r.argmax_index),
                                fmt(r.max_value),
                                fmt(r.certificate),
                                fmt(r.seconds)};
  std::string line;
  for (const auto& f : fields) {
    if (!line.empty()) line += ',';
    line += csv_field(f);
  }
  return line;
}

void write_csv(std::ostream& out, const std::vector<TheoremReport>& rows) {
  out << kCsvHeader << "\r\n";
  for (const auto& r : rows) out << csv_row(r) << "\r\n";
}

void write_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Precondition, "cannot write " + path);
  out << contents;
  if (!out) throw Error(ErrorKind::Precondition, "write failed for " + path);
}

}  // namespace resonance
