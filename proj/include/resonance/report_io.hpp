#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include "resonance/experiments.hpp"

namespace resonance {

/// Config document as parsed, before X is resolved.
struct ConfigDocument {
  ExperimentConfig config;
  std::optional<double> delta, tau, kappa, eta;
  std::optional<double> margin;
  bool has_X = false;
};

/// Parses a JSON config. Errors are Error(Validation) prefixed "line N:".
/// X comes from, in order: "X", the theorem's parameter key, default_X(margin).
ExperimentConfig parse_config(std::string_view text);
ConfigDocument parse_config_document(std::string_view text);
ExperimentConfig load_config(const std::string& path);

/// Resolves X for a parsed document and validates the result.
ExperimentConfig resolve(const ConfigDocument& doc);

std::string report_json(const TheoremReport& report);
std::string sweep_json(const SweepResult& result);
std::string oracle_json(const OracleTable& table);

inline constexpr std::string_view kCsvHeader =
    "q,ell,sigma,X,Y,S1,S2_re,S2_im,ratio,bound,margin,argmax_index,max_value,certificate,seconds";

/// RFC 4180 field quoting: wraps in quotes when the field holds ',', '"', CR or LF.
std::string csv_field(std::string_view field);
std::string csv_row(const TheoremReport& report);
void write_csv(std::ostream& out, const std::vector<TheoremReport>& rows);

void write_file(const std::string& path, std::string_view contents);

}  // namespace resonance
