#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bifix/design.hpp"
#include "bifix/exact.hpp"
#include "bifix/model.hpp"
#include "bifix/oracle.hpp"

// Problem-file parsing and machine-readable report emission. All writers
// are byte-stable: doubles are printed with 17 significant digits, object
// keys appear in sorted order, and nothing timestamp-like is emitted.

namespace bifix {
namespace io {

enum class NumericMode { Float, Exact };

inline const char* to_string(NumericMode m) {
  return m == NumericMode::Float ? "float" : "exact";
}

/// Parses the problem JSON schema
///   {"symbols": ["0","1"], "probs": [0.5, 0.5], "sequences": ["010","100"]}
/// Sequences may be strings (single-character labels) or arrays of labels.
/// Probabilities may be numbers or strings ("1/2", "0.3"); in exact mode a
/// numeric token is interpreted through its shortest decimal representation.
Problem parse_problem_json(const std::string& text, NumericMode mode);

/// Reads and parses a problem file. Throws IoError when the file cannot be
/// read, ValidationError on malformed content.
Problem load_problem(const std::string& path, NumericMode mode);

/// Fixed 17-significant-digit rendering used by every report.
std::string format_double17(double value);

struct Provenance {
  std::string formula_path;
  NumericMode mode = NumericMode::Float;
  std::optional<int> k_max;
  std::optional<double> tail_tol;
};

std::string spectrum_report(const Problem& problem, bool include_verdict, NumericMode mode);

std::string dist_report_json(const Problem& problem, const SearchDistribution<double>& dist,
                             const Provenance& provenance);
std::string dist_report_json(const Problem& problem, const SearchDistribution<Rational>& dist,
                             const Provenance& provenance);
std::string dist_report_csv(const Problem& problem, const SearchDistribution<double>& dist);
std::string dist_report_csv(const Problem& problem, const SearchDistribution<Rational>& dist);

std::string moments_report(const MomentReport<double>& report, const Provenance& provenance);
std::string moments_report(const MomentReport<Rational>& report, const Provenance& provenance);

std::string oracle_chain_report(const Problem& problem, const oracle::OracleReport& report,
                                const std::optional<SearchDistribution<double>>& dist,
                                const Provenance& provenance);
std::string oracle_chain_report(const Problem& problem, const oracle::OracleReport& report,
                                const std::optional<SearchDistribution<Rational>>& dist,
                                const Provenance& provenance);
std::string enumeration_report(const Problem& problem, const oracle::EnumerationResult& result,
                               const Provenance& provenance);
std::string simulation_report(const oracle::SimulationReport& report);

std::string design_report(const std::vector<design::RankedSet>& sets,
                          const std::vector<std::string>& labels);

}  // namespace io
}  // namespace bifix
