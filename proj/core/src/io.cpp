#include "bifix/io.hpp"

#include <json.hpp>

#include <cassert>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace bifix {
namespace io {

std::string format_double17(double value) {
  if (!std::isfinite(value)) throw std::logic_error("report writer: non-finite number");
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

namespace {

/// Streaming JSON writer with deterministic output: the caller must emit
/// object keys in ascending order (checked), doubles are rendered with
/// format_double17, indentation is two spaces.
class JsonWriter {
 public:
  void begin_object() {
    prepare_value();
    out_ += '{';
    stack_.push_back({true, 0, {}, false});
  }
  void end_object() {
    const Frame frame = stack_.back();
    stack_.pop_back();
    if (frame.count > 0) {
      out_ += '\n';
      indent();
    }
    out_ += '}';
  }
  void begin_array() {
    prepare_value();
    out_ += '[';
    stack_.push_back({false, 0, {}, false});
  }
  void end_array() {
    const Frame frame = stack_.back();
    stack_.pop_back();
    if (frame.count > 0) {
      out_ += '\n';
      indent();
    }
    out_ += ']';
  }
  void key(std::string_view k) {
    Frame& top = stack_.back();
    assert(top.object && !top.key_pending);
    assert(top.count == 0 || top.last_key < k);  // sorted-key contract
    if (top.count > 0) out_ += ',';
    out_ += '\n';
    ++top.count;
    indent();
    append_string(k);
    out_ += ": ";
    top.last_key.assign(k);
    top.key_pending = true;
  }
  void value(double v) {
    prepare_value();
    out_ += format_double17(v);
  }
  void value(long long v) {
    prepare_value();
    out_ += std::to_string(v);
  }
  void value(int v) { value(static_cast<long long>(v)); }
  void value(unsigned long long v) {
    prepare_value();
    out_ += std::to_string(v);
  }
  void value(bool v) {
    prepare_value();
    out_ += v ? "true" : "false";
  }
  void value(std::string_view v) {
    prepare_value();
    append_string(v);
  }

  std::string take() {
    assert(stack_.empty());
    out_ += '\n';
    return std::move(out_);
  }

 private:
  struct Frame {
    bool object;
    int count;
    std::string last_key;
    bool key_pending;
  };

  void indent() { out_.append(stack_.size() * 2, ' '); }

  void prepare_value() {
    if (stack_.empty()) return;
    Frame& top = stack_.back();
    if (top.object) {
      assert(top.key_pending);
      top.key_pending = false;
    } else {
      if (top.count > 0) out_ += ',';
      out_ += '\n';
      ++top.count;
      indent();
    }
  }

  void append_string(std::string_view s) {
    out_ += '"';
    for (char c : s) {
      switch (c) {
        case '"': out_ += "\\\""; break;
        case '\\': out_ += "\\\\"; break;
        case '\n': out_ += "\\n"; break;
        case '\t': out_ += "\\t"; break;
        case '\r': out_ += "\\r"; break;
        default:
          if (static_cast<unsigned char>(c) < 0x20) {
            char buffer[8];
            std::snprintf(buffer, sizeof(buffer), "\\u%04x", c);
            out_ += buffer;
          } else {
            out_ += c;
          }
      }
    }
    out_ += '"';
  }

  std::string out_;
  std::vector<Frame> stack_;
};

void emit(JsonWriter& w, double v) { w.value(v); }
void emit(JsonWriter& w, const Rational& v) { w.value(std::string_view(format_rational(v))); }

std::string cell(double v) { return format_double17(v); }
std::string cell(const Rational& v) { return format_rational(v); }

template <typename Scalar>
void emit_series(JsonWriter& w, const std::vector<Scalar>& values_with_slot0) {
  w.begin_array();
  for (std::size_t k = 1; k < values_with_slot0.size(); ++k) emit(w, values_with_slot0[k]);
  w.end_array();
}

void emit_provenance(JsonWriter& w, const Provenance& p) {
  w.begin_object();
  w.key("formula_path");
  w.value(std::string_view(p.formula_path));
  if (p.k_max) {
    w.key("k_max");
    w.value(*p.k_max);
  }
  w.key("numeric_mode");
  w.value(std::string_view(to_string(p.mode)));
  if (p.tail_tol) {
    w.key("tail_tol");
    w.value(*p.tail_tol);
  }
  w.end_object();
}

bool single_char_labels(const std::vector<std::string>& labels) {
  for (const auto& label : labels) {
    if (label.size() != 1) return false;
  }
  return true;
}

void emit_sequence(JsonWriter& w, const std::vector<int>& sequence,
                   const std::vector<std::string>& labels) {
  if (single_char_labels(labels)) {
    std::string s;
    for (int symbol : sequence) s += labels[symbol];
    w.value(std::string_view(s));
  } else {
    w.begin_array();
    for (int symbol : sequence) w.value(std::string_view(labels[symbol]));
    w.end_array();
  }
}

template <typename Scalar>
std::string dist_json_impl(const Problem& problem, const SearchDistribution<Scalar>& dist,
                           const Provenance& provenance) {
  JsonWriter w;
  w.begin_object();
  w.key("cumulative");
  emit_series(w, dist.cumulative);
  w.key("k_max");
  w.value(dist.k_max);
  w.key("per_seq");
  w.begin_array();
  for (int j = 0; j < problem.num_sequences(); ++j) emit_series(w, dist.per_seq[j]);
  w.end_array();
  w.key("provenance");
  emit_provenance(w, provenance);
  w.key("total");
  emit_series(w, dist.total);
  w.key("truncation_warning");
  w.value(dist.truncation_warning);
  w.end_object();
  return w.take();
}

template <typename Scalar>
std::string dist_csv_impl(const Problem& problem, const SearchDistribution<Scalar>& dist) {
  std::string out = "k,pr_total";
  for (int j = 1; j <= problem.num_sequences(); ++j) out += ",pr_seq_" + std::to_string(j);
  out += ",cdf\n";
  for (int k = 1; k <= dist.k_max; ++k) {
    out += std::to_string(k);
    out += ',';
    out += cell(dist.total[k]);
    for (int j = 0; j < problem.num_sequences(); ++j) {
      out += ',';
      out += cell(dist.per_seq[j][k]);
    }
    out += ',';
    out += cell(dist.cumulative[k]);
    out += '\n';
  }
  return out;
}

template <typename Scalar>
void emit_matrix(JsonWriter& w, const Matrix<Scalar>& m) {
  w.begin_array();
  for (int i = 0; i < m.rows(); ++i) {
    w.begin_array();
    for (int j = 0; j < m.cols(); ++j) emit(w, m(i, j));
    w.end_array();
  }
  w.end_array();
}

template <typename Scalar>
std::string moments_impl(const MomentReport<Scalar>& report, const Provenance& provenance) {
  JsonWriter w;
  w.begin_object();
  w.key("C");
  emit_matrix(w, report.C);
  w.key("T");
  emit(w, report.T);
  w.key("W");
  emit_matrix(w, report.W);
  w.key("partial_means");
  w.begin_array();
  for (const auto& t : report.partial_means) emit(w, t);
  w.end_array();
  w.key("provenance");
  emit_provenance(w, provenance);
  w.key("second_moment");
  emit(w, report.second_moment);
  w.key("split");
  w.begin_array();
  for (const auto& s : report.split) emit(w, s);
  w.end_array();
  w.key("variance");
  emit(w, report.variance);
  w.end_object();
  return w.take();
}

}  // namespace

Problem parse_problem_json(const std::string& text, NumericMode mode) {
  using nlohmann::json;
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(ValidationCode::SchemaError,
                          std::string("problem file is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) {
    throw ValidationError(ValidationCode::SchemaError, "problem file must be a JSON object");
  }
  for (const char* field : {"symbols", "probs", "sequences"}) {
    if (!root.contains(field) || !root[field].is_array()) {
      throw ValidationError(ValidationCode::SchemaError,
                            std::string("field '") + field + "' must be an array");
    }
  }

  const auto label_of = [](const json& token, const char* field) -> std::string {
    if (token.is_string()) return token.get<std::string>();
    if (token.is_number_integer()) return token.dump();
    throw ValidationError(ValidationCode::SchemaError,
                          std::string("field '") + field + "' entries must be strings");
  };

  std::vector<std::string> symbols;
  for (const auto& token : root["symbols"]) symbols.push_back(label_of(token, "symbols"));

  std::vector<Rational> exact;
  std::vector<double> probs;
  for (const auto& token : root["probs"]) {
    if (token.is_string()) {
      Rational r;
      try {
        r = rational_from_string(token.get<std::string>());
      } catch (const std::invalid_argument& e) {
        throw ValidationError(ValidationCode::SchemaError,
                              std::string("field 'probs': ") + e.what());
      }
      exact.push_back(r);
      probs.push_back(to_double(r));
    } else if (token.is_number()) {
      // The shortest decimal that round-trips is exactly the token text for
      // inputs written in plain decimal, so exact mode recovers e.g. 3/10
      // from 0.3.
      exact.push_back(rational_from_string(token.dump()));
      probs.push_back(token.get<double>());
    } else {
      throw ValidationError(ValidationCode::SchemaError,
                            "field 'probs' entries must be numbers or rational strings");
    }
  }

  const bool single = [&] {
    for (const auto& s : symbols) {
      if (s.size() != 1) return false;
    }
    return true;
  }();

  std::vector<std::vector<std::string>> sequences;
  for (const auto& token : root["sequences"]) {
    std::vector<std::string> seq;
    if (token.is_string()) {
      if (!single) {
        throw ValidationError(ValidationCode::SchemaError,
                              "field 'sequences': string form requires single-character "
                              "symbol labels; use an array of labels");
      }
      for (char c : token.get<std::string>()) seq.emplace_back(1, c);
    } else if (token.is_array()) {
      for (const auto& entry : token) seq.push_back(label_of(entry, "sequences"));
    } else {
      throw ValidationError(ValidationCode::SchemaError,
                            "field 'sequences' entries must be strings or arrays of labels");
    }
    sequences.push_back(std::move(seq));
  }

  if (mode == NumericMode::Exact) {
    return Problem::validate_exact(std::move(symbols), std::move(exact), sequences);
  }
  return Problem::validate(std::move(symbols), std::move(probs), sequences);
}

Problem load_problem(const std::string& path, NumericMode mode) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read problem file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoError("error while reading problem file: " + path);
  return parse_problem_json(buffer.str(), mode);
}

std::string spectrum_report(const Problem& problem, bool include_verdict, NumericMode mode) {
  const auto spectrum = build_spectrum(problem);
  JsonWriter w;
  w.begin_object();
  w.key("L");
  w.value(problem.alphabet_size());
  w.key("M");
  w.value(problem.num_sequences());
  w.key("N");
  w.value(problem.sequence_length());
  if (include_verdict) {
    w.key("free");
    w.value(is_cross_bifix_free(spectrum));
  }
  w.key("h");
  w.begin_array();
  for (int n = 0; n <= spectrum.length(); ++n) {
    w.begin_array();
    for (int i = 0; i < spectrum.set_size(); ++i) {
      w.begin_array();
      for (int j = 0; j < spectrum.set_size(); ++j) w.value(spectrum.indicator(n, i, j));
      w.end_array();
    }
    w.end_array();
  }
  w.end_array();
  w.key("r");
  w.begin_array();
  if (mode == NumericMode::Exact) {
    const auto tails = build_tail_vectors<Rational>(problem);
    for (const auto& row : tails.r) {
      w.begin_array();
      for (const auto& v : row) emit(w, v);
      w.end_array();
    }
  } else {
    const auto tails = build_tail_vectors<double>(problem);
    for (const auto& row : tails.r) {
      w.begin_array();
      for (double v : row) w.value(v);
      w.end_array();
    }
  }
  w.end_array();
  w.key("sequences");
  w.begin_array();
  for (int j = 0; j < problem.num_sequences(); ++j) {
    emit_sequence(w, problem.sequence(j), problem.dist().labels);
  }
  w.end_array();
  w.end_object();
  return w.take();
}

std::string dist_report_json(const Problem& problem, const SearchDistribution<double>& dist,
                             const Provenance& provenance) {
  return dist_json_impl(problem, dist, provenance);
}
std::string dist_report_json(const Problem& problem, const SearchDistribution<Rational>& dist,
                             const Provenance& provenance) {
  return dist_json_impl(problem, dist, provenance);
}
std::string dist_report_csv(const Problem& problem, const SearchDistribution<double>& dist) {
  return dist_csv_impl(problem, dist);
}
std::string dist_report_csv(const Problem& problem, const SearchDistribution<Rational>& dist) {
  return dist_csv_impl(problem, dist);
}

std::string moments_report(const MomentReport<double>& report, const Provenance& provenance) {
  return moments_impl(report, provenance);
}
std::string moments_report(const MomentReport<Rational>& report, const Provenance& provenance) {
  return moments_impl(report, provenance);
}

namespace {

template <typename Scalar>
std::string oracle_chain_impl(const Problem& problem, const oracle::OracleReport& report,
                              const std::optional<SearchDistribution<Scalar>>& dist,
                              const Provenance& provenance) {
  JsonWriter w;
  w.begin_object();
  w.key("absorption");
  w.begin_array();
  for (double s : report.absorption) w.value(s);
  w.end_array();
  if (dist) {
    w.key("distribution");
    w.begin_object();
    w.key("cumulative");
    emit_series(w, dist->cumulative);
    w.key("k_max");
    w.value(dist->k_max);
    w.key("per_seq");
    w.begin_array();
    for (int j = 0; j < problem.num_sequences(); ++j) emit_series(w, dist->per_seq[j]);
    w.end_array();
    w.key("total");
    emit_series(w, dist->total);
    w.key("truncation_warning");
    w.value(dist->truncation_warning);
    w.end_object();
  }
  w.key("mean_tests");
  w.value(report.mean_tests);
  w.key("partial_means");
  w.begin_array();
  for (double t : report.partial_means) w.value(t);
  w.end_array();
  w.key("provenance");
  emit_provenance(w, provenance);
  w.key("second_moment");
  w.value(report.second_moment);
  w.key("variance");
  w.value(report.variance);
  w.end_object();
  return w.take();
}

}  // namespace

std::string oracle_chain_report(const Problem& problem, const oracle::OracleReport& report,
                                const std::optional<SearchDistribution<double>>& dist,
                                const Provenance& provenance) {
  return oracle_chain_impl(problem, report, dist, provenance);
}
std::string oracle_chain_report(const Problem& problem, const oracle::OracleReport& report,
                                const std::optional<SearchDistribution<Rational>>& dist,
                                const Provenance& provenance) {
  return oracle_chain_impl(problem, report, dist, provenance);
}

std::string enumeration_report(const Problem& problem, const oracle::EnumerationResult& result,
                               const Provenance& provenance) {
  JsonWriter w;
  w.begin_object();
  w.key("k_max");
  w.value(result.k_max);
  w.key("per_seq");
  w.begin_array();
  for (int j = 0; j < problem.num_sequences(); ++j) emit_series(w, result.per_seq[j]);
  w.end_array();
  w.key("provenance");
  emit_provenance(w, provenance);
  w.key("total");
  emit_series(w, result.total);
  w.end_object();
  return w.take();
}

std::string simulation_report(const oracle::SimulationReport& report) {
  JsonWriter w;
  w.begin_object();
  w.key("absorption");
  w.begin_array();
  for (double s : report.absorption) w.value(s);
  w.end_array();
  w.key("absorption_stderr");
  w.begin_array();
  for (double s : report.absorption_stderr) w.value(s);
  w.end_array();
  w.key("mean_stderr");
  w.value(report.mean_stderr);
  w.key("mean_tests");
  w.value(report.mean_tests);
  w.key("partial_means");
  w.begin_array();
  for (double t : report.partial_means) w.value(t);
  w.end_array();
  if (!report.pmf.empty()) {
    w.key("pmf");
    emit_series(w, report.pmf);
  }
  w.key("second_moment");
  w.value(report.second_moment);
  w.key("seed");
  w.value(static_cast<unsigned long long>(report.seed));
  w.key("trials");
  w.value(static_cast<unsigned long long>(report.trials));
  w.key("variance");
  w.value(report.variance);
  w.end_object();
  return w.take();
}

std::string design_report(const std::vector<design::RankedSet>& sets,
                          const std::vector<std::string>& labels) {
  JsonWriter w;
  w.begin_array();
  for (const auto& set : sets) {
    w.begin_object();
    w.key("cross_bifix_free");
    w.value(set.cross_bifix_free);
    w.key("mean_tests");
    w.value(set.mean_tests);
    w.key("sequences");
    w.begin_array();
    for (const auto& seq : set.sequences) emit_sequence(w, seq, labels);
    w.end_array();
    w.key("variance");
    w.value(set.variance);
    w.end_object();
  }
  w.end_array();
  return w.take();
}

}  // namespace io
}  // namespace bifix
