#pragma once

// JSON file formats and CSV/plot writers used by the evidfuse CLI.

#include <cctype>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "evidfuse/error.hpp"
#include "evidfuse/frame.hpp"
#include "evidfuse/fusion_rules.hpp"
#include "evidfuse/mass_function.hpp"
#include "evidfuse/monte_carlo.hpp"
#include "evidfuse/type_tracker.hpp"

namespace evidfuse::io {

using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;

namespace detail {

inline Error field_error(const std::string& path, const std::string& what) {
  return Error(ErrorKind::Parse, path + ": " + what);
}

inline const Json& require(const Json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) throw field_error(path.empty() ? "<root>" : path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw field_error(path.empty() ? key : path + "." + key, "missing");
  return *it;
}

inline std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

inline double require_number(const Json& v, const std::string& path) {
  if (!v.is_number()) throw field_error(path, "expected a number");
  return v.get<double>();
}

inline std::uint64_t require_count(const Json& v, const std::string& path) {
  if (!v.is_number_unsigned()) throw field_error(path, "expected a non-negative integer");
  return v.get<std::uint64_t>();
}

inline std::string require_string(const Json& v, const std::string& path) {
  if (!v.is_string()) throw field_error(path, "expected a string");
  return v.get<std::string>();
}

/// Re-throws library errors raised while interpreting `path`, keeping their kind.
template <typename F>
auto at_path(const std::string& path, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    throw e.with_context(path);
  }
}

}  // namespace detail

inline Json parse_json(std::istream& in, const std::string& source) {
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorKind::Parse, source + ": " + e.what());
  }
}

inline Frame parse_frame(const Json& v, const std::string& path) {
  if (!v.is_array()) throw detail::field_error(path, "expected an array of labels");
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < v.size(); ++i)
    labels.push_back(detail::require_string(v[i], path + "[" + std::to_string(i) + "]"));
  return detail::at_path(path, [&] { return Frame(std::move(labels)); });
}

/// {"frame": [...], "masses": {"A|B": 0.3, ...}}; subset keys list labels joined by '|'.
inline MassFunction parse_mass_function(const Json& doc) {
  const Frame frame = parse_frame(detail::require(doc, "frame", ""), "frame");
  const Json& masses = detail::require(doc, "masses", "");
  if (!masses.is_object()) throw detail::field_error("masses", "expected an object");
  std::vector<std::pair<FocalSet, double>> entries;
  for (const auto& [key, value] : masses.items()) {
    const std::string path = "masses." + key;
    const FocalSet set = detail::at_path(path, [&] { return frame.parse_subset(key); });
    entries.emplace_back(set, detail::require_number(value, path));
  }
  return detail::at_path("masses", [&] { return make_bba(frame, entries); });
}

inline OrderedJson to_json(const MassFunction& m) {
  OrderedJson masses = OrderedJson::object();
  for (const auto& [set, mass] : m.focal_elements()) masses[m.frame().subset_name(set)] = mass;
  return OrderedJson{{"frame", m.frame().labels()}, {"masses", masses}};
}

inline std::vector<std::vector<double>> parse_matrix(const Json& v, const std::string& path) {
  if (!v.is_array()) throw detail::field_error(path, "expected an array of rows");
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::string row_path = path + "[" + std::to_string(i) + "]";
    if (!v[i].is_array()) throw detail::field_error(row_path, "expected an array of numbers");
    std::vector<double> row;
    for (std::size_t j = 0; j < v[i].size(); ++j)
      row.push_back(detail::require_number(v[i][j], row_path + "[" + std::to_string(j) + "]"));
    rows.push_back(std::move(row));
  }
  return rows;
}

/// {"frame": [...], "confusion": [[...], ...]}. Extra keys are ignored, so a
/// simulation config doubles as a confusion file.
inline ConfusionMatrix parse_confusion(const Json& doc) {
  const Frame frame = parse_frame(detail::require(doc, "frame", ""), "frame");
  auto rows = parse_matrix(detail::require(doc, "confusion", ""), "confusion");
  return detail::at_path("confusion", [&] { return ConfusionMatrix(frame, std::move(rows)); });
}

inline DecisionCriterion parse_criterion(const std::string& name) {
  const auto s = evidfuse::detail::lower(name);
  if (s == "belief") return DecisionCriterion::MaxBelief;
  if (s == "pignistic") return DecisionCriterion::MaxPignistic;
  throw Error(ErrorKind::InvalidConfig, "unknown criterion '" + name + "' (expected belief|pignistic)");
}

inline const char* to_string(DecisionCriterion c) noexcept {
  return c == DecisionCriterion::MaxPignistic ? "pignistic" : "belief";
}

inline RuleConfig parse_rule_json(const Json& v, const std::string& path) {
  const std::string rule = detail::require_string(detail::require(v, "rule", path), detail::join(path, "rule"));
  std::optional<std::string> tnorm;
  std::optional<std::string> tconorm;
  if (v.contains("tnorm")) tnorm = detail::require_string(v["tnorm"], detail::join(path, "tnorm"));
  if (v.contains("tconorm")) tconorm = detail::require_string(v["tconorm"], detail::join(path, "tconorm"));
  return detail::at_path(path, [&] { return parse_rule(rule, tnorm, tconorm); });
}

inline OrderedJson to_json(const RuleConfig& rule) {
  OrderedJson out{{"rule", rule.rule_name()}};
  if (rule.is_tcn()) {
    out["tnorm"] = evidfuse::to_string(rule.tnorm());
    out["tconorm"] = evidfuse::to_string(rule.tconorm());
  }
  return out;
}

/// {"frame", "confusion", "segments": [["Cargo", 30], ...], "runs", "master_seed",
///  "rules": [{"rule": "tcn", "tnorm": "bounded", "tconorm": "max"}, ...],
///  "criterion": "belief" (optional)}
inline MonteCarloConfig parse_monte_carlo_config(const Json& doc) {
  const ConfusionMatrix confusion = parse_confusion(doc);
  const Frame& frame = confusion.frame();

  const Json& segs = detail::require(doc, "segments", "");
  if (!segs.is_array()) throw detail::field_error("segments", "expected an array of [label, duration] pairs");
  std::vector<Segment> segments;
  for (std::size_t i = 0; i < segs.size(); ++i) {
    const std::string path = "segments[" + std::to_string(i) + "]";
    if (!segs[i].is_array() || segs[i].size() != 2) throw detail::field_error(path, "expected [label, duration]");
    const std::string label = detail::require_string(segs[i][0], path + "[0]");
    const std::size_t type = detail::at_path(path + "[0]", [&] { return frame.index_of(label); });
    const auto duration = detail::require_count(segs[i][1], path + "[1]");
    if (duration == 0) throw Error(ErrorKind::InvalidConfig, path + "[1]: zero duration");
    segments.push_back({type, static_cast<std::size_t>(duration)});
  }
  Scenario scenario = detail::at_path("segments", [&] { return Scenario(frame, std::move(segments)); });

  const auto runs = detail::require_count(detail::require(doc, "runs", ""), "runs");
  if (runs == 0) throw Error(ErrorKind::InvalidConfig, "runs: must be >= 1");
  const auto seed = detail::require_count(detail::require(doc, "master_seed", ""), "master_seed");

  const Json& rules_json = detail::require(doc, "rules", "");
  if (!rules_json.is_array() || rules_json.empty()) throw detail::field_error("rules", "expected a non-empty array");
  std::vector<RuleConfig> rules;
  for (std::size_t i = 0; i < rules_json.size(); ++i)
    rules.push_back(parse_rule_json(rules_json[i], "rules[" + std::to_string(i) + "]"));

  DecisionCriterion criterion = DecisionCriterion::MaxBelief;
  if (doc.contains("criterion"))
    criterion = detail::at_path("criterion", [&] {
      return parse_criterion(detail::require_string(doc["criterion"], "criterion"));
    });

  return MonteCarloConfig{std::move(scenario), confusion, std::move(rules), static_cast<std::size_t>(runs), seed,
                          criterion};
}

inline OrderedJson to_json(const MonteCarloConfig& cfg) {
  const Frame& frame = cfg.scenario.frame();
  OrderedJson confusion = OrderedJson::array();
  for (std::size_t i = 0; i < frame.size(); ++i) {
    const auto row = cfg.confusion.row(i);
    confusion.push_back(std::vector<double>(row.begin(), row.end()));
  }
  OrderedJson segments = OrderedJson::array();
  for (const auto& s : cfg.scenario.segments()) segments.push_back(OrderedJson::array({frame.label(s.type), s.duration}));
  OrderedJson rules = OrderedJson::array();
  for (const auto& r : cfg.rules) rules.push_back(to_json(r));
  return OrderedJson{{"frame", frame.labels()}, {"confusion", confusion},   {"segments", segments},
                     {"runs", cfg.runs},        {"master_seed", cfg.master_seed}, {"rules", rules},
                     {"criterion", to_string(cfg.criterion)}};
}

// ---------------------------------------------------------------------------
// CSV

/// 12 significant digits.
inline std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline std::string sanitize(const std::string& text) {
  std::string out = text;
  for (auto& c : out)
    if (!std::isalnum(static_cast<unsigned char>(c))) c = '_';
  return out;
}

inline std::string mass_column(const Frame& frame, FocalSet set) { return "m_" + sanitize(frame.subset_name(set)); }

/// "# m_A=A,m_A_B=A|B,..." mapping sanitized column names back to subsets.
inline void write_column_legend(std::ostream& os, const Frame& frame) {
  os << "# ";
  for (std::size_t x = 1; x < frame.subset_count(); ++x) {
    const FocalSet set(static_cast<FocalSet::Bits>(x));
    if (x > 1) os << ',';
    os << mass_column(frame, set) << '=' << frame.subset_name(set);
  }
  os << '\n';
}

inline void write_mass_columns_header(std::ostream& os, const Frame& frame) {
  for (std::size_t x = 1; x < frame.subset_count(); ++x)
    os << ',' << mass_column(frame, FocalSet(static_cast<FocalSet::Bits>(x)));
}

/// scan,declared,decision,m_<subset>... with subsets in bitmask order.
inline void write_track_csv(std::ostream& os, const Frame& frame, const std::vector<TrackRecord>& records) {
  write_column_legend(os, frame);
  os << "scan,declared,decision";
  write_mass_columns_header(os, frame);
  os << '\n';
  for (const auto& rec : records) {
    os << rec.scan << ',' << frame.label(rec.declared) << ',' << frame.label(rec.decision);
    const auto dense = rec.posterior.dense();
    for (std::size_t x = 1; x < dense.size(); ++x) os << ',' << format_number(dense[x]);
    os << '\n';
  }
}

/// rule,tnorm,tconorm,scan,true_type,m_<subset>...,correct_rate; rows by rule order, then scan.
inline void write_simulation_csv(std::ostream& os, const Scenario& scenario, const std::vector<AveragedTrace>& traces) {
  const Frame& frame = scenario.frame();
  const auto truth = scenario.truth();
  write_column_legend(os, frame);
  os << "rule,tnorm,tconorm,scan,true_type";
  write_mass_columns_header(os, frame);
  os << ",correct_rate\n";
  for (const auto& trace : traces) {
    const std::string tnorm = trace.rule.is_tcn() ? evidfuse::to_string(trace.rule.tnorm()) : "";
    const std::string tconorm = trace.rule.is_tcn() ? evidfuse::to_string(trace.rule.tconorm()) : "";
    for (std::size_t k = 0; k < trace.mean_mass.size(); ++k) {
      os << trace.rule.rule_name() << ',' << tnorm << ',' << tconorm << ',' << k + 1 << ','
         << frame.label(truth[k]);
      for (std::size_t x = 1; x < frame.subset_count(); ++x) os << ',' << format_number(trace.mean_mass[k][x]);
      os << ',' << format_number(trace.correct_rate[k]) << '\n';
    }
  }
}

/// e.g. "2_tcn_bounded_max.dat" for the third rule.
inline std::string plot_data_filename(std::size_t rule_index, const RuleConfig& rule) {
  std::string name = std::to_string(rule_index) + "_" + rule.rule_name();
  if (rule.is_tcn()) name += std::string("_") + evidfuse::to_string(rule.tnorm()) + "_" + evidfuse::to_string(rule.tconorm());
  return name + ".dat";
}

/// Whitespace-separated columns for gnuplot: scan, then the mean mass of each singleton.
inline void write_plot_data(std::ostream& os, const Frame& frame, const AveragedTrace& trace) {
  os << "# " << trace.rule.describe() << "\n# scan";
  for (const auto& label : frame.labels()) os << ' ' << sanitize(label);
  os << '\n';
  for (std::size_t k = 0; k < trace.mean_mass.size(); ++k) {
    os << k + 1;
    for (std::size_t i = 0; i < frame.size(); ++i) os << ' ' << format_number(trace.mean(k, FocalSet::singleton(i)));
    os << '\n';
  }
}

}  // namespace evidfuse::io
