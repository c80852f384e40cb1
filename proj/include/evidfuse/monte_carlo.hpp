#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "evidfuse/error.hpp"
#include "evidfuse/frame.hpp"
#include "evidfuse/fusion_rules.hpp"
#include "evidfuse/mass_function.hpp"
#include "evidfuse/random.hpp"
#include "evidfuse/type_tracker.hpp"

namespace evidfuse {

struct Segment {
  std::size_t type = 0;
  std::size_t duration = 0;
  friend bool operator==(const Segment&, const Segment&) = default;
};

/// Piecewise-constant ground truth over scans 1..total_scans().
class Scenario {
 public:
  Scenario(Frame frame, std::vector<Segment> segments) : frame_(std::move(frame)), segments_(std::move(segments)) {
    if (segments_.empty()) throw Error(ErrorKind::InvalidConfig, "scenario has no segments");
    for (std::size_t i = 0; i < segments_.size(); ++i) {
      if (segments_[i].type >= frame_.size())
        throw Error(ErrorKind::UnknownLabel, "segment " + std::to_string(i) + " type index " +
                                                 std::to_string(segments_[i].type));
      if (segments_[i].duration == 0)
        throw Error(ErrorKind::InvalidConfig, "segment " + std::to_string(i) + " has zero duration");
    }
  }

  const Frame& frame() const noexcept { return frame_; }
  const std::vector<Segment>& segments() const noexcept { return segments_; }

  std::size_t total_scans() const noexcept {
    std::size_t n = 0;
    for (const auto& s : segments_) n += s.duration;
    return n;
  }

  /// truth()[k - 1] is the true type at scan k.
  std::vector<std::size_t> truth() const {
    std::vector<std::size_t> out;
    out.reserve(total_scans());
    for (const auto& s : segments_) out.insert(out.end(), s.duration, s.type);
    return out;
  }

 private:
  Frame frame_;
  std::vector<Segment> segments_;
};

inline Scenario build_scenario(const Frame& frame, const std::vector<std::pair<std::string, std::size_t>>& segments) {
  std::vector<Segment> out;
  out.reserve(segments.size());
  for (const auto& [label, duration] : segments) out.push_back({frame.index_of(label), duration});
  return Scenario(frame, std::move(out));
}

inline Frame default_frame() { return Frame({"Fighter", "Cargo"}); }

/// Starts on Cargo and switches twice onto Fighter for different durations; 100 scans.
inline Scenario default_scenario() {
  return build_scenario(default_frame(),
                        {{"Cargo", 30}, {"Fighter", 20}, {"Cargo", 20}, {"Fighter", 15}, {"Cargo", 15}});
}

/// Inverse-CDF draw over the confusion row of `truth`, consuming exactly one uniform.
inline std::size_t sample_decision(std::size_t truth, const ConfusionMatrix& confusion, SplitMix64& rng) {
  if (truth >= confusion.frame().size()) throw Error(ErrorKind::UnknownLabel, "type index " + std::to_string(truth));
  const auto row = confusion.row(truth);
  const double u = rng.uniform();
  double cumulative = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t j = 0; j < row.size(); ++j) {
    if (row[j] <= 0.0) continue;
    cumulative += row[j];
    last_positive = j;
    if (u < cumulative) return j;
  }
  // Row sums a hair below 1.
  return last_positive;
}

inline std::vector<std::size_t> sample_declarations(std::span<const std::size_t> truth,
                                                    const ConfusionMatrix& confusion, SplitMix64& rng) {
  std::vector<std::size_t> out;
  out.reserve(truth.size());
  for (const std::size_t t : truth) out.push_back(sample_decision(t, confusion, rng));
  return out;
}

struct MonteCarloConfig {
  Scenario scenario;
  ConfusionMatrix confusion;
  std::vector<RuleConfig> rules;
  std::size_t runs = 1;
  std::uint64_t master_seed = 0;
  DecisionCriterion criterion = DecisionCriterion::MaxBelief;
};

/// Per-scan averages of one rule over all runs.
struct AveragedTrace {
  RuleConfig rule;
  /// mean_mass[k][x]: mean mass of subset bitmask x at scan k + 1 (slot 0 unused, zero).
  std::vector<std::vector<double>> mean_mass;
  /// Fraction of runs whose decision at scan k + 1 equals the true type.
  std::vector<double> correct_rate;

  double mean(std::size_t scan_index, FocalSet set) const { return mean_mass.at(scan_index).at(set.index()); }
};

inline void validate(const MonteCarloConfig& cfg) {
  if (cfg.runs == 0) throw Error(ErrorKind::InvalidConfig, "runs must be >= 1");
  if (cfg.rules.empty()) throw Error(ErrorKind::InvalidConfig, "rules must be non-empty");
  require_same_frame(cfg.scenario.frame(), cfg.confusion.frame());
}

/// Runs the experiment on `threads` workers (0 = hardware concurrency).
///
/// Each run draws its declaration stream from its own generator seeded with
/// derive_run_seed(master_seed, run), before any fusion, and feeds that stream to
/// every rule. Per-run results are merged strictly in run order, so the output
/// does not depend on the thread count or on the order of the rule list.
inline std::vector<AveragedTrace> run_monte_carlo(const MonteCarloConfig& cfg, unsigned threads = 1) {
  validate(cfg);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());

  const auto truth = cfg.scenario.truth();
  const std::size_t scans = truth.size();
  const std::size_t subsets = cfg.scenario.frame().subset_count();
  const std::size_t rules = cfg.rules.size();

  std::vector<AveragedTrace> traces;
  traces.reserve(rules);
  for (const auto& rule : cfg.rules)
    traces.push_back({rule, std::vector<std::vector<double>>(scans, std::vector<double>(subsets, 0.0)),
                      std::vector<double>(scans, 0.0)});
  std::vector<std::vector<std::size_t>> correct(rules, std::vector<std::size_t>(scans, 0));

  // Per-run slot: [rule][scan] -> dense masses, plus decisions.
  struct RunResult {
    std::vector<std::vector<std::vector<double>>> masses;
    std::vector<std::vector<std::size_t>> decisions;
    std::exception_ptr error;
  };

  constexpr std::size_t kBatch = 64;
  std::vector<RunResult> batch(std::min(kBatch, cfg.runs));

  auto simulate_run = [&](std::size_t run, RunResult& slot) {
    slot.error = nullptr;
    slot.masses.assign(rules, {});
    slot.decisions.assign(rules, {});
    SplitMix64 rng(derive_run_seed(cfg.master_seed, run));
    const auto declarations = sample_declarations(truth, cfg.confusion, rng);
    for (std::size_t r = 0; r < rules; ++r) {
      try {
        const auto records = run_track(declarations, cfg.confusion, cfg.rules[r], cfg.criterion);
        auto& masses = slot.masses[r];
        masses.reserve(scans);
        slot.decisions[r].reserve(scans);
        for (const auto& rec : records) {
          masses.emplace_back(rec.posterior.dense().begin(), rec.posterior.dense().end());
          slot.decisions[r].push_back(rec.decision);
        }
      } catch (const Error& e) {
        slot.error = std::make_exception_ptr(
            e.with_context("run " + std::to_string(run) + ", rule " + cfg.rules[r].describe()));
        return;
      }
    }
  };

  for (std::size_t first = 0; first < cfg.runs; first += kBatch) {
    const std::size_t count = std::min(kBatch, cfg.runs - first);
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(threads, count));
    if (workers <= 1) {
      for (std::size_t i = 0; i < count; ++i) simulate_run(first + i, batch[i]);
    } else {
      std::atomic<std::size_t> next{0};
      std::vector<std::jthread> pool;
      pool.reserve(workers);
      for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&] {
          for (std::size_t i = next++; i < count; i = next++) simulate_run(first + i, batch[i]);
        });
    }

    for (std::size_t i = 0; i < count; ++i) {
      const auto& slot = batch[i];
      if (slot.error) std::rethrow_exception(slot.error);
      for (std::size_t r = 0; r < rules; ++r) {
        for (std::size_t k = 0; k < scans; ++k) {
          auto& sum = traces[r].mean_mass[k];
          const auto& m = slot.masses[r][k];
          for (std::size_t x = 1; x < subsets; ++x) sum[x] += m[x];
          if (slot.decisions[r][k] == truth[k]) ++correct[r][k];
        }
      }
    }
  }

  const double n = static_cast<double>(cfg.runs);
  for (std::size_t r = 0; r < rules; ++r) {
    for (std::size_t k = 0; k < scans; ++k) {
      for (auto& m : traces[r].mean_mass[k]) m /= n;
      traces[r].correct_rate[k] = static_cast<double>(correct[r][k]) / n;
    }
  }
  return traces;
}

/// Re-adaptation after one truth switch.
struct SwitchDelay {
  std::size_t switch_scan = 0;  // first scan (1-based) of the new type
  std::size_t new_type = 0;
  std::size_t segment_length = 0;
  /// Scans from switch_scan until the mean mass on new_type first exceeds 0.5
  /// (0 = already above at switch_scan). Empty when it never does before the next switch.
  std::optional<std::size_t> delay;

  /// delay, or segment_length when censored; used for averaging and orderings.
  std::size_t effective() const noexcept { return delay.value_or(segment_length); }
};

inline constexpr double kCrossoverLevel = 0.5;

inline std::vector<SwitchDelay> readaptation_delays(const AveragedTrace& trace, const Scenario& scenario) {
  const auto truth = scenario.truth();
  if (trace.mean_mass.size() != truth.size())
    throw Error(ErrorKind::InvalidConfig, "trace length does not match scenario");
  std::vector<SwitchDelay> out;
  for (std::size_t k = 1; k < truth.size(); ++k) {
    if (truth[k] == truth[k - 1]) continue;
    SwitchDelay d;
    d.switch_scan = k + 1;
    d.new_type = truth[k];
    std::size_t end = k;
    while (end < truth.size() && truth[end] == truth[k]) ++end;
    d.segment_length = end - k;
    for (std::size_t j = k; j < end; ++j) {
      if (trace.mean(j, FocalSet::singleton(d.new_type)) > kCrossoverLevel) {
        d.delay = j - k;
        break;
      }
    }
    out.push_back(d);
  }
  return out;
}

inline double mean_readaptation_delay(const AveragedTrace& trace, const Scenario& scenario) {
  const auto delays = readaptation_delays(trace, scenario);
  if (delays.empty()) return 0.0;
  double total = 0.0;
  for (const auto& d : delays) total += static_cast<double>(d.effective());
  return total / static_cast<double>(delays.size());
}

}  // namespace evidfuse
