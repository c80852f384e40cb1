#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "evidfuse/error.hpp"
#include "evidfuse/frame.hpp"
#include "evidfuse/fusion_rules.hpp"
#include "evidfuse/mass_function.hpp"

namespace evidfuse {

/// Row-stochastic classifier model: at(i, j) = P(declare type j | true type i).
class ConfusionMatrix {
 public:
  ConfusionMatrix(Frame frame, std::vector<std::vector<double>> rows) : frame_(std::move(frame)) {
    const std::size_t m = frame_.size();
    if (rows.size() != m)
      throw Error(ErrorKind::InvalidConfig,
                  "confusion matrix has " + std::to_string(rows.size()) + " rows, frame has " + std::to_string(m));
    entries_.reserve(m * m);
    for (std::size_t i = 0; i < m; ++i) {
      if (rows[i].size() != m)
        throw Error(ErrorKind::InvalidConfig, "confusion row " + std::to_string(i) + " has " +
                                                  std::to_string(rows[i].size()) + " entries, expected " +
                                                  std::to_string(m));
      double total = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        const double c = rows[i][j];
        if (!(c >= 0.0 && c <= 1.0))
          throw Error(ErrorKind::OutOfRange,
                      "confusion[" + std::to_string(i) + "][" + std::to_string(j) + "] = " + std::to_string(c));
        total += c;
        entries_.push_back(c);
      }
      if (!(std::abs(total - 1.0) <= kNormTolerance))
        throw Error(ErrorKind::NotNormalized, "confusion row " + std::to_string(i) + " sums to " + std::to_string(total));
    }
  }

  /// diag on the diagonal, (1 - diag)/(M - 1) elsewhere.
  static ConfusionMatrix symmetric(const Frame& frame, double diag) {
    const std::size_t m = frame.size();
    const double off = (1.0 - diag) / static_cast<double>(m - 1);
    std::vector<std::vector<double>> rows(m, std::vector<double>(m, off));
    for (std::size_t i = 0; i < m; ++i) rows[i][i] = diag;
    return ConfusionMatrix(frame, std::move(rows));
  }

  const Frame& frame() const noexcept { return frame_; }
  double at(std::size_t truth, std::size_t declared) const { return entries_.at(truth * frame_.size() + declared); }
  std::span<const double> row(std::size_t truth) const {
    return std::span<const double>(entries_).subspan(truth * frame_.size(), frame_.size());
  }

 private:
  Frame frame_;
  std::vector<double> entries_;
};

/// Observation bba for a classifier declaration: the diagonal entry on the
/// declared type, the remainder on total ignorance.
inline MassFunction observation_bba(std::size_t declared, const ConfusionMatrix& confusion) {
  const Frame& frame = confusion.frame();
  if (declared >= frame.size()) throw Error(ErrorKind::UnknownLabel, "type index " + std::to_string(declared));
  const double c = confusion.at(declared, declared);
  std::vector<double> dense(frame.subset_count(), 0.0);
  dense[FocalSet::singleton(declared).index()] = c;
  dense[frame.ignorance().index()] = 1.0 - c;
  return MassFunction::from_dense(frame, std::move(dense));
}

inline MassFunction observation_bba(const std::string& declared, const ConfusionMatrix& confusion) {
  return observation_bba(confusion.frame().index_of(declared), confusion);
}

struct TrackerState {
  MassFunction belief;
  std::size_t scan = 0;

  static TrackerState initial(const Frame& frame) { return {vacuous_bba(frame), 0}; }
};

struct TrackRecord {
  std::size_t scan = 0;  // 1-based
  std::size_t declared = 0;
  MassFunction posterior;
  std::size_t decision = 0;
};

/// One scan: fuse the running belief with the observation, then decide.
inline std::pair<TrackerState, TrackRecord> tracker_step(const TrackerState& state, std::size_t declared,
                                                         const ConfusionMatrix& confusion, const RuleConfig& cfg,
                                                         DecisionCriterion criterion = DecisionCriterion::MaxBelief) {
  require_same_frame(state.belief.frame(), confusion.frame());
  auto posterior = combine(cfg, state.belief, observation_bba(declared, confusion));
  const std::size_t decision = decide(posterior, criterion);
  TrackerState next{posterior, state.scan + 1};
  TrackRecord record{next.scan, declared, std::move(posterior), decision};
  return {std::move(next), std::move(record)};
}

/// Left fold of tracker_step from the vacuous prior. Errors carry the 1-based scan.
inline std::vector<TrackRecord> run_track(std::span<const std::size_t> declarations, const ConfusionMatrix& confusion,
                                          const RuleConfig& cfg,
                                          DecisionCriterion criterion = DecisionCriterion::MaxBelief) {
  if (declarations.empty()) throw Error(ErrorKind::InvalidConfig, "empty declaration sequence");
  std::vector<TrackRecord> out;
  out.reserve(declarations.size());
  auto state = TrackerState::initial(confusion.frame());
  for (const std::size_t declared : declarations) {
    try {
      auto [next, record] = tracker_step(state, declared, confusion, cfg, criterion);
      state = std::move(next);
      out.push_back(std::move(record));
    } catch (const Error& e) {
      throw e.with_context("scan " + std::to_string(state.scan + 1));
    }
  }
  return out;
}

}  // namespace evidfuse
