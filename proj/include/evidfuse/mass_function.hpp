#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "evidfuse/error.hpp"
#include "evidfuse/frame.hpp"

namespace evidfuse {

inline constexpr double kNormTolerance = 1e-9;

/// How a dense mass vector is accepted: rescaled by its sum, or only audited.
enum class Normalization { Rescale, AuditOnly };

/// A normalized basic belief assignment over the nonempty subsets of a frame.
///
/// Storage is dense: one slot per subset, indexed by the subset bitmask, slot 0
/// (the empty set) always zero. Unassigned subsets hold exactly 0.0, so two mass
/// functions compare equal iff their focal elements and masses match exactly.
class MassFunction {
 public:
  /// Validates `masses` (size 2^M, indexed by bitmask) and builds a mass function.
  static MassFunction from_dense(Frame frame, std::vector<double> masses,
                                 Normalization mode = Normalization::Rescale) {
    if (masses.size() != frame.subset_count())
      throw Error(ErrorKind::InvalidConfig, "dense mass vector has " + std::to_string(masses.size()) +
                                                " slots, frame needs " + std::to_string(frame.subset_count()));
    if (masses[0] != 0.0) throw Error(ErrorKind::EmptySetMass, std::to_string(masses[0]));
    double total = 0.0;
    for (std::size_t i = 1; i < masses.size(); ++i) {
      const double m = masses[i];
      if (std::isnan(m) || m < 0.0)
        throw Error(ErrorKind::NegativeMass, frame.subset_name(FocalSet(static_cast<FocalSet::Bits>(i))) +
                                                 " = " + std::to_string(m));
      if (m > 1.0 + kNormTolerance)
        throw Error(ErrorKind::OutOfRange, frame.subset_name(FocalSet(static_cast<FocalSet::Bits>(i))) +
                                               " = " + std::to_string(m));
      total += m;
    }
    if (!(std::abs(total - 1.0) <= kNormTolerance))
      throw Error(ErrorKind::NotNormalized, "sum is " + std::to_string(total));
    if (mode == Normalization::Rescale && total != 1.0)
      for (auto& m : masses) m /= total;
    return MassFunction(std::move(frame), std::move(masses));
  }

  const Frame& frame() const noexcept { return frame_; }
  double mass(FocalSet set) const { return masses_.at(set.index()); }
  double operator[](FocalSet set) const { return masses_[set.index()]; }
  std::span<const double> dense() const noexcept { return masses_; }

  /// Subsets with strictly positive mass, in bitmask order.
  std::vector<std::pair<FocalSet, double>> focal_elements() const {
    std::vector<std::pair<FocalSet, double>> out;
    for (std::size_t i = 1; i < masses_.size(); ++i)
      if (masses_[i] > 0.0) out.emplace_back(FocalSet(static_cast<FocalSet::Bits>(i)), masses_[i]);
    return out;
  }

  friend bool operator==(const MassFunction& a, const MassFunction& b) {
    return a.frame_ == b.frame_ && a.masses_ == b.masses_;
  }

 private:
  MassFunction(Frame frame, std::vector<double> masses) : frame_(std::move(frame)), masses_(std::move(masses)) {}

  Frame frame_;
  std::vector<double> masses_;
};

/// Builds a mass function from explicit (subset, mass) entries. Zero entries are
/// dropped; a subset listed twice is rejected.
inline MassFunction make_bba(const Frame& frame, std::span<const std::pair<FocalSet, double>> entries) {
  std::vector<double> dense(frame.subset_count(), 0.0);
  std::vector<bool> seen(frame.subset_count(), false);
  for (const auto& [set, m] : entries) {
    if (set.index() >= dense.size())
      throw Error(ErrorKind::UnknownLabel, "subset bits exceed frame width");
    if (seen[set.index()]) throw Error(ErrorKind::InvalidConfig, "subset " + frame.subset_name(set) + " listed twice");
    seen[set.index()] = true;
    if (set.is_empty()) {
      if (m != 0.0) throw Error(ErrorKind::EmptySetMass, std::to_string(m));
      continue;
    }
    dense[set.index()] = m;
  }
  return MassFunction::from_dense(frame, std::move(dense));
}

inline MassFunction make_bba(const Frame& frame, std::initializer_list<std::pair<FocalSet, double>> entries) {
  return make_bba(frame, std::span<const std::pair<FocalSet, double>>(entries.begin(), entries.size()));
}

/// Full ignorance: all mass on the whole frame.
inline MassFunction vacuous_bba(const Frame& frame) {
  std::vector<double> dense(frame.subset_count(), 0.0);
  dense[frame.ignorance().index()] = 1.0;
  return MassFunction::from_dense(frame, std::move(dense));
}

/// Unnormalized combination result; slot 0 holds the conflict mass.
class ConsensusResult {
 public:
  ConsensusResult(Frame frame, std::vector<double> masses) : frame_(std::move(frame)), masses_(std::move(masses)) {}

  const Frame& frame() const noexcept { return frame_; }
  double mass(FocalSet set) const { return masses_.at(set.index()); }
  double conflict() const noexcept { return masses_[0]; }
  std::span<const double> dense() const noexcept { return masses_; }

  friend bool operator==(const ConsensusResult&, const ConsensusResult&) = default;

 private:
  Frame frame_;
  std::vector<double> masses_;
};

namespace detail {
/// Visits each unordered pair {A, B} of subsets focal in either operand once,
/// passing m1(A)m2(B) + m1(B)m2(A) (a single product when A = B). Swapping the
/// operands yields the same sums in the same order, so consensus results are
/// bit-identical under argument swap.
template <typename Visit>
void for_each_unordered_pair(const MassFunction& m1, const MassFunction& m2, Visit&& visit) {
  const auto d1 = m1.dense();
  const auto d2 = m2.dense();
  std::vector<std::size_t> support;
  for (std::size_t i = 1; i < d1.size(); ++i)
    if (d1[i] > 0.0 || d2[i] > 0.0) support.push_back(i);
  for (std::size_t p = 0; p < support.size(); ++p) {
    const std::size_t i = support[p];
    visit(FocalSet(static_cast<FocalSet::Bits>(i)), FocalSet(static_cast<FocalSet::Bits>(i)), d1[i] * d2[i]);
    for (std::size_t q = p + 1; q < support.size(); ++q) {
      const std::size_t j = support[q];
      const double sum = d1[i] * d2[j] + d1[j] * d2[i];
      if (sum != 0.0)
        visit(FocalSet(static_cast<FocalSet::Bits>(i)), FocalSet(static_cast<FocalSet::Bits>(j)), sum);
    }
  }
}
}  // namespace detail

/// m12(X) = sum over A∩B=X of m1(A)·m2(B), including X = ∅.
inline ConsensusResult conjunctive_consensus(const MassFunction& m1, const MassFunction& m2) {
  require_same_frame(m1.frame(), m2.frame());
  std::vector<double> out(m1.frame().subset_count(), 0.0);
  detail::for_each_unordered_pair(m1, m2, [&](FocalSet a, FocalSet b, double sum) { out[(a & b).index()] += sum; });
  return ConsensusResult(m1.frame(), std::move(out));
}

inline double total_conflict(const MassFunction& m1, const MassFunction& m2) {
  return conjunctive_consensus(m1, m2).conflict();
}

/// m(X) = sum over A∪B=X of m1(A)·m2(B).
inline MassFunction disjunctive_consensus(const MassFunction& m1, const MassFunction& m2) {
  require_same_frame(m1.frame(), m2.frame());
  std::vector<double> out(m1.frame().subset_count(), 0.0);
  detail::for_each_unordered_pair(m1, m2, [&](FocalSet a, FocalSet b, double sum) { out[(a | b).index()] += sum; });
  // Rescaling absorbs rounding so that m ∪ vacuous is exactly vacuous.
  return MassFunction::from_dense(m1.frame(), std::move(out));
}

/// BetP(θ) = sum over X ∋ θ of m(X)/|X|, indexed by frame position.
inline std::vector<double> pignistic(const MassFunction& m) {
  std::vector<double> prob(m.frame().size(), 0.0);
  for (const auto& [set, mass] : m.focal_elements()) {
    const double share = mass / set.cardinality();
    for (std::size_t i = 0; i < prob.size(); ++i)
      if (set.contains(i)) prob[i] += share;
  }
  return prob;
}

enum class DecisionCriterion { MaxBelief, MaxPignistic };

/// Index of the decided type. MaxBelief compares singleton masses, MaxPignistic
/// compares BetP; exact ties go to the lowest frame index.
inline std::size_t decide(const MassFunction& m, DecisionCriterion criterion = DecisionCriterion::MaxBelief) {
  std::vector<double> score;
  if (criterion == DecisionCriterion::MaxPignistic) {
    score = pignistic(m);
  } else {
    score.resize(m.frame().size());
    for (std::size_t i = 0; i < score.size(); ++i) score[i] = m[FocalSet::singleton(i)];
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < score.size(); ++i)
    if (score[i] > score[best]) best = i;
  return best;
}

}  // namespace evidfuse
