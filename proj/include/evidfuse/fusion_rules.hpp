#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "evidfuse/error.hpp"
#include "evidfuse/frame.hpp"
#include "evidfuse/fuzzy_operators.hpp"
#include "evidfuse/mass_function.hpp"

namespace evidfuse {

/// Dempster's rule refuses to normalize when 1 - K falls below this.
inline constexpr double kTotalConflictTolerance = 1e-12;

enum class RuleKind { Dempster, PCR5, TCN };

/// Which combination rule to apply. The t-norm/t-conorm pair exists iff the rule is TCN.
class RuleConfig {
 public:
  static RuleConfig dempster() noexcept { return RuleConfig(RuleKind::Dempster, std::nullopt); }
  static RuleConfig pcr5() noexcept { return RuleConfig(RuleKind::PCR5, std::nullopt); }
  static RuleConfig tcn(TNormKind tnorm, TConormKind tconorm) noexcept {
    return RuleConfig(RuleKind::TCN, Operators{tnorm, tconorm});
  }

  RuleKind kind() const noexcept { return kind_; }
  bool is_tcn() const noexcept { return kind_ == RuleKind::TCN; }
  TNormKind tnorm() const { return ops_.value().tnorm; }
  TConormKind tconorm() const { return ops_.value().tconorm; }

  /// "dempster", "pcr5", or "tcn".
  const char* rule_name() const noexcept {
    switch (kind_) {
      case RuleKind::Dempster: return "dempster";
      case RuleKind::PCR5: return "pcr5";
      case RuleKind::TCN: return "tcn";
    }
    return "?";
  }

  /// Human-readable tag such as "tcn(bounded,max)".
  std::string describe() const {
    if (!is_tcn()) return rule_name();
    return std::string("tcn(") + to_string(tnorm()) + "," + to_string(tconorm()) + ")";
  }

  friend bool operator==(const RuleConfig&, const RuleConfig&) = default;

 private:
  struct Operators {
    TNormKind tnorm;
    TConormKind tconorm;
    friend bool operator==(const Operators&, const Operators&) = default;
  };

  RuleConfig(RuleKind kind, std::optional<Operators> ops) noexcept : kind_(kind), ops_(ops) {}

  RuleKind kind_;
  std::optional<Operators> ops_;
};

/// Builds a RuleConfig from CLI/config spellings. `tnorm`/`tconorm` must be
/// given for tcn and absent otherwise.
inline RuleConfig parse_rule(const std::string& rule, const std::optional<std::string>& tnorm,
                             const std::optional<std::string>& tconorm) {
  const auto r = detail::lower(rule);
  if (r == "tcn") {
    if (!tnorm || !tconorm) throw Error(ErrorKind::InvalidConfig, "rule tcn requires both a t-norm and a t-conorm");
    return RuleConfig::tcn(parse_tnorm(*tnorm), parse_tconorm(*tconorm));
  }
  if (r != "dempster" && r != "pcr5")
    throw Error(ErrorKind::InvalidConfig, "unknown rule '" + rule + "' (expected dempster|pcr5|tcn)");
  if (tnorm || tconorm) throw Error(ErrorKind::InvalidConfig, "t-norm/t-conorm only apply to rule tcn");
  return r == "pcr5" ? RuleConfig::pcr5() : RuleConfig::dempster();
}

/// A fused mass function plus the bookkeeping behind it.
struct FusionOutcome {
  MassFunction result;
  /// Total conflict K of the ordinary conjunctive consensus.
  double conflict = 0.0;
  /// Mass added to each subset on top of its consensus share, indexed by bitmask.
  /// Dempster: result(X) - m12(X). PCR5: proportional conflict returns.
  /// TCN: the Step 2-3 ratio terms before normalization.
  std::vector<double> redistributed;
};

inline FusionOutcome dempster_fuse(const MassFunction& m1, const MassFunction& m2) {
  const auto consensus = conjunctive_consensus(m1, m2);
  const double k = consensus.conflict();
  if (1.0 - k < kTotalConflictTolerance) throw Error(ErrorKind::TotalConflict, "K = " + std::to_string(k));
  const auto m12 = consensus.dense();
  std::vector<double> out(m12.size(), 0.0);
  std::vector<double> moved(m12.size(), 0.0);
  for (std::size_t x = 1; x < m12.size(); ++x) {
    out[x] = m12[x] / (1.0 - k);
    moved[x] = out[x] - m12[x];
  }
  return {MassFunction::from_dense(m1.frame(), std::move(out)), k, std::move(moved)};
}

/// PCR5: each partial conflict m1(A)m2(B), A∩B=∅, goes back to A and B in
/// proportion to m1(A) and m2(B). No renormalization is applied; the result is
/// audited to sum to one.
inline FusionOutcome pcr5_fuse(const MassFunction& m1, const MassFunction& m2) {
  const auto consensus = conjunctive_consensus(m1, m2);
  const auto m12 = consensus.dense();
  std::vector<double> moved(m12.size(), 0.0);
  const auto f1 = m1.focal_elements();
  const auto f2 = m2.focal_elements();
  for (const auto& [a, ma] : f1) {
    for (const auto& [b, mb] : f2) {
      if (!a.disjoint_from(b)) continue;
      const double denom = ma + mb;
      if (denom == 0.0) continue;
      moved[a.index()] += ma * ma * mb / denom;
      moved[b.index()] += mb * mb * ma / denom;
    }
  }
  std::vector<double> out(m12.size(), 0.0);
  for (std::size_t x = 1; x < m12.size(); ++x) out[x] = m12[x] + moved[x];
  return {MassFunction::from_dense(m1.frame(), std::move(out), Normalization::AuditOnly), consensus.conflict(),
          std::move(moved)};
}

/// TCN rule.
///  1. t-norm consensus: m̃12(X) = Σ_{A∩B=X≠∅} T(m1(A), m2(B)).
///  2-3. every disjoint pair (A, B) with ratio r = T/S of their masses returns
///       m1(A)·r to A and m2(B)·r to B; 0/0 counts as 0.
///  4. divide by the total over nonempty subsets.
inline FusionOutcome tcn_fuse(const MassFunction& m1, const MassFunction& m2, TNormKind tnorm, TConormKind tconorm) {
  require_same_frame(m1.frame(), m2.frame());
  const std::size_t n = m1.frame().subset_count();
  std::vector<double> out(n, 0.0);
  std::vector<double> moved(n, 0.0);
  double conflict = 0.0;
  const auto f1 = m1.focal_elements();
  const auto f2 = m2.focal_elements();
  for (const auto& [a, ma] : f1) {
    for (const auto& [b, mb] : f2) {
      const FocalSet x = a & b;
      if (!x.is_empty()) {
        out[x.index()] += tnorm_eval(tnorm, ma, mb);
        continue;
      }
      conflict += ma * mb;
      const double s = tconorm_eval(tconorm, ma, mb);
      if (s == 0.0) continue;
      const double r = tnorm_eval(tnorm, ma, mb) / s;
      moved[a.index()] += ma * r;
      moved[b.index()] += mb * r;
    }
  }
  double total = 0.0;
  for (std::size_t x = 1; x < n; ++x) {
    out[x] += moved[x];
    total += out[x];
  }
  if (!(total > 0.0)) throw Error(ErrorKind::VanishingConsensus, "t-norm consensus and redistribution are all zero");
  for (auto& m : out) m /= total;
  return {MassFunction::from_dense(m1.frame(), std::move(out), Normalization::AuditOnly), conflict, std::move(moved)};
}

inline MassFunction dempster_combine(const MassFunction& m1, const MassFunction& m2) {
  return dempster_fuse(m1, m2).result;
}

inline MassFunction pcr5_combine(const MassFunction& m1, const MassFunction& m2) { return pcr5_fuse(m1, m2).result; }

inline MassFunction tcn_combine(const MassFunction& m1, const MassFunction& m2, TNormKind tnorm, TConormKind tconorm) {
  return tcn_fuse(m1, m2, tnorm, tconorm).result;
}

inline FusionOutcome fuse(const RuleConfig& cfg, const MassFunction& m1, const MassFunction& m2) {
  switch (cfg.kind()) {
    case RuleKind::Dempster: return dempster_fuse(m1, m2);
    case RuleKind::PCR5: return pcr5_fuse(m1, m2);
    case RuleKind::TCN: return tcn_fuse(m1, m2, cfg.tnorm(), cfg.tconorm());
  }
  throw Error(ErrorKind::InvalidConfig, "unhandled rule");
}

inline MassFunction combine(const RuleConfig& cfg, const MassFunction& m1, const MassFunction& m2) {
  return fuse(cfg, m1, m2).result;
}

/// Every rule configuration the library ships: Dempster, PCR5 and the full TCN cross product.
inline std::vector<RuleConfig> all_rule_configs() {
  std::vector<RuleConfig> out{RuleConfig::dempster(), RuleConfig::pcr5()};
  for (auto t : kAllTNorms)
    for (auto s : kAllTConorms) out.push_back(RuleConfig::tcn(t, s));
  return out;
}

}  // namespace evidfuse
