#include <gtest/gtest.h>

#include <vector>

#include "evidfuse/type_tracker.hpp"

using namespace evidfuse;

namespace {

const Frame kFC({"Fighter", "Cargo"});
const FocalSet kF = FocalSet::singleton(0);
const FocalSet kC = FocalSet::singleton(1);
const FocalSet kTheta = kFC.ignorance();
constexpr std::size_t kFighter = 0;
constexpr std::size_t kCargo = 1;

ConfusionMatrix classifier() { return ConfusionMatrix(kFC, {{0.9, 0.1}, {0.1, 0.9}}); }

}  // namespace

TEST(ConfusionMatrix, Validation) {
  EXPECT_THROW(ConfusionMatrix(kFC, {{0.9, 0.2}, {0.1, 0.9}}), Error);
  EXPECT_THROW(ConfusionMatrix(kFC, {{1.1, -0.1}, {0.1, 0.9}}), Error);
  EXPECT_THROW(ConfusionMatrix(kFC, {{1.0, 0.0}}), Error);
  EXPECT_THROW(ConfusionMatrix(kFC, {{1.0}, {0.0, 1.0}}), Error);
  const auto c = classifier();
  EXPECT_EQ(c.at(kCargo, kFighter), 0.1);
  EXPECT_EQ(c.row(kFighter)[0], 0.9);
}

TEST(ObservationBba, DiagonalEntryAndIgnorance) {
  const auto f = observation_bba("Fighter", classifier());
  EXPECT_EQ(f[kF], 0.9);
  EXPECT_NEAR(f[kTheta], 0.1, 1e-15);
  const auto c = observation_bba(kCargo, classifier());
  EXPECT_EQ(c[kC], 0.9);
  const auto perfect = observation_bba(kCargo, ConfusionMatrix(kFC, {{1.0, 0.0}, {0.0, 1.0}}));
  EXPECT_EQ(perfect[kC], 1.0);
  EXPECT_EQ(perfect.focal_elements().size(), 1u);
  EXPECT_THROW(observation_bba("Bomber", classifier()), Error);
  EXPECT_THROW(observation_bba(std::size_t{2}, classifier()), Error);
}

TEST(TrackerStep, FirstScanIsTheObservationForEveryRule) {
  for (const auto& cfg : all_rule_configs()) {
    const auto [state, record] = tracker_step(TrackerState::initial(kFC), kFighter, classifier(), cfg);
    EXPECT_EQ(state.scan, 1u);
    EXPECT_EQ(record.scan, 1u);
    EXPECT_NEAR(record.posterior[kF], 0.9, 1e-12) << cfg.describe();
    EXPECT_NEAR(record.posterior[kTheta], 0.1, 1e-12) << cfg.describe();
    EXPECT_EQ(record.decision, kFighter);
  }
}

TEST(TrackerStep, SecondScanHandValues) {
  const std::vector<std::size_t> decl{kFighter, kCargo};
  const auto d = run_track(decl, classifier(), RuleConfig::dempster());
  ASSERT_EQ(d.size(), 2u);
  EXPECT_NEAR(d[1].posterior[kF], 0.09 / 0.19, 1e-12);
  EXPECT_NEAR(d[1].posterior[kC], 0.09 / 0.19, 1e-12);
  EXPECT_NEAR(d[1].posterior[kTheta], 0.01 / 0.19, 1e-12);
  // 0.9·0.1 and 0.1·0.9 are the same double, so this is an exact tie.
  EXPECT_EQ(d[1].posterior[kF], d[1].posterior[kC]);
  EXPECT_EQ(d[1].decision, kFighter);

  const auto p = run_track(decl, classifier(), RuleConfig::pcr5());
  EXPECT_NEAR(p[1].posterior[kF], 0.495, 1e-12);
  EXPECT_NEAR(p[1].posterior[kC], 0.495, 1e-12);
  EXPECT_NEAR(p[1].posterior[kTheta], 0.01, 1e-12);

  const auto t = run_track(decl, classifier(), RuleConfig::tcn(TNormKind::Min, TConormKind::Max));
  EXPECT_NEAR(t[1].posterior[kF], 1 / 2.1, 1e-12);
}

TEST(RunTrack, EmptyInputRejected) {
  EXPECT_THROW(run_track(std::vector<std::size_t>{}, classifier(), RuleConfig::pcr5()), Error);
}

TEST(RunTrack, ConstantDeclarationsReinforce) {
  const std::vector<std::size_t> decl(100, kFighter);
  for (const auto& cfg : all_rule_configs()) {
    SCOPED_TRACE(cfg.describe());
    const auto records = run_track(decl, classifier(), cfg);
    ASSERT_EQ(records.size(), 100u);
    for (std::size_t k = 1; k < records.size(); ++k)
      EXPECT_GE(records[k].posterior[kF], records[k - 1].posterior[kF]);
    EXPECT_GE(records.back().posterior[kF], 0.9);
  }
  const auto dempster = run_track(decl, classifier(), RuleConfig::dempster());
  EXPECT_GE(dempster.back().posterior[kF], 0.999);
}

TEST(RunTrack, PerfectClassifierAlwaysRight) {
  const ConfusionMatrix perfect(kFC, {{1.0, 0.0}, {0.0, 1.0}});
  for (const auto& cfg : all_rule_configs()) {
    for (std::size_t truth : {kFighter, kCargo}) {
      const std::vector<std::size_t> decl(30, truth);
      for (const auto& rec : run_track(decl, perfect, cfg)) EXPECT_EQ(rec.decision, truth) << cfg.describe();
    }
  }
}

TEST(RunTrack, DempsterErrorCarriesScan) {
  // A perfect classifier switching type drives Dempster into total conflict at scan 2.
  const ConfusionMatrix perfect(kFC, {{1.0, 0.0}, {0.0, 1.0}});
  const std::vector<std::size_t> decl{kFighter, kCargo};
  try {
    run_track(decl, perfect, RuleConfig::dempster());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::TotalConflict);
    EXPECT_NE(std::string(e.what()).find("scan 2"), std::string::npos) << e.what();
  }
  // PCR5 keeps going.
  EXPECT_EQ(run_track(decl, perfect, RuleConfig::pcr5()).size(), 2u);
}

TEST(RunTrack, DeterministicAndDempsterIgnoranceNonIncreasing) {
  std::vector<std::size_t> decl;
  for (int k = 0; k < 120; ++k) decl.push_back((k * 7 + k / 13) % 3 == 0 ? kCargo : kFighter);
  for (const auto& cfg : all_rule_configs()) {
    const auto a = run_track(decl, classifier(), cfg);
    const auto b = run_track(decl, classifier(), cfg);
    for (std::size_t k = 0; k < a.size(); ++k) {
      EXPECT_EQ(a[k].posterior, b[k].posterior);
      double total = 0.0;
      for (double x : a[k].posterior.dense()) {
        EXPECT_GE(x, 0.0);
        total += x;
      }
      EXPECT_NEAR(total, 1.0, 1e-9);
    }
  }
  const auto d = run_track(decl, classifier(), RuleConfig::dempster());
  for (std::size_t k = 1; k < d.size(); ++k) EXPECT_LE(d[k].posterior[kTheta], d[k - 1].posterior[kTheta]);
}

TEST(RunTrack, PignisticCriterion) {
  const std::vector<std::size_t> decl{kCargo};
  const auto rec = run_track(decl, classifier(), RuleConfig::pcr5(), DecisionCriterion::MaxPignistic);
  EXPECT_EQ(rec[0].decision, kCargo);
}
