#pragma once

// Test-only reference implementations. They work on explicit label sets
// (std::set<std::string>) and literal textbook formulas, sharing nothing with
// the bitmask code paths under test beyond the input/output containers.

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "evidfuse/evidfuse.hpp"

namespace oracle {

using LabelSet = std::set<std::string>;
using Masses = std::map<LabelSet, double>;

inline LabelSet to_labels(const evidfuse::Frame& frame, evidfuse::FocalSet set) {
  LabelSet out;
  for (std::size_t i = 0; i < frame.size(); ++i)
    if (set.contains(i)) out.insert(frame.label(i));
  return out;
}

inline Masses to_masses(const evidfuse::MassFunction& m) {
  Masses out;
  for (const auto& [set, mass] : m.focal_elements()) out[to_labels(m.frame(), set)] = mass;
  return out;
}

inline LabelSet intersect(const LabelSet& a, const LabelSet& b) {
  LabelSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
  return out;
}

inline LabelSet unite(const LabelSet& a, const LabelSet& b) {
  LabelSet out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
  return out;
}

inline double get(const Masses& m, const LabelSet& s) {
  auto it = m.find(s);
  return it == m.end() ? 0.0 : it->second;
}

inline Masses conjunctive(const Masses& m1, const Masses& m2) {
  Masses out;
  for (const auto& [a, ma] : m1)
    for (const auto& [b, mb] : m2) out[intersect(a, b)] += ma * mb;
  return out;
}

inline Masses disjunctive(const Masses& m1, const Masses& m2) {
  Masses out;
  for (const auto& [a, ma] : m1)
    for (const auto& [b, mb] : m2) out[unite(a, b)] += ma * mb;
  return out;
}

inline Masses dempster(const Masses& m1, const Masses& m2) {
  Masses conj = conjunctive(m1, m2);
  const double k = get(conj, {});
  Masses out;
  for (const auto& [x, m] : conj)
    if (!x.empty()) out[x] = m / (1.0 - k);
  return out;
}

/// Every nonempty subset of the frame.
inline std::vector<LabelSet> nonempty_subsets(const std::vector<std::string>& labels) {
  std::vector<LabelSet> out;
  const std::size_t n = labels.size();
  for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
    LabelSet s;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (std::size_t{1} << i)) s.insert(labels[i]);
    out.push_back(s);
  }
  return out;
}

/// Two-source PCR5 written per target set X:
/// m(X) = m12(X) + Σ_{Y ≠ X, X∩Y=∅} [m1(X)²m2(Y)/(m1(X)+m2(Y)) + m2(X)²m1(Y)/(m2(X)+m1(Y))].
inline Masses pcr5(const std::vector<std::string>& labels, const Masses& m1, const Masses& m2) {
  Masses conj = conjunctive(m1, m2);
  Masses out;
  const auto subsets = nonempty_subsets(labels);
  for (const auto& x : subsets) {
    double v = get(conj, x);
    for (const auto& y : subsets) {
      if (y == x || !intersect(x, y).empty()) continue;
      const double d1 = get(m1, x) + get(m2, y);
      if (d1 != 0.0) v += get(m1, x) * get(m1, x) * get(m2, y) / d1;
      const double d2 = get(m2, x) + get(m1, y);
      if (d2 != 0.0) v += get(m2, x) * get(m2, x) * get(m1, y) / d2;
    }
    if (v != 0.0) out[x] = v;
  }
  return out;
}

using BinaryOp = double (*)(double, double);

inline double t_min(double x, double y) { return std::min(x, y); }
inline double t_product(double x, double y) { return x * y; }
inline double t_bounded(double x, double y) { return std::max(0.0, x + y - 1.0); }
inline double s_max(double x, double y) { return std::max(x, y); }
inline double s_sum(double x, double y) { return x + y; }

/// TCN on a two-element frame {θi, θj}, written term by term:
/// t-norm consensus on θi, θj, θi∪θj, the two ratio terms per singleton, then normalization.
inline Masses tcn_two_element(const std::string& ti, const std::string& tj, const Masses& m1, const Masses& m2,
                              BinaryOp tnorm, BinaryOp tconorm) {
  const LabelSet i{ti}, j{tj}, u{ti, tj};
  auto ratio = [&](double a, double b) {
    const double s = tconorm(a, b);
    return s == 0.0 ? 0.0 : tnorm(a, b) / s;
  };
  const double a_i = get(m1, i), a_j = get(m1, j), a_u = get(m1, u);
  const double b_i = get(m2, i), b_j = get(m2, j), b_u = get(m2, u);
  double mi = tnorm(a_i, b_i) + tnorm(a_i, b_u) + tnorm(a_u, b_i);
  double mj = tnorm(a_j, b_j) + tnorm(a_j, b_u) + tnorm(a_u, b_j);
  double mu = tnorm(a_u, b_u);
  const double r_ij = ratio(a_i, b_j);  // m1(θi) against m2(θj)
  const double r_ji = ratio(a_j, b_i);  // m1(θj) against m2(θi)
  mi += a_i * r_ij + b_i * r_ji;
  mj += b_j * r_ij + a_j * r_ji;
  const double total = mi + mj + mu;
  Masses out;
  if (mi != 0.0) out[i] = mi / total;
  if (mj != 0.0) out[j] = mj / total;
  if (mu != 0.0) out[u] = mu / total;
  return out;
}

inline std::map<std::string, double> pignistic(const Masses& m) {
  std::map<std::string, double> out;
  for (const auto& [x, mass] : m)
    for (const auto& label : x) out[label] += mass / static_cast<double>(x.size());
  return out;
}

/// Max |a(X) - b(X)| over the union of keys; the empty set is ignored when `skip_empty`.
inline double max_abs_diff(const Masses& a, const Masses& b, bool skip_empty = true) {
  double worst = 0.0;
  for (const auto& [x, m] : a)
    if (!(skip_empty && x.empty())) worst = std::max(worst, std::abs(m - get(b, x)));
  for (const auto& [x, m] : b)
    if (!(skip_empty && x.empty())) worst = std::max(worst, std::abs(m - get(a, x)));
  return worst;
}

/// Random normalized bba. Each nonempty subset is focal with probability 1/2
/// (at least one always is); masses are uniform weights rescaled.
inline evidfuse::MassFunction random_bba(const evidfuse::Frame& frame, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::bernoulli_distribution focal(0.5);
  const std::size_t n = frame.subset_count();
  std::vector<double> dense(n, 0.0);
  double total = 0.0;
  while (total == 0.0) {
    for (std::size_t x = 1; x < n; ++x) {
      dense[x] = focal(rng) ? unit(rng) : 0.0;
      total += dense[x];
    }
  }
  for (auto& m : dense) m /= total;
  return evidfuse::MassFunction::from_dense(frame, std::move(dense));
}

inline double max_abs_diff(const evidfuse::MassFunction& a, const evidfuse::MassFunction& b) {
  double worst = 0.0;
  for (std::size_t x = 0; x < a.dense().size(); ++x) worst = std::max(worst, std::abs(a.dense()[x] - b.dense()[x]));
  return worst;
}

}  // namespace oracle
