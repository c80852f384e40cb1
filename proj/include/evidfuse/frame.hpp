#pragma once

#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "evidfuse/error.hpp"

namespace evidfuse {

/// A subset of the frame, bit i set when the i-th label (frame order) belongs to it.
class FocalSet {
 public:
  using Bits = std::uint32_t;

  constexpr FocalSet() noexcept = default;
  constexpr explicit FocalSet(Bits bits) noexcept : bits_(bits) {}

  static constexpr FocalSet singleton(std::size_t index) noexcept {
    return FocalSet(Bits{1} << index);
  }

  constexpr Bits bits() const noexcept { return bits_; }
  constexpr std::size_t index() const noexcept { return bits_; }
  constexpr int cardinality() const noexcept { return std::popcount(bits_); }
  constexpr bool is_empty() const noexcept { return bits_ == 0; }
  constexpr bool is_singleton() const noexcept { return std::has_single_bit(bits_); }
  constexpr bool contains(std::size_t element) const noexcept {
    return (bits_ >> element) & Bits{1};
  }
  constexpr bool disjoint_from(FocalSet other) const noexcept { return (bits_ & other.bits_) == 0; }

  friend constexpr FocalSet operator&(FocalSet a, FocalSet b) noexcept { return FocalSet(a.bits_ & b.bits_); }
  friend constexpr FocalSet operator|(FocalSet a, FocalSet b) noexcept { return FocalSet(a.bits_ | b.bits_); }
  friend constexpr auto operator<=>(FocalSet, FocalSet) noexcept = default;

 private:
  Bits bits_ = 0;
};

/// Ordered set of mutually exclusive type labels (Shafer's model). Cheap to
/// copy: the label storage is shared and immutable.
class Frame {
 public:
  static constexpr std::size_t kMinSize = 2;
  static constexpr std::size_t kMaxSize = 16;

  explicit Frame(std::vector<std::string> labels) {
    if (labels.size() < kMinSize)
      throw Error(ErrorKind::TooFewLabels, "got " + std::to_string(labels.size()));
    if (labels.size() > kMaxSize)
      throw Error(ErrorKind::TooManyLabels, "got " + std::to_string(labels.size()));
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i].empty()) throw Error(ErrorKind::EmptyLabel, "position " + std::to_string(i));
      for (std::size_t j = 0; j < i; ++j)
        if (labels[i] == labels[j]) throw Error(ErrorKind::DuplicateLabel, "'" + labels[i] + "'");
    }
    labels_ = std::make_shared<const std::vector<std::string>>(std::move(labels));
  }

  std::size_t size() const noexcept { return labels_->size(); }
  const std::vector<std::string>& labels() const noexcept { return *labels_; }
  const std::string& label(std::size_t index) const { return labels_->at(index); }

  /// Number of subsets including the empty set, 2^M.
  std::size_t subset_count() const noexcept { return std::size_t{1} << size(); }
  FocalSet ignorance() const noexcept { return FocalSet(static_cast<FocalSet::Bits>(subset_count() - 1)); }

  std::optional<std::size_t> find(std::string_view label) const noexcept {
    for (std::size_t i = 0; i < labels_->size(); ++i)
      if ((*labels_)[i] == label) return i;
    return std::nullopt;
  }

  std::size_t index_of(std::string_view label) const {
    if (auto i = find(label)) return *i;
    throw Error(ErrorKind::UnknownLabel, "'" + std::string(label) + "'");
  }

  /// Labels joined by '|' in frame order; the empty set prints as "{}".
  std::string subset_name(FocalSet set) const {
    if (set.is_empty()) return "{}";
    std::string out;
    for (std::size_t i = 0; i < size(); ++i) {
      if (!set.contains(i)) continue;
      if (!out.empty()) out += '|';
      out += (*labels_)[i];
    }
    return out;
  }

  /// Inverse of subset_name. Labels may be listed in any order; repeats are rejected.
  FocalSet parse_subset(std::string_view text) const {
    if (text == "{}") return FocalSet{};
    FocalSet::Bits bits = 0;
    std::size_t start = 0;
    while (true) {
      const auto bar = text.find('|', start);
      const auto part = text.substr(start, bar == std::string_view::npos ? text.npos : bar - start);
      const auto bit = FocalSet::Bits{1} << index_of(part);
      if (bits & bit) throw Error(ErrorKind::DuplicateLabel, "'" + std::string(part) + "' in subset '" + std::string(text) + "'");
      bits |= bit;
      if (bar == std::string_view::npos) break;
      start = bar + 1;
    }
    return FocalSet(bits);
  }

  friend bool operator==(const Frame& a, const Frame& b) noexcept {
    return a.labels_ == b.labels_ || *a.labels_ == *b.labels_;
  }

 private:
  std::shared_ptr<const std::vector<std::string>> labels_;
};

inline Frame make_frame(std::vector<std::string> labels) { return Frame(std::move(labels)); }

inline void require_same_frame(const Frame& a, const Frame& b) {
  if (!(a == b)) throw Error(ErrorKind::FrameMismatch, "operands are defined on different frames");
}

}  // namespace evidfuse
