#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <string>

#include "evidfuse/error.hpp"

namespace evidfuse {

enum class TNormKind { Min, AlgebraicProduct, BoundedProduct };

/// Sum is the plain arithmetic sum x + y, not min(1, x + y); with it TCN's
/// product/sum ratio equals PCR5's proportional split.
enum class TConormKind { Max, Sum };

inline constexpr std::array kAllTNorms{TNormKind::Min, TNormKind::AlgebraicProduct, TNormKind::BoundedProduct};
inline constexpr std::array kAllTConorms{TConormKind::Max, TConormKind::Sum};

namespace detail {
inline void require_unit(double x, const char* op) {
  if (!(x >= 0.0 && x <= 1.0)) throw Error(ErrorKind::OutOfRange, std::string(op) + " argument " + std::to_string(x));
}
}  // namespace detail

inline double tnorm_eval(TNormKind kind, double x, double y) {
  detail::require_unit(x, "t-norm");
  detail::require_unit(y, "t-norm");
  switch (kind) {
    case TNormKind::Min: return std::min(x, y);
    case TNormKind::AlgebraicProduct: return x * y;
    case TNormKind::BoundedProduct:
      // Exact on the boundary: T(x, 1) = x.
      if (x == 1.0) return y;
      if (y == 1.0) return x;
      return std::max(0.0, x + y - 1.0);
  }
  return 0.0;
}

inline double tconorm_eval(TConormKind kind, double x, double y) {
  detail::require_unit(x, "t-conorm");
  detail::require_unit(y, "t-conorm");
  switch (kind) {
    case TConormKind::Max: return std::max(x, y);
    case TConormKind::Sum: return x + y;
  }
  return 0.0;
}

// CLI spellings.
inline const char* to_string(TNormKind kind) noexcept {
  switch (kind) {
    case TNormKind::Min: return "min";
    case TNormKind::AlgebraicProduct: return "product";
    case TNormKind::BoundedProduct: return "bounded";
  }
  return "?";
}

inline const char* to_string(TConormKind kind) noexcept {
  switch (kind) {
    case TConormKind::Max: return "max";
    case TConormKind::Sum: return "sum";
  }
  return "?";
}

namespace detail {
inline std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}
}  // namespace detail

inline TNormKind parse_tnorm(const std::string& name) {
  const auto s = detail::lower(name);
  for (auto k : kAllTNorms)
    if (s == to_string(k)) return k;
  throw Error(ErrorKind::InvalidConfig, "unknown t-norm '" + name + "' (expected min|product|bounded)");
}

inline TConormKind parse_tconorm(const std::string& name) {
  const auto s = detail::lower(name);
  for (auto k : kAllTConorms)
    if (s == to_string(k)) return k;
  throw Error(ErrorKind::InvalidConfig, "unknown t-conorm '" + name + "' (expected max|sum)");
}

}  // namespace evidfuse
