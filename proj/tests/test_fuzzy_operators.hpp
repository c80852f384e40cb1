#pragma once

// Axiom checks shared by the unit suite and the acceptance binary.

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "evidfuse/fuzzy_operators.hpp"

namespace axioms {

struct Violation {
  std::string law;
  double x, y, z;
};

/// Checks associativity, commutativity, monotonicity and the boundary
/// conditions T(0,0)=0, T(x,1)=x on the grid {0, 1/(n-1), ..., 1}^3 and on
/// `random_triples` uniform samples. Returns the violations found (empty = pass).
inline std::vector<Violation> check_tnorm(evidfuse::TNormKind kind, int grid_points, int random_triples,
                                          double tol, unsigned seed = 7) {
  using evidfuse::tnorm_eval;
  std::vector<Violation> out;
  auto t = [&](double a, double b) { return tnorm_eval(kind, a, b); };
  auto check = [&](double x, double y, double z) {
    if (std::abs(t(t(x, y), z) - t(x, t(y, z))) > tol) out.push_back({"associativity", x, y, z});
    if (std::abs(t(x, y) - t(y, x)) > tol) out.push_back({"commutativity", x, y, z});
    // Monotonicity: (x <= a) & (y <= b) => T(x, y) <= T(a, b), with a = max(x,z), b = max(y,z).
    const double a = std::max(x, z), b = std::max(y, z);
    if (t(x, y) > t(a, b) + tol) out.push_back({"monotonicity", x, y, z});
    if (std::abs(t(x, 1.0) - x) > tol) out.push_back({"boundary T(x,1)=x", x, y, z});
  };
  if (t(0.0, 0.0) != 0.0) out.push_back({"boundary T(0,0)=0", 0, 0, 0});
  const double step = 1.0 / (grid_points - 1);
  for (int i = 0; i < grid_points; ++i)
    for (int j = 0; j < grid_points; ++j)
      for (int k = 0; k < grid_points; ++k) check(i * step, j * step, k * step);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int n = 0; n < random_triples; ++n) {
    const double x = unit(rng), y = unit(rng), z = unit(rng);
    check(x, y, z);
  }
  return out;
}

}  // namespace axioms
