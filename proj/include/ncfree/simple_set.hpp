#pragma once

// Simple sets: finite unions of equal-radius open discs around nonzero
// centers, with the separation / isolation / subordination geometry that
// the square-root branches are built on.

#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "ncfree/errors.hpp"
#include "ncfree/linalg.hpp"

namespace ncfree {

/// Relative shrink applied to every disc in spectral containment tests.
inline constexpr double kContainmentMargin = 1e-8;

struct SimpleSet {
  std::vector<cd> centers;
  double radius = 0.0;

  /// Minimal distance between distinct centers; +inf for a single center.
  double separation() const {
    double s = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < centers.size(); ++i)
      for (std::size_t j = i + 1; j < centers.size(); ++j)
        s = std::min(s, std::abs(centers[i] - centers[j]));
    return s;
  }

  /// r < t * separation.
  bool is_t_isolated(double t) const { return radius < t * separation(); }

  double min_center_modulus() const {
    double m = std::numeric_limits<double>::infinity();
    for (cd c : centers) m = std::min(m, std::abs(c));
    return m;
  }

  bool excludes_zero() const { return radius < min_center_modulus(); }

  /// Index of the disc containing z (shrunk by the containment margin).
  std::optional<std::size_t> disc_of(cd z) const {
    const double r = radius * (1.0 - kContainmentMargin);
    for (std::size_t i = 0; i < centers.size(); ++i)
      if (std::abs(z - centers[i]) < r) return i;
    return std::nullopt;
  }

  bool contains(cd z) const { return disc_of(z).has_value(); }
};

/// Each disc of `lower` meets at most one disc of `upper`.
inline bool is_subordinate(const SimpleSet& lower, const SimpleSet& upper) {
  for (cd a : lower.centers) {
    int hits = 0;
    for (cd b : upper.centers)
      if (std::abs(a - b) < lower.radius + upper.radius) ++hits;
    if (hits > 1) return false;
  }
  return true;
}

/// r = min(min|c|, separation / 4) / 2: keeps 0 outside every disc and the
/// set quarter-isolated.
inline double default_radius(const std::vector<cd>& centers) {
  if (centers.empty()) throw PreconditionError("default_radius needs at least one center");
  SimpleSet s{centers, 0.0};
  const double m = s.min_center_modulus();
  if (m == 0.0) throw PreconditionError("0 cannot be a center");
  return 0.5 * std::min(m, 0.25 * s.separation());
}

inline SimpleSet make_simple_set(std::vector<cd> centers) {
  const double r = default_radius(centers);
  return SimpleSet{std::move(centers), r};
}

}  // namespace ncfree
