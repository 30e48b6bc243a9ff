#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

#include "silp/poly.hpp"

namespace silp {

/// One integer index axis: name ranges over lo..hi (hi absent means +inf).
struct Axis {
  std::string name;
  mpz_class lo;
  std::optional<mpz_class> hi;

  bool bounded() const { return hi.has_value(); }
  bool operator==(const Axis& o) const { return name == o.name && lo == o.lo && hi == o.hi; }
  /// "i in 5..inf"
  std::string to_string() const;
};

/// Product of integer axes. An empty axis list denotes a single point (one finite row).
struct IndexDomain {
  std::vector<Axis> axes;

  bool empty_product() const;
  bool finite() const;
  const Axis* find(const std::string& name) const;
  bool has(const std::string& name) const { return find(name) != nullptr; }
  std::vector<std::string> names() const;
  /// Number of grid points, or nullopt when infinite.
  std::optional<mpz_class> count() const;
  bool contains(const Binding& b) const;
  /// All axes at their lower bound.
  Binding lowest() const;
  /// Axes intersected with [lo, N] per axis; axes whose range becomes empty
  /// make the result empty (returns nullopt).
  std::optional<IndexDomain> truncated(const mpz_class& n) const;
  /// Restrict to the given axis names, keeping order.
  IndexDomain restricted(const std::vector<std::string>& keep) const;
  /// Remove one axis.
  IndexDomain without(const std::string& name) const;

  bool operator==(const IndexDomain& o) const { return axes == o.axes; }
  std::string to_string() const;

  /// Throws ValidationError on duplicate names or lo > hi.
  void validate() const;
};

/// Call f(binding) for every point of a finite domain, in lexicographic order.
/// Stops early when f returns false.
template <class F>
void for_each_point(const IndexDomain& dom, F&& f) {
  Binding b;
  for (const auto& a : dom.axes) b[a.name] = a.lo;
  if (dom.empty_product()) return;
  while (true) {
    if (!f(static_cast<const Binding&>(b))) return;
    std::size_t k = dom.axes.size();
    while (k > 0) {
      const Axis& a = dom.axes[k - 1];
      mpz_class& v = b[a.name];
      if (v < *a.hi) {
        ++v;
        break;
      }
      v = a.lo;
      --k;
    }
    if (k == 0) return;
  }
}

}  // namespace silp
