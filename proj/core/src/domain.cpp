#include "silp/domain.hpp"

#include <set>

#include "silp/errors.hpp"

namespace silp {

std::string Axis::to_string() const {
  return name + " in " + lo.get_str() + ".." + (hi ? hi->get_str() : std::string("inf"));
}

bool IndexDomain::empty_product() const {
  for (const auto& a : axes)
    if (a.hi && *a.hi < a.lo) return true;
  return false;
}

bool IndexDomain::finite() const {
  for (const auto& a : axes)
    if (!a.hi) return false;
  return true;
}

const Axis* IndexDomain::find(const std::string& name) const {
  for (const auto& a : axes)
    if (a.name == name) return &a;
  return nullptr;
}

std::vector<std::string> IndexDomain::names() const {
  std::vector<std::string> out;
  for (const auto& a : axes) out.push_back(a.name);
  return out;
}

std::optional<mpz_class> IndexDomain::count() const {
  mpz_class n = 1;
  for (const auto& a : axes) {
    if (!a.hi) return std::nullopt;
    if (*a.hi < a.lo) return mpz_class(0);
    n *= *a.hi - a.lo + 1;
  }
  return n;
}

bool IndexDomain::contains(const Binding& b) const {
  for (const auto& a : axes) {
    auto it = b.find(a.name);
    if (it == b.end()) return false;
    if (it->second < a.lo || (a.hi && it->second > *a.hi)) return false;
  }
  return true;
}

Binding IndexDomain::lowest() const {
  Binding b;
  for (const auto& a : axes) b[a.name] = a.lo;
  return b;
}

std::optional<IndexDomain> IndexDomain::truncated(const mpz_class& n) const {
  IndexDomain out;
  for (const auto& a : axes) {
    Axis t = a;
    t.hi = a.hi ? (*a.hi < n ? *a.hi : n) : n;
    if (*t.hi < t.lo) return std::nullopt;
    out.axes.push_back(t);
  }
  return out;
}

IndexDomain IndexDomain::restricted(const std::vector<std::string>& keep) const {
  std::set<std::string> k(keep.begin(), keep.end());
  IndexDomain out;
  for (const auto& a : axes)
    if (k.count(a.name)) out.axes.push_back(a);
  return out;
}

IndexDomain IndexDomain::without(const std::string& name) const {
  IndexDomain out;
  for (const auto& a : axes)
    if (a.name != name) out.axes.push_back(a);
  return out;
}

std::string IndexDomain::to_string() const {
  std::string s;
  for (const auto& a : axes) {
    if (!s.empty()) s += " x ";
    s += a.to_string();
  }
  return s;
}

void IndexDomain::validate() const {
  std::set<std::string> seen;
  for (const auto& a : axes) {
    if (!seen.insert(a.name).second)
      throw ValidationError("DuplicateAxis", "axis '" + a.name + "' appears twice");
    if (a.hi && *a.hi < a.lo)
      throw ValidationError("EmptyAxis", "axis '" + a.name + "' has lower bound above upper bound");
  }
}

}  // namespace silp
