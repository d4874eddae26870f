#ifndef SOBMUCK_ENCLOSURE_HPP
#define SOBMUCK_ENCLOSURE_HPP

#include <optional>
#include <string>

#include "sobmuck/interval.hpp"
#include "sobmuck/order.hpp"

namespace sobmuck {

// Symbolic certificate of a divergent integral: the order of the integrand
// at the offending point.
struct DivergenceCert {
  double at = 0.0;
  bool fromLeft = false;  // side from which the point is approached
  OrderTuple order;
  std::string note;
};

// Certified bracket of a nonnegative extended-real quantity.
struct Enclosure {
  double lo = 0.0;
  double hi = 0.0;
  std::optional<DivergenceCert> diverged;

  Enclosure() = default;
  Enclosure(double l, double h) : lo(l), hi(h) {}
  static Enclosure exact(double v) { return {v, v}; }
  static Enclosure divergent(DivergenceCert c) {
    Enclosure e;
    e.hi = kInf;
    e.diverged = std::move(c);
    return e;
  }

  bool finite() const { return !std::isinf(hi); }
  double width() const { return hi - lo; }
  double mid() const { return finite() ? 0.5 * (lo + hi) : lo; }
  Interval asInterval() const { return {lo, hi}; }

  Enclosure& operator+=(const Enclosure& o) {
    lo += o.lo;
    hi += o.hi;
    if (!diverged && o.diverged) diverged = o.diverged;
    return *this;
  }
};

inline Enclosure operator+(Enclosure a, const Enclosure& b) { return a += b; }

inline Enclosure scaled(const Enclosure& e, double s) {
  Enclosure r(s * e.lo, s == 0.0 ? 0.0 : s * e.hi);
  if (s != 0.0) r.diverged = e.diverged;
  return r;
}

}  // namespace sobmuck

#endif
