#ifndef SOBMUCK_CLASSIFY_HPP
#define SOBMUCK_CLASSIFY_HPP

#include <optional>
#include <string>
#include <vector>

#include "sobmuck/measure.hpp"

namespace sobmuck {

enum class RegClass { ClosedClosed, ClosedOpen, OpenClosed, OpenOpen };

inline bool regClosedLeft(RegClass r) {
  return r == RegClass::ClosedClosed || r == RegClass::ClosedOpen;
}
inline bool regClosedRight(RegClass r) {
  return r == RegClass::ClosedClosed || r == RegClass::OpenClosed;
}

struct NotRegOnWholeInterval : PreconditionError {
  explicit NotRegOnWholeInterval(const std::string& m) : PreconditionError(m) {}
};

// Interval of regular points, determined by endpoint integrability of
// w1^{-1/(p-1)}. Throws NotRegOnWholeInterval when the reciprocal fails to
// be locally integrable on interior compacts.
RegClass reg_interval(const Measure& mu1, double p);

struct RegData {
  std::vector<double> params;  // a0 < a1 < ... < am
  std::vector<int> J;          // 1-based piece indices with L^1_loc reciprocal
  std::vector<double> H;       // atom abscissas with two-sided non-integrability
  bool strongly = false;
  bool hullExtended = false;
  std::vector<double> monotoneParams;  // filled when piecewise monotone
  bool monotone = false;

  bool inJ(int j) const {
    for (int x : J)
      if (x == j) return true;
    return false;
  }
};

struct DecomposeOutcome {
  std::optional<RegData> data;
  std::string reason;  // set when not piecewise regular
};

// Piecewise-regular decomposition of mu1. `hullFallback` (when given)
// supplies the reference interval for measures whose support has a
// degenerate convex hull, e.g. purely atomic mu1.
DecomposeOutcome piecewise_decompose(const Measure& mu1, double p,
                                     const Measure* hullFallback = nullptr);

enum class MonotoneVerdict { Yes, No, Unknown };
struct MonotoneResult {
  MonotoneVerdict verdict = MonotoneVerdict::Unknown;
  std::vector<double> params;
};
MonotoneResult is_piecewise_monotone(const Measure& mu1);
MonotoneResult is_piecewise_monotone(const NumericMeasure& mu1);

struct ClassCResult {
  enum Verdict { LimitInfinity, LimsupFinite, NotInClass } verdict = NotInClass;
  std::optional<double> witnessBound;
};

// Class-c membership of the ordered pair (w1, w0) at a point, approached
// from the given side.
ClassCResult class_c(const WeightExpr& w1, const WeightExpr& w0, double x,
                     bool fromLeft);

}  // namespace sobmuck

#endif
