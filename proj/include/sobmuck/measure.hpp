#ifndef SOBMUCK_MEASURE_HPP
#define SOBMUCK_MEASURE_HPP

#include <functional>
#include <optional>
#include <vector>

#include "sobmuck/enclosure.hpp"
#include "sobmuck/weight.hpp"

namespace sobmuck {

struct Atom {
  double x = 0.0;
  double mass = 0.0;
};

// Finite Borel measure on a compact interval: absolutely continuous part
// given by a symbolic weight, singular part a finite list of atoms.
struct Measure {
  WeightExpr w;
  std::vector<Atom> atoms;

  double a() const { return w.a; }
  double b() const { return w.b; }

  double atomMassAt(double x) const {
    for (const auto& at : atoms)
      if (samePoint(at.x, x)) return at.mass;
    return 0.0;
  }
  bool identicallyZero() const {
    if (!atoms.empty()) return false;
    for (const auto& p : w.pieces)
      if (!p.zero) return false;
    return true;
  }
};

void validate(const Measure& m);

inline Measure lebesgue(double a, double b) {
  return Measure{WeightExpr::constant(a, b), {}};
}
inline Measure zeroMeasure(double a, double b) {
  return Measure{WeightExpr::zero(a, b), {}};
}

Measure restrict(const Measure& m, double lo, double hi, bool closedLeft,
                 bool closedRight);
Measure reflect(const Measure& m);
Measure scaleMass(const Measure& m, double c);

// Side behavior tag of a derived (numeric) density near a breakpoint.
//   Zero   density identically zero on a neighborhood (certified)
//   Exact  density asymptotically of this order
//   Upper  density bounded above by this order only
struct SideTag {
  enum Kind { Zero, Exact, Upper } kind = Exact;
  OrderTuple order;
};

// A symbolic piece dominating a derived density near a singular point,
// used to bracket otherwise unbounded range cells.
struct RangeGuard {
  double x = 0.0;
  bool fromLeft = false;
  Piece dominator;  // density <= this piece's value near x
};

// Density obtained from pointwise operations on symbolic weights (the
// positive part). Carries enough structure for certified integration and
// symbolic finiteness screens but is not itself symbolic.
struct NumericDensity {
  double a = 0.0, b = 1.0;
  std::vector<double> breaks;  // includes a and b
  std::function<double(double)> eval;
  std::function<Interval(double, double)> range;  // certified over cells
  std::vector<SideTag> tagLeft;   // per interval i: behavior near breaks[i]+
  std::vector<SideTag> tagRight;  // per interval i: behavior near breaks[i+1]-
  std::vector<RangeGuard> guards;
  // exact-zero test of the density on (u,v)
  std::function<Tri(double, double)> zeroOn;
};

struct NumericMeasure {
  NumericDensity d;
  std::vector<Atom> atoms;
  double a() const { return d.a; }
  double b() const { return d.b; }
};

NumericMeasure positive_part(const Measure& nu1, double k, const Measure& nu2);
NumericMeasure asNumeric(const Measure& m);

double density_at(const Measure& m, double x);
double density_at(const NumericMeasure& m, double x);

Enclosure measure_of(const Measure& m, double c, double d, bool closedLeft,
                     bool closedRight, double tol);
Enclosure measure_of(const NumericMeasure& m, double c, double d, bool closedLeft,
                     bool closedRight, double tol);

Enclosure total_mass(const Measure& m, double tol = 1e-8);
Enclosure total_mass(const NumericMeasure& m, double tol = 1e-8);
bool is_finite(const Measure& m);
bool is_finite(const NumericMeasure& m);

}  // namespace sobmuck

#endif
