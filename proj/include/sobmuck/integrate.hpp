#ifndef SOBMUCK_INTEGRATE_HPP
#define SOBMUCK_INTEGRATE_HPP

#include <functional>
#include <optional>
#include <vector>

#include "sobmuck/enclosure.hpp"
#include "sobmuck/measure.hpp"
#include "sobmuck/weight.hpp"

namespace sobmuck {

// Smooth multiplier (a polynomial in practice) with certified local bounds.
struct SmoothFn {
  std::function<double(double)> eval;
  std::function<Interval(double, double)> valueI;
  std::function<Interval(double, double)> d1I;
  std::function<Interval(double, double)> d2I;
};

struct PieceIntegral {
  Interval bracket{0.0, 0.0};
  double estimate = 0.0;
  std::optional<DivergenceCert> div;
};

struct QuadBudget {
  int maxCells = 120000;
  double hardTailDepth = 360;  // geometric ladder levels of ratio 1/2
};

// Certified integral of pc (a factor-product piece, possibly with scaled
// exponents) times an optional smooth multiplier over [c,d] inside the piece.
// Divergent integrals are detected symbolically and certified.
PieceIntegral integratePiece(const Piece& pc, double c, double d, double tol,
                             const SmoothFn* h = nullptr, QuadBudget budget = {});

// Adaptive bracket integration of a density given only by certified ranges,
// with symbolic dominating pieces guarding singular points.
PieceIntegral integrateRanged(const std::function<Interval(double, double)>& range,
                              const std::function<double(double)>& eval, double c,
                              double d, const std::vector<RangeGuard>& guards,
                              double tol, QuadBudget budget = {});

// Integrability of w^-q approaching x from the given side (symbolic).
Tri integrability(const WeightExpr& w, double x, bool fromLeft, double q);

// Cumulative antiderivative grid of W(r) = int_a^r w(t)^{-1/(p-1)} dt.
struct CumGrid {
  std::vector<double> nodes;
  std::vector<Enclosure> W;  // per node, cumulative from the left end
  std::optional<DivergenceCert> diverged;
  int firstInfinite = -1;  // node index from which W = +inf, -1 if none

  bool infiniteAt(int i) const { return firstInfinite >= 0 && i >= firstInfinite; }
};

CumGrid cum_antiderivative(const WeightExpr& w, double p, int N,
                           double tol = 1e-8);

// Cumulative grid of the integral of w^s between lo and hi (building block
// of cum_antiderivative with s = -1/(p-1), also used for niff witnesses).
CumGrid cum_power_grid(const WeightExpr& w, double s, double lo, double hi, int N,
                       double tol = 1e-8,
                       const std::vector<double>& extraNodes = {});

// Uniform c * d^e upper bounds of integrals of the centered model of a piece
// near x0, valid for every distance d <= validBelow. Power-log shapes only;
// exponential shapes give nullopt.
struct PowerBound {
  double c = 0.0;
  double e = 0.0;
  double validBelow = 0.0;
};

// int over distance (0, d) of the piece value <= c d^e (integrable shapes)
std::optional<PowerBound> shapeTailPowerBound(const Piece& pc, double x0,
                                              bool rightSide, double eta, double dv);
// int over distance (d, d0) of the piece value <= c d^e (divergent shapes)
std::optional<PowerBound> shapeGrowthPowerBound(const Piece& pc, double x0,
                                                bool rightSide, double eta,
                                                double dv);

// Node layout: boundaries, atoms and a geometric ladder (ratio 1/2) toward
// every singular point, uniform fill elsewhere; about N nodes in total.
std::vector<double> buildNodes(double a, double b,
                               const std::vector<double>& mustInclude,
                               const std::vector<double>& singular, int N);

// Certified sup of the density of w over [u,v] (kInf near divergent centers).
double densitySupUpper(const WeightExpr& w, double u, double v);

}  // namespace sobmuck

#endif
