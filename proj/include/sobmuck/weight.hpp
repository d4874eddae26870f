#ifndef SOBMUCK_WEIGHT_HPP
#define SOBMUCK_WEIGHT_HPP

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sobmuck/interval.hpp"
#include "sobmuck/order.hpp"

namespace sobmuck {

struct SpecError : std::runtime_error {
  explicit SpecError(const std::string& m) : std::runtime_error(m) {}
};
struct PreconditionError : std::runtime_error {
  explicit PreconditionError(const std::string& m) : std::runtime_error(m) {}
};

enum class FactorKind { Power, LogPower, LogLogPower, ExpNeg, Envelope };

// One asymptotic factor of a weight, in terms of d = |x - center|:
//   Power        d^e
//   LogPower     |log(1/d)|^e
//   LogLogPower  |log|log(1/d)||^e
//   ExpNeg       exp(rate * d^-gamma)    (user-facing rate = -beta <= 0)
//   Envelope     unspecified v(x) with C^-1 <= v <= C; nominal value 1
struct Factor {
  FactorKind kind = FactorKind::Power;
  double center = 0.0;
  double e = 0.0;
  double rate = 0.0;
  double gamma = 1.0;
  double C = 1.0;

  static Factor power(double center, double alpha) {
    return {FactorKind::Power, center, alpha, 0, 1, 1};
  }
  static Factor logPower(double center, double delta) {
    return {FactorKind::LogPower, center, delta, 0, 1, 1};
  }
  static Factor logLogPower(double center, double eps) {
    return {FactorKind::LogLogPower, center, eps, 0, 1, 1};
  }
  static Factor expNeg(double center, double beta, double gamma) {
    return {FactorKind::ExpNeg, center, 0, -beta, gamma, 1};
  }
  static Factor envelope(double C) { return {FactorKind::Envelope, 0, 0, 0, 1, C}; }
};

inline bool samePoint(double x, double y) {
  // tight relative tolerance; a loose one would identify deep geometric-ladder
  // nodes with the singular center they approach
  return std::abs(x - y) <= 8e-15 * std::max(std::abs(x), std::abs(y));
}

// Order contribution of a factor at a point (only factors centered there
// contribute; everything else is locally comparable to a constant).
inline OrderTuple factorOrderAt(const Factor& f, double x) {
  OrderTuple t;
  if (!samePoint(f.center, x)) return t;
  switch (f.kind) {
    case FactorKind::Power: t.pw[0] = f.e; break;
    case FactorKind::LogPower: t.pw[1] = f.e; break;
    case FactorKind::LogLogPower: t.pw[2] = f.e; break;
    case FactorKind::ExpNeg:
      if (f.rate != 0.0) t.exps.push_back({f.gamma, f.rate});
      break;
    case FactorKind::Envelope: break;
  }
  return t;
}

inline double factorValue(const Factor& f, double x) {
  if (f.kind == FactorKind::Envelope) return 1.0;
  double d = std::abs(x - f.center);
  switch (f.kind) {
    case FactorKind::Power:
      if (d == 0.0) return f.e > 0 ? 0.0 : (f.e < 0 ? kInf : 1.0);
      return std::pow(d, f.e);
    case FactorKind::LogPower: {
      if (f.e == 0.0) return 1.0;
      if (d == 0.0) return f.e > 0 ? kInf : 0.0;
      double L = std::abs(std::log(1.0 / d));
      if (L == 0.0) return f.e > 0 ? 0.0 : kInf;
      return std::pow(L, f.e);
    }
    case FactorKind::LogLogPower: {
      if (f.e == 0.0) return 1.0;
      if (d == 0.0) return f.e > 0 ? kInf : 0.0;
      double L = std::abs(std::log(1.0 / d));
      double M = std::abs(std::log(L));
      if (M == 0.0) return f.e > 0 ? 0.0 : kInf;
      return std::pow(M, f.e);
    }
    case FactorKind::ExpNeg: {
      if (f.rate == 0.0) return 1.0;
      if (d == 0.0) return f.rate < 0 ? 0.0 : kInf;
      return std::exp(f.rate * std::pow(d, -f.gamma));
    }
    default: return 1.0;
  }
}

// Distance interval from the center over [u,v]; requires the center to be
// outside (u,v).
inline Interval distInterval(const Factor& f, double u, double v, int& sgn) {
  if (f.center <= u) {
    sgn = +1;
    return {u - f.center, v - f.center};
  }
  sgn = -1;
  return {f.center - v, f.center - u};
}

// Certified range of a factor over a cell [u,v] on one side of its center.
inline Interval factorRange(const Factor& f, double u, double v) {
  if (f.kind == FactorKind::Envelope) return {1.0 / f.C, f.C};
  int s;
  Interval d = distInterval(f, u, v, s);
  switch (f.kind) {
    case FactorKind::Power: return powPos(d, f.e);
    case FactorKind::LogPower: {
      if (f.e == 0.0) return {1.0, 1.0};
      Interval nl = {std::log(1.0 / d.hi), d.lo == 0 ? kInf : std::log(1.0 / d.lo)};
      Interval L = {std::min(std::abs(nl.lo), std::abs(nl.hi)),
                    std::max(std::abs(nl.lo), std::abs(nl.hi))};
      if (nl.containsZero()) L.lo = 0.0;
      return powPos(L, f.e);
    }
    case FactorKind::LogLogPower: {
      if (f.e == 0.0) return {1.0, 1.0};
      Interval nl = {std::log(1.0 / d.hi), d.lo == 0 ? kInf : std::log(1.0 / d.lo)};
      Interval L = {std::min(std::abs(nl.lo), std::abs(nl.hi)),
                    std::max(std::abs(nl.lo), std::abs(nl.hi))};
      if (nl.containsZero()) L.lo = 0.0;
      Interval lg = {L.lo == 0 ? -kInf : std::log(L.lo),
                     std::isinf(L.hi) ? kInf : std::log(L.hi)};
      Interval M = {std::min(std::abs(lg.lo), std::abs(lg.hi)),
                    std::max(std::abs(lg.lo), std::abs(lg.hi))};
      if (lg.containsZero()) M.lo = 0.0;
      return powPos(M, f.e);
    }
    case FactorKind::ExpNeg: {
      if (f.rate == 0.0) return {1.0, 1.0};
      return expI(f.rate * powPos(d, -f.gamma));
    }
    default: return {1.0, 1.0};
  }
}

// Contributions of one factor to the log-derivative machinery on a cell:
//   gp   interval of d/dx log f
//   gpp  interval of d^2/dx^2 log f
// Validation guarantees the iterated-log arguments keep a fixed sign on the
// piece, which the sigma flags capture.
inline void factorLogDeriv(const Factor& f, double u, double v, Interval& gp,
                           Interval& gpp) {
  gp = {0, 0};
  gpp = {0, 0};
  if (f.kind == FactorKind::Envelope) return;
  int s;
  Interval d = distInterval(f, u, v, s);
  switch (f.kind) {
    case FactorKind::Power: {
      gp = Interval(f.e * s) / d;
      gpp = Interval(-f.e) / sqr(d);
      return;
    }
    case FactorKind::LogPower: {
      if (f.e == 0.0) return;
      Interval nl = {std::log(1.0 / d.hi), d.lo == 0 ? kInf : std::log(1.0 / d.lo)};
      double sigL = nl.lo >= 0 ? -1.0 : 1.0;  // d|log(1/d)|/dx = sigL * s / d
      Interval L = sigL < 0 ? nl : -nl;
      gp = Interval(f.e * sigL * s) / (d * L);
      gpp = Interval(-f.e * sigL) * (L + Interval(sigL)) / (sqr(d) * sqr(L));
      return;
    }
    case FactorKind::LogLogPower: {
      if (f.e == 0.0) return;
      Interval nl = {std::log(1.0 / d.hi), d.lo == 0 ? kInf : std::log(1.0 / d.lo)};
      double sigL = nl.lo >= 0 ? -1.0 : 1.0;
      Interval L = sigL < 0 ? nl : -nl;
      Interval lg = logI(L);
      double sigM = lg.lo >= 0 ? 1.0 : -1.0;  // dM/dx = sigM*sigL*s/(d L)
      Interval M = sigM > 0 ? lg : -lg;
      gp = Interval(f.e * sigM * sigL * s) / (d * L * M);
      gpp = Interval(-f.e * sigM * sigL) *
            (L * M + Interval(sigL) * M + Interval(sigM * sigL)) /
            (sqr(d) * sqr(L) * sqr(M));
      return;
    }
    case FactorKind::ExpNeg: {
      if (f.rate == 0.0) return;
      gp = Interval(-f.gamma * f.rate * s) * powPos(d, -f.gamma - 1.0);
      gpp = Interval(f.gamma * (f.gamma + 1.0) * f.rate) * powPos(d, -f.gamma - 2.0);
      return;
    }
    default: return;
  }
}

// One tiled piece of a weight: coeff * prod(factors) on [lo, hi], or w == 0.
struct Piece {
  double lo = 0.0, hi = 0.0;
  bool zero = false;
  double coeff = 1.0;
  std::vector<Factor> factors;
};

inline Interval pieceEnvelope(const Piece& p) {
  Interval e{1.0, 1.0};
  for (const auto& f : p.factors)
    if (f.kind == FactorKind::Envelope) e = e * Interval(1.0 / f.C, f.C);
  return e;
}

inline double pieceValue(const Piece& p, double x) {
  if (p.zero) return 0.0;
  double v = p.coeff;
  for (const auto& f : p.factors) {
    double fv = factorValue(f, x);
    if (fv == 0.0) return 0.0;
    v *= fv;
  }
  return v;
}

inline Interval pieceRange(const Piece& p, double u, double v) {
  if (p.zero) return {0.0, 0.0};
  Interval r{p.coeff, p.coeff};
  for (const auto& f : p.factors) r = r * factorRange(f, u, v);
  return r;
}

inline OrderTuple pieceOrderAt(const Piece& p, double x) {
  if (p.zero) return OrderTuple::zeroWeight();
  OrderTuple t;
  for (const auto& f : p.factors) t = orderProduct(t, factorOrderAt(f, x));
  return t;
}

// Piece raised to a real power (used for w^-1/(p-1) etc.). Zero pieces must
// be handled by the caller before raising to negative powers.
inline Piece piecePow(const Piece& p, double s) {
  Piece q = p;
  q.coeff = std::pow(p.coeff, s);
  for (auto& f : q.factors) {
    switch (f.kind) {
      case FactorKind::Power:
      case FactorKind::LogPower:
      case FactorKind::LogLogPower: f.e *= s; break;
      case FactorKind::ExpNeg: f.rate *= s; break;
      case FactorKind::Envelope: f.C = std::pow(f.C, std::abs(s)); break;
    }
  }
  return q;
}

// Intervals of d log w / dx and d^2 log w / dx^2 over a cell.
inline void pieceLogDeriv(const Piece& p, double u, double v, Interval& gp,
                          Interval& gpp) {
  gp = {0, 0};
  gpp = {0, 0};
  for (const auto& f : p.factors) {
    Interval a, b;
    factorLogDeriv(f, u, v, a, b);
    gp = gp + a;
    gpp = gpp + b;
  }
}

// A weight on [a,b]: pieces tiling the support.
struct WeightExpr {
  double a = 0.0, b = 1.0;
  std::vector<Piece> pieces;

  static WeightExpr constant(double a, double b, double c = 1.0) {
    WeightExpr w;
    w.a = a;
    w.b = b;
    Piece p;
    p.lo = a;
    p.hi = b;
    p.coeff = c;
    w.pieces.push_back(p);
    return w;
  }
  static WeightExpr zero(double a, double b) {
    WeightExpr w;
    w.a = a;
    w.b = b;
    Piece p;
    p.lo = a;
    p.hi = b;
    p.zero = true;
    w.pieces.push_back(p);
    return w;
  }
  static WeightExpr single(double a, double b, std::vector<Factor> fs,
                           double coeff = 1.0) {
    WeightExpr w;
    w.a = a;
    w.b = b;
    Piece p;
    p.lo = a;
    p.hi = b;
    p.coeff = coeff;
    p.factors = std::move(fs);
    w.pieces.push_back(p);
    return w;
  }

  int pieceIndexAt(double x) const {
    for (size_t i = 0; i < pieces.size(); ++i)
      if (x < pieces[i].hi || (i + 1 == pieces.size() && x <= pieces[i].hi))
        return static_cast<int>(i);
    return static_cast<int>(pieces.size()) - 1;
  }

  double at(double x) const {
    if (x < a || x > b) throw PreconditionError("point outside support");
    return pieceValue(pieces[pieceIndexAt(x)], x);
  }

  // Order approaching `x` from inside the support on the given side.
  // Outside the support the weight is treated as identically zero.
  OrderTuple orderAt(double x, bool fromLeft) const {
    if (fromLeft ? samePoint(x, a) || x < a : samePoint(x, b) || x > b)
      return OrderTuple::zeroWeight();
    double probe = fromLeft ? x - 1e-13 * (1 + std::abs(x))
                            : x + 1e-13 * (1 + std::abs(x));
    const Piece& p = pieces[pieceIndexAt(std::clamp(probe, a, b))];
    return pieceOrderAt(p, x);
  }
};

void validate(const WeightExpr& w);

}  // namespace sobmuck

#endif
