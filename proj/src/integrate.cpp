#include "sobmuck/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>

namespace sobmuck {

namespace {

// Gauss-Legendre 8-point rule on [-1,1]
const double kGLx[8] = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                        -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                        0.7966664774136267,  0.9602898564975363};
const double kGLw[8] = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                        0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                        0.2223810344533745, 0.1012285362903763};

struct CenteredShape {
  double alpha = 0, del = 0, eps = 0;  // d^alpha L^del M^eps
  double rate = 0, gamma = 1;          // exp(rate d^-gamma), rate <= 0 here
  bool pure_power() const { return del == 0 && eps == 0 && rate == 0; }
  bool has_logs() const { return del != 0 || eps != 0; }
};

CenteredShape shapeAt(const Piece& pc, double x0) {
  CenteredShape s;
  for (const auto& f : pc.factors) {
    if (!samePoint(f.center, x0)) continue;
    switch (f.kind) {
      case FactorKind::Power: s.alpha += f.e; break;
      case FactorKind::LogPower: s.del += f.e; break;
      case FactorKind::LogLogPower: s.eps += f.e; break;
      case FactorKind::ExpNeg:
        s.rate += f.rate;  // single gamma per center in practice; merge crudely
        s.gamma = std::max(s.gamma, f.gamma);
        break;
      default: break;
    }
  }
  return s;
}

// sup over L >= LK of L^q e^{-eta L}
double powLogSup(double q, double eta, double LK) {
  auto g = [&](double L) { return std::exp(q * std::log(L) - eta * L); };
  double best = g(LK);
  if (q > 0 && q / eta > LK) best = std::max(best, g(q / eta));
  return best;
}

// Upper bound of int_0^dK d^alpha L^del M^eps exp(rate d^-gamma) dd for an
// integrable shape; nullopt means dK is still too large for the bound.
std::optional<double> tailUpperBound(const CenteredShape& s, double dK) {
  if (s.has_logs() && dK > 0.13) return std::nullopt;
  double LK = std::log(1.0 / dK);
  // fold M^eps into the L-power (log L <= L) or a constant
  double qhat = s.del;
  double Cm = 1.0;
  if (s.eps > 0)
    qhat += s.eps;
  else if (s.eps < 0)
    Cm = std::pow(std::log(LK), s.eps);

  if (s.rate < 0) {
    double eta = 0.5;
    double C1 = s.has_logs() ? powLogSup(qhat, eta, LK) : 1.0;
    double m = s.has_logs() ? s.alpha - eta : s.alpha;
    double g = s.gamma, r = -s.rate;
    double theta = std::abs(m + g + 1.0) * std::pow(dK, g) / (g * r);
    if (theta > 0.5) return std::nullopt;
    double B = std::pow(dK, m + g + 1.0) * std::exp(s.rate * std::pow(dK, -g)) / (g * r);
    return 2.0 * Cm * C1 * B;
  }
  if (s.alpha > -1.0) {
    if (s.pure_power()) return std::pow(dK, s.alpha + 1.0) / (s.alpha + 1.0);
    double eta = (s.alpha + 1.0) / 4.0;
    double C1 = powLogSup(qhat, eta, LK);
    double ex = s.alpha - eta + 1.0;
    return Cm * C1 * std::pow(dK, ex) / ex;
  }
  // alpha == -1 boundary chain (integrability already established)
  if (s.alpha == -1.0) {
    if (s.del < -1.0) {
      if (s.eps <= 0)
        return std::pow(std::log(LK), s.eps) * std::pow(LK, s.del + 1.0) / (-s.del - 1.0);
      double hh = (-s.del - 1.0) / (2.0 * s.eps);
      double exo = (s.del + 1.0) / 2.0;
      return std::pow(std::exp(1.0) * hh, -s.eps) * std::pow(LK, exo) / (-exo);
    }
    if (s.del == -1.0 && s.eps < -1.0) {
      double MK = std::log(LK);
      return std::pow(MK, s.eps + 1.0) / (-s.eps - 1.0);
    }
  }
  return std::nullopt;
}

double exactPowerTail(const CenteredShape& s, double dK) {
  return std::pow(dK, s.alpha + 1.0) / (s.alpha + 1.0);
}

// Interval of d * dlog(fc)/dd over (0, dK] for the factors centered at x0,
// plus the bounded contribution of the remaining factors.
Interval phiOnTail(const Piece& pc, double x0, bool rightSide, double dK) {
  Interval phi{0, 0};
  double LK = std::log(1.0 / dK);
  Piece others;
  others.lo = rightSide ? x0 : x0 - dK;
  others.hi = rightSide ? x0 + dK : x0;
  for (const auto& f : pc.factors) {
    if (samePoint(f.center, x0)) {
      switch (f.kind) {
        case FactorKind::Power: phi = phi + Interval(f.e); break;
        case FactorKind::LogPower: {
          if (f.e == 0) break;
          if (dK >= 1.0) return {-kInf, kInf};
          Interval t = Interval(-f.e) / Interval(LK, kInf);
          phi = phi + t.hull(Interval(0.0));
          break;
        }
        case FactorKind::LogLogPower: {
          if (f.e == 0) break;
          if (dK >= 0.3) return {-kInf, kInf};
          Interval t = Interval(-f.e) / (Interval(LK, kInf) * Interval(std::log(LK), kInf));
          phi = phi + t.hull(Interval(0.0));
          break;
        }
        case FactorKind::ExpNeg: {
          if (f.rate == 0) break;
          // -gamma*rate*d^-gamma, rate<0 -> positive and >= value at dK
          phi = phi + Interval(-f.gamma * f.rate * std::pow(dK, -f.gamma), kInf);
          break;
        }
        default: break;
      }
    } else {
      others.factors.push_back(f);
    }
  }
  if (!others.factors.empty()) {
    Interval gp, gpp;
    pieceLogDeriv(others, others.lo, others.hi, gp, gpp);
    double s = rightSide ? 1.0 : -1.0;
    phi = phi + Interval(0.0, dK) * (Interval(s) * gp);
  }
  return phi;
}

struct Cell {
  enum Type { Regular, Tail } type = Regular;
  double u = 0, v = 0;      // regular: interval; tail: the tail interval too
  double center = 0;        // tail anchor
  bool rightSide = true;    // tail extends to the right of center
  Interval contrib{0, 0};
  double est = 0;
};

struct WidthCmp {
  bool operator()(const Cell& a, const Cell& b) const {
    return a.contrib.width() < b.contrib.width();
  }
};

double evalCF(const Piece& core, const SmoothFn* h, double x) {
  double w = pieceValue(core, x);
  return h ? w * h->eval(x) : w;
}

Cell makeRegular(const Piece& core, const SmoothFn* h, double u, double v) {
  Cell c;
  c.type = Cell::Regular;
  c.u = u;
  c.v = v;
  double len = v - u;
  Interval wI = pieceRange(core, u, v);
  Interval FI = wI;
  Interval hI{1, 1};
  if (h) {
    hI = h->valueI(u, v);
    FI = wI * hI;
  }
  Interval base = Interval(len) * FI;
  Interval gp, gpp;
  pieceLogDeriv(core, u, v, gp, gpp);
  Interval chi = gpp + sqr(gp);
  Interval Fpp = h ? (h->d2I(u, v) * wI + Interval(2.0) * (h->d1I(u, v) * (wI * gp)) +
                      hI * (wI * chi))
                   : wI * chi;
  double fu = evalCF(core, h, u), fv = evalCF(core, h, v);
  double fm = evalCF(core, h, 0.5 * (u + v));
  Interval pair;
  bool havePair = false;
  if (std::isfinite(fu) && std::isfinite(fv)) {
    if (Fpp.lo >= 0) {
      pair = {len * fm, len * 0.5 * (fu + fv)};
      havePair = true;
    } else if (Fpp.hi <= 0) {
      pair = {len * 0.5 * (fu + fv), len * fm};
      havePair = true;
    }
  }
  if (havePair) {
    Interval inter = intersectI(pair, base);
    c.contrib = (inter.lo <= inter.hi) ? inter : base;
  } else {
    c.contrib = base;
  }
  double est = 0;
  for (int i = 0; i < 8; ++i) {
    double x = 0.5 * (u + v) + 0.5 * len * kGLx[i];
    est += kGLw[i] * evalCF(core, h, x);
  }
  c.est = est * 0.5 * len;
  if (!std::isfinite(c.est)) c.est = c.contrib.mid();
  return c;
}

Cell makeTail(const Piece& core, const SmoothFn* h, double center, bool rightSide,
              double dK) {
  Cell c;
  c.type = Cell::Tail;
  c.center = center;
  c.rightSide = rightSide;
  c.u = rightSide ? center : center - dK;
  c.v = rightSide ? center + dK : center;

  CenteredShape s = shapeAt(core, center);
  Piece others = core;
  std::erase_if(others.factors,
                [&](const Factor& f) { return samePoint(f.center, center); });
  Interval oI = pieceRange(others, c.u, c.v);  // includes coeff
  Interval hI = h ? h->valueI(c.u, c.v) : Interval{1, 1};

  Interval T{0, kInf};
  Interval phi = phiOnTail(core, center, rightSide, dK);
  double fEdge = 1.0;  // centered part at distance dK
  {
    double x = rightSide ? center + dK : center - dK;
    for (const auto& f : core.factors)
      if (samePoint(f.center, center)) fEdge *= factorValue(f, x);
  }
  if (s.pure_power() && s.alpha > -1.0) {
    double ex = exactPowerTail(s, dK);
    T = {ex, ex};
  } else if (phi.lo > 0) {
    // centered part increasing in d on (0,dK]
    T = {0.0, dK * fEdge};
  } else if (phi.hi < 0) {
    auto up = tailUpperBound(s, dK);
    if (up) T = {dK * fEdge, *up};
  }
  c.contrib = T * oI * hI;
  if (c.contrib.lo > c.contrib.hi) c.contrib = {0, kInf};
  c.est = std::isfinite(c.contrib.hi) ? c.contrib.mid() : c.contrib.lo;
  return c;
}

}  // namespace

PieceIntegral integratePiece(const Piece& pcIn, double c, double d, double tol,
                             const SmoothFn* h, QuadBudget budget) {
  PieceIntegral out;
  if (pcIn.zero || d <= c) return out;

  Piece core = pcIn;
  Interval env = pieceEnvelope(pcIn);
  std::erase_if(core.factors,
                [](const Factor& f) { return f.kind == FactorKind::Envelope; });

  OrderTuple oL = pieceOrderAt(core, c), oR = pieceOrderAt(core, d);
  if (orderIntegrable(oL) == Tri::No) {
    out.div = DivergenceCert{c, false, oL, "non-integrable at left endpoint"};
    out.bracket = {0, kInf};
    return out;
  }
  if (orderIntegrable(oR) == Tri::No) {
    out.div = DivergenceCert{d, true, oR, "non-integrable at right endpoint"};
    out.bracket = {0, kInf};
    return out;
  }

  auto needsTail = [&](const OrderTuple& o, double x0) {
    if (o.isTrivial()) return false;
    if (orderLimitSign(o) > 0) return true;
    // vanishing limit but some centered factor individually unbounded
    // (e.g. exp decay against a negative power): per-factor cell ranges
    // stay infinite, so the joint tail handling is needed
    for (const auto& f : core.factors) {
      if (!samePoint(f.center, x0)) continue;
      if (f.kind == FactorKind::Power && f.e < 0) return true;
      if ((f.kind == FactorKind::LogPower || f.kind == FactorKind::LogLogPower) &&
          f.e > 0)
        return true;
    }
    return false;
  };
  bool tailL = needsTail(oL, c), tailR = needsTail(oR, d);

  std::priority_queue<Cell, std::vector<Cell>, WidthCmp> q;
  double span = d - c;
  double dL = tailL ? span * 0.25 : 0.0;
  double dR = tailR ? span * 0.25 : 0.0;
  if (tailL) q.push(makeTail(core, h, c, true, dL));
  if (tailR) q.push(makeTail(core, h, d, false, dR));
  if (c + dL < d - dR) q.push(makeRegular(core, h, c + dL, d - dR));

  double sumLo = 0, sumHi = 0, sumEst = 0;
  {
    std::vector<Cell> tmp;
    while (!q.empty()) {
      tmp.push_back(q.top());
      q.pop();
    }
    for (auto& cc : tmp) {
      sumLo += cc.contrib.lo;
      sumHi += cc.contrib.hi;
      sumEst += cc.est;
      q.push(cc);
    }
  }

  int cells = static_cast<int>(q.size());
  double frzLo = 0, frzHi = 0, frzEst = 0;  // cells at the refinement floor
  while (cells < budget.maxCells && !q.empty()) {
    double totHi = sumHi + frzHi, totLo = sumLo + frzLo;
    if (std::isfinite(totHi) && totHi - totLo <= tol * (1.0 + std::abs(totHi))) break;
    Cell top = q.top();
    if (top.contrib.width() <= 0) break;
    q.pop();
    sumLo -= top.contrib.lo;
    sumHi -= top.contrib.hi;
    sumEst -= top.est;
    bool refinable;
    if (top.type == Cell::Tail) {
      double dK = top.v - top.u;
      // a halved tail must stay representable next to its center
      refinable = dK > std::max(1e-300, 3e-14 * std::abs(top.center));
      if (refinable) {
        double mid = top.rightSide ? top.center + 0.5 * dK : top.center - 0.5 * dK;
        Cell reg = top.rightSide ? makeRegular(core, h, mid, top.v)
                                 : makeRegular(core, h, top.u, mid);
        Cell tail = makeTail(core, h, top.center, top.rightSide, 0.5 * dK);
        for (const Cell& cc : {reg, tail}) {
          sumLo += cc.contrib.lo;
          sumHi += cc.contrib.hi;
          sumEst += cc.est;
          q.push(cc);
        }
        cells += 1;
      }
    } else {
      double mid = 0.5 * (top.u + top.v);
      refinable = mid > top.u && mid < top.v;
      if (refinable) {
        Cell a = makeRegular(core, h, top.u, mid);
        Cell b = makeRegular(core, h, mid, top.v);
        for (const Cell& cc : {a, b}) {
          sumLo += cc.contrib.lo;
          sumHi += cc.contrib.hi;
          sumEst += cc.est;
          q.push(cc);
        }
        cells += 1;
      }
    }
    if (!refinable) {
      frzLo += top.contrib.lo;
      frzHi += top.contrib.hi;
      frzEst += top.est;
    }
  }

  out.bracket = Interval(sumLo + frzLo, sumHi + frzHi) * env;
  out.estimate = sumEst + frzEst;
  return out;
}

PieceIntegral integrateRanged(const std::function<Interval(double, double)>& range,
                              const std::function<double(double)>& eval, double c,
                              double d, const std::vector<RangeGuard>& guards,
                              double tol, QuadBudget budget) {
  PieceIntegral out;
  if (d <= c) return out;

  struct RCell {
    bool tail = false;
    double u, v;
    const RangeGuard* g = nullptr;
    Interval contrib{0, 0};
    double est = 0;
  };
  auto evalRegular = [&](double u, double v) {
    RCell rc;
    rc.u = u;
    rc.v = v;
    rc.contrib = Interval(v - u) * range(u, v);
    rc.est = (v - u) * eval(0.5 * (u + v));
    if (!std::isfinite(rc.est)) rc.est = rc.contrib.mid();
    return rc;
  };
  auto evalTail = [&](const RangeGuard* g, double dK) {
    RCell rc;
    rc.tail = true;
    rc.g = g;
    rc.u = g->fromLeft ? g->x - dK : g->x;
    rc.v = g->fromLeft ? g->x : g->x + dK;
    PieceIntegral dom = integratePiece(g->dominator, rc.u, rc.v, 0.25, nullptr,
                                       QuadBudget{400, 200});
    rc.contrib = {0.0, dom.div ? kInf : dom.bracket.hi};
    rc.est = 0;
    return rc;
  };

  auto cmp = [](const RCell& a, const RCell& b) {
    return a.contrib.width() < b.contrib.width();
  };
  std::priority_queue<RCell, std::vector<RCell>, decltype(cmp)> q(cmp);

  std::vector<std::pair<double, double>> tailSpans;
  std::vector<RCell> init;
  double span = d - c;
  for (const auto& g : guards) {
    if (g.x < c - 1e-15 || g.x > d + 1e-15) continue;
    double dK = span * 0.1;
    if (g.fromLeft && g.x - dK >= c) {
      init.push_back(evalTail(&g, dK));
      tailSpans.push_back({g.x - dK, g.x});
    } else if (!g.fromLeft && g.x + dK <= d) {
      init.push_back(evalTail(&g, dK));
      tailSpans.push_back({g.x, g.x + dK});
    }
  }
  std::sort(tailSpans.begin(), tailSpans.end());
  double cur = c;
  for (auto [u, v] : tailSpans) {
    if (cur < u) init.push_back(evalRegular(cur, u));
    cur = v;
  }
  if (cur < d) init.push_back(evalRegular(cur, d));

  double sumLo = 0, sumHi = 0, sumEst = 0;
  for (auto& rc : init) {
    sumLo += rc.contrib.lo;
    sumHi += rc.contrib.hi;
    sumEst += rc.est;
    q.push(rc);
  }
  int cells = static_cast<int>(q.size());
  while (cells < budget.maxCells) {
    double width = sumHi - sumLo;
    if (std::isfinite(sumHi) && width <= tol * (1.0 + std::abs(sumHi))) break;
    RCell top = q.top();
    if (top.contrib.width() <= 0) break;
    q.pop();
    sumLo -= top.contrib.lo;
    sumHi -= top.contrib.hi;
    sumEst -= top.est;
    std::vector<RCell> nw;
    if (top.tail) {
      double dK = top.v - top.u;
      if (dK < 1e-250) {
        sumLo += top.contrib.lo;
        sumHi += top.contrib.hi;
        q.push(top);
        break;
      }
      double mid = top.g->fromLeft ? top.g->x - 0.5 * dK : top.g->x + 0.5 * dK;
      nw.push_back(evalTail(top.g, 0.5 * dK));
      if (top.g->fromLeft)
        nw.push_back(evalRegular(top.u, mid));
      else
        nw.push_back(evalRegular(mid, top.v));
    } else {
      double mid = 0.5 * (top.u + top.v);
      if (mid <= top.u || mid >= top.v) {
        sumLo += top.contrib.lo;
        sumHi += top.contrib.hi;
        q.push(top);
        break;
      }
      nw.push_back(evalRegular(top.u, mid));
      nw.push_back(evalRegular(mid, top.v));
    }
    for (auto& rc : nw) {
      sumLo += rc.contrib.lo;
      sumHi += rc.contrib.hi;
      sumEst += rc.est;
      q.push(rc);
    }
    cells += 1;
  }
  out.bracket = {sumLo, sumHi};
  out.estimate = sumEst;
  return out;
}

namespace {

// Cm * C1 * d^{alpha - eta} pointwise majorant pieces for a power-log shape,
// uniform over (0, dv]; nullopt when exponential terms are present or the
// log folding needs smaller distances.
std::optional<std::pair<double, double>> pointwiseMajorant(const CenteredShape& s,
                                                           double eta, double dv) {
  if (s.rate != 0) return std::nullopt;
  if (s.has_logs() && dv > 0.13) return std::nullopt;
  double Cm = 1.0, qhat = s.del;
  if (s.eps > 0)
    qhat += s.eps;
  else if (s.eps < 0)
    Cm = std::pow(std::log(std::log(1.0 / dv)), s.eps);
  double C1 = s.has_logs() ? powLogSup(qhat, eta, std::log(1.0 / dv)) : 1.0;
  return std::make_pair(Cm * C1, s.alpha - (s.has_logs() ? eta : 0.0));
}

double othersSupFactor(const Piece& pc, double x0, bool rightSide, double dv) {
  Piece others = pc;
  std::erase_if(others.factors,
                [&](const Factor& f) { return samePoint(f.center, x0); });
  double u = rightSide ? x0 : x0 - dv;
  double v = rightSide ? x0 + dv : x0;
  return pieceRange(others, u, v).hi;  // includes coeff and envelopes
}

}  // namespace

std::optional<PowerBound> shapeTailPowerBound(const Piece& pc, double x0,
                                              bool rightSide, double eta, double dv) {
  if (pc.zero) return PowerBound{0.0, 1.0, dv};
  CenteredShape s = shapeAt(pc, x0);
  double M = othersSupFactor(pc, x0, rightSide, dv);
  if (!std::isfinite(M)) return std::nullopt;
  if (s.rate != 0) return std::nullopt;
  if (s.alpha > -1.0) {
    auto mj = pointwiseMajorant(s, std::min(eta, 0.5 * (s.alpha + 1.0)), dv);
    if (!mj) return std::nullopt;
    double ex = mj->second + 1.0;
    if (!(ex > 0)) return std::nullopt;
    return PowerBound{M * mj->first / ex, ex, dv};
  }
  // boundary chain: the tail is slowly varying; settle for a constant bound
  auto ub = tailUpperBound(s, std::min(dv, 0.12));
  if (!ub) return std::nullopt;
  return PowerBound{M * *ub, 0.0, std::min(dv, 0.12)};
}

std::optional<PowerBound> shapeGrowthPowerBound(const Piece& pc, double x0,
                                                bool rightSide, double eta,
                                                double dv) {
  if (pc.zero) return std::nullopt;
  CenteredShape s = shapeAt(pc, x0);
  double M = othersSupFactor(pc, x0, rightSide, dv);
  if (!std::isfinite(M)) return std::nullopt;
  auto mj = pointwiseMajorant(s, eta, dv);
  if (!mj) return std::nullopt;
  double ex = mj->second + 1.0;  // alpha - eta + 1
  if (!(ex < 0)) return std::nullopt;
  return PowerBound{M * mj->first / (-ex), ex, dv};
}

Tri integrability(const WeightExpr& w, double x, bool fromLeft, double q) {
  OrderTuple o = w.orderAt(x, fromLeft);
  if (o.zero) return q > 0 ? Tri::No : Tri::Yes;
  return orderIntegrable(orderPower(o, -q));
}

std::vector<double> buildNodes(double a, double b,
                               const std::vector<double>& mustInclude,
                               const std::vector<double>& singular, int N) {
  std::set<double> s{a, b};
  for (double x : mustInclude)
    if (x > a && x < b) s.insert(x);
  std::vector<double> base(s.begin(), s.end());
  for (double x : singular) {
    if (x < a || x > b) continue;
    // neighbor distance in the base grid
    double dl = kInf, dr = kInf;
    for (double y : base) {
      if (y < x - 1e-15) dl = std::min(dl, x - y);
      if (y > x + 1e-15) dr = std::min(dr, y - x);
    }
    double floorOff = 1e-13 * std::abs(x);  // keep nodes resolvable from x
    for (int j = 1; j <= 48; ++j) {
      double step = std::ldexp(1.0, -j);
      if (std::isfinite(dl) && dl * step > floorOff) s.insert(x - dl * step);
      if (std::isfinite(dr) && dr * step > floorOff) s.insert(x + dr * step);
    }
  }
  // uniform fill of the largest gaps up to ~N nodes
  std::vector<double> nodes(s.begin(), s.end());
  auto gapCmp = [](const std::pair<double, double>& x, const std::pair<double, double>& y) {
    return (x.second - x.first) < (y.second - y.first);
  };
  std::priority_queue<std::pair<double, double>, std::vector<std::pair<double, double>>,
                      decltype(gapCmp)>
      gaps(gapCmp);
  for (size_t i = 0; i + 1 < nodes.size(); ++i) gaps.push({nodes[i], nodes[i + 1]});
  int count = static_cast<int>(nodes.size());
  std::vector<double> extra;
  while (count < N && !gaps.empty()) {
    auto [u, v] = gaps.top();
    gaps.pop();
    double m = 0.5 * (u + v);
    if (m <= u || m >= v) continue;
    extra.push_back(m);
    gaps.push({u, m});
    gaps.push({m, v});
    ++count;
  }
  nodes.insert(nodes.end(), extra.begin(), extra.end());
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  return nodes;
}

CumGrid cum_power_grid(const WeightExpr& w, double s, double lo, double hi, int N,
                       double tol, const std::vector<double>& extraNodes) {
  CumGrid g;
  std::vector<double> must, sing;
  for (const auto& p : w.pieces) {
    for (double x : {p.lo, p.hi})
      if (x > lo && x < hi) must.push_back(x);
  }
  for (double x : extraNodes)
    if (x > lo && x < hi) must.push_back(x);
  auto singularAt = [&](double x) {
    for (bool fromLeft : {true, false}) {
      OrderTuple o = w.orderAt(x, fromLeft);
      if (o.zero) {
        if (s < 0) return true;
        continue;
      }
      OrderTuple op = orderPower(o, s);
      if (!op.isTrivial()) return true;
    }
    return false;
  };
  for (double x : must)
    if (singularAt(x)) sing.push_back(x);
  for (double x : {lo, hi})
    if (singularAt(x)) sing.push_back(x);
  g.nodes = buildNodes(lo, hi, must, sing, N);

  size_t n = g.nodes.size();
  g.W.assign(n, Enclosure{});
  double cumLo = 0, cumHi = 0;
  double segTol = tol / static_cast<double>(n);
  for (size_t i = 0; i + 1 < n; ++i) {
    if (g.firstInfinite >= 0) {
      g.W[i + 1] = Enclosure{cumLo, kInf};
      g.W[i + 1].diverged = g.diverged;
      continue;
    }
    double u = g.nodes[i], v = g.nodes[i + 1];
    const Piece& pc = w.pieces[w.pieceIndexAt(0.5 * (u + v))];
    if (pc.zero) {
      if (s > 0) {
        g.W[i + 1] = Enclosure{cumLo, cumHi};
        continue;
      }
      g.diverged = DivergenceCert{u, false, OrderTuple::zeroWeight(),
                                  "reciprocal of zero piece"};
      g.firstInfinite = static_cast<int>(i) + 1;
      g.W[i + 1] = Enclosure{cumLo, kInf};
      g.W[i + 1].diverged = g.diverged;
      continue;
    }
    Piece pw = piecePow(pc, s);
    PieceIntegral r =
        integratePiece(pw, u, v, segTol, nullptr, QuadBudget{4000, 360});
    if (r.div) {
      g.diverged = r.div;
      // divergence at u (approached from the right) makes W infinite past u;
      // divergence at v makes W(v) itself infinite
      g.firstInfinite = static_cast<int>(i) + 1;
      g.W[i + 1] = Enclosure{cumLo, kInf};
      g.W[i + 1].diverged = g.diverged;
      continue;
    }
    cumLo += r.bracket.lo;
    cumHi += r.bracket.hi;
    g.W[i + 1] = Enclosure{cumLo, cumHi};
  }
  return g;
}

CumGrid cum_antiderivative(const WeightExpr& w, double p, int N, double tol) {
  if (!(p > 1.0)) throw PreconditionError("p must lie in (1, infinity)");
  if (N < 8) throw PreconditionError("N must be at least 8");
  return cum_power_grid(w, -1.0 / (p - 1.0), w.a, w.b, N, tol);
}

double densitySupUpper(const WeightExpr& w, double u, double v) {
  double hi = 0;
  for (const auto& p : w.pieces) {
    double x = std::max(u, p.lo), y = std::min(v, p.hi);
    if (x >= y) continue;
    if (p.zero) continue;
    hi = std::max(hi, pieceRange(p, x, y).hi);
  }
  return hi;
}

}  // namespace sobmuck
