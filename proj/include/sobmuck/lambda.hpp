#ifndef SOBMUCK_LAMBDA_HPP
#define SOBMUCK_LAMBDA_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sobmuck/enclosure.hpp"
#include "sobmuck/integrate.hpp"
#include "sobmuck/measure.hpp"

namespace sobmuck {

enum class Endpoint { A, B };

struct LambdaResult {
  Enclosure enclosure;
  double argmax_r = 0.0;
  Tri finite = Tri::Unknown;
  Endpoint endpoint = Endpoint::B;
  bool primeVariant = false;
  std::optional<DivergenceCert> cert;
};

// Abstract nu1-side view shared by symbolic and derived measures.
struct TailView {
  double A = 0.0, B = 1.0;
  std::vector<Atom> atoms;
  std::vector<double> hints;  // density breakpoints worth having as grid nodes
  std::function<Enclosure(double, double, double)> densInt;  // density only
  std::function<double(double, double)> densSup;
  std::function<std::optional<SideTag>(double, bool)> tagAt;
  std::function<Tri(double, double)> zeroOn;  // density zero a.e. on (u,v)?
  // uniform power bound of the density tail integral toward a point
  std::function<std::optional<PowerBound>(double, bool, double, double)> tailPowerBound;
};

TailView viewOf(const Measure& m);
TailView viewOf(const NumericMeasure& m);

// Muckenhoupt quantities on the support of nu2 (both measures must share it).
LambdaResult lambda_b(const Measure& nu1, const Measure& nu2, double p, int N);
LambdaResult lambda_a(const Measure& nu1, const Measure& nu2, double p, int N);
LambdaResult lambda_prime_b(const Measure& nu1, const Measure& nu2, double p, int N);

// Core: sup over r in (A,B) of nu1-tail times W(r)^{p-1}.
LambdaResult lambdaCoreB(const TailView& nu1, const WeightExpr& w2, double p, int N,
                         bool prime, double tol = 1e-8);

bool comp_lambdas_check(const Measure& nu1, const Measure& nu2, double p, int N);

enum class EquivVerdict { BothFinite, BothInfinite, Unknown };
EquivVerdict restricted_lambda_equiv(const Measure& nu1, const Measure& nu2, double p,
                                     double r0, int N = 512);

struct Hypothesis {
  std::string name;
  bool holds = false;
  std::string detail;
};

struct ThreeMeasureCert {
  double k = 0.0;
  LambdaResult lambda;
  enum Route { RatioLimitInfinite, RatioLimsupFinite, Direct } route = Direct;
  std::vector<Hypothesis> hypotheses;
};

struct ThreeMeasureOutcome {
  enum Kind { Holds, NotFound, Unknown } kind = Unknown;
  std::optional<ThreeMeasureCert> cert;
  std::string detail;
};

// Existence of k >= 0 with Lambda_{p,end}((nu1 - k nu2)_+, nu3) finite.
ThreeMeasureOutcome three_measure_condition(const Measure& nu1, const Measure& nu2,
                                            const Measure& nu3, double p,
                                            Endpoint end, int N = 512);

// Shared negative screen: nu2 finite near b, w3^{-1/(p-1)} not integrable at b,
// nu1({b}) > 0 and nu2({b}) = 0.
bool niffPattern(const Measure& nu1, const Measure& nu2, const Measure& nu3, double p,
                 Endpoint end);

}  // namespace sobmuck

#endif
