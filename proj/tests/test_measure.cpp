#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "sobmuck/integrate.hpp"
#include "sobmuck/measure.hpp"

using namespace sobmuck;

TEST_CASE("density evaluation") {
  Measure m{WeightExpr::single(0, 1, {Factor::power(0, 0.5)}), {}};
  CHECK(density_at(m, 0.25) == doctest::Approx(0.5));

  Measure z = zeroMeasure(0, 1);
  CHECK(density_at(z, 0.3) == 0.0);

  Measure s{WeightExpr::single(0, 1, {Factor::power(1, -0.5)}), {}};
  CHECK(density_at(s, 1.0) == kInf);
  CHECK(std::isinf(density_at(s, 1.0 - 1e-9)) == false);

  CHECK_THROWS_AS(density_at(m, 2.0), PreconditionError);
}

TEST_CASE("measure_of with atoms and closed ends") {
  Measure m = lebesgue(0, 1);
  Enclosure e = measure_of(m, 0, 0.5, true, true, 1e-10);
  CHECK(e.lo <= 0.5);
  CHECK(e.hi >= 0.5);
  CHECK(e.width() <= 1e-8);

  Measure d{WeightExpr::zero(0, 1), {{1.0, 2.0}}};
  CHECK(measure_of(d, 0.5, 1, false, true, 1e-10).lo == doctest::Approx(2.0));
  CHECK(measure_of(d, 0.5, 1, false, false, 1e-10).hi == doctest::Approx(0.0));

  Measure h{WeightExpr::single(0, 1, {Factor::power(1, -1.0)}), {}};
  Enclosure div = measure_of(h, 0.5, 1, true, true, 1e-8);
  CHECK(!div.finite());
  CHECK(div.diverged.has_value());
}

TEST_CASE("total mass and finiteness") {
  CHECK(total_mass(lebesgue(0, 1)).mid() == doctest::Approx(1.0));
  Measure m{WeightExpr::constant(0, 1), {{0.0, 1.0}, {1.0, 1.0}}};
  CHECK(total_mass(m).mid() == doctest::Approx(3.0));
  CHECK(is_finite(m));
  Measure h{WeightExpr::single(0, 1, {Factor::power(1, -1.0)}), {}};
  CHECK(!is_finite(h));
}

TEST_CASE("positive part of densities and atoms") {
  Measure two = Measure{WeightExpr::constant(0, 1, 2.0), {}};
  Measure one = lebesgue(0, 1);
  NumericMeasure pp = positive_part(two, 1.0, one);
  CHECK(density_at(pp, 0.5) == doctest::Approx(1.0));
  CHECK(total_mass(pp).mid() == doctest::Approx(1.0).epsilon(1e-6));

  NumericMeasure ppz = positive_part(two, 3.0, one);
  CHECK(total_mass(ppz).hi <= 1e-12);

  Measure a1{WeightExpr::constant(0, 1), {{0.0, 3.0}}};
  Measure a2{WeightExpr::zero(0, 1), {{0.0, 2.0}}};
  NumericMeasure pa = positive_part(a1, 1.0, a2);
  REQUIRE(pa.atoms.size() == 1);
  CHECK(pa.atoms[0].mass == doctest::Approx(1.0));
  CHECK(total_mass(pa).mid() == doctest::Approx(2.0).epsilon(1e-6));

  CHECK_THROWS_AS(positive_part(a1, -1.0, a2), PreconditionError);
}

TEST_CASE("positive part domination and monotonicity in k") {
  Measure nu1{WeightExpr::single(0, 1, {Factor::power(0, 0.4)}), {{0.5, 1.0}}};
  Measure nu2{WeightExpr::single(0, 1, {Factor::power(0, 0.9)}), {{0.5, 0.25}}};
  for (double k : {0.0, 0.5, 2.0}) {
    NumericMeasure pp = positive_part(nu1, k, nu2);
    Enclosure lhs = measure_of(pp, 0, 1, true, true, 1e-6);
    Enclosure n2 = measure_of(nu2, 0, 1, true, true, 1e-6);
    Enclosure n1 = measure_of(nu1, 0, 1, true, true, 1e-6);
    CHECK(lhs.hi + k * n2.hi >= n1.lo - 1e-9);
  }
  double prevHi = kInf;
  for (double k : {0.0, 1.0, 2.0, 4.0}) {
    NumericMeasure pp = positive_part(nu1, k, nu2);
    double hi = measure_of(pp, 0, 1, true, true, 1e-6).hi;
    CHECK(hi <= prevHi + 2e-6 * (1 + hi));
    prevHi = hi;
  }
}

TEST_CASE("measure_of additivity") {
  Measure m{WeightExpr::single(0, 1, {Factor::power(0, -0.5), Factor::power(1, 0.25)}),
            {{0.5, 0.7}}};
  Enclosure whole = measure_of(m, 0, 1, true, true, 1e-8);
  Enclosure left = measure_of(m, 0, 0.6, true, true, 1e-8);
  Enclosure right = measure_of(m, 0.6, 1, false, true, 1e-8);
  CHECK(whole.lo <= left.hi + right.hi + 1e-9);
  CHECK(whole.hi >= left.lo + right.lo - 1e-9);
}

TEST_CASE("restrict and reflect") {
  Measure m{WeightExpr::single(-1, 1, {Factor::power(-1, 0.5)}), {{-1.0, 2.0}, {0.5, 1.0}}};
  Measure r = restrict(m, -1, 0.5, true, false);
  CHECK(r.atoms.size() == 1);
  CHECK(total_mass(r).finite());

  Measure f = reflect(m);
  CHECK(f.a() == doctest::Approx(-1.0));
  CHECK(f.b() == doctest::Approx(1.0));
  CHECK(density_at(f, 0.5) == doctest::Approx(density_at(m, -0.5)));
  CHECK(f.atomMassAt(1.0) == doctest::Approx(2.0));
}

TEST_CASE("validation rejects bad inputs") {
  WeightExpr w = WeightExpr::single(0, 1, {Factor::expNeg(0, -1.0, 1.0)});
  // beta < 0 encoded as positive rate
  w.pieces[0].factors[0].rate = +1.0;
  CHECK_THROWS_AS(validate(w), SpecError);

  WeightExpr env = WeightExpr::single(0, 1, {Factor::envelope(0.5)});
  CHECK_THROWS_AS(validate(env), SpecError);

  // log factor reaching distance 1 from its center inside the piece
  WeightExpr lg = WeightExpr::single(0, 1.5, {Factor::logPower(0, 2.0)});
  CHECK_THROWS_AS(validate(lg), SpecError);

  WeightExpr ok = WeightExpr::single(0, 0.5, {Factor::logPower(0, 2.0)});
  CHECK_NOTHROW(validate(ok));

  Measure dup{WeightExpr::constant(0, 1), {{0.5, 1.0}, {0.5, 2.0}}};
  CHECK_THROWS_AS(validate(dup), SpecError);
}
