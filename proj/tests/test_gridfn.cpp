#include "approxvar/gridfn.hpp"

#include <sstream>

#include "approxvar/fixtures.hpp"
#include "doctest.h"

using namespace approxvar;

namespace {

SampledFunction scalar_fn(std::vector<double> ts, std::vector<double> vs) {
  std::vector<Point> values;
  for (double v : vs) values.push_back(Point::scalar(v));
  return SampledFunction(GageSpace::scalar(), Grid(std::move(ts)), std::move(values));
}

const PseudometricId p0(0);

}  // namespace

TEST_CASE("grids must be strictly increasing and nonempty") {
  CHECK_THROWS_AS(Grid({}), std::invalid_argument);
  CHECK_THROWS_AS(Grid({0.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(Grid({1.0, 0.5}), std::invalid_argument);
  CHECK(Grid({3.0}).size() == 1);
}

TEST_CASE("jordan variation is the consecutive sum") {
  CHECK(jordan_variation(scalar_fn({0, 1, 2, 3}, {0, 1, 0, 1}), p0) ==
        doctest::Approx(3.0));
  CHECK(jordan_variation(scalar_fn({0}, {5}), p0) == 0.0);
  CHECK(jordan_variation(scalar_fn({0, 1, 2}, {0, 2, 0}), p0) == doctest::Approx(4.0));
}

TEST_CASE("oscillation is the image diameter") {
  CHECK(oscillation(scalar_fn({0, 1, 2}, {0, 2, 0}), p0) == doctest::Approx(2.0));
  CHECK(oscillation(scalar_fn({0, 1, 2}, {1, 1, 1}), p0) == 0.0);

  const GageSpace coord = GageSpace::coordinate(2);
  SampledFunction f(coord, Grid({0, 1}),
                    {Point::coords({0, 0}), Point::coords({1, 5})});
  CHECK(oscillation(f, PseudometricId(0)) == doctest::Approx(1.0));
  CHECK(oscillation(f, PseudometricId(1)) == doctest::Approx(5.0));
}

TEST_CASE("uniform distance is the pointwise maximum") {
  const SampledFunction f = scalar_fn({0, 1, 2}, {0, 2, 0});
  CHECK(uniform_distance(f, f, p0) == 0.0);
  CHECK(uniform_distance(f, scalar_fn({0, 1, 2}, {0.5, 1.5, 0.5}), p0) ==
        doctest::Approx(0.5));
  CHECK(uniform_distance(scalar_fn({0, 1}, {0, 1}), scalar_fn({0, 1}, {1, 0}), p0) ==
        doctest::Approx(1.0));
  CHECK_THROWS_AS(uniform_distance(f, scalar_fn({0, 1}, {0, 1}), p0),
                  std::invalid_argument);
}

TEST_CASE("restriction windows share values and reject empty intersections") {
  const SampledFunction f = scalar_fn({0, 1, 2}, {0, 2, 0});
  const SampledFunction sub = f.restrict_to(0.0, 1.0);
  REQUIRE(sub.size() == 2);
  CHECK(sub.t(1) == 1.0);
  CHECK(sub.value(1).scalar_value() == 2.0);

  const SampledFunction singleton = f.restrict_to(1.0, 1.0);
  CHECK(singleton.size() == 1);

  CHECK_THROWS_AS(f.restrict_to(0.5, 0.7), std::invalid_argument);
}

TEST_CASE("prefix variation is the running sum") {
  CHECK(prefix_variation(scalar_fn({0, 1, 2}, {0, 1, 0}), p0) ==
        std::vector<double>{0, 1, 2});
  CHECK(prefix_variation(scalar_fn({0, 1, 2}, {3, 3, 3}), p0) ==
        std::vector<double>{0, 0, 0});
  CHECK(prefix_variation(scalar_fn({0, 1, 2, 3}, {0, 2, 0, 3}), p0) ==
        std::vector<double>{0, 2, 4, 7});
}

TEST_CASE("variation is additive at every grid point") {
  std::uint64_t rng = 99;
  for (int trial = 0; trial < 20; ++trial) {
    const SampledFunction f = random_scalar_function(rng, 3 + rand_next(rng) % 10);
    const double total = jordan_variation(f, p0);
    for (std::size_t i = 0; i < f.size(); ++i) {
      const double pre = jordan_variation(f.prefix_through(i), p0);
      const double suf = jordan_variation(f.suffix_from(i), p0);
      CHECK(pre + suf == doctest::Approx(total).epsilon(1e-12));
    }
    CHECK(oscillation(f, p0) <= total + 1e-12);
  }
}

TEST_CASE("desk-scale lower semicontinuity under pointwise convergence") {
  std::uint64_t rng = 7;
  const SampledFunction f = random_scalar_function(rng, 9);
  const double v = jordan_variation(f, p0);
  for (int j = 3; j <= 12; ++j) {
    std::vector<Point> perturbed;
    for (std::size_t i = 0; i < f.size(); ++i) {
      perturbed.push_back(
          Point::scalar(f.value(i).scalar_value() + rand_uniform(rng, -1.0, 1.0) / j));
    }
    const SampledFunction fj(f.space(), f.grid(), std::move(perturbed));
    const double u = uniform_distance(f, fj, p0);
    CHECK(v <= jordan_variation(fj, p0) +
                   2.0 * static_cast<double>(f.size() - 1) * u + 1e-12);
  }
}

TEST_CASE("two-function triangle consequences") {
  std::uint64_t rng = 31;
  const SampledFunction f = random_scalar_function(rng, 8);
  const SampledFunction g = random_scalar_function(rng, 8);
  const double u = uniform_distance(f, g, p0);
  for (std::size_t s = 0; s < f.size(); ++s) {
    for (std::size_t t = 0; t < f.size(); ++t) {
      const double df = f.space().distance(p0, f.value(s), f.value(t));
      const double dg = f.space().distance(p0, g.value(s), g.value(t));
      CHECK(df <= dg + 2.0 * u + 1e-12);
    }
  }
  CHECK(oscillation(f, p0) <= oscillation(g, p0) + 2.0 * u + 1e-12);
  for (std::size_t t = 0; t < f.size(); ++t) {
    CHECK(u <= oscillation(f, p0) +
                   f.space().distance(p0, f.value(t), g.value(t)) +
                   oscillation(g, p0) + 1e-12);
  }
}

TEST_CASE("dirichlet generator follows its mask") {
  const Grid grid({0, 1, 2, 3, 4});
  const GageSpace scalar = GageSpace::scalar();
  const Point x = Point::scalar(0.0), y = Point::scalar(1.0);

  SampledFunction constant =
      gen_dirichlet(scalar, grid, x, y, {true, true, true, true, true});
  CHECK(jordan_variation(constant, p0) == 0.0);

  SampledFunction alternating =
      gen_dirichlet(scalar, grid, x, y, {true, false, true, false, true});
  CHECK(jordan_variation(alternating, p0) == doctest::Approx(4.0));

  CHECK_THROWS_AS(gen_dirichlet(scalar, grid, x, y, {true}), std::invalid_argument);
}

TEST_CASE("factorial step generator") {
  const SampledFunction f1 = gen_factorial_step(1, true);
  REQUIRE(f1.size() == 3);
  CHECK(f1.t(1) == doctest::Approx(0.5));
  CHECK(f1.value(0).index_value() == 0);
  CHECK(f1.value(1).index_value() == 1);
  CHECK(f1.value(2).index_value() == 0);

  const SampledFunction f2 = gen_factorial_step(2, true);
  REQUIRE(f2.size() == 5);
  for (std::size_t i = 0; i < 5; ++i) CHECK(f2.value(i).index_value() == i % 2);

  const SampledFunction plain = gen_factorial_step(1, false);
  REQUIRE(plain.size() == 2);
  CHECK(plain.value(0).index_value() == 0);
  CHECK(plain.value(1).index_value() == 0);

  CHECK_THROWS_AS(gen_factorial_step(9, true), std::invalid_argument);
}

TEST_CASE("monotone ramp interpolates across indices") {
  const SampledFunction f = gen_monotone_ramp(Grid({0, 1, 2, 3}), 0.0, 3.0);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(f.value(i).scalar_value() == doctest::Approx(static_cast<double>(i)));
  }
  const SampledFunction flat = gen_monotone_ramp(Grid({0, 5}), 2.0, 2.0);
  CHECK(flat.value(1).scalar_value() == 2.0);
  const SampledFunction pair = gen_monotone_ramp(Grid({0, 1}), 0.0, 5.0);
  CHECK(pair.value(1).scalar_value() == 5.0);
}

TEST_CASE("csv round trip is bit-identical") {
  std::uint64_t rng = 3;
  const SampledFunction f = random_scalar_function(rng, 7, -1e3, 1e3);
  std::ostringstream out;
  save_function_csv(out, f);
  std::istringstream in(out.str());
  const SampledFunction back = load_function_csv(in, f.space());
  REQUIRE(back.size() == f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    CHECK(back.t(i) == f.t(i));
    CHECK(back.value(i).scalar_value() == f.value(i).scalar_value());
  }
}

TEST_CASE("csv loader reports line numbers") {
  const GageSpace scalar = GageSpace::scalar();
  {
    std::istringstream in("t,v\n0,1\n0,2\n");
    CHECK_THROWS_WITH_AS(load_function_csv(in, scalar, "f.csv"),
                         doctest::Contains("f.csv:3"), std::runtime_error);
  }
  {
    std::istringstream in("t,v\n0,abc\n");
    CHECK_THROWS_WITH_AS(load_function_csv(in, scalar, "f.csv"),
                         doctest::Contains("f.csv:2"), std::runtime_error);
  }
  {
    std::istringstream in("time,v\n0,1\n");
    CHECK_THROWS_AS(load_function_csv(in, scalar, "f.csv"), std::runtime_error);
  }
}

TEST_CASE("coordinate and finite csv headers") {
  const GageSpace coord = GageSpace::coordinate(2);
  std::istringstream in("t,v0,v1\n0,1,2\n1,3,4\n");
  const SampledFunction f = load_function_csv(in, coord);
  CHECK(f.value(1).coord_values()[1] == 4.0);

  const GageSpace fin = GageSpace::finite({"x", "y"}, {{{0, 1}, {1, 0}}});
  std::istringstream fin_in("t,idx\n0,1\n1,0\n");
  CHECK(load_function_csv(fin_in, fin).value(0).index_value() == 1);

  std::istringstream bad("t,idx\n0,7\n");
  CHECK_THROWS_AS(load_function_csv(bad, fin), std::runtime_error);
}
