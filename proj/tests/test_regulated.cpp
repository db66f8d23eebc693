#include "approxvar/regulated.hpp"

#include <cmath>

#include "approxvar/fixtures.hpp"
#include "doctest.h"

using namespace approxvar;

namespace {

SampledFunction scalar_fn(std::vector<double> vs) {
  std::vector<Point> values;
  for (double v : vs) values.push_back(Point::scalar(v));
  return SampledFunction(GageSpace::scalar(), uniform_grid(vs.size()),
                         std::move(values));
}

std::vector<double> scalar_values(const SampledFunction& f) {
  std::vector<double> out;
  for (std::size_t i = 0; i < f.size(); ++i) out.push_back(f.value(i).scalar_value());
  return out;
}

const PseudometricId p0(0);

}  // namespace

TEST_CASE("step approximant covers the ramp with one jump") {
  const StepApproximant step = step_approximant(scalar_fn({0, 1, 2, 3}), p0, 0.5);
  CHECK(scalar_values(step.g) == std::vector<double>{0.5, 0.5, 2.5, 2.5});
  CHECK(step.jump_count == 1);
  CHECK(jordan_variation(step.g, p0) == doctest::Approx(2.0));
}

TEST_CASE("step approximant collapses wide tubes and keeps constants") {
  const SampledFunction constant = scalar_fn({2, 2, 2});
  const StepApproximant same = step_approximant(constant, p0, 0.1);
  CHECK(scalar_values(same.g) == std::vector<double>{2, 2, 2});
  CHECK(same.jump_count == 0);

  const StepApproximant wide = step_approximant(scalar_fn({0, 2, 0}), p0, 1.0);
  CHECK(scalar_values(wide.g) == std::vector<double>{1, 1, 1});
  CHECK(wide.jump_count == 0);
}

TEST_CASE("step approximant witnesses the upper bound on random functions") {
  std::uint64_t rng = 13;
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 3 + rand_next(rng) % 10;
    const SampledFunction f = random_scalar_function(rng, n);
    for (double eps : {0.1, 0.3}) {
      const StepApproximant step = step_approximant(f, p0, eps);
      CHECK(uniform_distance(f, step.g, p0) <= eps + 1e-12);
      const double vg = jordan_variation(step.g, p0);
      const double exact = eps_variation_scalar(f, eps).upper.value();
      CHECK(vg >= exact - 1e-9);
      const double v = jordan_variation(f, p0);
      CHECK(static_cast<double>(step.jump_count) <=
            std::ceil(v / (2.0 * eps)) + 1e-12);
    }
  }
}

TEST_CASE("finite-space step approximant picks covering candidates") {
  const GageSpace space = GageSpace::finite({"x", "y"}, {{{0, 1}, {1, 0}}});
  std::vector<Point> values = {Point::index(0), Point::index(0), Point::index(1)};
  const SampledFunction f(space, uniform_grid(3), std::move(values));
  const StepApproximant step = step_approximant(f, p0, 0.25);
  CHECK(step.jump_count == 1);
  CHECK(uniform_distance(f, step.g, p0) == 0.0);

  // Restricting the candidate pool to {x} leaves the y sample uncoverable.
  const GageSpace restricted = space.with_candidates({Point::index(0)});
  const SampledFunction fr(restricted, uniform_grid(3),
                           {Point::index(0), Point::index(0), Point::index(1)});
  CHECK_THROWS_AS(step_approximant(fr, p0, 0.25), InfeasibleError);
}

TEST_CASE("classifier flags the alternating family and passes the ramp") {
  const std::vector<double> ladder = {0.4};
  const std::vector<PseudometricId> ps = {p0};

  const GrowthReport dirichlet =
      classify_regulated(dirichlet_refining_family(1.0, 5), ladder, ps);
  REQUIRE(dirichlet.cells.size() == 1);
  CHECK(dirichlet.cells[0].verdict == GrowthVerdict::Diverging);
  // One fresh alternation adds d - 2 eps to the bound.
  CHECK(dirichlet.cells[0].slope == doctest::Approx(0.2).epsilon(0.05));

  const GrowthReport ramp =
      classify_regulated(ramp_refining_family(0.0, 3.0, 5), ladder, ps);
  CHECK(ramp.cells[0].verdict == GrowthVerdict::Bounded);

  const GrowthReport constant =
      classify_regulated(constant_refining_family(1.0, 4), ladder, ps);
  CHECK(constant.cells[0].verdict == GrowthVerdict::Bounded);
  CHECK(constant.cells[0].lowers.back() == 0.0);

  CHECK_THROWS_AS(
      classify_regulated(dirichlet_refining_family(1.0, 2), ladder, ps),
      std::invalid_argument);
}

TEST_CASE("dirichlet divergence slope is achieved exactly") {
  for (std::size_t m : {4, 8, 16, 32}) {
    const SampledFunction f = alternating_dirichlet(m, 1.0);
    CHECK(eps_variation_lower(f, p0, 0.4) ==
          doctest::Approx(0.2 * static_cast<double>(m)).epsilon(1e-12));
  }
}

TEST_CASE("growth report serializes cells") {
  const GrowthReport report = classify_regulated(
      dirichlet_refining_family(1.0, 4), std::vector<double>{0.4},
      std::vector<PseudometricId>{p0});
  const nlohmann::json j = report.to_json();
  REQUIRE(j.contains("cells"));
  CHECK(j["cells"][0]["verdict"] == "Diverging");
  CHECK(j["cells"][0]["lowers"].size() == 4);
}

TEST_CASE("cauchy defect: constants, alternating gaps, fine ramps") {
  const SampledFunction constant = scalar_fn({1, 1, 1, 1, 1});
  CHECK(cauchy_defect(constant, p0, 0.8, 0.5) == 0.0);

  const SampledFunction alt = alternating_dirichlet(16, 1.0);
  CHECK(cauchy_defect(alt, p0, 0.9, 0.3) == doctest::Approx(1.0));

  const SampledFunction ramp = gen_monotone_ramp(uniform_grid(257), 0.0, 1.0);
  const double wide = cauchy_defect(ramp, p0, 0.5, 0.2);
  const double narrow = cauchy_defect(ramp, p0, 0.5, 0.01);
  CHECK(narrow < wide);
  CHECK(narrow <= 0.01 + 1e-12);

  CHECK(cauchy_defect(alt, p0, 0.5, 0.3, Side::Right) == doctest::Approx(1.0));
  CHECK_THROWS_AS(cauchy_defect(constant, p0, 0.0, 0.1, Side::Left),
                  std::invalid_argument);
}

TEST_CASE("regulated-but-unbounded sample: local defects stay small while the "
          "variation diverges") {
  // The ramp t on [0,1] extended by the points 2 - 1/n with value n. Each
  // truncation is locally tame (small Cauchy defects) yet the variation lower
  // bounds grow with every added point, so the classifier reports Diverging:
  // on non-interval domains finite approximate variation is sufficient, not
  // necessary, for regulated behavior.
  auto truncation = [](int depth) {
    const int ramp_points = 9;
    const int tail_points = 2 + (1 << depth);
    std::vector<double> ts;
    std::vector<Point> values;
    for (int i = 0; i < ramp_points; ++i) {
      const double t = static_cast<double>(i) / (ramp_points - 1);
      ts.push_back(t);
      values.push_back(Point::scalar(t));
    }
    for (int n = 2; n < tail_points; ++n) {
      ts.push_back(2.0 - 1.0 / n);
      values.push_back(Point::scalar(static_cast<double>(n)));
    }
    return SampledFunction(GageSpace::scalar(), Grid(std::move(ts)),
                           std::move(values));
  };
  const RefiningFamily family{truncation, 5, "unbounded-regulated"};
  const GrowthReport report = classify_regulated(
      family, std::vector<double>{0.2}, std::vector<PseudometricId>{p0});
  REQUIRE(report.cells.size() == 1);
  CHECK(report.cells[0].verdict == GrowthVerdict::Diverging);

  const SampledFunction deep = truncation(5);
  CHECK(cauchy_defect(deep, p0, 1.0, 0.2) <= 0.2 + 1e-12);
  CHECK(oscillation(deep, p0) > 30.0);  // unbounded along the family
}

TEST_CASE("small prefix-variation gaps force the 3-eps pair bound") {
  std::uint64_t rng = 29;
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 4 + rand_next(rng) % 8;
    const SampledFunction f = random_scalar_function(rng, n);
    for (double eps : {0.1, 0.3}) {
      const auto prefix = prefix_eps_variation(f, p0, eps);
      for (std::size_t s = 0; s < n; ++s) {
        for (std::size_t t = s + 1; t < n; ++t) {
          if (prefix[t].value() - prefix[s].value() >= eps) continue;
          CHECK(f.space().distance(p0, f.value(s), f.value(t)) <=
                3.0 * eps + 1e-9);
        }
      }
    }
  }
}
