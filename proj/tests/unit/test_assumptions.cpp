#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "hmpp/assumptions.hpp"
#include "hmpp/error.hpp"
#include "hmpp/rng.hpp"
#include "support/models.hpp"

using namespace hmpp;

namespace {

const StateSpace kOne = StateSpace::discrete(1);

const AssumptionEntry& find(const AssumptionReport& r, std::string_view prefix) {
  for (const auto& e : r.entries) {
    if (e.id.starts_with(prefix)) return e;
  }
  FAIL("no entry " << prefix);
  return r.entries.front();
}

}  // namespace

TEST_CASE("branching ratio") {
  const std::vector<double> one{1.0};
  const std::vector<double> two{1.0, 1.0};
  CHECK(branching_ratio(Kernel::zero(2, 1), two, kOne).rho == 0.0);
  CHECK(branching_ratio(Kernel::exponential(KernelWeights(1, 1, 0.5), 1.0), one, kOne).rho == 0.5);

  // alpha[src][tgt]; per target the sum over sources
  const auto k = Kernel::exponential(KernelWeights(2, 1, {0.2, 0.3, 0.4, 0.1}), 1.0);
  const auto br = branching_ratio(k, two, kOne);
  CHECK(br.rho == doctest::Approx(0.6));
  CHECK(br.argmax == 0);
  CHECK(br.per_target[1] == doctest::Approx(0.4));

  SUBCASE("weights multiply the source mass") {
    const std::vector<double> w{2.0, 1.0};
    CHECK(branching_ratio(k, w, kOne).rho == doctest::Approx(0.8));
  }
  SUBCASE("state maximum is taken before integrating") {
    const auto ks = Kernel::exponential(KernelWeights(1, 2, {0.2, 0.45}), 3.0);
    CHECK(branching_ratio(ks, one, StateSpace::discrete(2)).rho == doctest::Approx(0.45));
  }
  SUBCASE("power law closed form") {
    const auto p = Kernel::power_law(KernelWeights(1, 1, 0.5), 2.5, 0.1);
    CHECK(branching_ratio(p, one, kOne).rho == doctest::Approx(10.540925533894598));
  }
}

TEST_CASE("quadrature agrees with the closed form") {
  Rng rng(31);
  const std::vector<double> w{1.0, 0.5};
  for (int i = 0; i < 20; ++i) {
    KernelWeights a(2, 2, 0.0);
    for (std::size_t s = 0; s < 2; ++s)
      for (std::size_t x = 0; x < 2; ++x)
        for (std::size_t t = 0; t < 2; ++t) a.at(s, x, t) = rng.uniform();
    const auto k = Kernel::exponential(a, 0.2 + 3.0 * rng.uniform());
    const double closed = branching_ratio(k, w, StateSpace::discrete(2)).rho;
    const double quad = branching_ratio_quadrature(k, w, StateSpace::discrete(2)).rho;
    CHECK(std::abs(closed - quad) <= 1e-10 * std::max(1.0, closed));
  }
}

TEST_CASE("custom kernels") {
  const std::vector<double> one{1.0};
  Kernel::Custom spec;
  spec.value = [](double s, const Mark&, std::size_t) { return 0.3 * std::exp(-s) * (1.0 + std::cos(s)) / 1.5; };
  spec.integral = [](const Mark&, std::size_t) { return 0.3; };
  spec.envelope = [](double s, const Mark&, std::size_t) { return 0.4 * std::exp(-s); };
  CHECK(branching_ratio(Kernel::custom(spec), one, kOne).rho == doctest::Approx(0.3).epsilon(1e-8));

  Kernel::Custom heavy;
  heavy.value = [](double s, const Mark&, std::size_t) { return 1.0 / (1.0 + s); };
  heavy.integral = [](const Mark&, std::size_t) { return std::numeric_limits<double>::infinity(); };
  heavy.non_increasing = true;
  try {
    (void)branching_ratio(Kernel::custom(heavy), one, kOne);
    FAIL("expected DivergentIntegral");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kDivergentIntegral);
  }
}

TEST_CASE("rho is monotone in alpha") {
  Rng rng(2);
  const std::vector<double> w{1.0, 1.0, 1.0};
  for (int i = 0; i < 100; ++i) {
    KernelWeights a(3, 2, 0.0);
    for (std::size_t s = 0; s < 3; ++s)
      for (std::size_t x = 0; x < 2; ++x)
        for (std::size_t t = 0; t < 3; ++t) a.at(s, x, t) = rng.uniform();
    const double before = branching_ratio(Kernel::exponential(a, 1.0), w, StateSpace::discrete(2)).rho;
    a.at(static_cast<std::size_t>(rng.uniform() * 3), static_cast<std::size_t>(rng.uniform() * 2),
         static_cast<std::size_t>(rng.uniform() * 3)) += rng.uniform();
    CHECK(branching_ratio(Kernel::exponential(a, 1.0), w, StateSpace::discrete(2)).rho >= before);
  }
}

TEST_CASE("corollary constraint") {
  CHECK(check_corollary_constraint(TransitionFunction::identity(2, 1), 0.5).status == CheckStatus::kVerified);
  const auto peaked = TransitionFunction::gaussian_increment(0.0, 0.1);
  CHECK(check_corollary_constraint(peaked, 0.3).status == CheckStatus::kViolated);
  CHECK_FALSE(check_corollary_constraint(peaked, 0.3).witness.empty());
  CHECK(check_corollary_constraint(peaked, 0.0).status == CheckStatus::kVerified);
  CHECK(check_corollary_constraint(TransitionFunction::identity(1, 1), 0.999).status == CheckStatus::kVerified);
  CHECK(check_corollary_constraint(TransitionFunction::identity(1, 1), 1.0).status == CheckStatus::kViolated);

  TransitionFunction::Family f;
  f.density = [](double next, std::size_t, double) { return next >= 0.0 && next <= 0.25 ? 4.0 : 0.0; };
  f.sampler = [](std::size_t, double, Rng& r) { return 0.25 * r.uniform(); };
  f.support_lo = 0.0;
  f.support_hi = 0.25;
  f.sup_density = 4.0;
  const auto four = TransitionFunction::family(f, 1);
  const auto entry = check_corollary_constraint(four, 0.3);
  CHECK(entry.status == CheckStatus::kViolated);
}

TEST_CASE("summability") {
  SUBCASE("constant a") {
    const auto r = summability_report([](std::size_t) { return 1.0; }, 10000, true);
    CHECK(r.partial_sum == 10001.0);
    CHECK(r.terms == 10001);
    CHECK(r.divergence.status == CheckStatus::kDeclaredByUser);
    CHECK(r.monotonicity.status != CheckStatus::kViolated);
  }
  SUBCASE("quadratic a") {
    const auto r = summability_report(
        [](std::size_t n) { return (1.0 + static_cast<double>(n)) * (1.0 + static_cast<double>(n)); }, 1000000,
        false);
    CHECK(std::abs(r.partial_sum - 1.6449330668497701) < 1e-9);
    CHECK(std::abs(r.partial_sum - std::numbers::pi * std::numbers::pi / 6.0) < 1e-5);
    CHECK(r.divergence.status == CheckStatus::kViolated);
    CHECK(r.divergence.detail.find("explosion") != std::string::npos);
  }
  SUBCASE("non-monotone witness") {
    const auto r = summability_report([](std::size_t n) { return n == 3 ? 0.5 : 1.0 + static_cast<double>(n); }, 10,
                                      std::nullopt);
    CHECK(r.monotonicity.status == CheckStatus::kViolated);
    CHECK(r.monotonicity.witness.starts_with("n = 3"));
    CHECK(r.divergence.status == CheckStatus::kNotChecked);
  }
}

TEST_CASE("initial condition") {
  const auto k = Kernel::exponential(KernelWeights(1, 1, 0.5), 1.0);
  SUBCASE("empty") {
    const auto r = initial_condition_check(Trajectory({}, {}, StateValue::discrete(0)), k, kOne, 10.0);
    CHECK(r.finiteness.status == CheckStatus::kVerified);
    CHECK(r.pathwise_bound.status == CheckStatus::kVerified);
    for (double v : r.values) CHECK(v == 0.0);
  }
  SUBCASE("one record at -1") {
    const auto init = make_initial({{-1.0, {0, StateValue::discrete(0)}}}, StateValue::discrete(0));
    const auto r = initial_condition_check(init, k, kOne, 10.0);
    CHECK(r.pathwise_bound.status == CheckStatus::kVerified);
    REQUIRE(r.grid.size() == r.values.size());
    for (std::size_t i = 0; i < r.grid.size(); ++i) {
      CHECK(r.values[i] == doctest::Approx(0.5 * std::exp(-(r.grid[i] + 1.0))));
    }
  }
  SUBCASE("custom kernel singular at lag 1") {
    Kernel::Custom spec;
    spec.value = [](double s, const Mark&, std::size_t) { return s == 1.0 ? std::numeric_limits<double>::infinity() : 1.0 / std::abs(s - 1.0); };
    spec.integral = [](const Mark&, std::size_t) { return std::numeric_limits<double>::infinity(); };
    spec.singular_lags = {1.0};
    const auto init = make_initial({{-1.0, {0, StateValue::discrete(0)}}}, StateValue::discrete(0));
    const auto r = initial_condition_check(init, Kernel::custom(spec), kOne, 10.0);
    CHECK(r.pathwise_bound.status == CheckStatus::kViolated);
    CHECK(r.pathwise_bound.witness == "t -> 0+ (record at -1)");
  }
}

TEST_CASE("model report") {
  SUBCASE("stable Hawkes") {
    const auto r = check_model(testing::hawkes_1d(1.0, 0.5, 1.0), 100.0);
    CHECK_FALSE(r.any_violated());
    REQUIRE(r.branching_ratio.has_value());
    CHECK(*r.branching_ratio == 0.5);
    CHECK(find(r, "D(ii)").status == CheckStatus::kVerified);
    CHECK(find(r, "E(i)").status == CheckStatus::kNotChecked);
  }
  SUBCASE("supercritical Hawkes") {
    const auto r = check_model(testing::hawkes_1d(1.0, 1.5, 1.0), 100.0);
    CHECK(r.any_violated());
    CHECK(find(r, "D(ii)").status == CheckStatus::kViolated);
    CHECK_FALSE(find(r, "D(ii)").witness.empty());
  }
  SUBCASE("pure birth warns about a convergent series") {
    const auto r = check_model(testing::pure_birth_model(), 100.0);
    REQUIRE(r.summability_partial_sum.has_value());
    CHECK(std::abs(*r.summability_partial_sum - 1.6449330668497701) < 1e-9);
    CHECK(find(r, "B(ii)").status == CheckStatus::kViolated);
  }
  SUBCASE("non-Lipschitz example satisfies the domination scenario") {
    const auto r = check_model(testing::non_lipschitz_model(), 100.0);
    CHECK_FALSE(r.any_violated());
    CHECK(*r.branching_ratio == doctest::Approx(0.6));
  }
}
