#include <doctest.h>

#include <cmath>
#include <vector>

#include "hmpp/error.hpp"
#include "hmpp/simulator.hpp"
#include "support/models.hpp"

using namespace hmpp;
using namespace hmpp::testing;

namespace {

SimConfig cfg(double horizon, std::uint64_t seed) {
  SimConfig c;
  c.horizon = horizon;
  c.seed = seed;
  return c;
}

}  // namespace

TEST_CASE("homogeneous Poisson count") {
  const auto r = simulate(poisson_model(2.0), cfg(1000.0, 42));
  CHECK(r.status == SimStatus::kCompleted);
  const double rate = static_cast<double>(r.trajectory.events().size()) / 1000.0;
  CHECK(std::abs(rate - 2.0) < 3.0 * std::sqrt(2.0 / 1000.0));
  CHECK(r.diagnostics.acceptance_rate == 1.0);
  for (const auto& e : r.trajectory.events()) CHECK(e.time <= 1000.0);
}

TEST_CASE("zero kernel equals a constant rate") {
  ModelSpec hawkes = poisson_model(1.5);
  hawkes.functional = EventFunctional::hawkes({1.5}, Kernel::zero(1, 1));
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    CHECK(simulate(hawkes, cfg(200.0, seed)).trajectory == simulate(poisson_model(1.5), cfg(200.0, seed)).trajectory);
  }
}

TEST_CASE("exponential Hawkes mean rate") {
  const auto r = simulate(hawkes_1d(1.0, 0.5, 1.0), cfg(1e5, 1));
  const double rate = static_cast<double>(r.trajectory.events().size()) / 1e5;
  CHECK(std::abs(rate - 2.0) < 0.04);
  CHECK(r.diagnostics.acceptance_rate < 1.0);
}

TEST_CASE("power-law Hawkes mean rate") {
  // integral = 0.5 * 1^(-1) / 1 = 0.5
  ModelSpec m = poisson_model(1.0);
  m.functional = EventFunctional::hawkes({1.0}, Kernel::power_law(KernelWeights(1, 1, 0.5), 2.0, 1.0));
  const auto r = simulate(m, cfg(5000.0, 3));
  CHECK(std::abs(static_cast<double>(r.trajectory.events().size()) / 5000.0 - 2.0) < 0.15);
}

TEST_CASE("replay determinism and batch order") {
  const ModelSpec m = state_hawkes_model();
  const auto a = simulate(m, cfg(300.0, 9));
  const auto b = simulate(m, cfg(300.0, 9));
  CHECK(a.trajectory == b.trajectory);
  CHECK(a.trajectory != simulate(m, cfg(300.0, 10)).trajectory);

  const std::vector<std::uint64_t> seeds{4, 5, 6, 7};
  const auto batch = run_batch(m, cfg(100.0, 0), seeds, 3);
  REQUIRE(batch.size() == seeds.size());
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    CHECK(batch[i].trajectory == simulate(m, cfg(100.0, seeds[i])).trajectory);
  }
}

TEST_CASE("initial condition is kept") {
  ModelSpec m = hawkes_1d(0.5, 0.4, 1.0);
  m.initial = make_initial({{-2.0, {0, StateValue::discrete(0)}}, {-0.5, {0, StateValue::discrete(0)}}},
                           StateValue::discrete(0));
  const auto r = simulate(m, cfg(50.0, 2));
  REQUIRE(r.trajectory.initial().size() == 2);
  CHECK(r.trajectory.initial()[0].time == -2.0);
  CHECK(r.trajectory.initial()[1].time == -0.5);
}

TEST_CASE("candidate acceptance is exact") {
  SimConfig c = cfg(200.0, 4);
  c.record_diagnostics = true;
  const auto r = simulate(state_hawkes_model(), c);
  REQUIRE(r.diagnostics.log.size() == r.diagnostics.candidates);
  std::size_t accepted = 0;
  for (const auto& entry : r.diagnostics.log) {
    CHECK(entry.accepted == (entry.height < entry.threshold));
    accepted += entry.accepted ? 1 : 0;
  }
  CHECK(accepted == r.trajectory.events().size());
}

TEST_CASE("zero rate produces no events") {
  const auto r = simulate(poisson_model(0.0), cfg(10.0, 1));
  CHECK(r.status == SimStatus::kCompleted);
  CHECK(r.trajectory.events().empty());
}

TEST_CASE("caps") {
  SimConfig c = cfg(1000.0, 1);
  c.max_events = 10;
  CHECK(simulate(poisson_model(5.0), c).status == SimStatus::kExplosionSuspected);
  c = cfg(1000.0, 1);
  c.max_candidates = 10;
  CHECK(simulate(poisson_model(5.0), c).status == SimStatus::kCandidateBudgetExhausted);
}

TEST_CASE("majorant violation") {
  Kernel::Custom spec;
  // Increasing in the lag although declared non-increasing.
  spec.value = [](double s, const Mark&, std::size_t) { return s < 1.0 ? 0.5 * s : 0.0; };
  spec.integral = [](const Mark&, std::size_t) { return 0.25; };
  spec.non_increasing = true;
  ModelSpec m = poisson_model(1.0);
  m.functional = EventFunctional::hawkes({1.0}, Kernel::custom(spec));
  try {
    (void)simulate(m, cfg(100.0, 1));
    FAIL("expected MajorantViolation");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kMajorantViolation);
  }
}

TEST_CASE("intensity path") {
  SUBCASE("constant") {
    const auto r = simulate(poisson_model(2.0), cfg(10.0, 1));
    const std::vector<double> grid{0.5, 1.0, 5.0, 10.0};
    for (const auto& row : intensity_path(poisson_model(2.0), r.trajectory, grid)) CHECK(row[0] == 2.0);
  }
  SUBCASE("jump of alpha beta right after an event") {
    const ModelSpec m = hawkes_1d(1.0, 0.5, 2.0);
    Trajectory t({}, {{1.0, {0, StateValue::discrete(0)}}}, StateValue::discrete(0));
    const std::vector<double> grid{0.5, 1.0, std::nextafter(1.0, 2.0)};
    const auto rows = intensity_path(m, t, grid);
    CHECK(rows[0][0] == 1.0);
    CHECK(rows[1][0] == 1.0);
    CHECK(rows[2][0] - rows[1][0] == doctest::Approx(1.0));
  }
}

TEST_CASE("explosion detection") {
  SUBCASE("Poisson run is not explosive") {
    const auto r = simulate(poisson_model(2.0), cfg(100.0, 1));
    CHECK_FALSE(detect_explosion(r, 100.0).suspected);
  }
  SUBCASE("quadratic pure birth explodes near pi^2 / 6") {
    SimConfig c = cfg(100.0, 3);
    c.max_events = 100000;
    const auto r = simulate(pure_birth_model(), c);
    CHECK(r.status == SimStatus::kExplosionSuspected);
    const auto rep = detect_explosion(r, 100.0);
    CHECK(rep.suspected);
    CHECK(rep.estimated_explosion_time > 0.05);
    CHECK(rep.estimated_explosion_time < 10.0);
  }
  SUBCASE("constant a(n) reaches the horizon") {
    ModelSpec m = poisson_model(1.0);
    m.functional = EventFunctional::count_power(3.0, 1.0, 0.0, 1);
    const auto r = simulate(m, cfg(100.0, 1));
    CHECK(r.status == SimStatus::kCompleted);
    CHECK_FALSE(detect_explosion(r, 100.0).suspected);
  }
}

TEST_CASE("coupled simulation") {
  SUBCASE("equal models give identical trajectories") {
    const ModelSpec m = state_hawkes_model();
    const auto r = simulate_coupled(m, m, cfg(200.0, 5));
    CHECK(r.dominated.trajectory == r.dominating.trajectory);
    CHECK(r.dominated.trajectory == simulate(m, cfg(200.0, 5)).trajectory);
  }
  SUBCASE("alpha 0.3 under alpha 0.5") {
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
      const auto r = simulate_coupled(hawkes_1d(1.0, 0.3, 1.0), hawkes_1d(1.0, 0.5, 1.0), cfg(100.0, seed));
      CHECK(r.spot_check_passed);
      const auto low = r.dominated.trajectory.events();
      const auto high = r.dominating.trajectory.events();
      std::size_t j = 0;
      for (const auto& e : low) {
        while (j < high.size() && high[j].time < e.time) ++j;
        REQUIRE(j < high.size());
        CHECK(high[j].time == e.time);
      }
    }
  }
  SUBCASE("state-dependent Hawkes under its state maximum") {
    const ModelSpec m = state_hawkes_model();
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
      CHECK_NOTHROW(simulate_coupled(m, state_maximized(m), cfg(100.0, seed)));
    }
  }
  SUBCASE("inverted domination breaches") {
    try {
      (void)simulate_coupled(hawkes_1d(1.0, 0.5, 1.0), hawkes_1d(1.0, 0.3, 1.0), cfg(100.0, 1));
      FAIL("expected DominationBreach");
    } catch (const DominationBreach& e) {
      CHECK(e.code() == ErrorCode::kDominationBreach);
      CHECK(e.offending().time > 0.0);
      CHECK(e.seed() == 1);
    }
  }
  SUBCASE("larger base rate in the dominated model") {
    const auto r = [] {
      try {
        (void)simulate_coupled(poisson_model(2.0), poisson_model(1.0), cfg(100.0, 1));
      } catch (const DominationBreach&) {
        return true;
      }
      return false;
    }();
    CHECK(r);
  }
}
