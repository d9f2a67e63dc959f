#include <doctest.h>

#include <cmath>
#include <limits>

#include <array>
#include <vector>

#include "hmpp/error.hpp"
#include "hmpp/rng.hpp"
#include "hmpp/types.hpp"

using namespace hmpp;

namespace {

EventRecord rec(double t, std::size_t e, std::size_t x) { return {t, {e, StateValue::discrete(x)}}; }

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an hmpp::Error");
  return ErrorCode::kInvalidArgument;
}

}  // namespace

TEST_CASE("event space weights") {
  EventSpace unit(3);
  CHECK(unit.size() == 3);
  CHECK(unit.total_mass() == 3.0);
  EventSpace w({0.5, 2.0});
  CHECK(w.weight(1) == 2.0);
  CHECK(w.total_mass() == 2.5);
  CHECK(code_of([] { EventSpace bad({1.0, 0.0}); }) == ErrorCode::kInvalidArgument);
  CHECK(code_of([] { EventSpace bad(std::vector<double>{}); }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("state values") {
  const auto d = StateValue::discrete(2);
  CHECK(d.is_discrete());
  CHECK(d.index() == 2);
  CHECK_THROWS_AS(d.value(), Error);
  const auto c = StateValue::continuous(-1.5);
  CHECK(c.value() == -1.5);
  CHECK_THROWS_AS(c.index(), Error);
  CHECK_THROWS_AS(StateValue::continuous(std::numeric_limits<double>::infinity()), Error);
  CHECK(StateSpace::discrete(3).contains(StateValue::discrete(2)));
  CHECK_FALSE(StateSpace::discrete(3).contains(StateValue::discrete(3)));
  CHECK(StateSpace::continuous().contains(StateValue::continuous(7.0)));
}

TEST_CASE("state functional") {
  SUBCASE("empty history returns the origin state") {
    Trajectory t({}, {}, StateValue::discrete(0));
    CHECK(state_functional(HistoryView(t, 5.0)) == StateValue::discrete(0));
  }
  SUBCASE("initial record before the cut") {
    Trajectory t({rec(-1.0, 0, 1)}, {}, StateValue::discrete(0));
    CHECK(state_functional(HistoryView(t, 0.0)) == StateValue::discrete(1));
  }
  SUBCASE("the record at exactly the cut is excluded") {
    Trajectory t({}, {rec(0.5, 0, 1), rec(0.9, 1, 0)}, StateValue::discrete(0));
    CHECK(state_functional(HistoryView(t, 0.9)) == StateValue::discrete(1));
    CHECK(state_functional(HistoryView(t, std::nextafter(0.9, 1.0))) == StateValue::discrete(0));
  }
  SUBCASE("left-continuous in the cut") {
    Trajectory t({rec(-2.0, 0, 2)}, {rec(0.5, 0, 1), rec(0.9, 1, 0), rec(1.4, 0, 2)},
                 StateValue::discrete(0));
    const std::array<double, 4> times{-2.0, 0.5, 0.9, 1.4};
    for (std::size_t k = 0; k + 1 < times.size(); ++k) {
      const auto expected = state_functional(HistoryView(t, times[k + 1]));
      for (int i = 1; i <= 50; ++i) {
        const double cut = times[k] + (times[k + 1] - times[k]) * i / 50.0;
        CHECK(state_functional(HistoryView(t, cut)) == expected);
      }
    }
  }
}

TEST_CASE("count events") {
  Trajectory empty({}, {}, StateValue::discrete(0));
  CHECK(count_events(HistoryView(empty, 10.0), {0.0, 1.0}) == 0);

  Trajectory t({}, {rec(0.1, 0, 0), rec(0.2, 1, 0), rec(0.3, 0, 0)}, StateValue::discrete(0));
  const HistoryView h(t, 10.0);
  CHECK(count_events(h, {0.0, 0.25}) == 2);
  const std::array<std::size_t, 1> only_one{1};
  CHECK(count_events(h, {0.0, 0.25}, std::span<const std::size_t>(only_one)) == 1);
  CHECK(count_events(h, {0.2, 0.3}) == 1);
  CHECK(count_events(HistoryView(t, 0.3), {0.0, 1.0}) == 2);
}

TEST_CASE("enumeration") {
  Trajectory empty({}, {}, StateValue::discrete(0));
  CHECK(to_enumeration(empty).empty());
  CHECK(from_enumeration({}, StateValue::discrete(0)).empty());

  SUBCASE("two records keep their order") {
    Trajectory t({}, {rec(0.5, 0, 1), rec(1.5, 1, 0)}, StateValue::discrete(0));
    const auto pairs = to_enumeration(t);
    REQUIRE(pairs.size() == 2);
    CHECK(pairs[0] == rec(0.5, 0, 1));
    CHECK(pairs[1] == rec(1.5, 1, 0));
  }
  SUBCASE("duplicate times are rejected") {
    CHECK(code_of([] { from_enumeration({rec(1.0, 0, 0), rec(1.0, 1, 0)}); }) ==
          ErrorCode::kNonIncreasingTimes);
    CHECK(code_of([] { from_enumeration({rec(2.0, 0, 0), rec(1.0, 1, 0)}); }) ==
          ErrorCode::kNonIncreasingTimes);
  }
  SUBCASE("split at time zero") {
    const auto t = from_enumeration({rec(-1.0, 0, 0), rec(2.0, 0, 1)}, StateValue::discrete(0));
    REQUIRE(t.initial().size() == 1);
    REQUIRE(t.events().size() == 1);
    CHECK(t.initial()[0].time == -1.0);
    CHECK(t.events()[0].time == 2.0);
  }
  SUBCASE("time zero belongs to the initial condition") {
    const auto t = from_enumeration({rec(0.0, 0, 0)}, StateValue::discrete(0));
    CHECK(t.initial().size() == 1);
    CHECK(t.events().empty());
  }
  SUBCASE("random round trips") {
    Rng rng(11);
    for (int trial = 0; trial < 500; ++trial) {
      std::vector<EventRecord> pairs;
      double time = -5.0 * rng.uniform();
      const int n = static_cast<int>(rng.uniform() * 40.0);
      for (int i = 0; i < n; ++i) {
        time += rng.exponential(2.0);
        pairs.push_back(rec(time, static_cast<std::size_t>(rng.uniform() * 3.0),
                            static_cast<std::size_t>(rng.uniform() * 4.0)));
      }
      const auto t = from_enumeration(pairs, StateValue::discrete(1));
      CHECK(to_enumeration(t) == pairs);
      CHECK(from_enumeration(to_enumeration(t), StateValue::discrete(1)) == t);
    }
  }
}

TEST_CASE("trajectory invariants") {
  CHECK(code_of([] { Trajectory({rec(0.5, 0, 0)}, {}, StateValue::discrete(0)); }) == ErrorCode::kInvalidArgument);
  CHECK(code_of([] { Trajectory({}, {rec(0.0, 0, 0)}, StateValue::discrete(0)); }) == ErrorCode::kInvalidArgument);
  CHECK(code_of([] { Trajectory({}, {rec(1.0, 0, 0), rec(0.5, 0, 0)}, StateValue::discrete(0)); }) ==
        ErrorCode::kNonIncreasingTimes);
}
