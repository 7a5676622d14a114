#include <doctest.h>

#include <set>

#include "cpc/evaluator.hpp"
#include "support.hpp"

using namespace cpc;
using cpc::testing::toy_task;

namespace {

constexpr PdbLimits kUnlimited{1'000'000'000, 1e300};

PdbCollection collection_of(const SasTask& t, std::vector<int> vars) {
  VirtualClock clock;
  auto pdb = build_pdb(t, Pattern(std::move(vars)), original_costs(t), kUnlimited, clock);
  REQUIRE(pdb.has_value());
  PdbCollection c;
  c.pdbs.push_back(std::make_shared<const Pdb>(std::move(*pdb)));
  return c;
}

// x0 costs 3, x1 costs 4; both are goals.
SasTask two_costs() {
  SasTask t;
  t.variables = {{"x0", 2, {"0", "1"}}, {"x1", 2, {"0", "1"}}};
  t.operators = {{"set0", {{0, 0}}, {{0, 1}}, 3}, {"set1", {{1, 0}}, {{1, 1}}, 4}};
  t.initial = {0, 0};
  t.goal = {{0, 1}, {1, 1}};
  return t;
}

SampleSet fixed_sample(std::vector<State> states, std::vector<Cost> h) {
  SampleSet s;
  s.states = std::move(states);
  s.stored_h = std::move(h);
  return s;
}

}  // namespace

TEST_SUITE("evaluator") {
  TEST_CASE("mean positive cost") {
    CHECK(mean_positive_cost(toy_task()) == doctest::Approx(2.5));
    SasTask free = toy_task();
    for (auto& op : free.operators) op.cost = 0;
    CHECK(mean_positive_cost(free) == 1.0);
  }

  TEST_CASE("initial state without applicable operators") {
    SasTask t = toy_task();
    t.initial = {1, 1};
    t.goal = {{0, 0}};
    VirtualClock clock;
    Rng rng(1);
    const SampleSet s = draw_sample(t, [](const State&) { return Cost{3}; }, rng, {100, 1e300}, clock);
    CHECK(s.states == std::vector<State>{{1, 1}});
    CHECK(s.stored_h == std::vector<Cost>{3});
  }

  TEST_CASE("one requested state yields exactly one") {
    VirtualClock clock;
    Rng rng(1);
    const SampleSet s = draw_sample(toy_task(), [](const State&) { return Cost{5}; }, rng, {1, 1e300}, clock);
    CHECK(s.size() == 1);
  }

  TEST_CASE("sampled states are reachable and duplicate free") {
    const SasTask t = toy_task();
    const cpc::testing::StateSpace space(t);
    VirtualClock clock;
    Rng rng(7);
    const SampleSet s = draw_sample(t, CollectionSet{}, rng, {1000, 1e300}, clock);
    CHECK(s.size() >= 1);
    std::set<State> unique(s.states.begin(), s.states.end());
    CHECK(unique.size() == s.size());
    for (const State& x : s.states) CHECK(space.reachable()[space.index(x)]);

    std::mt19937_64 gen(4);
    for (int i = 0; i < 20; ++i) {
      const SasTask r = cpc::testing::random_task(gen);
      const cpc::testing::StateSpace rs(r);
      Rng walk(static_cast<std::uint64_t>(i));
      const auto h = [&rs](const State& x) { return rs.h_star(x).value_or(kInfiniteCost); };
      const SampleSet rsample = draw_sample(r, h, walk, {300, 1e300}, clock);
      for (std::size_t k = 0; k < rsample.size(); ++k) {
        CHECK(rs.reachable()[rs.index(rsample.states[k])]);
        CHECK(rsample.stored_h[k] == h(rsample.states[k]));
        // Walks never step into a reported dead end; only the start may be one.
        if (rsample.states[k] != r.initial) CHECK(rsample.stored_h[k] != kInfiniteCost);
      }
    }
  }

  TEST_CASE("the time limit stops the walks") {
    VirtualClock clock;
    Rng rng(2);
    const SampleSet s = draw_sample(toy_task(), CollectionSet{}, rng, {1'000'000, 5e-6}, clock);
    CHECK(clock.now() < 1e-4);
    CHECK(s.size() >= 1);
  }

  TEST_CASE("improvement ratio is inclusive at one quarter") {
    CHECK(meets_improvement_ratio(1, 4));
    CHECK_FALSE(meets_improvement_ratio(0, 4));
    CHECK(meets_improvement_ratio(2, 8));
    CHECK_FALSE(meets_improvement_ratio(1, 8));
    CHECK(meets_improvement_ratio(25, 100));
    CHECK_FALSE(meets_improvement_ratio(24, 100));
    CHECK_FALSE(meets_improvement_ratio(0, 0));
  }

  TEST_CASE("a candidate equal to the stored values never improves") {
    const SasTask t = two_costs();
    const PdbCollection c = collection_of(t, {0});
    SampleSet s = fixed_sample({{0, 0}, {1, 0}, {0, 1}, {1, 1}}, {3, 0, 3, 0});
    CHECK(count_improved(s, c) == 0);
    CHECK_FALSE(should_add(s, c));
  }

  TEST_CASE("commit raises stored values pointwise") {
    const SasTask t = two_costs();
    SampleSet s = fixed_sample({{0, 0}, {1, 0}, {0, 1}, {1, 1}}, {4, 4, 0, 0});
    s.init_h_at_sampling = 4;
    const PdbCollection c = collection_of(t, {0});
    CHECK(count_improved(s, c) == 1);
    CHECK(should_add(s, c));
    CollectionSet set;
    const CommitResult r = commit_addition(t, s, set, c);
    CHECK(s.stored_h == std::vector<Cost>{4, 4, 3, 0});
    CHECK(set.size() == 1);
    CHECK(r.removed_dead_ends == 0);
    CHECK(r.init_h == 3);
    CHECK_FALSE(r.resample_trigger);
  }

  TEST_CASE("commit drops states proven dead, except the initial state") {
    SasTask t = two_costs();
    t.operators.pop_back();  // x1 can no longer be achieved
    SampleSet s = fixed_sample({{0, 0}, {1, 0}, {0, 1}, {1, 1}}, {0, 0, 0, 0});
    CollectionSet set;
    const CommitResult r = commit_addition(t, s, set, collection_of(t, {1}));
    CHECK(r.removed_dead_ends == 1);
    CHECK(s.size() == 3);
    CHECK(s.states[0] == t.initial);
    CHECK(s.stored_h[0] == kInfiniteCost);
    CHECK(r.init_h == kInfiniteCost);
    CHECK(s.init_dead_end);
  }

  TEST_CASE("ten percent rule") {
    CHECK(rose_over_ten_percent(10, 12));
    CHECK_FALSE(rose_over_ten_percent(10, 11));
    CHECK_FALSE(rose_over_ten_percent(10, 10));
    CHECK(rose_over_ten_percent(0, 1));
    CHECK_FALSE(rose_over_ten_percent(0, 0));
    CHECK(rose_over_ten_percent(10, kInfiniteCost));
    CHECK_FALSE(rose_over_ten_percent(kInfiniteCost, kInfiniteCost));

    SasTask t;
    t.variables = {{"x", 2, {"0", "1"}}};
    t.operators = {{"set", {{0, 0}}, {{0, 1}}, 12}};
    t.initial = {0};
    t.goal = {{0, 1}};
    SampleSet s = fixed_sample({{0}}, {10});
    s.init_h_at_sampling = 10;
    CollectionSet set;
    CHECK(commit_addition(t, s, set, collection_of(t, {0})).resample_trigger);
  }

  TEST_CASE("resampling") {
    const SasTask t = two_costs();
    CollectionSet set;
    set.add(collection_of(t, {0}));
    set.add(collection_of(t, {1}));
    VirtualClock clock;
    Rng rng(3);
    SampleSet s = fixed_sample({{1, 1}}, {0});
    const SampleSet before = s;
    CHECK_FALSE(maybe_resample(t, s, false, set, rng, {50, 1e300}, clock));
    CHECK(s.states == before.states);
    CHECK(s.stored_h == before.stored_h);

    CHECK(maybe_resample(t, s, true, set, rng, {50, 1e300}, clock));
    for (std::size_t i = 0; i < s.size(); ++i) CHECK(s.stored_h[i] == max_heuristic(set, s.states[i]));
    CHECK(s.init_h_at_sampling == 4);
    const double first = s.resample_time_spent;
    CHECK(first > 0.0);
    CHECK(maybe_resample(t, s, true, set, rng, {50, 1e300}, clock));
    CHECK(s.resample_time_spent >= first);
  }

  TEST_CASE("dominance scan examples") {
    CHECK(dominance_survivors({{2, 3}, {2, 3}, {1, 4}}) == std::vector<std::size_t>{1, 2});
    CHECK(dominance_survivors({{7, 1}}) == std::vector<std::size_t>{0});
    CHECK(dominance_survivors({{1, 2}, {1, 2}}) == std::vector<std::size_t>{1});
    CHECK(dominance_survivors({{5, 0}, {0, 5}, {3, 3}}) == std::vector<std::size_t>{0, 1, 2});
    CHECK(dominance_survivors({{1, 1}, {5, 0}, {0, 5}}) == std::vector<std::size_t>{1, 2});
    CHECK(dominance_survivors({{0, 0}, {5, 0}, {0, 5}}) == std::vector<std::size_t>{1, 2});
    CHECK(dominance_survivors({}).empty());
  }

  TEST_CASE("prune_dominated keeps the maximum") {
    const SasTask t = two_costs();
    CollectionSet set;
    set.add(collection_of(t, {0}));
    set.add(collection_of(t, {1}));
    set.add(collection_of(t, {0, 1}));
    const SampleSet s = fixed_sample({{0, 0}, {1, 0}, {0, 1}}, {7, 4, 3});
    prune_dominated(set, s);
    REQUIRE(set.size() == 1);
    CHECK(set.collections()[0].patterns() == std::vector<Pattern>{Pattern({0, 1})});
  }
}
