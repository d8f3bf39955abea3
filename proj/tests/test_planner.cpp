#include <doctest.h>

#include <sstream>

#include "support.hpp"

using namespace prefplan;
using namespace testsupport;

namespace {

// ten transport methods along a fixed 3-leg chain l1 -> l2 -> l3 -> l4
std::string three_leg_chain() {
    std::ostringstream out;
    out << "sort loc = {l1, l2, l3, l4}.\n";
    out << "fluent at(loc).\n";
    out << "caused -at(L2) if at(L1), L1 != L2.\n";
    for (int m = 0; m < 10; ++m) {
        for (int leg = 1; leg <= 3; ++leg) {
            std::string name = "m" + std::to_string(m) + "_leg" + std::to_string(leg);
            std::string from = "l" + std::to_string(leg);
            std::string to = "l" + std::to_string(leg + 1);
            out << "action " << name << ".\n";
            out << name << " causes at(" << to << ") if at(" << from << ").\n";
            out << name << " executable_if at(" << from << ").\n";
        }
    }
    out << "initially at(l1).\n";
    out << "goal at(l4).\n";
    return out.str();
}

}  // namespace

TEST_CASE("suffix shares data and checks bounds") {
    Problem p = travel();
    Trajectory t = replay(p.theory, {p.theory.action_id("walk(home,school)"),
                                     p.theory.action_id("walk(school,home)")});
    CHECK(t.suffix(0) == t);
    Trajectory tail = t.suffix(2);
    CHECK(tail.length() == 0);
    CHECK(tail.state(0) == t.state(2));
    CHECK_THROWS_AS((void)t.suffix(3), Error);
}

TEST_CASE("enumerate finds the walk plan at horizon 1") {
    Problem p = travel();
    std::vector<Trajectory> all = enumerate_all(p.theory, {1, true, false});
    REQUIRE(all.size() == 1);
    CHECK(all[0].length() == 1);
    CHECK(all[0].action(0) == p.theory.action_id("walk(home,school)"));
}

TEST_CASE("goal true initially yields exactly the empty trajectory") {
    Problem p = load_domain(R"(
        fluent sun.
        action wait.
        wait causes sun.
        wait executable_if true.
        initially sun.
        goal sun.
    )");
    std::vector<Trajectory> all = enumerate_all(p.theory, {3, false, false});
    REQUIRE(all.size() == 1);
    CHECK(all[0].length() == 0);
}

TEST_CASE("horizon 0 with an unachieved goal yields nothing") {
    Problem p = travel();
    CHECK(count_trajectories(p.theory, {0, true, false}) == 0);
}

TEST_CASE("a 3-leg chain with 10 methods per leg has 1000 plans") {
    Problem p = load_domain(three_leg_chain());
    CHECK(count_trajectories(p.theory, {3, true, false}) == 1000);
    CHECK(count_trajectories(p.theory, {3, false, false}) == 1000);
}

TEST_CASE("counts match the exhaustive oracle on random domains") {
    std::mt19937 rng(11);
    size_t nonzero = 0;
    for (int round = 0; round < 60; ++round) {
        RandomDomainOptions opt;
        opt.max_fluents = 4;
        opt.max_actions = 3;
        ActionTheory t = random_theory(rng, opt);
        t.goal = random_formula(rng, t, 2);
        for (bool post_goal : {true, false}) {
            size_t expected;
            try {
                expected = oracle_count(t, 3, post_goal);
            } catch (const Error&) {
                CHECK_THROWS_AS((void)count_trajectories(t, {3, post_goal, false}), Error);
                continue;
            }
            size_t got = count_trajectories(t, {3, post_goal, false});
            CHECK(got == expected);
            if (got > 0) ++nonzero;
        }
    }
    CHECK(nonzero > 10);
}

TEST_CASE("enumeration is deterministic and yields valid goal trajectories") {
    Problem p = coffee();
    PlanQuery q{3, true, false};
    std::vector<Trajectory> first = enumerate_all(p.theory, q);
    std::vector<Trajectory> second = enumerate_all(p.theory, q);
    REQUIRE(first.size() == second.size());
    for (size_t i = 0; i < first.size(); ++i) CHECK(first[i] == second[i]);
    for (const Trajectory& t : first) {
        CHECK(t.valid(p.theory));
        CHECK(holds(t.state(t.length()), p.theory.goal));
    }
}

TEST_CASE("without post-goal actions no proper prefix achieves the goal") {
    Problem p = coffee();
    for (const Trajectory& t : enumerate_all(p.theory, {3, false, false}))
        for (size_t i = 0; i < t.length(); ++i) CHECK_FALSE(holds(t.state(i), p.theory.goal));
}

TEST_CASE("early stop via the callback") {
    Problem p = coffee();
    size_t seen = 0;
    enumerate(p.theory, {3, true, false}, [&](const Trajectory&) { return ++seen < 2; });
    CHECK(seen == 2);
}

TEST_CASE("prune-visited skips repeated states") {
    Problem p = travel();
    // walking back and forth revisits states; pruning drops those branches
    size_t full = count_trajectories(p.theory, {4, true, false});
    size_t pruned = count_trajectories(p.theory, {4, true, true});
    CHECK(pruned < full);
    CHECK(pruned > 0);
}

TEST_CASE("replay validates executability") {
    Problem p = travel();
    int taxi = p.theory.action_id("take_taxi(home,school)");
    CHECK_THROWS_WITH_AS((void)replay(p.theory, {taxi}), doctest::Contains("not executable"), Error);
}
