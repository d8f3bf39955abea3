#include <doctest.h>

#include "prefplan/weights.hpp"
#include "support.hpp"

using namespace prefplan;
using namespace testsupport;

namespace {

Desire lit(const Problem& p, const std::string& name, bool positive = true) {
    int f = p.theory.fluent_id(name);
    REQUIRE(f >= 0);
    return Desire::state(Formula::literal({f, positive}));
}

// direct evaluation of the atomic weight sum, independent of WeightEvaluator
long long oracle_atomic_weight(const Trajectory& t, const AtomicPreference& pref) {
    long long w = 0;
    size_t k = pref.chain.size();
    for (size_t r = 0; r < k; ++r)
        if (satisfies(t, pref.chain[r])) w += 1LL << (k - 1 - r);
    return w;
}

}  // namespace

TEST_CASE("basic desire weight is satisfaction with bound two") {
    Problem p = travel();
    Trajectory t = replay(p.theory, {});
    Desire home = lit(p, "at(home)");

    WeightReport sat = weight(t, Preference::desire(home));
    CHECK(sat.weight == 1);
    CHECK(sat.max_bound == 2);
    CHECK(max_weight(Preference::desire(home)) == 2);

    WeightReport unsat = weight(t, Preference::desire(lit(p, "at(school)")));
    CHECK(unsat.weight == 0);
}

TEST_CASE("atomic chain weights follow the power-of-two sum") {
    Problem p = travel();
    Trajectory t = replay(p.theory, {});
    // first element satisfied, second not
    AtomicPreference chain{{lit(p, "at(home)"), lit(p, "at(school)")}};
    Preference pref = Preference::make_atomic(chain);

    CHECK(oracle_atomic_weight(t, chain) == 2);
    WeightReport report = weight(t, pref);
    CHECK(report.weight == 2);
    CHECK(report.max_bound == 4);
    CHECK(max_weight(pref) == 4);

    std::mt19937 rng(3);
    for (int round = 0; round < 100; ++round) {
        RandomDomainOptions opt;
        opt.max_fluents = 4;
        ActionTheory theory = random_theory(rng, opt);
        auto walk = random_walk(rng, theory, rng() % 3);
        if (!walk) continue;
        AtomicPreference random_chain;
        size_t k = 1 + rng() % 4;
        for (size_t i = 0; i < k; ++i) random_chain.chain.push_back(random_desire(rng, theory, 2));
        CHECK(weight(*walk, Preference::make_atomic(random_chain)).weight ==
              oracle_atomic_weight(*walk, random_chain));
    }
}

TEST_CASE("reversal weight subtracts from the structural max") {
    Problem p = travel();
    Trajectory t = replay(p.theory, {});
    Preference reversed = Preference::neg(Preference::desire(lit(p, "at(school)")));

    WeightReport report = weight(t, reversed);
    CHECK(report.weight == 2);  // max(basic) - 0
    CHECK(max_weight(reversed) == 2);
    // the strict bound stays above the achievable weight
    CHECK(report.max_bound == 3);
    CHECK(report.weight < report.max_bound);
}

TEST_CASE("structural max recursion") {
    Problem p = travel();
    Desire a = lit(p, "at(home)");
    Preference basic = Preference::desire(a);

    CHECK(max_weight(Preference::conj(basic, basic)) == 4);
    CHECK(max_weight(Preference::disj(basic, basic)) == 4);
    CHECK(max_weight(Preference::make(Preference::Kind::Chain, {basic, basic})) == 6);

    AtomicPreference three{{a, a, a}};
    CHECK(max_weight(Preference::neg(Preference::make_atomic(three))) == 8);
}

TEST_CASE("conjunction and disjunction weights add up") {
    Problem p = travel();
    Trajectory t = replay(p.theory, {});
    Desire home = lit(p, "at(home)");
    Desire school = lit(p, "at(school)");
    for (auto kind : {Preference::Kind::Conj, Preference::Kind::Disj}) {
        Preference pref =
            Preference::make(kind, {Preference::desire(home), Preference::desire(school)});
        CHECK(weight(t, pref).weight == 1);
    }
}

TEST_CASE("chain weight scales the left component by the right max") {
    Problem p = travel();
    Trajectory t = replay(p.theory, {});
    Desire home = lit(p, "at(home)");
    Desire school = lit(p, "at(school)");
    Preference chain =
        Preference::make(Preference::Kind::Chain, {Preference::desire(home), Preference::desire(school)});
    // w = max(right) * w(left) + w(right) = 2*1 + 0
    CHECK(weight(t, chain).weight == 2);

    Preference flipped =
        Preference::make(Preference::Kind::Chain, {Preference::desire(school), Preference::desire(home)});
    CHECK(weight(t, flipped).weight == 1);
}

TEST_CASE("headroom holds at every node of randomized trees") {
    std::mt19937 rng(13);
    size_t evaluated = 0;
    while (evaluated < 300) {
        RandomDomainOptions opt;
        opt.max_fluents = 4;
        ActionTheory theory = random_theory(rng, opt);
        auto walk = random_walk(rng, theory, rng() % 4);
        if (!walk) continue;
        Preference pref = random_preference(rng, theory, 3);
        WeightReport report = weight(*walk, pref);
        for (const WeightNode& node : report.nodes) {
            CHECK(node.weight >= 0);
            CHECK(node.weight < node.max_bound);
        }
        ++evaluated;
    }
}

TEST_CASE("weight breakdown tree is parent-linked") {
    Problem p = travel();
    Trajectory t = replay(p.theory, {});
    Preference pref = Preference::conj(Preference::desire(lit(p, "at(home)")),
                                       Preference::neg(Preference::desire(lit(p, "has_money"))));
    WeightReport report = weight(t, pref);
    REQUIRE(report.nodes.size() == 4);
    CHECK(report.nodes[0].parent == -1);
    for (size_t i = 1; i < report.nodes.size(); ++i) {
        CHECK(report.nodes[i].parent >= 0);
        CHECK(report.nodes[i].parent < int(report.nodes.size()));
    }
    CHECK(report.nodes[0].weight == report.weight);
}

TEST_CASE("atomic weights decide comparisons in both directions") {
    std::mt19937 rng(17);
    size_t pairs = 0;
    while (pairs < 300) {
        RandomDomainOptions opt;
        opt.max_fluents = 4;
        ActionTheory theory = random_theory(rng, opt);
        auto a = random_walk(rng, theory, rng() % 4);
        auto b = random_walk(rng, theory, rng() % 4);
        if (!a || !b) continue;
        AtomicPreference chain;
        size_t k = 1 + rng() % 3;
        for (size_t i = 0; i < k; ++i) chain.chain.push_back(random_desire(rng, theory, 2));
        ++pairs;

        long long wa = oracle_atomic_weight(*a, chain);
        long long wb = oracle_atomic_weight(*b, chain);
        Comparison c = compare_atomic(*a, *b, chain);
        CHECK((c == Comparison::LeftPreferred) == (wa > wb));
        CHECK((c == Comparison::RightPreferred) == (wa < wb));
        CHECK((c == Comparison::Indistinguishable) == (wa == wb));
    }
}

TEST_CASE("admissibility of singleton and coffee candidate sets") {
    CHECK(check_admissible({}, Preference::desire(Desire::state(Formula::constant(true)))).ok);

    Problem p = coffee();
    std::vector<Trajectory> all = enumerate_all(p.theory, {3, true, false});
    REQUIRE(all.size() > 3);
    CHECK(check_admissible({all.front()}, Preference::desire(Desire::state(Formula::constant(true)))).ok);

    Desire time = parse_desire(
        "always(occ(buy_coffee) || ((take_taxi(home,cshop) <e walk(home,cshop)) && "
        "(take_taxi(cshop,school) <e walk(cshop,school))))", p);
    Desire cost = parse_desire(
        "always(occ(buy_coffee) || ((walk(home,cshop) <e take_taxi(home,cshop)) && "
        "(walk(cshop,school) <e take_taxi(cshop,school))))", p);
    Preference either = Preference::disj(Preference::desire(time), Preference::desire(cost));
    AdmissibilityReport report = check_admissible(all, either);
    CHECK(report.ok);
    CHECK(report.pairs_checked == all.size() * (all.size() - 1));
}

TEST_CASE("admissibility holds on randomized domains and preferences") {
    std::mt19937 rng(19);
    size_t checked_sets = 0;
    while (checked_sets < 60) {
        RandomDomainOptions opt;
        opt.max_fluents = 4;
        opt.max_actions = 3;
        ActionTheory theory = random_theory(rng, opt);
        theory.goal = random_formula(rng, theory, 1);
        std::vector<Trajectory> trajectories;
        try {
            trajectories = enumerate_all(theory, {3, true, false});
        } catch (const Error&) {
            continue;
        }
        if (trajectories.empty()) continue;
        if (trajectories.size() > 60) trajectories.resize(60);
        Preference pref = random_preference(rng, theory, 2);
        AdmissibilityReport report = check_admissible(trajectories, pref);
        if (!report.ok) {
            CAPTURE(report.violation->left);
            CAPTURE(report.violation->right);
            CAPTURE(report.violation->left_weight);
            CAPTURE(report.violation->right_weight);
        }
        CHECK(report.ok);
        ++checked_sets;
    }
}

TEST_CASE("weight arithmetic overflow is reported") {
    Problem p = travel();
    // a chain of long atomic preferences multiplies bounds beyond 2^63
    AtomicPreference wide;
    for (int i = 0; i < 16; ++i) wide.chain.push_back(lit(p, "at(home)"));
    std::vector<Preference> kids(4, Preference::make_atomic(wide));
    Preference deep = Preference::make(Preference::Kind::Chain, kids);
    std::vector<Preference> kids2(4, deep);
    Preference deeper = Preference::make(Preference::Kind::Chain, kids2);
    CHECK_THROWS_AS((void)max_weight(deeper), Error);
}
