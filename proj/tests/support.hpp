#pragma once

// Shared fixtures and independent oracles for the test suites. The oracles
// work from the definitions directly (exhaustive enumeration), not through
// the library's search or closure code paths.

#include <algorithm>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "prefplan/parser.hpp"
#include "prefplan/planner.hpp"

namespace testsupport {

using namespace prefplan;

// ---- domains ----

inline const char* kTravelDomain = R"(
% two-location travel domain
sort location = {home, school}.

fluent at(location).
fluent available_taxi(location).
fluent has_money.

action walk(location, location).
action call_taxi(location).
action take_taxi(location, location).

walk(L1,L2) causes at(L2) if at(L1), L1 != L2.
walk(L1,L2) executable_if at(L1), L1 != L2.

call_taxi(L) causes available_taxi(L) if has_money.
call_taxi(L) executable_if has_money.

take_taxi(L1,L2) causes at(L2) if at(L1), L1 != L2.
take_taxi(L1,L2) executable_if at(L1), available_taxi(L1), L1 != L2.

caused -at(L2) if at(L1), L1 != L2.

initially at(home).
initially has_money.

goal at(school).
)";

inline const char* kCoffeeDomain = R"(
sort location = {home, school, cshop}.

fluent at(location).
fluent available_taxi(location).
fluent has_money.
fluent has_coffee.

action walk(location, location).
action take_taxi(location, location).
action buy_coffee.

walk(L1,L2) causes at(L2) if at(L1), L1 != L2.
walk(L1,L2) executable_if at(L1), L1 != L2.

take_taxi(L1,L2) causes at(L2) if at(L1), L1 != L2.
take_taxi(L1,L2) executable_if at(L1), available_taxi(L1), L1 != L2.

buy_coffee causes has_coffee.
buy_coffee causes -has_money.
buy_coffee executable_if at(cshop), has_money.

caused -at(L2) if at(L1), L1 != L2.

initially at(home).
initially has_money.
initially available_taxi(home).
initially available_taxi(school).
initially available_taxi(cshop).

goal at(school).
)";

inline Problem travel() { return load_domain(kTravelDomain); }
inline Problem coffee() { return load_domain(kCoffeeDomain); }

// ---- independent closure + transition oracle ----

// closure under static laws, written against the definition with plain sets
inline std::set<FluentLiteral> oracle_closure(std::set<FluentLiteral> lits,
                                              const std::vector<StaticLaw>& laws) {
    bool changed = true;
    while (changed) {
        changed = false;
        for (const StaticLaw& law : laws) {
            bool applicable = true;
            for (FluentLiteral b : law.body)
                if (!lits.count(b)) {
                    applicable = false;
                    break;
                }
            if (applicable && !lits.count(law.head)) {
                lits.insert(law.head);
                changed = true;
            }
        }
    }
    return lits;
}

// all successor states by checking the fixpoint equation over every complete
// assignment; only usable on small fluent counts
inline std::vector<State> oracle_transition(const ActionTheory& theory, int action,
                                            const State& state) {
    std::vector<State> out;
    size_t n = theory.fluent_count();
    std::set<FluentLiteral> effects;
    for (const DynamicLaw& law : theory.dynamic) {
        if (law.action != action) continue;
        bool fires = true;
        for (FluentLiteral p : law.preconditions)
            if (!state.holds(p)) {
                fires = false;
                break;
            }
        if (fires) effects.insert(law.effect);
    }
    for (size_t bits = 0; bits < (size_t(1) << n); ++bits) {
        State candidate(n);
        for (size_t f = 0; f < n; ++f) candidate.set({int(f), ((bits >> f) & 1) != 0});
        std::set<FluentLiteral> base = effects;
        for (size_t f = 0; f < n; ++f) {
            FluentLiteral l{int(f), state.holds({int(f), true})};
            if (candidate.holds(l)) base.insert(l);  // s intersect s'
        }
        std::set<FluentLiteral> closed = oracle_closure(base, theory.static_laws);
        bool equal = true;
        for (size_t f = 0; f < n && equal; ++f) {
            FluentLiteral l{int(f), candidate.holds({int(f), true})};
            equal = closed.count(l) && !closed.count(l.complement());
        }
        if (equal && closed.size() == n) out.push_back(candidate);
    }
    return out;
}

// ---- exhaustive trajectory oracle ----

// plain depth-first recursion, independent of the Trajectory machinery
inline void oracle_enumerate(const ActionTheory& theory, const State& current,
                             std::vector<int>& actions, size_t max_length, bool post_goal,
                             size_t& count, std::vector<std::vector<int>>* sink) {
    bool goal_now = holds(current, theory.goal);
    if (goal_now) {
        ++count;
        if (sink) sink->push_back(actions);
        if (!post_goal) return;
    }
    if (actions.size() == max_length) return;
    for (size_t a = 0; a < theory.action_count(); ++a) {
        if (!executable(theory, int(a), current)) continue;
        for (const State& next : oracle_transition(theory, int(a), current)) {
            actions.push_back(int(a));
            oracle_enumerate(theory, next, actions, max_length, post_goal, count, sink);
            actions.pop_back();
        }
    }
}

inline size_t oracle_count(const ActionTheory& theory, size_t max_length, bool post_goal) {
    std::vector<int> actions;
    size_t count = 0;
    oracle_enumerate(theory, initial_state(theory), actions, max_length, post_goal, count, nullptr);
    return count;
}

// ---- random generators (fixed seeds keep runs reproducible) ----

struct RandomDomainOptions {
    size_t min_fluents = 3, max_fluents = 5;
    size_t min_actions = 2, max_actions = 4;
    size_t max_dynamic_per_action = 2;
    size_t max_static = 2;
    bool allow_static = true;
};

inline ActionTheory random_theory(std::mt19937& rng, const RandomDomainOptions& opt = {}) {
    auto pick = [&](size_t lo, size_t hi) {
        return lo + rng() % (hi - lo + 1);
    };
    ActionTheory theory;
    size_t nf = pick(opt.min_fluents, opt.max_fluents);
    size_t na = pick(opt.min_actions, opt.max_actions);
    for (size_t f = 0; f < nf; ++f) theory.fluent_names.push_back("f" + std::to_string(f));
    for (size_t a = 0; a < na; ++a) theory.action_names.push_back("a" + std::to_string(a));

    auto random_literal = [&] {
        return FluentLiteral{int(rng() % nf), rng() % 2 == 0};
    };
    for (size_t a = 0; a < na; ++a) {
        size_t laws = 1 + rng() % opt.max_dynamic_per_action;
        for (size_t i = 0; i < laws; ++i) {
            DynamicLaw law{int(a), random_literal(), {}};
            size_t pre = rng() % 3;
            for (size_t p = 0; p < pre; ++p) law.preconditions.push_back(random_literal());
            theory.dynamic.push_back(std::move(law));
        }
        ExecCondition cond{int(a), {}};
        size_t body = rng() % 2;
        for (size_t p = 0; p < body; ++p) cond.body.push_back(random_literal());
        theory.exec.push_back(std::move(cond));
    }
    if (opt.allow_static) {
        size_t ns = rng() % (opt.max_static + 1);
        for (size_t i = 0; i < ns; ++i) {
            StaticLaw law{random_literal(), {random_literal()}};
            theory.static_laws.push_back(std::move(law));
        }
    }
    // initial state: random positives, rest default negative; retry callers
    // must tolerate Inconsistent
    for (size_t f = 0; f < nf; ++f)
        if (rng() % 2 == 0) theory.initial.push_back({int(f), true});
    theory.goal = Formula::constant(true);
    return theory;
}

inline Formula random_formula(std::mt19937& rng, const ActionTheory& theory, size_t depth) {
    size_t kind = depth == 0 ? 0 : rng() % 4;
    switch (kind) {
        default:
        case 0:
            return Formula::literal({int(rng() % theory.fluent_count()), rng() % 2 == 0});
        case 1:
            return Formula::negation(random_formula(rng, theory, depth - 1));
        case 2:
        case 3: {
            std::vector<Formula> kids;
            size_t n = 2 + rng() % 2;
            for (size_t i = 0; i < n; ++i) kids.push_back(random_formula(rng, theory, depth - 1));
            return kind == 2 ? Formula::conjunction(std::move(kids))
                             : Formula::disjunction(std::move(kids));
        }
    }
}

inline Desire random_desire(std::mt19937& rng, const ActionTheory& theory, size_t depth) {
    size_t kind = depth == 0 ? rng() % 3 : rng() % 10;
    switch (kind) {
        default:
        case 0:
            return Desire::state(Formula::literal({int(rng() % theory.fluent_count()), rng() % 2 == 0}));
        case 1:
            return Desire::occ(int(rng() % theory.action_count()));
        case 2:
            return Desire::goal(random_formula(rng, theory, 1));
        case 3:
            return Desire::conj(random_desire(rng, theory, depth - 1),
                                random_desire(rng, theory, depth - 1));
        case 4:
            return Desire::disj(random_desire(rng, theory, depth - 1),
                                random_desire(rng, theory, depth - 1));
        case 5:
            return Desire::neg(random_desire(rng, theory, depth - 1));
        case 6:
            return Desire::make(Desire::Kind::Next, {random_desire(rng, theory, depth - 1)});
        case 7:
            return Desire::make(Desire::Kind::Until, {random_desire(rng, theory, depth - 1),
                                                      random_desire(rng, theory, depth - 1)});
        case 8:
            return Desire::make(Desire::Kind::Always, {random_desire(rng, theory, depth - 1)});
        case 9:
            return Desire::make(Desire::Kind::Eventually, {random_desire(rng, theory, depth - 1)});
    }
}

inline Preference random_preference(std::mt19937& rng, const ActionTheory& theory, size_t depth) {
    size_t kind = depth == 0 ? 0 : rng() % 5;
    switch (kind) {
        default:
        case 0: {
            AtomicPreference atomic;
            size_t k = 1 + rng() % 3;
            for (size_t i = 0; i < k; ++i) atomic.chain.push_back(random_desire(rng, theory, 2));
            return Preference::make_atomic(std::move(atomic));
        }
        case 1:
            return Preference::conj(random_preference(rng, theory, depth - 1),
                                    random_preference(rng, theory, depth - 1));
        case 2:
            return Preference::disj(random_preference(rng, theory, depth - 1),
                                    random_preference(rng, theory, depth - 1));
        case 3:
            return Preference::neg(random_preference(rng, theory, depth - 1));
        case 4: {
            std::vector<Preference> kids;
            size_t k = 2 + rng() % 2;
            for (size_t i = 0; i < k; ++i)
                kids.push_back(random_preference(rng, theory, depth - 1));
            return Preference::make(Preference::Kind::Chain, std::move(kids));
        }
    }
}

// random valid trajectory via a bounded random walk; nullopt when stuck
inline std::optional<Trajectory> random_walk(std::mt19937& rng, const ActionTheory& theory,
                                             size_t steps) {
    std::vector<State> states;
    std::vector<int> actions;
    try {
        states.push_back(initial_state(theory));
    } catch (const Error&) {
        return std::nullopt;
    }
    for (size_t i = 0; i < steps; ++i) {
        std::vector<int> executables;
        for (size_t a = 0; a < theory.action_count(); ++a)
            if (executable(theory, int(a), states.back())) executables.push_back(int(a));
        if (executables.empty()) break;
        int action = executables[rng() % executables.size()];
        std::vector<State> succ = transition(theory, action, states.back());
        if (succ.empty()) break;
        actions.push_back(action);
        states.push_back(succ[rng() % succ.size()]);
    }
    return Trajectory(std::move(states), std::move(actions));
}

}  // namespace testsupport
