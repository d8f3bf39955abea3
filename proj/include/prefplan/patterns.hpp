#pragma once

#include <map>

#include "prefplan/preference.hpp"

namespace prefplan {

/// Prefer goal achievement as early as possible within horizon n: the chain
/// sigma^0(phi) <| ... <| sigma^n(phi) where sigma^i states that phi first
/// becomes true after exactly i steps.
AtomicPreference shortest_formula(size_t n, const Formula& goal);

struct ShortestActionTransform {
    ActionTheory theory;
    Desire short_desire;  // always((stop | noop) <e (a1 | ... | ak))
    int stop_action = -1;
    int noop_action = -1;
    int ended_fluent = -1;
};

/// Adds stop/noop padding actions and an `ended` fluent: stop fires once the
/// goal holds, noop fills the remaining slots, and every original action
/// additionally requires -ended. Throws NameClash when the names are taken.
ShortestActionTransform shortest_action_transform(const ActionTheory& theory);

struct CheapestTransform {
    ActionTheory theory;
    AtomicPreference preference;  // goal(scost(m)) <| ... <| goal(scost(M))
    std::vector<int> scost_fluents;
};

/// Tracks accumulated action cost in an scost(v) fluent family over 0..max_cost
/// and prefers cheaper final values. Actions whose execution would push the
/// sum beyond max_cost are made inexecutable in those states.
CheapestTransform cheapest_transform(const ActionTheory& theory,
                                     const std::map<int, long long>& action_costs, long long min_cost,
                                     long long max_cost);

/// Conservative pre-check: with per-step costs from `action_costs` and the
/// given horizon, a reachable sum may exceed max_cost. Throws CostOverflow.
void check_cost_bound(const std::map<int, long long>& action_costs, size_t horizon,
                      long long max_cost);

/// Cost file: `cost(<action>, <n>).` lines plus an optional `default <n>.`
/// statement. Costs must end up total over the declared actions.
std::map<int, long long> parse_costs(const std::string& text, const ActionTheory& theory);

}  // namespace prefplan
