#pragma once

#include "prefplan/weights.hpp"

namespace prefplan {

enum class SolveMode { Weight, Dominance };

struct Solution {
    Trajectory trajectory;
    WeightReport report;
    size_t considered = 0;  // trajectories enumerated
};

/// Weight-maximising search over the bounded enumeration. Ties go to the
/// first trajectory found, so results are deterministic. Returns nullopt
/// when no trajectory achieves the goal.
std::optional<Solution> solve_weight(const ActionTheory& theory, const PlanQuery& query,
                                     const Preference& pref);

/// Oracle mode: materialises the enumeration and returns the full set of
/// undominated trajectories. Exponential in pairs; desk-scale inputs only.
std::vector<Trajectory> solve_dominance(const ActionTheory& theory, const PlanQuery& query,
                                        const Preference& pref);

struct CrossCheckResult {
    bool ok = true;
    size_t candidates = 0;
    size_t maximal = 0;
};

/// Soundness audit: the weight-mode winner must be a member of the
/// dominance-maximal set. Vacuously true when there is no plan.
CrossCheckResult cross_check(const ActionTheory& theory, const PlanQuery& query,
                             const Preference& pref);

}  // namespace prefplan
