#include "prefplan/solver.hpp"

#include <algorithm>

namespace prefplan {

std::optional<Solution> solve_weight(const ActionTheory& theory, const PlanQuery& query,
                                     const Preference& pref) {
    WeightEvaluator eval(pref);
    std::optional<Solution> best;
    size_t considered = 0;
    enumerate(theory, query, [&](const Trajectory& t) {
        ++considered;
        long long w = eval.weight(t);
        if (!best || w > best->report.weight) {
            best = Solution{t, eval.evaluate(t), 0};
        }
        return true;
    });
    if (best) best->considered = considered;
    return best;
}

std::vector<Trajectory> solve_dominance(const ActionTheory& theory, const PlanQuery& query,
                                        const Preference& pref) {
    return dominance_maximal(enumerate_all(theory, query), pref);
}

CrossCheckResult cross_check(const ActionTheory& theory, const PlanQuery& query,
                             const Preference& pref) {
    CrossCheckResult result;
    std::vector<Trajectory> all = enumerate_all(theory, query);
    result.candidates = all.size();
    if (all.empty()) return result;

    std::vector<Trajectory> maximal = dominance_maximal(all, pref);
    result.maximal = maximal.size();

    std::optional<Solution> winner = solve_weight(theory, query, pref);
    result.ok = winner && std::find(maximal.begin(), maximal.end(), winner->trajectory) != maximal.end();
    return result;
}

}  // namespace prefplan
