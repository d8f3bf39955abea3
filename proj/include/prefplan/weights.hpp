#pragma once

#include <optional>

#include "prefplan/semantics.hpp"

namespace prefplan {

/// Per-node weight breakdown. `max_bound` is a strict upper bound on the
/// weights achievable at the node (one above the achievable maximum);
/// `rule_max` is the structural max value used as the chain multiplier and
/// the negation subtrahend.
struct WeightNode {
    int id = 0;
    int parent = -1;
    std::string label;
    long long weight = 0;
    long long max_bound = 0;
    long long rule_max = 0;
};

struct WeightReport {
    long long weight = 0;
    long long max_bound = 0;
    std::vector<WeightNode> nodes;
};

long long checked_add(long long a, long long b);
long long checked_mul(long long a, long long b);

/// Evaluates trajectory weights for one preference. Construction precomputes
/// the structural bounds; evaluation walks the trajectory's satisfaction
/// pattern. Weights are admissible: strictly preferred trajectories get
/// strictly greater weights, indistinguishable ones equal weights.
class WeightEvaluator {
public:
    explicit WeightEvaluator(const Preference& pref);
    ~WeightEvaluator();
    WeightEvaluator(WeightEvaluator&&) noexcept;
    WeightEvaluator& operator=(WeightEvaluator&&) noexcept;

    WeightReport evaluate(const Trajectory& trajectory) const;
    long long weight(const Trajectory& trajectory) const { return evaluate(trajectory).weight; }

    /// Structural max recursion: 2 for a basic desire, 2^k for an atomic
    /// chain, sums for & and |, pass-through for negation, N2*N1+N2 for a
    /// binary lexicographic node. This is the value the weight formulas use
    /// as multiplier and subtrahend.
    long long rule_max() const { return rule_max_root_; }

    /// Strict bound: every achievable weight is < max_bound().
    long long max_bound() const { return strict_bound_root_; }

private:
    struct Node;
    int build(const Preference& pref);
    long long eval_node(int id, const Trajectory& traj, std::vector<WeightNode>& out, int parent) const;

    std::vector<Node> nodes_;
    long long rule_max_root_ = 0;
    long long strict_bound_root_ = 0;
};

long long max_weight(const Preference& pref);

WeightReport weight(const Trajectory& trajectory, const Preference& pref);

struct AdmissibilityViolation {
    size_t left = 0, right = 0;
    Comparison comparison = Comparison::Indistinguishable;
    long long left_weight = 0, right_weight = 0;
};

struct AdmissibilityReport {
    bool ok = true;
    size_t pairs_checked = 0;
    std::optional<AdmissibilityViolation> violation;
};

/// Verifies over all ordered pairs that preference implies strictly greater
/// weight and indistinguishability implies equal weight.
AdmissibilityReport check_admissible(const std::vector<Trajectory>& trajectories,
                                     const Preference& pref);

}  // namespace prefplan
