#pragma once

#include "prefplan/planner.hpp"
#include "prefplan/preference.hpp"

namespace prefplan {

enum class Comparison { LeftPreferred, RightPreferred, Indistinguishable, Incomparable };

const char* to_string(Comparison c);

inline Comparison flip(Comparison c) {
    if (c == Comparison::LeftPreferred) return Comparison::RightPreferred;
    if (c == Comparison::RightPreferred) return Comparison::LeftPreferred;
    return c;
}

/// Desire satisfaction on a trajectory. Memoizes per (subformula, suffix
/// index); the table is rebuilt for every trajectory, so instances are cheap
/// to create and safe to reuse.
class SatisfactionChecker {
public:
    explicit SatisfactionChecker(const Desire& desire);

    bool satisfies(const Trajectory& trajectory) const;
    /// Satisfaction of the suffix starting at index i.
    bool satisfies_suffix(const Trajectory& trajectory, size_t i) const;

    size_t node_count() const { return nodes_.size(); }

private:
    bool eval(size_t node, size_t t, const Trajectory& traj, std::vector<signed char>& memo) const;

    std::shared_ptr<const Desire> root_;  // owned copy; node pointers stay valid across moves
    std::vector<const Desire*> nodes_;    // preorder
    std::vector<std::array<int, 2>> kid_index_;
};

bool satisfies(const Trajectory& trajectory, const Desire& desire);

/// Single-desire ordering: left preferred iff it alone satisfies the desire;
/// both or neither satisfying makes the trajectories indistinguishable.
Comparison compare_basic(const Trajectory& a, const Trajectory& b, const Desire& desire);

/// Lexicographic first-difference ordering over the chain. Total: never
/// Incomparable.
Comparison compare_atomic(const Trajectory& a, const Trajectory& b, const AtomicPreference& pref);

/// Full preference-algebra ordering. Partial: Incomparable when neither
/// direction is preferred and the trajectories are not indistinguishable.
Comparison compare_general(const Trajectory& a, const Trajectory& b, const Preference& pref);

/// All trajectories not strictly dominated within the candidate set.
std::vector<Trajectory> dominance_maximal(const std::vector<Trajectory>& candidates,
                                          const Preference& pref);

}  // namespace prefplan
