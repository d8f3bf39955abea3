#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "prefplan/action_theory.hpp"

namespace prefplan {

/// An alternating state/action sequence s0 a1 s1 ... an sn. Suffix views
/// share the underlying sequence data.
class Trajectory {
public:
    Trajectory() = default;
    Trajectory(std::vector<State> states, std::vector<int> actions);

    /// Number of actions (the n in s0 a1 ... an sn).
    size_t length() const { return data_ ? data_->actions.size() - begin_ : 0; }
    size_t state_count() const { return length() + 1; }

    const State& state(size_t i) const { return data_->states[begin_ + i]; }
    int action(size_t i) const { return data_->actions[begin_ + i]; }
    const State& last_state() const { return data_->states[data_->states.size() - 1]; }

    /// The suffix s_i a_{i+1} ... a_n s_n. Throws IndexOutOfRange for i > length().
    Trajectory suffix(size_t i) const;

    /// True when every step is executable and lands in a transition successor.
    bool valid(const ActionTheory& theory) const;

    bool operator==(const Trajectory& other) const;

private:
    struct Data {
        std::vector<State> states;
        std::vector<int> actions;
    };
    std::shared_ptr<const Data> data_;
    size_t begin_ = 0;
};

struct PlanQuery {
    size_t max_length = 0;
    bool post_goal_actions = true;
    bool prune_visited = false;  // reachability debugging only
};

/// Depth-first enumeration of goal-achieving trajectories from the initial
/// state, actions tried in declaration order. The callback returns false to
/// stop early. With post_goal_actions=false only trajectories whose proper
/// prefixes do not achieve the goal are yielded.
void enumerate(const ActionTheory& theory, const PlanQuery& query,
               const std::function<bool(const Trajectory&)>& yield);

std::vector<Trajectory> enumerate_all(const ActionTheory& theory, const PlanQuery& query);

size_t count_trajectories(const ActionTheory& theory, const PlanQuery& query);

/// Replays an action name sequence through the transition function.
/// Throws InvalidPlan when a step is not executable or is ambiguous.
Trajectory replay(const ActionTheory& theory, const std::vector<int>& actions);

}  // namespace prefplan
