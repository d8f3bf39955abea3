#include "prefplan/planner.hpp"

#include <algorithm>
#include <cassert>
#include <set>

namespace prefplan {

Trajectory::Trajectory(std::vector<State> states, std::vector<int> actions) {
    auto data = std::make_shared<Data>();
    data->states = std::move(states);
    data->actions = std::move(actions);
    if (data->states.size() != data->actions.size() + 1)
        fail(Error::Code::InvalidPlan, "trajectory needs exactly one more state than actions");
    data_ = std::move(data);
}

Trajectory Trajectory::suffix(size_t i) const {
    if (i > length())
        fail(Error::Code::IndexOutOfRange,
             "suffix index " + std::to_string(i) + " out of range for trajectory of length " +
                 std::to_string(length()));
    Trajectory t = *this;
    t.begin_ = begin_ + i;
    return t;
}

bool Trajectory::valid(const ActionTheory& theory) const {
    for (size_t i = 0; i < length(); ++i) {
        if (!executable(theory, action(i), state(i))) return false;
        std::vector<State> succ = transition(theory, action(i), state(i));
        if (std::find(succ.begin(), succ.end(), state(i + 1)) == succ.end()) return false;
    }
    return true;
}

bool Trajectory::operator==(const Trajectory& other) const {
    if (length() != other.length()) return false;
    for (size_t i = 0; i < length(); ++i)
        if (action(i) != other.action(i) || state(i) != other.state(i)) return false;
    return state(length()) == other.state(length());
}

namespace {

struct Enumerator {
    const ActionTheory& theory;
    const PlanQuery& query;
    const std::function<bool(const Trajectory&)>& yield;
    std::vector<State> states;
    std::vector<int> actions;
    bool stopped = false;

    void visit() {
        if (stopped) return;
        State current = states.back();  // copy: states reallocates below
        bool goal_now = holds(current, theory.goal);
        if (goal_now) {
            Trajectory found(states, actions);
            assert(found.valid(theory));
            if (!yield(found)) {
                stopped = true;
                return;
            }
            if (!query.post_goal_actions) return;
        }
        if (actions.size() == query.max_length) return;
        for (int a = 0; a < int(theory.action_count()) && !stopped; ++a) {
            if (!executable(theory, a, current)) continue;
            for (const State& next : transition(theory, a, current)) {
                if (stopped) break;
                if (query.prune_visited &&
                    std::find(states.begin(), states.end(), next) != states.end())
                    continue;
                states.push_back(next);
                actions.push_back(a);
                visit();
                states.pop_back();
                actions.pop_back();
            }
        }
    }
};

}  // namespace

void enumerate(const ActionTheory& theory, const PlanQuery& query,
               const std::function<bool(const Trajectory&)>& yield) {
    Enumerator e{theory, query, yield, {initial_state(theory)}, {}, false};
    e.visit();
}

std::vector<Trajectory> enumerate_all(const ActionTheory& theory, const PlanQuery& query) {
    std::vector<Trajectory> out;
    enumerate(theory, query, [&](const Trajectory& t) {
        out.push_back(t);
        return true;
    });
    return out;
}

size_t count_trajectories(const ActionTheory& theory, const PlanQuery& query) {
    size_t n = 0;
    enumerate(theory, query, [&](const Trajectory&) {
        ++n;
        return true;
    });
    return n;
}

Trajectory replay(const ActionTheory& theory, const std::vector<int>& actions) {
    std::vector<State> states{initial_state(theory)};
    for (size_t i = 0; i < actions.size(); ++i) {
        int a = actions[i];
        if (a < 0 || size_t(a) >= theory.action_count())
            fail(Error::Code::InvalidPlan, "step " + std::to_string(i) + " names an undeclared action");
        if (!executable(theory, a, states.back()))
            fail(Error::Code::InvalidPlan, "step " + std::to_string(i) + " (" + theory.action_name(a) +
                                               ") is not executable");
        std::vector<State> succ = transition(theory, a, states.back());
        if (succ.empty())
            fail(Error::Code::InvalidPlan,
                 "step " + std::to_string(i) + " (" + theory.action_name(a) + ") has no successor state");
        states.push_back(succ.front());
    }
    return Trajectory(std::move(states), actions);
}

}  // namespace prefplan
