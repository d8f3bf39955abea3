#include "prefplan/semantics.hpp"

namespace prefplan {

const char* to_string(Comparison c) {
    switch (c) {
        case Comparison::LeftPreferred: return "left preferred";
        case Comparison::RightPreferred: return "right preferred";
        case Comparison::Indistinguishable: return "indistinguishable";
        case Comparison::Incomparable: return "incomparable";
    }
    return "?";
}

SatisfactionChecker::SatisfactionChecker(const Desire& desire)
    : root_(std::make_shared<Desire>(desire)) {
    // preorder index so the memo table can be a flat array
    struct Walk {
        std::vector<const Desire*>& nodes;
        std::vector<std::array<int, 2>>& kids;
        int visit(const Desire& d) {
            int id = int(nodes.size());
            nodes.push_back(&d);
            kids.push_back({-1, -1});
            for (size_t i = 0; i < d.kids.size(); ++i) kids[size_t(id)][i] = visit(d.kids[i]);
            return id;
        }
    };
    Walk w{nodes_, kid_index_};
    w.visit(*root_);
}

bool SatisfactionChecker::satisfies(const Trajectory& trajectory) const {
    return satisfies_suffix(trajectory, 0);
}

bool SatisfactionChecker::satisfies_suffix(const Trajectory& trajectory, size_t i) const {
    if (i > trajectory.length())
        fail(Error::Code::IndexOutOfRange, "suffix index beyond trajectory length");
    std::vector<signed char> memo(nodes_.size() * (trajectory.length() + 1), -1);
    return eval(0, i, trajectory, memo);
}

bool SatisfactionChecker::eval(size_t node, size_t t, const Trajectory& traj,
                               std::vector<signed char>& memo) const {
    signed char& slot = memo[node * (traj.length() + 1) + t];
    if (slot >= 0) return slot == 1;
    const Desire& d = *nodes_[node];
    size_t n = traj.length();
    auto kid = [&](size_t i) { return size_t(kid_index_[node][i]); };
    bool value = false;
    switch (d.kind) {
        case Desire::Kind::StateFormula: value = holds(traj.state(t), d.formula); break;
        case Desire::Kind::Occ: value = t < n && traj.action(t) == d.action; break;
        case Desire::Kind::Goal: value = holds(traj.state(n), d.formula); break;
        case Desire::Kind::And: value = eval(kid(0), t, traj, memo) && eval(kid(1), t, traj, memo); break;
        case Desire::Kind::Or: value = eval(kid(0), t, traj, memo) || eval(kid(1), t, traj, memo); break;
        case Desire::Kind::Not: value = !eval(kid(0), t, traj, memo); break;
        case Desire::Kind::Next: value = t < n && eval(kid(0), t + 1, traj, memo); break;
        case Desire::Kind::Always: {
            value = true;
            for (size_t i = t; i <= n && value; ++i) value = eval(kid(0), i, traj, memo);
            break;
        }
        case Desire::Kind::Eventually: {
            value = false;
            for (size_t i = t; i <= n && !value; ++i) value = eval(kid(0), i, traj, memo);
            break;
        }
        case Desire::Kind::Until: {
            value = false;
            for (size_t i = t; i <= n; ++i) {
                if (eval(kid(1), i, traj, memo)) {
                    value = true;
                    break;
                }
                if (!eval(kid(0), i, traj, memo)) break;  // prefix broken, no later witness counts
            }
            break;
        }
    }
    slot = value ? 1 : 0;
    return value;
}

bool satisfies(const Trajectory& trajectory, const Desire& desire) {
    return SatisfactionChecker(desire).satisfies(trajectory);
}

Comparison compare_basic(const Trajectory& a, const Trajectory& b, const Desire& desire) {
    SatisfactionChecker checker(desire);
    bool sa = checker.satisfies(a);
    bool sb = checker.satisfies(b);
    if (sa && !sb) return Comparison::LeftPreferred;
    if (!sa && sb) return Comparison::RightPreferred;
    return Comparison::Indistinguishable;
}

Comparison compare_atomic(const Trajectory& a, const Trajectory& b, const AtomicPreference& pref) {
    for (const Desire& d : pref.chain) {
        Comparison c = compare_basic(a, b, d);
        if (c != Comparison::Indistinguishable) return c;
    }
    return Comparison::Indistinguishable;
}

Comparison compare_general(const Trajectory& a, const Trajectory& b, const Preference& pref) {
    switch (pref.kind) {
        case Preference::Kind::Atomic: return compare_atomic(a, b, pref.atomic);
        case Preference::Kind::Conj: {
            Comparison l = compare_general(a, b, pref.kids[0]);
            Comparison r = compare_general(a, b, pref.kids[1]);
            if (l == Comparison::LeftPreferred && r == Comparison::LeftPreferred)
                return Comparison::LeftPreferred;
            if (l == Comparison::RightPreferred && r == Comparison::RightPreferred)
                return Comparison::RightPreferred;
            if (l == Comparison::Indistinguishable && r == Comparison::Indistinguishable)
                return Comparison::Indistinguishable;
            return Comparison::Incomparable;
        }
        case Preference::Kind::Disj: {
            Comparison l = compare_general(a, b, pref.kids[0]);
            Comparison r = compare_general(a, b, pref.kids[1]);
            auto left_of = [](Comparison x, Comparison y) {
                // x preferred and y preferred-or-equal
                return (x == Comparison::LeftPreferred &&
                        (y == Comparison::LeftPreferred || y == Comparison::Indistinguishable)) ||
                       (y == Comparison::LeftPreferred && x == Comparison::Indistinguishable);
            };
            if (left_of(l, r)) return Comparison::LeftPreferred;
            if (left_of(flip(l), flip(r))) return Comparison::RightPreferred;
            if (l == Comparison::Indistinguishable && r == Comparison::Indistinguishable)
                return Comparison::Indistinguishable;
            return Comparison::Incomparable;
        }
        case Preference::Kind::Neg: return flip(compare_general(a, b, pref.kids[0]));
        case Preference::Kind::Chain: {
            for (const Preference& p : pref.kids) {
                Comparison c = compare_general(a, b, p);
                if (c == Comparison::Indistinguishable) continue;
                if (c == Comparison::Incomparable) return Comparison::Incomparable;
                return c;
            }
            return Comparison::Indistinguishable;
        }
    }
    return Comparison::Incomparable;
}

std::vector<Trajectory> dominance_maximal(const std::vector<Trajectory>& candidates,
                                          const Preference& pref) {
    std::vector<Trajectory> out;
    for (size_t i = 0; i < candidates.size(); ++i) {
        bool dominated = false;
        for (size_t j = 0; j < candidates.size() && !dominated; ++j) {
            if (i == j) continue;
            dominated = compare_general(candidates[j], candidates[i], pref) == Comparison::LeftPreferred;
        }
        if (!dominated) out.push_back(candidates[i]);
    }
    return out;
}

}  // namespace prefplan
