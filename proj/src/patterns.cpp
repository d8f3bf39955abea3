#include "prefplan/patterns.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "prefplan/weights.hpp"

namespace prefplan {

namespace {

Desire iterated_next(const Formula& phi, size_t depth) {
    Desire d = Desire::state(phi);
    for (size_t i = 0; i < depth; ++i) d = Desire::make(Desire::Kind::Next, {std::move(d)});
    return d;
}

}  // namespace

AtomicPreference shortest_formula(size_t n, const Formula& goal) {
    AtomicPreference pref;
    for (size_t i = 0; i <= n; ++i) {
        if (i == 0) {
            pref.chain.push_back(Desire::state(goal));
            continue;
        }
        Desire acc = Desire::neg(iterated_next(goal, 0));
        for (size_t j = 1; j < i; ++j)
            acc = Desire::conj(std::move(acc), Desire::neg(iterated_next(goal, j)));
        pref.chain.push_back(Desire::conj(std::move(acc), iterated_next(goal, i)));
    }
    return pref;
}

namespace {

// negation normal form, then distribution; True yields one empty conjunct,
// False yields no disjuncts
void dnf(const Formula& f, bool positive, std::vector<std::vector<FluentLiteral>>& out) {
    switch (f.kind) {
        case Formula::Kind::True:
            if (positive) out.push_back({});
            return;
        case Formula::Kind::False:
            if (!positive) out.push_back({});
            return;
        case Formula::Kind::Literal: {
            FluentLiteral l = positive ? f.lit : f.lit.complement();
            out.push_back({l});
            return;
        }
        case Formula::Kind::Not:
            dnf(f.kids[0], !positive, out);
            return;
        case Formula::Kind::And:
        case Formula::Kind::Or: {
            bool conjunctive = (f.kind == Formula::Kind::And) == positive;
            if (!conjunctive) {
                for (const Formula& k : f.kids) dnf(k, positive, out);
                return;
            }
            std::vector<std::vector<FluentLiteral>> acc{{}};
            for (const Formula& k : f.kids) {
                std::vector<std::vector<FluentLiteral>> kid;
                dnf(k, positive, kid);
                std::vector<std::vector<FluentLiteral>> next;
                for (const auto& a : acc)
                    for (const auto& b : kid) {
                        std::vector<FluentLiteral> merged = a;
                        for (FluentLiteral l : b)
                            if (std::find(merged.begin(), merged.end(), l) == merged.end())
                                merged.push_back(l);
                        next.push_back(std::move(merged));
                    }
                acc = std::move(next);
            }
            for (auto& c : acc) out.push_back(std::move(c));
            return;
        }
    }
}

}  // namespace

ShortestActionTransform shortest_action_transform(const ActionTheory& theory) {
    for (const char* name : {"stop", "noop"})
        if (theory.action_id(name) >= 0)
            fail(Error::Code::NameClash, std::string("action name ") + name + " is already in use");
    if (theory.fluent_id("ended") >= 0)
        fail(Error::Code::NameClash, "fluent name ended is already in use");

    ShortestActionTransform out;
    out.theory = theory;
    ActionTheory& t = out.theory;

    size_t original_actions = theory.action_count();
    out.ended_fluent = int(t.fluent_names.size());
    t.fluent_names.push_back("ended");
    out.stop_action = int(t.action_names.size());
    t.action_names.push_back("stop");
    out.noop_action = int(t.action_names.size());
    t.action_names.push_back("noop");

    FluentLiteral ended{out.ended_fluent, true};
    FluentLiteral not_ended = ended.complement();

    for (ExecCondition& cond : t.exec) cond.body.push_back(not_ended);
    t.initial.push_back(not_ended);

    t.dynamic.push_back({out.stop_action, ended, {}});
    t.dynamic.push_back({out.noop_action, ended, {}});
    // stop becomes executable exactly when the goal holds: one condition per
    // DNF disjunct of the goal formula
    std::vector<std::vector<FluentLiteral>> disjuncts;
    dnf(t.goal, true, disjuncts);
    for (auto& conj : disjuncts) t.exec.push_back({out.stop_action, std::move(conj)});
    t.exec.push_back({out.noop_action, {ended}});

    std::vector<int> pad{out.stop_action, out.noop_action};
    std::vector<int> originals;
    for (size_t a = 0; a < original_actions; ++a) originals.push_back(int(a));
    out.short_desire = Desire::make(Desire::Kind::Always,
                                    {enabled_desire_sets(t, pad, originals)});
    return out;
}

CheapestTransform cheapest_transform(const ActionTheory& theory,
                                     const std::map<int, long long>& action_costs, long long min_cost,
                                     long long max_cost) {
    if (min_cost < 0 || min_cost > max_cost)
        fail(Error::Code::CostOverflow, "cost window must satisfy 0 <= min <= max");
    for (size_t a = 0; a < theory.action_count(); ++a) {
        auto it = action_costs.find(int(a));
        if (it == action_costs.end())
            fail(Error::Code::CostOverflow, "no cost given for action " + theory.action_name(int(a)));
        if (it->second < 0)
            fail(Error::Code::CostOverflow, "negative cost for action " + theory.action_name(int(a)));
    }

    CheapestTransform out;
    out.theory = theory;
    ActionTheory& t = out.theory;

    auto scost_name = [](long long v) { return "scost(" + std::to_string(v) + ")"; };
    for (long long v = 0; v <= max_cost; ++v)
        if (t.fluent_id(scost_name(v)) >= 0)
            fail(Error::Code::NameClash, "fluent name " + scost_name(v) + " is already in use");

    for (long long v = 0; v <= max_cost; ++v) {
        out.scost_fluents.push_back(int(t.fluent_names.size()));
        t.fluent_names.push_back(scost_name(v));
    }
    t.initial.push_back({out.scost_fluents[0], true});

    // the running sum is a function: at most one value true
    for (long long v1 = 0; v1 <= max_cost; ++v1)
        for (long long v2 = 0; v2 <= max_cost; ++v2)
            if (v1 != v2)
                t.static_laws.push_back({{out.scost_fluents[size_t(v2)], false},
                                         {{out.scost_fluents[size_t(v1)], true}}});

    for (size_t a = 0; a < theory.action_count(); ++a) {
        long long c = action_costs.at(int(a));
        for (long long v = 0; v + c <= max_cost; ++v)
            t.dynamic.push_back({int(a),
                                 {out.scost_fluents[size_t(v + c)], true},
                                 {{out.scost_fluents[size_t(v)], true}}});
        // executing from a sum that would overflow the window is forbidden
        if (c > 0)
            for (ExecCondition& cond : t.exec)
                if (cond.action == int(a))
                    for (long long v = std::max(0LL, max_cost - c + 1); v <= max_cost; ++v)
                        cond.body.push_back({out.scost_fluents[size_t(v)], false});
    }

    for (long long v = min_cost; v <= max_cost; ++v)
        out.preference.chain.push_back(
            Desire::goal(Formula::literal({out.scost_fluents[size_t(v)], true})));
    return out;
}

void check_cost_bound(const std::map<int, long long>& action_costs, size_t horizon,
                      long long max_cost) {
    long long worst_step = 0;
    for (const auto& [action, c] : action_costs) worst_step = std::max(worst_step, c);
    long long reachable = checked_mul(worst_step, (long long)horizon);
    if (reachable > max_cost)
        fail(Error::Code::CostOverflow,
             "a horizon-" + std::to_string(horizon) + " plan may accumulate cost " +
                 std::to_string(reachable) + " > " + std::to_string(max_cost));
}

std::map<int, long long> parse_costs(const std::string& text, const ActionTheory& theory) {
    std::map<int, long long> costs;
    std::optional<long long> default_cost;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        size_t comment = line.find('%');
        if (comment != std::string::npos) line.resize(comment);
        size_t begin = line.find_first_not_of(" \t\r");
        if (begin == std::string::npos) continue;
        size_t end = line.find_last_not_of(" \t\r");
        std::string stmt = line.substr(begin, end - begin + 1);
        if (stmt.empty()) continue;
        if (stmt.back() != '.')
            fail(Error::Code::Parse, "cost statements end with '.'", {lineno, 1});
        stmt.pop_back();
        if (stmt.rfind("default", 0) == 0) {
            default_cost = std::stoll(stmt.substr(7));
            continue;
        }
        if (stmt.rfind("cost(", 0) != 0 || stmt.back() != ')')
            fail(Error::Code::Parse, "expected cost(<action>, <n>).", {lineno, 1});
        std::string inner = stmt.substr(5, stmt.size() - 6);
        size_t split = inner.rfind(',');
        if (split == std::string::npos)
            fail(Error::Code::Parse, "expected cost(<action>, <n>).", {lineno, 1});
        std::string name = inner.substr(0, split);
        while (!name.empty() && std::isspace(static_cast<unsigned char>(name.back()))) name.pop_back();
        int action = theory.action_id(name);
        if (action < 0)
            fail(Error::Code::UnknownAction, "unknown action " + name + " in cost file", {lineno, 1});
        costs[action] = std::stoll(inner.substr(split + 1));
    }
    for (size_t a = 0; a < theory.action_count(); ++a) {
        if (!costs.count(int(a))) {
            if (!default_cost)
                fail(Error::Code::CostOverflow,
                     "no cost for action " + theory.action_name(int(a)) + " and no default given");
            costs[int(a)] = *default_cost;
        }
    }
    return costs;
}

}  // namespace prefplan
