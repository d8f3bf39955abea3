#include "prefplan/action_theory.hpp"

#include <algorithm>
#include <set>

namespace prefplan {

int ActionTheory::fluent_id(const std::string& name) const {
    for (size_t i = 0; i < fluent_names.size(); ++i)
        if (fluent_names[i] == name) return int(i);
    return -1;
}

int ActionTheory::action_id(const std::string& name) const {
    for (size_t i = 0; i < action_names.size(); ++i)
        if (action_names[i] == name) return int(i);
    return -1;
}

PartialLits static_closure(const PartialLits& lits, const std::vector<StaticLaw>& laws) {
    PartialLits out = lits;
    bool changed = true;
    while (changed) {
        changed = false;
        for (const StaticLaw& law : laws) {
            if (out.has(law.head)) continue;
            bool applicable = true;
            for (FluentLiteral b : law.body) {
                if (!out.has(b)) {
                    applicable = false;
                    break;
                }
            }
            if (applicable) {
                out.add(law.head);
                changed = true;
            }
        }
    }
    return out;
}

PartialLits static_closure(const std::vector<FluentLiteral>& lits, const std::vector<StaticLaw>& laws,
                           size_t fluent_count) {
    PartialLits start(fluent_count);
    for (FluentLiteral l : lits) start.add(l);
    return static_closure(start, laws);
}

bool holds(const State& state, FluentLiteral literal) {
    if (literal.fluent < 0 || size_t(literal.fluent) >= state.fluent_count())
        fail(Error::Code::UnknownFluent, "literal refers to undeclared fluent #" + std::to_string(literal.fluent));
    return state.holds(literal);
}

bool holds(const State& state, const Formula& formula) {
    switch (formula.kind) {
        case Formula::Kind::True: return true;
        case Formula::Kind::False: return false;
        case Formula::Kind::Literal: return holds(state, formula.lit);
        case Formula::Kind::Not: return !holds(state, formula.kids[0]);
        case Formula::Kind::And:
            return std::all_of(formula.kids.begin(), formula.kids.end(),
                               [&](const Formula& k) { return holds(state, k); });
        case Formula::Kind::Or:
            return std::any_of(formula.kids.begin(), formula.kids.end(),
                               [&](const Formula& k) { return holds(state, k); });
    }
    return false;
}

bool satisfies_static_laws(const State& state, const ActionTheory& theory) {
    for (const StaticLaw& law : theory.static_laws) {
        bool body_holds = true;
        for (FluentLiteral b : law.body) {
            if (!state.holds(b)) {
                body_holds = false;
                break;
            }
        }
        if (body_holds && !state.holds(law.head)) return false;
    }
    return true;
}

bool executable(const ActionTheory& theory, int action, const State& state) {
    if (action < 0 || size_t(action) >= theory.action_count())
        fail(Error::Code::UnknownAction, "undeclared action #" + std::to_string(action));
    for (const ExecCondition& cond : theory.exec) {
        if (cond.action != action) continue;
        bool ok = true;
        for (FluentLiteral b : cond.body) {
            if (!state.holds(b)) {
                ok = false;
                break;
            }
        }
        if (ok) return true;
    }
    return false;
}

std::vector<FluentLiteral> direct_effects(const ActionTheory& theory, int action, const State& state) {
    std::vector<FluentLiteral> effects;
    for (const DynamicLaw& law : theory.dynamic) {
        if (law.action != action) continue;
        bool fires = true;
        for (FluentLiteral p : law.preconditions) {
            if (!state.holds(p)) {
                fires = false;
                break;
            }
        }
        if (fires && std::find(effects.begin(), effects.end(), law.effect) == effects.end())
            effects.push_back(law.effect);
    }
    return effects;
}

namespace {

// One application of X |-> Cn(E u (s n X)), the operator whose complete
// consistent fixpoints are exactly the successor states.
PartialLits successor_step(const ActionTheory& theory, const std::vector<FluentLiteral>& effects,
                           const State& state, const PartialLits& x) {
    PartialLits base(theory.fluent_count());
    for (FluentLiteral e : effects) base.add(e);
    for (size_t f = 0; f < theory.fluent_count(); ++f) {
        FluentLiteral in_s{int(f), state.holds({int(f), true})};
        if (x.has(in_s)) base.add(in_s);  // inertia: literal kept from s
    }
    return static_closure(base, theory.static_laws);
}

// Least set above `seed` closed under the successor operator.
PartialLits grow(const ActionTheory& theory, const std::vector<FluentLiteral>& effects, const State& state,
                 PartialLits seed) {
    while (true) {
        PartialLits next = successor_step(theory, effects, state, seed);
        // keep guessed literals: the final fixpoint test validates them
        bool changed = false;
        for (size_t f = 0; f < theory.fluent_count(); ++f) {
            for (bool sign : {true, false}) {
                FluentLiteral l{int(f), sign};
                if (seed.has(l) && !next.has(l)) {
                    next.add(l);
                }
                if (next.has(l) && !seed.has(l)) changed = true;
            }
        }
        seed = next;
        if (!changed) return seed;
    }
}

void search_successors(const ActionTheory& theory, const std::vector<FluentLiteral>& effects,
                       const State& state, PartialLits partial, std::set<State>& found) {
    partial = grow(theory, effects, state, std::move(partial));
    if (partial.conflict()) return;

    int undetermined = -1;
    for (size_t f = 0; f < theory.fluent_count(); ++f) {
        if (!partial.determined(int(f))) {
            undetermined = int(f);
            break;
        }
    }
    if (undetermined < 0) {
        State candidate(theory.fluent_count());
        for (size_t f = 0; f < theory.fluent_count(); ++f)
            candidate.set({int(f), partial.has({int(f), true})});
        // fixpoint test: guessed literals must be justified by effects,
        // inertia, or static laws
        PartialLits check = successor_step(theory, effects, state, partial);
        bool exact = !check.conflict().has_value();
        for (size_t f = 0; exact && f < theory.fluent_count(); ++f) {
            FluentLiteral l{int(f), candidate.holds({int(f), true})};
            exact = check.has(l) && !check.has(l.complement());
        }
        if (exact) found.insert(candidate);
        return;
    }
    for (bool sign : {true, false}) {
        PartialLits branch = partial;
        branch.add({undetermined, sign});
        search_successors(theory, effects, state, std::move(branch), found);
    }
}

}  // namespace

std::vector<State> transition(const ActionTheory& theory, int action, const State& state) {
    if (!executable(theory, action, state))
        fail(Error::Code::NotExecutable,
             "action " + theory.action_name(action) + " is not executable in the given state");
    std::vector<FluentLiteral> effects = direct_effects(theory, action, state);
    std::set<State> found;
    search_successors(theory, effects, state, PartialLits(theory.fluent_count()), found);
    return {found.begin(), found.end()};
}

State initial_state(const ActionTheory& theory) {
    PartialLits lits(theory.fluent_count());
    for (FluentLiteral l : theory.initial) lits.add(l);
    if (auto f = lits.conflict())
        fail(Error::Code::Inconsistent,
             "initial description mentions both polarities of " + theory.fluent_name(*f));
    for (size_t f = 0; f < theory.fluent_count(); ++f)
        if (!lits.determined(int(f))) lits.add({int(f), false});

    PartialLits closed = static_closure(lits, theory.static_laws);
    if (auto f = closed.conflict())
        fail(Error::Code::Inconsistent,
             "static closure of the initial state derives both polarities of " + theory.fluent_name(*f));

    State s0(theory.fluent_count());
    for (size_t f = 0; f < theory.fluent_count(); ++f) s0.set({int(f), closed.has({int(f), true})});
    if (!satisfies_static_laws(s0, theory))
        fail(Error::Code::NotAState, "initial state violates a static law after completion");
    return s0;
}

}  // namespace prefplan
