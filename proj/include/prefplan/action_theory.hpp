#pragma once

#include <optional>
#include <string>
#include <vector>

#include "prefplan/errors.hpp"

namespace prefplan {

/// A ground fluent literal: a fluent index plus a polarity.
struct FluentLiteral {
    int fluent = -1;
    bool positive = true;

    FluentLiteral complement() const { return {fluent, !positive}; }
    bool operator==(const FluentLiteral&) const = default;
    auto operator<=>(const FluentLiteral&) const = default;
};

/// Propositional formula over ground fluent literals.
struct Formula {
    enum class Kind { True, False, Literal, Not, And, Or };

    Kind kind = Kind::True;
    FluentLiteral lit;           // Kind::Literal
    std::vector<Formula> kids;   // Not: 1 child; And/Or: >= 1 child

    static Formula constant(bool value) {
        Formula f;
        f.kind = value ? Kind::True : Kind::False;
        return f;
    }
    static Formula literal(FluentLiteral l) {
        Formula f;
        f.kind = Kind::Literal;
        f.lit = l;
        return f;
    }
    static Formula negation(Formula inner) {
        Formula f;
        f.kind = Kind::Not;
        f.kids.push_back(std::move(inner));
        return f;
    }
    static Formula conjunction(std::vector<Formula> kids) {
        Formula f;
        f.kind = Kind::And;
        f.kids = std::move(kids);
        return f;
    }
    static Formula disjunction(std::vector<Formula> kids) {
        Formula f;
        f.kind = Kind::Or;
        f.kids = std::move(kids);
        return f;
    }

    bool operator==(const Formula&) const = default;
};

struct DynamicLaw {
    int action = -1;
    FluentLiteral effect;
    std::vector<FluentLiteral> preconditions;
    bool operator==(const DynamicLaw&) const = default;
};

struct StaticLaw {
    FluentLiteral head;
    std::vector<FluentLiteral> body;
    bool operator==(const StaticLaw&) const = default;
};

struct ExecCondition {
    int action = -1;
    std::vector<FluentLiteral> body;  // empty body means unconditionally executable
    bool operator==(const ExecCondition&) const = default;
};

/// A complete truth assignment over the declared fluents. States returned by
/// the library additionally satisfy all static causal laws.
class State {
public:
    State() = default;
    explicit State(size_t fluent_count) : truth_(fluent_count, false) {}

    size_t fluent_count() const { return truth_.size(); }
    bool holds(FluentLiteral l) const { return truth_[size_t(l.fluent)] == l.positive; }
    void set(FluentLiteral l) { truth_[size_t(l.fluent)] = l.positive; }

    bool operator==(const State&) const = default;
    auto operator<=>(const State&) const = default;

private:
    std::vector<bool> truth_;
};

/// Ground action theory plus goal: the complete planning problem description.
/// Laws refer to fluents and actions by index into the name tables.
struct ActionTheory {
    std::vector<std::string> fluent_names;
    std::vector<std::string> action_names;
    std::vector<DynamicLaw> dynamic;
    std::vector<StaticLaw> static_laws;
    std::vector<ExecCondition> exec;
    std::vector<FluentLiteral> initial;
    Formula goal = Formula::constant(true);

    size_t fluent_count() const { return fluent_names.size(); }
    size_t action_count() const { return action_names.size(); }

    int fluent_id(const std::string& name) const;   // -1 when absent
    int action_id(const std::string& name) const;   // -1 when absent
    const std::string& fluent_name(int id) const { return fluent_names[size_t(id)]; }
    const std::string& action_name(int id) const { return action_names[size_t(id)]; }

    std::string literal_name(FluentLiteral l) const {
        return l.positive ? fluent_name(l.fluent) : "-" + fluent_name(l.fluent);
    }
};

/// Partial literal set used while computing closures: each fluent may be
/// unknown, positive, negative, or both (the inconsistent case).
class PartialLits {
public:
    explicit PartialLits(size_t fluent_count) : pos_(fluent_count, false), neg_(fluent_count, false) {}

    bool has(FluentLiteral l) const { return l.positive ? pos_[size_t(l.fluent)] : neg_[size_t(l.fluent)]; }
    void add(FluentLiteral l) {
        if (l.positive) pos_[size_t(l.fluent)] = true;
        else neg_[size_t(l.fluent)] = true;
    }
    bool determined(int fluent) const { return pos_[size_t(fluent)] || neg_[size_t(fluent)]; }

    /// First fluent with both polarities present, if any.
    std::optional<int> conflict() const {
        for (size_t f = 0; f < pos_.size(); ++f)
            if (pos_[f] && neg_[f]) return int(f);
        return std::nullopt;
    }

    size_t fluent_count() const { return pos_.size(); }
    bool operator==(const PartialLits&) const = default;

private:
    std::vector<bool> pos_, neg_;
};

/// Least superset of `lits` closed under the static laws. The result may be
/// inconsistent; callers check via PartialLits::conflict().
PartialLits static_closure(const PartialLits& lits, const std::vector<StaticLaw>& laws);
PartialLits static_closure(const std::vector<FluentLiteral>& lits, const std::vector<StaticLaw>& laws,
                           size_t fluent_count);

/// Propositional evaluation over a complete state.
bool holds(const State& state, const Formula& formula);
bool holds(const State& state, FluentLiteral literal);

/// True iff the state satisfies every static law of the theory.
bool satisfies_static_laws(const State& state, const ActionTheory& theory);

/// True iff some executability condition for the action holds in the state.
/// Actions without any condition are never executable.
bool executable(const ActionTheory& theory, int action, const State& state);

/// The transition function: all successor states of executing `action` in
/// `state`, i.e. all complete consistent closed states s' with
/// s' = Cn(E(a,s) u (s n s')). Deterministic theories yield one state.
/// Throws NotExecutable when the action is not executable in `state`.
std::vector<State> transition(const ActionTheory& theory, int action, const State& state);

/// Direct effects E(a,s): effect literals of dynamic laws for `action` whose
/// preconditions all hold in `state`.
std::vector<FluentLiteral> direct_effects(const ActionTheory& theory, int action, const State& state);

/// The initial state: literals of I, unmentioned fluents defaulted to
/// negative, closed under static laws. Throws Inconsistent / NotAState.
State initial_state(const ActionTheory& theory);

}  // namespace prefplan
