#pragma once

#include <string>
#include <vector>

#include "prefplan/action_theory.hpp"

namespace prefplan {

/// A basic desire: a temporal formula over states and action occurrences,
/// evaluated on a trajectory.
struct Desire {
    enum class Kind {
        StateFormula,  // fluent formula checked at the first state of the suffix
        Occ,           // first action of the suffix is `action`
        Goal,          // fluent formula checked at the final state
        And,
        Or,
        Not,
        Next,
        Until,       // kids[0] until kids[1]
        Always,
        Eventually,
    };

    Kind kind = Kind::StateFormula;
    Formula formula;            // StateFormula / Goal payload
    int action = -1;            // Occ payload
    std::vector<Desire> kids;

    static Desire state(Formula f) {
        Desire d;
        d.kind = Kind::StateFormula;
        d.formula = std::move(f);
        return d;
    }
    static Desire occ(int action) {
        Desire d;
        d.kind = Kind::Occ;
        d.action = action;
        return d;
    }
    static Desire goal(Formula f) {
        Desire d;
        d.kind = Kind::Goal;
        d.formula = std::move(f);
        return d;
    }
    static Desire make(Kind kind, std::vector<Desire> kids) {
        Desire d;
        d.kind = kind;
        d.kids = std::move(kids);
        return d;
    }
    static Desire conj(Desire a, Desire b) { return make(Kind::And, {std::move(a), std::move(b)}); }
    static Desire disj(Desire a, Desire b) { return make(Kind::Or, {std::move(a), std::move(b)}); }
    static Desire neg(Desire a) { return make(Kind::Not, {std::move(a)}); }

    bool operator==(const Desire&) const = default;
};

/// A lexicographic chain of basic desires; earlier elements matter more.
struct AtomicPreference {
    std::vector<Desire> chain;  // nonempty
    bool operator==(const AtomicPreference&) const = default;
};

/// The preference algebra over atomic preferences.
struct Preference {
    enum class Kind { Atomic, Conj, Disj, Neg, Chain };

    Kind kind = Kind::Atomic;
    AtomicPreference atomic;        // Kind::Atomic
    std::vector<Preference> kids;   // Conj/Disj: 2, Neg: 1, Chain: >= 2

    static Preference make_atomic(AtomicPreference a) {
        Preference p;
        p.kind = Kind::Atomic;
        p.atomic = std::move(a);
        return p;
    }
    static Preference desire(Desire d) { return make_atomic(AtomicPreference{{std::move(d)}}); }
    static Preference make(Kind kind, std::vector<Preference> kids) {
        Preference p;
        p.kind = kind;
        p.kids = std::move(kids);
        return p;
    }
    static Preference conj(Preference a, Preference b) { return make(Kind::Conj, {std::move(a), std::move(b)}); }
    static Preference disj(Preference a, Preference b) { return make(Kind::Disj, {std::move(a), std::move(b)}); }
    static Preference neg(Preference a) { return make(Kind::Neg, {std::move(a)}); }

    bool operator==(const Preference&) const = default;
};

// ---- desire builders ----

/// phi1 < phi2: satisfied when phi1 holds and phi2 does not.
Desire strong_desire(Desire phi1, Desire phi2);

/// phi1 <w phi2: satisfied when phi1 holds or phi2 does not.
Desire weak_desire(Desire phi1, Desire phi2);

/// Chain sugar phi1 < phi2 < ... < phik: conjunction of adjacent strong
/// desires; likewise for the weak form.
Desire strong_chain(const std::vector<Desire>& chain);
Desire weak_chain(const std::vector<Desire>& chain);

/// a1 <e a2: when both actions are executable, prefer to leave the state via
/// a1. Actions with no executability condition get an unsatisfiable
/// antecedent, so the implication is vacuously true.
Desire enabled_desire(const ActionTheory& theory, int a1, int a2);

/// Disjunctive form (a1|...|ak) <e (b1|...|bm): conjunction of all pairwise
/// enabled desires.
Desire enabled_desire_sets(const ActionTheory& theory, const std::vector<int>& as,
                           const std::vector<int>& bs);

/// The fluent formula "some executability condition of the action holds".
Formula executability_formula(const ActionTheory& theory, int action);

/// Orders trajectories by how many of the given desires their best
/// satisfiable suffix set covers: the chain of suffix conjunctions for one
/// permutation.
AtomicPreference ch(const std::vector<Desire>& desires, const std::vector<size_t>& perm);

/// Prefer trajectories satisfying as many of the desires as possible:
/// disjunction of ch over all permutations. Guarded to at most 6 desires.
Preference maxim(const std::vector<Desire>& desires);

/// phi achieved before phi': eventually(phi && eventually(phi')) &&
/// until(!phi', phi).
Desire temporal_order_desire(Formula phi, Formula phi_prime);

// ---- printing (parseable concrete syntax) ----

std::string to_string(const Formula& f, const ActionTheory& theory);
std::string to_string(const Desire& d, const ActionTheory& theory);
std::string to_string(const Preference& p, const ActionTheory& theory);

}  // namespace prefplan
