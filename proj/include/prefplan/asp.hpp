#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "prefplan/parser.hpp"
#include "prefplan/weights.hpp"

namespace prefplan {

struct AspRule {
    std::string head;  // empty head = integrity constraint
    std::vector<std::string> pos;
    std::vector<std::string> neg;
};

/// A fully ground logic program: facts, normal rules and at most one
/// maximize statement. Re-emitting the same input yields byte-identical
/// text. The sigma/rank tables drive the stratified bottom-up oracle.
struct AspProgram {
    std::vector<std::string> header;  // comment lines without the leading %
    std::vector<std::string> facts;
    std::vector<AspRule> rules;
    std::string maximize;  // full statement text, empty when absent

    std::map<std::string, int> sigma;  // desire node name -> formula complexity
    std::map<std::string, int> rank;   // preference node name -> tier rank

    std::string text() const;
};

/// Desire node table built during encoding: names are assigned in AST
/// preorder (n_d1, n_d2, ...); literal nodes are named by their literal term.
struct DesireTable {
    struct Entry {
        std::string name;
        Desire::Kind kind = Desire::Kind::StateFormula;
        std::vector<std::string> children;  // node names, in operand order
        std::string action;                 // Occ nodes
        int sigma = 0;
        Desire equivalent;  // native desire computing the same node
    };
    std::vector<Entry> entries;
    int desire_counter = 0;
    int pref_counter = 0;

    const Entry* find(const std::string& name) const {
        for (const Entry& e : entries)
            if (e.name == name) return &e;
        return nullptr;
    }
};

/// ASP term for a fluent literal: the fluent name, or neg(<fluent>).
std::string literal_term(const ActionTheory& theory, FluentLiteral l);

/// desire(l) and literal(l) facts for every fluent literal in scope.
std::vector<std::string> desire_universe_facts(const ActionTheory& theory);

/// Encodes one desire as structure facts, extending the table; returns the
/// root node name.
std::string encode_desire(const Desire& desire, const ActionTheory& theory, DesireTable& table,
                          std::vector<std::string>& facts);

/// Ground satisfaction rules for every named node in the table and every
/// fluent literal, over time points 0..length.
std::vector<AspRule> sat_rules(const DesireTable& table, const ActionTheory& theory, size_t length);

/// Encoding of the planning problem itself: initial facts, executability,
/// action generation (one action per step until the goal holds), effects,
/// static laws, inertia, and the goal constraint.
std::vector<AspRule> planning_rules(const ActionTheory& theory, size_t length,
                                    std::vector<std::string>& facts);

/// The occ/holds fact representation of a trajectory.
std::vector<std::string> trajectory_facts(const Trajectory& trajectory, const ActionTheory& theory);

struct EmitOptions {
    /// (label, content) pairs recorded in the header as content digests.
    std::vector<std::pair<std::string, std::string>> digest_inputs;
    bool include_planning = true;
};

struct Emission {
    AspProgram program;
    DesireTable desires;
    std::string root_name;     // weight-carrying root node
    bool root_is_basic_desire = false;
};

/// The complete program for a problem and preference at the given horizon.
Emission emit_program(const Problem& problem, const Preference& pref, size_t length,
                      const EmitOptions& options = {});

/// Bottom-up evaluation of a locally stratified program (the satisfaction
/// and weight fragments). Throws NotStratified if the level mapping derived
/// from the sigma/rank tables does not stratify the rules.
std::set<std::string> stratified_eval(const AspProgram& program);

}  // namespace prefplan
