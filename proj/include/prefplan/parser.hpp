#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "prefplan/action_theory.hpp"
#include "prefplan/preference.hpp"

namespace prefplan {

// ---- schematic (pre-grounding) domain representation ----

struct Sort {
    std::string name;
    std::vector<std::string> constants;
};

struct PredSchema {
    std::string name;
    std::vector<int> arg_sorts;
    SourcePos pos;
};

/// Term of a law schema: a variable (index into the law's variable table) or
/// a constant.
struct STerm {
    bool is_var = false;
    int var = -1;
    std::string constant;
    bool operator==(const STerm&) const = default;
};

struct SAtom {
    int pred = -1;  // index into fluents or actions, by context
    std::vector<STerm> args;
    bool operator==(const SAtom&) const = default;
};

struct SLit {
    SAtom atom;
    bool positive = true;
    bool operator==(const SLit&) const = default;
};

struct Diseq {
    STerm lhs, rhs;
};

struct LawSchema {
    enum class Kind { Dynamic, Static, Exec };
    Kind kind = Kind::Static;
    SAtom action;        // Dynamic/Exec
    SLit head;           // Dynamic effect or Static head
    std::vector<SLit> body;
    std::vector<Diseq> diseq;
    std::vector<std::string> var_names;
    std::vector<int> var_sorts;
    SourcePos pos;
};

/// Ground fluent formula at parse time, before fluent ids exist.
struct SFormula {
    enum class Kind { True, False, Atom, Not, And, Or };
    Kind kind = Kind::True;
    SAtom atom;            // Kind::Atom (fluent)
    bool positive = true;  // Kind::Atom
    std::vector<SFormula> kids;
};

struct SchematicDomain {
    std::vector<Sort> sorts;
    std::vector<PredSchema> fluents;
    std::vector<PredSchema> actions;
    std::vector<LawSchema> laws;
    std::vector<SLit> initial;  // ground literals
    SFormula goal;

    int sort_id(const std::string& name) const;
    int fluent_schema_id(const std::string& name) const;
    int action_schema_id(const std::string& name) const;
};

/// A ground problem together with the schema it came from (kept for action
/// family expansion and sort-ordered enumeration).
struct Problem {
    SchematicDomain schema;
    ActionTheory theory;
};

SchematicDomain parse_domain(const std::string& text);

/// Full upfront instantiation of all law schemata; duplicates removed.
ActionTheory ground(const SchematicDomain& schema);

inline Problem load_domain(const std::string& text) {
    SchematicDomain schema = parse_domain(text);
    return Problem{schema, ground(schema)};
}

// ---- preference files ----

struct PreferenceLibrary {
    std::map<std::string, Desire> desires;
    std::map<std::string, Preference> prefs;
    std::optional<Preference> optimize;
    std::string optimize_name;
};

PreferenceLibrary parse_preferences(const std::string& text, const Problem& problem);

/// Parses a single preference expression (no declarations).
Preference parse_preference(const std::string& text, const Problem& problem);

/// Parses a single desire expression (no declarations).
Desire parse_desire(const std::string& text, const Problem& problem);

// ---- plan files: one `occ(<action>, <t>).` per line ----

std::vector<int> parse_plan(const std::string& text, const ActionTheory& theory);
std::string format_plan(const std::vector<int>& actions, const ActionTheory& theory);

}  // namespace prefplan
