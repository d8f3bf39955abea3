#include "prefplan/asp.hpp"

#include <algorithm>
#include <cstdio>
#include <cstring>

#include "prefplan/version.hpp"

namespace prefplan {

namespace {

constexpr size_t kGroundRuleGuard = 500000;

std::string tm(size_t t) { return std::to_string(t); }

std::string fnv1a_hex(const std::string& text) {
    unsigned long long h = 1469598103934665603ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    snprintf(buf, sizeof buf, "%016llx", h);
    return buf;
}

}  // namespace

std::string literal_term(const ActionTheory& theory, FluentLiteral l) {
    return l.positive ? theory.fluent_name(l.fluent) : "neg(" + theory.fluent_name(l.fluent) + ")";
}

std::string AspProgram::text() const {
    std::string out;
    for (const std::string& line : header) out += "% " + line + "\n";
    for (const std::string& f : facts) {
        if (!f.empty() && f[0] == '%') {
            out += f + "\n";
        } else {
            out += f + ".\n";
        }
    }
    for (const AspRule& r : rules) {
        if (!r.head.empty() && r.head[0] == '%') {
            out += r.head + "\n";
            continue;
        }
        std::string line = r.head;
        if (!r.pos.empty() || !r.neg.empty()) {
            line += line.empty() ? ":- " : " :- ";
            bool first = true;
            for (const std::string& b : r.pos) {
                if (!first) line += ", ";
                first = false;
                line += b;
            }
            for (const std::string& b : r.neg) {
                if (!first) line += ", ";
                first = false;
                line += "not " + b;
            }
        }
        out += line + ".\n";
    }
    if (!maximize.empty()) out += maximize + "\n";
    return out;
}

std::vector<std::string> desire_universe_facts(const ActionTheory& theory) {
    std::vector<std::string> facts;
    for (size_t f = 0; f < theory.fluent_count(); ++f) {
        for (bool sign : {true, false}) {
            std::string term = literal_term(theory, {int(f), sign});
            facts.push_back("desire(" + term + ")");
            facts.push_back("literal(" + term + ")");
        }
    }
    return facts;
}

// --------------------------------------------------------- desire encoding ----

namespace {

// Compound state formulas are lowered to binary connectives over literal
// state desires before encoding; goal payloads become child subtrees.
Desire lower_formula(const Formula& f, const ActionTheory& theory) {
    switch (f.kind) {
        case Formula::Kind::Literal: return Desire::state(Formula::literal(f.lit));
        case Formula::Kind::True:
        case Formula::Kind::False: {
            if (theory.fluent_count() == 0)
                fail(Error::Code::Resolve, "cannot encode a constant formula without fluents");
            Desire l = Desire::state(Formula::literal({0, true}));
            return f.kind == Formula::Kind::True ? Desire::disj(l, Desire::neg(l))
                                                 : Desire::conj(l, Desire::neg(l));
        }
        case Formula::Kind::Not: return Desire::neg(lower_formula(f.kids[0], theory));
        case Formula::Kind::And:
        case Formula::Kind::Or: {
            Desire acc = lower_formula(f.kids[0], theory);
            for (size_t i = 1; i < f.kids.size(); ++i) {
                Desire rhs = lower_formula(f.kids[i], theory);
                acc = f.kind == Formula::Kind::And ? Desire::conj(std::move(acc), std::move(rhs))
                                                   : Desire::disj(std::move(acc), std::move(rhs));
            }
            return acc;
        }
    }
    fail(Error::Code::Resolve, "unreachable formula kind");
}

Desire normalize_desire(const Desire& d, const ActionTheory& theory) {
    switch (d.kind) {
        case Desire::Kind::StateFormula:
            if (d.formula.kind == Formula::Kind::Literal) return d;
            return lower_formula(d.formula, theory);
        case Desire::Kind::Occ:
        case Desire::Kind::Goal:
            return d;
        default: {
            Desire out = d;
            for (Desire& k : out.kids) k = normalize_desire(k, theory);
            return out;
        }
    }
}

struct DesireEncoder {
    const ActionTheory& theory;
    DesireTable& table;
    std::vector<std::string>& facts;

    std::string fresh_name() { return "n_d" + std::to_string(++table.desire_counter); }

    std::pair<std::string, int> encode(const Desire& d) {
        DesireTable::Entry entry;
        entry.kind = d.kind;
        entry.equivalent = d;
        if (d.kind == Desire::Kind::StateFormula) {
            std::string term = literal_term(theory, d.formula.lit);
            entry.name = term;
            entry.sigma = 0;
            if (!table.find(term)) table.entries.push_back(std::move(entry));
            return {term, 0};  // desire(l)/literal(l) facts come from the universe
        }

        entry.name = fresh_name();
        facts.push_back("desire(" + entry.name + ")");
        size_t slot = table.entries.size();
        table.entries.push_back(entry);  // reserve the preorder slot

        switch (d.kind) {
            case Desire::Kind::Occ:
                entry.action = theory.action_name(d.action);
                entry.sigma = 0;
                facts.push_back("happen(" + entry.name + ", " + entry.action + ")");
                break;
            case Desire::Kind::Goal: {
                auto [inner, s] = encode(normalize_desire(lower_formula(d.formula, theory), theory));
                facts.push_back("goal(" + inner + ")");
                entry.children = {inner};
                entry.sigma = s;
                break;
            }
            case Desire::Kind::And:
            case Desire::Kind::Or:
            case Desire::Kind::Until: {
                auto [a, sa] = encode(d.kids[0]);
                auto [b, sb] = encode(d.kids[1]);
                const char* pred = d.kind == Desire::Kind::And  ? "and"
                                   : d.kind == Desire::Kind::Or ? "or"
                                                                : "until";
                facts.push_back(std::string(pred) + "(" + entry.name + ", " + a + ", " + b + ")");
                entry.children = {a, b};
                entry.sigma = std::max(sa, sb) + 1;
                break;
            }
            case Desire::Kind::Not:
            case Desire::Kind::Next:
            case Desire::Kind::Always:
            case Desire::Kind::Eventually: {
                auto [a, sa] = encode(d.kids[0]);
                const char* pred = d.kind == Desire::Kind::Not    ? "negation"
                                   : d.kind == Desire::Kind::Next ? "next"
                                   : d.kind == Desire::Kind::Always ? "always"
                                                                    : "eventually";
                facts.push_back(std::string(pred) + "(" + entry.name + ", " + a + ")");
                entry.children = {a};
                entry.sigma = sa + 1;
                break;
            }
            case Desire::Kind::StateFormula:
                break;  // handled above
        }
        std::pair<std::string, int> out{entry.name, entry.sigma};
        table.entries[slot] = std::move(entry);
        return out;
    }
};

}  // namespace

std::string encode_desire(const Desire& desire, const ActionTheory& theory, DesireTable& table,
                          std::vector<std::string>& facts) {
    Desire normalized = normalize_desire(desire, theory);
    DesireEncoder enc{theory, table, facts};
    return enc.encode(normalized).first;
}

// ----------------------------------------------------- satisfaction rules ----

std::vector<AspRule> sat_rules(const DesireTable& table, const ActionTheory& theory, size_t length) {
    std::vector<AspRule> rules;
    auto sat = [&](const std::string& n, size_t t) { return "satisfy(" + n + ", " + tm(t) + ")"; };
    auto during = [&](const std::string& n, size_t a, size_t b) {
        return "during(" + n + ", " + tm(a) + ", " + tm(b) + ")";
    };

    // literal satisfaction over the whole literal universe
    std::vector<std::string> literal_names;
    for (size_t f = 0; f < theory.fluent_count(); ++f)
        for (bool sign : {true, false}) literal_names.push_back(literal_term(theory, {int(f), sign}));
    for (const std::string& l : literal_names)
        for (size_t t = 0; t <= length; ++t)
            rules.push_back({sat(l, t),
                             {"desire(" + l + ")", "literal(" + l + ")", "holds(" + l + ", " + tm(t) + ")"},
                             {}});

    for (const DesireTable::Entry& e : table.entries) {
        const std::string& n = e.name;
        switch (e.kind) {
            case Desire::Kind::StateFormula:
                break;  // covered by the universe rules
            case Desire::Kind::Occ:
                for (size_t t = 0; t < length; ++t)
                    rules.push_back({sat(n, t),
                                     {"desire(" + n + ")", "happen(" + n + ", " + e.action + ")",
                                      "occ(" + e.action + ", " + tm(t) + ")"},
                                     {}});
                break;
            case Desire::Kind::Goal:
                for (size_t t = 0; t <= length; ++t)
                    rules.push_back({sat(n, t),
                                     {"desire(" + n + ")", "goal(" + e.children[0] + ")",
                                      sat(e.children[0], length)},
                                     {}});
                break;
            case Desire::Kind::And:
                for (size_t t = 0; t <= length; ++t)
                    rules.push_back({sat(n, t),
                                     {"desire(" + n + ")",
                                      "and(" + n + ", " + e.children[0] + ", " + e.children[1] + ")",
                                      sat(e.children[0], t), sat(e.children[1], t)},
                                     {}});
                break;
            case Desire::Kind::Or:
                for (size_t t = 0; t <= length; ++t)
                    for (const std::string& kid : e.children)
                        rules.push_back({sat(n, t),
                                         {"desire(" + n + ")",
                                          "or(" + n + ", " + e.children[0] + ", " + e.children[1] + ")",
                                          sat(kid, t)},
                                         {}});
                break;
            case Desire::Kind::Not:
                for (size_t t = 0; t <= length; ++t)
                    rules.push_back({sat(n, t),
                                     {"desire(" + n + ")", "negation(" + n + ", " + e.children[0] + ")"},
                                     {sat(e.children[0], t)}});
                break;
            case Desire::Kind::Until:
                for (size_t t = 0; t <= length; ++t) {
                    for (size_t t1 = t + 1; t1 <= length; ++t1)
                        rules.push_back(
                            {sat(n, t),
                             {"desire(" + n + ")",
                              "until(" + n + ", " + e.children[0] + ", " + e.children[1] + ")",
                              during(e.children[0], t, t1 - 1), sat(e.children[1], t1)},
                             {}});
                    rules.push_back({sat(n, t),
                                     {"desire(" + n + ")",
                                      "until(" + n + ", " + e.children[0] + ", " + e.children[1] + ")",
                                      sat(e.children[1], t)},
                                     {}});
                }
                break;
            case Desire::Kind::Always:
                for (size_t t = 0; t <= length; ++t)
                    rules.push_back({sat(n, t),
                                     {"desire(" + n + ")", "always(" + n + ", " + e.children[0] + ")",
                                      during(e.children[0], t, length)},
                                     {}});
                break;
            case Desire::Kind::Next:
                for (size_t t = 0; t < length; ++t)
                    rules.push_back({sat(n, t),
                                     {"desire(" + n + ")", "next(" + n + ", " + e.children[0] + ")",
                                      sat(e.children[0], t + 1)},
                                     {}});
                break;
            case Desire::Kind::Eventually:
                for (size_t t = 0; t <= length; ++t)
                    for (size_t t1 = t; t1 <= length; ++t1)
                        rules.push_back({sat(n, t),
                                         {"desire(" + n + ")",
                                          "eventually(" + n + ", " + e.children[0] + ")",
                                          sat(e.children[0], t1)},
                                         {}});
                break;
        }
        if (rules.size() > kGroundRuleGuard)
            fail(Error::Code::ArithmeticOverflow, "ground satisfaction rules exceed the size guard");
    }

    // the during window, for every desire node
    std::vector<std::string> all_names = literal_names;
    for (const DesireTable::Entry& e : table.entries)
        if (e.kind != Desire::Kind::StateFormula) all_names.push_back(e.name);
    for (const std::string& n : all_names) {
        for (size_t t1 = 0; t1 <= length; ++t1) {
            rules.push_back({during(n, t1, t1), {"desire(" + n + ")", sat(n, t1)}, {}});
            for (size_t t = 0; t < t1; ++t)
                rules.push_back(
                    {during(n, t, t1), {"desire(" + n + ")", sat(n, t), during(n, t + 1, t1)}, {}});
        }
        if (rules.size() > kGroundRuleGuard)
            fail(Error::Code::ArithmeticOverflow, "ground satisfaction rules exceed the size guard");
    }
    return rules;
}

// --------------------------------------------------------- planning rules ----

namespace {

// Auxiliary atoms for the goal formula tree; literals evaluate directly on
// holds atoms.
struct GoalCompiler {
    const ActionTheory& theory;
    std::vector<AspRule>& rules;
    std::vector<std::string>& facts;
    int counter = 0;

    // returns the atom template for the node at time t
    std::string compile(const Formula& f, size_t t) {
        switch (f.kind) {
            case Formula::Kind::Literal:
                return "holds(" + literal_term(theory, f.lit) + ", " + tm(t) + ")";
            case Formula::Kind::True: {
                std::string atom = node_atom(t);
                facts.push_back(atom);
                return atom;
            }
            case Formula::Kind::False:
                return node_atom(t);  // no rule: never true
            case Formula::Kind::Not: {
                std::string atom = node_atom(t);
                rules.push_back({atom, {}, {compile(f.kids[0], t)}});
                return atom;
            }
            case Formula::Kind::And: {
                std::string atom = node_atom(t);
                AspRule r{atom, {}, {}};
                for (const Formula& k : f.kids) r.pos.push_back(compile(k, t));
                rules.push_back(std::move(r));
                return atom;
            }
            case Formula::Kind::Or: {
                std::string atom = node_atom(t);
                for (const Formula& k : f.kids) rules.push_back({atom, {compile(k, t)}, {}});
                return atom;
            }
        }
        fail(Error::Code::Resolve, "unreachable formula kind");
    }

    std::string node_atom(size_t t) { return "gf" + std::to_string(++counter) + "(" + tm(t) + ")"; }
};

}  // namespace

std::vector<AspRule> planning_rules(const ActionTheory& theory, size_t length,
                                    std::vector<std::string>& facts) {
    std::vector<AspRule> rules;
    State s0 = initial_state(theory);
    for (size_t f = 0; f < theory.fluent_count(); ++f) {
        FluentLiteral l{int(f), s0.holds({int(f), true})};
        facts.push_back("holds(" + literal_term(theory, l) + ", 0)");
    }

    // goal formula per time point, then the goalmet alias
    for (size_t t = 0; t <= length; ++t) {
        GoalCompiler gc{theory, rules, facts};
        std::string root = gc.compile(theory.goal, t);
        rules.push_back({"goalmet(" + tm(t) + ")", {root}, {}});
    }

    for (size_t t = 0; t < length; ++t) {
        // executability
        for (const ExecCondition& cond : theory.exec) {
            AspRule r{"exec(" + theory.action_name(cond.action) + ", " + tm(t) + ")", {}, {}};
            for (FluentLiteral b : cond.body)
                r.pos.push_back("holds(" + literal_term(theory, b) + ", " + tm(t) + ")");
            if (r.pos.empty()) {
                facts.push_back(r.head);
            } else {
                rules.push_back(std::move(r));
            }
        }
        // action generation: one executable action per step until the goal holds
        for (size_t a = 0; a < theory.action_count(); ++a) {
            std::string name = theory.action_name(int(a));
            std::string occ = "occ(" + name + ", " + tm(t) + ")";
            std::string nocc = "nocc(" + name + ", " + tm(t) + ")";
            rules.push_back({occ, {"exec(" + name + ", " + tm(t) + ")"}, {"goalmet(" + tm(t) + ")", nocc}});
            rules.push_back({nocc, {}, {occ}});
            rules.push_back({"acted(" + tm(t) + ")", {occ}, {}});
        }
        for (size_t a = 0; a < theory.action_count(); ++a)
            for (size_t b = a + 1; b < theory.action_count(); ++b)
                rules.push_back({"",
                                 {"occ(" + theory.action_name(int(a)) + ", " + tm(t) + ")",
                                  "occ(" + theory.action_name(int(b)) + ", " + tm(t) + ")"},
                                 {}});
        rules.push_back({"", {}, {"acted(" + tm(t) + ")", "goalmet(" + tm(t) + ")"}});

        // dynamic causal laws
        for (const DynamicLaw& law : theory.dynamic) {
            AspRule r{"holds(" + literal_term(theory, law.effect) + ", " + tm(t + 1) + ")",
                      {"occ(" + theory.action_name(law.action) + ", " + tm(t) + ")"},
                      {}};
            for (FluentLiteral p : law.preconditions)
                r.pos.push_back("holds(" + literal_term(theory, p) + ", " + tm(t) + ")");
            rules.push_back(std::move(r));
        }
        // inertia
        for (size_t f = 0; f < theory.fluent_count(); ++f) {
            for (bool sign : {true, false}) {
                FluentLiteral l{int(f), sign};
                rules.push_back({"holds(" + literal_term(theory, l) + ", " + tm(t + 1) + ")",
                                 {"holds(" + literal_term(theory, l) + ", " + tm(t) + ")"},
                                 {"holds(" + literal_term(theory, l.complement()) + ", " + tm(t + 1) + ")"}});
            }
        }
    }
    // static causal laws and state consistency at every time point
    for (size_t t = 0; t <= length; ++t) {
        for (const StaticLaw& law : theory.static_laws) {
            AspRule r{"holds(" + literal_term(theory, law.head) + ", " + tm(t) + ")", {}, {}};
            for (FluentLiteral b : law.body)
                r.pos.push_back("holds(" + literal_term(theory, b) + ", " + tm(t) + ")");
            rules.push_back(std::move(r));
        }
        for (size_t f = 0; f < theory.fluent_count(); ++f)
            rules.push_back({"",
                             {"holds(" + literal_term(theory, {int(f), true}) + ", " + tm(t) + ")",
                              "holds(" + literal_term(theory, {int(f), false}) + ", " + tm(t) + ")"},
                             {}});
    }
    rules.push_back({"", {}, {"goalmet(" + tm(length) + ")"}});

    if (rules.size() > kGroundRuleGuard)
        fail(Error::Code::ArithmeticOverflow, "ground planning rules exceed the size guard");
    return rules;
}

std::vector<std::string> trajectory_facts(const Trajectory& trajectory, const ActionTheory& theory) {
    std::vector<std::string> facts;
    for (size_t i = 0; i < trajectory.length(); ++i)
        facts.push_back("occ(" + theory.action_name(trajectory.action(i)) + ", " + tm(i) + ")");
    for (size_t i = 0; i <= trajectory.length(); ++i)
        for (size_t f = 0; f < theory.fluent_count(); ++f) {
            FluentLiteral l{int(f), trajectory.state(i).holds({int(f), true})};
            facts.push_back("holds(" + literal_term(theory, l) + ", " + tm(i) + ")");
        }
    return facts;
}

// ------------------------------------------------------- weight encoding ----

namespace {

struct PrefEncoder {
    const ActionTheory& theory;
    DesireTable& table;
    AspProgram& program;
    size_t rule_count = 0;

    struct Encoded {
        std::string name;
        long long rule_max = 0;
        long long lo = 0, hi = 0;
        int rank = 0;
    };

    std::string fresh_name() { return "n_p" + std::to_string(++table.pref_counter); }

    void add_rule(AspRule rule) {
        program.rules.push_back(std::move(rule));
        if (++rule_count > kGroundRuleGuard)
            fail(Error::Code::ArithmeticOverflow, "ground weight rules exceed the size guard");
    }

    std::string w(const std::string& n, long long v) {
        return "w(" + n + ", " + std::to_string(v) + ")";
    }
    std::string mx(const std::string& n, long long v) {
        return "max(" + n + ", " + std::to_string(v) + ")";
    }

    Encoded encode_basic(const Desire& d) {
        std::string name = encode_desire(d, theory, table, program.facts);
        if (program.rank.count(name)) return {name, 2, 0, 1, 0};  // shared literal leaf
        add_rule({w(name, 1), {"satisfy(" + name + ", 0)"}, {}});
        add_rule({w(name, 0), {}, {"satisfy(" + name + ", 0)"}});
        program.facts.push_back(mx(name, 2));
        program.rank.emplace(name, 0);
        return {name, 2, 0, 1, 0};
    }

    Encoded encode(const Preference& p) {
        switch (p.kind) {
            case Preference::Kind::Atomic: {
                if (p.atomic.chain.size() == 1) return encode_basic(p.atomic.chain[0]);
                std::string name = fresh_name();
                program.facts.push_back("preference(" + name + ")");
                size_t k = p.atomic.chain.size();
                if (k >= 20)
                    fail(Error::Code::ArithmeticOverflow, "atomic chain too long to ground");
                std::vector<Encoded> members;
                for (size_t r = 0; r < k; ++r) {
                    members.push_back(encode_basic(p.atomic.chain[r]));
                    program.facts.push_back("rank(" + name + ", " + std::to_string(r + 1) + ", " +
                                            members.back().name + ")");
                }
                // one summation rule per satisfaction pattern
                for (size_t pattern = 0; pattern < (size_t(1) << k); ++pattern) {
                    long long s = 0;
                    AspRule r;
                    for (size_t i = 0; i < k; ++i) {
                        long long wi = (pattern >> (k - 1 - i)) & 1;
                        s += wi << (k - 1 - i);
                        r.pos.push_back(w(members[i].name, wi));
                    }
                    r.head = w(name, s);
                    add_rule(std::move(r));
                }
                long long rm = 1LL << k;
                program.facts.push_back(mx(name, rm));
                program.rank.emplace(name, 1);
                return {name, rm, 0, rm - 1, 1};
            }
            case Preference::Kind::Conj:
            case Preference::Kind::Disj: {
                std::string name = fresh_name();
                program.facts.push_back("preference(" + name + ")");
                Encoded a = encode(p.kids[0]);
                Encoded b = encode(p.kids[1]);
                program.facts.push_back(
                    std::string(p.kind == Preference::Kind::Conj ? "pand(" : "por(") + name + ", " +
                    a.name + ", " + b.name + ")");
                for (long long n1 = a.lo; n1 <= a.hi; ++n1)
                    for (long long n2 = b.lo; n2 <= b.hi; ++n2)
                        add_rule({w(name, checked_add(n1, n2)), {w(a.name, n1), w(b.name, n2)}, {}});
                long long rm = checked_add(a.rule_max, b.rule_max);
                add_rule({mx(name, rm), {mx(a.name, a.rule_max), mx(b.name, b.rule_max)}, {}});
                int rank = std::max(a.rank, b.rank) + 1;
                program.rank.emplace(name, rank);
                return {name, rm, checked_add(a.lo, b.lo), checked_add(a.hi, b.hi), rank};
            }
            case Preference::Kind::Neg: {
                std::string name = fresh_name();
                program.facts.push_back("preference(" + name + ")");
                Encoded a = encode(p.kids[0]);
                program.facts.push_back("pneg(" + name + ", " + a.name + ")");
                for (long long n = a.lo; n <= a.hi; ++n)
                    add_rule({w(name, a.rule_max - n), {w(a.name, n), mx(a.name, a.rule_max)}, {}});
                add_rule({mx(name, a.rule_max), {mx(a.name, a.rule_max)}, {}});
                int rank = a.rank + 1;
                program.rank.emplace(name, rank);
                return {name, a.rule_max, a.rule_max - a.hi, a.rule_max - a.lo, rank};
            }
            case Preference::Kind::Chain:
                return encode_chain(p.kids, 0);
        }
        fail(Error::Code::Resolve, "unreachable preference kind");
    }

    // right fold: kids[i] <| (kids[i+1] <| ...)
    Encoded encode_chain(const std::vector<Preference>& kids, size_t i) {
        if (i + 1 == kids.size()) return encode(kids[i]);
        std::string name = fresh_name();
        program.facts.push_back("preference(" + name + ")");
        Encoded a = encode(kids[i]);
        Encoded b = encode_chain(kids, i + 1);
        program.facts.push_back("chain(" + name + ", " + a.name + ", " + b.name + ")");
        for (long long n1 = a.lo; n1 <= a.hi; ++n1)
            for (long long n2 = b.lo; n2 <= b.hi; ++n2)
                add_rule({w(name, checked_add(checked_mul(b.rule_max, n1), n2)),
                          {w(a.name, n1), w(b.name, n2), mx(b.name, b.rule_max)},
                          {}});
        long long rm = checked_add(checked_mul(b.rule_max, a.rule_max), b.rule_max);
        add_rule({mx(name, rm), {mx(a.name, a.rule_max), mx(b.name, b.rule_max)}, {}});
        int rank = std::max(a.rank, b.rank) + 1;
        program.rank.emplace(name, rank);
        return {name,
                rm,
                checked_add(checked_mul(b.rule_max, a.lo), b.lo),
                checked_add(checked_mul(b.rule_max, a.hi), b.hi),
                rank};
    }
};

bool is_basic_desire(const Preference& p) {
    return p.kind == Preference::Kind::Atomic && p.atomic.chain.size() == 1;
}

}  // namespace

Emission emit_program(const Problem& problem, const Preference& pref, size_t length,
                      const EmitOptions& options) {
    Emission out;
    AspProgram& prog = out.program;
    const ActionTheory& theory = problem.theory;

    prog.header.push_back(std::string("prefplan ") + kVersion);
    prog.header.push_back("length " + std::to_string(length));
    for (const auto& [label, content] : options.digest_inputs)
        prog.header.push_back(label + " fnv1a " + fnv1a_hex(content));

    if (options.include_planning) {
        prog.facts.push_back("% planning problem");
        std::vector<std::string> planning_facts;
        std::vector<AspRule> planning = planning_rules(theory, length, planning_facts);
        prog.facts.insert(prog.facts.end(), planning_facts.begin(), planning_facts.end());
        prog.rules.push_back({"% planning problem", {}, {}});
        prog.rules.insert(prog.rules.end(), planning.begin(), planning.end());
    }

    prog.facts.push_back("% desire declarations");
    std::vector<std::string> universe = desire_universe_facts(theory);
    prog.facts.insert(prog.facts.end(), universe.begin(), universe.end());

    // weight machinery (also encodes all leaf desires); a bare basic desire
    // skips it in favour of maximizing its satisfaction atom directly
    out.root_is_basic_desire = is_basic_desire(pref);
    if (out.root_is_basic_desire) {
        out.root_name = encode_desire(pref.atomic.chain[0], theory, out.desires, prog.facts);
        prog.maximize = "maximize { satisfy(" + out.root_name + ", 0) = 1, not satisfy(" +
                        out.root_name + ", 0) = 0 }.";
    } else {
        PrefEncoder enc{theory, out.desires, prog};
        prog.rules.push_back({"% preference weights", {}, {}});
        PrefEncoder::Encoded root = enc.encode(pref);
        out.root_name = root.name;
        std::string stmt = "maximize { ";
        for (long long v = root.lo; v <= root.hi; ++v) {
            if (v > root.lo) stmt += ", ";
            stmt += "w(" + root.name + ", " + std::to_string(v) + ") = " + std::to_string(v);
        }
        stmt += " }.";
        prog.maximize = stmt;
    }

    prog.rules.push_back({"% desire satisfaction", {}, {}});
    std::vector<AspRule> sat = sat_rules(out.desires, theory, length);
    prog.rules.insert(prog.rules.end(), sat.begin(), sat.end());

    for (const DesireTable::Entry& e : out.desires.entries) prog.sigma.emplace(e.name, e.sigma);
    for (size_t f = 0; f < theory.fluent_count(); ++f)
        for (bool sign : {true, false}) prog.sigma.emplace(literal_term(theory, {int(f), sign}), 0);

    return out;
}

// ---------------------------------------------------- stratified evaluation ----

namespace {

// first argument of a ground atom: text between '(' and the matching
// depth-1 separator
std::string first_arg(const std::string& atom) {
    size_t open = atom.find('(');
    if (open == std::string::npos) return "";
    int depth = 0;
    for (size_t i = open; i < atom.size(); ++i) {
        if (atom[i] == '(') ++depth;
        if (atom[i] == ')') {
            if (--depth == 0) return atom.substr(open + 1, i - open - 1);
        }
        if (atom[i] == ',' && depth == 1) return atom.substr(open + 1, i - open - 1);
    }
    return "";
}

}  // namespace

std::set<std::string> stratified_eval(const AspProgram& program) {
    int sigma_max = 0;
    for (const auto& [name, s] : program.sigma) sigma_max = std::max(sigma_max, s);
    long long weight_base = 5LL * (sigma_max + 1);

    auto level_of = [&](const std::string& atom) -> long long {
        auto pred_is = [&](const char* p) {
            return atom.compare(0, strlen(p), p) == 0 && atom.size() > strlen(p) && atom[strlen(p)] == '(';
        };
        if (pred_is("satisfy") || pred_is("during")) {
            std::string arg = first_arg(atom);
            auto it = program.sigma.find(arg);
            if (it == program.sigma.end())
                fail(Error::Code::NotStratified, "no complexity rank for node " + arg);
            return 5LL * it->second + (pred_is("satisfy") ? 2 : 4);
        }
        if (pred_is("w") || pred_is("max")) {
            std::string arg = first_arg(atom);
            auto it = program.rank.find(arg);
            long long rank = it == program.rank.end() ? 0 : it->second;
            return weight_base + rank + 1;
        }
        return 0;
    };

    // verify the level mapping stratifies the program
    std::set<long long> levels{0};
    for (const AspRule& r : program.rules) {
        if (!r.head.empty() && r.head[0] == '%') continue;
        if (r.head.empty())
            fail(Error::Code::NotStratified, "integrity constraints are outside the stratified fragment");
        long long h = level_of(r.head);
        levels.insert(h);
        for (const std::string& b : r.pos)
            if (level_of(b) > h)
                fail(Error::Code::NotStratified, "positive dependency above head level: " + r.head);
        for (const std::string& b : r.neg)
            if (level_of(b) >= h)
                fail(Error::Code::NotStratified, "negative dependency not below head level: " + r.head);
    }

    std::set<std::string> derived;
    for (const std::string& f : program.facts)
        if (!f.empty() && f[0] != '%') derived.insert(f);

    for (long long level : levels) {
        bool changed = true;
        while (changed) {
            changed = false;
            for (const AspRule& r : program.rules) {
                if (r.head.empty() || r.head[0] == '%') continue;
                if (level_of(r.head) != level || derived.count(r.head)) continue;
                bool fires = true;
                for (const std::string& b : r.pos)
                    if (!derived.count(b)) {
                        fires = false;
                        break;
                    }
                for (const std::string& b : r.neg)
                    if (fires && derived.count(b)) fires = false;
                if (fires) {
                    derived.insert(r.head);
                    changed = true;
                }
            }
        }
    }
    return derived;
}

}  // namespace prefplan
