#include "prefplan/preference.hpp"

#include <algorithm>
#include <numeric>

namespace prefplan {

Desire strong_desire(Desire phi1, Desire phi2) {
    return Desire::conj(std::move(phi1), Desire::neg(std::move(phi2)));
}

Desire weak_desire(Desire phi1, Desire phi2) {
    return Desire::disj(std::move(phi1), Desire::neg(std::move(phi2)));
}

namespace {

Desire adjacent_chain(const std::vector<Desire>& chain, Desire (*pair)(Desire, Desire)) {
    if (chain.empty()) fail(Error::Code::Parse, "empty desire chain");
    if (chain.size() == 1) return chain[0];
    Desire acc = pair(chain[0], chain[1]);
    for (size_t i = 1; i + 1 < chain.size(); ++i)
        acc = Desire::conj(std::move(acc), pair(chain[i], chain[i + 1]));
    return acc;
}

}  // namespace

Desire strong_chain(const std::vector<Desire>& chain) { return adjacent_chain(chain, strong_desire); }
Desire weak_chain(const std::vector<Desire>& chain) { return adjacent_chain(chain, weak_desire); }

Formula executability_formula(const ActionTheory& theory, int action) {
    if (action < 0 || size_t(action) >= theory.action_count())
        fail(Error::Code::UnknownAction, "undeclared action #" + std::to_string(action));
    std::vector<Formula> disjuncts;
    for (const ExecCondition& cond : theory.exec) {
        if (cond.action != action) continue;
        if (cond.body.empty()) {
            disjuncts.push_back(Formula::constant(true));
            continue;
        }
        std::vector<Formula> lits;
        for (FluentLiteral l : cond.body) lits.push_back(Formula::literal(l));
        disjuncts.push_back(lits.size() == 1 ? lits[0] : Formula::conjunction(std::move(lits)));
    }
    if (disjuncts.empty()) return Formula::constant(false);  // never executable
    return disjuncts.size() == 1 ? disjuncts[0] : Formula::disjunction(std::move(disjuncts));
}

Desire enabled_desire(const ActionTheory& theory, int a1, int a2) {
    Desire antecedent = Desire::conj(Desire::state(executability_formula(theory, a1)),
                                     Desire::state(executability_formula(theory, a2)));
    Desire consequent = strong_desire(Desire::occ(a1), Desire::occ(a2));
    return Desire::disj(Desire::neg(std::move(antecedent)), std::move(consequent));
}

Desire enabled_desire_sets(const ActionTheory& theory, const std::vector<int>& as,
                           const std::vector<int>& bs) {
    if (as.empty() || bs.empty()) fail(Error::Code::Parse, "empty action set in enabled desire");
    std::vector<Desire> pairs;
    for (int a : as)
        for (int b : bs) pairs.push_back(enabled_desire(theory, a, b));
    Desire acc = pairs[0];
    for (size_t i = 1; i < pairs.size(); ++i) acc = Desire::conj(std::move(acc), pairs[i]);
    return acc;
}

AtomicPreference ch(const std::vector<Desire>& desires, const std::vector<size_t>& perm) {
    if (desires.empty()) fail(Error::Code::Parse, "ch needs at least one desire");
    if (perm.size() != desires.size()) fail(Error::Code::Parse, "permutation size mismatch in ch");
    AtomicPreference out;
    for (size_t start = 0; start < perm.size(); ++start) {
        Desire acc = desires[perm[start]];
        for (size_t j = start + 1; j < perm.size(); ++j)
            acc = Desire::conj(std::move(acc), desires[perm[j]]);
        out.chain.push_back(std::move(acc));
    }
    return out;
}

Preference maxim(const std::vector<Desire>& desires) {
    constexpr size_t kMaxDesires = 6;
    if (desires.empty()) fail(Error::Code::Parse, "maxim needs at least one desire");
    if (desires.size() > kMaxDesires)
        fail(Error::Code::TooManyDesires,
             "maxim over " + std::to_string(desires.size()) + " desires exceeds the factorial guard of " +
                 std::to_string(kMaxDesires));
    std::vector<size_t> perm(desires.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<Preference> branches;
    do {
        branches.push_back(Preference::make_atomic(ch(desires, perm)));
    } while (std::next_permutation(perm.begin(), perm.end()));
    Preference acc = branches[0];
    for (size_t i = 1; i < branches.size(); ++i) acc = Preference::disj(std::move(acc), branches[i]);
    return acc;
}

Desire temporal_order_desire(Formula phi, Formula phi_prime) {
    Desire both = Desire::make(
        Desire::Kind::Eventually,
        {Desire::conj(Desire::state(phi),
                      Desire::make(Desire::Kind::Eventually, {Desire::state(phi_prime)}))});
    Desire order = Desire::make(
        Desire::Kind::Until,
        {Desire::state(Formula::negation(phi_prime)), Desire::state(phi)});
    return Desire::conj(std::move(both), std::move(order));
}

// ---- printing ----

namespace {

// Formula precedence: ! > && > ||
void print_formula(std::string& out, const Formula& f, const ActionTheory& theory, int parent_prec) {
    auto wrap = [&](int prec, auto&& body) {
        bool paren = prec < parent_prec;
        if (paren) out += "(";
        body();
        if (paren) out += ")";
    };
    switch (f.kind) {
        case Formula::Kind::True: out += "true"; break;
        case Formula::Kind::False: out += "false"; break;
        case Formula::Kind::Literal: out += theory.literal_name(f.lit); break;
        case Formula::Kind::Not:
            wrap(3, [&] {
                out += "!";
                if (f.kids[0].kind == Formula::Kind::Not) out += " ";  // avoid the '!!' token
                print_formula(out, f.kids[0], theory, 3);
            });
            break;
        case Formula::Kind::And:
            // n-ary: children of the same kind must re-parse nested, so they
            // print one level up
            wrap(2, [&] {
                for (size_t i = 0; i < f.kids.size(); ++i) {
                    if (i) out += " && ";
                    print_formula(out, f.kids[i], theory, 3);
                }
            });
            break;
        case Formula::Kind::Or:
            wrap(1, [&] {
                for (size_t i = 0; i < f.kids.size(); ++i) {
                    if (i) out += " || ";
                    print_formula(out, f.kids[i], theory, 2);
                }
            });
            break;
    }
}

void print_desire(std::string& out, const Desire& d, const ActionTheory& theory, int parent_prec) {
    auto wrap = [&](int prec, auto&& body) {
        bool paren = prec < parent_prec;
        if (paren) out += "(";
        body();
        if (paren) out += ")";
    };
    switch (d.kind) {
        case Desire::Kind::StateFormula:
            // compound state formulas always get parens so they re-parse as
            // one primary
            if (d.formula.kind == Formula::Kind::Literal || d.formula.kind == Formula::Kind::True ||
                d.formula.kind == Formula::Kind::False) {
                print_formula(out, d.formula, theory, 0);
            } else {
                out += "(";
                print_formula(out, d.formula, theory, 0);
                out += ")";
            }
            break;
        case Desire::Kind::Occ:
            out += "occ(" + theory.action_name(d.action) + ")";
            break;
        case Desire::Kind::Goal:
            out += "goal(";
            print_formula(out, d.formula, theory, 0);
            out += ")";
            break;
        case Desire::Kind::Not:
            wrap(3, [&] {
                out += "!";
                if (d.kids[0].kind == Desire::Kind::Not) out += " ";  // avoid the '!!' token
                print_desire(out, d.kids[0], theory, 3);
            });
            break;
        case Desire::Kind::And:
            // binary, left-associative: right operand prints one level up
            wrap(2, [&] {
                print_desire(out, d.kids[0], theory, 2);
                out += " && ";
                print_desire(out, d.kids[1], theory, 3);
            });
            break;
        case Desire::Kind::Or:
            wrap(1, [&] {
                print_desire(out, d.kids[0], theory, 1);
                out += " || ";
                print_desire(out, d.kids[1], theory, 2);
            });
            break;
        case Desire::Kind::Next:
            out += "next(";
            print_desire(out, d.kids[0], theory, 0);
            out += ")";
            break;
        case Desire::Kind::Until:
            out += "until(";
            print_desire(out, d.kids[0], theory, 0);
            out += ", ";
            print_desire(out, d.kids[1], theory, 0);
            out += ")";
            break;
        case Desire::Kind::Always:
            out += "always(";
            print_desire(out, d.kids[0], theory, 0);
            out += ")";
            break;
        case Desire::Kind::Eventually:
            out += "eventually(";
            print_desire(out, d.kids[0], theory, 0);
            out += ")";
            break;
    }
}

// Preference precedence: !! > & > | > <|
void print_pref(std::string& out, const Preference& p, const ActionTheory& theory, int parent_prec) {
    auto wrap = [&](int prec, auto&& body) {
        bool paren = prec < parent_prec;
        if (paren) out += "(";
        body();
        if (paren) out += ")";
    };
    switch (p.kind) {
        case Preference::Kind::Atomic:
            if (p.atomic.chain.size() == 1) {
                out += to_string(p.atomic.chain[0], theory);
            } else {
                wrap(1, [&] {
                    for (size_t i = 0; i < p.atomic.chain.size(); ++i) {
                        if (i) out += " <| ";
                        out += to_string(p.atomic.chain[i], theory);
                    }
                });
            }
            break;
        case Preference::Kind::Neg:
            wrap(4, [&] {
                out += "!!";
                print_pref(out, p.kids[0], theory, 4);
            });
            break;
        case Preference::Kind::Conj:
            wrap(3, [&] {
                print_pref(out, p.kids[0], theory, 3);
                out += " & ";
                print_pref(out, p.kids[1], theory, 4);
            });
            break;
        case Preference::Kind::Disj:
            wrap(2, [&] {
                print_pref(out, p.kids[0], theory, 2);
                out += " | ";
                print_pref(out, p.kids[1], theory, 3);
            });
            break;
        case Preference::Kind::Chain:
            wrap(1, [&] {
                for (size_t i = 0; i < p.kids.size(); ++i) {
                    if (i) out += " <| ";
                    // chain elements bind tighter than the chain itself
                    print_pref(out, p.kids[i], theory, 2);
                }
            });
            break;
    }
}

}  // namespace

std::string to_string(const Formula& f, const ActionTheory& theory) {
    std::string out;
    print_formula(out, f, theory, 0);
    return out;
}

std::string to_string(const Desire& d, const ActionTheory& theory) {
    std::string out;
    print_desire(out, d, theory, 0);
    return out;
}

std::string to_string(const Preference& p, const ActionTheory& theory) {
    std::string out;
    print_pref(out, p, theory, 0);
    return out;
}

}  // namespace prefplan
