#include "prefplan/parser.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <unordered_map>

namespace prefplan {

int SchematicDomain::sort_id(const std::string& name) const {
    for (size_t i = 0; i < sorts.size(); ++i)
        if (sorts[i].name == name) return int(i);
    return -1;
}
int SchematicDomain::fluent_schema_id(const std::string& name) const {
    for (size_t i = 0; i < fluents.size(); ++i)
        if (fluents[i].name == name) return int(i);
    return -1;
}
int SchematicDomain::action_schema_id(const std::string& name) const {
    for (size_t i = 0; i < actions.size(); ++i)
        if (actions[i].name == name) return int(i);
    return -1;
}

namespace {

// ---------------------------------------------------------------- lexer ----

struct Token {
    enum class Kind { End, Ident, Var, Number, Punct };
    Kind kind = Kind::End;
    std::string text;
    SourcePos pos;
};

class Lexer {
public:
    explicit Lexer(const std::string& text) : text_(text) { advance(); }

    const Token& peek() const { return tok_; }
    Token next() {
        Token t = tok_;
        advance();
        return t;
    }
    bool at(const std::string& punct) const {
        return tok_.kind == Token::Kind::Punct && tok_.text == punct;
    }
    bool at_ident(const std::string& word) const {
        return tok_.kind == Token::Kind::Ident && tok_.text == word;
    }
    bool accept(const std::string& punct) {
        if (!at(punct)) return false;
        advance();
        return true;
    }
    bool accept_ident(const std::string& word) {
        if (!at_ident(word)) return false;
        advance();
        return true;
    }
    void expect(const std::string& punct) {
        if (!accept(punct))
            fail(Error::Code::Parse, "expected '" + punct + "' but found '" + describe() + "'", tok_.pos);
    }
    std::string expect_ident(const std::string& what) {
        if (tok_.kind != Token::Kind::Ident)
            fail(Error::Code::Parse, "expected " + what + " but found '" + describe() + "'", tok_.pos);
        return next().text;
    }
    SourcePos pos() const { return tok_.pos; }
    std::string describe() const {
        if (tok_.kind == Token::Kind::End) return "end of input";
        return tok_.text;
    }

    struct Snapshot {
        size_t i;
        int line, col;
        Token tok;
    };
    Snapshot snapshot() const { return {i_, line_, col_, tok_}; }
    void restore(const Snapshot& s) {
        i_ = s.i;
        line_ = s.line;
        col_ = s.col;
        tok_ = s.tok;
    }

private:
    void advance() {
        skip_space();
        tok_.pos = {line_, col_};
        if (i_ >= text_.size()) {
            tok_ = {Token::Kind::End, "", tok_.pos};
            return;
        }
        char c = text_[i_];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t start = i_;
            while (i_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[i_])) || text_[i_] == '_'))
                bump();
            std::string word = text_.substr(start, i_ - start);
            bool variable = std::isupper(static_cast<unsigned char>(word[0]));
            tok_.kind = variable ? Token::Kind::Var : Token::Kind::Ident;
            tok_.text = std::move(word);
            return;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t start = i_;
            while (i_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[i_]))) bump();
            tok_.kind = Token::Kind::Number;
            tok_.text = text_.substr(start, i_ - start);
            return;
        }
        static const char* multi[] = {"!!", "&&", "||", "<|", "<w", "<e", "!="};
        for (const char* m : multi) {
            if (text_.compare(i_, 2, m) == 0) {
                tok_.kind = Token::Kind::Punct;
                tok_.text = m;
                bump();
                bump();
                return;
            }
        }
        static const std::string singles = "(){},.=<!&|-";
        if (singles.find(c) != std::string::npos) {
            tok_.kind = Token::Kind::Punct;
            tok_.text = std::string(1, c);
            bump();
            return;
        }
        fail(Error::Code::Parse, std::string("unexpected character '") + c + "'", tok_.pos);
    }

    void skip_space() {
        while (i_ < text_.size()) {
            char c = text_[i_];
            if (c == '%') {
                while (i_ < text_.size() && text_[i_] != '\n') bump();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                bump();
            } else {
                break;
            }
        }
    }

    void bump() {
        if (text_[i_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++i_;
    }

    const std::string& text_;
    size_t i_ = 0;
    int line_ = 1, col_ = 1;
    Token tok_;
};

// -------------------------------------------------------- domain parser ----

class DomainParser {
public:
    explicit DomainParser(const std::string& text) : lex_(text) {}

    SchematicDomain run() {
        bool saw_goal = false;
        while (lex_.peek().kind != Token::Kind::End) {
            if (lex_.accept_ident("sort")) {
                parse_sort();
            } else if (lex_.accept_ident("fluent")) {
                parse_pred(dom_.fluents, "fluent");
            } else if (lex_.accept_ident("action")) {
                parse_pred(dom_.actions, "action");
            } else if (lex_.accept_ident("caused")) {
                parse_static();
            } else if (lex_.accept_ident("initially")) {
                parse_initially();
            } else if (lex_.accept_ident("goal")) {
                if (saw_goal) fail(Error::Code::Parse, "duplicate goal statement", lex_.pos());
                saw_goal = true;
                dom_.goal = parse_ground_formula(/*domain_tokens=*/true);
                lex_.expect(".");
            } else {
                parse_action_law();
            }
        }
        if (!saw_goal) dom_.goal.kind = SFormula::Kind::True;
        check_name_clashes();
        return std::move(dom_);
    }

private:
    SFormula parse_ground_formula(bool domain_tokens) { return parse_formula_or(domain_tokens); }

    void parse_sort() {
        SourcePos pos = lex_.pos();
        std::string name = lex_.expect_ident("sort name");
        if (dom_.sort_id(name) >= 0) fail(Error::Code::Parse, "duplicate sort " + name, pos);
        lex_.expect("=");
        lex_.expect("{");
        Sort sort{name, {}};
        while (true) {
            sort.constants.push_back(lex_.expect_ident("constant"));
            if (!lex_.accept(",")) break;
        }
        lex_.expect("}");
        lex_.expect(".");
        dom_.sorts.push_back(std::move(sort));
    }

    void parse_pred(std::vector<PredSchema>& out, const char* what) {
        SourcePos pos = lex_.pos();
        PredSchema schema;
        schema.pos = pos;
        schema.name = lex_.expect_ident(std::string(what) + " name");
        if (lex_.accept("(")) {
            while (true) {
                SourcePos spos = lex_.pos();
                std::string sort = lex_.expect_ident("sort name");
                int id = dom_.sort_id(sort);
                if (id < 0) fail(Error::Code::EmptySort, "undeclared sort " + sort, spos);
                schema.arg_sorts.push_back(id);
                if (!lex_.accept(",")) break;
            }
            lex_.expect(")");
        }
        lex_.expect(".");
        for (const PredSchema& p : out)
            if (p.name == schema.name)
                fail(Error::Code::NameClash, std::string("duplicate ") + what + " " + schema.name, pos);
        out.push_back(std::move(schema));
    }

    struct VarTable {
        std::vector<std::string> names;
        std::vector<int> sorts;
        int lookup_or_add(const std::string& name, int sort, SourcePos pos) {
            for (size_t i = 0; i < names.size(); ++i) {
                if (names[i] != name) continue;
                if (sort >= 0 && sorts[i] >= 0 && sorts[i] != sort)
                    fail(Error::Code::Resolve, "variable " + name + " used at positions of different sorts",
                         pos);
                if (sorts[i] < 0) sorts[i] = sort;
                return int(i);
            }
            names.push_back(name);
            sorts.push_back(sort);
            return int(names.size()) - 1;
        }
    };

    SAtom parse_atom(const std::vector<PredSchema>& schemas, const char* what, VarTable& vars) {
        SourcePos pos = lex_.pos();
        std::string name = lex_.expect_ident(std::string(what) + " name");
        int pred = -1;
        for (size_t i = 0; i < schemas.size(); ++i)
            if (schemas[i].name == name) pred = int(i);
        if (pred < 0)
            fail(&schemas == &dom_.fluents ? Error::Code::UnknownFluent : Error::Code::UnknownAction,
                 std::string("undeclared ") + what + " " + name, pos);
        SAtom atom;
        atom.pred = pred;
        const PredSchema& schema = schemas[size_t(pred)];
        if (lex_.accept("(")) {
            size_t arg = 0;
            while (true) {
                SourcePos apos = lex_.pos();
                if (arg >= schema.arg_sorts.size())
                    fail(Error::Code::Parse, name + " takes " + std::to_string(schema.arg_sorts.size()) +
                                                 " arguments", apos);
                int sort = schema.arg_sorts[arg];
                Token t = lex_.next();
                STerm term;
                if (t.kind == Token::Kind::Var) {
                    term.is_var = true;
                    term.var = vars.lookup_or_add(t.text, sort, apos);
                } else if (t.kind == Token::Kind::Ident) {
                    const Sort& s = dom_.sorts[size_t(sort)];
                    if (std::find(s.constants.begin(), s.constants.end(), t.text) == s.constants.end())
                        fail(Error::Code::Resolve,
                             "constant " + t.text + " is not in sort " + s.name, apos);
                    term.constant = t.text;
                } else {
                    fail(Error::Code::Parse, "expected constant or variable", apos);
                }
                atom.args.push_back(std::move(term));
                ++arg;
                if (!lex_.accept(",")) break;
            }
            lex_.expect(")");
        }
        if (atom.args.size() != schema.arg_sorts.size())
            fail(Error::Code::Parse, name + " takes " + std::to_string(schema.arg_sorts.size()) +
                                         " arguments, got " + std::to_string(atom.args.size()), pos);
        return atom;
    }

    SLit parse_literal(VarTable& vars) {
        bool positive = !lex_.accept("-");
        return SLit{parse_atom(dom_.fluents, "fluent", vars), positive};
    }

    // comma-separated literals and inequalities; `true` is the empty body
    void parse_conditions(LawSchema& law, VarTable& vars) {
        while (true) {
            if (lex_.accept_ident("true")) {
                // no condition
            } else if (lex_.peek().kind == Token::Kind::Var) {
                SourcePos pos = lex_.pos();
                Token lhs = lex_.next();
                if (!lex_.accept("!="))
                    fail(Error::Code::Parse, "variable " + lhs.text + " cannot stand alone here", pos);
                STerm a;
                a.is_var = true;
                a.var = vars.lookup_or_add(lhs.text, -1, pos);
                law.diseq.push_back({a, parse_diseq_rhs(vars)});
            } else {
                law.body.push_back(parse_literal(vars));
            }
            if (!lex_.accept(",")) break;
        }
    }

    STerm parse_diseq_rhs(VarTable& vars) {
        SourcePos pos = lex_.pos();
        Token t = lex_.next();
        STerm term;
        if (t.kind == Token::Kind::Var) {
            term.is_var = true;
            term.var = vars.lookup_or_add(t.text, -1, pos);
        } else if (t.kind == Token::Kind::Ident) {
            term.constant = t.text;
        } else {
            fail(Error::Code::Parse, "expected constant or variable after '!='", pos);
        }
        return term;
    }

    void finish_law(LawSchema law, VarTable vars) {
        law.var_names = std::move(vars.names);
        law.var_sorts = std::move(vars.sorts);
        for (size_t i = 0; i < law.var_sorts.size(); ++i)
            if (law.var_sorts[i] < 0)
                fail(Error::Code::UnboundVariable,
                     "variable " + law.var_names[i] + " appears only in inequalities", law.pos);
        dom_.laws.push_back(std::move(law));
    }

    void parse_static() {
        LawSchema law;
        law.kind = LawSchema::Kind::Static;
        law.pos = lex_.pos();
        VarTable vars;
        law.head = parse_literal(vars);
        if (lex_.accept_ident("if")) parse_conditions(law, vars);
        lex_.expect(".");
        finish_law(std::move(law), std::move(vars));
    }

    void parse_initially() {
        SourcePos pos = lex_.pos();
        VarTable vars;
        SLit lit = parse_literal(vars);
        if (!vars.names.empty())
            fail(Error::Code::Parse, "initially statements must be ground", pos);
        lex_.expect(".");
        dom_.initial.push_back(std::move(lit));
    }

    void parse_action_law() {
        LawSchema law;
        law.pos = lex_.pos();
        VarTable vars;
        law.action = parse_atom(dom_.actions, "action", vars);
        if (lex_.accept_ident("causes")) {
            law.kind = LawSchema::Kind::Dynamic;
            law.head = parse_literal(vars);
            if (lex_.accept_ident("if")) parse_conditions(law, vars);
        } else if (lex_.accept_ident("executable_if")) {
            law.kind = LawSchema::Kind::Exec;
            parse_conditions(law, vars);
        } else {
            fail(Error::Code::Parse, "expected 'causes' or 'executable_if' after action atom", lex_.pos());
        }
        lex_.expect(".");
        finish_law(std::move(law), std::move(vars));
    }

    // ground fluent formula; domain files use & | !, preference files && || !
    SFormula parse_formula_or(bool dom) {
        SFormula f = parse_formula_and(dom);
        const char* op = dom ? "|" : "||";
        if (!lex_.at(op)) return f;
        SFormula out;
        out.kind = SFormula::Kind::Or;
        out.kids.push_back(std::move(f));
        while (lex_.accept(op)) out.kids.push_back(parse_formula_and(dom));
        return out;
    }

    SFormula parse_formula_and(bool dom) {
        SFormula f = parse_formula_unary(dom);
        const char* op = dom ? "&" : "&&";
        if (!lex_.at(op)) return f;
        SFormula out;
        out.kind = SFormula::Kind::And;
        out.kids.push_back(std::move(f));
        while (lex_.accept(op)) out.kids.push_back(parse_formula_unary(dom));
        return out;
    }

    SFormula parse_formula_unary(bool dom) {
        if (lex_.accept("!")) {
            SFormula out;
            out.kind = SFormula::Kind::Not;
            out.kids.push_back(parse_formula_unary(dom));
            return out;
        }
        if (lex_.accept("(")) {
            SFormula f = parse_formula_or(dom);
            lex_.expect(")");
            return f;
        }
        SFormula f;
        if (lex_.accept_ident("true")) {
            f.kind = SFormula::Kind::True;
            return f;
        }
        if (lex_.accept_ident("false")) {
            f.kind = SFormula::Kind::False;
            return f;
        }
        f.kind = SFormula::Kind::Atom;
        f.positive = !lex_.accept("-");
        VarTable vars;
        f.atom = parse_atom(dom_.fluents, "fluent", vars);
        if (!vars.names.empty())
            fail(Error::Code::Parse, "formulas must be ground", lex_.pos());
        return f;
    }

    void check_name_clashes() {
        for (const PredSchema& f : dom_.fluents)
            if (dom_.action_schema_id(f.name) >= 0)
                fail(Error::Code::NameClash, "name " + f.name + " declared as both fluent and action",
                     f.pos);
    }

    Lexer lex_;
    SchematicDomain dom_;
};

// ------------------------------------------------------------- grounder ----

std::string ground_atom_name(const PredSchema& schema, const std::vector<std::string>& args) {
    if (args.empty()) return schema.name;
    std::string out = schema.name + "(";
    for (size_t i = 0; i < args.size(); ++i) {
        if (i) out += ",";
        out += args[i];
    }
    return out + ")";
}

class Grounder {
public:
    explicit Grounder(const SchematicDomain& schema) : dom_(schema) {}

    ActionTheory run() {
        instantiate_names(dom_.fluents, theory_.fluent_names, fluent_ids_);
        instantiate_names(dom_.actions, theory_.action_names, action_ids_);
        for (const LawSchema& law : dom_.laws) instantiate_law(law);
        for (const SLit& lit : dom_.initial) {
            FluentLiteral l{resolve_fluent(lit.atom, {}), lit.positive};
            if (std::find(theory_.initial.begin(), theory_.initial.end(), l) == theory_.initial.end())
                theory_.initial.push_back(l);
        }
        theory_.goal = instantiate_formula(dom_.goal);
        return std::move(theory_);
    }

private:
    void instantiate_names(const std::vector<PredSchema>& schemas, std::vector<std::string>& names,
                           std::unordered_map<std::string, int>& ids) {
        for (const PredSchema& schema : schemas) {
            for_each_tuple(schema.arg_sorts, schema.pos, [&](const std::vector<std::string>& args) {
                std::string name = ground_atom_name(schema, args);
                ids.emplace(name, int(names.size()));
                names.push_back(name);
            });
        }
    }

    template <typename F>
    void for_each_tuple(const std::vector<int>& arg_sorts, SourcePos pos, F&& f) {
        std::vector<std::string> args(arg_sorts.size());
        for (int s : arg_sorts)
            if (dom_.sorts[size_t(s)].constants.empty())
                fail(Error::Code::EmptySort, "sort " + dom_.sorts[size_t(s)].name + " has no constants",
                     pos);
        std::vector<size_t> idx(arg_sorts.size(), 0);
        while (true) {
            for (size_t i = 0; i < args.size(); ++i)
                args[i] = dom_.sorts[size_t(arg_sorts[i])].constants[idx[i]];
            f(args);
            size_t i = args.size();
            while (i > 0) {
                --i;
                if (++idx[i] < dom_.sorts[size_t(arg_sorts[i])].constants.size()) break;
                idx[i] = 0;
                if (i == 0) return;
            }
            if (args.empty()) return;
        }
    }

    std::string term_value(const STerm& t, const std::vector<std::string>& assignment) const {
        return t.is_var ? assignment[size_t(t.var)] : t.constant;
    }

    int resolve_fluent(const SAtom& atom, const std::vector<std::string>& assignment) {
        std::vector<std::string> args;
        for (const STerm& t : atom.args) args.push_back(term_value(t, assignment));
        std::string name = ground_atom_name(dom_.fluents[size_t(atom.pred)], args);
        auto it = fluent_ids_.find(name);
        if (it == fluent_ids_.end()) fail(Error::Code::UnknownFluent, "no ground fluent " + name);
        return it->second;
    }

    int resolve_action(const SAtom& atom, const std::vector<std::string>& assignment) {
        std::vector<std::string> args;
        for (const STerm& t : atom.args) args.push_back(term_value(t, assignment));
        std::string name = ground_atom_name(dom_.actions[size_t(atom.pred)], args);
        auto it = action_ids_.find(name);
        if (it == action_ids_.end()) fail(Error::Code::UnknownAction, "no ground action " + name);
        return it->second;
    }

    void instantiate_law(const LawSchema& law) {
        for_each_tuple(law.var_sorts, law.pos, [&](const std::vector<std::string>& assignment) {
            for (const Diseq& d : law.diseq)
                if (term_value(d.lhs, assignment) == term_value(d.rhs, assignment)) return;
            std::vector<FluentLiteral> body;
            for (const SLit& lit : law.body)
                body.push_back({resolve_fluent(lit.atom, assignment), lit.positive});
            switch (law.kind) {
                case LawSchema::Kind::Dynamic: {
                    DynamicLaw out{resolve_action(law.action, assignment),
                                   {resolve_fluent(law.head.atom, assignment), law.head.positive},
                                   std::move(body)};
                    if (std::find(theory_.dynamic.begin(), theory_.dynamic.end(), out) ==
                        theory_.dynamic.end())
                        theory_.dynamic.push_back(std::move(out));
                    break;
                }
                case LawSchema::Kind::Static: {
                    StaticLaw out{{resolve_fluent(law.head.atom, assignment), law.head.positive},
                                  std::move(body)};
                    if (std::find(theory_.static_laws.begin(), theory_.static_laws.end(), out) ==
                        theory_.static_laws.end())
                        theory_.static_laws.push_back(std::move(out));
                    break;
                }
                case LawSchema::Kind::Exec: {
                    ExecCondition out{resolve_action(law.action, assignment), std::move(body)};
                    if (std::find(theory_.exec.begin(), theory_.exec.end(), out) == theory_.exec.end())
                        theory_.exec.push_back(std::move(out));
                    break;
                }
            }
        });
    }

    Formula instantiate_formula(const SFormula& f) {
        switch (f.kind) {
            case SFormula::Kind::True: return Formula::constant(true);
            case SFormula::Kind::False: return Formula::constant(false);
            case SFormula::Kind::Atom: {
                FluentLiteral l{resolve_fluent(f.atom, {}), f.positive};
                return Formula::literal(l);
            }
            case SFormula::Kind::Not: return Formula::negation(instantiate_formula(f.kids[0]));
            case SFormula::Kind::And:
            case SFormula::Kind::Or: {
                std::vector<Formula> kids;
                for (const SFormula& k : f.kids) kids.push_back(instantiate_formula(k));
                return f.kind == SFormula::Kind::And ? Formula::conjunction(std::move(kids))
                                                     : Formula::disjunction(std::move(kids));
            }
        }
        return Formula::constant(true);
    }

    const SchematicDomain& dom_;
    ActionTheory theory_;
    std::unordered_map<std::string, int> fluent_ids_;
    std::unordered_map<std::string, int> action_ids_;
};

}  // namespace

SchematicDomain parse_domain(const std::string& text) { return DomainParser(text).run(); }

ActionTheory ground(const SchematicDomain& schema) { return Grounder(schema).run(); }

// ----------------------------------------------------- preference parser ----

namespace {

class PrefParser {
public:
    PrefParser(const std::string& text, const Problem& problem)
        : lex_(text), problem_(problem) {
        for (size_t i = 0; i < problem.theory.fluent_names.size(); ++i)
            fluent_ids_.emplace(problem.theory.fluent_names[i], int(i));
        for (size_t i = 0; i < problem.theory.action_names.size(); ++i)
            action_ids_.emplace(problem.theory.action_names[i], int(i));
    }

    PreferenceLibrary run() {
        while (lex_.peek().kind != Token::Kind::End) {
            SourcePos pos = lex_.pos();
            if (lex_.accept_ident("desire")) {
                std::string name = declare_name(pos);
                lex_.expect("=");
                lib_.desires.emplace(name, parse_desire_expr());
                lex_.expect(".");
            } else if (lex_.accept_ident("pref")) {
                std::string name = declare_name(pos);
                lex_.expect("=");
                lib_.prefs.emplace(name, parse_pref_expr());
                lex_.expect(".");
            } else if (lex_.accept_ident("optimize")) {
                if (lib_.optimize)
                    fail(Error::Code::Parse, "duplicate optimize statement", pos);
                std::string name = lex_.expect_ident("preference name");
                lex_.expect(".");
                lib_.optimize = lookup_root(name, pos);
                lib_.optimize_name = name;
            } else {
                fail(Error::Code::Parse,
                     "expected 'desire', 'pref' or 'optimize' but found '" + lex_.describe() + "'", pos);
            }
        }
        return std::move(lib_);
    }

    Desire parse_desire_expr() {
        ParsedD d = parse_chain();
        return require_desire(d, lex_.pos());
    }

    Preference parse_pref_expr() { return parse_pref_chain(); }

    void expect_end() {
        if (lex_.peek().kind != Token::Kind::End)
            fail(Error::Code::Parse, "trailing input: '" + lex_.describe() + "'", lex_.pos());
    }

private:
    // desire-level parse result; an expression built purely from action
    // references is only legal as an <e operand
    struct ParsedD {
        std::optional<Desire> desire;
        std::vector<int> ground_actions;
        int family = -1;  // action schema id when the operand is a bare family name
        SourcePos pos;
    };

    std::string declare_name(SourcePos pos) {
        std::string name = lex_.expect_ident("name");
        if (lib_.desires.count(name) || lib_.prefs.count(name))
            fail(Error::Code::NameClash, "duplicate declaration of " + name, pos);
        if (problem_.schema.fluent_schema_id(name) >= 0 || problem_.schema.action_schema_id(name) >= 0)
            fail(Error::Code::NameClash, name + " clashes with a declared fluent or action", pos);
        return name;
    }

    Preference lookup_root(const std::string& name, SourcePos pos) {
        if (auto it = lib_.prefs.find(name); it != lib_.prefs.end()) return it->second;
        if (auto it = lib_.desires.find(name); it != lib_.desires.end())
            return Preference::desire(it->second);
        fail(Error::Code::Resolve, "undeclared preference " + name, pos);
    }

    Desire require_desire(const ParsedD& d, SourcePos pos) {
        if (!d.desire)
            fail(Error::Code::Resolve, "action reference is only allowed as an operand of '<e'", d.pos);
        (void)pos;
        return *d.desire;
    }

    // chain level: d (< d)+ | d (<w d)+ | a (<e a)+
    ParsedD parse_chain() {
        ParsedD first = parse_or();
        if (lex_.at("<") || lex_.at("<w")) {
            std::string op = lex_.next().text;
            std::vector<Desire> chain{require_desire(first, first.pos)};
            while (true) {
                ParsedD next = parse_or();
                chain.push_back(require_desire(next, next.pos));
                if (lex_.at(op)) {
                    lex_.next();
                } else if (lex_.at("<") || lex_.at("<w") || lex_.at("<e")) {
                    fail(Error::Code::Parse, "mixed sugar operators in one chain", lex_.pos());
                } else {
                    break;
                }
            }
            ParsedD out;
            out.pos = first.pos;
            out.desire = op == "<" ? strong_chain(chain) : weak_chain(chain);
            return out;
        }
        if (lex_.at("<e")) {
            std::vector<ParsedD> operands{first};
            while (lex_.accept("<e")) operands.push_back(parse_or());
            Desire acc = enabled_pair(operands[0], operands[1]);
            for (size_t i = 1; i + 1 < operands.size(); ++i)
                acc = Desire::conj(std::move(acc), enabled_pair(operands[i], operands[i + 1]));
            ParsedD out;
            out.pos = first.pos;
            out.desire = std::move(acc);
            return out;
        }
        return first;
    }

    Desire enabled_pair(const ParsedD& lhs, const ParsedD& rhs) {
        if (lhs.family >= 0 || rhs.family >= 0) {
            if (lhs.family < 0 || rhs.family < 0)
                fail(Error::Code::Resolve, "'<e' cannot mix an action family with ground actions",
                     lhs.pos);
            return family_enabled(lhs.family, rhs.family, lhs.pos);
        }
        if (lhs.ground_actions.empty() || rhs.ground_actions.empty())
            fail(Error::Code::Resolve, "operands of '<e' must be actions", lhs.pos);
        return enabled_desire_sets(problem_.theory, lhs.ground_actions, rhs.ground_actions);
    }

    // family form: disjunction over shared argument tuples with pairwise
    // distinct same-sort components
    Desire family_enabled(int fam_a, int fam_b, SourcePos pos) {
        const PredSchema& a = problem_.schema.actions[size_t(fam_a)];
        const PredSchema& b = problem_.schema.actions[size_t(fam_b)];
        if (a.arg_sorts != b.arg_sorts)
            fail(Error::Code::Resolve,
                 "action families " + a.name + " and " + b.name + " have different signatures", pos);
        std::vector<Desire> disjuncts;
        std::vector<std::string> args(a.arg_sorts.size());
        enumerate_tuples(a.arg_sorts, args, 0, [&](const std::vector<std::string>& tuple) {
            for (size_t i = 0; i < tuple.size(); ++i)
                for (size_t j = i + 1; j < tuple.size(); ++j)
                    if (a.arg_sorts[i] == a.arg_sorts[j] && tuple[i] == tuple[j]) return;
            int ga = lookup_action(ground_atom_name(a, tuple), pos);
            int gb = lookup_action(ground_atom_name(b, tuple), pos);
            disjuncts.push_back(enabled_desire(problem_.theory, ga, gb));
        });
        if (disjuncts.empty())
            fail(Error::Code::Resolve, "family preference " + a.name + " <e " + b.name +
                                           " expands to no instances", pos);
        Desire acc = disjuncts[0];
        for (size_t i = 1; i < disjuncts.size(); ++i) acc = Desire::disj(std::move(acc), disjuncts[i]);
        return acc;
    }

    int lookup_action(const std::string& name, SourcePos pos) {
        auto it = action_ids_.find(name);
        if (it == action_ids_.end()) fail(Error::Code::UnknownAction, "no ground action " + name, pos);
        return it->second;
    }

    template <typename F>
    void enumerate_tuples(const std::vector<int>& sorts, std::vector<std::string>& args, size_t i, F&& f) {
        if (i == sorts.size()) {
            f(args);
            return;
        }
        for (const std::string& c : problem_.schema.sorts[size_t(sorts[i])].constants) {
            args[i] = c;
            enumerate_tuples(sorts, args, i + 1, f);
        }
    }

    ParsedD parse_or() {
        ParsedD acc = parse_and();
        while (lex_.at("||")) {
            SourcePos pos = lex_.pos();
            lex_.next();
            ParsedD rhs = parse_and();
            bool lhs_actions = !acc.ground_actions.empty() || acc.family >= 0;
            bool rhs_actions = !rhs.ground_actions.empty() || rhs.family >= 0;
            if (lhs_actions && rhs_actions) {
                if (acc.family >= 0 || rhs.family >= 0)
                    fail(Error::Code::Resolve, "action families cannot be combined with '||'", pos);
                acc.ground_actions.insert(acc.ground_actions.end(), rhs.ground_actions.begin(),
                                          rhs.ground_actions.end());
                acc.desire.reset();
            } else {
                Desire d = Desire::disj(require_desire(acc, pos), require_desire(rhs, pos));
                acc = ParsedD{};
                acc.pos = pos;
                acc.desire = std::move(d);
            }
        }
        return acc;
    }

    ParsedD parse_and() {
        ParsedD acc = parse_unary();
        while (lex_.at("&&")) {
            SourcePos pos = lex_.pos();
            lex_.next();
            ParsedD rhs = parse_unary();
            Desire d = Desire::conj(require_desire(acc, pos), require_desire(rhs, pos));
            acc = ParsedD{};
            acc.pos = pos;
            acc.desire = std::move(d);
        }
        return acc;
    }

    ParsedD parse_unary() {
        if (lex_.at("!")) {
            SourcePos pos = lex_.pos();
            lex_.next();
            ParsedD inner = parse_unary();
            ParsedD out;
            out.pos = pos;
            out.desire = Desire::neg(require_desire(inner, pos));
            return out;
        }
        return parse_primary();
    }

    ParsedD parse_primary() {
        ParsedD out;
        out.pos = lex_.pos();
        if (lex_.accept("(")) {
            out = parse_chain();
            lex_.expect(")");
            return out;
        }
        if (lex_.accept("-")) {
            out.desire = Desire::state(Formula::literal({parse_ground_fluent(), false}));
            return out;
        }
        if (lex_.at_ident("true") || lex_.at_ident("false")) {
            bool value = lex_.next().text == "true";
            out.desire = Desire::state(Formula::constant(value));
            return out;
        }
        for (auto [word, kind] : {std::pair{"always", Desire::Kind::Always},
                                  std::pair{"eventually", Desire::Kind::Eventually},
                                  std::pair{"next", Desire::Kind::Next}}) {
            if (lex_.accept_ident(word)) {
                lex_.expect("(");
                Desire inner = parse_desire_expr();
                lex_.expect(")");
                out.desire = Desire::make(kind, {std::move(inner)});
                return out;
            }
        }
        if (lex_.accept_ident("until")) {
            lex_.expect("(");
            Desire a = parse_desire_expr();
            lex_.expect(",");
            Desire b = parse_desire_expr();
            lex_.expect(")");
            out.desire = Desire::make(Desire::Kind::Until, {std::move(a), std::move(b)});
            return out;
        }
        if (lex_.accept_ident("occ")) {
            lex_.expect("(");
            int action = parse_ground_action(true);
            lex_.expect(")");
            out.desire = Desire::occ(action);
            return out;
        }
        if (lex_.accept_ident("goal")) {
            lex_.expect("(");
            Formula f = parse_fluent_formula();
            lex_.expect(")");
            out.desire = Desire::goal(std::move(f));
            return out;
        }
        if (lex_.accept_ident("before")) {
            lex_.expect("(");
            Formula a = parse_fluent_formula();
            lex_.expect(",");
            Formula b = parse_fluent_formula();
            lex_.expect(")");
            out.desire = temporal_order_desire(std::move(a), std::move(b));
            return out;
        }
        // named reference, fluent atom, or action reference
        SourcePos pos = lex_.pos();
        std::string name = lex_.expect_ident("desire, fluent or action");
        if (!lex_.at("(")) {
            if (auto it = lib_.desires.find(name); it != lib_.desires.end()) {
                out.desire = it->second;
                return out;
            }
            if (lib_.prefs.count(name))
                fail(Error::Code::Resolve, name + " names a preference, not a desire", pos);
        }
        return resolve_atomic(name, pos);
    }

    // `name` already consumed; may be a 0-ary or parenthesised fluent/action
    ParsedD resolve_atomic(const std::string& name, SourcePos pos) {
        ParsedD out;
        out.pos = pos;
        std::string ground_name = name;
        if (lex_.at("(")) {
            lex_.expect("(");
            ground_name += "(";
            bool first = true;
            while (true) {
                if (!first) ground_name += ",";
                first = false;
                ground_name += lex_.expect_ident("constant");
                if (!lex_.accept(",")) break;
            }
            lex_.expect(")");
            ground_name += ")";
        } else {
            // bare family name?
            int fam = problem_.schema.action_schema_id(name);
            if (fam >= 0 && !problem_.schema.actions[size_t(fam)].arg_sorts.empty()) {
                out.family = fam;
                return out;
            }
        }
        if (auto it = fluent_ids_.find(ground_name); it != fluent_ids_.end()) {
            out.desire = Desire::state(Formula::literal({it->second, true}));
            return out;
        }
        if (auto it = action_ids_.find(ground_name); it != action_ids_.end()) {
            out.ground_actions = {it->second};
            return out;
        }
        fail(Error::Code::UnknownFluent, "unknown name " + ground_name, pos);
    }

    std::string parse_ground_atom_text() {
        std::string name = lex_.expect_ident("atom");
        if (lex_.accept("(")) {
            name += "(";
            bool first = true;
            while (true) {
                if (!first) name += ",";
                first = false;
                name += lex_.expect_ident("constant");
                if (!lex_.accept(",")) break;
            }
            lex_.expect(")");
            name += ")";
        }
        return name;
    }

    int parse_ground_fluent() {
        SourcePos pos = lex_.pos();
        std::string name = parse_ground_atom_text();
        auto it = fluent_ids_.find(name);
        if (it == fluent_ids_.end()) fail(Error::Code::UnknownFluent, "unknown fluent " + name, pos);
        return it->second;
    }

    int parse_ground_action(bool required) {
        SourcePos pos = lex_.pos();
        std::string name = parse_ground_atom_text();
        auto it = action_ids_.find(name);
        if (it == action_ids_.end()) {
            if (required) fail(Error::Code::UnknownAction, "unknown action " + name, pos);
            return -1;
        }
        return it->second;
    }

    // fluent formula with && || ! - true false, n-ary connectives
    Formula parse_fluent_formula() { return parse_ff_or(); }

    Formula parse_ff_or() {
        Formula f = parse_ff_and();
        if (!lex_.at("||")) return f;
        std::vector<Formula> kids{std::move(f)};
        while (lex_.accept("||")) kids.push_back(parse_ff_and());
        return Formula::disjunction(std::move(kids));
    }

    Formula parse_ff_and() {
        Formula f = parse_ff_unary();
        if (!lex_.at("&&")) return f;
        std::vector<Formula> kids{std::move(f)};
        while (lex_.accept("&&")) kids.push_back(parse_ff_unary());
        return Formula::conjunction(std::move(kids));
    }

    Formula parse_ff_unary() {
        if (lex_.accept("!")) return Formula::negation(parse_ff_unary());
        if (lex_.accept("(")) {
            Formula f = parse_ff_or();
            lex_.expect(")");
            return f;
        }
        if (lex_.accept_ident("true")) return Formula::constant(true);
        if (lex_.accept_ident("false")) return Formula::constant(false);
        bool positive = !lex_.accept("-");
        return Formula::literal({parse_ground_fluent(), positive});
    }

    // ---- preference level ----

    Preference parse_pref_chain() {
        Preference first = parse_pref_or();
        if (!lex_.at("<|")) return first;
        std::vector<Preference> elements{std::move(first)};
        while (lex_.accept("<|")) elements.push_back(parse_pref_or());
        // a chain of single desires is an atomic preference
        bool all_desires = std::all_of(elements.begin(), elements.end(), [](const Preference& p) {
            return p.kind == Preference::Kind::Atomic && p.atomic.chain.size() == 1;
        });
        if (all_desires) {
            AtomicPreference atomic;
            for (Preference& p : elements) atomic.chain.push_back(std::move(p.atomic.chain[0]));
            return Preference::make_atomic(std::move(atomic));
        }
        return Preference::make(Preference::Kind::Chain, std::move(elements));
    }

    Preference parse_pref_or() {
        Preference acc = parse_pref_and();
        while (lex_.at("|")) {
            lex_.next();
            acc = Preference::disj(std::move(acc), parse_pref_and());
        }
        return acc;
    }

    Preference parse_pref_and() {
        Preference acc = parse_pref_unary();
        while (lex_.at("&")) {
            lex_.next();
            acc = Preference::conj(std::move(acc), parse_pref_unary());
        }
        return acc;
    }

    Preference parse_pref_unary() {
        if (lex_.accept("!!")) return Preference::neg(parse_pref_unary());
        return parse_pref_primary();
    }

    Preference parse_pref_primary() {
        SourcePos pos = lex_.pos();
        if (lex_.at("(")) {
            // ambiguous: a parenthesised preference or a parenthesised
            // desire followed by desire-level operators
            Lexer::Snapshot saved = lex_.snapshot();
            bool as_pref = true;
            Preference p;
            try {
                lex_.expect("(");
                p = parse_pref_chain();
                lex_.expect(")");
            } catch (const Error&) {
                as_pref = false;
            }
            if (as_pref && !lex_.at("&&") && !lex_.at("||") && !lex_.at("<") && !lex_.at("<w") &&
                !lex_.at("<e"))
                return p;
            lex_.restore(saved);
            return Preference::desire(parse_desire_expr());
        }
        if (lex_.at_ident("maxim") || lex_.at_ident("ch")) {
            bool is_maxim = lex_.next().text == "maxim";
            lex_.expect("(");
            std::vector<Desire> desires;
            while (true) {
                desires.push_back(parse_desire_expr());
                if (!lex_.accept(",")) break;
            }
            lex_.expect(")");
            if (is_maxim) return maxim(desires);
            std::vector<size_t> identity(desires.size());
            for (size_t i = 0; i < identity.size(); ++i) identity[i] = i;
            return Preference::make_atomic(ch(desires, identity));
        }
        // a declared pref name, else a desire expression
        if (lex_.peek().kind == Token::Kind::Ident) {
            if (auto it = lib_.prefs.find(lex_.peek().text); it != lib_.prefs.end()) {
                lex_.next();
                return it->second;
            }
        }
        (void)pos;
        return Preference::desire(parse_desire_expr());
    }

    Lexer lex_;
    const Problem& problem_;
    PreferenceLibrary lib_;
    std::unordered_map<std::string, int> fluent_ids_;
    std::unordered_map<std::string, int> action_ids_;
};

}  // namespace

PreferenceLibrary parse_preferences(const std::string& text, const Problem& problem) {
    return PrefParser(text, problem).run();
}

Preference parse_preference(const std::string& text, const Problem& problem) {
    PrefParser p(text, problem);
    Preference out = p.parse_pref_expr();
    p.expect_end();
    return out;
}

Desire parse_desire(const std::string& text, const Problem& problem) {
    PrefParser p(text, problem);
    Desire out = p.parse_desire_expr();
    p.expect_end();
    return out;
}

// ------------------------------------------------------------ plan files ----

std::vector<int> parse_plan(const std::string& text, const ActionTheory& theory) {
    Lexer lex(text);
    std::vector<std::pair<int, int>> steps;  // (t, action)
    while (lex.peek().kind != Token::Kind::End) {
        SourcePos pos = lex.pos();
        if (!lex.accept_ident("occ"))
            fail(Error::Code::InvalidPlan, "expected occ(<action>, <t>) but found '" + lex.describe() + "'",
                 pos);
        lex.expect("(");
        std::string name = lex.expect_ident("action");
        if (lex.accept("(")) {
            name += "(";
            bool first = true;
            while (true) {
                if (!first) name += ",";
                first = false;
                name += lex.expect_ident("constant");
                if (!lex.accept(",")) break;
            }
            lex.expect(")");
            name += ")";
        }
        lex.expect(",");
        if (lex.peek().kind != Token::Kind::Number)
            fail(Error::Code::InvalidPlan, "expected a time step", lex.pos());
        int t = std::stoi(lex.next().text);
        lex.expect(")");
        lex.expect(".");
        int action = theory.action_id(name);
        if (action < 0) fail(Error::Code::InvalidPlan, "unknown action " + name + " in plan", pos);
        steps.emplace_back(t, action);
    }
    std::sort(steps.begin(), steps.end());
    std::vector<int> actions;
    for (size_t i = 0; i < steps.size(); ++i) {
        if (steps[i].first != int(i))
            fail(Error::Code::InvalidPlan,
                 "plan steps must be contiguous from 0; missing or duplicate step " + std::to_string(i));
        actions.push_back(steps[i].second);
    }
    return actions;
}

std::string format_plan(const std::vector<int>& actions, const ActionTheory& theory) {
    std::string out;
    for (size_t i = 0; i < actions.size(); ++i)
        out += "occ(" + theory.action_name(actions[i]) + ", " + std::to_string(i) + ").\n";
    return out;
}

}  // namespace prefplan
