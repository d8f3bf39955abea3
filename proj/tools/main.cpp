#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "prefplan/asp.hpp"
#include "prefplan/patterns.hpp"
#include "prefplan/solver.hpp"
#include "prefplan/version.hpp"

using namespace prefplan;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(Error::Code::Io, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

size_t default_length() {
    if (const char* env = std::getenv("PREFPLAN_LENGTH")) return size_t(std::stoul(env));
    return 8;
}

struct LoadedPrefs {
    Preference pref;
    std::string source_text;
};

// state-diff comment between consecutive states
std::string state_diff(const ActionTheory& theory, const State& before, const State& after) {
    std::string out;
    for (size_t f = 0; f < theory.fluent_count(); ++f) {
        FluentLiteral pos{int(f), true};
        if (before.holds(pos) != after.holds(pos)) {
            out += after.holds(pos) ? " +" : " -";
            out += theory.fluent_name(int(f));
        }
    }
    return out;
}

void print_trajectory(const ActionTheory& theory, const Trajectory& t) {
    for (size_t i = 0; i < t.length(); ++i) {
        std::cout << "occ(" << theory.action_name(t.action(i)) << ", " << i << ").\n";
        std::string diff = state_diff(theory, t.state(i), t.state(i + 1));
        if (!diff.empty()) std::cout << "% state " << (i + 1) << ":" << diff << "\n";
    }
    if (t.length() == 0) std::cout << "% empty plan: the goal holds initially\n";
}

nlohmann::json weight_tree_json(const WeightReport& report) {
    nlohmann::json nodes = nlohmann::json::array();
    for (const WeightNode& n : report.nodes) {
        nodes.push_back({{"id", n.id},
                         {"parent", n.parent},
                         {"kind", n.label},
                         {"weight", n.weight},
                         {"max_bound", n.max_bound},
                         {"rule_max", n.rule_max}});
    }
    return {{"weight", report.weight}, {"max_bound", report.max_bound}, {"nodes", nodes}};
}

struct PatternSetup {
    Problem problem;
    Preference pref;
};

PatternSetup apply_pattern(const Problem& base, const std::string& pattern, size_t length,
                           const std::string& costs_path, long long min_cost, long long max_cost_opt) {
    PatternSetup out{base, Preference::desire(Desire::state(Formula::constant(true)))};
    if (pattern == "shortest-formula") {
        out.pref = Preference::make_atomic(shortest_formula(length, base.theory.goal));
    } else if (pattern == "shortest-action") {
        ShortestActionTransform tr = shortest_action_transform(base.theory);
        out.problem.theory = tr.theory;
        out.pref = Preference::desire(tr.short_desire);
    } else if (pattern == "cheapest") {
        if (costs_path.empty()) fail(Error::Code::Io, "--pattern cheapest requires --costs");
        std::map<int, long long> costs = parse_costs(slurp(costs_path), base.theory);
        long long max_cost = max_cost_opt;
        if (max_cost < 0) {
            long long worst = 0;
            for (auto& [a, c] : costs) worst = std::max(worst, c);
            max_cost = worst * (long long)length;
        }
        check_cost_bound(costs, length, max_cost);
        CheapestTransform tr = cheapest_transform(base.theory, costs, min_cost, max_cost);
        out.problem.theory = tr.theory;
        out.pref = Preference::make_atomic(tr.preference);
    } else {
        fail(Error::Code::Io, "unknown pattern " + pattern);
    }
    return out;
}

int cmd_plan(const std::string& domain_path, const std::string& prefs_path, size_t length,
             const std::string& mode, bool explain, bool no_post_goal, bool prune_visited,
             const std::string& pattern, const std::string& costs_path, long long min_cost,
             long long max_cost) {
    Problem problem = load_domain(slurp(domain_path));
    Preference pref = Preference::desire(Desire::state(Formula::constant(true)));
    if (!pattern.empty()) {
        if (!prefs_path.empty())
            fail(Error::Code::Io, "--pattern and --prefs are mutually exclusive");
        PatternSetup setup = apply_pattern(problem, pattern, length, costs_path, min_cost, max_cost);
        problem = std::move(setup.problem);
        pref = std::move(setup.pref);
    } else if (!prefs_path.empty()) {
        PreferenceLibrary lib = parse_preferences(slurp(prefs_path), problem);
        if (!lib.optimize) fail(Error::Code::Resolve, prefs_path + " has no optimize statement");
        pref = *lib.optimize;
    }

    PlanQuery query{length, !no_post_goal, prune_visited};
    if (mode == "dominance") {
        std::vector<Trajectory> best = solve_dominance(problem.theory, query, pref);
        if (best.empty()) {
            std::cerr << "no trajectory achieves the goal within length " << length << "\n";
            return 2;
        }
        std::cout << "% dominance-maximal set: " << best.size() << " trajectories; showing the first\n";
        print_trajectory(problem.theory, best.front());
        if (explain)
            std::cout << weight_tree_json(weight(best.front(), pref)).dump(2) << "\n";
        return 0;
    }
    std::optional<Solution> best = solve_weight(problem.theory, query, pref);
    if (!best) {
        std::cerr << "no trajectory achieves the goal within length " << length << "\n";
        return 2;
    }
    print_trajectory(problem.theory, best->trajectory);
    std::cout << "% weight " << best->report.weight << " of <" << best->report.max_bound
              << " (" << best->considered << " trajectories considered)\n";
    if (explain) std::cout << weight_tree_json(best->report).dump(2) << "\n";
    return 0;
}

int cmd_compare(const std::string& domain_path, const std::string& prefs_path,
                const std::string& plan_a, const std::string& plan_b) {
    Problem problem = load_domain(slurp(domain_path));
    PreferenceLibrary lib = parse_preferences(slurp(prefs_path), problem);
    if (!lib.optimize) fail(Error::Code::Resolve, prefs_path + " has no optimize statement");

    Trajectory a = replay(problem.theory, parse_plan(slurp(plan_a), problem.theory));
    Trajectory b = replay(problem.theory, parse_plan(slurp(plan_b), problem.theory));

    Comparison c = compare_general(a, b, *lib.optimize);
    switch (c) {
        case Comparison::LeftPreferred: std::cout << "A preferred\n"; break;
        case Comparison::RightPreferred: std::cout << "B preferred\n"; break;
        case Comparison::Indistinguishable: std::cout << "indistinguishable\n"; break;
        case Comparison::Incomparable: std::cout << "incomparable\n"; break;
    }
    if (lib.optimize->kind == Preference::Kind::Atomic && c != Comparison::Incomparable &&
        lib.optimize->atomic.chain.size() > 1) {
        const auto& chain = lib.optimize->atomic.chain;
        for (size_t i = 0; i < chain.size(); ++i) {
            if (compare_basic(a, b, chain[i]) != Comparison::Indistinguishable) {
                std::cout << "% deciding chain index: " << (i + 1) << "\n";
                break;
            }
        }
    }
    return 0;
}

int cmd_emit(const std::string& domain_path, const std::string& prefs_path, size_t length,
             const std::string& out_path) {
    std::string domain_text = slurp(domain_path);
    std::string prefs_text = slurp(prefs_path);
    Problem problem = load_domain(domain_text);
    PreferenceLibrary lib = parse_preferences(prefs_text, problem);
    if (!lib.optimize) fail(Error::Code::Resolve, prefs_path + " has no optimize statement");

    EmitOptions options;
    options.digest_inputs = {{"domain", domain_text}, {"preferences", prefs_text}};
    Emission emission = emit_program(problem, *lib.optimize, length, options);
    std::string text = emission.program.text();
    if (out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) fail(Error::Code::Io, "cannot write " + out_path);
        out << text;
    }
    return 0;
}

int cmd_check(const std::string& domain_path, bool audit) {
    Problem problem = load_domain(slurp(domain_path));
    const ActionTheory& theory = problem.theory;
    State s0 = initial_state(theory);
    (void)s0;
    std::cout << "fluents: " << theory.fluent_count() << "\n"
              << "actions: " << theory.action_count() << "\n"
              << "dynamic laws: " << theory.dynamic.size() << "\n"
              << "static laws: " << theory.static_laws.size() << "\n"
              << "executability conditions: " << theory.exec.size() << "\n"
              << "initial state: ok\n";
    if (!audit) return 0;
    if (theory.fluent_count() > 16) {
        std::cerr << "audit: refusing exhaustive check over " << theory.fluent_count() << " fluents\n";
        return 1;
    }
    size_t states = 0, violations = 0;
    for (size_t bits = 0; bits < (size_t(1) << theory.fluent_count()); ++bits) {
        State s(theory.fluent_count());
        for (size_t f = 0; f < theory.fluent_count(); ++f)
            s.set({int(f), ((bits >> f) & 1) != 0});
        if (!satisfies_static_laws(s, theory)) continue;
        ++states;
        for (size_t a = 0; a < theory.action_count(); ++a) {
            if (!executable(theory, int(a), s)) continue;
            if (transition(theory, int(a), s).empty()) {
                ++violations;
                std::cout << "audit: " << theory.action_name(int(a))
                          << " is executable but has no successor in some state\n";
            }
        }
    }
    std::cout << "audit: " << states << " states checked, " << violations << " violations\n";
    return violations == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"preference-aware planner for action language domains"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    std::string domain, prefs, plan_a, plan_b, out_path, mode = "weight", pattern, costs;
    size_t length = default_length();
    bool explain = false, no_post_goal = false, prune_visited = false, audit = false;
    long long min_cost = 0, max_cost = -1;
    long long seed = 0;  // reserved; everything is deterministic

    CLI::App* plan = app.add_subcommand("plan", "find a most preferred trajectory");
    plan->add_option("--domain", domain, "domain file")->required();
    plan->add_option("--prefs", prefs, "preference file");
    plan->add_option("--length", length, "maximum trajectory length");
    plan->add_option("--mode", mode, "weight|dominance")->check(CLI::IsMember({"weight", "dominance"}));
    plan->add_flag("--explain", explain, "print the weight tree as JSON");
    plan->add_flag("--no-post-goal-actions", no_post_goal, "stop at the first goal state");
    plan->add_flag("--prune-visited", prune_visited, "reachability debugging: skip repeated states");
    plan->add_option("--pattern", pattern, "shortest-formula|shortest-action|cheapest");
    plan->add_option("--costs", costs, "cost file for --pattern cheapest");
    plan->add_option("--min-cost", min_cost, "cheapest pattern: smallest tracked sum");
    plan->add_option("--max-cost", max_cost, "cheapest pattern: largest tracked sum");
    plan->add_option("--seed", seed, "reserved");

    CLI::App* compare = app.add_subcommand("compare", "compare two plans under the preference");
    compare->add_option("--domain", domain, "domain file")->required();
    compare->add_option("--prefs", prefs, "preference file")->required();
    compare->add_option("plan_a", plan_a, "plan file A")->required();
    compare->add_option("plan_b", plan_b, "plan file B")->required();

    CLI::App* emit = app.add_subcommand("emit", "compile to a ground logic program");
    emit->add_option("--domain", domain, "domain file")->required();
    emit->add_option("--prefs", prefs, "preference file")->required();
    emit->add_option("--length", length, "horizon");
    emit->add_option("--out", out_path, "output file (stdout when omitted)");

    CLI::App* check = app.add_subcommand("check", "validate a domain file");
    check->add_option("--domain", domain, "domain file")->required();
    check->add_flag("--audit", audit, "exhaustive transition-consistency audit (small domains)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (plan->parsed())
            return cmd_plan(domain, prefs, length, mode, explain, no_post_goal, prune_visited, pattern,
                            costs, min_cost, max_cost);
        if (compare->parsed()) return cmd_compare(domain, prefs, plan_a, plan_b);
        if (emit->parsed()) return cmd_emit(domain, prefs, length, out_path);
        if (check->parsed()) return cmd_check(domain, audit);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
