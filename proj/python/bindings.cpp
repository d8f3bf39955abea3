#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "prefplan/asp.hpp"
#include "prefplan/patterns.hpp"
#include "prefplan/solver.hpp"
#include "prefplan/version.hpp"

namespace py = pybind11;
using namespace prefplan;

namespace {

Preference resolve_prefs(const std::string& text, const Problem& problem) {
    PreferenceLibrary lib = parse_preferences(text, problem);
    if (!lib.optimize)
        fail(Error::Code::Resolve, "preference text has no optimize statement");
    return *lib.optimize;
}

std::vector<int> resolve_actions(const Problem& problem, const std::vector<std::string>& names) {
    std::vector<int> out;
    for (const std::string& name : names) {
        int id = problem.theory.action_id(name);
        if (id < 0) fail(Error::Code::UnknownAction, "unknown action " + name);
        out.push_back(id);
    }
    return out;
}

py::dict report_to_dict(const WeightReport& report) {
    py::list nodes;
    for (const WeightNode& n : report.nodes) {
        py::dict node;
        node["id"] = n.id;
        node["parent"] = n.parent;
        node["kind"] = n.label;
        node["weight"] = n.weight;
        node["max_bound"] = n.max_bound;
        node["rule_max"] = n.rule_max;
        nodes.append(node);
    }
    py::dict out;
    out["weight"] = report.weight;
    out["max_bound"] = report.max_bound;
    out["nodes"] = nodes;
    return out;
}

py::object plan(const Problem& problem, const std::string& prefs_text, size_t length,
                bool post_goal_actions) {
    Preference pref = resolve_prefs(prefs_text, problem);
    std::optional<Solution> best =
        solve_weight(problem.theory, {length, post_goal_actions, false}, pref);
    if (!best) return py::none();
    py::list actions;
    for (size_t i = 0; i < best->trajectory.length(); ++i)
        actions.append(problem.theory.action_name(best->trajectory.action(i)));
    py::dict out;
    out["actions"] = actions;
    out["weight"] = best->report.weight;
    out["max_bound"] = best->report.max_bound;
    out["considered"] = best->considered;
    return out;
}

std::string compare(const Problem& problem, const std::string& prefs_text,
                    const std::vector<std::string>& plan_a, const std::vector<std::string>& plan_b) {
    Preference pref = resolve_prefs(prefs_text, problem);
    Trajectory a = replay(problem.theory, resolve_actions(problem, plan_a));
    Trajectory b = replay(problem.theory, resolve_actions(problem, plan_b));
    switch (compare_general(a, b, pref)) {
        case Comparison::LeftPreferred: return "A preferred";
        case Comparison::RightPreferred: return "B preferred";
        case Comparison::Indistinguishable: return "indistinguishable";
        case Comparison::Incomparable: return "incomparable";
    }
    return "?";
}

std::string emit(const Problem& problem, const std::string& prefs_text, size_t length) {
    Preference pref = resolve_prefs(prefs_text, problem);
    EmitOptions options;
    options.digest_inputs = {{"preferences", prefs_text}};
    return emit_program(problem, pref, length, options).program.text();
}

py::dict explain(const Problem& problem, const std::string& prefs_text,
                 const std::vector<std::string>& plan_actions) {
    Preference pref = resolve_prefs(prefs_text, problem);
    Trajectory t = replay(problem.theory, resolve_actions(problem, plan_actions));
    return report_to_dict(weight(t, pref));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "preference-aware planning over action-language domains";
    m.attr("__version__") = kVersion;

    py::register_exception<Error>(m, "PlanningError");

    py::class_<Problem>(m, "Problem")
        .def_property_readonly("fluents",
                               [](const Problem& p) { return p.theory.fluent_names; })
        .def_property_readonly("actions",
                               [](const Problem& p) { return p.theory.action_names; })
        .def("__repr__", [](const Problem& p) {
            return "<Problem fluents=" + std::to_string(p.theory.fluent_count()) + " actions=" +
                   std::to_string(p.theory.action_count()) + ">";
        });

    m.def("load_domain", [](const std::string& text) { return load_domain(text); },
          py::arg("text"), "parse and ground a domain description");

    m.def("plan", &plan, py::arg("problem"), py::arg("preferences"), py::arg("length"),
          py::arg("post_goal_actions") = true,
          "find a most preferred goal trajectory; None when no plan exists");

    m.def("compare", &compare, py::arg("problem"), py::arg("preferences"), py::arg("plan_a"),
          py::arg("plan_b"), "order two action sequences under the preference");

    m.def("emit", &emit, py::arg("problem"), py::arg("preferences"), py::arg("length"),
          "compile the problem and preference to a ground logic program");

    m.def("explain", &explain, py::arg("problem"), py::arg("preferences"), py::arg("plan"),
          "per-node weight breakdown of a plan under the preference");

    m.def("count_trajectories",
          [](const Problem& p, size_t length, bool post_goal_actions) {
              return count_trajectories(p.theory, {length, post_goal_actions, false});
          },
          py::arg("problem"), py::arg("length"), py::arg("post_goal_actions") = true,
          "number of goal-achieving trajectories within the horizon");
}
