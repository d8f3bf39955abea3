#include "prefplan/weights.hpp"

#include <cstdio>

namespace prefplan {

long long checked_add(long long a, long long b) {
    long long r;
    if (__builtin_add_overflow(a, b, &r))
        fail(Error::Code::ArithmeticOverflow, "weight addition overflow");
    return r;
}

long long checked_mul(long long a, long long b) {
    long long r;
    if (__builtin_mul_overflow(a, b, &r))
        fail(Error::Code::ArithmeticOverflow, "weight multiplication overflow");
    return r;
}

namespace {

long long pow2_checked(size_t k) {
    if (k >= 62) fail(Error::Code::ArithmeticOverflow, "2^" + std::to_string(k) + " exceeds the weight width");
    return 1LL << k;
}

}  // namespace

struct WeightEvaluator::Node {
    Preference::Kind kind;
    std::vector<int> kids;                 // preference children (Conj/Disj/Neg/Chain)
    std::vector<SatisfactionChecker> chain;  // Atomic: checkers for the desire chain
    std::string label;
    long long rule_max = 0;   // structural recursion value
    long long lo = 0, hi = 0;  // achievable weight interval; strict bound is hi+1
    std::vector<long long> fold_max;  // Chain: rule_max of the folded suffix kids[i..]
};

int WeightEvaluator::build(const Preference& pref) {
    int id = int(nodes_.size());
    nodes_.emplace_back();
    nodes_.back().kind = pref.kind;
    switch (pref.kind) {
        case Preference::Kind::Atomic: {
            size_t k = pref.atomic.chain.size();
            Node& node = nodes_[size_t(id)];
            node.label = k == 1 ? "desire" : "atomic";
            for (const Desire& d : pref.atomic.chain) node.chain.emplace_back(d);
            node.rule_max = k == 1 ? 2 : pow2_checked(k);
            node.lo = 0;
            node.hi = node.rule_max - 1;
            break;
        }
        case Preference::Kind::Conj:
        case Preference::Kind::Disj: {
            int a = build(pref.kids[0]);
            int b = build(pref.kids[1]);
            Node& node = nodes_[size_t(id)];
            node.kids = {a, b};
            node.label = pref.kind == Preference::Kind::Conj ? "both" : "either";
            node.rule_max = checked_add(nodes_[size_t(a)].rule_max, nodes_[size_t(b)].rule_max);
            node.lo = checked_add(nodes_[size_t(a)].lo, nodes_[size_t(b)].lo);
            node.hi = checked_add(nodes_[size_t(a)].hi, nodes_[size_t(b)].hi);
            break;
        }
        case Preference::Kind::Neg: {
            int a = build(pref.kids[0]);
            Node& node = nodes_[size_t(id)];
            node.kids = {a};
            node.label = "reversal";
            node.rule_max = nodes_[size_t(a)].rule_max;
            // weight is rule_max - w, so the interval reverses
            node.lo = node.rule_max - nodes_[size_t(a)].hi;
            node.hi = node.rule_max - nodes_[size_t(a)].lo;
            break;
        }
        case Preference::Kind::Chain: {
            std::vector<int> kids;
            for (const Preference& p : pref.kids) kids.push_back(build(p));
            Node& node = nodes_[size_t(id)];
            node.kids = std::move(kids);
            node.label = "chain";
            // right fold into binary lexicographic combinations
            size_t k = node.kids.size();
            node.fold_max.assign(k, 0);
            long long rm = nodes_[size_t(node.kids.back())].rule_max;
            long long lo = nodes_[size_t(node.kids.back())].lo;
            long long hi = nodes_[size_t(node.kids.back())].hi;
            node.fold_max[k - 1] = rm;
            for (size_t i = k - 1; i-- > 0;) {
                const Node& left = nodes_[size_t(node.kids[i])];
                lo = checked_add(checked_mul(rm, left.lo), lo);
                hi = checked_add(checked_mul(rm, left.hi), hi);
                rm = checked_add(checked_mul(rm, left.rule_max), rm);
                node.fold_max[i] = rm;
            }
            node.rule_max = rm;
            node.lo = lo;
            node.hi = hi;
            break;
        }
    }
    return id;
}

WeightEvaluator::WeightEvaluator(const Preference& pref) {
    build(pref);
    rule_max_root_ = nodes_[0].rule_max;
    strict_bound_root_ = checked_add(nodes_[0].hi, 1);
    if (rule_max_root_ > (1LL << 53))
        fprintf(stderr,
                "warning: preference max weight %lld exceeds 2^53; logged values may lose "
                "precision in other tools\n",
                rule_max_root_);
}

WeightEvaluator::~WeightEvaluator() = default;
WeightEvaluator::WeightEvaluator(WeightEvaluator&&) noexcept = default;
WeightEvaluator& WeightEvaluator::operator=(WeightEvaluator&&) noexcept = default;

long long WeightEvaluator::eval_node(int id, const Trajectory& traj, std::vector<WeightNode>& out,
                                     int parent) const {
    const Node& node = nodes_[size_t(id)];
    size_t slot = out.size();
    out.push_back({id, parent, node.label, 0, checked_add(node.hi, 1), node.rule_max});
    long long w = 0;
    switch (node.kind) {
        case Preference::Kind::Atomic: {
            size_t k = node.chain.size();
            for (size_t r = 0; r < k; ++r) {
                bool sat = node.chain[r].satisfies(traj);
                if (sat) w = checked_add(w, k == 1 ? 1 : pow2_checked(k - 1 - r));
            }
            break;
        }
        case Preference::Kind::Conj:
        case Preference::Kind::Disj:
            w = checked_add(eval_node(node.kids[0], traj, out, id),
                            eval_node(node.kids[1], traj, out, id));
            break;
        case Preference::Kind::Neg:
            w = node.rule_max - eval_node(node.kids[0], traj, out, id);
            break;
        case Preference::Kind::Chain: {
            std::vector<long long> kid_weights;
            for (int kid : node.kids) kid_weights.push_back(eval_node(kid, traj, out, id));
            w = kid_weights.back();
            for (size_t i = node.kids.size() - 1; i-- > 0;)
                w = checked_add(checked_mul(node.fold_max[i + 1], kid_weights[i]), w);
            break;
        }
    }
    if (w < node.lo || w > node.hi)
        fail(Error::Code::ArithmeticOverflow,
             "internal: weight " + std::to_string(w) + " escapes its achievable interval");
    out[slot].weight = w;
    return w;
}

WeightReport WeightEvaluator::evaluate(const Trajectory& trajectory) const {
    WeightReport report;
    report.weight = eval_node(0, trajectory, report.nodes, -1);
    report.max_bound = strict_bound_root_;
    for (const WeightNode& n : report.nodes) {
        if (n.weight >= n.max_bound)
            fail(Error::Code::ArithmeticOverflow, "internal: headroom violated at node " + n.label);
    }
    return report;
}

long long max_weight(const Preference& pref) { return WeightEvaluator(pref).rule_max(); }

WeightReport weight(const Trajectory& trajectory, const Preference& pref) {
    return WeightEvaluator(pref).evaluate(trajectory);
}

AdmissibilityReport check_admissible(const std::vector<Trajectory>& trajectories,
                                     const Preference& pref) {
    WeightEvaluator eval(pref);
    std::vector<long long> weights;
    weights.reserve(trajectories.size());
    for (const Trajectory& t : trajectories) weights.push_back(eval.weight(t));

    AdmissibilityReport report;
    for (size_t i = 0; i < trajectories.size(); ++i) {
        for (size_t j = 0; j < trajectories.size(); ++j) {
            if (i == j) continue;
            Comparison c = compare_general(trajectories[i], trajectories[j], pref);
            ++report.pairs_checked;
            bool bad = (c == Comparison::LeftPreferred && !(weights[i] > weights[j])) ||
                       (c == Comparison::Indistinguishable && weights[i] != weights[j]);
            if (bad) {
                report.ok = false;
                report.violation = AdmissibilityViolation{i, j, c, weights[i], weights[j]};
                return report;
            }
        }
    }
    return report;
}

}  // namespace prefplan
