#include "nl2asp/constraintgen.hpp"

#include <algorithm>
#include <charconv>
#include <future>
#include <set>
#include <sstream>

namespace nl2asp::constraints {

ConstraintError::ConstraintError(Kind kind, std::string const &message, std::string sentence)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind), sentence_(std::move(sentence)) {}

char const *to_string(ConstraintError::Kind kind) {
    using K = ConstraintError::Kind;
    switch (kind) {
    case K::NoAnchors: return "NoAnchors";
    case K::AmbiguousOrdinal: return "AmbiguousOrdinal";
    case K::OrdinalOutOfRange: return "OrdinalOutOfRange";
    case K::NoNumericCategory: return "NoNumericCategory";
    case K::UnsupportedSpatialRelation: return "UnsupportedSpatialRelation";
    case K::UnboundVariable: return "UnboundVariable";
    case K::AmbiguousReference: return "AmbiguousReference";
    case K::AmbiguousMatch: return "AmbiguousMatch";
    }
    return "?";
}

namespace {

using amr::Graph;
using asp::Term;
using knowledge::KnowledgeBase;
using Kind = ConstraintError::Kind;

constexpr char const *ordinal_concept = "ordinal-entity";

std::optional<std::int64_t> to_int(std::string_view s) {
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size()) {
        return std::nullopt;
    }
    return v;
}

knowledge::Category const &numeric_or_throw(KnowledgeBase const &kb, std::string const &snt) {
    auto const *num = kb.numeric_category();
    if (num == nullptr) {
        throw ConstraintError(Kind::NoNumericCategory, "the sentence refers to a position but no pairing is numeric",
                              snt);
    }
    return *num;
}

// The k-th value of the numeric category in ascending order.
Term position_value(knowledge::Category const &num, std::int64_t k) {
    std::vector<std::int64_t> values;
    for (auto const &e : num.entities) {
        values.push_back(e.as_integer());
    }
    std::sort(values.begin(), values.end());
    return Term::integer(values.at(static_cast<std::size_t>(k - 1)));
}

int arg_index(std::string_view role) {
    if (role.starts_with(":ARG") && !amr::is_inverse_role(role)) {
        if (auto v = to_int(role.substr(4))) {
            return static_cast<int>(*v);
        }
    }
    return 99;
}

struct Position {
    std::map<std::string, std::size_t> preorder;
    Graph const &graph;

    explicit Position(Graph const &g) : graph(g) {
        for (std::size_t i = 0; i < g.nodes().size(); ++i) {
            preorder[g.nodes()[i].id] = i;
        }
    }

    std::array<int, 3> rank(std::string const &id) const {
        int inverse = 0;
        int first_arg = -1;
        auto cur = id;
        while (auto e = graph.parent_edge(cur)) {
            if (amr::is_inverse_role(e->role)) {
                ++inverse;
            }
            if (e->source == graph.root()) {
                first_arg = arg_index(e->role);
            }
            cur = e->source;
        }
        return {inverse, first_arg, static_cast<int>(preorder.at(id))};
    }

    bool under(std::string const &id, std::string const &ancestor) const {
        auto cur = id;
        while (true) {
            if (cur == ancestor) {
                return true;
            }
            auto e = graph.parent_edge(cur);
            if (!e) {
                return false;
            }
            cur = e->source;
        }
    }
};

// Nodes reachable from a polarity node through forward roles only.
std::set<std::string> directly_negated(Graph const &g) {
    std::set<std::string> out;
    std::vector<std::string> stack;
    for (auto const &n : g.nodes()) {
        if (n.has_polarity()) {
            stack.push_back(n.id);
        }
    }
    while (!stack.empty()) {
        auto id = stack.back();
        stack.pop_back();
        if (!out.insert(id).second) {
            continue;
        }
        for (auto const &b : g.node(id).branches) {
            if (b.kind == amr::Branch::Kind::Child && !amr::is_inverse_role(b.role)) {
                stack.push_back(b.target);
            }
        }
    }
    return out;
}

knowledge::MatchResult match(KnowledgeBase const &kb, std::string const &instance, std::string const &snt) {
    try {
        return knowledge::match_concept(kb, instance);
    } catch (knowledge::KnowledgeError const &e) {
        if (e.kind() == knowledge::KnowledgeError::Kind::AmbiguousMatch) {
            throw ConstraintError(Kind::AmbiguousMatch, e.what(), snt);
        }
        throw;
    }
}

std::string name_text(amr::Node const &node) {
    std::vector<std::pair<std::int64_t, std::string>> ops;
    for (auto const &b : node.branches) {
        if (b.kind == amr::Branch::Kind::Attribute && b.role.starts_with(":op")) {
            ops.emplace_back(to_int(std::string_view(b.role).substr(3)).value_or(0), b.target);
        }
    }
    std::stable_sort(ops.begin(), ops.end(), [](auto const &a, auto const &b) { return a.first < b.first; });
    std::string out;
    for (auto const &[_, text] : ops) {
        if (!out.empty()) {
            out += '_';
        }
        out += text;
    }
    return out;
}

bool is_leaf(amr::Node const &n) {
    return std::none_of(n.branches.begin(), n.branches.end(),
                        [](auto const &b) { return b.kind == amr::Branch::Kind::Child; });
}

asp::Literal atom(DraftLiteral const &l, bool negated) { return asp::Literal{l.rule_name, {l.ref, l.value}, negated}; }

asp::Literal relational_atom(RelationalMention const &r, Term const &ref) {
    return asp::Literal{r.predicate, {ref, r.value}, false};
}

std::vector<DraftLiteral> by_rank(std::vector<DraftLiteral> lits) {
    std::stable_sort(lits.begin(), lits.end(), [](auto const &a, auto const &b) { return a.rank < b.rank; });
    return lits;
}

void check_bound(asp::Statement const &st, std::string const &snt) {
    auto single = asp::single_use_variables(st);
    if (!single.empty()) {
        std::string names;
        for (auto const &v : single) {
            names += (names.empty() ? "" : ", ") + v;
        }
        throw ConstraintError(Kind::UnboundVariable, "variable occurs once: " + names + " in " + asp::to_string(st),
                              snt);
    }
}

} // namespace

// {{{1 ordinals

RewriteResult rewrite_ordinals(Graph const &graph, KnowledgeBase const &kb) {
    RewriteResult out{graph, {}};
    auto snt = graph.sentence();
    for (auto const &node : graph.nodes()) {
        std::optional<std::int64_t> resolved;
        std::string raw;
        if (node.instance == ordinal_concept) {
            auto value = node.attribute(":value");
            if (!value) {
                continue;
            }
            raw = *value;
            auto v = to_int(*value);
            if (!v) {
                continue;
            }
            auto n = static_cast<std::int64_t>(numeric_or_throw(kb, snt).entities.size());
            resolved = *v > 0 ? *v : n + 1 + *v;
        } else if (node.instance == "middle" || node.instance == "last") {
            raw = node.instance;
            auto n = static_cast<std::int64_t>(numeric_or_throw(kb, snt).entities.size());
            if (node.instance == "last") {
                resolved = n;
            } else if (n % 2 == 0) {
                throw ConstraintError(Kind::AmbiguousOrdinal,
                                      "`middle` has no single position among " + std::to_string(n), snt);
            } else {
                resolved = (n + 1) / 2;
            }
        } else {
            continue;
        }
        auto n = static_cast<std::int64_t>(numeric_or_throw(kb, snt).entities.size());
        if (*resolved < 1 || *resolved > n) {
            throw ConstraintError(Kind::OrdinalOutOfRange,
                                  "ordinal " + raw + " outside 1.." + std::to_string(n) + " at node " + node.id, snt);
        }
        out.graph = out.graph.with_concept(node.id, ordinal_concept)
                        .without_attribute(node.id, ":value")
                        .with_attribute(node.id, ":value", std::to_string(*resolved));
        out.rewrites.push_back(OrdinalRewrite{node.id, raw, *resolved});
    }
    return out;
}

// {{{1 analysis

ConstraintDraft analyze(Graph const &input, KnowledgeBase const &kb) {
    auto graph = rewrite_ordinals(input, kb).graph;
    ConstraintDraft d;
    d.source_sentence = graph.sentence();
    auto const &snt = d.source_sentence;
    std::set<std::string> consumed;

    auto take_constant = [&](knowledge::MatchResult const &m, std::string const &node) {
        if (auto const *c = std::get_if<knowledge::ConstantOfInterest>(&m)) {
            if (c->category == kb.reference() || kb.is_pairing(c->category)) {
                d.constants.push_back(AnchoredConstant{c->category, c->constant, node});
                return true;
            }
        }
        if (auto const *r = std::get_if<knowledge::RelationalValue>(&m)) {
            d.relational.push_back(RelationalMention{r->predicate, r->value, node});
            return true;
        }
        return false;
    };

    for (auto const &node : graph.nodes()) {
        if (consumed.contains(node.id)) {
            continue;
        }
        d.sentence_negated = d.sentence_negated || node.has_polarity();
        auto const &instance = node.instance;
        if (instance == "next-to" || instance == "beside") {
            d.spatial = SpatialRelation::NextTo;
            d.spatial_node = node.id;
            d.spatial_concept = instance;
            continue;
        }
        if (instance == "relative-position") {
            d.spatial = SpatialRelation::Unsupported;
            d.spatial_node = node.id;
            d.spatial_concept = instance;
            for (auto const &b : node.branches) {
                if (b.role != ":direction") {
                    continue;
                }
                auto dir = b.kind == amr::Branch::Kind::Attribute ? b.target : graph.node(b.target).instance;
                d.spatial_concept = dir;
                if (dir == "right") {
                    d.spatial = SpatialRelation::RightOf;
                } else if (dir == "left") {
                    d.spatial = SpatialRelation::LeftOf;
                }
                if (b.kind == amr::Branch::Kind::Child) {
                    consumed.insert(b.target);
                }
            }
            continue;
        }
        if (instance == "behind" || instance == "front" || instance == "above" || instance == "below" ||
            instance == "across") {
            d.spatial = SpatialRelation::Unsupported;
            d.spatial_node = node.id;
            d.spatial_concept = instance;
            continue;
        }
        if (instance == ordinal_concept) {
            auto v = node.attribute(":value");
            if (v && to_int(*v)) {
                auto const &num = numeric_or_throw(kb, snt);
                d.constants.push_back(AnchoredConstant{num.name, position_value(num, *to_int(*v)), node.id});
            }
            continue;
        }
        if (instance == "name") {
            take_constant(match(kb, name_text(node), snt), node.id);
            continue;
        }
        bool done = false;
        for (auto const &b : node.branches) {
            if (b.kind != amr::Branch::Kind::Child || b.role != ":mod" || consumed.contains(b.target)) {
                continue;
            }
            auto const &mod = graph.node(b.target);
            if (!is_leaf(mod) || mod.instance == ordinal_concept) {
                continue;
            }
            auto m = match(kb, mod.instance + "_" + instance, snt);
            if (std::holds_alternative<knowledge::ConstantOfInterest>(m) && take_constant(m, node.id)) {
                consumed.insert(mod.id);
                done = true;
                break;
            }
        }
        if (done) {
            continue;
        }
        auto m = match(kb, instance, snt);
        if (auto const *r = std::get_if<knowledge::RuleOfInterest>(&m)) {
            d.rules.push_back(RuleMention{r->category, r->rule_name, node.id, false});
        } else {
            take_constant(m, node.id);
        }
    }

    // Spatial sentences can relate two reference constants ("green" right of "ivory").
    auto pairing_anchor = [&](std::string const &cat) {
        return kb.is_pairing(cat) || (d.spatial != SpatialRelation::None && cat == kb.reference());
    };
    bool any_anchor = std::any_of(d.constants.begin(), d.constants.end(),
                                  [&](auto const &c) { return pairing_anchor(c.category); }) ||
                      !d.rules.empty();
    if (!any_anchor) {
        throw ConstraintError(Kind::NoAnchors, "no pairing constant or rule mention in \"" + snt + "\"", snt);
    }

    auto negated_nodes = directly_negated(graph);
    Position pos(graph);
    for (auto &r : d.rules) {
        r.negated = negated_nodes.contains(r.node);
    }
    auto side_of = [&](std::string const &node) {
        if (d.spatial == SpatialRelation::None || d.spatial == SpatialRelation::Unsupported) {
            return 0;
        }
        for (auto const &b : graph.node(d.spatial_node).branches) {
            if (b.role == ":op1" && b.kind == amr::Branch::Kind::Child && pos.under(node, b.target)) {
                return 2;
            }
        }
        return 1;
    };

    auto make_literal = [&](std::string const &cat, std::optional<Term> value, std::vector<std::string> nodes) {
        auto const *p = kb.find_pairing(cat);
        DraftLiteral lit{cat, p->rule_name, Term::variable(kb.variable_letter(kb.reference())),
                         value ? *value : Term::variable(kb.variable_letter(cat)), std::move(nodes)};
        lit.side = side_of(lit.nodes.front());
        lit.negated = std::any_of(lit.nodes.begin(), lit.nodes.end(),
                                  [&](auto const &n) { return negated_nodes.contains(n); });
        lit.rank = pos.rank(lit.nodes.front());
        for (auto const &n : lit.nodes) {
            lit.rank = std::min(lit.rank, pos.rank(n));
        }
        return lit;
    };

    auto rule_nodes = [&](std::string const &cat, int side) {
        std::vector<std::string> out;
        for (auto const &r : d.rules) {
            if (r.category == cat && side_of(r.node) == side) {
                out.push_back(r.node);
            }
        }
        return out;
    };

    std::set<std::pair<std::string, int>> covered;
    for (auto const &c : d.constants) {
        if (!kb.is_pairing(c.category)) {
            continue;
        }
        std::vector<std::string> nodes{c.node};
        auto extra = rule_nodes(c.category, side_of(c.node));
        nodes.insert(nodes.end(), extra.begin(), extra.end());
        d.literals.push_back(make_literal(c.category, c.constant, nodes));
        covered.emplace(c.category, side_of(c.node));
    }
    for (auto const &r : d.rules) {
        auto key = std::make_pair(r.category, side_of(r.node));
        if (covered.contains(key)) {
            continue;
        }
        covered.insert(key);
        d.literals.push_back(make_literal(r.category, std::nullopt, rule_nodes(r.category, key.second)));
        d.bindings[kb.variable_letter(r.category)] = r.category;
    }

    if (d.spatial == SpatialRelation::None) {
        std::vector<AnchoredConstant const *> refs;
        for (auto const &c : d.constants) {
            if (c.category == kb.reference()) {
                refs.push_back(&c);
            }
        }
        if (refs.size() > 1) {
            throw ConstraintError(Kind::AmbiguousReference,
                                  "several " + kb.reference() + " constants in a non-spatial sentence", snt);
        }
        if (refs.empty()) {
            auto var = kb.variable_letter(kb.reference());
            d.reference_term = Term::variable(var);
            d.bindings[var] = kb.reference();
        } else {
            d.reference_term = refs.front()->constant;
        }
        for (auto &l : d.literals) {
            l.ref = *d.reference_term;
        }
    }
    return d;
}

// {{{1 positions

ConstraintDraft resolve_positions(Graph const &graph, ConstraintDraft d, KnowledgeBase const &kb) {
    (void)graph;
    if (d.spatial == SpatialRelation::None) {
        return d;
    }
    auto const &snt = d.source_sentence;
    if (d.spatial == SpatialRelation::Unsupported) {
        throw ConstraintError(Kind::UnsupportedSpatialRelation, "relation `" + d.spatial_concept + "`", snt);
    }
    if (d.spatial == SpatialRelation::NextTo && d.sentence_negated) {
        throw ConstraintError(Kind::UnsupportedSpatialRelation, "negated next-to", snt);
    }
    auto const &num = numeric_or_throw(kb, snt);
    auto const *num_pairing = kb.find_pairing(num.name);
    auto ref_letter = kb.variable_letter(kb.reference());
    auto num_letter = kb.variable_letter(num.name);

    // Sides are recomputed from the literals; reference constants need the graph.
    Graph const &g = graph;
    auto side_of_node = [&](std::string const &node) {
        for (auto const &b : g.node(d.spatial_node).branches) {
            if (b.role == ":op1" && b.kind == amr::Branch::Kind::Child) {
                auto cur = node;
                while (true) {
                    if (cur == b.target) {
                        return 2;
                    }
                    auto e = g.parent_edge(cur);
                    if (!e) {
                        break;
                    }
                    cur = e->source;
                }
            }
        }
        return 1;
    };

    std::array<Term, 2> refs{Term::variable(ref_letter + "1"), Term::variable(ref_letter + "2")};
    std::array<int, 2> ref_count{0, 0};
    for (auto const &c : d.constants) {
        if (c.category != kb.reference()) {
            continue;
        }
        int side = side_of_node(c.node);
        if (++ref_count[side - 1] > 1) {
            throw ConstraintError(Kind::AmbiguousReference, "several " + kb.reference() + " constants on one side",
                                  snt);
        }
        refs[side - 1] = c.constant;
    }
    for (int side = 1; side <= 2; ++side) {
        if (refs[side - 1].is_variable()) {
            d.bindings[refs[side - 1].as_variable().name] = kb.reference();
        }
        d.bindings[num_letter + std::to_string(side)] = num.name;
    }
    for (auto &l : d.literals) {
        l.ref = refs[l.side - 1];
        l.negated = false;
    }
    d.position_literals.clear();
    for (int side = 1; side <= 2; ++side) {
        d.position_literals.push_back(
            asp::Literal{num_pairing->rule_name, {refs[side - 1], Term::variable(num_letter + std::to_string(side))}});
    }
    auto o1 = Term::variable(num_letter + "1");
    auto o2 = Term::variable(num_letter + "2");
    auto op = d.sentence_negated ? asp::CmpOp::Eq : asp::CmpOp::Neq;
    d.arithmetic.clear();
    if (d.spatial == SpatialRelation::RightOf || d.spatial == SpatialRelation::NextTo) {
        d.arithmetic.push_back({o1, op, Term::arith(o2, asp::ArithOp::Plus, Term::integer(1))});
    }
    if (d.spatial == SpatialRelation::LeftOf || d.spatial == SpatialRelation::NextTo) {
        d.arithmetic.push_back({o1, op, Term::arith(o2, asp::ArithOp::Minus, Term::integer(1))});
    }
    d.form = Form::Integrity;
    return d;
}

// {{{1 form and emission

Form choose_form(ConstraintDraft const &d) {
    if (d.spatial != SpatialRelation::None) {
        return Form::Integrity;
    }
    bool unfixed = !d.reference_term || d.reference_term->is_variable();
    bool positive = std::any_of(d.literals.begin(), d.literals.end(), [](auto const &l) { return !l.negated; });
    return !d.relational.empty() && unfixed && positive ? Form::Choice : Form::Integrity;
}

asp::Statement emit_constraint(ConstraintDraft const &d) {
    auto form = d.form == Form::Undecided ? choose_form(d) : d.form;
    asp::Statement st;
    if (d.spatial != SpatialRelation::None) {
        asp::IntegrityConstraint ic;
        for (int side = 1; side <= 2; ++side) {
            for (auto const &l : by_rank(d.literals)) {
                if (l.side == side) {
                    ic.body.emplace_back(atom(l, false));
                }
            }
            if (static_cast<std::size_t>(side) <= d.position_literals.size()) {
                ic.body.emplace_back(d.position_literals[static_cast<std::size_t>(side - 1)]);
            }
        }
        for (auto const &c : d.arithmetic) {
            ic.body.emplace_back(c);
        }
        st = std::move(ic);
    } else {
        auto lits = by_rank(d.literals);
        auto ref = d.reference_term.value_or(lits.empty() ? Term::variable("R") : lits.front().ref);
        if (form == Form::Choice) {
            auto target = std::find_if(lits.begin(), lits.end(), [](auto const &l) { return !l.negated; });
            asp::ChoiceElement el{atom(*target, false), {}};
            for (auto it = lits.begin(); it != lits.end(); ++it) {
                if (it != target) {
                    el.condition.emplace_back(atom(*it, it->negated));
                }
            }
            for (auto const &r : d.relational) {
                el.condition.emplace_back(relational_atom(r, ref));
            }
            st = asp::ChoiceRule{1, 1, {std::move(el)}, {}};
        } else {
            asp::IntegrityConstraint ic;
            if (lits.size() == 1 && d.relational.empty()) {
                ic.body.emplace_back(atom(lits.front(), !lits.front().negated));
            } else {
                for (std::size_t i = 1; i < lits.size(); ++i) {
                    ic.body.emplace_back(atom(lits[i], lits[i].negated));
                }
                for (auto const &r : d.relational) {
                    ic.body.emplace_back(relational_atom(r, ref));
                }
                ic.body.emplace_back(atom(lits.front(), !lits.front().negated));
            }
            st = std::move(ic);
        }
    }
    check_bound(st, d.source_sentence);
    return st;
}

asp::Statement compile_constraint(Graph const &graph, KnowledgeBase const &kb) {
    auto draft = resolve_positions(graph, analyze(graph, kb), kb);
    draft.form = choose_form(draft);
    return emit_constraint(draft);
}

std::vector<CompiledSentence> compile_all(std::span<Graph const> graphs, KnowledgeBase const &kb, unsigned workers) {
    std::vector<CompiledSentence> out(graphs.size());
    auto one = [&](std::size_t i) {
        out[i].sentence = graphs[i].sentence();
        try {
            out[i].statement = compile_constraint(graphs[i], kb);
        } catch (ConstraintError const &e) {
            if (e.kind() != Kind::NoAnchors) {
                throw;
            }
            out[i].skipped = e.what();
        }
    };
    workers = std::max(1u, workers);
    if (workers == 1 || graphs.size() < 2) {
        for (std::size_t i = 0; i < graphs.size(); ++i) {
            one(i);
        }
        return out;
    }
    std::vector<std::future<void>> jobs;
    for (unsigned w = 0; w < workers; ++w) {
        jobs.push_back(std::async(std::launch::async, [&, w] {
            for (std::size_t i = w; i < graphs.size(); i += workers) {
                one(i);
            }
        }));
    }
    for (auto &j : jobs) {
        j.get();
    }
    return out;
}

} // namespace nl2asp::constraints
