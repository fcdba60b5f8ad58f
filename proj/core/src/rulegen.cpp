#include "nl2asp/rulegen.hpp"

#include <cctype>

namespace nl2asp::rules {

namespace {

using asp::Literal;
using asp::Term;

void require_pairings(knowledge::KnowledgeBase const &kb) {
    if (kb.pairings().empty()) {
        throw RuleError("NoPairings: the knowledge base declares no one-to-one pairings");
    }
}

Literal unary(std::string const &pred, std::string const &var) { return Literal{pred, {Term::variable(var)}, false}; }

std::string capitalized(std::string name) {
    name.front() = static_cast<char>(std::toupper(static_cast<unsigned char>(name.front())));
    return name;
}

} // namespace

std::vector<asp::ChoiceRule> gen_choice_rules(knowledge::KnowledgeBase const &kb) {
    require_pairings(kb);
    std::vector<asp::ChoiceRule> out;
    for (auto const &p : kb.pairings()) {
        auto const &[ref_var, cat_var] = p.var_letters;
        Literal atom{p.rule_name, {Term::variable(ref_var), Term::variable(cat_var)}, false};
        out.push_back(asp::ChoiceRule{1, 1, {{atom, {unary(p.category, cat_var)}}}, {unary(p.reference, ref_var)}});
        out.push_back(asp::ChoiceRule{1, 1, {{atom, {unary(p.reference, ref_var)}}}, {unary(p.category, cat_var)}});
    }
    return out;
}

std::pair<asp::NormalRule, asp::ShowDirective> gen_solution_rule(knowledge::KnowledgeBase const &kb) {
    require_pairings(kb);
    auto ref_var = capitalized(kb.reference());
    asp::NormalRule rule{Literal{solution_predicate, {Term::variable(ref_var)}, false}, {}};
    for (auto const &p : kb.pairings()) {
        auto var = capitalized(p.category);
        rule.head.args.push_back(Term::variable(var));
        rule.body.emplace_back(Literal{p.rule_name, {Term::variable(ref_var), Term::variable(var)}, false});
    }
    asp::ShowDirective show{solution_predicate, static_cast<int>(rule.head.args.size())};
    return {std::move(rule), std::move(show)};
}

GeneratedRules generate_rules(knowledge::KnowledgeBase const &kb) {
    auto [rule, show] = gen_solution_rule(kb);
    return GeneratedRules{gen_choice_rules(kb), std::move(rule), std::move(show)};
}

std::vector<asp::Fact> gen_facts(knowledge::KnowledgeBase const &kb) {
    std::vector<asp::Fact> out;
    for (auto const &c : kb.categories()) {
        asp::Fact fact{c.name, {}};
        for (auto const &e : c.entities) {
            fact.pool.push_back({e});
        }
        out.push_back(std::move(fact));
    }
    for (auto const &r : kb.relational()) {
        for (auto const &[left, right] : r.pairs) {
            out.push_back(asp::Fact{r.predicate, {{left, right}}});
        }
    }
    return out;
}

} // namespace nl2asp::rules
