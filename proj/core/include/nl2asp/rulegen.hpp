#pragma once

#include "nl2asp/asp.hpp"
#include "nl2asp/knowledge.hpp"

#include <stdexcept>
#include <utility>
#include <vector>

namespace nl2asp::rules {

class RuleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct GeneratedRules {
    std::vector<asp::ChoiceRule> choice_rules;
    asp::NormalRule solution_rule;
    asp::ShowDirective show;
};

// Two choice rules per pairing, one for each direction of the bijection.
std::vector<asp::ChoiceRule> gen_choice_rules(knowledge::KnowledgeBase const &kb);

std::pair<asp::NormalRule, asp::ShowDirective> gen_solution_rule(knowledge::KnowledgeBase const &kb);

GeneratedRules generate_rules(knowledge::KnowledgeBase const &kb);

// Pooled category facts followed by relational facts, one per pair.
std::vector<asp::Fact> gen_facts(knowledge::KnowledgeBase const &kb);

inline constexpr char const *solution_predicate = "solution";

} // namespace nl2asp::rules
