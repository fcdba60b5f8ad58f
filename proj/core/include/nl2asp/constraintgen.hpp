#pragma once

// Compiles one simplified constraint sentence, given as an AMR graph, into
// an ASP integrity constraint or a bounded choice rule.
//
// The pipeline is rewrite_ordinals -> analyze -> resolve_positions ->
// choose_form -> emit_constraint; compile_constraint runs all of it.

#include "nl2asp/asp.hpp"
#include "nl2asp/knowledge.hpp"
#include "nl2asp/penman.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace nl2asp::constraints {

class ConstraintError : public std::runtime_error {
public:
    enum class Kind {
        NoAnchors, AmbiguousOrdinal, OrdinalOutOfRange, NoNumericCategory, UnsupportedSpatialRelation,
        UnboundVariable, AmbiguousReference, AmbiguousMatch
    };

    ConstraintError(Kind kind, std::string const &message, std::string sentence = {});

    Kind kind() const noexcept { return kind_; }
    std::string const &sentence() const noexcept { return sentence_; }

private:
    Kind kind_;
    std::string sentence_;
};

char const *to_string(ConstraintError::Kind kind);

struct OrdinalRewrite {
    std::string node;
    // The keyword (`middle`, `last`) or the raw `:value`.
    std::string raw;
    std::int64_t resolved = 0;
};

struct RewriteResult {
    amr::Graph graph;
    std::vector<OrdinalRewrite> rewrites;
};

RewriteResult rewrite_ordinals(amr::Graph const &graph, knowledge::KnowledgeBase const &kb);

struct AnchoredConstant {
    std::string category;
    asp::Term constant;
    std::string node;
};

struct RuleMention {
    std::string category;
    std::string rule_name;
    std::string node;
    bool negated = false;
};

struct RelationalMention {
    std::string predicate;
    asp::Term value;
    std::string node;
};

enum class Form { Undecided, Integrity, Choice };

enum class SpatialRelation { None, NextTo, RightOf, LeftOf, Unsupported };

// One pairing literal `rule(ref, value)` assembled from constants and rule mentions.
struct DraftLiteral {
    std::string category;
    std::string rule_name;
    asp::Term ref;
    asp::Term value;
    std::vector<std::string> nodes;
    bool negated = false;
    // 1 for the positioned object, 2 for the landmark of a spatial relation, 0 otherwise.
    int side = 0;
    // (inverse roles on the path from the root, ARG index of the first role, preorder index);
    // the smallest rank is the sentence's main predication.
    std::array<int, 3> rank{};
};

struct ConstraintDraft {
    std::string source_sentence;
    std::vector<AnchoredConstant> constants;
    std::vector<RuleMention> rules;
    std::vector<RelationalMention> relational;
    std::vector<DraftLiteral> literals;
    // Reference term shared by literals and relational facts (constant or variable).
    std::optional<asp::Term> reference_term;
    std::map<std::string, std::string> bindings;
    std::vector<asp::Literal> position_literals;
    std::vector<asp::Comparison> arithmetic;
    SpatialRelation spatial = SpatialRelation::None;
    std::string spatial_node;
    std::string spatial_concept;
    bool sentence_negated = false;
    Form form = Form::Undecided;
};

ConstraintDraft analyze(amr::Graph const &graph, knowledge::KnowledgeBase const &kb);

// Adds position variables and arithmetic for next-to and left/right-of
// relations; drafts without a spatial relation pass through unchanged.
ConstraintDraft resolve_positions(amr::Graph const &graph, ConstraintDraft draft, knowledge::KnowledgeBase const &kb);

Form choose_form(ConstraintDraft const &draft);

asp::Statement emit_constraint(ConstraintDraft const &draft);

asp::Statement compile_constraint(amr::Graph const &graph, knowledge::KnowledgeBase const &kb);

struct CompiledSentence {
    std::string sentence;
    std::optional<asp::Statement> statement;
    // Why the sentence produced no statement (NoAnchors).
    std::string skipped;
};

// Compiles sentences independently, optionally on several workers; results
// keep input order. NoAnchors sentences are reported and skipped.
std::vector<CompiledSentence> compile_all(std::span<amr::Graph const> graphs, knowledge::KnowledgeBase const &kb,
                                          unsigned workers = 1);

} // namespace nl2asp::constraints
