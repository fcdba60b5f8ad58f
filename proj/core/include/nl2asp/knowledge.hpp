#pragma once

// Problem-instance knowledge: categories and their entities, relational
// facts, one-to-one pairings, and concept lookup for the constraint compiler.

#include "nl2asp/asp.hpp"

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace nl2asp::knowledge {

class KnowledgeError : public std::runtime_error {
public:
    enum class Kind {
        UnknownReference, DuplicateCategory, EmptyCategory, DuplicateEntity, InvalidName, UnknownPairing,
        InvalidRelational, AmbiguousMatch, Format
    };

    KnowledgeError(Kind kind, std::string const &message);

    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

char const *to_string(KnowledgeError::Kind kind);

struct Category {
    std::string name;
    std::vector<asp::Term> entities;
    bool numeric = false;

    friend bool operator==(Category const &, Category const &) = default;
};

struct RelationalFact {
    std::string predicate;
    std::vector<std::pair<asp::Term, asp::Term>> pairs;

    friend bool operator==(RelationalFact const &, RelationalFact const &) = default;
};

struct PairingPredicate {
    std::string category;
    std::string rule_name;
    std::string reference;
    // (reference variable, category variable), e.g. ("C", "F").
    std::pair<std::string, std::string> var_letters;

    friend bool operator==(PairingPredicate const &, PairingPredicate const &) = default;
};

class KnowledgeBase {
public:
    std::vector<Category> const &categories() const { return categories_; }
    std::vector<RelationalFact> const &relational() const { return relational_; }
    std::vector<PairingPredicate> const &pairings() const { return pairings_; }
    std::string const &reference() const { return reference_; }

    Category const *find_category(std::string_view name) const;
    Category const &reference_category() const { return *find_category(reference_); }
    PairingPredicate const *find_pairing(std::string_view category) const;
    bool is_pairing(std::string_view category) const { return find_pairing(category) != nullptr; }
    // The single numeric category among the pairings, if exactly one exists.
    Category const *numeric_category() const;
    // Variable letter assigned to a category; reference first, then pairings.
    std::string const &variable_letter(std::string_view category) const;

    friend bool operator==(KnowledgeBase const &, KnowledgeBase const &) = default;

private:
    friend KnowledgeBase build_kb(std::vector<Category>, std::vector<RelationalFact>, std::vector<std::string>,
                                  std::optional<std::string>);

    std::vector<Category> categories_;
    std::vector<RelationalFact> relational_;
    std::vector<PairingPredicate> pairings_;
    std::string reference_;
    std::vector<std::pair<std::string, std::string>> letters_;
};

// Validates and assembles a knowledge base. The reference defaults to the
// first category; a pairing naming the reference is dropped.
KnowledgeBase build_kb(std::vector<Category> categories, std::vector<RelationalFact> relational,
                       std::vector<std::string> pairing_names, std::optional<std::string> reference);

// {{{1 concept matching

struct NoMatch {
    friend bool operator==(NoMatch const &, NoMatch const &) = default;
};

struct ConstantOfInterest {
    std::string category;
    asp::Term constant;
    friend bool operator==(ConstantOfInterest const &, ConstantOfInterest const &) = default;
};

struct RuleOfInterest {
    std::string category;
    std::string rule_name;
    friend bool operator==(RuleOfInterest const &, RuleOfInterest const &) = default;
};

struct RelationalValue {
    std::string predicate;
    asp::Term value;
    friend bool operator==(RelationalValue const &, RelationalValue const &) = default;
};

using MatchResult = std::variant<NoMatch, ConstantOfInterest, RuleOfInterest, RelationalValue>;

// Lowercases, strips a PropBank sense suffix, maps '-' and ' ' to '_'.
std::string normalize_concept(std::string_view instance);

MatchResult match_concept(KnowledgeBase const &kb, std::string_view instance);

std::string describe(MatchResult const &result);

// {{{1 persistence

KnowledgeBase read_kb(std::istream &in);
KnowledgeBase read_kb_file(std::string const &path);
std::string format_kb(KnowledgeBase const &kb);

} // namespace nl2asp::knowledge
