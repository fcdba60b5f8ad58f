#include "nl2asp/knowledge.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <regex>
#include <set>
#include <sstream>

namespace nl2asp::knowledge {

KnowledgeError::KnowledgeError(Kind kind, std::string const &message)
: std::runtime_error(message)
, kind_(kind) { }

char const *to_string(KnowledgeError::Kind kind) {
    switch (kind) {
        case KnowledgeError::Kind::UnknownReference: return "UnknownReference";
        case KnowledgeError::Kind::DuplicateCategory: return "DuplicateCategory";
        case KnowledgeError::Kind::EmptyCategory: return "EmptyCategory";
        case KnowledgeError::Kind::DuplicateEntity: return "DuplicateEntity";
        case KnowledgeError::Kind::InvalidName: return "InvalidName";
        case KnowledgeError::Kind::UnknownPairing: return "UnknownPairing";
        case KnowledgeError::Kind::InvalidRelational: return "InvalidRelational";
        case KnowledgeError::Kind::AmbiguousMatch: return "AmbiguousMatch";
        case KnowledgeError::Kind::Format: return "FormatError";
    }
    return "";
}

Category const *KnowledgeBase::find_category(std::string_view name) const {
    auto it = std::find_if(categories_.begin(), categories_.end(), [&](Category const &c) { return c.name == name; });
    return it == categories_.end() ? nullptr : &*it;
}

PairingPredicate const *KnowledgeBase::find_pairing(std::string_view category) const {
    auto it = std::find_if(pairings_.begin(), pairings_.end(),
                           [&](PairingPredicate const &p) { return p.category == category; });
    return it == pairings_.end() ? nullptr : &*it;
}

Category const *KnowledgeBase::numeric_category() const {
    Category const *found = nullptr;
    for (auto const &p : pairings_) {
        auto const *c = find_category(p.category);
        if (c->numeric) {
            if (found != nullptr) {
                return nullptr;
            }
            found = c;
        }
    }
    return found;
}

std::string const &KnowledgeBase::variable_letter(std::string_view category) const {
    for (auto const &[name, letter] : letters_) {
        if (name == category) {
            return letter;
        }
    }
    throw std::out_of_range("no variable letter for category '" + std::string(category) + "'");
}

namespace {

bool valid_name(std::string const &name) {
    static std::regex const pattern("[a-z][a-z0-9_]*");
    return std::regex_match(name, pattern);
}

bool ends_with_of(std::string_view name) { return name.size() > 3 && name.substr(name.size() - 3) == "_of"; }

std::string initial_letter(std::string const &name) {
    return std::string(1, static_cast<char>(std::toupper(static_cast<unsigned char>(name.front()))));
}

} // namespace

KnowledgeBase build_kb(std::vector<Category> categories, std::vector<RelationalFact> relational,
                       std::vector<std::string> pairing_names, std::optional<std::string> reference) {
    using K = KnowledgeError::Kind;
    KnowledgeBase kb;
    std::set<std::string> names;
    for (auto &c : categories) {
        if (!valid_name(c.name) || ends_with_of(c.name)) {
            throw KnowledgeError(K::InvalidName, "invalid category name '" + c.name + "'");
        }
        if (!names.insert(c.name).second) {
            throw KnowledgeError(K::DuplicateCategory, "category '" + c.name + "' listed twice");
        }
        if (c.entities.empty()) {
            throw KnowledgeError(K::EmptyCategory, "category '" + c.name + "' has no entities");
        }
        std::set<asp::Term> seen;
        for (auto const &e : c.entities) {
            if (!e.is_ground() || e.is_variable() || std::holds_alternative<asp::Arith>(e.value)) {
                throw KnowledgeError(K::InvalidName, "entity of '" + c.name + "' is not a constant");
            }
            if (!seen.insert(e).second) {
                throw KnowledgeError(K::DuplicateEntity,
                                     "entity " + asp::to_string(e) + " listed twice in '" + c.name + "'");
            }
        }
        c.numeric = std::all_of(c.entities.begin(), c.entities.end(), [](asp::Term const &t) { return t.is_integer(); });
    }
    kb.categories_ = std::move(categories);

    for (auto const &r : relational) {
        if (!valid_name(r.predicate) || !ends_with_of(r.predicate)) {
            throw KnowledgeError(K::InvalidRelational, "relational predicate '" + r.predicate + "' must end in _of");
        }
        for (auto const &[left, right] : r.pairs) {
            bool known = std::any_of(kb.categories_.begin(), kb.categories_.end(), [&](Category const &c) {
                return std::find(c.entities.begin(), c.entities.end(), left) != c.entities.end();
            });
            if (!known) {
                throw KnowledgeError(K::InvalidRelational, r.predicate + " refers to unknown entity " + asp::to_string(left));
            }
        }
    }
    kb.relational_ = std::move(relational);

    if (!reference) {
        if (kb.categories_.empty()) {
            throw KnowledgeError(K::UnknownReference, "no categories to choose a reference from");
        }
        reference = kb.categories_.front().name;
    }
    if (kb.find_category(*reference) == nullptr) {
        throw KnowledgeError(K::UnknownReference, "reference category '" + *reference + "' is not declared");
    }
    kb.reference_ = *reference;

    std::set<std::string> used;
    auto assign_letter = [&](std::string const &category) {
        auto base = initial_letter(category);
        auto letter = base;
        for (int i = 2; used.contains(letter); ++i) {
            letter = base + std::to_string(i);
        }
        used.insert(letter);
        kb.letters_.emplace_back(category, letter);
        return letter;
    };
    auto ref_letter = assign_letter(kb.reference_);
    for (auto const &name : pairing_names) {
        if (name == kb.reference_ || kb.is_pairing(name)) {
            continue;
        }
        if (kb.find_category(name) == nullptr) {
            throw KnowledgeError(K::UnknownPairing, "pairing '" + name + "' is not a declared category");
        }
        auto letter = assign_letter(name);
        kb.pairings_.push_back(PairingPredicate{name, name + "_of", kb.reference_, {ref_letter, letter}});
    }
    return kb;
}

// {{{1 matching

namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::string strip_s(std::string const &s) {
    if (s.size() > 1 && s.back() == 's') {
        return s.substr(0, s.size() - 1);
    }
    return s;
}

std::vector<std::string> tokens(std::string const &s, std::size_t min_len) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, '_')) {
        if (tok.size() >= min_len) {
            out.push_back(tok);
        }
    }
    return out;
}

std::size_t common_prefix(std::string const &a, std::string const &b) {
    std::size_t n = 0;
    while (n < a.size() && n < b.size() && a[n] == b[n]) {
        ++n;
    }
    return n;
}

// Lower class wins; 0 constant of a pairing or the reference, 1 rule,
// 2 relational value, 3 constant of any other category.
struct Candidate {
    int klass;
    MatchResult result;
};

enum class Stage { Exact, Plural, Token, Stem };

std::vector<Candidate> candidates(KnowledgeBase const &kb, std::string const &c, Stage stage) {
    std::vector<Candidate> out;
    auto same = [&](std::string const &x) {
        switch (stage) {
            case Stage::Exact: return x == c;
            case Stage::Plural: return strip_s(x) == strip_s(c);
            default: return false;
        }
    };
    if (stage == Stage::Exact || stage == Stage::Plural) {
        for (auto const &cat : kb.categories()) {
            bool participates = cat.name == kb.reference() || kb.is_pairing(cat.name);
            for (auto const &e : cat.entities) {
                if (same(lower(e.plain()))) {
                    out.push_back({participates ? 0 : 3, ConstantOfInterest{cat.name, e}});
                }
            }
        }
        for (auto const &p : kb.pairings()) {
            if (same(p.category) || same(p.rule_name)) {
                out.push_back({1, RuleOfInterest{p.category, p.rule_name}});
            }
        }
        for (auto const &r : kb.relational()) {
            for (auto const &[left, right] : r.pairs) {
                if (same(lower(right.plain()))) {
                    out.push_back({2, RelationalValue{r.predicate, right}});
                }
            }
        }
        return out;
    }
    auto concept_tokens = tokens(c, stage == Stage::Token ? 3 : 4);
    for (auto const &p : kb.pairings()) {
        bool hit = false;
        for (auto const &name_token : tokens(p.category, 3)) {
            for (auto const &t : concept_tokens) {
                if (stage == Stage::Token ? strip_s(t) == strip_s(name_token) : common_prefix(t, name_token) >= 4) {
                    hit = true;
                }
            }
        }
        if (hit) {
            out.push_back({1, RuleOfInterest{p.category, p.rule_name}});
        }
    }
    return out;
}

} // namespace

std::string normalize_concept(std::string_view instance) {
    static std::regex const sense("-[0-9]+$");
    auto c = std::regex_replace(lower(instance), sense, "");
    std::replace(c.begin(), c.end(), '-', '_');
    std::replace(c.begin(), c.end(), ' ', '_');
    return c;
}

MatchResult match_concept(KnowledgeBase const &kb, std::string_view instance) {
    auto c = normalize_concept(instance);
    if (c.empty()) {
        return NoMatch{};
    }
    for (auto stage : {Stage::Exact, Stage::Plural, Stage::Token, Stage::Stem}) {
        auto found = candidates(kb, c, stage);
        if (found.empty()) {
            continue;
        }
        int best = std::min_element(found.begin(), found.end(), [](auto const &a, auto const &b) {
                       return a.klass < b.klass;
                   })->klass;
        std::vector<MatchResult> distinct;
        for (auto const &cand : found) {
            if (cand.klass == best && std::find(distinct.begin(), distinct.end(), cand.result) == distinct.end()) {
                distinct.push_back(cand.result);
            }
        }
        if (distinct.size() > 1) {
            throw KnowledgeError(KnowledgeError::Kind::AmbiguousMatch,
                                 "concept '" + std::string(instance) + "' matches both " + describe(distinct[0]) +
                                     " and " + describe(distinct[1]));
        }
        return distinct.front();
    }
    return NoMatch{};
}

std::string describe(MatchResult const &result) {
    return std::visit([](auto const &m) -> std::string {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, NoMatch>) {
            return "no match";
        }
        else if constexpr (std::is_same_v<T, ConstantOfInterest>) {
            return "constant " + asp::to_string(m.constant) + " of " + m.category;
        }
        else if constexpr (std::is_same_v<T, RuleOfInterest>) {
            return "rule " + m.rule_name;
        }
        else {
            return "relational value " + asp::to_string(m.value) + " of " + m.predicate;
        }
    }, result);
}

// {{{1 persistence

namespace {

std::string trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) {
        return {};
    }
    auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

// Splits at commas outside of string literals.
std::vector<std::string> split_list(std::string_view s) {
    std::vector<std::string> out;
    std::string cur;
    bool in_string = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        char c = s[i];
        if (in_string && c == '\\' && i + 1 < s.size()) {
            cur += c;
            cur += s[++i];
            continue;
        }
        if (c == '"') {
            in_string = !in_string;
        }
        if (c == ',' && !in_string) {
            out.push_back(trim(cur));
            cur.clear();
            continue;
        }
        cur += c;
    }
    if (!trim(cur).empty() || !out.empty()) {
        out.push_back(trim(cur));
    }
    return out;
}

std::string join_terms(std::vector<asp::Term> const &ts) {
    std::string out;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        out += (i ? ", " : "") + asp::to_string(ts[i]);
    }
    return out;
}

} // namespace

KnowledgeBase read_kb(std::istream &in) {
    using K = KnowledgeError::Kind;
    std::vector<Category> categories;
    std::vector<RelationalFact> relational;
    std::vector<std::string> pairings;
    std::optional<std::string> reference;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto text = trim(line);
        if (text.empty() || text.front() == '#') {
            continue;
        }
        auto colon = text.find(':');
        if (colon == std::string::npos) {
            throw KnowledgeError(K::Format, "line " + std::to_string(lineno) + ": expected 'name: values'");
        }
        auto key = trim(text.substr(0, colon));
        auto items = split_list(text.substr(colon + 1));
        if (key == "reference") {
            if (items.size() != 1 || items.front().empty()) {
                throw KnowledgeError(K::Format, "line " + std::to_string(lineno) + ": reference takes one category");
            }
            reference = items.front();
            continue;
        }
        if (key == "pairings") {
            for (auto const &item : items) {
                if (item.empty()) {
                    throw KnowledgeError(K::Format, "line " + std::to_string(lineno) + ": empty pairing name");
                }
                pairings.push_back(item);
            }
            continue;
        }
        std::vector<asp::Term> terms;
        try {
            for (auto const &item : items) {
                terms.push_back(asp::parse_term(item));
            }
        }
        catch (asp::AspError const &e) {
            throw KnowledgeError(K::Format, "line " + std::to_string(lineno) + ": " + e.what());
        }
        if (ends_with_of(key)) {
            if (terms.size() != 2) {
                throw KnowledgeError(K::Format, "line " + std::to_string(lineno) + ": relational fact needs two constants");
            }
            auto it = std::find_if(relational.begin(), relational.end(),
                                   [&](RelationalFact const &r) { return r.predicate == key; });
            if (it == relational.end()) {
                relational.push_back({key, {}});
                it = std::prev(relational.end());
            }
            it->pairs.emplace_back(terms[0], terms[1]);
        }
        else {
            categories.push_back(Category{key, std::move(terms), false});
        }
    }
    return build_kb(std::move(categories), std::move(relational), std::move(pairings), std::move(reference));
}

KnowledgeBase read_kb_file(std::string const &path) {
    std::ifstream in(path);
    if (!in) {
        throw KnowledgeError(KnowledgeError::Kind::Format, "cannot open knowledge base file '" + path + "'");
    }
    return read_kb(in);
}

std::string format_kb(KnowledgeBase const &kb) {
    std::string out;
    for (auto const &c : kb.categories()) {
        out += c.name + ": " + join_terms(c.entities) + "\n";
    }
    for (auto const &r : kb.relational()) {
        for (auto const &[left, right] : r.pairs) {
            out += r.predicate + ": " + asp::to_string(left) + ", " + asp::to_string(right) + "\n";
        }
    }
    out += "reference: " + kb.reference() + "\n";
    out += "pairings:";
    for (std::size_t i = 0; i < kb.pairings().size(); ++i) {
        out += (i ? ", " : " ") + kb.pairings()[i].category;
    }
    return out + "\n";
}

} // namespace nl2asp::knowledge
