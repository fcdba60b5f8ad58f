#include "nl2asp/knowledge.hpp"
#include "nl2asp/rulegen.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace nl2asp;
using namespace nl2asp::knowledge;
namespace t = nl2asp::test;

namespace {

Category cat(std::string name, std::vector<std::string> names) {
    Category c{std::move(name), {}, false};
    for (auto &n : names) {
        c.entities.push_back(asp::Term::constant_from_spelling(n));
    }
    return c;
}

Category numbers(std::string name, int n) {
    Category c{std::move(name), {}, false};
    for (int i = 1; i <= n; ++i) {
        c.entities.push_back(asp::Term::integer(i));
    }
    return c;
}

KnowledgeError::Kind error_kind(auto &&f) {
    try {
        f();
    } catch (KnowledgeError const &e) {
        return e.kind();
    }
    ADD_FAILURE() << "no KnowledgeError thrown";
    return KnowledgeError::Kind::Format;
}

std::string joined(std::vector<asp::Statement> const &sts) {
    std::string out;
    for (auto const &s : sts) {
        out += asp::to_string(s) + "\n";
    }
    return out;
}

} // namespace

TEST(Knowledge, ZooKnowledgeBase) {
    auto kb = t::zoo_kb();
    EXPECT_EQ(kb.reference(), "child");
    ASSERT_EQ(kb.pairings().size(), 3u);
    EXPECT_EQ(kb.pairings()[0].rule_name, "favorite_animal_of");
    EXPECT_EQ(kb.pairings()[0].var_letters, (std::pair<std::string, std::string>{"C", "F"}));
    EXPECT_EQ(kb.variable_letter("balloon_design"), "B");
    EXPECT_EQ(kb.variable_letter("order_in_line"), "O");
    ASSERT_NE(kb.numeric_category(), nullptr);
    EXPECT_EQ(kb.numeric_category()->name, "order_in_line");
    EXPECT_FALSE(kb.is_pairing("gender"));
    ASSERT_EQ(kb.relational().size(), 1u);
    EXPECT_EQ(kb.relational()[0].pairs.size(), 5u);
}

TEST(Knowledge, DefaultReferenceIsFirstCategory) {
    auto kb = build_kb({cat("child", {"Kerry", "Johan"}), numbers("order_in_line", 2)}, {}, {"order_in_line"}, {});
    EXPECT_EQ(kb.reference(), "child");
    EXPECT_TRUE(kb.find_category("order_in_line")->numeric);
    EXPECT_FALSE(kb.find_category("child")->numeric);
}

TEST(Knowledge, ReferenceNamedAsPairingIsDropped) {
    auto kb = build_kb({cat("nationality", {"englishman"}), cat("house_color", {"red"}), numbers("order", 1)}, {},
                       {"nationality", "house_color", "order"}, std::string("house_color"));
    ASSERT_EQ(kb.pairings().size(), 2u);
    EXPECT_EQ(kb.pairings()[0].category, "nationality");
    EXPECT_EQ(kb.pairings()[0].var_letters.first, "H");
}

TEST(Knowledge, LetterCollisionsGetFreshLetters) {
    auto kb = build_kb({cat("child", {"a"}), cat("colour", {"b"}), cat("cake", {"c"})}, {}, {"colour", "cake"}, {});
    std::set<std::string> letters{kb.variable_letter("child"), kb.variable_letter("colour"), kb.variable_letter("cake")};
    EXPECT_EQ(letters.size(), 3u);
}

TEST(Knowledge, Validation) {
    using K = KnowledgeError::Kind;
    EXPECT_EQ(error_kind([] { build_kb({cat("a", {"x"})}, {}, {}, std::string("b")); }), K::UnknownReference);
    EXPECT_EQ(error_kind([] { build_kb({cat("a", {"x"}), cat("a", {"y"})}, {}, {}, {}); }), K::DuplicateCategory);
    EXPECT_EQ(error_kind([] { build_kb({cat("a", {})}, {}, {}, {}); }), K::EmptyCategory);
    EXPECT_EQ(error_kind([] { build_kb({cat("a", {"x", "x"})}, {}, {}, {}); }), K::DuplicateEntity);
    EXPECT_EQ(error_kind([] { build_kb({cat("A b", {"x"})}, {}, {}, {}); }), K::InvalidName);
    EXPECT_EQ(error_kind([] { build_kb({cat("a", {"x"})}, {}, {"b"}, {}); }), K::UnknownPairing);
    EXPECT_EQ(error_kind([] {
                  build_kb({cat("a", {"x"})},
                           {RelationalFact{"gender", {{asp::Term::symbol("x"), asp::Term::symbol("boy")}}}}, {}, {});
              }),
              K::InvalidRelational);
}

TEST(KnowledgeMatch, NormalizesConcepts) {
    EXPECT_EQ(normalize_concept("line-up-02"), "line_up");
    EXPECT_EQ(normalize_concept("Polka-Dot"), "polka_dot");
    EXPECT_EQ(normalize_concept("orange juice"), "orange_juice");
}

TEST(KnowledgeMatch, Zoo) {
    auto kb = t::zoo_kb();
    EXPECT_EQ(match_concept(kb, "tiger"), MatchResult(ConstantOfInterest{"favorite_animal", asp::Term::string("tigers")}));
    EXPECT_EQ(match_concept(kb, "Naomi"), MatchResult(ConstantOfInterest{"child", asp::Term::string("Naomi")}));
    EXPECT_EQ(match_concept(kb, "girl"), MatchResult(RelationalValue{"gender_of", asp::Term::string("girl")}));
    EXPECT_EQ(match_concept(kb, "balloon"), MatchResult(RuleOfInterest{"balloon_design", "balloon_design_of"}));
    EXPECT_EQ(match_concept(kb, "animal"), MatchResult(RuleOfInterest{"favorite_animal", "favorite_animal_of"}));
    EXPECT_EQ(match_concept(kb, "receive-01"), MatchResult(NoMatch{}));
    EXPECT_EQ(match_concept(kb, ""), MatchResult(NoMatch{}));
}

TEST(KnowledgeMatch, AmbiguityIsReported) {
    auto kb = build_kb({cat("child", {"a", "b"}), cat("hat", {"red", "blue"}), cat("scarf", {"red_x", "blue_x"})}, {},
                       {"hat", "scarf"}, {});
    auto dup = build_kb({cat("child", {"a", "b"}), cat("hat", {"red", "blue"}), cat("scarf", {"red", "green"})}, {},
                        {"hat", "scarf"}, {});
    EXPECT_EQ(match_concept(kb, "red"), MatchResult(ConstantOfInterest{"hat", asp::Term::symbol("red")}));
    EXPECT_EQ(error_kind([&] { match_concept(dup, "red"); }), KnowledgeError::Kind::AmbiguousMatch);
}

TEST(KnowledgePersistence, RoundTrip) {
    for (auto const &kb : {t::zoo_kb(), t::einstein_kb()}) {
        std::istringstream in(format_kb(kb));
        EXPECT_EQ(read_kb(in), kb);
    }
}

TEST(KnowledgePersistence, FormatErrors) {
    std::istringstream missing_colon("child \"Kerry\"\n");
    EXPECT_EQ(error_kind([&] { read_kb(missing_colon); }), KnowledgeError::Kind::Format);
    EXPECT_THROW(read_kb_file("/nonexistent/kb.txt"), KnowledgeError);
}

// {{{1 rule generation

TEST(RuleGen, ZooFacts) {
    std::vector<asp::Statement> facts;
    for (auto &f : rules::gen_facts(t::zoo_kb())) {
        facts.emplace_back(std::move(f));
    }
    auto expected = "child(\"Kerry\";\"Johan\";\"Mario\";\"Lani\";\"Naomi\").\n"
                    "favorite_animal(\"chimpanzees\";\"tigers\";\"zebras\";\"lions\";\"giraffes\").\n"
                    "balloon_design(\"rainbow\";\"hearts\";\"stripes\";\"swirls\";\"polka_dots\").\n"
                    "order_in_line(1;2;3;4;5).\n"
                    "gender(\"boy\";\"girl\").\n"
                    "gender_of(\"Johan\",\"boy\").\n"
                    "gender_of(\"Mario\",\"boy\").\n"
                    "gender_of(\"Kerry\",\"girl\").\n"
                    "gender_of(\"Lani\",\"girl\").\n"
                    "gender_of(\"Naomi\",\"girl\").\n";
    EXPECT_EQ(joined(facts), expected);
}

TEST(RuleGen, ZooChoiceRules) {
    std::vector<asp::Statement> sts;
    for (auto &c : rules::gen_choice_rules(t::zoo_kb())) {
        sts.emplace_back(std::move(c));
    }
    auto expected = "1{favorite_animal_of(C,F):favorite_animal(F)}1:-child(C).\n"
                    "1{favorite_animal_of(C,F):child(C)}1:-favorite_animal(F).\n"
                    "1{balloon_design_of(C,B):balloon_design(B)}1:-child(C).\n"
                    "1{balloon_design_of(C,B):child(C)}1:-balloon_design(B).\n"
                    "1{order_in_line_of(C,O):order_in_line(O)}1:-child(C).\n"
                    "1{order_in_line_of(C,O):child(C)}1:-order_in_line(O).\n";
    EXPECT_EQ(joined(sts), expected);
}

TEST(RuleGen, ZooSolutionRule) {
    auto [rule, show] = rules::gen_solution_rule(t::zoo_kb());
    EXPECT_EQ(asp::to_string(asp::Statement{rule}),
              "solution(Child,Favorite_animal,Balloon_design,Order_in_line):-favorite_animal_of(Child,Favorite_animal),"
              "balloon_design_of(Child,Balloon_design),order_in_line_of(Child,Order_in_line).");
    EXPECT_EQ(asp::to_string(asp::Statement{show}), "#show solution/4.");
}

TEST(RuleGen, NoPairings) {
    auto kb = build_kb({cat("child", {"a"})}, {}, {}, {});
    try {
        rules::generate_rules(kb);
        FAIL();
    } catch (rules::RuleError const &e) {
        EXPECT_EQ(std::string(e.what()).rfind("NoPairings", 0), 0u);
    }
}

TEST(RuleGen, GeneratedProgramIsSafe) {
    for (auto const &kb : {t::zoo_kb(), t::einstein_kb()}) {
        auto g = rules::generate_rules(kb);
        asp::Program p;
        for (auto &f : rules::gen_facts(kb)) {
            p.statements.emplace_back(f);
        }
        for (auto &c : g.choice_rules) {
            p.statements.emplace_back(c);
        }
        p.statements.emplace_back(g.solution_rule);
        p.statements.emplace_back(g.show);
        EXPECT_NO_THROW(asp::validate(p));
        EXPECT_EQ(g.choice_rules.size(), 2 * kb.pairings().size());
    }
}
