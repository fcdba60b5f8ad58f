#include "nl2asp/constraintgen.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

using namespace nl2asp;
using namespace nl2asp::constraints;
namespace t = nl2asp::test;

namespace {

std::string compile(std::string const &penman, knowledge::KnowledgeBase const &kb) {
    return asp::to_string(compile_constraint(amr::parse_penman(penman), kb));
}

std::string compile_fixture(std::string const &puzzle, int index) {
    auto kb = puzzle == "zoo" ? t::zoo_kb() : t::einstein_kb();
    return asp::to_string(compile_constraint(t::fixture_graph(puzzle, index), kb));
}

ConstraintError::Kind error_kind(auto &&f) {
    try {
        f();
    } catch (ConstraintError const &e) {
        return e.kind();
    }
    ADD_FAILURE() << "no ConstraintError thrown";
    return ConstraintError::Kind::NoAnchors;
}

} // namespace

// The generated statements shown for both puzzles, compared modulo whitespace.
TEST(ConstraintGolden, Zoo) {
    EXPECT_EQ(t::squash(compile_fixture("zoo", 1)),
              t::squash("1{order_in_line_of(C,3): favorite_animal_of(C,\"tigers\"), gender_of(C,\"girl\")}1."));
    EXPECT_EQ(t::squash(compile_fixture("zoo", 2)), t::squash(":- favorite_animal_of(\"Naomi\",\"tigers\")."));
    EXPECT_EQ(t::squash(compile_fixture("zoo", 3)),
              t::squash("1{favorite_animal_of(C,\"tigers\"): not balloon_design_of(C,\"hearts\"),gender_of(C,\"girl\")}1."));
    EXPECT_EQ(t::squash(compile_fixture("zoo", 4)),
              t::squash("1{favorite_animal_of(C,\"tigers\"): not balloon_design_of(C,\"stripes\"),gender_of(C,\"girl\")}1."));
    EXPECT_EQ(t::squash(compile_fixture("zoo", 5)), t::squash(":- order_in_line_of(\"Johan\",5)."));
}

TEST(ConstraintGolden, Einstein) {
    EXPECT_EQ(compile_fixture("einstein", 1), ":- not nationality_of(\"red\",\"englishman\").");
    EXPECT_EQ(compile_fixture("einstein", 2), ":- pet_of(H,\"dog\"), not nationality_of(H,\"spaniard\").");
    EXPECT_EQ(compile_fixture("einstein", 3), ":- not beverage_of(\"green\",\"coffee\").");
    EXPECT_EQ(compile_fixture("einstein", 4), ":- beverage_of(H,\"tea\"), not nationality_of(H,\"ukrainian\").");
}

TEST(ConstraintGolden, FaultyJohanParseIsFollowedLiterally) {
    auto g = amr::parse_penman(t::slurp(t::corpus("zoo/faulty/05.amr")));
    EXPECT_EQ(asp::to_string(compile_constraint(g, t::zoo_kb())), ":- not order_in_line_of(\"Johan\",5).");
}

TEST(ConstraintSpatial, RightOf) {
    EXPECT_EQ(compile_fixture("einstein", 5), ":- order_of(\"green\",O1), order_of(\"ivory\",O2), O1 != O2+1.");
}

TEST(ConstraintSpatial, LeftOf) {
    auto s = compile(R"((b / be-located-at-91
    :ARG1 (h / house :mod (g / green))
    :ARG2 (r / relative-position :op1 (h2 / house :mod (i / ivory)) :direction (l / left))))",
                     t::einstein_kb());
    EXPECT_EQ(s, ":- order_of(\"green\",O1), order_of(\"ivory\",O2), O1 != O2-1.");
}

TEST(ConstraintSpatial, NextToWithPairingAnchors) {
    EXPECT_EQ(compile_fixture("einstein", 10),
              ":- cigar_of(H1,\"chesterfields\"), order_of(H1,O1), pet_of(H2,\"fox\"), order_of(H2,O2), O1 != O2+1, "
              "O1 != O2-1.");
    EXPECT_EQ(compile_fixture("einstein", 14),
              ":- nationality_of(H1,\"norwegian\"), order_of(H1,O1), order_of(\"blue\",O2), O1 != O2+1, O1 != O2-1.");
}

TEST(ConstraintSpatial, NegatedNextToIsRejected) {
    auto kind = error_kind([] {
        compile(R"((l / live-01 :polarity - :ARG0 (p / person :name (n / name :op1 "Norwegian"))
    :location (n2 / next-to :op1 (h / house :mod (b / blue)))))",
                t::einstein_kb());
    });
    EXPECT_EQ(kind, ConstraintError::Kind::UnsupportedSpatialRelation);
}

TEST(ConstraintSpatial, BehindIsUnsupported) {
    auto kind = error_kind([] {
        compile(R"((b / be-located-at-91 :ARG1 (h / house :mod (g / green))
    :ARG2 (b2 / behind :op1 (h2 / house :mod (i / ivory)))))",
                t::einstein_kb());
    });
    EXPECT_EQ(kind, ConstraintError::Kind::UnsupportedSpatialRelation);
}

TEST(ConstraintOrdinals, Rewrites) {
    auto kb = t::einstein_kb();
    auto middle = rewrite_ordinals(t::fixture_graph("einstein", 8), kb);
    ASSERT_EQ(middle.rewrites.size(), 1u);
    EXPECT_EQ(middle.rewrites[0].raw, "middle");
    EXPECT_EQ(middle.rewrites[0].resolved, 3);
    auto const &node = middle.graph.node(middle.rewrites[0].node);
    EXPECT_EQ(node.instance, "ordinal-entity");
    EXPECT_EQ(node.attribute(":value"), "3");

    auto last = rewrite_ordinals(t::fixture_graph("zoo", 5), t::zoo_kb());
    ASSERT_EQ(last.rewrites.size(), 1u);
    EXPECT_EQ(last.rewrites[0].raw, "-1");
    EXPECT_EQ(last.rewrites[0].resolved, 5);

    auto keyword = rewrite_ordinals(amr::parse_penman("(h / house :mod (l / last))"), kb);
    ASSERT_EQ(keyword.rewrites.size(), 1u);
    EXPECT_EQ(keyword.rewrites[0].resolved, 5);
}

TEST(ConstraintOrdinals, Errors) {
    using K = ConstraintError::Kind;
    auto four = knowledge::build_kb(
        {{"child", {asp::Term::string("A"), asp::Term::string("B"), asp::Term::string("C"), asp::Term::string("D")}},
         {"order", {asp::Term::integer(1), asp::Term::integer(2), asp::Term::integer(3), asp::Term::integer(4)}}},
        {}, {"order"}, {});
    EXPECT_EQ(error_kind([&] { rewrite_ordinals(amr::parse_penman("(h / house :mod (m / middle))"), four); }),
              K::AmbiguousOrdinal);
    EXPECT_EQ(error_kind([&] {
                  rewrite_ordinals(amr::parse_penman("(p / person :ord (o / ordinal-entity :value 7))"), four);
              }),
              K::OrdinalOutOfRange);
    auto no_numbers = knowledge::build_kb({{"child", {asp::Term::string("A")}}, {"hat", {asp::Term::symbol("red")}}},
                                          {}, {"hat"}, {});
    EXPECT_EQ(error_kind([&] {
                  rewrite_ordinals(amr::parse_penman("(p / person :ord (o / ordinal-entity :value 1))"), no_numbers);
              }),
              K::NoNumericCategory);
}

TEST(ConstraintForms, ChoiceNeedsRelationalValueAndFreeReference) {
    // "A boy is second in line": relational value plus an unfixed child.
    EXPECT_EQ(compile_fixture("zoo", 7), "1{order_in_line_of(C,2):gender_of(C,\"boy\")}1.");
    // A named child fixes the reference, so the same shape becomes an integrity constraint.
    EXPECT_EQ(compile_fixture("zoo", 6), ":- not order_in_line_of(\"Mario\",1).");
}

TEST(ConstraintForms, TwoAnchorsWithVariableReference) {
    EXPECT_EQ(compile_fixture("zoo", 15), ":- favorite_animal_of(C,\"zebras\"), not order_in_line_of(C,4).");
    EXPECT_EQ(compile_fixture("zoo", 16), ":- favorite_animal_of(C,\"zebras\"), balloon_design_of(C,\"swirls\").");
}

TEST(ConstraintStages, AnalyzeFindsAnchors) {
    auto kb = t::zoo_kb();
    auto rw = rewrite_ordinals(t::fixture_graph("zoo", 1), kb);
    auto d = analyze(rw.graph, kb);
    EXPECT_EQ(d.relational.size(), 1u);
    EXPECT_EQ(d.literals.size(), 2u);
    ASSERT_TRUE(d.reference_term);
    EXPECT_EQ(*d.reference_term, asp::Term::variable("C"));
    EXPECT_EQ(choose_form(d), Form::Choice);
    d = resolve_positions(rw.graph, d, kb);
    EXPECT_EQ(d.spatial, SpatialRelation::None);
    EXPECT_TRUE(d.position_literals.empty());
}

TEST(ConstraintStages, NoAnchors) {
    auto g = amr::parse_penman("# ::snt It was a sunny day.\n(d / day :mod (s / sunny))");
    EXPECT_EQ(error_kind([&] { compile_constraint(g, t::zoo_kb()); }), ConstraintError::Kind::NoAnchors);
    try {
        compile_constraint(g, t::zoo_kb());
    } catch (ConstraintError const &e) {
        EXPECT_EQ(e.sentence(), "It was a sunny day.");
    }
}

TEST(ConstraintStages, AmbiguousReference) {
    auto g = amr::parse_penman(R"((a / and :op1 (p / person :name (n / name :op1 "Lani"))
    :op2 (p2 / person :name (n2 / name :op1 "Naomi")) :ARG1-of (l / like-01 :ARG1 (t / tiger))))");
    EXPECT_EQ(error_kind([&] { compile_constraint(g, t::zoo_kb()); }), ConstraintError::Kind::AmbiguousReference);
}

TEST(ConstraintBatch, OrderIsKeptAcrossWorkers) {
    auto kb = t::zoo_kb();
    std::vector<amr::Graph> graphs;
    for (int i = 1; i <= 18; ++i) {
        graphs.push_back(t::fixture_graph("zoo", i));
    }
    graphs.push_back(amr::parse_penman("# ::snt It was a sunny day.\n(d / day :mod (s / sunny))"));
    auto one = compile_all(graphs, kb, 1);
    auto many = compile_all(graphs, kb, 6);
    ASSERT_EQ(one.size(), graphs.size());
    for (std::size_t i = 0; i < one.size(); ++i) {
        EXPECT_EQ(one[i].sentence, graphs[i].sentence());
        EXPECT_EQ(one[i].statement, many[i].statement);
    }
    EXPECT_FALSE(one.back().statement);
    EXPECT_NE(one.back().skipped.find("NoAnchors"), std::string::npos);
}

// {{{1 properties

TEST(ConstraintProperty, EveryStatementIsSafeAndBound) {
    for (auto const &[puzzle, count] : {std::pair{"zoo", 18}, std::pair{"einstein", 14}}) {
        auto kb = std::string(puzzle) == "zoo" ? t::zoo_kb() : t::einstein_kb();
        for (int i = 1; i <= count; ++i) {
            auto st = compile_constraint(t::fixture_graph(puzzle, i), kb);
            EXPECT_TRUE(asp::unsafe_variables(st).empty()) << puzzle << " " << i;
            EXPECT_TRUE(asp::single_use_variables(st).empty()) << puzzle << " " << i;
            auto text = asp::to_string(st);
            EXPECT_EQ(asp::to_string(asp::parse_fragment(text).at(0)), text);
        }
    }
}

// Adding or removing sentence polarity flips the single literal of a one-literal constraint.
TEST(ConstraintProperty, PolarityToggle) {
    int checked = 0;
    for (auto const &[puzzle, count] : {std::pair{"zoo", 18}, std::pair{"einstein", 14}}) {
        auto kb = std::string(puzzle) == "zoo" ? t::zoo_kb() : t::einstein_kb();
        for (int i = 1; i <= count; ++i) {
            auto g = t::fixture_graph(puzzle, i);
            auto before = compile_constraint(g, kb);
            auto const *ic = std::get_if<asp::IntegrityConstraint>(&before);
            if (!ic || ic->body.size() != 1) {
                continue;
            }
            auto toggled = g;
            bool had = false;
            for (auto const &n : g.nodes()) {
                if (n.has_polarity()) {
                    toggled = toggled.without_attribute(n.id, ":polarity");
                    had = true;
                }
            }
            if (!had) {
                toggled = toggled.with_attribute(g.root(), ":polarity", "-");
            }
            auto after = compile_constraint(toggled, kb);
            auto const *ic2 = std::get_if<asp::IntegrityConstraint>(&after);
            ASSERT_TRUE(ic2) << puzzle << " " << i;
            ASSERT_EQ(ic2->body.size(), 1u);
            auto a = std::get<asp::Literal>(ic->body[0]);
            auto b = std::get<asp::Literal>(ic2->body[0]);
            EXPECT_EQ(a.negated, !b.negated) << puzzle << " " << i;
            a.negated = b.negated;
            EXPECT_EQ(a, b);
            ++checked;
        }
    }
    EXPECT_GE(checked, 12);
}
