#include <gtest/gtest.h>

#include <algorithm>
#include <set>
#include <string>

#include "generators.hpp"
#include "revlts/ccs/semantics.hpp"

namespace {

using namespace revlts::ccs;
using revlts::parse_error;

process P(const char* text) { return parse_process(text); }
label U(const char* text) { return parse_label(text); }

std::set<std::string> label_texts(const process& p) {
    std::set<std::string> out;
    for (const auto& [u, q] : enumerate_refined(p)) out.insert(u.text());
    return out;
}

TEST(CcsParse, ExampleProcess) {
    auto p = P("a.b.0 | ~b.c.0");
    ASSERT_EQ(p.k(), process::kind::par);
    EXPECT_EQ(p.left(), process::prefix(action::input(channel::free("a")),
                                        process::prefix(action::input(channel::free("b")), process::nil())));
    EXPECT_EQ(p.right(), process::prefix(action::output(channel::free("b")),
                                         process::prefix(action::input(channel::free("c")), process::nil())));
    EXPECT_EQ(pretty(p), "a.b.0 | ~b.c.0");
}

TEST(CcsParse, Nil) {
    EXPECT_TRUE(P("0").is_nil());
    EXPECT_EQ(pretty(process::nil()), "0");
}

TEST(CcsParse, RecursionRoundTripsThroughNamelessForm) {
    auto p = P("rec X. a.X");
    EXPECT_EQ(p, P("rec Y. a.Y"));
    EXPECT_EQ(P(pretty(p).c_str()), p);
    EXPECT_EQ(p.body().summands()[0].cont->var_bound(), true);
}

TEST(CcsParse, AlphaEquivalentRestrictionsAreEqual) {
    EXPECT_EQ(P("nu a. (a.0 | ~a.0)"), P("nu z. (z.0 | ~z.0)"));
    EXPECT_NE(P("nu a. a.0"), P("nu a. b.0"));
}

TEST(CcsParse, BareActionAbbreviatesPrefixWithNil) { EXPECT_EQ(P("a | ~b"), P("a.0 | ~b.0")); }

TEST(CcsParse, Precedence) {
    // prefix > + > |
    auto p = P("a.b.0 + c.0 | d.0");
    ASSERT_EQ(p.k(), process::kind::par);
    EXPECT_EQ(p.left().summands().size(), 2u);
    // Binders extend to the right.
    auto q = P("nu a. a.0 | ~a.0");
    ASSERT_EQ(q.k(), process::kind::restrict);
    EXPECT_EQ(q.body().k(), process::kind::par);
}

TEST(CcsParse, CommentsAreSkipped) { EXPECT_EQ(P("# the example\na.0 # trailing\n| b.0"), P("a.0 | b.0")); }

TEST(CcsParse, ErrorsCarryPosition) {
    try {
        (void)P("a.b. | c");
        FAIL() << "expected parse_error";
    } catch (const parse_error& e) {
        EXPECT_EQ(e.position, 5u);
        EXPECT_NE(std::string(e.what()).find("expected"), std::string::npos);
    }
    EXPECT_THROW((void)P("a.0 + 0"), parse_error);
    EXPECT_THROW((void)P("A.0"), parse_error);
    EXPECT_THROW((void)P("(a.0"), parse_error);
    EXPECT_THROW((void)P("a.0 b.0"), parse_error);
}

TEST(CcsParse, PrettyRoundTripsOnGeneratedProcesses) {
    revlts::fixtures::process_generator gen(7);
    for (int i = 0; i < 500; ++i) {
        auto p = gen(5);
        auto text = pretty(p);
        EXPECT_EQ(parse_process(text), p) << text;
    }
}

TEST(CcsParse, PrettyAvoidsCapturingFreeNames) {
    auto p = process::par(process::prefix(action::input(channel::free("a")), process::nil()),
                          process::restrict(process::prefix(action::output(channel::at(0)), process::nil())));
    EXPECT_EQ(pretty(p), "a.0 | nu b. ~b.0");
    EXPECT_EQ(P(pretty(p).c_str()), p);
}

TEST(CcsLabel, TextRoundTrips) {
    revlts::fixtures::process_generator gen(11);
    std::size_t labels = 0;
    for (int i = 0; i < 300; ++i) {
        auto p = gen(4);
        for (const auto& [u, q] : enumerate_refined(p)) {
            EXPECT_EQ(parse_label(u.text()), u) << u.text();
            ++labels;
        }
    }
    EXPECT_GT(labels, 100u);
}

TEST(CcsLabel, ConcreteSyntax) {
    EXPECT_EQ(U("(pick(1){a.b.0} | *)").text(), "(pick(1){a.b.0}|*)");
    EXPECT_EQ(U("(*|pick(1){~b.c.0})").text(), "(*|pick(1){~b.c.0})");
    EXPECT_EQ(U("rec X. a.X").text(), "rec X. a.X");
    EXPECT_EQ(U("nu a.((pick(1){a.0}|pick(1){~a.0}))").text(), "nu a.((pick(1){a.0}|pick(1){~a.0}))");
}

TEST(CcsLabel, MalformedLabelsAreRejected) {
    EXPECT_THROW((void)U("(*|*)"), parse_error);
    EXPECT_THROW((void)U("pick(2){a.0}"), parse_error);
    EXPECT_THROW((void)U("(pick(1){a.0}|pick(1){b.0})"), parse_error);
    EXPECT_THROW((void)U("nu a.((pick(1){a.0}|*))"), parse_error);
}

TEST(CcsInterpret, ChoiceYieldsSelectedAction) {
    auto a = interpret(U("pick(1){a.b.0}"));
    ASSERT_TRUE(a);
    EXPECT_EQ(*a, action::input(channel::free("a")));
    auto b = interpret(U("pick(2){a.0 + ~b.0}"));
    ASSERT_TRUE(b);
    EXPECT_EQ(*b, action::output(channel::free("b")));
}

TEST(CcsInterpret, RecursionIsInternal) {
    auto a = interpret(U("rec X. a.X"));
    ASSERT_TRUE(a);
    EXPECT_EQ(a->k, action::kind::tau);
}

TEST(CcsInterpret, RestrictionHidesItsChannel) {
    auto inner = label::choice({{action::input(channel::at(0)), std::make_shared<const process>(process::nil())}}, 1);
    EXPECT_FALSE(interpret(label::restrict(label::left(inner))));
    auto other = label::choice({{action::input(channel::free("b")), std::make_shared<const process>(process::nil())}}, 1);
    auto a = interpret(label::restrict(label::left(other)));
    ASSERT_TRUE(a);
    EXPECT_EQ(*a, action::input(channel::free("b")));
}

TEST(CcsInterpret, SyncIsInternal) {
    auto a = interpret(U("(pick(1){b.0}|pick(1){~b.c.0})"));
    ASSERT_TRUE(a);
    EXPECT_EQ(a->k, action::kind::tau);
}

TEST(CcsRefined, ExampleRootHasTwoMoves) {
    EXPECT_EQ(label_texts(P("a.b.0 | ~b.c.0")),
              (std::set<std::string>{"(pick(1){a.b.0}|*)", "(*|pick(1){~b.c.0})"}));
}

TEST(CcsRefined, SynchronisationAppearsAfterFirstStep) {
    auto moves = enumerate_refined(P("b.0 | ~b.c.0"));
    ASSERT_EQ(moves.size(), 3u);
    bool found = false;
    for (const auto& [u, q] : moves) {
        if (u.text() == "(pick(1){b.0}|pick(1){~b.c.0})") {
            found = true;
            EXPECT_EQ(q, P("0 | c.0"));
        }
    }
    EXPECT_TRUE(found);
}

TEST(CcsRefined, RecursionUnfolds) {
    auto moves = enumerate_refined(P("rec X. a.X"));
    ASSERT_EQ(moves.size(), 1u);
    EXPECT_EQ(moves[0].first, U("rec X. a.X"));
    EXPECT_EQ(moves[0].second, P("a.(rec X. a.X)"));
    EXPECT_EQ(pretty(moves[0].second), "a.(rec X. a.X)");
}

TEST(CcsRefined, RestrictionBlocksHiddenActionsButAllowsSync) {
    auto moves = enumerate_refined(P("nu a. (a.0 | ~a.0)"));
    ASSERT_EQ(moves.size(), 1u);
    EXPECT_EQ(moves[0].first.k(), label::kind::restrict);
    EXPECT_EQ(moves[0].second, P("nu a. (0 | 0)"));
}

TEST(CcsRefined, VariablesAndNilAreStuck) {
    EXPECT_TRUE(enumerate_refined(P("0")).empty());
    EXPECT_TRUE(enumerate_refined(P("X")).empty());
}

TEST(CcsSubstitute, VariableItself) { EXPECT_EQ(substitute(P("X"), "X", P("b.0")), P("b.0")); }

TEST(CcsSubstitute, UnderPrefix) { EXPECT_EQ(substitute(P("a.X"), "X", P("b.0")), P("a.b.0")); }

TEST(CcsSubstitute, AvoidsCapture) {
    auto r = substitute(P("rec X. X | Y"), "Y", P("X"));
    // The free X of the argument stays free: the binder is renamed.
    EXPECT_EQ(r, P("rec Z. Z | X"));
    EXPECT_NE(r, P("rec X. X | X"));
    EXPECT_EQ(pretty(r), "rec Y. Y | X");
}

TEST(CcsSubstitute, ShiftsUnderRestriction) {
    // The free channel b of the argument must not be captured by nu b.
    auto r = substitute(P("nu b. (b.0 | X)"), "X", P("b.0"));
    EXPECT_EQ(r, P("nu z. (z.0 | b.0)"));
}

TEST(CcsSubstitute, UnfoldUnderRestrictionKeepsOuterChannels) {
    // rec under nu: the unfolded copy still refers to the outer binder.
    auto p = P("nu a. rec X. a.X");
    auto moves = enumerate_refined(p);
    ASSERT_EQ(moves.size(), 1u);
    EXPECT_EQ(moves[0].second, P("nu a. a.(rec X. a.X)"));
}

TEST(CcsIndependence, ExamplePairIsIndependent) {
    EXPECT_TRUE(independent(U("(pick(1){a.b.0}|*)"), U("(*|pick(1){~b.c.0})")));
}

TEST(CcsIndependence, SyncDependsOnEarlierLeftStep) {
    EXPECT_FALSE(independent(U("(pick(1){a.b.0}|*)"), U("(pick(1){b.0}|pick(1){~b.c.0})")));
    EXPECT_FALSE(independent(U("(pick(1){b.0}|pick(1){~b.c.0})"), U("(*|pick(1){c.0})")));
}

TEST(CcsIndependence, LeftLabelIsNotIndependentOfItself) {
    auto u = U("(pick(1){a.0}|*)");
    EXPECT_FALSE(independent(u, u));
    EXPECT_FALSE(independent(U("pick(1){a.0}"), U("pick(1){a.0}")));
}

TEST(CcsIndependence, NestedParallelComponents) {
    // ((a|*)|*) and ((*|b)|*) move different leaves of (a.0|b.0)|c.0.
    EXPECT_TRUE(independent(U("((pick(1){a.0}|*)|*)"), U("((*|pick(1){b.0})|*)")));
    EXPECT_FALSE(independent(U("((pick(1){a.0}|*)|*)"), U("((pick(1){a.0}|*)|*)")));
    EXPECT_TRUE(independent(U("nu a.((pick(1){b.0}|*))"), U("nu a.((*|pick(1){c.0}))")));
    EXPECT_FALSE(independent(U("nu a.((pick(1){b.0}|*))"), U("(pick(1){b.0}|*)")));
}

TEST(CcsIndependence, SymmetricOnGeneratedLabels) {
    revlts::fixtures::process_generator gen(3);
    std::vector<label> labels;
    for (int i = 0; i < 60; ++i)
        for (const auto& [u, q] : enumerate_refined(gen(4))) labels.push_back(u);
    for (const auto& u : labels)
        for (const auto& v : labels) EXPECT_EQ(independent(u, v), independent(v, u));
}

TEST(CcsStandard, SumOffersBothBranches) {
    auto moves = enumerate_standard(P("a.0 + b.0"));
    ASSERT_EQ(moves.size(), 2u);
    EXPECT_EQ(moves[0].first, action::input(channel::free("a")));
    EXPECT_EQ(moves[1].first, action::input(channel::free("b")));
    EXPECT_TRUE(moves[0].second.is_nil());
    EXPECT_TRUE(moves[1].second.is_nil());
}

TEST(CcsStandard, ParallelWithSync) {
    auto moves = enumerate_standard(P("a.0 | ~a.0"));
    ASSERT_EQ(moves.size(), 3u);
    EXPECT_EQ(moves[2].first.k, action::kind::tau);
    EXPECT_EQ(moves[2].second, P("0 | 0"));
}

// Interpreting refined transitions gives exactly the standard transitions.
TEST(CcsStandard, RefinedImageMatchesStandardSemantics) {
    revlts::fixtures::process_generator gen(25);
    for (int i = 0; i < 200; ++i) {
        auto p = gen(4);
        std::set<std::pair<std::string, std::string>> refined, standard;
        for (const auto& [u, q] : enumerate_refined(p)) {
            auto a = interpret(u);
            ASSERT_TRUE(a) << u.text();
            refined.emplace(a->key(), q.key());
        }
        for (const auto& [a, q] : enumerate_standard(p)) standard.emplace(a.key(), q.key());
        EXPECT_EQ(refined, standard) << pretty(p);
    }
}

// Concurrent components commute with unchanged labels.
TEST(CcsRefined, ParallelComponentsPermute) {
    revlts::fixtures::process_generator gen(41);
    for (int i = 0; i < 100; ++i) {
        auto lhs = gen(3);
        auto rhs = gen(3);
        auto whole = process::par(lhs, rhs);
        for (const auto& [u, l2] : enumerate_refined(lhs)) {
            for (const auto& [v, r2] : enumerate_refined(rhs)) {
                auto first = label::left(u);
                auto second = label::right(v);
                EXPECT_TRUE(independent(first, second));
                auto after_u = revlts::step(refined_instance{}, whole, first);
                ASSERT_TRUE(after_u);
                auto uv = revlts::step(refined_instance{}, *after_u, second);
                auto after_v = revlts::step(refined_instance{}, whole, second);
                ASSERT_TRUE(after_v);
                auto vu = revlts::step(refined_instance{}, *after_v, first);
                ASSERT_TRUE(uv && vu);
                EXPECT_EQ(*uv, *vu);
                EXPECT_EQ(*uv, process::par(l2, r2));
            }
        }
    }
}

}  // namespace
