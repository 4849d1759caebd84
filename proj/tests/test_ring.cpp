#include <gtest/gtest.h>

#include "cuntz/ring_checks.hpp"

using namespace cuntz;

// ============================================================
// Construction
// ============================================================

TEST(RingTest, ZmodTwoIsField) {
    auto R = FiniteRing::zmod(2);
    EXPECT_EQ(R->size(), 2u);
    ASSERT_TRUE(R->one());
    EXPECT_EQ(*R->one(), 1u);
    EXPECT_EQ(R->prime_field(), 2u);
    EXPECT_FALSE(R->axiom_violation());
}

TEST(RingTest, ZmodFourRadical) {
    auto R = FiniteRing::zmod(4);
    std::vector<Elem> nonunits;
    for (Elem a = 0; a < 4; ++a)
        if (!R->is_unit(a)) nonunits.push_back(a);
    EXPECT_EQ(nonunits, (std::vector<Elem>{0, 2}));
    EXPECT_EQ(R->characteristic(), 4u);
    EXPECT_FALSE(R->prime_field());
    auto ch = R->chain_ring();
    ASSERT_TRUE(ch);
    EXPECT_EQ(ch->first, 2u);
    EXPECT_EQ(ch->second, 2u);
}

TEST(RingTest, MatrixRingOverF2) {
    auto R = FiniteRing::make(RingSpec::matrix(RingSpec::gf(2), 2));
    EXPECT_EQ(R->size(), 16u);
    EXPECT_TRUE(R->is_unital());
    EXPECT_FALSE(R->is_commutative());
    EXPECT_FALSE(R->axiom_violation());
    // e11 * e12 = e12, e12 * e11 = 0 with ids: bit0=(0,0) bit1=(0,1) bit2=(1,0) bit3=(1,1)
    EXPECT_EQ(R->mul(1, 2), 2u);
    EXPECT_EQ(R->mul(2, 1), 0u);
    EXPECT_EQ(*R->one(), 9u);
}

TEST(RingTest, BuiltinsPassAxioms) {
    for (const char* s : {"zmod(3)", "zmod(6)", "gf(5)", "upper(zmod(2),2)", "product(gf(2),gf(3))",
                          "matrix(zmod(2),2)", "upper(zmod(3),2)"}) {
        auto R = FiniteRing::make(RingSpec::parse(s));
        EXPECT_FALSE(R->axiom_violation()) << s;
    }
}

TEST(RingTest, ProductCharacteristic) {
    auto R = FiniteRing::make(RingSpec::parse("product(gf(2),gf(3))"));
    EXPECT_EQ(R->size(), 6u);
    EXPECT_EQ(R->characteristic(), 6u);
    EXPECT_EQ(*R->one(), 1u + 2u * 1u);
}

TEST(RingTest, RejectsBadSpecs) {
    EXPECT_THROW(FiniteRing::gf(4), InvalidInput);
    EXPECT_THROW(FiniteRing::zmod(1), InvalidInput);
    RingSpec bad;
    bad.kind = RingSpec::Kind::table;
    bad.size = 2;
    bad.add = {0, 1, 1, 0};
    bad.mul = {0, 0, 0, 0};
    bad.one = 1;  // 1*1 = 0, so not an identity
    EXPECT_THROW(FiniteRing::make(bad), InvalidInput);
    bad.one.reset();
    bad.add = {0, 1, 1, 1};  // 1 + 1 = 1 breaks inverses
    EXPECT_THROW(FiniteRing::make(bad), InvalidInput);
}

TEST(RingTest, ExplicitTableAccepted) {
    RingSpec s;
    s.kind = RingSpec::Kind::table;
    s.size = 2;
    s.add = {0, 1, 1, 0};
    s.mul = {0, 0, 0, 0};  // zero multiplication, non-unital
    auto R = FiniteRing::make(s);
    EXPECT_FALSE(R->is_unital());
    EXPECT_EQ(R->characteristic(), 2u);
}

// ============================================================
// Spec text round trip
// ============================================================

TEST(RingSpecTest, InlineRoundTrip) {
    for (const char* s : {"zmod(4)", "gf(3)", "matrix(gf(2),2)", "upper(zmod(2),3)", "product(gf(2),gf(3))",
                          "ideal(zmod(4),[2])"}) {
        auto spec = RingSpec::parse(s);
        EXPECT_EQ(spec.to_string(), s);
        EXPECT_EQ(RingSpec::parse(spec.to_string()), spec);
    }
}

TEST(RingSpecTest, ShorthandNames) {
    EXPECT_EQ(RingSpec::parse("zmod4"), RingSpec::zmod(4));
    EXPECT_EQ(RingSpec::parse("gf2"), RingSpec::gf(2));
}

TEST(RingSpecTest, KeyValueRoundTrip) {
    RingSpec t;
    t.kind = RingSpec::Kind::table;
    t.size = 2;
    t.add = {0, 1, 1, 0};
    t.mul = {0, 0, 0, 1};
    t.one = 1;
    for (const auto& spec : {RingSpec::zmod(9), RingSpec::matrix(RingSpec::gf(3), 2),
                             RingSpec::product(RingSpec::gf(2), RingSpec::zmod(4)),
                             RingSpec::ideal(RingSpec::zmod(8), {2}), t}) {
        EXPECT_EQ(RingSpec::parse(spec.to_keyvalue()), spec) << spec.to_keyvalue();
        EXPECT_EQ(RingSpec::parse(spec.to_string()), spec) << spec.to_string();
    }
}

TEST(RingSpecTest, KeyValueComments) {
    auto s = RingSpec::parse("# a ring\nkind = zmod\nparams = 6\n");
    EXPECT_EQ(s, RingSpec::zmod(6));
    EXPECT_THROW(RingSpec::parse("kind = zmod\n"), InvalidInput);
    EXPECT_THROW(RingSpec::parse("kind = banana\nparams = 2\n"), InvalidInput);
}

// ============================================================
// Ideals
// ============================================================

TEST(IdealTest, TwoZmodFour) {
    auto R = FiniteRing::zmod(4);
    auto I = ideal_closure(R, {2});
    EXPECT_EQ(I.members, (std::vector<Elem>{0, 2}));
    EXPECT_TRUE(I.is_ideal());
    EXPECT_FALSE(I.view->is_unital());
    EXPECT_EQ(I.view->size(), 2u);
    EXPECT_EQ(I.view->mul(1, 1), 0u);
}

TEST(IdealTest, UnitGeneratesEverything) {
    auto R = FiniteRing::zmod(2);
    auto I = ideal_closure(R, {1});
    EXPECT_EQ(I.members.size(), 2u);
    EXPECT_TRUE(I.view->is_unital());
}

TEST(IdealTest, StrictUpperCorner) {
    auto R = FiniteRing::make(RingSpec::upper(RingSpec::gf(2), 2));
    // upper positions (0,0),(0,1),(1,1) are bits 0,1,2, so e12 has id 2
    auto I = ideal_closure(R, {2});
    EXPECT_EQ(I.members, (std::vector<Elem>{0, 2}));
    // brute-force oracle: smallest set containing e12 closed under r*x*t and +
    std::set<Elem> oracle{0, 2};
    for (bool grew = true; grew;) {
        grew = false;
        std::set<Elem> cur = oracle;
        for (Elem x : cur)
            for (Elem r = 0; r < R->size(); ++r) {
                grew |= oracle.insert(R->mul(r, x)).second;
                grew |= oracle.insert(R->mul(x, r)).second;
                for (Elem y : cur) grew |= oracle.insert(R->add(x, y)).second;
            }
    }
    EXPECT_EQ(std::vector<Elem>(oracle.begin(), oracle.end()), I.members);
}

TEST(IdealTest, ClosureIsIdempotent) {
    for (const char* s : {"zmod(8)", "matrix(gf(2),2)", "upper(zmod(2),2)", "product(zmod(4),gf(3))"}) {
        auto R = FiniteRing::make(RingSpec::parse(s));
        for (Elem g = 0; g < R->size(); g += 3) {
            auto I = ideal_closure(R, {g});
            EXPECT_TRUE(I.is_ideal()) << s;
            auto J = ideal_closure(R, I.members);
            EXPECT_EQ(I.members, J.members) << s;
        }
    }
}

TEST(IdealTest, SpecBuildsView) {
    auto R = FiniteRing::make(RingSpec::parse("ideal(zmod(4),[2])"));
    EXPECT_EQ(R->size(), 2u);
    EXPECT_FALSE(R->is_unital());
}

// ============================================================
// Homomorphisms
// ============================================================

TEST(RingHomTest, Reduction) {
    auto Z4 = FiniteRing::zmod(4), Z2 = FiniteRing::zmod(2);
    auto f = RingHom::reduction(Z4, Z2);
    EXPECT_EQ(f(2), 0u);
    EXPECT_EQ(f(3), 1u);
    EXPECT_TRUE(f.unital());
    EXPECT_THROW(RingHom::reduction(Z4, FiniteRing::zmod(3)), InvalidInput);
}

TEST(RingHomTest, CornerEmbeddingIsNotUnital) {
    auto F2 = FiniteRing::gf(2);
    auto M2 = FiniteRing::make(RingSpec::matrix(RingSpec::gf(2), 2));
    auto f = RingHom::corner_embedding(F2, M2);
    EXPECT_EQ(f(1), 1u);  // e11
    EXPECT_FALSE(f.unital());
    auto g = RingHom::compose(f, RingHom::reduction(FiniteRing::zmod(4), F2));
    EXPECT_EQ(g(3), 1u);
    EXPECT_EQ(g(2), 0u);
}

TEST(RingHomTest, RejectsNonHom) {
    auto Z4 = FiniteRing::zmod(4), Z2 = FiniteRing::zmod(2);
    EXPECT_THROW(RingHom(Z2, Z4, {0, 1}), InvalidInput);  // 1+1 = 0 but 1+1 = 2 in Z/4
}

// ============================================================
// Weak s-unitality
// ============================================================

TEST(SUnitalTest, UnitalRingsPass) {
    for (const char* s : {"zmod(4)", "gf(2)", "upper(gf(2),2)"}) {
        auto R = FiniteRing::make(RingSpec::parse(s));
        auto rep = check_weakly_s_unital(*R, 2);
        ASSERT_EQ(rep.size(), 2u);
        for (auto& r : rep) EXPECT_EQ(r.verdict, Truth::yes) << s;
    }
}

TEST(SUnitalTest, TwoZmodFourFails) {
    auto I = ideal_closure(FiniteRing::zmod(4), {2});
    auto rep = check_weakly_s_unital(*I.view, 1);
    ASSERT_EQ(rep.size(), 1u);
    EXPECT_EQ(rep[0].verdict, Truth::no);
    EXPECT_EQ(rep[0].cert, Cert::exact);
    ASSERT_TRUE(rep[0].counterexample);
    EXPECT_EQ(I.to_ambient((*rep[0].counterexample)(0, 0)), 2u);
}

TEST(SUnitalTest, NonUnitalIdealWithLocalUnits) {
    // F2 x 0 inside F2 x F2 has its own unit (1,0) acting on it
    auto R = FiniteRing::make(RingSpec::parse("product(gf(2),gf(2))"));
    auto I = ideal_closure(R, {1});
    auto rep = check_weakly_s_unital(*I.view, 2);
    for (auto& r : rep) EXPECT_EQ(r.verdict, Truth::yes);
}
