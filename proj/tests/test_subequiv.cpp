#include <gtest/gtest.h>

#include "cuntz/subequiv.hpp"

#include <random>

using namespace cuntz;

namespace {

Mat M(const RingPtr& R, const char* lit) { return Mat::parse(*R, lit); }

// Oracle: literally try every r and t.
bool brute_sub1(const Mat& a, const Mat& b) {
    const FiniteRing& R = a.ring();
    bool found = false;
    for_each_matrix(R, a.rows(), b.rows(), [&](const Mat& r) {
        Mat rb = r * b;
        for_each_matrix(R, b.cols(), a.cols(), [&](const Mat& t) {
            if (rb * t == a) found = true;
            return !found;
        });
        return !found;
    });
    return found;
}

std::vector<Mat> all_small(const FiniteRing& R, std::size_t cap) {
    std::vector<Mat> out;
    for (std::size_t r = 1; r <= cap; ++r)
        for (std::size_t c = 1; c <= cap; ++c)
            for_each_matrix(R, r, c, [&](const Mat& m) {
                out.push_back(m);
                return true;
            });
    return out;
}

Sub1Options generic_only() {
    Sub1Options o;
    o.fast_path = false;
    return o;
}

}  // namespace

// ============================================================
// a <=1 b
// ============================================================

TEST(Sub1Test, CornerOverF2) {
    auto F2 = FiniteRing::gf(2);
    auto r = precsim1(M(F2, "[[1]]"), M(F2, "[[1,0],[0,0]]"));
    ASSERT_EQ(r.verdict, Truth::yes);
    EXPECT_EQ(r.witness->r, M(F2, "[[1,0]]"));
    EXPECT_EQ(r.witness->t, M(F2, "[[1],[0]]"));
}

TEST(Sub1Test, OneNotBelowTwoInZ4) {
    auto R = FiniteRing::zmod(4);
    EXPECT_EQ(precsim1(M(R, "[[1]]"), M(R, "[[2]]")).verdict, Truth::no);
    EXPECT_FALSE(brute_sub1(M(R, "[[1]]"), M(R, "[[2]]")));
}

TEST(Sub1Test, TwoBelowOneInZ4) {
    auto R = FiniteRing::zmod(4);
    auto r = precsim1(M(R, "[[2]]"), M(R, "[[1]]"));
    ASSERT_EQ(r.verdict, Truth::yes);
    EXPECT_EQ(r.witness->r * M(R, "[[1]]") * r.witness->t, M(R, "[[2]]"));
}

TEST(Sub1Test, GenericAgreesWithBruteForceZ4) {
    auto R = FiniteRing::zmod(4);
    auto all = all_small(*R, 2);
    std::mt19937 rng(7);
    std::uniform_int_distribution<std::size_t> pick(0, all.size() - 1);
    for (int k = 0; k < 400; ++k) {
        const Mat& a = all[pick(rng)];
        const Mat& b = all[pick(rng)];
        if (a.rows() * b.rows() + a.cols() * b.cols() > 6) continue;  // keep the oracle cheap
        bool expect = brute_sub1(a, b);
        auto res = precsim1(a, b, generic_only());
        ASSERT_NE(res.verdict, Truth::unknown);
        EXPECT_EQ(res.verdict == Truth::yes, expect) << a.str() << " vs " << b.str();
        auto fast = precsim1(a, b);
        EXPECT_EQ(fast.verdict == Truth::yes, expect) << a.str() << " vs " << b.str();
    }
}

TEST(Sub1Test, ValuationPathAgreesWithGenericZ8) {
    auto R = FiniteRing::zmod(8);
    std::mt19937 rng(11);
    for (int k = 0; k < 300; ++k) {
        std::uniform_int_distribution<std::size_t> dim(1, 2);
        Mat a = matrix_from_index(*R, dim(rng), dim(rng), 0);
        Mat b = matrix_from_index(*R, dim(rng), dim(rng), 0);
        std::uniform_int_distribution<Elem> e(0, 7);
        for (std::size_t i = 0; i < a.rows(); ++i)
            for (std::size_t j = 0; j < a.cols(); ++j) a.at(i, j) = e(rng) & (k % 3 ? 6 : 7);
        for (std::size_t i = 0; i < b.rows(); ++i)
            for (std::size_t j = 0; j < b.cols(); ++j) b.at(i, j) = e(rng) & (k % 2 ? 6 : 7);
        auto fast = precsim1(a, b);
        auto slow = precsim1(a, b, generic_only());
        if (!a.is_zero() && !b.is_zero()) ASSERT_TRUE(fast.used_fast_path);
        ASSERT_NE(slow.verdict, Truth::unknown);
        ASSERT_EQ(fast.verdict, slow.verdict) << a.str() << " vs " << b.str();
    }
}

TEST(Sub1Test, GenericAgreesWithBruteForceUpperTriangular) {
    auto R = FiniteRing::make(RingSpec::upper(RingSpec::gf(2), 2));
    auto all = all_small(*R, 1);
    for_each_matrix(*R, 1, 2, [&](const Mat& m) { all.push_back(m); return true; });
    for (auto& a : all)
        for (auto& b : all) {
            auto res = precsim1(a, b);
            ASSERT_NE(res.verdict, Truth::unknown);
            EXPECT_EQ(res.verdict == Truth::yes, brute_sub1(a, b)) << a.str() << " vs " << b.str();
        }
}

TEST(Sub1Test, NonUnitalIdealUsesGenericPath) {
    auto I = ideal_closure(FiniteRing::zmod(8), {2});
    const FiniteRing& R = *I.view;  // {0,2,4,6} relabelled 0..3
    auto all = all_small(R, 2);
    for (std::size_t i = 0; i < all.size(); i += 7)
        for (std::size_t j = 0; j < all.size(); j += 5) {
            const Mat& a = all[i];
            const Mat& b = all[j];
            if (a.rows() * b.rows() + a.cols() * b.cols() > 6) continue;
            EXPECT_EQ(precsim1(a, b).verdict == Truth::yes, brute_sub1(a, b));
        }
}

TEST(Sub1Test, FastPathAgreesWithGenericOverF3) {
    auto F3 = FiniteRing::gf(3);
    auto all = all_small(*F3, 2);
    for (auto& a : all)
        for (auto& b : all) {
            auto fast = precsim1(a, b);
            auto slow = precsim1(a, b, generic_only());
            if (!a.is_zero() && !b.is_zero()) ASSERT_TRUE(fast.used_fast_path);
            ASSERT_NE(slow.verdict, Truth::unknown);
            ASSERT_EQ(fast.verdict, slow.verdict) << a.str() << " vs " << b.str();
        }
}

TEST(Sub1Test, TransitiveOnSample) {
    auto R = FiniteRing::zmod(4);
    auto all = all_small(*R, 1);
    for_each_matrix(*R, 1, 2, [&](const Mat& m) { all.push_back(m); return true; });
    for_each_matrix(*R, 2, 1, [&](const Mat& m) { all.push_back(m); return true; });
    for (auto& a : all)
        for (auto& b : all) {
            if (precsim1(a, b).verdict != Truth::yes) continue;
            for (auto& c : all)
                if (precsim1(b, c).verdict == Truth::yes) EXPECT_EQ(precsim1(a, c).verdict, Truth::yes);
        }
}

TEST(Sub1Test, BudgetGivesUnknown) {
    auto R = FiniteRing::zmod(4);
    Sub1Options o;
    o.budget = 3;
    o.reduce = false;
    o.fast_path = false;
    auto res = precsim1(M(R, "[[1,0],[0,2]]"), M(R, "[[1,2],[2,2]]"), o);
    EXPECT_EQ(res.verdict, Truth::unknown);
}

TEST(Sub1Test, LargeTargetThroughReduction) {
    auto R = FiniteRing::zmod(4);
    Mat b(*R, 8, 8);
    b.at(0, 0) = 1;
    b.at(3, 5) = 2;
    b.at(7, 7) = 1;
    b.at(4, 0) = 3;  // multiple of row 0
    auto res = precsim1(M(R, "[[1,0],[0,1]]"), b);
    ASSERT_EQ(res.verdict, Truth::yes);
    EXPECT_EQ(precsim1(M(R, "[[1,0,0],[0,1,0],[0,0,1]]"), b).verdict, Truth::no);
    EXPECT_EQ(precsim1(M(R, "[[1,0,0],[0,1,0],[0,0,2]]"), b).verdict, Truth::yes);
}

// ============================================================
// Malcolmson closure
// ============================================================

TEST(MalcolmsonTest, TriangularStep) {
    auto F2 = FiniteRing::gf(2);
    MalcolmsonOptions o;
    o.depth = 1;
    auto r = precsimM(M(F2, "[[1,0],[0,1]]"), M(F2, "[[1,1],[0,1]]"), o);
    EXPECT_EQ(r.verdict, Truth::yes);
}

TEST(MalcolmsonTest, Reflexive) {
    auto F2 = FiniteRing::gf(2);
    MalcolmsonOptions o;
    o.depth = 1;
    EXPECT_EQ(precsimM(M(F2, "[[1]]"), M(F2, "[[1]]"), o).verdict, Truth::yes);
}

TEST(MalcolmsonTest, NothingBelowZero) {
    auto R = FiniteRing::zmod(4);
    MalcolmsonOptions o;
    for (std::size_t d : {1u, 3u}) {
        o.depth = d;
        auto r = precsimM(M(R, "[[1]]"), M(R, "[[0]]"), o);
        EXPECT_EQ(r.verdict, Truth::no);
        EXPECT_EQ(r.cert, Cert::exact);
    }
}

TEST(MalcolmsonTest, ContainsSub1) {
    auto R = FiniteRing::zmod(4);
    MalcolmsonGraph g(*R, 2);
    MalcolmsonOptions o;
    const auto& nodes = g.nodes();
    for (std::size_t i = 0; i < nodes.size(); i += 11)
        for (std::size_t j = 0; j < nodes.size(); j += 13)
            if (precsim1(nodes[i], nodes[j]).verdict == Truth::yes)
                EXPECT_EQ(g.search(nodes[i], nodes[j], 1).verdict, Truth::yes);
}

TEST(MalcolmsonTest, ChainIsValid) {
    auto R = FiniteRing::zmod(4);
    MalcolmsonOptions o;
    o.depth = 3;
    auto r = precsimM(M(R, "[[2,0],[0,1]]"), M(R, "[[2,1],[0,1]]"), o);
    ASSERT_EQ(r.verdict, Truth::yes);
    EXPECT_EQ(r.chain.front(), trim(M(R, "[[2,0],[0,1]]")));
    EXPECT_EQ(r.chain.back(), trim(M(R, "[[2,1],[0,1]]")));
}

// ============================================================
// Constructive witnesses
// ============================================================

TEST(ComplementTest, OneInsideIdentity) {
    auto F2 = FiniteRing::gf(2);
    auto c = complement(M(F2, "[[1]]"), Mat::identity(*F2, 2), Sub1Witness{M(F2, "[[1,0]]"), M(F2, "[[1],[0]]")});
    ASSERT_EQ(c.verdict, Truth::yes);
    EXPECT_EQ(c.f, M(F2, "[[1,0],[0,0]]"));
    EXPECT_EQ(c.w, M(F2, "[[0,0],[0,1]]"));
}

TEST(ComplementTest, EqualIdempotent) {
    auto F2 = FiniteRing::gf(2);
    Mat e = M(F2, "[[1,1],[0,0]]");
    auto c = complement(e, e, Sub1Witness{e, e});
    ASSERT_EQ(c.verdict, Truth::yes);
    EXPECT_EQ(c.f, e);
    EXPECT_TRUE(c.w.is_zero());
}

TEST(ComplementTest, ZeroIdempotent) {
    auto R = FiniteRing::zmod(4);
    Mat v = M(R, "[[2,1],[0,3]]");
    auto c = complement(M(R, "[[0]]"), v);
    ASSERT_EQ(c.verdict, Truth::yes);
    EXPECT_TRUE(c.f.is_zero());
    EXPECT_EQ(c.w, v);
}

TEST(ComplementTest, RejectsWhenNotBelow) {
    auto R = FiniteRing::zmod(4);
    auto c = complement(M(R, "[[1]]"), M(R, "[[2]]"));
    EXPECT_EQ(c.verdict, Truth::no);
}

TEST(RegularTest, RankOneOverF2) {
    auto F2 = FiniteRing::gf(2);
    Mat a = M(F2, "[[1,1],[0,0]]");
    auto r = regular_idempotent(a);
    ASSERT_EQ(r.verdict, Truth::yes);
    EXPECT_EQ(r.e, M(F2, "[[1,0],[0,0]]"));
    EXPECT_EQ(a * r.x * a, a);
}

TEST(RegularTest, Unit) {
    auto R = FiniteRing::zmod(4);
    auto r = regular_idempotent(M(R, "[[1]]"));
    ASSERT_EQ(r.verdict, Truth::yes);
    EXPECT_EQ(r.e, M(R, "[[1]]"));
    EXPECT_EQ(r.x, M(R, "[[1]]"));
}

TEST(RegularTest, TwoInZ4IsNotRegular) {
    auto R = FiniteRing::zmod(4);
    EXPECT_EQ(regular_idempotent(M(R, "[[2]]")).verdict, Truth::no);
}

TEST(TriangularTest, IdentityOverZ4) {
    auto R = FiniteRing::zmod(4);
    Mat a = M(R, "[[1,2],[0,0]]");
    auto reg = regular_idempotent(a);
    ASSERT_EQ(reg.verdict, Truth::yes);
    Mat b = M(R, "[[2]]"), c = M(R, "[[3],[1]]");
    auto w = triangular_factors(a, reg.x, b, c);
    EXPECT_EQ(w.r * upper_block(a, b, c) * w.t, diag_sum(a, b));
}
