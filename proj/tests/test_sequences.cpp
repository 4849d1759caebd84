#include <gtest/gtest.h>

#include "cuntz/cu_lattice.hpp"
#include "cuntz/sequences.hpp"

#include <random>

using namespace cuntz;

namespace {

Mat M(const RingPtr& R, const char* s) { return Mat::parse(*R, s); }

SeqElem two_stage(const Mat& x1, const Mat& x2, const Mat& y, Tail tail, std::optional<Mat> tw = std::nullopt) {
    SeqElem s;
    s.ring = x1.ring_ptr();
    s.x = {x1, x2};
    s.y = {y};
    s.tail = tail;
    s.tail_witness = std::move(tw);
    return s;
}

SeqElem open_one(const Mat& x) {
    SeqElem s;
    s.ring = x.ring_ptr();
    s.x = {x};
    s.tail = Tail::open;
    return s;
}

bool stagewise_equal(const SeqElem& a, const SeqElem& b) {
    return a.x == b.x && a.y == b.y && a.tail == b.tail && a.tail_witness == b.tail_witness;
}

}  // namespace

// ============================================================
// validation
// ============================================================

TEST(SeqValidateTest, ConstantIdempotent) {
    auto F2 = FiniteRing::gf(2);
    Mat e = M(F2, "[[1,0],[0,0]]");
    EXPECT_TRUE(validate_seq(SeqElem::constant(e, e)).valid());
}

TEST(SeqValidateTest, NilpotentConstantIsInvalid) {
    auto F2 = FiniteRing::gf(2);
    Mat n = M(F2, "[[0,1],[0,0]]");
    EXPECT_FALSE(validate_seq(SeqElem::constant(n, Mat::identity(*F2, 2))).valid());
}

TEST(SeqValidateTest, WitnessMattersOverZ4) {
    auto R = FiniteRing::zmod(4);
    Mat x1 = M(R, "[[2]]"), x2 = M(R, "[[1]]");
    EXPECT_FALSE(validate_seq(two_stage(x1, x2, M(R, "[[2]]"), Tail::open)).valid());
    EXPECT_TRUE(validate_seq(two_stage(x1, x2, M(R, "[[1]]"), Tail::open)).valid());
    EXPECT_TRUE(validate_seq(two_stage(x1, x2, M(R, "[[1]]"), Tail::stabilized, M(R, "[[1]]"))).valid());
}

TEST(SeqValidateTest, ShapeErrors) {
    auto F2 = FiniteRing::gf(2);
    auto s = two_stage(M(F2, "[[1]]"), M(F2, "[[1]]"), M(F2, "[[1,0]]"), Tail::open);
    EXPECT_FALSE(validate_seq(s).valid());
    SeqElem t;
    t.ring = F2.get();
    EXPECT_FALSE(validate_seq(t).valid());
    auto u = SeqElem::constant(M(F2, "[[1,1]]"), M(F2, "[[1]]"));
    EXPECT_FALSE(validate_seq(u).valid());
}

TEST(SeqValidateTest, ConstantTwoOverZ4IsNotValid) {
    auto R = FiniteRing::zmod(4);
    // y * 2 * 2 = 0 for every y
    for (Elem y = 0; y < 4; ++y) EXPECT_FALSE(validate_seq(SeqElem::constant(M(R, "[[2]]"), Mat::scalar(*R, y))).valid());
    EXPECT_TRUE(validate_seq(open_one(M(R, "[[2]]"))).valid());
}

// ============================================================
// order and sum
// ============================================================

TEST(SeqLeqTest, Examples) {
    auto F2 = FiniteRing::gf(2);
    auto one = SeqElem::constant(M(F2, "[[1]]"), M(F2, "[[1]]"));
    auto two = SeqElem::constant(Mat::identity(*F2, 2), Mat::identity(*F2, 2));
    auto r = seq_leq(one, two);
    EXPECT_EQ(r.verdict, Truth::yes);
    EXPECT_EQ(r.cert, Cert::exact);
    ASSERT_EQ(r.witnesses.size(), 1u);
    EXPECT_EQ(r.witnesses[0].r * two.x.back() * r.witnesses[0].t, one.x[0]);
    EXPECT_EQ(seq_leq(two, one).verdict, Truth::no);
    EXPECT_EQ(seq_leq(two, two).verdict, Truth::yes);
    EXPECT_EQ(seq_equivalent(one, one), Truth::yes);
}

TEST(SeqLeqTest, OpenTailIsStageRelative) {
    auto R = FiniteRing::zmod(4);
    auto a = open_one(M(R, "[[2]]"));
    auto b = SeqElem::constant(M(R, "[[1]]"), M(R, "[[1]]"));
    auto r = seq_leq(a, b);
    EXPECT_EQ(r.verdict, Truth::yes);
    EXPECT_EQ(r.cert, Cert::stage_relative);
    EXPECT_EQ(seq_leq(b, a).verdict, Truth::no);
}

TEST(SeqSumTest, ConstantsAdd) {
    auto F2 = FiniteRing::gf(2);
    auto one = SeqElem::constant(M(F2, "[[1]]"), M(F2, "[[1]]"));
    auto two = SeqElem::constant(Mat::identity(*F2, 2), Mat::identity(*F2, 2));
    auto s = seq_sum(one, two);
    EXPECT_TRUE(validate_seq(s).valid());
    EXPECT_EQ(s.tail, Tail::stabilized);
    EXPECT_EQ(s.x.back(), Mat::identity(*F2, 3));
}

TEST(SeqSumTest, StabilizedPadsAndOpenTruncates) {
    auto R = FiniteRing::zmod(4);
    auto a = two_stage(M(R, "[[2]]"), M(R, "[[1]]"), M(R, "[[1]]"), Tail::open);
    auto b = SeqElem::constant(M(R, "[[1]]"), M(R, "[[1]]"));
    auto s = seq_sum(a, b);
    EXPECT_EQ(s.length(), 2u);
    EXPECT_EQ(s.tail, Tail::open);
    EXPECT_EQ(s.x[0], M(R, "[[2,0],[0,1]]"));
    auto c = open_one(M(R, "[[2]]"));
    auto t = seq_sum(a, c);
    EXPECT_EQ(t.length(), 1u);
    EXPECT_TRUE(validate_seq(t).valid());
}

TEST(SeqSumTest, OrderIsCompatibleWithSum) {
    auto R = FiniteRing::zmod(4);
    std::mt19937_64 rng(5);
    for (int k = 0; k < 60; ++k) {
        auto a = random_seq(*R, rng, 2, 2, Tail::stabilized);
        auto b = random_seq(*R, rng, 2, 2, Tail::stabilized);
        auto c = random_seq(*R, rng, 1, 2, Tail::stabilized);
        EXPECT_EQ(seq_leq(a, seq_sum(a, b)).verdict, Truth::yes);
        if (seq_leq(a, b).verdict == Truth::yes)
            EXPECT_EQ(seq_leq(seq_sum(a, c), seq_sum(b, c)).verdict, Truth::yes);
        EXPECT_EQ(seq_equivalent(seq_sum(a, b), seq_sum(b, a)), Truth::yes);
    }
}

// ============================================================
// suprema
// ============================================================

TEST(SeqSupTest, SingleConstant) {
    auto F2 = FiniteRing::gf(2);
    Mat e = M(F2, "[[1,0],[0,0]]");
    auto s = SeqElem::constant(e, e);
    auto sup = seq_sup({s});
    EXPECT_TRUE(validate_seq(sup.sup).valid());
    EXPECT_EQ(seq_equivalent(sup.sup, s), Truth::yes);
}

TEST(SeqSupTest, GrowingIdentities) {
    auto F2 = FiniteRing::gf(2);
    std::vector<SeqElem> chain;
    for (std::size_t k = 1; k <= 3; ++k) {
        Mat I = Mat::identity(*F2, k);
        chain.push_back(SeqElem::constant(I, I));
    }
    auto sup = seq_sup(chain);
    EXPECT_TRUE(validate_seq(sup.sup).valid());
    // u_n = I_n b_n with b_n from I_{n-1} = a I_n b_n, so ranks lag one stage: 1, 1, 2, then I_3
    ASSERT_EQ(sup.sup.length(), 4u);
    const std::size_t ranks[] = {1, 1, 2, 3};
    for (std::size_t n = 0; n < 4; ++n) EXPECT_EQ(field_decompose(sup.sup.x[n]).rank, ranks[n]);
    EXPECT_EQ(sup.sup.x[3], Mat::identity(*F2, 3));
    EXPECT_EQ(sup.sup.tail, Tail::stabilized);
    EXPECT_EQ(seq_equivalent(sup.sup, chain.back()), Truth::yes);
    EXPECT_EQ(sup.alignment.size(), 2u);
}

TEST(SeqSupTest, RejectsMisalignedChain) {
    auto F2 = FiniteRing::gf(2);
    auto big = SeqElem::constant(Mat::identity(*F2, 2), Mat::identity(*F2, 2));
    auto small = SeqElem::constant(M(F2, "[[1]]"), M(F2, "[[1]]"));
    EXPECT_THROW(seq_sup({big, small}), InvalidInput);
}

namespace {

// Chains s <= s+t (<= s+t+u) compared against the least upper bound of their W classes.
void check_random_chains(const RingPtr& R, std::size_t kmax, std::size_t count, std::uint64_t seed) {
    auto W = build_W(*R, kmax);
    std::mt19937_64 rng(seed);
    std::size_t done = 0;
    for (std::size_t k = 0; k < count; ++k) {
        std::uniform_int_distribution<std::size_t> st(1, 3), len(2, 3);
        auto s = random_seq(*R, rng, st(rng), 1, Tail::stabilized);
        std::vector<SeqElem> chain{s};
        const std::size_t K = len(rng);
        while (chain.size() < K) chain.push_back(seq_sum(chain.back(), random_seq(*R, rng, st(rng), 1, Tail::stabilized)));
        auto sup = seq_sup(chain);
        ASSERT_TRUE(validate_seq(sup.sup).valid());
        std::vector<std::size_t> classes;
        for (const auto& c : chain) {
            auto cls = interval_image(W, c);
            ASSERT_TRUE(cls.has_value());
            classes.push_back(*cls);
        }
        auto lub = brute_lub(W.pom, classes);
        ASSERT_TRUE(lub.has_value());
        ASSERT_EQ(sup.sup.tail, Tail::stabilized);
        EXPECT_EQ(interval_image(W, sup.sup), lub) << chain.back().str();
        EXPECT_EQ(seq_equivalent(sup.sup, chain.back()), Truth::yes);
        ++done;
    }
    EXPECT_EQ(done, count);
}

}  // namespace

TEST(SeqSupTest, RandomChainsOverF2) { check_random_chains(FiniteRing::gf(2), 3, 60, 21); }

TEST(SeqSupTest, RandomChainsOverZ4) { check_random_chains(FiniteRing::zmod(4), 3, 60, 22); }

// ============================================================
// compactness
// ============================================================

TEST(CompactTest, ConstantIdempotent) {
    auto F2 = FiniteRing::gf(2);
    Mat e = M(F2, "[[1,1],[0,0]]");
    auto r = is_compact_seq(SeqElem::constant(e, e));
    ASSERT_EQ(r.verdict, Truth::yes);
    EXPECT_EQ(*r.z, e);
    EXPECT_EQ(*r.s, e);
    EXPECT_EQ(r.cert, Cert::exact);
}

TEST(CompactTest, ZeroSequence) {
    auto R = FiniteRing::zmod(4);
    auto r = is_compact_seq(SeqElem::zero(*R, 2));
    ASSERT_EQ(r.verdict, Truth::yes);
    EXPECT_TRUE(r.z->is_zero());
}

TEST(CompactTest, RandomStabilizedSequences) {
    for (auto R : {FiniteRing::gf(2), FiniteRing::zmod(4)}) {
        std::mt19937_64 rng(9);
        for (int k = 0; k < 50; ++k) {
            auto s = random_seq(*R, rng, 3, 2, Tail::stabilized);
            auto r = is_compact_seq(s);
            ASSERT_EQ(r.verdict, Truth::yes) << s.str();
            EXPECT_EQ(*r.s * *r.z * *r.z, *r.z);
            EXPECT_EQ(seq_equivalent(s, SeqElem::constant(*r.z, *r.s)), Truth::yes) << s.str();
        }
    }
}

TEST(CompactTest, TwoOverZ4HasNoCompactForm) {
    auto R = FiniteRing::zmod(4);
    auto r = compact_witness_search(M(R, "[[2]]"), 2);
    EXPECT_EQ(r.verdict, Truth::no);
    auto one = compact_witness_search(M(R, "[[1]]"), 1);
    ASSERT_EQ(one.verdict, Truth::yes);
    EXPECT_EQ(*one.s * *one.z * *one.z, *one.z);
}

TEST(CompactTest, OpenSingleStageIsUndecided) {
    auto R = FiniteRing::zmod(4);
    auto r = is_compact_seq(open_one(M(R, "[[2]]")));
    EXPECT_EQ(r.verdict, Truth::unknown);
}

// ============================================================
// column-finite idempotents
// ============================================================

TEST(SeqIdemTest, ConstantIdentityGivesCorners) {
    auto F2 = FiniteRing::gf(2);
    auto s = SeqElem::constant(M(F2, "[[1]]"), M(F2, "[[1]]"));
    auto c = seq_to_idem(s, 2);
    ASSERT_TRUE(c.E.has_value());
    EXPECT_FALSE(c.corner_violation().has_value());
    // column block 2 of E: y_2 x_2 = 1 in row block 2, x_2 - x_2 y_2 x_2 = 0 below
    EXPECT_EQ((*c.E)(0, 0), 1u);
    EXPECT_EQ((*c.E)(1, 0), 0u);
}

TEST(SeqIdemTest, FiniteIdempotent) {
    auto F2 = FiniteRing::gf(2);
    Mat e = M(F2, "[[1,1],[0,0]]");
    auto s = idem_to_seq(e);
    EXPECT_TRUE(validate_seq(s).valid());
    EXPECT_EQ(s.x.back(), e);
    EXPECT_TRUE(validate_seq(idem_to_seq(Mat(*F2, 2, 2))).valid());
    EXPECT_THROW(idem_to_seq(M(F2, "[[0,1],[0,0]]")), InvalidInput);
}

namespace {

void check_round_trips(const RingPtr& R, std::size_t count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    for (std::size_t k = 0; k < count; ++k) {
        std::uniform_int_distribution<std::size_t> st(2, 3);
        Tail tail = k % 2 ? Tail::open : Tail::stabilized;
        auto s = random_seq(*R, rng, st(rng), 3, tail);
        auto c = seq_to_idem(s);
        ASSERT_FALSE(c.corner_violation().has_value()) << s.str();
        auto back = idem_to_seq(c);
        ASSERT_TRUE(validate_seq(back).valid());
        // the stored stages of back are corners of E; compare on a common prefix
        SeqElem s_cut = s.extended(back.length() + 1);
        EXPECT_EQ(seq_leq(back, s_cut).verdict, Truth::yes) << s.str();
        EXPECT_EQ(seq_leq(s_cut, back).verdict, Truth::yes) << s.str();
        auto split = splitting_check(s);
        EXPECT_TRUE(split.ok) << split.failure << " " << s.str();
        // stages j with a stage j+1 above them, counted from 2
        if (tail == Tail::stabilized || s.length() >= 3) EXPECT_GT(split.generators, 0u);
    }
}

}  // namespace

TEST(SeqIdemTest, RoundTripF2) { check_round_trips(FiniteRing::gf(2), 60, 31); }

TEST(SeqIdemTest, RoundTripZ4) { check_round_trips(FiniteRing::zmod(4), 60, 32); }

TEST(SeqIdemTest, SplittingNonUnitalIdeal) {
    auto I = ideal_closure(FiniteRing::zmod(8), {2});
    const FiniteRing& R = *I.view;
    std::mt19937_64 rng(4);
    for (int k = 0; k < 20; ++k) {
        auto s = random_seq(R, rng, 3, 2, Tail::open);
        auto rep = splitting_check(s);
        EXPECT_TRUE(rep.ok) << rep.failure;
    }
}

// ============================================================
// functoriality
// ============================================================

TEST(InduceTest, ReductionZ4ToF2) {
    auto Z4 = FiniteRing::zmod(4), F2 = FiniteRing::gf(2);
    auto f = RingHom::reduction(Z4, F2);
    auto one = SeqElem::constant(M(Z4, "[[1]]"), M(Z4, "[[1]]"));
    auto img = induce_morphism(f, one);
    EXPECT_EQ(img.x.back(), M(F2, "[[1]]"));
    auto two = open_one(M(Z4, "[[2]]"));
    EXPECT_TRUE(induce_morphism(f, two).x.back().is_zero());
}

TEST(InduceTest, CornerEmbeddingGivesE11) {
    auto F2 = FiniteRing::gf(2);
    auto M2 = FiniteRing::make(RingSpec::matrix(RingSpec::gf(2), 2));
    auto f = RingHom::corner_embedding(F2, M2);
    auto img = induce_morphism(f, SeqElem::constant(M(F2, "[[1]]"), M(F2, "[[1]]")));
    ASSERT_TRUE(validate_seq(img).valid());
    Elem e11 = img.x.back()(0, 0);
    EXPECT_EQ(M2->mul(e11, e11), e11);
    EXPECT_NE(M2->one(), std::optional<Elem>(e11));
    EXPECT_NE(e11, 0u);
}

TEST(InduceTest, PreservesOrderSumAndComposition) {
    auto Z8 = FiniteRing::zmod(8), Z4 = FiniteRing::zmod(4), F2 = FiniteRing::gf(2);
    auto f = RingHom::reduction(Z8, Z4), g = RingHom::reduction(Z4, F2);
    auto gf = RingHom::compose(g, f);
    std::mt19937_64 rng(17);
    for (int k = 0; k < 40; ++k) {
        auto a = random_seq(*Z8, rng, 2, 2, Tail::stabilized);
        auto b = random_seq(*Z8, rng, 2, 2, Tail::stabilized);
        EXPECT_TRUE(stagewise_equal(induce_morphism(f, seq_sum(a, b)),
                                    seq_sum(induce_morphism(f, a), induce_morphism(f, b))));
        if (seq_leq(a, b).verdict == Truth::yes)
            EXPECT_EQ(seq_leq(induce_morphism(f, a), induce_morphism(f, b)).verdict, Truth::yes);
        EXPECT_TRUE(stagewise_equal(induce_morphism(gf, a), induce_morphism(g, induce_morphism(f, a))));
    }
}

TEST(InduceTest, InduceClassAlongReduction) {
    auto Z4 = FiniteRing::zmod(4), F2 = FiniteRing::gf(2);
    auto f = RingHom::reduction(Z4, F2);
    auto W4 = build_W(*Z4, 2), W2 = build_W(*F2, 2);
    for (std::size_t i = 0; i < W4.size(); ++i)
        for (std::size_t j = 0; j < W4.size(); ++j) {
            if (!W4.pom.le(i, j)) continue;
            auto fi = induce_class(f, W4, W2, i), fj = induce_class(f, W4, W2, j);
            ASSERT_TRUE(fi && fj);
            EXPECT_TRUE(W2.pom.le(*fi, *fj));
        }
}
