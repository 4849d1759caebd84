#include <gtest/gtest.h>

#include "cuntz/mvn.hpp"

using namespace cuntz;

namespace {

Mat M(const RingPtr& R, const char* lit) { return Mat::parse(*R, lit); }

}  // namespace

// ============================================================
// Literals and arithmetic
// ============================================================

TEST(MatTest, ParseAndPrint) {
    auto R = FiniteRing::zmod(4);
    Mat a = M(R, " [[1, 2], [3,0]] ");
    EXPECT_EQ(a.rows(), 2u);
    EXPECT_EQ(a(1, 0), 3u);
    EXPECT_EQ(a.str(), "[[1,2],[3,0]]");
    EXPECT_EQ(Mat::parse(*R, a.str()), a);
    EXPECT_EQ(M(R, "[1,2]").rows(), 1u);
    EXPECT_THROW(M(R, "[[1,2],[3]]"), InvalidInput);
    EXPECT_THROW(M(R, "[[5]]"), InvalidInput);
    EXPECT_THROW(M(R, "[[x]]"), InvalidInput);
}

TEST(MatTest, ProductMatchesHandComputation) {
    auto R = FiniteRing::zmod(4);
    Mat a = M(R, "[[1,2],[3,1]]"), b = M(R, "[[2,1],[1,1]]");
    EXPECT_EQ(a * b, M(R, "[[0,3],[3,0]]"));
    EXPECT_THROW(a * M(R, "[[1,1,1]]"), InvalidInput);
}

TEST(MatTest, MixedRingsRejected) {
    auto R = FiniteRing::zmod(4), S = FiniteRing::zmod(4);
    EXPECT_THROW(M(R, "[[1]]") * M(S, "[[1]]"), InvalidInput);
    EXPECT_THROW(diag_sum(M(R, "[[1]]"), M(S, "[[1]]")), InvalidInput);
}

// ============================================================
// Diagonal sums and trimming
// ============================================================

TEST(DiagSumTest, OnesGiveIdentity) {
    auto F2 = FiniteRing::gf(2);
    EXPECT_EQ(diag_sum(M(F2, "[[1]]"), M(F2, "[[1]]")), Mat::identity(*F2, 2));
}

TEST(DiagSumTest, ZeroBlockRetained) {
    auto F2 = FiniteRing::gf(2);
    Mat y = M(F2, "[[1,1],[0,1]]");
    Mat s = diag_sum(M(F2, "[[0]]"), y);
    EXPECT_EQ(s.rows(), 3u);
    EXPECT_EQ(s.block(1, 1, 2, 2), y);
    EXPECT_EQ(s(0, 0), 0u);
}

TEST(DiagSumTest, RectangularBlocks) {
    auto F2 = FiniteRing::gf(2);
    EXPECT_EQ(diag_sum(M(F2, "[[1,1]]"), M(F2, "[[1],[0]]")), M(F2, "[[1,1,0],[0,0,1],[0,0,0]]"));
}

TEST(DiagSumTest, AssociativeUpToTrim) {
    auto R = FiniteRing::zmod(4);
    Mat a = M(R, "[[1,2]]"), b = M(R, "[[0],[3]]"), c = M(R, "[[2]]");
    EXPECT_EQ(diag_sum(diag_sum(a, b), c), diag_sum(a, diag_sum(b, c)));
    EXPECT_EQ(trim(diag_sum(a, M(R, "[[0]]"))), a);
}

TEST(TrimTest, Idempotent) {
    auto R = FiniteRing::zmod(4);
    Mat a = M(R, "[[0,1,0],[0,0,0],[2,0,0]]");
    EXPECT_EQ(trim(a), M(R, "[[0,1],[0,0],[2,0]]"));
    EXPECT_EQ(trim(trim(a)), trim(a));
    EXPECT_EQ(trim(Mat::zero(*R, 3, 2)), Mat::zero(*R, 1, 1));
    EXPECT_EQ(compress(a), M(R, "[[0,1],[2,0]]"));
}

TEST(EnumerationTest, IndexRoundTrip) {
    auto R = FiniteRing::zmod(3);
    std::uint64_t k = 0;
    for_each_matrix(*R, 2, 2, [&](const Mat& m) {
        EXPECT_EQ(matrix_index(m), k);
        EXPECT_EQ(matrix_from_index(*R, 2, 2, k), m);
        ++k;
        return true;
    });
    EXPECT_EQ(k, 81u);
}

TEST(SolveTest, LeftAndRight) {
    auto R = FiniteRing::zmod(4);
    Mat B = M(R, "[[1,2],[0,2]]");
    Mat A = M(R, "[[1,0],[2,0]]");  // row0 = B0 + B1, row1 = 2 B0
    auto Y = left_solve(A, B);
    ASSERT_TRUE(Y);
    EXPECT_EQ(*Y * B, A);
    EXPECT_FALSE(left_solve(M(R, "[[1,1]]"), B));  // second entry would have to be even
    auto T = right_solve(M(R, "[[2],[0]]"), M(R, "[[2],[2]]"));
    EXPECT_FALSE(T);  // column (2,0) not a right multiple of (2,2)
    auto T2 = right_solve(M(R, "[[2],[2]]"), M(R, "[[1],[1]]"));
    ASSERT_TRUE(T2);
    EXPECT_EQ(M(R, "[[1],[1]]") * *T2, M(R, "[[2],[2]]"));
}

// ============================================================
// Idempotents and MvN equivalence
// ============================================================

TEST(MvnTest, IdentityWitnesses) {
    auto F2 = FiniteRing::gf(2);
    auto r = mvn_equivalent(M(F2, "[[1]]"), M(F2, "[[1]]"));
    EXPECT_EQ(r.verdict, Truth::yes);
    EXPECT_EQ(r.x * r.y, M(F2, "[[1]]"));
}

TEST(MvnTest, CornerOfTwoByTwo) {
    auto F2 = FiniteRing::gf(2);
    Mat e = M(F2, "[[1]]"), f = M(F2, "[[1,0],[0,0]]");
    auto r = mvn_equivalent(e, f);
    ASSERT_EQ(r.verdict, Truth::yes);
    EXPECT_EQ(r.x * r.y, e);
    EXPECT_EQ(r.y * r.x, f);
    EXPECT_EQ(r.x, M(F2, "[[1,0]]"));
    EXPECT_EQ(r.y, M(F2, "[[1],[0]]"));
}

TEST(MvnTest, ZeroNotEquivalentToOne) {
    auto F2 = FiniteRing::gf(2);
    EXPECT_EQ(mvn_equivalent(M(F2, "[[1]]"), M(F2, "[[0]]")).verdict, Truth::no);
}

TEST(MvnTest, RelationPropertiesOverZ4) {
    auto R = FiniteRing::zmod(4);
    std::vector<Mat> idems;
    for (std::size_t n = 1; n <= 2; ++n)
        for_each_matrix(*R, n, n, [&](const Mat& m) {
            if (is_idempotent(m)) idems.push_back(m);
            return true;
        });
    for (auto& e : idems) EXPECT_EQ(mvn_equivalent(e, e).verdict, Truth::yes);
    for (auto& e : idems)
        for (auto& f : idems) {
            auto a = mvn_equivalent(e, f), b = mvn_equivalent(f, e);
            ASSERT_NE(a.verdict, Truth::unknown);
            EXPECT_EQ(a.verdict, b.verdict);
            if (a.verdict == Truth::yes) {
                EXPECT_EQ(a.x * a.y, e);
                EXPECT_EQ(a.y * a.x, f);
            }
        }
    for (auto& e : idems)
        for (auto& f : idems)
            for (auto& g : idems)
                if (mvn_equivalent(e, f).verdict == Truth::yes && mvn_equivalent(f, g).verdict == Truth::yes)
                    EXPECT_EQ(mvn_equivalent(e, g).verdict, Truth::yes);
}

TEST(MvnTest, ExhaustiveOracleAgreesOverF2) {
    // oracle: direct search over all x, y of the right shapes
    auto F2 = FiniteRing::gf(2);
    std::vector<Mat> idems;
    for (std::size_t n = 1; n <= 2; ++n)
        for_each_matrix(*F2, n, n, [&](const Mat& m) {
            if (is_idempotent(m)) idems.push_back(m);
            return true;
        });
    for (auto& e : idems)
        for (auto& f : idems) {
            bool oracle = false;
            for_each_matrix(*F2, e.rows(), f.rows(), [&](const Mat& x) {
                for_each_matrix(*F2, f.rows(), e.rows(), [&](const Mat& y) {
                    if (x * y == e && y * x == f) oracle = true;
                    return !oracle;
                });
                return !oracle;
            });
            EXPECT_EQ(mvn_equivalent(e, f).verdict, truth_of(oracle)) << e.str() << " " << f.str();
        }
}
