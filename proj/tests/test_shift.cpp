#include <gtest/gtest.h>

#include "cuntz/shift_algebra.hpp"

#include <set>

using namespace cuntz;

namespace {

// Every terminal word reachable by deleting a letter that is larger than its right neighbour.
std::set<std::vector<unsigned>> all_reductions(const std::vector<unsigned>& w) {
    std::set<std::vector<unsigned>> seen{w}, terminal;
    std::vector<std::vector<unsigned>> todo{w};
    while (!todo.empty()) {
        auto cur = todo.back();
        todo.pop_back();
        bool any = false;
        for (std::size_t i = 0; i + 1 < cur.size(); ++i) {
            if (cur[i] <= cur[i + 1]) continue;
            any = true;
            auto next = cur;
            next.erase(next.begin() + std::ptrdiff_t(i));
            if (seen.insert(next).second) todo.push_back(next);
        }
        if (!any) terminal.insert(cur);
    }
    return terminal;
}

Monomial mono(const char* s) { return parse_monomial(s); }

}  // namespace

TEST(ShiftNormalFormTest, Examples) {
    EXPECT_EQ(normal_form({1, 0}), mono("x0"));
    EXPECT_EQ(normal_form({2, 0, 1}), mono("x0 x1"));
    EXPECT_EQ(normal_form({0}), mono("x0"));
    EXPECT_EQ(mono("x2 x0 x1").str(), "x0 x1");
    EXPECT_EQ(mono("x0^2 x1 x3").str(), "x0^2 x1 x3");
}

TEST(ShiftNormalFormTest, ConfluentOnShortWords) {
    const unsigned d = 3;
    std::size_t words = 0;
    for (std::size_t len = 1; len <= 6; ++len) {
        std::vector<unsigned> w(len, 0);
        for (;;) {
            auto term = all_reductions(w);
            ASSERT_EQ(term.size(), 1u);
            EXPECT_EQ(normal_form(*term.begin()), normal_form(w));
            EXPECT_EQ(*term.begin(), normal_form(w).word());
            ++words;
            std::size_t i = 0;
            while (i < len && ++w[i] == d) w[i++] = 0;
            if (i == len) break;
        }
    }
    EXPECT_EQ(words, 3u + 9 + 27 + 81 + 243 + 729);
}

TEST(ShiftNormalFormTest, ProductMatchesConcatenation) {
    auto B = monomials(4, 4);
    for (const auto& a : B)
        for (const auto& b : B) {
            auto w = a.word(), v = b.word();
            w.insert(w.end(), v.begin(), v.end());
            EXPECT_EQ(mono_mul(a, b), normal_form(w)) << a.str() << " * " << b.str();
        }
}

TEST(ShiftNormalFormTest, MonomialCount) {
    // exponent vectors in 3 variables with total degree 1..3
    EXPECT_EQ(monomials(3, 3).size(), 19u);
    EXPECT_EQ(monomials(1, 2).size(), 2u);
}

TEST(ShiftMultiplyTest, Examples) {
    auto F2 = FiniteRing::gf(2);
    ShiftBounds b{3, 3};
    auto x0 = parse_shift_poly(F2, b, "x0"), x1 = parse_shift_poly(F2, b, "x1");
    EXPECT_EQ(x1 * x0, x0);
    EXPECT_TRUE((ShiftPoly(F2, b) * x1).is_zero());
    EXPECT_EQ((x0 + x1) * x0, parse_shift_poly(F2, b, "x0^2 + x0"));
    EXPECT_EQ(((x0 + x1) * x0).str(), "x0 + x0^2");
}

TEST(ShiftMultiplyTest, DegreeOverflowIsAnError) {
    auto F2 = FiniteRing::gf(2);
    ShiftBounds b{3, 3};
    auto p = parse_shift_poly(F2, b, "x0^2");
    EXPECT_THROW(p * p, BoundExceeded);
    EXPECT_THROW(parse_shift_poly(F2, b, "x3"), BoundExceeded);
    // x1^2 x0 reduces to x0, so the product stays inside the bound
    auto q = parse_shift_poly(F2, b, "x1^2");
    EXPECT_EQ(q * parse_shift_poly(F2, b, "x0"), parse_shift_poly(F2, b, "x0"));
}

TEST(ShiftMultiplyTest, Associative) {
    auto B = monomials(3, 3);
    for (const auto& a : B)
        for (const auto& b : B)
            for (const auto& c : B) ASSERT_EQ(mono_mul(mono_mul(a, b), c), mono_mul(a, mono_mul(b, c)));
}

TEST(ShiftMultiplyTest, CoefficientsOverF3) {
    auto F3 = FiniteRing::gf(3);
    ShiftBounds b{2, 3};
    auto p = parse_shift_poly(F3, b, "x0 + x1 - x0");
    EXPECT_EQ(p, parse_shift_poly(F3, b, "x1"));
    auto q = parse_shift_poly(F3, b, "2 x0 - x1");
    EXPECT_EQ(q, parse_shift_poly(F3, b, "2x0 + 2 x1"));
    EXPECT_TRUE((q - q).is_zero());
    EXPECT_TRUE(parse_shift_poly(F3, b, "0").is_zero());
}

TEST(ShiftParseTest, Rejects) {
    auto F2 = FiniteRing::gf(2);
    EXPECT_THROW(parse_monomial("y0"), InvalidInput);
    EXPECT_THROW(parse_monomial(""), InvalidInput);
    EXPECT_THROW(parse_monomial("x0^0"), InvalidInput);
    EXPECT_THROW(parse_shift_poly(F2, {}, "1"), InvalidInput);
    EXPECT_THROW(parse_shift_poly(F2, {}, "x0 x1 x0 +"), InvalidInput);
    EXPECT_THROW(ShiftPoly(FiniteRing::zmod(4), {}), InvalidInput);
}

TEST(ShiftStTest, Examples) {
    EXPECT_EQ(mono("x0 x1").st(), 0u);
    EXPECT_EQ(mono("x2^3").st(), 2u);
    EXPECT_EQ(mono("x2 x0").st(), 0u);
    EXPECT_EQ(mono("x2 x0").st(), std::min(mono("x2").st(), mono("x0").st()));
}

TEST(ShiftStTest, StartProperties) {
    auto B = monomials(3, 3);
    for (const auto& p : B)
        for (const auto& q : B) {
            Monomial pq = mono_mul(p, q);
            EXPECT_EQ(pq.st(), std::min(p.st(), q.st()));
            if (p.st() == q.st()) {
                EXPECT_GT(pq, p);
                EXPECT_GT(pq, q);
            }
            if (p.st() > q.st()) EXPECT_EQ(pq, q);
        }
}

// ============================================================
// z = s z^2
// ============================================================

TEST(ShiftCompactTest, ReachabilityMatchesBruteForce) {
    auto P = monomials(3, 3), Wd = monomials(3, 6);
    auto Qleft = monomials(4, 4), Qright = monomials(3, 3);
    for (const auto& p : P)
        for (const auto& w : Wd) {
            bool left = false, right = false;
            for (const auto& q : Qleft) left = left || mono_mul(q, w) == p;
            for (const auto& q : Qright) right = right || mono_mul(w, q) == p;
            EXPECT_EQ(detail::reachable(p, w, ShiftSide::left), left) << p.str() << " from " << w.str();
            EXPECT_EQ(detail::reachable(p, w, ShiftSide::right), right) << p.str() << " from " << w.str();
        }
}

TEST(ShiftCompactTest, ScalarSmall) {
    auto F2 = FiniteRing::gf(2);
    CompactSearchOptions o;
    o.bounds = {1, 2};
    auto rep = search_compact_solutions(F2, o);
    EXPECT_TRUE(rep.complete);
    EXPECT_EQ(rep.candidates, 3u);  // x0, x0^2, x0 + x0^2
    EXPECT_TRUE(rep.solutions.empty());
}

TEST(ShiftCompactTest, LinearSolveAloneAgrees) {
    auto F2 = FiniteRing::gf(2);
    for (auto side : {ShiftSide::left, ShiftSide::right}) {
        CompactSearchOptions o;
        o.bounds = {2, 2};
        o.side = side;
        o.support_test = false;
        auto rep = search_compact_solutions(F2, o);
        EXPECT_EQ(rep.candidates, 31u);
        EXPECT_EQ(rep.solve_rejected, 31u);
        EXPECT_TRUE(rep.solutions.empty());
    }
}

TEST(ShiftCompactTest, XZeroIsNeverASolution) {
    auto F2 = FiniteRing::gf(2);
    ShiftBounds b{3, 3};
    auto x0 = parse_shift_poly(F2, b, "x0");
    EXPECT_FALSE(detail::reachable(mono("x0"), mono("x0^2"), ShiftSide::left));
    // every s of degree <= 1 fails directly
    ShiftBounds wide{4, 6};
    auto z = parse_shift_poly(F2, wide, "x0");
    for (const auto& m : monomials(4, 1)) {
        auto s = ShiftPoly::monomial(F2, wide, m);
        EXPECT_NE(s * z * z, z);
    }
    (void)x0;
}

TEST(ShiftCompactTest, ScalarD3D3OverF2) {
    auto F2 = FiniteRing::gf(2);
    CompactSearchOptions o;
    o.bounds = {3, 3};
    o.jobs = std::max(1u, std::thread::hardware_concurrency());
    auto rep = search_compact_solutions(F2, o);
    EXPECT_TRUE(rep.complete);
    EXPECT_EQ(rep.candidates, (1u << 19) - 1);
    EXPECT_EQ(rep.support_rejected, rep.candidates);
    EXPECT_TRUE(rep.solutions.empty());
    EXPECT_EQ(rep.cert, Cert::exact);
}

TEST(ShiftCompactTest, MirrorScalarD3D3OverF2) {
    auto F2 = FiniteRing::gf(2);
    CompactSearchOptions o;
    o.bounds = {3, 3};
    o.side = ShiftSide::right;
    o.jobs = std::max(1u, std::thread::hardware_concurrency());
    auto rep = search_compact_solutions(F2, o);
    EXPECT_EQ(rep.candidates, (1u << 19) - 1);
    EXPECT_TRUE(rep.solutions.empty());
}

TEST(ShiftCompactTest, TwoByTwoMonomialEntries) {
    auto F2 = FiniteRing::gf(2);
    CompactSearchOptions o;
    o.bounds = {3, 3};
    o.size = 2;
    o.max_entry_support = 1;
    auto rep = search_compact_solutions(F2, o);
    EXPECT_TRUE(rep.complete);
    EXPECT_EQ(rep.candidates, 20u * 20 * 20 * 20 - 1);
    EXPECT_TRUE(rep.solutions.empty());
}

TEST(ShiftCompactTest, TwoByTwoFullSupportSmall) {
    auto F2 = FiniteRing::gf(2);
    CompactSearchOptions o;
    o.bounds = {2, 2};
    o.size = 2;
    auto rep = search_compact_solutions(F2, o);
    EXPECT_TRUE(rep.complete);
    EXPECT_EQ(rep.candidates, 32u * 32 * 32 * 32 - 1);
    EXPECT_TRUE(rep.solutions.empty());
}

TEST(ShiftCompactTest, BudgetGivesPartialReport) {
    auto F2 = FiniteRing::gf(2);
    CompactSearchOptions o;
    o.bounds = {3, 3};
    o.max_candidates = 1000;
    auto rep = search_compact_solutions(F2, o);
    EXPECT_FALSE(rep.complete);
    EXPECT_EQ(rep.candidates, 999u);
    EXPECT_EQ(rep.cert, Cert::bound_relative);
}

// ============================================================
// (x0, x1, ...) as a sequence
// ============================================================

TEST(ShiftSequenceTest, VariablesFormAValidSequence) {
    auto F2 = FiniteRing::gf(2);
    EXPECT_TRUE(validate_variable_sequence(F2, {5, 3}).valid());
    ShiftBounds b{2, 3};
    std::vector<ShiftPoly> x{parse_shift_poly(F2, b, "x0"), parse_shift_poly(F2, b, "x1")};
    std::vector<ShiftPoly> wrong{parse_shift_poly(F2, b, "x0")};
    auto bad = validate_witness_chain(x, wrong, [](const ShiftPoly& a, const ShiftPoly& c) { return a * c; });
    EXPECT_FALSE(bad.valid());
}
