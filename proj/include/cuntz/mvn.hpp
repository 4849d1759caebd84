#pragma once
/**
 * @file mvn.hpp
 * @brief Murray-von Neumann equivalence of idempotent matrices.
 */

#include "subequiv.hpp"

namespace cuntz {

struct MvnResult {
    Truth verdict = Truth::unknown;
    Mat x, y;  // e = x y, f = y x, x = e x f, y = f y e
};

/// e ~ f.  Tries the witness of e <=1 f first (x = e r f, y = f t e), then an exhaustive
/// search over normalized pairs within budget.
inline MvnResult mvn_equivalent(const Mat& e, const Mat& f, std::uint64_t budget = default_budget) {
    if (e.ring_ptr() != f.ring_ptr()) throw InvalidInput("mvn_equivalent: rings differ");
    if (!is_idempotent(e) || !is_idempotent(f)) throw InvalidInput("mvn_equivalent: inputs must be idempotent");
    MvnResult out;
    Sub1Options opt;
    opt.budget = budget;
    // e = x y gives e <=1 f, so a failed <=1 in either direction is decisive
    auto ef = precsim1(e, f, opt);
    if (ef.verdict == Truth::no) { out.verdict = Truth::no; return out; }
    auto fe = precsim1(f, e, opt);
    if (fe.verdict == Truth::no) { out.verdict = Truth::no; return out; }
    if (ef.verdict == Truth::yes) {
        Mat x = e * ef.witness->r * f, y = f * ef.witness->t * e;
        if (x * y != e) throw InvariantBreach("mvn_equivalent: normalized witness lost e = xy");
        if (y * x == f) {
            out.verdict = Truth::yes;
            out.x = std::move(x);
            out.y = std::move(y);
            return out;
        }
    }
    const FiniteRing& R = e.ring();
    const std::uint64_t nx = matrix_count(R, e.rows(), f.rows(), budget + 1);
    const std::uint64_t ny = matrix_count(R, f.rows(), e.rows(), budget + 1);
    if (nx > budget || ny > budget || nx * ny > budget) return out;
    std::vector<Mat> xs, ys;
    {
        std::unordered_set<Mat, MatHash> seen;
        for_each_matrix(R, e.rows(), f.rows(), [&](const Mat& m) {
            Mat x = e * m * f;
            if (seen.insert(x).second) xs.push_back(x);
            return true;
        });
    }
    {
        std::unordered_set<Mat, MatHash> seen;
        for_each_matrix(R, f.rows(), e.rows(), [&](const Mat& m) {
            Mat y = f * m * e;
            if (seen.insert(y).second) ys.push_back(y);
            return true;
        });
    }
    for (const Mat& x : xs)
        for (const Mat& y : ys)
            if (x * y == e && y * x == f) {
                out.verdict = Truth::yes;
                out.x = x;
                out.y = y;
                return out;
            }
    out.verdict = Truth::no;
    return out;
}

}  // namespace cuntz
