#pragma once
/**
 * @file ring_checks.hpp
 * @brief Weak s-unitality: every a in M_n(R) factors as a = b a c.
 */

#include "subequiv.hpp"

#include <random>

namespace cuntz {

struct SUnitalReport {
    std::size_t n = 0;
    Truth verdict = Truth::unknown;
    Cert cert = Cert::exact;
    std::optional<Mat> counterexample;
    std::uint64_t checked = 0;
};

/// For each n <= n_max: exhaustive over M_n(R) when |R|^(n^2) <= budget, otherwise sampled
/// (if allow_sampling) with the report flagged as such.
inline std::vector<SUnitalReport> check_weakly_s_unital(const FiniteRing& R, std::size_t n_max,
                                                        std::uint64_t budget = std::uint64_t{1} << 20,
                                                        bool allow_sampling = true, std::uint64_t samples = 2000,
                                                        std::uint64_t seed = 1) {
    if (n_max == 0) throw InvalidInput("n_max must be positive");
    std::vector<SUnitalReport> out;
    Sub1Options opt;
    for (std::size_t n = 1; n <= n_max; ++n) {
        SUnitalReport rep;
        rep.n = n;
        // b a c with square b, c is exactly a <=1 a at square shapes
        auto check = [&](const Mat& a) {
            ++rep.checked;
            if (R.is_unital()) return Truth::yes;
            return precsim1(a, a, opt).verdict;
        };
        bool unknown = false;
        const bool exhaustive = matrix_count(R, n, n, budget + 1) <= budget;
        if (!exhaustive && !allow_sampling) throw BoundExceeded("weak s-unitality check exceeds budget");
        auto visit = [&](const Mat& a) {
            Truth t = check(a);
            if (t == Truth::no) {
                rep.counterexample = a;
                return false;
            }
            if (t == Truth::unknown) unknown = true;
            return true;
        };
        if (exhaustive) {
            for_each_matrix(R, n, n, visit);
        } else {
            rep.cert = Cert::sampled;
            std::mt19937_64 rng(seed + n);
            std::uniform_int_distribution<Elem> pick(0, static_cast<Elem>(R.size() - 1));
            for (std::uint64_t k = 0; k < samples; ++k) {
                std::vector<Elem> e(n * n);
                for (auto& x : e) x = pick(rng);
                if (!visit(Mat(R, n, n, std::move(e)))) break;
            }
        }
        if (rep.counterexample) {
            rep.verdict = Truth::no;
            rep.cert = Cert::exact;
        } else {
            rep.verdict = unknown ? Truth::unknown : Truth::yes;
        }
        out.push_back(std::move(rep));
    }
    return out;
}

}  // namespace cuntz
