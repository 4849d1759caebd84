#pragma once
/**
 * @file field.hpp
 * @brief Gaussian elimination over a prime field with recorded invertible transforms.
 */

#include "matrix.hpp"

namespace cuntz {

/// P * a * Q = diag(I_rank, 0), with the inverses kept alongside.
struct FieldDecomposition {
    Mat P, Pinv, Q, Qinv;
    std::size_t rank = 0;
};

inline FieldDecomposition field_decompose(const Mat& a) {
    const FiniteRing& R = a.ring();
    if (!R.prime_field()) throw InvalidInput("field_decompose needs a prime field");
    const std::size_t m = a.rows(), n = a.cols();
    Mat A = a;
    FieldDecomposition d{Mat::identity(R, m), Mat::identity(R, m), Mat::identity(R, n), Mat::identity(R, n), 0};

    auto swap_rows = [](Mat& M, std::size_t i, std::size_t k) {
        for (std::size_t j = 0; j < M.cols(); ++j) std::swap(M.at(i, j), M.at(k, j));
    };
    auto swap_cols = [](Mat& M, std::size_t i, std::size_t k) {
        for (std::size_t r = 0; r < M.rows(); ++r) std::swap(M.at(r, i), M.at(r, k));
    };
    // row_i += f * row_k
    auto add_row = [&](Mat& M, std::size_t i, std::size_t k, Elem f) {
        for (std::size_t j = 0; j < M.cols(); ++j) M.at(i, j) = R.add(M(i, j), R.mul(f, M(k, j)));
    };
    auto add_col = [&](Mat& M, std::size_t j, std::size_t k, Elem f) {
        for (std::size_t r = 0; r < M.rows(); ++r) M.at(r, j) = R.add(M(r, j), R.mul(M(r, k), f));
    };

    std::size_t k = 0;
    while (k < m && k < n) {
        std::size_t pi = m, pj = n;
        for (std::size_t i = k; i < m && pi == m; ++i)
            for (std::size_t j = k; j < n; ++j)
                if (A(i, j)) { pi = i; pj = j; break; }
        if (pi == m) break;
        if (pi != k) {
            swap_rows(A, pi, k);
            swap_rows(d.P, pi, k);
            swap_cols(d.Pinv, pi, k);
        }
        if (pj != k) {
            swap_cols(A, pj, k);
            swap_cols(d.Q, pj, k);
            swap_rows(d.Qinv, pj, k);
        }
        Elem piv = A(k, k);
        Elem inv = *R.inverse(piv);
        for (std::size_t j = 0; j < n; ++j) A.at(k, j) = R.mul(inv, A(k, j));
        for (std::size_t j = 0; j < m; ++j) d.P.at(k, j) = R.mul(inv, d.P(k, j));
        for (std::size_t r = 0; r < m; ++r) d.Pinv.at(r, k) = R.mul(d.Pinv(r, k), piv);
        for (std::size_t i = 0; i < m; ++i) {
            if (i == k || A(i, k) == 0) continue;
            Elem f = A(i, k);
            add_row(A, i, k, R.neg(f));
            add_row(d.P, i, k, R.neg(f));
            add_col(d.Pinv, k, i, f);
        }
        for (std::size_t j = 0; j < n; ++j) {
            if (j == k || A(k, j) == 0) continue;
            Elem f = A(k, j);
            add_col(A, j, k, R.neg(f));
            add_col(d.Q, j, k, R.neg(f));
            add_row(d.Qinv, k, j, f);
        }
        ++k;
    }
    d.rank = k;
    return d;
}

inline std::size_t field_rank(const Mat& a) { return field_decompose(a).rank; }

/// diag(I_k, 0) of shape r x c.
inline Mat rank_pattern(const FiniteRing& R, std::size_t r, std::size_t c, std::size_t k) {
    Mat m(R, r, c);
    for (std::size_t i = 0; i < k && i < r && i < c; ++i) m.at(i, i) = *R.one();
    return m;
}

}  // namespace cuntz
