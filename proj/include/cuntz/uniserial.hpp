#pragma once
/**
 * @file uniserial.hpp
 * @brief Diagonalization by elementary operations over Z/p^k and the rank pair (r, s).
 */

#include "matrix.hpp"

#include <random>

namespace cuntz {

/// One elementary operation.  Row ops act on the left (U), column ops on the right (V).
/// kind add: line i += c * line j.  kind swap: exchange lines i and j.
struct ElemOp {
    enum class Side { row, col };
    enum class Kind { add, swap };
    Side side = Side::row;
    Kind kind = Kind::add;
    std::size_t i = 0, j = 0;
    Elem c = 0;
};

struct DiagCertificate {
    Mat A, D;
    Mat U, V;        // U * A * V == D
    Mat Uinv, Vinv;  // A == Uinv * D * Vinv
    std::vector<ElemOp> ops;
    std::size_t unit_pivots = 0;     // pivots taken on the invertible-entry path
    std::size_t nonunit_pivots = 0;  // pivots chosen by divisibility
    unsigned p = 0, k = 0;

    std::size_t row_ops() const {
        return std::size_t(std::count_if(ops.begin(), ops.end(), [](const ElemOp& o) { return o.side == ElemOp::Side::row; }));
    }
    std::size_t col_ops() const { return ops.size() - row_ops(); }
};

namespace detail {

inline void apply_row_op(Mat& m, const ElemOp& o) {
    const FiniteRing& R = m.ring();
    for (std::size_t c = 0; c < m.cols(); ++c) {
        if (o.kind == ElemOp::Kind::swap) std::swap(m.at(o.i, c), m.at(o.j, c));
        else m.at(o.i, c) = R.add(m.at(o.i, c), R.mul(o.c, m.at(o.j, c)));
    }
}

inline void apply_col_op(Mat& m, const ElemOp& o) {
    const FiniteRing& R = m.ring();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        if (o.kind == ElemOp::Kind::swap) std::swap(m.at(r, o.i), m.at(r, o.j));
        else m.at(r, o.i) = R.add(m.at(r, o.i), R.mul(m.at(r, o.j), o.c));
    }
}

inline std::pair<unsigned, unsigned> require_chain(const FiniteRing& R) {
    auto ch = R.chain_ring();
    if (!ch) throw InvalidInput("diagonalization needs a ring Z/p^k, got " + R.spec().to_string());
    return *ch;
}

}  // namespace detail

/// p-adic valuation of x in Z/p^k; zero has valuation k.
inline unsigned valuation(const FiniteRing& R, Elem x) {
    auto [p, k] = detail::require_chain(R);
    if (x == 0) return k;
    unsigned v = 0;
    while (x % p == 0) { x /= p; ++v; }
    return v;
}

/// Smallest q with q * d == x, if any.
inline std::optional<Elem> chain_quotient(const FiniteRing& R, Elem x, Elem d) {
    for (Elem q = 0; q < R.size(); ++q)
        if (R.mul(q, d) == x) return q;
    return std::nullopt;
}

/// Elementary-operation diagonalization over Z/p^k.  seed 0 breaks pivot ties by
/// lowest (row, col); any other seed picks uniformly among tied pivots.
inline DiagCertificate diagonalize(const Mat& A, std::uint64_t seed = 0) {
    const FiniteRing& R = A.ring();
    auto [p, k] = detail::require_chain(R);
    const std::size_t m = A.rows(), n = A.cols();
    DiagCertificate cert{A, A, Mat::identity(R, m), Mat::identity(R, n), Mat::identity(R, m), Mat::identity(R, n), {}, 0, 0, p, k};
    Mat& D = cert.D;
    std::mt19937_64 rng(seed);

    auto row = [&](ElemOp::Kind kind, std::size_t i, std::size_t j, Elem c) {
        ElemOp o{ElemOp::Side::row, kind, i, j, c};
        detail::apply_row_op(D, o);
        detail::apply_row_op(cert.U, o);
        // Uinv <- Uinv * E^{-1}
        if (kind == ElemOp::Kind::swap) detail::apply_col_op(cert.Uinv, o);
        else detail::apply_col_op(cert.Uinv, ElemOp{ElemOp::Side::col, kind, j, i, R.neg(c)});
        cert.ops.push_back(o);
    };
    auto col = [&](ElemOp::Kind kind, std::size_t i, std::size_t j, Elem c) {
        ElemOp o{ElemOp::Side::col, kind, i, j, c};
        detail::apply_col_op(D, o);
        detail::apply_col_op(cert.V, o);
        // Vinv <- F^{-1} * Vinv
        if (kind == ElemOp::Kind::swap) detail::apply_row_op(cert.Vinv, o);
        else detail::apply_row_op(cert.Vinv, ElemOp{ElemOp::Side::row, kind, j, i, R.neg(c)});
        cert.ops.push_back(o);
    };

    for (std::size_t t = 0; t < std::min(m, n); ++t) {
        // divisibility-maximal entry: least valuation
        unsigned best = k;
        std::vector<std::pair<std::size_t, std::size_t>> ties;
        for (std::size_t i = t; i < m; ++i)
            for (std::size_t j = t; j < n; ++j) {
                unsigned v = valuation(R, D(i, j));
                if (v < best) { best = v; ties.clear(); }
                if (v == best && v < k) ties.emplace_back(i, j);
            }
        if (ties.empty()) break;
        auto [pi, pj] = ties.front();
        if (seed != 0 && ties.size() > 1) {
            std::uniform_int_distribution<std::size_t> pick(0, ties.size() - 1);
            std::tie(pi, pj) = ties[pick(rng)];
        }
        (best == 0 ? cert.unit_pivots : cert.nonunit_pivots) += 1;
        if (pi != t) row(ElemOp::Kind::swap, t, pi, 0);
        if (pj != t) col(ElemOp::Kind::swap, t, pj, 0);
        const Elem d = D(t, t);
        for (std::size_t i = t + 1; i < m; ++i) {
            if (D(i, t) == 0) continue;
            auto q = chain_quotient(R, D(i, t), d);
            if (!q) throw InvariantBreach("pivot does not divide its column");
            row(ElemOp::Kind::add, i, t, R.neg(*q));
        }
        for (std::size_t j = t + 1; j < n; ++j) {
            if (D(t, j) == 0) continue;
            auto q = chain_quotient(R, D(t, j), d);
            if (!q) throw InvariantBreach("pivot does not divide its row");
            col(ElemOp::Kind::add, j, t, R.neg(*q));
        }
    }
    if (cert.U * A * cert.V != D) throw InvariantBreach("diagonalization certificate does not reproduce D");
    return cert;
}

inline bool is_diagonal(const Mat& d) {
    for (std::size_t i = 0; i < d.rows(); ++i)
        for (std::size_t j = 0; j < d.cols(); ++j)
            if (i != j && d(i, j) != 0) return false;
    return true;
}

/// Rebuilds U and V from the operation list and checks U A V = D, U Uinv = I, V Vinv = I.
inline std::optional<std::string> verify(const DiagCertificate& c) {
    const FiniteRing& R = c.A.ring();
    Mat U = Mat::identity(R, c.A.rows()), V = Mat::identity(R, c.A.cols());
    for (const auto& o : c.ops) {
        if (o.side == ElemOp::Side::row) detail::apply_row_op(U, o);
        else detail::apply_col_op(V, o);
        if (o.kind == ElemOp::Kind::add && o.i == o.j) return "transvection with i == j";
    }
    if (U != c.U) return "U does not match its operation list";
    if (V != c.V) return "V does not match its operation list";
    if (U * c.Uinv != Mat::identity(R, U.rows())) return "U is not inverted by Uinv";
    if (V * c.Vinv != Mat::identity(R, V.rows())) return "V is not inverted by Vinv";
    if (U * c.A * V != c.D) return "U A V != D";
    if (!is_diagonal(c.D)) return "D is not diagonal";
    return std::nullopt;
}

/// Sorted valuations of the diagonal of D (zeros included, as k).
inline std::vector<unsigned> diagonal_valuations(const Mat& D) {
    std::vector<unsigned> v;
    for (std::size_t i = 0; i < std::min(D.rows(), D.cols()); ++i) v.push_back(valuation(D.ring(), D(i, i)));
    std::sort(v.begin(), v.end());
    return v;
}

struct RankPair {
    std::size_t r = 0, s = 0;
    bool operator==(const RankPair&) const = default;
    std::string str() const { return "(" + std::to_string(r) + "," + std::to_string(s) + ")"; }
};

/// r = unit diagonal entries, s = nonzero non-units.  D must be diagonal.
inline RankPair psi_rank(const Mat& D) {
    if (!is_diagonal(D)) throw InvalidInput("psi_rank needs a diagonal matrix; diagonalize first");
    auto [p, k] = detail::require_chain(D.ring());
    RankPair out;
    for (unsigned v : diagonal_valuations(D)) {
        if (v == 0) ++out.r;
        else if (v < k) ++out.s;
    }
    return out;
}

inline RankPair psi_rank_of(const Mat& A) { return psi_rank(diagonalize(A).D); }

/// (r', s') <= (r, s) iff r' + s' <= r + s and r' <= r.
inline bool nsd_leq(const RankPair& a, const RankPair& b) { return a.r + a.s <= b.r + b.s && a.r <= b.r; }

/// For every v, the number of valuations <= v in a is at most that in b.
/// Both vectors sorted; entries equal to k count as zero.
inline bool valuation_dominated(const std::vector<unsigned>& a, const std::vector<unsigned>& b, unsigned k) {
    for (unsigned v = 0; v < k; ++v) {
        auto ca = std::count_if(a.begin(), a.end(), [&](unsigned x) { return x <= v; });
        auto cb = std::count_if(b.begin(), b.end(), [&](unsigned x) { return x <= v; });
        if (ca > cb) return false;
    }
    return true;
}

}  // namespace cuntz
