#pragma once
/**
 * @file sequences.hpp
 * @brief Finite-stage representatives of the sequence semigroup S(R): validation, order, sums,
 * suprema of chains, compactness, and the bridge to column-finite idempotents (projective modules
 * presented as direct limits of free modules).
 *
 * Stage x_i maps R^{n_i} to R^{n_{i+1}}, so x_i is n_{i+1} x n_i and consecutive stages compose.
 * Stages are stored 0-based: witness y[i] satisfies y[i] * x[i+1] * x[i] == x[i].
 */

#include "ring.hpp"
#include "subequiv.hpp"
#include "wr_monoid.hpp"

#include <random>
#include <sstream>

namespace cuntz {

enum class Tail { stabilized, open };

inline const char* to_string(Tail t) { return t == Tail::stabilized ? "stabilized" : "open"; }

struct SeqElem {
    const FiniteRing* ring = nullptr;
    std::vector<Mat> x;
    std::vector<Mat> y;                 // x.size() - 1 witnesses
    Tail tail = Tail::stabilized;
    std::optional<Mat> tail_witness;    // y with y * x_N * x_N == x_N, for the constant continuation

    std::size_t length() const { return x.size(); }

    static SeqElem constant(const Mat& stage, const Mat& witness) {
        SeqElem s;
        s.ring = stage.ring_ptr();
        s.x = {stage};
        s.tail_witness = witness;
        return s;
    }
    static SeqElem zero(const FiniteRing& R, std::size_t n = 1) { return constant(Mat(R, n, n), Mat(R, n, n)); }

    /// Stage n (0-based); past the stored stages only for stabilized tails.
    const Mat& stage(std::size_t n) const {
        if (n < x.size()) return x[n];
        if (tail != Tail::stabilized) throw InvalidInput("stage beyond an open tail");
        return x.back();
    }
    /// Witness relating stage n and n + 1.
    const Mat& witness(std::size_t n) const {
        if (n + 1 < x.size()) return y[n];
        if (tail != Tail::stabilized || !tail_witness) throw InvalidInput("witness beyond an open tail");
        return *tail_witness;
    }
    /// Copy with the stabilized tail written out to at least n stages.
    SeqElem extended(std::size_t n) const {
        SeqElem s = *this;
        while (s.x.size() < n) {
            if (tail != Tail::stabilized || !tail_witness) throw InvalidInput("cannot extend an open tail");
            s.y.push_back(*tail_witness);
            s.x.push_back(x.back());
        }
        return s;
    }

    std::string str() const {
        std::ostringstream os;
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (i) os << " -> ";
            os << x[i].str();
        }
        os << (tail == Tail::stabilized ? " (stable)" : " ...");
        return os.str();
    }
};

struct SeqCheck {
    std::vector<std::string> violations;
    bool valid() const { return violations.empty(); }
};

inline SeqCheck validate_seq(const SeqElem& s) {
    SeqCheck out;
    auto bad = [&](std::string m) { out.violations.push_back(std::move(m)); };
    if (s.x.empty()) {
        bad("no stages");
        return out;
    }
    if (s.y.size() + 1 != s.x.size()) {
        bad("expected " + std::to_string(s.x.size() - 1) + " witnesses, got " + std::to_string(s.y.size()));
        return out;
    }
    for (const auto& m : s.x)
        if (m.ring_ptr() != s.ring) bad("stage over a different ring");
    for (const auto& m : s.y)
        if (m.ring_ptr() != s.ring) bad("witness over a different ring");
    if (!out.valid()) return out;
    for (std::size_t i = 0; i + 1 < s.x.size(); ++i) {
        const Mat &a = s.x[i], &b = s.x[i + 1], &w = s.y[i];
        std::string at = "stage " + std::to_string(i + 1);
        if (b.cols() != a.rows()) { bad(at + ": next stage does not compose"); continue; }
        if (w.rows() != a.rows() || w.cols() != b.rows()) { bad(at + ": witness has wrong shape"); continue; }
        if (w * b * a != a) bad(at + ": y * x_next * x != x");
    }
    if (s.tail == Tail::stabilized) {
        const Mat& last = s.x.back();
        if (!last.square()) bad("stabilized tail needs a square last stage");
        else if (!s.tail_witness) bad("stabilized tail without witness");
        else if (s.tail_witness->ring_ptr() != s.ring || s.tail_witness->rows() != last.rows() ||
                 s.tail_witness->cols() != last.rows())
            bad("tail witness has wrong shape");
        else if (*s.tail_witness * last * last != last) bad("tail: y * x * x != x");
    }
    return out;
}

inline void require_valid(const SeqElem& s, const char* what) {
    auto v = validate_seq(s);
    if (!v.valid()) throw InvalidInput(std::string(what) + ": invalid sequence: " + v.violations.front());
}

// ---------------------------------------------------------------------------
// Order and addition
// ---------------------------------------------------------------------------

struct SeqLeq {
    Truth verdict = Truth::unknown;
    Cert cert = Cert::exact;
    std::vector<Sub1Witness> witnesses;  // a_n <=1 b_last for every stored n
};

/// Stages increase under <=1, so "a_n <=1 b_m for some m" reduces to comparing with b's last stage.
inline SeqLeq seq_leq(const SeqElem& a, const SeqElem& b, const Sub1Options& opt = {}) {
    require_valid(a, "seq_leq");
    require_valid(b, "seq_leq");
    if (a.ring != b.ring) throw InvalidInput("seq_leq: sequences over different rings");
    SeqLeq out;
    out.cert = a.tail == Tail::stabilized && b.tail == Tail::stabilized ? Cert::exact : Cert::stage_relative;
    out.verdict = Truth::yes;
    for (const auto& an : a.x) {
        auto r = precsim1(an, b.x.back(), opt);
        if (r.verdict != Truth::yes) {
            out.verdict = r.verdict;
            out.witnesses.clear();
            return out;
        }
        out.witnesses.push_back(*r.witness);
    }
    return out;
}

inline Truth seq_equivalent(const SeqElem& a, const SeqElem& b, const Sub1Options& opt = {}) {
    auto ab = seq_leq(a, b, opt), ba = seq_leq(b, a, opt);
    if (ab.verdict == Truth::no || ba.verdict == Truth::no) return Truth::no;
    if (ab.verdict == Truth::yes && ba.verdict == Truth::yes) return Truth::yes;
    return Truth::unknown;
}

/// Stagewise diagonal sum.  A shorter stabilized input is padded by its tail; a shorter open
/// input truncates the result, which is then open.
inline SeqElem seq_sum(const SeqElem& a, const SeqElem& b) {
    require_valid(a, "seq_sum");
    require_valid(b, "seq_sum");
    if (a.ring != b.ring) throw InvalidInput("seq_sum: sequences over different rings");
    std::size_t n = std::max(a.length(), b.length());
    if ((a.length() < n && a.tail == Tail::open) || (b.length() < n && b.tail == Tail::open))
        n = std::min(a.length(), b.length());
    SeqElem s;
    s.ring = a.ring;
    for (std::size_t i = 0; i < n; ++i) {
        s.x.push_back(diag_sum(a.stage(i), b.stage(i)));
        if (i + 1 < n) s.y.push_back(diag_sum(a.witness(i), b.witness(i)));
    }
    bool both_stable = a.tail == Tail::stabilized && b.tail == Tail::stabilized;
    s.tail = both_stable ? Tail::stabilized : Tail::open;
    if (both_stable) s.tail_witness = diag_sum(a.witness(n - 1), b.witness(n - 1));
    require_valid(s, "seq_sum result");
    return s;
}

// ---------------------------------------------------------------------------
// Suprema of chains
// ---------------------------------------------------------------------------

struct SeqSup {
    SeqElem sup;
    std::vector<Sub1Witness> alignment;  // x_{k+1}^{(k)} = a x_{k+1}^{(k+1)} b, per k
};

/// Diagonal construction u_n = x_n^{(n)} b_n with witnesses y_{n+1}^{(n)} a_{n+1}, where
/// x_{n+1}^{(n)} = a_{n+1} x_{n+1}^{(n+1)} b_{n+1}.  Past the last chain member the diagonal
/// follows that member.  The chain must be stagewise aligned: x_n^{(k)} <=1 x_n^{(k+1)} on every
/// compared stage n > k.
inline SeqSup seq_sup(const std::vector<SeqElem>& chain, const Sub1Options& opt = {}) {
    if (chain.empty()) throw InvalidInput("seq_sup: empty chain");
    const FiniteRing& R = *chain.front().ring;
    for (const auto& s : chain) {
        require_valid(s, "seq_sup");
        if (s.ring != &R) throw InvalidInput("seq_sup: chain over different rings");
    }
    const std::size_t K = chain.size();
    const SeqElem& top = chain.back();
    const std::size_t L = top.tail == Tail::stabilized ? std::max(K + 1, top.length()) : top.length();
    if (L < K) throw InvalidInput("seq_sup: last chain member has fewer stages than the chain has members");
    auto member = [&](std::size_t n) -> const SeqElem& { return chain[std::min(n, K) - 1]; };  // 1-based n

    // alignment on all stages that both members can supply
    for (std::size_t k = 1; k < K; ++k) {
        const SeqElem &lo = chain[k - 1], &hi = chain[k];
        std::size_t upto = std::min(lo.tail == Tail::stabilized ? L : lo.length(), hi.tail == Tail::stabilized ? L : hi.length());
        if (upto < k + 1) throw InvalidInput("seq_sup: member " + std::to_string(k) + " lacks stage " + std::to_string(k + 1));
        for (std::size_t n = k + 1; n <= upto; ++n) {
            auto r = precsim1(lo.stage(n - 1), hi.stage(n - 1), opt);
            if (r.verdict != Truth::yes)
                throw InvalidInput("seq_sup: missing stagewise witness between members " + std::to_string(k) + " and " +
                                   std::to_string(k + 1) + " at stage " + std::to_string(n));
        }
    }

    SeqSup out;
    std::vector<Mat> a(L + 2), b(L + 2);  // 1-based
    for (std::size_t n = 2; n <= L; ++n) {
        const Mat& from = member(n - 1).stage(n - 1);  // x_n^{(n-1)}
        const Mat& to = member(n).stage(n - 1);        // x_n^{(n)}
        if (&member(n - 1) == &member(n) && R.is_unital()) {
            a[n] = Mat::identity(R, from.rows());
            b[n] = Mat::identity(R, from.cols());
        } else {
            auto r = precsim1(from, to, opt);
            if (r.verdict != Truth::yes) throw InvalidInput("seq_sup: missing witness at stage " + std::to_string(n));
            a[n] = r.witness->r;
            b[n] = r.witness->t;
        }
        if (n <= K) out.alignment.push_back(Sub1Witness{a[n], b[n]});
    }
    const std::size_t first = R.is_unital() ? 1 : 2;
    if (R.is_unital()) {
        b[1] = Mat::identity(R, member(1).stage(0).cols());
    }
    if (first > L) throw InvalidInput("seq_sup: non-unital input needs at least two stages");

    SeqElem s;
    s.ring = &R;
    for (std::size_t n = first; n <= L; ++n) {
        s.x.push_back(member(n).stage(n - 1) * b[n]);
        if (n < L) s.y.push_back(member(n).witness(n - 1) * a[n + 1]);
    }
    const Mat& last_b = b[L];
    bool clean_tail = top.tail == Tail::stabilized && L > K && R.is_unital() && last_b == Mat::identity(R, last_b.rows());
    s.tail = clean_tail ? Tail::stabilized : Tail::open;
    if (clean_tail) s.tail_witness = top.witness(L - 1);
    require_valid(s, "seq_sup result");
    out.sup = std::move(s);
    return out;
}

// ---------------------------------------------------------------------------
// Compactness
// ---------------------------------------------------------------------------

struct CompactResult {
    Truth verdict = Truth::unknown;
    Cert cert = Cert::exact;
    std::optional<Mat> z, s;   // z == s * z * z
    std::size_t n0 = 0;        // 1-based stage used
    std::string method;
};

/// z equivalent to x (both directions of <=1) with z = s z^2, over square z up to max_size.
inline CompactResult compact_witness_search(const Mat& x, std::size_t max_size, const Sub1Options& opt = {}) {
    const FiniteRing& R = x.ring();
    CompactResult out;
    out.cert = Cert::bound_relative;
    out.method = "exhaustive";
    if (x.is_zero()) {
        out.verdict = Truth::yes;
        out.cert = Cert::exact;
        out.z = out.s = Mat(R, 1, 1);
        return out;
    }
    bool unknown = false;
    for (std::size_t k = 1; k <= max_size; ++k) {
        for_each_matrix(R, k, k, [&](const Mat& z) {
            if (z.is_zero()) return true;
            Mat z2 = z * z;
            auto s = left_solve(z, z2);
            if (!s) return true;
            auto ab = precsim1(z, x, opt);
            if (ab.verdict == Truth::no) return true;
            auto ba = precsim1(x, z, opt);
            if (ab.verdict == Truth::unknown || ba.verdict == Truth::unknown) { unknown = true; return true; }
            if (ba.verdict != Truth::yes) return true;
            out.z = z;
            out.s = *s;
            return false;
        });
        if (out.z) break;
    }
    out.verdict = out.z ? Truth::yes : unknown ? Truth::unknown : Truth::no;
    if (out.z) out.cert = Cert::exact;
    return out;
}

struct CompactOptions {
    std::size_t search_size = 2;
    Sub1Options sub1;
};

/// Finds n0 with x_{n0+k} <=1 x_{n0} for all later stages, then x_{n0+1} = r x_{n0} t gives
/// z = x_{n0} t and s = y_{n0+1} r with z = s z^2, and [(x_n)] = [(z)].
inline CompactResult is_compact_seq(const SeqElem& seq, const CompactOptions& opt = {}) {
    require_valid(seq, "is_compact_seq");
    const std::size_t N = seq.length();
    const bool stable = seq.tail == Tail::stabilized;
    const SeqElem s = stable ? seq.extended(N + 1) : seq;
    CompactResult out;
    out.cert = stable ? Cert::exact : Cert::stage_relative;
    const std::size_t last_candidate = stable ? N : N - 1;  // open tails need a later stored stage
    for (std::size_t n0 = 1; n0 <= last_candidate; ++n0) {
        const Mat& xn = s.x[n0 - 1];
        bool dominates = true;
        for (std::size_t m = n0 + 1; m <= s.length() && dominates; ++m) {
            auto r = precsim1(s.x[m - 1], xn, opt.sub1);
            if (r.verdict != Truth::yes) dominates = false;
        }
        if (!dominates) continue;
        out.n0 = n0;
        if (is_idempotent(xn)) {
            out.z = out.s = xn;
            out.method = "idempotent stage";
        } else {
            auto r = precsim1(s.x[n0], xn, opt.sub1);
            Mat z = xn * r.witness->t;
            Mat sw = s.y[n0 - 1] * r.witness->r;
            if (sw * z * z != z) throw InvariantBreach("compactness recipe failed: z != s z^2");
            auto zx = precsim1(z, xn, opt.sub1), xz = precsim1(xn, z, opt.sub1);
            if (zx.verdict != Truth::yes || xz.verdict != Truth::yes) {
                auto ex = compact_witness_search(xn, opt.search_size, opt.sub1);
                if (ex.verdict == Truth::yes) {
                    out.z = ex.z;
                    out.s = ex.s;
                    out.method = "exhaustive";
                } else {
                    continue;
                }
            } else {
                out.z = z;
                out.s = sw;
                out.method = "recipe";
            }
        }
        out.verdict = Truth::yes;
        return out;
    }
    out.verdict = Truth::unknown;
    out.method = "no dominating stage among stored stages";
    return out;
}

// ---------------------------------------------------------------------------
// Column-finite idempotents
// ---------------------------------------------------------------------------

/// Truncation of a column-finite idempotent E with row blocks n_2..n_{N+1} and column blocks
/// n_2..n_N.  Z[i] is the corner with row blocks up to i+2 and column blocks up to i+1.
/// An explicit square idempotent (stabilized, finitely generated case) is stored in finite.
struct ColIdem {
    std::vector<std::size_t> blocks;
    std::optional<Mat> E;
    std::vector<Mat> Z;
    std::optional<Mat> finite;

    std::size_t rows_upto(std::size_t nb) const {
        std::size_t s = 0;
        for (std::size_t i = 0; i < nb; ++i) s += blocks[i];
        return s;
    }

    std::optional<std::string> corner_violation() const {
        if (finite) {
            if (!is_idempotent(*finite)) return "explicit matrix is not idempotent";
            return std::nullopt;
        }
        for (std::size_t i = 0; i + 1 < Z.size(); ++i) {
            const Mat& zi = Z[i];
            Mat expect = Z[i + 1].rows() > zi.rows()
                             ? vstack(zi, Mat(zi.ring(), Z[i + 1].rows() - zi.rows(), zi.cols()))
                             : zi;
            if (Z[i + 1].cols() != zi.rows() || Z[i + 1] * zi != expect)
                return "corner relation fails at " + std::to_string(i);
        }
        return std::nullopt;
    }
};

namespace detail {

inline Mat product_or_identity(const FiniteRing& R, const std::vector<const Mat*>& fs, std::size_t n) {
    if (fs.empty()) return Mat::identity(R, n);
    Mat p = *fs.front();
    for (std::size_t i = 1; i < fs.size(); ++i) p = p * *fs[i];
    return p;
}

inline void put_block(Mat& E, std::size_t r0, std::size_t c0, const Mat& b) {
    for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) E.at(r0 + i, c0 + j) = b(i, j);
}

}  // namespace detail

/// The idempotent E = iota o pi of the splitting, assembled column block by column block.
/// Column block i (1-based stage, i >= 2) holds y_2...y_i x_i in row block 2,
/// y_m...y_i x_i - x_{m-1} y_{m-1}...y_i x_i in row block m (2 < m <= i), and x_i - x_i y_i x_i
/// in row block i+1.  Stabilized tails are first extended by `extra` stages.
inline ColIdem seq_to_idem(const SeqElem& seq, std::size_t extra = 1) {
    require_valid(seq, "seq_to_idem");
    const SeqElem s = seq.tail == Tail::stabilized ? seq.extended(seq.length() + extra) : seq;
    const FiniteRing& R = *s.ring;
    const std::size_t N = s.length();
    if (N < 2) throw InvalidInput("seq_to_idem needs at least two stages");
    // 1-based accessors: X(i) = x_i, Y(i) = y_i relating x_i and x_{i-1}
    auto X = [&](std::size_t i) -> const Mat& { return s.x[i - 1]; };
    auto Y = [&](std::size_t i) -> const Mat& { return s.y[i - 2]; };
    ColIdem out;
    for (std::size_t m = 2; m <= N + 1; ++m) out.blocks.push_back(m <= N ? X(m).cols() : X(N).rows());
    const std::size_t rows = out.rows_upto(N), cols = out.rows_upto(N - 1);
    Mat E(R, rows, cols);
    auto off = [&](std::size_t m) { return out.rows_upto(m - 2); };
    for (std::size_t i = 2; i <= N; ++i) {
        // tails[m] = y_m ... y_i x_i for 2 <= m <= i
        std::vector<Mat> tails(i + 1);
        tails[i] = Y(i) * X(i);
        for (std::size_t m = i; m-- > 2;) tails[m] = Y(m) * tails[m + 1];
        detail::put_block(E, off(2), off(i), tails[2]);
        for (std::size_t m = 3; m <= i; ++m) detail::put_block(E, off(m), off(i), tails[m] - X(m - 1) * tails[m - 1]);
        detail::put_block(E, off(i + 1), off(i), X(i) - X(i) * Y(i) * X(i));
    }
    // E^2 == E on every column block whose support lies inside the truncation
    const std::size_t checked_cols = out.rows_upto(N - 2);
    if (checked_cols > 0) {
        Mat Esq = E.block(0, 0, cols, cols);
        Mat lhs = E * Esq;
        if (lhs.block(0, 0, rows, checked_cols) != E.block(0, 0, rows, checked_cols))
            throw InvariantBreach("seq_to_idem: E^2 != E on the truncation (witness inconsistency)");
    }
    for (std::size_t i = 1; i + 1 <= N; ++i) out.Z.push_back(E.block(0, 0, out.rows_upto(i + 1), out.rows_upto(i)));
    out.E = std::move(E);
    if (auto bad = out.corner_violation()) throw InvariantBreach("seq_to_idem: " + *bad);
    return out;
}

/// Stages are the corners, witnesses [I | 0] since Z_{i+1} Z_i = [Z_i; 0].
inline SeqElem idem_to_seq(const ColIdem& c) {
    if (auto bad = c.corner_violation()) throw InvalidInput("idem_to_seq: " + *bad);
    if (c.finite) {
        if (c.finite->is_zero()) return SeqElem::zero(c.finite->ring(), c.finite->rows());
        return SeqElem::constant(*c.finite, *c.finite);
    }
    if (c.Z.empty()) throw InvalidInput("idem_to_seq: no corners");
    const FiniteRing& R = c.Z.front().ring();
    if (!R.is_unital()) throw InvalidInput("idem_to_seq: [I | 0] witnesses need a unital ring");
    SeqElem s;
    s.ring = &R;
    s.tail = Tail::open;
    s.x = c.Z;
    for (std::size_t i = 0; i + 1 < c.Z.size(); ++i) {
        const std::size_t r = c.Z[i].rows(), extra = c.Z[i + 1].rows() - r;
        Mat I = Mat::identity(R, r);
        s.y.push_back(extra ? hstack(I, Mat(R, r, extra)) : I);
    }
    require_valid(s, "idem_to_seq result");
    return s;
}

inline SeqElem idem_to_seq(const Mat& e) {
    ColIdem c;
    c.finite = e;
    c.blocks = {e.rows()};
    return idem_to_seq(c);
}

// ---------------------------------------------------------------------------
// Splitting
// ---------------------------------------------------------------------------

struct SplitReport {
    bool ok = true;
    std::size_t generators = 0;
    std::string failure;
};

/// Elements of the limit are pairs (stage j, a in R^{n_j}).  With the witness identities,
/// phi_j(a) = 0 exactly when x_j a = 0, so equality is decided one stage up.
/// g_i(phi_j a) = y_{i+1}...y_j x_j a for j > i and x_i...x_j a for j <= i;
/// iota = (g_1, g_2 - x_2 g_1, g_3 - x_3 g_2, ...) on blocks 2, 3, ...;  pi sums phi_m.
inline SplitReport splitting_check(const SeqElem& seq) {
    require_valid(seq, "splitting_check");
    const SeqElem s = seq.tail == Tail::stabilized ? seq.extended(seq.length() + 2) : seq;
    const FiniteRing& R = *s.ring;
    const std::size_t N = s.length();
    auto X = [&](std::size_t i) -> const Mat& { return s.x[i - 1]; };
    auto Y = [&](std::size_t i) -> const Mat& { return s.y[i - 2]; };
    // push a vector at stage j to stage k >= j
    auto push = [&](Mat v, std::size_t j, std::size_t k) {
        for (std::size_t t = j; t < k; ++t) v = X(t) * v;
        return v;
    };
    auto g = [&](std::size_t i, std::size_t j, const Mat& a) {
        if (j <= i) return push(a, j, i + 1);
        Mat v = X(j) * a;
        for (std::size_t t = j; t >= i + 1; --t) v = Y(t) * v;
        return v;
    };
    SplitReport rep;
    for (std::size_t j = 2; j + 1 <= N; ++j) {
        const std::size_t nj = X(j).cols();
        // generators: unit vectors, or every single-entry vector when there is no identity
        std::vector<Mat> gens;
        for (std::size_t e = 0; e < nj; ++e)
            for (Elem v = 1; v < R.size(); ++v) {
                if (R.is_unital() && v != *R.one()) continue;
                Mat a(R, nj, 1);
                a.at(e, 0) = v;
                gens.push_back(std::move(a));
            }
        for (const auto& a : gens) {
            ++rep.generators;
            Mat total(R, X(j).rows(), 1);  // pi(iota(phi_j a)) pushed to stage j+1
            for (std::size_t m = 2; m <= j + 1; ++m) {
                Mat c = g(m - 1, j, a);
                if (m > 2) c = c - X(m - 1) * g(m - 2, j, a);
                total = total + push(c, m, j + 1);
            }
            if (!(X(j + 1) * (total - X(j) * a)).is_zero() && rep.ok) {
                rep.ok = false;
                rep.failure = "pi(iota(phi_" + std::to_string(j) + "(" + a.transpose().str() + "))) differs";
            }
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Functoriality
// ---------------------------------------------------------------------------

inline Mat map_mat(const RingHom& f, const Mat& m) {
    if (m.ring_ptr() != f.source().get()) throw InvalidInput("map_mat: matrix not over the hom's source");
    return map_entries(m, *f.target(), [&](Elem a) { return f(a); });
}

inline SeqElem induce_morphism(const RingHom& f, const SeqElem& s) {
    require_valid(s, "induce_morphism");
    SeqElem t;
    t.ring = f.target().get();
    t.tail = s.tail;
    for (const auto& m : s.x) t.x.push_back(map_mat(f, m));
    for (const auto& m : s.y) t.y.push_back(map_mat(f, m));
    if (s.tail_witness) t.tail_witness = map_mat(f, *s.tail_witness);
    require_valid(t, "induce_morphism result");
    return t;
}

/// Image of a W class along f, classified in the target truncation.
inline std::optional<std::size_t> induce_class(const RingHom& f, const TruncatedPoM& src, const TruncatedPoM& dst,
                                               std::size_t cls) {
    if (src.ring != f.source().get() || dst.ring != f.target().get())
        throw InvalidInput("induce_class: truncations do not match the hom");
    return dst.classify(map_mat(f, src.reps.at(cls)));
}

// ---------------------------------------------------------------------------
// Generators and interval images
// ---------------------------------------------------------------------------

/// A random valid sequence, built from the last stage backwards so every witness equation is
/// solvable.  Stages that resist max_tries draws fall back to zero.
template <class Rng>
SeqElem random_seq(const FiniteRing& R, Rng& rng, std::size_t stages, std::size_t max_dim, Tail tail,
                   std::size_t max_tries = 64) {
    if (stages == 0 || max_dim == 0) throw InvalidInput("random_seq: empty shape");
    std::uniform_int_distribution<std::size_t> dim(1, max_dim);
    std::uniform_int_distribution<Elem> pick(0, Elem(R.size() - 1));
    auto random_mat = [&](std::size_t r, std::size_t c) {
        Mat m(R, r, c);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < c; ++j) m.at(i, j) = pick(rng);
        return m;
    };
    std::vector<std::size_t> n(stages + 1);
    for (auto& v : n) v = dim(rng);
    if (tail == Tail::stabilized) n[stages] = n[stages - 1];
    SeqElem s;
    s.ring = &R;
    s.tail = tail;
    s.x.assign(stages, Mat());
    s.y.assign(stages - 1, Mat());
    // last stage
    {
        std::size_t r = n[stages], c = n[stages - 1];
        Mat last = Mat(R, r, c);
        std::optional<Mat> w;
        for (std::size_t t = 0; t < max_tries; ++t) {
            Mat cand = random_mat(r, c);
            if (tail == Tail::open) { last = cand; break; }
            auto sol = left_solve(cand, cand * cand);
            if (sol) { last = cand; w = sol; break; }
        }
        if (tail == Tail::stabilized && !w) w = Mat(R, r, r);
        s.x[stages - 1] = last;
        s.tail_witness = w;
    }
    for (std::size_t i = stages - 1; i-- > 0;) {
        const Mat& next = s.x[i + 1];
        std::size_t r = n[i + 1], c = n[i];
        bool done = false;
        for (std::size_t t = 0; t < max_tries && !done; ++t) {
            Mat cand = random_mat(r, c);
            auto sol = left_solve(cand, next * cand);
            if (sol) {
                s.x[i] = cand;
                s.y[i] = *sol;
                done = true;
            }
        }
        if (!done) {
            s.x[i] = Mat(R, r, c);
            s.y[i] = Mat(R, r, next.rows());
        }
    }
    require_valid(s, "random_seq");
    return s;
}

/// Class in a W truncation of the interval generated by the stages: for finite fragments that is
/// the class of the last stage.  Stage-relative for open tails.
inline std::optional<std::size_t> interval_image(const TruncatedPoM& W, const SeqElem& s) {
    require_valid(s, "interval_image");
    return W.classify(s.x.back());
}

}  // namespace cuntz
