#pragma once
/**
 * @file subequiv.hpp
 * @brief The relation a <=1 b (a = r b t), the Malcolmson closure, and constructive witnesses.
 */

#include "field.hpp"
#include "uniserial.hpp"

#include <deque>
#include <functional>

namespace cuntz {

struct Sub1Witness {
    Mat r, t;
};

struct Sub1Options {
    std::uint64_t budget = default_budget;
    bool fast_path = true;  // rank test over prime fields, valuation test over Z/p^k
    bool reduce = true;     // drop dependent rows/columns first (unital rings)
};

struct Sub1Result {
    Truth verdict = Truth::unknown;
    std::optional<Sub1Witness> witness;
    std::uint64_t work = 0;
    bool used_fast_path = false;

    explicit operator bool() const { return verdict == Truth::yes; }
};

namespace detail {

/// Rows (or columns) of m that are not combinations of earlier kept ones.
inline std::optional<std::vector<std::size_t>> independent_lines(const Mat& m, bool rows, std::uint64_t cap) {
    std::vector<std::size_t> kept;
    std::vector<std::vector<Elem>> gens;
    const std::size_t count = rows ? m.rows() : m.cols();
    for (std::size_t i = 0; i < count; ++i) {
        auto r = rows ? m.row(i) : m.col(i);
        if (std::all_of(r.begin(), r.end(), [](Elem x) { return x == 0; })) continue;
        if (!gens.empty()) {
            Span s(m.ring(), gens, rows, cap);
            if (!s.complete()) return std::nullopt;
            if (s.find(r)) continue;
        }
        kept.push_back(i);
        gens.push_back(std::move(r));
    }
    return kept;
}

inline std::optional<std::vector<std::size_t>> independent_rows(const Mat& m, std::uint64_t cap) {
    return independent_lines(m, true, cap);
}

inline Mat select_rows(const Mat& m, const std::vector<std::size_t>& rows) {
    Mat s(m.ring(), rows.size(), m.rows());
    for (std::size_t k = 0; k < rows.size(); ++k) s.at(k, rows[k]) = *m.ring().one();
    return s;
}

/// a = Comb * a_kept where a_kept = rows of a listed in kept.
inline std::optional<Mat> row_combination(const Mat& a, const std::vector<std::size_t>& kept, std::uint64_t cap) {
    Mat kept_rows = select_rows(a, kept) * a;
    return left_solve(a, kept_rows, cap);
}

struct Reduced {
    Mat m;
    Mat left, right;  // original = left * m * right  (for a)  or  m = left * original * right (for b)
};

/// b' = Sr * b * Sc with b' ~1 b; only selections, so a = r' b' t' lifts to a = (r' Sr) b (Sc t').
inline std::optional<Reduced> reduce_target(const Mat& b, std::uint64_t cap) {
    auto rows = independent_rows(b, cap);
    if (!rows || rows->empty()) return std::nullopt;
    Mat Sr = select_rows(b, *rows);
    Mat b1 = Sr * b;
    auto cols = independent_lines(b1, false, cap);
    if (!cols || cols->empty()) return std::nullopt;
    Mat Sc(b.ring(), b.cols(), cols->size());
    for (std::size_t k = 0; k < cols->size(); ++k) Sc.at((*cols)[k], k) = *b.ring().one();
    return Reduced{b1 * Sc, Sr, Sc};
}

/// a = L * a' * Rt with a' made of independent rows/columns of a.
inline std::optional<Reduced> reduce_source(const Mat& a, std::uint64_t cap) {
    auto rows = independent_rows(a, cap);
    if (!rows || rows->empty()) return std::nullopt;
    auto L = row_combination(a, *rows, cap);
    if (!L) return std::nullopt;
    Mat a1 = select_rows(a, *rows) * a;
    auto cols = independent_lines(a1, false, cap);
    if (!cols || cols->empty()) return std::nullopt;
    Mat Sc(a.ring(), a.cols(), cols->size());
    for (std::size_t k = 0; k < cols->size(); ++k) Sc.at((*cols)[k], k) = *a.ring().one();
    Mat a2 = a1 * Sc;
    auto Rt = right_solve(a1, a2, cap);
    if (!Rt) return std::nullopt;
    return Reduced{a2, *L, *Rt};
}

/// Exhaustive search for r with a = r * M where the columns of M range over C.
inline Sub1Result generic_search(const Mat& a, const Mat& b, std::uint64_t budget) {
    const FiniteRing& R = a.ring();
    const std::size_t m = a.rows(), n = a.cols(), p = b.rows();
    Sub1Result res;
    Span C = column_span(b, budget);
    if (!C.complete()) return res;
    res.work = C.size();

    const std::uint64_t row_choices = pow_capped(R.size(), p, budget + 1);
    if (row_choices > budget) return res;

    std::vector<std::vector<std::size_t>> cand0(n);
    for (std::size_t j = 0; j < n; ++j) {
        cand0[j].resize(C.size());
        std::iota(cand0[j].begin(), cand0[j].end(), std::size_t{0});
    }
    Mat r(R, m, p);
    std::vector<std::vector<std::vector<std::size_t>>> level(m + 1);
    level[0] = cand0;
    bool over = false;

    std::vector<Elem> rho(p);
    // depth-first over rows of r
    std::function<bool(std::size_t)> dfs = [&](std::size_t i) -> bool {
        if (i == m) return true;
        std::fill(rho.begin(), rho.end(), 0);
        for (std::uint64_t idx = 0; idx < row_choices; ++idx) {
            if (idx) {
                std::size_t q = p;
                while (q-- > 0) {
                    if (++rho[q] < R.size()) break;
                    rho[q] = 0;
                }
            }
            auto& next = level[i + 1];
            next.assign(n, {});
            bool ok = true;
            for (std::size_t j = 0; j < n && ok; ++j) {
                for (std::size_t ci : level[i][j]) {
                    const auto& c = C.members()[ci];
                    Elem s = 0;
                    for (std::size_t k = 0; k < p; ++k) s = R.add(s, R.mul(rho[k], c[k]));
                    if (s == a(i, j)) next[j].push_back(ci);
                }
                res.work += level[i][j].size();
                if (next[j].empty()) ok = false;
            }
            if (res.work > budget) { over = true; return false; }
            if (!ok) continue;
            for (std::size_t k = 0; k < p; ++k) r.at(i, k) = rho[k];
            auto saved = rho;
            if (dfs(i + 1)) return true;
            if (over) return false;
            rho = saved;
        }
        return false;
    };
    if (dfs(0)) {
        Mat t(R, b.cols(), n);
        for (std::size_t j = 0; j < n; ++j) {
            const auto& coef = C.coefficients(level[m][j].front());
            for (std::size_t k = 0; k < coef.size(); ++k) t.at(k, j) = coef[k];
        }
        res.verdict = Truth::yes;
        res.witness = Sub1Witness{r, t};
        return res;
    }
    res.verdict = over ? Truth::unknown : Truth::no;
    return res;
}

}  // namespace detail

/// Decides a <=1 b.  Any returned witness satisfies a = r * b * t exactly.
inline Sub1Result precsim1(const Mat& a, const Mat& b, const Sub1Options& opt = {}) {
    if (a.ring_ptr() != b.ring_ptr()) throw InvalidInput("precsim1: matrices over different rings");
    const FiniteRing& R = a.ring();
    Sub1Result res;
    if (a.is_zero()) {
        res.verdict = Truth::yes;
        res.witness = Sub1Witness{Mat(R, a.rows(), b.rows()), Mat(R, b.cols(), a.cols())};
        return res;
    }
    if (b.is_zero()) {
        res.verdict = Truth::no;
        return res;
    }
    if (opt.fast_path && R.prime_field()) {
        auto da = field_decompose(a), db = field_decompose(b);
        res.used_fast_path = true;
        if (da.rank > db.rank) {
            res.verdict = Truth::no;
            return res;
        }
        Mat L = rank_pattern(R, a.rows(), b.rows(), da.rank);
        Mat T = rank_pattern(R, b.cols(), a.cols(), da.rank);
        Sub1Witness w{da.Pinv * L * db.P, db.Q * T * da.Qinv};
        if (w.r * b * w.t != a) throw InvariantBreach("field witness failed to reproduce a");
        res.verdict = Truth::yes;
        res.witness = std::move(w);
        return res;
    }
    if (opt.fast_path && R.chain_ring()) {
        // a = Uai Da Vai, Db = Ub b Vb; match the i-th smallest valuation of a to that of b
        auto ca = diagonalize(a), cb = diagonalize(b);
        res.used_fast_path = true;
        const unsigned k = ca.k;
        auto order = [&](const Mat& D) {
            std::vector<std::size_t> idx;
            for (std::size_t i = 0; i < std::min(D.rows(), D.cols()); ++i)
                if (D(i, i) != 0) idx.push_back(i);
            std::stable_sort(idx.begin(), idx.end(),
                             [&](std::size_t x, std::size_t y) { return valuation(R, D(x, x)) < valuation(R, D(y, y)); });
            return idx;
        };
        if (!valuation_dominated(diagonal_valuations(ca.D), diagonal_valuations(cb.D), k)) {
            res.verdict = Truth::no;
            return res;
        }
        auto ia = order(ca.D), ib = order(cb.D);
        Mat L(R, a.rows(), b.rows()), T(R, b.cols(), a.cols());
        for (std::size_t q = 0; q < ia.size(); ++q) {
            auto t = chain_quotient(R, ca.D(ia[q], ia[q]), cb.D(ib[q], ib[q]));
            if (!t) throw InvariantBreach("valuation domination without a quotient");
            L.at(ia[q], ib[q]) = *R.one();
            T.at(ib[q], ia[q]) = *t;
        }
        Sub1Witness w{ca.Uinv * L * cb.U, cb.V * T * ca.Vinv};
        if (w.r * b * w.t != a) throw InvariantBreach("valuation witness failed to reproduce a");
        res.verdict = Truth::yes;
        res.witness = std::move(w);
        return res;
    }
    if (opt.reduce && R.is_unital()) {
        auto rb = detail::reduce_target(b, opt.budget);
        auto ra = detail::reduce_source(a, opt.budget);
        if (ra && rb) {
            auto inner = detail::generic_search(ra->m, rb->m, opt.budget);
            if (inner.verdict == Truth::yes) {
                // a = La a' Ra, a' = r' b' t', b' = Sr b Sc
                Sub1Witness w{ra->left * inner.witness->r * rb->left, rb->right * inner.witness->t * ra->right};
                if (w.r * b * w.t != a) throw InvariantBreach("reduced witness failed to reproduce a");
                inner.witness = std::move(w);
            }
            return inner;
        }
    }
    res = detail::generic_search(a, b, opt.budget);
    if (res.witness && res.witness->r * b * res.witness->t != a)
        throw InvariantBreach("generic witness failed to reproduce a");
    return res;
}

inline Truth sub1_equivalent(const Mat& a, const Mat& b, const Sub1Options& opt = {}) {
    auto x = precsim1(a, b, opt).verdict;
    if (x == Truth::no) return x;
    auto y = precsim1(b, a, opt).verdict;
    if (y == Truth::no) return y;
    return (x == Truth::yes && y == Truth::yes) ? Truth::yes : Truth::unknown;
}

// ---------------------------------------------------------------------------
// Malcolmson relation
// ---------------------------------------------------------------------------

struct MalcolmsonOptions {
    std::size_t depth = 1;
    std::size_t size_cap = 2;  // intermediate matrices have at most this many rows and columns
    Sub1Options sub1;
};

struct MalcolmsonResult {
    Truth verdict = Truth::unknown;
    Cert cert = Cert::bound_relative;
    std::vector<Mat> chain;  // a = chain.front(), ..., chain.back() = b (trimmed)
    std::size_t explored = 0;
};

/// Every trimmed matrix with both dimensions <= cap.
inline std::vector<Mat> trimmed_universe(const FiniteRing& R, std::size_t cap, std::uint64_t budget) {
    std::vector<Mat> out;
    for (std::size_t r = 1; r <= cap; ++r)
        for (std::size_t c = 1; c <= cap; ++c) {
            if (matrix_count(R, r, c, budget + 1) > budget) throw BoundExceeded("universe too large for size cap");
            for_each_matrix(R, r, c, [&](const Mat& m) {
                Mat t = trim(m);
                if (t.rows() == r && t.cols() == c) out.push_back(m);
                return true;
            });
        }
    return out;
}

/// Matrices y = [[c,e],[0,d]] reachable from x = diag(c,d) by one triangular step, within cap.
inline std::vector<Mat> triangular_successors(const Mat& x, std::size_t cap) {
    const FiniteRing& R = x.ring();
    std::vector<Mat> out;
    for (std::size_t rr = x.rows(); rr <= cap; ++rr)
        for (std::size_t cc = x.cols(); cc <= cap; ++cc) {
            Mat xp = pad(x, rr, cc);
            for (std::size_t p1 = 1; p1 < rr; ++p1)
                for (std::size_t q1 = 1; q1 < cc; ++q1) {
                    if (!xp.block(0, q1, p1, cc - q1).is_zero()) continue;
                    if (!xp.block(p1, 0, rr - p1, q1).is_zero()) continue;
                    for_each_matrix(R, p1, cc - q1, [&](const Mat& e) {
                        Mat y = xp;
                        y.set_block(0, q1, e);
                        out.push_back(trim(y));
                        return true;
                    });
                }
        }
    return out;
}

/// Graph of <=1 and triangular steps on the trimmed universe of a ring, built lazily.
class MalcolmsonGraph {
public:
    MalcolmsonGraph(const FiniteRing& R, std::size_t cap, Sub1Options opt = {})
        : ring_(&R), cap_(cap), opt_(opt) {
        nodes_ = trimmed_universe(R, cap, opt.budget);
        for (std::size_t i = 0; i < nodes_.size(); ++i) index_.emplace(nodes_[i], i);
    }

    std::size_t size() const { return nodes_.size(); }
    const std::vector<Mat>& nodes() const { return nodes_; }
    std::optional<std::size_t> index(const Mat& m) const {
        auto it = index_.find(trim(m));
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    /// Successors of node i; sets unknown_ if some <=1 verdict was undecided.
    const std::vector<std::size_t>& successors(std::size_t i) {
        auto it = succ_.find(i);
        if (it != succ_.end()) return it->second;
        std::vector<std::size_t> s;
        std::vector<char> seen(nodes_.size(), 0);
        for (std::size_t j = 0; j < nodes_.size(); ++j) {
            auto v = precsim1(nodes_[i], nodes_[j], opt_).verdict;
            if (v == Truth::unknown) unknown_ = true;
            if (v == Truth::yes) { s.push_back(j); seen[j] = 1; }
        }
        for (const Mat& y : triangular_successors(nodes_[i], cap_)) {
            auto k = index(y);
            if (k && !seen[*k]) { s.push_back(*k); seen[*k] = 1; }
        }
        std::sort(s.begin(), s.end());
        return succ_.emplace(i, std::move(s)).first->second;
    }

    bool saw_unknown() const { return unknown_; }

    /// Breadth-first search from a toward b using at most depth steps.
    MalcolmsonResult search(const Mat& a, const Mat& b, std::size_t depth) {
        MalcolmsonResult res;
        Mat ta = trim(a), tb = trim(b);
        if (!ta.is_zero() && tb.is_zero()) {
            res.verdict = Truth::no;
            res.cert = Cert::exact;
            return res;
        }
        auto ia = index(ta), ib = index(tb);
        if (!ia || !ib) throw InvalidInput("matrix exceeds the Malcolmson size cap");
        std::vector<std::size_t> parent(nodes_.size(), SIZE_MAX);
        parent[*ia] = *ia;
        std::vector<std::size_t> frontier{*ia};
        auto visited = [&] {
            return static_cast<std::size_t>(
                std::count_if(parent.begin(), parent.end(), [](std::size_t p) { return p != SIZE_MAX; }));
        };
        for (std::size_t step = 0; step < depth && !frontier.empty(); ++step) {
            std::vector<std::size_t> next;
            for (std::size_t u : frontier)
                for (std::size_t v : successors(u)) {
                    if (v == *ib) {
                        std::vector<Mat> rev{nodes_[v]};
                        for (std::size_t w = u;; w = parent[w]) {
                            rev.push_back(nodes_[w]);
                            if (parent[w] == w) break;
                        }
                        res.chain.assign(rev.rbegin(), rev.rend());
                        res.verdict = Truth::yes;
                        res.cert = Cert::exact;
                        res.explored = visited();
                        return res;
                    }
                    if (parent[v] != SIZE_MAX) continue;
                    parent[v] = u;
                    next.push_back(v);
                }
            frontier = std::move(next);
        }
        res.explored = visited();
        res.verdict = unknown_ ? Truth::unknown : Truth::no;
        res.cert = Cert::bound_relative;
        return res;
    }

private:
    struct Hash {
        std::size_t operator()(const Mat& m) const { return MatHash{}(m); }
    };
    const FiniteRing* ring_;
    std::size_t cap_;
    Sub1Options opt_;
    std::vector<Mat> nodes_;
    std::unordered_map<Mat, std::size_t, Hash> index_;
    std::map<std::size_t, std::vector<std::size_t>> succ_;
    bool unknown_ = false;
};

inline MalcolmsonResult precsimM(const Mat& a, const Mat& b, const MalcolmsonOptions& opt) {
    std::size_t cap = std::max({opt.size_cap, trim(a).rows(), trim(a).cols(), trim(b).rows(), trim(b).cols()});
    MalcolmsonGraph g(a.ring(), cap, opt.sub1);
    return g.search(a, b, opt.depth);
}

struct SeparationFinding {
    Mat a, b;  // a <=M b but not a <=1 b
    std::vector<Mat> chain;
};

/// Pairs in the trimmed universe related by the Malcolmson closure but not by <=1.
inline std::vector<SeparationFinding> malcolmson_separation_search(const FiniteRing& R, std::size_t cap,
                                                                   const Sub1Options& opt = {}) {
    MalcolmsonGraph g(R, cap, opt);
    std::vector<SeparationFinding> out;
    const std::size_t n = g.size();
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<std::size_t> parent(n, SIZE_MAX);
        std::deque<std::size_t> q{i};
        parent[i] = i;
        while (!q.empty()) {
            std::size_t u = q.front();
            q.pop_front();
            for (std::size_t v : g.successors(u))
                if (parent[v] == SIZE_MAX) { parent[v] = u; q.push_back(v); }
        }
        for (std::size_t j = 0; j < n; ++j) {
            if (parent[j] == SIZE_MAX || j == i) continue;
            if (precsim1(g.nodes()[i], g.nodes()[j], opt).verdict != Truth::no) continue;
            SeparationFinding f{g.nodes()[i], g.nodes()[j], {}};
            std::vector<Mat> rev;
            for (std::size_t w = j; w != i; w = parent[w]) rev.push_back(g.nodes()[w]);
            rev.push_back(g.nodes()[i]);
            f.chain.assign(rev.rbegin(), rev.rend());
            out.push_back(std::move(f));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Constructive witnesses
// ---------------------------------------------------------------------------

/// a = b * a * c witnesses (weak s-unitality at a single matrix).
inline std::optional<Sub1Witness> s_unit_witness(const Mat& a, const Sub1Options& opt = {}) {
    const FiniteRing& R = a.ring();
    if (R.is_unital()) return Sub1Witness{Mat::identity(R, a.rows()), Mat::identity(R, a.cols())};
    auto res = precsim1(a, a, opt);
    if (res.verdict == Truth::yes) return res.witness;
    return std::nullopt;
}

struct ComplementResult {
    Truth verdict = Truth::unknown;
    Mat f, w;
    Sub1Witness rs;           // normalized e = r v s, r = e r, s = s e
    Sub1Witness e_below_f;    // e = r1 f t1
    Sub1Witness f_below_e;
    Sub1Witness v_below_sum;  // v = r * diag(f,w) * t
    Sub1Witness sum_below_v;  // diag(f,w) = r * v * t
    std::string failure;
};

/// Splits v as f (+) w with [f] = [e], given [e] <= [v].
inline ComplementResult complement(const Mat& e, const Mat& v, std::optional<Sub1Witness> hint = std::nullopt,
                                   const Sub1Options& opt = {}) {
    ComplementResult out;
    if (!is_idempotent(e)) throw InvalidInput("complement: e is not idempotent");
    if (e.ring_ptr() != v.ring_ptr()) throw InvalidInput("complement: rings differ");
    if (!hint) {
        auto res = precsim1(e, v, opt);
        if (res.verdict != Truth::yes) {
            out.verdict = res.verdict;
            out.failure = res.verdict == Truth::no ? "[e] <= [v] fails" : "witness search budget exceeded";
            return out;
        }
        hint = res.witness;
    }
    if (hint->r * v * hint->t != e) throw InvalidInput("complement: supplied witness does not give e = r v s");
    Mat r = e * hint->r, s = hint->t * e;
    out.rs = {r, s};
    out.f = v * s * r;
    out.w = v - out.f * v;
    if (!is_idempotent(out.f)) throw InvariantBreach("complement: f = vsr is not idempotent");
    out.e_below_f = {r, v * s};
    out.f_below_e = {v * s, r};
    if (out.e_below_f.r * out.f * out.e_below_f.t != e || out.f_below_e.r * e * out.f_below_e.t != out.f)
        throw InvariantBreach("complement: [e] = [f] witnesses failed");

    auto ab = s_unit_witness(out.w, opt);
    auto cd = s_unit_witness(v, opt);
    if (!ab || !cd) {
        out.verdict = Truth::unknown;
        out.failure = "no weak s-unit witness for w or v";
        return out;
    }
    const Mat& a = ab->r;
    const Mat& b = ab->t;
    const Mat& c = cd->r;
    const Mat& d = cd->t;
    Mat fw = diag_sum(out.f, out.w);
    out.v_below_sum = {hstack(out.f, a), vstack(v, b)};
    Mat fc = out.f * c, dsr = d * s * r;
    out.sum_below_v = {vstack(fc, c - fc), hstack(dsr, d - dsr * v)};
    if (out.v_below_sum.r * fw * out.v_below_sum.t != v)
        throw InvariantBreach("complement: v <= f (+) w witness failed");
    if (out.sum_below_v.r * v * out.sum_below_v.t != fw)
        throw InvariantBreach("complement: f (+) w <= v witness failed");
    out.verdict = Truth::yes;
    return out;
}

struct RegularResult {
    Truth verdict = Truth::unknown;
    Mat x, e;             // a = a x a, x = x a x, e = a x
    Sub1Witness e_below_a;  // e = r a t
    Sub1Witness a_below_e;  // a = r e t
};

/// Looks for x with a = a x a by exhaustive search; returns e = a x.
inline RegularResult regular_idempotent(const Mat& a, std::uint64_t budget = default_budget) {
    RegularResult out;
    const FiniteRing& R = a.ring();
    std::optional<Mat> found;
    if (matrix_count(R, a.cols(), a.rows(), budget + 1) <= budget) {
        for_each_matrix(R, a.cols(), a.rows(), [&](const Mat& x) {
            if (a * x * a == a) { found = x; return false; }
            return true;
        });
        if (!found) { out.verdict = Truth::no; return out; }
    } else if (R.prime_field()) {
        auto d = field_decompose(a);
        found = d.Q * rank_pattern(R, a.cols(), a.rows(), d.rank) * d.P;
    } else {
        return out;
    }
    Mat x = *found * a * *found;
    out.x = x;
    out.e = a * x;
    if (a * x * a != a || x * a * x != x || !is_idempotent(out.e))
        throw InvariantBreach("regular_idempotent: normalization failed");
    out.e_below_a = {out.e, x};
    out.a_below_e = {out.e, a};
    if (out.e_below_a.r * a * out.e_below_a.t != out.e || out.a_below_e.r * out.e * out.a_below_e.t != a)
        throw InvariantBreach("regular_idempotent: equivalence witnesses failed");
    out.verdict = Truth::yes;
    return out;
}

/// Left and right factors L, N with L * [[a,c],[0,b]] * N = diag(a,b), for a = a a' a in a unital ring.
inline Sub1Witness triangular_factors(const Mat& a, const Mat& a_inner, const Mat& b, const Mat& c) {
    const FiniteRing& R = a.ring();
    if (!R.is_unital()) throw InvalidInput("triangular_factors needs a unital ring");
    if (a * a_inner * a != a) throw InvalidInput("triangular_factors: a' is not an inner inverse");
    if (c.rows() != a.rows() || c.cols() != b.cols()) throw InvalidInput("triangular_factors: c has the wrong shape");
    Mat L = diag_sum(a * a_inner, Mat::identity(R, b.rows()));
    Mat N(R, a.cols() + b.cols(), a.cols() + b.cols());
    N.set_block(0, 0, a_inner * a);
    N.set_block(0, a.cols(), -(a_inner * c));
    N.set_block(a.cols(), a.cols(), Mat::identity(R, b.cols()));
    return {L, N};
}

/// [[a,c],[0,b]]
inline Mat upper_block(const Mat& a, const Mat& b, const Mat& c) {
    Mat m = diag_sum(a, b);
    m.set_block(0, a.cols(), c);
    return m;
}

}  // namespace cuntz
