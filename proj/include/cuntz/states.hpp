#pragma once
/**
 * @file states.hpp
 * @brief Normalized states (dimension functions, Sylvester rank functions) on finite ordered
 * monoid fragments and on the symbolic rank monoids, with exact vertex enumeration, and the
 * extension of a state to a functional on intervals.
 */

#include "cu_lattice.hpp"
#include "rational.hpp"
#include "wr_monoid.hpp"

#include <random>
#include <set>

namespace cuntz {

using QVec = std::vector<Rational>;

/// sum coef[k] x[k]  (==|>=)  rhs
struct LinearConstraint {
    enum class Kind { eq, ge };
    QVec coef;
    Kind kind = Kind::ge;
    Rational rhs;
    std::string origin;

    bool satisfied_by(const QVec& x) const {
        Rational s = 0;
        for (std::size_t k = 0; k < coef.size(); ++k)
            if (!coef[k].is_zero()) s += coef[k] * x[k];
        return kind == Kind::eq ? s == rhs : s >= rhs;
    }
};

enum class StateVariant { dimension, sylvester };

struct StatePolytope {
    std::vector<std::string> variables;
    std::string unit;
    std::vector<LinearConstraint> constraints;
    std::vector<QVec> vertices;
    bool empty = false;
    bool vertices_enumerated = false;
    std::string empty_reason;
    std::string fragment;
    Cert cert = Cert::exact;
    std::uint64_t sylvester_triples = 0;

    /// Every stored vertex satisfies every constraint exactly.
    std::optional<std::string> violation() const {
        for (std::size_t v = 0; v < vertices.size(); ++v)
            for (const auto& c : constraints)
                if (!c.satisfied_by(vertices[v])) return "vertex " + std::to_string(v) + " violates " + c.origin;
        return std::nullopt;
    }
};

struct VertexOptions {
    std::size_t max_variables = 12;
    std::uint64_t max_subsets = std::uint64_t{1} << 22;
};

namespace detail {

inline void normalize_row(QVec& a, Rational& b) {
    for (const auto& x : a)
        if (!x.is_zero()) {
            Rational s = x.sign() < 0 ? -x : x;
            for (auto& y : a) y = y / s;
            b = b / s;
            return;
        }
}

/// Reduced row echelon form of [A | b] in place; returns pivot columns, or nullopt when inconsistent.
inline std::optional<std::vector<std::size_t>> rref(std::vector<QVec>& A, QVec& b, std::size_t n) {
    std::vector<std::size_t> piv;
    std::size_t r = 0;
    for (std::size_t c = 0; c < n && r < A.size(); ++c) {
        std::size_t p = r;
        while (p < A.size() && A[p][c].is_zero()) ++p;
        if (p == A.size()) continue;
        std::swap(A[p], A[r]);
        std::swap(b[p], b[r]);
        Rational inv = Rational(1) / A[r][c];
        for (auto& x : A[r]) x *= inv;
        b[r] *= inv;
        for (std::size_t i = 0; i < A.size(); ++i) {
            if (i == r || A[i][c].is_zero()) continue;
            Rational f = A[i][c];
            for (std::size_t k = 0; k < n; ++k) A[i][k] -= f * A[r][k];
            b[i] -= f * b[r];
        }
        piv.push_back(c);
        ++r;
    }
    for (std::size_t i = r; i < A.size(); ++i)
        if (!b[i].is_zero()) return std::nullopt;
    return piv;
}

inline std::uint64_t binom_capped(std::uint64_t m, std::uint64_t k, std::uint64_t cap) {
    if (k > m) return 0;
    unsigned __int128 c = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        c = c * (m - k + i) / i;
        if (c > cap) return cap + 1;
    }
    return std::uint64_t(c);
}

}  // namespace detail

/// Exact vertex enumeration: eliminate the equalities, then try every basis of tight
/// inequalities in the remaining free coordinates.  Bounded polytopes only.
inline void enumerate_vertices(StatePolytope& P, const VertexOptions& opt = {}) {
    const std::size_t n = P.variables.size();
    std::vector<QVec> A;
    QVec b;
    std::vector<std::pair<QVec, Rational>> ge;
    for (const auto& c : P.constraints) {
        if (c.kind == LinearConstraint::Kind::eq) {
            A.push_back(c.coef);
            b.push_back(c.rhs);
        } else {
            ge.emplace_back(c.coef, c.rhs);
        }
    }
    auto piv = detail::rref(A, b, n);
    if (!piv) {
        P.empty = true;
        P.empty_reason = "equalities are inconsistent";
        P.vertices_enumerated = true;
        return;
    }
    std::vector<char> is_piv(n, 0);
    for (auto c : *piv) is_piv[c] = 1;
    std::vector<std::size_t> free;
    for (std::size_t c = 0; c < n; ++c)
        if (!is_piv[c]) free.push_back(c);
    const std::size_t k = free.size();
    // x = x0 + N t
    QVec x0(n, Rational(0));
    std::vector<QVec> N(n, QVec(k, Rational(0)));
    for (std::size_t i = 0; i < piv->size(); ++i) {
        std::size_t c = (*piv)[i];
        x0[c] = b[i];
        for (std::size_t f = 0; f < k; ++f) N[c][f] = -A[i][free[f]];
    }
    for (std::size_t f = 0; f < k; ++f) N[free[f]][f] = 1;

    std::vector<std::pair<QVec, Rational>> rows;  // g t >= h
    std::set<std::vector<std::pair<std::int64_t, std::int64_t>>> seen;
    for (auto& [a, rhs] : ge) {
        QVec g(k, Rational(0));
        Rational h = rhs;
        for (std::size_t c = 0; c < n; ++c) {
            if (a[c].is_zero()) continue;
            h -= a[c] * x0[c];
            for (std::size_t f = 0; f < k; ++f) g[f] += a[c] * N[c][f];
        }
        if (std::all_of(g.begin(), g.end(), [](const Rational& x) { return x.is_zero(); })) {
            if (h > Rational(0)) {
                P.empty = true;
                P.empty_reason = "constant inequality fails after eliminating equalities";
                P.vertices_enumerated = true;
                return;
            }
            continue;
        }
        detail::normalize_row(g, h);
        std::vector<std::pair<std::int64_t, std::int64_t>> key;
        for (auto& x : g) key.emplace_back(x.num(), x.den());
        key.emplace_back(h.num(), h.den());
        if (seen.insert(key).second) rows.emplace_back(std::move(g), h);
    }

    auto lift = [&](const QVec& t) {
        QVec x = x0;
        for (std::size_t c = 0; c < n; ++c)
            for (std::size_t f = 0; f < k; ++f)
                if (!N[c][f].is_zero()) x[c] += N[c][f] * t[f];
        return x;
    };
    auto feasible = [&](const QVec& t) {
        for (auto& [g, h] : rows) {
            Rational s = 0;
            for (std::size_t f = 0; f < k; ++f) s += g[f] * t[f];
            if (s < h) return false;
        }
        return true;
    };

    P.vertices.clear();
    if (k == 0) {
        if (feasible({})) P.vertices.push_back(x0);
        P.vertices_enumerated = true;
        P.empty = P.vertices.empty();
        if (P.empty) P.empty_reason = "unique solution of the equalities violates an inequality";
        return;
    }
    if (n > opt.max_variables || detail::binom_capped(rows.size(), k, opt.max_subsets) > opt.max_subsets) {
        P.vertices_enumerated = false;
        return;
    }
    std::set<std::vector<std::pair<std::int64_t, std::int64_t>>> vseen;
    std::vector<std::size_t> idx(k);
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t pos, std::size_t start) {
        if (pos == k) {
            std::vector<QVec> M;
            QVec rhs;
            for (auto i : idx) {
                M.push_back(rows[i].first);
                rhs.push_back(rows[i].second);
            }
            auto pv = detail::rref(M, rhs, k);
            if (!pv || pv->size() != k) return;
            QVec t(k);
            for (std::size_t i = 0; i < k; ++i) t[(*pv)[i]] = rhs[i];
            if (!feasible(t)) return;
            QVec x = lift(t);
            std::vector<std::pair<std::int64_t, std::int64_t>> key;
            for (auto& v : x) key.emplace_back(v.num(), v.den());
            if (vseen.insert(key).second) P.vertices.push_back(std::move(x));
            return;
        }
        for (std::size_t i = start; i + (k - pos) <= rows.size(); ++i) {
            idx[pos] = i;
            rec(pos + 1, i + 1);
        }
    };
    rec(0, 0);
    std::sort(P.vertices.begin(), P.vertices.end(), [](const QVec& a, const QVec& b) {
        return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
    });
    P.vertices_enumerated = true;
    P.empty = P.vertices.empty();
    if (P.empty) P.empty_reason = "no feasible basic solution";
}

// ---------------------------------------------------------------------------
// Finite fragments
// ---------------------------------------------------------------------------

/// x <= n u for some multiple n u that the table defines.
inline bool is_order_unit(const FinitePoM& M, std::size_t u) {
    std::vector<std::size_t> mult{u};
    std::vector<char> seen(M.size(), 0);
    seen[u] = 1;
    while (true) {
        auto nx = M.add[mult.back()][u];
        if (!nx || seen[*nx]) break;
        seen[*nx] = 1;
        mult.push_back(*nx);
    }
    for (std::size_t x = 0; x < M.size(); ++x)
        if (std::none_of(mult.begin(), mult.end(), [&](std::size_t m) { return M.le(x, m); })) return false;
    return true;
}

struct SylvesterOptions {
    std::uint64_t exhaustive_limit = 256;  // per (a, b) pair; above this c is sampled
    std::uint64_t samples = 32;
    std::uint64_t seed = 1;
    unsigned jobs = 1;
};

namespace detail {

inline StatePolytope finite_constraints(const FinitePoM& M, std::size_t u) {
    if (u >= M.size()) throw InvalidInput("unit out of range");
    if (!is_order_unit(M, u)) throw InvalidInput("element " + M.labels[u] + " is not an order-unit of the fragment");
    StatePolytope P;
    P.variables = M.labels;
    P.unit = M.labels[u];
    const std::size_t n = M.size();
    auto row = [&]() { return QVec(n, Rational(0)); };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            auto s = M.add[i][j];
            if (!s) continue;
            LinearConstraint c{row(), LinearConstraint::Kind::eq, 0,
                               "d(" + M.labels[i] + ")+d(" + M.labels[j] + ")=d(" + M.labels[*s] + ")"};
            c.coef[i] += 1;
            c.coef[j] += 1;
            c.coef[*s] -= 1;
            if (std::any_of(c.coef.begin(), c.coef.end(), [](const Rational& x) { return !x.is_zero(); }))
                P.constraints.push_back(std::move(c));
        }
    for (auto [i, j] : M.hasse()) {
        LinearConstraint c{row(), LinearConstraint::Kind::ge, 0, "d(" + M.labels[i] + ")<=d(" + M.labels[j] + ")"};
        c.coef[j] += 1;
        c.coef[i] -= 1;
        P.constraints.push_back(std::move(c));
    }
    LinearConstraint norm{row(), LinearConstraint::Kind::eq, 1, "d(" + M.labels[u] + ")=1"};
    norm.coef[u] = 1;
    P.constraints.push_back(std::move(norm));
    return P;
}

}  // namespace detail

/// Normalized states on a finite ordered-monoid fragment (only defined sums constrain).
inline StatePolytope state_polytope(const FinitePoM& M, std::size_t u, const VertexOptions& vopt = {}) {
    auto P = detail::finite_constraints(M, u);
    P.fragment = "finite table with " + std::to_string(M.size()) + " elements";
    P.cert = M.add_total() ? Cert::exact : Cert::truncation_relative;
    enumerate_vertices(P, vopt);
    return P;
}

/// States on a truncated W(R).  The Sylvester variant adds d(a)+d(b) <= d([[a,c],[0,b]]) for
/// representatives a, b and every (or sampled) c whose block-triangular matrix classifies.
inline StatePolytope state_polytope(const TruncatedPoM& W, std::size_t u, StateVariant variant,
                                    const SylvesterOptions& sopt = {}, const VertexOptions& vopt = {}) {
    auto P = detail::finite_constraints(W.pom, u);
    P.fragment = "W(" + W.ring->name() + ") matrices up to " + std::to_string(W.kmax) + "x" + std::to_string(W.kmax);
    P.cert = Cert::truncation_relative;
    if (variant == StateVariant::sylvester) {
        const FiniteRing& R = *W.ring;
        std::mt19937_64 rng(sopt.seed);
        bool sampled = false;
        // candidate triangular matrices first, so the order of constraints does not depend on jobs
        std::vector<std::tuple<std::size_t, std::size_t, Mat>> cand;
        for (std::size_t i = 1; i < W.size(); ++i)
            for (std::size_t j = 1; j < W.size(); ++j) {
                const Mat &a = W.reps[i], &b = W.reps[j];
                const Mat lower = hstack(Mat::zero(R, b.rows(), a.cols()), b);
                auto push = [&](const Mat& c) { cand.emplace_back(i, j, vstack(hstack(a, c), lower)); };
                std::uint64_t count = matrix_count(R, a.rows(), b.cols(), sopt.exhaustive_limit + 1);
                if (count <= sopt.exhaustive_limit) {
                    for_each_matrix(R, a.rows(), b.cols(), [&](const Mat& c) { push(c); return true; });
                } else {
                    sampled = true;
                    std::uniform_int_distribution<Elem> pick(0, Elem(R.size() - 1));
                    for (std::uint64_t s = 0; s < sopt.samples; ++s) {
                        Mat c(R, a.rows(), b.cols());
                        for (std::size_t r = 0; r < c.rows(); ++r)
                            for (std::size_t q = 0; q < c.cols(); ++q) c.at(r, q) = pick(rng);
                        push(c);
                    }
                }
            }
        std::vector<std::optional<std::size_t>> cls(cand.size());
        parallel_for(cand.size(), sopt.jobs, [&](std::size_t k) { cls[k] = W.classify(std::get<2>(cand[k])); });
        P.sylvester_triples = cand.size();
        std::set<std::tuple<std::size_t, std::size_t, std::size_t>> added;
        for (std::size_t k = 0; k < cand.size(); ++k) {
            auto [i, j, T] = cand[k];
            if (!cls[k] || !added.insert({i, j, *cls[k]}).second) continue;
            std::size_t t = *cls[k];
            LinearConstraint con{QVec(W.size(), Rational(0)), LinearConstraint::Kind::ge, 0,
                                 "d(" + W.pom.labels[i] + ")+d(" + W.pom.labels[j] + ")<=d(" + W.pom.labels[t] + ")"};
            con.coef[t] += 1;
            con.coef[i] -= 1;
            con.coef[j] -= 1;
            P.constraints.push_back(std::move(con));
        }
        if (sampled) P.cert = Cert::sampled;
    }
    enumerate_vertices(P, vopt);
    return P;
}

// ---------------------------------------------------------------------------
// Symbolic rank monoids
// ---------------------------------------------------------------------------

/// States on N^r or the NSD monoid are linear, d(x) = sum beta_k x_k.  Monotonicity is imposed
/// on every comparable pair of a grid [0, grid]^r; the generated cone is reached at grid 1 already,
/// so the grid only adds redundant rows.
inline StatePolytope state_polytope(const SymbolicMonoid& M, const Pt& u, std::uint64_t grid = 3,
                                    const VertexOptions& vopt = {}) {
    M.require(u);
    StatePolytope P;
    for (std::size_t k = 0; k < M.rank; ++k) P.variables.push_back("beta" + std::to_string(k));
    P.unit = pt_str(u);
    P.fragment = M.name() + " comparable pairs on the grid [0," + std::to_string(grid) + "]^" + std::to_string(M.rank);
    P.cert = Cert::bound_relative;
    if (std::any_of(u.begin(), u.end(), [](std::uint64_t v) { return v == INF; })) {
        P.empty = true;
        P.vertices_enumerated = true;
        P.empty_reason = "u + u = u forces d(u) = 0";
        return P;
    }
    for (std::size_t k = 0; k < M.rank; ++k)
        if (u[k] == 0 && M.kind != SymKind::nsd)
            throw InvalidInput(pt_str(u) + " is not an order-unit of " + M.name());
    if (M.kind == SymKind::nsd && u[0] == 0) throw InvalidInput(pt_str(u) + " is not an order-unit of " + M.name());

    std::vector<Pt> pts;
    Pt x(M.rank, 0);
    std::function<void(std::size_t)> gen = [&](std::size_t k) {
        if (k == M.rank) { pts.push_back(x); return; }
        for (std::uint64_t v = 0; v <= grid; ++v) { x[k] = v; gen(k + 1); }
    };
    gen(0);
    std::set<std::vector<std::int64_t>> seen;
    for (const auto& a : pts)
        for (const auto& b : pts) {
            if (a == b || !M.leq(a, b)) continue;
            std::vector<std::int64_t> diff(M.rank);
            for (std::size_t k = 0; k < M.rank; ++k) diff[k] = std::int64_t(b[k]) - std::int64_t(a[k]);
            std::int64_t g = 0;
            for (auto v : diff) g = std::gcd(g, v < 0 ? -v : v);
            for (auto& v : diff) v /= g;
            if (!seen.insert(diff).second) continue;
            LinearConstraint c{QVec(M.rank), LinearConstraint::Kind::ge, 0, "d" + pt_str(a) + "<=d" + pt_str(b)};
            for (std::size_t k = 0; k < M.rank; ++k) c.coef[k] = diff[k];
            P.constraints.push_back(std::move(c));
        }
    LinearConstraint norm{QVec(M.rank), LinearConstraint::Kind::eq, 1, "d" + pt_str(u) + "=1"};
    for (std::size_t k = 0; k < M.rank; ++k) norm.coef[k] = std::int64_t(u[k]);
    P.constraints.push_back(std::move(norm));
    enumerate_vertices(P, vopt);
    return P;
}

/// State value at a finite point of a symbolic monoid.
inline Rational evaluate(const QVec& beta, const Pt& x) {
    Rational s = 0;
    for (std::size_t k = 0; k < beta.size(); ++k) {
        if (!is_finite(x[k])) throw InvalidInput("state evaluation at a non-finite point");
        s += beta[k] * Rational(std::int64_t(x[k]));
    }
    return s;
}

// ---------------------------------------------------------------------------
// Functionals on intervals
// ---------------------------------------------------------------------------

/// Nonnegative rational or infinity.
struct ExtValue {
    bool infinite = false;
    Rational value;

    static ExtValue inf() { return {true, 0}; }
    friend bool operator==(const ExtValue& a, const ExtValue& b) {
        return a.infinite == b.infinite && (a.infinite || a.value == b.value);
    }
    friend ExtValue operator+(const ExtValue& a, const ExtValue& b) {
        if (a.infinite || b.infinite) return inf();
        return {false, a.value + b.value};
    }
    friend bool operator<=(const ExtValue& a, const ExtValue& b) {
        if (b.infinite) return true;
        if (a.infinite) return false;
        return a.value <= b.value;
    }
    std::string str() const { return infinite ? "inf" : value.str(); }
};

/// Supremum of d over I for the linear state with coefficients beta.  For NSD the interval is
/// {r <= R, r + s <= T} and d(r, s) = a r + b s with a >= b >= 0, so the sup is (a-b)R + bT.
inline ExtValue extend_functional(const SymbolicMonoid& M, const QVec& beta, const Interval& I) {
    if (beta.size() != M.rank) throw InvalidInput("state has wrong number of coefficients");
    Pt caps = interval_caps(M, I);
    QVec w = beta;
    if (M.kind == SymKind::nsd) {
        if (beta[1] < Rational(0) || beta[0] < beta[1]) throw InvalidInput("not a state on the NSD monoid");
        w = {beta[0] - beta[1], beta[1]};
    }
    ExtValue out{false, 0};
    for (std::size_t k = 0; k < caps.size(); ++k) {
        if (w[k] < Rational(0)) throw InvalidInput("state coefficient is negative");
        if (w[k].is_zero()) continue;
        if (!is_finite(caps[k])) return ExtValue::inf();
        out.value += w[k] * Rational(std::int64_t(caps[k]));
    }
    return out;
}

/// Finite fragment: intervals of a finite monoid have a largest element, so the sup is d there.
inline ExtValue extend_functional(const FiniteLambda& L, const QVec& d, std::size_t interval) {
    std::optional<Rational> best;
    for (std::size_t x = 0; x < L.sets[interval].size(); ++x)
        if (L.sets[interval][x] && (!best || *best < d[x])) best = d[x];
    if (!best) throw InvalidInput("empty interval");
    return {false, *best};
}

}  // namespace cuntz
