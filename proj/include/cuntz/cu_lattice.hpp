#pragma once
/**
 * @file cu_lattice.hpp
 * @brief Symbolic and finite positively ordered monoids, their countably generated intervals,
 * the way-below relation and a checker for the Cu axioms O1-O4.
 *
 * Symbolic points are coordinate vectors; `inf` marks the top element of N-bar and `omega` the
 * unbounded cap of an interval that does not contain inf.  Increasing sequences are described
 * by per-coordinate affine data b + floor(num * n / den).
 */

#include "pom.hpp"
#include "wr_monoid.hpp"

#include <limits>

namespace cuntz {

inline constexpr std::uint64_t INF = std::numeric_limits<std::uint64_t>::max();
inline constexpr std::uint64_t OMEGA = INF - 1;

using Pt = std::vector<std::uint64_t>;

inline bool is_finite(std::uint64_t x) { return x < OMEGA; }

inline std::uint64_t cap_add(std::uint64_t a, std::uint64_t b) {
    if (a == INF || b == INF) return INF;
    if (a == OMEGA || b == OMEGA) return OMEGA;
    if (a > OMEGA - 1 - b) throw BoundExceeded("coordinate overflow");
    return a + b;
}

inline std::string cap_str(std::uint64_t x) {
    if (x == INF) return "inf";
    if (x == OMEGA) return "omega";
    return std::to_string(x);
}

inline std::string pt_str(const Pt& p) {
    if (p.size() == 1) return cap_str(p[0]);
    std::string s = "(";
    for (std::size_t k = 0; k < p.size(); ++k) s += (k ? "," : "") + cap_str(p[k]);
    return s + ")";
}

/// Increasing sequence n |-> base + floor(num * n / den) per coordinate; base may be inf (constant).
struct Affine {
    Pt base;
    std::vector<std::uint64_t> num, den;

    static Affine constant(const Pt& p) { return {p, std::vector<std::uint64_t>(p.size(), 0), std::vector<std::uint64_t>(p.size(), 1)}; }
    static Affine linear(const Pt& base, const std::vector<std::uint64_t>& slope) {
        return {base, slope, std::vector<std::uint64_t>(base.size(), 1)};
    }
    std::size_t rank() const { return base.size(); }
    bool grows(std::size_t k) const { return base[k] != INF && num[k] != 0; }
    Pt at(std::uint64_t n) const {
        Pt p(base.size());
        for (std::size_t k = 0; k < p.size(); ++k) p[k] = base[k] == INF ? INF : base[k] + num[k] * n / den[k];
        return p;
    }
    std::string str() const {
        std::string s = "n -> (";
        for (std::size_t k = 0; k < base.size(); ++k) {
            if (k) s += ", ";
            if (base[k] == INF || num[k] == 0) {
                s += cap_str(base[k]);
                continue;
            }
            s += std::to_string(base[k]) + "+";
            s += den[k] == 1 ? std::to_string(num[k]) + "n" : "floor(" + std::to_string(num[k]) + "n/" + std::to_string(den[k]) + ")";
        }
        return s + ")";
    }
};

/// Pointwise sum of two increasing sequences.  Rational slopes add exactly only for equal
/// denominators; mixed denominators are brought to a common one, which can shift floors by one
/// but never changes which coordinates are bounded.
inline Affine affine_add(const Affine& a, const Affine& b) {
    if (a.rank() != b.rank()) throw InvalidInput("affine_add rank mismatch");
    Affine c = a;
    for (std::size_t k = 0; k < a.rank(); ++k) {
        c.base[k] = cap_add(a.base[k], b.base[k]);
        c.den[k] = a.den[k] * b.den[k];
        c.num[k] = a.num[k] * b.den[k] + b.num[k] * a.den[k];
        if (c.base[k] == INF) c.num[k] = 0;
        if (a.den[k] == b.den[k]) {
            c.den[k] = a.den[k];
            c.num[k] = c.base[k] == INF ? 0 : a.num[k] + b.num[k];
        }
    }
    return c;
}

// ---------------------------------------------------------------------------
// Symbolic monoids
// ---------------------------------------------------------------------------

enum class SymKind {
    nat,     // N^r, componentwise
    natbar,  // (N u {inf})^r, componentwise
    nsd      // N x N with (r',s') <= (r,s) iff r'+s' <= r+s and r' <= r
};

struct SymbolicMonoid {
    SymKind kind = SymKind::nat;
    std::size_t rank = 1;

    static SymbolicMonoid nat(std::size_t r = 1) { return {SymKind::nat, r}; }
    static SymbolicMonoid natbar(std::size_t r = 1) { return {SymKind::natbar, r}; }
    static SymbolicMonoid nsd() { return {SymKind::nsd, 2}; }

    std::string name() const {
        std::string base = kind == SymKind::nat ? "N" : kind == SymKind::natbar ? "Nbar" : "NxN(nsd)";
        if (kind != SymKind::nsd && rank != 1) base += "^" + std::to_string(rank);
        return base;
    }

    bool contains(const Pt& x) const {
        if (x.size() != rank) return false;
        for (auto v : x) {
            if (v == OMEGA) return false;
            if (v == INF && kind != SymKind::natbar) return false;
        }
        return true;
    }
    void require(const Pt& x) const {
        if (!contains(x)) throw InvalidInput(pt_str(x) + " is not an element of " + name());
    }

    bool leq(const Pt& a, const Pt& b) const {
        require(a);
        require(b);
        if (kind == SymKind::nsd) return a[0] + a[1] <= b[0] + b[1] && a[0] <= b[0];
        for (std::size_t k = 0; k < rank; ++k)
            if (a[k] > b[k]) return false;  // INF is the largest value
        return true;
    }

    Pt add(const Pt& a, const Pt& b) const {
        require(a);
        require(b);
        Pt c(rank);
        for (std::size_t k = 0; k < rank; ++k) c[k] = cap_add(a[k], b[k]);
        return c;
    }

    Pt zero() const { return Pt(rank, 0); }

    /// A descriptor is increasing iff it stays in the monoid; every nonnegative affine map does.
    bool valid_chain(const Affine& c) const {
        if (c.rank() != rank) return false;
        for (std::size_t k = 0; k < rank; ++k) {
            if (c.den[k] == 0) return false;
            if (c.base[k] == OMEGA) return false;
            if (c.base[k] == INF && kind != SymKind::natbar) return false;
        }
        return true;
    }

    std::optional<Pt> sup(const Affine& c) const {
        if (!valid_chain(c)) throw InvalidInput("not an increasing sequence in " + name());
        Pt s(rank);
        for (std::size_t k = 0; k < rank; ++k) {
            if (!c.grows(k)) {
                s[k] = c.base[k];
                continue;
            }
            if (kind != SymKind::natbar) return std::nullopt;  // unbounded, no element above it
            s[k] = INF;
        }
        return s;
    }

    bool is_upper_bound(const Affine& c, const Pt& u) const {
        require(u);
        if (kind == SymKind::nsd) {
            if (c.grows(0) || c.grows(1)) return false;
            return leq(c.base, u);
        }
        for (std::size_t k = 0; k < rank; ++k) {
            if (u[k] == INF) continue;
            if (c.grows(k) || c.base[k] > u[k]) return false;
        }
        return true;
    }

    bool eventually_above(const Affine& c, const Pt& x) const {
        require(x);
        if (kind == SymKind::nsd) {
            // r_n and r_n + s_n are nondecreasing, so compare their limits with x
            std::uint64_t R = c.grows(0) ? OMEGA : c.base[0];
            std::uint64_t T = (c.grows(0) || c.grows(1)) ? OMEGA : c.base[0] + c.base[1];
            return x[0] <= R && x[0] + x[1] <= T;
        }
        for (std::size_t k = 0; k < rank; ++k) {
            if (x[k] == INF) {
                if (c.base[k] != INF) return false;
            } else if (!c.grows(k) && c.base[k] < x[k]) {
                return false;
            }
        }
        return true;
    }

    /// Closed forms.  In N^r and the NSD order every increasing sequence with a supremum is
    /// eventually constant, so way-below is the order itself.  In Nbar^r, x << y iff x <= y
    /// and x has no infinite coordinate.
    bool way_below(const Pt& x, const Pt& y) const {
        if (!leq(x, y)) return false;
        if (kind != SymKind::natbar) return true;
        for (auto v : x)
            if (v == INF) return false;
        return true;
    }

    /// A rapidly increasing sequence with supremum x, if one exists.
    std::optional<Affine> rapid(const Pt& x) const {
        require(x);
        if (kind != SymKind::natbar) return Affine::constant(x);  // needs x << x, true here
        Affine c = Affine::constant(x);
        for (std::size_t k = 0; k < rank; ++k)
            if (x[k] == INF) {
                c.base[k] = 0;
                c.num[k] = 1;
            }
        return c;
    }
};

// ---------------------------------------------------------------------------
// Intervals of symbolic monoids
// ---------------------------------------------------------------------------

/// Interval in a symbolic monoid.  Every countably generated interval of the supported kinds is
/// determined by a cap vector: N^r and Nbar^r use per-coordinate caps in N u {omega} (u {inf}
/// for Nbar); the NSD order uses (sup r, sup r+s).
struct Interval {
    enum class Form { principal, chain, caps };
    Form form = Form::caps;
    Pt point;     // principal
    Affine chain; // chain
    Pt cap;       // caps

    static Interval principal(Pt x) { Interval I; I.form = Form::principal; I.point = std::move(x); return I; }
    static Interval of_chain(Affine c) { Interval I; I.form = Form::chain; I.chain = std::move(c); return I; }
    static Interval of_caps(Pt c) { Interval I; I.form = Form::caps; I.cap = std::move(c); return I; }
};

inline Pt interval_caps(const SymbolicMonoid& M, const Interval& I) {
    switch (I.form) {
    case Interval::Form::principal:
        M.require(I.point);
        if (M.kind == SymKind::nsd) return {I.point[0], I.point[0] + I.point[1]};
        return I.point;
    case Interval::Form::chain: {
        const Affine& c = I.chain;
        if (!M.valid_chain(c)) throw InvalidInput("interval chain is not increasing in " + M.name());
        if (M.kind == SymKind::nsd) {
            std::uint64_t R = c.grows(0) ? OMEGA : c.base[0];
            std::uint64_t T = (c.grows(0) || c.grows(1)) ? OMEGA : c.base[0] + c.base[1];
            return {R, T};
        }
        Pt p(M.rank);
        for (std::size_t k = 0; k < M.rank; ++k) p[k] = c.grows(k) ? OMEGA : c.base[k];
        return p;
    }
    case Interval::Form::caps: {
        if (I.cap.size() != M.rank) throw InvalidInput("cap vector has wrong length");
        for (auto v : I.cap)
            if (v == INF && M.kind != SymKind::natbar) throw InvalidInput("inf cap outside Nbar");
        if (M.kind == SymKind::nsd && I.cap[0] > I.cap[1]) throw InvalidInput("NSD caps need sup r <= sup r+s");
        return I.cap;
    }
    }
    throw InvalidInput("unknown interval form");
}

inline bool interval_contains(const SymbolicMonoid& M, const Interval& I, const Pt& x) {
    M.require(x);
    Pt c = interval_caps(M, I);
    if (M.kind == SymKind::nsd) return x[0] <= c[0] && x[0] + x[1] <= c[1];  // OMEGA exceeds every finite value
    for (std::size_t k = 0; k < M.rank; ++k) {
        if (x[k] == INF ? c[k] != INF : x[k] > c[k]) return false;
    }
    return true;
}

/// Inclusion; caps are ordered finite < omega < inf.
inline bool interval_subset(const SymbolicMonoid& M, const Interval& I, const Interval& J) {
    Pt a = interval_caps(M, I), b = interval_caps(M, J);
    for (std::size_t k = 0; k < a.size(); ++k)
        if (a[k] > b[k]) return false;
    return true;
}

inline Interval interval_add(const SymbolicMonoid& M, const Interval& I, const Interval& J) {
    Pt a = interval_caps(M, I), b = interval_caps(M, J);
    if (I.form == Interval::Form::principal && J.form == Interval::Form::principal)
        return Interval::principal(M.add(I.point, J.point));
    Pt c(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) c[k] = cap_add(a[k], b[k]);
    return Interval::of_caps(c);
}

/// The element x with I = [0, x], if I is principal.
inline std::optional<Pt> interval_generator(const SymbolicMonoid& M, const Interval& I) {
    Pt c = interval_caps(M, I);
    for (auto v : c)
        if (v == OMEGA) return std::nullopt;
    if (M.kind == SymKind::nsd) return Pt{c[0], c[1] - c[0]};
    return c;
}

/// I << J iff some y in J has I inside [0, y].  The smallest candidate y is computed from the
/// caps of I (omega rounded up to inf in Nbar) and tested for membership in J.
inline bool way_below(const SymbolicMonoid& M, const Interval& I, const Interval& J) {
    Pt c = interval_caps(M, I);
    Pt y(c.size());
    if (M.kind == SymKind::nsd) {
        if (!is_finite(c[0]) || !is_finite(c[1])) return false;
        y = {c[0], c[1] - c[0]};
    } else {
        for (std::size_t k = 0; k < c.size(); ++k) {
            if (is_finite(c[k])) y[k] = c[k];
            else if (M.kind == SymKind::natbar) y[k] = INF;
            else return false;
        }
    }
    return interval_contains(M, J, y);
}

inline std::string interval_str(const SymbolicMonoid& M, const Interval& I) {
    if (auto g = interval_generator(M, I)) return "[0," + pt_str(*g) + "]";
    return "caps" + pt_str(interval_caps(M, I));
}

// ---------------------------------------------------------------------------
// Intervals of finite monoids
// ---------------------------------------------------------------------------

struct FiniteLambda {
    FinitePoM pom;                           // intervals ordered by inclusion
    std::vector<std::vector<char>> sets;     // membership of each interval
    std::vector<std::size_t> embed;          // x |-> index of [0, x]
};

inline bool is_interval(const FinitePoM& M, const std::vector<char>& s) {
    const std::size_t n = M.size();
    bool any = false;
    for (std::size_t x = 0; x < n; ++x) {
        if (!s[x]) continue;
        any = true;
        for (std::size_t y = 0; y < n; ++y)
            if (M.le(y, x) && !s[y]) return false;  // hereditary
    }
    if (!any) return false;
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y) {
            if (!s[x] || !s[y]) continue;
            bool up = false;
            for (std::size_t z = 0; z < n && !up; ++z) up = s[z] && M.le(x, z) && M.le(y, z);
            if (!up) return false;  // directed
        }
    return true;
}

/// Enumerates every interval by brute force over subsets (n <= 20) and builds the interval
/// monoid.  I + J is the hereditary hull of {x + y}; left undefined when some x + y is.
inline FiniteLambda lambda_sigma(const FinitePoM& M) {
    const std::size_t n = M.size();
    if (n > 20) throw BoundExceeded("lambda_sigma: too many elements for subset enumeration");
    FiniteLambda L;
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
        std::vector<char> s(n);
        for (std::size_t x = 0; x < n; ++x) s[x] = (mask >> x) & 1;
        if (is_interval(M, s)) L.sets.push_back(std::move(s));
    }
    const std::size_t m = L.sets.size();
    auto principal_of = [&](std::size_t x) {
        std::vector<char> s(n);
        for (std::size_t y = 0; y < n; ++y) s[y] = M.le(y, x);
        return s;
    };
    auto index_of = [&](const std::vector<char>& s) -> std::size_t {
        for (std::size_t i = 0; i < m; ++i)
            if (L.sets[i] == s) return i;
        throw InvariantBreach("lambda_sigma: set is not an enumerated interval");
    };
    for (std::size_t x = 0; x < n; ++x) L.embed.push_back(index_of(principal_of(x)));
    for (std::size_t i = 0; i < m; ++i) {
        std::string label;
        for (std::size_t x = 0; x < n; ++x)
            if (L.embed[x] == i) label = "[0," + M.labels[x] + "]";
        if (label.empty()) {
            label = "{";
            for (std::size_t x = 0; x < n; ++x)
                if (L.sets[i][x]) label += (label.size() > 1 ? "," : "") + M.labels[x];
            label += "}";
        }
        L.pom.labels.push_back(label);
    }
    L.pom.zero = L.embed[M.zero];
    L.pom.leq.assign(m, std::vector<char>(m, 0));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            bool sub = true;
            for (std::size_t x = 0; x < n && sub; ++x) sub = !L.sets[i][x] || L.sets[j][x];
            L.pom.leq[i][j] = sub;
        }
    if (M.has_add()) {
        L.pom.add.assign(m, std::vector<std::optional<std::size_t>>(m));
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) {
                std::vector<char> s(n, 0);
                bool defined = true;
                for (std::size_t x = 0; x < n && defined; ++x)
                    for (std::size_t y = 0; y < n && defined; ++y) {
                        if (!L.sets[i][x] || !L.sets[j][y]) continue;
                        if (!M.add[x][y]) { defined = false; break; }
                        for (std::size_t z = 0; z < n; ++z)
                            if (M.le(z, *M.add[x][y])) s[z] = 1;
                    }
                if (defined) L.pom.add[i][j] = index_of(s);
            }
    }
    return L;
}

// ---------------------------------------------------------------------------
// Cu axioms
// ---------------------------------------------------------------------------

struct AxiomResult {
    std::string axiom;
    Truth verdict = Truth::unknown;
    Cert cert = Cert::exact;
    std::string counterexample;
};

struct CuReport {
    std::string monoid;
    std::string range;  // what was quantified over
    std::vector<AxiomResult> axioms;
    bool passes(std::string_view ax) const {
        for (auto& a : axioms)
            if (a.axiom == ax) return a.verdict == Truth::yes;
        return false;
    }
    bool all_pass() const {
        for (auto& a : axioms)
            if (a.verdict != Truth::yes) return false;
        return true;
    }
};

/// Finite positively ordered monoid with total addition.  Every increasing sequence is
/// eventually constant, so a sequence is recorded as (first, eventual value).
struct FiniteCuModel {
    const FinitePoM* M;
    using E = std::size_t;
    using C = std::pair<std::size_t, std::size_t>;

    std::string name() const { return "finite(" + std::to_string(M->size()) + ")"; }
    std::string range() const { return "exhaustive"; }
    Cert cert() const { return Cert::exact; }
    std::size_t horizon() const { return 2; }
    std::vector<E> elements() const {
        std::vector<E> v(M->size());
        std::iota(v.begin(), v.end(), std::size_t{0});
        return v;
    }
    std::vector<C> chains() const {
        std::vector<C> v;
        for (std::size_t a = 0; a < M->size(); ++a)
            for (std::size_t b = 0; b < M->size(); ++b)
                if (M->le(a, b)) v.emplace_back(a, b);
        return v;
    }
    bool leq(E a, E b) const { return M->le(a, b); }
    E add(E a, E b) const { return M->sum(a, b); }
    bool increasing(const C& c) const { return M->le(c.first, c.second); }
    std::optional<E> sup(const C& c) const { return c.second; }
    bool is_upper_bound(const C& c, E u) const { return M->le(c.second, u); }
    bool eventually_above(const C& c, E x) const { return M->le(x, c.second); }
    E at(const C& c, std::size_t n) const { return n == 0 ? c.first : c.second; }
    C chain_add(const C& a, const C& b) const { return {add(a.first, b.first), add(a.second, b.second)}; }
    /// Definition: x << y iff every increasing sequence whose supremum dominates y eventually dominates x.
    bool way_below(E x, E y) const {
        for (auto& c : chains())
            if (M->le(y, c.second) && !M->le(x, c.second)) return false;
        return true;
    }
    std::optional<C> rapid(E x) const {
        if (!way_below(x, x)) return std::nullopt;
        return C{x, x};
    }
    std::string str(E x) const { return M->labels[x]; }
    std::string str(const C& c) const { return M->labels[c.first] + ", " + M->labels[c.second] + ", ..."; }
};

/// Symbolic monoid with quantifiers restricted to a documented finite range of points and
/// affine sequences.
struct SymbolicCuModel {
    SymbolicMonoid M;
    std::vector<std::uint64_t> values{0, 1, 2, 3};
    std::vector<std::uint64_t> bases{0, 1, 2};
    std::vector<std::pair<std::uint64_t, std::uint64_t>> slopes{{0, 1}, {1, 1}, {2, 1}, {1, 2}};
    using E = Pt;
    using C = Affine;

    std::string name() const { return M.name(); }
    std::string range() const {
        std::string s = "points with coordinates in {";
        for (auto v : values) s += std::to_string(v) + ",";
        if (M.kind == SymKind::natbar) s += "inf,";
        s.back() = '}';
        s += "; sequences b + floor(a n) with b in {";
        for (auto b : bases) s += std::to_string(b) + ",";
        if (M.kind == SymKind::natbar) s += "inf,";
        s.back() = '}';
        s += ", a in {0,1,2,1/2}; way-below checked against sequences on n < " + std::to_string(horizon());
        return s;
    }
    Cert cert() const { return Cert::bound_relative; }
    std::size_t horizon() const { return 6; }

    std::vector<E> elements() const {
        std::vector<std::uint64_t> coord = values;
        if (M.kind == SymKind::natbar) coord.push_back(INF);
        std::vector<E> out;
        E cur(M.rank);
        std::function<void(std::size_t)> rec = [&](std::size_t k) {
            if (k == M.rank) { out.push_back(cur); return; }
            for (auto v : coord) { cur[k] = v; rec(k + 1); }
        };
        rec(0);
        return out;
    }
    std::vector<C> chains() const {
        std::vector<std::pair<std::uint64_t, std::pair<std::uint64_t, std::uint64_t>>> coord;
        for (auto b : bases)
            for (auto s : slopes) coord.push_back({b, s});
        if (M.kind == SymKind::natbar) coord.push_back({INF, {0, 1}});
        std::vector<C> out;
        C cur{Pt(M.rank), std::vector<std::uint64_t>(M.rank), std::vector<std::uint64_t>(M.rank)};
        std::function<void(std::size_t)> rec = [&](std::size_t k) {
            if (k == M.rank) { out.push_back(cur); return; }
            for (auto& [b, s] : coord) {
                cur.base[k] = b;
                cur.num[k] = s.first;
                cur.den[k] = s.second;
                rec(k + 1);
            }
        };
        rec(0);
        return out;
    }
    bool leq(const E& a, const E& b) const { return M.leq(a, b); }
    E add(const E& a, const E& b) const { return M.add(a, b); }
    bool increasing(const C& c) const { return M.valid_chain(c); }
    std::optional<E> sup(const C& c) const { return M.sup(c); }
    bool is_upper_bound(const C& c, const E& u) const { return M.is_upper_bound(c, u); }
    bool eventually_above(const C& c, const E& x) const { return M.eventually_above(c, x); }
    E at(const C& c, std::size_t n) const { return c.at(n); }
    C chain_add(const C& a, const C& b) const { return affine_add(a, b); }
    bool way_below(const E& x, const E& y) const { return M.way_below(x, y); }
    std::optional<C> rapid(const E& x) const { return M.rapid(x); }
    std::string str(const E& x) const { return pt_str(x); }
    std::string str(const C& c) const { return c.str(); }
};

/// Lambda_sigma of N^r viewed through interval caps: elements are cap vectors in
/// (N u {omega})^r, sequences of intervals are affine in the caps, suprema are unions.
struct LambdaNatModel {
    std::size_t rank = 1;
    std::vector<std::uint64_t> values{0, 1, 2, 3};
    using E = Pt;
    using C = Affine;
    SymbolicMonoid base() const { return SymbolicMonoid::nat(rank); }

    std::string name() const { return "Lambda_sigma(" + base().name() + ")"; }
    std::string range() const { return "intervals with caps in {0,1,2,3,omega}; unions of affine cap sequences"; }
    Cert cert() const { return Cert::bound_relative; }
    std::size_t horizon() const { return 6; }
    Interval iv(const E& c) const { return Interval::of_caps(c); }

    std::vector<E> elements() const {
        SymbolicCuModel s{SymbolicMonoid::natbar(rank)};
        s.values = values;
        auto pts = s.elements();
        for (auto& p : pts)
            for (auto& v : p)
                if (v == INF) v = OMEGA;
        return pts;
    }
    std::vector<C> chains() const {
        SymbolicCuModel s{SymbolicMonoid::natbar(rank)};
        auto cs = s.chains();
        for (auto& c : cs)
            for (auto& b : c.base)
                if (b == INF) b = OMEGA;
        return cs;
    }
    bool leq(const E& a, const E& b) const { return interval_subset(base(), iv(a), iv(b)); }
    E add(const E& a, const E& b) const { return interval_caps(base(), interval_add(base(), iv(a), iv(b))); }
    bool increasing(const C&) const { return true; }
    E at(const C& c, std::size_t n) const {
        E p(rank);
        for (std::size_t k = 0; k < rank; ++k) p[k] = c.base[k] == OMEGA ? OMEGA : c.base[k] + c.num[k] * n / c.den[k];
        return p;
    }
    std::optional<E> sup(const C& c) const {
        E p(rank);
        for (std::size_t k = 0; k < rank; ++k) p[k] = (c.base[k] == OMEGA || c.num[k]) ? OMEGA : c.base[k];
        return p;
    }
    bool is_upper_bound(const C& c, const E& u) const { return leq(*sup(c), u); }
    bool eventually_above(const C& c, const E& x) const {
        for (std::size_t k = 0; k < rank; ++k) {
            bool unbounded = c.base[k] == OMEGA || c.num[k];
            if (x[k] == OMEGA ? c.base[k] != OMEGA : (!unbounded && c.base[k] < x[k])) return false;
        }
        return true;
    }
    C chain_add(const C& a, const C& b) const {
        C c = a;
        for (std::size_t k = 0; k < rank; ++k) {
            c.base[k] = cap_add(a.base[k], b.base[k]);
            c.num[k] = a.num[k] * b.den[k] + b.num[k] * a.den[k];
            c.den[k] = a.den[k] * b.den[k];
        }
        return c;
    }
    bool way_below(const E& x, const E& y) const { return cuntz::way_below(base(), iv(x), iv(y)); }
    std::optional<C> rapid(const E& x) const {
        C c = Affine::constant(x);
        for (std::size_t k = 0; k < rank; ++k)
            if (x[k] == OMEGA) {
                c.base[k] = 0;
                c.num[k] = 1;
            }
        return c;
    }
    std::string str(const E& x) const { return interval_str(base(), iv(x)); }
    std::string str(const C& c) const {
        std::string s = c.str();
        for (std::size_t p; (p = s.find("omega")) != std::string::npos;) s.replace(p, 5, "N");
        return "union of intervals " + s;
    }
};

/// Runs O1-O4 over the model's quantifier range.  Way-below is additionally cross-checked
/// against its definition on the model's sequences.
template <class Model>
CuReport check_cu_axioms(const Model& m) {
    CuReport rep;
    rep.monoid = m.name();
    rep.range = m.range();
    auto els = m.elements();
    auto chs = m.chains();
    auto fail = [&](const char* ax, std::string why) {
        rep.axioms.push_back({ax, Truth::no, Cert::exact, std::move(why)});
    };
    auto pass = [&](const char* ax) { rep.axioms.push_back({ax, Truth::yes, m.cert(), ""}); };

    // O1
    {
        bool ok = true;
        for (auto& c : chs) {
            auto s = m.sup(c);
            if (!s) {
                fail("O1", "increasing sequence " + m.str(c) + " has no supremum");
                ok = false;
                break;
            }
            bool least = m.is_upper_bound(c, *s);
            for (auto& u : els)
                if (least && m.is_upper_bound(c, u) && !m.leq(*s, u)) least = false;
            if (!least) {
                fail("O1", "computed supremum " + m.str(*s) + " of " + m.str(c) + " is not least");
                ok = false;
                break;
            }
        }
        if (ok) pass("O1");
    }
    // definition of way-below on the range
    {
        bool ok = true;
        for (auto& x : els) {
            for (auto& y : els) {
                bool def = true;
                for (auto& c : chs) {
                    auto s = m.sup(c);
                    if (s && m.leq(y, *s) && !m.eventually_above(c, x)) { def = false; break; }
                }
                // the definition only sees the sequences in range, so it can over-approximate
                if (m.way_below(x, y) && !def) {
                    fail("way_below", m.str(x) + " << " + m.str(y) + " contradicts sequence " + "definition");
                    ok = false;
                    break;
                }
            }
            if (!ok) break;
        }
        if (ok) pass("way_below");
    }
    // O2
    {
        bool ok = true;
        for (auto& x : els) {
            auto r = m.rapid(x);
            std::string why;
            if (!r) why = m.str(x) + " is not the supremum of a rapidly increasing sequence";
            else if (m.sup(*r) != std::optional(x)) why = "sequence for " + m.str(x) + " has the wrong supremum";
            else
                for (std::size_t n = 0; n + 1 < m.horizon() && why.empty(); ++n)
                    if (!m.way_below(m.at(*r, n), m.at(*r, n + 1)))
                        why = "sequence for " + m.str(x) + " is not rapidly increasing at step " + std::to_string(n);
            if (!why.empty()) { fail("O2", why); ok = false; break; }
        }
        if (ok) pass("O2");
    }
    // O3
    {
        bool ok = true;
        std::vector<std::pair<std::size_t, std::size_t>> wb;
        for (std::size_t i = 0; i < els.size(); ++i)
            for (std::size_t j = 0; j < els.size(); ++j)
                if (m.way_below(els[i], els[j])) wb.emplace_back(i, j);
        for (std::size_t p = 0; p < wb.size() && ok; ++p)
            for (std::size_t q = 0; q < wb.size() && ok; ++q) {
                auto [x1, x] = wb[p];
                auto [y1, y] = wb[q];
                if (!m.way_below(m.add(els[x1], els[y1]), m.add(els[x], els[y]))) {
                    fail("O3", m.str(els[x1]) + " << " + m.str(els[x]) + " and " + m.str(els[y1]) + " << " +
                                   m.str(els[y]) + " but the sums are not way-below");
                    ok = false;
                }
            }
        if (ok) pass("O3");
    }
    // O4
    {
        bool ok = true;
        for (std::size_t i = 0; i < chs.size() && ok; ++i)
            for (std::size_t j = 0; j < chs.size() && ok; ++j) {
                auto a = m.sup(chs[i]), b = m.sup(chs[j]);
                if (!a || !b) continue;  // already an O1 failure
                auto c = m.chain_add(chs[i], chs[j]);
                if (!m.increasing(c)) {
                    fail("O4", "sum of " + m.str(chs[i]) + " and " + m.str(chs[j]) + " is not increasing");
                    ok = false;
                    break;
                }
                auto s = m.sup(c);
                if (!s || *s != m.add(*a, *b)) {
                    fail("O4", "sup of the sum of " + m.str(chs[i]) + " and " + m.str(chs[j]) +
                                   " differs from the sum of sups");
                    ok = false;
                }
            }
        if (ok) pass("O4");
    }
    return rep;
}

inline CuReport check_cu_axioms(const FinitePoM& M) {
    if (!M.add_total()) throw InvalidInput("check_cu_axioms needs a total addition table");
    if (auto bad = M.order_violation()) throw InvalidInput("not a positively ordered monoid: " + *bad);
    if (auto bad = M.monoid_violation()) throw InvalidInput("not a positively ordered monoid: " + *bad);
    return check_cu_axioms(FiniteCuModel{&M});
}

inline CuReport check_cu_axioms(const SymbolicMonoid& M) {
    return check_cu_axioms(SymbolicCuModel{M});
}

// ---------------------------------------------------------------------------
// Compact elements
// ---------------------------------------------------------------------------

inline std::vector<std::size_t> compacts(const FinitePoM& M) {
    FiniteCuModel m{&M};
    std::vector<std::size_t> out;
    for (std::size_t x = 0; x < M.size(); ++x)
        if (m.way_below(x, x)) out.push_back(x);
    return out;
}

/// Compact points of a symbolic monoid inside the model range.
inline std::vector<Pt> compacts(const SymbolicCuModel& m) {
    std::vector<Pt> out;
    for (auto& x : m.elements())
        if (m.way_below(x, x)) out.push_back(x);
    return out;
}

inline std::string compacts_description(const SymbolicMonoid& M) {
    switch (M.kind) {
    case SymKind::natbar: return "points with every coordinate finite";
    default: return "every element";
    }
}

// ---------------------------------------------------------------------------
// Weakly increasing sequences in finite monoids
// ---------------------------------------------------------------------------

/// A sequence given by a finite prefix followed by a repeating cycle.
struct EventuallyPeriodic {
    std::vector<std::size_t> prefix, cycle;
    std::size_t at(std::size_t n) const {
        return n < prefix.size() ? prefix[n] : cycle[(n - prefix.size()) % cycle.size()];
    }
    std::size_t period_start() const { return prefix.size(); }
};

/// For every n and x << x_n, eventually x << x_m.  Decided on the prefix plus one period,
/// which is enough since the tail repeats.
inline bool is_weakly_increasing(const FinitePoM& M, const EventuallyPeriodic& s) {
    if (s.cycle.empty()) throw InvalidInput("sequence needs a nonempty cycle");
    FiniteCuModel m{&M};
    const std::size_t span = s.prefix.size() + s.cycle.size();
    for (std::size_t n = 0; n < span; ++n)
        for (std::size_t x = 0; x < M.size(); ++x) {
            if (!m.way_below(x, s.at(n))) continue;
            for (std::size_t c : s.cycle)
                if (!m.way_below(x, c)) return false;
        }
    return true;
}

/// Supremum via the diagonal extraction: each x_m is the supremum of a rapidly increasing
/// sequence x^(m)_n, and indices m_1 < m_2 < ... are chosen so that the terms already used are
/// way-below the next x_{m_{k+1}}.  The diagonal x^(m_k)_k is rapidly increasing and its
/// (eventual) value is returned.
inline std::optional<std::size_t> weakly_increasing_sup(const FinitePoM& M, const EventuallyPeriodic& s) {
    if (!is_weakly_increasing(M, s)) return std::nullopt;
    FiniteCuModel m{&M};
    const std::size_t steps = 2 * (s.prefix.size() + s.cycle.size()) + 2;
    std::vector<std::size_t> ms{0};
    std::vector<std::size_t> diag;
    for (std::size_t k = 0; k < steps; ++k) {
        auto r = m.rapid(s.at(ms.back()));
        if (!r) throw InvariantBreach("finite monoid element without rapid sequence");
        diag.push_back(m.at(*r, k));
        std::size_t next = ms.back() + 1;
        for (;; ++next) {
            bool ok = true;
            for (std::size_t j = 0; j < ms.size() && ok; ++j) {
                auto rj = m.rapid(s.at(ms[j]));
                ok = m.way_below(m.at(*rj, k + 1), s.at(next));
            }
            if (ok) break;
            if (next > ms.back() + steps + s.cycle.size()) throw InvariantBreach("diagonal extraction stalled");
        }
        ms.push_back(next);
    }
    for (std::size_t k = 0; k + 1 < diag.size(); ++k)
        if (!m.way_below(diag[k], diag[k + 1])) throw InvariantBreach("diagonal is not rapidly increasing");
    return diag.back();
}

/// Least upper bound of the set of values, by brute force.
inline std::optional<std::size_t> brute_lub(const FinitePoM& M, const std::vector<std::size_t>& xs) {
    std::vector<std::size_t> ub;
    for (std::size_t u = 0; u < M.size(); ++u) {
        bool up = true;
        for (auto x : xs) up = up && M.le(x, u);
        if (up) ub.push_back(u);
    }
    for (auto u : ub) {
        bool least = true;
        for (auto v : ub) least = least && M.le(u, v);
        if (least) return u;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Lambda_sigma(N^r) and Nbar^r
// ---------------------------------------------------------------------------

struct IsoReport {
    bool order = true, addition = true, way_below = true, suprema = true;
    std::size_t checked = 0;
    std::string counterexample;
    bool ok() const { return order && addition && way_below && suprema; }
};

/// Checks that caps -> point (omega -> inf) is an isomorphism Lambda_sigma(N^r) -> Nbar^r on the
/// model range: order, addition, way-below and suprema of sequences all commute with it.
inline IsoReport certify_lambda_nat_is_natbar(std::size_t rank = 1) {
    LambdaNatModel L{rank};
    SymbolicMonoid B = SymbolicMonoid::natbar(rank);
    auto phi = [](Pt p) {
        for (auto& v : p)
            if (v == OMEGA) v = INF;
        return p;
    };
    IsoReport rep;
    auto els = L.elements();
    for (auto& x : els)
        for (auto& y : els) {
            ++rep.checked;
            if (L.leq(x, y) != B.leq(phi(x), phi(y))) { rep.order = false; rep.counterexample = L.str(x) + " vs " + L.str(y); }
            if (phi(L.add(x, y)) != B.add(phi(x), phi(y))) { rep.addition = false; rep.counterexample = L.str(x) + " + " + L.str(y); }
            if (L.way_below(x, y) != B.way_below(phi(x), phi(y))) { rep.way_below = false; rep.counterexample = L.str(x) + " << " + L.str(y); }
        }
    for (auto& c : L.chains()) {
        Affine d = c;
        for (auto& b : d.base)
            if (b == OMEGA) b = INF;
        if (phi(*L.sup(c)) != *B.sup(d)) { rep.suprema = false; rep.counterexample = L.str(c); }
    }
    // every element of Nbar^r in range is hit
    for (auto& y : SymbolicCuModel{B}.elements()) {
        bool hit = false;
        for (auto& x : els) hit = hit || phi(x) == y;
        if (!hit) { rep.order = false; rep.counterexample = "not onto at " + pt_str(y); }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Lambda of a ring from its truncated W
// ---------------------------------------------------------------------------

struct LambdaOfRing {
    bool recognized = false;           // truncation matched N^r, so Lambda is modelled by Nbar^r
    SymbolicMonoid model = SymbolicMonoid::natbar(0);
    std::vector<Pt> coords;            // class -> N^r coordinates when recognized
    FiniteLambda finite;               // otherwise: intervals of the finite truncation
    Cert cert = Cert::truncation_relative;
    std::string description;
};

/// Tries to identify the certified part of W with a truncation of N^r: atoms are the minimal
/// nonzero classes, coordinates are propagated along exact sums x + atom, and the result must be
/// injective, reach every class, and reproduce order and sums.
inline LambdaOfRing lambda_of_ring(const TruncatedPoM& W) {
    LambdaOfRing out;
    const FinitePoM& P = W.pom;
    const std::size_t n = P.size();
    std::vector<std::size_t> atoms;
    for (std::size_t x = 0; x < n; ++x) {
        if (x == P.zero) continue;
        bool minimal = true;
        for (std::size_t y = 0; y < n && minimal; ++y)
            if (y != P.zero && y != x && P.le(y, x)) minimal = false;
        if (minimal) atoms.push_back(x);
    }
    const std::size_t r = atoms.size();
    std::vector<std::optional<Pt>> co(n);
    co[P.zero] = Pt(r, 0);
    std::vector<std::size_t> queue{P.zero};
    bool consistent = true;
    for (std::size_t qi = 0; qi < queue.size() && consistent; ++qi) {
        std::size_t x = queue[qi];
        for (std::size_t k = 0; k < r; ++k) {
            auto s = P.add[x][atoms[k]];
            if (!s) continue;
            Pt c = *co[x];
            ++c[k];
            if (!co[*s]) {
                co[*s] = c;
                queue.push_back(*s);
            } else if (*co[*s] != c) {
                consistent = false;
            }
        }
    }
    bool ok = consistent;
    for (std::size_t x = 0; x < n && ok; ++x) ok = co[x].has_value();
    for (std::size_t x = 0; x < n && ok; ++x)
        for (std::size_t y = 0; y < n && ok; ++y) {
            if (x != y && *co[x] == *co[y]) ok = false;
            bool le = true;
            for (std::size_t k = 0; k < r; ++k) le = le && (*co[x])[k] <= (*co[y])[k];
            if (le != P.le(x, y)) ok = false;
            if (ok && P.add[x][y]) {
                Pt s = *co[x];
                for (std::size_t k = 0; k < r; ++k) s[k] += (*co[y])[k];
                if (s != *co[*P.add[x][y]]) ok = false;
            }
        }
    if (ok) {
        out.recognized = true;
        out.model = SymbolicMonoid::natbar(r);
        for (auto& c : co) out.coords.push_back(*c);
        out.description = r == 0 ? "trivial monoid {0}" : "truncation of N^" + std::to_string(r) + "; Lambda modelled by " + out.model.name();
    } else {
        out.finite = lambda_sigma(P);
        out.description = "intervals of the finite truncation (" + std::to_string(out.finite.pom.size()) + " intervals)";
    }
    return out;
}

}  // namespace cuntz
