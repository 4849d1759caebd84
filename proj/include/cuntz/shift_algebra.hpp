#pragma once
/**
 * @file shift_algebra.hpp
 * @brief The algebra K[x0, x1, ...] with x_j x_i = x_i for j > i, without constant term, under
 * explicit variable and degree bounds; normal forms, the start index st, and exhaustive searches
 * for solutions of z = s z^2 (and z = z^2 s) over matrices with polynomial entries.
 *
 * A normal monomial x_{i1}^{n1} ... x_{ir}^{nr} (i1 < ... < ir) is stored as its exponent vector
 * e with e[i] the exponent of x_i.  Monomials compare lexicographically on exponent vectors,
 * index 0 most significant.
 */

#include "ring.hpp"
#include "sequences.hpp"

#include <cctype>
#include <map>
#include <sstream>

namespace cuntz {

class Monomial {
public:
    Monomial() = default;
    explicit Monomial(std::vector<unsigned> exps) : e_(std::move(exps)) { trim(); }

    static Monomial var(unsigned i, unsigned power = 1) {
        std::vector<unsigned> e(i + 1, 0);
        e[i] = power;
        return Monomial(std::move(e));
    }

    bool empty() const { return e_.empty(); }
    unsigned exp(unsigned i) const { return i < e_.size() ? e_[i] : 0; }
    const std::vector<unsigned>& exps() const { return e_; }
    unsigned degree() const { return std::accumulate(e_.begin(), e_.end(), 0u); }
    /// Largest variable index present.
    unsigned top() const { return e_.empty() ? 0 : unsigned(e_.size() - 1); }

    /// Smallest variable index present.
    unsigned st() const {
        for (unsigned i = 0; i < e_.size(); ++i)
            if (e_[i]) return i;
        throw InvalidInput("st of the empty monomial");
    }

    /// Letters in order, e.g. x0^2 x2 -> {0, 0, 2}.
    std::vector<unsigned> word() const {
        std::vector<unsigned> w;
        for (unsigned i = 0; i < e_.size(); ++i) w.insert(w.end(), e_[i], i);
        return w;
    }

    friend bool operator==(const Monomial&, const Monomial&) = default;
    friend bool operator<(const Monomial& a, const Monomial& b) {
        const std::size_t n = std::max(a.e_.size(), b.e_.size());
        for (std::size_t i = 0; i < n; ++i) {
            unsigned x = a.exp(unsigned(i)), y = b.exp(unsigned(i));
            if (x != y) return x < y;
        }
        return false;
    }
    friend bool operator>(const Monomial& a, const Monomial& b) { return b < a; }

    std::string str() const {
        if (e_.empty()) return "1";
        std::string s;
        for (unsigned i = 0; i < e_.size(); ++i) {
            if (!e_[i]) continue;
            if (!s.empty()) s += ' ';
            s += "x" + std::to_string(i);
            if (e_[i] > 1) s += "^" + std::to_string(e_[i]);
        }
        return s;
    }

private:
    void trim() {
        while (!e_.empty() && e_.back() == 0) e_.pop_back();
    }
    std::vector<unsigned> e_;
};

/// Normal form of a word by a stack: a letter removes every larger letter directly before it.
inline Monomial normal_form(const std::vector<unsigned>& word) {
    std::vector<unsigned> stack;
    for (unsigned i : word) {
        while (!stack.empty() && stack.back() > i) stack.pop_back();
        stack.push_back(i);
    }
    std::vector<unsigned> e;
    for (unsigned i : stack) {
        if (e.size() <= i) e.resize(i + 1, 0);
        ++e[i];
    }
    return Monomial(std::move(e));
}

/// Normal form of a * b: a keeps its letters up to st(b), then b follows.
inline Monomial mono_mul(const Monomial& a, const Monomial& b) {
    if (a.empty()) return b;
    if (b.empty()) return a;
    const unsigned s = b.st();
    std::vector<unsigned> e(std::max<std::size_t>(b.exps().size(), s + 1), 0);
    for (unsigned i = 0; i < s; ++i) e[i] = a.exp(i);
    e[s] = a.exp(s) + b.exp(s);
    for (unsigned i = s + 1; i < e.size(); ++i) e[i] = b.exp(i);
    return Monomial(std::move(e));
}

/// Every normal monomial in variables < d of total degree 1..D, in increasing order.
inline std::vector<Monomial> monomials(unsigned d, unsigned D) {
    std::vector<Monomial> out;
    std::vector<unsigned> e(d, 0);
    std::function<void(unsigned, unsigned)> rec = [&](unsigned i, unsigned left) {
        if (i == d) {
            if (left < D) out.emplace_back(e);
            return;
        }
        for (unsigned k = 0; k <= left; ++k) {
            e[i] = k;
            rec(i + 1, left - k);
        }
        e[i] = 0;
    };
    if (d > 0) rec(0, D);
    std::sort(out.begin(), out.end());
    return out;
}

struct ShiftBounds {
    unsigned d = 3;  // variables x0 .. x_{d-1}
    unsigned D = 3;  // total degree
    bool operator==(const ShiftBounds&) const = default;
};

/// Polynomial without constant term over a prime field.
class ShiftPoly {
public:
    ShiftPoly(RingPtr field, ShiftBounds b) : field_(std::move(field)), b_(b) {
        if (!field_->prime_field()) throw InvalidInput("shift algebra coefficients must be a prime field");
    }

    static ShiftPoly monomial(RingPtr field, ShiftBounds b, const Monomial& m, Elem c = 1) {
        ShiftPoly p(std::move(field), b);
        p.add_term(m, c);
        return p;
    }

    const FiniteRing& field() const { return *field_; }
    const RingPtr& field_ptr() const { return field_; }
    const ShiftBounds& bounds() const { return b_; }
    const std::map<Monomial, Elem>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    /// Adds c * m; m must respect the bounds.
    void add_term(const Monomial& m, Elem c) {
        if (m.empty()) throw InvalidInput("the shift algebra has no constant term");
        if (m.top() >= b_.d) throw BoundExceeded("variable x" + std::to_string(m.top()) + " outside the bound d=" + std::to_string(b_.d));
        if (m.degree() > b_.D)
            throw BoundExceeded("degree " + std::to_string(m.degree()) + " of " + m.str() + " exceeds D=" + std::to_string(b_.D));
        c %= Elem(field_->size());
        auto it = terms_.find(m);
        Elem v = field_->add(it == terms_.end() ? 0 : it->second, c);
        if (v == 0) {
            if (it != terms_.end()) terms_.erase(it);
        } else {
            terms_[m] = v;
        }
    }

    /// Smallest st over the support.
    unsigned st() const {
        if (terms_.empty()) throw InvalidInput("st of the zero polynomial");
        unsigned s = ~0u;
        for (const auto& [m, c] : terms_) s = std::min(s, m.st());
        return s;
    }

    friend bool operator==(const ShiftPoly& a, const ShiftPoly& b) { return a.terms_ == b.terms_; }

    friend ShiftPoly operator+(ShiftPoly a, const ShiftPoly& b) {
        a.check(b);
        for (const auto& [m, c] : b.terms_) a.add_term(m, c);
        return a;
    }
    ShiftPoly operator-() const {
        ShiftPoly r(field_, b_);
        for (const auto& [m, c] : terms_) r.add_term(m, field_->neg(c));
        return r;
    }
    friend ShiftPoly operator-(const ShiftPoly& a, const ShiftPoly& b) { return a + (-b); }

    /// Bilinear extension of the normal form; a product term above the degree bound is an error.
    friend ShiftPoly operator*(const ShiftPoly& a, const ShiftPoly& b) {
        a.check(b);
        ShiftPoly r(a.field_, a.b_);
        for (const auto& [m, c] : a.terms_)
            for (const auto& [n, e] : b.terms_) r.add_term(mono_mul(m, n), a.field_->mul(c, e));
        return r;
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::string s;
        for (const auto& [m, c] : terms_) {
            if (!s.empty()) s += " + ";
            if (c != 1) s += std::to_string(c) + " ";
            s += m.str();
        }
        return s;
    }

private:
    void check(const ShiftPoly& o) const {
        if (field_.get() != o.field_.get() && !(field_->spec() == o.field_->spec()))
            throw InvalidInput("shift polynomials over different fields");
        if (!(b_ == o.b_)) throw InvalidInput("shift polynomials with different bounds");
    }

    RingPtr field_;
    ShiftBounds b_;
    std::map<Monomial, Elem> terms_;
};

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

/// A word such as "x2 x0^2 x1" (factors separated by spaces or '*'), not yet reduced.
inline std::vector<unsigned> parse_word(std::string_view text) {
    std::vector<unsigned> w;
    std::size_t i = 0;
    auto skip = [&] {
        while (i < text.size() && (std::isspace(static_cast<unsigned char>(text[i])) || text[i] == '*')) ++i;
    };
    auto number = [&]() -> unsigned {
        std::size_t b = i;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
        if (b == i) throw InvalidInput("expected a number in '" + std::string(text) + "'");
        unsigned long v = std::stoul(std::string(text.substr(b, i - b)));
        if (v > 1000) throw InvalidInput("index or exponent too large in '" + std::string(text) + "'");
        return unsigned(v);
    };
    skip();
    while (i < text.size()) {
        if (text[i] != 'x') throw InvalidInput("expected x<index> in '" + std::string(text) + "'");
        ++i;
        unsigned var = number(), pw = 1;
        if (i < text.size() && text[i] == '^') {
            ++i;
            pw = number();
            if (pw == 0) throw InvalidInput("zero exponent in '" + std::string(text) + "'");
        }
        w.insert(w.end(), pw, var);
        skip();
    }
    if (w.empty()) throw InvalidInput("empty monomial");
    return w;
}

inline Monomial parse_monomial(std::string_view text) { return normal_form(parse_word(text)); }

/// Signed sum of monomials with optional integer coefficients: "x0^2 x1 - 2 x1 + x3".
inline ShiftPoly parse_shift_poly(const RingPtr& field, ShiftBounds b, std::string_view text) {
    ShiftPoly p(field, b);
    std::string s(text);
    const auto b0 = s.find_first_not_of(" \t"), e0 = s.find_last_not_of(" \t");
    if (b0 == std::string::npos) throw InvalidInput("empty polynomial");
    if (s.substr(b0, e0 - b0 + 1) == "0") return p;
    std::size_t i = 0;
    const long m = long(field->size());
    bool first = true;
    while (i < s.size()) {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        if (i >= s.size()) break;
        long sign = 1;
        if (s[i] == '+' || s[i] == '-') {
            sign = s[i] == '-' ? -1 : 1;
            ++i;
        } else if (!first) {
            throw InvalidInput("expected + or - in '" + s + "'");
        }
        std::size_t end = i;
        while (end < s.size() && s[end] != '+' && s[end] != '-') ++end;
        std::string term = s.substr(i, end - i);
        i = end;
        first = false;
        std::size_t t = 0;
        while (t < term.size() && std::isspace(static_cast<unsigned char>(term[t]))) ++t;
        long coef = 1;
        if (t < term.size() && std::isdigit(static_cast<unsigned char>(term[t]))) {
            std::size_t b0 = t;
            while (t < term.size() && std::isdigit(static_cast<unsigned char>(term[t]))) ++t;
            coef = std::stol(term.substr(b0, t - b0));
            while (t < term.size() && (std::isspace(static_cast<unsigned char>(term[t])) || term[t] == '*')) ++t;
        }
        if (t >= term.size()) throw InvalidInput("constant terms are not in the shift algebra: '" + s + "'");
        long c = ((sign * coef) % m + m) % m;
        p.add_term(parse_monomial(term.substr(t)), Elem(c));
    }
    return p;
}

// ---------------------------------------------------------------------------
// Matrices over the shift algebra and the equation z = s z^2
// ---------------------------------------------------------------------------

/// Square matrix with polynomial entries, row-major.
struct ShiftMat {
    std::size_t n = 0;
    std::vector<ShiftPoly> e;

    static ShiftMat zero(const RingPtr& field, ShiftBounds b, std::size_t n) {
        return ShiftMat{n, std::vector<ShiftPoly>(n * n, ShiftPoly(field, b))};
    }
    const ShiftPoly& operator()(std::size_t i, std::size_t j) const { return e[i * n + j]; }
    ShiftPoly& at(std::size_t i, std::size_t j) { return e[i * n + j]; }
    bool is_zero() const {
        return std::all_of(e.begin(), e.end(), [](const ShiftPoly& p) { return p.is_zero(); });
    }
    friend bool operator==(const ShiftMat& a, const ShiftMat& b) { return a.n == b.n && a.e == b.e; }
    friend ShiftMat operator*(const ShiftMat& a, const ShiftMat& b) {
        if (a.n != b.n) throw InvalidInput("shift matrices of different sizes");
        ShiftMat r{a.n, std::vector<ShiftPoly>(a.n * a.n, ShiftPoly(a.e.front().field_ptr(), a.e.front().bounds()))};
        for (std::size_t i = 0; i < a.n; ++i)
            for (std::size_t j = 0; j < a.n; ++j)
                for (std::size_t k = 0; k < a.n; ++k) r.at(i, j) = r(i, j) + a(i, k) * b(k, j);
        return r;
    }
    std::string str() const {
        std::string s = "[";
        for (std::size_t i = 0; i < n; ++i) {
            s += i ? ",[" : "[";
            for (std::size_t j = 0; j < n; ++j) s += (j ? ", " : "") + (*this)(i, j).str();
            s += "]";
        }
        return s + "]";
    }
};

enum class ShiftSide { left, right };  // z = s z^2, or z = z^2 s

struct CompactSearchOptions {
    ShiftBounds bounds;
    std::size_t size = 1;                  // matrix size
    std::size_t max_entry_support = ~std::size_t{0};  // monomials per entry of z
    unsigned s_degree = 0;                 // degree bound for s in the linear solve; 0 means bounds.D
    ShiftSide side = ShiftSide::left;
    std::uint64_t max_candidates = std::uint64_t{1} << 24;
    unsigned jobs = 1;
    bool support_test = true;  // off: every candidate goes to the linear solve
};

struct CompactSolution {
    ShiftMat z, s;
};

struct CompactSearchReport {
    std::uint64_t candidates = 0;       // nonzero z enumerated
    std::uint64_t support_rejected = 0; // some coefficient of z unreachable for every s in R
    std::uint64_t solve_rejected = 0;   // reachable supports, but no s within the degree bound
    std::vector<CompactSolution> solutions;
    bool complete = true;               // false when max_candidates cut the enumeration
    std::uint64_t total = 0;            // size of the full candidate space
    Cert cert = Cert::exact;
};

namespace detail {

/// Coefficient tuples over F_p for k-element supports: all nonzero coefficient choices.
inline std::uint64_t pow_checked(std::uint64_t b, std::uint64_t e, std::uint64_t cap) {
    std::uint64_t r = 1;
    for (std::uint64_t i = 0; i < e; ++i) {
        if (r > cap / std::max<std::uint64_t>(b, 1)) return cap + 1;
        r *= b;
    }
    return r;
}

inline std::uint64_t binom_u64(std::uint64_t n, std::uint64_t k, std::uint64_t cap) {
    if (k > n) return 0;
    std::uint64_t r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i;
        if (r > cap) return cap + 1;
    }
    return r;
}

/// Can p equal NF(q w) (side left) or NF(w q) (side right) for some monomial q of the algebra?
/// Left: q keeps only its letters up to st(w), so p must agree with w above st(w) and carry at
/// least w's exponent at st(w).  Right: w loses the letters above st(q) and q survives whole,
/// so some suffix split of p works; decided by trying every q dividing p from the right.
inline bool reachable(const Monomial& p, const Monomial& w, ShiftSide side) {
    if (side == ShiftSide::left) {
        const unsigned s = w.st();
        const unsigned n = std::max(p.top(), w.top()) + 1;
        for (unsigned i = s + 1; i < n; ++i)
            if (p.exp(i) != w.exp(i)) return false;
        return p.exp(s) >= w.exp(s);
    }
    // q is a suffix of the word of p
    auto pw = p.word();
    for (std::size_t cut = 0; cut < pw.size(); ++cut) {
        std::vector<unsigned> suffix(pw.begin() + std::ptrdiff_t(cut), pw.end());
        if (mono_mul(w, normal_form(suffix)) == p) return true;
    }
    return false;
}

/// Solves A u = b over F_p by elimination; columns of A given as sparse maps row -> value.
inline std::optional<std::vector<Elem>> solve_mod_p(const FiniteRing& F, std::size_t rows,
                                                    const std::vector<std::vector<Elem>>& cols,
                                                    const std::vector<Elem>& rhs) {
    const std::size_t n = cols.size();
    std::vector<std::vector<Elem>> a(rows, std::vector<Elem>(n + 1, 0));
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < rows; ++i) a[i][j] = cols[j][i];
    for (std::size_t i = 0; i < rows; ++i) a[i][n] = rhs[i];
    std::vector<std::size_t> pivcol;
    std::size_t r = 0;
    for (std::size_t c = 0; c < n && r < rows; ++c) {
        std::size_t piv = r;
        while (piv < rows && a[piv][c] == 0) ++piv;
        if (piv == rows) continue;
        std::swap(a[piv], a[r]);
        Elem inv = *F.inverse(a[r][c]);
        for (auto& x : a[r]) x = F.mul(x, inv);
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || a[i][c] == 0) continue;
            Elem f = a[i][c];
            for (std::size_t k = c; k <= n; ++k) a[i][k] = F.sub(a[i][k], F.mul(f, a[r][k]));
        }
        pivcol.push_back(c);
        ++r;
    }
    for (std::size_t i = r; i < rows; ++i)
        if (a[i][n] != 0) return std::nullopt;
    std::vector<Elem> u(n, 0);
    for (std::size_t i = 0; i < r; ++i) u[pivcol[i]] = a[i][n];
    return u;
}

}  // namespace detail

/// Exhaustive search for nonzero z (entries supported on monomials in x0..x_{d-1} of degree <= D)
/// with z = s z^2 (or z = z^2 s).  Each candidate first meets a support test that is exact over
/// every s in the algebra; survivors go to a linear solve for s with entries of degree <= s_degree
/// in x0..x_d (x_d stands in for every variable above the support).
inline CompactSearchReport search_compact_solutions(const RingPtr& field, const CompactSearchOptions& opt) {
    if (!field->prime_field()) throw InvalidInput("search_compact_solutions: coefficients must be a prime field");
    if (opt.size == 0 || opt.bounds.d == 0 || opt.bounds.D == 0) throw InvalidInput("search_compact_solutions: bounds must be positive");
    const auto& F = *field;
    const std::size_t n = opt.size, cells = n * n;
    const auto basis = monomials(opt.bounds.d, opt.bounds.D);
    const std::size_t B = basis.size();
    const std::uint64_t q = F.size() - 1;  // nonzero coefficients
    const std::size_t kmax = std::min(opt.max_entry_support, B);

    constexpr std::uint64_t entry_table_cap = std::uint64_t{1} << 22;  // memory for per-entry choices
    // per entry: all (support, coefficients) choices with at most kmax monomials
    std::uint64_t per_entry = 0;
    for (std::size_t k = 0; k <= kmax; ++k)
        per_entry += detail::binom_u64(B, k, entry_table_cap) * detail::pow_checked(q, k, entry_table_cap);
    CompactSearchReport rep;
    rep.total = detail::pow_checked(per_entry, cells, ~std::uint64_t{0} >> 2);
    std::vector<std::vector<std::pair<std::size_t, Elem>>> entry_choices;  // sparse (basis index, coef)
    if (per_entry > entry_table_cap) throw BoundExceeded("search_compact_solutions: entry space too large");
    {
        std::vector<std::pair<std::size_t, Elem>> cur;
        std::function<void(std::size_t)> rec = [&](std::size_t start) {
            entry_choices.push_back(cur);
            if (cur.size() == kmax) return;
            for (std::size_t b = start; b < B; ++b)
                for (Elem c = 1; c < F.size(); ++c) {
                    cur.emplace_back(b, c);
                    rec(b + 1);
                    cur.pop_back();
                }
        };
        rec(0);
    }
    const std::uint64_t E = entry_choices.size();
    const std::uint64_t limit = std::min<std::uint64_t>(rep.total, opt.max_candidates);
    rep.complete = rep.total <= opt.max_candidates;
    if (!rep.complete) rep.cert = Cert::bound_relative;

    // products of basis pairs, and reachability of each basis monomial from each product
    std::vector<std::vector<Monomial>> prod(B, std::vector<Monomial>(B));
    for (std::size_t a = 0; a < B; ++a)
        for (std::size_t b = 0; b < B; ++b) prod[a][b] = mono_mul(basis[a], basis[b]);
    const std::size_t W = (B + 63) / 64;
    using Bits = std::vector<std::uint64_t>;
    std::vector<std::vector<Bits>> reach(B, std::vector<Bits>(B, Bits(W, 0)));
    for (std::size_t a = 0; a < B; ++a)
        for (std::size_t b = 0; b < B; ++b)
            for (std::size_t t = 0; t < B; ++t)
                if (detail::reachable(basis[t], prod[a][b], opt.side)) reach[a][b][t / 64] |= std::uint64_t{1} << (t % 64);
    const unsigned sdeg = opt.s_degree ? opt.s_degree : opt.bounds.D;
    const auto s_basis = monomials(opt.bounds.d + 1, sdeg);
    const ShiftBounds wide{opt.bounds.d + 1, std::max(opt.bounds.D, sdeg + 2 * opt.bounds.D)};

    auto decode = [&](std::uint64_t idx) {
        std::vector<std::size_t> pick(cells);
        for (std::size_t c = 0; c < cells; ++c) {
            pick[c] = std::size_t(idx % E);
            idx /= E;
        }
        return pick;
    };
    auto to_mat = [&](const std::vector<std::size_t>& pick, ShiftBounds b) {
        ShiftMat z = ShiftMat::zero(field, b, n);
        for (std::size_t c = 0; c < cells; ++c)
            for (auto [bi, co] : entry_choices[pick[c]]) z.e[c].add_term(basis[bi], co);
        return z;
    };

    // support test: every monomial of z_ij must be reachable from a product p1 p2 feeding entry ij,
    // p1 in z_kl and p2 in z_lj for (s z^2)_ij, or p1 in z_il and p2 in z_lk for (z^2 s)_ij
    auto support_ok = [&](const std::vector<std::size_t>& pick) {
        Bits u(W);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                const auto& target = entry_choices[pick[i * n + j]];
                if (target.empty()) continue;
                std::fill(u.begin(), u.end(), 0);
                for (std::size_t k = 0; k < n; ++k)
                    for (std::size_t l = 0; l < n; ++l) {
                        const bool left = opt.side == ShiftSide::left;
                        const auto& A = entry_choices[pick[(left ? k : i) * n + l]];
                        const auto& C = entry_choices[pick[l * n + (left ? j : k)]];
                        for (auto [p1, c1] : A)
                            for (auto [p2, c2] : C)
                                for (std::size_t w = 0; w < W; ++w) u[w] |= reach[p1][p2][w];
                    }
                for (auto [t, tc] : target)
                    if (!(u[t / 64] >> (t % 64) & 1)) return false;
            }
        return true;
    };

    auto solve_for_s = [&](const ShiftMat& zw) -> std::optional<ShiftMat> {
        ShiftMat z2 = zw * zw;
        // unknowns: s_ik coefficient of s_basis[m]
        std::map<std::pair<std::size_t, Monomial>, std::size_t> row_of;  // (cell, monomial) -> row
        auto row = [&](std::size_t cell, const Monomial& m) {
            auto key = std::make_pair(cell, m);
            auto it = row_of.find(key);
            if (it != row_of.end()) return it->second;
            std::size_t r = row_of.size();
            row_of.emplace(key, r);
            return r;
        };
        for (std::size_t c = 0; c < cells; ++c)
            for (const auto& [m, co] : zw.e[c].terms()) row(c, m);
        std::vector<std::vector<std::pair<std::size_t, Elem>>> sparse;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k)
                for (const auto& sm : s_basis) {
                    std::vector<std::pair<std::size_t, Elem>> col;
                    for (std::size_t j = 0; j < n; ++j) {
                        // left: (s z2)_ij gets s_ik z2_kj;  right: (z2 s)_ij gets z2_ik s_kj, so s_kj
                        if (opt.side == ShiftSide::left) {
                            for (const auto& [m, co] : z2(k, j).terms()) col.emplace_back(row(i * n + j, mono_mul(sm, m)), co);
                        } else {
                            for (const auto& [m, co] : z2(j, i).terms()) col.emplace_back(row(j * n + k, mono_mul(m, sm)), co);
                        }
                    }
                    sparse.push_back(std::move(col));
                }
        const std::size_t rows = row_of.size();
        std::vector<std::vector<Elem>> cols(sparse.size(), std::vector<Elem>(rows, 0));
        for (std::size_t u = 0; u < sparse.size(); ++u)
            for (auto [r, co] : sparse[u]) cols[u][r] = F.add(cols[u][r], co);
        std::vector<Elem> rhs(rows, 0);
        for (std::size_t c = 0; c < cells; ++c)
            for (const auto& [m, co] : zw.e[c].terms()) rhs[row(c, m)] = co;
        auto u = detail::solve_mod_p(F, rows, cols, rhs);
        if (!u) return std::nullopt;
        ShiftMat s = ShiftMat::zero(field, wide, n);
        std::size_t idx = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k)
                for (const auto& sm : s_basis) {
                    Elem v = (*u)[idx++];
                    if (v) s.at(i, k).add_term(sm, v);
                }
        return s;
    };

    // deterministic partition of the candidate range
    const std::uint64_t chunk = 4096;
    const std::size_t nchunks = std::size_t((limit + chunk - 1) / chunk);
    struct Part {
        std::uint64_t cand = 0, sup = 0, sol = 0;
        std::vector<CompactSolution> found;
    };
    std::vector<Part> parts(nchunks);
    parallel_for(nchunks, opt.jobs, [&](std::size_t ci) {
        Part& part = parts[ci];
        const std::uint64_t lo = ci * chunk, hi = std::min(limit, lo + chunk);
        for (std::uint64_t idx = lo; idx < hi; ++idx) {
            if (idx == 0) continue;  // z = 0
            auto pick = decode(idx);
            ++part.cand;
            if (opt.support_test && !support_ok(pick)) { ++part.sup; continue; }
            ShiftMat zw = to_mat(pick, wide);
            auto s = solve_for_s(zw);
            if (!s) { ++part.sol; continue; }
            ShiftMat check = opt.side == ShiftSide::left ? *s * (zw * zw) : (zw * zw) * *s;
            if (!(check == zw)) throw InvariantBreach("search_compact_solutions: solved s does not reproduce z");
            part.found.push_back(CompactSolution{to_mat(pick, opt.bounds), *s});
        }
    });
    for (auto& p : parts) {
        rep.candidates += p.cand;
        rep.support_rejected += p.sup;
        rep.solve_rejected += p.sol;
        for (auto& f : p.found) rep.solutions.push_back(std::move(f));
    }
    if (rep.solve_rejected > 0 && rep.cert == Cert::exact) rep.cert = Cert::bound_relative;
    return rep;
}

// ---------------------------------------------------------------------------
// The sequence (x0, x1, ...) as an element of the sequence semigroup
// ---------------------------------------------------------------------------

/// Checks y[i] * x[i+1] * x[i] == x[i] with the same indexing as validate_seq, over any
/// multiplication; used for rings without a finite table.
template <class T, class Mul>
SeqCheck validate_witness_chain(const std::vector<T>& x, const std::vector<T>& y, Mul mul) {
    SeqCheck out;
    if (x.empty()) out.violations.push_back("no stages");
    else if (y.size() + 1 != x.size()) out.violations.push_back("witness count does not match stage count");
    else
        for (std::size_t i = 0; i + 1 < x.size(); ++i)
            if (!(mul(mul(y[i], x[i + 1]), x[i]) == x[i]))
                out.violations.push_back("stage " + std::to_string(i + 1) + ": y * x_next * x != x");
    return out;
}

/// Stages x0 .. x_{d-1} with witnesses y_{i+1} = x_{i+1}.
inline SeqCheck validate_variable_sequence(const RingPtr& field, ShiftBounds b) {
    std::vector<ShiftPoly> x, y;
    for (unsigned i = 0; i < b.d; ++i) x.push_back(ShiftPoly::monomial(field, b, Monomial::var(i)));
    for (unsigned i = 1; i < b.d; ++i) y.push_back(x[i]);
    return validate_witness_chain(x, y, [](const ShiftPoly& a, const ShiftPoly& c) { return a * c; });
}

}  // namespace cuntz
