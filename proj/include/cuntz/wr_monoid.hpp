#pragma once
/**
 * @file wr_monoid.hpp
 * @brief Truncated models of W(R) (matrices up to ~1) and V(R) (idempotents up to MvN).
 *
 * build_W enumerates every r x c matrix with r, c <= kmax.  Matrices with a zero row or column
 * inherit the class of their compression; the rest are first merged into orbits under
 * elementary row and column operations (unital rings only) and the orbit minima are then
 * compared against existing class representatives with precsim1.  A cheap invariant, the
 * sizes of the row and column modules, keeps most comparisons from happening at all.
 */

#include "mvn.hpp"
#include "pom.hpp"
#include "ring_checks.hpp"

#include <map>

namespace cuntz {

struct WOptions {
    std::uint64_t budget = default_budget;          // per precsim1 call
    std::uint64_t max_matrices = std::uint64_t{1} << 23;
    unsigned jobs = 1;
    bool check_s_unital = true;  // verify the weak s-unitality precondition for non-unital rings
};

struct TruncatedPoM {
    const FiniteRing* ring = nullptr;
    std::size_t kmax = 0;
    std::vector<Mat> reps;                                   // canonical (smallest) member of each class
    std::vector<std::uint64_t> members;                      // enumerated matrices per class
    std::vector<std::pair<std::size_t, std::size_t>> inv;    // (|row module|, |column module|)
    FinitePoM pom;
    std::vector<std::vector<Cert>> add_cert;
    std::uint64_t enumerated = 0;
    std::uint64_t comparisons = 0;
    Sub1Options sub1;

    std::size_t size() const { return reps.size(); }

    /// Class of an arbitrary matrix: table lookup inside the truncation, otherwise comparison
    /// against representatives.  nullopt when m is not equivalent to any enumerated class.
    std::optional<std::size_t> classify(const Mat& m) const {
        if (m.ring_ptr() != ring) throw InvalidInput("classify: matrix over a different ring");
        Mat c = compress(m);
        if (c.is_zero()) return pom.zero;
        if (c.rows() <= kmax && c.cols() <= kmax) return table_.at(shape_key(c.rows(), c.cols()))[matrix_index(c)];
        auto key = invariant_of(c);
        for (std::size_t k = 0; k < reps.size(); ++k) {
            if (inv[k] != key) continue;
            if (equivalent(c, reps[k])) return k;
        }
        return std::nullopt;
    }

    std::string to_dot() const { return pom.to_dot("W(" + (ring ? ring->name() : std::string("?")) + ")"); }

    static std::pair<std::size_t, std::size_t> invariant_of(const Mat& m) {
        return {row_span(m).size(), column_span(m).size()};
    }

    bool equivalent(const Mat& a, const Mat& b) const {
        auto ab = precsim1(a, b, sub1);
        if (ab.verdict == Truth::no) return false;
        auto ba = precsim1(b, a, sub1);
        if (ab.verdict == Truth::unknown || ba.verdict == Truth::unknown)
            throw BoundExceeded("precsim1 budget exhausted comparing " + a.str() + " and " + b.str());
        return ba.verdict == Truth::yes;
    }

private:
    std::size_t shape_key(std::size_t r, std::size_t c) const { return (r - 1) * kmax + (c - 1); }
    std::vector<std::vector<std::uint32_t>> table_;  // per shape, class of every matrix
    friend TruncatedPoM build_W(const FiniteRing&, std::size_t, const WOptions&);
};

namespace detail {

struct UnionFind {
    std::vector<std::uint32_t> p;
    explicit UnionFind(std::size_t n) : p(n) { std::iota(p.begin(), p.end(), 0u); }
    std::uint32_t find(std::uint32_t x) {
        while (p[x] != x) x = p[x] = p[p[x]];
        return x;
    }
    void unite(std::uint32_t a, std::uint32_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (a < b) p[b] = a;
        else p[a] = b;
    }
};

/// Elementary operations on an r x c entry vector: transvections, unit scalings, swaps.
struct ElemOp {
    enum Kind { row_add, col_add, row_scale, col_scale, row_swap, col_swap } kind;
    std::size_t i, j;
    Elem s;
};

inline std::vector<ElemOp> elementary_ops(const FiniteRing& R, std::size_t r, std::size_t c) {
    std::vector<ElemOp> ops;
    auto units = R.units();
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j) {
            if (i == j) continue;
            for (Elem s = 1; s < R.size(); ++s) ops.push_back({ElemOp::row_add, i, j, s});
            if (i < j) ops.push_back({ElemOp::row_swap, i, j, 0});
        }
    for (std::size_t i = 0; i < c; ++i)
        for (std::size_t j = 0; j < c; ++j) {
            if (i == j) continue;
            for (Elem s = 1; s < R.size(); ++s) ops.push_back({ElemOp::col_add, i, j, s});
            if (i < j) ops.push_back({ElemOp::col_swap, i, j, 0});
        }
    for (Elem u : units) {
        if (u == *R.one()) continue;
        for (std::size_t i = 0; i < r; ++i) ops.push_back({ElemOp::row_scale, i, 0, u});
        for (std::size_t j = 0; j < c; ++j) ops.push_back({ElemOp::col_scale, j, 0, u});
    }
    return ops;
}

inline void apply_op(const FiniteRing& R, std::size_t r, std::size_t c, const ElemOp& op, std::vector<Elem>& e) {
    switch (op.kind) {
    case ElemOp::row_add:  // row i += s * row j
        for (std::size_t k = 0; k < c; ++k) e[op.i * c + k] = R.add(e[op.i * c + k], R.mul(op.s, e[op.j * c + k]));
        break;
    case ElemOp::col_add:  // col j += col i * s
        for (std::size_t k = 0; k < r; ++k) e[k * c + op.j] = R.add(e[k * c + op.j], R.mul(e[k * c + op.i], op.s));
        break;
    case ElemOp::row_scale:
        for (std::size_t k = 0; k < c; ++k) e[op.i * c + k] = R.mul(op.s, e[op.i * c + k]);
        break;
    case ElemOp::col_scale:
        for (std::size_t k = 0; k < r; ++k) e[k * c + op.i] = R.mul(e[k * c + op.i], op.s);
        break;
    case ElemOp::row_swap:
        for (std::size_t k = 0; k < c; ++k) std::swap(e[op.i * c + k], e[op.j * c + k]);
        break;
    case ElemOp::col_swap:
        for (std::size_t k = 0; k < r; ++k) std::swap(e[k * c + op.i], e[k * c + op.j]);
        break;
    }
}

inline std::uint64_t encode(const std::vector<Elem>& e, std::size_t q) {
    std::uint64_t idx = 0;
    for (Elem x : e) idx = idx * q + x;
    return idx;
}

inline void decode(std::uint64_t idx, std::size_t q, std::vector<Elem>& e) {
    for (std::size_t p = e.size(); p-- > 0;) {
        e[p] = static_cast<Elem>(idx % q);
        idx /= q;
    }
}

inline bool has_zero_line(const std::vector<Elem>& e, std::size_t r, std::size_t c) {
    for (std::size_t i = 0; i < r; ++i) {
        bool z = true;
        for (std::size_t k = 0; k < c && z; ++k) z = e[i * c + k] == 0;
        if (z) return true;
    }
    for (std::size_t j = 0; j < c; ++j) {
        bool z = true;
        for (std::size_t k = 0; k < r && z; ++k) z = e[k * c + j] == 0;
        if (z) return true;
    }
    return false;
}

}  // namespace detail

inline TruncatedPoM build_W(const FiniteRing& R, std::size_t kmax, const WOptions& opt = {}) {
    if (kmax == 0) throw InvalidInput("kmax must be positive");
    if (!R.is_unital() && opt.check_s_unital) {
        auto rep = check_weakly_s_unital(R, kmax, opt.max_matrices, true);
        for (auto& r : rep)
            if (r.verdict == Truth::no)
                throw InvalidInput("build_W needs a weakly s-unital ring; fails at n=" + std::to_string(r.n) +
                                   " with a=" + r.counterexample->str());
    }
    std::uint64_t total = 0;
    for (std::size_t r = 1; r <= kmax; ++r)
        for (std::size_t c = 1; c <= kmax; ++c) {
            total += matrix_count(R, r, c, opt.max_matrices + 1);
            if (total > opt.max_matrices)
                throw BoundExceeded("build_W: more than " + std::to_string(opt.max_matrices) + " matrices to enumerate");
        }

    TruncatedPoM W;
    W.ring = &R;
    W.kmax = kmax;
    W.enumerated = total;
    W.sub1.budget = opt.budget;
    W.table_.assign(kmax * kmax, {});
    const std::size_t q = R.size();

    // zero class first, so that it is class 0
    W.reps.push_back(Mat::zero(R, 1, 1));
    W.members.push_back(0);
    W.inv.emplace_back(1, 1);

    for (std::size_t r = 1; r <= kmax; ++r)
        for (std::size_t c = 1; c <= kmax; ++c) {
            const std::uint64_t N = matrix_count(R, r, c);
            auto& tab = W.table_[W.shape_key(r, c)];
            constexpr std::uint32_t none = ~std::uint32_t{0};
            tab.assign(N, none);
            std::optional<detail::UnionFind> uf;
            std::vector<Elem> e(r * c), f(r * c);
            if (R.is_unital()) {
                uf.emplace(N);
                auto ops = detail::elementary_ops(R, r, c);
                for (std::uint64_t idx = 0; idx < N; ++idx) {
                    detail::decode(idx, q, e);
                    if (detail::has_zero_line(e, r, c)) continue;  // handled through compression
                    for (const auto& op : ops) {
                        f = e;
                        detail::apply_op(R, r, c, op, f);
                        uf->unite(static_cast<std::uint32_t>(idx), static_cast<std::uint32_t>(detail::encode(f, q)));
                    }
                }
            }
            for (std::uint64_t idx = 0; idx < N; ++idx) {
                detail::decode(idx, q, e);
                if (detail::has_zero_line(e, r, c)) {
                    Mat cm = compress(Mat(R, r, c, e));
                    tab[idx] = cm.is_zero() ? 0u : W.table_[W.shape_key(cm.rows(), cm.cols())][matrix_index(cm)];
                    ++W.members[tab[idx]];
                    continue;
                }
                std::uint64_t root = uf ? uf->find(static_cast<std::uint32_t>(idx)) : idx;
                if (tab[root] == none) {
                    Mat m(R, r, c, e);
                    auto key = TruncatedPoM::invariant_of(m);
                    std::uint32_t cls = none;
                    for (std::size_t k = 0; k < W.reps.size() && cls == none; ++k) {
                        if (W.inv[k] != key) continue;
                        ++W.comparisons;
                        if (W.equivalent(m, W.reps[k])) cls = static_cast<std::uint32_t>(k);
                    }
                    if (cls == none) {
                        cls = static_cast<std::uint32_t>(W.reps.size());
                        W.reps.push_back(m);
                        W.members.push_back(0);
                        W.inv.push_back(key);
                    }
                    tab[root] = cls;
                }
                tab[idx] = tab[root];
                ++W.members[tab[idx]];
            }
        }

    const std::size_t n = W.reps.size();
    FinitePoM& P = W.pom;
    P.zero = 0;
    for (auto& m : W.reps) P.labels.push_back(m.str());
    P.leq.assign(n, std::vector<char>(n, 0));
    parallel_for(n * n, opt.jobs, [&](std::size_t k) {
        std::size_t i = k / n, j = k % n;
        if (i == j) { P.leq[i][j] = 1; return; }
        auto res = precsim1(W.reps[i], W.reps[j], W.sub1);
        if (res.verdict == Truth::unknown)
            throw BoundExceeded("precsim1 budget exhausted ordering " + W.reps[i].str() + " and " + W.reps[j].str());
        P.leq[i][j] = res.verdict == Truth::yes;
    });
    W.comparisons += n * (n - 1);

    P.add.assign(n, std::vector<std::optional<std::size_t>>(n));
    W.add_cert.assign(n, std::vector<Cert>(n, Cert::exact));
    parallel_for(n * n, opt.jobs, [&](std::size_t k) {
        std::size_t i = k / n, j = k % n;
        if (j < i) return;
        try {
            auto cls = W.classify(diag_sum(W.reps[i], W.reps[j]));
            P.add[i][j] = cls;
            if (!cls) W.add_cert[i][j] = Cert::truncation_relative;
        } catch (const BoundExceeded&) {
            // sum left undefined; the entry is only as good as the budget
            W.add_cert[i][j] = Cert::bound_relative;
        }
    });
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) {
            P.add[i][j] = P.add[j][i];
            W.add_cert[i][j] = W.add_cert[j][i];
        }
    if (auto bad = P.order_violation()) throw InvariantBreach("build_W order: " + *bad);
    if (auto bad = P.monoid_violation()) throw InvariantBreach("build_W addition: " + *bad);
    return W;
}

/// Witness for u (+) v <=1 v (+) u: the block swap on both sides (unital rings).
inline Sub1Witness sum_swap_witness(const Mat& u, const Mat& v) {
    const FiniteRing& R = u.ring();
    if (!R.is_unital()) throw InvalidInput("swap witness needs a unital ring");
    const Elem one = *R.one();
    const std::size_t ur = u.rows(), uc = u.cols(), vr = v.rows(), vc = v.cols();
    Mat r(R, ur + vr, vr + ur), t(R, vc + uc, uc + vc);
    for (std::size_t i = 0; i < ur; ++i) r.at(i, vr + i) = one;
    for (std::size_t i = 0; i < vr; ++i) r.at(ur + i, i) = one;
    for (std::size_t j = 0; j < uc; ++j) t.at(vc + j, j) = one;
    for (std::size_t j = 0; j < vc; ++j) t.at(j, uc + j) = one;
    Sub1Witness w{r, t};
    if (r * diag_sum(v, u) * t != diag_sum(u, v)) throw InvariantBreach("swap witness failed");
    return w;
}

// ---------------------------------------------------------------------------
// V(R)
// ---------------------------------------------------------------------------

struct VMonoid {
    const FiniteRing* ring = nullptr;
    std::size_t kmax = 0;
    std::vector<Mat> reps;             // idempotent representatives
    std::vector<std::size_t> iota;     // W class of each V class
    FinitePoM pom;                     // algebraic order: x <= y iff x + z = y for some class z
    std::vector<std::vector<Cert>> add_cert;
    std::uint64_t idempotents = 0;

    std::size_t size() const { return reps.size(); }
};

struct IotaReport {
    bool injective = true;
    bool surjective = true;
    bool order_iso = true;  // order preserved and reflected on the truncation
    std::vector<std::size_t> missed;  // W classes without an idempotent
};

inline VMonoid build_V(const TruncatedPoM& W, const WOptions& opt = {}) {
    const FiniteRing& R = *W.ring;
    VMonoid V;
    V.ring = &R;
    V.kmax = W.kmax;
    std::vector<std::vector<std::size_t>> by_w(W.size());
    auto classify = [&](const Mat& e) -> std::optional<std::size_t> {
        auto w = W.classify(e);
        if (!w) return std::nullopt;
        for (std::size_t k : by_w[*w]) {
            auto res = mvn_equivalent(e, V.reps[k], opt.budget);
            if (res.verdict == Truth::unknown)
                throw BoundExceeded("mvn_equivalent budget exhausted on " + e.str() + " vs " + V.reps[k].str());
            if (res.verdict == Truth::yes) return k;
        }
        return std::nullopt;
    };
    for (std::size_t n = 1; n <= W.kmax; ++n)
        for_each_matrix(R, n, n, [&](const Mat& m) {
            if (!is_idempotent(m)) return true;
            ++V.idempotents;
            if (!classify(m)) {
                std::size_t w = *W.classify(m);
                by_w[w].push_back(V.reps.size());
                V.reps.push_back(m);
                V.iota.push_back(w);
            }
            return true;
        });
    const std::size_t n = V.reps.size();
    FinitePoM& P = V.pom;
    for (auto& m : V.reps) P.labels.push_back(m.str());
    P.zero = 0;  // the 1x1 zero idempotent is enumerated first
    P.add.assign(n, std::vector<std::optional<std::size_t>>(n));
    V.add_cert.assign(n, std::vector<Cert>(n, Cert::exact));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            auto k = classify(diag_sum(V.reps[i], V.reps[j]));
            P.add[i][j] = P.add[j][i] = k;
            if (!k) V.add_cert[i][j] = V.add_cert[j][i] = Cert::truncation_relative;
        }
    P.leq.assign(n, std::vector<char>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t z = 0; z < n; ++z)
            if (P.add[i][z]) P.leq[i][*P.add[i][z]] = 1;
    if (auto bad = P.order_violation()) throw InvariantBreach("build_V order: " + *bad);
    if (auto bad = P.monoid_violation()) throw InvariantBreach("build_V addition: " + *bad);
    return V;
}

inline IotaReport iota_report(const VMonoid& V, const TruncatedPoM& W) {
    IotaReport rep;
    std::vector<char> hit(W.size(), 0);
    for (std::size_t w : V.iota) {
        if (hit[w]) rep.injective = false;
        hit[w] = 1;
    }
    for (std::size_t w = 0; w < W.size(); ++w)
        if (!hit[w]) {
            rep.surjective = false;
            rep.missed.push_back(w);
        }
    for (std::size_t i = 0; i < V.size(); ++i)
        for (std::size_t j = 0; j < V.size(); ++j)
            if (V.pom.le(i, j) != W.pom.le(V.iota[i], V.iota[j])) rep.order_iso = false;
    return rep;
}

// ---------------------------------------------------------------------------
// Saturation
// ---------------------------------------------------------------------------

struct SaturationStep {
    std::size_t k = 0;
    std::size_t classes_small = 0, classes_large = 0;
    std::size_t pairs_compared = 0;
    std::vector<std::pair<std::size_t, std::size_t>> changed;  // class indices in the size-k model
    std::size_t sums_newly_defined = 0;
    bool stable() const { return changed.empty(); }
};

struct SaturationReport {
    std::vector<SaturationStep> steps;
    bool stable() const {
        for (auto& s : steps)
            if (!s.stable()) return false;
        return true;
    }
};

/// For k < kmax: maps the size-k model into the size-(k+1) model and compares order and sums.
/// Evidence about stabilization, not a proof of it.
inline SaturationReport saturation_report(const FiniteRing& R, std::size_t kmax, const WOptions& opt = {}) {
    SaturationReport rep;
    if (kmax < 2) return rep;
    TruncatedPoM prev = build_W(R, 1, opt);
    for (std::size_t k = 1; k < kmax; ++k) {
        TruncatedPoM next = build_W(R, k + 1, opt);
        SaturationStep st;
        st.k = k;
        st.classes_small = prev.size();
        st.classes_large = next.size();
        std::vector<std::size_t> phi(prev.size());
        for (std::size_t i = 0; i < prev.size(); ++i) {
            auto c = next.classify(prev.reps[i]);
            if (!c) throw InvariantBreach("saturation: class lost under enlargement");
            phi[i] = *c;
        }
        for (std::size_t i = 0; i < prev.size(); ++i)
            for (std::size_t j = 0; j < prev.size(); ++j) {
                ++st.pairs_compared;
                if (prev.pom.le(i, j) != next.pom.le(phi[i], phi[j])) st.changed.emplace_back(i, j);
                auto a = prev.pom.add[i][j];
                auto b = next.pom.add[phi[i]][phi[j]];
                if (a && (!b || phi[*a] != *b)) st.changed.emplace_back(i, j);
                if (!a && b) ++st.sums_newly_defined;
            }
        rep.steps.push_back(std::move(st));
        prev = std::move(next);
    }
    return rep;
}

}  // namespace cuntz
