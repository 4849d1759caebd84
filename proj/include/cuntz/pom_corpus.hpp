#pragma once
/**
 * @file pom_corpus.hpp
 * @brief Generators of finite positively ordered monoids with total addition: exhaustive
 * enumeration of labelled tables at small sizes, plus named families (saturating chains,
 * products, semilattices).
 */

#include "pom.hpp"

namespace cuntz {

namespace detail {

/// All partial orders on {1..m-1} extended by 0 at the bottom, as leq tables of size m.
inline std::vector<std::vector<std::vector<char>>> positive_orders(std::size_t m) {
    std::vector<std::vector<std::vector<char>>> out;
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 1; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) pairs.emplace_back(i, j);
    // each unordered pair is incomparable, i < j, or j < i
    std::vector<int> st(pairs.size(), 0);
    std::vector<std::vector<char>> le(m, std::vector<char>(m, 0));
    std::function<void(std::size_t)> rec = [&](std::size_t p) {
        if (p == pairs.size()) {
            for (std::size_t a = 0; a < m; ++a)
                for (std::size_t b = 0; b < m; ++b)
                    if (le[a][b])
                        for (std::size_t c = 0; c < m; ++c)
                            if (le[b][c] && !le[a][c]) return;
            out.push_back(le);
            return;
        }
        auto [i, j] = pairs[p];
        for (int s = 0; s < 3; ++s) {
            le[i][j] = s == 1;
            le[j][i] = s == 2;
            rec(p + 1);
        }
        le[i][j] = le[j][i] = 0;
    };
    for (std::size_t i = 0; i < m; ++i) {
        le[i][i] = 1;
        le[0][i] = 1;
    }
    rec(0);
    return out;
}

}  // namespace detail

/// Every labelled positively ordered commutative monoid on {0..m-1} with 0 the identity.
/// Conical tables only (x + y = 0 forces x = y = 0), which positivity plus antisymmetry imply.
inline std::vector<FinitePoM> enumerate_positive_monoids(std::size_t m) {
    if (m == 0 || m > 6) throw InvalidInput("enumerate_positive_monoids supports 1..6 elements");
    std::vector<FinitePoM> out;
    const auto orders = detail::positive_orders(m);
    std::vector<std::pair<std::size_t, std::size_t>> cells;
    for (std::size_t i = 1; i < m; ++i)
        for (std::size_t j = i; j < m; ++j) cells.emplace_back(i, j);
    constexpr std::size_t unset = ~std::size_t{0};
    std::vector<std::vector<std::size_t>> t(m, std::vector<std::size_t>(m, unset));
    for (std::size_t i = 0; i < m; ++i) t[0][i] = t[i][0] = i;
    auto assoc_ok = [&]() {
        for (std::size_t a = 1; a < m; ++a)
            for (std::size_t b = 1; b < m; ++b) {
                std::size_t ab = t[a][b];
                if (ab == unset) continue;
                for (std::size_t c = 1; c < m; ++c) {
                    std::size_t bc = t[b][c];
                    if (bc == unset) continue;
                    std::size_t l = t[ab][c], r = t[a][bc];
                    if (l != unset && r != unset && l != r) return false;
                }
            }
        return true;
    };
    auto emit = [&]() {
        for (const auto& le : orders) {
            bool ok = true;
            for (std::size_t x = 0; x < m && ok; ++x)
                for (std::size_t y = 0; y < m && ok; ++y) {
                    if (!le[x][t[x][y]]) ok = false;  // x <= x + y
                    if (!le[x][y]) continue;
                    for (std::size_t z = 0; z < m && ok; ++z)
                        if (!le[t[x][z]][t[y][z]]) ok = false;
                }
            if (!ok) continue;
            FinitePoM P;
            for (std::size_t i = 0; i < m; ++i) P.labels.push_back("e" + std::to_string(i));
            P.zero = 0;
            P.leq = le;
            P.add.assign(m, std::vector<std::optional<std::size_t>>(m));
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t j = 0; j < m; ++j) P.add[i][j] = t[i][j];
            out.push_back(std::move(P));
        }
    };
    std::function<void(std::size_t)> rec = [&](std::size_t p) {
        if (p == cells.size()) { emit(); return; }
        auto [i, j] = cells[p];
        for (std::size_t v = 1; v < m; ++v) {
            t[i][j] = t[j][i] = v;
            if (assoc_ok()) rec(p + 1);
        }
        t[i][j] = t[j][i] = unset;
    };
    rec(0);
    return out;
}

/// {0..n-1} with x + y = min(x + y, n - 1); the top absorbs like an infinite element.
inline FinitePoM saturating_chain(std::size_t n) {
    FinitePoM P;
    for (std::size_t i = 0; i < n; ++i) P.labels.push_back(i + 1 == n && n > 1 ? "inf" : std::to_string(i));
    P.leq.assign(n, std::vector<char>(n, 0));
    P.add.assign(n, std::vector<std::optional<std::size_t>>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            P.leq[i][j] = i <= j;
            P.add[i][j] = std::min(i + j, n - 1);
        }
    return P;
}

/// {0..n-1} with x + y = max(x, y).
inline FinitePoM max_chain(std::size_t n) {
    FinitePoM P = saturating_chain(n);
    for (std::size_t i = 0; i < n; ++i) {
        P.labels[i] = "m" + std::to_string(i);
        for (std::size_t j = 0; j < n; ++j) P.add[i][j] = std::max(i, j);
    }
    return P;
}

/// Subsets of {0..k-1} under union and inclusion.
inline FinitePoM boolean_lattice(std::size_t k) {
    const std::size_t n = std::size_t{1} << k;
    FinitePoM P;
    for (std::size_t i = 0; i < n; ++i) P.labels.push_back("s" + std::to_string(i));
    P.leq.assign(n, std::vector<char>(n, 0));
    P.add.assign(n, std::vector<std::optional<std::size_t>>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            P.leq[i][j] = (i & j) == i;
            P.add[i][j] = i | j;
        }
    return P;
}

/// Componentwise product.
inline FinitePoM product(const FinitePoM& A, const FinitePoM& B) {
    const std::size_t na = A.size(), nb = B.size(), n = na * nb;
    FinitePoM P;
    for (std::size_t i = 0; i < n; ++i) P.labels.push_back("(" + A.labels[i % na] + "," + B.labels[i / na] + ")");
    P.zero = A.zero + na * B.zero;
    P.leq.assign(n, std::vector<char>(n, 0));
    P.add.assign(n, std::vector<std::optional<std::size_t>>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            P.leq[i][j] = A.le(i % na, j % na) && B.le(i / na, j / na);
            auto a = A.add[i % na][j % na], b = B.add[i / na][j / na];
            if (a && b) P.add[i][j] = *a + na * *b;
        }
    return P;
}

/// Named families with 2..max_size elements.
inline std::vector<std::pair<std::string, FinitePoM>> curated_monoids(std::size_t max_size = 8) {
    std::vector<std::pair<std::string, FinitePoM>> out;
    for (std::size_t n = 2; n <= max_size; ++n) out.emplace_back("saturating_chain(" + std::to_string(n) + ")", saturating_chain(n));
    for (std::size_t n = 2; n <= max_size; ++n) out.emplace_back("max_chain(" + std::to_string(n) + ")", max_chain(n));
    for (std::size_t k = 1; (std::size_t{1} << k) <= max_size; ++k)
        out.emplace_back("boolean_lattice(" + std::to_string(k) + ")", boolean_lattice(k));
    for (std::size_t a = 2; a <= max_size; ++a)
        for (std::size_t b = 2; a * b <= max_size; ++b) {
            out.emplace_back("saturating_chain(" + std::to_string(a) + ")x(" + std::to_string(b) + ")",
                             product(saturating_chain(a), saturating_chain(b)));
            out.emplace_back("saturating_chain(" + std::to_string(a) + ")xmax_chain(" + std::to_string(b) + ")",
                             product(saturating_chain(a), max_chain(b)));
        }
    return out;
}

}  // namespace cuntz
