#pragma once
/**
 * @file pom.hpp
 * @brief Finite positively ordered monoids given by tables, with Hasse diagrams and DOT output.
 *
 * The addition table may be partial: an empty entry means the sum fell outside a truncation.
 */

#include "core.hpp"

#include <optional>
#include <sstream>

namespace cuntz {

struct FinitePoM {
    std::vector<std::string> labels;
    std::size_t zero = 0;
    std::vector<std::vector<char>> leq;                      // leq[i][j]: i <= j
    std::vector<std::vector<std::optional<std::size_t>>> add;  // empty when the monoid has no addition

    std::size_t size() const { return labels.size(); }
    bool le(std::size_t i, std::size_t j) const { return leq[i][j] != 0; }
    bool has_add() const { return !add.empty(); }
    bool add_total() const {
        if (!has_add()) return false;
        for (auto& row : add)
            for (auto& x : row)
                if (!x) return false;
        return true;
    }
    std::size_t sum(std::size_t i, std::size_t j) const {
        if (!add[i][j]) throw InvalidInput("sum " + labels[i] + " + " + labels[j] + " outside the table");
        return *add[i][j];
    }

    std::optional<std::size_t> find(std::string_view label) const {
        for (std::size_t i = 0; i < size(); ++i)
            if (labels[i] == label) return i;
        return std::nullopt;
    }

    /// Partial order laws and 0 least.
    std::optional<std::string> order_violation() const {
        const std::size_t n = size();
        if (leq.size() != n) return "leq table has wrong size";
        for (std::size_t i = 0; i < n; ++i) {
            if (leq[i].size() != n) return "leq table has wrong size";
            if (!le(i, i)) return "not reflexive at " + labels[i];
            if (!le(zero, i)) return "zero not below " + labels[i];
        }
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                if (i != j && le(i, j) && le(j, i)) return "not antisymmetric: " + labels[i] + ", " + labels[j];
                if (!le(i, j)) continue;
                for (std::size_t k = 0; k < n; ++k)
                    if (le(j, k) && !le(i, k))
                        return "not transitive: " + labels[i] + " <= " + labels[j] + " <= " + labels[k];
            }
        return std::nullopt;
    }

    /// Commutativity, zero neutral, associativity and monotonicity wherever the entries are defined.
    std::optional<std::string> monoid_violation() const {
        if (!has_add()) return std::nullopt;
        const std::size_t n = size();
        for (std::size_t i = 0; i < n; ++i) {
            if (add[zero][i] != i) return "zero not neutral for " + labels[i];
            for (std::size_t j = 0; j < n; ++j)
                if (add[i][j] != add[j][i]) return "not commutative at " + labels[i] + ", " + labels[j];
        }
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                if (!add[i][j]) continue;
                for (std::size_t k = 0; k < n; ++k) {
                    if (!add[j][k]) continue;
                    auto l = add[*add[i][j]][k], r = add[i][*add[j][k]];
                    if (l && r && *l != *r) return "not associative at " + labels[i] + ", " + labels[j] + ", " + labels[k];
                }
            }
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                if (!le(i, j)) continue;
                for (std::size_t k = 0; k < n; ++k)
                    if (add[i][k] && add[j][k] && !le(*add[i][k], *add[j][k]))
                        return "addition not monotone at " + labels[i] + " <= " + labels[j] + " plus " + labels[k];
            }
        return std::nullopt;
    }

    /// Covering pairs (i, j): i < j with nothing strictly between.
    std::vector<std::pair<std::size_t, std::size_t>> hasse() const {
        std::vector<std::pair<std::size_t, std::size_t>> out;
        const std::size_t n = size();
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                if (i == j || !le(i, j)) continue;
                bool cover = true;
                for (std::size_t k = 0; k < n && cover; ++k)
                    if (k != i && k != j && le(i, k) && le(k, j)) cover = false;
                if (cover) out.emplace_back(i, j);
            }
        return out;
    }

    std::string to_dot(std::string_view name = "pom", std::size_t max_nodes = 200) const {
        std::ostringstream os;
        os << "digraph \"" << name << "\" {\n  rankdir=BT;\n  node [shape=box, fontname=\"monospace\"];\n";
        const std::size_t n = std::min(size(), max_nodes);
        for (std::size_t i = 0; i < n; ++i) os << "  n" << i << " [label=\"" << escape(labels[i]) << "\"];\n";
        for (auto [i, j] : hasse())
            if (i < n && j < n) os << "  n" << i << " -> n" << j << ";\n";
        if (size() > n) os << "  // " << size() - n << " nodes omitted\n";
        os << "}\n";
        return os.str();
    }

    /// Isomorphism with explicit map phi (this -> other): bijective, order reflecting and preserving,
    /// and additive on the entries defined in both tables.
    bool isomorphic_via(const FinitePoM& other, const std::vector<std::size_t>& phi) const {
        const std::size_t n = size();
        if (other.size() != n || phi.size() != n) return false;
        std::vector<char> hit(n, 0);
        for (auto p : phi) {
            if (p >= n || hit[p]) return false;
            hit[p] = 1;
        }
        if (phi[zero] != other.zero) return false;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                if (le(i, j) != other.le(phi[i], phi[j])) return false;
                if (has_add() && other.has_add() && add[i][j] && other.add[phi[i]][phi[j]] &&
                    phi[*add[i][j]] != *other.add[phi[i]][phi[j]])
                    return false;
            }
        return true;
    }

private:
    static std::string escape(const std::string& s) {
        std::string o;
        for (char c : s) {
            if (c == '"' || c == '\\') o += '\\';
            o += c;
        }
        return o;
    }
};

/// {0, 1, ..., n} with the usual order; sums beyond n are left undefined.
inline FinitePoM truncated_chain(std::size_t n) {
    FinitePoM m;
    for (std::size_t i = 0; i <= n; ++i) m.labels.push_back(std::to_string(i));
    m.leq.assign(n + 1, std::vector<char>(n + 1, 0));
    m.add.assign(n + 1, std::vector<std::optional<std::size_t>>(n + 1));
    for (std::size_t i = 0; i <= n; ++i)
        for (std::size_t j = 0; j <= n; ++j) {
            m.leq[i][j] = i <= j;
            if (i + j <= n) m.add[i][j] = i + j;
        }
    return m;
}

}  // namespace cuntz
