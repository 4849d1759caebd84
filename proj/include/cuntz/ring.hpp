#pragma once
/**
 * @file ring.hpp
 * @brief Finite rings given by tables, ring specs, ideals and homomorphisms.
 *
 * Elements are dense ids 0..n-1 with 0 the additive identity.  Encodings of
 * the built-in constructions:
 *  - zmod(n), gf(p): the id is the residue.
 *  - matrix(S,k): base-|S| digits, entry (0,0) least significant, row-major.
 *  - upper(S,k): as matrix, over the positions i <= j only.
 *  - product(A,B): a + |A|*b.
 */

#include "core.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>

namespace cuntz {

class FiniteRing;
using RingPtr = std::shared_ptr<const FiniteRing>;

inline bool is_prime(unsigned n) {
    if (n < 2) return false;
    for (unsigned d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

/// Largest ring built from tables (tables are |R|^2 entries each).
inline constexpr std::size_t max_ring_size = 1024;

// ---------------------------------------------------------------------------
// RingSpec
// ---------------------------------------------------------------------------

struct RingSpec {
    enum class Kind { zmod, gf, matrix, upper, product, ideal, table };

    Kind kind = Kind::zmod;
    unsigned n = 2;               // modulus, prime, or matrix size
    std::vector<RingSpec> inner;  // matrix/upper/ideal: 1, product: 2
    std::vector<Elem> generators; // ideal
    std::size_t size = 0;         // table
    std::vector<Elem> add, mul;   // table, row-major size*size
    std::optional<Elem> one;      // table

    static RingSpec zmod(unsigned m) { RingSpec s; s.kind = Kind::zmod; s.n = m; return s; }
    static RingSpec gf(unsigned p) { RingSpec s; s.kind = Kind::gf; s.n = p; return s; }
    static RingSpec matrix(RingSpec in, unsigned k) {
        RingSpec s; s.kind = Kind::matrix; s.n = k; s.inner.push_back(std::move(in)); return s;
    }
    static RingSpec upper(RingSpec in, unsigned k) {
        RingSpec s; s.kind = Kind::upper; s.n = k; s.inner.push_back(std::move(in)); return s;
    }
    static RingSpec product(RingSpec a, RingSpec b) {
        RingSpec s; s.kind = Kind::product; s.inner = {std::move(a), std::move(b)}; return s;
    }
    static RingSpec ideal(RingSpec ambient, std::vector<Elem> gens) {
        RingSpec s; s.kind = Kind::ideal; s.inner.push_back(std::move(ambient));
        s.generators = std::move(gens); return s;
    }

    bool operator==(const RingSpec&) const = default;

    std::string to_string() const;
    std::string to_keyvalue() const;
    static RingSpec parse(std::string_view text);
};

namespace detail {

inline std::string trim_ws(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

inline std::string join_elems(const std::vector<Elem>& v, const char* sep) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += sep;
        out += std::to_string(v[i]);
    }
    return out;
}

inline std::vector<Elem> parse_elem_list(std::string_view s) {
    std::vector<Elem> out;
    std::string cur;
    auto flush = [&] {
        if (cur.empty()) return;
        std::size_t pos = 0;
        unsigned long v = 0;
        try {
            v = std::stoul(cur, &pos);
        } catch (const std::exception&) {
            throw InvalidInput("bad element id '" + cur + "'");
        }
        if (pos != cur.size()) throw InvalidInput("bad element id '" + cur + "'");
        out.push_back(static_cast<Elem>(v));
        cur.clear();
    };
    for (char c : s) {
        if (std::isdigit(static_cast<unsigned char>(c))) cur += c;
        else if (std::isspace(static_cast<unsigned char>(c)) || c == ',' || c == '/' || c == '[' || c == ']') flush();
        else throw InvalidInput(std::string("unexpected character '") + c + "' in element list");
    }
    flush();
    return out;
}

inline unsigned parse_uint(const std::string& s) {
    std::size_t pos = 0;
    unsigned long v = 0;
    try {
        v = std::stoul(s, &pos);
    } catch (const std::exception&) {
        throw InvalidInput("expected integer, got '" + s + "'");
    }
    if (pos != s.size()) throw InvalidInput("expected integer, got '" + s + "'");
    return static_cast<unsigned>(v);
}

// split top-level comma separated arguments (brackets and parens nest)
inline std::vector<std::string> split_args(std::string_view s) {
    std::vector<std::string> out;
    int depth = 0;
    std::string cur;
    for (char c : s) {
        if (c == '(' || c == '[' || c == '{') ++depth;
        if (c == ')' || c == ']' || c == '}') --depth;
        if (c == ',' && depth == 0) {
            out.push_back(trim_ws(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!trim_ws(cur).empty()) out.push_back(trim_ws(cur));
    return out;
}

inline std::map<std::string, std::string> parse_kv_lines(std::string_view text, char sep) {
    std::map<std::string, std::string> kv;
    std::string line;
    std::istringstream in{std::string(text)};
    while (std::getline(in, line, sep)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto t = trim_ws(line);
        if (t.empty()) continue;
        auto eq = t.find('=');
        if (eq == std::string::npos) throw InvalidInput("missing '=' in line '" + t + "'");
        auto key = trim_ws(std::string_view(t).substr(0, eq));
        auto val = trim_ws(std::string_view(t).substr(eq + 1));
        if (kv.count(key)) throw InvalidInput("duplicate key '" + key + "'");
        kv[key] = val;
    }
    return kv;
}

}  // namespace detail

inline std::string RingSpec::to_string() const {
    switch (kind) {
    case Kind::zmod: return "zmod(" + std::to_string(n) + ")";
    case Kind::gf: return "gf(" + std::to_string(n) + ")";
    case Kind::matrix: return "matrix(" + inner.at(0).to_string() + "," + std::to_string(n) + ")";
    case Kind::upper: return "upper(" + inner.at(0).to_string() + "," + std::to_string(n) + ")";
    case Kind::product: return "product(" + inner.at(0).to_string() + "," + inner.at(1).to_string() + ")";
    case Kind::ideal:
        return "ideal(" + inner.at(0).to_string() + ",[" + detail::join_elems(generators, ",") + "])";
    case Kind::table: {
        std::string s = "table{size=" + std::to_string(size) + ";add=" + detail::join_elems(add, " ") +
                        ";mul=" + detail::join_elems(mul, " ");
        if (one) s += ";one=" + std::to_string(*one);
        return s + "}";
    }
    }
    return {};
}

inline std::string RingSpec::to_keyvalue() const {
    std::ostringstream o;
    switch (kind) {
    case Kind::zmod: o << "kind = zmod\nparams = " << n << "\n"; break;
    case Kind::gf: o << "kind = gf\nparams = " << n << "\n"; break;
    case Kind::matrix: o << "kind = matrix\ninner = " << inner.at(0).to_string() << "\nparams = " << n << "\n"; break;
    case Kind::upper: o << "kind = upper\ninner = " << inner.at(0).to_string() << "\nparams = " << n << "\n"; break;
    case Kind::product:
        o << "kind = product\nleft = " << inner.at(0).to_string() << "\nright = " << inner.at(1).to_string() << "\n";
        break;
    case Kind::ideal:
        o << "kind = ideal\ninner = " << inner.at(0).to_string() << "\ngenerators = "
          << detail::join_elems(generators, " ") << "\n";
        break;
    case Kind::table:
        o << "kind = table\nsize = " << size << "\nadd = " << detail::join_elems(add, " ")
          << "\nmul = " << detail::join_elems(mul, " ") << "\n";
        if (one) o << "one = " << *one << "\n";
        break;
    }
    return o.str();
}

namespace detail {

inline RingSpec spec_from_kv(const std::map<std::string, std::string>& kv) {
    auto get = [&](const char* k) -> const std::string& {
        auto it = kv.find(k);
        if (it == kv.end()) throw InvalidInput(std::string("ring spec missing key '") + k + "'");
        return it->second;
    };
    const std::string& kind = get("kind");
    if (kind == "zmod") return RingSpec::zmod(parse_uint(get("params")));
    if (kind == "gf") return RingSpec::gf(parse_uint(get("params")));
    if (kind == "matrix" || kind == "matrix_ring")
        return RingSpec::matrix(RingSpec::parse(get("inner")), parse_uint(get("params")));
    if (kind == "upper" || kind == "upper_triangular")
        return RingSpec::upper(RingSpec::parse(get("inner")), parse_uint(get("params")));
    if (kind == "product") return RingSpec::product(RingSpec::parse(get("left")), RingSpec::parse(get("right")));
    if (kind == "ideal") return RingSpec::ideal(RingSpec::parse(get("inner")), parse_elem_list(get("generators")));
    if (kind == "table") {
        RingSpec s;
        s.kind = RingSpec::Kind::table;
        s.size = parse_uint(get("size"));
        s.add = parse_elem_list(get("add"));
        s.mul = parse_elem_list(get("mul"));
        if (kv.count("one")) s.one = parse_uint(kv.at("one"));
        return s;
    }
    throw InvalidInput("unknown ring kind '" + kind + "'");
}

}  // namespace detail

/// Accepts the inline form (`zmod(4)`, `zmod4`, `matrix(gf(2),2)`, `table{...}`)
/// or the multi-line key/value form.
inline RingSpec RingSpec::parse(std::string_view text) {
    std::string t = detail::trim_ws(text);
    if (t.empty()) throw InvalidInput("empty ring spec");
    if (t.find('\n') != std::string::npos || (t.find('=') != std::string::npos && t.find('{') == std::string::npos))
        return detail::spec_from_kv(detail::parse_kv_lines(t, '\n'));

    auto brace = t.find('{');
    if (brace != std::string::npos) {
        if (detail::trim_ws(std::string_view(t).substr(0, brace)) != "table" || t.back() != '}')
            throw InvalidInput("bad table spec '" + t + "'");
        auto kv = detail::parse_kv_lines(std::string_view(t).substr(brace + 1, t.size() - brace - 2), ';');
        kv["kind"] = "table";
        return detail::spec_from_kv(kv);
    }

    auto paren = t.find('(');
    if (paren == std::string::npos) {
        // shorthand: zmod4, gf2
        std::size_t i = 0;
        while (i < t.size() && std::isalpha(static_cast<unsigned char>(t[i]))) ++i;
        std::string head = t.substr(0, i), tail = t.substr(i);
        if (tail.empty()) throw InvalidInput("bad ring spec '" + t + "'");
        if (head == "zmod" || head == "Z") return zmod(detail::parse_uint(tail));
        if (head == "gf" || head == "F" || head == "GF") return gf(detail::parse_uint(tail));
        throw InvalidInput("bad ring spec '" + t + "'");
    }
    if (t.back() != ')') throw InvalidInput("bad ring spec '" + t + "'");
    std::string head = detail::trim_ws(std::string_view(t).substr(0, paren));
    auto args = detail::split_args(std::string_view(t).substr(paren + 1, t.size() - paren - 2));
    auto need = [&](std::size_t k) {
        if (args.size() != k) throw InvalidInput("wrong argument count in '" + t + "'");
    };
    if (head == "zmod") { need(1); return zmod(detail::parse_uint(args[0])); }
    if (head == "gf") { need(1); return gf(detail::parse_uint(args[0])); }
    if (head == "matrix" || head == "matrix_ring") { need(2); return matrix(parse(args[0]), detail::parse_uint(args[1])); }
    if (head == "upper" || head == "upper_triangular") { need(2); return upper(parse(args[0]), detail::parse_uint(args[1])); }
    if (head == "product") { need(2); return product(parse(args[0]), parse(args[1])); }
    if (head == "ideal") { need(2); return ideal(parse(args[0]), detail::parse_elem_list(args[1])); }
    throw InvalidInput("unknown ring constructor '" + head + "'");
}

// ---------------------------------------------------------------------------
// FiniteRing
// ---------------------------------------------------------------------------

class FiniteRing {
public:
    FiniteRing(RingSpec spec, std::size_t n, std::vector<Elem> add, std::vector<Elem> mul, std::optional<Elem> one)
        : spec_(std::move(spec)), n_(n), add_(std::move(add)), mul_(std::move(mul)), one_(one) {
        if (n_ == 0 || n_ > max_ring_size) throw InvalidInput("ring size out of range");
        if (add_.size() != n_ * n_ || mul_.size() != n_ * n_) throw InvalidInput("table size mismatch");
        for (Elem e : add_)
            if (e >= n_) throw InvalidInput("add table entry out of range");
        for (Elem e : mul_)
            if (e >= n_) throw InvalidInput("mul table entry out of range");
        if (one_ && *one_ >= n_) throw InvalidInput("one out of range");
        neg_.assign(n_, 0);
        for (Elem a = 0; a < n_; ++a) {
            bool found = false;
            for (Elem b = 0; b < n_ && !found; ++b)
                if (add_[a * n_ + b] == 0) { neg_[a] = b; found = true; }
            if (!found) throw InvalidInput("element without additive inverse");
        }
        commutative_ = true;
        for (Elem a = 0; a < n_ && commutative_; ++a)
            for (Elem b = a + 1; b < n_; ++b)
                if (mul_[a * n_ + b] != mul_[b * n_ + a]) { commutative_ = false; break; }
        char_ = compute_char();
    }

    static RingPtr make(const RingSpec& spec);
    static RingPtr zmod(unsigned m) { return make(RingSpec::zmod(m)); }
    static RingPtr gf(unsigned p) { return make(RingSpec::gf(p)); }

    const RingSpec& spec() const { return spec_; }
    std::string name() const { return spec_.to_string(); }
    std::size_t size() const { return n_; }
    Elem zero() const { return 0; }
    std::optional<Elem> one() const { return one_; }
    bool is_unital() const { return one_.has_value(); }
    bool is_commutative() const { return commutative_; }
    unsigned characteristic() const { return char_; }

    Elem add(Elem a, Elem b) const { return add_[a * n_ + b]; }
    Elem mul(Elem a, Elem b) const { return mul_[a * n_ + b]; }
    Elem neg(Elem a) const { return neg_[a]; }
    Elem sub(Elem a, Elem b) const { return add(a, neg_[b]); }

    const std::vector<Elem>& add_table() const { return add_; }
    const std::vector<Elem>& mul_table() const { return mul_; }

    std::optional<Elem> inverse(Elem a) const {
        if (!one_) return std::nullopt;
        for (Elem b = 0; b < n_; ++b)
            if (mul(a, b) == *one_ && mul(b, a) == *one_) return b;
        return std::nullopt;
    }
    bool is_unit(Elem a) const { return inverse(a).has_value(); }

    std::vector<Elem> units() const {
        std::vector<Elem> u;
        for (Elem a = 0; a < n_; ++a)
            if (is_unit(a)) u.push_back(a);
        return u;
    }

    /// p when this is the prime field F_p (ids are residues).
    std::optional<unsigned> prime_field() const {
        if ((spec_.kind == RingSpec::Kind::zmod || spec_.kind == RingSpec::Kind::gf) && is_prime(spec_.n))
            return spec_.n;
        return std::nullopt;
    }

    /// (p, k) when this is Z/p^k (ids are residues).
    std::optional<std::pair<unsigned, unsigned>> chain_ring() const {
        if (spec_.kind != RingSpec::Kind::zmod && spec_.kind != RingSpec::Kind::gf) return std::nullopt;
        unsigned m = spec_.n, p = 0;
        for (unsigned d = 2; d <= m; ++d)
            if (m % d == 0) { p = d; break; }
        unsigned k = 0;
        while (m % p == 0) { m /= p; ++k; }
        if (m != 1) return std::nullopt;
        return std::make_pair(p, k);
    }

    /// Same elements, multiplication reversed.
    RingPtr opposite() const {
        std::vector<Elem> m(n_ * n_);
        for (Elem a = 0; a < n_; ++a)
            for (Elem b = 0; b < n_; ++b) m[a * n_ + b] = mul(b, a);
        RingSpec s;
        s.kind = RingSpec::Kind::table;
        s.size = n_;
        s.add = add_;
        s.mul = m;
        s.one = one_;
        return std::make_shared<FiniteRing>(s, n_, add_, m, one_);
    }

    /// Exhaustive check of the ring axioms; returns a description of the first failure.
    std::optional<std::string> axiom_violation() const {
        for (Elem a = 0; a < n_; ++a) {
            if (add(a, 0) != a || add(0, a) != a) return "zero is not additive identity";
            for (Elem b = 0; b < n_; ++b) {
                if (add(a, b) != add(b, a)) return "addition not commutative";
                if (one_ && b == *one_ && (mul(a, b) != a || mul(b, a) != a)) return "one is not an identity";
                for (Elem c = 0; c < n_; ++c) {
                    if (add(add(a, b), c) != add(a, add(b, c))) return "addition not associative";
                    if (mul(mul(a, b), c) != mul(a, mul(b, c))) return "multiplication not associative";
                    if (mul(a, add(b, c)) != add(mul(a, b), mul(a, c))) return "left distributivity fails";
                    if (mul(add(a, b), c) != add(mul(a, c), mul(b, c))) return "right distributivity fails";
                }
            }
        }
        return std::nullopt;
    }

private:
    unsigned additive_order(Elem a) const {
        unsigned k = 1;
        for (Elem x = a; x != 0; x = add(x, a)) ++k;
        return a == 0 ? 1 : k;
    }
    unsigned compute_char() const {
        if (one_) return additive_order(*one_);
        unsigned l = 1;
        for (Elem a = 0; a < n_; ++a) l = std::lcm(l, additive_order(a));
        return l;
    }

    RingSpec spec_;
    std::size_t n_;
    std::vector<Elem> add_, mul_, neg_;
    std::optional<Elem> one_;
    bool commutative_ = true;
    unsigned char_ = 1;
};

// ---------------------------------------------------------------------------
// Ideals
// ---------------------------------------------------------------------------

/// A two-sided ideal of a unital ring together with its ring view.
struct IdealRing {
    RingPtr ambient;
    std::vector<Elem> members;    // ambient ids, sorted, members[0] == 0
    RingPtr view;                 // dense relabelling, view id i <-> members[i]
    std::vector<Elem> generators;

    Elem to_ambient(Elem v) const { return members.at(v); }
    std::optional<Elem> from_ambient(Elem a) const {
        auto it = std::lower_bound(members.begin(), members.end(), a);
        if (it == members.end() || *it != a) return std::nullopt;
        return static_cast<Elem>(it - members.begin());
    }
    bool is_ideal() const {
        std::set<Elem> m(members.begin(), members.end());
        for (Elem a : members) {
            if (!m.count(ambient->neg(a))) return false;
            for (Elem b : members)
                if (!m.count(ambient->add(a, b))) return false;
            for (Elem r = 0; r < ambient->size(); ++r)
                if (!m.count(ambient->mul(r, a)) || !m.count(ambient->mul(a, r))) return false;
        }
        return true;
    }
};

namespace detail {

inline RingPtr ideal_view(const RingPtr& ambient, const std::vector<Elem>& members, const std::vector<Elem>& gens) {
    std::size_t n = members.size();
    std::map<Elem, Elem> idx;
    for (std::size_t i = 0; i < n; ++i) idx[members[i]] = static_cast<Elem>(i);
    std::vector<Elem> add(n * n), mul(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            add[i * n + j] = idx.at(ambient->add(members[i], members[j]));
            mul[i * n + j] = idx.at(ambient->mul(members[i], members[j]));
        }
    std::optional<Elem> one;
    if (ambient->one() && idx.count(*ambient->one())) one = idx.at(*ambient->one());
    return std::make_shared<FiniteRing>(RingSpec::ideal(ambient->spec(), gens), n, std::move(add), std::move(mul), one);
}

}  // namespace detail

/// Smallest two-sided ideal containing the generators.
inline IdealRing ideal_closure(const RingPtr& ambient, const std::vector<Elem>& generators) {
    if (!ambient->is_unital()) throw InvalidInput("ideal_closure needs a unital ambient ring");
    for (Elem g : generators)
        if (g >= ambient->size()) throw InvalidInput("generator out of range");
    std::set<Elem> s{0};
    // every element r*g*t is reached because the ambient ring has a one
    std::vector<Elem> work;
    for (Elem g : generators)
        for (Elem r = 0; r < ambient->size(); ++r)
            for (Elem t = 0; t < ambient->size(); ++t) s.insert(ambient->mul(ambient->mul(r, g), t));
    bool grew = true;
    while (grew) {
        grew = false;
        std::vector<Elem> cur(s.begin(), s.end());
        for (Elem a : cur)
            for (Elem b : cur) {
                Elem c = ambient->add(a, b);
                if (s.insert(c).second) grew = true;
            }
    }
    IdealRing I;
    I.ambient = ambient;
    I.members.assign(s.begin(), s.end());
    I.generators = generators;
    I.view = detail::ideal_view(ambient, I.members, generators);
    return I;
}

// ---------------------------------------------------------------------------
// Construction
// ---------------------------------------------------------------------------

namespace detail {

inline RingPtr build_matrix_ring(const RingSpec& spec, const RingPtr& in, unsigned k, bool upper_only) {
    std::size_t q = in->size();
    std::vector<std::pair<unsigned, unsigned>> pos;
    for (unsigned i = 0; i < k; ++i)
        for (unsigned j = 0; j < k; ++j)
            if (!upper_only || i <= j) pos.emplace_back(i, j);
    std::size_t n = 1;
    for (std::size_t i = 0; i < pos.size(); ++i) {
        n *= q;
        if (n > max_ring_size) throw InvalidInput("ring " + spec.to_string() + " too large for tables");
    }
    auto decode = [&](std::size_t id) {
        std::vector<Elem> m(k * k, 0);
        for (auto [i, j] : pos) {
            m[i * k + j] = static_cast<Elem>(id % q);
            id /= q;
        }
        return m;
    };
    auto encode = [&](const std::vector<Elem>& m) {
        std::size_t id = 0;
        for (std::size_t p = pos.size(); p-- > 0;) id = id * q + m[pos[p].first * k + pos[p].second];
        return static_cast<Elem>(id);
    };
    std::vector<std::vector<Elem>> dec(n);
    for (std::size_t id = 0; id < n; ++id) dec[id] = decode(id);
    std::vector<Elem> add(n * n), mul(n * n);
    std::vector<Elem> m(k * k);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            const auto& x = dec[a];
            const auto& y = dec[b];
            for (unsigned i = 0; i < k * k; ++i) m[i] = in->add(x[i], y[i]);
            add[a * n + b] = encode(m);
            for (unsigned i = 0; i < k; ++i)
                for (unsigned j = 0; j < k; ++j) {
                    Elem s = 0;
                    for (unsigned l = 0; l < k; ++l) s = in->add(s, in->mul(x[i * k + l], y[l * k + j]));
                    m[i * k + j] = s;
                }
            mul[a * n + b] = encode(m);
        }
    std::optional<Elem> one;
    if (in->one()) {
        std::vector<Elem> id(k * k, 0);
        for (unsigned i = 0; i < k; ++i) id[i * k + i] = *in->one();
        one = encode(id);
    }
    return std::make_shared<FiniteRing>(spec, n, std::move(add), std::move(mul), one);
}

}  // namespace detail

inline RingPtr FiniteRing::make(const RingSpec& spec) {
    using K = RingSpec::Kind;
    switch (spec.kind) {
    case K::zmod:
    case K::gf: {
        unsigned m = spec.n;
        if (m < 2) throw InvalidInput("modulus must be at least 2");
        if (spec.kind == K::gf && !is_prime(m)) throw InvalidInput("gf(p) needs prime p, got " + std::to_string(m));
        if (m > max_ring_size) throw InvalidInput("modulus too large");
        std::vector<Elem> add(m * m), mul(m * m);
        for (unsigned a = 0; a < m; ++a)
            for (unsigned b = 0; b < m; ++b) {
                add[a * m + b] = (a + b) % m;
                mul[a * m + b] = (a * b) % m;
            }
        return std::make_shared<FiniteRing>(spec, m, std::move(add), std::move(mul), Elem{1});
    }
    case K::matrix:
    case K::upper: {
        if (spec.n < 1) throw InvalidInput("matrix size must be positive");
        auto in = make(spec.inner.at(0));
        return detail::build_matrix_ring(spec, in, spec.n, spec.kind == K::upper);
    }
    case K::product: {
        auto a = make(spec.inner.at(0));
        auto b = make(spec.inner.at(1));
        std::size_t na = a->size(), nb = b->size(), n = na * nb;
        if (n > max_ring_size) throw InvalidInput("product ring too large for tables");
        std::vector<Elem> add(n * n), mul(n * n);
        for (std::size_t x = 0; x < n; ++x)
            for (std::size_t y = 0; y < n; ++y) {
                Elem xa = x % na, xb = x / na, ya = y % na, yb = y / na;
                add[x * n + y] = a->add(xa, ya) + na * b->add(xb, yb);
                mul[x * n + y] = a->mul(xa, ya) + na * b->mul(xb, yb);
            }
        std::optional<Elem> one;
        if (a->one() && b->one()) one = *a->one() + na * *b->one();
        return std::make_shared<FiniteRing>(spec, n, std::move(add), std::move(mul), one);
    }
    case K::ideal: {
        auto amb = make(spec.inner.at(0));
        return ideal_closure(amb, spec.generators).view;
    }
    case K::table: {
        auto r = std::make_shared<FiniteRing>(spec, spec.size, spec.add, spec.mul, spec.one);
        if (auto bad = r->axiom_violation()) throw InvalidInput("explicit ring table rejected: " + *bad);
        return r;
    }
    }
    throw InvalidInput("unknown ring kind");
}

// ---------------------------------------------------------------------------
// Homomorphisms
// ---------------------------------------------------------------------------

class RingHom {
public:
    RingHom(RingPtr src, RingPtr dst, std::vector<Elem> map, bool unital = false)
        : src_(std::move(src)), dst_(std::move(dst)), map_(std::move(map)), unital_(unital) {
        if (map_.size() != src_->size()) throw InvalidInput("hom map must be total on the source");
        for (Elem e : map_)
            if (e >= dst_->size()) throw InvalidInput("hom map value out of range");
        if (auto bad = violation()) throw InvalidInput("not a ring homomorphism: " + *bad);
    }

    static RingHom identity(const RingPtr& r) {
        std::vector<Elem> m(r->size());
        std::iota(m.begin(), m.end(), Elem{0});
        return RingHom(r, r, std::move(m), r->is_unital());
    }

    /// Z/n -> Z/m for m | n.
    static RingHom reduction(const RingPtr& src, const RingPtr& dst) {
        auto ks = src->spec().kind, kd = dst->spec().kind;
        using K = RingSpec::Kind;
        if ((ks != K::zmod && ks != K::gf) || (kd != K::zmod && kd != K::gf))
            throw InvalidInput("reduction needs residue rings");
        unsigned n = src->spec().n, m = dst->spec().n;
        if (n % m != 0) throw InvalidInput("reduction Z/n -> Z/m needs m | n");
        std::vector<Elem> map(n);
        for (unsigned a = 0; a < n; ++a) map[a] = a % m;
        return RingHom(src, dst, std::move(map), true);
    }

    /// S -> M_k(S), a |-> a e11 (not unital for k > 1).
    static RingHom corner_embedding(const RingPtr& src, const RingPtr& dst) {
        const auto& ds = dst->spec();
        if (ds.kind != RingSpec::Kind::matrix || !(ds.inner.at(0) == src->spec()))
            throw InvalidInput("corner embedding target must be matrix(source,k)");
        std::vector<Elem> map(src->size());
        for (Elem a = 0; a < src->size(); ++a) map[a] = a;  // (0,0) is the least significant digit
        return RingHom(src, dst, std::move(map), ds.n == 1);
    }

    /// A x B -> A or B.
    static RingHom projection(const RingPtr& prod, int which, const RingPtr& factor) {
        if (prod->spec().kind != RingSpec::Kind::product) throw InvalidInput("projection needs a product ring");
        std::size_t na = prod->spec().inner.size() == 2 ? FiniteRing::make(prod->spec().inner[0])->size() : 0;
        std::vector<Elem> map(prod->size());
        for (Elem x = 0; x < prod->size(); ++x) map[x] = which == 0 ? x % na : x / na;
        return RingHom(prod, factor, std::move(map), true);
    }

    /// g after f.
    static RingHom compose(const RingHom& g, const RingHom& f) {
        if (f.dst_.get() != g.src_.get() && !(f.dst_->spec() == g.src_->spec()))
            throw InvalidInput("composition needs matching rings");
        std::vector<Elem> map(f.map_.size());
        for (std::size_t a = 0; a < map.size(); ++a) map[a] = g.map_[f.map_[a]];
        return RingHom(f.src_, g.dst_, std::move(map), f.unital_ && g.unital_);
    }

    Elem operator()(Elem a) const { return map_.at(a); }
    const RingPtr& source() const { return src_; }
    const RingPtr& target() const { return dst_; }
    const std::vector<Elem>& table() const { return map_; }
    bool unital() const { return unital_; }

    std::optional<std::string> violation() const {
        if (map_[0] != 0) return "zero not preserved";
        for (Elem a = 0; a < src_->size(); ++a)
            for (Elem b = 0; b < src_->size(); ++b) {
                if (map_[src_->add(a, b)] != dst_->add(map_[a], map_[b])) return "not additive";
                if (map_[src_->mul(a, b)] != dst_->mul(map_[a], map_[b])) return "not multiplicative";
            }
        if (unital_) {
            if (!src_->one() || !dst_->one()) return "unital hom between non-unital rings";
            if (map_[*src_->one()] != *dst_->one()) return "one not preserved";
        }
        return std::nullopt;
    }

private:
    RingPtr src_, dst_;
    std::vector<Elem> map_;
    bool unital_;
};

}  // namespace cuntz
