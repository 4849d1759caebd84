#pragma once
/**
 * @file matrix.hpp
 * @brief Dense rectangular matrices over a FiniteRing, diagonal sums, spans and solvers.
 *
 * A Mat keeps a non-owning pointer to its ring; the ring must outlive it.
 */

#include "ring.hpp"

#include <unordered_map>
#include <unordered_set>

namespace cuntz {

class Mat {
public:
    Mat() = default;
    Mat(const FiniteRing& R, std::size_t rows, std::size_t cols)
        : ring_(&R), rows_(rows), cols_(cols), e_(rows * cols, 0) {
        if (rows == 0 || cols == 0) throw InvalidInput("matrix dimensions must be positive");
    }
    Mat(const FiniteRing& R, std::size_t rows, std::size_t cols, std::vector<Elem> entries)
        : ring_(&R), rows_(rows), cols_(cols), e_(std::move(entries)) {
        if (rows == 0 || cols == 0) throw InvalidInput("matrix dimensions must be positive");
        if (e_.size() != rows * cols) throw InvalidInput("entry count does not match shape");
        for (Elem x : e_)
            if (x >= R.size()) throw InvalidInput("matrix entry " + std::to_string(x) + " not in ring");
    }

    static Mat zero(const FiniteRing& R, std::size_t r, std::size_t c) { return Mat(R, r, c); }
    static Mat identity(const FiniteRing& R, std::size_t n) {
        if (!R.one()) throw InvalidInput("identity matrix needs a unital ring");
        Mat m(R, n, n);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = *R.one();
        return m;
    }
    static Mat scalar(const FiniteRing& R, Elem a) { return Mat(R, 1, 1, {a}); }

    /// Matrix literal "[[a,b],[c,d]]"; a bare "[a,b]" or "a" is a single row.
    static Mat parse(const FiniteRing& R, std::string_view text);

    const FiniteRing& ring() const { return *ring_; }
    const FiniteRing* ring_ptr() const { return ring_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }
    Elem operator()(std::size_t i, std::size_t j) const { return e_[i * cols_ + j]; }
    Elem& at(std::size_t i, std::size_t j) { return e_[i * cols_ + j]; }
    const std::vector<Elem>& data() const { return e_; }

    bool is_zero() const {
        return std::all_of(e_.begin(), e_.end(), [](Elem x) { return x == 0; });
    }

    bool operator==(const Mat& o) const {
        return ring_ == o.ring_ && rows_ == o.rows_ && cols_ == o.cols_ && e_ == o.e_;
    }
    bool operator!=(const Mat& o) const { return !(*this == o); }

    Mat operator*(const Mat& o) const {
        check_ring(o);
        if (cols_ != o.rows_) throw InvalidInput("shape mismatch in product " + shape() + " * " + o.shape());
        const auto& R = *ring_;
        Mat out(R, rows_, o.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t l = 0; l < cols_; ++l) {
                Elem a = (*this)(i, l);
                if (a == 0) continue;
                for (std::size_t j = 0; j < o.cols_; ++j)
                    out.at(i, j) = R.add(out(i, j), R.mul(a, o(l, j)));
            }
        return out;
    }
    Mat operator+(const Mat& o) const {
        check_same_shape(o);
        Mat out = *this;
        for (std::size_t i = 0; i < e_.size(); ++i) out.e_[i] = ring_->add(e_[i], o.e_[i]);
        return out;
    }
    Mat operator-(const Mat& o) const {
        check_same_shape(o);
        Mat out = *this;
        for (std::size_t i = 0; i < e_.size(); ++i) out.e_[i] = ring_->sub(e_[i], o.e_[i]);
        return out;
    }
    Mat operator-() const {
        Mat out = *this;
        for (auto& x : out.e_) x = ring_->neg(x);
        return out;
    }
    /// left scalar multiple
    Mat scaled(Elem s) const {
        Mat out = *this;
        for (auto& x : out.e_) x = ring_->mul(s, x);
        return out;
    }

    Mat block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
        if (r0 + nr > rows_ || c0 + nc > cols_) throw InvalidInput("block out of range");
        Mat out(*ring_, nr, nc);
        for (std::size_t i = 0; i < nr; ++i)
            for (std::size_t j = 0; j < nc; ++j) out.at(i, j) = (*this)(r0 + i, c0 + j);
        return out;
    }
    void set_block(std::size_t r0, std::size_t c0, const Mat& b) {
        check_ring(b);
        if (r0 + b.rows_ > rows_ || c0 + b.cols_ > cols_) throw InvalidInput("block out of range");
        for (std::size_t i = 0; i < b.rows_; ++i)
            for (std::size_t j = 0; j < b.cols_; ++j) at(r0 + i, c0 + j) = b(i, j);
    }
    std::vector<Elem> row(std::size_t i) const {
        return std::vector<Elem>(e_.begin() + i * cols_, e_.begin() + (i + 1) * cols_);
    }
    std::vector<Elem> col(std::size_t j) const {
        std::vector<Elem> c(rows_);
        for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
        return c;
    }

    /// Same entries read in another ring with identical ids (e.g. the opposite ring).
    Mat rebased(const FiniteRing& R) const {
        Mat m = *this;
        m.ring_ = &R;
        return m;
    }
    Mat transpose() const {
        Mat out(*ring_, cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) out.at(j, i) = (*this)(i, j);
        return out;
    }

    std::string shape() const { return std::to_string(rows_) + "x" + std::to_string(cols_); }
    std::string str() const {
        std::string s = "[";
        for (std::size_t i = 0; i < rows_; ++i) {
            s += i ? ",[" : "[";
            for (std::size_t j = 0; j < cols_; ++j) {
                if (j) s += ",";
                s += std::to_string((*this)(i, j));
            }
            s += "]";
        }
        return s + "]";
    }

private:
    void check_ring(const Mat& o) const {
        if (ring_ != o.ring_) throw InvalidInput("matrices over different rings");
    }
    void check_same_shape(const Mat& o) const {
        check_ring(o);
        if (rows_ != o.rows_ || cols_ != o.cols_) throw InvalidInput("shape mismatch " + shape() + " vs " + o.shape());
    }

    const FiniteRing* ring_ = nullptr;
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Elem> e_;
};

inline Mat Mat::parse(const FiniteRing& R, std::string_view text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) throw InvalidInput("empty matrix literal");
    std::vector<std::vector<Elem>> rows;
    if (s.rfind("[[", 0) == 0) {
        if (s.size() < 4 || s.substr(s.size() - 2) != "]]") throw InvalidInput("bad matrix literal '" + s + "'");
        std::string body = s.substr(1, s.size() - 2);
        for (auto& part : detail::split_args(body)) {
            if (part.size() < 2 || part.front() != '[' || part.back() != ']')
                throw InvalidInput("bad matrix row '" + part + "'");
            rows.push_back(detail::parse_elem_list(part));
        }
    } else {
        rows.push_back(detail::parse_elem_list(s));
    }
    if (rows.empty() || rows[0].empty()) throw InvalidInput("empty matrix literal");
    std::vector<Elem> e;
    for (auto& r : rows) {
        if (r.size() != rows[0].size()) throw InvalidInput("ragged matrix literal '" + s + "'");
        e.insert(e.end(), r.begin(), r.end());
    }
    return Mat(R, rows.size(), rows[0].size(), std::move(e));
}

/// x in the top-left, y in the bottom-right.
inline Mat diag_sum(const Mat& x, const Mat& y) {
    if (x.ring_ptr() != y.ring_ptr()) throw InvalidInput("diag_sum of matrices over different rings");
    Mat out(x.ring(), x.rows() + y.rows(), x.cols() + y.cols());
    out.set_block(0, 0, x);
    out.set_block(x.rows(), x.cols(), y);
    return out;
}

inline Mat hstack(const Mat& a, const Mat& b) {
    if (a.rows() != b.rows()) throw InvalidInput("hstack row mismatch");
    Mat out(a.ring(), a.rows(), a.cols() + b.cols());
    out.set_block(0, 0, a);
    out.set_block(0, a.cols(), b);
    return out;
}

inline Mat vstack(const Mat& a, const Mat& b) {
    if (a.cols() != b.cols()) throw InvalidInput("vstack column mismatch");
    Mat out(a.ring(), a.rows() + b.rows(), a.cols());
    out.set_block(0, 0, a);
    out.set_block(a.rows(), 0, b);
    return out;
}

/// Drops trailing all-zero rows and columns (the same element of M_inf). Zero trims to 1x1.
inline Mat trim(const Mat& m) {
    std::size_t r = m.rows(), c = m.cols();
    auto row_zero = [&](std::size_t i) {
        for (std::size_t j = 0; j < c; ++j)
            if (m(i, j)) return false;
        return true;
    };
    auto col_zero = [&](std::size_t j) {
        for (std::size_t i = 0; i < r; ++i)
            if (m(i, j)) return false;
        return true;
    };
    while (r > 1 && row_zero(r - 1)) --r;
    while (c > 1 && col_zero(c - 1)) --c;
    while (r > 1 && row_zero(r - 1)) --r;
    return m.block(0, 0, r, c);
}

/// Drops every all-zero row and column; the result is ~1-equivalent to m in a unital ring.
inline Mat compress(const Mat& m) {
    std::vector<std::size_t> rs, cs;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (m(i, j)) { rs.push_back(i); break; }
    for (std::size_t j = 0; j < m.cols(); ++j)
        for (std::size_t i = 0; i < m.rows(); ++i)
            if (m(i, j)) { cs.push_back(j); break; }
    if (rs.empty()) return Mat::zero(m.ring(), 1, 1);
    Mat out(m.ring(), rs.size(), cs.size());
    for (std::size_t i = 0; i < rs.size(); ++i)
        for (std::size_t j = 0; j < cs.size(); ++j) out.at(i, j) = m(rs[i], cs[j]);
    return out;
}

/// Zero-pads m to rows x cols.
inline Mat pad(const Mat& m, std::size_t rows, std::size_t cols) {
    if (rows < m.rows() || cols < m.cols()) throw InvalidInput("pad cannot shrink");
    Mat out(m.ring(), rows, cols);
    out.set_block(0, 0, m);
    return out;
}

inline bool is_idempotent(const Mat& m) { return m.square() && m * m == m; }

/// Order used for canonical representatives: (rows, cols, entries lexicographically).
inline bool canonical_less(const Mat& a, const Mat& b) {
    if (a.rows() != b.rows()) return a.rows() < b.rows();
    if (a.cols() != b.cols()) return a.cols() < b.cols();
    return a.data() < b.data();
}

struct MatHash {
    std::size_t operator()(const Mat& m) const noexcept {
        std::vector<Elem> v = m.data();
        v.push_back(static_cast<Elem>(m.rows()));
        v.push_back(static_cast<Elem>(m.cols()));
        return VecHash{}(v);
    }
};

// ---------------------------------------------------------------------------
// Enumeration
// ---------------------------------------------------------------------------

/// Number of r x c matrices, saturating at cap.
inline std::uint64_t matrix_count(const FiniteRing& R, std::size_t r, std::size_t c,
                                  std::uint64_t cap = ~std::uint64_t{0}) {
    return pow_capped(R.size(), r * c, cap);
}

/// The idx-th r x c matrix in lexicographic order of entries (first entry most significant).
inline Mat matrix_from_index(const FiniteRing& R, std::size_t r, std::size_t c, std::uint64_t idx) {
    Mat m(R, r, c);
    std::vector<Elem> e(r * c);
    for (std::size_t p = r * c; p-- > 0;) {
        e[p] = static_cast<Elem>(idx % R.size());
        idx /= R.size();
    }
    return Mat(R, r, c, std::move(e));
}

inline std::uint64_t matrix_index(const Mat& m) {
    std::uint64_t idx = 0;
    for (Elem x : m.data()) idx = idx * m.ring().size() + x;
    return idx;
}

/// Calls fn on every r x c matrix in lexicographic order until fn returns false.
template <class Fn>
void for_each_matrix(const FiniteRing& R, std::size_t r, std::size_t c, Fn&& fn) {
    std::vector<Elem> e(r * c, 0);
    const Elem q = static_cast<Elem>(R.size());
    for (;;) {
        if (!fn(Mat(R, r, c, e))) return;
        std::size_t p = e.size();
        while (p > 0) {
            --p;
            if (++e[p] < q) break;
            e[p] = 0;
            if (p == 0) return;
        }
        if (e.empty()) return;
    }
}

// ---------------------------------------------------------------------------
// Spans and linear solves
// ---------------------------------------------------------------------------

/// The set { sum_k c_k v_k : c_k in R } for vectors v_k, with one coefficient vector per member.
/// left = true multiplies coefficients on the left (row spaces), otherwise on the right.
class Span {
public:
    Span() = default;
    Span(const FiniteRing& R, std::vector<std::vector<Elem>> gens, bool left, std::uint64_t cap)
        : ring_(&R), gens_(std::move(gens)), left_(left) {
        std::size_t len = gens_.empty() ? 0 : gens_[0].size();
        std::vector<Elem> zero_vec(len, 0), zero_coef(gens_.size(), 0);
        index_.emplace(zero_vec, 0);
        vecs_.push_back(zero_vec);
        coefs_.push_back(zero_coef);
        for (std::size_t k = 0; k < gens_.size(); ++k) {
            std::size_t cur = vecs_.size();
            for (Elem c = 1; c < R.size(); ++c) {
                std::vector<Elem> cv(len);
                for (std::size_t i = 0; i < len; ++i) cv[i] = left ? R.mul(c, gens_[k][i]) : R.mul(gens_[k][i], c);
                for (std::size_t s = 0; s < cur; ++s) {
                    std::vector<Elem> v(len);
                    for (std::size_t i = 0; i < len; ++i) v[i] = R.add(vecs_[s][i], cv[i]);
                    if (index_.count(v)) continue;
                    if (vecs_.size() >= cap) { complete_ = false; return; }
                    index_.emplace(v, vecs_.size());
                    vecs_.push_back(std::move(v));
                    auto co = coefs_[s];
                    co[k] = c;
                    coefs_.push_back(std::move(co));
                }
            }
        }
    }

    bool complete() const { return complete_; }
    std::size_t size() const { return vecs_.size(); }
    const std::vector<std::vector<Elem>>& members() const { return vecs_; }
    const std::vector<Elem>& coefficients(std::size_t i) const { return coefs_[i]; }
    std::optional<std::size_t> find(const std::vector<Elem>& v) const {
        auto it = index_.find(v);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

private:
    const FiniteRing* ring_ = nullptr;
    std::vector<std::vector<Elem>> gens_;
    bool left_ = true;
    bool complete_ = true;
    std::unordered_map<std::vector<Elem>, std::size_t, VecHash> index_;
    std::vector<std::vector<Elem>> vecs_;
    std::vector<std::vector<Elem>> coefs_;
};

/// Column module { b v : v in R^q } of b.
inline Span column_span(const Mat& b, std::uint64_t cap = default_budget) {
    std::vector<std::vector<Elem>> gens;
    for (std::size_t j = 0; j < b.cols(); ++j) gens.push_back(b.col(j));
    return Span(b.ring(), std::move(gens), false, cap);
}

/// Row module { u b : u in R^p } of b.
inline Span row_span(const Mat& b, std::uint64_t cap = default_budget) {
    std::vector<std::vector<Elem>> gens;
    for (std::size_t i = 0; i < b.rows(); ++i) gens.push_back(b.row(i));
    return Span(b.ring(), std::move(gens), true, cap);
}

/// Y with Y * B = A, if any (rows solved independently).  nullopt also when the span overflows cap.
inline std::optional<Mat> left_solve(const Mat& A, const Mat& B, std::uint64_t cap = default_budget) {
    if (A.cols() != B.cols()) throw InvalidInput("left_solve column mismatch");
    Span s = row_span(B, cap);
    Mat Y(A.ring(), A.rows(), B.rows());
    for (std::size_t i = 0; i < A.rows(); ++i) {
        auto hit = s.find(A.row(i));
        if (!hit) return std::nullopt;
        const auto& c = s.coefficients(*hit);
        for (std::size_t k = 0; k < c.size(); ++k) Y.at(i, k) = c[k];
    }
    return Y;
}

/// T with B * T = A, if any (columns solved independently).
inline std::optional<Mat> right_solve(const Mat& A, const Mat& B, std::uint64_t cap = default_budget) {
    if (A.rows() != B.rows()) throw InvalidInput("right_solve row mismatch");
    Span s = column_span(B, cap);
    Mat T(A.ring(), B.cols(), A.cols());
    for (std::size_t j = 0; j < A.cols(); ++j) {
        auto hit = s.find(A.col(j));
        if (!hit) return std::nullopt;
        const auto& c = s.coefficients(*hit);
        for (std::size_t k = 0; k < c.size(); ++k) T.at(k, j) = c[k];
    }
    return T;
}

/// Image of m under an entrywise map into another ring.
template <class Map>
Mat map_entries(const Mat& m, const FiniteRing& target, Map&& f) {
    std::vector<Elem> e(m.data().size());
    for (std::size_t i = 0; i < e.size(); ++i) e[i] = f(m.data()[i]);
    return Mat(target, m.rows(), m.cols(), std::move(e));
}

}  // namespace cuntz
