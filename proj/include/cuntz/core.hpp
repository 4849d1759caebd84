#pragma once
/**
 * @file core.hpp
 * @brief Error types, three-valued verdicts, certificates and hashing helpers.
 */

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <algorithm>
#include <exception>
#include <functional>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace cuntz {

using Elem = std::uint32_t;

/// Malformed input (bad spec, shape mismatch, broken precondition).
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A computed object failed its own re-validation.
class InvariantBreach : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// A hard bound (degree, enumeration size) was hit where partial output is not allowed.
class BoundExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Truth { no, yes, unknown };

inline const char* to_string(Truth t) {
    switch (t) {
    case Truth::no: return "false";
    case Truth::yes: return "true";
    default: return "unknown";
    }
}

inline Truth truth_of(bool b) { return b ? Truth::yes : Truth::no; }

/// How far a verdict can be trusted.
enum class Cert { exact, truncation_relative, stage_relative, bound_relative, sampled };

inline const char* to_string(Cert c) {
    switch (c) {
    case Cert::exact: return "exact";
    case Cert::truncation_relative: return "truncation_relative";
    case Cert::stage_relative: return "stage_relative";
    case Cert::bound_relative: return "bound_relative";
    default: return "sampled";
    }
}

/// Default number of candidate evaluations before a search gives up with "unknown".
inline constexpr std::uint64_t default_budget = std::uint64_t{1} << 24;

struct VecHash {
    std::size_t operator()(const std::vector<Elem>& v) const noexcept {
        std::uint64_t h = 1469598103934665603ull;
        for (Elem e : v) {
            h ^= e + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
            h *= 1099511628211ull;
        }
        return static_cast<std::size_t>(h);
    }
};

/// FNV-1a, used for spec digests in run manifests.
inline std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

/// Saturating |base|^exp, returns cap when it would exceed cap.
inline std::uint64_t pow_capped(std::uint64_t base, std::uint64_t exp, std::uint64_t cap) {
    std::uint64_t r = 1;
    for (std::uint64_t i = 0; i < exp; ++i) {
        if (base != 0 && r > cap / base) return cap;
        r *= base;
    }
    return r > cap ? cap : r;
}

/// Runs fn(i) for i in [0, n) on up to `jobs` threads.  Each index runs exactly once; callers
/// write results into per-index slots so the merge is deterministic.  The first exception wins.
template <class Fn>
void parallel_for(std::size_t n, unsigned jobs, Fn&& fn) {
    if (jobs <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr err;
    std::atomic<bool> failed{false};
    std::mutex m;
    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= n || failed.load()) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lk(m);
                if (!err) err = std::current_exception();
                failed = true;
            }
        }
    };
    std::vector<std::thread> pool;
    const unsigned t = static_cast<unsigned>(std::min<std::size_t>(jobs, n));
    for (unsigned k = 0; k < t; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

}  // namespace cuntz
