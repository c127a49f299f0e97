#pragma once
// Exact integer vector arithmetic, orthogonal-system validation and parity
// predicates. Everything else in the library sits on top of this header.
//
// All arithmetic is on 64-bit coordinates with 128-bit intermediates; any
// result that does not fit back into 64 bits throws OverflowError instead of
// wrapping silently.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace orthobase {

using Int = std::int64_t;
using Wide = __int128;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct OverflowError : Error {
    using Error::Error;
};

struct DimensionMismatch : Error {
    using Error::Error;
};

// Malformed or precondition-violating input (maps to CLI exit code 2).
struct InvalidInput : Error {
    using Error::Error;
};

struct RankDeficientError : Error {
    using Error::Error;
};

struct NotPrimeError : Error {
    using Error::Error;
};

// An identity the arithmetic guarantees failed to hold; always a bug.
struct TheoremViolation : Error {
    using Error::Error;
};

// ---------------------------------------------------------------------------
// Checked 64-bit arithmetic
// ---------------------------------------------------------------------------

inline Int checked_narrow(Wide x, const char* where = "arithmetic") {
    constexpr Wide lo = std::numeric_limits<Int>::min();
    constexpr Wide hi = std::numeric_limits<Int>::max();
    if (x < lo || x > hi)
        throw OverflowError(std::string("integer overflow in ") + where);
    return static_cast<Int>(x);
}

inline Int checked_add(Int a, Int b) { return checked_narrow(Wide(a) + Wide(b), "add"); }
inline Int checked_sub(Int a, Int b) { return checked_narrow(Wide(a) - Wide(b), "sub"); }
inline Int checked_mul(Int a, Int b) { return checked_narrow(Wide(a) * Wide(b), "mul"); }

inline Int abs_int(Int a) {
    if (a == std::numeric_limits<Int>::min()) throw OverflowError("abs of INT64_MIN");
    return a < 0 ? -a : a;
}

// Floor division (C++ '/' truncates toward zero).
inline Int floor_div(Int a, Int b) {
    Int q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

// Nearest-integer division, ties rounded down. Requires b > 0.
inline Int div_nearest(Int a, Int b) {
    Int q = floor_div(a, b);
    Int r = a - q * b;  // 0 <= r < b
    return (r > b - r) ? q + 1 : q;
}

// Largest s >= 0 with s*s <= x.
inline Int isqrt(Int x) {
    if (x < 0) throw InvalidInput("isqrt of negative value");
    if (x < 2) return x;
    Int s = static_cast<Int>(std::sqrt(static_cast<double>(x)));
    while (s > 0 && s > x / s) --s;
    while ((s + 1) <= x / (s + 1)) ++s;
    return s;
}

inline bool is_square(Int x) {
    if (x < 0) return false;
    Int s = isqrt(x);
    return s * s == x;
}

inline bool is_prime(Int p) {
    if (p < 2) return false;
    if (p % 2 == 0) return p == 2;
    for (Int d = 3; d * d <= p; d += 2)
        if (p % d == 0) return false;
    return true;
}

// Extended gcd: g = |gcd(a,b)| with a*x + b*y = g and the usual
// minimal-magnitude Bezout coefficients. ext_gcd(0,0) = {0,0,0}.
struct ExtGcd {
    Int g = 0, x = 0, y = 0;
};

inline ExtGcd ext_gcd(Int a, Int b) {
    if (a == 0 && b == 0) return {0, 0, 0};
    Int sa = a < 0 ? -1 : 1, sb = b < 0 ? -1 : 1;
    Int r0 = abs_int(a), r1 = abs_int(b);
    Int x0 = 1, x1 = 0, y0 = 0, y1 = 1;
    while (r1 != 0) {
        Int q = r0 / r1;
        Int r2 = r0 - q * r1;
        Int x2 = checked_sub(x0, checked_mul(q, x1));
        Int y2 = checked_sub(y0, checked_mul(q, y1));
        r0 = r1; r1 = r2;
        x0 = x1; x1 = x2;
        y0 = y1; y1 = y2;
    }
    return {r0, sa * x0, sb * y0};
}

// ---------------------------------------------------------------------------
// Integer vectors
// ---------------------------------------------------------------------------

using IntVec = std::vector<Int>;

inline void require_same_dim(const IntVec& v, const IntVec& w) {
    if (v.size() != w.size())
        throw DimensionMismatch("vector dimensions differ: " + std::to_string(v.size()) +
                                " vs " + std::to_string(w.size()));
}

inline Int inner(const IntVec& v, const IntVec& w) {
    require_same_dim(v, w);
    Wide acc = 0;
    for (std::size_t i = 0; i < v.size(); ++i) acc += Wide(v[i]) * Wide(w[i]);
    return checked_narrow(acc, "inner product");
}

inline Int norm(const IntVec& v) { return inner(v, v); }

inline bool is_zero_vec(const IntVec& v) {
    return std::all_of(v.begin(), v.end(), [](Int x) { return x == 0; });
}

inline IntVec vec_sub_scaled(const IntVec& v, const IntVec& w, Int t) {
    require_same_dim(v, w);
    IntVec r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        r[i] = checked_sub(v[i], checked_mul(t, w[i]));
    return r;
}

// Divides out the gcd of the entries; the zero vector stays zero.
inline IntVec primitive_part(const IntVec& v) {
    Int g = 0;
    for (Int x : v) g = std::gcd(g, abs_int(x));
    if (g <= 1) return v;
    IntVec r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) r[i] = v[i] / g;
    return r;
}

// ---------------------------------------------------------------------------
// Orthogonal systems
// ---------------------------------------------------------------------------

enum class SystemKind { POrthonormal, Orthogonal };

inline const char* kind_name(SystemKind k) {
    return k == SystemKind::POrthonormal ? "p-orthonormal" : "orthogonal";
}

// A set of integer vectors claimed p-orthonormal (every norm equals p,
// pairwise orthogonal) or merely orthogonal (pairwise orthogonal, no zero
// vector). validate_system checks the claim.
struct OrthoSystem {
    int n = 0;
    Int p = 0;
    SystemKind kind = SystemKind::POrthonormal;
    std::vector<IntVec> vectors;

    int k() const { return static_cast<int>(vectors.size()); }

    bool operator==(const OrthoSystem& o) const = default;
};

// Sorted 0-based coordinate positions where some vector is nonzero.
inline std::vector<int> support_of(const OrthoSystem& s) {
    std::vector<int> out;
    for (int i = 0; i < s.n; ++i) {
        bool hit = false;
        for (const auto& v : s.vectors)
            if (i < static_cast<int>(v.size()) && v[i] != 0) { hit = true; break; }
        if (hit) out.push_back(i);
    }
    return out;
}

// Lists every violated condition; empty violations <=> the system satisfies
// its declared kind. Support positions are reported 1-based.
struct ValidationReport {
    bool valid = true;
    std::vector<std::string> violations;
    std::vector<int> support;  // 1-based
    int support_size() const { return static_cast<int>(support.size()); }
};

inline ValidationReport validate_system(const OrthoSystem& s) {
    ValidationReport rep;
    auto fail = [&](std::string msg) {
        rep.valid = false;
        rep.violations.push_back(std::move(msg));
    };

    if (s.n < 1) fail("dimension n must be >= 1");
    if (s.vectors.empty()) fail("system has no vectors");
    if (s.k() > s.n && s.n >= 1)
        fail("system has k=" + std::to_string(s.k()) + " vectors in dimension n=" +
             std::to_string(s.n));
    for (int i = 0; i < s.k(); ++i)
        if (static_cast<int>(s.vectors[i].size()) != s.n)
            fail("vector " + std::to_string(i + 1) + " has dimension " +
                 std::to_string(s.vectors[i].size()) + ", expected " + std::to_string(s.n));
    if (!rep.valid) return rep;

    if (s.kind == SystemKind::POrthonormal) {
        if (s.p < 1) fail("p must be >= 1 for a p-orthonormal system");
        for (int i = 0; i < s.k(); ++i) {
            Int ni = norm(s.vectors[i]);
            if (ni != s.p)
                fail("vector " + std::to_string(i + 1) + " has norm " + std::to_string(ni) +
                     ", expected p=" + std::to_string(s.p));
        }
    } else {
        for (int i = 0; i < s.k(); ++i)
            if (is_zero_vec(s.vectors[i]))
                fail("vector " + std::to_string(i + 1) + " is the zero vector");
    }
    for (int i = 0; i < s.k(); ++i)
        for (int j = i + 1; j < s.k(); ++j) {
            Int ip = inner(s.vectors[i], s.vectors[j]);
            if (ip != 0)
                fail("vectors " + std::to_string(i + 1) + " and " + std::to_string(j + 1) +
                     " have inner product " + std::to_string(ip) + ", expected 0");
        }

    for (int i : support_of(s)) rep.support.push_back(i + 1);
    return rep;
}

inline void require_valid(const OrthoSystem& s) {
    auto rep = validate_system(s);
    if (!rep.valid) {
        std::string msg = "invalid " + std::string(kind_name(s.kind)) + " system:";
        for (const auto& v : rep.violations) msg += " [" + v + "]";
        throw InvalidInput(msg);
    }
}

// Max vector norm; the norm N(S) of an orthogonal system.
inline Int system_norm(const OrthoSystem& s) {
    Int m = 0;
    for (const auto& v : s.vectors) m = std::max(m, norm(v));
    return m;
}

// ---------------------------------------------------------------------------
// Parity predicates
// ---------------------------------------------------------------------------

inline int parity(Int k) { return static_cast<int>(((k % 2) + 2) % 2); }

inline int parity(const IntVec& v) {
    Int s = 0;
    for (Int x : v) s += parity(x);
    return parity(s);
}

inline int parity(const IntVec& v, const IntVec& w) { return parity(inner(v, w)); }

// For a valid p-orthonormal system: P(p) = P(v_j) for every j and
// P(v_h, v_j) = 0 for every pair. Both are consequences of p-orthonormality,
// so a false return on validated input indicates an internal bug.
inline bool parity_check(const OrthoSystem& s) {
    if (s.kind != SystemKind::POrthonormal)
        throw InvalidInput("parity_check requires a p-orthonormal system");
    require_valid(s);
    for (const auto& v : s.vectors)
        if (parity(v) != parity(s.p)) return false;
    for (int i = 0; i < s.k(); ++i)
        for (int j = i + 1; j < s.k(); ++j)
            if (parity(s.vectors[i], s.vectors[j]) != 0) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Signed coordinate permutations
// ---------------------------------------------------------------------------

// (g.v)[i] = sign_i * v[perm[i]] with sign_i = -1 when bit i of mask is set.
// These maps preserve norms, inner products and extendability.
inline IntVec apply_signed_perm(const IntVec& v, const std::vector<int>& perm, unsigned mask) {
    IntVec r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        Int x = v[perm[i]];
        r[i] = (mask >> i) & 1u ? -x : x;
    }
    return r;
}

inline OrthoSystem apply_signed_perm(const OrthoSystem& s, const std::vector<int>& perm,
                                     unsigned mask) {
    OrthoSystem r = s;
    for (auto& v : r.vectors) v = apply_signed_perm(v, perm, mask);
    return r;
}

// Search exhausted without a witness; carries the partial system so a missed
// extension can be reported verbatim.
struct NoExtensionError : Error {
    OrthoSystem partial;
    explicit NoExtensionError(OrthoSystem s)
        : Error("no extension found for k=" + std::to_string(s.k()) + " system with p=" +
                std::to_string(s.p) + " in Z^" + std::to_string(s.n)),
          partial(std::move(s)) {}
};

}  // namespace orthobase
