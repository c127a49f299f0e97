#pragma once
// Independent cross-checks for the extension machinery: the closed-form
// complement basis obtained from the Bezout/gcd chain of the quasi-normal
// form, brute-force norm-vector enumeration, and the identity test suites.
// Nothing here sits on the production extension path; these are the oracles
// the tests compare against.

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "orthobase/core.hpp"
#include "orthobase/extend.hpp"
#include "orthobase/snf.hpp"

namespace orthobase {

// ---------------------------------------------------------------------------
// Exact fractions (internal to the closed forms)
// ---------------------------------------------------------------------------

namespace detail {

inline Wide wide_abs(Wide x) { return x < 0 ? -x : x; }

inline Wide wide_gcd(Wide a, Wide b) {
    a = wide_abs(a);
    b = wide_abs(b);
    while (b != 0) {
        Wide t = a % b;
        a = b;
        b = t;
    }
    return a;
}

// num/den with den > 0, kept reduced. Only used while assembling the
// closed-form basis; final values must come out integral.
struct Frac {
    Wide num = 0;
    Wide den = 1;

    static Frac ratio(Wide n, Wide d) {
        if (d == 0) throw InvalidInput("fraction with zero denominator");
        if (d < 0) { n = -n; d = -d; }
        Wide g = wide_gcd(n, d);
        if (g > 1) { n /= g; d /= g; }
        return {n, d};
    }

    Frac operator+(const Frac& o) const { return ratio(num * o.den + o.num * den, den * o.den); }
    Frac operator-(const Frac& o) const { return ratio(num * o.den - o.num * den, den * o.den); }

    bool integral() const { return den == 1; }
    Int to_int(const char* where) const {
        if (!integral())
            throw TheoremViolation(std::string(where) + ": rational did not cancel to an integer");
        return checked_narrow(num, where);
    }
};

}  // namespace detail

// ---------------------------------------------------------------------------
// Closed-form complement basis for a pair
// ---------------------------------------------------------------------------

// Bezout coefficients and gcd-chain values of the quasi-normal form, in the
// permuted coordinate frame.
struct BezoutTrace {
    Int sigma1 = 0, tau1 = 0;  // x1*sigma1 + x2*tau1 = c1 = gcd(x1,x2)
    Int sigma2 = 0, tau2 = 0;  // c1*sigma2 + x3*tau2 = c2 = gcd(c1,x3)
    Int sigma3 = 0, tau3 = 0;  // c2*sigma3 + x4*tau3 = c  = gcd(c2,x4)
    Int sigma4 = 0, tau4 = 0;  // y2p*sigma4 + y3p*tau4 = d1 = gcd(y2p,y3p)
    Int c1 = 0, c2 = 0, c = 0, d1 = 0, d = 0;
    Int y1p = 0, y2p = 0, y3p = 0, y1pp = 0, y1ppp = 0, y4p = 0;
};

struct ClosedFormBasis {
    IntVec w1, w2;            // in the original coordinate frame
    BezoutTrace trace;        // values in the permuted frame
    std::array<int, 4> frame;
    IntVec x, y;              // the permuted input vectors
};

// Complement basis of a k=2 system from the closed forms of the gcd chain,
// valid for any p >= 1 once the frame makes x1 and the leading minor nonzero.
// All rational intermediates must cancel; a non-integral result throws.
inline ClosedFormBasis closed_form_complement(const OrthoSystem& s) {
    require_valid(s);
    if (s.n != 4 || s.k() != 2)
        throw InvalidInput("closed_form_complement requires k=2 in Z^4");

    ClosedFormBasis out;
    out.frame = choose_reduction_frame(s);
    out.x = permute_vector(s.vectors[0], out.frame);
    out.y = permute_vector(s.vectors[1], out.frame);
    const IntVec& x = out.x;
    const IntVec& y = out.y;
    BezoutTrace& t = out.trace;

    auto e1 = ext_gcd(x[0], x[1]);
    t.c1 = e1.g; t.sigma1 = e1.x; t.tau1 = e1.y;
    t.y1p = checked_add(checked_mul(t.sigma1, y[0]), checked_mul(t.tau1, y[1]));
    t.y2p = checked_narrow((-Wide(x[1]) * y[0] + Wide(x[0]) * y[1]) / t.c1, "y2p");

    auto e2 = ext_gcd(t.c1, x[2]);
    t.c2 = e2.g; t.sigma2 = e2.x; t.tau2 = e2.y;
    t.y1pp = checked_add(checked_mul(t.sigma2, t.y1p), checked_mul(t.tau2, y[2]));
    t.y3p = checked_narrow((-Wide(x[2]) * t.y1p + Wide(t.c1) * y[2]) / t.c2, "y3p");

    auto e3 = ext_gcd(t.c2, x[3]);
    t.c = e3.g; t.sigma3 = e3.x; t.tau3 = e3.y;
    t.y1ppp = checked_add(checked_mul(t.sigma3, t.y1pp), checked_mul(t.tau3, y[3]));
    t.y4p = checked_narrow((-Wide(x[3]) * t.y1pp + Wide(t.c2) * y[3]) / t.c, "y4p");

    auto e4 = ext_gcd(t.y2p, t.y3p);
    t.d1 = e4.g; t.sigma4 = e4.x; t.tau4 = e4.y;
    t.d = ext_gcd(t.d1, t.y4p).g;

    if (t.c1 <= 0 || t.c2 <= 0 || t.c <= 0 || t.d1 <= 0 || t.d <= 0)
        throw TheoremViolation("closed_form_complement: gcd chain hit zero");

    using detail::Frac;
    auto R = Frac::ratio;

    IntVec w1(4), w2(4);
    w1[0] = (R(Wide(x[1]) * t.y3p, Wide(t.c1) * t.d1) -
             R(Wide(x[2]) * t.y2p * t.sigma1, Wide(t.c2) * t.d1)).to_int("w1[1]");
    w1[1] = (R(-Wide(x[0]) * t.y3p, Wide(t.c1) * t.d1) -
             R(Wide(x[2]) * t.y2p * t.tau1, Wide(t.c2) * t.d1)).to_int("w1[2]");
    w1[2] = R(Wide(t.c1) * t.y2p, Wide(t.c2) * t.d1).to_int("w1[3]");
    w1[3] = 0;

    w2[0] = (R(Wide(t.y4p) * (Wide(t.c1) * x[2] * t.sigma1 * t.tau4 +
                              Wide(t.c2) * x[1] * t.sigma4),
               Wide(t.c1) * t.c2 * t.d) -
             R(Wide(t.d1) * x[3] * t.sigma1 * t.sigma2, Wide(t.c) * t.d)).to_int("w2[1]");
    w2[1] = (R(Wide(t.y4p) * (Wide(t.c1) * x[2] * t.tau1 * t.tau4 -
                              Wide(t.c2) * x[0] * t.sigma4),
               Wide(t.c1) * t.c2 * t.d) -
             R(Wide(t.d1) * x[3] * t.sigma2 * t.tau1, Wide(t.c) * t.d)).to_int("w2[2]");
    w2[2] = (R(-Wide(t.d1) * x[3] * t.tau2, Wide(t.c) * t.d) -
             R(Wide(t.c1) * t.y4p * t.tau4, Wide(t.c2) * t.d)).to_int("w2[3]");
    w2[3] = R(Wide(t.c2) * t.d1, Wide(t.c) * t.d).to_int("w2[4]");

    if (inner(w1, x) != 0 || inner(w1, y) != 0 || inner(w2, x) != 0 || inner(w2, y) != 0)
        throw TheoremViolation("closed-form basis not orthogonal to the system");

    out.w1 = unpermute_vector(w1, out.frame);
    out.w2 = unpermute_vector(w2, out.frame);
    return out;
}

// det(complement lattice) * c * d == p, with the determinant recovered as the
// exact square root of the Gram determinant of the closed-form basis.
inline bool check_complement_determinant(const OrthoSystem& s) {
    auto cf = closed_form_complement(s);
    Int dg = det(gram_matrix({cf.w1, cf.w2}));
    Int root = isqrt(dg);
    if (root * root != dg)
        throw TheoremViolation("Gram determinant of the complement is not a perfect square");
    return checked_mul(checked_mul(root, cf.trace.c), cf.trace.d) == s.p;
}

// N(w1) * c2^2 * d1^2 == p * (p - x4^2 - y4^2) in the permuted frame.
inline bool check_complement_norm_formula(const OrthoSystem& s) {
    auto cf = closed_form_complement(s);
    const auto& t = cf.trace;
    Wide lhs = Wide(norm(cf.w1)) * t.c2 * t.c2 * t.d1 * t.d1;
    Wide rhs = Wide(s.p) * (Wide(s.p) - Wide(cf.x[3]) * cf.x[3] - Wide(cf.y[3]) * cf.y[3]);
    return lhs == rhs;
}

// ---------------------------------------------------------------------------
// Brute-force enumeration
// ---------------------------------------------------------------------------

enum class EnumOutcome { Exhausted, CallbackStop, BudgetStop };

// Visits every v in Z^n with norm(v) = p in ascending lexicographic order.
// Recursive descent with remaining-budget pruning; the last coordinate is
// resolved by an exact square-root test. fn returns false to stop early.
// node_budget > 0 caps the number of visited search nodes.
template <class Fn>
inline EnumOutcome for_each_norm_vector(int n, Int p, Fn&& fn, std::uint64_t node_budget = 0) {
    if (n < 1) throw InvalidInput("for_each_norm_vector requires n >= 1");
    if (p < 0) throw InvalidInput("for_each_norm_vector requires p >= 0");

    IntVec v(n, 0);
    std::uint64_t nodes = 0;
    EnumOutcome outcome = EnumOutcome::Exhausted;

    auto rec = [&](auto&& self, int i, Int rem) -> bool {
        if (node_budget && ++nodes > node_budget) {
            outcome = EnumOutcome::BudgetStop;
            return false;
        }
        if (i == n - 1) {
            Int r = isqrt(rem);
            if (r * r != rem) return true;
            for (Int c : {-r, r}) {
                v[i] = c;
                if (!fn(const_cast<const IntVec&>(v))) {
                    outcome = EnumOutcome::CallbackStop;
                    return false;
                }
                if (r == 0) break;
            }
            return true;
        }
        Int r = isqrt(rem);
        for (Int c = -r; c <= r; ++c) {
            v[i] = c;
            if (!self(self, i + 1, rem - c * c)) return false;
        }
        return true;
    };
    rec(rec, 0, p);
    return outcome;
}

inline std::vector<IntVec> enumerate_norm_vectors(int n, Int p) {
    std::vector<IntVec> out;
    for_each_norm_vector(n, p, [&](const IntVec& v) {
        out.push_back(v);
        return true;
    });
    return out;
}

// ---------------------------------------------------------------------------
// Brute-force extension oracle
// ---------------------------------------------------------------------------

struct BruteResult {
    std::vector<IntVec> hits;
    bool complete = true;  // false when the node budget stopped the sweep
};

// Every norm-p vector orthogonal to all of S (the full solution set).
inline BruteResult brute_extensions(const OrthoSystem& s, std::uint64_t node_budget = 0) {
    require_valid(s);
    BruteResult out;
    if (s.k() >= s.n) return out;  // full rank: empty complement
    auto outcome = for_each_norm_vector(
        s.n, s.p,
        [&](const IntVec& v) {
            for (const auto& u : s.vectors)
                if (inner(u, v) != 0) return true;
            out.hits.push_back(v);
            return true;
        },
        node_budget);
    out.complete = outcome != EnumOutcome::BudgetStop;
    return out;
}

// First hit in enumeration order, or nothing.
inline std::optional<IntVec> brute_extend(const OrthoSystem& s) {
    require_valid(s);
    if (s.k() >= s.n) return std::nullopt;
    std::optional<IntVec> hit;
    for_each_norm_vector(s.n, s.p, [&](const IntVec& v) {
        for (const auto& u : s.vectors)
            if (inner(u, v) != 0) return true;
        hit = v;
        return false;
    });
    return hit;
}

// ---------------------------------------------------------------------------
// Integer-combination tests (lattice equality)
// ---------------------------------------------------------------------------

// Solves sum_i c_i * basis_i = w exactly over the integers via Cramer's rule
// on a nonsingular row selection; nullopt when no integer solution exists.
inline std::optional<IntVec> integer_combination(const std::vector<IntVec>& basis,
                                                 const IntVec& w) {
    if (basis.empty()) return is_zero_vec(w) ? std::optional<IntVec>(IntVec{}) : std::nullopt;
    const int n = static_cast<int>(basis[0].size());
    const int m = static_cast<int>(basis.size());
    if (static_cast<int>(w.size()) != n) throw DimensionMismatch("integer_combination");

    // First m-row subset with a nonsingular minor, in lexicographic order.
    std::vector<int> rows(m);
    for (int i = 0; i < m; ++i) rows[i] = i;
    std::vector<int> chosen;
    auto minor_det = [&](const std::vector<int>& rs) {
        Mat mm(m, m);
        for (int r = 0; r < m; ++r)
            for (int c = 0; c < m; ++c) mm.at(r, c) = basis[c][rs[r]];
        return det(mm);
    };
    Int dd = 0;
    while (true) {
        dd = minor_det(rows);
        if (dd != 0) { chosen = rows; break; }
        int i = m - 1;
        while (i >= 0 && rows[i] == n - m + i) --i;
        if (i < 0) break;
        ++rows[i];
        for (int j = i + 1; j < m; ++j) rows[j] = rows[j - 1] + 1;
    }
    if (chosen.empty()) return std::nullopt;  // basis not of full column rank

    IntVec coeffs(m);
    for (int i = 0; i < m; ++i) {
        Mat mm(m, m);
        for (int r = 0; r < m; ++r)
            for (int c = 0; c < m; ++c)
                mm.at(r, c) = (c == i) ? w[chosen[r]] : basis[c][chosen[r]];
        Int di = det(mm);
        if (di % dd != 0) return std::nullopt;
        coeffs[i] = di / dd;
    }
    // Verify on all n coordinates, not only the selected rows.
    for (int r = 0; r < n; ++r) {
        Wide acc = 0;
        for (int c = 0; c < m; ++c) acc += Wide(coeffs[c]) * basis[c][r];
        if (acc != Wide(w[r])) return std::nullopt;
    }
    return coeffs;
}

// Mutual integer expressibility in both directions.
inline bool lattices_equal(const std::vector<IntVec>& a, const std::vector<IntVec>& b) {
    if (a.size() != b.size()) return false;
    for (const auto& w : b)
        if (!integer_combination(a, w)) return false;
    for (const auto& w : a)
        if (!integer_combination(b, w)) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Random instance generation (completing random seeds)
// ---------------------------------------------------------------------------

inline Int rand_between(std::mt19937_64& rng, Int lo, Int hi) {
    return lo + static_cast<Int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

inline std::vector<int> random_permutation(std::mt19937_64& rng, int n) {
    std::vector<int> p(n);
    for (int i = 0; i < n; ++i) p[i] = i;
    for (int i = n - 1; i > 0; --i)
        std::swap(p[i], p[static_cast<int>(rng() % static_cast<std::uint64_t>(i + 1))]);
    return p;
}

// Random p-orthonormal system in Z^4: draw a seed vector, complete it to a
// base, keep k of the four vectors, then scramble coordinates with a random
// signed permutation.
inline OrthoSystem random_completed_system(std::mt19937_64& rng, int k, bool prime_p,
                                           bool supp_gt2, Int coord_bound = 9) {
    while (true) {
        IntVec v1(4);
        do {
            for (auto& c : v1) c = rand_between(rng, -coord_bound, coord_bound);
        } while (is_zero_vec(v1));
        Int p = norm(v1);
        if (prime_p && !is_prime(p)) continue;
        OrthoSystem seed{4, p, SystemKind::POrthonormal, {v1}};
        auto base = complete_to_base(seed).base;

        auto order = random_permutation(rng, 4);
        OrthoSystem s{4, p, SystemKind::POrthonormal, {}};
        for (int i = 0; i < k; ++i) s.vectors.push_back(base.vectors[order[i]]);
        s = apply_signed_perm(s, random_permutation(rng, 4),
                              static_cast<unsigned>(rng() % 16));
        if (supp_gt2 && support_of(s).size() <= 2) continue;
        return s;
    }
}

// ---------------------------------------------------------------------------
// Identity suites (shared by tests and the check-identities command)
// ---------------------------------------------------------------------------

struct SuiteResult {
    std::string name;
    long checked = 0;
    bool passed = true;
    std::string detail;
};

inline std::vector<SuiteResult> run_identity_suites(long samples, std::uint64_t seed) {
    std::vector<SuiteResult> out;
    std::mt19937_64 rng(seed);

    auto run = [&](const char* name, auto&& one) {
        SuiteResult r{name, 0, true, ""};
        for (long i = 0; i < samples && r.passed; ++i) {
            try {
                std::string why = one();
                if (!why.empty()) {
                    r.passed = false;
                    r.detail = why;
                }
            } catch (const std::exception& e) {
                r.passed = false;
                r.detail = e.what();
            }
            ++r.checked;
        }
        out.push_back(std::move(r));
    };

    // N(u)N(v) - <u,v>^2 equals the sum of the squared 2x2 column minors.
    run("lagrange-minors", [&]() -> std::string {
        IntVec u(4), v(4);
        for (auto& c : u) c = rand_between(rng, -20, 20);
        for (auto& c : v) c = rand_between(rng, -20, 20);
        Wide lhs = Wide(norm(u)) * norm(v) - Wide(inner(u, v)) * inner(u, v);
        Wide rhs = 0;
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j) {
                Wide mij = Wide(u[i]) * v[j] - Wide(u[j]) * v[i];
                rhs += mij * mij;
            }
        return lhs == rhs ? "" : "minor identity failed";
    });

    // For a p-orthonormal triple, t_i^2 = p^2 (p - x_i^2 - y_i^2 - z_i^2).
    run("exterior-norm", [&]() -> std::string {
        auto s = random_completed_system(rng, 3, false, false);
        const IntVec& x = s.vectors[0];
        const IntVec& y = s.vectors[1];
        const IntVec& z = s.vectors[2];
        auto ext = extend_three(s);
        for (int i = 0; i < 4; ++i) {
            Wide ti = Wide(ext.vector[i]) * s.p;  // t = p * v4
            Wide rhs = Wide(s.p) * s.p *
                       (Wide(s.p) - Wide(x[i]) * x[i] - Wide(y[i]) * y[i] - Wide(z[i]) * z[i]);
            if (ti * ti != rhs) return "exterior norm identity failed at i=" + std::to_string(i);
        }
        return "";
    });

    // Parity relations hold on every valid p-orthonormal system.
    run("parity", [&]() -> std::string {
        int k = static_cast<int>(1 + rng() % 3);
        auto s = random_completed_system(rng, k, false, false);
        return parity_check(s) ? "" : "parity relation failed";
    });

    // Prime pair, support > 2: complement Gram divisible by p, det = p^2.
    run("gram-divisibility", [&]() -> std::string {
        auto s = random_completed_system(rng, 2, true, true);
        auto r = extend_two_prime(s);  // throws on any internal assertion
        if (!r.certificate.has_gram) return "missing gram certificate";
        Int a = r.certificate.gram_unit[0], b = r.certificate.gram_unit[1],
            c = r.certificate.gram_unit[2];
        return (a * c - b * b == 1) ? "" : "unit form determinant != 1";
    });

    // Any pair: det(complement) * c * d = p.
    run("complement-determinant", [&]() -> std::string {
        auto s = random_completed_system(rng, 2, false, false);
        return check_complement_determinant(s) ? "" : "determinant identity failed";
    });

    // Any pair: N(w1) c2^2 d1^2 = p (p - x4^2 - y4^2).
    run("complement-norm", [&]() -> std::string {
        auto s = random_completed_system(rng, 2, false, false);
        return check_complement_norm_formula(s) ? "" : "norm formula failed";
    });

    // Closed-form basis and SNF complement basis generate the same lattice.
    run("closed-form-lattice", [&]() -> std::string {
        auto s = random_completed_system(rng, 2, false, false);
        auto cf = closed_form_complement(s);
        auto cb = complement_basis(s);
        return lattices_equal({cf.w1, cf.w2}, cb.vectors) ? "" : "lattices differ";
    });

    return out;
}

}  // namespace orthobase
