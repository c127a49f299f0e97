#pragma once
// Completion of p-orthonormal systems in Z^4 to p-orthonormal bases.
//
// Case dispatch: a single vector extends by the quaternion-style rotation
// (x2,-x1,x4,-x3); a pair supported on two coordinates extends by copying the
// first vector into the complementary slots; a pair with prime p and wider
// support goes through the complement lattice and Gauss reduction of its
// scaled Gram form; a triple extends by the exterior product divided by p.
// Composite p falls back to a bounded coefficient search over the complement
// lattice. Every returned vector is re-certified (norm p, orthogonal to all
// inputs) before it leaves this module.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "orthobase/core.hpp"
#include "orthobase/snf.hpp"

namespace orthobase {

enum class ExtendMethod { Rotate, Support2, GramReduction, Exterior, Search };

inline const char* method_name(ExtendMethod m) {
    switch (m) {
        case ExtendMethod::Rotate: return "rotate";
        case ExtendMethod::Support2: return "support2";
        case ExtendMethod::GramReduction: return "gram-reduction";
        case ExtendMethod::Exterior: return "exterior";
        case ExtendMethod::Search: return "search";
    }
    return "?";
}

// Recomputed evidence that an extension vector is correct, plus the
// gram-reduction intermediates when that path produced it.
struct ExtensionCertificate {
    Int norm = 0;
    std::vector<Int> inner_products;
    bool has_gram = false;
    std::array<Int, 3> gram{};       // mu, lambda, nu of the complement basis
    std::array<Int, 3> gram_unit{};  // the same divided by p
    std::array<Int, 2> coeffs{};     // coordinates of the result in that basis
};

struct ExtensionResult {
    IntVec vector;
    ExtendMethod method = ExtendMethod::Rotate;
    ExtensionCertificate certificate;
};

namespace detail {

inline ExtensionCertificate certify(const OrthoSystem& s, const IntVec& v, const char* who) {
    ExtensionCertificate c;
    c.norm = norm(v);
    if (c.norm != s.p)
        throw TheoremViolation(std::string(who) + ": extension norm " + std::to_string(c.norm) +
                               " != p=" + std::to_string(s.p));
    for (const auto& u : s.vectors) {
        Int ip = inner(u, v);
        c.inner_products.push_back(ip);
        if (ip != 0)
            throw TheoremViolation(std::string(who) + ": extension not orthogonal to input");
    }
    return c;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Coordinate frame for the two-vector reduction
// ---------------------------------------------------------------------------

// Deterministic slot->position map making v1's first coordinate nonzero, the
// leading 2x2 column minor nonzero, and (when the support allows) the last
// slot a support position. frame[i] is the original position shown at
// permuted position i.
inline std::array<int, 4> choose_reduction_frame(const OrthoSystem& s) {
    if (s.n != 4 || s.k() != 2) throw InvalidInput("reduction frame needs k=2 in Z^4");
    const IntVec& x = s.vectors[0];
    const IntVec& y = s.vectors[1];

    int a = -1;
    for (int i = 0; i < 4; ++i)
        if (x[i] != 0) { a = i; break; }
    if (a < 0) throw InvalidInput("reduction frame: first vector is zero");

    int b = -1;
    for (int j = 0; j < 4; ++j) {
        if (j == a) continue;
        Wide minor = Wide(x[a]) * y[j] - Wide(x[j]) * y[a];
        if (minor != 0) { b = j; break; }
    }
    if (b < 0) throw RankDeficientError("reduction frame: rank < 2");

    auto supp = support_of(s);
    int last = -1;
    for (int i : supp)
        if (i != a && i != b) last = i;  // sorted ascending, keep the largest
    if (last < 0) {
        for (int i = 3; i >= 0; --i)
            if (i != a && i != b) { last = i; break; }
    }
    int third = -1;
    for (int i = 0; i < 4; ++i)
        if (i != a && i != b && i != last) { third = i; break; }
    return {a, b, third, last};
}

inline IntVec permute_vector(const IntVec& v, const std::array<int, 4>& frame) {
    IntVec r(4);
    for (int i = 0; i < 4; ++i) r[i] = v[frame[i]];
    return r;
}

inline IntVec unpermute_vector(const IntVec& v, const std::array<int, 4>& frame) {
    IntVec r(4);
    for (int i = 0; i < 4; ++i) r[frame[i]] = v[i];
    return r;
}

inline OrthoSystem permute_system(const OrthoSystem& s, const std::array<int, 4>& frame) {
    OrthoSystem r = s;
    for (auto& v : r.vectors) v = permute_vector(v, frame);
    return r;
}

// ---------------------------------------------------------------------------
// Binary quadratic forms
// ---------------------------------------------------------------------------

// a*x^2 + 2b*xy + c*y^2, i.e. the symmetric matrix [[a,b],[b,c]].
struct BinaryForm {
    Int a = 1, b = 0, c = 1;

    Int discriminant() const { return checked_sub(checked_mul(a, c), checked_mul(b, b)); }
    bool positive_definite() const { return a > 0 && discriminant() > 0; }

    Int value(Int u, Int v) const {
        Wide r = Wide(a) * u * u + 2 * Wide(b) * u * v + Wide(c) * v * v;
        return checked_narrow(r, "binary form value");
    }
};

// A nonzero integer point where a positive definite determinant-1 form takes
// the value 1, found by Gauss reduction. Every such form is equivalent to
// x^2 + y^2 restricted to determinant 1, i.e. reduces to the identity form;
// the accumulated change of basis applied to (1,0) is the witness.
inline std::array<Int, 2> find_unit_vector(const BinaryForm& f) {
    if (f.discriminant() != 1)
        throw InvalidInput("find_unit_vector requires determinant 1, got " +
                           std::to_string(f.discriminant()));
    if (!f.positive_definite())
        throw InvalidInput("find_unit_vector requires a positive definite form");

    Int a = f.a, b = f.b, c = f.c;
    Int u00 = 1, u01 = 0, u10 = 0, u11 = 1;
    for (int guard = 0; guard < 128; ++guard) {
        // Translate: x -> x - t*y with t = nearest(b/a), giving |2b| <= a.
        Int t = div_nearest(b, a);
        if (t != 0) {
            c = checked_narrow(Wide(c) - 2 * Wide(t) * b + Wide(t) * t * a, "form reduction");
            b = checked_sub(b, checked_mul(t, a));
            u01 = checked_sub(u01, checked_mul(t, u00));
            u11 = checked_sub(u11, checked_mul(t, u10));
        }
        if (c >= a) break;
        // Swap the two variables (rotation, determinant +1): (a,b,c)->(c,-b,a).
        std::swap(a, c);
        b = -b;
        Int n00 = u01, n10 = u11;
        u01 = -u00; u11 = -u10;
        u00 = n00; u10 = n10;
    }
    if (a != 1 || b != 0 || c != 1)
        throw TheoremViolation("determinant-1 form did not reduce to the identity form");
    return {u00, u10};
}

// ---------------------------------------------------------------------------
// The extension cases
// ---------------------------------------------------------------------------

// k=1, any p >= 1: (x1,x2,x3,x4) -> (x2,-x1,x4,-x3).
inline ExtensionResult extend_one(const IntVec& v1) {
    if (v1.size() != 4) throw DimensionMismatch("extend_one requires dimension 4");
    if (is_zero_vec(v1)) throw InvalidInput("extend_one: zero vector");
    IntVec v2{v1[1], -v1[0], v1[3], -v1[2]};
    OrthoSystem s{4, norm(v1), SystemKind::POrthonormal, {v1}};
    auto cert = detail::certify(s, v2, "extend_one");
    return {v2, ExtendMethod::Rotate, cert};
}

// k=2 with |supp(S)| = 2, any p >= 1: copy v1's support coordinates into the
// two positions outside the support, in ascending position order.
inline ExtensionResult extend_support2(const OrthoSystem& s) {
    require_valid(s);
    if (s.n != 4 || s.k() != 2) throw InvalidInput("extend_support2 requires k=2 in Z^4");
    auto supp = support_of(s);
    if (supp.size() != 2)
        throw InvalidInput("extend_support2 requires |supp(S)| = 2, got " +
                           std::to_string(supp.size()));
    std::vector<int> rest;
    for (int i = 0; i < 4; ++i)
        if (i != supp[0] && i != supp[1]) rest.push_back(i);
    IntVec v(4, 0);
    v[rest[0]] = s.vectors[0][supp[0]];
    v[rest[1]] = s.vectors[0][supp[1]];
    auto cert = detail::certify(s, v, "extend_support2");
    return {v, ExtendMethod::Support2, cert};
}

// k=3, any p >= 1: the exterior product t has t_i = (-1)^i * (3x3 minor
// omitting column i, 1-based), every t_i is divisible by p, and t/p is the
// completion.
inline ExtensionResult extend_three(const OrthoSystem& s) {
    require_valid(s);
    if (s.n != 4 || s.k() != 3) throw InvalidInput("extend_three requires k=3 in Z^4");
    const IntVec& x = s.vectors[0];
    const IntVec& y = s.vectors[1];
    const IntVec& z = s.vectors[2];

    auto minor3 = [&](int skip) {
        std::array<int, 3> c{};
        int t = 0;
        for (int j = 0; j < 4; ++j)
            if (j != skip) c[t++] = j;
        Wide d = Wide(x[c[0]]) * (Wide(y[c[1]]) * z[c[2]] - Wide(y[c[2]]) * z[c[1]]) -
                 Wide(x[c[1]]) * (Wide(y[c[0]]) * z[c[2]] - Wide(y[c[2]]) * z[c[0]]) +
                 Wide(x[c[2]]) * (Wide(y[c[0]]) * z[c[1]] - Wide(y[c[1]]) * z[c[0]]);
        return checked_narrow(d, "exterior product");
    };

    IntVec v(4);
    for (int i = 0; i < 4; ++i) {
        Int ti = (i % 2 == 0) ? -minor3(i) : minor3(i);
        if (ti % s.p != 0)
            throw TheoremViolation("exterior product coordinate not divisible by p");
        v[i] = ti / s.p;
    }
    auto cert = detail::certify(s, v, "extend_three");
    return {v, ExtendMethod::Exterior, cert};
}

// k=2, prime p, |supp(S)| > 2: complement basis {w1,w2}, Gram matrix G with
// p | G and det(G) = p^2, then a unit vector of G/p gives the completion.
inline ExtensionResult extend_two_prime(const OrthoSystem& s) {
    require_valid(s);
    if (s.n != 4 || s.k() != 2) throw InvalidInput("extend_two_prime requires k=2 in Z^4");
    if (!is_prime(s.p))
        throw NotPrimeError("extend_two_prime requires prime p (use extend_search)");
    if (support_of(s).size() <= 2)
        throw InvalidInput("extend_two_prime requires |supp(S)| > 2");

    auto frame = choose_reduction_frame(s);
    OrthoSystem sp = permute_system(s, frame);

    auto cb = complement_basis(sp);
    const IntVec& w1 = cb.vectors[0];
    const IntVec& w2 = cb.vectors[1];
    Int mu = inner(w1, w1), la = inner(w1, w2), nu = inner(w2, w2);

    if (mu % s.p != 0 || la % s.p != 0 || nu % s.p != 0)
        throw TheoremViolation("complement Gram matrix not divisible by p");
    if (checked_sub(checked_mul(mu, nu), checked_mul(la, la)) !=
        checked_mul(s.p, s.p))
        throw TheoremViolation("complement Gram determinant != p^2");

    BinaryForm unit{mu / s.p, la / s.p, nu / s.p};
    auto b = find_unit_vector(unit);

    IntVec v(4);
    for (int i = 0; i < 4; ++i)
        v[i] = checked_add(checked_mul(b[0], w1[i]), checked_mul(b[1], w2[i]));
    v = unpermute_vector(v, frame);

    auto cert = detail::certify(s, v, "extend_two_prime");
    cert.has_gram = true;
    cert.gram = {mu, la, nu};
    cert.gram_unit = {unit.a, unit.b, unit.c};
    cert.coeffs = b;
    return {v, ExtendMethod::GramReduction, cert};
}

// ---------------------------------------------------------------------------
// Bounded search over the complement lattice (any n, any p)
// ---------------------------------------------------------------------------

namespace detail {

// Pairwise size reduction (Lagrange-Gauss style). Shrinks entries so the
// coefficient boxes below stay small; terminates because the norm sum
// strictly decreases on every change.
inline void size_reduce(std::vector<IntVec>& basis) {
    auto by_norm = [](const IntVec& a, const IntVec& b) {
        Int na = norm(a), nb = norm(b);
        return na != nb ? na < nb : a < b;
    };
    bool changed = true;
    while (changed) {
        changed = false;
        std::sort(basis.begin(), basis.end(), by_norm);
        for (std::size_t i = 0; i < basis.size(); ++i)
            for (std::size_t j = 0; j < basis.size(); ++j) {
                if (i == j) continue;
                Int ni = norm(basis[i]);
                if (ni == 0) continue;
                Int t = div_nearest(inner(basis[j], basis[i]), ni);
                if (t != 0) {
                    IntVec cand = vec_sub_scaled(basis[j], basis[i], t);
                    if (norm(cand) < norm(basis[j])) {
                        basis[j] = std::move(cand);
                        changed = true;
                    }
                }
            }
    }
}

// Safe per-axis bound for b_i in { b : b^T G b = target }: the exact
// ellipsoid bound b_i^2 <= target * adj(G)_ii / det(G).
inline std::vector<Int> coefficient_bounds(const Mat& g, Int target) {
    int m = g.rows;
    Int dg = det(g);
    if (dg <= 0) throw TheoremViolation("complement Gram matrix not positive definite");
    std::vector<Int> bound(m);
    for (int i = 0; i < m; ++i) {
        Mat minor(m - 1, m - 1);
        for (int r = 0, rr = 0; r < m; ++r) {
            if (r == i) continue;
            for (int c = 0, cc = 0; c < m; ++c) {
                if (c == i) continue;
                minor.at(rr, cc++) = g.at(r, c);
            }
            ++rr;
        }
        Int adj = (m == 1) ? 1 : det(minor);
        // largest t with t^2 * det <= target * adj
        Wide cap = Wide(target) * adj;
        Int t = isqrt(checked_narrow(cap / dg, "coefficient bound"));
        while (Wide(t + 1) * (t + 1) * dg <= cap) ++t;
        bound[i] = t;
    }
    return bound;
}

// First coefficient vector (in ascending lexicographic order over the safe
// box) with b^T G b == target, or nullopt. The diagonal-dominance lower
// bound prunes prefixes when the reduced Gram matrix is strictly dominant.
inline std::optional<std::vector<Int>> search_quadratic(const Mat& g, Int target) {
    int m = g.rows;
    auto bound = coefficient_bounds(g, target);

    std::vector<Int> dd(m);
    bool dominant = true;
    for (int i = 0; i < m; ++i) {
        Int row = g.at(i, i);
        for (int j = 0; j < m; ++j)
            if (j != i) row = checked_sub(row, abs_int(g.at(i, j)));
        dd[i] = row;
        if (row <= 0) dominant = false;
    }

    std::vector<Int> b(m, 0);
    std::optional<std::vector<Int>> hit;
    auto rec = [&](auto&& self, int i, Wide ddsum) -> bool {
        if (i == m) {
            Wide q = 0;
            for (int r = 0; r < m; ++r)
                for (int c = 0; c < m; ++c) q += Wide(g.at(r, c)) * b[r] * b[c];
            if (q == Wide(target)) {
                hit = b;
                return true;
            }
            return false;
        }
        for (Int v = -bound[i]; v <= bound[i]; ++v) {
            Wide nd = ddsum;
            if (dominant) {
                nd += Wide(dd[i]) * v * v;
                if (nd > Wide(target)) {
                    if (v > 0) break;  // larger |v| on the positive side only grows
                    continue;
                }
            }
            b[i] = v;
            if (self(self, i + 1, nd)) return true;
        }
        b[i] = 0;
        return false;
    };
    rec(rec, 0, 0);
    return hit;
}

}  // namespace detail

// Best-effort completion step for any valid p-orthonormal system with k < n:
// enumerates coefficient vectors over the (size-reduced) complement basis
// inside a provably sufficient box and returns the first norm-p hit, or
// nothing when no extension exists at all.
inline std::optional<ExtensionResult> extend_search(const OrthoSystem& s) {
    require_valid(s);
    if (s.kind != SystemKind::POrthonormal)
        throw InvalidInput("extend_search requires a p-orthonormal system");
    if (s.k() >= s.n) throw InvalidInput("extend_search requires k < n");

    auto cb = complement_basis(s);
    detail::size_reduce(cb.vectors);
    Mat g = gram_matrix(cb.vectors);

    auto coeffs = detail::search_quadratic(g, s.p);
    if (!coeffs) return std::nullopt;

    IntVec v(s.n, 0);
    for (std::size_t t = 0; t < cb.vectors.size(); ++t)
        for (int i = 0; i < s.n; ++i)
            v[i] = checked_add(v[i], checked_mul((*coeffs)[t], cb.vectors[t][i]));
    auto cert = detail::certify(s, v, "extend_search");
    return ExtensionResult{v, ExtendMethod::Search, cert};
}

// ---------------------------------------------------------------------------
// Full completion in Z^4
// ---------------------------------------------------------------------------

struct Completion {
    OrthoSystem base;
    std::vector<ExtensionResult> steps;
};

// Repeats the case dispatch until k = 4. Guaranteed for prime p; for
// composite p the search step may fail, which raises NoExtensionError
// carrying the partial system (a would-be counterexample).
inline Completion complete_to_base(const OrthoSystem& s) {
    require_valid(s);
    if (s.n != 4) throw InvalidInput("complete_to_base requires n=4");
    if (s.kind != SystemKind::POrthonormal)
        throw InvalidInput("complete_to_base requires a p-orthonormal system");

    Completion out{s, {}};
    while (out.base.k() < 4) {
        ExtensionResult step;
        if (out.base.k() == 1) {
            step = extend_one(out.base.vectors[0]);
        } else if (out.base.k() == 2) {
            if (support_of(out.base).size() == 2) {
                step = extend_support2(out.base);
            } else if (is_prime(out.base.p)) {
                step = extend_two_prime(out.base);
            } else {
                auto found = extend_search(out.base);
                if (!found) throw NoExtensionError(out.base);
                step = *found;
            }
        } else {
            step = extend_three(out.base);
        }
        out.base.vectors.push_back(step.vector);
        out.steps.push_back(std::move(step));
    }
    require_valid(out.base);
    return out;
}

}  // namespace orthobase
