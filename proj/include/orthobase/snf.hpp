#pragma once
// Smith normal form of integer matrices and the orthogonal-complement basis
// it yields: for a rank-k matrix V (k x n), L*V*R = D with unimodular L, R
// and positive invariant factors in a divisibility chain. The last n-k
// columns of R generate the integer solution lattice of V*x = 0.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "orthobase/core.hpp"

namespace orthobase {

// ---------------------------------------------------------------------------
// Dense integer matrix, row-major
// ---------------------------------------------------------------------------

struct Mat {
    int rows = 0, cols = 0;
    std::vector<Int> a;

    Mat() = default;
    Mat(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0) {}

    static Mat identity(int n) {
        Mat m(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }

    static Mat from_rows(const std::vector<IntVec>& rs) {
        if (rs.empty()) throw InvalidInput("matrix needs at least one row");
        Mat m(static_cast<int>(rs.size()), static_cast<int>(rs[0].size()));
        for (int i = 0; i < m.rows; ++i) {
            if (static_cast<int>(rs[i].size()) != m.cols)
                throw DimensionMismatch("ragged rows in matrix");
            for (int j = 0; j < m.cols; ++j) m.at(i, j) = rs[i][j];
        }
        return m;
    }

    Int& at(int r, int c) { return a[static_cast<std::size_t>(r) * cols + c]; }
    Int at(int r, int c) const { return a[static_cast<std::size_t>(r) * cols + c]; }

    IntVec row(int r) const {
        IntVec v(cols);
        for (int j = 0; j < cols; ++j) v[j] = at(r, j);
        return v;
    }

    IntVec col(int c) const {
        IntVec v(rows);
        for (int i = 0; i < rows; ++i) v[i] = at(i, c);
        return v;
    }

    std::vector<IntVec> to_rows() const {
        std::vector<IntVec> rs;
        for (int i = 0; i < rows; ++i) rs.push_back(row(i));
        return rs;
    }

    bool operator==(const Mat& o) const = default;
};

inline Mat mat_mul(const Mat& x, const Mat& y) {
    if (x.cols != y.rows) throw DimensionMismatch("matrix product shape mismatch");
    Mat z(x.rows, y.cols);
    for (int i = 0; i < x.rows; ++i)
        for (int j = 0; j < y.cols; ++j) {
            Wide acc = 0;
            for (int t = 0; t < x.cols; ++t) acc += Wide(x.at(i, t)) * Wide(y.at(t, j));
            z.at(i, j) = checked_narrow(acc, "matrix product");
        }
    return z;
}

// Exact determinant by fraction-free (Bareiss) elimination.
inline Int det(const Mat& m) {
    if (m.rows != m.cols) throw DimensionMismatch("determinant of non-square matrix");
    int n = m.rows;
    if (n == 0) return 1;
    Mat w = m;
    Int sign = 1, prev = 1;
    for (int i = 0; i < n - 1; ++i) {
        if (w.at(i, i) == 0) {
            int piv = -1;
            for (int r = i + 1; r < n; ++r)
                if (w.at(r, i) != 0) { piv = r; break; }
            if (piv < 0) return 0;
            for (int j = 0; j < n; ++j) std::swap(w.at(i, j), w.at(piv, j));
            sign = -sign;
        }
        for (int r = i + 1; r < n; ++r)
            for (int c = i + 1; c < n; ++c) {
                Wide num = Wide(w.at(r, c)) * w.at(i, i) - Wide(w.at(r, i)) * w.at(i, c);
                w.at(r, c) = checked_narrow(num / prev, "determinant");
            }
        prev = w.at(i, i);
    }
    return checked_mul(sign, w.at(n - 1, n - 1));
}

// Gram matrix of a list of equal-dimension vectors.
inline Mat gram_matrix(const std::vector<IntVec>& vs) {
    Mat g(static_cast<int>(vs.size()), static_cast<int>(vs.size()));
    for (int i = 0; i < g.rows; ++i)
        for (int j = i; j < g.cols; ++j)
            g.at(i, j) = g.at(j, i) = inner(vs[i], vs[j]);
    return g;
}

// ---------------------------------------------------------------------------
// Smith normal form
// ---------------------------------------------------------------------------

struct SnfResult {
    Mat L;  // k x k, |det| = 1
    Mat D;  // k x n, invariant factors on the diagonal
    Mat R;  // n x n, |det| = 1
    std::vector<Int> factors;
};

namespace detail {

inline void swap_rows(Mat& m, int i, int j) {
    if (i == j) return;
    for (int c = 0; c < m.cols; ++c) std::swap(m.at(i, c), m.at(j, c));
}

inline void swap_cols(Mat& m, int i, int j) {
    if (i == j) return;
    for (int r = 0; r < m.rows; ++r) std::swap(m.at(r, i), m.at(r, j));
}

inline void add_row(Mat& m, int dst, int src, Int f) {
    for (int c = 0; c < m.cols; ++c)
        m.at(dst, c) = checked_add(m.at(dst, c), checked_mul(f, m.at(src, c)));
}

inline void add_col(Mat& m, int dst, int src, Int f) {
    for (int r = 0; r < m.rows; ++r)
        m.at(r, dst) = checked_add(m.at(r, dst), checked_mul(f, m.at(r, src)));
}

inline void negate_row(Mat& m, int i) {
    for (int c = 0; c < m.cols; ++c) m.at(i, c) = -m.at(i, c);
}

// Smallest nonzero |entry| of the working submatrix, ties by lowest (row,col).
inline bool find_pivot(const Mat& d, int s, int& pr, int& pc) {
    Int best = 0;
    pr = pc = -1;
    for (int r = s; r < d.rows; ++r)
        for (int c = s; c < d.cols; ++c) {
            Int v = d.at(r, c);
            if (v == 0) continue;
            Int av = abs_int(v);
            if (pr < 0 || av < best) { best = av; pr = r; pc = c; }
        }
    return pr >= 0;
}

inline bool lone_pivot(const Mat& d, int s) {
    for (int r = s + 1; r < d.rows; ++r)
        if (d.at(r, s) != 0) return false;
    for (int c = s + 1; c < d.cols; ++c)
        if (d.at(s, c) != 0) return false;
    return true;
}

}  // namespace detail

// Deterministic SNF with the minimal-|entry| pivoting rule. Requires the
// rows of V to be linearly independent; a rank-deficient input raises
// RankDeficientError naming a vanishing row combination.
inline SnfResult smith_normal_form(const Mat& V) {
    const int k = V.rows, n = V.cols;
    if (k < 1 || k > n)
        throw InvalidInput("smith_normal_form requires 1 <= k <= n, got k=" +
                           std::to_string(k) + ", n=" + std::to_string(n));

    SnfResult res;
    res.L = Mat::identity(k);
    res.R = Mat::identity(n);
    res.D = V;
    Mat& L = res.L;
    Mat& R = res.R;
    Mat& D = res.D;

    for (int s = 0; s < k; ++s) {
        for (;;) {
            int pr, pc;
            if (!detail::find_pivot(D, s, pr, pc)) {
                // Rows s..k-1 of L*V are zero; L's row s names a dependency.
                std::string combo;
                for (int j = 0; j < k; ++j)
                    combo += (j ? "," : "") + std::to_string(L.at(s, j));
                throw RankDeficientError("rank " + std::to_string(s) + " < k=" +
                                         std::to_string(k) +
                                         "; rows combine to zero with coefficients [" + combo +
                                         "]");
            }
            detail::swap_rows(D, s, pr);
            detail::swap_rows(L, s, pr);
            detail::swap_cols(D, s, pc);
            detail::swap_cols(R, s, pc);

            // Clear the pivot row and column; remainders are strictly
            // smaller than the pivot, so re-pivoting terminates.
            while (!detail::lone_pivot(D, s)) {
                Int piv = D.at(s, s);
                for (int r = s + 1; r < k; ++r)
                    if (D.at(r, s) != 0) {
                        Int q = D.at(r, s) / piv;
                        detail::add_row(D, r, s, -q);
                        detail::add_row(L, r, s, -q);
                    }
                for (int c = s + 1; c < n; ++c)
                    if (D.at(s, c) != 0) {
                        Int q = D.at(s, c) / piv;
                        detail::add_col(D, c, s, -q);
                        detail::add_col(R, c, s, -q);
                    }
                if (!detail::lone_pivot(D, s)) {
                    detail::find_pivot(D, s, pr, pc);
                    detail::swap_rows(D, s, pr);
                    detail::swap_rows(L, s, pr);
                    detail::swap_cols(D, s, pc);
                    detail::swap_cols(R, s, pc);
                }
            }

            // Divisibility fix-up: fold one offending row into the pivot row
            // and redo the clearing; the pivot magnitude strictly decreases.
            int br = -1;
            for (int r = s + 1; r < k && br < 0; ++r)
                for (int c = s + 1; c < n && br < 0; ++c)
                    if (D.at(r, c) % D.at(s, s) != 0) br = r;
            if (br < 0) break;
            detail::add_row(D, s, br, 1);
            detail::add_row(L, s, br, 1);
        }

        if (D.at(s, s) < 0) {
            detail::negate_row(D, s);
            detail::negate_row(L, s);
        }
    }

    for (int s = 0; s < k; ++s) res.factors.push_back(D.at(s, s));

    // Self-check: reconstruction, unimodularity and the divisibility chain.
    if (mat_mul(mat_mul(L, V), R) != D)
        throw TheoremViolation("SNF reconstruction L*V*R != D");
    if (abs_int(det(L)) != 1 || abs_int(det(R)) != 1)
        throw TheoremViolation("SNF transform not unimodular");
    for (int s = 0; s + 1 < k; ++s)
        if (res.factors[s] <= 0 || res.factors[s + 1] % res.factors[s] != 0)
            throw TheoremViolation("SNF invariant factor chain broken");

    return res;
}

// ---------------------------------------------------------------------------
// Orthogonal complement basis
// ---------------------------------------------------------------------------

// Basis of the integer solution lattice of V*x = 0: the last n-k columns of
// R in the Smith normal form of V. Empty when k = n (full rank, trivial
// complement).
struct ComplementBasis {
    std::vector<IntVec> vectors;
    SnfResult source;
};

inline ComplementBasis complement_basis(const Mat& V) {
    ComplementBasis cb;
    cb.source = smith_normal_form(V);
    for (int c = V.rows; c < V.cols; ++c) cb.vectors.push_back(cb.source.R.col(c));
    for (const auto& w : cb.vectors)
        for (int r = 0; r < V.rows; ++r)
            if (inner(V.row(r), w) != 0)
                throw TheoremViolation("complement basis vector not orthogonal to input row");
    return cb;
}

// Orthogonality of S itself is not required; any independent rows work.
inline ComplementBasis complement_basis(const OrthoSystem& s) {
    if (s.vectors.empty()) throw InvalidInput("complement_basis: empty system");
    for (const auto& v : s.vectors)
        if (static_cast<int>(v.size()) != s.n)
            throw DimensionMismatch("complement_basis: vector dimension != n");
    return complement_basis(Mat::from_rows(s.vectors));
}

// For a p-orthonormal pair with prime p and support larger than 2, both
// invariant factors are 1 and each row is primitive. Returns the computed
// truth of that statement; false on validated input is an implementation bug.
inline bool invariant_factor_check(const OrthoSystem& s) {
    if (s.kind != SystemKind::POrthonormal)
        throw InvalidInput("invariant_factor_check requires a p-orthonormal system");
    require_valid(s);
    if (s.k() != 2) throw InvalidInput("invariant_factor_check requires k=2");
    if (!is_prime(s.p)) throw NotPrimeError("invariant_factor_check requires prime p");
    if (static_cast<int>(support_of(s).size()) <= 2)
        throw InvalidInput("invariant_factor_check requires |supp(S)| > 2");

    auto snf = smith_normal_form(Mat::from_rows(s.vectors));
    if (snf.factors != std::vector<Int>{1, 1}) return false;
    for (const auto& v : s.vectors) {
        Int g = 0;
        for (Int x : v) g = std::gcd(g, abs_int(x));
        if (g != 1) return false;
    }
    return true;
}

}  // namespace orthobase
