#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "orthobase/oracle.hpp"
#include "orthobase/snf.hpp"

using namespace orthobase;

namespace {

// Rank over Q by fraction-free elimination, independent of the SNF code.
int rational_rank(Mat m) {
    int rank = 0;
    int r = 0;
    for (int c = 0; c < m.cols && r < m.rows; ++c) {
        int piv = -1;
        for (int i = r; i < m.rows; ++i)
            if (m.at(i, c) != 0) { piv = i; break; }
        if (piv < 0) continue;
        for (int j = 0; j < m.cols; ++j) std::swap(m.at(r, j), m.at(piv, j));
        for (int i = r + 1; i < m.rows; ++i) {
            if (m.at(i, c) == 0) continue;
            Int a = m.at(r, c), b = m.at(i, c);
            Int g = std::gcd(a < 0 ? -a : a, b < 0 ? -b : b);
            Int fa = b / g, fb = a / g;
            for (int j = 0; j < m.cols; ++j)
                m.at(i, j) = checked_sub(checked_mul(fb, m.at(i, j)),
                                         checked_mul(fa, m.at(r, j)));
        }
        ++r;
        ++rank;
    }
    return rank;
}

void check_snf_contract(const Mat& v) {
    auto res = smith_normal_form(v);
    CHECK(mat_mul(mat_mul(res.L, v), res.R) == res.D);
    CHECK(abs_int(det(res.L)) == 1);
    CHECK(abs_int(det(res.R)) == 1);
    for (int i = 0; i < v.rows; ++i)
        for (int j = 0; j < v.cols; ++j)
            if (i != j) CHECK(res.D.at(i, j) == 0);
    for (std::size_t i = 0; i < res.factors.size(); ++i) {
        CHECK(res.factors[i] > 0);
        if (i + 1 < res.factors.size()) CHECK(res.factors[i + 1] % res.factors[i] == 0);
    }
}

OrthoSystem sys(int n, Int p, std::vector<IntVec> vs) {
    return OrthoSystem{n, p, SystemKind::POrthonormal, std::move(vs)};
}

}  // namespace

TEST_CASE("smith_normal_form on the pinned examples") {
    CHECK(smith_normal_form(Mat::from_rows({{1, 2, 3, 4}})).factors == std::vector<Int>{1});
    CHECK(smith_normal_form(Mat::from_rows({{2, 0, 0, 0}, {0, 2, 0, 0}})).factors ==
          std::vector<Int>{2, 2});
    auto res = smith_normal_form(Mat::from_rows({{2, 1, 0, 0}, {0, 0, 2, 1}}));
    CHECK(res.factors == std::vector<Int>{1, 1});
    check_snf_contract(Mat::from_rows({{2, 1, 0, 0}, {0, 0, 2, 1}}));
}

TEST_CASE("smith_normal_form is deterministic") {
    Mat v = Mat::from_rows({{6, 4, 2}, {2, 8, 4}});
    auto a = smith_normal_form(v);
    auto b = smith_normal_form(v);
    CHECK(a.L == b.L);
    CHECK(a.R == b.R);
    CHECK(a.D == b.D);
}

TEST_CASE("rank-deficient input raises an error naming the dependency") {
    Mat v = Mat::from_rows({{1, 2, 3}, {2, 4, 6}});
    CHECK_THROWS_AS(smith_normal_form(v), RankDeficientError);
    try {
        smith_normal_form(v);
    } catch (const RankDeficientError& e) {
        CHECK(std::string(e.what()).find("rank 1") != std::string::npos);
    }
}

TEST_CASE("reconstruction holds for 1000 random matrices up to 6x6") {
    std::mt19937_64 rng(2024);
    int done = 0, deficient = 0;
    while (done < 1000) {
        int n = 1 + static_cast<int>(rng() % 6);
        int k = 1 + static_cast<int>(rng() % n);
        Mat v(k, n);
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < n; ++j) v.at(i, j) = static_cast<Int>(rng() % 19) - 9;
        int rank = rational_rank(v);
        if (rank < k) {
            CHECK_THROWS_AS(smith_normal_form(v), RankDeficientError);
            ++deficient;
        } else {
            check_snf_contract(v);
        }
        ++done;
    }
    CHECK(deficient > 0);  // the sample must exercise both paths
}

TEST_CASE("complement basis solves V x = 0 and generates the whole kernel") {
    SUBCASE("single all-ones vector") {
        auto cb = complement_basis(sys(4, 4, {{1, 1, 1, 1}}));
        REQUIRE(cb.vectors.size() == 3);
        for (const auto& w : cb.vectors) CHECK(inner(w, IntVec{1, 1, 1, 1}) == 0);
        CHECK(det(gram_matrix(cb.vectors)) == 4);
        // Same lattice as the standard difference basis of {x : sum x_i = 0}.
        CHECK(lattices_equal(cb.vectors,
                             {{1, -1, 0, 0}, {0, 1, -1, 0}, {0, 0, 1, -1}}));
    }
    SUBCASE("the (2,1,0,0),(0,0,2,1) pair") {
        auto cb = complement_basis(sys(4, 5, {{2, 1, 0, 0}, {0, 0, 2, 1}}));
        REQUIRE(cb.vectors.size() == 2);
        CHECK(lattices_equal(cb.vectors, {{1, -2, 0, 0}, {0, 0, 1, -2}}));
    }
    SUBCASE("brute-force kernel box cross-check") {
        OrthoSystem s = sys(4, 5, {{2, 1, 0, 0}, {0, 0, 2, 1}});
        auto cb = complement_basis(s);
        // Every integer point of the kernel inside a small box must be an
        // integer combination of the claimed basis.
        for (Int a = -4; a <= 4; ++a)
            for (Int b = -4; b <= 4; ++b)
                for (Int c = -4; c <= 4; ++c)
                    for (Int d = -4; d <= 4; ++d) {
                        IntVec x{a, b, c, d};
                        if (inner(x, s.vectors[0]) != 0) continue;
                        if (inner(x, s.vectors[1]) != 0) continue;
                        CHECK(integer_combination(cb.vectors, x).has_value());
                    }
    }
    SUBCASE("full-rank system has an empty complement") {
        auto cb = complement_basis(sys(4, 1, {{1, 0, 0, 0},
                                              {0, 1, 0, 0},
                                              {0, 0, 1, 0},
                                              {0, 0, 0, 1}}));
        CHECK(cb.vectors.empty());
    }
    SUBCASE("three canonical vectors leave the last axis") {
        auto cb = complement_basis(sys(4, 1, {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}}));
        REQUIRE(cb.vectors.size() == 1);
        CHECK((cb.vectors[0] == IntVec{0, 0, 0, 1} || cb.vectors[0] == IntVec{0, 0, 0, -1}));
    }
}

TEST_CASE("complement basis vectors are orthogonal to every input row (random)") {
    std::mt19937_64 rng(99);
    for (int t = 0; t < 300; ++t) {
        int n = 2 + static_cast<int>(rng() % 5);
        int k = 1 + static_cast<int>(rng() % n);
        Mat v(k, n);
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < n; ++j) v.at(i, j) = static_cast<Int>(rng() % 11) - 5;
        if (rational_rank(v) < k) continue;
        auto cb = complement_basis(v);
        CHECK(cb.vectors.size() == static_cast<std::size_t>(n - k));
        for (const auto& w : cb.vectors)
            for (int i = 0; i < k; ++i) CHECK(inner(v.row(i), w) == 0);
    }
}

TEST_CASE("invariant_factor_check on the pinned pairs") {
    CHECK(invariant_factor_check(sys(4, 5, {{2, 1, 0, 0}, {0, 0, 2, 1}})));
    CHECK(invariant_factor_check(sys(4, 3, {{1, 1, 1, 0}, {1, -1, 0, 1}})));
    CHECK(invariant_factor_check(sys(4, 7, {{2, 1, 1, 1}, {1, -2, 1, -1}})));
    // Preconditions are named when violated.
    CHECK_THROWS_AS(invariant_factor_check(sys(4, 4, {{1, 1, 1, 1}, {1, 1, -1, -1}})),
                    NotPrimeError);
    CHECK_THROWS_AS(invariant_factor_check(sys(4, 2, {{1, 1, 0, 0}, {1, -1, 0, 0}})),
                    InvalidInput);
}

TEST_CASE("Lagrange identity of 2x2 minors on random pairs") {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 2000; ++t) {
        IntVec u(4), v(4);
        for (auto& c : u) c = static_cast<Int>(rng() % 41) - 20;
        for (auto& c : v) c = static_cast<Int>(rng() % 41) - 20;
        Wide lhs = Wide(norm(u)) * norm(v) - Wide(inner(u, v)) * inner(u, v);
        Wide rhs = 0;
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j) {
                Wide m = Wide(u[i]) * v[j] - Wide(u[j]) * v[i];
                rhs += m * m;
            }
        CHECK(lhs == rhs);
    }
}

TEST_CASE("determinant by Bareiss elimination") {
    CHECK(det(Mat::identity(4)) == 1);
    CHECK(det(Mat::from_rows({{2, 1}, {1, 1}})) == 1);
    CHECK(det(Mat::from_rows({{1, 2}, {2, 4}})) == 0);
    CHECK(det(Mat::from_rows({{0, 1, 0}, {1, 0, 0}, {0, 0, 1}})) == -1);
    CHECK(det(Mat::from_rows({{3, 0, 0, 0}, {0, 3, 0, 0}, {0, 0, 3, 0}, {0, 0, 0, 3}})) == 81);
}
