#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "orthobase/extend.hpp"
#include "orthobase/oracle.hpp"

using namespace orthobase;

namespace {

OrthoSystem sys(int n, Int p, std::vector<IntVec> vs) {
    return OrthoSystem{n, p, SystemKind::POrthonormal, std::move(vs)};
}

bool in_brute_set(const OrthoSystem& s, const IntVec& v) {
    auto hits = brute_extensions(s).hits;
    return std::find(hits.begin(), hits.end(), v) != hits.end();
}

}  // namespace

TEST_CASE("extend_one applies the rotation formula") {
    CHECK(extend_one({1, 1, 1, 1}).vector == IntVec{1, -1, 1, -1});
    CHECK(extend_one({2, 1, 0, 0}).vector == IntVec{1, -2, 0, 0});
    CHECK(extend_one({0, 0, 0, 3}).vector == IntVec{0, 0, 3, 0});
    CHECK(extend_one({2, 1, 0, 0}).method == ExtendMethod::Rotate);
    CHECK_THROWS_AS(extend_one({0, 0, 0, 0}), InvalidInput);
}

TEST_CASE("extend_support2 copies the support pair into the free slots") {
    auto r1 = extend_support2(sys(4, 5, {{1, 2, 0, 0}, {2, -1, 0, 0}}));
    CHECK(r1.vector == IntVec{0, 0, 1, 2});
    auto r2 = extend_support2(sys(4, 25, {{0, 3, 0, 4}, {0, 4, 0, -3}}));
    CHECK(r2.vector == IntVec{3, 0, 4, 0});
    auto r3 = extend_support2(sys(4, 2, {{1, 1, 0, 0}, {1, -1, 0, 0}}));
    CHECK(r3.vector == IntVec{0, 0, 1, 1});
    CHECK(r3.method == ExtendMethod::Support2);
    CHECK_THROWS_AS(extend_support2(sys(4, 3, {{1, 1, 1, 0}, {1, -1, 0, 1}})), InvalidInput);
}

TEST_CASE("extend_three uses the exterior product divided by p") {
    auto r1 = extend_three(sys(4, 1, {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}}));
    CHECK((r1.vector == IntVec{0, 0, 0, 1} || r1.vector == IntVec{0, 0, 0, -1}));
    CHECK(r1.method == ExtendMethod::Exterior);

    auto r2 = extend_three(sys(4, 2, {{1, 1, 0, 0}, {1, -1, 0, 0}, {0, 0, 1, 1}}));
    CHECK((r2.vector == IntVec{0, 0, 1, -1} || r2.vector == IntVec{0, 0, -1, 1}));

    OrthoSystem t = sys(4, 3, {{1, 1, 1, 0}, {1, -1, 0, 1}, {0, 1, -1, 1}});
    auto r3 = extend_three(t);
    // Unique up to sign: the brute-force solution set has exactly two members.
    auto all = brute_extensions(t).hits;
    REQUIRE(all.size() == 2);
    CHECK(in_brute_set(t, r3.vector));
}

TEST_CASE("exterior-product norm identity on random triples") {
    std::mt19937_64 rng(42);
    for (int t = 0; t < 500; ++t) {
        auto s = random_completed_system(rng, 3, false, false);
        auto r = extend_three(s);
        for (int i = 0; i < 4; ++i) {
            Wide ti = Wide(r.vector[i]) * s.p;
            Wide rhs = Wide(s.p) * s.p *
                       (Wide(s.p) - Wide(s.vectors[0][i]) * s.vectors[0][i] -
                        Wide(s.vectors[1][i]) * s.vectors[1][i] -
                        Wide(s.vectors[2][i]) * s.vectors[2][i]);
            CHECK(ti * ti == rhs);
        }
    }
}

TEST_CASE("find_unit_vector by Gauss reduction") {
    auto b1 = find_unit_vector({1, 0, 1});
    CHECK(b1 == std::array<Int, 2>{1, 0});

    BinaryForm f2{2, 1, 1};  // 2x^2 + 2xy + y^2
    auto b2 = find_unit_vector(f2);
    CHECK(f2.value(b2[0], b2[1]) == 1);

    BinaryForm f3{5, 2, 1};  // 5x^2 + 4xy + y^2
    auto b3 = find_unit_vector(f3);
    CHECK(f3.value(b3[0], b3[1]) == 1);

    CHECK_THROWS_AS(find_unit_vector({2, 0, 1}), InvalidInput);   // det 2
    CHECK_THROWS_AS(find_unit_vector({-1, 0, -1}), InvalidInput);  // not pd
}

TEST_CASE("find_unit_vector on random determinant-1 forms") {
    std::mt19937_64 rng(17);
    for (int t = 0; t < 500; ++t) {
        // U^T U for random unimodular U gives a random det-1 positive form.
        Int a11 = 1, a12 = static_cast<Int>(rng() % 21) - 10;
        Int a21 = 0, a22 = 1;
        for (int mix = 0; mix < 4; ++mix) {
            Int m = static_cast<Int>(rng() % 9) - 4;
            // alternate row/column shears
            if (mix % 2 == 0) { a11 += m * a21; a12 += m * a22; }
            else { a21 += m * a11; a22 += m * a12; }
        }
        BinaryForm f{a11 * a11 + a21 * a21, a11 * a12 + a21 * a22, a12 * a12 + a22 * a22};
        REQUIRE(f.discriminant() == 1);
        auto b = find_unit_vector(f);
        CHECK(f.value(b[0], b[1]) == 1);
        CHECK((b[0] != 0 || b[1] != 0));
    }
}

TEST_CASE("extend_two_prime produces a brute-set member with a valid certificate") {
    struct Case { OrthoSystem s; };
    std::vector<OrthoSystem> cases = {
        sys(4, 5, {{2, 1, 0, 0}, {0, 0, 2, 1}}),
        sys(4, 3, {{1, 1, 1, 0}, {1, -1, 0, 1}}),
        sys(4, 7, {{2, 1, 1, 1}, {1, -2, 1, -1}}),
    };
    for (const auto& s : cases) {
        auto r = extend_two_prime(s);
        CHECK(r.method == ExtendMethod::GramReduction);
        CHECK(norm(r.vector) == s.p);
        CHECK(in_brute_set(s, r.vector));
        REQUIRE(r.certificate.has_gram);
        for (Int g : r.certificate.gram) CHECK(g % s.p == 0);
        Int a = r.certificate.gram_unit[0], b = r.certificate.gram_unit[1],
            c = r.certificate.gram_unit[2];
        CHECK(a * c - b * b == 1);
    }
    CHECK_THROWS_AS(extend_two_prime(sys(4, 4, {{1, 1, 1, 1}, {1, 1, -1, -1}})),
                    NotPrimeError);
    CHECK_THROWS_AS(extend_two_prime(sys(4, 2, {{1, 1, 0, 0}, {1, -1, 0, 0}})), InvalidInput);
}

TEST_CASE("extend_search covers composite p and cross-checks the exterior product") {
    auto r1 = extend_search(sys(4, 4, {{1, 1, 1, 1}, {1, 1, -1, -1}, {1, -1, 1, -1}}));
    REQUIRE(r1.has_value());
    CHECK((r1->vector == IntVec{1, -1, -1, 1} || r1->vector == IntVec{-1, 1, 1, -1}));

    OrthoSystem s2 = sys(4, 9, {{2, 2, 1, 0}});
    auto r2 = extend_search(s2);
    REQUIRE(r2.has_value());
    CHECK(norm(r2->vector) == 9);
    CHECK(in_brute_set(s2, r2->vector));

    // All-ones seed in Z^9 with p = 9 admits no extension at all.
    OrthoSystem s3{9, 9, SystemKind::POrthonormal, {IntVec(9, 1)}};
    CHECK_FALSE(extend_search(s3).has_value());
}

TEST_CASE("extend_search result is deterministic") {
    OrthoSystem s = sys(4, 9, {{2, 2, 1, 0}});
    auto a = extend_search(s);
    auto b = extend_search(s);
    REQUIRE(a.has_value());
    REQUIRE(b.has_value());
    CHECK(a->vector == b->vector);
}

TEST_CASE("complete_to_base dispatches by (k, support, primality)") {
    SUBCASE("seed (2,1,0,0), p=5: rotate -> support2 -> exterior") {
        auto c = complete_to_base(sys(4, 5, {{2, 1, 0, 0}}));
        REQUIRE(c.steps.size() == 3);
        CHECK(c.steps[0].method == ExtendMethod::Rotate);
        CHECK(c.steps[1].method == ExtendMethod::Support2);
        CHECK(c.steps[2].method == ExtendMethod::Exterior);
        CHECK(validate_system(c.base).valid);
        CHECK(c.base.k() == 4);
    }
    SUBCASE("composite p goes through the search path") {
        auto c = complete_to_base(sys(4, 4, {{1, 1, 1, 1}}));
        REQUIRE(c.steps.size() == 3);
        CHECK(c.steps[1].method == ExtendMethod::Search);
        CHECK(validate_system(c.base).valid);
    }
    SUBCASE("p = 1 yields a signed permutation of the canonical base") {
        auto c = complete_to_base(sys(4, 1, {{1, 0, 0, 0}}));
        CHECK(validate_system(c.base).valid);
        for (const auto& v : c.base.vectors) {
            int nonzero = 0;
            for (Int x : v) nonzero += (x != 0);
            CHECK(nonzero == 1);
        }
    }
    SUBCASE("prime pair with wide support goes through gram reduction") {
        auto c = complete_to_base(sys(4, 3, {{1, 1, 1, 0}, {1, -1, 0, 1}}));
        REQUIRE(c.steps.size() == 2);
        CHECK(c.steps[0].method == ExtendMethod::GramReduction);
        CHECK(c.steps[1].method == ExtendMethod::Exterior);
        CHECK(validate_system(c.base).valid);
    }
    SUBCASE("already complete input is returned unchanged") {
        auto base = complete_to_base(sys(4, 5, {{2, 1, 0, 0}})).base;
        auto again = complete_to_base(base);
        CHECK(again.steps.empty());
        CHECK(again.base == base);
    }
}

TEST_CASE("dispatcher totality for prime p (exhaustive small sweep)") {
    // Theorem: completion never fails for prime p. Checked exhaustively for
    // p <= 13 over all orthogonal pairs and triples (no symmetry reduction).
    for (Int p : {2, 3, 5, 7, 11, 13}) {
        auto vecs = enumerate_norm_vectors(4, p);
        for (std::size_t i = 0; i < vecs.size(); ++i) {
            auto c1 = complete_to_base(sys(4, p, {vecs[i]}));
            CHECK(c1.base.k() == 4);
            for (std::size_t j = i + 1; j < vecs.size(); ++j) {
                if (inner(vecs[i], vecs[j]) != 0) continue;
                auto c2 = complete_to_base(sys(4, p, {vecs[i], vecs[j]}));
                CHECK(c2.base.k() == 4);
            }
        }
    }
}

TEST_CASE("reduction frame matches the pinned permutation example") {
    // For (2,1,0,0),(0,0,2,1) the frame must land (0,1) in the last slot.
    OrthoSystem s = sys(4, 5, {{2, 1, 0, 0}, {0, 0, 2, 1}});
    auto frame = choose_reduction_frame(s);
    auto xp = permute_vector(s.vectors[0], frame);
    auto yp = permute_vector(s.vectors[1], frame);
    CHECK(xp[0] != 0);
    CHECK(xp[0] * yp[1] - xp[1] * yp[0] != 0);
    CHECK(xp[3] == 0);
    CHECK(yp[3] == 1);
    CHECK(unpermute_vector(permute_vector(s.vectors[0], frame), frame) == s.vectors[0]);
}

TEST_CASE("every extension is certified sound on random systems") {
    std::mt19937_64 rng(31337);
    for (int t = 0; t < 300; ++t) {
        int k = 1 + static_cast<int>(rng() % 3);
        auto s = random_completed_system(rng, k, false, false);
        auto c = complete_to_base(s);
        CHECK(validate_system(c.base).valid);
        for (const auto& step : c.steps) {
            CHECK(step.certificate.norm == s.p);
            for (Int ip : step.certificate.inner_products) CHECK(ip == 0);
        }
    }
}
