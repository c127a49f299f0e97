#pragma once
// Verification campaigns: exhaustive or randomized sweeps that try to extend
// every p-orthonormal system in a range, the block-diagonal counterexample
// constructions for dimensions not divisible by 4, non-extendability
// confirmation by exhaustive search, and orthogonal (norm-free) extensions.
//
// Exhaustive sweeps are reduced by the hyperoctahedral group of signed
// coordinate permutations: systems are generated in ascending lexicographic
// order and kept only when they are the lexicographically minimal image of
// their orbit (orderly generation, so every orbit is counted exactly once).

#include <array>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "orthobase/core.hpp"
#include "orthobase/extend.hpp"
#include "orthobase/oracle.hpp"
#include "orthobase/snf.hpp"

namespace orthobase {

// ---------------------------------------------------------------------------
// Canonical representatives under signed coordinate permutations
// ---------------------------------------------------------------------------

// Full group enumeration is 2^n * n!; beyond n = 6 the per-system check is
// no longer desk scale (single vectors stay cheap at any n, see below).
inline bool symmetry_group_enumerable(int n) { return n <= 6; }

// Minimal image of a single vector: the signs and the permutation decouple,
// so it is the absolute values sorted descending, all negated.
inline IntVec canonical_vector(const IntVec& v) {
    IntVec c(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) c[i] = -abs_int(v[i]);
    std::sort(c.begin(), c.end());
    return c;
}

namespace detail {

template <class Fn>
inline void for_each_group_element(int n, Fn&& fn) {
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    const unsigned top = 1u << n;
    do {
        for (unsigned mask = 0; mask < top; ++mask) fn(perm, mask);
    } while (std::next_permutation(perm.begin(), perm.end()));
}

}  // namespace detail

// True iff sys (vectors in ascending lexicographic order) is the minimal
// sorted image of its orbit.
inline bool is_canonical_system(const std::vector<IntVec>& sys, int n) {
    if (sys.size() == 1) return sys[0] == canonical_vector(sys[0]);
    if (!symmetry_group_enumerable(n))
        throw InvalidInput("symmetry reduction for k >= 2 needs n <= 6");
    bool canonical = true;
    std::vector<IntVec> img(sys.size());
    detail::for_each_group_element(n, [&](const std::vector<int>& perm, unsigned mask) {
        if (!canonical) return;
        for (std::size_t t = 0; t < sys.size(); ++t)
            img[t] = apply_signed_perm(sys[t], perm, mask);
        std::sort(img.begin(), img.end());
        if (img < sys) canonical = false;
    });
    return canonical;
}

// Minimal orbit image (for tests and failure normalization).
inline std::vector<IntVec> canonical_form_system(const std::vector<IntVec>& sys, int n) {
    if (sys.size() == 1) return {canonical_vector(sys[0])};
    if (!symmetry_group_enumerable(n))
        throw InvalidInput("symmetry reduction for k >= 2 needs n <= 6");
    std::vector<IntVec> best = sys;
    std::sort(best.begin(), best.end());
    std::vector<IntVec> img(sys.size());
    detail::for_each_group_element(n, [&](const std::vector<int>& perm, unsigned mask) {
        for (std::size_t t = 0; t < sys.size(); ++t)
            img[t] = apply_signed_perm(sys[t], perm, mask);
        std::sort(img.begin(), img.end());
        if (img < best) best = img;
    });
    return best;
}

struct CanonicalEnumStats {
    std::uint64_t count = 0;
    bool complete = true;
};

// Orderly generation of all canonical p-orthonormal systems with
// 1 <= k <= k_max: each canonical prefix is extended with lexicographically
// larger orthogonal norm-p vectors, and an extension is kept iff the grown
// system is canonical. budget > 0 caps the number of systems visited.
template <class Fn>
inline CanonicalEnumStats enumerate_canonical_systems(int n, Int p, int k_max,
                                                      std::uint64_t budget, Fn&& fn) {
    if (k_max >= 2 && !symmetry_group_enumerable(n))
        throw InvalidInput("exhaustive enumeration with k_max >= 2 needs n <= 6");
    auto vecs = enumerate_norm_vectors(n, p);  // ascending lexicographic
    CanonicalEnumStats stats;
    std::vector<IntVec> sys;

    auto rec = [&](auto&& self, std::size_t lo) -> bool {
        if (static_cast<int>(sys.size()) == k_max) return true;
        for (std::size_t i = lo; i < vecs.size(); ++i) {
            const IntVec& v = vecs[i];
            bool orth = true;
            for (const auto& u : sys)
                if (inner(u, v) != 0) { orth = false; break; }
            if (!orth) continue;
            sys.push_back(v);
            if (is_canonical_system(sys, n)) {
                if (budget && stats.count >= budget) {
                    stats.complete = false;
                    sys.pop_back();
                    return false;
                }
                ++stats.count;
                fn(const_cast<const std::vector<IntVec>&>(sys));
                if (!self(self, i + 1)) {
                    sys.pop_back();
                    return false;
                }
            }
            sys.pop_back();
        }
        return true;
    };
    rec(rec, 0);
    return stats;
}

// ---------------------------------------------------------------------------
// Completion wrapper for any dimension
// ---------------------------------------------------------------------------

// n = 4 goes through the case dispatcher; other dimensions extend one vector
// at a time by bounded search. Returns the completed base or nothing.
inline std::optional<OrthoSystem> try_complete(const OrthoSystem& s) {
    if (s.n == 4) {
        try {
            return complete_to_base(s).base;
        } catch (const NoExtensionError&) {
            return std::nullopt;
        }
    }
    OrthoSystem cur = s;
    while (cur.k() < cur.n) {
        auto r = extend_search(cur);
        if (!r) return std::nullopt;
        cur.vectors.push_back(r->vector);
    }
    return cur;
}

// ---------------------------------------------------------------------------
// Range verification
// ---------------------------------------------------------------------------

enum class VerifyMode { Exhaustive, Random };

inline const char* mode_name(VerifyMode m) {
    return m == VerifyMode::Exhaustive ? "exhaustive" : "random";
}

struct PerPRecord {
    Int p = 0;
    std::uint64_t systems_checked = 0;
    bool all_extended = true;
    std::vector<OrthoSystem> failures;
    bool complete = true;
    std::string note;

    bool operator==(const PerPRecord& o) const = default;
};

struct VerificationReport {
    int n = 0;
    Int p_lo = 0, p_hi = 0;
    VerifyMode mode = VerifyMode::Exhaustive;
    std::uint64_t seed = 0;
    int jobs = 1;
    int k_max = 0;
    bool squares_only = false;
    std::uint64_t budget = 0;
    bool complete = true;
    std::vector<PerPRecord> per_p;
    double wall_time = 0.0;
};

struct VerifyOptions {
    int n = 4;
    Int p_lo = 1, p_hi = 1;
    VerifyMode mode = VerifyMode::Exhaustive;
    std::uint64_t seed = 0;
    int jobs = 1;
    int k_max = 0;  // 0 = n-1
    std::uint64_t budget = 0;  // 0 = mode default
    bool squares_only = false;
    std::function<bool(Int)> p_filter;  // optional extra filter
};

namespace detail {

inline std::uint64_t mix_seed(std::uint64_t seed, Int p) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (static_cast<std::uint64_t>(p) + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

inline PerPRecord verify_one_p(const VerifyOptions& o, Int p) {
    PerPRecord rec;
    rec.p = p;
    const int k_max = o.k_max > 0 ? std::min(o.k_max, o.n - 1) : o.n - 1;

    auto attempt = [&](const std::vector<IntVec>& sys) {
        ++rec.systems_checked;
        OrthoSystem s{o.n, p, SystemKind::POrthonormal, sys};
        if (!try_complete(s)) {
            rec.all_extended = false;
            rec.failures.push_back(std::move(s));
        }
    };

    if (o.mode == VerifyMode::Exhaustive) {
        if (k_max >= 2 && !symmetry_group_enumerable(o.n)) {
            rec.complete = false;
            rec.note = "skipped: exhaustive symmetry reduction with k >= 2 needs n <= 6 "
                       "(use a k_max of 1)";
            return rec;
        }
        const std::uint64_t budget = o.budget ? o.budget : 10'000'000ull;
        auto stats = enumerate_canonical_systems(o.n, p, k_max, budget, attempt);
        if (!stats.complete) {
            rec.complete = false;
            rec.note = "budget of " + std::to_string(budget) + " canonical systems exceeded";
        }
    } else {
        const std::uint64_t samples = o.budget ? o.budget : 100;
        std::mt19937_64 rng(mix_seed(o.seed, p));
        auto vecs = enumerate_norm_vectors(o.n, p);
        if (vecs.empty()) return rec;  // vacuously extended
        for (std::uint64_t t = 0; t < samples; ++t) {
            std::vector<IntVec> sys;
            int want = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(k_max));
            std::vector<IntVec> pool = vecs;
            for (int j = 0; j < want && !pool.empty(); ++j) {
                const IntVec pick = pool[rng() % pool.size()];
                sys.push_back(pick);
                std::vector<IntVec> next;
                for (auto& u : pool)
                    if (inner(u, pick) == 0) next.push_back(std::move(u));
                pool = std::move(next);
            }
            attempt(sys);
        }
    }
    return rec;
}

}  // namespace detail

// Distributes independent p values over jobs workers; records are merged in
// p order, so the output is identical for any worker count.
inline VerificationReport verify_range(const VerifyOptions& o) {
    if (o.n < 2) throw InvalidInput("verify_range requires n >= 2");
    if (o.p_lo > o.p_hi) throw InvalidInput("verify_range requires p_lo <= p_hi");
    if (o.p_lo < 1) throw InvalidInput("verify_range requires p_lo >= 1");
    if (o.jobs < 1) throw InvalidInput("verify_range requires jobs >= 1");

    const auto t0 = std::chrono::steady_clock::now();

    std::vector<Int> ps;
    for (Int p = o.p_lo; p <= o.p_hi; ++p) {
        if (o.squares_only && !is_square(p)) continue;
        if (o.p_filter && !o.p_filter(p)) continue;
        ps.push_back(p);
    }

    VerificationReport rep;
    rep.n = o.n;
    rep.p_lo = o.p_lo;
    rep.p_hi = o.p_hi;
    rep.mode = o.mode;
    rep.seed = o.seed;
    rep.jobs = o.jobs;
    rep.k_max = o.k_max > 0 ? std::min(o.k_max, o.n - 1) : o.n - 1;
    rep.squares_only = o.squares_only;
    rep.budget = o.budget;
    rep.per_p.resize(ps.size());

    const int workers = std::min<int>(o.jobs, std::max<std::size_t>(ps.size(), 1));
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(ps.size());

    auto work = [&]() {
        while (true) {
            std::size_t i = next.fetch_add(1);
            if (i >= ps.size()) return;
            try {
                rep.per_p[i] = detail::verify_one_p(o, ps[i]);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };

    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);

    for (const auto& r : rep.per_p)
        if (!r.complete) rep.complete = false;

    rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

// ---------------------------------------------------------------------------
// Counterexample constructions
// ---------------------------------------------------------------------------

// Every prime factor congruent to 3 mod 4 appears to an even power iff p is
// a sum of two integer squares.
inline bool is_sum_two_squares(Int p) {
    if (p < 0) return false;
    Int m = p;
    for (Int d = 2; d * d <= m; ++d) {
        int e = 0;
        while (m % d == 0) { m /= d; ++e; }
        if (d % 4 == 3 && e % 2 == 1) return false;
    }
    if (m > 1 && m % 4 == 3) return false;
    return true;
}

// The rows of the right-multiplication matrix of the quaternion
// x1 + x2 i + x3 j + x4 k: a p-orthonormal base of Z^4 for p = sum x_i^2.
inline std::vector<IntVec> quaternion_base(const std::array<Int, 4>& x) {
    return {
        {x[0], x[1], x[2], x[3]},
        {-x[1], x[0], -x[3], x[2]},
        {-x[2], x[3], x[0], -x[1]},
        {x[3], x[2], -x[1], -x[0]},
    };
}

enum class CounterexampleKind { C1, C2, C3, AllOnes };

inline const char* counterexample_kind_name(CounterexampleKind k) {
    switch (k) {
        case CounterexampleKind::C1: return "c1";
        case CounterexampleKind::C2: return "c2";
        case CounterexampleKind::C3: return "c3";
        case CounterexampleKind::AllOnes: return "all-ones";
    }
    return "?";
}

struct CounterexampleSpec {
    CounterexampleKind kind = CounterexampleKind::C1;
    int n = 0;
    Int p = 0;
    std::array<Int, 4> x{};  // quaternion block generator, p = sum x_i^2
    std::array<Int, 2> y{};  // rotation block generator, p = y1^2 + y2^2
    Int nbar = 0, pbar = 0;  // all-ones parameters: n = nbar^2, p = n * pbar^2
};

// Builds the block-diagonal non-extensible systems. Applicability:
//   c1: p not a square, n = 1 mod 4, n != 1            -> n-1 rows
//   c2: p not a sum of two squares, n = 2 mod 4, n != 2 -> n-2 rows
//   c3: p not a square but a sum of two squares, n = 3 mod 4 -> n-1 rows
//   all-ones: n = nbar^2 and p = n*pbar^2 both odd      -> 1 row
inline OrthoSystem build_counterexample(const CounterexampleSpec& spec) {
    auto fail = [](const std::string& cond) {
        throw InvalidInput("counterexample not applicable: " + cond);
    };

    OrthoSystem s;
    if (spec.kind == CounterexampleKind::AllOnes) {
        if (spec.nbar < 1 || spec.pbar < 1) fail("nbar and pbar must be >= 1");
        if (spec.nbar % 2 == 0) fail("n = nbar^2 must be odd");
        if (spec.pbar % 2 == 0) fail("p = n*pbar^2 must be odd");
        s.n = static_cast<int>(checked_mul(spec.nbar, spec.nbar));
        s.p = checked_mul(s.n, checked_mul(spec.pbar, spec.pbar));
        s.vectors.push_back(IntVec(s.n, spec.pbar));
        require_valid(s);
        return s;
    }

    Int px = 0;
    for (Int xi : spec.x) px = checked_add(px, checked_mul(xi, xi));
    if (px != spec.p) fail("p must equal x1^2+x2^2+x3^2+x4^2");

    int blocks = 0, tail = 0;
    bool with_rotation = false;
    switch (spec.kind) {
        case CounterexampleKind::C1:
            if (is_square(spec.p)) fail("p must not be a square");
            if (spec.n % 4 != 1 || spec.n == 1) fail("n must be 1 mod 4 and n != 1");
            blocks = (spec.n - 1) / 4;
            tail = 1;
            break;
        case CounterexampleKind::C2:
            if (is_sum_two_squares(spec.p)) fail("p must not be a sum of two squares");
            if (spec.n % 4 != 2 || spec.n == 2) fail("n must be 2 mod 4 and n != 2");
            blocks = (spec.n - 2) / 4;
            tail = 2;
            break;
        case CounterexampleKind::C3:
            if (is_square(spec.p)) fail("p must not be a square");
            if (!is_sum_two_squares(spec.p)) fail("p must be a sum of two squares");
            if (spec.n % 4 != 3) fail("n must be 3 mod 4");
            if (checked_add(checked_mul(spec.y[0], spec.y[0]),
                            checked_mul(spec.y[1], spec.y[1])) != spec.p)
                fail("p must equal y1^2+y2^2");
            blocks = (spec.n - 3) / 4;
            tail = 3;
            with_rotation = true;
            break;
        default:
            fail("unknown kind");
    }
    (void)tail;

    s.n = spec.n;
    s.p = spec.p;
    auto a_rows = quaternion_base(spec.x);
    for (int b = 0; b < blocks; ++b)
        for (const auto& r : a_rows) {
            IntVec v(s.n, 0);
            for (int j = 0; j < 4; ++j) v[4 * b + j] = r[j];
            s.vectors.push_back(std::move(v));
        }
    if (with_rotation) {
        IntVec u1(s.n, 0), u2(s.n, 0);
        u1[4 * blocks] = spec.y[0];
        u1[4 * blocks + 1] = spec.y[1];
        u2[4 * blocks] = -spec.y[1];
        u2[4 * blocks + 1] = spec.y[0];
        s.vectors.push_back(std::move(u1));
        s.vectors.push_back(std::move(u2));
    }
    require_valid(s);
    return s;
}

// ---------------------------------------------------------------------------
// Non-extendability confirmation
// ---------------------------------------------------------------------------

enum class Confirmation { NonExtendable, Extendable, Inconclusive };

inline const char* confirmation_name(Confirmation c) {
    switch (c) {
        case Confirmation::NonExtendable: return "non-extendable";
        case Confirmation::Extendable: return "extendable";
        case Confirmation::Inconclusive: return "inconclusive";
    }
    return "?";
}

struct ConfirmResult {
    Confirmation status = Confirmation::Inconclusive;
    std::optional<IntVec> witness;  // set when extendable
};

// Exhausts all norm-p vectors; NonExtendable is a proof at this (n, p).
// A node budget turns an unfinished sweep into Inconclusive, never a false
// answer.
inline ConfirmResult confirm_nonextendable(const OrthoSystem& s,
                                           std::uint64_t node_budget = 0) {
    require_valid(s);
    if (s.k() >= s.n) throw InvalidInput("confirm_nonextendable requires k < n");
    ConfirmResult out;
    auto outcome = for_each_norm_vector(
        s.n, s.p,
        [&](const IntVec& v) {
            for (const auto& u : s.vectors)
                if (inner(u, v) != 0) return true;
            out.witness = v;
            return false;
        },
        node_budget);
    if (out.witness)
        out.status = Confirmation::Extendable;
    else
        out.status = (outcome == EnumOutcome::BudgetStop) ? Confirmation::Inconclusive
                                                          : Confirmation::NonExtendable;
    return out;
}

// ---------------------------------------------------------------------------
// Orthogonal extensions (no norm constraint)
// ---------------------------------------------------------------------------

// Appends the complement basis and orthogonalizes it in place by integer
// Gram-Schmidt with denominator clearing; the result is an orthogonal base
// of Q^n made of integer vectors.
inline OrthoSystem orthogonal_extend(const OrthoSystem& s) {
    OrthoSystem in = s;
    in.kind = SystemKind::Orthogonal;
    require_valid(in);
    if (in.k() >= in.n) throw InvalidInput("orthogonal_extend requires k < n");

    auto cb = complement_basis(in);
    std::vector<IntVec> ortho;
    for (const auto& b : cb.vectors) {
        IntVec w = b;
        for (const auto& u : ortho) {
            Int t = inner(w, u);
            if (t == 0) continue;
            Int nu = norm(u);
            IntVec nw(w.size());
            for (std::size_t i = 0; i < w.size(); ++i)
                nw[i] = checked_sub(checked_mul(nu, w[i]), checked_mul(t, u[i]));
            w = primitive_part(nw);
        }
        w = primitive_part(w);
        if (is_zero_vec(w))
            throw TheoremViolation("orthogonalization collapsed an independent vector");
        ortho.push_back(std::move(w));
    }

    OrthoSystem out = in;
    for (auto& w : ortho) out.vectors.push_back(std::move(w));
    out.p = system_norm(out);
    require_valid(out);
    return out;
}

struct MinNormResult {
    OrthoSystem base;
    Int norm = 0;
    bool optimal = false;
};

// Searches orthogonal completions minimizing the maximum vector norm:
// enumerate complement-lattice vectors up to the greedy bound in increasing
// norm, then look for n-k pairwise-orthogonal ones, raising the norm cap
// until a completion appears. The first cap that succeeds is optimal because
// every completion vector lives in the complement lattice. Budget counts
// search nodes; exhausting it returns the greedy base marked unproven.
inline MinNormResult min_norm_extension(const OrthoSystem& s, std::uint64_t budget = 0) {
    OrthoSystem greedy = orthogonal_extend(s);
    const Int greedy_norm = system_norm(greedy);
    const Int base_floor = system_norm(OrthoSystem{s.n, s.p, SystemKind::Orthogonal, s.vectors});
    if (budget == 0) budget = 2'000'000;

    OrthoSystem in = s;
    in.kind = SystemKind::Orthogonal;
    auto cb = complement_basis(in).vectors;
    detail::size_reduce(cb);
    const int m = static_cast<int>(cb.size());
    Mat g = gram_matrix(cb);

    // All complement vectors with norm <= greedy bound, one per +/- pair.
    std::vector<std::pair<Int, IntVec>> cand;
    std::uint64_t nodes = 0;
    bool complete = true;
    auto bounds = detail::coefficient_bounds(g, greedy_norm);
    std::vector<Int> coeff(m, 0);
    auto walk = [&](auto&& self, int i) -> bool {
        if (++nodes > budget) { complete = false; return false; }
        if (i == m) {
            IntVec v(s.n, 0);
            for (int t = 0; t < m; ++t)
                for (int j = 0; j < s.n; ++j)
                    v[j] = checked_add(v[j], checked_mul(coeff[t], cb[t][j]));
            if (is_zero_vec(v)) return true;
            for (Int c : v) {
                if (c > 0) break;
                if (c < 0) return true;  // keep only the sign-canonical one
            }
            Int nv = norm(v);
            if (nv <= greedy_norm) cand.emplace_back(nv, std::move(v));
            return true;
        }
        for (Int c = -bounds[i]; c <= bounds[i]; ++c) {
            coeff[i] = c;
            if (!self(self, i + 1)) return false;
        }
        coeff[i] = 0;
        return true;
    };
    walk(walk, 0);

    if (!complete) return {greedy, greedy_norm, false};
    std::sort(cand.begin(), cand.end());

    std::vector<Int> caps;
    for (const auto& [nv, v] : cand)
        if (caps.empty() || caps.back() != nv) caps.push_back(nv);

    std::vector<const IntVec*> chosen;
    auto dfs = [&](auto&& self, std::size_t lo, std::size_t limit) -> bool {
        if (static_cast<int>(chosen.size()) == m) return true;
        for (std::size_t i = lo; i < limit; ++i) {
            if (limit - i < static_cast<std::size_t>(m) - chosen.size()) break;
            if (++nodes > budget) return false;
            const IntVec& v = cand[i].second;
            bool ok = true;
            for (const auto* u : chosen)
                if (inner(*u, v) != 0) { ok = false; break; }
            if (!ok) continue;
            chosen.push_back(&v);
            if (self(self, i + 1, limit)) return true;
            chosen.pop_back();
        }
        return false;
    };

    for (Int cap : caps) {
        std::size_t limit = 0;
        while (limit < cand.size() && cand[limit].first <= cap) ++limit;
        chosen.clear();
        if (dfs(dfs, 0, limit)) {
            OrthoSystem best = in;
            for (const auto* v : chosen) best.vectors.push_back(*v);
            best.p = system_norm(best);
            require_valid(best);
            return {best, std::max(base_floor, cap), true};
        }
        if (nodes > budget) return {greedy, greedy_norm, false};
    }
    // The greedy completion's own vectors are candidates, so some cap must
    // succeed; reaching here means the budget ran out mid-sweep.
    return {greedy, greedy_norm, false};
}

}  // namespace orthobase
