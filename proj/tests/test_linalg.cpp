#include <random>
#include <set>

#include "doctest.h"
#include "flhodge/linalg.hpp"

using namespace flh;

namespace {

ZMat random_zmat(const ContextPtr& ctx, std::size_t r, std::size_t c, std::mt19937_64& rng) {
    std::uniform_int_distribution<Int> dist(0, ctx->modulus_value() - 1);
    ZMat m(ctx, r, c);
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < c; ++j) m(i, j) = PadicScalar(ctx, dist(rng));
    }
    return m;
}

KMat random_kmat(const ContextPtr& ctx, std::size_t r, std::size_t c, std::mt19937_64& rng) {
    std::uniform_int_distribution<Int> dist(0, ctx->modulus_value() - 1);
    KMat m(ctx, r, c);
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < c; ++j) {
            std::vector<Int> co(static_cast<std::size_t>(ctx->degree()));
            for (auto& x : co) x = dist(rng);
            m(i, j) = UnramifiedScalar(ctx, co);
        }
    }
    return m;
}

ZMat zmat(const ContextPtr& ctx, std::vector<std::vector<Int>> rows) {
    ZMat m(ctx, rows.size(), rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = PadicScalar(ctx, rows[i][j]);
    }
    return m;
}

// All vectors of (Z/p^N)^n.
std::vector<Vec<PadicScalar>> all_vectors(const ContextPtr& ctx, std::size_t n) {
    std::vector<Vec<PadicScalar>> out;
    const Int q = ctx->modulus_value();
    Int total = 1;
    for (std::size_t i = 0; i < n; ++i) total *= q;
    for (Int code = 0; code < total; ++code) {
        Vec<PadicScalar> v;
        Int rest = code;
        for (std::size_t i = 0; i < n; ++i) {
            v.emplace_back(ctx, rest % q);
            rest /= q;
        }
        out.push_back(v);
    }
    return out;
}

std::vector<Int> values(const Vec<PadicScalar>& v) {
    std::vector<Int> out;
    for (const auto& x : v) out.push_back(x.value());
    return out;
}

Int power(Int b, int e) {
    Int r = 1;
    while (e-- > 0) r *= b;
    return r;
}

}  // namespace

TEST_CASE("normal form examples") {
    auto ctx = Context::make(2, 3, 1);
    CHECK(smith_normal_form(ZMat::identity(ctx, 3)).exponents == std::vector<int>{0, 0, 0});
    CHECK(smith_normal_form(zmat(ctx, {{1, 0}, {0, 2}})).exponents == std::vector<int>{0, 1});
    CHECK(smith_normal_form(zmat(ctx, {{2, 1}, {0, 2}})).exponents == std::vector<int>{0, 2});
    CHECK(smith_normal_form(ZMat(ctx, 2, 3)).exponents == std::vector<int>{3, 3});
}

TEST_CASE("normal form reconstructs and has unit transforms") {
    std::mt19937_64 rng(11);
    for (auto [p, N] : {std::pair{2, 3}, {3, 4}}) {
        auto ctx = Context::make(p, N, 1);
        for (int t = 0; t < 50; ++t) {
            const std::size_t r = 1 + rng() % 4, c = 1 + rng() % 4;
            ZMat A = random_zmat(ctx, r, c, rng);
            if (t % 3 == 0) A = A.scaled_up(1);
            auto nf = smith_normal_form(A);
            CHECK(nf.U * A * nf.V == nf.D);
            CHECK(nf.U * nf.U_inverse == ZMat::identity(ctx, r));
            CHECK(determinant_valuation(nf.V) == 0);
            CHECK(std::is_sorted(nf.exponents.begin(), nf.exponents.end()));
        }
    }
}

TEST_CASE("normal form over O_K reconstructs") {
    std::mt19937_64 rng(5);
    auto ctx = Context::make(3, 3, 2);
    for (int t = 0; t < 30; ++t) {
        KMat A = random_kmat(ctx, 3, 2, rng);
        auto nf = smith_normal_form(A);
        CHECK(nf.U * A * nf.V == nf.D);
    }
}

TEST_CASE("kernel and cokernel of trivial maps") {
    auto ctx = Context::make(2, 3, 1);
    ZMat zero(ctx, 2, 2);
    CHECK(kernel(zero).exponents == std::vector<int>{3, 3});
    CHECK(cokernel(zero).exponents == std::vector<int>{3, 3});
    CHECK(kernel(ZMat::identity(ctx, 2)).is_zero());
    CHECK(cokernel(ZMat::identity(ctx, 2)).is_zero());
}

TEST_CASE("cokernel cardinality matches brute-force image enumeration (p=2, N=2)") {
    std::mt19937_64 rng(3);
    auto ctx = Context::make(2, 2, 1);
    const auto domain = all_vectors(ctx, 3);
    for (int t = 0; t < 100; ++t) {
        ZMat A = random_zmat(ctx, 3, 3, rng);
        std::set<std::vector<Int>> img;
        std::size_t ker = 0;
        for (const auto& v : domain) {
            auto w = A * v;
            img.insert(values(w));
            bool zero = std::all_of(w.begin(), w.end(), [](const PadicScalar& x) { return x.is_zero(); });
            ker += zero ? 1 : 0;
        }
        const Int coker_card = 64 / static_cast<Int>(img.size());
        CHECK(power(2, cokernel(A).length()) == coker_card);
        CHECK(power(2, kernel(A).length()) == static_cast<Int>(ker));
        CHECK(static_cast<Int>(ker * img.size()) == 64);
    }
}

TEST_CASE("solve and in_span") {
    auto ctx = Context::make(3, 4, 1);
    ZMat A = zmat(ctx, {{3, 0}, {0, 9}});
    CHECK(in_span(A, Vec<PadicScalar>{PadicScalar(ctx, 6), PadicScalar(ctx, 18)}));
    CHECK_FALSE(in_span(A, Vec<PadicScalar>{PadicScalar(ctx, 1), PadicScalar(ctx, 0)}));
    auto x = solve(A, Vec<PadicScalar>{PadicScalar(ctx, 6), PadicScalar(ctx, 18)});
    REQUIRE(x);
    CHECK(A * *x == Vec<PadicScalar>{PadicScalar(ctx, 6), PadicScalar(ctx, 18)});
}

TEST_CASE("restrict_scalars examples") {
    auto c1 = Context::make(3, 4, 1);
    KMat a(c1, 1, 1);
    a(0, 0) = UnramifiedScalar::from_int(c1, 5);
    CHECK(restrict_scalars({a, 0})(0, 0).value() == 5);

    // f = 2, p = 3: modulus X^2 + 1, so w * w = -1.
    auto ctx = Context::make(3, 4, 2);
    KMat w(ctx, 1, 1);
    w(0, 0) = UnramifiedScalar::generator(ctx);
    ZMat m = restrict_scalars({w, 0});
    CHECK(m == zmat(ctx, {{0, 80}, {1, 0}}));

    KMat one = KMat::identity(ctx, 1);
    ZMat sigma = restrict_scalars({one, 1});
    auto fixed = kernel(sigma - ZMat::identity(ctx, 2));
    REQUIRE(fixed.exponents == std::vector<int>{4});
    CHECK(fixed.generators[0][1].is_zero());
}

TEST_CASE("restrict_scalars is functorial") {
    std::mt19937_64 rng(17);
    auto ctx = Context::make(3, 3, 2);
    for (int t = 0; t < 50; ++t) {
        SemilinearMap l1{random_kmat(ctx, 2, 2, rng), static_cast<int>(rng() % 3)};
        SemilinearMap l2{random_kmat(ctx, 2, 2, rng), static_cast<int>(rng() % 3)};
        CHECK(restrict_scalars(compose(l1, l2)) == restrict_scalars(l1) * restrict_scalars(l2));
    }
}

TEST_CASE("relative index examples and additivity") {
    auto ctx = Context::make(3, 10, 1);
    ScaledBasis<PadicScalar> b1{ZMat::identity(ctx, 2), 0};
    ScaledBasis<PadicScalar> b2{ZMat::identity(ctx, 2).scaled_up(1), 0};
    CHECK(relative_index(b1, b2) == 2);
    CHECK(relative_index(b1, b1) == 0);
    CHECK(relative_index(ScaledBasis<PadicScalar>{ZMat::identity(ctx, 1), -1},
                         ScaledBasis<PadicScalar>{ZMat::identity(ctx, 1), 0}) == 1);

    std::mt19937_64 rng(23);
    for (int t = 0; t < 30; ++t) {
        auto l1 = ScaledBasis<PadicScalar>{random_zmat(ctx, 2, 2, rng), static_cast<int>(rng() % 3) - 1};
        auto l2 = ScaledBasis<PadicScalar>{random_zmat(ctx, 2, 2, rng), static_cast<int>(rng() % 3) - 1};
        auto l3 = ScaledBasis<PadicScalar>{random_zmat(ctx, 2, 2, rng), 0};
        try {
            CHECK(relative_index(l1, l2) + relative_index(l2, l3) == relative_index(l1, l3));
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::InsufficientPrecision);
        }
    }
}

TEST_CASE("relative index detects different spans") {
    auto ctx = Context::make(3, 10, 1);
    ScaledBasis<PadicScalar> b1{zmat(ctx, {{1}, {0}}), 0};
    ScaledBasis<PadicScalar> b2{zmat(ctx, {{0}, {1}}), 0};
    CHECK_THROWS_AS(relative_index(b1, b2), Error);
}
