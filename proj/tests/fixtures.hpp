#pragma once

// Small builders shared by the unit tests and the acceptance binary.

#include <random>
#include <vector>

#include "flhodge/flmod.hpp"

namespace flh::testing {

inline KMat kmat(const ContextPtr& ctx, const std::vector<std::vector<Int>>& rows) {
    KMat m(ctx, rows.size(), rows.empty() ? 0 : rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = UnramifiedScalar::from_int(ctx, rows[i][j]);
    }
    return m;
}

inline KMat column(const ContextPtr& ctx, const std::vector<Int>& v) {
    KMat m(ctx, v.size(), 1);
    for (std::size_t i = 0; i < v.size(); ++i) m(i, 0) = UnramifiedScalar::from_int(ctx, v[i]);
    return m;
}

inline UnramifiedScalar random_scalar(const ContextPtr& ctx, std::mt19937_64& rng) {
    std::vector<Int> c(static_cast<std::size_t>(ctx->degree()));
    for (auto& x : c) x = static_cast<Int>(rng() % static_cast<std::uint64_t>(ctx->modulus_value()));
    return {ctx, c};
}

inline UnramifiedScalar random_unit(const ContextPtr& ctx, std::mt19937_64& rng) {
    for (;;) {
        auto x = random_scalar(ctx, rng);
        if (x.is_unit()) return x;
    }
}

/// Lower times upper unitriangular, with a random unit diagonal.
inline KMat random_unimodular(const ContextPtr& ctx, std::size_t r, std::mt19937_64& rng) {
    KMat L = KMat::identity(ctx, r), U = KMat::identity(ctx, r);
    for (std::size_t i = 0; i < r; ++i) {
        U(i, i) = random_unit(ctx, rng);
        for (std::size_t j = 0; j < i; ++j) {
            L(i, j) = random_scalar(ctx, rng);
            U(j, i) = random_scalar(ctx, rng);
        }
    }
    return L * U;
}

/// Rank-1 free module, single jump at `level`, phi^level(e) = u e.
inline FLModule rank_one(const ContextPtr& ctx, int level, const UnramifiedScalar& u) {
    KMat phi(ctx, 1, 1);
    phi(0, 0) = u;
    return FLModule::free_single_jump(ctx, level, phi);
}

inline FLModule rank_one(const ContextPtr& ctx, int level, Int u) {
    return rank_one(ctx, level, UnramifiedScalar::from_int(ctx, u));
}

/// Random module with nonnegative phi level, mixed torsion, one or two jumps.
inline FLModule random_fl_module(const ContextPtr& ctx, std::size_t r, std::mt19937_64& rng) {
    const int N = ctx->precision();
    std::vector<int> e(r);
    for (auto& x : e) x = (rng() % 3 == 0) ? N : 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(N));
    KMat phi(ctx, r, r);
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < r; ++j) {
            phi(i, j) = reduce_mod(random_scalar(ctx, rng).shift_up(std::max(0, e[i] - e[j])), e[i]);
        }
    }
    const int a = static_cast<int>(rng() % 2);
    std::vector<FiltrationStep> steps{{a, KMat::identity(ctx, r)}};
    if (rng() % 2 == 0) {
        for (std::size_t i = 0; i < r; ++i) phi(i, 0) = reduce_mod(phi(i, 0).shift_up(1), e[i]);
        KMat g(ctx, r, 1);
        g(0, 0) = UnramifiedScalar::one(ctx);
        steps.push_back({a + 1, g});
    }
    return {ctx, e, steps, a, phi};
}

}  // namespace flh::testing
