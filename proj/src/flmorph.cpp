#include <algorithm>
#include <set>

#include "flhodge/flmod.hpp"

namespace flh {

namespace {

bool all_zero(const KVec& v) {
    return std::all_of(v.begin(), v.end(), [](const UnramifiedScalar& x) { return x.is_zero(); });
}

KVec unit(const ContextPtr& ctx, std::size_t r, std::size_t k) {
    KVec v(r, UnramifiedScalar::zero(ctx));
    v[k] = UnramifiedScalar::one(ctx);
    return v;
}

KVec first_coordinates(const KVec& v, std::size_t n) { return {v.begin(), v.begin() + static_cast<std::ptrdiff_t>(n)}; }

}  // namespace

std::optional<Violation> check_morphism(const FLMorphism& f) {
    const FLModule& S = f.source;
    const FLModule& T = f.target;
    const ContextPtr& ctx = S.context();
    const KMat& F = f.matrix;
    if (F.rows() != T.rank() || F.cols() != S.rank()) {
        return Violation{ViolationKind::Shape, "morphism matrix has the wrong shape", {}};
    }
    for (std::size_t j = 0; j < S.rank(); ++j) {
        if (S.exponents()[j] >= ctx->precision()) continue;
        if (!all_zero(T.reduce(scaled_up(F.column(j), S.exponents()[j])))) {
            return Violation{ViolationKind::Relations, "the map does not respect the relations of the source",
                             unit(ctx, S.rank(), j)};
        }
    }
    std::set<int> jumps;
    for (const auto& s : S.filtration()) jumps.insert(s.jump);
    for (const auto& s : T.filtration()) jumps.insert(s.jump);
    const KMat RT = T.relations();
    for (int i : jumps) {
        const KMat target_level = hstack(T.level_generators(i), RT);
        for (const auto& g : S.level_generators(i).columns()) {
            if (!in_span(target_level, F * g)) {
                return Violation{ViolationKind::Chain, "f(M^" + std::to_string(i) + ") is not contained in N^" +
                                                           std::to_string(i),
                                 g};
            }
        }
    }
    const int c = std::min(S.phi_level(), T.phi_level());
    const KMat lhs = (F * S.phi_matrix()).scaled_up(S.phi_level() - c);
    const KMat rhs = (T.phi_matrix() * F.frobenius(1)).scaled_up(T.phi_level() - c);
    const KMat diff = lhs - rhs;
    for (std::size_t j = 0; j < S.rank(); ++j) {
        if (!all_zero(T.reduce(diff.column(j)))) {
            return Violation{ViolationKind::DividedFrobenius, "f does not commute with phi^" + std::to_string(c),
                             unit(ctx, S.rank(), j)};
        }
    }
    return std::nullopt;
}

InducedModule kernel_flmod(const FLMorphism& f) {
    if (auto v = check_morphism(f)) throw Error(ErrorCode::InvalidInput, "not a morphism: " + v->message);
    const FLModule& S = f.source;
    const ContextPtr& ctx = S.context();
    const std::size_t rs = S.rank();
    const KMat RS = S.relations();

    const auto ker = kernel(hstack(f.matrix, f.target.relations()));
    std::vector<KVec> projected;
    for (const auto& g : ker.generators) projected.push_back(first_coordinates(g, rs));
    const auto sub = image_in_quotient(KMat::from_columns(ctx, rs, projected), RS);
    const std::size_t s = sub.exponents.size();
    const KMat Kg = KMat::from_columns(ctx, rs, sub.generators);

    auto reduce_rows = [&](KMat m) {
        for (std::size_t i = 0; i < m.rows(); ++i) {
            for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = reduce_mod(m(i, j), sub.exponents[i]);
        }
        return m;
    };
    std::vector<FiltrationStep> steps;
    for (const auto& step : S.filtration()) {
        const auto meet = kernel(hstack(hstack(Kg, step.generators), RS));
        std::vector<KVec> gens;
        for (const auto& g : meet.generators) gens.push_back(first_coordinates(g, s));
        steps.push_back({step.jump, reduce_rows(KMat::from_columns(ctx, s, gens))});
    }
    KMat phi(ctx, s, s);
    const KMat KR = hstack(Kg, RS);
    for (std::size_t j = 0; j < s; ++j) {
        const auto sol = solve(KR, S.phi_low(Kg.column(j)));
        if (!sol) throw Error(ErrorCode::PrecisionLoss, "phi does not preserve the kernel at this precision");
        for (std::size_t i = 0; i < s; ++i) phi(i, j) = (*sol)[i];
    }
    FLModule K(ctx, sub.exponents, std::move(steps), S.phi_level(), reduce_rows(phi));
    return {std::move(K), Kg};
}

InducedModule cokernel_flmod(const FLMorphism& f) {
    if (auto v = check_morphism(f)) throw Error(ErrorCode::InvalidInput, "not a morphism: " + v->message);
    const FLModule& T = f.target;
    const ContextPtr& ctx = T.context();
    const int N = ctx->precision();
    const std::size_t rt = T.rank();
    const auto nf = smith_normal_form(hstack(f.matrix, T.relations()));
    std::vector<std::size_t> keep;
    std::vector<int> exps;
    for (std::size_t i = 0; i < rt; ++i) {
        const int d = i < nf.exponents.size() ? nf.exponents[i] : N;
        if (d > 0) {
            keep.push_back(i);
            exps.push_back(d);
        }
    }
    const std::size_t c = keep.size();
    KMat P(ctx, c, rt);
    for (std::size_t t = 0; t < c; ++t) {
        for (std::size_t j = 0; j < rt; ++j) P(t, j) = nf.U(keep[t], j);
    }
    auto reduce_rows = [&](KMat m) {
        for (std::size_t i = 0; i < m.rows(); ++i) {
            for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = reduce_mod(m(i, j), exps[i]);
        }
        return m;
    };
    std::vector<FiltrationStep> steps;
    for (const auto& step : T.filtration()) steps.push_back({step.jump, reduce_rows(P * step.generators)});
    std::vector<KVec> phi_cols;
    for (std::size_t t = 0; t < c; ++t) phi_cols.push_back(P * T.phi_low(nf.U_inverse.column(keep[t])));
    const KMat phi = reduce_rows(KMat::from_columns(ctx, c, phi_cols));
    return {FLModule(ctx, exps, std::move(steps), T.phi_level(), phi), P};
}

}  // namespace flh
