#include <algorithm>

#include "flhodge/flmod.hpp"

namespace flh {

ZeroLevel zero_level(const FLModule& M) {
    const ContextPtr& ctx = M.context();
    const auto f = static_cast<std::size_t>(ctx->degree());
    const std::size_t rows = M.rank() * f;
    std::vector<ZVec> gens, images;
    if (M.highest_jump() >= 0) {
        const KMat G0 = M.level_generators(0);
        const UnramifiedScalar w = UnramifiedScalar::generator(ctx);
        for (const auto& g : G0.columns()) {
            UnramifiedScalar w_power = UnramifiedScalar::one(ctx);
            for (std::size_t j = 0; j < f; ++j) {
                KVec x;
                for (const auto& c : g) x.push_back(c * w_power);
                x = M.reduce(x);
                const KVec phi_x = M.phi(0, x);
                KVec diff;
                for (std::size_t k = 0; k < x.size(); ++k) diff.push_back(x[k] - phi_x[k]);
                gens.push_back(restrict_vector(x));
                images.push_back(restrict_vector(M.reduce(diff)));
                w_power = w_power * w;
            }
        }
    }
    return {ZMat::from_columns(ctx, rows, gens), ZMat::from_columns(ctx, rows, images),
            restrict_scalars({M.relations(), 0})};
}

namespace {

void check_margin(const ZModule& H, const FLModule& M, int margin) {
    if (!M.has_free_part()) return;
    const int N = M.context()->precision();
    for (int e : H.exponents) {
        if (e < N && e >= N - margin && e > M.max_torsion_exponent()) {
            throw Error(ErrorCode::InsufficientPrecision,
                        "an elementary divisor p^" + std::to_string(e) + " lies within the margin of the precision");
        }
    }
}

ZModule h0_raw(const ZeroLevel& z) {
    const std::size_t k = z.generators.cols();
    const auto ker = kernel(hstack(z.one_minus_phi, z.relations));
    std::vector<ZVec> xs;
    for (const auto& g : ker.generators) xs.push_back(z.generators * ZVec(g.begin(), g.begin() + static_cast<std::ptrdiff_t>(k)));
    return image_in_quotient(ZMat::from_columns(z.relations.context(), z.relations.rows(), xs), z.relations);
}

ZModule h1_raw(const ZeroLevel& z) { return cokernel(hstack(z.one_minus_phi, z.relations)); }

}  // namespace

ZModule h0(const FLModule& M, int margin) {
    ZModule H = h0_raw(zero_level(M));
    check_margin(H, M, margin);
    if (!M.is_free()) return H;
    // on a lattice the kernel is saturated; shorter classes only come from truncating at p^N
    ZModule out;
    out.precision = H.precision;
    for (std::size_t k = 0; k < H.exponents.size(); ++k) {
        if (H.exponents[k] < H.precision) continue;
        out.exponents.push_back(H.exponents[k]);
        out.generators.push_back(H.generators[k]);
    }
    return out;
}

ZModule h0_truncated(const FLModule& M) { return h0_raw(zero_level(M)); }

ZModule h1(const FLModule& M, int margin) {
    ZModule H = h1_raw(zero_level(M));
    check_margin(H, M, margin);
    return H;
}

bool SixTermReport::all_exact() const {
    return std::all_of(exact.begin(), exact.end(), [](bool b) { return b; });
}

namespace {

int image_length(const ZMat& map, const std::vector<ZVec>& gens, const ZMat& rel) {
    if (gens.empty()) return 0;
    std::vector<ZVec> imgs;
    for (const auto& g : gens) imgs.push_back(map * g);
    return image_in_quotient(ZMat::from_columns(rel.context(), rel.rows(), imgs), rel).length();
}

int image_length(const std::vector<ZVec>& vecs, const ZMat& rel) {
    if (vecs.empty()) return 0;
    return image_in_quotient(ZMat::from_columns(rel.context(), rel.rows(), vecs), rel).length();
}

ZVec head(const ZVec& v, std::size_t n) { return {v.begin(), v.begin() + static_cast<std::ptrdiff_t>(n)}; }

}  // namespace

SixTermReport connecting_delta(const ShortExactSequence& ses) {
    const FLMorphism& inc = ses.inclusion;
    const FLMorphism& proj = ses.projection;
    if (auto v = check_morphism(inc)) throw Error(ErrorCode::NotExact, "inclusion is not a morphism: " + v->message);
    if (auto v = check_morphism(proj)) throw Error(ErrorCode::NotExact, "projection is not a morphism: " + v->message);
    const FLModule& Mp = inc.source;
    const FLModule& M = inc.target;
    const FLModule& Mpp = proj.target;
    if (kernel_flmod(inc).module.rank() != 0) throw Error(ErrorCode::NotExact, "first map is not injective");
    if (cokernel_flmod(proj).module.rank() != 0) throw Error(ErrorCode::NotExact, "second map is not surjective");
    const KMat comp = proj.matrix * inc.matrix;
    for (std::size_t j = 0; j < comp.cols(); ++j) {
        const KVec c = Mpp.reduce(comp.column(j));
        if (!std::all_of(c.begin(), c.end(), [](const UnramifiedScalar& x) { return x.is_zero(); })) {
            throw Error(ErrorCode::NotExact, "composite of the two maps is not zero");
        }
    }
    const auto ker_len = [](const FLModule& X) {
        int s = 0;
        for (int e : X.exponents()) s += e;
        return s;
    };
    if (ker_len(kernel_flmod(proj).module) != ker_len(Mp)) {
        throw Error(ErrorCode::NotExact, "image of the first map is not the kernel of the second");
    }

    const ZeroLevel zp = zero_level(Mp), z = zero_level(M), zpp = zero_level(Mpp);
    const ZMat iZ = restrict_scalars({inc.matrix, 0});
    const ZMat pZ = restrict_scalars({proj.matrix, 0});
    const ZModule H0p = h0_raw(zp), H0 = h0_raw(z), H0pp = h0_raw(zpp);
    const ZModule H1p = h1_raw(zp), H1 = h1_raw(z), H1pp = h1_raw(zpp);
    const ZMat Bp = hstack(zp.one_minus_phi, zp.relations);
    const ZMat B = hstack(z.one_minus_phi, z.relations);
    const ZMat Bpp = hstack(zpp.one_minus_phi, zpp.relations);

    const ZMat lift_system = hstack(pZ * z.generators, zpp.relations);
    const ZMat pull_system = hstack(iZ, z.relations);
    auto delta = [&](const ZVec& x) {
        const auto c = solve(lift_system, x);
        if (!c) throw Error(ErrorCode::LiftFailure, "no preimage in M^0");
        const ZVec w = z.one_minus_phi * head(*c, z.generators.cols());
        const auto u = solve(pull_system, w);
        if (!u) throw Error(ErrorCode::NotExact, "(1 - phi^0) of the lift does not come from the submodule");
        return head(*u, Mp.rank() * static_cast<std::size_t>(Mp.context()->degree()));
    };

    SixTermReport rep;
    rep.lengths = {H0p.length(), H0.length(), H0pp.length(), H1p.length(), H1.length(), H1pp.length()};
    for (const auto& x : H0pp.generators) rep.delta_images.push_back(delta(x));
    rep.delta_zero = std::all_of(rep.delta_images.begin(), rep.delta_images.end(),
                                 [&](const ZVec& u) { return in_span(Bp, u); });

    const int im_a0 = image_length(iZ, H0p.generators, z.relations);
    const int im_b0 = image_length(pZ, H0.generators, zpp.relations);
    const int im_d = image_length(rep.delta_images, Bp);
    const int im_a1 = image_length(iZ, H1p.generators, B);
    const int im_b1 = image_length(pZ, H1.generators, Bpp);

    const ZMat piZ = pZ * iZ;
    bool z1 = true, z2 = true, z3 = true, z4 = true;
    for (const auto& g : H0p.generators) z1 = z1 && in_span(zpp.relations, piZ * g);
    for (const auto& h : H0.generators) z2 = z2 && in_span(Bp, delta(pZ * h));
    for (const auto& u : rep.delta_images) z3 = z3 && in_span(B, iZ * u);
    for (const auto& g : H1p.generators) z4 = z4 && in_span(Bpp, piZ * g);

    const auto& L = rep.lengths;
    rep.exact = {im_a0 == L[0],
                 z1 && im_a0 == L[1] - im_b0,
                 z2 && im_b0 == L[2] - im_d,
                 z3 && im_d == L[3] - im_a1,
                 z4 && im_a1 == L[4] - im_b1,
                 im_b1 == L[5]};
    return rep;
}

}  // namespace flh
