#include "flhodge/bkmeasure.hpp"

#include <algorithm>

namespace flh {

std::vector<PadicScalar> EulerFactor::coefficients_at_scale(int s) const {
    if (s > x_scale) throw Error(ErrorCode::InvalidInput, "cannot raise the scale of an Euler factor");
    std::vector<PadicScalar> out;
    for (std::size_t k = 0; k < q.size(); ++k) out.push_back(q[k].shift_up((x_scale - s) * static_cast<int>(k)));
    return out;
}

std::string EulerFactor::to_string() const {
    std::string s;
    for (std::size_t k = 0; k < q.size(); ++k) {
        if (k) s += " + ";
        s += q[k].to_string();
        if (k) s += "*(p^" + std::to_string(x_scale) + " X)^" + std::to_string(k);
    }
    return s;
}

EulerFactor euler_factor(const FilteredPhiModule& D, int margin) {
    const ContextPtr& ctx = D.context();
    const int N = ctx->precision();
    if (determinant_valuation(D.matrix()) >= N - margin) {
        throw Error(ErrorCode::SingularPhi, "phi is not invertible at this precision");
    }
    const auto e = principal_minor_sums(D.linearization());
    EulerFactor P;
    P.x_scale = ctx->degree() * D.phi_scale();
    P.precision = N;
    for (std::size_t k = 0; k < e.size(); ++k) {
        UnramifiedScalar c = (k % 2 == 0) ? e[k] : -e[k];
        for (std::size_t j = 1; j < c.coeffs().size(); ++j) {
            const UnramifiedScalar part = UnramifiedScalar::from_int(ctx, c.coeff(j));
            if (!part.is_zero() && part.valuation() < N - margin) {
                throw Error(ErrorCode::NonRationalCoefficients,
                            "coefficient of X^" + std::to_string(k) + " is not fixed by Frobenius");
            }
        }
        P.q.emplace_back(ctx, c.coeff(0));
    }
    return P;
}

EulerFactor euler_factor(const FLModule& M, int margin) {
    return euler_factor(FilteredPhiModule::from_fl_module(M), margin);
}

EulerFactor operator*(const EulerFactor& a, const EulerFactor& b) {
    const int s = std::min(a.x_scale, b.x_scale);
    const auto qa = a.coefficients_at_scale(s), qb = b.coefficients_at_scale(s);
    const ContextPtr& ctx = qa.front().context();
    EulerFactor P;
    P.x_scale = s;
    P.precision = std::min(a.precision, b.precision);
    P.q.assign(qa.size() + qb.size() - 1, PadicScalar::zero(ctx));
    for (std::size_t i = 0; i < qa.size(); ++i) {
        for (std::size_t j = 0; j < qb.size(); ++j) P.q[i + j] += qa[i] * qb[j];
    }
    return P;
}

bool same_polynomial(const EulerFactor& a, const EulerFactor& b) {
    const int s = std::min(a.x_scale, b.x_scale);
    auto qa = a.coefficients_at_scale(s), qb = b.coefficients_at_scale(s);
    const ContextPtr& ctx = qa.front().context();
    const std::size_t n = std::max(qa.size(), qb.size());
    qa.resize(n, PadicScalar::zero(ctx));
    qb.resize(n, PadicScalar::zero(ctx));
    return qa == qb;
}

int value_at_one_valuation(const EulerFactor& P, int margin) {
    const int s = P.x_scale;
    const int r = static_cast<int>(P.degree());
    const ContextPtr& ctx = P.q.front().context();
    // p^{-s r} P(1) when s < 0, to stay integral
    PadicScalar sum = PadicScalar::zero(ctx);
    for (int k = 0; k <= r; ++k) {
        const int shift = s >= 0 ? s * k : -s * (r - k);
        sum += P.q[static_cast<std::size_t>(k)].shift_up(shift);
    }
    const int correction = s >= 0 ? 0 : s * r;
    if (sum.is_zero()) throw Error(ErrorCode::PVanishesAtOne, "P(1) vanishes at this precision");
    const int v = sum.valuation();
    if (v >= P.precision - margin) {
        throw Error(ErrorCode::InsufficientPrecision, "v_p(P(1)) lies within the margin of the precision");
    }
    return v + correction;
}

IntegralExpMap integral_exp_map(const FLModule& M, int margin) {
    if (!M.is_free()) throw Error(ErrorCode::NotFree, "the integral exponential map needs a free module");
    const ContextPtr& ctx = M.context();
    const int N = ctx->precision();
    const ZeroLevel z = zero_level(M);
    const std::size_t n = z.relations.rows();

    // complement of M^0
    std::vector<ZVec> comp;
    if (z.generators.cols() == 0) {
        for (std::size_t i = 0; i < n; ++i) comp.push_back(ZMat::identity(ctx, n).column(i));
    } else {
        const auto nf0 = smith_normal_form(z.generators);
        std::size_t k0 = 0;
        for (int e : nf0.exponents) {
            if (e == 0) {
                ++k0;
            } else if (e < N) {
                throw Error(ErrorCode::InvalidInput, "M^0 is not a direct summand of M");
            }
        }
        for (std::size_t i = k0; i < n; ++i) comp.push_back(nf0.U_inverse.column(i));
    }

    IntegralExpMap out;
    out.h1 = h1(M, margin);
    out.scale = M.phi_level();
    out.domain_basis = ZMat::from_columns(ctx, n, comp);

    const auto nf = smith_normal_form(hstack(z.one_minus_phi, z.relations));
    std::vector<std::size_t> free_rows;
    for (std::size_t i = 0; i < n; ++i) {
        if (i >= nf.exponents.size() || nf.exponents[i] >= N) free_rows.push_back(i);
    }
    if (free_rows.size() != comp.size()) {
        throw Error(ErrorCode::InsufficientPrecision,
                    "H^1 has free rank " + std::to_string(free_rows.size()) + " but M/M^0 has rank " +
                        std::to_string(comp.size()));
    }
    const int a = M.phi_level();
    std::vector<ZVec> cols;
    for (const auto& x : comp) {
        const KVec xk = extend_vector(ctx, x);
        const KVec fx = M.phi_low(xk);
        KVec y;
        for (std::size_t i = 0; i < xk.size(); ++i) {
            // (1 - p^a Phi sigma) x = p^a (p^{-a} x - Phi sigma x), a <= 0 here
            y.push_back(xk[i].shift_up(std::max(0, -a)) - fx[i]);
        }
        const ZVec coords = nf.U * restrict_vector(y);
        ZVec c;
        for (std::size_t i : free_rows) c.push_back(coords[i]);
        cols.push_back(c);
    }
    out.matrix = ZMat::from_columns(ctx, comp.size(), cols);
    return out;
}

MeasureReport verify_measure_identity(const FLModule& M, int margin) {
    if (auto v = validate(M, margin)) throw Error(ErrorCode::InvalidInput, "invalid module: " + v->message);
    if (!M.is_free()) throw Error(ErrorCode::NotFree, "the measure identity needs a free module");
    if (!is_strongly_divisible(M)) throw Error(ErrorCode::InvalidInput, "module is not strongly divisible");
    MeasureReport rep;
    rep.euler = euler_factor(M, margin);
    rep.v_P_at_1 = value_at_one_valuation(rep.euler, margin);
    rep.exp_map = integral_exp_map(M, margin);
    rep.h1 = rep.exp_map.h1;
    rep.log_mu = rep.h1.torsion_length();
    const std::size_t m = rep.exp_map.matrix.cols();
    if (m > 0) {
        const ContextPtr& ctx = M.context();
        rep.log_mu -= relative_index(ScaledBasis<PadicScalar>{rep.exp_map.matrix, rep.exp_map.scale},
                                     ScaledBasis<PadicScalar>{ZMat::identity(ctx, m), 0}, margin);
    }
    rep.identity_holds = rep.v_P_at_1 == rep.log_mu;
    return rep;
}

}  // namespace flh
