#include "flhodge/linalg.hpp"

namespace flh {

Vec<UnramifiedScalar> SemilinearMap::apply(const Vec<UnramifiedScalar>& x) const {
    Vec<UnramifiedScalar> twisted;
    twisted.reserve(x.size());
    for (const auto& c : x) twisted.push_back(c.frobenius(twist));
    return matrix * twisted;
}

SemilinearMap compose(const SemilinearMap& outer, const SemilinearMap& inner) {
    // A1 sigma^{s1}(A2 sigma^{s2} x) = A1 sigma^{s1}(A2) sigma^{s1+s2} x
    return {outer.matrix * inner.matrix.frobenius(outer.twist), outer.twist + inner.twist};
}

ZMat restrict_scalars(const SemilinearMap& map) {
    const KMat& A = map.matrix;
    const ContextPtr& ctx = A.context();
    const auto f = static_cast<std::size_t>(ctx->degree());
    ZMat out(ctx, A.rows() * f, A.cols() * f);
    std::vector<UnramifiedScalar> basis;
    UnramifiedScalar w_power = UnramifiedScalar::one(ctx);
    const UnramifiedScalar w = UnramifiedScalar::generator(ctx);
    for (std::size_t j = 0; j < f; ++j) {
        basis.push_back(w_power.frobenius(map.twist));
        w_power = w_power * w;
    }
    for (std::size_t k = 0; k < A.cols(); ++k) {
        for (std::size_t j = 0; j < f; ++j) {
            for (std::size_t i = 0; i < A.rows(); ++i) {
                const UnramifiedScalar entry = A(i, k) * basis[j];
                for (std::size_t t = 0; t < f; ++t) out(i * f + t, k * f + j) = PadicScalar(ctx, entry.coeff(t));
            }
        }
    }
    return out;
}

Vec<PadicScalar> restrict_vector(const Vec<UnramifiedScalar>& v) {
    Vec<PadicScalar> out;
    for (const auto& x : v) {
        for (Int c : x.coeffs()) out.emplace_back(x.context(), c);
    }
    return out;
}

Vec<UnramifiedScalar> extend_vector(const ContextPtr& ctx, const Vec<PadicScalar>& v) {
    const auto f = static_cast<std::size_t>(ctx->degree());
    if (v.size() % f != 0) throw Error(ErrorCode::ShapeMismatch, "vector length is not a multiple of f");
    Vec<UnramifiedScalar> out;
    for (std::size_t k = 0; k < v.size() / f; ++k) {
        std::vector<Int> c(f);
        for (std::size_t t = 0; t < f; ++t) c[t] = v[k * f + t].value();
        out.emplace_back(ctx, std::move(c));
    }
    return out;
}

}  // namespace flh
