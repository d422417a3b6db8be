#include "flhodge/witt.hpp"

#include <memory>
#include <mutex>

namespace flh {

IntPoly poly_add(const IntPoly& a, const IntPoly& b) {
    IntPoly out = a;
    for (const auto& [m, c] : b) {
        auto& slot = out[m];
        slot += c;
        if (slot == 0) out.erase(m);
    }
    return out;
}

IntPoly poly_mul(const IntPoly& a, const IntPoly& b) {
    IntPoly out;
    for (const auto& [ma, ca] : a) {
        for (const auto& [mb, cb] : b) {
            std::vector<unsigned> m = ma;
            for (std::size_t i = 0; i < m.size(); ++i) m[i] += mb[i];
            out[m] += ca * cb;
        }
    }
    std::erase_if(out, [](const auto& kv) { return kv.second == 0; });
    return out;
}

IntPoly poly_pow(const IntPoly& a, std::uint64_t e) {
    IntPoly result;
    if (!a.empty()) result[std::vector<unsigned>(a.begin()->first.size(), 0)] = 1;
    IntPoly base = a;
    while (e > 0) {
        if (e & 1U) result = poly_mul(result, base);
        e >>= 1U;
        if (e > 0) base = poly_mul(base, base);
    }
    return result;
}

IntPoly poly_scale(const IntPoly& a, const BigInt& c) {
    IntPoly out;
    if (c == 0) return out;
    for (const auto& [m, v] : a) out[m] = v * c;
    return out;
}

IntPoly poly_variable(std::size_t nvars, std::size_t index) {
    std::vector<unsigned> m(nvars, 0);
    m[index] = 1;
    return IntPoly{{m, BigInt(1)}};
}

IntPoly ghost_polynomial(Int p, int k, std::size_t nvars, std::size_t offset) {
    IntPoly w;
    BigInt p_i = 1;
    std::uint64_t exponent = 1;
    for (int i = 0; i < k; ++i) exponent *= static_cast<std::uint64_t>(p);
    for (int i = 0; i <= k; ++i) {
        w = poly_add(w, poly_scale(poly_pow(poly_variable(nvars, offset + static_cast<std::size_t>(i)), exponent), p_i));
        p_i *= p;
        exponent /= static_cast<std::uint64_t>(p);
    }
    return w;
}

namespace {

// Divides every coefficient by d; the ghost recursion guarantees exactness.
IntPoly exact_divide(const IntPoly& a, const BigInt& d) {
    IntPoly out;
    for (const auto& [m, c] : a) {
        if (c % d != 0) throw Error(ErrorCode::InvalidInput, "Witt polynomial is not integral");
        out[m] = c / d;
    }
    return out;
}

WittPolynomialCache build_cache(Int p, int n) {
    const auto nvars = static_cast<std::size_t>(2 * n);
    WittPolynomialCache cache{p, n, {}, {}};
    BigInt p_k = 1;
    for (int k = 0; k < n; ++k) {
        const IntPoly gx = ghost_polynomial(p, k, nvars, 0);
        const IntPoly gy = ghost_polynomial(p, k, nvars, static_cast<std::size_t>(n));
        IntPoly s = poly_add(gx, gy);
        IntPoly m = poly_mul(gx, gy);
        BigInt p_i = 1;
        std::uint64_t exponent = 1;
        for (int i = 0; i < k; ++i) exponent *= static_cast<std::uint64_t>(p);
        for (int i = 0; i < k; ++i) {
            s = poly_add(s, poly_scale(poly_pow(cache.sum[static_cast<std::size_t>(i)], exponent), -p_i));
            m = poly_add(m, poly_scale(poly_pow(cache.product[static_cast<std::size_t>(i)], exponent), -p_i));
            p_i *= p;
            exponent /= static_cast<std::uint64_t>(p);
        }
        cache.sum.push_back(exact_divide(s, p_k));
        cache.product.push_back(exact_divide(m, p_k));
        p_k *= p;
    }
    return cache;
}

Int reduce_big(const BigInt& c, const Context& ctx) {
    BigInt r = c % ctx.modulus_value();
    if (r < 0) r += ctx.modulus_value();
    return static_cast<Int>(r);
}

UnramifiedScalar evaluate(const IntPoly& poly, const std::vector<UnramifiedScalar>& vars, const ContextPtr& ctx) {
    UnramifiedScalar acc = UnramifiedScalar::zero(ctx);
    for (const auto& [mono, coeff] : poly) {
        const Int c = reduce_big(coeff, *ctx);
        if (c == 0) continue;
        UnramifiedScalar term = UnramifiedScalar::from_int(ctx, c);
        for (std::size_t i = 0; i < mono.size(); ++i) {
            if (mono[i] != 0) term *= vars[i].pow(mono[i]);
        }
        acc += term;
    }
    return acc;
}

void require_compatible(const WittVector& u, const WittVector& v) {
    if (u.length() != v.length()) throw Error(ErrorCode::LengthMismatch, "Witt vectors have different lengths");
    require_same_context(*u.coefficient_context(), *v.coefficient_context());
}

}  // namespace

const WittPolynomialCache& witt_polynomials(Int p, int length) {
    if (length < 1 || length > kMaxWittLength) {
        throw Error(ErrorCode::InvalidInput, "Witt length must lie in [1, " + std::to_string(kMaxWittLength) + "]");
    }
    static std::mutex mutex;
    static std::map<std::pair<Int, int>, std::unique_ptr<WittPolynomialCache>> caches;
    std::lock_guard lock(mutex);
    auto& slot = caches[{p, length}];
    if (!slot) slot = std::make_unique<WittPolynomialCache>(build_cache(p, length));
    return *slot;
}

WittVector::WittVector(ContextPtr coeff_ctx, std::vector<UnramifiedScalar> components)
    : ctx_(std::move(coeff_ctx)), components_(std::move(components)) {
    if (components_.empty()) throw Error(ErrorCode::LengthMismatch, "Witt vector of length 0");
    for (const auto& c : components_) require_same_context(*ctx_, *c.context());
}

WittVector WittVector::zero(const ContextPtr& coeff_ctx, int length) {
    return {coeff_ctx, std::vector<UnramifiedScalar>(static_cast<std::size_t>(length), UnramifiedScalar::zero(coeff_ctx))};
}

std::vector<UnramifiedScalar> ghost(const WittVector& w) {
    const ContextPtr& ctx = w.coefficient_context();
    std::vector<UnramifiedScalar> out;
    for (int k = 0; k < w.length(); ++k) {
        UnramifiedScalar acc = UnramifiedScalar::zero(ctx);
        std::uint64_t exponent = 1;
        for (int i = 0; i < k; ++i) exponent *= static_cast<std::uint64_t>(w.p());
        for (int i = 0; i <= k; ++i) {
            acc += w.components()[static_cast<std::size_t>(i)].pow(exponent).shift_up(i);
            exponent /= static_cast<std::uint64_t>(w.p());
        }
        out.push_back(acc);
    }
    return out;
}

namespace {

WittVector apply_structure(const WittVector& u, const WittVector& v, bool multiply) {
    require_compatible(u, v);
    const auto& cache = witt_polynomials(u.p(), u.length());
    std::vector<UnramifiedScalar> vars = u.components();
    vars.insert(vars.end(), v.components().begin(), v.components().end());
    std::vector<UnramifiedScalar> out;
    const auto& polys = multiply ? cache.product : cache.sum;
    for (const auto& poly : polys) out.push_back(evaluate(poly, vars, u.coefficient_context()));
    return {u.coefficient_context(), std::move(out)};
}

}  // namespace

WittVector witt_add(const WittVector& u, const WittVector& v) { return apply_structure(u, v, false); }
WittVector witt_mul(const WittVector& u, const WittVector& v) { return apply_structure(u, v, true); }

WittVector witt_scale_by_p(const WittVector& w) {
    WittVector acc = w;
    for (Int i = 1; i < w.p(); ++i) acc = witt_add(acc, w);
    return acc;
}

WittVector teichmuller(const UnramifiedScalar& a, int length) {
    std::vector<UnramifiedScalar> c(static_cast<std::size_t>(length), UnramifiedScalar::zero(a.context()));
    c[0] = a;
    return {a.context(), std::move(c)};
}

WittVector verschiebung(const WittVector& w) {
    std::vector<UnramifiedScalar> c;
    c.push_back(UnramifiedScalar::zero(w.coefficient_context()));
    for (int i = 0; i + 1 < w.length(); ++i) c.push_back(w.components()[static_cast<std::size_t>(i)]);
    return {w.coefficient_context(), std::move(c)};
}

WittVector witt_frobenius(const WittVector& w) {
    if (w.coefficient_context()->precision() != 1) {
        throw Error(ErrorCode::InvalidInput, "componentwise Frobenius needs a characteristic-p coefficient ring");
    }
    std::vector<UnramifiedScalar> c;
    for (const auto& x : w.components()) c.push_back(x.pow(static_cast<std::uint64_t>(w.p())));
    return {w.coefficient_context(), std::move(c)};
}

UnramifiedScalar witt_to_unramified(const WittVector& w, const ContextPtr& target) {
    const ContextPtr& src = w.coefficient_context();
    if (src->precision() != 1 || src->p() != target->p() || src->degree() != target->degree() ||
        w.length() != target->precision()) {
        throw Error(ErrorCode::ShapeMismatch, "Witt vector shape does not match the target ring");
    }
    UnramifiedScalar acc = UnramifiedScalar::zero(target);
    for (int i = 0; i < w.length(); ++i) {
        UnramifiedScalar lift(target, w.components()[static_cast<std::size_t>(i)].coeffs());
        acc += lift.teichmuller().frobenius(-i).shift_up(i);
    }
    return acc;
}

std::vector<WittVector> enumerate_witt_vectors(const ContextPtr& residue_ctx, int length) {
    const Int q_mod = residue_ctx->modulus_value();
    const auto f = static_cast<std::size_t>(residue_ctx->degree());
    std::vector<UnramifiedScalar> elements;
    Int count = 1;
    for (std::size_t i = 0; i < f; ++i) count *= q_mod;
    for (Int code = 0; code < count; ++code) {
        std::vector<Int> c(f);
        Int rest = code;
        for (std::size_t i = 0; i < f; ++i) {
            c[i] = rest % q_mod;
            rest /= q_mod;
        }
        elements.emplace_back(residue_ctx, c);
    }
    std::vector<WittVector> out;
    Int total = 1;
    for (int i = 0; i < length; ++i) total *= count;
    for (Int code = 0; code < total; ++code) {
        std::vector<UnramifiedScalar> comps;
        Int rest = code;
        std::vector<std::size_t> digits(static_cast<std::size_t>(length));
        for (int i = length - 1; i >= 0; --i) {
            digits[static_cast<std::size_t>(i)] = static_cast<std::size_t>(rest % count);
            rest /= count;
        }
        for (auto d : digits) comps.push_back(elements[d]);
        out.emplace_back(residue_ctx, std::move(comps));
    }
    return out;
}

}  // namespace flh
