#include "flhodge/padic.hpp"

#include <algorithm>
#include <limits>

namespace flh {

std::string_view error_code_name(ErrorCode code) {
    switch (code) {
    case ErrorCode::NotPrime: return "NotPrime";
    case ErrorCode::PrecisionZero: return "PrecisionZero";
    case ErrorCode::PrecisionTooLarge: return "PrecisionTooLarge";
    case ErrorCode::ContextMismatch: return "ContextMismatch";
    case ErrorCode::NotAUnit: return "NotAUnit";
    case ErrorCode::NotDivisible: return "NotDivisible";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::SpanMismatch: return "SpanMismatch";
    case ErrorCode::InsufficientPrecision: return "InsufficientPrecision";
    case ErrorCode::SingularPhi: return "SingularPhi";
    case ErrorCode::NonRationalCoefficients: return "NonRationalCoefficients";
    case ErrorCode::PVanishesAtOne: return "PVanishesAtOne";
    case ErrorCode::NotExact: return "NotExact";
    case ErrorCode::LiftFailure: return "LiftFailure";
    case ErrorCode::PrecisionLoss: return "PrecisionLoss";
    case ErrorCode::NotFree: return "NotFree";
    case ErrorCode::InvalidInput: return "InvalidInput";
    }
    return "Unknown";
}

bool is_prime(Int n) {
    if (n < 2) return false;
    for (Int d = 2; d * d <= n; ++d) {
        if (n % d == 0) return false;
    }
    return true;
}

int integer_valuation(Int n, Int p) {
    int v = 0;
    while (n != 0 && n % p == 0) {
        n /= p;
        ++v;
    }
    return v;
}

namespace {

// Dense polynomials over F_p, constant term first, no trailing zeros.
using FpPoly = std::vector<Int>;

void trim(FpPoly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

FpPoly fp_mod(FpPoly a, const FpPoly& m, Int p) {
    trim(a);
    const Int lead_inv = [&] {
        Int inv = 1;
        for (Int k = 1; k < p; ++k) {
            if ((m.back() * k) % p == 1) inv = k;
        }
        return inv;
    }();
    while (a.size() >= m.size()) {
        const Int c = (a.back() * lead_inv) % p;
        const std::size_t shift = a.size() - m.size();
        for (std::size_t i = 0; i < m.size(); ++i) {
            a[shift + i] = ((a[shift + i] - c * m[i]) % p + p) % p;
        }
        trim(a);
    }
    return a;
}

FpPoly fp_mulmod(const FpPoly& a, const FpPoly& b, const FpPoly& m, Int p) {
    if (a.empty() || b.empty()) return {};
    FpPoly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
    }
    return fp_mod(std::move(r), m, p);
}

FpPoly fp_gcd(FpPoly a, FpPoly b, Int p) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        FpPoly r = fp_mod(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

bool fp_irreducible(const FpPoly& g, Int p) {
    const int degree = static_cast<int>(g.size()) - 1;
    if (degree <= 1) return degree == 1;
    // gcd(g, X^{p^i} - X) = 1 for i <= degree/2.
    FpPoly x_pow = fp_mod({0, 1}, g, p);
    for (int i = 1; i <= degree / 2; ++i) {
        FpPoly acc{1};
        for (Int k = 0; k < p; ++k) acc = fp_mulmod(acc, x_pow, g, p);
        x_pow = acc;
        FpPoly diff = x_pow;
        diff.resize(std::max<std::size_t>(diff.size(), 2), 0);
        diff[1] = (diff[1] - 1 + p) % p;
        trim(diff);
        if (fp_gcd(g, diff, p).size() > 1) return false;
    }
    return true;
}

Int mulmod(Int a, Int b, Int m) {
    return static_cast<Int>((static_cast<__int128>(a) * b) % m);
}

}  // namespace

std::vector<Int> least_irreducible(Int p, int degree) {
    if (degree == 1) return {0, 1};
    Int count = 1;
    for (int i = 0; i < degree; ++i) count *= p;
    for (Int k = 0; k < count; ++k) {
        FpPoly g(static_cast<std::size_t>(degree) + 1, 0);
        Int rest = k;
        for (int i = 0; i < degree; ++i) {
            g[static_cast<std::size_t>(i)] = rest % p;
            rest /= p;
        }
        g.back() = 1;
        if (fp_irreducible(g, p)) return g;
    }
    throw Error(ErrorCode::InvalidInput, "no irreducible polynomial found");
}

ContextPtr Context::make(Int p, int precision, int degree) {
    if (!is_prime(p)) throw Error(ErrorCode::NotPrime, std::to_string(p) + " is not prime");
    if (precision < 1) throw Error(ErrorCode::PrecisionZero, "precision must be at least 1");
    if (degree < 1) throw Error(ErrorCode::InvalidInput, "residue degree must be at least 1");

    auto ctx = std::shared_ptr<Context>(new Context());
    ctx->p_ = p;
    ctx->precision_ = precision;
    ctx->degree_ = degree;
    ctx->pow_p_.push_back(1);
    constexpr Int limit = Int{1} << 62;
    for (int k = 1; k <= precision; ++k) {
        if (ctx->pow_p_.back() > limit / p) {
            throw Error(ErrorCode::PrecisionTooLarge, "p^N must stay below 2^62");
        }
        ctx->pow_p_.push_back(ctx->pow_p_.back() * p);
    }
    ctx->modulus_ = least_irreducible(p, degree);

    const auto f = static_cast<std::size_t>(degree);
    ctx->frobenius_image_.assign(f, 0);
    if (degree == 1) {
        ctx->frobenius_image_[0] = 1;
    } else {
        ctx->frobenius_image_[1] = 1;
    }
    ctx->frobenius_matrix_.assign(f * f, 0);
    for (std::size_t j = 0; j < f; ++j) ctx->frobenius_matrix_[j * f + j] = 1;

    if (degree > 1) {
        // Newton iteration for the root of g congruent to w^p.
        ContextPtr view = ctx;
        auto eval = [&](const std::vector<Int>& poly, const UnramifiedScalar& x) {
            UnramifiedScalar acc = UnramifiedScalar::zero(view);
            for (auto it = poly.rbegin(); it != poly.rend(); ++it) {
                acc = acc * x + UnramifiedScalar::from_int(view, *it);
            }
            return acc;
        };
        std::vector<Int> derivative;
        for (std::size_t i = 1; i < ctx->modulus_.size(); ++i) {
            derivative.push_back(static_cast<Int>(i) * ctx->modulus_[i]);
        }
        UnramifiedScalar theta = UnramifiedScalar::generator(view).pow(static_cast<std::uint64_t>(p));
        for (int iter = 0; iter < 2 * precision + 2; ++iter) {
            UnramifiedScalar value = eval(ctx->modulus_, theta);
            if (value.is_zero()) break;
            theta = theta - value * eval(derivative, theta).unit_inverse();
        }
        ctx->frobenius_image_ = theta.coeffs();
        UnramifiedScalar power = UnramifiedScalar::one(view);
        for (std::size_t j = 0; j < f; ++j) {
            for (std::size_t i = 0; i < f; ++i) ctx->frobenius_matrix_[i * f + j] = power.coeff(i);
            power = power * theta;
        }
    }
    return ctx;
}

ContextPtr Context::with_precision(int precision) const { return make(p_, precision, degree_); }

Int Context::reduce(Int x) const {
    const Int m = modulus_value();
    x %= m;
    return x < 0 ? x + m : x;
}

Int Context::add(Int a, Int b) const {
    const Int m = modulus_value();
    Int s = a + b;
    return s >= m ? s - m : s;
}

Int Context::sub(Int a, Int b) const {
    Int s = a - b;
    return s < 0 ? s + modulus_value() : s;
}

Int Context::mul(Int a, Int b) const { return mulmod(a, b, modulus_value()); }

void require_same_context(const Context& a, const Context& b) {
    if (!a.same_ring(b)) {
        throw Error(ErrorCode::ContextMismatch,
                    "operands live in different rings (p, N, f) = (" + std::to_string(a.p()) + ", " +
                        std::to_string(a.precision()) + ", " + std::to_string(a.degree()) + ") vs (" +
                        std::to_string(b.p()) + ", " + std::to_string(b.precision()) + ", " +
                        std::to_string(b.degree()) + ")");
    }
}

// ---------------------------------------------------------------- PadicScalar

PadicScalar::PadicScalar(ContextPtr ctx, Int value) : ctx_(std::move(ctx)) { value_ = ctx_->reduce(value); }

int PadicScalar::valuation() const {
    if (value_ == 0) return ctx_->precision();
    return integer_valuation(value_, ctx_->p());
}

PadicScalar PadicScalar::unit_inverse() const {
    if (!is_unit()) throw Error(ErrorCode::NotAUnit, to_string() + " is not a unit");
    // Extended Euclid on (value, p^N).
    __int128 a = value_, m = ctx_->modulus_value(), x0 = 1, x1 = 0;
    while (m != 0) {
        __int128 q = a / m;
        __int128 t = a - q * m;
        a = m;
        m = t;
        t = x0 - q * x1;
        x0 = x1;
        x1 = t;
    }
    return {ctx_, static_cast<Int>(x0 % ctx_->modulus_value())};
}

PadicScalar PadicScalar::shift_down(int k) const {
    if (valuation() < k) throw Error(ErrorCode::NotDivisible, to_string() + " is not divisible by p^" + std::to_string(k));
    return {ctx_, value_ / ctx_->pow_p(k)};
}

PadicScalar PadicScalar::shift_up(int k) const {
    if (k >= ctx_->precision()) return zero(ctx_);
    return {ctx_, ctx_->mul(value_, ctx_->pow_p(k))};
}

PadicScalar PadicScalar::exact_divide_by_p(int k) const {
    if (k >= ctx_->precision()) throw Error(ErrorCode::PrecisionLoss, "division exhausts the precision");
    PadicScalar q = shift_down(k);
    return {ctx_->with_precision(ctx_->precision() - k), q.value_};
}

PadicScalar PadicScalar::pow(std::uint64_t e) const {
    PadicScalar result = one(ctx_), base = *this;
    while (e > 0) {
        if (e & 1U) result *= base;
        base *= base;
        e >>= 1U;
    }
    return result;
}

PadicScalar PadicScalar::operator-() const { return {ctx_, ctx_->sub(0, value_)}; }

PadicScalar operator+(const PadicScalar& a, const PadicScalar& b) {
    require_same_context(*a.ctx_, *b.ctx_);
    return {a.ctx_, a.ctx_->add(a.value_, b.value_)};
}

PadicScalar operator-(const PadicScalar& a, const PadicScalar& b) {
    require_same_context(*a.ctx_, *b.ctx_);
    return {a.ctx_, a.ctx_->sub(a.value_, b.value_)};
}

PadicScalar operator*(const PadicScalar& a, const PadicScalar& b) {
    require_same_context(*a.ctx_, *b.ctx_);
    return {a.ctx_, a.ctx_->mul(a.value_, b.value_)};
}

bool operator==(const PadicScalar& a, const PadicScalar& b) {
    require_same_context(*a.ctx_, *b.ctx_);
    return a.value_ == b.value_;
}

// ---------------------------------------------------------- UnramifiedScalar

UnramifiedScalar::UnramifiedScalar(ContextPtr ctx, std::vector<Int> coeffs) : ctx_(std::move(ctx)), coeffs_(std::move(coeffs)) {
    if (coeffs_.size() != static_cast<std::size_t>(ctx_->degree())) {
        throw Error(ErrorCode::ShapeMismatch, "expected " + std::to_string(ctx_->degree()) + " coefficients");
    }
    for (auto& c : coeffs_) c = ctx_->reduce(c);
}

UnramifiedScalar UnramifiedScalar::zero(const ContextPtr& ctx) {
    return {ctx, std::vector<Int>(static_cast<std::size_t>(ctx->degree()), 0)};
}

UnramifiedScalar UnramifiedScalar::from_int(const ContextPtr& ctx, Int v) {
    std::vector<Int> c(static_cast<std::size_t>(ctx->degree()), 0);
    c[0] = v;
    return {ctx, std::move(c)};
}

UnramifiedScalar UnramifiedScalar::generator(const ContextPtr& ctx) {
    if (ctx->degree() == 1) {
        // f = 1: w is the root of X - c0 with c0 = 0.
        return zero(ctx);
    }
    std::vector<Int> c(static_cast<std::size_t>(ctx->degree()), 0);
    c[1] = 1;
    return {ctx, std::move(c)};
}

int UnramifiedScalar::valuation() const {
    int v = ctx_->precision();
    for (Int c : coeffs_) {
        if (c != 0) v = std::min(v, integer_valuation(c, ctx_->p()));
    }
    return v;
}

bool UnramifiedScalar::is_zero() const {
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](Int c) { return c == 0; });
}

bool UnramifiedScalar::is_rational() const {
    return std::all_of(coeffs_.begin() + 1, coeffs_.end(), [](Int c) { return c == 0; });
}

PadicScalar UnramifiedScalar::to_padic() const {
    if (!is_rational()) throw Error(ErrorCode::NonRationalCoefficients, to_string() + " is not in Z/p^N");
    return {ctx_, coeffs_[0]};
}

UnramifiedScalar UnramifiedScalar::unit_inverse() const {
    if (!is_unit()) throw Error(ErrorCode::NotAUnit, to_string() + " is not a unit");
    // x^{q-2} inverts x mod p; Newton doubles the correct digits.
    std::uint64_t q = 1;
    for (int i = 0; i < ctx_->degree(); ++i) q *= static_cast<std::uint64_t>(ctx_->p());
    UnramifiedScalar y = pow(q - 2);
    const UnramifiedScalar two = from_int(ctx_, 2);
    for (int correct = 1; correct < ctx_->precision(); correct *= 2) y = y * (two - *this * y);
    return y;
}

UnramifiedScalar UnramifiedScalar::shift_down(int k) const {
    if (valuation() < k) throw Error(ErrorCode::NotDivisible, to_string() + " is not divisible by p^" + std::to_string(k));
    std::vector<Int> c = coeffs_;
    for (auto& x : c) x /= ctx_->pow_p(k);
    return {ctx_, std::move(c)};
}

UnramifiedScalar UnramifiedScalar::shift_up(int k) const {
    if (k >= ctx_->precision()) return zero(ctx_);
    std::vector<Int> c = coeffs_;
    for (auto& x : c) x = ctx_->mul(x, ctx_->pow_p(k));
    return {ctx_, std::move(c)};
}

UnramifiedScalar UnramifiedScalar::exact_divide_by_p(int k) const {
    if (k >= ctx_->precision()) throw Error(ErrorCode::PrecisionLoss, "division exhausts the precision");
    UnramifiedScalar q = shift_down(k);
    return {ctx_->with_precision(ctx_->precision() - k), q.coeffs_};
}

UnramifiedScalar UnramifiedScalar::pow(std::uint64_t e) const {
    UnramifiedScalar result = one(ctx_), base = *this;
    while (e > 0) {
        if (e & 1U) result *= base;
        base *= base;
        e >>= 1U;
    }
    return result;
}

UnramifiedScalar UnramifiedScalar::frobenius(int s) const {
    const int f = ctx_->degree();
    s %= f;
    if (s < 0) s += f;
    if (s == 0 || f == 1) return *this;
    const auto n = static_cast<std::size_t>(f);
    const auto& m = ctx_->frobenius_matrix();
    std::vector<Int> cur = coeffs_;
    for (int step = 0; step < s; ++step) {
        std::vector<Int> next(n, 0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) next[i] = ctx_->add(next[i], ctx_->mul(m[i * n + j], cur[j]));
        }
        cur = std::move(next);
    }
    return {ctx_, std::move(cur)};
}

UnramifiedScalar UnramifiedScalar::teichmuller() const {
    std::uint64_t q = 1;
    for (int i = 0; i < ctx_->degree(); ++i) q *= static_cast<std::uint64_t>(ctx_->p());
    UnramifiedScalar y = *this;
    for (int k = 0; k < ctx_->precision(); ++k) y = y.pow(q);
    return y;
}

UnramifiedScalar UnramifiedScalar::norm() const {
    UnramifiedScalar acc = *this;
    for (int i = 1; i < ctx_->degree(); ++i) acc = acc * frobenius(i);
    return acc;
}

UnramifiedScalar UnramifiedScalar::operator-() const {
    std::vector<Int> c = coeffs_;
    for (auto& x : c) x = ctx_->sub(0, x);
    return {ctx_, std::move(c)};
}

UnramifiedScalar operator+(const UnramifiedScalar& a, const UnramifiedScalar& b) {
    require_same_context(*a.ctx_, *b.ctx_);
    std::vector<Int> c(a.coeffs_.size());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.ctx_->add(a.coeffs_[i], b.coeffs_[i]);
    return {a.ctx_, std::move(c)};
}

UnramifiedScalar operator-(const UnramifiedScalar& a, const UnramifiedScalar& b) {
    require_same_context(*a.ctx_, *b.ctx_);
    std::vector<Int> c(a.coeffs_.size());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.ctx_->sub(a.coeffs_[i], b.coeffs_[i]);
    return {a.ctx_, std::move(c)};
}

UnramifiedScalar operator*(const UnramifiedScalar& a, const UnramifiedScalar& b) {
    require_same_context(*a.ctx_, *b.ctx_);
    const Context& ctx = *a.ctx_;
    const std::size_t f = a.coeffs_.size();
    if (f == 1) return {a.ctx_, {ctx.mul(a.coeffs_[0], b.coeffs_[0])}};
    std::vector<Int> prod(2 * f - 1, 0);
    for (std::size_t i = 0; i < f; ++i) {
        if (a.coeffs_[i] == 0) continue;
        for (std::size_t j = 0; j < f; ++j) prod[i + j] = ctx.add(prod[i + j], ctx.mul(a.coeffs_[i], b.coeffs_[j]));
    }
    // Reduce by the monic modulus from the top.
    const auto& g = ctx.modulus();
    for (std::size_t d = prod.size() - 1; d >= f; --d) {
        const Int c = prod[d];
        if (c == 0) continue;
        prod[d] = 0;
        for (std::size_t i = 0; i < f; ++i) prod[d - f + i] = ctx.sub(prod[d - f + i], ctx.mul(c, g[i]));
    }
    prod.resize(f);
    return {a.ctx_, std::move(prod)};
}

bool operator==(const UnramifiedScalar& a, const UnramifiedScalar& b) {
    require_same_context(*a.ctx_, *b.ctx_);
    return a.coeffs_ == b.coeffs_;
}

std::string UnramifiedScalar::to_string() const {
    if (coeffs_.size() == 1) return std::to_string(coeffs_[0]);
    std::string s = "[";
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        if (i) s += ", ";
        s += std::to_string(coeffs_[i]);
    }
    return s + "]";
}

}  // namespace flh
