#include "flhodge/series.hpp"

#include <algorithm>

namespace flh {

TruncatedSeries::TruncatedSeries(ContextPtr ctx, std::vector<PadicScalar> coeffs)
    : ctx_(std::move(ctx)), coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) throw Error(ErrorCode::ShapeMismatch, "series needs at least one coefficient");
    for (const auto& c : coeffs_) require_same_context(*ctx_, *c.context());
}

TruncatedSeries TruncatedSeries::zero(const ContextPtr& ctx, int degree) {
    return {ctx, std::vector<PadicScalar>(static_cast<std::size_t>(degree) + 1, PadicScalar::zero(ctx))};
}

TruncatedSeries TruncatedSeries::one(const ContextPtr& ctx, int degree) {
    TruncatedSeries s = zero(ctx, degree);
    s.coeffs_[0] = PadicScalar::one(ctx);
    return s;
}

TruncatedSeries TruncatedSeries::shift_down() const {
    if (coeffs_.size() < 2) throw Error(ErrorCode::ShapeMismatch, "nothing to shift");
    return {ctx_, std::vector<PadicScalar>(coeffs_.begin() + 1, coeffs_.end())};
}

bool TruncatedSeries::is_one() const {
    if (coeffs_[0].value() != 1) return false;
    return std::all_of(coeffs_.begin() + 1, coeffs_.end(), [](const PadicScalar& c) { return c.is_zero(); });
}

TruncatedSeries operator+(const TruncatedSeries& a, const TruncatedSeries& b) {
    const std::size_t n = std::min(a.coeffs_.size(), b.coeffs_.size());
    std::vector<PadicScalar> c;
    for (std::size_t i = 0; i < n; ++i) c.push_back(a.coeffs_[i] + b.coeffs_[i]);
    return {a.ctx_, std::move(c)};
}

TruncatedSeries operator-(const TruncatedSeries& a, const TruncatedSeries& b) {
    const std::size_t n = std::min(a.coeffs_.size(), b.coeffs_.size());
    std::vector<PadicScalar> c;
    for (std::size_t i = 0; i < n; ++i) c.push_back(a.coeffs_[i] - b.coeffs_[i]);
    return {a.ctx_, std::move(c)};
}

TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
    const std::size_t n = std::min(a.coeffs_.size(), b.coeffs_.size());
    std::vector<PadicScalar> c(n, PadicScalar::zero(a.ctx_));
    for (std::size_t i = 0; i < n; ++i) {
        if (a.coeffs_[i].is_zero()) continue;
        for (std::size_t j = 0; i + j < n; ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
    }
    return {a.ctx_, std::move(c)};
}

TruncatedSeries t_over_p_series(Int p, int precision, int degree) {
    if (degree < 1) throw Error(ErrorCode::InvalidInput, "degree bound must be at least 1");
    auto ctx = Context::make(p, precision, 1);
    std::vector<PadicScalar> c{PadicScalar::zero(ctx)};
    for (int n = 1; n <= degree; ++n) {
        const int vn = integer_valuation(n, p);
        Int unit_part = n;
        for (int i = 0; i < vn; ++i) unit_part /= p;
        // p^{n-1}/n = p^{n-1-v(n)} / unit_part
        PadicScalar term = PadicScalar(ctx, unit_part).unit_inverse().shift_up(n - 1 - vn);
        c.push_back(n % 2 == 1 ? term : -term);
    }
    return {ctx, std::move(c)};
}

TruncatedSeries series_inverse(const TruncatedSeries& s) {
    const ContextPtr& ctx = s.context();
    if (!s.coeff(0).is_unit()) throw Error(ErrorCode::NotAUnit, "constant term is not a unit");
    TruncatedSeries w = TruncatedSeries::zero(ctx, s.degree_bound());
    std::vector<PadicScalar> c = w.coeffs();
    c[0] = s.coeff(0).unit_inverse();
    w = TruncatedSeries(ctx, c);
    const TruncatedSeries two = [&] {
        auto t = TruncatedSeries::one(ctx, s.degree_bound());
        return t + t;
    }();
    // Each step doubles the number of correct X-adic terms.
    for (int correct = 1; correct <= s.degree_bound(); correct *= 2) w = w * (two - s * w);
    return w;
}

UnitFactor unit_factor(Int p, int precision, int degree) {
    TruncatedSeries v = t_over_p_series(p, precision, degree + 1).shift_down();
    TruncatedSeries w = series_inverse(v);
    const bool certified = (v * w).is_one();
    return {v, w, certified};
}

RationalSeries rational_log1p(int degree) {
    RationalSeries s(static_cast<std::size_t>(degree) + 1, Rational(0));
    for (int n = 1; n <= degree; ++n) s[static_cast<std::size_t>(n)] = Rational(n % 2 == 1 ? 1 : -1, n);
    return s;
}

RationalSeries rational_expm1(int degree) {
    RationalSeries s(static_cast<std::size_t>(degree) + 1, Rational(0));
    Rational term(1);
    for (int n = 1; n <= degree; ++n) {
        term /= n;
        s[static_cast<std::size_t>(n)] = term;
    }
    return s;
}

namespace {

RationalSeries rmul(const RationalSeries& a, const RationalSeries& b, std::size_t n) {
    RationalSeries c(n, Rational(0));
    for (std::size_t i = 0; i < n && i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; i + j < n && j < b.size(); ++j) c[i + j] += a[i] * b[j];
    }
    return c;
}

}  // namespace

RationalSeries compose(const RationalSeries& outer, const RationalSeries& inner) {
    if (!inner.empty() && inner[0] != 0) throw Error(ErrorCode::InvalidInput, "inner series must vanish at 0");
    const std::size_t n = inner.size();
    // Horner: outer(u) = c_0 + u (c_1 + u (c_2 + ...))
    RationalSeries acc(n, Rational(0));
    for (auto it = outer.rbegin(); it != outer.rend(); ++it) {
        acc = rmul(acc, inner, n);
        acc[0] += *it;
    }
    return acc;
}

bool log_exp_roundtrip(Int p, int precision, int degree) {
    auto ctx = Context::make(p, precision, 1);
    RationalSeries identity(static_cast<std::size_t>(degree) + 1, Rational(0));
    if (degree >= 1) identity[1] = 1;
    const RationalSeries forward = compose(rational_log1p(degree), rational_expm1(degree));
    const RationalSeries backward = compose(rational_expm1(degree), rational_log1p(degree));
    if (forward != identity || backward != identity) return false;
    // Reduction into Z/p^N of the (integral) coefficients.
    for (std::size_t n = 0; n < forward.size(); ++n) {
        const auto& q = forward[n];
        if (boost::multiprecision::denominator(q) != 1) return false;
        const Int value = static_cast<Int>(boost::multiprecision::numerator(q) % ctx->modulus_value());
        if (PadicScalar(ctx, value).value() != (n == 1 ? 1 : 0)) return false;
    }
    return true;
}

}  // namespace flh
