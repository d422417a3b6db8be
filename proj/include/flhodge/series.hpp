#pragma once

// Truncated series in one variable X over Z/p^N, where X stands for pi/p.
// t/p = sum_{n>=1} (-1)^{n+1} p^{n-1}/n X^n has p-integral coefficients and
// factors as X * v with v a unit of Z_p[[X]].

#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "flhodge/padic.hpp"

namespace flh {

class TruncatedSeries {
public:
    TruncatedSeries(ContextPtr ctx, std::vector<PadicScalar> coeffs);
    static TruncatedSeries zero(const ContextPtr& ctx, int degree);
    static TruncatedSeries one(const ContextPtr& ctx, int degree);

    const ContextPtr& context() const { return ctx_; }
    int degree_bound() const { return static_cast<int>(coeffs_.size()) - 1; }
    const std::vector<PadicScalar>& coeffs() const { return coeffs_; }
    const PadicScalar& coeff(int n) const { return coeffs_.at(static_cast<std::size_t>(n)); }

    /// Coefficient n of the result is coefficient n+1 of this series.
    TruncatedSeries shift_down() const;

    friend TruncatedSeries operator+(const TruncatedSeries& a, const TruncatedSeries& b);
    friend TruncatedSeries operator-(const TruncatedSeries& a, const TruncatedSeries& b);
    /// Truncates at the smaller degree bound.
    friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b);
    friend bool operator==(const TruncatedSeries& a, const TruncatedSeries& b) { return a.coeffs_ == b.coeffs_; }

    bool is_one() const;

private:
    ContextPtr ctx_;
    std::vector<PadicScalar> coeffs_;
};

/// t/p in the variable X = pi/p, degree bound D.
TruncatedSeries t_over_p_series(Int p, int precision, int degree);

struct UnitFactor {
    TruncatedSeries v;
    TruncatedSeries w;       // v * w = 1 mod (p^N, X^{D+1})
    bool certified = false;  // independent multiplication check
};

/// t/p = X * v with v of degree bound D; w is the Newton inverse of v.
UnitFactor unit_factor(Int p, int precision, int degree);

/// Inverse of a series with unit constant term by Newton iteration. Throws NotAUnit.
TruncatedSeries series_inverse(const TruncatedSeries& s);

using Rational = boost::multiprecision::cpp_rational;
using RationalSeries = std::vector<Rational>;

RationalSeries rational_log1p(int degree);  // log(1 + T)
RationalSeries rational_expm1(int degree);  // exp(T) - 1
/// outer(inner(T)) truncated at degree; inner must have zero constant term.
RationalSeries compose(const RationalSeries& outer, const RationalSeries& inner);

/// log(1 + (exp(t) - 1)) == t and exp(log(1 + X)) - 1 == X over the rationals up
/// to the degree, and the p-integral results reduce to X in Z/p^N.
bool log_exp_roundtrip(Int p, int precision, int degree);

}  // namespace flh
