#pragma once

/**
 * Fixed-precision arithmetic in Z/p^N and in the unramified ring
 * O_K/p^N = W(F_{p^f})/p^N.
 *
 * O_K/p^N is presented as (Z/p^N)[X]/(g) where g is the lexicographically
 * least monic irreducible polynomial of degree f over F_p, lifted with
 * coefficients in [0, p). The arithmetic Frobenius sigma is determined by
 * sigma(w), the unique root of g congruent to w^p, found by Newton iteration.
 *
 * Everything is exact modulo p^N. Values never mutate after construction.
 */

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "flhodge/error.hpp"

namespace flh {

using Int = std::int64_t;

class Context;
using ContextPtr = std::shared_ptr<const Context>;

class Context {
public:
    /// Throws NotPrime, PrecisionZero, or PrecisionTooLarge (p^N must stay below 2^62).
    static ContextPtr make(Int p, int precision, int degree = 1);

    Int p() const { return p_; }
    int precision() const { return precision_; }
    int degree() const { return degree_; }
    /// p^N.
    Int modulus_value() const { return pow_p_.back(); }
    /// p^k for 0 <= k <= N.
    Int pow_p(int k) const { return pow_p_.at(static_cast<std::size_t>(k)); }

    /// Monic defining polynomial, f+1 coefficients, constant term first.
    const std::vector<Int>& modulus() const { return modulus_; }
    /// Coordinates of sigma(w) in the basis 1, w, ..., w^{f-1}.
    const std::vector<Int>& frobenius_image() const { return frobenius_image_; }
    /// Column j holds the coordinates of sigma(w^j); row-major f x f.
    const std::vector<Int>& frobenius_matrix() const { return frobenius_matrix_; }

    /// Same p and f at a different precision; the modulus is the same lift.
    ContextPtr with_precision(int precision) const;

    bool same_ring(const Context& other) const {
        return p_ == other.p_ && precision_ == other.precision_ && degree_ == other.degree_;
    }

    Int reduce(Int x) const;
    Int add(Int a, Int b) const;
    Int sub(Int a, Int b) const;
    Int mul(Int a, Int b) const;

private:
    Context() = default;

    Int p_ = 0;
    int precision_ = 0;
    int degree_ = 0;
    std::vector<Int> pow_p_;
    std::vector<Int> modulus_;
    std::vector<Int> frobenius_image_;
    std::vector<Int> frobenius_matrix_;
};

bool is_prime(Int n);

/// v_p(n) for n != 0.
int integer_valuation(Int n, Int p);

/// Lexicographically least monic irreducible polynomial of degree f over F_p.
/// Order is by the integer sum c_i p^i over the non-leading coefficients.
std::vector<Int> least_irreducible(Int p, int degree);

/// Element of Z/p^N.
class PadicScalar {
public:
    PadicScalar() = default;
    PadicScalar(ContextPtr ctx, Int value);

    static PadicScalar zero(const ContextPtr& ctx) { return {ctx, 0}; }
    static PadicScalar one(const ContextPtr& ctx) { return {ctx, 1}; }
    static PadicScalar from_int(const ContextPtr& ctx, Int v) { return {ctx, v}; }

    const ContextPtr& context() const { return ctx_; }
    Int value() const { return value_; }

    int valuation() const;
    bool is_zero() const { return value_ == 0; }
    bool is_unit() const { return valuation() == 0; }

    PadicScalar unit_inverse() const;
    /// x / p^k with v(x) >= k, canonical representative, same context.
    PadicScalar shift_down(int k) const;
    PadicScalar shift_up(int k) const;
    /// x / p^k living at precision N - k.
    PadicScalar exact_divide_by_p(int k) const;
    PadicScalar pow(std::uint64_t e) const;

    PadicScalar operator-() const;
    friend PadicScalar operator+(const PadicScalar& a, const PadicScalar& b);
    friend PadicScalar operator-(const PadicScalar& a, const PadicScalar& b);
    friend PadicScalar operator*(const PadicScalar& a, const PadicScalar& b);
    PadicScalar& operator+=(const PadicScalar& o) { return *this = *this + o; }
    PadicScalar& operator-=(const PadicScalar& o) { return *this = *this - o; }
    PadicScalar& operator*=(const PadicScalar& o) { return *this = *this * o; }
    friend bool operator==(const PadicScalar& a, const PadicScalar& b);

    std::string to_string() const { return std::to_string(value_); }

private:
    ContextPtr ctx_;
    Int value_ = 0;
};

/// Element of O_K/p^N in the basis 1, w, ..., w^{f-1}.
class UnramifiedScalar {
public:
    UnramifiedScalar() = default;
    UnramifiedScalar(ContextPtr ctx, std::vector<Int> coeffs);

    static UnramifiedScalar zero(const ContextPtr& ctx);
    static UnramifiedScalar one(const ContextPtr& ctx) { return from_int(ctx, 1); }
    static UnramifiedScalar from_int(const ContextPtr& ctx, Int v);
    static UnramifiedScalar from_padic(const PadicScalar& x) { return from_int(x.context(), x.value()); }
    /// The class of the generator w.
    static UnramifiedScalar generator(const ContextPtr& ctx);

    const ContextPtr& context() const { return ctx_; }
    const std::vector<Int>& coeffs() const { return coeffs_; }
    Int coeff(std::size_t i) const { return coeffs_[i]; }

    int valuation() const;
    bool is_zero() const;
    bool is_unit() const { return valuation() == 0; }
    /// True when every coefficient of w^j, j >= 1, vanishes.
    bool is_rational() const;
    PadicScalar to_padic() const;

    UnramifiedScalar unit_inverse() const;
    UnramifiedScalar shift_down(int k) const;
    UnramifiedScalar shift_up(int k) const;
    UnramifiedScalar exact_divide_by_p(int k) const;
    UnramifiedScalar pow(std::uint64_t e) const;
    /// sigma^s, s taken mod f.
    UnramifiedScalar frobenius(int s = 1) const;
    /// The Teichmueller representative of the residue class.
    UnramifiedScalar teichmuller() const;
    /// Product of sigma^i(x) over 0 <= i < f.
    UnramifiedScalar norm() const;

    UnramifiedScalar operator-() const;
    friend UnramifiedScalar operator+(const UnramifiedScalar& a, const UnramifiedScalar& b);
    friend UnramifiedScalar operator-(const UnramifiedScalar& a, const UnramifiedScalar& b);
    friend UnramifiedScalar operator*(const UnramifiedScalar& a, const UnramifiedScalar& b);
    UnramifiedScalar& operator+=(const UnramifiedScalar& o) { return *this = *this + o; }
    UnramifiedScalar& operator-=(const UnramifiedScalar& o) { return *this = *this - o; }
    UnramifiedScalar& operator*=(const UnramifiedScalar& o) { return *this = *this * o; }
    friend bool operator==(const UnramifiedScalar& a, const UnramifiedScalar& b);

    std::string to_string() const;

private:
    ContextPtr ctx_;
    std::vector<Int> coeffs_;
};

inline int valuation(const PadicScalar& x) { return x.valuation(); }
inline int valuation(const UnramifiedScalar& x) { return x.valuation(); }
inline UnramifiedScalar frobenius(const UnramifiedScalar& x, int s) { return x.frobenius(s); }
inline PadicScalar frobenius(const PadicScalar& x, int) { return x; }

void require_same_context(const Context& a, const Context& b);

}  // namespace flh
