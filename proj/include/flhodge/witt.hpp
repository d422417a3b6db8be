#pragma once

// Truncated p-typical Witt vectors W_n(R) over R = O_K/p^M (M = 1 gives F_q).

#include <map>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "flhodge/padic.hpp"

namespace flh {

using BigInt = boost::multiprecision::cpp_int;

/// Multivariate polynomial with integer coefficients; key = exponent vector.
using IntPoly = std::map<std::vector<unsigned>, BigInt>;

IntPoly poly_add(const IntPoly& a, const IntPoly& b);
IntPoly poly_mul(const IntPoly& a, const IntPoly& b);
IntPoly poly_pow(const IntPoly& a, std::uint64_t e);
IntPoly poly_scale(const IntPoly& a, const BigInt& c);
IntPoly poly_variable(std::size_t nvars, std::size_t index);

/// Witt addition and multiplication polynomials S_i, P_i in the 2n variables
/// x_0..x_{n-1}, y_0..y_{n-1}.
struct WittPolynomialCache {
    Int p = 0;
    int length = 0;
    std::vector<IntPoly> sum;
    std::vector<IntPoly> product;
};

inline constexpr int kMaxWittLength = 6;

/// Computed once per (p, n) by solving the ghost equations, then shared.
const WittPolynomialCache& witt_polynomials(Int p, int length);

/// Ghost component w_k = sum_{i<=k} p^i x_i^{p^{k-i}} as a polynomial in x_0..x_{k}.
IntPoly ghost_polynomial(Int p, int k, std::size_t nvars, std::size_t offset);

class WittVector {
public:
    WittVector(ContextPtr coeff_ctx, std::vector<UnramifiedScalar> components);

    static WittVector zero(const ContextPtr& coeff_ctx, int length);

    const ContextPtr& coefficient_context() const { return ctx_; }
    Int p() const { return ctx_->p(); }
    int length() const { return static_cast<int>(components_.size()); }
    const std::vector<UnramifiedScalar>& components() const { return components_; }

    friend bool operator==(const WittVector& a, const WittVector& b) { return a.components_ == b.components_; }

private:
    ContextPtr ctx_;
    std::vector<UnramifiedScalar> components_;
};

std::vector<UnramifiedScalar> ghost(const WittVector& w);

WittVector witt_add(const WittVector& u, const WittVector& v);
WittVector witt_mul(const WittVector& u, const WittVector& v);
WittVector witt_scale_by_p(const WittVector& w);

WittVector teichmuller(const UnramifiedScalar& a, int length);
WittVector verschiebung(const WittVector& w);
/// Requires a characteristic-p coefficient ring, where F is the componentwise p-th power.
WittVector witt_frobenius(const WittVector& w);

/// W_n(F_q) -> O_K/p^n, (x_i) -> sum_i sigma^{-i}(tau(x_i)) p^i.
UnramifiedScalar witt_to_unramified(const WittVector& w, const ContextPtr& target);

/// All q^n vectors of W_n(F_q) in lexicographic component order.
std::vector<WittVector> enumerate_witt_vectors(const ContextPtr& residue_ctx, int length);

}  // namespace flh
