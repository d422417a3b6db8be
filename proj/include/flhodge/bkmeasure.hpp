#pragma once

// Local L-factor and the measure of H^1.

#include <vector>

#include "flhodge/flmod.hpp"

namespace flh {

/// P(X) = Q(p^{x_scale} X) where Q(Y) = det(1 - G Y) and G = A sigma(A) ... sigma^{f-1}(A).
struct EulerFactor {
    std::vector<PadicScalar> q;  // q[0] = 1
    int x_scale = 0;
    int precision = 0;

    std::size_t degree() const { return q.empty() ? 0 : q.size() - 1; }
    /// Coefficients of Q' with P(X) = Q'(p^s X); needs s <= x_scale.
    std::vector<PadicScalar> coefficients_at_scale(int s) const;
    std::string to_string() const;
};

EulerFactor euler_factor(const FilteredPhiModule& D, int margin = kDefaultMargin);
EulerFactor euler_factor(const FLModule& M, int margin = kDefaultMargin);

EulerFactor operator*(const EulerFactor& a, const EulerFactor& b);
bool same_polynomial(const EulerFactor& a, const EulerFactor& b);

/// v_p(P(1)). Throws PVanishesAtOne or InsufficientPrecision.
int value_at_one_valuation(const EulerFactor& P, int margin = kDefaultMargin);

/// (1 - phi) on a complement of M^0, in the free coordinates of H^1(M) (x) Q.
/// The map is p^scale * matrix on domain_basis.
struct IntegralExpMap {
    ZMat domain_basis;
    ZMat matrix;
    int scale = 0;
    ZModule h1;
};

IntegralExpMap integral_exp_map(const FLModule& M, int margin = kDefaultMargin);

struct MeasureReport {
    int v_P_at_1 = 0;
    int log_mu = 0;
    bool identity_holds = false;
    ZModule h1;
    EulerFactor euler;
    IntegralExpMap exp_map;
};

MeasureReport verify_measure_identity(const FLModule& M, int margin = kDefaultMargin);

}  // namespace flh
