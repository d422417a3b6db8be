#include <algorithm>
#include <numeric>

#include "flhodge/flmod.hpp"

namespace flh {

FilteredPhiModule::FilteredPhiModule(ContextPtr ctx, KMat A, int phi_scale, std::vector<FiltrationStep> filtration)
    : ctx_(std::move(ctx)), A_(std::move(A)), scale_(phi_scale), filtration_(std::move(filtration)) {
    if (A_.rows() != A_.cols() || A_.rows() == 0) throw Error(ErrorCode::ShapeMismatch, "phi matrix must be square");
    require_same_context(*ctx_, *A_.context());
    if (filtration_.empty()) throw Error(ErrorCode::InvalidInput, "filtration has no steps");
    for (std::size_t k = 0; k < filtration_.size(); ++k) {
        if (filtration_[k].generators.rows() != A_.rows()) {
            throw Error(ErrorCode::ShapeMismatch, "filtration generators have wrong length");
        }
        if (k > 0 && filtration_[k].jump <= filtration_[k - 1].jump) {
            throw Error(ErrorCode::InvalidInput, "filtration jumps must be strictly increasing");
        }
    }
}

FilteredPhiModule FilteredPhiModule::from_fl_module(const FLModule& M) {
    if (!M.is_free()) throw Error(ErrorCode::NotFree, "only free FL modules give a filtered phi-module");
    return {M.context(), M.phi_matrix(), M.phi_level(), M.filtration()};
}

KMat FilteredPhiModule::linearization() const {
    KMat G = A_;
    for (int s = 1; s < ctx_->degree(); ++s) G = G * A_.frobenius(s);
    return G;
}

FilteredPhiModule FilteredPhiModule::change_basis(const KMat& P) const {
    const KMat Pinv = inverse(P);
    std::vector<FiltrationStep> steps;
    for (const auto& s : filtration_) steps.push_back({s.jump, Pinv * s.generators});
    return {ctx_, Pinv * A_ * P.frobenius(1), scale_, std::move(steps)};
}

int span_dimension(const KMat& gens, int margin) {
    if (gens.cols() == 0) return 0;
    const int N = gens.context()->precision();
    int dim = 0;
    for (int e : smith_normal_form(gens).exponents) {
        if (e < N - margin) {
            ++dim;
        } else if (e < N) {
            throw Error(ErrorCode::InsufficientPrecision, "cannot decide the dimension of a span at this precision");
        }
    }
    return dim;
}

std::vector<int> FilteredPhiModule::hodge_jumps(int margin) const {
    std::vector<int> dims;
    for (const auto& s : filtration_) dims.push_back(span_dimension(s.generators, margin));
    if (dims.front() != static_cast<int>(rank())) throw Error(ErrorCode::InvalidInput, "filtration is not exhaustive");
    dims.push_back(0);
    std::vector<int> jumps;
    for (std::size_t k = 0; k < filtration_.size(); ++k) {
        const int mult = dims[k] - dims[k + 1];
        if (mult < 0) throw Error(ErrorCode::InvalidInput, "filtration is not decreasing");
        for (int t = 0; t < mult; ++t) jumps.push_back(filtration_[k].jump);
    }
    return jumps;
}

int hodge_number(const FilteredPhiModule& D, int margin) {
    const auto jumps = D.hodge_jumps(margin);
    return std::accumulate(jumps.begin(), jumps.end(), 0);
}

int newton_number(const FilteredPhiModule& D, int margin) {
    const int N = D.context()->precision();
    const int dv = determinant_valuation(D.matrix());
    if (dv >= N) throw Error(ErrorCode::SingularPhi, "phi is not invertible at this precision");
    if (dv >= N - margin) throw Error(ErrorCode::InsufficientPrecision, "det(phi) is too close to the precision");
    return static_cast<int>(D.rank()) * D.phi_scale() + dv;
}

std::vector<UnramifiedScalar> principal_minor_sums(const KMat& G) {
    const std::size_t r = G.rows();
    const ContextPtr& ctx = G.context();
    std::vector<UnramifiedScalar> e(r + 1, UnramifiedScalar::zero(ctx));
    e[0] = UnramifiedScalar::one(ctx);
    for (unsigned mask = 1; mask < (1U << r); ++mask) {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < r; ++i) {
            if (mask & (1U << i)) idx.push_back(i);
        }
        KMat sub(ctx, idx.size(), idx.size());
        for (std::size_t a = 0; a < idx.size(); ++a) {
            for (std::size_t b = 0; b < idx.size(); ++b) sub(a, b) = G(idx[a], idx[b]);
        }
        e[idx.size()] += determinant(sub);
    }
    return e;
}

namespace {

Int lcm_upto(std::size_t r) {
    Int l = 1;
    for (Int k = 2; k <= static_cast<Int>(r); ++k) l = std::lcm(l, k);
    return l;
}

}  // namespace

Polygon newton_polygon(const FilteredPhiModule& D, int margin) {
    newton_number(D, margin);  // singularity and precision checks
    const int N = D.context()->precision();
    const auto f = static_cast<Int>(D.context()->degree());
    const std::size_t r = D.rank();
    const auto e = principal_minor_sums(D.linearization());
    std::vector<std::pair<Int, Int>> pts;
    for (std::size_t k = 0; k <= r; ++k) {
        const int v = e[k].valuation();
        if (v < N) pts.emplace_back(static_cast<Int>(k), v);
    }
    // Lower convex hull.
    std::vector<std::pair<Int, Int>> hull;
    for (const auto& pt : pts) {
        while (hull.size() >= 2) {
            const auto& a = hull[hull.size() - 2];
            const auto& b = hull.back();
            // drop b when it lies on or above the segment a -> pt
            if ((b.second - a.second) * (pt.first - a.first) >= (pt.second - a.second) * (b.first - a.first)) {
                hull.pop_back();
            } else {
                break;
            }
        }
        hull.push_back(pt);
    }
    const Int L = lcm_upto(r);
    Polygon poly;
    poly.denominator = f * L;
    for (std::size_t k = 0; k <= r; ++k) {
        const auto K = static_cast<Int>(k);
        std::size_t seg = 0;
        while (seg + 1 < hull.size() && hull[seg + 1].first < K) ++seg;
        Int scaled;  // hull height at k times L
        if (hull[seg].first == K) {
            scaled = hull[seg].second * L;
        } else {
            const auto& a = hull[seg];
            const auto& b = hull[seg + 1];
            scaled = a.second * L + (K - a.first) * (b.second - a.second) * (L / (b.first - a.first));
        }
        poly.numerators.push_back(scaled + K * D.phi_scale() * f * L);
    }
    return poly;
}

Polygon hodge_polygon(const FilteredPhiModule& D, int margin) {
    Polygon poly;
    Int h = 0;
    poly.numerators.push_back(0);
    for (int j : D.hodge_jumps(margin)) {
        h += j;
        poly.numerators.push_back(h);
    }
    return poly;
}

std::string admissibility_name(Admissibility a) {
    switch (a) {
        case Admissibility::Admissible: return "admissible";
        case Admissibility::NotAdmissible: return "not_admissible";
        case Admissibility::IncompleteCheck: return "incomplete_check";
    }
    return "unknown";
}

namespace {

// Largest jump i with v in D^i.
int line_hodge(const FilteredPhiModule& D, const KVec& v, int margin) {
    const KMat col = KMat::from_columns(D.context(), D.rank(), {v});
    int best = D.filtration().front().jump;
    for (const auto& s : D.filtration()) {
        const int d = span_dimension(s.generators, margin);
        if (d > 0 && span_dimension(hstack(s.generators, col), margin) == d) best = s.jump;
    }
    return best;
}

// Eigenline of the linearization for its smaller slope (distinct slopes, rank 2).
KVec small_slope_line(const KMat& G, const UnramifiedScalar& c1, const UnramifiedScalar& c2) {
    const ContextPtr& ctx = G.context();
    const int k = c1.valuation();
    // lambda = c1 - c2 / lambda converges to the root of valuation k.
    UnramifiedScalar lambda = c1;
    const UnramifiedScalar c2_red = c2.shift_down(k);
    for (int it = 0; it < 2 * ctx->precision() + 2; ++it) {
        const UnramifiedScalar next = c1 - c2_red * lambda.shift_down(k).unit_inverse();
        if (next == lambda) break;
        lambda = next;
    }
    KMat shifted = G;
    for (std::size_t i = 0; i < G.rows(); ++i) shifted(i, i) -= lambda;
    return smith_normal_form(shifted).V.column(1);
}

bool polygon_above(const Polygon& upper, const Polygon& lower) {
    for (std::size_t k = 0; k < upper.numerators.size(); ++k) {
        if (upper.numerators[k] * lower.denominator < lower.numerators[k] * upper.denominator) return false;
    }
    return true;
}

}  // namespace

AdmissibilityResult is_admissible(const FilteredPhiModule& D, int margin) {
    const ContextPtr& ctx = D.context();
    const int N = ctx->precision();
    const std::size_t r = D.rank();
    const int tH = hodge_number(D, margin);
    const int tN = newton_number(D, margin);
    if (tH != tN) {
        return {Admissibility::NotAdmissible, KMat::identity(ctx, r), tH, tN, "t_H(D) != t_N(D)"};
    }
    if (r == 1) return {Admissibility::Admissible, std::nullopt, 0, 0, "rank one, endpoints agree"};

    const Polygon newton = newton_polygon(D, margin);
    const Polygon hodge = hodge_polygon(D, margin);
    if (r >= 3) {
        if (!polygon_above(newton, hodge)) {
            return {Admissibility::NotAdmissible, std::nullopt, 0, 0, "Newton polygon lies below the Hodge polygon"};
        }
        return {Admissibility::IncompleteCheck, std::nullopt, 0, 0, "polygon test passed; subobjects not enumerated"};
    }

    const auto jumps = D.hodge_jumps(margin);
    const int h_low = jumps[0];
    const int h_top = jumps[1];
    // Every stable line other than D^{h_top} has t_H = h_low and t_N >= smallest slope.
    if (newton.numerators[1] < static_cast<Int>(h_low) * newton.denominator) {
        const KMat G = D.linearization();
        const auto e = principal_minor_sums(G);
        const KVec line = small_slope_line(G, e[1], e[2]);
        const int f = ctx->degree();
        const int t_n = e[1].valuation() / f + D.phi_scale();
        return {Admissibility::NotAdmissible, KMat::from_columns(ctx, r, {line}), line_hodge(D, line, margin), t_n,
                "the smallest-slope line has t_H > t_N"};
    }
    if (h_low < h_top) {
        const auto it = std::find_if(D.filtration().begin(), D.filtration().end(),
                                     [&](const FiltrationStep& s) { return s.jump >= h_top; });
        const KVec ell = smith_normal_form(it->generators).U_inverse.column(0);
        KVec twisted{ell[0].frobenius(1), ell[1].frobenius(1)};
        const KVec w = D.matrix() * twisted;
        const UnramifiedScalar det = ell[0] * w[1] - ell[1] * w[0];
        if (det.is_zero()) {
            const std::size_t i = ell[0].is_unit() ? 0 : 1;
            const UnramifiedScalar mu = w[i] * ell[i].unit_inverse();
            if (mu.is_zero()) throw Error(ErrorCode::SingularPhi, "phi kills the filtration line");
            const int t_n = D.phi_scale() + mu.valuation();
            if (h_top > t_n) {
                return {Admissibility::NotAdmissible, KMat::from_columns(ctx, r, {ell}), h_top, t_n,
                        "the filtration line is phi-stable with t_H > t_N"};
            }
        } else if (det.valuation() >= N - margin) {
            throw Error(ErrorCode::InsufficientPrecision, "cannot decide whether the filtration line is phi-stable");
        }
    }
    return {Admissibility::Admissible, std::nullopt, 0, 0, "all phi-stable lines satisfy t_H <= t_N"};
}

namespace {

struct LatticeData {
    int E = 0;               // B^{-1} = p^{-E} * adj
    KMat cint;               // phi on the lattice basis is p^{scale - E} * cint * sigma
    std::vector<FiltrationStep> steps;  // saturated M^i
};

LatticeData lattice_data(const FilteredPhiModule& D, const KMat& B, int margin) {
    const ContextPtr& ctx = D.context();
    const int N = ctx->precision();
    const std::size_t r = D.rank();
    if (B.rows() != r || B.cols() != r) throw Error(ErrorCode::ShapeMismatch, "lattice basis must be r x r");
    const auto nf = smith_normal_form(B);
    LatticeData out;
    for (int e : nf.exponents) {
        if (e >= N - margin) throw Error(ErrorCode::InsufficientPrecision, "lattice basis is degenerate at this precision");
        out.E = std::max(out.E, e);
    }
    KMat scale(ctx, r, r);
    for (std::size_t i = 0; i < r; ++i) scale(i, i) = UnramifiedScalar::one(ctx).shift_up(out.E - nf.exponents[i]);
    const KMat adj = nf.V * scale * nf.U;
    out.cint = adj * D.matrix() * B.frobenius(1);
    for (const auto& s : D.filtration()) {
        const KMat Y = adj * s.generators;
        const int dim = span_dimension(Y, margin);
        const KMat Ui = smith_normal_form(Y).U_inverse;
        out.steps.push_back({s.jump, Ui.select_columns(0, static_cast<std::size_t>(dim))});
    }
    return out;
}

}  // namespace

LatticeCriteria lattice_criteria(const FilteredPhiModule& D, const KMat& B, int margin) {
    const int N = D.context()->precision();
    const LatticeData L = lattice_data(D, B, margin);
    LatticeCriteria out;
    out.divisibility = true;
    std::vector<KVec> divided;
    for (const auto& s : L.steps) {
        const int need = s.jump + L.E - D.phi_scale();
        if (need >= N - margin) throw Error(ErrorCode::InsufficientPrecision, "divisibility exponent exceeds the precision");
        for (const auto& g : s.generators.columns()) {
            KVec twisted;
            for (const auto& c : g) twisted.push_back(c.frobenius(1));
            const KVec z = L.cint * twisted;
            if (min_valuation(z, N) < need) {
                out.divisibility = false;
                continue;
            }
            KVec d;
            for (const auto& c : z) d.push_back(need >= 0 ? c.shift_down(need) : c.shift_up(-need));
            divided.push_back(d);
        }
    }
    if (out.divisibility) {
        out.strongly_divisible = cokernel(KMat::from_columns(D.context(), D.rank(), divided)).is_zero();
    }
    return out;
}

FLModule fl_module_from_lattice(const FilteredPhiModule& D, const KMat& B, int margin) {
    if (!lattice_criteria(D, B, margin).divisibility) {
        throw Error(ErrorCode::InvalidInput, "phi(M^i) is not contained in p^i M");
    }
    const ContextPtr& ctx = D.context();
    const LatticeData L = lattice_data(D, B, margin);
    const int a = L.steps.front().jump;
    const int need = a + L.E - D.phi_scale();
    KMat phi = L.cint;
    for (std::size_t i = 0; i < phi.rows(); ++i) {
        for (std::size_t j = 0; j < phi.cols(); ++j) {
            phi(i, j) = need >= 0 ? phi(i, j).shift_down(need) : phi(i, j).shift_up(-need);
        }
    }
    return {ctx, std::vector<int>(D.rank(), ctx->precision()), L.steps, a, phi};
}

}  // namespace flh
