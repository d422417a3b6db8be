#include "flhodge/flmod.hpp"

#include <algorithm>
#include <set>

namespace flh {

UnramifiedScalar reduce_mod(const UnramifiedScalar& x, int e) {
    const ContextPtr& ctx = x.context();
    if (e >= ctx->precision()) return x;
    std::vector<Int> c = x.coeffs();
    for (auto& v : c) v %= ctx->pow_p(e);
    return {ctx, std::move(c)};
}

FLModule::FLModule(ContextPtr ctx, std::vector<int> exponents, std::vector<FiltrationStep> filtration, int phi_level,
                   KMat phi)
    : ctx_(std::move(ctx)),
      exponents_(std::move(exponents)),
      filtration_(std::move(filtration)),
      phi_level_(phi_level),
      phi_(std::move(phi)) {
    const std::size_t r = exponents_.size();
    const int N = ctx_->precision();
    for (int e : exponents_) {
        if (e < 0 || e > N) throw Error(ErrorCode::InvalidInput, "elementary divisor exponent out of range");
    }
    if (filtration_.empty()) throw Error(ErrorCode::InvalidInput, "filtration has no steps");
    if (phi_.rows() != r || phi_.cols() != r) throw Error(ErrorCode::ShapeMismatch, "phi matrix must be r x r");
    require_same_context(*ctx_, *phi_.context());
    for (const auto& step : filtration_) {
        if (step.generators.rows() != r) throw Error(ErrorCode::ShapeMismatch, "filtration generators have wrong length");
        require_same_context(*ctx_, *step.generators.context());
    }
}

FLModule FLModule::free_single_jump(const ContextPtr& ctx, int level, const KMat& phi) {
    const std::size_t r = phi.rows();
    return {ctx, std::vector<int>(r, ctx->precision()), {{level, KMat::identity(ctx, r)}}, level, phi};
}

bool FLModule::has_free_part() const {
    return std::any_of(exponents_.begin(), exponents_.end(), [&](int e) { return e == ctx_->precision(); });
}

bool FLModule::is_free() const {
    return std::all_of(exponents_.begin(), exponents_.end(), [&](int e) { return e == ctx_->precision(); });
}

int FLModule::max_torsion_exponent() const {
    int m = 0;
    for (int e : exponents_) {
        if (e < ctx_->precision()) m = std::max(m, e);
    }
    return m;
}

KMat FLModule::relations() const {
    KMat R(ctx_, rank(), rank());
    for (std::size_t i = 0; i < rank(); ++i) R(i, i) = UnramifiedScalar::one(ctx_).shift_up(exponents_[i]);
    return R;
}

KMat FLModule::level_generators(int i) const {
    for (const auto& step : filtration_) {
        if (step.jump >= i) return step.generators;
    }
    return {ctx_, rank(), 0};
}

KVec FLModule::reduce(const KVec& x) const {
    KVec out;
    out.reserve(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) out.push_back(reduce_mod(x[j], exponents_[j]));
    return out;
}

KVec FLModule::phi_low(const KVec& x) const {
    KVec twisted;
    twisted.reserve(x.size());
    for (const auto& c : x) twisted.push_back(c.frobenius(1));
    return reduce(phi_ * twisted);
}

KVec FLModule::phi(int i, const KVec& x) const {
    KVec y = phi_low(x);
    if (i < phi_level_) return reduce(scaled_up(y, phi_level_ - i));
    const int k = i - phi_level_;
    for (auto& c : y) {
        if (c.is_zero()) continue;
        if (c.valuation() < k) {
            throw Error(ErrorCode::NotDivisible, "phi^" + std::to_string(i) + " is not defined on this vector");
        }
        c = c.shift_down(k);
    }
    return reduce(y);
}

std::string violation_kind_name(ViolationKind kind) {
    switch (kind) {
        case ViolationKind::Shape: return "shape";
        case ViolationKind::Chain: return "chain";
        case ViolationKind::Exhaustive: return "exhaustive";
        case ViolationKind::Relations: return "relations";
        case ViolationKind::DividedFrobenius: return "divided_frobenius";
        case ViolationKind::Precision: return "precision";
    }
    return "unknown";
}

namespace {

KVec unit_vector(const ContextPtr& ctx, std::size_t r, std::size_t k) {
    KVec v(r, UnramifiedScalar::zero(ctx));
    v[k] = UnramifiedScalar::one(ctx);
    return v;
}

KMat block_diagonal(const KMat& a, const KMat& b) {
    KMat m(a.context(), a.rows() + b.rows(), a.cols() + b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
    }
    for (std::size_t i = 0; i < b.rows(); ++i) {
        for (std::size_t j = 0; j < b.cols(); ++j) m(a.rows() + i, a.cols() + j) = b(i, j);
    }
    return m;
}

// Z-linear extension of phi^i from the Z-generators of M^i must respect their relations.
std::optional<KVec> ill_defined_combination(const FLModule& M, int i) {
    const ContextPtr& ctx = M.context();
    if (M.is_free()) return std::nullopt;
    const auto f = static_cast<std::size_t>(ctx->degree());
    const std::size_t rows = M.rank() * f;
    const UnramifiedScalar w = UnramifiedScalar::generator(ctx);
    std::vector<Vec<PadicScalar>> xs, ys;
    for (const auto& g : M.level_generators(i).columns()) {
        UnramifiedScalar w_power = UnramifiedScalar::one(ctx);
        for (std::size_t j = 0; j < f; ++j) {
            KVec x;
            for (const auto& c : g) x.push_back(c * w_power);
            x = M.reduce(x);
            xs.push_back(restrict_vector(x));
            ys.push_back(restrict_vector(M.phi(i, x)));
            w_power = w_power * w;
        }
    }
    if (xs.empty()) return std::nullopt;
    const ZMat X = ZMat::from_columns(ctx, rows, xs);
    const ZMat Y = ZMat::from_columns(ctx, rows, ys);
    const ZMat RZ = restrict_scalars({M.relations(), 0});
    for (const auto& c : kernel(hstack(X, RZ)).generators) {
        const Vec<PadicScalar> coeffs(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(X.cols()));
        const KVec image = M.reduce(extend_vector(ctx, Y * coeffs));
        if (!std::all_of(image.begin(), image.end(), [](const UnramifiedScalar& x) { return x.is_zero(); })) {
            return M.reduce(extend_vector(ctx, X * coeffs));
        }
    }
    return std::nullopt;
}

}  // namespace

std::optional<Violation> validate(const FLModule& M, int margin) {
    const ContextPtr& ctx = M.context();
    const std::size_t r = M.rank();
    const auto& steps = M.filtration();
    for (std::size_t k = 1; k < steps.size(); ++k) {
        if (steps[k].jump <= steps[k - 1].jump) {
            return Violation{ViolationKind::Shape, "filtration jumps must be strictly increasing", {}};
        }
    }
    if (M.phi_level() != M.lowest_jump()) {
        return Violation{ViolationKind::Chain,
                         "phi is declared at level " + std::to_string(M.phi_level()) +
                             " but the filtration starts at " + std::to_string(M.lowest_jump()),
                         {}};
    }
    const KMat R = M.relations();
    const KMat first = hstack(steps.front().generators, R);
    for (std::size_t k = 0; k < r; ++k) {
        KVec e = unit_vector(ctx, r, k);
        if (!in_span(first, e)) {
            return Violation{ViolationKind::Exhaustive, "lowest filtration step does not span M", e};
        }
    }
    for (std::size_t k = 1; k < steps.size(); ++k) {
        const KMat prev = hstack(steps[k - 1].generators, R);
        for (const auto& g : steps[k].generators.columns()) {
            if (!in_span(prev, g)) {
                return Violation{ViolationKind::Chain,
                                 "M^" + std::to_string(steps[k].jump) + " is not contained in M^" +
                                     std::to_string(steps[k - 1].jump),
                                 g};
            }
        }
    }
    const KMat& Phi = M.phi_matrix();
    for (std::size_t j = 0; j < r; ++j) {
        if (M.exponents()[j] >= ctx->precision()) continue;
        const KVec image = M.reduce(scaled_up(Phi.column(j), M.exponents()[j]));
        if (!std::all_of(image.begin(), image.end(), [](const UnramifiedScalar& x) { return x.is_zero(); })) {
            return Violation{ViolationKind::Relations, "phi does not preserve the relations of M", unit_vector(ctx, r, j)};
        }
    }
    for (std::size_t k = 1; k < steps.size(); ++k) {
        const int shift = steps[k].jump - M.phi_level();
        for (const auto& g : steps[k].generators.columns()) {
            for (const auto& c : M.phi_low(g)) {
                if (!c.is_zero() && c.valuation() < shift) {
                    return Violation{ViolationKind::DividedFrobenius,
                                     "phi^" + std::to_string(M.phi_level()) + "(M^" + std::to_string(steps[k].jump) +
                                         ") is not contained in p^" + std::to_string(shift) + " M",
                                     g};
                }
            }
        }
    }
    std::vector<int> levels;
    for (std::size_t k = 1; k < steps.size(); ++k) levels.push_back(steps[k].jump);
    if (M.phi_level() < 0 && M.highest_jump() >= 0) levels.push_back(0);
    for (int i : levels) {
        if (auto bad = ill_defined_combination(M, i)) {
            return Violation{ViolationKind::DividedFrobenius,
                             "phi^" + std::to_string(i) + " is not well defined on M^" + std::to_string(i), *bad};
        }
    }
    const int n_eff = ctx->precision() - (M.highest_jump() - M.lowest_jump());
    if (M.has_free_part() && n_eff < margin) {
        return Violation{ViolationKind::Precision,
                         "effective precision " + std::to_string(n_eff) + " is below the margin " + std::to_string(margin),
                         {}};
    }
    return std::nullopt;
}

FLModule direct_sum(const FLModule& A, const FLModule& B) {
    require_same_context(*A.context(), *B.context());
    const ContextPtr& ctx = A.context();
    const int a = std::min(A.phi_level(), B.phi_level());
    const KMat phi =
        block_diagonal(A.phi_matrix().scaled_up(A.phi_level() - a), B.phi_matrix().scaled_up(B.phi_level() - a));
    std::set<int> jumps;
    for (const auto& s : A.filtration()) jumps.insert(s.jump);
    for (const auto& s : B.filtration()) jumps.insert(s.jump);
    std::vector<FiltrationStep> steps;
    for (int i : jumps) steps.push_back({i, block_diagonal(A.level_generators(i), B.level_generators(i))});
    std::vector<int> exps = A.exponents();
    exps.insert(exps.end(), B.exponents().begin(), B.exponents().end());
    return {ctx, std::move(exps), std::move(steps), a, phi};
}

FLModule tate_twist(const FLModule& M) {
    std::vector<FiltrationStep> steps = M.filtration();
    for (auto& s : steps) s.jump += 1;
    return {M.context(), M.exponents(), std::move(steps), M.phi_level() + 1, M.phi_matrix()};
}

bool is_strongly_divisible(const FLModule& M) {
    std::vector<KVec> images;
    for (const auto& step : M.filtration()) {
        for (const auto& g : step.generators.columns()) images.push_back(M.phi(step.jump, g));
    }
    const KMat W = hstack(KMat::from_columns(M.context(), M.rank(), images), M.relations());
    return cokernel(W).is_zero();
}

}  // namespace flh
