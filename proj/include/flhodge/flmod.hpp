#pragma once

// Fontaine-Laffaille modules over O_K/p^N and filtered phi-modules over K.
//
// An FL module is O_K^r / (p^{e_1}, ..., p^{e_r}) (e = N reads as free) with a
// decreasing filtration given by generators and the single divided Frobenius
// at the lowest level a. Higher phi^i are recovered by exact division.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "flhodge/linalg.hpp"

namespace flh {

using KVec = Vec<UnramifiedScalar>;
using ZVec = Vec<PadicScalar>;

constexpr int kDefaultMargin = 3;

/// Generators (as columns) of the filtration step at `jump`.
struct FiltrationStep {
    int jump = 0;
    KMat generators;
};

/// x with every coordinate reduced to its representative in [0, p^e).
UnramifiedScalar reduce_mod(const UnramifiedScalar& x, int e);

class FLModule {
public:
    /// Throws ShapeMismatch / InvalidInput on malformed data; semantic checks live in validate().
    FLModule(ContextPtr ctx, std::vector<int> exponents, std::vector<FiltrationStep> filtration, int phi_level, KMat phi);

    /// Free module of rank r with a single jump at `level` and phi^level = phi.
    static FLModule free_single_jump(const ContextPtr& ctx, int level, const KMat& phi);

    const ContextPtr& context() const { return ctx_; }
    std::size_t rank() const { return exponents_.size(); }
    const std::vector<int>& exponents() const { return exponents_; }
    const std::vector<FiltrationStep>& filtration() const { return filtration_; }
    int phi_level() const { return phi_level_; }
    const KMat& phi_matrix() const { return phi_; }

    int lowest_jump() const { return filtration_.front().jump; }
    int highest_jump() const { return filtration_.back().jump; }
    bool has_free_part() const;
    bool is_free() const;
    int max_torsion_exponent() const;  // 0 when there is no torsion component

    /// diag(p^{e_i}); free components give zero columns.
    KMat relations() const;
    /// Generators of M^i for any integer i (identity below a, empty above b).
    KMat level_generators(int i) const;

    KVec reduce(const KVec& x) const;
    /// Phi sigma(x), reduced.
    KVec phi_low(const KVec& x) const;
    /// phi^i(x) for x in M^i. Throws NotDivisible when the division is not exact.
    KVec phi(int i, const KVec& x) const;

private:
    ContextPtr ctx_;
    std::vector<int> exponents_;
    std::vector<FiltrationStep> filtration_;
    int phi_level_;
    KMat phi_;
};

enum class ViolationKind { Shape, Chain, Exhaustive, Relations, DividedFrobenius, Precision };

std::string violation_kind_name(ViolationKind kind);

struct Violation {
    ViolationKind kind;
    std::string message;
    KVec witness;
};

/// First violated invariant, or nullopt.
std::optional<Violation> validate(const FLModule& M, int margin = kDefaultMargin);

/// Block sum. The lower phi level wins; the other block is scaled up.
FLModule direct_sum(const FLModule& A, const FLModule& B);

/// Same module with phi replaced by p * phi and every jump shifted by +1.
FLModule tate_twist(const FLModule& M);

/// O_K-span of phi^i(M^i) over all i equals M.
bool is_strongly_divisible(const FLModule& M);

// ---------------------------------------------------------------------------
// Filtered phi-modules

class FilteredPhiModule {
public:
    /// phi = p^{phi_scale} * A * sigma with A integral.
    FilteredPhiModule(ContextPtr ctx, KMat A, int phi_scale, std::vector<FiltrationStep> filtration);

    /// D = M[1/p] with phi = p^a Phi sigma and D^i spanned by M^i.
    static FilteredPhiModule from_fl_module(const FLModule& M);

    const ContextPtr& context() const { return ctx_; }
    std::size_t rank() const { return A_.rows(); }
    const KMat& matrix() const { return A_; }
    int phi_scale() const { return scale_; }
    const std::vector<FiltrationStep>& filtration() const { return filtration_; }

    /// Jumps with multiplicity (dim gr^i copies of i), ascending.
    std::vector<int> hodge_jumps(int margin = kDefaultMargin) const;
    /// A sigma(A) ... sigma^{f-1}(A): phi^f = p^{f * scale} times this matrix.
    KMat linearization() const;

    /// This module with the basis changed by P (new basis vectors are the columns of P).
    FilteredPhiModule change_basis(const KMat& P) const;

private:
    ContextPtr ctx_;
    KMat A_;
    int scale_;
    std::vector<FiltrationStep> filtration_;
};

/// K-dimension of the span of the columns; throws InsufficientPrecision near the precision.
int span_dimension(const KMat& gens, int margin = kDefaultMargin);

int hodge_number(const FilteredPhiModule& D, int margin = kDefaultMargin);
/// Throws SingularPhi.
int newton_number(const FilteredPhiModule& D, int margin = kDefaultMargin);

/// Newton polygon of phi: f * (polygon height) at k = 0..r, as exact fractions num/den.
struct Polygon {
    std::vector<Int> numerators;  // heights scaled by `denominator`
    Int denominator = 1;
};
Polygon newton_polygon(const FilteredPhiModule& D, int margin = kDefaultMargin);
Polygon hodge_polygon(const FilteredPhiModule& D, int margin = kDefaultMargin);

/// Sums of principal k-minors e_0..e_r of a square matrix (e_0 = 1).
std::vector<UnramifiedScalar> principal_minor_sums(const KMat& G);

enum class Admissibility { Admissible, NotAdmissible, IncompleteCheck };

std::string admissibility_name(Admissibility a);

struct AdmissibilityResult {
    Admissibility verdict;
    std::optional<KMat> witness;  // basis of a violating subobject
    int witness_hodge = 0;
    int witness_newton = 0;
    std::string reason;
};

AdmissibilityResult is_admissible(const FilteredPhiModule& D, int margin = kDefaultMargin);

/// A lattice B (columns) inside D with the induced filtration M^i = B^{-1} D^i ∩ O_K^r.
struct LatticeCriteria {
    bool divisibility = false;        // phi(M^i) ⊆ p^i M at every jump
    bool strongly_divisible = false;  // divisibility and sum of p^{-i} phi(M^i) = M
};

LatticeCriteria lattice_criteria(const FilteredPhiModule& D, const KMat& B, int margin = kDefaultMargin);

/// The FL module structure on B; throws InvalidInput when the divisibility criterion fails.
FLModule fl_module_from_lattice(const FilteredPhiModule& D, const KMat& B, int margin = kDefaultMargin);

// ---------------------------------------------------------------------------
// Morphisms, kernels and cokernels

struct FLMorphism {
    FLModule source;
    FLModule target;
    KMat matrix;  // target.rank() x source.rank()
};

std::optional<Violation> check_morphism(const FLMorphism& f);

/// A module built from f together with its map (inclusion into the source, or projection from the target).
struct InducedModule {
    FLModule module;
    KMat map;
};

InducedModule kernel_flmod(const FLMorphism& f);
InducedModule cokernel_flmod(const FLMorphism& f);

// ---------------------------------------------------------------------------
// Cohomology

using ZModule = ModuleStructure<PadicScalar>;

/// Generators of M^0 and the divided Frobenius phi^0 on them, as Z/p^N data.
struct ZeroLevel {
    ZMat generators;  // Z-coordinates (r f rows) of the Z-spanning set of M^0
    ZMat one_minus_phi;  // Z-coordinates of (1 - phi^0) on those generators
    ZMat relations;      // Z-coordinates of the relations of M
};

ZeroLevel zero_level(const FLModule& M);

/// For free M only the classes of full length are kept; shorter ones are truncation artifacts.
ZModule h0(const FLModule& M, int margin = kDefaultMargin);
/// Kernel of 1 - phi^0 on M read literally as a finite Z/p^N-module.
ZModule h0_truncated(const FLModule& M);
ZModule h1(const FLModule& M, int margin = kDefaultMargin);

struct ShortExactSequence {
    FLMorphism inclusion;   // M' -> M
    FLMorphism projection;  // M -> M''
};

struct SixTermReport {
    std::array<bool, 6> exact{};
    std::array<int, 6> lengths{};  // H0(M'), H0(M), H0(M''), H1(M'), H1(M), H1(M'')
    std::vector<ZVec> delta_images;  // Z-coordinates in M' of delta(generator)
    bool delta_zero = true;
    bool all_exact() const;
};

/// delta on each H0(M'') generator plus exactness at all six positions.
/// Throws NotExact or LiftFailure.
SixTermReport connecting_delta(const ShortExactSequence& ses);

}  // namespace flh
