// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "fixtures.hpp"
#include "flhodge/bkmeasure.hpp"
#include "flhodge/io.hpp"
#include "flhodge/series.hpp"
#include "flhodge/witt.hpp"
#include "oracles.hpp"

using namespace flh;
using namespace flh::testing;

namespace {

// Pinned sizes and precisions.
constexpr int kMeasurePrecision = 10;
constexpr int kSesInstances = 50;
constexpr int kLatticeInstances = 100;
constexpr int kBaseChanges = 20;
constexpr int kSnfMatrices = 200;
constexpr int kLemmaPrecision = 10;
constexpr int kLemmaDegree = 19;  // mod X^20
constexpr int kClosedFormPrecision = 25;
constexpr int kClosedFormTerms = 20;
constexpr int kRoundtripDegree = 12;

struct Check {
    bool ok = true;
    std::ostringstream notes;

    void require(bool cond, const std::string& what) {
        if (!cond && ok) notes << "first failure: " << what << "; ";
        ok = ok && cond;
    }
};

// ---------------------------------------------------------------------------

Check measure_identity() {
    Check c;
    int bundled = 0;
    for (const auto& entry : std::filesystem::directory_iterator(FLH_DATA_DIR)) {
        if (entry.path().extension() != ".json") continue;
        const io::Instance inst = io::load_instance(entry.path());
        const MeasureReport r = verify_measure_identity(inst.module);
        const std::string name = entry.path().filename().string();
        c.require(r.identity_holds, name + " identity");
        if (inst.expect.v_P_at_1) c.require(r.v_P_at_1 == *inst.expect.v_P_at_1, name + " v_P_at_1");
        if (inst.expect.h1_torsion) c.require(r.h1.torsion_exponents() == *inst.expect.h1_torsion, name + " h1");
        ++bundled;
    }
    c.require(bundled > 0, "bundled corpus present");

    auto expect = [&](const FLModule& M, int value, const std::string& name) {
        c.require(kMeasurePrecision >= std::abs(value) + 5, name + " precision");
        const MeasureReport r = verify_measure_identity(M);
        c.require(r.v_P_at_1 == value && r.log_mu == value && r.identity_holds, name);
    };
    for (Int p : {3, 5}) {
        auto ctx = Context::make(p, kMeasurePrecision, 1);
        expect(rank_one(ctx, 0, 1 + p), 1, "1+p at p=" + std::to_string(p));
        expect(rank_one(ctx, 0, 1 + p * p), 2, "1+p^2 at p=" + std::to_string(p));
    }
    auto ctx = Context::make(3, kMeasurePrecision, 1);
    expect(rank_one(ctx, -1, 1), -1, "Tate jump -1");
    expect(direct_sum(rank_one(ctx, 0, 4), rank_one(ctx, -1, 1)), 0, "unramified + Tate");
    auto ctx2 = Context::make(3, kMeasurePrecision, 2);
    const UnramifiedScalar one_w = UnramifiedScalar::one(ctx2) + UnramifiedScalar::generator(ctx2);
    const UnramifiedScalar alpha = UnramifiedScalar::from_int(ctx2, 2) * one_w * one_w.frobenius(1).unit_inverse();
    c.require(alpha.norm() == UnramifiedScalar::from_int(ctx2, 4), "norm of alpha is 1+p");
    expect(rank_one(ctx2, 0, alpha), 1, "f=2 norm 1+p");
    c.notes << bundled << " bundled instances and 7 reference instances";
    return c;
}

Check cohomology_oracle() {
    Check c;
    const auto instances = small_instances();
    std::size_t max_elements = 0;
    for (const auto& M : instances) {
        const BruteCohomology b = brute_cohomology(M);
        std::size_t card = 1;
        for (int e : M.exponents()) card <<= e;
        max_elements = std::max(max_elements, card);
        c.require(b.consistent, "phi^0 well defined");
        c.require(torsion_profile(h0_truncated(M), 2) == b.h0, "H0 profile");
        c.require(torsion_profile(h1(M, 0), 2) == b.h1, "H1 profile");
    }
    c.require(max_elements <= 256, "instance size");
    c.notes << instances.size() << " instances, up to " << max_elements << " elements";
    return c;
}

ShortExactSequence split_sequence(const FLModule& A, const FLModule& B) {
    const ContextPtr& ctx = A.context();
    const FLModule M = direct_sum(A, B);
    KMat inc(ctx, M.rank(), A.rank()), proj(ctx, B.rank(), M.rank());
    for (std::size_t i = 0; i < A.rank(); ++i) inc(i, i) = UnramifiedScalar::one(ctx);
    for (std::size_t i = 0; i < B.rank(); ++i) proj(i, A.rank() + i) = UnramifiedScalar::one(ctx);
    return {{A, M, inc}, {M, B, proj}};
}

FLModule valid_random(const ContextPtr& ctx, std::size_t r, std::mt19937_64& rng) {
    for (;;) {
        FLModule M = random_fl_module(ctx, r, rng);
        if (!validate(M, 0)) return M;
    }
}

Check delta_functor() {
    Check c;
    std::mt19937_64 rng(3141);
    int done = 0, split = 0, torsion = 0, nonzero_delta = 0;
    while (done < kSesInstances) {
        auto ctx = Context::make(3, 4, 1 + done % 2);
        ShortExactSequence ses = [&] {
            if (done % 3 == 0) {
                ++split;
                return split_sequence(valid_random(ctx, 1, rng), valid_random(ctx, 1, rng));
            }
            for (;;) {
                const FLModule M = valid_random(ctx, 1 + rng() % 2, rng);
                const KMat pk = KMat::identity(ctx, M.rank()).scaled_up(1 + static_cast<int>(rng() % 2));
                const auto K = kernel_flmod({M, M, pk});
                if (K.module.rank() == 0) continue;
                const auto C = cokernel_flmod({K.module, M, K.map});
                return ShortExactSequence{{K.module, M, K.map}, {M, C.module, C.map}};
            }
        }();
        if (!ses.inclusion.target.is_free()) ++torsion;
        const SixTermReport rep = connecting_delta(ses);
        c.require(rep.all_exact(), "six-term exactness");
        if (!rep.delta_zero) ++nonzero_delta;
        ++done;
    }
    c.notes << done << " sequences (" << split << " split, " << torsion << " with torsion middle term, "
            << nonzero_delta << " with nonzero connecting map)";
    return c;
}

/// Free strongly divisible lattice: levels 0, jumps {0}, {0,1} or {0,2}.
FLModule random_sd_lattice(const ContextPtr& ctx, std::mt19937_64& rng) {
    const std::size_t r = 1 + rng() % 2;
    KMat phi = random_unimodular(ctx, r, rng);
    std::vector<FiltrationStep> steps{{0, KMat::identity(ctx, r)}};
    const int top = static_cast<int>(rng() % 3);
    if (top > 0) {
        for (std::size_t i = 0; i < r; ++i) phi(i, 0) = phi(i, 0).shift_up(top);
        KMat g(ctx, r, 1);
        g(0, 0) = UnramifiedScalar::one(ctx);
        steps.push_back({top, g});
    }
    return {ctx, std::vector<int>(r, ctx->precision()), steps, 0, phi};
}

Check strong_divisibility() {
    Check c;
    std::mt19937_64 rng(2718);
    int done = 0, divisible = 0, mismatches = 0;
    while (done < kLatticeInstances) {
        auto ctx = Context::make(5, 12, 1 + done % 2);
        const FilteredPhiModule D = FilteredPhiModule::from_fl_module(random_sd_lattice(ctx, rng));
        if (is_admissible(D).verdict != Admissibility::Admissible) continue;
        const std::size_t r = D.rank();
        KMat B = random_unimodular(ctx, r, rng);
        switch (done % 3) {
            case 1: {
                KMat S = KMat::identity(ctx, r);
                S(r - 1, r - 1) = UnramifiedScalar::one(ctx).shift_up(1 + static_cast<int>(rng() % 2));
                B = B * S * random_unimodular(ctx, r, rng);
                break;
            }
            case 2:
                for (std::size_t i = 0; i < r; ++i) {
                    for (std::size_t j = 0; j < r; ++j) B(i, j) = random_scalar(ctx, rng);
                }
                if (determinant_valuation(B) > 3) continue;
                break;
            default: break;
        }
        const LatticeCriteria lc = lattice_criteria(D, B);
        if (lc.divisibility) ++divisible;
        if (lc.divisibility != lc.strongly_divisible) ++mismatches;
        ++done;
    }
    c.require(mismatches == 0, "criteria agree");
    c.require(divisible > 0 && divisible < done, "both outcomes occur");
    c.notes << done << " lattices, " << divisible << " strongly divisible, " << mismatches << " mismatches";
    return c;
}

Check admissibility() {
    Check c;
    std::mt19937_64 rng(1618);
    int changes = 0;
    for (Int p : {3, 5}) {
        auto ctx = Context::make(p, 10, 1);
        const KMat A = kmat(ctx, {{1, 0}, {0, p}});
        const FilteredPhiModule bad(ctx, A, 0, {{0, KMat::identity(ctx, 2)}, {1, column(ctx, {1, 0})}});
        const FilteredPhiModule good(ctx, A, 0, {{0, KMat::identity(ctx, 2)}, {1, column(ctx, {1, 1})}});
        c.require(is_admissible(bad).verdict == Admissibility::NotAdmissible, "eigenline rejected");
        c.require(is_admissible(good).verdict == Admissibility::Admissible, "generic line accepted");
        for (int t = 0; t < kBaseChanges; ++t) {
            const KMat P = random_unimodular(ctx, 2, rng);
            c.require(is_admissible(bad.change_basis(P)).verdict == Admissibility::NotAdmissible, "bad invariant");
            c.require(is_admissible(good.change_basis(P)).verdict == Admissibility::Admissible, "good invariant");
            changes += 2;
        }
    }
    c.notes << "2 primes, " << changes << " base-changed verdicts";
    return c;
}

Check witt_layer() {
    Check c;
    std::size_t pairs = 0;
    for (auto [p, n] : {std::pair<Int, int>{2, 1}, {2, 2}, {2, 3}, {3, 1}, {3, 2}}) {
        const auto residue = Context::make(p, 1, 1);
        const auto target = Context::make(p, n, 1);
        const auto all = enumerate_witt_vectors(residue, n);
        std::vector<UnramifiedScalar> img;
        std::set<Int> seen;
        for (const auto& w : all) {
            img.push_back(witt_to_unramified(w, target));
            seen.insert(img.back().coeff(0));
        }
        c.require(seen.size() == all.size() && static_cast<Int>(all.size()) == target->modulus_value(), "bijection");
        for (std::size_t i = 0; i < all.size(); ++i) {
            for (std::size_t k = 0; k < all.size(); ++k) {
                c.require(witt_to_unramified(witt_add(all[i], all[k]), target) == img[i] + img[k], "additive");
                c.require(witt_to_unramified(witt_mul(all[i], all[k]), target) == img[i] * img[k], "multiplicative");
                ++pairs;
            }
        }
    }
    // ghost map over Z/p^N coefficients, where it is not injective but still a homomorphism
    std::size_t ghost_pairs = 0;
    for (auto [p, n] : {std::pair<Int, int>{2, 3}, {3, 2}}) {
        const auto coeffs = Context::make(p, 4, 1);
        const auto all = enumerate_witt_vectors(Context::make(p, 2, 1), n);
        std::vector<WittVector> lifted;
        for (const auto& w : all) {
            std::vector<UnramifiedScalar> comps;
            for (const auto& x : w.components()) comps.push_back(UnramifiedScalar::from_int(coeffs, x.coeff(0)));
            lifted.emplace_back(coeffs, comps);
        }
        for (const auto& u : lifted) {
            const auto gu = ghost(u);
            for (const auto& v : lifted) {
                const auto gv = ghost(v), gs = ghost(witt_add(u, v)), gm = ghost(witt_mul(u, v));
                for (std::size_t k = 0; k < gu.size(); ++k) {
                    c.require(gs[k] == gu[k] + gv[k], "ghost additive");
                    c.require(gm[k] == gu[k] * gv[k], "ghost multiplicative");
                }
                ++ghost_pairs;
            }
        }
    }
    c.notes << pairs << " pairs for the isomorphism, " << ghost_pairs << " ghost pairs";
    return c;
}

PadicScalar closed_form(const ContextPtr& ctx, Int p, int n) {
    Rational q(1);
    for (int i = 0; i < n - 1; ++i) q *= p;
    q /= n;
    if (n % 2 == 0) q = -q;
    const auto num = boost::multiprecision::numerator(q);
    const auto den = boost::multiprecision::denominator(q);
    const Int m = ctx->modulus_value();
    boost::multiprecision::cpp_int num_r = num % m;
    if (num_r < 0) num_r += m;
    const PadicScalar d(ctx, static_cast<Int>(den % m));
    return PadicScalar(ctx, static_cast<Int>(num_r)) * d.unit_inverse();
}

Check lemma() {
    Check c;
    for (Int p : {2, 3, 5}) {
        const UnitFactor u = unit_factor(p, kLemmaPrecision, kLemmaDegree);
        c.require(u.certified, "certified");
        c.require((u.v * u.w).is_one(), "v w = 1");
        c.require(u.v.coeff(0).is_unit(), "unit constant term");
        const auto t = t_over_p_series(p, kClosedFormPrecision, kClosedFormTerms);
        for (int n = 1; n <= kClosedFormTerms; ++n) {
            c.require(t.coeff(n) == closed_form(t.context(), p, n), "closed form");
            c.require(t.coeff(n).valuation() == n - 1 - integer_valuation(n, p), "valuation");
        }
        c.require(log_exp_roundtrip(p, kLemmaPrecision, kRoundtripDegree), "log/exp roundtrip");
    }
    c.notes << "p in {2,3,5}, mod (p^" << kLemmaPrecision << ", X^" << kLemmaDegree + 1 << ")";
    return c;
}

Check linear_algebra() {
    Check c;
    std::mt19937_64 rng(577);
    for (auto [p, N] : {std::pair<Int, int>{2, 3}, {3, 4}}) {
        auto ctx = Context::make(p, N, 1);
        for (int t = 0; t < kSnfMatrices; ++t) {
            const std::size_t r = 1 + rng() % 5, k = 1 + rng() % 5;
            ZMat A(ctx, r, k);
            const int lift = static_cast<int>(rng() % 3);
            for (std::size_t i = 0; i < r; ++i) {
                for (std::size_t j = 0; j < k; ++j) {
                    A(i, j) = PadicScalar(ctx, static_cast<Int>(rng() % static_cast<std::uint64_t>(ctx->modulus_value()))).shift_up(lift);
                }
            }
            const auto nf = smith_normal_form(A);
            c.require(nf.U * A * nf.V == nf.D, "U A V = D");
            c.require(nf.U * nf.U_inverse == ZMat::identity(ctx, r), "U invertible");
            c.require(determinant_valuation(nf.V) == 0, "V invertible");
            for (std::size_t i = 0; i < r; ++i) {
                for (std::size_t j = 0; j < k; ++j) {
                    const PadicScalar want = i == j ? PadicScalar::one(ctx).shift_up(nf.exponents[i]) : PadicScalar::zero(ctx);
                    c.require(nf.D(i, j) == want, "D diagonal in normal form");
                }
            }
        }
    }
    // exhaustive over all matrices of shape up to 2 x 2 over Z/4
    auto ctx = Context::make(2, 2, 1);
    int matrices = 0;
    for (std::size_t r = 1; r <= 2; ++r) {
        for (std::size_t k = 1; k <= 2; ++k) {
            const std::size_t entries = r * k;
            std::size_t total = 1;
            for (std::size_t e = 0; e < entries; ++e) total *= 4;
            for (std::size_t code = 0; code < total; ++code) {
                ZMat A(ctx, r, k);
                std::size_t rest = code;
                for (std::size_t e = 0; e < entries; ++e) {
                    A(e / k, e % k) = PadicScalar(ctx, static_cast<Int>(rest % 4));
                    rest /= 4;
                }
                std::set<std::vector<Int>> img;
                std::size_t domain = 1;
                for (std::size_t e = 0; e < k; ++e) domain *= 4;
                for (std::size_t x = 0; x < domain; ++x) {
                    Vec<PadicScalar> v;
                    std::size_t xr = x;
                    for (std::size_t e = 0; e < k; ++e) {
                        v.emplace_back(ctx, static_cast<Int>(xr % 4));
                        xr /= 4;
                    }
                    std::vector<Int> w;
                    for (const auto& y : A * v) w.push_back(y.value());
                    img.insert(w);
                }
                std::size_t target = 1;
                for (std::size_t e = 0; e < r; ++e) target *= 4;
                c.require((std::size_t{1} << cokernel(A).length()) * img.size() == target, "cokernel cardinality");
                ++matrices;
            }
        }
    }
    c.notes << kSnfMatrices << " matrices per (p, N), " << matrices << " exhaustive cokernels";
    return c;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Check()>>> criteria{
        {"measure identity on the bundled corpus", measure_identity},
        {"cohomology agrees with enumeration (p=2, N=2, rank<=2)", cohomology_oracle},
        {"six-term exact sequences", delta_functor},
        {"strong divisibility agrees with the divisibility criterion", strong_divisibility},
        {"rank-2 admissibility and base-change invariance", admissibility},
        {"Witt vectors of F_p against Z/p^n", witt_layer},
        {"t/p = X v with v a unit", lemma},
        {"normal form reconstruction and cokernel counts", linear_algebra},
    };
    int failures = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        Check result;
        try {
            result = criteria[k].second();
        } catch (const std::exception& e) {
            result.ok = false;
            result.notes << "exception: " << e.what();
        }
        std::cout << (result.ok ? "PASS" : "FAIL") << " " << k + 1 << " " << criteria[k].first << " ("
                  << result.notes.str() << ")\n";
        if (!result.ok) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
