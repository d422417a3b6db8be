#include "flhodge/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <functional>
#include <random>
#include <set>

#include <CLI11.hpp>

#include "flhodge/io.hpp"
#include "flhodge/series.hpp"
#include "flhodge/witt.hpp"

namespace flh::cli {

namespace {

using io::Json;

struct Options {
    std::string input;
    std::string input_dir;
    bool pretty = false;
    bool json = true;
    int margin = kDefaultMargin;
    Int p = 0;
    int prec = 0;
    int xdeg = 0;
    int n = 0;
    int f = 1;
};

struct Outcome {
    Json report;
    int code = Success;
};

int code_for(ErrorCode c) {
    if (is_precision_error(c)) return PrecisionError;
    if (c == ErrorCode::PVanishesAtOne) return Negative;
    return UsageError;
}

Json expectation_block(const std::vector<std::string>& failures, std::size_t checked) {
    return {{"checked", checked}, {"met", failures.empty()}, {"failures", failures}};
}

Outcome cmd_validate(const io::Instance& inst, const Options& o) {
    const auto v = validate(inst.module, o.margin);
    Json j{{"valid", !v.has_value()}};
    if (v) j["violation"] = {{"kind", violation_kind_name(v->kind)}, {"message", v->message}};
    return {j, v ? Negative : Success};
}

void require_valid(const FLModule& M, int margin) {
    if (auto v = validate(M, margin)) {
        if (v->kind == ViolationKind::Precision) throw Error(ErrorCode::InsufficientPrecision, v->message);
        throw Error(ErrorCode::InvalidInput, "invalid module (" + violation_kind_name(v->kind) + "): " + v->message);
    }
}

Outcome cmd_cohomology(const io::Instance& inst, const Options& o) {
    require_valid(inst.module, o.margin);
    const ZModule H0 = h0(inst.module, o.margin), H1 = h1(inst.module, o.margin);
    Outcome out{{{"h0", io::zmodule_to_json(H0)}, {"h1", io::zmodule_to_json(H1)}}, Success};
    if (inst.expect.h1_torsion) {
        std::vector<std::string> fails;
        if (H1.torsion_exponents() != *inst.expect.h1_torsion) fails.emplace_back("h1_torsion");
        out.report["expectations"] = expectation_block(fails, 1);
        if (!fails.empty()) out.code = Negative;
    }
    return out;
}

Outcome cmd_admissible(const io::Instance& inst, const Options& o) {
    require_valid(inst.module, o.margin);
    const FilteredPhiModule D = FilteredPhiModule::from_fl_module(inst.module);
    const AdmissibilityResult r = is_admissible(D, o.margin);
    Json j{{"verdict", admissibility_name(r.verdict)},
           {"t_H", hodge_number(D, o.margin)},
           {"t_N", newton_number(D, o.margin)},
           {"reason", r.reason}};
    if (r.witness) {
        Json w = Json::array();
        for (const auto& g : r.witness->columns()) {
            Json v = Json::array();
            for (const auto& c : g) v.push_back(io::scalar_to_json(c));
            w.push_back(v);
        }
        j["witness"] = {{"generators", w}, {"t_H", r.witness_hodge}, {"t_N", r.witness_newton}};
    }
    return {j, r.verdict == Admissibility::NotAdmissible ? Negative : Success};
}

Outcome cmd_strong_div(const io::Instance& inst, const Options& o) {
    require_valid(inst.module, o.margin);
    const bool sd = is_strongly_divisible(inst.module);
    return {{{"strongly_divisible", sd}}, sd ? Success : Negative};
}

Outcome cmd_lfunction(const io::Instance& inst, const Options& o) {
    require_valid(inst.module, o.margin);
    const EulerFactor P = euler_factor(inst.module, o.margin);
    Json j{{"euler_factor", io::euler_to_json(P)}};
    try {
        j["v_P_at_1"] = value_at_one_valuation(P, o.margin);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::PVanishesAtOne) throw;
        j["v_P_at_1"] = nullptr;
    }
    return {j, Success};
}

Outcome cmd_measure(const io::Instance& inst, const Options& o) {
    const MeasureReport r = verify_measure_identity(inst.module, o.margin);
    Outcome out{io::measure_to_json(r), r.identity_holds ? Success : Negative};
    const io::Expectations& e = inst.expect;
    if (!e.empty()) {
        std::vector<std::string> fails;
        std::size_t checked = 0;
        if (e.h1_torsion) {
            ++checked;
            if (r.h1.torsion_exponents() != *e.h1_torsion) fails.emplace_back("h1_torsion");
        }
        if (e.v_P_at_1) {
            ++checked;
            if (r.v_P_at_1 != *e.v_P_at_1) fails.emplace_back("v_P_at_1");
        }
        if (e.identity_holds) {
            ++checked;
            if (r.identity_holds != *e.identity_holds) fails.emplace_back("identity_holds");
        }
        out.report["expectations"] = expectation_block(fails, checked);
        if (!fails.empty()) out.code = Negative;
    }
    return out;
}

Outcome cmd_lemma_unit(const Options& o) {
    const UnitFactor u = unit_factor(o.p, o.prec, o.xdeg);
    Json v = Json::array(), w = Json::array();
    for (const auto& c : u.v.coeffs()) v.push_back(io::scalar_to_json(c));
    for (const auto& c : u.w.coeffs()) w.push_back(io::scalar_to_json(c));
    return {{{"p", o.p}, {"precision", o.prec}, {"degree", o.xdeg}, {"unit_certified", u.certified}, {"v", v}, {"w", w}},
            u.certified ? Success : Negative};
}

Outcome cmd_witt_table(const Options& o) {
    const auto residue = Context::make(o.p, 1, o.f);
    const auto target = Context::make(o.p, o.n, o.f);
    const auto all = enumerate_witt_vectors(residue, o.n);
    if (all.size() > 4096) throw Error(ErrorCode::InvalidInput, "table too large");
    Json rows = Json::array();
    std::set<std::vector<Int>> images;
    std::vector<UnramifiedScalar> img;
    for (const auto& w : all) {
        Json comps = Json::array();
        for (const auto& c : w.components()) comps.push_back(io::scalar_to_json(c));
        img.push_back(witt_to_unramified(w, target));
        images.insert(img.back().coeffs());
        rows.push_back({{"witt", comps}, {"image", io::scalar_to_json(img.back())}});
    }
    // all pairs when small, otherwise a fixed sample
    bool add_ok = true, mul_ok = true;
    std::size_t pairs = 0;
    auto check = [&](std::size_t i, std::size_t k) {
        add_ok = add_ok && witt_to_unramified(witt_add(all[i], all[k]), target) == img[i] + img[k];
        mul_ok = mul_ok && witt_to_unramified(witt_mul(all[i], all[k]), target) == img[i] * img[k];
        ++pairs;
    };
    const bool exhaustive = all.size() <= 64;
    if (exhaustive) {
        for (std::size_t i = 0; i < all.size(); ++i) {
            for (std::size_t k = 0; k < all.size(); ++k) check(i, k);
        }
    } else {
        std::mt19937_64 rng(1);
        for (int t = 0; t < 4096; ++t) check(rng() % all.size(), rng() % all.size());
    }
    const bool bijective = images.size() == all.size();
    const bool iso = bijective && add_ok && mul_ok;
    return {{{"p", o.p},
             {"n", o.n},
             {"f", o.f},
             {"entries", rows},
             {"bijective", bijective},
             {"additive", add_ok},
             {"multiplicative", mul_ok},
             {"pairs_checked", pairs},
             {"exhaustive", exhaustive},
             {"ring_isomorphism", iso}},
            iso ? Success : Negative};
}

Outcome guarded(const std::function<Outcome()>& fn, std::ostream& err, const std::string& label) {
    try {
        return fn();
    } catch (const Error& e) {
        err << label << "error: " << e.what() << "\n";
        return {{{"error", e.what()}}, code_for(e.code())};
    } catch (const std::exception& e) {
        err << label << "error: " << e.what() << "\n";
        return {{{"error", e.what()}}, UsageError};
    }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Fontaine-Laffaille module toolkit", "flhodge_cli"};
    app.require_subcommand(1);
    Options o;

    auto add_module_flags = [&](CLI::App* sub) {
        auto* in = sub->add_option("--input", o.input, "instance file (JSON)");
        auto* dir = sub->add_option("--input-dir", o.input_dir, "process every *.json file in a directory");
        in->excludes(dir);
        sub->add_flag("--json", o.json, "compact JSON output (default)");
        sub->add_flag("--pretty", o.pretty, "indented JSON output");
        sub->add_option("--margin", o.margin, "precision margin")->check(CLI::NonNegativeNumber);
    };

    using ModuleCmd = Outcome (*)(const io::Instance&, const Options&);
    const std::vector<std::tuple<std::string, std::string, ModuleCmd>> module_cmds{
        {"validate", "check the module axioms", cmd_validate},
        {"cohomology", "compute H^0 and H^1", cmd_cohomology},
        {"admissible", "weak admissibility of M[1/p]", cmd_admissible},
        {"strong-div", "strong divisibility", cmd_strong_div},
        {"lfunction", "local Euler factor", cmd_lfunction},
        {"measure", "measure identity for H^1", cmd_measure},
    };
    std::vector<CLI::App*> module_subs;
    for (const auto& [name, help, fn] : module_cmds) {
        auto* sub = app.add_subcommand(name, help);
        add_module_flags(sub);
        module_subs.push_back(sub);
    }
    auto* lemma = app.add_subcommand("lemma-unit", "factor t/p = X v and certify v is a unit");
    lemma->add_option("--p", o.p)->required();
    lemma->add_option("--prec", o.prec)->required();
    lemma->add_option("--xdeg", o.xdeg)->required()->check(CLI::NonNegativeNumber);
    lemma->add_flag("--json", o.json);
    lemma->add_flag("--pretty", o.pretty);
    auto* witt = app.add_subcommand("witt-table", "W_n(F_q) against O_K/p^n");
    witt->add_option("--p", o.p)->required();
    witt->add_option("--n", o.n)->required()->check(CLI::PositiveNumber);
    witt->add_option("--f", o.f, "residue degree")->check(CLI::PositiveNumber);
    witt->add_flag("--json", o.json);
    witt->add_flag("--pretty", o.pretty);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e, out, err);
        return rc == 0 ? Success : UsageError;
    }

    auto emit = [&](const Outcome& r) {
        out << (o.pretty ? r.report.dump(2) : r.report.dump()) << "\n";
        return r.code;
    };

    if (lemma->parsed()) return emit(guarded([&] { return cmd_lemma_unit(o); }, err, ""));
    if (witt->parsed()) return emit(guarded([&] { return cmd_witt_table(o); }, err, ""));

    for (std::size_t k = 0; k < module_subs.size(); ++k) {
        if (!module_subs[k]->parsed()) continue;
        const ModuleCmd fn = std::get<2>(module_cmds[k]);
        if (o.input.empty() && o.input_dir.empty()) {
            err << "error: one of --input or --input-dir is required\n";
            return UsageError;
        }
        if (!o.input.empty()) {
            return emit(guarded([&] { return fn(io::load_instance(o.input), o); }, err, ""));
        }
        namespace fs = std::filesystem;
        if (!fs::is_directory(o.input_dir)) {
            err << "error: not a directory: " << o.input_dir << "\n";
            return UsageError;
        }
        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(o.input_dir)) {
            if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
        }
        std::sort(files.begin(), files.end());
        Outcome batch{Json::object(), Success};
        for (const auto& path : files) {
            const std::string name = path.filename().string();
            Outcome r = guarded([&] { return fn(io::load_instance(path), o); }, err, name + ": ");
            r.report["exit_code"] = r.code;
            batch.report[name] = r.report;
            batch.code = std::max(batch.code, r.code);
        }
        return emit(batch);
    }
    return UsageError;
}

}  // namespace flh::cli
