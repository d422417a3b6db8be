#include "flhodge/io.hpp"

#include <fstream>

#include <boost/multiprecision/cpp_int.hpp>

namespace flh::io {

namespace {

using BigInt = boost::multiprecision::cpp_int;

Int coefficient_from_json(const ContextPtr& ctx, const Json& j) {
    BigInt v;
    if (j.is_number_integer()) {
        v = j.get<long long>();
    } else if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s.empty() || s.find_first_not_of("-+0123456789") != std::string::npos) {
            throw Error(ErrorCode::InvalidInput, "not a decimal integer: \"" + s + "\"");
        }
        try {
            v = BigInt(s);
        } catch (const std::exception&) {
            throw Error(ErrorCode::InvalidInput, "not a decimal integer: \"" + s + "\"");
        }
    } else {
        throw Error(ErrorCode::InvalidInput, "scalar coefficient must be a string or an integer");
    }
    const BigInt m = ctx->modulus_value();
    v %= m;
    if (v < 0) v += m;
    return static_cast<Int>(v);
}

const Json& field(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw Error(ErrorCode::InvalidInput, std::string("missing field \"") + key + "\"");
    return j.at(key);
}

int int_field(const Json& j, const char* key) {
    const Json& v = field(j, key);
    if (!v.is_number_integer()) throw Error(ErrorCode::InvalidInput, std::string("field \"") + key + "\" must be an integer");
    return v.get<int>();
}

KMat matrix_from_rows(const ContextPtr& ctx, const Json& rows, std::size_t r, const char* what) {
    if (!rows.is_array() || rows.size() != r) {
        throw Error(ErrorCode::InvalidInput, std::string(what) + " must have " + std::to_string(r) + " rows");
    }
    KMat m(ctx, r, r);
    for (std::size_t i = 0; i < r; ++i) {
        if (!rows[i].is_array() || rows[i].size() != r) {
            throw Error(ErrorCode::InvalidInput, std::string(what) + " must be square");
        }
        for (std::size_t j = 0; j < r; ++j) m(i, j) = scalar_from_json(ctx, rows[i][j]);
    }
    return m;
}

KMat columns_from_json(const ContextPtr& ctx, const Json& gens, std::size_t r) {
    if (!gens.is_array()) throw Error(ErrorCode::InvalidInput, "generators must be a list of vectors");
    KMat m(ctx, r, gens.size());
    for (std::size_t k = 0; k < gens.size(); ++k) {
        if (!gens[k].is_array() || gens[k].size() != r) {
            throw Error(ErrorCode::InvalidInput, "each generator must have " + std::to_string(r) + " entries");
        }
        for (std::size_t i = 0; i < r; ++i) m(i, k) = scalar_from_json(ctx, gens[k][i]);
    }
    return m;
}

Json padic_vector(const Vec<PadicScalar>& v) {
    Json out = Json::array();
    for (const auto& x : v) out.push_back(scalar_to_json(x));
    return out;
}

}  // namespace

UnramifiedScalar scalar_from_json(const ContextPtr& ctx, const Json& j) {
    const auto f = static_cast<std::size_t>(ctx->degree());
    std::vector<Int> c(f, 0);
    if (j.is_array()) {
        if (j.size() != f) throw Error(ErrorCode::InvalidInput, "scalar must have " + std::to_string(f) + " coefficients");
        for (std::size_t i = 0; i < f; ++i) c[i] = coefficient_from_json(ctx, j[i]);
    } else {
        c[0] = coefficient_from_json(ctx, j);
    }
    return {ctx, c};
}

Json scalar_to_json(const UnramifiedScalar& x) {
    if (x.coeffs().size() == 1) return std::to_string(x.coeff(0));
    Json out = Json::array();
    for (Int c : x.coeffs()) out.push_back(std::to_string(c));
    return out;
}

Json scalar_to_json(const PadicScalar& x) { return x.to_string(); }

Instance parse_instance(const Json& j) {
    try {
        const int f = j.contains("f") ? int_field(j, "f") : 1;
        const auto ctx = Context::make(static_cast<Int>(int_field(j, "p")), int_field(j, "precision"), f);
        const int N = ctx->precision();

        const Json& divs = field(j, "elementary_divisors");
        if (!divs.is_array() || divs.empty()) throw Error(ErrorCode::InvalidInput, "elementary_divisors must be a nonempty list");
        std::vector<int> exps;
        for (const auto& d : divs) {
            if (d.is_string() && d.get<std::string>() == "inf") {
                exps.push_back(N);
            } else if (d.is_number_integer()) {
                exps.push_back(d.get<int>());
            } else {
                throw Error(ErrorCode::InvalidInput, "elementary divisor must be \"inf\" or an exponent");
            }
        }
        const std::size_t r = exps.size();

        std::vector<FiltrationStep> steps;
        const Json& filt = field(j, "filtration");
        if (!filt.is_array()) throw Error(ErrorCode::InvalidInput, "filtration must be a list");
        for (const auto& s : filt) steps.push_back({int_field(s, "jump"), columns_from_json(ctx, field(s, "generators"), r)});

        const Json& phi = field(j, "phi_low");
        FLModule M(ctx, exps, steps, int_field(phi, "level"), matrix_from_rows(ctx, field(phi, "matrix"), r, "phi_low.matrix"));

        Expectations e;
        if (j.contains("expect")) {
            const Json& x = j.at("expect");
            if (x.contains("h1_torsion")) e.h1_torsion = x.at("h1_torsion").get<std::vector<int>>();
            if (x.contains("v_P_at_1")) e.v_P_at_1 = x.at("v_P_at_1").get<int>();
            if (x.contains("identity_holds")) e.identity_holds = x.at("identity_holds").get<bool>();
        }
        return {std::move(M), e};
    } catch (const Json::exception& ex) {
        throw Error(ErrorCode::InvalidInput, std::string("malformed instance: ") + ex.what());
    }
}

Instance load_instance(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::InvalidInput, "cannot open " + path.string());
    Json j;
    try {
        in >> j;
    } catch (const Json::exception& ex) {
        throw Error(ErrorCode::InvalidInput, path.string() + ": " + ex.what());
    }
    return parse_instance(j);
}

Json module_to_json(const FLModule& M) {
    const ContextPtr& ctx = M.context();
    Json j;
    j["p"] = ctx->p();
    j["f"] = ctx->degree();
    j["precision"] = ctx->precision();
    Json divs = Json::array();
    for (int e : M.exponents()) {
        if (e == ctx->precision()) {
            divs.push_back("inf");
        } else {
            divs.push_back(e);
        }
    }
    j["elementary_divisors"] = divs;
    Json filt = Json::array();
    for (const auto& s : M.filtration()) {
        Json gens = Json::array();
        for (const auto& g : s.generators.columns()) {
            Json v = Json::array();
            for (const auto& c : g) v.push_back(scalar_to_json(c));
            gens.push_back(v);
        }
        filt.push_back({{"jump", s.jump}, {"generators", gens}});
    }
    j["filtration"] = filt;
    Json rows = Json::array();
    for (std::size_t i = 0; i < M.rank(); ++i) {
        Json row = Json::array();
        for (std::size_t k = 0; k < M.rank(); ++k) row.push_back(scalar_to_json(M.phi_matrix()(i, k)));
        rows.push_back(row);
    }
    j["phi_low"] = {{"level", M.phi_level()}, {"matrix", rows}};
    return j;
}

Json zmodule_to_json(const ZModule& H) {
    Json gens = Json::array();
    for (const auto& g : H.generators) gens.push_back(padic_vector(g));
    return {{"exponents", H.exponents},
            {"torsion_exponents", H.torsion_exponents()},
            {"free_rank", H.free_rank()},
            {"length", H.length()},
            {"generators", gens}};
}

Json euler_to_json(const EulerFactor& P) {
    Json q = Json::array();
    for (const auto& c : P.q) q.push_back(scalar_to_json(c));
    return {{"q", q}, {"x_scale", P.x_scale}, {"degree", P.degree()}};
}

Json measure_to_json(const MeasureReport& r) {
    return {{"v_P_at_1", r.v_P_at_1},
            {"log_p_mu", r.log_mu},
            {"identity_holds", r.identity_holds},
            {"h1", {{"torsion_exponents", r.h1.torsion_exponents()}, {"free_rank", r.h1.free_rank()}}},
            {"euler_factor", euler_to_json(r.euler)},
            {"exp_map", {{"scale", r.exp_map.scale}, {"rank", r.exp_map.matrix.cols()}}}};
}

}  // namespace flh::io
