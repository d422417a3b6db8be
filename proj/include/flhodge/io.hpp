#pragma once

// JSON instance files and report serialization.

#include <filesystem>
#include <optional>

#include <nlohmann/json.hpp>

#include "flhodge/bkmeasure.hpp"
#include "flhodge/flmod.hpp"

namespace flh::io {

using Json = nlohmann::json;

struct Expectations {
    std::optional<std::vector<int>> h1_torsion;
    std::optional<int> v_P_at_1;
    std::optional<bool> identity_holds;

    bool empty() const { return !h1_torsion && !v_P_at_1 && !identity_holds; }
};

struct Instance {
    FLModule module;
    Expectations expect;
};

/// Scalars are decimal strings (or integers); for f > 1 an array of f coefficients in 1, w, ..., w^{f-1}.
UnramifiedScalar scalar_from_json(const ContextPtr& ctx, const Json& j);
Json scalar_to_json(const UnramifiedScalar& x);
Json scalar_to_json(const PadicScalar& x);

/// Throws Error(InvalidInput) on schema problems; context errors propagate.
Instance parse_instance(const Json& j);
Instance load_instance(const std::filesystem::path& path);

Json module_to_json(const FLModule& M);
Json zmodule_to_json(const ZModule& H);
Json euler_to_json(const EulerFactor& P);
Json measure_to_json(const MeasureReport& r);

}  // namespace flh::io
