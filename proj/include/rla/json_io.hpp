#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "rla/core.hpp"
#include "rla/daisy.hpp"
#include "rla/sampler.hpp"
#include "rla/transforms.hpp"

// Versioned JSON serialization (format: 1). Trees are stored once per distinct
// object and referenced by index; children ordered by symbol; rationals as
// {num, den}; coordinates 0-based.
namespace rla {

nlohmann::json rational_to_json(const Rational& r);
Rational rational_from_json(const nlohmann::json& j);

nlohmann::json algorithm_to_json(const LocalAlgorithm& alg);
LocalAlgorithm algorithm_from_json(const nlohmann::json& j);

nlohmann::json sampler_to_json(const PreparedSampler& pre);
PreparedSampler sampler_from_json(const nlohmann::json& j);

nlohmann::json partition_to_json(const DaisyPartition& partition);

// Input format for the partition tool: {"format":1, "n":..., "q":..., "sets":[[..],..]}.
struct SetCollection {
    uint32_t n = 0;
    uint32_t q = 0;
    std::vector<std::vector<Coord>> sets;
};
SetCollection set_collection_from_json(const nlohmann::json& j);

nlohmann::json prepare_report_to_json(const PrepareReport& report);

nlohmann::json run_result_to_json(const RunResult& r);

// Canonical dump (sorted keys, fixed spacing) used for config hashing.
std::string canonical_dump(const nlohmann::json& j);

} // namespace rla
