#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"

#include "landalloc/engines.hpp"

namespace landalloc {

inline constexpr int kRecordFormatVersion = 1;

class RecordError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Engine configuration as JSON. Parsing starts from the defaults in
// EngineConfig, rejects unknown keys and validates the result.
nlohmann::json engine_config_to_json(const EngineConfig& cfg);
EngineConfig engine_config_from_json(const nlohmann::json& j);

// Floor uses of one plot as base-36 digits, one character per floor.
std::string encode_floor_uses(const FloorUses& uses);
FloorUses decode_floor_uses(const std::string& digits);

// Canonical run record. Wall time is left out so that identical runs give
// identical bytes; it travels in a separate timing file.
nlohmann::json run_record_to_json(const RunRecord& rec, const std::string& label);
RunRecord run_record_from_json(const nlohmann::json& j, std::string* label = nullptr);

std::string dump_canonical(const nlohmann::json& j);

// Writes through a temporary sibling and a rename so readers never see a
// half-written file.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

} // namespace landalloc
