#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "json.hpp"

#include "landalloc/model.hpp"

namespace landalloc {

inline constexpr int kInstanceFormatVersion = 1;

class InstanceError : public std::runtime_error {
public:
    enum class Kind { Parse, Schema, Range, DanglingNeighbor };

    InstanceError(Kind kind, std::string path, const std::string& message)
        : std::runtime_error(path.empty() ? message : path + ": " + message), kind_(kind), path_(std::move(path))
    {
    }

    Kind kind() const { return kind_; }
    const std::string& path() const { return path_; }

private:
    Kind kind_;
    std::string path_;
};

// Parses and validates a `.landalloc.json` document.
ProblemInstance load_instance(std::string_view bytes);
ProblemInstance load_instance_file(const std::filesystem::path& path);

nlohmann::json instance_to_json(const ProblemInstance& inst);

// Canonical form: sorted keys, two-space indent, shortest round-trip floats,
// trailing newline.
std::string save_instance(const ProblemInstance& inst);
void save_instance_file(const ProblemInstance& inst, const std::filesystem::path& path);

struct GeneratorSpec {
    int grid_width = 20;
    int grid_height = 20;
    int uses = 3;
    int floor_min = 1;
    int floor_max = 6;
    double locked_fraction = 0.05;
    double footprint = 100.0;    // floor space per floor
    int clusters = 0;            // 0 picks about sqrt(N)/2 use clusters
    double dominant_share = 0.75; // chance a floor takes its cluster's use
    double price_rate = 1000.0;  // currency per unit floor space
    double price_noise = 0.1;
    double gamma = 0.3;
    double mu = 0.2;
    std::uint64_t seed = 1;

    // Throws std::invalid_argument.
    void validate() const;
};

GeneratorSpec generator_spec_from_json(const nlohmann::json& j);

// Grid of plots with rook adjacency, clustered actual uses, symmetric
// compatibility with unit diagonal and a price box of
// [0.9835, 1.097] x actual price.
ProblemInstance generate_synthetic(const GeneratorSpec& spec);

} // namespace landalloc
