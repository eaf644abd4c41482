#include "landalloc/records.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace landalloc {

using nlohmann::json;

namespace {

constexpr const char* kDigits = "0123456789abcdefghijklmnopqrstuvwxyz";

void reject_unknown(const json& j, const std::set<std::string>& known, const std::string& where)
{
    if (!j.is_object()) {
        throw ConfigError(where + ": expected an object");
    }
    for (const auto& [key, value] : j.items()) {
        if (!known.count(key)) {
            throw ConfigError(where + ": unknown key '" + key + "'");
        }
    }
}

template <class T>
void read(const json& j, const char* key, T& out, const std::string& where)
{
    const auto it = j.find(key);
    if (it == j.end()) {
        return;
    }
    try {
        if constexpr (std::is_same_v<T, double>) {
            if (!it->is_number()) {
                throw ConfigError("");
            }
        } else if constexpr (std::is_same_v<T, bool>) {
            if (!it->is_boolean()) {
                throw ConfigError("");
            }
        } else if constexpr (std::is_integral_v<T>) {
            if (!it->is_number_integer() || (std::is_unsigned_v<T> && it->get<long long>() < 0)) {
                throw ConfigError("");
            }
        }
        out = it->get<T>();
    } catch (const std::exception&) {
        throw ConfigError(where + "." + key + ": wrong type");
    }
}

json objectives_json(const ObjectiveVector& o) { return {{"compatibility", o.compatibility}, {"price", o.price}}; }

ObjectiveVector objectives_from(const json& j)
{
    return {j.at("compatibility").get<double>(), j.at("price").get<double>()};
}

json schedule_json(const RelaxationSchedule& s)
{
    return {{"gamma_search", s.gamma_search},
            {"mu_search", s.mu_search},
            {"gamma_final", s.gamma_final},
            {"mu_final", s.mu_final}};
}

} // namespace

json engine_config_to_json(const EngineConfig& cfg)
{
    const OperatorConfig& op = cfg.operators;
    json j = {
        {"algorithm", to_string(cfg.algorithm)},
        {"population_size", cfg.population_size},
        {"generations", cfg.generations},
        {"init_change_fraction", cfg.init_change_fraction},
        {"init_retry_cap", cfg.init_retry_cap},
        {"soa_a", cfg.soa_a},
        {"soa_b", cfg.soa_b},
        {"de_child_probability", cfg.de_child_probability},
        {"mutation_probability", cfg.mutation_probability},
        {"seed", cfg.seed},
        {"operators",
         {{"sbx_eta", op.sbx_eta},
          {"poly_eta", op.poly_eta},
          {"de_scale", op.de_scale},
          {"crossover_plot_fraction", op.crossover_plot_fraction},
          {"mutation_plot_budget", op.mutation_plot_budget},
          {"floorwise", op.floorwise}}},
    };
    j["relax"] = cfg.relax ? schedule_json(*cfg.relax) : json(nullptr);
    if (cfg.crossover_override) {
        j["crossover"] = *cfg.crossover_override == CrossoverKind::SBX ? "SBX" : "Uniform";
    } else {
        j["crossover"] = nullptr;
    }
    return j;
}

EngineConfig engine_config_from_json(const json& j)
{
    static const std::set<std::string> known = {
        "algorithm", "population_size", "generations", "init_change_fraction", "init_retry_cap",
        "soa_a", "soa_b", "de_child_probability", "mutation_probability", "seed",
        "operators", "relax", "crossover", "label"};
    reject_unknown(j, known, "engine");
    EngineConfig cfg;
    const auto alg = j.find("algorithm");
    if (alg == j.end() || !alg->is_string()) {
        throw ConfigError("engine: 'algorithm' must be one of SOA, MSBX_NSGA2, CR_DES, MSBX_MO");
    }
    cfg.algorithm = parse_algorithm(alg->get<std::string>());
    read(j, "population_size", cfg.population_size, "engine");
    read(j, "generations", cfg.generations, "engine");
    read(j, "init_change_fraction", cfg.init_change_fraction, "engine");
    read(j, "init_retry_cap", cfg.init_retry_cap, "engine");
    read(j, "soa_a", cfg.soa_a, "engine");
    read(j, "soa_b", cfg.soa_b, "engine");
    read(j, "de_child_probability", cfg.de_child_probability, "engine");
    read(j, "mutation_probability", cfg.mutation_probability, "engine");
    read(j, "seed", cfg.seed, "engine");

    if (const auto it = j.find("operators"); it != j.end()) {
        reject_unknown(*it, {"sbx_eta", "poly_eta", "de_scale", "crossover_plot_fraction", "mutation_plot_budget",
                             "floorwise"},
                       "engine.operators");
        OperatorConfig& op = cfg.operators;
        read(*it, "sbx_eta", op.sbx_eta, "engine.operators");
        read(*it, "poly_eta", op.poly_eta, "engine.operators");
        read(*it, "de_scale", op.de_scale, "engine.operators");
        read(*it, "crossover_plot_fraction", op.crossover_plot_fraction, "engine.operators");
        read(*it, "mutation_plot_budget", op.mutation_plot_budget, "engine.operators");
        read(*it, "floorwise", op.floorwise, "engine.operators");
    }
    if (const auto it = j.find("relax"); it != j.end() && !it->is_null()) {
        reject_unknown(*it, {"gamma_search", "mu_search", "gamma_final", "mu_final"}, "engine.relax");
        RelaxationSchedule s;
        for (const char* key : {"gamma_search", "mu_search", "gamma_final", "mu_final"}) {
            if (!it->contains(key)) {
                throw ConfigError(std::string("engine.relax: missing '") + key + "'");
            }
        }
        read(*it, "gamma_search", s.gamma_search, "engine.relax");
        read(*it, "mu_search", s.mu_search, "engine.relax");
        read(*it, "gamma_final", s.gamma_final, "engine.relax");
        read(*it, "mu_final", s.mu_final, "engine.relax");
        cfg.relax = s;
    }
    if (const auto it = j.find("crossover"); it != j.end() && !it->is_null()) {
        const std::string kind = it->is_string() ? it->get<std::string>() : "";
        if (kind == "SBX") {
            cfg.crossover_override = CrossoverKind::SBX;
        } else if (kind == "Uniform") {
            cfg.crossover_override = CrossoverKind::Uniform;
        } else {
            throw ConfigError("engine.crossover: expected \"SBX\" or \"Uniform\"");
        }
    }
    cfg.validate();
    return cfg;
}

std::string encode_floor_uses(const FloorUses& uses)
{
    std::string out;
    out.reserve(uses.size());
    for (UseCode u : uses) {
        if (u >= kMaxUses) {
            throw RecordError("use code " + std::to_string(u) + " has no base-36 digit");
        }
        out.push_back(kDigits[u]);
    }
    return out;
}

FloorUses decode_floor_uses(const std::string& digits)
{
    FloorUses out;
    out.reserve(digits.size());
    for (char ch : digits) {
        int v = -1;
        if (ch >= '0' && ch <= '9') {
            v = ch - '0';
        } else if (ch >= 'a' && ch <= 'z') {
            v = ch - 'a' + 10;
        }
        if (v < 0) {
            throw RecordError(std::string("invalid floor-use digit '") + ch + "'");
        }
        out.push_back(static_cast<UseCode>(v));
    }
    return out;
}

json run_record_to_json(const RunRecord& rec, const std::string& label)
{
    json pop = json::array();
    for (const auto& ind : rec.final_population) {
        json uses = json::array();
        for (const auto& plot : ind.allocation.floor_uses) {
            uses.push_back(encode_floor_uses(plot));
        }
        pop.push_back({{"uses", std::move(uses)},
                       {"objectives", objectives_json(ind.objectives)},
                       {"rank", ind.rank},
                       {"crowding", std::isfinite(ind.crowding) ? json(ind.crowding) : json(nullptr)},
                       {"feasible", ind.feasible},
                       {"violation", ind.violation}});
    }
    return {{"version", kRecordFormatVersion},
            {"label", label},
            {"seed", rec.seed},
            {"config", engine_config_to_json(rec.config)},
            {"schedule", schedule_json(rec.schedule)},
            {"hv_trace", rec.hv_trace},
            {"trace_bounds", {{"min", objectives_json(rec.trace_bounds.min)},
                              {"max", objectives_json(rec.trace_bounds.max)}}},
            {"final_front", rec.final_front},
            {"survivors", rec.survivors},
            {"final_population", std::move(pop)}};
}

RunRecord run_record_from_json(const json& j, std::string* label)
{
    try {
        if (j.at("version").get<int>() != kRecordFormatVersion) {
            throw RecordError("unsupported run record version");
        }
        RunRecord rec;
        if (label) {
            *label = j.at("label").get<std::string>();
        }
        rec.seed = j.at("seed").get<std::uint64_t>();
        rec.config = engine_config_from_json(j.at("config"));
        const json& s = j.at("schedule");
        rec.schedule = {s.at("gamma_search").get<double>(), s.at("mu_search").get<double>(),
                        s.at("gamma_final").get<double>(), s.at("mu_final").get<double>()};
        rec.hv_trace = j.at("hv_trace").get<std::vector<double>>();
        rec.trace_bounds.min = objectives_from(j.at("trace_bounds").at("min"));
        rec.trace_bounds.max = objectives_from(j.at("trace_bounds").at("max"));
        rec.final_front = j.at("final_front").get<std::vector<std::size_t>>();
        rec.survivors = j.at("survivors").get<std::size_t>();
        for (const auto& ij : j.at("final_population")) {
            Individual ind;
            for (const auto& plot : ij.at("uses")) {
                ind.allocation.floor_uses.push_back(decode_floor_uses(plot.get<std::string>()));
            }
            ind.objectives = objectives_from(ij.at("objectives"));
            ind.rank = ij.at("rank").get<std::size_t>();
            const json& cd = ij.at("crowding");
            ind.crowding = cd.is_null() ? std::numeric_limits<double>::infinity() : cd.get<double>();
            ind.feasible = ij.at("feasible").get<bool>();
            ind.violation = ij.at("violation").get<double>();
            rec.final_population.push_back(std::move(ind));
        }
        for (std::size_t i : rec.final_front) {
            if (i >= rec.final_population.size()) {
                throw RecordError("final_front index out of range");
            }
        }
        return rec;
    } catch (const json::exception& e) {
        throw RecordError(std::string("malformed run record: ") + e.what());
    } catch (const ConfigError& e) {
        throw RecordError(std::string("malformed run record config: ") + e.what());
    }
}

std::string dump_canonical(const json& j) { return j.dump(2) + "\n"; }

void write_file_atomic(const std::filesystem::path& path, const std::string& content)
{
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    auto tmp = path;
    tmp += ".partial";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw std::runtime_error("cannot write " + tmp.string());
        }
        out << content;
        out.flush();
        if (!out) {
            throw std::runtime_error("short write to " + tmp.string());
        }
    }
    std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot read " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace landalloc
