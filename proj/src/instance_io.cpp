#include "landalloc/instance_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "landalloc/rng.hpp"

namespace landalloc {

using nlohmann::json;
using Kind = InstanceError::Kind;

namespace {

const json& field(const json& obj, const char* key, const std::string& path)
{
    if (!obj.is_object()) {
        throw InstanceError(Kind::Schema, path, "expected an object");
    }
    const auto it = obj.find(key);
    if (it == obj.end()) {
        throw InstanceError(Kind::Schema, path, std::string("missing field '") + key + "'");
    }
    return *it;
}

double number(const json& v, const std::string& path)
{
    if (!v.is_number()) {
        throw InstanceError(Kind::Schema, path, "expected a number");
    }
    const double d = v.get<double>();
    if (!std::isfinite(d)) {
        throw InstanceError(Kind::Range, path, "expected a finite number");
    }
    return d;
}

long long integer(const json& v, const std::string& path)
{
    if (!v.is_number_integer()) {
        throw InstanceError(Kind::Schema, path, "expected an integer");
    }
    return v.get<long long>();
}

const json& array(const json& v, const std::string& path)
{
    if (!v.is_array()) {
        throw InstanceError(Kind::Schema, path, "expected an array");
    }
    return v;
}

Matrix matrix(const json& v, std::size_t rows, std::size_t cols, const std::string& path)
{
    array(v, path);
    if (v.size() != rows) {
        throw InstanceError(Kind::Schema, path, "expected " + std::to_string(rows) + " rows");
    }
    Matrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        const std::string rp = path + "[" + std::to_string(r) + "]";
        array(v[r], rp);
        if (v[r].size() != cols) {
            throw InstanceError(Kind::Schema, rp, "expected " + std::to_string(cols) + " columns");
        }
        for (std::size_t c = 0; c < cols; ++c) {
            m(r, c) = number(v[r][c], rp + "[" + std::to_string(c) + "]");
        }
    }
    return m;
}

json matrix_json(const Matrix& m)
{
    json out = json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (std::size_t c = 0; c < m.cols(); ++c) {
            row.push_back(m(r, c));
        }
        out.push_back(std::move(row));
    }
    return out;
}

} // namespace

ProblemInstance load_instance(std::string_view bytes)
{
    json doc;
    try {
        doc = json::parse(bytes.begin(), bytes.end());
    } catch (const json::parse_error& e) {
        throw InstanceError(Kind::Parse, "", e.what());
    }
    if (!doc.is_object()) {
        throw InstanceError(Kind::Schema, "$", "document must be an object");
    }
    if (integer(field(doc, "version", "$"), "$.version") != kInstanceFormatVersion) {
        throw InstanceError(Kind::Schema, "$.version",
                            "unsupported version (expected " + std::to_string(kInstanceFormatVersion) + ")");
    }

    ProblemInstance inst;
    const json& uses = array(field(doc, "uses", "$"), "$.uses");
    for (std::size_t m = 0; m < uses.size(); ++m) {
        const std::string p = "$.uses[" + std::to_string(m) + "]";
        LandUse u;
        u.id = static_cast<int>(integer(field(uses[m], "id", p), p + ".id"));
        const json& name = field(uses[m], "name", p);
        if (!name.is_string()) {
            throw InstanceError(Kind::Schema, p + ".name", "expected a string");
        }
        u.name = name.get<std::string>();
        if (u.id != static_cast<int>(m)) {
            throw InstanceError(Kind::Range, p + ".id", "use ids must be dense 0..K-1 in order");
        }
        inst.uses.push_back(std::move(u));
    }
    const int k = inst.num_uses();
    if (k < 2 || k > kMaxUses) {
        throw InstanceError(Kind::Range, "$.uses", "number of uses must be in [2, " + std::to_string(kMaxUses) + "]");
    }

    const json& plots = array(field(doc, "plots", "$"), "$.plots");
    const auto n = static_cast<long long>(plots.size());
    for (std::size_t i = 0; i < plots.size(); ++i) {
        const std::string p = "$.plots[" + std::to_string(i) + "]";
        const json& pj = plots[i];
        Plot plot;
        plot.id = static_cast<int>(integer(field(pj, "id", p), p + ".id"));
        if (plot.id != static_cast<int>(i)) {
            throw InstanceError(Kind::Range, p + ".id", "plot ids must be dense 0..N-1 in order");
        }
        const long long floors = integer(field(pj, "floors", p), p + ".floors");
        if (floors < 1 || floors > 1000) {
            throw InstanceError(Kind::Range, p + ".floors", "floor count must be in [1, 1000]");
        }
        plot.floor_count = static_cast<int>(floors);
        plot.floor_space = number(field(pj, "floor_space", p), p + ".floor_space");
        if (!(plot.floor_space > 0.0)) {
            throw InstanceError(Kind::Range, p + ".floor_space", "floor space must be positive");
        }
        const json& locked = field(pj, "locked", p);
        if (!locked.is_boolean()) {
            throw InstanceError(Kind::Schema, p + ".locked", "expected a boolean");
        }
        plot.locked = locked.get<bool>();
        const json& nb = array(field(pj, "neighbors", p), p + ".neighbors");
        for (std::size_t t = 0; t < nb.size(); ++t) {
            const std::string np = p + ".neighbors[" + std::to_string(t) + "]";
            const long long j = integer(nb[t], np);
            if (j < 0 || j >= n) {
                throw InstanceError(Kind::DanglingNeighbor, np,
                                    "plot " + std::to_string(i) + " lists unknown neighbor " + std::to_string(j));
            }
            if (j == static_cast<long long>(i)) {
                throw InstanceError(Kind::Range, np, "plot " + std::to_string(i) + " lists itself as a neighbor");
            }
            plot.neighbors.push_back(static_cast<int>(j));
        }
        const json& au = array(field(pj, "actual_uses", p), p + ".actual_uses");
        if (static_cast<long long>(au.size()) != floors) {
            throw InstanceError(Kind::Range, p + ".actual_uses", "length must equal the floor count");
        }
        for (std::size_t f = 0; f < au.size(); ++f) {
            const long long u = integer(au[f], p + ".actual_uses[" + std::to_string(f) + "]");
            if (u < 0 || u >= k) {
                throw InstanceError(Kind::Range, p + ".actual_uses[" + std::to_string(f) + "]",
                                    "use code out of range");
            }
            plot.actual_uses.push_back(static_cast<UseCode>(u));
        }
        inst.plots.push_back(std::move(plot));
    }

    inst.compat = matrix(field(doc, "compat", "$"), static_cast<std::size_t>(k), static_cast<std::size_t>(k),
                         "$.compat");
    inst.price = matrix(field(doc, "price", "$"), inst.num_plots(), static_cast<std::size_t>(k), "$.price");
    for (std::size_t i = 0; i < inst.num_plots(); ++i) {
        for (int m = 0; m < k; ++m) {
            if (inst.price(i, m) < 0.0) {
                throw InstanceError(Kind::Range, "$.price[" + std::to_string(i) + "][" + std::to_string(m) + "]",
                                    "price must be non-negative");
            }
        }
    }
    inst.gamma = number(field(doc, "gamma", "$"), "$.gamma");
    if (inst.gamma < 0.0) {
        throw InstanceError(Kind::Range, "$.gamma", "gamma must be non-negative");
    }
    inst.mu = number(field(doc, "mu", "$"), "$.mu");
    if (inst.mu < 0.0 || inst.mu > 1.0) {
        throw InstanceError(Kind::Range, "$.mu", "mu must be in [0, 1]");
    }
    inst.price_min = number(field(doc, "price_min", "$"), "$.price_min");
    inst.price_max = number(field(doc, "price_max", "$"), "$.price_max");
    if (inst.price_min > inst.price_max) {
        throw InstanceError(Kind::Range, "$.price_min", "price_min exceeds price_max");
    }

    try {
        inst.validate();
    } catch (const ModelError& e) {
        throw InstanceError(Kind::Range, "$", e.what());
    }
    return inst;
}

ProblemInstance load_instance_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InstanceError(Kind::Parse, path.string(), "cannot open file");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_instance(buf.str());
}

json instance_to_json(const ProblemInstance& inst)
{
    json doc;
    doc["version"] = kInstanceFormatVersion;
    json uses = json::array();
    for (const auto& u : inst.uses) {
        uses.push_back({{"id", u.id}, {"name", u.name}});
    }
    doc["uses"] = std::move(uses);
    json plots = json::array();
    for (const auto& p : inst.plots) {
        json actual = json::array();
        for (UseCode u : p.actual_uses) {
            actual.push_back(static_cast<int>(u));
        }
        plots.push_back({{"id", p.id},
                         {"floors", p.floor_count},
                         {"floor_space", p.floor_space},
                         {"neighbors", p.neighbors},
                         {"locked", p.locked},
                         {"actual_uses", std::move(actual)}});
    }
    doc["plots"] = std::move(plots);
    doc["compat"] = matrix_json(inst.compat);
    doc["price"] = matrix_json(inst.price);
    doc["gamma"] = inst.gamma;
    doc["mu"] = inst.mu;
    doc["price_min"] = inst.price_min;
    doc["price_max"] = inst.price_max;
    return doc;
}

std::string save_instance(const ProblemInstance& inst) { return instance_to_json(inst).dump(2) + "\n"; }

void save_instance_file(const ProblemInstance& inst, const std::filesystem::path& path)
{
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    out << save_instance(inst);
}

void GeneratorSpec::validate() const
{
    if (grid_width < 1 || grid_height < 1) {
        throw std::invalid_argument("grid dimensions must be positive");
    }
    if (uses < 2 || uses > kMaxUses) {
        throw std::invalid_argument("use count must be in [2, " + std::to_string(kMaxUses) + "]");
    }
    if (floor_min < 1 || floor_max < floor_min) {
        throw std::invalid_argument("floor range must satisfy 1 <= min <= max");
    }
    if (!(locked_fraction >= 0.0 && locked_fraction <= 1.0)) {
        throw std::invalid_argument("locked_fraction must be in [0, 1]");
    }
    if (!(dominant_share >= 0.0 && dominant_share <= 1.0)) {
        throw std::invalid_argument("dominant_share must be in [0, 1]");
    }
    if (!(footprint > 0.0) || !(price_rate > 0.0) || !(price_noise >= 0.0 && price_noise < 1.0)) {
        throw std::invalid_argument("footprint and price_rate must be positive, price_noise in [0, 1)");
    }
    if (!(gamma >= 0.0) || !(mu >= 0.0 && mu <= 1.0)) {
        throw std::invalid_argument("gamma must be non-negative and mu in [0, 1]");
    }
    if (clusters < 0) {
        throw std::invalid_argument("clusters must be non-negative");
    }
}

GeneratorSpec generator_spec_from_json(const json& j)
{
    GeneratorSpec s;
    s.grid_width = j.value("grid_width", s.grid_width);
    s.grid_height = j.value("grid_height", s.grid_height);
    s.uses = j.value("uses", s.uses);
    s.floor_min = j.value("floor_min", s.floor_min);
    s.floor_max = j.value("floor_max", s.floor_max);
    s.locked_fraction = j.value("locked_fraction", s.locked_fraction);
    s.footprint = j.value("footprint", s.footprint);
    s.clusters = j.value("clusters", s.clusters);
    s.dominant_share = j.value("dominant_share", s.dominant_share);
    s.price_rate = j.value("price_rate", s.price_rate);
    s.price_noise = j.value("price_noise", s.price_noise);
    s.gamma = j.value("gamma", s.gamma);
    s.mu = j.value("mu", s.mu);
    s.seed = j.value("seed", s.seed);
    s.validate();
    return s;
}

ProblemInstance generate_synthetic(const GeneratorSpec& spec)
{
    spec.validate();
    Rng rng(spec.seed);
    const int w = spec.grid_width;
    const int h = spec.grid_height;
    const auto n = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
    const int k = spec.uses;

    ProblemInstance inst;
    static const char* const kNames[] = {"residential", "commercial", "office"};
    for (int m = 0; m < k; ++m) {
        inst.uses.push_back({m, m < 3 ? kNames[m] : "use" + std::to_string(m)});
    }

    // Use clusters: nearest seed point decides a plot's dominant use. Seed
    // uses cycle through all categories so each appears on the map.
    int clusters = spec.clusters;
    if (clusters == 0) {
        clusters = std::max(k, static_cast<int>(std::lround(std::sqrt(static_cast<double>(n)) / 2.0)));
    }
    struct Seed {
        double x, y;
        int use;
    };
    std::vector<Seed> seeds;
    for (int c = 0; c < clusters; ++c) {
        seeds.push_back({rng.uniform(0.0, w), rng.uniform(0.0, h), c % k});
    }

    std::vector<double> use_rate(static_cast<std::size_t>(k));
    for (int m = 0; m < k; ++m) {
        use_rate[m] = m == 0 ? 1.0 : rng.uniform(0.8, 1.6);
    }

    inst.compat = Matrix(static_cast<std::size_t>(k), static_cast<std::size_t>(k));
    for (int l = 0; l < k; ++l) {
        inst.compat(l, l) = 1.0;
        for (int m = l + 1; m < k; ++m) {
            const double c = rng.uniform(-1.0, 1.0);
            inst.compat(l, m) = c;
            inst.compat(m, l) = c;
        }
    }

    inst.price = Matrix(n, static_cast<std::size_t>(k));
    const double cx = 0.5 * (w - 1);
    const double cy = 0.5 * (h - 1);
    const double max_dist = std::max(std::hypot(cx, cy), 1.0);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const auto i = static_cast<std::size_t>(y) * w + x;
            Plot p;
            p.id = static_cast<int>(i);
            if (x > 0) {
                p.neighbors.push_back(static_cast<int>(i - 1));
            }
            if (x + 1 < w) {
                p.neighbors.push_back(static_cast<int>(i + 1));
            }
            if (y > 0) {
                p.neighbors.push_back(static_cast<int>(i - w));
            }
            if (y + 1 < h) {
                p.neighbors.push_back(static_cast<int>(i + w));
            }
            std::sort(p.neighbors.begin(), p.neighbors.end());

            p.floor_count = spec.floor_min + static_cast<int>(rng.below(spec.floor_max - spec.floor_min + 1));
            p.floor_space = spec.footprint * p.floor_count;
            p.locked = rng.bernoulli(spec.locked_fraction);

            int dominant = 0;
            double best = std::numeric_limits<double>::infinity();
            for (const auto& s : seeds) {
                const double d = std::hypot(s.x - (x + 0.5), s.y - (y + 0.5));
                if (d < best) {
                    best = d;
                    dominant = s.use;
                }
            }
            for (int f = 0; f < p.floor_count; ++f) {
                const bool keep = rng.bernoulli(spec.dominant_share);
                const int drawn = static_cast<int>(rng.below(static_cast<std::size_t>(k)));
                p.actual_uses.push_back(static_cast<UseCode>(keep ? dominant : drawn));
            }

            const double location = 1.0 + 0.5 * (1.0 - std::hypot(x - cx, y - cy) / max_dist);
            for (int m = 0; m < k; ++m) {
                const double noise = 1.0 + spec.price_noise * rng.uniform(-1.0, 1.0);
                inst.price(i, m) = spec.price_rate * p.floor_space * use_rate[m] * location * noise;
            }
            inst.plots.push_back(std::move(p));
        }
    }

    const double actual_price = evaluate_price(inst, inst.actual());
    inst.gamma = spec.gamma;
    inst.mu = spec.mu;
    inst.price_min = actual_price * 0.9835;
    inst.price_max = actual_price * 1.097;
    inst.validate();
    return inst;
}

} // namespace landalloc
