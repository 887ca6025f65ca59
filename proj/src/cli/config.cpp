#include "tgeo/cli/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "tgeo/cli/output.hpp"
#include "tgeo/error.hpp"

namespace tgeo::cli {

json default_config() {
    return json::parse(R"({
  "geometry": {
    "kind": "distorted_minkowski",
    "dimension": 4,
    "d": 0.01,
    "sigma0": 0.001,
    "ramp": "step",
    "units": "cgs",
    "c": 3e10,
    "hbar": 1.0546e-27,
    "b": 1e-17,
    "m": 9.109e-28
  },
  "sigma": {
    "p": [0.0, 0.0, 0.0, 0.0],
    "q": [1.0, 0.5, 0.0, 0.0]
  },
  "tube": {
    "p0": [0.0, 0.0, 0.0, 0.0],
    "p1": [1.0, 0.0, 0.0, 0.0],
    "radius_sq": 4.0,
    "n_directions": 64,
    "tol": 1e-9,
    "sampling": "lattice",
    "seed": 0
  },
  "worldline": {
    "mu": 1.0,
    "steps": 100,
    "lines": 1000,
    "measure": "isotropic_rest_frame",
    "seed": 1,
    "workers": 1,
    "n_directions": 64,
    "max_attempts": 16
  },
  "ensemble": {
    "solver": "hydro",
    "quantum": true,
    "hamiltonian": "free",
    "x_lo": -7.4,
    "x_hi": 7.4,
    "nx": 1024,
    "p_lo": -8.0,
    "p_hi": 8.0,
    "np": 512,
    "dt": 0.0,
    "t_end": 1.0,
    "n_outputs": 4,
    "m": 1.0,
    "hbar": 1.0,
    "c": 1.0,
    "b0": 1.0,
    "v1": 0.0,
    "v2": 0.0,
    "x0": 0.0,
    "sigma0": 1.0,
    "p0": 0.0,
    "beam_width": 0.05
  },
  "compare": {
    "hbar": 1.0,
    "m": 1.0,
    "sigma0": 1.0,
    "n": 1024,
    "x_lo": -7.4,
    "x_hi": 7.4,
    "t_end": 2.0,
    "check_times": [0.5, 1.0, 2.0],
    "dt_schrodinger": 0.001,
    "hydro_dt_fraction": 0.8,
    "linf_tol": 0.001,
    "variance_tol": 0.005
  },
  "output": {
    "directory": "",
    "formats": ["csv", "json"],
    "dump_lines": false
  }
})");
}

namespace {

const char* type_name(const json& v) {
    if (v.is_number_unsigned()) return "unsigned integer";
    if (v.is_number()) return "number";
    return v.type_name();
}

// Converts `v` to the type of the default `ref`, or throws.
json coerce(const json& ref, const json& v, const std::string& key) {
    auto mismatch = [&] {
        return ValidationError("config key '" + key + "' expects " + type_name(ref) + ", got " +
                               type_name(v));
    };
    if (ref.is_number_unsigned()) {
        if (v.is_number_unsigned()) return v;
        if (v.is_number_float()) {
            const double d = v.get<double>();
            if (d >= 0.0 && d <= 9007199254740992.0 && std::floor(d) == d)
                return json(static_cast<std::uint64_t>(d));
        }
        throw mismatch();
    }
    if (ref.is_number()) {
        if (!v.is_number()) throw mismatch();
        return json(v.get<double>());
    }
    if (ref.is_boolean() || ref.is_string()) {
        if (v.type() != ref.type()) throw mismatch();
        return v;
    }
    if (ref.is_array()) {
        if (!v.is_array()) throw mismatch();
        const bool numeric = !ref.empty() && ref.front().is_number();
        json out = json::array();
        for (const auto& e : v) {
            if (numeric) {
                if (!e.is_number()) throw ValidationError("config key '" + key + "' expects numbers");
                out.push_back(e.get<double>());
            } else {
                if (!e.is_string()) throw ValidationError("config key '" + key + "' expects strings");
                out.push_back(e);
            }
        }
        return out;
    }
    throw mismatch();
}

}  // namespace

void merge_config(json& base, const json& user, const std::string& prefix) {
    if (!user.is_object()) {
        throw ValidationError(prefix.empty() ? "config must be a JSON object"
                                             : "config key '" + prefix + "' must be an object");
    }
    for (const auto& [k, v] : user.items()) {
        const std::string key = prefix.empty() ? k : prefix + "." + k;
        auto it = base.find(k);
        if (it == base.end()) throw ValidationError("unknown config key '" + key + "'");
        if (it->is_object()) {
            merge_config(*it, v, key);
        } else {
            *it = coerce(*it, v, key);
        }
    }
}

void apply_override(json& cfg, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0)
        throw ValidationError("override '" + assignment + "' is not of the form key=value");
    const std::string key = assignment.substr(0, eq);
    const std::string text = assignment.substr(eq + 1);
    json value = json::parse(text, nullptr, false);
    if (value.is_discarded()) value = text;

    // Build {"a": {"b": value}} from "a.b" and merge it.
    json patch = value;
    std::string rest = key;
    std::vector<std::string> parts;
    std::size_t pos;
    while ((pos = rest.find('.')) != std::string::npos) {
        parts.push_back(rest.substr(0, pos));
        rest = rest.substr(pos + 1);
    }
    parts.push_back(rest);
    for (auto it = parts.rbegin(); it != parts.rend(); ++it) {
        if (it->empty()) throw ValidationError("override key '" + key + "' has an empty part");
        patch = json{{*it, patch}};
    }
    merge_config(cfg, patch);
}

json load_config(const std::string& path, const std::vector<std::string>& overrides) {
    json cfg = default_config();
    if (!path.empty()) {
        std::ifstream in(path);
        if (!in) throw ValidationError("cannot read config file '" + path + "'");
        std::stringstream ss;
        ss << in.rdbuf();
        json user = json::parse(ss.str(), nullptr, false);
        if (user.is_discarded()) throw ValidationError("config file '" + path + "' is not valid JSON");
        merge_config(cfg, user);
    }
    for (const auto& o : overrides) apply_override(cfg, o);
    return cfg;
}

std::string config_hash(const json& cfg) {
    json hashed = cfg;
    for (const auto& [block, key] : kExecutionKeys) {
        auto it = hashed.find(block);
        if (it != hashed.end()) it->erase(key);
    }
    return sha256_hex(hashed.dump());
}

WorldFunction GeometryConfig::world() const {
    switch (kind) {
        case WorldKind::Euclidean: return WorldFunction::euclidean(dimension);
        case WorldKind::Minkowski: return WorldFunction::minkowski(dimension, 1.0);
        case WorldKind::DistortedMinkowski:
            return WorldFunction::distorted(dimension, 1.0, profile);
    }
    return WorldFunction::euclidean(dimension);
}

namespace {

double positive(const json& block, const char* key, const std::string& where) {
    const double v = block.at(key).get<double>();
    if (!std::isfinite(v) || v <= 0.0)
        throw ValidationError("config key '" + where + "." + key + "' must be > 0");
    return v;
}

double finite(const json& block, const char* key, const std::string& where) {
    const double v = block.at(key).get<double>();
    if (!std::isfinite(v)) throw ValidationError("config key '" + where + "." + key + "' must be finite");
    return v;
}

std::size_t count(const json& block, const char* key, const std::string& where) {
    const auto v = block.at(key).get<std::uint64_t>();
    if (v == 0) throw ValidationError("config key '" + where + "." + key + "' must be >= 1");
    return static_cast<std::size_t>(v);
}

Point point(const json& block, const char* key, const std::string& where, std::size_t dim) {
    const auto c = block.at(key).get<std::vector<double>>();
    if (c.size() != dim) {
        throw ValidationError("config key '" + where + "." + key + "' needs " + std::to_string(dim) +
                              " coordinates, got " + std::to_string(c.size()));
    }
    return Point(std::span<const double>(c));
}

template <class E>
E choose(const json& block, const char* key, const std::string& where,
         std::initializer_list<std::pair<const char*, E>> options) {
    const auto s = block.at(key).get<std::string>();
    std::string names;
    for (const auto& [name, value] : options) {
        if (s == name) return value;
        names += names.empty() ? name : std::string(", ") + name;
    }
    throw ValidationError("config key '" + where + "." + key + "' must be one of {" + names +
                          "}, got '" + s + "'");
}

}  // namespace

ExperimentConfig parse_config(const json& cfg) {
    ExperimentConfig out;

    const json& g = cfg.at("geometry");
    auto& geo = out.geometry;
    geo.kind = choose<WorldKind>(g, "kind", "geometry",
                                 {{"euclidean", WorldKind::Euclidean},
                                  {"minkowski", WorldKind::Minkowski},
                                  {"distorted_minkowski", WorldKind::DistortedMinkowski}});
    geo.dimension = count(g, "dimension", "geometry");
    if (geo.dimension < 2 || geo.dimension > Point::kMaxDim)
        throw ValidationError("config key 'geometry.dimension' must be 2, 3 or 4");
    geo.profile.d = finite(g, "d", "geometry");
    if (geo.profile.d < 0.0) throw ValidationError("config key 'geometry.d' must be >= 0");
    geo.profile.sigma0 = positive(g, "sigma0", "geometry");
    geo.profile.ramp = choose<Ramp>(g, "ramp", "geometry",
                                    {{"step", Ramp::Step},
                                     {"linear", Ramp::Linear},
                                     {"smoothstep", Ramp::SmoothStep}});
    geo.units = choose<std::string>(g, "units", "geometry", {{"natural", "natural"}, {"cgs", "cgs"}});
    geo.constants.c = positive(g, "c", "geometry");
    geo.constants.hbar = positive(g, "hbar", "geometry");
    geo.constants.b = positive(g, "b", "geometry");
    geo.constants.m = positive(g, "m", "geometry");
    const std::size_t dim = geo.dimension;

    const json& s = cfg.at("sigma");
    out.sigma.p = point(s, "p", "sigma", dim);
    out.sigma.q = point(s, "q", "sigma", dim);

    const json& t = cfg.at("tube");
    out.tube.p0 = point(t, "p0", "tube", dim);
    out.tube.p1 = point(t, "p1", "tube", dim);
    out.tube.radius_sq = positive(t, "radius_sq", "tube");
    out.tube.options.n_directions = count(t, "n_directions", "tube");
    out.tube.options.tol = positive(t, "tol", "tube");
    out.tube.options.sampling = choose<DirectionSampling>(
        t, "sampling", "tube",
        {{"lattice", DirectionSampling::Lattice}, {"random", DirectionSampling::Random}});
    out.tube.options.seed = t.at("seed").get<std::uint64_t>();

    const json& w = cfg.at("worldline");
    auto& wl = out.worldline;
    wl.mu = positive(w, "mu", "worldline");
    wl.steps = count(w, "steps", "worldline");
    wl.lines = count(w, "lines", "worldline");
    wl.options.measure = choose<SamplingMeasure>(
        w, "measure", "worldline", {{"isotropic_rest_frame", SamplingMeasure::IsotropicRestFrame}});
    wl.seed = w.at("seed").get<std::uint64_t>();
    wl.workers = count(w, "workers", "worldline");
    wl.options.cross_section.n_directions = count(w, "n_directions", "worldline");
    wl.options.max_attempts = count(w, "max_attempts", "worldline");

    const json& e = cfg.at("ensemble");
    auto& en = out.ensemble;
    en.solver = choose<Solver>(e, "solver", "ensemble",
                               {{"liouville", Solver::Liouville},
                                {"hydro", Solver::Hydro},
                                {"schrodinger", Solver::Schrodinger}});
    en.quantum = e.at("quantum").get<bool>();
    en.hamilton.kind = choose<HamiltonKind>(e, "hamiltonian", "ensemble",
                                            {{"free", HamiltonKind::FreeNonrel},
                                             {"free_rel", HamiltonKind::FreeRel},
                                             {"quadratic", HamiltonKind::QuadraticPotential}});
    en.x_lo = finite(e, "x_lo", "ensemble");
    en.x_hi = finite(e, "x_hi", "ensemble");
    en.nx = count(e, "nx", "ensemble");
    en.p_lo = finite(e, "p_lo", "ensemble");
    en.p_hi = finite(e, "p_hi", "ensemble");
    en.np = count(e, "np", "ensemble");
    if (en.x_hi <= en.x_lo) throw ValidationError("config needs ensemble.x_lo < ensemble.x_hi");
    if (en.p_hi <= en.p_lo) throw ValidationError("config needs ensemble.p_lo < ensemble.p_hi");
    en.dt = finite(e, "dt", "ensemble");
    if (en.dt < 0.0) throw ValidationError("config key 'ensemble.dt' must be >= 0 (0 = automatic)");
    en.t_end = positive(e, "t_end", "ensemble");
    en.n_outputs = count(e, "n_outputs", "ensemble");
    en.hamilton.m = positive(e, "m", "ensemble");
    en.hamilton.hbar = positive(e, "hbar", "ensemble");
    en.hamilton.c = positive(e, "c", "ensemble");
    en.hamilton.v1 = finite(e, "v1", "ensemble");
    en.hamilton.v2 = finite(e, "v2", "ensemble");
    en.b0 = positive(e, "b0", "ensemble");
    en.x0 = finite(e, "x0", "ensemble");
    en.sigma0 = positive(e, "sigma0", "ensemble");
    en.p0 = finite(e, "p0", "ensemble");
    en.beam_width = positive(e, "beam_width", "ensemble");

    const json& c = cfg.at("compare");
    auto& cmp = out.compare;
    cmp.hbar = positive(c, "hbar", "compare");
    cmp.m = positive(c, "m", "compare");
    cmp.sigma0 = positive(c, "sigma0", "compare");
    cmp.n = count(c, "n", "compare");
    cmp.x_lo = finite(c, "x_lo", "compare");
    cmp.x_hi = finite(c, "x_hi", "compare");
    if (cmp.x_hi <= cmp.x_lo) throw ValidationError("config needs compare.x_lo < compare.x_hi");
    cmp.t_end = positive(c, "t_end", "compare");
    cmp.check_times = c.at("check_times").get<std::vector<double>>();
    cmp.dt_schrodinger = positive(c, "dt_schrodinger", "compare");
    cmp.hydro_dt_fraction = positive(c, "hydro_dt_fraction", "compare");
    cmp.linf_tol = positive(c, "linf_tol", "compare");
    cmp.variance_tol = positive(c, "variance_tol", "compare");

    const json& o = cfg.at("output");
    out.output.directory = o.at("directory").get<std::string>();
    out.output.csv = out.output.json = false;
    for (const auto& f : o.at("formats")) {
        const auto name = f.get<std::string>();
        if (name == "csv") {
            out.output.csv = true;
        } else if (name == "json") {
            out.output.json = true;
        } else {
            throw ValidationError("config key 'output.formats' accepts csv and json, got '" + name + "'");
        }
    }
    out.output.dump_lines = o.at("dump_lines").get<bool>();
    return out;
}

const char* to_string(Solver s) noexcept {
    switch (s) {
        case Solver::Liouville: return "liouville";
        case Solver::Hydro: return "hydro";
        case Solver::Schrodinger: return "schrodinger";
    }
    return "?";
}

}  // namespace tgeo::cli
