#include "smallscat_app/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include <fmt/format.h>

#include "smallscat/errors.hpp"
#include "smallscat/fieldexpr.hpp"
#include "smallscat/io.hpp"

namespace smallscat::app {

using nlohmann::json;

namespace {

std::string join(const std::string& path, const std::string& key)
{
    return path.empty() ? key : path + "." + key;
}

// Fills `defaults` with the user document, rejecting unknown keys and type mismatches.
void overlay(json& defaults, const json& user, const std::string& path)
{
    if (!user.is_object())
        throw ConfigError("expected an object", path.empty() ? "$" : path);
    for (auto it = user.begin(); it != user.end(); ++it) {
        const std::string p = join(path, it.key());
        if (!defaults.contains(it.key()))
            throw ConfigError("unknown key", p);
        json& slot = defaults[it.key()];
        if (slot.is_object()) {
            overlay(slot, it.value(), p);
            continue;
        }
        const bool ok = (slot.is_number() && it.value().is_number()) || (slot.is_string() && it.value().is_string()) ||
                        (slot.is_array() && it.value().is_array()) || (slot.is_boolean() && it.value().is_boolean());
        if (!ok)
            throw ConfigError(fmt::format("expected a value of type {}", slot.type_name()), p);
        slot = it.value();
    }
}

double real_at(const json& doc, const std::string& path)
{
    const json* node = &doc;
    std::size_t start = 0;
    while (true) {
        const auto dot = path.find('.', start);
        node = &node->at(path.substr(start, dot - start));
        if (dot == std::string::npos)
            break;
        start = dot + 1;
    }
    const double v = node->get<double>();
    if (!std::isfinite(v))
        throw ConfigError("value must be finite", path);
    return v;
}

std::int64_t integer_at(const json& doc, const std::string& section, const std::string& key)
{
    const json& v = doc.at(section).at(key);
    const std::string path = section + "." + key;
    if (!v.is_number_integer())
        throw ConfigError("expected an integer", path);
    return v.get<std::int64_t>();
}

Vec3 vec3_at(const json& doc, const std::string& section, const std::string& key)
{
    const json& v = doc.at(section).at(key);
    const std::string path = section + "." + key;
    if (v.size() != 3)
        throw ConfigError("expected 3 numbers", path);
    Vec3 out;
    for (int i = 0; i < 3; ++i) {
        if (!v[i].is_number())
            throw ConfigError(fmt::format("element {} is not a number", i), path);
        out[i] = v[i].get<double>();
        if (!std::isfinite(out[i]))
            throw ConfigError(fmt::format("element {} is not finite", i), path);
    }
    return out;
}

std::string expression_at(const json& doc, const std::string& section, const std::string& key)
{
    const std::string src = doc.at(section).at(key).get<std::string>();
    try {
        (void)FieldExpr::parse(src);
    } catch (const ParseError& e) {
        throw ConfigError(fmt::format("invalid expression \"{}\": {}", src, e.what()), section + "." + key);
    }
    return src;
}

} // namespace

json default_config()
{
    return {
        {"wave", {{"omega", 2.0}, {"eps0", 1.0}, {"mu0", 1.0}, {"sigma0", 0.0}}},
        {"incident", {{"E_re", {1.0, 0.0, 0.0}}, {"E_im", {0.0, 0.0, 0.0}}, {"alpha", {0.0, 0.0, 1.0}}}},
        {"domain", {{"center", {0.5, 0.5, 0.5}}, {"edge", 1.0}}},
        {"profiles", {{"density_N", "22*gauss(0.5,0.5,0.5,0.3)"}, {"impedance_h", "0.0008"}}},
        {"particles", {{"a", 0.05}, {"kappa", 0.5}, {"mode", "lattice"}, {"seed", 1}, {"cap", 20000}}},
        {"continuum", {{"n", 16}}},
        {"outputs", {{"dir", "out"}, {"formats", {"csv", "json"}}}},
        {"solver",
         {{"backend", "auto"},
          {"direct_limit", 2000},
          {"tolerance", 1e-8},
          {"restart", 60},
          {"max_iterations", 2000}}},
        {"sampling", {{"shell_points", 64}, {"shell_gap", 0.2}}},
        {"convergence", {{"schedule", {0.08, 0.05, 0.032}}}},
        {"design", {{"target_mu", "1"}, {"grid_n", 17}}},
    };
}

RunConfig parse_config(const json& doc)
{
    json full = default_config();
    overlay(full, doc, "");

    RunConfig cfg;
    cfg.wave.omega = real_at(full, "wave.omega");
    cfg.wave.eps0 = real_at(full, "wave.eps0");
    cfg.wave.mu0 = real_at(full, "wave.mu0");
    cfg.wave.sigma0 = real_at(full, "wave.sigma0");
    if (!(cfg.wave.omega > 0.0))
        throw ConfigError("must be positive", "wave.omega");
    if (!(cfg.wave.eps0 > 0.0))
        throw ConfigError("must be positive", "wave.eps0");
    if (!(cfg.wave.mu0 > 0.0))
        throw ConfigError("must be positive", "wave.mu0");
    if (cfg.wave.sigma0 < 0.0)
        throw ConfigError("must be non-negative", "wave.sigma0");

    const Vec3 e_re = vec3_at(full, "incident", "E_re");
    const Vec3 e_im = vec3_at(full, "incident", "E_im");
    cfg.amplitude = e_re.cast<cplx>() + kI * e_im.cast<cplx>();
    cfg.direction = vec3_at(full, "incident", "alpha");
    try {
        (void)PlaneWave(cfg.amplitude, cfg.direction, cfg.wave.wavenumber());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what(), cfg.direction.norm() > 0.0 ? "incident.E_re" : "incident.alpha");
    }

    cfg.domain.center = vec3_at(full, "domain", "center");
    cfg.domain.edge = real_at(full, "domain.edge");
    if (!(cfg.domain.edge > 0.0))
        throw ConfigError("must be positive", "domain.edge");

    cfg.density_expr = expression_at(full, "profiles", "density_N");
    cfg.impedance_expr = expression_at(full, "profiles", "impedance_h");

    cfg.radius = real_at(full, "particles.a");
    if (!(cfg.radius > 0.0))
        throw ConfigError("must be positive", "particles.a");
    cfg.kappa = real_at(full, "particles.kappa");
    if (!(cfg.kappa > 0.0 && cfg.kappa < 1.0))
        throw ConfigError(fmt::format("kappa = {} must lie in the open interval (0, 1)", cfg.kappa), "particles.kappa");
    const std::string mode = full["particles"]["mode"].get<std::string>();
    if (mode == "lattice")
        cfg.mode = PlacementMode::lattice;
    else if (mode == "stratified")
        cfg.mode = PlacementMode::stratified;
    else
        throw ConfigError("expected \"lattice\" or \"stratified\"", "particles.mode");
    const auto seed = integer_at(full, "particles", "seed");
    if (seed < 0)
        throw ConfigError("must be non-negative", "particles.seed");
    cfg.seed = static_cast<std::uint64_t>(seed);
    const auto cap = integer_at(full, "particles", "cap");
    if (cap < 1)
        throw ConfigError("must be positive", "particles.cap");
    cfg.cap = static_cast<std::size_t>(cap);

    const auto n = integer_at(full, "continuum", "n");
    if (n < 1 || n > 64)
        throw ConfigError("must lie in [1, 64]", "continuum.n");
    cfg.continuum_n = static_cast<int>(n);

    cfg.out_dir = full["outputs"]["dir"].get<std::string>();
    cfg.write_csv = false;
    cfg.write_json = false;
    for (std::size_t i = 0; i < full["outputs"]["formats"].size(); ++i) {
        const json& f = full["outputs"]["formats"][i];
        if (f == "csv")
            cfg.write_csv = true;
        else if (f == "json")
            cfg.write_json = true;
        else
            throw ConfigError("expected \"csv\" or \"json\"", fmt::format("outputs.formats[{}]", i));
    }

    const std::string backend = full["solver"]["backend"].get<std::string>();
    if (backend == "auto")
        cfg.solver.backend = Backend::automatic;
    else if (backend == "direct")
        cfg.solver.backend = Backend::direct;
    else if (backend == "gmres")
        cfg.solver.backend = Backend::iterative;
    else
        throw ConfigError("expected \"auto\", \"direct\" or \"gmres\"", "solver.backend");
    const auto limit = integer_at(full, "solver", "direct_limit");
    if (limit < 0)
        throw ConfigError("must be non-negative", "solver.direct_limit");
    cfg.solver.direct_limit = static_cast<std::size_t>(limit);
    cfg.solver.iterative.tolerance = real_at(full, "solver.tolerance");
    if (!(cfg.solver.iterative.tolerance > 0.0))
        throw ConfigError("must be positive", "solver.tolerance");
    const auto restart = integer_at(full, "solver", "restart");
    const auto max_it = integer_at(full, "solver", "max_iterations");
    if (restart < 1)
        throw ConfigError("must be positive", "solver.restart");
    if (max_it < 1)
        throw ConfigError("must be positive", "solver.max_iterations");
    cfg.solver.iterative.restart = static_cast<int>(restart);
    cfg.solver.iterative.max_iterations = static_cast<int>(max_it);

    const auto pts = integer_at(full, "sampling", "shell_points");
    if (pts < 1)
        throw ConfigError("must be positive", "sampling.shell_points");
    cfg.shell_points = static_cast<std::size_t>(pts);
    cfg.shell_gap = real_at(full, "sampling.shell_gap");
    if (!(cfg.shell_gap >= 0.2))
        throw ConfigError("evaluation shell must keep a gap of at least 0.2 diameters", "sampling.shell_gap");

    const json& sched = full["convergence"]["schedule"];
    for (std::size_t i = 0; i < sched.size(); ++i) {
        if (!sched[i].is_number() || !(sched[i].get<double>() > 0.0))
            throw ConfigError("expected a positive number", fmt::format("convergence.schedule[{}]", i));
        cfg.schedule.push_back(sched[i].get<double>());
    }

    cfg.target_mu = expression_at(full, "design", "target_mu");
    const auto gn = integer_at(full, "design", "grid_n");
    if (gn < 1 || gn > 256)
        throw ConfigError("must lie in [1, 256]", "design.grid_n");
    cfg.design_n = static_cast<int>(gn);

    cfg.canonical = std::move(full);
    cfg.hash = fnv1a_hex(cfg.canonical.dump());
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError("cannot open configuration file " + path.string(), "$");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("malformed JSON: ") + e.what(), "$");
    }
    return parse_config(doc);
}

EffectiveMedium RunConfig::medium() const
{
    return EffectiveMedium(ScalarFieldProfile::parse(density_expr), ScalarFieldProfile::parse(impedance_expr), wave,
                           domain);
}

std::shared_ptr<const PlaneWave> RunConfig::plane_wave() const
{
    return std::make_shared<const PlaneWave>(amplitude, direction, wave.wavenumber());
}

PlacementOptions RunConfig::placement() const
{
    return {mode, seed, cap};
}

} // namespace smallscat::app
