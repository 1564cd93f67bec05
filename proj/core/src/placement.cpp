#include "smallscat/placement.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include <fmt/format.h>

#include "smallscat/errors.hpp"

namespace smallscat {

namespace {

constexpr int kPeakSamples = 32;
constexpr std::size_t kMaxCells = 64u * 1000u * 1000u;
constexpr double kZeroDensity = 1e-14;

std::uint64_t spread_bits(std::uint64_t v)
{
    v &= 0x1fffff;
    v = (v | v << 32) & 0x1f00000000ffffULL;
    v = (v | v << 16) & 0x1f0000ff0000ffULL;
    v = (v | v << 8) & 0x100f00f00f00f00fULL;
    v = (v | v << 4) & 0x10c30c30c30c30c3ULL;
    v = (v | v << 2) & 0x1249249249249249ULL;
    return v;
}

// Smallest size >= n of the form 2^j or 3 * 2^j. Every dyadic sub-box of
// the domain with at least two cells per side is then a whole number of
// cells, so sub-box counts are not biased by cells straddling a face.
std::size_t dyadic_size(std::size_t n)
{
    if (n < 4)
        return n;
    std::size_t step = 1;
    while (n / step >= 4)
        step *= 2;
    return (n + step - 1) / step * step;
}

std::uint64_t morton(std::uint64_t i, std::uint64_t j, std::uint64_t k)
{
    return spread_bits(i) | (spread_bits(j) << 1) | (spread_bits(k) << 2);
}

// Uniform double in [0, 1) from the top 53 bits; independent of the
// standard library's distribution implementation.
double unit_uniform(std::mt19937_64& rng)
{
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

} // namespace

DensitySurvey survey_density(const ScalarFieldProfile& density, const Box& domain)
{
    DensitySurvey s;
    const double h = domain.edge / kPeakSamples;
    const Vec3 lo = domain.lower();
    for (int k = 0; k < kPeakSamples; ++k)
        for (int j = 0; j < kPeakSamples; ++j)
            for (int i = 0; i < kPeakSamples; ++i) {
                const Vec3 x = lo + h * Vec3(i + 0.5, j + 0.5, k + 0.5);
                const double n = density_at(density, x);
                s.peak = std::max(s.peak, n);
                s.integral += n;
            }
    s.integral *= h * h * h;
    return s;
}

double count_scale(double radius, double kappa)
{
    return std::pow(radius, -(2.0 - kappa));
}

double spacing_law(double radius, double kappa, double density_peak)
{
    return std::cbrt(1.0 / (count_scale(radius, kappa) * density_peak));
}

ParticleCloud generate_cloud(const ScalarFieldProfile& density, const Box& domain, double radius,
                             double kappa, const PlacementOptions& options)
{
    if (!(radius > 0.0) || !std::isfinite(radius))
        throw ConfigError("particle radius must be positive", "particles.a");
    if (!(kappa > 0.0 && kappa < 1.0))
        throw ConfigError("kappa must lie in (0, 1)", "particles.kappa");
    if (!(domain.edge > 0.0))
        throw ConfigError("domain edge must be positive", "domain.edge");

    ParticleCloud cloud;
    cloud.radius = radius;
    cloud.kappa = kappa;
    cloud.domain = domain;
    cloud.spacing = domain.edge;

    const double scale = count_scale(radius, kappa);
    const DensitySurvey survey = survey_density(density, domain);
    if (survey.peak <= kZeroDensity)
        return cloud;

    const double expected = scale * survey.integral;
    if (expected > static_cast<double>(options.cap)) {
        const double needed = std::pow(survey.integral / static_cast<double>(options.cap), 1.0 / (2.0 - kappa));
        throw ConfigError(fmt::format("expected particle count {:.0f} exceeds cap {}; "
                                      "a >= {:.6g} is needed at kappa = {}",
                                      expected, options.cap, needed, kappa),
                          "particles.a");
    }

    auto n = dyadic_size(static_cast<std::size_t>(
        std::max(1.0, std::ceil(domain.edge / spacing_law(radius, kappa, survey.peak) - 1e-9))));

    std::vector<double> lambda;
    for (int attempt = 0;; ++attempt) {
        if (n * n * n > kMaxCells)
            throw ConfigError(fmt::format("placement lattice of {}^3 cells is too large", n), "particles.a");
        const double h = domain.edge / static_cast<double>(n);
        const double per_cell = scale * h * h * h;
        const Vec3 lo = domain.lower();
        lambda.assign(n * n * n, 0.0);
        double worst = 0.0;
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t i = 0; i < n; ++i) {
                    const Vec3 x = lo + h * Vec3(i + 0.5, j + 0.5, k + 0.5);
                    const double nx = density_at(density, x);
                    const double l = nx > kZeroDensity ? per_cell * nx : 0.0;
                    lambda[i + n * (j + n * k)] = l;
                    worst = std::max(worst, l);
                }
        if (worst <= 1.0 + 1e-9 || attempt >= 64)
            break;
        n = dyadic_size(n + 1);
    }

    const double h = domain.edge / static_cast<double>(n);
    std::vector<std::size_t> order(lambda.size());
    std::vector<std::uint64_t> codes(lambda.size());
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t i = 0; i < n; ++i)
                codes[i + n * (j + n * k)] = morton(i, j, k);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return codes[a] < codes[b]; });

    // Offset 1/2 makes the total equal round(sum of lambda).
    std::vector<std::size_t> selected;
    double running = 0.5;
    double total = 0.0;
    for (std::size_t cell : order) {
        const double before = std::floor(running);
        running += lambda[cell];
        total += lambda[cell];
        if (std::floor(running) > before)
            selected.push_back(cell);
    }
    std::sort(selected.begin(), selected.end());

    std::mt19937_64 rng(options.seed);
    const Vec3 lo = domain.lower();
    cloud.positions.reserve(selected.size());
    for (std::size_t cell : selected) {
        const std::size_t i = cell % n;
        const std::size_t j = (cell / n) % n;
        const std::size_t k = cell / (n * n);
        const Vec3 center = lo + h * Vec3(i + 0.5, j + 0.5, k + 0.5);
        Vec3 x = center;
        if (options.mode == PlacementMode::stratified) {
            const Vec3 u(unit_uniform(rng), unit_uniform(rng), unit_uniform(rng));
            x = center + 0.5 * h * (u.array() - 0.5).matrix();
            if (density_at(density, x) <= kZeroDensity)
                x = center;
        }
        cloud.positions.push_back(x);
    }
    cloud.impedances.assign(cloud.positions.size(), cplx{});
    cloud.spacing = options.mode == PlacementMode::lattice ? h : 0.5 * h;
    cloud.expected_count = total;

    if (radius >= cloud.spacing)
        throw ConfigError(fmt::format("radius {} is not smaller than the particle spacing {:.6g}",
                                      radius, cloud.spacing),
                          "particles.a");
    return cloud;
}

ParticleCloud assign_impedances(ParticleCloud cloud, const ScalarFieldProfile& impedance)
{
    const double scale = std::pow(cloud.radius, cloud.kappa);
    cloud.impedances.resize(cloud.positions.size());
    cloud.nonpassive = 0;
    for (std::size_t m = 0; m < cloud.positions.size(); ++m) {
        const cplx h = impedance(cloud.positions[m]);
        if (h.real() < 0.0)
            ++cloud.nonpassive;
        cloud.impedances[m] = h / scale;
    }
    return cloud;
}

nlohmann::json cloud_to_json(const ParticleCloud& cloud)
{
    nlohmann::json particles = nlohmann::json::array();
    for (std::size_t m = 0; m < cloud.size(); ++m) {
        const auto& x = cloud.positions[m];
        particles.push_back({{"x", x.x()},
                             {"y", x.y()},
                             {"z", x.z()},
                             {"zeta_re", cloud.impedances[m].real()},
                             {"zeta_im", cloud.impedances[m].imag()}});
    }
    const Vec3& c = cloud.domain.center;
    return {{"a", cloud.radius},
            {"kappa", cloud.kappa},
            {"d", cloud.spacing},
            {"omega_box", {{"center", {c.x(), c.y(), c.z()}}, {"edge", cloud.domain.edge}}},
            {"expected_count", cloud.expected_count},
            {"nonpassive", cloud.nonpassive},
            {"particles", std::move(particles)}};
}

namespace {

double number_at(const nlohmann::json& obj, const char* key, const std::string& path)
{
    const auto it = obj.find(key);
    if (it == obj.end())
        throw ConfigError("missing key", path + "." + key);
    if (!it->is_number())
        throw ConfigError("expected a number", path + "." + key);
    return it->get<double>();
}

} // namespace

ParticleCloud cloud_from_json(const nlohmann::json& doc)
{
    if (!doc.is_object())
        throw ConfigError("cloud document must be an object", "$");
    ParticleCloud cloud;
    cloud.radius = number_at(doc, "a", "$");
    cloud.kappa = number_at(doc, "kappa", "$");
    cloud.spacing = number_at(doc, "d", "$");
    if (!doc.contains("omega_box") || !doc["omega_box"].is_object())
        throw ConfigError("missing object", "$.omega_box");
    const auto& box = doc["omega_box"];
    const auto& center = box.value("center", nlohmann::json{});
    if (!center.is_array() || center.size() != 3)
        throw ConfigError("expected 3 numbers", "$.omega_box.center");
    cloud.domain.center = Vec3(center[0].get<double>(), center[1].get<double>(), center[2].get<double>());
    cloud.domain.edge = number_at(box, "edge", "$.omega_box");
    if (doc.contains("expected_count"))
        cloud.expected_count = number_at(doc, "expected_count", "$");

    if (!doc.contains("particles") || !doc["particles"].is_array())
        throw ConfigError("missing array", "$.particles");
    const auto& particles = doc["particles"];
    for (std::size_t m = 0; m < particles.size(); ++m) {
        const std::string path = fmt::format("$.particles[{}]", m);
        const auto& p = particles[m];
        cloud.positions.emplace_back(number_at(p, "x", path), number_at(p, "y", path), number_at(p, "z", path));
        cloud.impedances.emplace_back(number_at(p, "zeta_re", path), number_at(p, "zeta_im", path));
        if (cloud.impedances.back().real() < 0.0)
            ++cloud.nonpassive;
    }
    return cloud;
}

} // namespace smallscat
