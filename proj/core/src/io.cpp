#include "smallscat/io.hpp"

#include <stdexcept>

#include <fmt/format.h>

namespace smallscat {

std::string format_double(double v)
{
    // Canonical text: -0 prints as 0.
    return fmt::format("{:.17g}", v == 0.0 ? 0.0 : v);
}

std::string fnv1a_hex(std::string_view bytes)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return fmt::format("{:016x}", h);
}

std::string field_csv(std::span<const Vec3> points, std::span<const CVec3> values, std::string_view provenance)
{
    if (points.size() != values.size())
        throw std::invalid_argument("field_csv: point and value counts differ");
    std::string out;
    if (!provenance.empty())
        out += fmt::format("# {}\n", provenance);
    out += kFieldCsvHeader;
    out += '\n';
    for (std::size_t r = 0; r < points.size(); ++r) {
        const auto& p = points[r];
        const auto& e = values[r];
        const double row[] = {p.x(),         p.y(),         p.z(),         e.x().real(), e.x().imag(),
                              e.y().real(),  e.y().imag(),  e.z().real(),  e.z().imag()};
        for (std::size_t c = 0; c < 9; ++c) {
            out += format_double(row[c]);
            out += c + 1 < 9 ? ',' : '\n';
        }
    }
    return out;
}

} // namespace smallscat
