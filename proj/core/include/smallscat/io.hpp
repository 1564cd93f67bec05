#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "smallscat/types.hpp"

namespace smallscat {

/// Fixed 17-significant-digit rendering used by every text artifact.
std::string format_double(double v);

/// 64-bit FNV-1a, rendered as 16 lowercase hex digits.
std::string fnv1a_hex(std::string_view bytes);

/// Header line of the field CSV schema.
inline constexpr std::string_view kFieldCsvHeader = "x,y,z,re_ex,im_ex,re_ey,im_ey,re_ez,im_ez";

/// One row per point: x,y,z followed by Re/Im of each component. A non-empty
/// `provenance` is written first as a `# ` comment line.
std::string field_csv(std::span<const Vec3> points, std::span<const CVec3> values,
                      std::string_view provenance = {});

} // namespace smallscat
