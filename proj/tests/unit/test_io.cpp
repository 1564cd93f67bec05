#include <gtest/gtest.h>

#include <cstdlib>
#include <sstream>

#include "smallscat/io.hpp"

using namespace smallscat;

namespace {

TEST(FormatDouble, SeventeenDigitsRoundTrip)
{
    for (const double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0}) {
        const std::string s = format_double(v);
        EXPECT_EQ(std::strtod(s.c_str(), nullptr), v) << s;
    }
    EXPECT_EQ(format_double(0.1), "0.10000000000000001");
    EXPECT_EQ(format_double(2.0), "2");
    EXPECT_EQ(format_double(-0.0), "0");
}

TEST(Fnv1a, KnownVectors)
{
    EXPECT_EQ(fnv1a_hex(""), "cbf29ce484222325");
    EXPECT_EQ(fnv1a_hex("a"), "af63dc4c8601ec8c");
    EXPECT_EQ(fnv1a_hex("foobar"), "85944171f73967e8");
}

TEST(FieldCsv, HeaderProvenanceAndRows)
{
    const std::vector<Vec3> pts = {Vec3(0, 0.5, 1)};
    const std::vector<CVec3> vals = {CVec3(cplx{1, -1}, cplx{0.25, 0}, cplx{0, 2})};
    const std::string csv = field_csv(pts, vals, "config_hash=abc");
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "# config_hash=abc");
    std::getline(in, line);
    EXPECT_EQ(line, kFieldCsvHeader);
    std::getline(in, line);
    EXPECT_EQ(line, "0,0.5,1,1,-1,0.25,0,0,2");
    EXPECT_FALSE(std::getline(in, line));
}

TEST(FieldCsv, NoProvenanceLineWhenEmpty)
{
    const std::string csv = field_csv({}, {});
    EXPECT_EQ(csv, std::string(kFieldCsvHeader) + "\n");
}

} // namespace
