#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <string>

#include "helpers.hpp"
#include "lassodf/io.hpp"

using namespace lassodf;
using testutil::random_matrix;

namespace {

std::string write_temp(const std::string& name, const std::string& contents) {
    const std::string path = "/tmp/lassodf_io_" + name;
    std::ofstream out(path);
    out << contents;
    return path;
}

}  // namespace

TEST_CASE("format_double round-trips exactly") {
    const double cases[] = {0.0,   1.0,    -1.0,        1.0 / 3.0,  1e-300,
                            1e300, 2.5e-5, 123456.789,  -0.1,       1e17 + 1};
    for (double x : cases) {
        CHECK(std::stod(io::format_double(x)) == x);
    }
    Rng rng(81);
    for (int i = 0; i < 1000; ++i) {
        const double x = rng.next_gaussian() * std::pow(10.0, 30.0 * (rng.next_uniform() - 0.5));
        CHECK(std::stod(io::format_double(x)) == x);
    }
}

TEST_CASE("csv write/read round trip") {
    Rng rng(83);
    const Matrix m = random_matrix(rng, 17, 4);
    const std::string path = "/tmp/lassodf_io_roundtrip.csv";
    io::write_csv(path, {"a", "b", "c", "d"}, m);
    const auto table = io::read_csv(path);
    REQUIRE(table.header.size() == 4);
    CHECK(table.header[2] == "c");
    REQUIRE(table.values.rows() == 17);
    CHECK((table.values - m).cwiseAbs().maxCoeff() == 0.0);
    CHECK(table.column("d") == 3);
    CHECK_THROWS_AS(table.column("nope"), CsvParse);
    std::remove(path.c_str());
}

TEST_CASE("read_csv handles windows line endings") {
    const std::string path =
        write_temp("crlf.csv", "x,y\r\n1,2\r\n3,4\r\n");
    const auto table = io::read_csv(path);
    CHECK(table.header[1] == "y");
    CHECK(table.values(1, 0) == 3.0);
    CHECK(table.values(1, 1) == 4.0);
    std::remove(path.c_str());
}

TEST_CASE("read_csv rejects malformed input") {
    const std::string ragged =
        write_temp("ragged.csv", "x,y\n1,2\n3\n");
    CHECK_THROWS_AS(io::read_csv(ragged), CsvParse);
    std::remove(ragged.c_str());

    const std::string text =
        write_temp("text.csv", "x,y\n1,hello\n");
    CHECK_THROWS_AS(io::read_csv(text), CsvParse);
    std::remove(text.c_str());

    CHECK_THROWS_AS(io::read_csv("/tmp/lassodf_io_does_not_exist.csv"), CsvParse);

    const std::string empty = write_temp("empty.csv", "");
    CHECK_THROWS_AS(io::read_csv(empty), CsvParse);
    std::remove(empty.c_str());
}

TEST_CASE("group file parsing") {
    const std::string path = write_temp(
        "groups.csv", "0,0\n1,0\n2,1\n3,1\n4,2\n");
    const auto gs = io::read_group_file(path, 5);
    CHECK(gs.num_groups == 3);
    CHECK(gs.members[0] == std::vector<int>{0, 1});
    CHECK(gs.members[2] == std::vector<int>{4});
    std::remove(path.c_str());

    // missing variable 4
    const std::string partial = write_temp(
        "groups_partial.csv", "0,0\n1,0\n2,1\n3,1\n");
    CHECK_THROWS_AS(io::read_group_file(partial, 5), CsvParse);
    std::remove(partial.c_str());

    const std::string bad = write_temp("groups_bad.csv", "0,zero\n");
    CHECK_THROWS_AS(io::read_group_file(bad, 1), CsvParse);
    std::remove(bad.c_str());
}
