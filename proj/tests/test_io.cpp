#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "wkam/io.hpp"

using namespace wkam;

namespace {

struct TempPath {
    std::string path;
    explicit TempPath(const std::string& name) : path("wkam_test_" + name) {}
    ~TempPath() { std::remove(path.c_str()); }
};

}  // namespace

TEST_SUITE("io") {

TEST_CASE("table round trip preserves every field") {
    TempPath tmp("table.tbl");
    TableFile f;
    f.grid = SpatialGrid(6, 4);
    f.c = CohomologyClass(0.125, -0.75);
    f.substeps = 8;
    f.table.resize(static_cast<size_t>(24) * 24);
    for (size_t i = 0; i < f.table.size(); ++i) f.table[i] = 0.001 * static_cast<double>(i) - 0.2;
    f.extra["alpha"] = -0.03125;
    f.extra["error_bound"] = 1.5e-4;
    write_table(tmp.path, f);
    TableFile g = read_table(tmp.path);
    CHECK(g.grid == f.grid);
    CHECK(g.c[0] == f.c[0]);
    CHECK(g.c[1] == f.c[1]);
    CHECK(g.substeps == 8);
    CHECK(g.table == f.table);  // bit-for-bit
    CHECK(g.extra == f.extra);
}

TEST_CASE("grid function round trip") {
    TempPath tmp("func.tbl");
    SpatialGrid grid(10);
    GridFunction u(grid);
    for (int i = 0; i < u.size(); ++i) u[i] = std::sin(0.7 * i);
    write_grid_function(tmp.path, u, {{"c1", 0.4}});
    std::map<std::string, double> extra;
    GridFunction v = read_grid_function(tmp.path, &extra);
    CHECK(v.grid == grid);
    for (int i = 0; i < u.size(); ++i) CHECK(v[i] == u[i]);
    CHECK(extra.at("c1") == 0.4);
}

TEST_CASE("truncated and corrupt files are rejected") {
    TempPath tmp("bad.tbl");
    {
        std::ofstream out(tmp.path, std::ios::binary);
        out << "WKAMTBL1";  // header only
    }
    CHECK_THROWS_AS(read_table(tmp.path), WkamError);
    {
        std::ofstream out(tmp.path, std::ios::binary);
        out << "NOTATBLX-----------------";
    }
    CHECK_THROWS_AS(read_table(tmp.path), WkamError);
    CHECK_THROWS_AS(read_table("wkam_test_does_not_exist.tbl"), WkamError);
}

TEST_CASE("csv uses full precision") {
    TempPath tmp("rows.csv");
    write_csv(tmp.path, {"a", "b"}, {{1.0 / 3.0, 2.0}, {-0.5, 1e-17}});
    std::ifstream in(tmp.path);
    std::string line;
    std::getline(in, line);
    CHECK(line == "a,b");
    std::getline(in, line);
    double a = 0.0, b = 0.0;
    CHECK(std::sscanf(line.c_str(), "%lf,%lf", &a, &b) == 2);
    CHECK(a == 1.0 / 3.0);
    CHECK(b == 2.0);
}

TEST_CASE("config hash is stable and collision-averse") {
    CHECK(config_hash("model=pendulum;grid=64") == config_hash("model=pendulum;grid=64"));
    CHECK(config_hash("model=pendulum;grid=64") != config_hash("model=pendulum;grid=65"));
    CHECK(config_hash("") != config_hash(" "));
    // Pinned digest guards against accidental algorithm changes that would
    // silently invalidate on-disk caches.
    CHECK(config_hash("wkam") == "9411b7f64af14fad");
    CHECK(config_hash("a").size() == 16);
}

}
