#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "wfa/bench.hpp"

using namespace wfa::bench;

namespace {

std::string temp_csv_path(const char* name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("naive counter is a correct fetch-and-add") {
    NaiveCounter c;
    CHECK(c.fetch_and_add(5) == 0);
    CHECK(c.fetch_and_add(3) == 5);
    CHECK(c.read() == 8);
}

TEST_CASE("short runs of both implementations produce consistent results") {
    for (const char* impl : {"naive", "waitfree"}) {
        BenchConfig cfg;
        cfg.impl = impl;
        cfg.threads = 2;
        cfg.duration_s = 0.05;
        BenchResult r = run_bench(cfg);  // throws on a conservation failure
        CHECK(r.impl == impl);
        CHECK(r.threads == 2);
        CHECK(r.elapsed_s >= 0.05);
        CHECK(r.total_ops > 0);
        CHECK(r.per_thread_ops.size() == 2);
        std::uint64_t sum = 0;
        for (std::uint64_t ops : r.per_thread_ops) sum += ops;
        CHECK(sum == r.total_ops);
        CHECK(r.ns_per_op > 0.0);
    }
}

TEST_CASE("config errors are rejected") {
    BenchConfig cfg;
    cfg.impl = "magic";
    cfg.duration_s = 0.01;
    CHECK_THROWS(run_bench(cfg));
    cfg.impl = "naive";
    cfg.threads = 0;
    CHECK_THROWS(run_bench(cfg));
    cfg.threads = 1;
    cfg.duration_s = -1.0;
    CHECK_THROWS(run_bench(cfg));
}

TEST_CASE("csv output has the fixed header and one row per result") {
    BenchResult r;
    r.impl = "naive";
    r.threads = 4;
    r.elapsed_s = 1.5;
    r.total_ops = 3000000;
    r.ns_per_op = 2000.0;
    std::string path = temp_csv_path("wfa_test_bench.csv");
    emit_csv({r, r}, path);
    std::ifstream in(path);
    std::string line;
    REQUIRE(std::getline(in, line));
    CHECK(line == "impl,threads,seconds,total_ops,ns_per_op");
    int rows = 0;
    while (std::getline(in, line)) {
        CHECK(line == "naive,4,1.500,3000000,2000.0");
        rows++;
    }
    CHECK(rows == 2);
    std::remove(path.c_str());
}

TEST_CASE("csv errors leave no file behind") {
    std::string path = temp_csv_path("wfa_test_bench_empty.csv");
    CHECK_THROWS(emit_csv({}, path));
    CHECK_FALSE(std::filesystem::exists(path));
    BenchResult r;
    r.impl = "naive";
    r.threads = 1;
    r.total_ops = 1;
    CHECK_THROWS(emit_csv({r}, "/nonexistent_dir_for_sure/out.csv"));
}
