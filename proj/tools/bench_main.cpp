#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "wfa/bench.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Counter throughput benchmark: wait-free counter vs naive CAS loop"};

    wfa::bench::BenchConfig cfg;
    std::string pin = "none";
    std::string csv_path;

    app.add_option("--impl", cfg.impl, "Counter implementation")
        ->check(CLI::IsMember({"waitfree", "naive"}))
        ->required();
    app.add_option("--threads", cfg.threads, "Worker thread count")->check(CLI::PositiveNumber);
    app.add_option("--duration", cfg.duration_s, "Run duration in seconds")
        ->check(CLI::NonNegativeNumber);
    app.add_option("--pin", pin, "Thread affinity")->check(CLI::IsMember({"none", "per-core"}));
    app.add_option("--csv", csv_path, "CSV output path");

    CLI11_PARSE(app, argc, argv);
    cfg.pin_per_core = (pin == "per-core");

    try {
        wfa::bench::BenchResult r = wfa::bench::run_bench(cfg);
        std::printf("impl=%s threads=%d elapsed=%.3fs total_ops=%llu ns_per_op=%.1f\n",
                    r.impl.c_str(), r.threads, r.elapsed_s,
                    static_cast<unsigned long long>(r.total_ops), r.ns_per_op);
        if (!csv_path.empty()) wfa::bench::emit_csv({r}, csv_path);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
