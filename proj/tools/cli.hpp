#pragma once

#include "lieforge/types.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace lieforge::cli {

enum ExitCode : int {
    kSuccess = 0,
    kVerificationFailed = 1,
    kGenerationFailed = 2,
    kOracleSingular = 3,
    kUsage = 64,
    kInputIntegrity = 65,
};

/// Runs one command line (args excludes the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct BenchRecord {
    int n = 0;
    Mode mode = Mode::generic;
    Field field = Field::real;
    int repeats = 0;
    double median_generate_seconds = 0.0;
    double median_verify_seconds = 0.0;
    std::string rng_id;
    std::string hardware;
};

/// Octave timings for N = 100 and N = 500 from the reference
/// implementation; 0 when no baseline exists for n.
double baseline_seconds(int n);

std::string hardware_note();

/// Times generate and a reduced-sampling verify `repeats` times per
/// dimension, seeds seed, seed + 1, ...
std::vector<BenchRecord> run_bench(const std::vector<int>& dims, Mode mode, Field field, int repeats,
                                   std::uint64_t seed, bool with_verify = true);

void write_bench_csv(std::ostream& out, const std::vector<BenchRecord>& records);

} // namespace lieforge::cli
