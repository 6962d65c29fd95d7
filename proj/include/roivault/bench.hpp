#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "roivault/volume.hpp"

namespace roivault {

struct BenchConfig {
    std::vector<std::int64_t> dims{256, 256, 64};
    Datatype datatype = Datatype::U16;
    std::vector<double> roi_fractions{0.05, 0.1, 0.2, 0.25, 0.3, 0.5, 0.8, 1.0};
    int repetitions = 5; // >= 3 so the median is meaningful
    int warmup = 1;
    std::uint64_t seed = 42;

    void validate() const; // throws EmptyInput on bad fractions / repetitions
};

struct BenchRow {
    double roi_fraction = 0.0;
    double t_enc_selective = 0.0; // seconds, median over repetitions
    double t_dec_selective = 0.0;
    double t_enc_full = 0.0;
    double t_dec_full = 0.0;
    double gain_dec_percent = 0.0; // 100*(t_dec_full - t_dec_selective)/t_dec_full
    std::uint64_t keystream_bytes_selective = 0;
    std::uint64_t keystream_bytes_full = 0;
    double t_mask_load = 0.0; // median time to re-parse the stored mask NIfTI
};

struct BenchReport {
    BenchConfig config;
    std::vector<BenchRow> rows;
};

/// Seeded random volume for benchmark input (deterministic per seed).
Volume random_volume(const std::vector<std::int64_t>& dims, Datatype dt, std::uint64_t seed);

/// Times the four cipher paths per ROI fraction, single-threaded, monotonic
/// clock, median over repetitions. Volume I/O is excluded; keystream burn-in
/// is inside the timed region (it is real retrieval cost).
BenchReport run_bench(const BenchConfig& cfg);

void emit_csv(const BenchReport& r, const std::filesystem::path& path);
void emit_dat(const BenchReport& r, const std::filesystem::path& path); // (fraction, gain)
std::string format_bench_table(const BenchReport& r);

} // namespace roivault
