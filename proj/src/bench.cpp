#include "roivault/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cstring>
#include <fstream>
#include <random>
#include <sstream>

#include "roivault/henon.hpp"
#include "roivault/mask.hpp"
#include "roivault/nifti.hpp"
#include "roivault/vault.hpp"

namespace roivault {

void BenchConfig::validate() const {
    if (repetitions < 3) throw EmptyInput("repetitions must be >= 3");
    if (warmup < 1) throw EmptyInput("warmup must be >= 1");
    if (roi_fractions.empty()) throw EmptyInput("no roi fractions given");
    for (double f : roi_fractions)
        if (f < 0.0 || f > 1.0) throw EmptyInput("roi fractions must lie in [0, 1]");
    if (!std::is_sorted(roi_fractions.begin(), roi_fractions.end()))
        throw EmptyInput("roi fractions must be sorted ascending");
}

Volume random_volume(const std::vector<std::int64_t>& dims, Datatype dt, std::uint64_t seed) {
    std::int64_t n = 1;
    for (auto d : dims) n *= d;
    std::vector<std::uint8_t> bytes(static_cast<std::size_t>(n) * datatype_size(dt));
    std::mt19937_64 rng(seed);
    std::size_t i = 0;
    for (; i + 8 <= bytes.size(); i += 8) {
        std::uint64_t w = rng();
        std::memcpy(bytes.data() + i, &w, 8);
    }
    for (std::uint64_t w = rng(); i < bytes.size(); ++i, w >>= 8)
        bytes[i] = static_cast<std::uint8_t>(w);
    if (dt == Datatype::F32) {
        // avoid NaN/Inf payloads so metrics stay finite; keep bytes deterministic
        for (std::size_t off = 0; off + 4 <= bytes.size(); off += 4)
            bytes[off + 3] &= 0x3F; // clears the exponent's top bits
    }
    std::vector<double> spacing(dims.size(), 1.0);
    return ingest_raw(dims, dt, spacing, bytes);
}

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

template <typename F>
double median_time(int warmup, int reps, F&& op) {
    for (int i = 0; i < warmup; ++i) op();
    std::vector<double> times(reps);
    for (int i = 0; i < reps; ++i) {
        auto t0 = std::chrono::steady_clock::now();
        op();
        times[i] = seconds_since(t0);
    }
    std::sort(times.begin(), times.end());
    int n = reps;
    return n % 2 ? times[n / 2] : 0.5 * (times[n / 2 - 1] + times[n / 2]);
}

} // namespace

BenchReport run_bench(const BenchConfig& cfg) {
    cfg.validate();
    BenchReport report;
    report.config = cfg;

    Volume vol = random_volume(cfg.dims, cfg.datatype, cfg.seed);
    KeySchedule ks = KeySchedule::from_passphrase("bench-key", {}, 1000);

    for (double frac : cfg.roi_fractions) {
        RoiMask mask = synthetic_mask(cfg.dims, frac, cfg.seed);
        auto mask_bytes = serialize_nifti(mask_to_volume(mask, vol.spacing));

        BenchRow row;
        row.roi_fraction = frac;

        Volume enc_sel = encrypt_selective(vol, mask, ks, kTagStreamBytes,
                                           &row.keystream_bytes_selective);
        Volume enc_full = encrypt_full(vol, ks, kTagStreamBytes, &row.keystream_bytes_full);

        row.t_enc_selective = median_time(cfg.warmup, cfg.repetitions, [&] {
            encrypt_selective(vol, mask, ks, kTagStreamBytes);
        });
        row.t_dec_selective = median_time(cfg.warmup, cfg.repetitions, [&] {
            decrypt_selective(enc_sel, mask, ks, kTagStreamBytes);
        });
        row.t_enc_full = median_time(cfg.warmup, cfg.repetitions, [&] {
            encrypt_full(vol, ks, kTagStreamBytes);
        });
        row.t_dec_full = median_time(cfg.warmup, cfg.repetitions, [&] {
            decrypt_full(enc_full, ks, kTagStreamBytes);
        });
        row.t_mask_load = median_time(cfg.warmup, cfg.repetitions, [&] {
            load_mask(mask_bytes, cfg.dims);
        });
        row.gain_dec_percent =
            100.0 * (row.t_dec_full - row.t_dec_selective) / row.t_dec_full;
        report.rows.push_back(row);
    }
    return report;
}

namespace {

constexpr const char* kCsvHeader =
    "roi_fraction,t_enc_selective,t_dec_selective,t_enc_full,t_dec_full,"
    "gain_dec_percent,keystream_bytes_selective,keystream_bytes_full,t_mask_load\n";

void write_row(std::ostream& os, const BenchRow& r) {
    os.setf(std::ios::fixed);
    os.precision(6);
    os << r.roi_fraction << ',' << r.t_enc_selective << ',' << r.t_dec_selective << ','
       << r.t_enc_full << ',' << r.t_dec_full << ',' << r.gain_dec_percent << ','
       << r.keystream_bytes_selective << ',' << r.keystream_bytes_full << ','
       << r.t_mask_load << '\n';
}

} // namespace

void emit_csv(const BenchReport& r, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out << kCsvHeader;
    for (const auto& row : r.rows) write_row(out, row);
    if (!out) throw IoError("short write to " + path.string());
}

void emit_dat(const BenchReport& r, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out.setf(std::ios::fixed);
    out.precision(6);
    for (const auto& row : r.rows)
        out << row.roi_fraction << ' ' << row.gain_dec_percent << '\n';
    if (!out) throw IoError("short write to " + path.string());
}

std::string format_bench_table(const BenchReport& r) {
    std::ostringstream os;
    os << kCsvHeader;
    for (const auto& row : r.rows) write_row(os, row);
    return os.str();
}

} // namespace roivault
