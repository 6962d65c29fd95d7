// roivault — selective encryption of volumetric medical images.
//
// Subcommands: segment, encrypt, decrypt, metrics, dice, bench.
// Exit codes: 0 success, 1 usage error, 2 data error (parse/dims),
// 3 wrong key, 4 integrity error.

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "roivault/bench.hpp"
#include "roivault/henon.hpp"
#include "roivault/mask.hpp"
#include "roivault/metrics.hpp"
#include "roivault/nifti.hpp"
#include "roivault/normalize.hpp"
#include "roivault/segment.hpp"
#include "roivault/vault.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitKey = 3;
constexpr int kExitIntegrity = 4;

constexpr const char* kKeyEnvVar = "ROIVAULT_KEY";

// Passphrase comes from the environment or an interactive prompt, never from
// argv (argv is visible in process listings).
std::string get_passphrase(const std::string& env_var) {
    if (const char* v = std::getenv(env_var.c_str()); v && *v) return v;
    std::cerr << "passphrase (reading from stdin; set " << env_var << " to skip): ";
    std::string line;
    std::getline(std::cin, line);
    return line;
}

roivault::KeySchedule make_schedule(bool paper_key, const std::string& env_var,
                                    std::uint64_t burn_in) {
    if (paper_key)
        return roivault::KeySchedule::explicit_state(0.1, 0.1, {}, burn_in);
    std::string pass = get_passphrase(env_var);
    if (pass.empty()) {
        std::cerr << "roivault: empty passphrase\n";
        std::exit(kExitUsage);
    }
    return roivault::KeySchedule::from_passphrase(pass, {}, burn_in);
}

std::set<int> parse_label_set(const std::string& csv) {
    std::set<int> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.insert(std::stoi(tok));
    return out;
}

} // namespace

int main(int argc, char** argv) {
    using namespace roivault;

    CLI::App app{"Selective Henon-keystream encryption for volumetric images.\n"
                 "Passphrases are read from $ROIVAULT_KEY or an interactive prompt.\n"
                 "Note: the Henon XOR construction is a research cipher, not a vetted one."};
    app.require_subcommand(1);

    // segment
    auto* seg = app.add_subcommand("segment", "Produce a binary ROI mask");
    std::string seg_in, seg_out, seg_method = "threshold", seg_labels;
    seg->add_option("input", seg_in, "input volume (.nii/.nii.gz)")->required();
    seg->add_option("--method", seg_method, "threshold|labels|file")
        ->check(CLI::IsMember({"threshold", "labels", "file"}));
    seg->add_option("-o,--output", seg_out, "output mask path")->required();
    seg->add_option("--labels-foreground", seg_labels,
                    "comma-separated label list (labels method; default 1..10)");

    // encrypt
    auto* enc = app.add_subcommand("encrypt", "Encrypt ROI voxels into a vault entry");
    std::string enc_in, enc_mask, enc_out, enc_env = kKeyEnvVar;
    bool enc_paper_key = false;
    std::uint64_t enc_burn_in = 1000;
    enc->add_option("input", enc_in, "input volume")->required();
    enc->add_option("--mask", enc_mask, "ROI mask (NIfTI)")->required();
    enc->add_option("-o,--output", enc_out, "vault entry directory")->required();
    enc->add_option("--key-env", enc_env, "environment variable holding the passphrase");
    enc->add_flag("--paper-key", enc_paper_key, "use literal initial conditions x0=y0=0.1");
    enc->add_option("--burn-in", enc_burn_in, "keystream burn-in iterations");

    // decrypt
    auto* dec = app.add_subcommand("decrypt", "Decrypt a vault entry");
    std::string dec_vault, dec_out, dec_env = kKeyEnvVar;
    bool dec_paper_key = false;
    dec->add_option("vault", dec_vault, "vault entry directory")->required();
    dec->add_option("-o,--output", dec_out, "recovered volume path")->required();
    dec->add_option("--key-env", dec_env, "environment variable holding the passphrase");
    dec->add_flag("--paper-key", dec_paper_key, "use literal initial conditions x0=y0=0.1");

    // metrics
    auto* met = app.add_subcommand("metrics", "Quality metrics between two volumes");
    std::string met_a, met_b, met_roi;
    std::optional<double> met_peak;
    bool met_csv = false;
    met->add_option("a", met_a, "reference volume")->required();
    met->add_option("b", met_b, "comparison volume")->required();
    met->add_option("--roi", met_roi, "restrict to mask==1 voxels");
    met->add_option("--peak", met_peak, "PSNR/SSIM peak (default: datatype max)");
    met->add_flag("--csv", met_csv, "CSV output");

    // dice
    auto* dc = app.add_subcommand("dice", "Dice coefficient between two masks");
    std::string dc_a, dc_b;
    dc->add_option("a", dc_a, "first mask")->required();
    dc->add_option("b", dc_b, "second mask")->required();

    // bench
    auto* bn = app.add_subcommand("bench", "Selective vs full cipher timing");
    std::string bn_dims = "256x256x64", bn_dtype = "u16", bn_csv;
    std::vector<double> bn_fracs;
    int bn_reps = 5, bn_warmup = 1;
    std::uint64_t bn_seed = 42;
    bn->add_option("--dims", bn_dims, "volume dims, e.g. 256x256x64");
    bn->add_option("--dtype", bn_dtype, "u8|i16|u16|f32");
    bn->add_option("--roi-fracs", bn_fracs, "ROI fractions (ascending)");
    bn->add_option("--reps", bn_reps, "repetitions (>= 3)");
    bn->add_option("--warmup", bn_warmup, "warmup rounds");
    bn->add_option("--seed", bn_seed, "data/mask seed");
    bn->add_option("-o,--output", bn_csv, "CSV output path (companion .dat alongside)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*seg) {
            Volume v = read_volume(seg_in);
            RoiMask mask;
            if (seg_method == "threshold") {
                mask = threshold_segment(v);
            } else if (seg_method == "labels") {
                auto fg = seg_labels.empty() ? default_foreground() : parse_label_set(seg_labels);
                mask = merge_labels(LabelVolume::from_volume(v), fg);
            } else {
                mask = mask_from_volume(v);
            }
            write_volume(seg_out, mask_to_volume(mask, v.spacing));
            std::cout << "mask: " << mask.roi_count << " / " << mask.total()
                      << " voxels (fraction " << mask.roi_fraction() << ")\n";
        } else if (*enc) {
            Volume v = read_volume(enc_in);
            Volume mv = read_volume(enc_mask);
            if (!same_dims(mv.dims, v.dims))
                throw DimsMismatch("mask dims " + dims_to_string(mv.dims) +
                                   " != volume dims " + dims_to_string(v.dims));
            RoiMask mask = mask_from_volume(mv);
            KeySchedule ks = make_schedule(enc_paper_key, enc_env, enc_burn_in);
            if (mask.roi_count == 0)
                std::cerr << "roivault: warning: empty mask, output equals input\n";
            VaultEntry entry = store(v, mask, ks, enc_out);
            std::cout << "stored " << entry.dir.string() << "\n"
                      << "roi_fraction: " << entry.manifest.roi_fraction << "\n"
                      << "keystream bytes: "
                      << entry.manifest.roi_count *
                             static_cast<std::int64_t>(datatype_size(v.datatype))
                      << "\n";
        } else if (*dec) {
            auto t0 = std::chrono::steady_clock::now();
            Volume plain;
            if (dec_paper_key) {
                Manifest m = read_manifest(dec_vault);
                plain = retrieve_with_schedule(
                    dec_vault, KeySchedule::explicit_state(0.1, 0.1, {}, m.burn_in));
            } else {
                std::string pass = get_passphrase(dec_env);
                if (pass.empty()) {
                    std::cerr << "roivault: empty passphrase\n";
                    return kExitUsage;
                }
                plain = retrieve(dec_vault, pass);
            }
            double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                            .count();
            write_volume(dec_out, plain);
            std::cout << "decrypted in " << dt << " s\n";
        } else if (*met) {
            Volume a = read_volume(met_a);
            Volume b = read_volume(met_b);
            RoiMask roi;
            const RoiMask* roi_ptr = nullptr;
            if (!met_roi.empty()) {
                Volume rv = read_volume(met_roi);
                if (!same_dims(rv.dims, a.dims))
                    throw DimsMismatch("roi dims differ from volume dims");
                roi = mask_from_volume(rv);
                roi_ptr = &roi;
            }
            MetricsReport r = compute_metrics(a, b, met_peak, roi_ptr);
            std::cout << (met_csv ? format_metrics_csv(r) : format_metrics_table(r));
        } else if (*dc) {
            Volume a = read_volume(dc_a);
            Volume b = read_volume(dc_b);
            std::cout << dice(mask_from_volume(a), mask_from_volume(b)) << "\n";
        } else if (*bn) {
            BenchConfig cfg;
            cfg.dims = dims_from_string(bn_dims);
            cfg.datatype = datatype_from_name(bn_dtype);
            if (!bn_fracs.empty()) cfg.roi_fractions = bn_fracs;
            cfg.repetitions = bn_reps;
            cfg.warmup = bn_warmup;
            cfg.seed = bn_seed;
            try {
                cfg.validate();
            } catch (const EmptyInput& e) {
                std::cerr << "roivault: " << e.what() << "\n";
                return kExitUsage;
            }
            BenchReport report = run_bench(cfg);
            std::cout << format_bench_table(report);
            if (!bn_csv.empty()) {
                emit_csv(report, bn_csv);
                auto dat = std::filesystem::path(bn_csv).replace_extension(".dat");
                emit_dat(report, dat);
            }
        }
    } catch (const WrongKey& e) {
        std::cerr << "roivault: " << e.what() << "\n";
        return kExitKey;
    } catch (const CorruptEntry& e) {
        std::cerr << "roivault: " << e.what() << "\n";
        return kExitIntegrity;
    } catch (const EmptyPassphrase& e) {
        std::cerr << "roivault: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        std::cerr << "roivault: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "roivault: " << e.what() << "\n";
        return kExitData;
    }
    return kExitOk;
}
