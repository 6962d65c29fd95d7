#pragma once

#include <optional>
#include <string>

#include "roivault/mask.hpp"
#include "roivault/volume.hpp"

namespace roivault {

struct MetricsReport {
    double mse = 0.0;
    double rmse = 0.0;
    double psnr = 0.0;      // meaningless when psnr_infinite
    bool psnr_infinite = false;
    double ssim = 0.0;
    double uqi = 0.0;
    double peak = 0.0;
    bool roi_restricted = false;
};

/// Default PSNR peak: datatype maximum (255 / 32767 / 65535); for F32,
/// max |value| over the reference volume.
double default_peak(const Volume& reference);

/// All metrics decode voxel values to double and use population (1/N)
/// moments. roi restricts the scope to mask==1 voxels.
double mse(const Volume& a, const Volume& b, const RoiMask* roi = nullptr);
double rmse(const Volume& a, const Volume& b, const RoiMask* roi = nullptr);

/// 10*log10(peak^2 / mse); +infinity when mse == 0.
double psnr(const Volume& a, const Volume& b, std::optional<double> peak = std::nullopt,
            const RoiMask* roi = nullptr);

/// Single-window SSIM over the whole scope with C1=(0.01*peak)^2,
/// C2=(0.03*peak)^2. printed_form reproduces the degenerate denominator
/// (means squared where variances belong) for archaeology only.
double ssim_global(const Volume& a, const Volume& b, std::optional<double> peak = std::nullopt,
                   const RoiMask* roi = nullptr, bool printed_form = false);

/// SSIM with both stabilizing constants zero. Throws DegenerateInput when a
/// denominator factor vanishes.
double uqi(const Volume& a, const Volume& b, const RoiMask* roi = nullptr);

MetricsReport compute_metrics(const Volume& a, const Volume& b,
                              std::optional<double> peak = std::nullopt,
                              const RoiMask* roi = nullptr);

std::string format_metrics_table(const MetricsReport& r);
std::string format_metrics_csv(const MetricsReport& r);

} // namespace roivault
