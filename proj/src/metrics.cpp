#include "roivault/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace roivault {

namespace {

struct Moments {
    double mean_a = 0.0, mean_b = 0.0;
    double var_a = 0.0, var_b = 0.0, cov = 0.0;
    std::int64_t n = 0;
};

void check_scope(const Volume& a, const Volume& b, const RoiMask* roi) {
    if (!same_dims(a.dims, b.dims))
        throw DimsMismatch("volume dims differ: " + dims_to_string(a.dims) + " vs " +
                           dims_to_string(b.dims));
    if (a.datatype != b.datatype)
        throw DimsMismatch("volume datatypes differ");
    if (roi) {
        if (!same_dims(roi->dims, a.dims)) throw DimsMismatch("roi dims differ from volumes");
        if (roi->roi_count == 0) throw EmptyRoi("roi mask selects no voxels");
    }
}

// two-pass population moments over the scope
Moments moments(const Volume& a, const Volume& b, const RoiMask* roi) {
    const std::int64_t n = a.voxel_count();
    double sum_a = 0.0, sum_b = 0.0;
    std::int64_t count = 0;
    for (std::int64_t i = 0; i < n; ++i) {
        if (roi && !roi->bits[i]) continue;
        sum_a += a.value_at(i);
        sum_b += b.value_at(i);
        ++count;
    }
    Moments m;
    m.n = count;
    m.mean_a = sum_a / static_cast<double>(count);
    m.mean_b = sum_b / static_cast<double>(count);
    double va = 0.0, vb = 0.0, cab = 0.0;
    for (std::int64_t i = 0; i < n; ++i) {
        if (roi && !roi->bits[i]) continue;
        double da = a.value_at(i) - m.mean_a;
        double db = b.value_at(i) - m.mean_b;
        va += da * da;
        vb += db * db;
        cab += da * db;
    }
    m.var_a = va / static_cast<double>(count);
    m.var_b = vb / static_cast<double>(count);
    m.cov = cab / static_cast<double>(count);
    return m;
}

} // namespace

double default_peak(const Volume& reference) {
    if (reference.datatype != Datatype::F32) return datatype_max(reference.datatype);
    double peak = 0.0;
    for (std::int64_t i = 0; i < reference.voxel_count(); ++i)
        peak = std::max(peak, std::fabs(reference.value_at(i)));
    return peak;
}

double mse(const Volume& a, const Volume& b, const RoiMask* roi) {
    check_scope(a, b, roi);
    double acc = 0.0;
    std::int64_t count = 0;
    for (std::int64_t i = 0; i < a.voxel_count(); ++i) {
        if (roi && !roi->bits[i]) continue;
        double d = a.value_at(i) - b.value_at(i);
        acc += d * d;
        ++count;
    }
    return acc / static_cast<double>(count);
}

double rmse(const Volume& a, const Volume& b, const RoiMask* roi) {
    return std::sqrt(mse(a, b, roi));
}

double psnr(const Volume& a, const Volume& b, std::optional<double> peak, const RoiMask* roi) {
    double p = peak.value_or(default_peak(a));
    if (!(p > 0.0)) throw NonPositivePeak("peak must be > 0");
    double e = mse(a, b, roi);
    if (e == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(p * p / e);
}

double ssim_global(const Volume& a, const Volume& b, std::optional<double> peak,
                   const RoiMask* roi, bool printed_form) {
    check_scope(a, b, roi);
    double p = peak.value_or(default_peak(a));
    Moments m = moments(a, b, roi);
    if (m.n < 2) throw DegenerateInput("ssim needs at least 2 voxels in scope");
    const double c1 = (0.01 * p) * (0.01 * p);
    const double c2 = (0.03 * p) * (0.03 * p);
    double num = (2.0 * m.mean_a * m.mean_b + c1) * (2.0 * m.cov + c2);
    double den_first = m.mean_a * m.mean_a + m.mean_b * m.mean_b + c1;
    double den_second = printed_form
                            ? m.mean_a * m.mean_a + m.mean_b * m.mean_b + c2
                            : m.var_a + m.var_b + c2;
    return num / (den_first * den_second);
}

double uqi(const Volume& a, const Volume& b, const RoiMask* roi) {
    check_scope(a, b, roi);
    Moments m = moments(a, b, roi);
    if (m.n < 2) throw DegenerateInput("uqi needs at least 2 voxels in scope");
    double den = (m.var_a + m.var_b) * (m.mean_a * m.mean_a + m.mean_b * m.mean_b);
    if (den == 0.0) throw DegenerateInput("uqi denominator is zero (constant input?)");
    return 4.0 * m.mean_a * m.mean_b * m.cov / den;
}

MetricsReport compute_metrics(const Volume& a, const Volume& b, std::optional<double> peak,
                              const RoiMask* roi) {
    MetricsReport r;
    r.peak = peak.value_or(default_peak(a));
    r.roi_restricted = roi != nullptr;
    r.mse = mse(a, b, roi);
    r.rmse = std::sqrt(r.mse);
    if (r.mse == 0.0) {
        r.psnr_infinite = true;
    } else {
        r.psnr = psnr(a, b, r.peak, roi);
    }
    r.ssim = ssim_global(a, b, r.peak, roi);
    r.uqi = uqi(a, b, roi);
    return r;
}

std::string format_metrics_table(const MetricsReport& r) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(6);
    os << "metric  value\n";
    os << "mse     " << r.mse << '\n';
    os << "rmse    " << r.rmse << '\n';
    if (r.psnr_infinite)
        os << "psnr    inf\n";
    else
        os << "psnr    " << r.psnr << '\n';
    os << "ssim    " << r.ssim << '\n';
    os << "uqi     " << r.uqi << '\n';
    os << "peak    " << r.peak << '\n';
    os << "roi     " << (r.roi_restricted ? "yes" : "no") << '\n';
    return os.str();
}

std::string format_metrics_csv(const MetricsReport& r) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(6);
    const char* roi = r.roi_restricted ? "1" : "0";
    os << "metric,value,roi_restricted,peak\n";
    os << "mse," << r.mse << ',' << roi << ',' << r.peak << '\n';
    os << "rmse," << r.rmse << ',' << roi << ',' << r.peak << '\n';
    os << "psnr," << (r.psnr_infinite ? std::string("inf") : std::to_string(r.psnr)) << ','
       << roi << ',' << r.peak << '\n';
    os << "ssim," << r.ssim << ',' << roi << ',' << r.peak << '\n';
    os << "uqi," << r.uqi << ',' << roi << ',' << r.peak << '\n';
    return os.str();
}

} // namespace roivault
