#include "hsfusion/metrics.hpp"

#include "hsfusion/error.hpp"
#include "hsfusion/operators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

namespace hsfusion {

namespace {

void check_same_shape(const SpectralCube& a, const SpectralCube& b) {
    if (a.bands() != b.bands() || !a.same_geometry(b)) {
        throw GeometryError("estimate and reference cubes differ in shape");
    }
}

// Summed-area table with one row/column of zero padding.
class Integral {
public:
    Integral(int w, int h) : w_(w), table_(static_cast<std::size_t>(w + 1) * (h + 1), 0.0) {}

    template <typename F>
    void fill(int w, int h, F value) {
        for (int y = 0; y < h; ++y) {
            double row = 0.0;
            for (int x = 0; x < w; ++x) {
                row += value(static_cast<Eigen::Index>(y) * w + x);
                at(x + 1, y + 1) = at(x + 1, y) + row;
            }
        }
    }

    double box(int x, int y, int size) const {
        return at(x + size, y + size) - at(x, y + size) - at(x + size, y) + at(x, y);
    }

private:
    double& at(int x, int y) { return table_[static_cast<std::size_t>(y) * (w_ + 1) + x]; }
    double at(int x, int y) const { return table_[static_cast<std::size_t>(y) * (w_ + 1) + x]; }

    int w_;
    std::vector<double> table_;
};

bool windows_identical(const double* a, const double* b, int w, int x0, int y0, int size) {
    for (int y = y0; y < y0 + size; ++y) {
        for (int x = x0; x < x0 + size; ++x) {
            if (a[y * w + x] != b[y * w + x]) return false;
        }
    }
    return true;
}

// Mean Q over windows; nullopt when every window was skipped.
std::optional<double> band_quality(const double* a, const double* b, int w, int h, int window) {
    const Eigen::Index n = static_cast<Eigen::Index>(w) * h;
    Eigen::Map<const Eigen::VectorXd> va(a, n);
    Eigen::Map<const Eigen::VectorXd> vb(b, n);
    // Shifting by the band means keeps the box sums well conditioned.
    const double ca = va.mean();
    const double cb = vb.mean();
    const double energy = (va.squaredNorm() + vb.squaredNorm()) / static_cast<double>(n);

    Integral sa(w, h), sb(w, h), saa(w, h), sbb(w, h), sab(w, h);
    sa.fill(w, h, [&](Eigen::Index p) { return a[p] - ca; });
    sb.fill(w, h, [&](Eigen::Index p) { return b[p] - cb; });
    saa.fill(w, h, [&](Eigen::Index p) { return (a[p] - ca) * (a[p] - ca); });
    sbb.fill(w, h, [&](Eigen::Index p) { return (b[p] - cb) * (b[p] - cb); });
    sab.fill(w, h, [&](Eigen::Index p) { return (a[p] - ca) * (b[p] - cb); });

    const double count = static_cast<double>(window) * window;
    const double flat_var = 1e-13 * energy;
    const double flat_mean = 1e-26 * energy;
    double total = 0.0;
    long counted = 0;
    for (int y = 0; y + window <= h; ++y) {
        for (int x = 0; x + window <= w; ++x) {
            const double s_a = sa.box(x, y, window);
            const double s_b = sb.box(x, y, window);
            const double var_a = std::max(0.0, (saa.box(x, y, window) - s_a * s_a / count) / (count - 1));
            const double var_b = std::max(0.0, (sbb.box(x, y, window) - s_b * s_b / count) / (count - 1));
            const double cov = (sab.box(x, y, window) - s_a * s_b / count) / (count - 1);
            const double mean_a = s_a / count + ca;
            const double mean_b = s_b / count + cb;
            const double var_sum = var_a + var_b;
            const double mean_sq = mean_a * mean_a + mean_b * mean_b;
            if (var_sum <= flat_var || mean_sq <= flat_mean) {
                if (windows_identical(a, b, w, x, y, window)) {
                    total += 1.0;
                    ++counted;
                }
                continue;
            }
            total += 4.0 * cov * mean_a * mean_b / (var_sum * mean_sq);
            ++counted;
        }
    }
    if (counted == 0) return std::nullopt;
    return total / static_cast<double>(counted);
}

void check_window(const SpectralCube& c, int window) {
    if (window < 2) throw InvalidArgument("UIQI window must be at least 2");
    if (window > c.width() || window > c.height()) {
        throw GeometryError("UIQI window " + std::to_string(window) + " larger than " +
                            std::to_string(c.width()) + "x" + std::to_string(c.height()) + " image");
    }
}

double pair_quality(const SpectralCube& a, int la, const SpectralCube& b, int lb, int window) {
    const auto q = band_quality(a.band(la).data(), b.band(lb).data(), a.width(), a.height(), window);
    if (!q) throw NumericalError("UIQI undefined: every window is flat and the images differ");
    return *q;
}

}  // namespace

double ergas(const SpectralCube& est, const SpectralCube& ref, double resolution_ratio) {
    check_same_shape(est, ref);
    const double n = static_cast<double>(ref.pixels());
    double acc = 0.0;
    for (int l = 0; l < ref.bands(); ++l) {
        const double mean = ref.band(l).mean();
        if (mean == 0.0) throw NumericalError("reference band " + std::to_string(l) + " has zero mean");
        const double mse = (est.band(l) - ref.band(l)).squaredNorm() / n;
        acc += mse / (mean * mean);
    }
    return 100.0 * resolution_ratio * std::sqrt(acc / ref.bands());
}

SamResult sam(const SpectralCube& est, const SpectralCube& ref) {
    check_same_shape(est, ref);
    SamResult r;
    double total = 0.0;
    Eigen::Index counted = 0;
    for (Eigen::Index j = 0; j < ref.pixels(); ++j) {
        const auto e = est.data().col(j);
        const auto z = ref.data().col(j);
        const double ne = e.norm();
        const double nz = z.norm();
        if (ne == 0.0 || nz == 0.0) {
            ++r.skipped;
            continue;
        }
        // 2 atan2(|u - v|, |u + v|) on unit vectors stays accurate near 0 and pi.
        const Eigen::VectorXd u = e / ne;
        const Eigen::VectorXd v = z / nz;
        total += 2.0 * std::atan2((u - v).norm(), (u + v).norm());
        ++counted;
    }
    if (counted == 0) throw NumericalError("SAM undefined: every pixel has a zero spectrum");
    r.degrees = total / static_cast<double>(counted) * 180.0 / std::numbers::pi;
    return r;
}

double uiqi_band(const SpectralCube& a, int band_a, const SpectralCube& b, int band_b, int window) {
    if (!a.same_geometry(b)) throw GeometryError("UIQI images differ in size");
    check_window(a, window);
    return pair_quality(a, band_a, b, band_b, window);
}

double uiqi(const SpectralCube& est, const SpectralCube& ref, int window) {
    check_same_shape(est, ref);
    check_window(ref, window);
    double total = 0.0;
    int counted = 0;
    for (int l = 0; l < ref.bands(); ++l) {
        const auto q = band_quality(est.band(l).data(), ref.band(l).data(), ref.width(), ref.height(), window);
        if (!q) continue;
        total += *q;
        ++counted;
    }
    if (counted == 0) throw NumericalError("UIQI undefined: every window is flat and the images differ");
    return total / counted;
}

QnrResult qnr(const SpectralCube& fused, const SpectralCube& msi, const SpectralCube& hsi,
              const ConvolutionKernel& kernel, const SubsamplingPattern& pattern, int window) {
    if (!fused.same_geometry(msi)) throw GeometryError("fused cube and MSI differ in size");
    if (fused.bands() != hsi.bands()) throw GeometryError("fused cube and HSI differ in band count");
    pattern.check_divides(msi.width(), msi.height());
    if (hsi.width() * pattern.factor != msi.width() || hsi.height() * pattern.factor != msi.height()) {
        throw GeometryError("HSI grid times factor does not match the MSI grid");
    }
    if (window % pattern.factor != 0) {
        throw InvalidArgument("QNR window must be a multiple of the subsampling factor");
    }
    const int low_window = window / pattern.factor;
    check_window(msi, window);
    check_window(hsi, low_window);

    const int bands = fused.bands();
    QnrResult r;
    if (bands > 1) {
        double acc = 0.0;
        for (int l = 0; l < bands; ++l) {
            for (int m = l + 1; m < bands; ++m) {
                acc += std::abs(pair_quality(fused, l, fused, m, window) - pair_quality(hsi, l, hsi, m, low_window));
            }
        }
        r.d_lambda = 2.0 * acc / (static_cast<double>(bands) * (bands - 1));
    }

    const SpectralCube degraded = subsample_apply(blur_apply(msi, kernel), pattern);
    double acc = 0.0;
    for (int l = 0; l < bands; ++l) {
        for (int k = 0; k < msi.bands(); ++k) {
            acc += std::abs(pair_quality(fused, l, msi, k, window) - pair_quality(hsi, l, degraded, k, low_window));
        }
    }
    r.d_s = acc / (static_cast<double>(bands) * msi.bands());
    r.qnr = (1.0 - r.d_lambda) * (1.0 - r.d_s);
    return r;
}

std::vector<double> per_band_rmse(const SpectralCube& est, const SpectralCube& ref) {
    check_same_shape(est, ref);
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(ref.bands()));
    for (int l = 0; l < ref.bands(); ++l) {
        const double denom = ref.band(l).norm();
        if (denom == 0.0) throw NumericalError("reference band " + std::to_string(l) + " is all zero");
        out.push_back((est.band(l) - ref.band(l)).norm() / denom);
    }
    return out;
}

}  // namespace hsfusion
