#pragma once

#include "hsfusion/cube.hpp"

#include <vector>

namespace hsfusion {

/// 100 * ratio * sqrt(mean over bands of RMSE_l^2 / mean_l^2), mean_l the
/// reference band mean.
double ergas(const SpectralCube& est, const SpectralCube& ref, double resolution_ratio);

struct SamResult {
    double degrees = 0.0;
    /// Pixels skipped because either spectrum is the zero vector.
    Eigen::Index skipped = 0;
};

/// Mean spectral angle in degrees over pixels where both spectra are nonzero.
SamResult sam(const SpectralCube& est, const SpectralCube& ref);

/// Universal image quality index averaged over every fully contained
/// window x window position (stride 1) and then over bands. Windows where both
/// images are flat (or both have zero mean) count as 1 when identical and are
/// skipped otherwise.
double uiqi(const SpectralCube& est, const SpectralCube& ref, int window = 32);

/// UIQI of a single pair of bands.
double uiqi_band(const SpectralCube& a, int band_a, const SpectralCube& b, int band_b, int window);

struct QnrResult {
    double d_lambda = 0.0;
    double d_s = 0.0;
    double qnr = 0.0;
};

/// No-reference quality: spectral distortion from inter-band UIQIs of the
/// fused cube versus the observed HSI, spatial distortion from UIQIs of each
/// fused band against each MSI band versus the HSI against the degraded MSI.
/// QNR = (1 - D_lambda)(1 - D_s). `window` applies on the MSI grid; HSI-grid
/// indices use window / factor so both cover the same ground footprint.
QnrResult qnr(const SpectralCube& fused, const SpectralCube& msi, const SpectralCube& hsi,
              const ConvolutionKernel& kernel, const SubsamplingPattern& pattern, int window = 32);

/// |est_l - ref_l| / |ref_l| per band.
std::vector<double> per_band_rmse(const SpectralCube& est, const SpectralCube& ref);

}  // namespace hsfusion
