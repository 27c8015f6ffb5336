#pragma once

#include "hsfusion/cube.hpp"

#include <cstdint>

namespace hsfusion {

/// Separable 5x5 B3-spline kernel h h^T with h = [1, 4, 6, 4, 1] / 16.
ConvolutionKernel starck_murtagh_kernel();

/// Adds i.i.d. Gaussian noise with variance |cube|_F^2 / (N 10^(snr_db / 10)),
/// N the element count. snr_db = +inf returns the cube unchanged.
SpectralCube add_noise_snr(const SpectralCube& cube, double snr_db, std::uint64_t seed);

struct ObservationPair {
    SpectralCube hsi;
    SpectralCube msi;
};

/// Y_h = M(B(Z)) + noise(snr_h), Y_m = R Z + noise(snr_m). The two noise
/// streams are derived from `seed` independently.
ObservationPair simulate_pair(const SpectralCube& truth, const ConvolutionKernel& kernel,
                              const SubsamplingPattern& pattern, const SpectralResponse& response,
                              double snr_h_db, double snr_m_db, std::uint64_t seed);

struct SyntheticScene {
    SpectralCube truth;     // Z = E X
    SubspaceBasis basis;    // E, orthonormal
    SpectralCube coefficients;  // X
};

/// Piecewise-smooth positive scene of spectral rank `s`: s smooth positive
/// signatures mixed by low-frequency abundance fields plus rectangles whose
/// edges are shared by every abundance. Deterministic in `seed`.
SyntheticScene make_synthetic_scene(int bands, int s, int width, int height, std::uint64_t seed);

SpectralCube make_synthetic_truth(int bands, int s, int width, int height, std::uint64_t seed);

/// Nonnegative L_m x L_h response with Gaussian-shaped rows whose centers are
/// spread across the hyperspectral range.
SpectralResponse make_synthetic_response(int msi_bands, int hsi_bands, std::uint64_t seed);

}  // namespace hsfusion
