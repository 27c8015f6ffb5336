#pragma once

#include "hsfusion/cube.hpp"

#include <optional>
#include <vector>

namespace hsfusion {

struct CalibrationOptions {
    int kernel_support = 5;
    /// Ridge weight on |R|_F^2. Unset means 1e-6 |Y_h|_F^2.
    std::optional<double> ridge_r;
    /// Weight on the squared first differences between neighbouring kernel taps.
    double smooth_b = 1e-3;
    int max_alt_iters = 500;
    /// Stop once a full R/b alternation lowers the objective by less than this
    /// fraction.
    double rel_tol = 1e-6;
};

struct CalibrationResult {
    ConvolutionKernel kernel;
    SpectralResponse response;
    /// Objective after the initial guess and after every R-step and b-step.
    std::vector<double> residual_history;
    int alternations = 0;
    double ridge_r = 0.0;
};

/// Estimates the blur kernel b and the spectral response R from an observed
/// pair by alternating least squares on
///   |R Y_h - M(Y_m * b)|_F^2 + ridge_r |R|_F^2 + smooth_b |grad b|^2,
/// with the kernel constrained to unit sum so that R carries all scale.
/// R is clamped to nonnegative entries once the alternation has stopped.
CalibrationResult calibrate(const SpectralCube& hsi, const SpectralCube& msi,
                            const SubsamplingPattern& pattern, const CalibrationOptions& options = {});

}  // namespace hsfusion
