#pragma once

#include "hsfusion/cube.hpp"

#include <vector>

namespace hsfusion {

struct SubspaceEstimate {
    SubspaceBasis basis;
    /// All min(L_h, pixels) singular values of Y_h, in decreasing order.
    std::vector<double> singular_values;
};

/// Leading `s` left singular vectors of the bands x pixels matrix of `cube`,
/// computed from the eigendecomposition of the L_h x L_h Gram matrix. Each
/// vector is signed so that its largest-magnitude entry is positive.
SubspaceEstimate estimate_subspace(const SpectralCube& cube, int s);

/// E E^T Y.
SpectralCube project_denoise(const SpectralCube& cube, const SubspaceBasis& basis);

/// E^T Y, returned as an s-band cube on the same grid.
SpectralCube coefficients(const SpectralCube& cube, const SubspaceBasis& basis);

/// E X.
SpectralCube expand(const SpectralCube& coeffs, const SubspaceBasis& basis);

/// Smallest s whose leading squared singular values reach `energy_fraction`
/// of the total energy. The values are sorted internally.
int choose_rank(std::vector<double> singular_values, double energy_fraction);

/// Removes the listed bands (0-based) from a cube.
SpectralCube exclude_bands(const SpectralCube& cube, const std::vector<int>& excluded);

}  // namespace hsfusion
