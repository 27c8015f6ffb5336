#include "hsfusion/subspace.hpp"

#include "hsfusion/error.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>

namespace hsfusion {

namespace {

void check_bands(const SpectralCube& cube, const SubspaceBasis& basis) {
    if (cube.bands() != basis.bands()) {
        throw GeometryError("cube has " + std::to_string(cube.bands()) + " bands, basis expects " +
                            std::to_string(basis.bands()));
    }
}

}  // namespace

SubspaceEstimate estimate_subspace(const SpectralCube& cube, int s) {
    const int bands = cube.bands();
    const auto max_rank = static_cast<int>(std::min<Eigen::Index>(bands, cube.pixels()));
    if (s < 1 || s > max_rank) {
        throw InvalidArgument("subspace dimension " + std::to_string(s) + " outside [1, " +
                              std::to_string(max_rank) + "]");
    }
    const Matrix& y = cube.data();
    if ((y.array() == 0.0).all()) throw NumericalError("cannot estimate a subspace from an all-zero cube");

    const Eigen::MatrixXd gram = y * y.transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
    if (eig.info() != Eigen::Success) throw NumericalError("Gram eigendecomposition failed");

    // Eigen returns ascending eigenvalues.
    Eigen::MatrixXd basis(bands, s);
    for (int i = 0; i < s; ++i) {
        Eigen::VectorXd v = eig.eigenvectors().col(bands - 1 - i);
        Eigen::Index imax = 0;
        v.cwiseAbs().maxCoeff(&imax);
        if (v(imax) < 0) v = -v;
        basis.col(i) = v;
    }
    SubspaceEstimate est{SubspaceBasis(std::move(basis)), {}};
    est.singular_values.reserve(static_cast<std::size_t>(max_rank));
    for (int i = 0; i < max_rank; ++i) {
        est.singular_values.push_back(std::sqrt(std::max(0.0, eig.eigenvalues()(bands - 1 - i))));
    }
    return est;
}

SpectralCube project_denoise(const SpectralCube& cube, const SubspaceBasis& basis) {
    check_bands(cube, basis);
    const Eigen::MatrixXd& e = basis.matrix();
    return SpectralCube(Matrix(e * (e.transpose() * cube.data())), cube.width(), cube.height());
}

SpectralCube coefficients(const SpectralCube& cube, const SubspaceBasis& basis) {
    check_bands(cube, basis);
    return SpectralCube(Matrix(basis.matrix().transpose() * cube.data()), cube.width(), cube.height());
}

SpectralCube expand(const SpectralCube& coeffs, const SubspaceBasis& basis) {
    if (coeffs.bands() != basis.dim()) throw GeometryError("coefficient count does not match basis");
    return SpectralCube(Matrix(basis.matrix() * coeffs.data()), coeffs.width(), coeffs.height());
}

int choose_rank(std::vector<double> singular_values, double energy_fraction) {
    if (singular_values.empty()) throw InvalidArgument("empty singular value list");
    if (!(energy_fraction > 0.0 && energy_fraction <= 1.0)) {
        throw InvalidArgument("energy fraction must lie in (0, 1]");
    }
    std::sort(singular_values.begin(), singular_values.end(), std::greater<>());
    std::vector<double> cumulative(singular_values.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < singular_values.size(); ++i) {
        acc += singular_values[i] * singular_values[i];
        cumulative[i] = acc;
    }
    if (acc <= 0.0) return 1;
    for (std::size_t i = 0; i < cumulative.size(); ++i) {
        if (cumulative[i] >= energy_fraction * acc) return static_cast<int>(i + 1);
    }
    return static_cast<int>(cumulative.size());
}

SpectralCube exclude_bands(const SpectralCube& cube, const std::vector<int>& excluded) {
    const std::set<int> drop(excluded.begin(), excluded.end());
    for (int b : drop) {
        if (b < 0 || b >= cube.bands()) throw InvalidArgument("excluded band " + std::to_string(b) + " out of range");
    }
    if (static_cast<int>(drop.size()) == cube.bands()) throw InvalidArgument("all bands excluded");
    Matrix kept(cube.bands() - static_cast<int>(drop.size()), cube.pixels());
    Eigen::Index row = 0;
    for (int l = 0; l < cube.bands(); ++l) {
        if (!drop.contains(l)) kept.row(row++) = cube.band(l);
    }
    return SpectralCube(std::move(kept), cube.width(), cube.height());
}

}  // namespace hsfusion
