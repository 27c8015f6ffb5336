#include "hsfusion/vtv.hpp"

#include "hsfusion/error.hpp"

#include <cmath>

namespace hsfusion {

namespace {

void check_pair(const Matrix& gh, const Matrix& gv) {
    if (gh.rows() != gv.rows() || gh.cols() != gv.cols()) {
        throw GeometryError("gradient pair halves differ in shape");
    }
}

}  // namespace

double vtv_value(const GradientPair& pair) {
    check_pair(pair.gh, pair.gv);
    double total = 0.0;
    for (Eigen::Index j = 0; j < pair.gh.cols(); ++j) {
        total += std::sqrt(pair.gh.col(j).squaredNorm() + pair.gv.col(j).squaredNorm());
    }
    return total;
}

void vtv_prox_inplace(Matrix& gh, Matrix& gv, double tau) {
    check_pair(gh, gv);
    if (!(tau > 0.0) || !std::isfinite(tau)) throw InvalidArgument("prox threshold must be positive");
    const Eigen::Index rows = gh.rows();
    const Eigen::Index cols = gh.cols();
#pragma omp parallel for if (cols > 4096)
    for (Eigen::Index j = 0; j < cols; ++j) {
        double norm2 = 0.0;
        for (Eigen::Index i = 0; i < rows; ++i) norm2 += gh(i, j) * gh(i, j) + gv(i, j) * gv(i, j);
        const double norm = std::sqrt(norm2);
        const double shrink = norm > tau ? 1.0 - tau / norm : 0.0;
        for (Eigen::Index i = 0; i < rows; ++i) {
            gh(i, j) *= shrink;
            gv(i, j) *= shrink;
        }
    }
}

GradientPair vtv_prox(const GradientPair& pair, double tau) {
    GradientPair out = pair;
    vtv_prox_inplace(out.gh, out.gv, tau);
    return out;
}

}  // namespace hsfusion
