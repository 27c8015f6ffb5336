#include "doctest.h"
#include "oracles.hpp"

#include "hsfusion/error.hpp"
#include "hsfusion/vtv.hpp"

#include <cmath>
#include <random>

using namespace hsfusion;

namespace {

GradientPair random_pair(std::mt19937& rng, int rows, int cols, double scale = 1.0) {
    return {oracle::random_matrix(rng, rows, cols, -scale, scale), oracle::random_matrix(rng, rows, cols, -scale, scale)};
}

Eigen::VectorXd stacked(const GradientPair& p, Eigen::Index j) {
    Eigen::VectorXd v(2 * p.gh.rows());
    v << p.gh.col(j), p.gv.col(j);
    return v;
}

}  // namespace

TEST_CASE("vtv_value examples") {
    CHECK(vtv_value({Matrix::Zero(2, 9), Matrix::Zero(2, 9)}) == 0.0);
    Matrix a(1, 1), b(1, 1);
    a << 3;
    b << 4;
    CHECK(vtv_value({a, b}) == doctest::Approx(5.0));

    std::mt19937 rng(1);
    const GradientPair p = random_pair(rng, 2, 9);
    double expected = 0.0;
    for (int j = 0; j < 9; ++j) {
        double sum = 0.0;
        for (int i = 0; i < 2; ++i) sum += p.gh(i, j) * p.gh(i, j) + p.gv(i, j) * p.gv(i, j);
        expected += std::sqrt(sum);
    }
    CHECK(std::abs(vtv_value(p) - expected) < 1e-12);
    CHECK_THROWS_AS(vtv_value({Matrix::Zero(2, 9), Matrix::Zero(2, 8)}), GeometryError);
}

TEST_CASE("vtv_prox closed-form cases") {
    std::mt19937 rng(2);
    const GradientPair small = random_pair(rng, 3, 20, 0.1);  // every |g_j| <= sqrt(6) * 0.1 < 0.3
    const GradientPair zero = vtv_prox(small, 0.3);
    CHECK(zero.gh.cwiseAbs().maxCoeff() == 0.0);
    CHECK(zero.gv.cwiseAbs().maxCoeff() == 0.0);

    Matrix a(1, 1), b(1, 1);
    a << 3;
    b << 4;
    const GradientPair out = vtv_prox({a, b}, 2.5);
    CHECK(out.gh(0, 0) == doctest::Approx(1.5));
    CHECK(out.gv(0, 0) == doctest::Approx(2.0));

    const GradientPair zeros = vtv_prox({Matrix::Zero(2, 3), Matrix::Zero(2, 3)}, 1.0);
    CHECK(zeros.gh.allFinite());
    CHECK(zeros.gh.cwiseAbs().maxCoeff() == 0.0);

    CHECK_THROWS_AS(vtv_prox({a, b}, 0.0), InvalidArgument);
    CHECK_THROWS_AS(vtv_prox({a, b}, -1.0), InvalidArgument);
}

TEST_CASE("vtv_prox matches numerical minimization per pixel") {
    std::mt19937 rng(3);
    double worst = 0.0;
    for (int pixel = 0; pixel < 1000; ++pixel) {
        const int s = 1 + pixel % 4;
        const GradientPair g = random_pair(rng, s, 1, 1.0);
        const double tau = 0.7;
        const Eigen::VectorXd expected = oracle::numeric_prox(stacked(g, 0), tau, rng);
        const Eigen::VectorXd got = stacked(vtv_prox(g, tau), 0);
        worst = std::max(worst, (got - expected).cwiseAbs().maxCoeff());
    }
    CHECK(worst < 1e-6);
}

TEST_CASE("property: vtv_prox is non-expansive and optimal") {
    std::mt19937 rng(4);
    std::normal_distribution<double> normal;
    for (int trial = 0; trial < 100; ++trial) {
        const double tau = 0.05 + 0.5 * (trial % 7);
        const GradientPair a = random_pair(rng, 3, 16);
        const GradientPair b = random_pair(rng, 3, 16);
        const GradientPair pa = vtv_prox(a, tau);
        const GradientPair pb = vtv_prox(b, tau);
        const double out_gap = std::sqrt((pa.gh - pb.gh).squaredNorm() + (pa.gv - pb.gv).squaredNorm());
        const double in_gap = std::sqrt((a.gh - b.gh).squaredNorm() + (a.gv - b.gv).squaredNorm());
        CHECK(out_gap <= in_gap + 1e-12);
        CHECK(vtv_value(pa) <= vtv_value(a) + 1e-12);

        for (Eigen::Index j = 0; j < 16; ++j) {
            const Eigen::VectorXd g = stacked(a, j);
            const Eigen::VectorXd v = stacked(pa, j);
            Eigen::VectorXd perturbed = v;
            for (Eigen::Index i = 0; i < perturbed.size(); ++i) perturbed(i) += 0.01 * normal(rng);
            CHECK(oracle::prox_objective(v, g, tau) <= oracle::prox_objective(perturbed, g, tau) + 1e-12);
        }
    }
}

TEST_CASE("property: vtv_value is absolutely homogeneous") {
    std::mt19937 rng(5);
    for (double c : {-3.0, -0.5, 0.0, 0.25, 7.0}) {
        const GradientPair g = random_pair(rng, 2, 25);
        const GradientPair scaled{c * g.gh, c * g.gv};
        CHECK(vtv_value(scaled) == doctest::Approx(std::abs(c) * vtv_value(g)).epsilon(1e-12));
    }
}
