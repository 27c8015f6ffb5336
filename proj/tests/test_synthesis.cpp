#include "doctest.h"
#include "oracles.hpp"

#include "hsfusion/error.hpp"
#include "hsfusion/operators.hpp"
#include "hsfusion/random.hpp"
#include "hsfusion/synthesis.hpp"

#include <cmath>
#include <limits>
#include <random>

using namespace hsfusion;

namespace {

double snr_db(const Matrix& signal, const Matrix& noise) {
    return 10.0 * std::log10(signal.squaredNorm() / noise.squaredNorm());
}

}  // namespace

TEST_CASE("splitmix64 reference output") {
    // First output of the reference SplitMix64 generator seeded with 0.
    CHECK(splitmix64_mix(0x9E3779B97F4A7C15ULL) == 0xE220A8397B1DCDAFULL);
}

TEST_CASE("counter rng streams") {
    CounterRng a(7, 1), b(7, 1), c(7, 2), d(8, 1);
    bool differs_stream = false, differs_seed = false;
    for (int i = 0; i < 16; ++i) {
        const auto va = a.next_u64();
        CHECK(va == b.next_u64());
        differs_stream |= va != c.next_u64();
        differs_seed |= va != d.next_u64();
    }
    CHECK(differs_stream);
    CHECK(differs_seed);

    CounterRng u(3, 0);
    double sum = 0.0, sum_sq = 0.0;
    const int count = 200000;
    for (int i = 0; i < count; ++i) {
        const double x = u.normal();
        sum += x;
        sum_sq += x * x;
    }
    CHECK(std::abs(sum / count) < 0.01);
    CHECK(std::abs(sum_sq / count - 1.0) < 0.02);
    for (int i = 0; i < 1000; ++i) {
        const double x = u.uniform();
        CHECK((x >= 0.0 && x < 1.0));
    }
}

TEST_CASE("starck_murtagh_kernel taps") {
    const ConvolutionKernel k = starck_murtagh_kernel();
    CHECK(k.size() == 5);
    CHECK(k.taps().sum() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(k.tap(2, 2) == doctest::Approx(36.0 / 256.0).epsilon(1e-15));
    const Matrix t = k.taps();
    const Matrix rotated = t.transpose().colwise().reverse();
    CHECK((t - rotated).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("add_noise_snr") {
    std::mt19937 rng(1);
    const SpectralCube cube = oracle::random_cube(rng, 10, 100, 100, 0.0, 1.0);
    const SpectralCube same = add_noise_snr(cube, std::numeric_limits<double>::infinity(), 5);
    CHECK(same.data() == cube.data());

    for (double target : {10.0, 30.0, 40.0}) {
        const SpectralCube noisy = add_noise_snr(cube, target, 11);
        CHECK(std::abs(snr_db(cube.data(), noisy.data() - cube.data()) - target) < 0.5);
        CHECK(add_noise_snr(cube, target, 11).data() == noisy.data());
        CHECK(add_noise_snr(cube, target, 12).data() != noisy.data());
    }
    CHECK_THROWS_AS(add_noise_snr(cube, std::numeric_limits<double>::quiet_NaN(), 1), InvalidArgument);
    CHECK_THROWS_AS(add_noise_snr(cube, -std::numeric_limits<double>::infinity(), 1), InvalidArgument);
}

TEST_CASE("simulate_pair identity pipeline") {
    std::mt19937 rng(2);
    const SpectralCube z = oracle::random_cube(rng, 4, 8, 6);
    const double inf = std::numeric_limits<double>::infinity();
    const ObservationPair pair =
        simulate_pair(z, ConvolutionKernel::delta(), SubsamplingPattern{1, 0, 0}, SpectralResponse::identity(4), inf, inf, 3);
    CHECK(pair.hsi.data() == z.data());
    CHECK(pair.msi.data() == z.data());
}

TEST_CASE("simulate_pair noiseless matches blur-then-select oracle") {
    const SyntheticScene scene = make_synthetic_scene(6, 3, 64, 64, 4);
    const ConvolutionKernel kernel = starck_murtagh_kernel();
    const SubsamplingPattern pattern{4, 1, 2};
    const SpectralResponse response = make_synthetic_response(2, 6, 4);
    const double inf = std::numeric_limits<double>::infinity();
    const ObservationPair pair = simulate_pair(scene.truth, kernel, pattern, response, inf, inf, 9);
    REQUIRE(pair.hsi.width() == 16);
    REQUIRE(pair.hsi.height() == 16);
    REQUIRE(pair.msi.bands() == 2);

    double worst = 0.0;
    for (int l = 0; l < 6; ++l)
        for (int v = 0; v < 16; ++v)
            for (int u = 0; u < 16; ++u) {
                const int x = 1 + 4 * u;
                const int y = 2 + 4 * v;
                double acc = 0.0;
                for (int a = 0; a < 5; ++a)
                    for (int b = 0; b < 5; ++b)
                        acc += kernel.tap(a, b) *
                               scene.truth.at(l, oracle::wrap(x - (b - 2), 64), oracle::wrap(y - (a - 2), 64));
                worst = std::max(worst, std::abs(pair.hsi.at(l, u, v) - acc));
            }
    CHECK(worst < 1e-12);
    const Matrix expected_msi = response.matrix() * scene.truth.data();
    CHECK((pair.msi.data() - expected_msi).cwiseAbs().maxCoeff() < 1e-12);

    // Byte-level equality with the composed operator path.
    CHECK(pair.hsi.data() == subsample_apply(blur_apply(scene.truth, kernel), pattern).data());
    CHECK(pair.msi.data() == spectral_apply(scene.truth, response).data());
}

TEST_CASE("simulate_pair noise levels") {
    const SyntheticScene scene = make_synthetic_scene(20, 4, 160, 160, 5);
    const ConvolutionKernel kernel = starck_murtagh_kernel();
    const SubsamplingPattern pattern{2, 0, 0};
    const SpectralResponse response = make_synthetic_response(8, 20, 5);
    const double inf = std::numeric_limits<double>::infinity();
    const ObservationPair clean = simulate_pair(scene.truth, kernel, pattern, response, inf, inf, 1);
    const ObservationPair noisy = simulate_pair(scene.truth, kernel, pattern, response, 30.0, 40.0, 1);
    REQUIRE(clean.hsi.data().size() >= 100000);
    REQUIRE(clean.msi.data().size() >= 100000);
    CHECK(std::abs(snr_db(clean.hsi.data(), noisy.hsi.data() - clean.hsi.data()) - 30.0) < 0.5);
    CHECK(std::abs(snr_db(clean.msi.data(), noisy.msi.data() - clean.msi.data()) - 40.0) < 0.5);

    const ObservationPair again = simulate_pair(scene.truth, kernel, pattern, response, 30.0, 40.0, 1);
    CHECK(again.hsi.data() == noisy.hsi.data());
    CHECK(again.msi.data() == noisy.msi.data());

    CHECK_THROWS_AS(simulate_pair(make_synthetic_truth(4, 2, 30, 32, 1), kernel, SubsamplingPattern{4, 0, 0},
                                  SpectralResponse::identity(4), inf, inf, 1),
                    GeometryError);
}

TEST_CASE("make_synthetic_scene structure") {
    const SyntheticScene scene = make_synthetic_scene(30, 5, 48, 40, 6);
    CHECK(scene.truth.bands() == 30);
    CHECK(scene.truth.width() == 48);
    CHECK(scene.truth.height() == 40);
    CHECK(scene.basis.dim() == 5);
    CHECK(scene.basis.orthonormality_error() < 1e-12);

    const Eigen::MatrixXd e = scene.basis.matrix();
    const Matrix& z = scene.truth.data();
    const Matrix residual = z - e * (e.transpose() * z);
    CHECK(residual.norm() <= 1e-12 * z.norm());
    CHECK((z - e * scene.coefficients.data()).norm() <= 1e-12 * z.norm());

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(Eigen::MatrixXd(z), Eigen::ComputeThinU);
    const auto sv = svd.singularValues();
    CHECK(sv(5) <= 1e-10 * sv(0));
    CHECK(sv(4) > 1e-6 * sv(0));

    CHECK(z.minCoeff() > 0.0);
    CHECK(make_synthetic_truth(30, 5, 48, 40, 6).data() == z);
    CHECK(make_synthetic_truth(30, 5, 48, 40, 7).data() != z);
}

TEST_CASE("make_synthetic_response rows") {
    const SpectralResponse r = make_synthetic_response(4, 30, 2);
    CHECK(r.msi_bands() == 4);
    CHECK(r.hsi_bands() == 30);
    CHECK(r.matrix().minCoeff() >= 0.0);
    for (int i = 0; i < 4; ++i) CHECK(r.matrix().row(i).sum() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(make_synthetic_response(4, 30, 2).matrix() == r.matrix());
}
