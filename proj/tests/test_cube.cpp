#include "doctest.h"
#include "oracles.hpp"

#include "hsfusion/error.hpp"
#include "hsfusion/io.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>

using namespace hsfusion;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
    const fs::path dir = fs::temp_directory_path() / "hsfusion_test_cube";
    fs::create_directories(dir);
    return dir;
}

void write_raw(const fs::path& path, const std::vector<float>& values) {
    std::ofstream out(path, std::ios::binary);
    out.write(reinterpret_cast<const char*>(values.data()), static_cast<std::streamsize>(values.size() * 4));
}

void write_header(const fs::path& path, int bands, int w, int h, const std::string& raw) {
    std::ofstream out(path);
    out << R"({"bands": )" << bands << R"(, "width": )" << w << R"(, "height": )" << h
        << R"(, "dtype": "f32le", "data": ")" << raw << R"("})";
}

}  // namespace

TEST_CASE("cube constructor enforces shape and finiteness") {
    CHECK_THROWS_AS(SpectralCube(Matrix::Zero(2, 5), 2, 2), GeometryError);
    Matrix bad = Matrix::Zero(2, 4);
    bad(1, 3) = std::numeric_limits<double>::quiet_NaN();
    try {
        SpectralCube c(bad, 2, 2);
        FAIL("expected NumericalError");
    } catch (const NumericalError& e) {
        CHECK(std::string(e.what()).find("band 1") != std::string::npos);
        CHECK(std::string(e.what()).find("(1, 1)") != std::string::npos);
    }
    const SpectralCube ok(3, 4, 2);
    CHECK(ok.bands() == 3);
    CHECK(ok.pixels() == 8);
}

TEST_CASE("kernel, pattern and response invariants") {
    CHECK_THROWS_AS(ConvolutionKernel(Matrix::Ones(2, 2)), GeometryError);
    CHECK_THROWS_AS(ConvolutionKernel(Matrix::Ones(3, 1)), GeometryError);
    CHECK_THROWS_AS(ConvolutionKernel(Matrix::Zero(3, 3)), NumericalError);
    const ConvolutionKernel k(Matrix::Constant(3, 3, 2.0));
    CHECK(std::abs(k.taps().sum() - 1.0) < 1e-12);

    CHECK_THROWS_AS(SubsamplingPattern(0), InvalidArgument);
    CHECK_THROWS_AS(SubsamplingPattern(4, 4, 0), InvalidArgument);
    CHECK_THROWS_AS(SubsamplingPattern(4).check_divides(10, 8), GeometryError);
    CHECK_NOTHROW(SubsamplingPattern(4, 3, 1).check_divides(8, 12));

    Matrix r = Matrix::Ones(2, 3);
    r.row(1).setZero();
    CHECK_THROWS_AS(SpectralResponse{r}, InvalidArgument);
}

TEST_CASE("cube_read decodes band-sequential float32 payload") {
    const fs::path dir = scratch_dir();
    write_raw(dir / "small.raw", {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12});
    write_header(dir / "small.json", 3, 2, 2, "small.raw");
    const SpectralCube c = cube_read(dir / "small.json");
    CHECK(c.bands() == 3);
    CHECK(c.width() == 2);
    CHECK(c.height() == 2);
    CHECK(c.band(0)(0) == 1.0);
    CHECK(c.band(0)(3) == 4.0);
    CHECK(c.at(2, 1, 1) == 12.0);
}

TEST_CASE("cube_read rejects truncated payloads and missing files") {
    const fs::path dir = scratch_dir();
    write_raw(dir / "short.raw", {1, 2, 3, 4, 5});
    write_header(dir / "short.json", 3, 2, 2, "short.raw");
    CHECK_THROWS_AS(cube_read(dir / "short.json"), IoError);
    CHECK_THROWS_AS(cube_read(dir / "does_not_exist.json"), IoError);

    write_header(dir / "orphan.json", 1, 1, 1, "orphan_missing.raw");
    CHECK_THROWS_AS(cube_read(dir / "orphan.json"), IoError);
}

TEST_CASE("cube_read names the first non-finite value") {
    const fs::path dir = scratch_dir();
    write_raw(dir / "nan.raw", {0, 0, 0, 0, 0, std::numeric_limits<float>::infinity(), 0, 0});
    write_header(dir / "nan.json", 2, 2, 2, "nan.raw");
    try {
        cube_read(dir / "nan.json");
        FAIL("expected NumericalError");
    } catch (const NumericalError& e) {
        CHECK(std::string(e.what()).find("band 1, pixel (1, 0)") != std::string::npos);
    }
}

TEST_CASE("cube_write to an unwritable location fails") {
    CHECK_THROWS_AS(cube_write(SpectralCube(1, 1, 1), "/nonexistent_dir/x/cube.json"), IoError);
}

TEST_CASE("1x1x1 cube is a valid minimal file") {
    const fs::path path = scratch_dir() / "tiny.json";
    Matrix m(1, 1);
    m(0, 0) = 0.25;
    cube_write(SpectralCube(m, 1, 1), path);
    CHECK(fs::file_size(scratch_dir() / "tiny.raw") == 4);
    CHECK(cube_read(path).data()(0, 0) == 0.25);
}

TEST_CASE("property: cube_read after cube_write is the identity on float32 values") {
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> dim(1, 9);
    const fs::path path = scratch_dir() / "roundtrip.json";
    for (int trial = 0; trial < 25; ++trial) {
        const int bands = dim(rng), w = dim(rng), h = dim(rng);
        // Float-representable values so the round trip is bitwise exact.
        Matrix m = oracle::random_matrix(rng, bands, w * h, -1e3, 1e3).unaryExpr([](double v) {
            return static_cast<double>(static_cast<float>(v));
        });
        cube_write(SpectralCube(m, w, h), path);
        const SpectralCube back = cube_read(path);
        REQUIRE(back.bands() == bands);
        REQUIRE(back.width() == w);
        REQUIRE(back.height() == h);
        CHECK((back.data().array() == m.array()).all());
    }
}

TEST_CASE("CSV matrices, kernels and responses") {
    const fs::path dir = scratch_dir();
    {
        std::ofstream out(dir / "k.csv");
        out << "1,2,1\n2,4,2\n1,2,1\n";
    }
    const ConvolutionKernel k = read_kernel(dir / "k.csv");
    CHECK(k.size() == 3);
    CHECK(k.tap(1, 1) == doctest::Approx(0.25));

    {
        std::ofstream out(dir / "ragged.csv");
        out << "1,2\n3\n";
    }
    CHECK_THROWS_AS(read_csv_matrix(dir / "ragged.csv"), IoError);
    {
        std::ofstream out(dir / "junk.csv");
        out << "1,abc\n";
    }
    CHECK_THROWS_AS(read_csv_matrix(dir / "junk.csv"), IoError);

    std::mt19937 rng(3);
    const Matrix r = oracle::random_matrix(rng, 4, 10, 0.0, 1.0);
    write_response(SpectralResponse(r), dir / "r.csv");
    CHECK((read_response(dir / "r.csv").matrix().array() == r.array()).all());
}

TEST_CASE("basis persists as an L_h x s cube") {
    std::mt19937 rng(11);
    const Eigen::MatrixXd e = oracle::random_orthonormal(rng, 6, 2);
    const fs::path path = scratch_dir() / "basis.json";
    write_basis(SubspaceBasis(e), path);
    const SpectralCube as_cube = cube_read(path);
    CHECK(as_cube.bands() == 6);
    CHECK(as_cube.width() == 2);
    CHECK(as_cube.height() == 1);
    const SubspaceBasis back = read_basis(path);
    CHECK((back.matrix() - e).cwiseAbs().maxCoeff() < 1e-6);
}
