#include "hsfusion/io.hpp"

#include "hsfusion/error.hpp"

#include <json.hpp>

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

namespace hsfusion {

namespace fs = std::filesystem;

namespace {

std::uint32_t to_little_endian(std::uint32_t v) {
    if constexpr (std::endian::native == std::endian::big) {
        v = ((v & 0xFF000000u) >> 24) | ((v & 0x00FF0000u) >> 8) | ((v & 0x0000FF00u) << 8) |
            ((v & 0x000000FFu) << 24);
    }
    return v;
}

fs::path raw_path_for(const fs::path& header) {
    fs::path raw = header;
    raw.replace_extension(".raw");
    return raw;
}

int positive_field(const nlohmann::json& j, const char* key, const fs::path& header) {
    if (!j.contains(key) || !j[key].is_number_integer() || j[key].get<long long>() <= 0) {
        throw IoError(header.string() + ": missing or non-positive integer field '" + key + "'");
    }
    return j[key].get<int>();
}

}  // namespace

SpectralCube cube_read(const fs::path& header) {
    std::ifstream in(header);
    if (!in) throw IoError("cannot open cube header " + header.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw IoError(header.string() + ": malformed header: " + e.what());
    }
    const int bands = positive_field(j, "bands", header);
    const int width = positive_field(j, "width", header);
    const int height = positive_field(j, "height", header);
    if (j.value("dtype", std::string{}) != "f32le") {
        throw IoError(header.string() + ": unsupported dtype (expected f32le)");
    }
    if (!j.contains("data") || !j["data"].is_string()) {
        throw IoError(header.string() + ": missing 'data' field");
    }
    const fs::path raw = header.parent_path() / j["data"].get<std::string>();

    const std::size_t count = static_cast<std::size_t>(bands) * width * height;
    std::ifstream payload(raw, std::ios::binary | std::ios::ate);
    if (!payload) throw IoError("cannot open cube payload " + raw.string());
    const auto bytes = static_cast<std::size_t>(payload.tellg());
    if (bytes != count * 4) {
        std::ostringstream msg;
        msg << raw.string() << ": payload has " << bytes << " bytes, header declares " << bands << "x"
            << width << "x" << height << " float32 (" << count * 4 << " bytes)";
        throw IoError(msg.str());
    }
    payload.seekg(0);
    std::vector<std::uint32_t> words(count);
    payload.read(reinterpret_cast<char*>(words.data()), static_cast<std::streamsize>(bytes));
    if (!payload) throw IoError("short read from " + raw.string());

    const Eigen::Index n = static_cast<Eigen::Index>(width) * height;
    Matrix data(bands, n);
    for (int l = 0; l < bands; ++l) {
        for (Eigen::Index p = 0; p < n; ++p) {
            const std::uint32_t bits = to_little_endian(words[static_cast<std::size_t>(l * n + p)]);
            data(l, p) = static_cast<double>(std::bit_cast<float>(bits));
        }
    }
    return SpectralCube(std::move(data), width, height);
}

void cube_write(const SpectralCube& cube, const fs::path& header) {
    const fs::path raw = raw_path_for(header);
    const Matrix& data = cube.data();
    std::vector<std::uint32_t> words(static_cast<std::size_t>(data.size()));
    for (Eigen::Index l = 0; l < data.rows(); ++l) {
        for (Eigen::Index p = 0; p < data.cols(); ++p) {
            const auto value = static_cast<float>(data(l, p));
            words[static_cast<std::size_t>(l * data.cols() + p)] =
                to_little_endian(std::bit_cast<std::uint32_t>(value));
        }
    }
    std::ofstream payload(raw, std::ios::binary | std::ios::trunc);
    if (!payload) throw IoError("cannot write " + raw.string());
    payload.write(reinterpret_cast<const char*>(words.data()),
                  static_cast<std::streamsize>(words.size() * 4));
    if (!payload) throw IoError("write failed for " + raw.string());

    nlohmann::json j = {{"bands", cube.bands()},
                        {"width", cube.width()},
                        {"height", cube.height()},
                        {"dtype", "f32le"},
                        {"data", raw.filename().string()}};
    std::ofstream out(header, std::ios::trunc);
    if (!out) throw IoError("cannot write " + header.string());
    out << j.dump(2) << '\n';
    if (!out) throw IoError("write failed for " + header.string());
}

Matrix read_csv_matrix(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    std::vector<std::vector<double>> rows;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                std::size_t used = 0;
                row.push_back(std::stod(cell, &used));
                if (cell.find_first_not_of(" \t\r", used) != std::string::npos) throw std::invalid_argument(cell);
            } catch (const std::exception&) {
                throw IoError(path.string() + ":" + std::to_string(line_no) + ": bad number '" + cell + "'");
            }
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw IoError(path.string() + ":" + std::to_string(line_no) + ": ragged row");
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw IoError(path.string() + ": empty matrix");
    Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < rows[r].size(); ++c) {
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
        }
    }
    return m;
}

void write_csv_matrix(const Matrix& m, const fs::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out.precision(17);
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (c) out << ',';
            out << m(r, c);
        }
        out << '\n';
    }
    if (!out) throw IoError("write failed for " + path.string());
}

ConvolutionKernel read_kernel(const fs::path& path) {
    return ConvolutionKernel(read_csv_matrix(path));
}

void write_kernel(const ConvolutionKernel& kernel, const fs::path& path) {
    write_csv_matrix(kernel.taps(), path);
}

SpectralResponse read_response(const fs::path& path) {
    return SpectralResponse(read_csv_matrix(path));
}

void write_response(const SpectralResponse& response, const fs::path& path) {
    write_csv_matrix(response.matrix(), path);
}

SubspaceBasis read_basis(const fs::path& header) {
    const SpectralCube cube = cube_read(header);
    if (cube.height() != 1) throw IoError(header.string() + ": basis cube must have height 1");
    return SubspaceBasis(Eigen::MatrixXd(cube.data()));
}

void write_basis(const SubspaceBasis& basis, const fs::path& header) {
    cube_write(SpectralCube(Matrix(basis.matrix()), basis.dim(), 1), header);
}

}  // namespace hsfusion
