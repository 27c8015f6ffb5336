#pragma once

#include "hsfusion/cube.hpp"

#include <filesystem>

namespace hsfusion {

/// Reads a cube from its JSON header. The header names a raw payload of
/// little-endian float32 values, band-sequential, resolved relative to the
/// header's directory.
SpectralCube cube_read(const std::filesystem::path& header);

/// Writes `<stem>.json` and `<stem>.raw` next to each other. Values are stored
/// as float32, so a cube read back holds the float-rounded values.
void cube_write(const SpectralCube& cube, const std::filesystem::path& header);

/// Plain comma-separated decimal matrix, one row per line.
Matrix read_csv_matrix(const std::filesystem::path& path);
void write_csv_matrix(const Matrix& m, const std::filesystem::path& path);

ConvolutionKernel read_kernel(const std::filesystem::path& path);
void write_kernel(const ConvolutionKernel& kernel, const std::filesystem::path& path);

SpectralResponse read_response(const std::filesystem::path& path);
void write_response(const SpectralResponse& response, const std::filesystem::path& path);

/// A basis is persisted as a cube with L_h bands and s x 1 pixels.
SubspaceBasis read_basis(const std::filesystem::path& header);
void write_basis(const SubspaceBasis& basis, const std::filesystem::path& header);

}  // namespace hsfusion
