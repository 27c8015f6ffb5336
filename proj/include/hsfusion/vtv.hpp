#pragma once

#include "hsfusion/cube.hpp"

namespace hsfusion {

/// Horizontal and vertical difference images of a coefficient cube, both
/// s x n. Column j of the two halves together is the 2s-vector of pixel j.
struct GradientPair {
    Matrix gh;
    Matrix gv;
};

/// Sum over pixels of the Euclidean norm of the stacked 2s-vector.
double vtv_value(const GradientPair& pair);

/// Pixel-wise vector soft-thresholding: each stacked 2s-vector g is mapped to
/// max(0, 1 - tau/|g|) g, and zero vectors stay zero.
GradientPair vtv_prox(const GradientPair& pair, double tau);

/// In-place variant used inside the solver loop.
void vtv_prox_inplace(Matrix& gh, Matrix& gv, double tau);

}  // namespace hsfusion
