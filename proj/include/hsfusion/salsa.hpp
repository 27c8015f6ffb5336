#pragma once

#include "hsfusion/cube.hpp"
#include "hsfusion/fft.hpp"
#include "hsfusion/operators.hpp"

#include <optional>
#include <vector>

namespace hsfusion {

struct FusionParams {
    double lambda_m = 1.0;
    double lambda_phi = 5e-4;
    /// ADMM penalty shared by all four splitting constraints.
    double mu = 0.01;
    int max_iters = 200;
    double eps_abs = 1e-4;
    double eps_rel = 1e-4;

    /// Throws InvalidArgument on out-of-domain values.
    void validate() const;
};

/// Observations and forward-model operators of one fusion problem.
struct FusionInputs {
    SpectralCube hsi;  // Y_h, L_h bands on the low-resolution grid
    SpectralCube msi;  // Y_m, L_m bands on the high-resolution grid
    SubspaceBasis basis;
    ConvolutionKernel kernel = ConvolutionKernel::delta();
    SubsamplingPattern pattern;
    SpectralResponse response = SpectralResponse::identity(1);

    Grid grid() const { return grid_of(msi); }

    /// Throws GeometryError if the shapes do not form a consistent problem.
    void validate() const;
};

/// Quantities fixed for the whole iteration.
struct Precomputation {
    Grid grid;
    Fft2d fft;
    FrequencyDiagonal spectrum_b;
    FrequencyDiagonal spectrum_dh;
    FrequencyDiagonal spectrum_dv;
    /// |b|^2 + 1 + |d_h|^2 + |d_v|^2 per frequency.
    std::vector<double> x_denominator;
    Eigen::MatrixXd inv1;  // (E^T E + mu I)^-1
    Eigen::MatrixXd inv2;  // (lambda_m (RE)^T RE + mu I)^-1
    Matrix et_yh;          // E^T y_j for each sampled pixel, s x n_h
    Matrix re_t_ym;        // lambda_m (RE)^T Y_m, s x n_m
    std::vector<Eigen::Index> sampled;
    std::vector<unsigned char> sample_mask;
    double mu = 0.0;
};

Precomputation precompute(const FusionInputs& in, const FusionParams& params);

/// ADMM iterate: X, splitting variables V1..V4 for the constraints
/// X B = V1, X = V2, X D_h = V3, X D_v = V4, and scaled duals A1..A4.
struct SolverState {
    Matrix x;
    Matrix v1, v2, v3, v4;
    Matrix a1, a2, a3, a4;
    // Constraint images of the current x.
    Matrix xb, xdh, xdv;
    // Splitting variables before the most recent V updates.
    Matrix v1_prev, v2_prev, v3_prev, v4_prev;
    int iter = 0;

    /// V's set to the constraint images of x0, duals zero.
    static SolverState start(Matrix x0, const Precomputation& pre);

    bool all_finite() const;
    void stash_previous();
};

struct ConvergenceCheck {
    bool converged = false;
    double primal_res = 0.0;
    double dual_res = 0.0;
    double primal_tol = 0.0;
    double dual_tol = 0.0;
};

struct IterationRecord {
    int iteration = 0;
    double objective = 0.0;
    double primal_res = 0.0;
    double dual_res = 0.0;
    double primal_tol = 0.0;
    double dual_tol = 0.0;
};

/// 1/2 |Y_h - E X B M|^2 + lambda_m/2 |Y_m - R E X|^2 + lambda_phi VTV(X D_h, X D_v).
double objective(const Matrix& x, const FusionInputs& in, const FusionParams& params);

/// Frequency-domain solve of the X subproblem; also refreshes xb, xdh, xdv.
void x_update(SolverState& st, const Precomputation& pre);
void v1_update(SolverState& st, const Precomputation& pre);
void v2_update(SolverState& st, const Precomputation& pre);
void v34_update(SolverState& st, const FusionParams& params);
void dual_update(SolverState& st);
ConvergenceCheck check_convergence(const SolverState& st, const Precomputation& pre,
                                   const FusionParams& params);

/// X0 = E^T (zero-order hold of E E^T Y_h).
Matrix initial_coefficients(const FusionInputs& in);

struct FusionResult {
    SpectralCube fused;         // Z = E X
    SpectralCube coefficients;  // X
    std::vector<IterationRecord> history;
    bool converged = false;
    int iterations = 0;
};

/// Runs the ADMM iteration X -> V1 -> V2 -> (V3, V4) -> duals until the
/// residual test passes or max_iters is reached. Throws NumericalError naming
/// the iteration if an iterate becomes non-finite.
FusionResult fuse(const FusionInputs& in, const FusionParams& params,
                  std::optional<Matrix> initial_x = std::nullopt);

}  // namespace hsfusion
