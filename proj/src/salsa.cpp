#include "hsfusion/salsa.hpp"

#include "hsfusion/error.hpp"
#include "hsfusion/vtv.hpp"

#include <cmath>
#include <sstream>

namespace hsfusion {

namespace {

Eigen::MatrixXd spd_inverse(const Eigen::MatrixXd& m, const char* what) {
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    if (llt.info() != Eigen::Success) throw NumericalError(std::string(what) + " is not positive definite");
    return llt.solve(Eigen::MatrixXd::Identity(m.rows(), m.cols()));
}

std::vector<Complex> to_complex(const double* src, Eigen::Index n) {
    std::vector<Complex> out(static_cast<std::size_t>(n));
    for (Eigen::Index p = 0; p < n; ++p) out[static_cast<std::size_t>(p)] = src[p];
    return out;
}

}  // namespace

void FusionParams::validate() const {
    if (!std::isfinite(lambda_m) || lambda_m < 0) throw InvalidArgument("lambda_m must be finite and >= 0");
    if (!std::isfinite(lambda_phi) || lambda_phi < 0) {
        throw InvalidArgument("lambda_phi must be finite and >= 0");
    }
    if (!std::isfinite(mu) || mu <= 0) throw InvalidArgument("mu must be finite and > 0");
    if (max_iters < 1) throw InvalidArgument("max_iters must be >= 1");
    if (!(eps_abs >= 0) || !(eps_rel >= 0)) throw InvalidArgument("tolerances must be >= 0");
}

void FusionInputs::validate() const {
    const Grid g = grid();
    pattern.check_divides(g.width, g.height);
    const int d = pattern.factor;
    if (hsi.width() * d != g.width || hsi.height() * d != g.height) {
        std::ostringstream msg;
        msg << "HSI grid " << hsi.width() << "x" << hsi.height() << " times factor " << d
            << " does not match MSI grid " << g.width << "x" << g.height;
        throw GeometryError(msg.str());
    }
    if (response.hsi_bands() != hsi.bands()) {
        throw GeometryError("spectral response has " + std::to_string(response.hsi_bands()) +
                            " columns, HSI has " + std::to_string(hsi.bands()) + " bands");
    }
    if (response.msi_bands() != msi.bands()) {
        throw GeometryError("spectral response has " + std::to_string(response.msi_bands()) +
                            " rows, MSI has " + std::to_string(msi.bands()) + " bands");
    }
    if (basis.bands() != hsi.bands()) {
        throw GeometryError("subspace basis has " + std::to_string(basis.bands()) + " bands, HSI has " +
                            std::to_string(hsi.bands()));
    }
    if (kernel.size() > g.width || kernel.size() > g.height) {
        throw GeometryError("blur kernel larger than the image");
    }
}

Precomputation precompute(const FusionInputs& in, const FusionParams& params) {
    in.validate();
    params.validate();
    const Grid g = in.grid();
    Precomputation pre{g, Fft2d(g.width, g.height), {}, {}, {}, {}, {}, {}, {}, {}, {}, {}, params.mu};
    pre.spectrum_b = operator_spectrum(in.kernel, g.width, g.height);
    pre.spectrum_dh = operator_spectrum(Difference::horizontal, g.width, g.height);
    pre.spectrum_dv = operator_spectrum(Difference::vertical, g.width, g.height);
    pre.x_denominator.resize(pre.spectrum_b.values.size());
    for (std::size_t p = 0; p < pre.x_denominator.size(); ++p) {
        pre.x_denominator[p] = std::norm(pre.spectrum_b.values[p]) + 1.0 +
                               std::norm(pre.spectrum_dh.values[p]) + std::norm(pre.spectrum_dv.values[p]);
    }

    const Eigen::MatrixXd& e = in.basis.matrix();
    const int s = in.basis.dim();
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(s, s);
    pre.inv1 = spd_inverse(e.transpose() * e + params.mu * id, "E^T E + mu I");
    const Eigen::MatrixXd re = in.response.matrix() * e;
    pre.inv2 = spd_inverse(params.lambda_m * re.transpose() * re + params.mu * id,
                           "lambda_m (RE)^T RE + mu I");

    pre.et_yh = e.transpose() * in.hsi.data();
    pre.re_t_ym = params.lambda_m * (re.transpose() * in.msi.data());
    pre.sampled = sampled_pixels(g, in.pattern);
    pre.sample_mask.assign(static_cast<std::size_t>(g.pixels()), 0);
    for (Eigen::Index j : pre.sampled) pre.sample_mask[static_cast<std::size_t>(j)] = 1;
    return pre;
}

SolverState SolverState::start(Matrix x0, const Precomputation& pre) {
    if (x0.cols() != pre.grid.pixels() || x0.rows() != pre.inv1.rows()) {
        throw GeometryError("initial coefficients do not match the problem size");
    }
    SolverState st;
    st.x = std::move(x0);
    st.xb = spectrum_apply_rows(st.x, pre.spectrum_b, pre.fft);
    st.xdh = diff_rows(st.x, pre.grid, Difference::horizontal);
    st.xdv = diff_rows(st.x, pre.grid, Difference::vertical);
    st.v1 = st.xb;
    st.v2 = st.x;
    st.v3 = st.xdh;
    st.v4 = st.xdv;
    st.a1 = Matrix::Zero(st.x.rows(), st.x.cols());
    st.a2 = st.a1;
    st.a3 = st.a1;
    st.a4 = st.a1;
    st.stash_previous();
    return st;
}

bool SolverState::all_finite() const {
    return x.allFinite() && v1.allFinite() && v2.allFinite() && v3.allFinite() && v4.allFinite() &&
           a1.allFinite() && a2.allFinite() && a3.allFinite() && a4.allFinite();
}

void SolverState::stash_previous() {
    v1_prev = v1;
    v2_prev = v2;
    v3_prev = v3;
    v4_prev = v4;
}

double objective(const Matrix& x, const FusionInputs& in, const FusionParams& params) {
    in.validate();
    const Grid g = in.grid();
    const Eigen::MatrixXd& e = in.basis.matrix();
    if (x.rows() != e.cols() || x.cols() != g.pixels()) {
        throw GeometryError("coefficients do not match the problem size");
    }
    const Matrix hsi_fit = e * subsample_rows(blur_rows(x, g, in.kernel), g, in.pattern);
    const Matrix msi_fit = (in.response.matrix() * e) * x;
    double value = 0.5 * (in.hsi.data() - hsi_fit).squaredNorm() +
                   0.5 * params.lambda_m * (in.msi.data() - msi_fit).squaredNorm();
    if (params.lambda_phi > 0) {
        const GradientPair grad{diff_rows(x, g, Difference::horizontal),
                                diff_rows(x, g, Difference::vertical)};
        value += params.lambda_phi * vtv_value(grad);
    }
    return value;
}

void x_update(SolverState& st, const Precomputation& pre) {
    const Eigen::Index rows = st.x.rows();
    const Eigen::Index n = st.x.cols();
    const auto& b = pre.spectrum_b.values;
    const auto& dh = pre.spectrum_dh.values;
    const auto& dv = pre.spectrum_dv.values;
#pragma omp parallel for if (rows > 1)
    for (Eigen::Index i = 0; i < rows; ++i) {
        const Eigen::RowVectorXd t1 = st.v1.row(i) - st.a1.row(i);
        const Eigen::RowVectorXd t2 = st.v2.row(i) - st.a2.row(i);
        const Eigen::RowVectorXd t3 = st.v3.row(i) - st.a3.row(i);
        const Eigen::RowVectorXd t4 = st.v4.row(i) - st.a4.row(i);
        auto f1 = to_complex(t1.data(), n);
        auto f2 = to_complex(t2.data(), n);
        auto f3 = to_complex(t3.data(), n);
        auto f4 = to_complex(t4.data(), n);
        pre.fft.forward(f1);
        pre.fft.forward(f2);
        pre.fft.forward(f3);
        pre.fft.forward(f4);
        std::vector<Complex> xhat(static_cast<std::size_t>(n));
        std::vector<Complex> xbhat(static_cast<std::size_t>(n));
        for (std::size_t p = 0; p < xhat.size(); ++p) {
            const Complex num = f1[p] * std::conj(b[p]) + f2[p] + f3[p] * std::conj(dh[p]) +
                                f4[p] * std::conj(dv[p]);
            xhat[p] = num / pre.x_denominator[p];
            xbhat[p] = xhat[p] * b[p];
        }
        pre.fft.inverse(xhat);
        pre.fft.inverse(xbhat);
        for (Eigen::Index p = 0; p < n; ++p) {
            st.x(i, p) = xhat[static_cast<std::size_t>(p)].real();
            st.xb(i, p) = xbhat[static_cast<std::size_t>(p)].real();
        }
    }
    st.xdh = diff_rows(st.x, pre.grid, Difference::horizontal);
    st.xdv = diff_rows(st.x, pre.grid, Difference::vertical);
}

void v1_update(SolverState& st, const Precomputation& pre) {
    if (static_cast<Eigen::Index>(pre.sample_mask.size()) != st.x.cols()) {
        throw GeometryError("sample mask does not match the pixel count");
    }
    // Unsampled pixels: the data term does not see them, so V1 = X B + A1.
    st.v1 = st.xb + st.a1;
    const auto count = static_cast<Eigen::Index>(pre.sampled.size());
    Matrix anchor(st.v1.rows(), count);
    for (Eigen::Index k = 0; k < count; ++k) anchor.col(k) = st.v1.col(pre.sampled[static_cast<std::size_t>(k)]);
    const Matrix solved = pre.inv1 * (pre.et_yh + pre.mu * anchor);
    for (Eigen::Index k = 0; k < count; ++k) st.v1.col(pre.sampled[static_cast<std::size_t>(k)]) = solved.col(k);
}

void v2_update(SolverState& st, const Precomputation& pre) {
    st.v2 = pre.inv2 * (pre.re_t_ym + pre.mu * (st.x + st.a2));
}

void v34_update(SolverState& st, const FusionParams& params) {
    st.v3 = st.xdh + st.a3;
    st.v4 = st.xdv + st.a4;
    // With lambda_phi = 0 the regularizer vanishes and its prox is the identity.
    if (params.lambda_phi > 0) vtv_prox_inplace(st.v3, st.v4, params.lambda_phi / params.mu);
}

void dual_update(SolverState& st) {
    st.a1 += st.xb - st.v1;
    st.a2 += st.x - st.v2;
    st.a3 += st.xdh - st.v3;
    st.a4 += st.xdv - st.v4;
    ++st.iter;
}

ConvergenceCheck check_convergence(const SolverState& st, const Precomputation& pre,
                                   const FusionParams& params) {
    const double elements = static_cast<double>(st.x.size());
    ConvergenceCheck c;
    c.primal_res = std::sqrt((st.xb - st.v1).squaredNorm() + (st.x - st.v2).squaredNorm() +
                             (st.xdh - st.v3).squaredNorm() + (st.xdv - st.v4).squaredNorm());
    const double ax = std::sqrt(st.xb.squaredNorm() + st.x.squaredNorm() + st.xdh.squaredNorm() +
                                st.xdv.squaredNorm());
    const double z = std::sqrt(st.v1.squaredNorm() + st.v2.squaredNorm() + st.v3.squaredNorm() +
                               st.v4.squaredNorm());
    c.primal_tol = params.eps_abs * std::sqrt(4.0 * elements) + params.eps_rel * std::max(ax, z);

    // A^T applied to a stacked (W1, W2, W3, W4): W1 B^T + W2 + W3 D_h^T + W4 D_v^T.
    const auto adjoint_sum = [&](const Matrix& w1, const Matrix& w2, const Matrix& w3, const Matrix& w4) {
        return Matrix(spectrum_apply_rows(w1, pre.spectrum_b, pre.fft, true) + w2 +
                      diff_adjoint_rows(w3, pre.grid, Difference::horizontal) +
                      diff_adjoint_rows(w4, pre.grid, Difference::vertical));
    };
    c.dual_res = params.mu * adjoint_sum(st.v1 - st.v1_prev, st.v2 - st.v2_prev, st.v3 - st.v3_prev,
                                         st.v4 - st.v4_prev)
                                 .norm();
    c.dual_tol = params.eps_abs * std::sqrt(elements) +
                 params.eps_rel * params.mu * adjoint_sum(st.a1, st.a2, st.a3, st.a4).norm();
    c.converged = c.primal_res <= c.primal_tol && c.dual_res <= c.dual_tol;
    return c;
}

Matrix initial_coefficients(const FusionInputs& in) {
    const Eigen::MatrixXd& e = in.basis.matrix();
    const Matrix projected = e * (e.transpose() * in.hsi.data());
    return e.transpose() * upsample_nearest_rows(projected, in.grid(), in.pattern.factor);
}

FusionResult fuse(const FusionInputs& in, const FusionParams& params, std::optional<Matrix> initial_x) {
    const Precomputation pre = precompute(in, params);
    SolverState st = SolverState::start(initial_x ? std::move(*initial_x) : initial_coefficients(in), pre);

    FusionResult result;
    result.history.reserve(static_cast<std::size_t>(params.max_iters));
    for (int k = 1; k <= params.max_iters; ++k) {
        x_update(st, pre);
        st.stash_previous();
        v1_update(st, pre);
        v2_update(st, pre);
        v34_update(st, params);
        dual_update(st);
        if (!st.all_finite()) {
            throw NumericalError("solver diverged: non-finite iterate at iteration " + std::to_string(k));
        }
        const ConvergenceCheck c = check_convergence(st, pre, params);
        result.history.push_back(
            {k, objective(st.x, in, params), c.primal_res, c.dual_res, c.primal_tol, c.dual_tol});
        result.iterations = k;
        if (c.converged) {
            result.converged = true;
            break;
        }
    }
    const Grid g = in.grid();
    result.fused = SpectralCube(Matrix(in.basis.matrix() * st.x), g.width, g.height);
    result.coefficients = SpectralCube(std::move(st.x), g.width, g.height);
    return result;
}

}  // namespace hsfusion
