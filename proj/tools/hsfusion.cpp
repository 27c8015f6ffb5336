// hsfusion command-line front end: synth, simulate, calibrate, fuse, evaluate.
//
// stdout carries a single JSON document per run (provenance or report);
// progress messages go to stderr. Exit codes: 0 success, 2 usage error,
// 3 data or geometry error, 4 numerical failure.

#include "hsfusion/calibration.hpp"
#include "hsfusion/error.hpp"
#include "hsfusion/io.hpp"
#include "hsfusion/metrics.hpp"
#include "hsfusion/salsa.hpp"
#include "hsfusion/subspace.hpp"
#include "hsfusion/synthesis.hpp"

#include <CLI11.hpp>
#include <json.hpp>
#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace hsfusion;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitNumerical = 4;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

void log(const std::string& msg) { std::cerr << "[hsfusion] " << msg << '\n'; }

fs::path output_path(const std::string& prefix, const std::string& name) {
    fs::path p(prefix + name);
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    return p;
}

// Accepts decimal numbers plus "inf" for a noiseless channel.
double parse_snr(const std::string& text) {
    if (text == "inf" || text == "+inf" || text == "Inf") return std::numeric_limits<double>::infinity();
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        throw UsageError("invalid SNR value '" + text + "'");
    }
    if (used != text.size()) throw UsageError("invalid SNR value '" + text + "'");
    return v;
}

json snr_json(double v) { return std::isinf(v) ? json("inf") : json(v); }

std::vector<int> parse_band_list(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        std::size_t used = 0;
        int v = 0;
        try {
            v = std::stoi(item, &used);
        } catch (const std::exception&) {
            throw UsageError("invalid band index '" + item + "'");
        }
        if (used != item.size()) throw UsageError("invalid band index '" + item + "'");
        out.push_back(v);
    }
    return out;
}

void write_history_csv(const std::vector<IterationRecord>& history, const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << "iteration,objective,primal_res,dual_res\n" << std::setprecision(17);
    for (const IterationRecord& r : history) {
        out << r.iteration << ',' << r.objective << ',' << r.primal_res << ',' << r.dual_res << '\n';
    }
    if (!out) throw IoError("failed writing " + path.string());
}

void write_values_csv(const std::string& header, const std::vector<double>& values, const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << header << '\n' << std::setprecision(17);
    for (std::size_t i = 0; i < values.size(); ++i) out << i << ',' << values[i] << '\n';
    if (!out) throw IoError("failed writing " + path.string());
}

int g_threads = 0;

void emit(json doc) {
    doc["threads"] = g_threads;
    std::cout << doc.dump(2) << std::endl;
}

struct PatternArgs {
    int factor = 4;
    int offset_x = 0;
    int offset_y = 0;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--factor", factor, "Subsampling factor d")->capture_default_str();
        cmd->add_option("--offset-x", offset_x, "Horizontal sampling phase")->capture_default_str();
        cmd->add_option("--offset-y", offset_y, "Vertical sampling phase")->capture_default_str();
    }
    SubsamplingPattern pattern() const { return SubsamplingPattern{factor, offset_x, offset_y}; }
    json to_json() const { return {{"factor", factor}, {"offset_x", offset_x}, {"offset_y", offset_y}}; }
};

// ---------------------------------------------------------------- synth

struct SynthArgs {
    int bands = 30;
    int s = 5;
    int width = 64;
    int height = 64;
    int msi_bands = 4;
    std::uint64_t seed = 0;
    std::string out_prefix = "synth_";
};

int run_synth(const SynthArgs& a) {
    const SpectralCube truth = make_synthetic_truth(a.bands, a.s, a.width, a.height, a.seed);
    const SpectralResponse response = make_synthetic_response(a.msi_bands, a.bands, a.seed);
    const fs::path truth_path = output_path(a.out_prefix, "truth.json");
    const fs::path kernel_path = output_path(a.out_prefix, "kernel.csv");
    const fs::path response_path = output_path(a.out_prefix, "response.csv");
    cube_write(truth, truth_path);
    write_kernel(starck_murtagh_kernel(), kernel_path);
    write_response(response, response_path);
    log("wrote synthetic truth " + std::to_string(a.bands) + " bands " + std::to_string(a.width) + "x" +
        std::to_string(a.height));
    emit({{"command", "synth"},
          {"bands", a.bands},
          {"s", a.s},
          {"width", a.width},
          {"height", a.height},
          {"msi_bands", a.msi_bands},
          {"seed", a.seed},
          {"outputs", {{"truth", truth_path.string()}, {"kernel", kernel_path.string()},
                       {"response", response_path.string()}}}});
    return 0;
}

// ------------------------------------------------------------- simulate

struct SimulateArgs {
    std::string truth, kernel, response, config;
    PatternArgs pattern;
    std::string snr_h = "30";
    std::string snr_m = "40";
    std::uint64_t seed = 0;
    std::string out_prefix = "sim_";
    CLI::App* cmd = nullptr;
};

int run_simulate(SimulateArgs a) {
    double snr_h = parse_snr(a.snr_h);
    double snr_m = parse_snr(a.snr_m);
    if (!a.config.empty()) {
        std::ifstream in(a.config);
        if (!in) throw IoError("cannot open config " + a.config);
        json cfg;
        try {
            cfg = json::parse(in);
        } catch (const json::exception& e) {
            throw IoError("malformed config " + a.config + ": " + e.what());
        }
        const auto unset = [&](const char* flag) { return a.cmd->count(flag) == 0; };
        const auto snr_of = [](const json& v) {
            return v.is_string() ? parse_snr(v.get<std::string>()) : v.get<double>();
        };
        try {
            if (cfg.contains("factor") && unset("--factor")) a.pattern.factor = cfg["factor"].get<int>();
            if (cfg.contains("offset_x") && unset("--offset-x")) a.pattern.offset_x = cfg["offset_x"].get<int>();
            if (cfg.contains("offset_y") && unset("--offset-y")) a.pattern.offset_y = cfg["offset_y"].get<int>();
            if (cfg.contains("snr_h_db") && unset("--snr-h")) snr_h = snr_of(cfg["snr_h_db"]);
            if (cfg.contains("snr_m_db") && unset("--snr-m")) snr_m = snr_of(cfg["snr_m_db"]);
            if (cfg.contains("seed") && unset("--seed")) a.seed = cfg["seed"].get<std::uint64_t>();
        } catch (const json::exception& e) {
            throw IoError("bad value in config " + a.config + ": " + e.what());
        }
    }

    const SpectralCube truth = cube_read(a.truth);
    const ConvolutionKernel kernel = read_kernel(a.kernel);
    const SpectralResponse response = read_response(a.response);
    const ObservationPair pair =
        simulate_pair(truth, kernel, a.pattern.pattern(), response, snr_h, snr_m, a.seed);

    const fs::path hsi_path = output_path(a.out_prefix, "hsi.json");
    const fs::path msi_path = output_path(a.out_prefix, "msi.json");
    cube_write(pair.hsi, hsi_path);
    cube_write(pair.msi, msi_path);
    log("simulated HSI " + std::to_string(pair.hsi.width()) + "x" + std::to_string(pair.hsi.height()) +
        " and MSI " + std::to_string(pair.msi.width()) + "x" + std::to_string(pair.msi.height()));
    json doc = {{"command", "simulate"},
                {"truth", a.truth},
                {"kernel", a.kernel},
                {"response", a.response},
                {"snr_h_db", snr_json(snr_h)},
                {"snr_m_db", snr_json(snr_m)},
                {"seed", a.seed},
                {"outputs", {{"hsi", hsi_path.string()}, {"msi", msi_path.string()}}}};
    doc.update(a.pattern.to_json());
    emit(doc);
    return 0;
}

// ------------------------------------------------------------ calibrate

struct CalibrateArgs {
    std::string hsi, msi;
    PatternArgs pattern;
    int kernel_support = 5;
    std::optional<double> ridge_r;
    double smooth_b = 1e-3;
    int max_alt_iters = 500;
    double rel_tol = 1e-6;
    std::string out_prefix = "calib_";
};

CalibrationOptions calibration_options(const CalibrateArgs& a) {
    CalibrationOptions o;
    o.kernel_support = a.kernel_support;
    o.ridge_r = a.ridge_r;
    o.smooth_b = a.smooth_b;
    o.max_alt_iters = a.max_alt_iters;
    o.rel_tol = a.rel_tol;
    return o;
}

json calibration_json(const CalibrateArgs& a, const CalibrationResult& r) {
    return {{"kernel_support", a.kernel_support},
            {"ridge_r", r.ridge_r},
            {"smooth_b", a.smooth_b},
            {"max_alt_iters", a.max_alt_iters},
            {"rel_tol", a.rel_tol},
            {"alternations", r.alternations},
            {"final_objective", r.residual_history.back()}};
}

int run_calibrate(const CalibrateArgs& a) {
    const SpectralCube hsi = cube_read(a.hsi);
    const SpectralCube msi = cube_read(a.msi);
    const CalibrationResult r = calibrate(hsi, msi, a.pattern.pattern(), calibration_options(a));
    const fs::path kernel_path = output_path(a.out_prefix, "kernel.csv");
    const fs::path response_path = output_path(a.out_prefix, "response.csv");
    const fs::path history_path = output_path(a.out_prefix, "history.csv");
    write_kernel(r.kernel, kernel_path);
    write_response(r.response, response_path);
    write_values_csv("step,objective", r.residual_history, history_path);
    log("calibration finished after " + std::to_string(r.alternations) + " alternations");
    json doc = {{"command", "calibrate"}, {"hsi", a.hsi}, {"msi", a.msi}};
    doc.update(a.pattern.to_json());
    doc.update(calibration_json(a, r));
    doc["outputs"] = {{"kernel", kernel_path.string()},
                      {"response", response_path.string()},
                      {"history", history_path.string()}};
    emit(doc);
    return 0;
}

// ----------------------------------------------------------------- fuse

struct FuseArgs {
    std::string hsi, msi, kernel, response;
    PatternArgs pattern;
    int s = 10;
    double lambda_m = 1.0;
    std::optional<double> lambda_phi;
    double mu = FusionParams{}.mu;
    int max_iters = 200;
    double eps_abs = 1e-4;
    double eps_rel = 1e-4;
    std::uint64_t seed = 0;
    std::string exclude_bands;
    bool calibrate = false;
    CalibrateArgs calib;
    std::string out_prefix = "fused_";
};

int run_fuse(const FuseArgs& a) {
    if (!a.calibrate && a.response.empty()) throw UsageError("--response is required unless --calibrate is given");
    if (!a.calibrate && a.kernel.empty()) throw UsageError("--kernel is required unless --calibrate is given");

    const std::vector<int> excluded = parse_band_list(a.exclude_bands);
    const SpectralCube hsi_all = cube_read(a.hsi);
    const SpectralCube msi = cube_read(a.msi);
    const SpectralCube hsi = exclude_bands(hsi_all, excluded);
    const SubsamplingPattern pattern = a.pattern.pattern();
    if (!excluded.empty()) {
        log("excluded " + std::to_string(excluded.size()) + " bands, " + std::to_string(hsi.bands()) + " remain");
    }

    json doc = {{"command", "fuse"}, {"hsi", a.hsi}, {"msi", a.msi}};
    doc.update(a.pattern.to_json());

    ConvolutionKernel kernel = ConvolutionKernel::delta();
    SpectralResponse response = SpectralResponse::identity(1);
    json outputs;
    if (a.calibrate) {
        log("estimating kernel and response from the data");
        const CalibrationResult r = calibrate(hsi, msi, pattern, calibration_options(a.calib));
        kernel = r.kernel;
        response = r.response;
        const fs::path kernel_path = output_path(a.out_prefix, "kernel.csv");
        const fs::path response_path = output_path(a.out_prefix, "response.csv");
        write_kernel(kernel, kernel_path);
        write_response(response, response_path);
        outputs["kernel"] = kernel_path.string();
        outputs["response"] = response_path.string();
        doc["calibration"] = calibration_json(a.calib, r);
    } else {
        kernel = read_kernel(a.kernel);
        response = read_response(a.response);
        doc["kernel"] = a.kernel;
        doc["response"] = a.response;
        // A response covering every original band loses the excluded columns.
        if (!excluded.empty() && response.hsi_bands() == hsi_all.bands()) {
            std::vector<int> keep;
            for (int l = 0; l < hsi_all.bands(); ++l) {
                if (std::find(excluded.begin(), excluded.end(), l) == excluded.end()) keep.push_back(l);
            }
            Matrix cols(response.msi_bands(), static_cast<Eigen::Index>(keep.size()));
            for (std::size_t j = 0; j < keep.size(); ++j) cols.col(j) = response.matrix().col(keep[j]);
            response = SpectralResponse(std::move(cols));
        }
    }

    if (a.s < 1 || a.s > hsi.bands()) {
        throw InvalidArgument("--s must lie in [1, " + std::to_string(hsi.bands()) + "], got " +
                              std::to_string(a.s));
    }
    const SubspaceEstimate sub = estimate_subspace(hsi, a.s);
    const SpectralCube denoised = project_denoise(hsi, sub.basis);

    FusionParams params;
    params.lambda_m = a.lambda_m;
    params.lambda_phi = a.lambda_phi.value_or(msi.bands() == 1 ? 1e-2 : 5e-4);
    params.mu = a.mu;
    params.max_iters = a.max_iters;
    params.eps_abs = a.eps_abs;
    params.eps_rel = a.eps_rel;

    const FusionInputs inputs{denoised, msi, sub.basis, kernel, pattern, response};
    log("fusing " + std::to_string(hsi.bands()) + " bands with s = " + std::to_string(a.s));
    const auto t0 = std::chrono::steady_clock::now();
    const FusionResult r = fuse(inputs, params);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    log("solver " + std::string(r.converged ? "converged" : "stopped") + " after " +
        std::to_string(r.iterations) + " iterations");

    const fs::path fused_path = output_path(a.out_prefix, "fused.json");
    const fs::path diag_path = output_path(a.out_prefix, "diagnostics.csv");
    const fs::path basis_path = output_path(a.out_prefix, "basis.json");
    cube_write(r.fused, fused_path);
    write_history_csv(r.history, diag_path);
    write_basis(sub.basis, basis_path);
    outputs["fused"] = fused_path.string();
    outputs["diagnostics"] = diag_path.string();
    outputs["basis"] = basis_path.string();

    doc["s"] = a.s;
    doc["lambda_m"] = params.lambda_m;
    doc["lambda_phi"] = params.lambda_phi;
    doc["mu"] = params.mu;
    doc["max_iters"] = params.max_iters;
    doc["eps_abs"] = params.eps_abs;
    doc["eps_rel"] = params.eps_rel;
    doc["seed"] = a.seed;
    doc["exclude_bands"] = excluded;
    doc["calibrate"] = a.calibrate;
    doc["iterations"] = r.iterations;
    doc["converged"] = r.converged;
    if (!r.history.empty()) {
        doc["final_objective"] = r.history.back().objective;
        doc["final_primal_res"] = r.history.back().primal_res;
        doc["final_dual_res"] = r.history.back().dual_res;
    }
    doc["seconds"] = seconds;
    doc["outputs"] = outputs;
    emit(doc);
    return 0;
}

// ------------------------------------------------------------- evaluate

struct EvaluateArgs {
    std::string estimate, reference, hsi, msi, kernel;
    PatternArgs pattern;
    std::optional<double> ratio;
    int window = 32;
    std::string out_prefix = "eval_";
};

int run_evaluate(const EvaluateArgs& a) {
    const bool observed = !a.hsi.empty() || !a.msi.empty();
    if (a.reference.empty() && !observed) {
        throw UsageError("evaluate needs --reference, or --hsi, --msi and --kernel for QNR");
    }
    const SpectralCube est = cube_read(a.estimate);
    json doc = {{"command", "evaluate"}, {"estimate", a.estimate}, {"window", a.window}};
    if (!a.reference.empty()) {
        const SpectralCube ref = cube_read(a.reference);
        const double ratio = a.ratio.value_or(1.0 / a.pattern.factor);
        const SamResult angle = sam(est, ref);
        const std::vector<double> rmse = per_band_rmse(est, ref);
        const fs::path rmse_path = output_path(a.out_prefix, "per_band_rmse.csv");
        write_values_csv("band,relative_rmse", rmse, rmse_path);
        doc["reference"] = a.reference;
        doc["resolution_ratio"] = ratio;
        doc["ergas"] = ergas(est, ref, ratio);
        doc["sam_deg"] = angle.degrees;
        doc["sam_skipped_pixels"] = angle.skipped;
        doc["uiqi"] = uiqi(est, ref, a.window);
        doc["per_band_rmse_csv_path"] = rmse_path.string();
    }
    if (observed) {
        if (a.hsi.empty() || a.msi.empty() || a.kernel.empty()) {
            throw UsageError("QNR needs --hsi, --msi and --kernel together");
        }
        const QnrResult q = qnr(est, cube_read(a.msi), cube_read(a.hsi), read_kernel(a.kernel),
                                a.pattern.pattern(), a.window);
        doc["hsi"] = a.hsi;
        doc["msi"] = a.msi;
        doc["kernel"] = a.kernel;
        doc.update(a.pattern.to_json());
        doc["qnr"] = {{"d_lambda", q.d_lambda}, {"d_s", q.d_s}, {"qnr", q.qnr}};
    }
    emit(doc);
    return 0;
}

int guarded(const std::function<int()>& body) {
    try {
        return body();
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const InvalidArgument& e) {
        std::cerr << "invalid argument: " << e.what() << '\n';
        return kExitUsage;
    } catch (const GeometryError& e) {
        std::cerr << "geometry error: " << e.what() << '\n';
        return kExitData;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return kExitData;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return kExitData;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hyperspectral and multispectral image fusion"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--threads", g_threads, "Worker threads for data-parallel loops (0 = all cores)")
        ->check(CLI::NonNegativeNumber);

    SynthArgs synth;
    CLI::App* synth_cmd = app.add_subcommand("synth", "Write a synthetic truth cube, kernel and response");
    synth_cmd->add_option("--bands", synth.bands, "Hyperspectral bands L_h")->capture_default_str();
    synth_cmd->add_option("--s", synth.s, "Spectral rank of the scene")->capture_default_str();
    synth_cmd->add_option("--width", synth.width)->capture_default_str();
    synth_cmd->add_option("--height", synth.height)->capture_default_str();
    synth_cmd->add_option("--msi-bands", synth.msi_bands, "Rows of the synthetic response")->capture_default_str();
    synth_cmd->add_option("--seed", synth.seed)->capture_default_str();
    synth_cmd->add_option("--out-prefix", synth.out_prefix)->capture_default_str();

    SimulateArgs sim;
    CLI::App* sim_cmd = app.add_subcommand("simulate", "Degrade a truth cube into an HSI/MSI pair");
    sim.cmd = sim_cmd;
    sim_cmd->add_option("--truth", sim.truth, "Truth cube header")->required();
    sim_cmd->add_option("--kernel", sim.kernel, "Blur kernel CSV")->required();
    sim_cmd->add_option("--response", sim.response, "Spectral response CSV")->required();
    sim_cmd->add_option("--config", sim.config, "JSON {factor, offset_x, offset_y, snr_h_db, snr_m_db, seed}");
    sim.pattern.add_to(sim_cmd);
    sim_cmd->add_option("--snr-h", sim.snr_h, "HSI SNR in dB or inf")->capture_default_str();
    sim_cmd->add_option("--snr-m", sim.snr_m, "MSI SNR in dB or inf")->capture_default_str();
    sim_cmd->add_option("--seed", sim.seed)->capture_default_str();
    sim_cmd->add_option("--out-prefix", sim.out_prefix)->capture_default_str();

    const auto add_calibration_flags = [](CLI::App* cmd, CalibrateArgs& c) {
        cmd->add_option("--kernel-support", c.kernel_support, "Odd kernel size k")->capture_default_str();
        cmd->add_option("--ridge-r", c.ridge_r, "Ridge on R (default 1e-6 |Y_h|^2)");
        cmd->add_option("--smooth-b", c.smooth_b, "Kernel smoothness weight")->capture_default_str();
        cmd->add_option("--max-alt-iters", c.max_alt_iters)->capture_default_str();
        cmd->add_option("--rel-tol", c.rel_tol, "Relative decrease stopping threshold")->capture_default_str();
    };

    CalibrateArgs calib;
    CLI::App* calib_cmd = app.add_subcommand("calibrate", "Estimate blur kernel and spectral response");
    calib_cmd->add_option("--hsi", calib.hsi)->required();
    calib_cmd->add_option("--msi", calib.msi)->required();
    calib.pattern.add_to(calib_cmd);
    add_calibration_flags(calib_cmd, calib);
    calib_cmd->add_option("--out-prefix", calib.out_prefix)->capture_default_str();

    FuseArgs fz;
    CLI::App* fuse_cmd = app.add_subcommand("fuse", "Fuse an HSI with an MSI");
    fuse_cmd->add_option("--hsi", fz.hsi)->required();
    fuse_cmd->add_option("--msi", fz.msi)->required();
    fuse_cmd->add_option("--kernel", fz.kernel, "Blur kernel CSV");
    fuse_cmd->add_option("--response", fz.response, "Spectral response CSV");
    fz.pattern.add_to(fuse_cmd);
    fuse_cmd->add_option("--s", fz.s, "Subspace dimension")->capture_default_str();
    fuse_cmd->add_option("--lambda-m", fz.lambda_m)->capture_default_str();
    fuse_cmd->add_option("--lambda-phi", fz.lambda_phi, "Default 5e-4, or 1e-2 for a single MSI band");
    fuse_cmd->add_option("--mu", fz.mu, "ADMM penalty")->capture_default_str();
    fuse_cmd->add_option("--max-iters", fz.max_iters)->capture_default_str();
    fuse_cmd->add_option("--eps-abs", fz.eps_abs)->capture_default_str();
    fuse_cmd->add_option("--eps-rel", fz.eps_rel)->capture_default_str();
    fuse_cmd->add_option("--seed", fz.seed, "Recorded for provenance; the solver is deterministic")
        ->capture_default_str();
    fuse_cmd->add_option("--exclude-bands", fz.exclude_bands, "Comma-separated HSI band indices to drop");
    fuse_cmd->add_flag("--calibrate", fz.calibrate, "Estimate kernel and response from the data");
    add_calibration_flags(fuse_cmd, fz.calib);
    fuse_cmd->add_option("--out-prefix", fz.out_prefix)->capture_default_str();

    EvaluateArgs ev;
    CLI::App* eval_cmd = app.add_subcommand("evaluate", "Quality metrics for a fused cube");
    eval_cmd->add_option("--estimate", ev.estimate, "Cube to evaluate")->required();
    eval_cmd->add_option("--reference", ev.reference, "Ground truth cube");
    eval_cmd->add_option("--hsi", ev.hsi, "Observed HSI (for QNR)");
    eval_cmd->add_option("--msi", ev.msi, "Observed MSI (for QNR)");
    eval_cmd->add_option("--kernel", ev.kernel, "Blur kernel CSV (for QNR)");
    ev.pattern.add_to(eval_cmd);
    eval_cmd->add_option("--ratio", ev.ratio, "ERGAS resolution ratio (default 1/factor)");
    eval_cmd->add_option("--window", ev.window, "UIQI window")->capture_default_str();
    eval_cmd->add_option("--out-prefix", ev.out_prefix)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    if (g_threads > 0) omp_set_num_threads(g_threads);

    if (*synth_cmd) return guarded([&] { return run_synth(synth); });
    if (*sim_cmd) return guarded([&] { return run_simulate(sim); });
    if (*calib_cmd) return guarded([&] { return run_calibrate(calib); });
    if (*fuse_cmd) return guarded([&] { return run_fuse(fz); });
    return guarded([&] { return run_evaluate(ev); });
}
