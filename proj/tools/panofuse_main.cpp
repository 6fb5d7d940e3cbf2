// panofuse: spherical-panorama projection, padding, fusion and depth
// evaluation tool.
//
// Subcommands:
//   e2c        project an equirectangular image onto six cube faces
//   c2e        reassemble an equirectangular image from six cube faces
//   eval       depth metrics between a prediction and ground truth (16-bit PNG)
//   pad        apply circular/cube/spherical padding to a PNF1 tensor
//   fuse-demo  run a seeded single-stage fusion forward pass and report stats
//   lut        export a sampling grid as a PNF1 tensor
//
// Machine-readable output, where offered, follows a '---' line as key=value
// pairs. Every error path exits nonzero with a message on stderr.

#include <CLI11.hpp>

#include <chrono>
#include <cinttypes>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "panofuse/fusion.hpp"
#include "panofuse/image_io.hpp"
#include "panofuse/metrics.hpp"
#include "panofuse/padding.hpp"
#include "panofuse/resampler.hpp"
#include "panofuse/sphere.hpp"
#include "panofuse/tensor_io.hpp"

namespace fs = std::filesystem;
using namespace pnf;

namespace {

double now_ms() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double, std::milli>(clock::now().time_since_epoch()).count();
}

std::uint64_t fnv1a64(const std::vector<float>& data) {
    std::uint64_t h = 1469598103934665603ull;
    for (float f : data) {
        std::uint32_t bits;
        std::memcpy(&bits, &f, 4);
        for (int i = 0; i < 4; ++i) {
            h ^= (bits >> (8 * i)) & 0xffu;
            h *= 1099511628211ull;
        }
    }
    return h;
}

FeatureMap face_image(const CubeFeatureMap& cube, int f) {
    FeatureMap img(cube.channels, cube.side, cube.side);
    for (int c = 0; c < cube.channels; ++c) {
        const double* src = cube.face_channel(f, c);
        std::copy(src, src + static_cast<std::size_t>(cube.side) * cube.side, img.channel(c));
    }
    return img;
}

int cmd_e2c(const std::string& input, const std::string& outdir, int face_size) {
    const FeatureMap erp = read_rgb8(input);
    if (erp.width != 2 * erp.height)
        throw std::runtime_error("input must be a W = 2H equirectangular image, got " +
                                 std::to_string(erp.width) + "x" + std::to_string(erp.height));
    const int r = face_size > 0 ? face_size : erp.height / 2;
    const E2CGrid grid = build_e2c_grid(r, erp.height, erp.width);
    const double t0 = now_ms();
    const CubeFeatureMap cube = apply_e2c(erp, grid);
    const double t1 = now_ms();

    fs::create_directories(outdir);
    for (int f = 0; f < kNumFaces; ++f) {
        const std::string path =
            (fs::path(outdir) / (std::string(1, face_letter(kFaceOrder[f])) + ".png")).string();
        write_rgb8(path, face_image(cube, f));
    }
    std::ofstream manifest(fs::path(outdir) / "manifest.txt");
    manifest << "height=" << erp.height << "\nwidth=" << erp.width << "\nface_size=" << r
             << "\nface_order=B,D,F,L,R,U\n"
             << "pixel_convention=phi=2*pi*(j+0.5)/W, theta=pi/2-pi*(i+0.5)/H\n";
    std::printf("wrote 6 faces of %dx%d to %s (resample %.1f ms)\n", r, r, outdir.c_str(),
                t1 - t0);
    return 0;
}

int cmd_c2e(const std::vector<std::string>& paths, int height, const std::string& boundary) {
    if (paths.size() != 2 && paths.size() != 7)
        throw std::runtime_error("expected <face-dir> <out.png> or six face paths plus <out.png>");
    const std::string out = paths.back();
    std::vector<std::string> face_paths;
    if (paths.size() == 2) {
        for (FaceId f : kFaceOrder)
            face_paths.push_back(
                (fs::path(paths[0]) / (std::string(1, face_letter(f)) + ".png")).string());
    } else {
        face_paths.assign(paths.begin(), paths.end() - 1);
    }

    CubeFeatureMap cube;
    for (int f = 0; f < kNumFaces; ++f) {
        const FeatureMap img = read_rgb8(face_paths[f]);
        if (img.width != img.height)
            throw std::runtime_error("face '" + face_paths[f] + "' is not square");
        if (f == 0) {
            cube = CubeFeatureMap(img.channels, img.height);
        } else if (img.height != cube.side) {
            throw std::runtime_error("face sizes are inconsistent");
        }
        for (int c = 0; c < img.channels; ++c)
            std::copy(img.channel(c),
                      img.channel(c) + static_cast<std::size_t>(cube.side) * cube.side,
                      cube.face_channel(f, c));
    }

    const int h = height > 0 ? height : 2 * cube.side;
    const C2EGrid grid = build_c2e_grid(h, 2 * h, cube.side);
    const BoundaryMode mode =
        boundary == "clamp" ? BoundaryMode::kClampFace : BoundaryMode::kPaddedFace;
    const double t0 = now_ms();
    const FeatureMap erp = apply_c2e(cube, grid, mode);
    const double t1 = now_ms();
    write_rgb8(out, erp);
    std::printf("wrote %dx%d ERP to %s (apply_c2e %.1f ms, boundary=%s)\n", 2 * h, h,
                out.c_str(), t1 - t0, boundary.c_str());
    return 0;
}

int cmd_eval(const std::string& pred_path, const std::string& gt_path, double min_depth,
             double max_depth, int crop, const std::string& log_base, double scale) {
    const DepthMap pred = read_depth_png16(pred_path, scale);
    const DepthMap gt = read_depth_png16(gt_path, scale);
    const DepthEvalResult r = compute_metrics(pred, gt, min_depth, max_depth, crop);
    const double rmse_log = log_base == "e" ? r.rmse_loge : r.rmse_log10;

    std::printf("evaluated %lld pixels (crop=%d, depth in [%g, %g] m)\n", r.valid_pixel_count,
                crop, min_depth, max_depth);
    std::printf("  MAE      %.4f\n  AbsRel   %.4f\n  RMSE     %.4f\n  RMSElog  %.4f (log%s)\n",
                r.mae, r.abs_rel, r.rmse, rmse_log, log_base.c_str());
    std::printf("  delta1   %.4f\n  delta2   %.4f\n  delta3   %.4f\n", r.d1, r.d2, r.d3);
    if (r.nonpositive_pred_count > 0)
        std::printf("  warning: %lld nonpositive predictions excluded from log metrics\n",
                    r.nonpositive_pred_count);
    std::printf("---\n");
    std::printf("mae=%.10g\nabs_rel=%.10g\nrmse=%.10g\nrmse_log=%.10g\nrmse_log10=%.10g\n"
                "rmse_loge=%.10g\ndelta1=%.10g\ndelta2=%.10g\ndelta3=%.10g\n"
                "valid_pixels=%lld\nnonpositive_pred=%lld\n",
                r.mae, r.abs_rel, r.rmse, rmse_log, r.rmse_log10, r.rmse_loge, r.d1, r.d2, r.d3,
                r.valid_pixel_count, r.nonpositive_pred_count);
    return 0;
}

int cmd_pad(const std::string& input, const std::string& out, const std::string& mode, int pad) {
    const TensorContainer t = read_tensor(input);
    TensorContainer result;
    double t0 = 0.0, t1 = 0.0;
    if (mode == "circular") {
        if (t.dims.size() != 3)
            throw std::runtime_error("circular padding expects a rank-3 [C,H,W] tensor");
        const FeatureMap erp = feature_map_from_tensor(t);
        t0 = now_ms();
        const FeatureMap padded = circular_pad(erp, pad);
        t1 = now_ms();
        result = to_tensor(padded);
    } else {
        if (t.dims.size() != 4)
            throw std::runtime_error(mode + " padding expects a rank-4 [6,C,r,r] tensor");
        const CubeFeatureMap cube = cube_map_from_tensor(t);
        t0 = now_ms();
        const CubeFeatureMap padded =
            mode == "cube" ? cube_pad(cube, pad) : spherical_pad(cube, pad);
        t1 = now_ms();
        result = to_tensor(padded);
    }
    write_tensor(out, result);
    std::printf("%s pad p=%d: ", mode.c_str(), pad);
    for (std::size_t i = 0; i < result.dims.size(); ++i)
        std::printf("%s%u", i ? "x" : "", result.dims[i]);
    std::printf(" written to %s (%.1f ms)\n", out.c_str(), t1 - t0);
    return 0;
}

int cmd_fuse_demo(const std::string& module, int channels, int height, std::uint64_t seed,
                  bool report) {
    FusionVariant variant;
    if (module == "concat") variant = FusionVariant::kConcat;
    else if (module == "biproj") variant = FusionVariant::kBiProjection;
    else if (module == "cee") variant = FusionVariant::kCee;
    else throw std::runtime_error("unknown fusion module '" + module + "'");
    if (height < 2 || height % 2 != 0) throw std::runtime_error("height must be even and >= 2");

    const int width = 2 * height;
    const int side = height / 2;  // cubemap features enter at half the ERP height
    const C2EGrid grid = build_c2e_grid(height, width, side);
    const FeatureMap erp_feat = random_feature_map(channels, height, width, seed);
    const CubeFeatureMap cube_feat = random_cube_map(channels, side, seed + 1);
    const FusionParams params = make_fusion_params(variant, channels, seed + 2);

    FeatureMap fused;
    CeeTrace trace;
    if (variant == FusionVariant::kCee) {
        const FeatureMap f_c2e = apply_c2e(cube_feat, grid, BoundaryMode::kPaddedFace);
        fused = cee_fuse(erp_feat, f_c2e, params, &trace);
    } else {
        fused = skip_fusion_demo(erp_feat, cube_feat, grid, params);
    }

    const ParamCount count = param_count(params);
    double mn = fused.data[0], mx = fused.data[0], mean = 0.0;
    for (double v : fused.data) {
        mn = std::min(mn, v);
        mx = std::max(mx, v);
        mean += v;
    }
    mean /= static_cast<double>(fused.data.size());
    const std::uint64_t checksum = fnv1a64(to_tensor(fused).data);

    std::printf("%s fusion: C=%d, ERP %dx%d, cube side %d\n", module.c_str(), channels, width,
                height, side);
    std::printf("  parameters: %lld weights + %lld biases = %lld\n", count.weights, count.biases,
                count.total());
    std::printf("  output %dx%dx%d: min %.6f, max %.6f, mean %.6f\n", fused.channels,
                fused.height, fused.width, mn, mx, mean);
    std::printf("  checksum %016" PRIx64 "\n", checksum);
    double gmin = 0.0, gmax = 0.0;
    if (!trace.gates.empty()) {
        gmin = gmax = trace.gates[0];
        for (double g : trace.gates) {
            gmin = std::min(gmin, g);
            gmax = std::max(gmax, g);
        }
        std::printf("  se gates in [%.6f, %.6f]\n", gmin, gmax);
    }
    if (report) {
        std::printf("---\nmodule=%s\nchannels=%d\nweights=%lld\nbiases=%lld\ntotal_params=%lld\n"
                    "checksum=%016" PRIx64 "\nout_min=%.10g\nout_max=%.10g\nout_mean=%.10g\n",
                    module.c_str(), channels, count.weights, count.biases, count.total(),
                    checksum, mn, mx, mean);
        if (!trace.gates.empty())
            std::printf("gate_min=%.10g\ngate_max=%.10g\n", gmin, gmax);
    }
    return 0;
}

int cmd_lut(const std::string& type, int height, int face_size, int k, const std::string& out) {
    TensorContainer t;
    if (type == "c2e") {
        if (height < 1) throw std::runtime_error("--height is required for c2e");
        const int r = face_size > 0 ? face_size : height / 2;
        t = to_tensor(build_c2e_grid(height, 2 * height, r));
    } else if (type == "e2c") {
        if (height < 1 || face_size < 1)
            throw std::runtime_error("--height and --face-size are required for e2c");
        t = to_tensor(build_e2c_grid(face_size, height, 2 * height));
    } else {
        if (height < 1) throw std::runtime_error("--height is required for tangent");
        t = to_tensor(build_tangent_grid(height, 2 * height, k));
    }
    write_tensor(out, t);
    std::printf("%s grid ", type.c_str());
    for (std::size_t i = 0; i < t.dims.size(); ++i) std::printf("%s%u", i ? "x" : "", t.dims[i]);
    std::printf(" written to %s\n", out.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"spherical panorama projection, padding, fusion and depth evaluation"};
    app.require_subcommand(1);

    std::string e2c_input, e2c_outdir;
    int e2c_face_size = 0;
    auto* e2c = app.add_subcommand("e2c", "equirectangular image to six cube faces");
    e2c->add_option("input", e2c_input, "W = 2H RGB image")->required();
    e2c->add_option("outdir", e2c_outdir, "output directory")->required();
    e2c->add_option("--face-size", e2c_face_size, "face side in pixels (default H/2)");

    std::vector<std::string> c2e_paths;
    int c2e_height = 0;
    std::string c2e_boundary = "padded";
    auto* c2e = app.add_subcommand("c2e", "six cube faces to an equirectangular image");
    c2e->add_option("paths", c2e_paths, "<face-dir> <out.png> or 6 face paths + <out.png>")
        ->required();
    c2e->add_option("--height", c2e_height, "ERP height (default 2r)");
    c2e->add_option("--boundary", c2e_boundary, "clamp|padded (default padded)")
        ->check(CLI::IsMember({"clamp", "padded"}));

    std::string eval_pred, eval_gt, eval_log_base = "10";
    double eval_min = 0.1, eval_max = 10.0, eval_scale = kDefaultDepthScale;
    int eval_crop = 0;
    auto* eval = app.add_subcommand("eval", "depth metrics between 16-bit PNG depth maps");
    eval->add_option("pred", eval_pred, "predicted depth PNG")->required();
    eval->add_option("gt", eval_gt, "ground truth depth PNG")->required();
    eval->add_option("--min-depth", eval_min, "minimum evaluated depth in meters");
    eval->add_option("--max-depth", eval_max, "maximum evaluated depth in meters");
    eval->add_option("--crop", eval_crop, "rows excluded at top and bottom");
    eval->add_option("--log-base", eval_log_base, "10|e for RMSElog")
        ->check(CLI::IsMember({"10", "e"}));
    eval->add_option("--scale", eval_scale, "meters per raw unit (default 1/4000)");

    std::string pad_input, pad_out, pad_mode;
    int pad_p = 1;
    auto* pad = app.add_subcommand("pad", "pad a PNF1 tensor");
    pad->add_option("input", pad_input, "input tensor")->required();
    pad->add_option("out", pad_out, "output tensor")->required();
    pad->add_option("--mode", pad_mode, "circular|cube|spherical")
        ->required()
        ->check(CLI::IsMember({"circular", "cube", "spherical"}));
    pad->add_option("--pad", pad_p, "padding width in pixels");

    std::string fd_module;
    int fd_channels = 64, fd_height = 64;
    std::uint64_t fd_seed = 0;
    bool fd_report = false;
    auto* fd = app.add_subcommand("fuse-demo", "seeded fusion forward pass");
    fd->add_option("--module", fd_module, "concat|biproj|cee")
        ->required()
        ->check(CLI::IsMember({"concat", "biproj", "cee"}));
    fd->add_option("--channels", fd_channels, "branch channel count");
    fd->add_option("--height", fd_height, "ERP feature height (width is 2H)");
    fd->add_option("--seed", fd_seed, "RNG seed");
    fd->add_flag("--report", fd_report, "append machine-readable key=value report");

    std::string lut_type, lut_out;
    int lut_height = 0, lut_face_size = 0, lut_k = 3;
    auto* lut = app.add_subcommand("lut", "export a sampling grid tensor");
    lut->add_option("--type", lut_type, "c2e|e2c|tangent")
        ->required()
        ->check(CLI::IsMember({"c2e", "e2c", "tangent"}));
    lut->add_option("--height", lut_height, "ERP height (width is 2H)");
    lut->add_option("--face-size", lut_face_size, "cube face side");
    lut->add_option("--k", lut_k, "tangent stencil size (odd, >= 3)");
    lut->add_option("out", lut_out, "output tensor path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (e2c->parsed()) return cmd_e2c(e2c_input, e2c_outdir, e2c_face_size);
        if (c2e->parsed()) return cmd_c2e(c2e_paths, c2e_height, c2e_boundary);
        if (eval->parsed())
            return cmd_eval(eval_pred, eval_gt, eval_min, eval_max, eval_crop, eval_log_base,
                            eval_scale);
        if (pad->parsed()) return cmd_pad(pad_input, pad_out, pad_mode, pad_p);
        if (fd->parsed())
            return cmd_fuse_demo(fd_module, fd_channels, fd_height, fd_seed, fd_report);
        if (lut->parsed()) return cmd_lut(lut_type, lut_height, lut_face_size, lut_k, lut_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
