#include "panofuse/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace pnf {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

void relu_inplace(FeatureMap& x) {
    for (double& v : x.data)
        if (v < 0.0) v = 0.0;
}

void check_pair(const FeatureMap& f_equi, const FeatureMap& f_c2e, const FusionParams& params) {
    if (!f_equi.same_shape(f_c2e))
        throw std::invalid_argument("fusion inputs must share C x H x W shape");
    if (f_equi.channels != params.channels)
        throw std::invalid_argument("fusion inputs have " + std::to_string(f_equi.channels) +
                                    " channels, params expect " + std::to_string(params.channels));
}

// Raw-draw uniform in [0, 1): independent of std::distribution internals so
// a seed reproduces identical parameters on every platform.
class UniformSource {
public:
    explicit UniformSource(std::uint64_t seed) : gen_(static_cast<std::uint32_t>(seed)) {}
    double next() { return gen_() * (1.0 / 4294967296.0); }
    double symmetric(double scale) { return (2.0 * next() - 1.0) * scale; }

private:
    std::mt19937 gen_;
};

ConvLayer make_conv(int in_c, int out_c, int kernel, bool with_bias, UniformSource& rng) {
    ConvLayer layer;
    layer.in_channels = in_c;
    layer.out_channels = out_c;
    layer.kernel = kernel;
    layer.padding = (kernel - 1) / 2;
    const std::size_t n = static_cast<std::size_t>(out_c) * in_c * kernel * kernel;
    const double scale = 1.0 / std::sqrt(static_cast<double>(in_c) * kernel * kernel);
    layer.weights.resize(n);
    for (double& w : layer.weights) w = rng.symmetric(scale);
    if (with_bias) {
        layer.bias.resize(out_c);
        for (double& b : layer.bias) b = rng.symmetric(scale);
    }
    return layer;
}

SEBlock make_se(int channels, UniformSource& rng) {
    if (channels % 16 != 0)
        throw std::invalid_argument("SEBlock: reduction 16 must divide the channel count");
    SEBlock se;
    se.channels = channels;
    se.reduction = 16;
    const int mid = channels / 16;
    const double s1 = 1.0 / std::sqrt(static_cast<double>(channels));
    const double s2 = 1.0 / std::sqrt(static_cast<double>(mid));
    se.w1.resize(static_cast<std::size_t>(mid) * channels);
    se.b1.resize(mid);
    se.w2.resize(static_cast<std::size_t>(channels) * mid);
    se.b2.resize(channels);
    for (double& w : se.w1) w = rng.symmetric(s1);
    for (double& b : se.b1) b = rng.symmetric(s1);
    for (double& w : se.w2) w = rng.symmetric(s2);
    for (double& b : se.b2) b = rng.symmetric(s2);
    return se;
}

}  // namespace

FeatureMap concat_channels(const FeatureMap& a, const FeatureMap& b) {
    if (a.height != b.height || a.width != b.width)
        throw std::invalid_argument("concat_channels: spatial dims differ");
    FeatureMap out(a.channels + b.channels, a.height, a.width);
    std::copy(a.data.begin(), a.data.end(), out.data.begin());
    std::copy(b.data.begin(), b.data.end(), out.data.begin() + a.data.size());
    return out;
}

FeatureMap conv2d(const FeatureMap& x, const ConvLayer& layer) {
    if (x.channels != layer.in_channels)
        throw std::invalid_argument("conv2d: input has " + std::to_string(x.channels) +
                                    " channels, layer expects " +
                                    std::to_string(layer.in_channels));
    const int k = layer.kernel;
    if (x.height < k || x.width < k)
        throw std::invalid_argument("conv2d: spatial dims smaller than kernel");
    if (layer.weights.size() !=
        static_cast<std::size_t>(layer.out_channels) * layer.in_channels * k * k)
        throw std::invalid_argument("conv2d: weight array size mismatch");
    if (!layer.bias.empty() && layer.bias.size() != static_cast<std::size_t>(layer.out_channels))
        throw std::invalid_argument("conv2d: bias array size mismatch");

    const int pad = layer.padding;
    const int oh = x.height + 2 * pad - k + 1;
    const int ow = x.width + 2 * pad - k + 1;
    if (oh < 1 || ow < 1) throw std::invalid_argument("conv2d: empty output");

    FeatureMap out(layer.out_channels, oh, ow);
    for (int o = 0; o < layer.out_channels; ++o) {
        double* dst = out.channel(o);
        if (!layer.bias.empty())
            std::fill(dst, dst + static_cast<std::size_t>(oh) * ow, layer.bias[o]);
        for (int ci = 0; ci < x.channels; ++ci) {
            const double* src = x.channel(ci);
            const double* wk =
                layer.weights.data() + (static_cast<std::size_t>(o) * x.channels + ci) * k * k;
            for (int ky = 0; ky < k; ++ky) {
                for (int kx = 0; kx < k; ++kx) {
                    const double w = wk[ky * k + kx];
                    if (w == 0.0) continue;
                    // Output rows/cols whose shifted source stays in bounds;
                    // everything else reads the zero padding.
                    const int i0 = std::max(0, pad - ky);
                    const int i1 = std::min(oh, x.height + pad - ky);
                    const int j0 = std::max(0, pad - kx);
                    const int j1 = std::min(ow, x.width + pad - kx);
                    for (int i = i0; i < i1; ++i) {
                        const double* srow =
                            src + static_cast<std::size_t>(i + ky - pad) * x.width + (kx - pad);
                        double* drow = dst + static_cast<std::size_t>(i) * ow;
                        for (int j = j0; j < j1; ++j) drow[j] += w * srow[j];
                    }
                }
            }
        }
    }
    return out;
}

std::vector<double> se_gates(const FeatureMap& x, const SEBlock& se) {
    if (x.channels != se.channels)
        throw std::invalid_argument("se_gates: channel mismatch");
    if (se.channels % se.reduction != 0)
        throw std::invalid_argument("se_gates: reduction must divide channels");
    const int c = se.channels;
    const int mid = c / se.reduction;
    const double inv_px = 1.0 / (static_cast<double>(x.height) * x.width);

    std::vector<double> pooled(c);
    for (int ci = 0; ci < c; ++ci) {
        const double* plane = x.channel(ci);
        double sum = 0.0;
        for (std::size_t p = 0; p < static_cast<std::size_t>(x.height) * x.width; ++p)
            sum += plane[p];
        pooled[ci] = sum * inv_px;
    }
    std::vector<double> hidden(mid);
    for (int m = 0; m < mid; ++m) {
        double a = se.b1[m];
        const double* w = se.w1.data() + static_cast<std::size_t>(m) * c;
        for (int ci = 0; ci < c; ++ci) a += w[ci] * pooled[ci];
        hidden[m] = a > 0.0 ? a : 0.0;
    }
    std::vector<double> gates(c);
    for (int ci = 0; ci < c; ++ci) {
        double a = se.b2[ci];
        const double* w = se.w2.data() + static_cast<std::size_t>(ci) * mid;
        for (int m = 0; m < mid; ++m) a += w[m] * hidden[m];
        gates[ci] = sigmoid(a);
    }
    return gates;
}

FeatureMap se_forward(const FeatureMap& x, const SEBlock& se) {
    const std::vector<double> gates = se_gates(x, se);
    FeatureMap out(x.channels, x.height, x.width);
    for (int c = 0; c < x.channels; ++c) {
        const double g = gates[c];
        const double* src = x.channel(c);
        double* dst = out.channel(c);
        for (std::size_t p = 0; p < static_cast<std::size_t>(x.height) * x.width; ++p)
            dst[p] = src[p] * g;
    }
    return out;
}

const char* fusion_variant_name(FusionVariant v) {
    switch (v) {
        case FusionVariant::kConcat: return "concat";
        case FusionVariant::kBiProjection: return "biproj";
        case FusionVariant::kCee: return "cee";
    }
    return "?";
}

FusionParams make_fusion_params(FusionVariant variant, int channels, std::uint64_t seed) {
    if (channels < 1) throw std::invalid_argument("make_fusion_params: channels < 1");
    UniformSource rng(seed);
    FusionParams p;
    p.variant = variant;
    p.channels = channels;
    const int c = channels;
    switch (variant) {
        case FusionVariant::kConcat:
            p.reduce = make_conv(2 * c, c, 1, /*with_bias=*/false, rng);
            break;
        case FusionVariant::kBiProjection:
            p.enc_equi = make_conv(c, c, 3, true, rng);
            p.enc_c2e = make_conv(c, c, 3, true, rng);
            p.mask = make_conv(2 * c, 1, 1, true, rng);
            break;
        case FusionVariant::kCee:
            if (c % 8 != 0)
                throw std::invalid_argument("CEE requires channels divisible by 8");
            p.squeeze = make_conv(2 * c, c, 1, true, rng);
            p.residual = make_conv(c, c, 3, true, rng);
            p.se = make_se(2 * c, rng);
            p.reduce = make_conv(2 * c, c, 1, true, rng);
            break;
    }
    return p;
}

ParamCount param_count(const FusionParams& params) {
    ParamCount n;
    auto add_conv = [&n](const ConvLayer& l) {
        n.weights += static_cast<long long>(l.weights.size());
        n.biases += static_cast<long long>(l.bias.size());
    };
    switch (params.variant) {
        case FusionVariant::kConcat:
            add_conv(params.reduce);
            break;
        case FusionVariant::kBiProjection:
            add_conv(params.enc_equi);
            add_conv(params.enc_c2e);
            add_conv(params.mask);
            break;
        case FusionVariant::kCee:
            add_conv(params.squeeze);
            add_conv(params.residual);
            n.weights += static_cast<long long>(params.se.w1.size() + params.se.w2.size());
            n.biases += static_cast<long long>(params.se.b1.size() + params.se.b2.size());
            add_conv(params.reduce);
            break;
    }
    return n;
}

FeatureMap concat_fuse(const FeatureMap& f_equi, const FeatureMap& f_c2e,
                       const FusionParams& params) {
    check_pair(f_equi, f_c2e, params);
    return conv2d(concat_channels(f_equi, f_c2e), params.reduce);
}

FeatureMap biproj_fuse(const FeatureMap& f_equi, const FeatureMap& f_c2e,
                       const FusionParams& params) {
    check_pair(f_equi, f_c2e, params);
    FeatureMap enc_e = conv2d(f_equi, params.enc_equi);
    relu_inplace(enc_e);
    FeatureMap enc_c = conv2d(f_c2e, params.enc_c2e);
    relu_inplace(enc_c);
    const FeatureMap mask_logits = conv2d(concat_channels(enc_e, enc_c), params.mask);

    FeatureMap out(f_equi.channels, f_equi.height, f_equi.width);
    const std::size_t px = static_cast<std::size_t>(f_equi.height) * f_equi.width;
    const double* logits = mask_logits.channel(0);
    for (int c = 0; c < f_equi.channels; ++c) {
        const double* base = f_equi.channel(c);
        const double* add = enc_c.channel(c);
        double* dst = out.channel(c);
        for (std::size_t p = 0; p < px; ++p)
            dst[p] = base[p] + sigmoid(logits[p]) * add[p];
    }
    return out;
}

FeatureMap cee_fuse(const FeatureMap& f_equi, const FeatureMap& f_c2e,
                    const FusionParams& params, CeeTrace* trace) {
    check_pair(f_equi, f_c2e, params);
    if (params.channels % 8 != 0)
        throw std::invalid_argument("cee_fuse: channels must be divisible by 8");
    FeatureMap squeezed = conv2d(concat_channels(f_equi, f_c2e), params.squeeze);
    relu_inplace(squeezed);
    const FeatureMap f_res = conv2d(squeezed, params.residual);

    FeatureMap repaired(f_c2e.channels, f_c2e.height, f_c2e.width);
    for (std::size_t p = 0; p < f_c2e.data.size(); ++p)
        repaired.data[p] = f_c2e.data[p] + f_res.data[p];

    const FeatureMap recat = concat_channels(f_equi, repaired);
    if (trace) trace->gates = se_gates(recat, params.se);
    const FeatureMap gated = se_forward(recat, params.se);
    return conv2d(gated, params.reduce);
}

FeatureMap fuse(const FeatureMap& f_equi, const FeatureMap& f_c2e, const FusionParams& params) {
    switch (params.variant) {
        case FusionVariant::kConcat: return concat_fuse(f_equi, f_c2e, params);
        case FusionVariant::kBiProjection: return biproj_fuse(f_equi, f_c2e, params);
        case FusionVariant::kCee: return cee_fuse(f_equi, f_c2e, params);
    }
    throw std::invalid_argument("fuse: bad variant");
}

FeatureMap skip_fusion_demo(const FeatureMap& erp_feat, const CubeFeatureMap& cube_feat,
                             const C2EGrid& grid, const FusionParams& params) {
    if (erp_feat.height != grid.height || erp_feat.width != grid.width)
        throw std::invalid_argument("skip_fusion_demo: ERP feature dims do not match grid");
    if (cube_feat.channels != erp_feat.channels)
        throw std::invalid_argument("skip_fusion_demo: branch channel counts differ");
    const FeatureMap f_c2e = apply_c2e(cube_feat, grid, BoundaryMode::kPaddedFace);
    return fuse(erp_feat, f_c2e, params);
}

FeatureMap random_feature_map(int channels, int height, int width, std::uint64_t seed) {
    UniformSource rng(seed);
    FeatureMap out(channels, height, width);
    for (double& v : out.data) v = rng.symmetric(1.0);
    return out;
}

CubeFeatureMap random_cube_map(int channels, int side, std::uint64_t seed) {
    UniformSource rng(seed);
    CubeFeatureMap out(channels, side);
    for (double& v : out.data) v = rng.symmetric(1.0);
    return out;
}

}  // namespace pnf
