// Forward-pass implementations of the three projection-fusion modules on
// plain arrays, with exact parameter accounting.
//
// All variants take the equirectangular features and the cubemap features
// already reprojected to the ERP grid (two C x H x W maps) and produce a
// fused C x H x W map:
//   - Concat: channel concat, then a bias-free 1x1 conv back to C.
//   - Bi-Projection: 3x3 conv + ReLU on each branch, a 1-channel sigmoid
//     mask from their concat, output = f_equi + mask * f_c2e_encoded.
//   - CEE: a residual block (1x1 squeeze + ReLU + 3x3) over the concat
//     repairs the cubemap branch, then an SE block (reduction 16) gates the
//     re-concatenated 2C channels before the final 1x1 reduction.

#pragma once

#include <cstdint>
#include <vector>

#include "panofuse/feature_map.hpp"
#include "panofuse/resampler.hpp"

namespace pnf {

struct ConvLayer {
    int in_channels = 0;
    int out_channels = 0;
    int kernel = 1;   // 1 or 3
    int padding = 0;  // zero padding
    std::vector<double> weights;  // [out][in][ky][kx]
    std::vector<double> bias;     // per out channel; empty = no bias
};

// Cross-correlation, stride 1, zero padding. Output spatial size is
// H + 2*padding - kernel + 1 per axis (same size when padding=(k-1)/2).
FeatureMap conv2d(const FeatureMap& x, const ConvLayer& layer);

// Squeeze-and-Excitation: global average pool -> dense bottleneck -> ReLU
// -> dense -> sigmoid, then scale each channel by its gate.
struct SEBlock {
    int channels = 0;
    int reduction = 16;
    std::vector<double> w1, b1;  // channels -> channels/reduction
    std::vector<double> w2, b2;  // channels/reduction -> channels
};

// The per-channel gates, strictly inside (0, 1).
std::vector<double> se_gates(const FeatureMap& x, const SEBlock& se);
FeatureMap se_forward(const FeatureMap& x, const SEBlock& se);

enum class FusionVariant { kConcat, kBiProjection, kCee };

const char* fusion_variant_name(FusionVariant v);

struct FusionParams {
    FusionVariant variant = FusionVariant::kConcat;
    int channels = 0;  // C of each input branch

    ConvLayer reduce;    // Concat: 1x1 2C->C no bias; CEE: 1x1 2C->C with bias
    ConvLayer enc_equi;  // BiProj: 3x3 C->C with bias
    ConvLayer enc_c2e;   // BiProj: 3x3 C->C with bias
    ConvLayer mask;      // BiProj: 1x1 2C->1 with bias
    ConvLayer squeeze;   // CEE: 1x1 2C->C with bias
    ConvLayer residual;  // CEE: 3x3 C->C with bias
    SEBlock se;          // CEE: over 2C, reduction 16
};

// Seeded uniform(+-1/sqrt(fan_in)) initialization; the generator consumes
// raw mt19937 draws so the same seed reproduces the same parameters
// everywhere. CEE requires channels divisible by 8.
FusionParams make_fusion_params(FusionVariant variant, int channels, std::uint64_t seed);

struct ParamCount {
    long long weights = 0;
    long long biases = 0;
    long long total() const { return weights + biases; }
};

// Counts the actual parameter array sizes of the variant's layer set.
ParamCount param_count(const FusionParams& params);

// Channel concatenation (equal spatial dims).
FeatureMap concat_channels(const FeatureMap& a, const FeatureMap& b);

// Optional trace of CEE internals for reporting.
struct CeeTrace {
    std::vector<double> gates;  // SE gates over the 2C fused channels
};

FeatureMap concat_fuse(const FeatureMap& f_equi, const FeatureMap& f_c2e,
                       const FusionParams& params);
FeatureMap biproj_fuse(const FeatureMap& f_equi, const FeatureMap& f_c2e,
                       const FusionParams& params);
FeatureMap cee_fuse(const FeatureMap& f_equi, const FeatureMap& f_c2e,
                    const FusionParams& params, CeeTrace* trace = nullptr);

// Dispatches on params.variant.
FeatureMap fuse(const FeatureMap& f_equi, const FeatureMap& f_c2e, const FusionParams& params);

// Single-stage skip-connection demo: reprojects the cubemap features to the
// ERP grid (seam-padded C2E) and fuses them with the ERP features.
FeatureMap skip_fusion_demo(const FeatureMap& erp_feat, const CubeFeatureMap& cube_feat,
                             const C2EGrid& grid, const FusionParams& params);

// Seeded test/demo inputs, uniform in [-1, 1].
FeatureMap random_feature_map(int channels, int height, int width, std::uint64_t seed);
CubeFeatureMap random_cube_map(int channels, int side, std::uint64_t seed);

}  // namespace pnf
