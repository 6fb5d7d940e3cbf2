#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "panofuse/fusion.hpp"

using namespace pnf;

namespace {

ConvLayer identity_1x1(int channels) {
    ConvLayer l;
    l.in_channels = l.out_channels = channels;
    l.kernel = 1;
    l.padding = 0;
    l.weights.assign(static_cast<std::size_t>(channels) * channels, 0.0);
    for (int c = 0; c < channels; ++c)
        l.weights[static_cast<std::size_t>(c) * channels + c] = 1.0;
    return l;
}

// 1x1 layer [A | B] acting on a 2C input: out = A * first half + B * second.
ConvLayer block_1x1(int channels, double a_diag, double b_diag) {
    ConvLayer l;
    l.in_channels = 2 * channels;
    l.out_channels = channels;
    l.kernel = 1;
    l.padding = 0;
    l.weights.assign(static_cast<std::size_t>(channels) * 2 * channels, 0.0);
    for (int c = 0; c < channels; ++c) {
        l.weights[static_cast<std::size_t>(c) * 2 * channels + c] = a_diag;
        l.weights[static_cast<std::size_t>(c) * 2 * channels + channels + c] = b_diag;
    }
    return l;
}

SEBlock zero_se(int channels) {
    SEBlock se;
    se.channels = channels;
    se.reduction = 16;
    const int mid = channels / 16;
    se.w1.assign(static_cast<std::size_t>(mid) * channels, 0.0);
    se.b1.assign(mid, 0.0);
    se.w2.assign(static_cast<std::size_t>(channels) * mid, 0.0);
    se.b2.assign(channels, 0.0);
    return se;
}

}  // namespace

TEST_CASE("conv2d: identity, box kernel, channel mismatch") {
    const FeatureMap x = random_feature_map(3, 5, 7, 50);
    const FeatureMap y = conv2d(x, identity_1x1(3));
    for (std::size_t i = 0; i < x.data.size(); ++i) CHECK(y.data[i] == x.data[i]);

    // 3x3 all-ones kernel over a one-hot input: a 3x3 block of ones.
    FeatureMap hot(1, 5, 5);
    hot.at(0, 2, 2) = 1.0;
    ConvLayer ones;
    ones.in_channels = ones.out_channels = 1;
    ones.kernel = 3;
    ones.padding = 1;
    ones.weights.assign(9, 1.0);
    const FeatureMap box = conv2d(hot, ones);
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j)
            CHECK(box.at(0, i, j) == ((std::abs(i - 2) <= 1 && std::abs(j - 2) <= 1) ? 1.0 : 0.0));

    CHECK_THROWS_AS(conv2d(random_feature_map(2, 4, 4, 1), identity_1x1(3)),
                    std::invalid_argument);
    CHECK_THROWS_AS(conv2d(random_feature_map(1, 2, 2, 1), ones), std::invalid_argument);
}

TEST_CASE("conv2d matches the nested-loop oracle") {
    oracle::Rng rng(51);
    for (int k : {1, 3}) {
        ConvLayer l;
        l.in_channels = 2;
        l.out_channels = 3;
        l.kernel = k;
        l.padding = (k - 1) / 2;
        l.weights.resize(static_cast<std::size_t>(3) * 2 * k * k);
        l.bias.resize(3);
        for (double& w : l.weights) w = rng.symmetric();
        for (double& b : l.bias) b = rng.symmetric();
        const FeatureMap x = random_feature_map(2, 4, 4, 52 + k);
        CHECK(oracle::max_abs_diff(conv2d(x, l), oracle::conv2d_oracle(x, l)) < 1e-9);
    }
    // Valid (unpadded) convolution shrinks the output.
    ConvLayer valid;
    valid.in_channels = 1;
    valid.out_channels = 1;
    valid.kernel = 3;
    valid.padding = 0;
    valid.weights.assign(9, 1.0 / 9.0);
    const FeatureMap y = conv2d(random_feature_map(1, 6, 8, 53), valid);
    CHECK(y.height == 4);
    CHECK(y.width == 6);
}

TEST_CASE("conv2d is linear in its input") {
    oracle::Rng rng(54);
    ConvLayer l;
    l.in_channels = 2;
    l.out_channels = 2;
    l.kernel = 3;
    l.padding = 1;
    l.weights.resize(36);
    for (double& w : l.weights) w = rng.symmetric();
    const FeatureMap a = random_feature_map(2, 6, 6, 55);
    const FeatureMap b = random_feature_map(2, 6, 6, 56);
    FeatureMap combo(2, 6, 6);
    for (std::size_t i = 0; i < combo.data.size(); ++i)
        combo.data[i] = 2.5 * a.data[i] - 0.75 * b.data[i];
    const FeatureMap fa = conv2d(a, l), fb = conv2d(b, l), fc = conv2d(combo, l);
    for (std::size_t i = 0; i < fc.data.size(); ++i)
        CHECK(fc.data[i] ==
              doctest::Approx(2.5 * fa.data[i] - 0.75 * fb.data[i]).epsilon(1e-9));
}

TEST_CASE("se_forward: zero parameters give exactly half the input") {
    const FeatureMap x = random_feature_map(32, 4, 6, 57);
    const SEBlock se = zero_se(32);
    const std::vector<double> gates = se_gates(x, se);
    for (double g : gates) CHECK(g == 0.5);
    const FeatureMap y = se_forward(x, se);
    for (std::size_t i = 0; i < x.data.size(); ++i) CHECK(y.data[i] == x.data[i] * 0.5);
}

TEST_CASE("se gates are strictly inside (0, 1)") {
    const FeatureMap x = random_feature_map(32, 3, 5, 58);
    FusionParams p = make_fusion_params(FusionVariant::kCee, 16, 59);
    for (double g : se_gates(x, p.se)) {
        CHECK(g > 0.0);
        CHECK(g < 1.0);
    }
    CHECK_THROWS_AS(se_forward(random_feature_map(8, 3, 5, 60), p.se), std::invalid_argument);
}

TEST_CASE("se_forward matches a scalar hand computation on a 2-channel 1x1 input") {
    // channels=2, reduction=2 bottleneck of width 1; all algebra is scalar.
    SEBlock se;
    se.channels = 2;
    se.reduction = 2;
    se.w1 = {0.3, -0.2};
    se.b1 = {0.1};
    se.w2 = {0.7, -0.5};
    se.b2 = {0.05, -0.15};
    FeatureMap x(2, 1, 1);
    x.at(0, 0, 0) = 2.0;
    x.at(1, 0, 0) = -1.0;
    // pooled = (2, -1); hidden = relu(0.1 + 0.3*2 + (-0.2)*(-1)) = 0.9
    // gate0 = sigmoid(0.05 + 0.7*0.9) = sigmoid(0.68)
    // gate1 = sigmoid(-0.15 - 0.5*0.9) = sigmoid(-0.6)
    const std::vector<double> g = se_gates(x, se);
    CHECK(g[0] == doctest::Approx(1.0 / (1.0 + std::exp(-0.68))).epsilon(1e-9));
    CHECK(g[1] == doctest::Approx(1.0 / (1.0 + std::exp(0.6))).epsilon(1e-9));
    const FeatureMap y = se_forward(x, se);
    CHECK(y.at(0, 0, 0) == doctest::Approx(2.0 * g[0]).epsilon(1e-12));
    CHECK(y.at(1, 0, 0) == doctest::Approx(-1.0 * g[1]).epsilon(1e-12));
    CHECK(oracle::max_abs_diff(y, oracle::se_oracle(x, se)) < 1e-9);
}

TEST_CASE("concat_fuse: projection and averaging weights") {
    const int c = 4;
    const FeatureMap fe = random_feature_map(c, 3, 6, 61);
    const FeatureMap fc = random_feature_map(c, 3, 6, 62);

    FusionParams pick;
    pick.variant = FusionVariant::kConcat;
    pick.channels = c;
    pick.reduce = block_1x1(c, 1.0, 0.0);  // [I | 0]
    const FeatureMap only_equi = concat_fuse(fe, fc, pick);
    for (std::size_t i = 0; i < fe.data.size(); ++i) CHECK(only_equi.data[i] == fe.data[i]);

    pick.reduce = block_1x1(c, 0.5, 0.5);  // [I/2 | I/2]
    const FeatureMap mean = concat_fuse(fe, fc, pick);
    for (std::size_t i = 0; i < fe.data.size(); ++i)
        CHECK(mean.data[i] == doctest::Approx((fe.data[i] + fc.data[i]) / 2.0).epsilon(1e-12));

    CHECK_THROWS_AS(concat_fuse(fe, random_feature_map(c, 3, 5, 63), pick),
                    std::invalid_argument);
}

TEST_CASE("concat_fuse matches the oracle") {
    const FusionParams p = make_fusion_params(FusionVariant::kConcat, 8, 64);
    const FeatureMap fe = random_feature_map(8, 5, 10, 65);
    const FeatureMap fc = random_feature_map(8, 5, 10, 66);
    CHECK(oracle::max_abs_diff(concat_fuse(fe, fc, p),
                               oracle::concat_fuse_oracle(fe, fc, p)) < 1e-9);
}

TEST_CASE("biproj_fuse: saturated-off mask returns the ERP branch") {
    FusionParams p = make_fusion_params(FusionVariant::kBiProjection, 8, 67);
    p.mask.bias[0] = -50.0;  // sigmoid(-50 + bounded logits) ~ 0
    for (double& w : p.mask.weights) w = 0.0;
    const FeatureMap fe = random_feature_map(8, 4, 8, 68);
    const FeatureMap fc = random_feature_map(8, 4, 8, 69);
    const FeatureMap out = biproj_fuse(fe, fc, p);
    CHECK(oracle::max_abs_diff(out, fe) < 1e-9);
}

TEST_CASE("biproj_fuse: mask values stay strictly inside (0, 1)") {
    const FusionParams p = make_fusion_params(FusionVariant::kBiProjection, 8, 70);
    const FeatureMap fe = random_feature_map(8, 4, 8, 71);
    const FeatureMap fc = random_feature_map(8, 4, 8, 72);
    // Recover the mask from the oracle decomposition (same parameters).
    const FeatureMap ee = oracle::relu_oracle(oracle::conv2d_oracle(fe, p.enc_equi));
    const FeatureMap ec = oracle::relu_oracle(oracle::conv2d_oracle(fc, p.enc_c2e));
    const FeatureMap logits = oracle::conv2d_oracle(oracle::concat_oracle(ee, ec), p.mask);
    for (double v : logits.data) {
        const double m = 1.0 / (1.0 + std::exp(-v));
        CHECK(m > 0.0);
        CHECK(m < 1.0);
    }
}

TEST_CASE("biproj_fuse matches the oracle on an 8-channel 6x12 input") {
    const FusionParams p = make_fusion_params(FusionVariant::kBiProjection, 8, 73);
    const FeatureMap fe = random_feature_map(8, 6, 12, 74);
    const FeatureMap fc = random_feature_map(8, 6, 12, 75);
    CHECK(oracle::max_abs_diff(biproj_fuse(fe, fc, p),
                               oracle::biproj_fuse_oracle(fe, fc, p)) < 1e-8);
}

TEST_CASE("cee_fuse degenerate configurations") {
    const int c = 16;
    const FeatureMap fe = random_feature_map(c, 4, 8, 76);
    const FeatureMap fc = random_feature_map(c, 4, 8, 77);

    FusionParams p;
    p.variant = FusionVariant::kCee;
    p.channels = c;
    p.squeeze = block_1x1(c, 0.0, 0.0);
    p.squeeze.bias.assign(c, 0.0);
    p.residual = identity_1x1(c);  // placeholder, zeroed next
    p.residual.kernel = 3;
    p.residual.padding = 1;
    p.residual.weights.assign(static_cast<std::size_t>(c) * c * 9, 0.0);
    p.residual.bias.assign(c, 0.0);
    p.se = zero_se(2 * c);

    // All-zero network: output is identically zero.
    p.reduce = block_1x1(c, 0.0, 0.0);
    p.reduce.bias.assign(c, 0.0);
    const FeatureMap zero = cee_fuse(fe, fc, p);
    for (double v : zero.data) CHECK(v == 0.0);

    // Zero residual + [I | 0] reduction: the 0.5 SE gate halves f_equi.
    p.reduce = block_1x1(c, 1.0, 0.0);
    p.reduce.bias.assign(c, 0.0);
    CeeTrace trace;
    const FeatureMap half = cee_fuse(fe, fc, p, &trace);
    for (std::size_t i = 0; i < fe.data.size(); ++i)
        CHECK(half.data[i] == doctest::Approx(0.5 * fe.data[i]).epsilon(1e-12));
    for (double g : trace.gates) CHECK(g == 0.5);

    // Zero residual branch degenerates to an SE-gated concatenation.
    FusionParams concat_p;
    concat_p.variant = FusionVariant::kConcat;
    concat_p.channels = c;
    concat_p.reduce = p.reduce;
    const FeatureMap gated_concat = concat_fuse(fe, fc, concat_p);
    for (std::size_t i = 0; i < fe.data.size(); ++i)
        CHECK(half.data[i] == doctest::Approx(0.5 * gated_concat.data[i]).epsilon(1e-12));
}

TEST_CASE("cee_fuse matches the oracle on a 16-channel 8x16 input") {
    const FusionParams p = make_fusion_params(FusionVariant::kCee, 16, 78);
    const FeatureMap fe = random_feature_map(16, 8, 16, 79);
    const FeatureMap fc = random_feature_map(16, 8, 16, 80);
    CHECK(oracle::max_abs_diff(cee_fuse(fe, fc, p), oracle::cee_fuse_oracle(fe, fc, p)) < 1e-8);
}

TEST_CASE("cee rejects channel counts not divisible by 8") {
    CHECK_THROWS_AS(make_fusion_params(FusionVariant::kCee, 12, 81), std::invalid_argument);
}

TEST_CASE("parameter counts match the closed forms") {
    for (int c : {8, 16, 32, 64, 256}) {
        const long long c2 = static_cast<long long>(c) * c;
        const ParamCount concat =
            param_count(make_fusion_params(FusionVariant::kConcat, c, 1));
        CHECK(concat.weights == 2 * c2);
        CHECK(concat.biases == 0);

        const ParamCount biproj =
            param_count(make_fusion_params(FusionVariant::kBiProjection, c, 2));
        CHECK(biproj.weights == 18 * c2 + 2 * c);
        CHECK(biproj.biases == 2 * c + 1);
        CHECK(biproj.total() == 18 * c2 + 4 * c + 1);

        const ParamCount cee = param_count(make_fusion_params(FusionVariant::kCee, c, 3));
        CHECK(2 * cee.weights == 27 * c2);  // 13.5 C^2 exactly
    }
    // Reference values at C = 64.
    CHECK(param_count(make_fusion_params(FusionVariant::kConcat, 64, 4)).weights == 8192);
    CHECK(param_count(make_fusion_params(FusionVariant::kBiProjection, 64, 5)).total() == 73985);
    CHECK(param_count(make_fusion_params(FusionVariant::kCee, 64, 6)).weights == 55296);
}

TEST_CASE("skip_fusion_demo: constants, determinism, dimension contract") {
    const int c = 16, h = 64, w = 128, r = 32;
    const C2EGrid grid = build_c2e_grid(h, w, r);

    // Constant branches + averaging concat weights stay constant.
    FeatureMap fe(c, h, w);
    CubeFeatureMap fcube(c, r);
    for (double& v : fe.data) v = 2.0;
    for (double& v : fcube.data) v = 4.0;
    FusionParams avg;
    avg.variant = FusionVariant::kConcat;
    avg.channels = c;
    avg.reduce = block_1x1(c, 0.5, 0.5);
    const FeatureMap fused = skip_fusion_demo(fe, fcube, grid, avg);
    for (double v : fused.data) CHECK(v == doctest::Approx(3.0).epsilon(1e-12));

    // Same seed twice: bit-identical outputs; all variants keep C x H x W.
    for (FusionVariant variant :
         {FusionVariant::kConcat, FusionVariant::kBiProjection, FusionVariant::kCee}) {
        const FusionParams p = make_fusion_params(variant, c, 7);
        const FeatureMap erp_feat = random_feature_map(c, h, w, 8);
        const CubeFeatureMap cube_feat = random_cube_map(c, r, 9);
        const FeatureMap a = skip_fusion_demo(erp_feat, cube_feat, grid, p);
        const FeatureMap b = skip_fusion_demo(erp_feat, cube_feat, grid, p);
        REQUIRE(a.channels == c);
        REQUIRE(a.height == h);
        REQUIRE(a.width == w);
        for (std::size_t i = 0; i < a.data.size(); ++i) {
            CHECK(a.data[i] == b.data[i]);
            CHECK(std::isfinite(a.data[i]));
        }
    }

    CHECK_THROWS_AS(skip_fusion_demo(random_feature_map(c, 32, 64, 10), fcube, grid, avg),
                    std::invalid_argument);
    CHECK_THROWS_AS(skip_fusion_demo(fe, random_cube_map(8, r, 11), grid, avg),
                    std::invalid_argument);
}
