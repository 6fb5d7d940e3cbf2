// Test-only reference implementations, kept independent of the library's
// computation paths: per-pixel nested-loop convolutions, scalar SE math,
// direct sphere-function renders, and a tiny deterministic RNG. Tests
// compare library outputs against these.

#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "panofuse/feature_map.hpp"
#include "panofuse/fusion.hpp"
#include "panofuse/metrics.hpp"

namespace oracle {

inline constexpr double kPi = 3.14159265358979323846;

// xorshift64*: deterministic across platforms, unrelated to the library's
// mt19937-based initializers.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ull) {}
    std::uint64_t next_u64() {
        state_ ^= state_ >> 12;
        state_ ^= state_ << 25;
        state_ ^= state_ >> 27;
        return state_ * 0x2545f4914f6cdd1dull;
    }
    double uniform() { return (next_u64() >> 11) * (1.0 / 9007199254740992.0); }  // [0,1)
    double symmetric() { return 2.0 * uniform() - 1.0; }
    pnf::Vec3 unit_vector() {
        while (true) {
            const pnf::Vec3 v{symmetric(), symmetric(), symmetric()};
            const double n = v.norm();
            if (n > 1e-3 && n <= 1.0) return v * (1.0 / n);
        }
    }

private:
    std::uint64_t state_;
};

// ---------------------------------------------------------------------------
// Spherical test function and direct renders.

// Band-limited smooth function on the sphere: a combination of spherical
// harmonics up to degree 2, expressed in unit-vector components.
inline double sh_value(const pnf::Vec3& v) {
    return 0.5 + 0.30 * v.y + 0.20 * v.x + 0.15 * v.z + 0.18 * v.x * v.z +
           0.12 * (1.5 * v.y * v.y - 0.5) + 0.10 * v.x * v.y;
}

// ERP pixel-center ray, written out independently of the library.
inline pnf::Vec3 erp_ray(int i, int j, int height, int width) {
    const double phi = 2.0 * kPi * (j + 0.5) / width;
    const double theta = 0.5 * kPi - kPi * (i + 0.5) / height;
    return {std::sin(phi) * std::cos(theta), std::sin(theta), std::cos(phi) * std::cos(theta)};
}

// World ray through face pixel (u, v) of a side-r face, with the six face
// rotations hand-coded.
inline pnf::Vec3 face_ray(pnf::FaceId f, double u, double v, double r) {
    const double lx = u - 0.5 * r, ly = v - 0.5 * r, lz = 0.5 * r;
    switch (f) {
        case pnf::FaceId::F: return {lx, ly, lz};
        case pnf::FaceId::B: return {-lx, ly, -lz};
        case pnf::FaceId::L: return {lz, ly, -lx};
        case pnf::FaceId::R: return {-lz, ly, lx};
        case pnf::FaceId::U: return {lx, lz, -ly};
        case pnf::FaceId::D: return {lx, -lz, ly};
    }
    return {};
}

inline pnf::FeatureMap render_erp_direct(int height, int width) {
    pnf::FeatureMap out(1, height, width);
    for (int i = 0; i < height; ++i)
        for (int j = 0; j < width; ++j)
            out.at(0, i, j) = sh_value(erp_ray(i, j, height, width).normalized());
    return out;
}

inline pnf::CubeFeatureMap render_cube_direct(int side) {
    pnf::CubeFeatureMap out(1, side);
    for (int f = 0; f < pnf::kNumFaces; ++f)
        for (int y = 0; y < side; ++y)
            for (int x = 0; x < side; ++x)
                out.at(f, 0, y, x) =
                    sh_value(face_ray(static_cast<pnf::FaceId>(f), x + 0.5, y + 0.5, side)
                                 .normalized());
    return out;
}

// Extended render: the true function values on faces grown by `pad` pixels,
// the reference for both cube and spherical padding.
inline pnf::CubeFeatureMap render_cube_extended(int side, int pad) {
    const int rp = side + 2 * pad;
    pnf::CubeFeatureMap out(1, rp);
    for (int f = 0; f < pnf::kNumFaces; ++f)
        for (int y = 0; y < rp; ++y)
            for (int x = 0; x < rp; ++x)
                out.at(f, 0, y, x) =
                    sh_value(face_ray(static_cast<pnf::FaceId>(f), x - pad + 0.5, y - pad + 0.5,
                                      side)
                                 .normalized());
    return out;
}

// ---------------------------------------------------------------------------
// Neural-layer oracles: direct per-output gathers.

inline pnf::FeatureMap conv2d_oracle(const pnf::FeatureMap& x, const pnf::ConvLayer& layer) {
    const int k = layer.kernel, pad = layer.padding;
    const int oh = x.height + 2 * pad - k + 1;
    const int ow = x.width + 2 * pad - k + 1;
    pnf::FeatureMap out(layer.out_channels, oh, ow);
    for (int o = 0; o < layer.out_channels; ++o)
        for (int i = 0; i < oh; ++i)
            for (int j = 0; j < ow; ++j) {
                double acc = layer.bias.empty() ? 0.0 : layer.bias[o];
                for (int ci = 0; ci < x.channels; ++ci)
                    for (int ky = 0; ky < k; ++ky)
                        for (int kx = 0; kx < k; ++kx) {
                            const int ii = i + ky - pad, jj = j + kx - pad;
                            if (ii < 0 || ii >= x.height || jj < 0 || jj >= x.width) continue;
                            acc += layer.weights[((static_cast<std::size_t>(o) * x.channels +
                                                   ci) * k + ky) * k + kx] *
                                   x.at(ci, ii, jj);
                        }
                out.at(o, i, j) = acc;
            }
    return out;
}

inline std::vector<double> se_gates_oracle(const pnf::FeatureMap& x, const pnf::SEBlock& se) {
    const int c = se.channels;
    const int mid = c / se.reduction;
    std::vector<double> pooled(c, 0.0);
    for (int ci = 0; ci < c; ++ci) {
        for (int i = 0; i < x.height; ++i)
            for (int j = 0; j < x.width; ++j) pooled[ci] += x.at(ci, i, j);
        pooled[ci] /= static_cast<double>(x.height) * x.width;
    }
    std::vector<double> hidden(mid, 0.0);
    for (int m = 0; m < mid; ++m) {
        double a = se.b1[m];
        for (int ci = 0; ci < c; ++ci) a += se.w1[static_cast<std::size_t>(m) * c + ci] * pooled[ci];
        hidden[m] = std::max(0.0, a);
    }
    std::vector<double> gates(c, 0.0);
    for (int ci = 0; ci < c; ++ci) {
        double a = se.b2[ci];
        for (int m = 0; m < mid; ++m) a += se.w2[static_cast<std::size_t>(ci) * mid + m] * hidden[m];
        gates[ci] = 1.0 / (1.0 + std::exp(-a));
    }
    return gates;
}

inline pnf::FeatureMap se_oracle(const pnf::FeatureMap& x, const pnf::SEBlock& se) {
    const std::vector<double> g = se_gates_oracle(x, se);
    pnf::FeatureMap out(x.channels, x.height, x.width);
    for (int c = 0; c < x.channels; ++c)
        for (int i = 0; i < x.height; ++i)
            for (int j = 0; j < x.width; ++j) out.at(c, i, j) = x.at(c, i, j) * g[c];
    return out;
}

inline pnf::FeatureMap concat_oracle(const pnf::FeatureMap& a, const pnf::FeatureMap& b) {
    pnf::FeatureMap out(a.channels + b.channels, a.height, a.width);
    for (int c = 0; c < a.channels; ++c)
        for (int i = 0; i < a.height; ++i)
            for (int j = 0; j < a.width; ++j) out.at(c, i, j) = a.at(c, i, j);
    for (int c = 0; c < b.channels; ++c)
        for (int i = 0; i < a.height; ++i)
            for (int j = 0; j < a.width; ++j) out.at(a.channels + c, i, j) = b.at(c, i, j);
    return out;
}

inline pnf::FeatureMap relu_oracle(pnf::FeatureMap x) {
    for (double& v : x.data) v = std::max(0.0, v);
    return x;
}

inline pnf::FeatureMap concat_fuse_oracle(const pnf::FeatureMap& fe, const pnf::FeatureMap& fc,
                                          const pnf::FusionParams& p) {
    return conv2d_oracle(concat_oracle(fe, fc), p.reduce);
}

inline pnf::FeatureMap biproj_fuse_oracle(const pnf::FeatureMap& fe, const pnf::FeatureMap& fc,
                                          const pnf::FusionParams& p) {
    const pnf::FeatureMap ee = relu_oracle(conv2d_oracle(fe, p.enc_equi));
    const pnf::FeatureMap ec = relu_oracle(conv2d_oracle(fc, p.enc_c2e));
    const pnf::FeatureMap logits = conv2d_oracle(concat_oracle(ee, ec), p.mask);
    pnf::FeatureMap out(fe.channels, fe.height, fe.width);
    for (int c = 0; c < fe.channels; ++c)
        for (int i = 0; i < fe.height; ++i)
            for (int j = 0; j < fe.width; ++j) {
                const double m = 1.0 / (1.0 + std::exp(-logits.at(0, i, j)));
                out.at(c, i, j) = fe.at(c, i, j) + m * ec.at(c, i, j);
            }
    return out;
}

inline pnf::FeatureMap cee_fuse_oracle(const pnf::FeatureMap& fe, const pnf::FeatureMap& fc,
                                       const pnf::FusionParams& p) {
    const pnf::FeatureMap squeezed =
        relu_oracle(conv2d_oracle(concat_oracle(fe, fc), p.squeeze));
    const pnf::FeatureMap res = conv2d_oracle(squeezed, p.residual);
    pnf::FeatureMap repaired = fc;
    for (std::size_t i = 0; i < repaired.data.size(); ++i) repaired.data[i] += res.data[i];
    const pnf::FeatureMap gated = se_oracle(concat_oracle(fe, repaired), p.se);
    return conv2d_oracle(gated, p.reduce);
}

inline double max_abs_diff(const pnf::FeatureMap& a, const pnf::FeatureMap& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i)
        m = std::max(m, std::abs(a.data[i] - b.data[i]));
    return m;
}

}  // namespace oracle
