#include "panofuse/padding.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "bilinear_detail.hpp"
#include "panofuse/sphere.hpp"

namespace pnf {

namespace {

// Source location for one out-of-face border pixel: the owning neighbor face
// and the extended ray's continuous coordinates there.
struct BorderSource {
    int pi, pj;      // destination pixel in the padded face
    int face;        // owning neighbor face
    double u, v;     // continuous coords on the neighbor, in [0, side]
};

std::vector<BorderSource> trace_border(int r, int pad, FaceId f) {
    const int rp = r + 2 * pad;
    std::vector<BorderSource> border;
    border.reserve(static_cast<std::size_t>(rp) * rp - static_cast<std::size_t>(r) * r);
    for (int pi = 0; pi < rp; ++pi) {
        for (int pj = 0; pj < rp; ++pj) {
            const bool interior = pi >= pad && pi < pad + r && pj >= pad && pj < pad + r;
            if (interior) continue;
            // Extend the face's own pixel grid beyond its 90 degree FOV and
            // cast the ray; outside the FOV the owner is always a neighbor.
            const double u = pj - pad + 0.5;
            const double v = pi - pad + 0.5;
            const Vec3 dir = face_rotation(f) * Vec3{u - 0.5 * r, v - 0.5 * r, 0.5 * r};
            const FacePixel owner = sphere_to_face_point(dir, static_cast<double>(r));
            border.push_back({pi, pj, static_cast<int>(owner.face), owner.u, owner.v});
        }
    }
    return border;
}

template <typename Fill>
CubeFeatureMap pad_faces(const CubeFeatureMap& cube, int pad, Fill fill) {
    if (pad < 1 || pad >= cube.side)
        throw std::invalid_argument("cube padding requires 1 <= p < r");
    const int r = cube.side;
    CubeFeatureMap out(cube.channels, r + 2 * pad);
    for (int f = 0; f < kNumFaces; ++f) {
        // Interior: bit-exact copy of the input face.
        for (int c = 0; c < cube.channels; ++c) {
            const double* src = cube.face_channel(f, c);
            double* dst = out.face_channel(f, c);
            for (int y = 0; y < r; ++y)
                for (int x = 0; x < r; ++x)
                    dst[static_cast<std::size_t>(y + pad) * out.side + (x + pad)] =
                        src[static_cast<std::size_t>(y) * r + x];
        }
        for (const BorderSource& b : trace_border(r, pad, static_cast<FaceId>(f)))
            for (int c = 0; c < cube.channels; ++c)
                out.at(f, c, b.pi, b.pj) = fill(b, c);
    }
    return out;
}

}  // namespace

FeatureMap circular_pad(const FeatureMap& erp, int pad) {
    if (pad < 0 || pad > erp.width)
        throw std::invalid_argument("circular_pad requires 0 <= p <= W");
    const int h = erp.height, w = erp.width, p = pad;
    FeatureMap out(erp.channels, h + 2 * p, w + 2 * p);
    for (int c = 0; c < erp.channels; ++c) {
        const double* src = erp.channel(c);
        double* dst = out.channel(c);
        for (int i = 0; i < h; ++i) {
            const double* srow = src + static_cast<std::size_t>(i) * w;
            double* drow = dst + static_cast<std::size_t>(i + p) * out.width;
            for (int jo = 0; jo < out.width; ++jo)
                drow[jo] = srow[detail::wrap_col(jo - p, w)];
        }
        // Vertical: replicate the nearest (already wrapped) row.
        for (int i = 0; i < p; ++i) {
            const double* top = dst + static_cast<std::size_t>(p) * out.width;
            const double* bot = dst + static_cast<std::size_t>(p + h - 1) * out.width;
            std::copy(top, top + out.width, dst + static_cast<std::size_t>(i) * out.width);
            std::copy(bot, bot + out.width,
                      dst + static_cast<std::size_t>(p + h + i) * out.width);
        }
    }
    return out;
}

CubeFeatureMap cube_pad(const CubeFeatureMap& cube, int pad) {
    const int r = cube.side;
    return pad_faces(cube, pad, [&](const BorderSource& b, int c) {
        // Nearest pixel of the owning face.
        const int x = std::clamp(static_cast<int>(std::floor(b.u)), 0, r - 1);
        const int y = std::clamp(static_cast<int>(std::floor(b.v)), 0, r - 1);
        return cube.at(b.face, c, y, x);
    });
}

CubeFeatureMap spherical_pad(const CubeFeatureMap& cube, int pad) {
    const int r = cube.side;
    return pad_faces(cube, pad, [&](const BorderSource& b, int c) {
        const detail::Tap t = detail::make_tap(b.u - 0.5, b.v - 0.5, r, r, false);
        return detail::sample_plane(cube.face_channel(b.face, c), r, t);
    });
}

}  // namespace pnf
