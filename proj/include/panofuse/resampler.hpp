// Precomputed bilinear sampling grids between the equirectangular and
// cubemap projections, plus tangent-plane (gnomonic) sampling grids.
//
// Pixel-center convention: ERP pixel (i, j) samples the ray at
//   phi = 2*pi*(j + 0.5)/W,  theta = pi/2 - pi*(i + 0.5)/H,
// and continuous ERP coordinates are x = phi*W/(2*pi) - 0.5,
// y = (pi/2 - theta)*H/pi - 0.5. Cube faces use the same half-pixel offset.
// Grids are built once per resolution and are immutable afterwards;
// coordinates are stored as 32-bit floats so a serialized grid reapplies
// bit-exactly.

#pragma once

#include <cstdint>
#include <vector>

#include "panofuse/feature_map.hpp"
#include "panofuse/sphere.hpp"

namespace pnf {

enum class WrapMode { kClamp, kWrapX };
enum class BoundaryMode { kClampFace, kPaddedFace };

// Per ERP pixel: owning cube face and continuous in-face coordinates.
struct C2EGrid {
    int height = 0;
    int width = 0;
    int side = 0;
    std::vector<std::uint8_t> face;  // FaceId per pixel
    std::vector<float> u, v;         // in [0, side]

    std::size_t size() const { return face.size(); }
};

// Per cube-face pixel (faces in kFaceOrder): fractional ERP coordinates.
struct E2CGrid {
    int side = 0;
    int height = 0;
    int width = 0;
    std::vector<float> x;  // in [0, width) after wrap normalization
    std::vector<float> y;  // in [0, height - 1]

    std::size_t size() const { return x.size(); }
};

// Per ERP row: k*k gnomonic sampling offsets, relative to the pixel.
// Offsets are row-invariant in longitude: pixel (i, j) samples at
// (j + dx[t], i + dy[t]) for t in [0, k*k).
struct TangentGrid {
    int height = 0;
    int width = 0;
    int k = 0;
    std::vector<float> dx, dy;  // [row][t], t = a*k + b over the k x k stencil

    const float* row_dx(int i) const { return dx.data() + static_cast<std::size_t>(i) * k * k; }
    const float* row_dy(int i) const { return dy.data() + static_cast<std::size_t>(i) * k * k; }
};

// Requires width == 2*height and side >= 2.
C2EGrid build_c2e_grid(int height, int width, int side);

// Requires width == 2*height and side >= 2.
E2CGrid build_e2c_grid(int side, int height, int width);

// k odd and >= 3; width == 2*height. The tangent-plane grid spacing equals
// one ERP pixel angular step (2*pi/width) at the equator.
TangentGrid build_tangent_grid(int height, int width, int k);

// Standard bilinear blend of the four neighbors of (x, y) in pixel-index
// space, one value per channel. Rows always clamp; columns clamp or wrap
// according to `wrap`. Non-finite coordinates are rejected.
std::vector<double> bilinear_sample(const FeatureMap& img, double x, double y, WrapMode wrap);

// Resamples a cubemap onto the ERP grid. kClampFace confines each bilinear
// footprint to its own face (which cracks at face seams); kPaddedFace
// cube-pads every face by one pixel first so seam taps read the true
// neighbor content.
FeatureMap apply_c2e(const CubeFeatureMap& cube, const C2EGrid& grid, BoundaryMode boundary);

// Resamples an ERP map onto the six cube faces (horizontal wrap, vertical
// clamp).
CubeFeatureMap apply_e2c(const FeatureMap& erp, const E2CGrid& grid);

// Horizontal circular shift by `shift` columns (reduced modulo width):
// output column j takes input column (j - shift) mod width.
FeatureMap yaw_roll(const FeatureMap& erp, int shift);

}  // namespace pnf
