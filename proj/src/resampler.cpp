#include "panofuse/resampler.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "bilinear_detail.hpp"
#include "panofuse/padding.hpp"

namespace pnf {

using detail::Tap;
using detail::make_tap;
using detail::sample_plane;
using detail::wrap_col;

namespace {

void check_erp_dims(int height, int width) {
    if (height < 1 || width != 2 * height)
        throw std::invalid_argument("ERP dimensions must satisfy W = 2H, got " +
                                    std::to_string(height) + "x" + std::to_string(width));
}

Vec3 erp_pixel_ray(int i, int j, int height, int width) {
    const double phi = kTwoPi * (j + 0.5) / width;
    const double theta = kHalfPi - kPi * (i + 0.5) / height;
    return angular_to_unit(AngularCoord(phi, theta));
}

}  // namespace

C2EGrid build_c2e_grid(int height, int width, int side) {
    check_erp_dims(height, width);
    if (side < 2) throw std::invalid_argument("build_c2e_grid: side must be >= 2");
    C2EGrid grid;
    grid.height = height;
    grid.width = width;
    grid.side = side;
    const std::size_t n = static_cast<std::size_t>(height) * width;
    grid.face.resize(n);
    grid.u.resize(n);
    grid.v.resize(n);
    std::size_t p = 0;
    for (int i = 0; i < height; ++i) {
        for (int j = 0; j < width; ++j, ++p) {
            const FacePixel fp = sphere_to_face_point(erp_pixel_ray(i, j, height, width),
                                                      static_cast<double>(side));
            grid.face[p] = static_cast<std::uint8_t>(fp.face);
            grid.u[p] = static_cast<float>(fp.u);
            grid.v[p] = static_cast<float>(fp.v);
        }
    }
    return grid;
}

E2CGrid build_e2c_grid(int side, int height, int width) {
    check_erp_dims(height, width);
    if (side < 2) throw std::invalid_argument("build_e2c_grid: side must be >= 2");
    E2CGrid grid;
    grid.side = side;
    grid.height = height;
    grid.width = width;
    const std::size_t n = static_cast<std::size_t>(kNumFaces) * side * side;
    grid.x.resize(n);
    grid.y.resize(n);
    std::size_t p = 0;
    for (FaceId f : kFaceOrder) {
        for (int pi = 0; pi < side; ++pi) {
            for (int pj = 0; pj < side; ++pj, ++p) {
                FacePixel fp;
                fp.face = f;
                fp.u = pj + 0.5;
                fp.v = pi + 0.5;
                fp.side = side;
                const AngularCoord a = unit_to_angular(face_point_to_sphere(fp, 1.0));
                double x = a.phi * width / kTwoPi - 0.5;  // in [-0.5, W - 0.5]
                // Sampling wraps columns and clamps rows, so normalizing here
                // does not change what gets sampled.
                if (x < 0.0) x += width;  // seam column
                if (x >= width) x = 0.0;  // fp-rounded full wrap
                const double y = std::clamp((kHalfPi - a.theta) * height / kPi - 0.5, 0.0,
                                            static_cast<double>(height - 1));
                grid.x[p] = static_cast<float>(x);
                grid.y[p] = static_cast<float>(y);
            }
        }
    }
    return grid;
}

TangentGrid build_tangent_grid(int height, int width, int k) {
    check_erp_dims(height, width);
    if (k < 3 || k % 2 == 0)
        throw std::invalid_argument("build_tangent_grid: k must be odd and >= 3");
    TangentGrid grid;
    grid.height = height;
    grid.width = width;
    grid.k = k;
    grid.dx.resize(static_cast<std::size_t>(height) * k * k);
    grid.dy.resize(grid.dx.size());
    const int h = k / 2;
    const double step = std::tan(kTwoPi / width);  // one equatorial pixel on the tangent plane
    // Offsets are longitude-invariant, so compute them once per row at the
    // reference column j = 0.
    const double phi0 = kTwoPi * 0.5 / width;
    for (int i = 0; i < height; ++i) {
        const double theta0 = kHalfPi - kPi * (i + 0.5) / height;
        const Vec3 n = angular_to_unit(AngularCoord(phi0, theta0));
        // Unit east (increasing phi) and image-down (decreasing theta).
        const Vec3 east{std::cos(phi0), 0.0, -std::sin(phi0)};
        const Vec3 down{std::sin(phi0) * std::sin(theta0), -std::cos(theta0),
                        std::cos(phi0) * std::sin(theta0)};
        std::size_t t = static_cast<std::size_t>(i) * k * k;
        for (int sy = -h; sy <= h; ++sy) {
            for (int sx = -h; sx <= h; ++sx, ++t) {
                const Vec3 pt = n + step * (sx * east + sy * down);
                const AngularCoord a = unit_to_angular(pt.normalized());
                double dphi = a.phi - phi0;
                if (dphi > kPi) dphi -= kTwoPi;
                if (dphi <= -kPi) dphi += kTwoPi;
                const double y_abs = (kHalfPi - a.theta) * height / kPi - 0.5;
                grid.dx[t] = static_cast<float>(dphi * width / kTwoPi);
                grid.dy[t] = static_cast<float>(y_abs - i);
            }
        }
    }
    return grid;
}

std::vector<double> bilinear_sample(const FeatureMap& img, double x, double y, WrapMode wrap) {
    if (img.channels < 1 || img.height < 1 || img.width < 1)
        throw std::invalid_argument("bilinear_sample: empty image");
    if (!std::isfinite(x) || !std::isfinite(y))
        throw std::invalid_argument("bilinear_sample: non-finite coordinates");
    const Tap t = make_tap(x, y, img.width, img.height, wrap == WrapMode::kWrapX);
    std::vector<double> out(img.channels);
    for (int c = 0; c < img.channels; ++c)
        out[c] = sample_plane(img.channel(c), img.width, t);
    return out;
}

FeatureMap apply_c2e(const CubeFeatureMap& cube, const C2EGrid& grid, BoundaryMode boundary) {
    if (cube.side != grid.side)
        throw std::invalid_argument("apply_c2e: cube side does not match grid");
    const bool padded = boundary == BoundaryMode::kPaddedFace;
    const CubeFeatureMap* src = &cube;
    CubeFeatureMap padded_cube;
    if (padded) {
        padded_cube = cube_pad(cube, 1);
        src = &padded_cube;
    }
    const int r = src->side;
    const double shift = padded ? 0.5 : -0.5;  // face coord -> pixel index (+1 pad offset)

    const std::size_t n = grid.size();
    std::vector<Tap> taps(n);
    for (std::size_t p = 0; p < n; ++p)
        taps[p] = make_tap(grid.u[p] + shift, grid.v[p] + shift, r, r, false);

    FeatureMap out(cube.channels, grid.height, grid.width);
    for (int c = 0; c < cube.channels; ++c) {
        double* dst = out.channel(c);
        for (std::size_t p = 0; p < n; ++p)
            dst[p] = sample_plane(src->face_channel(grid.face[p], c), r, taps[p]);
    }
    return out;
}

CubeFeatureMap apply_e2c(const FeatureMap& erp, const E2CGrid& grid) {
    if (erp.height != grid.height || erp.width != grid.width)
        throw std::invalid_argument("apply_e2c: ERP dimensions do not match grid");
    const std::size_t n = grid.size();
    std::vector<Tap> taps(n);
    for (std::size_t p = 0; p < n; ++p)
        taps[p] = make_tap(grid.x[p], grid.y[p], erp.width, erp.height, true);

    CubeFeatureMap out(erp.channels, grid.side);
    const std::size_t face_px = static_cast<std::size_t>(grid.side) * grid.side;
    for (int f = 0; f < kNumFaces; ++f) {
        for (int c = 0; c < erp.channels; ++c) {
            const double* plane = erp.channel(c);
            double* dst = out.face_channel(f, c);
            const Tap* face_taps = taps.data() + f * face_px;
            for (std::size_t p = 0; p < face_px; ++p)
                dst[p] = sample_plane(plane, erp.width, face_taps[p]);
        }
    }
    return out;
}

FeatureMap yaw_roll(const FeatureMap& erp, int shift) {
    const int w = erp.width;
    if (w == 0) return erp;
    shift = wrap_col(shift, w);
    FeatureMap out(erp.channels, erp.height, erp.width);
    for (int c = 0; c < erp.channels; ++c) {
        for (int i = 0; i < erp.height; ++i) {
            const double* src = erp.channel(c) + static_cast<std::size_t>(i) * w;
            double* dst = out.channel(c) + static_cast<std::size_t>(i) * w;
            for (int j = 0; j < w; ++j)
                dst[j] = src[(j - shift + w) % w];
        }
    }
    return out;
}

}  // namespace pnf
