// Internal bilinear tap helpers shared by the resampler and padding
// translation units. The lerp form keeps constant inputs bit-exact
// (weights implicitly sum to one).

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>

namespace pnf::detail {

inline double lerp(double a, double b, double t) { return a + t * (b - a); }

struct Tap {
    int x0, x1, y0, y1;
    double fx, fy;
};

inline int wrap_col(int x, int w) {
    x %= w;
    return x < 0 ? x + w : x;
}

inline Tap make_tap(double x, double y, int w, int h, bool wrap_x) {
    Tap t;
    const double xf = std::floor(x);
    const double yf = std::floor(y);
    t.fx = x - xf;
    t.fy = y - yf;
    const int x0 = static_cast<int>(xf);
    const int y0 = static_cast<int>(yf);
    if (wrap_x) {
        t.x0 = wrap_col(x0, w);
        t.x1 = wrap_col(x0 + 1, w);
    } else {
        t.x0 = std::clamp(x0, 0, w - 1);
        t.x1 = std::clamp(x0 + 1, 0, w - 1);
    }
    t.y0 = std::clamp(y0, 0, h - 1);
    t.y1 = std::clamp(y0 + 1, 0, h - 1);
    return t;
}

inline double sample_plane(const double* plane, int w, const Tap& t) {
    const double v00 = plane[static_cast<std::size_t>(t.y0) * w + t.x0];
    const double v01 = plane[static_cast<std::size_t>(t.y0) * w + t.x1];
    const double v10 = plane[static_cast<std::size_t>(t.y1) * w + t.x0];
    const double v11 = plane[static_cast<std::size_t>(t.y1) * w + t.x1];
    return lerp(lerp(v00, v01, t.fx), lerp(v10, v11, t.fx), t.fy);
}

}  // namespace pnf::detail
