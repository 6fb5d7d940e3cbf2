// Dense multi-channel feature arrays. FeatureMap stores channel-major,
// row-major data; CubeFeatureMap adds a leading face axis of size 6 in the
// fixed B, D, F, L, R, U order.

#pragma once

#include <cstddef>
#include <vector>

#include "panofuse/sphere.hpp"

namespace pnf {

struct FeatureMap {
    int channels = 0;
    int height = 0;
    int width = 0;
    std::vector<double> data;  // [c][row][col]

    FeatureMap() = default;
    FeatureMap(int c, int h, int w)
        : channels(c), height(h), width(w),
          data(static_cast<std::size_t>(c) * h * w, 0.0) {}

    std::size_t index(int c, int i, int j) const {
        return (static_cast<std::size_t>(c) * height + i) * width + j;
    }
    double& at(int c, int i, int j) { return data[index(c, i, j)]; }
    double at(int c, int i, int j) const { return data[index(c, i, j)]; }

    const double* channel(int c) const {
        return data.data() + static_cast<std::size_t>(c) * height * width;
    }
    double* channel(int c) {
        return data.data() + static_cast<std::size_t>(c) * height * width;
    }

    bool same_shape(const FeatureMap& o) const {
        return channels == o.channels && height == o.height && width == o.width;
    }
};

struct CubeFeatureMap {
    int channels = 0;
    int side = 0;
    std::vector<double> data;  // [face][c][row][col], faces in kFaceOrder

    CubeFeatureMap() = default;
    CubeFeatureMap(int c, int r)
        : channels(c), side(r),
          data(static_cast<std::size_t>(kNumFaces) * c * r * r, 0.0) {}

    std::size_t index(int f, int c, int y, int x) const {
        return ((static_cast<std::size_t>(f) * channels + c) * side + y) * side + x;
    }
    double& at(int f, int c, int y, int x) { return data[index(f, c, y, x)]; }
    double at(int f, int c, int y, int x) const { return data[index(f, c, y, x)]; }

    const double* face_channel(int f, int c) const {
        return data.data() + (static_cast<std::size_t>(f) * channels + c) * side * side;
    }
    double* face_channel(int f, int c) {
        return data.data() + (static_cast<std::size_t>(f) * channels + c) * side * side;
    }
};

}  // namespace pnf
