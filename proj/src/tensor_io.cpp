#include "panofuse/tensor_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <memory>
#include <stdexcept>

namespace pnf {

namespace {

constexpr char kMagic[4] = {'P', 'N', 'F', '1'};
constexpr std::uint32_t kMaxRank = 5;

static_assert(sizeof(float) == 4, "float must be 32-bit");

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::string& path, const char* mode) {
    FilePtr f(std::fopen(path.c_str(), mode));
    if (!f) throw std::runtime_error("cannot open '" + path + "'");
    return f;
}

void put_u32(std::FILE* f, std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                          static_cast<unsigned char>(v >> 16),
                          static_cast<unsigned char>(v >> 24)};
    if (std::fwrite(b, 1, 4, f) != 4) throw std::runtime_error("tensor write failed");
}

std::uint32_t get_u32(std::FILE* f) {
    unsigned char b[4];
    if (std::fread(b, 1, 4, f) != 4) throw std::runtime_error("tensor file truncated");
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

void check_rank(const TensorContainer& t, std::size_t rank, const char* what) {
    if (t.dims.size() != rank)
        throw std::invalid_argument(std::string(what) + ": expected rank " +
                                    std::to_string(rank) + " tensor");
}

}  // namespace

std::size_t TensorContainer::element_count() const {
    std::size_t n = 1;
    for (std::uint32_t d : dims) n *= d;
    return dims.empty() ? 0 : n;
}

void write_tensor(const std::string& path, const TensorContainer& tensor) {
    if (tensor.dims.empty() || tensor.dims.size() > kMaxRank)
        throw std::invalid_argument("write_tensor: rank must be in [1, 5]");
    if (tensor.data.size() != tensor.element_count())
        throw std::invalid_argument("write_tensor: payload size does not match dims");
    FilePtr f = open_file(path, "wb");
    if (std::fwrite(kMagic, 1, 4, f.get()) != 4) throw std::runtime_error("tensor write failed");
    put_u32(f.get(), static_cast<std::uint32_t>(tensor.dims.size()));
    for (std::uint32_t d : tensor.dims) put_u32(f.get(), d);
    for (float v : tensor.data) {
        std::uint32_t bits;
        std::memcpy(&bits, &v, 4);
        put_u32(f.get(), bits);
    }
}

TensorContainer read_tensor(const std::string& path) {
    FilePtr f = open_file(path, "rb");
    char magic[4];
    if (std::fread(magic, 1, 4, f.get()) != 4 || std::memcmp(magic, kMagic, 4) != 0)
        throw std::runtime_error("'" + path + "' is not a PNF1 tensor");
    const std::uint32_t rank = get_u32(f.get());
    if (rank == 0 || rank > kMaxRank)
        throw std::runtime_error("'" + path + "': bad tensor rank");
    TensorContainer t;
    t.dims.resize(rank);
    for (std::uint32_t& d : t.dims) d = get_u32(f.get());
    t.data.resize(t.element_count());
    for (float& v : t.data) {
        const std::uint32_t bits = get_u32(f.get());
        std::memcpy(&v, &bits, 4);
    }
    // Trailing bytes mean the header lied about the shape.
    unsigned char extra;
    if (std::fread(&extra, 1, 1, f.get()) == 1)
        throw std::runtime_error("'" + path + "': trailing bytes after payload");
    return t;
}

TensorContainer to_tensor(const FeatureMap& map) {
    TensorContainer t;
    t.dims = {static_cast<std::uint32_t>(map.channels), static_cast<std::uint32_t>(map.height),
              static_cast<std::uint32_t>(map.width)};
    t.data.assign(map.data.begin(), map.data.end());
    return t;
}

TensorContainer to_tensor(const CubeFeatureMap& cube) {
    TensorContainer t;
    t.dims = {kNumFaces, static_cast<std::uint32_t>(cube.channels),
              static_cast<std::uint32_t>(cube.side), static_cast<std::uint32_t>(cube.side)};
    t.data.assign(cube.data.begin(), cube.data.end());
    return t;
}

FeatureMap feature_map_from_tensor(const TensorContainer& tensor) {
    check_rank(tensor, 3, "feature_map_from_tensor");
    FeatureMap map(static_cast<int>(tensor.dims[0]), static_cast<int>(tensor.dims[1]),
                   static_cast<int>(tensor.dims[2]));
    map.data.assign(tensor.data.begin(), tensor.data.end());
    return map;
}

CubeFeatureMap cube_map_from_tensor(const TensorContainer& tensor) {
    check_rank(tensor, 4, "cube_map_from_tensor");
    if (tensor.dims[0] != kNumFaces)
        throw std::invalid_argument("cube_map_from_tensor: leading dim must be 6");
    if (tensor.dims[2] != tensor.dims[3])
        throw std::invalid_argument("cube_map_from_tensor: faces must be square");
    CubeFeatureMap cube(static_cast<int>(tensor.dims[1]), static_cast<int>(tensor.dims[2]));
    cube.data.assign(tensor.data.begin(), tensor.data.end());
    return cube;
}

TensorContainer to_tensor(const C2EGrid& grid) {
    TensorContainer t;
    t.dims = {3, static_cast<std::uint32_t>(grid.height), static_cast<std::uint32_t>(grid.width)};
    t.data.reserve(3 * grid.size());
    for (std::uint8_t f : grid.face) t.data.push_back(static_cast<float>(f));
    t.data.insert(t.data.end(), grid.u.begin(), grid.u.end());
    t.data.insert(t.data.end(), grid.v.begin(), grid.v.end());
    return t;
}

C2EGrid c2e_grid_from_tensor(const TensorContainer& tensor, int side) {
    check_rank(tensor, 3, "c2e_grid_from_tensor");
    if (tensor.dims[0] != 3)
        throw std::invalid_argument("c2e_grid_from_tensor: expected [3, H, W]");
    if (side < 2) throw std::invalid_argument("c2e_grid_from_tensor: side must be >= 2");
    C2EGrid grid;
    grid.height = static_cast<int>(tensor.dims[1]);
    grid.width = static_cast<int>(tensor.dims[2]);
    grid.side = side;
    const std::size_t n = static_cast<std::size_t>(grid.height) * grid.width;
    grid.face.resize(n);
    grid.u.resize(n);
    grid.v.resize(n);
    for (std::size_t p = 0; p < n; ++p) {
        const float f = tensor.data[p];
        // Range check first: casting a NaN/out-of-range float is undefined.
        if (!(f >= 0.0f && f <= 5.0f) || f != static_cast<float>(static_cast<int>(f)))
            throw std::invalid_argument("c2e_grid_from_tensor: bad face id plane");
        grid.face[p] = static_cast<std::uint8_t>(f);
        grid.u[p] = tensor.data[n + p];
        grid.v[p] = tensor.data[2 * n + p];
        if (!(grid.u[p] >= 0.0f && grid.u[p] <= static_cast<float>(side)) ||
            !(grid.v[p] >= 0.0f && grid.v[p] <= static_cast<float>(side)))
            throw std::invalid_argument("c2e_grid_from_tensor: coordinates exceed face side");
    }
    return grid;
}

TensorContainer to_tensor(const E2CGrid& grid) {
    TensorContainer t;
    t.dims = {kNumFaces, 2, static_cast<std::uint32_t>(grid.side),
              static_cast<std::uint32_t>(grid.side)};
    const std::size_t face_px = static_cast<std::size_t>(grid.side) * grid.side;
    t.data.reserve(2 * kNumFaces * face_px);
    for (int f = 0; f < kNumFaces; ++f) {
        t.data.insert(t.data.end(), grid.x.begin() + f * face_px,
                      grid.x.begin() + (f + 1) * face_px);
        t.data.insert(t.data.end(), grid.y.begin() + f * face_px,
                      grid.y.begin() + (f + 1) * face_px);
    }
    return t;
}

E2CGrid e2c_grid_from_tensor(const TensorContainer& tensor, int height, int width) {
    check_rank(tensor, 4, "e2c_grid_from_tensor");
    if (tensor.dims[0] != kNumFaces || tensor.dims[1] != 2 || tensor.dims[2] != tensor.dims[3])
        throw std::invalid_argument("e2c_grid_from_tensor: expected [6, 2, r, r]");
    E2CGrid grid;
    grid.side = static_cast<int>(tensor.dims[2]);
    grid.height = height;
    grid.width = width;
    const std::size_t face_px = static_cast<std::size_t>(grid.side) * grid.side;
    grid.x.resize(kNumFaces * face_px);
    grid.y.resize(kNumFaces * face_px);
    for (int f = 0; f < kNumFaces; ++f) {
        const float* src = tensor.data.data() + 2 * f * face_px;
        std::copy(src, src + face_px, grid.x.begin() + f * face_px);
        std::copy(src + face_px, src + 2 * face_px, grid.y.begin() + f * face_px);
    }
    for (float v : grid.x)
        if (!(v >= 0.0f && v < static_cast<float>(width)))
            throw std::invalid_argument("e2c_grid_from_tensor: x outside [0, W)");
    for (float v : grid.y)
        if (!(v >= 0.0f && v <= static_cast<float>(height - 1)))
            throw std::invalid_argument("e2c_grid_from_tensor: y outside [0, H-1]");
    return grid;
}

TensorContainer to_tensor(const TangentGrid& grid) {
    TensorContainer t;
    t.dims = {static_cast<std::uint32_t>(grid.height),
              static_cast<std::uint32_t>(grid.k * grid.k), 2};
    t.data.reserve(grid.dx.size() * 2);
    for (std::size_t p = 0; p < grid.dx.size(); ++p) {
        t.data.push_back(grid.dx[p]);
        t.data.push_back(grid.dy[p]);
    }
    return t;
}

TangentGrid tangent_grid_from_tensor(const TensorContainer& tensor) {
    check_rank(tensor, 3, "tangent_grid_from_tensor");
    if (tensor.dims[2] != 2)
        throw std::invalid_argument("tangent_grid_from_tensor: expected [H, k*k, 2]");
    const int kk = static_cast<int>(tensor.dims[1]);
    const int k = static_cast<int>(std::lround(std::sqrt(static_cast<double>(kk))));
    if (k * k != kk)
        throw std::invalid_argument("tangent_grid_from_tensor: stencil size is not square");
    TangentGrid grid;
    grid.height = static_cast<int>(tensor.dims[0]);
    grid.width = 2 * grid.height;
    grid.k = k;
    const std::size_t n = static_cast<std::size_t>(grid.height) * kk;
    grid.dx.resize(n);
    grid.dy.resize(n);
    for (std::size_t p = 0; p < n; ++p) {
        grid.dx[p] = tensor.data[2 * p];
        grid.dy[p] = tensor.data[2 * p + 1];
    }
    return grid;
}

}  // namespace pnf
