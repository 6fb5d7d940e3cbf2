// Flat float-tensor container and its conversions.
//
// File layout (all integers and floats little-endian):
//   magic "PNF1" | u32 rank (<= 5) | rank x u32 dims | float32 payload,
// payload in row-major order with product(dims) elements. Cube tensors use
// a leading dim of 6 in face order B, D, F, L, R, U.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "panofuse/feature_map.hpp"
#include "panofuse/resampler.hpp"

namespace pnf {

struct TensorContainer {
    std::vector<std::uint32_t> dims;
    std::vector<float> data;

    std::size_t element_count() const;
};

void write_tensor(const std::string& path, const TensorContainer& tensor);
TensorContainer read_tensor(const std::string& path);

// FeatureMap <-> rank-3 [C, H, W]; CubeFeatureMap <-> rank-4 [6, C, r, r].
TensorContainer to_tensor(const FeatureMap& map);
TensorContainer to_tensor(const CubeFeatureMap& cube);
FeatureMap feature_map_from_tensor(const TensorContainer& tensor);
CubeFeatureMap cube_map_from_tensor(const TensorContainer& tensor);

// Grid exports. Grids store float32 coordinates, so a round trip through the
// container reapplies bit-exactly. The containers carry coordinates only;
// importing a C2E grid needs the cube face side and importing an E2C grid
// needs the ERP frame it samples from.
//   C2E:     [3, H, W]      planes: face id, u, v
//   E2C:     [6, 2, r, r]   per face: x plane, y plane
//   tangent: [H, k*k, 2]    per row offsets (dx, dy)
TensorContainer to_tensor(const C2EGrid& grid);
TensorContainer to_tensor(const E2CGrid& grid);
TensorContainer to_tensor(const TangentGrid& grid);
C2EGrid c2e_grid_from_tensor(const TensorContainer& tensor, int side);
E2CGrid e2c_grid_from_tensor(const TensorContainer& tensor, int height, int width);
TangentGrid tangent_grid_from_tensor(const TensorContainer& tensor);

}  // namespace pnf
