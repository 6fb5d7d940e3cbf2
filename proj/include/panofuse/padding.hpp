// Panorama padding schemes.
//
// circular_pad wraps the ERP image horizontally (longitude is periodic) and
// replicates the nearest row vertically. cube_pad and spherical_pad extend
// every cube face beyond its 90 degree field of view: cube_pad copies the
// nearest pixel of the geometrically adjacent face, spherical_pad bilinearly
// samples the adjacent face at the extended ray's true position. Corner
// pixels touch two neighbor faces and are resolved by face_of's fixed
// tie-break priority. All three preserve the interior region bit-exactly.

#pragma once

#include "panofuse/feature_map.hpp"

namespace pnf {

// Output is channels x (H + 2p) x (W + 2p). Requires 0 <= p <= W.
FeatureMap circular_pad(const FeatureMap& erp, int pad);

// Output faces have side r + 2p. Requires 1 <= p < r. Nearest-neighbor copy,
// no interpolation.
CubeFeatureMap cube_pad(const CubeFeatureMap& cube, int pad);

// Same contract as cube_pad but bilinear interpolation on the owning face.
CubeFeatureMap spherical_pad(const CubeFeatureMap& cube, int pad);

}  // namespace pnf
