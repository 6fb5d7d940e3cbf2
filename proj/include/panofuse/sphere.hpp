// Coordinate math between angular positions on the sphere, 3D directions,
// and cube-face pixel coordinates.
//
// Conventions:
//   - longitude phi in [0, 2*pi), latitude theta in [-pi/2, pi/2],
//     theta = 0 at the equator, theta = +pi/2 at the +y pole.
//   - unit direction for (phi, theta) is
//     (sin(phi)*cos(theta), sin(theta), cos(phi)*cos(theta)).
//   - the six cube faces look along B:-z D:-y F:+z L:+x R:-x U:+y and are
//     stored in that (alphabetical) order everywhere.
//   - face pixel coordinates (u, v) live in [0, side]; the optical axis
//     passes through (side/2, side/2) and the face plane sits at distance
//     side/2 (90 degree field of view per face).

#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace pnf {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;
inline constexpr double kHalfPi = 0.5 * kPi;

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }

    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    double norm() const { return std::sqrt(dot(*this)); }
    Vec3 normalized() const;
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

// Longitude/latitude pair. Construction reduces phi modulo 2*pi and rejects
// theta outside [-pi/2, pi/2] (a hair of fp slack is clamped).
struct AngularCoord {
    double phi = 0.0;
    double theta = 0.0;

    AngularCoord() = default;
    AngularCoord(double phi_in, double theta_in);
};

enum class FaceId : std::uint8_t { B = 0, D = 1, F = 2, L = 3, R = 4, U = 5 };

inline constexpr int kNumFaces = 6;
inline constexpr std::array<FaceId, kNumFaces> kFaceOrder = {
    FaceId::B, FaceId::D, FaceId::F, FaceId::L, FaceId::R, FaceId::U};

char face_letter(FaceId f);
FaceId face_from_letter(char c);  // accepts 'B','D','F','L','R','U' (either case)

// Outward axis the face's camera points along.
Vec3 looking_direction(FaceId f);

// Row-major 3x3 matrix.
struct Mat3 {
    std::array<double, 9> m{};

    static Mat3 identity();
    Vec3 operator*(const Vec3& v) const {
        return {m[0] * v.x + m[1] * v.y + m[2] * v.z,
                m[3] * v.x + m[4] * v.y + m[5] * v.z,
                m[6] * v.x + m[7] * v.y + m[8] * v.z};
    }
    Mat3 transposed() const;
};

// Continuous pixel position on one cube face; u, v in [0, side].
struct FacePixel {
    FaceId face = FaceId::F;
    double u = 0.0;
    double v = 0.0;
    double side = 0.0;
};

// (phi, theta) -> unit direction. Total on valid inputs.
Vec3 angular_to_unit(const AngularCoord& a);

// Inverse of angular_to_unit. Requires |v| = 1 within 1e-9; at the poles the
// longitude is canonicalized to 0.
AngularCoord unit_to_angular(const Vec3& v);

// Face whose looking direction is angularly closest to v (maximum dot
// product). Ties break by fixed priority F > B > L > R > U > D. v must be
// nonzero. Invariant under positive scaling of v.
FaceId face_of(const Vec3& v);

// Rotation taking face-local coordinates to world coordinates;
// face_rotation(f) * (0,0,1) is exactly looking_direction(f) and
// face_rotation(F) is the identity. All six are single-axis 90 or 180
// degree rotations with integer entries.
const Mat3& face_rotation(FaceId f);

// Projects a face pixel onto the sphere of the given radius:
// s * R_f * P where P = (u - side/2, v - side/2, side/2) and s = radius/|P|.
Vec3 face_point_to_sphere(const FacePixel& p, double radius);

// Inverse projection: picks the owning face via face_of, then intersects the
// ray with that face plane. Resulting u, v are clamped into [0, side].
FacePixel sphere_to_face_point(const Vec3& v, double side);

}  // namespace pnf
