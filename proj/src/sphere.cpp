#include "panofuse/sphere.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

namespace pnf {

namespace {

double wrap_longitude(double phi) {
    phi = std::fmod(phi, kTwoPi);
    if (phi < 0.0) phi += kTwoPi;
    if (phi >= kTwoPi) phi = 0.0;  // fmod result that rounded up to 2*pi
    return phi;
}

}  // namespace

Vec3 Vec3::normalized() const {
    const double n = norm();
    if (n == 0.0) throw std::invalid_argument("Vec3::normalized: zero vector");
    return {x / n, y / n, z / n};
}

AngularCoord::AngularCoord(double phi_in, double theta_in) {
    if (!std::isfinite(phi_in) || !std::isfinite(theta_in))
        throw std::invalid_argument("AngularCoord: non-finite angles");
    if (std::abs(theta_in) > kHalfPi + 1e-12)
        throw std::invalid_argument("AngularCoord: theta out of [-pi/2, pi/2]: " +
                                    std::to_string(theta_in));
    phi = wrap_longitude(phi_in);
    theta = std::clamp(theta_in, -kHalfPi, kHalfPi);
}

char face_letter(FaceId f) {
    static constexpr char kLetters[kNumFaces] = {'B', 'D', 'F', 'L', 'R', 'U'};
    return kLetters[static_cast<int>(f)];
}

FaceId face_from_letter(char c) {
    switch (c) {
        case 'B': case 'b': return FaceId::B;
        case 'D': case 'd': return FaceId::D;
        case 'F': case 'f': return FaceId::F;
        case 'L': case 'l': return FaceId::L;
        case 'R': case 'r': return FaceId::R;
        case 'U': case 'u': return FaceId::U;
        default:
            throw std::invalid_argument(std::string("face_from_letter: '") + c + "'");
    }
}

Vec3 looking_direction(FaceId f) {
    switch (f) {
        case FaceId::B: return {0.0, 0.0, -1.0};
        case FaceId::D: return {0.0, -1.0, 0.0};
        case FaceId::F: return {0.0, 0.0, 1.0};
        case FaceId::L: return {1.0, 0.0, 0.0};
        case FaceId::R: return {-1.0, 0.0, 0.0};
        case FaceId::U: return {0.0, 1.0, 0.0};
    }
    throw std::invalid_argument("looking_direction: bad FaceId");
}

Mat3 Mat3::identity() {
    Mat3 r;
    r.m = {1, 0, 0, 0, 1, 0, 0, 0, 1};
    return r;
}

Mat3 Mat3::transposed() const {
    Mat3 r;
    r.m = {m[0], m[3], m[6], m[1], m[4], m[7], m[2], m[5], m[8]};
    return r;
}

Vec3 angular_to_unit(const AngularCoord& a) {
    const double ct = std::cos(a.theta);
    return {std::sin(a.phi) * ct, std::sin(a.theta), std::cos(a.phi) * ct};
}

AngularCoord unit_to_angular(const Vec3& v) {
    const double n = v.norm();
    if (std::abs(n - 1.0) > 1e-9)
        throw std::invalid_argument("unit_to_angular: |v| deviates from 1 by more than 1e-9");
    const double y = std::clamp(v.y, -1.0, 1.0);
    if (v.x == 0.0 && v.z == 0.0)  // pole: longitude is degenerate, canonicalize
        return AngularCoord(0.0, std::copysign(kHalfPi, y));
    double phi = std::atan2(v.x, v.z);
    if (phi < 0.0) phi += kTwoPi;
    return AngularCoord(phi, std::asin(y));
}

FaceId face_of(const Vec3& v) {
    if (v.x == 0.0 && v.y == 0.0 && v.z == 0.0)
        throw std::invalid_argument("face_of: zero vector");
    // Tie-break priority F > B > L > R > U > D: scan in that order and keep
    // strictly greater dot products only.
    static constexpr FaceId kPriority[kNumFaces] = {FaceId::F, FaceId::B, FaceId::L,
                                                    FaceId::R, FaceId::U, FaceId::D};
    FaceId best = FaceId::F;
    double best_dot = -std::numeric_limits<double>::infinity();
    for (FaceId f : kPriority) {
        const double d = looking_direction(f).dot(v);
        if (d > best_dot) {
            best_dot = d;
            best = f;
        }
    }
    return best;
}

const Mat3& face_rotation(FaceId f) {
    // F is the identity; the others are 90/180 degree rotations about a
    // single axis, so every entry is exact.
    static const std::array<Mat3, kNumFaces> kRot = [] {
        std::array<Mat3, kNumFaces> r;
        r[static_cast<int>(FaceId::F)].m = {1, 0, 0, 0, 1, 0, 0, 0, 1};
        r[static_cast<int>(FaceId::B)].m = {-1, 0, 0, 0, 1, 0, 0, 0, -1};  // yaw 180
        r[static_cast<int>(FaceId::L)].m = {0, 0, 1, 0, 1, 0, -1, 0, 0};   // yaw +90
        r[static_cast<int>(FaceId::R)].m = {0, 0, -1, 0, 1, 0, 1, 0, 0};   // yaw -90
        r[static_cast<int>(FaceId::U)].m = {1, 0, 0, 0, 0, 1, 0, -1, 0};   // pitch to +y
        r[static_cast<int>(FaceId::D)].m = {1, 0, 0, 0, 0, -1, 0, 1, 0};   // pitch to -y
        return r;
    }();
    return kRot[static_cast<int>(f)];
}

Vec3 face_point_to_sphere(const FacePixel& p, double radius) {
    if (p.side <= 0.0) throw std::invalid_argument("face_point_to_sphere: side <= 0");
    if (radius <= 0.0) throw std::invalid_argument("face_point_to_sphere: radius <= 0");
    const double half = 0.5 * p.side;
    const Vec3 local{p.u - half, p.v - half, half};
    const double s = radius / local.norm();
    return face_rotation(p.face) * (local * s);
}

FacePixel sphere_to_face_point(const Vec3& v, double side) {
    if (side <= 0.0) throw std::invalid_argument("sphere_to_face_point: side <= 0");
    const FaceId face = face_of(v);  // throws on zero vector
    const Vec3 local = face_rotation(face).transposed() * v;
    // On the owning face the axis component dominates, so local.z > 0 and the
    // intersection with the plane z = side/2 lands inside [0, side)^2 up to
    // rounding; clamp to keep the contract tight at the borders.
    const double half = 0.5 * side;
    const double t = half / local.z;
    FacePixel p;
    p.face = face;
    p.side = side;
    p.u = std::clamp(local.x * t + half, 0.0, side);
    p.v = std::clamp(local.y * t + half, 0.0, side);
    return p;
}

}  // namespace pnf
