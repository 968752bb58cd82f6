#pragma once

#include <array>
#include <string_view>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace mms {

using Vec3 = Eigen::Vector3d;
using Quat = Eigen::Quaterniond;

constexpr double kPi = 3.14159265358979323846;

constexpr double deg_to_rad(double deg) { return deg * kPi / 180.0; }
constexpr double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

// Position plus orientation. Composition follows the usual convention:
// (a * b) applies b first, then a.
struct RigidTransform {
    Vec3 translation = Vec3::Zero();
    Quat rotation = Quat::Identity();

    static RigidTransform identity() { return {}; }

    RigidTransform operator*(const RigidTransform& rhs) const {
        return {translation + rotation * rhs.translation, (rotation * rhs.rotation).normalized()};
    }

    Vec3 operator*(const Vec3& point) const { return translation + rotation * point; }

    RigidTransform inverse() const {
        const Quat inv = rotation.conjugate();
        return {-(inv * translation), inv};
    }
};

// Axis order for Euler angle triples, named by the order the rotations are
// applied intrinsically: XYZ means R = Rx * Ry * Rz.
enum class AxisOrder { XYZ, XZY, YXZ, YZX, ZXY, ZYX };

std::array<int, 3> axis_indices(AxisOrder order);
AxisOrder axis_order_from_indices(int first, int second, int third);
std::string_view to_string(AxisOrder order);

Quat axis_rotation(int axis, double radians);

// Intrinsic Euler composition. Angles are in degrees and given per axis
// in application order (angles[0] belongs to the first axis of `order`).
Quat euler_to_quat(const Vec3& angles_deg, AxisOrder order);

// Inverse of euler_to_quat; the middle angle is kept in [-90, 90].
Vec3 quat_to_euler(const Quat& q, AxisOrder order);

// Rotation from an MMS (x, y, z) triple in degrees, intrinsic X then Y then Z.
inline Quat rotation_from_degrees(const Vec3& xyz_deg) {
    return euler_to_quat(xyz_deg, AxisOrder::XYZ);
}

// Smallest angle (degrees) between two orientations, sign-agnostic.
double angle_between_deg(const Quat& a, const Quat& b);

// Shortest-arc slerp, renormalized.
Quat slerp_shortest(const Quat& a, const Quat& b, double t);

}  // namespace mms
