#include "mms/math.hpp"

#include <algorithm>
#include <cmath>

namespace mms {

std::array<int, 3> axis_indices(AxisOrder order) {
    switch (order) {
        case AxisOrder::XYZ: return {0, 1, 2};
        case AxisOrder::XZY: return {0, 2, 1};
        case AxisOrder::YXZ: return {1, 0, 2};
        case AxisOrder::YZX: return {1, 2, 0};
        case AxisOrder::ZXY: return {2, 0, 1};
        case AxisOrder::ZYX: return {2, 1, 0};
    }
    return {0, 1, 2};
}

AxisOrder axis_order_from_indices(int first, int second, int third) {
    const int key = first * 100 + second * 10 + third;
    switch (key) {
        case 12: return AxisOrder::XYZ;
        case 21: return AxisOrder::XZY;
        case 102: return AxisOrder::YXZ;
        case 120: return AxisOrder::YZX;
        case 201: return AxisOrder::ZXY;
        case 210: return AxisOrder::ZYX;
        default: break;
    }
    throw std::invalid_argument("axis order needs three distinct axes");
}

std::string_view to_string(AxisOrder order) {
    switch (order) {
        case AxisOrder::XYZ: return "XYZ";
        case AxisOrder::XZY: return "XZY";
        case AxisOrder::YXZ: return "YXZ";
        case AxisOrder::YZX: return "YZX";
        case AxisOrder::ZXY: return "ZXY";
        case AxisOrder::ZYX: return "ZYX";
    }
    return "XYZ";
}

Quat axis_rotation(int axis, double radians) {
    return Quat(Eigen::AngleAxisd(radians, Vec3::Unit(axis)));
}

Quat euler_to_quat(const Vec3& angles_deg, AxisOrder order) {
    const auto idx = axis_indices(order);
    Quat q = Quat::Identity();
    for (int k = 0; k < 3; ++k) {
        q = q * axis_rotation(idx[k], deg_to_rad(angles_deg[k]));
    }
    return q.normalized();
}

Vec3 quat_to_euler(const Quat& q, AxisOrder order) {
    const auto [i, j, k] = axis_indices(order);
    const Eigen::Matrix3d m = q.normalized().toRotationMatrix();
    // +1 for cyclic axis sequences (XYZ, YZX, ZXY).
    const double s = ((j - i + 3) % 3 == 1) ? 1.0 : -1.0;

    const double sb = std::clamp(s * m(i, k), -1.0, 1.0);
    const double b = std::asin(sb);
    double a = 0.0;
    double c = 0.0;
    if (std::abs(sb) < 1.0 - 1e-12) {
        a = std::atan2(-s * m(j, k), m(k, k));
        c = std::atan2(-s * m(i, j), m(i, i));
    } else {
        // Gimbal lock: fold everything into the first angle.
        a = std::atan2(s * m(k, j), m(j, j));
    }
    return {rad_to_deg(a), rad_to_deg(b), rad_to_deg(c)};
}

double angle_between_deg(const Quat& a, const Quat& b) {
    const Quat rel = a.normalized().conjugate() * b.normalized();
    return rad_to_deg(2.0 * std::atan2(rel.vec().norm(), std::abs(rel.w())));
}

Quat slerp_shortest(const Quat& a, const Quat& b, double t) {
    Quat target = b;
    if (a.dot(b) < 0.0) {
        target.coeffs() = -b.coeffs();
    }
    return a.slerp(t, target).normalized();
}

}  // namespace mms
