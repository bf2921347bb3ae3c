#include "h3flat/halg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>

namespace h3flat {

double minkowski_dot(const Vec4& x, const Vec4& y) {
    // accumulate in extended precision: the signature makes this a
    // difference of large products for points far from the base point
    const long double s = -static_cast<long double>(x[0]) * y[0] +
                          static_cast<long double>(x[1]) * y[1] +
                          static_cast<long double>(x[2]) * y[2] +
                          static_cast<long double>(x[3]) * y[3];
    return static_cast<double>(s);
}

double point_agreement(const Vec4& x, const Vec4& y) {
    return (x - y).norm() / std::max(1.0, x.norm());
}

Mat2c hermitian_matrix(const Vec4& x) {
    Mat2c M;
    M << Cx(x[0] + x[3], 0), Cx(x[1], x[2]), Cx(x[1], -x[2]), Cx(x[0] - x[3], 0);
    return M;
}

Vec4 minkowski_vector(const Mat2c& M, double tol) {
    const double scale = M.norm();
    const double herm_dev = (M - M.adjoint()).norm();
    if (herm_dev > tol * std::max(scale, 1e-300))
        throw GeometryError("minkowski_vector: matrix is not Hermitian within tolerance");
    Vec4 x;
    x[0] = 0.5 * (M(0, 0).real() + M(1, 1).real());
    x[3] = 0.5 * (M(0, 0).real() - M(1, 1).real());
    x[1] = 0.5 * (M(0, 1).real() + M(1, 0).real());
    x[2] = 0.5 * (M(0, 1).imag() - M(1, 0).imag());
    return x;
}

HPoint HPoint::from_vec(const Vec4& v, double tol) {
    if (v[0] <= 0) throw ModelViolationError("HPoint: x0 must be positive");
    if (std::abs(minkowski_dot(v, v) + 1.0) > tol)
        throw ModelViolationError("HPoint: <x,x> != -1");
    return HPoint{v};
}

HPoint sym(const Mat2c& M, double det_tol) {
    const Cx det = M.determinant();
    const double adet = std::abs(det);
    if (adet == 0.0) throw GeometryError("sym: singular matrix");
    if (std::abs(det.imag()) > det_tol * adet)
        throw GeometryError("sym: determinant is not real within tolerance");
    Mat2c X = (M * M.adjoint()) / std::abs(det.real());
    return HPoint{minkowski_vector(X)};
}

MVector sym_normal(const Mat2c& M, double det_tol) {
    const Cx det = M.determinant();
    const double adet = std::abs(det);
    if (adet == 0.0) throw GeometryError("sym_normal: singular matrix");
    if (std::abs(det.imag()) > det_tol * adet)
        throw GeometryError("sym_normal: determinant is not real within tolerance");
    Mat2c D = Mat2c::Zero();
    D(0, 0) = 1;
    D(1, 1) = -1;
    Mat2c X = (M * D * M.adjoint()) / std::abs(det.real());
    return MVector{minkowski_vector(X)};
}

double hdist(const HPoint& X, const HPoint& Y, double tol) {
    // Projectively normalized: computed points sit on the hyperboloid only
    // up to rounding, and dividing by the actual norms cancels that defect
    // (in particular hdist(X, X) is exactly zero).
    const double xx = -minkowski_dot(X.x, X.x);
    const double yy = -minkowski_dot(Y.x, Y.x);
    if (xx <= 0 || yy <= 0) throw ModelViolationError("hdist: points are not timelike");
    double c = -minkowski_dot(X.x, Y.x) / std::sqrt(xx * yy);
    if (c < 1.0 - tol) throw ModelViolationError("hdist: points violate the hyperboloid model");
    if (c < 1.0) c = 1.0;
    return std::acosh(c);
}

HPoint geodesic_point(const HPoint& X, const MVector& N, double t, double tol) {
    if (std::abs(minkowski_dot(N.x, N.x) - 1.0) > tol)
        throw GeometryError("geodesic_point: direction is not unit spacelike");
    if (std::abs(minkowski_dot(X.x, N.x)) > tol)
        throw GeometryError("geodesic_point: direction is not tangent at X");
    Vec4 v = std::cosh(t) * X.x + std::sinh(t) * N.x;
    return HPoint{v};
}

Vec3 poincare(const HPoint& X) {
    return Vec3(X.x[1], X.x[2], X.x[3]) / (1.0 + X.x[0]);
}

Vec3 klein(const HPoint& X) {
    return Vec3(X.x[1], X.x[2], X.x[3]) / X.x[0];
}

Vec3 poincare_from_F_entries_v1(Cx A, Cx B, Cx C, Cx D) {
    const Cx w = -std::conj(A) * C - std::conj(B) * D;
    const double det = (A * D - B * C).real();
    const double q = std::norm(A) + std::norm(B) + std::norm(C) + std::norm(D);
    const double denom = det + 0.5 * q;
    const double z = 0.5 * (-std::norm(A) - std::norm(B) + std::norm(C) + std::norm(D));
    return Vec3(w.real(), w.imag(), z) / denom;
}

Vec3 poincare_from_F_entries_v2(Cx A, Cx B, Cx C, Cx D) {
    const Cx w = A * std::conj(C) + B * std::conj(D);
    const double det = (A * D - B * C).real();
    const double q = std::norm(A) + std::norm(B) + std::norm(C) + std::norm(D);
    const double denom = det + 0.5 * q;
    const double z = 0.5 * (std::norm(A) + std::norm(B) - std::norm(C) - std::norm(D));
    return Vec3(w.real(), w.imag(), z) / denom;
}

double coplanarity_residual(const std::array<Vec4, 4>& pts) {
    Eigen::Matrix<double, 3, 4> diff;
    for (int i = 0; i < 3; ++i) diff.row(i) = (pts[i + 1] - pts[0]).transpose();
    Eigen::JacobiSVD<Eigen::Matrix<double, 3, 4>> svd(diff);
    const auto& s = svd.singularValues();
    if (s[0] == 0.0) return 0.0;
    return s[2] / s[0];
}

bool coplanar_in_R31(const std::array<Vec4, 4>& pts, double tol) {
    return coplanarity_residual(pts) <= tol;
}

PlaneFrame plane_frame(const std::array<Vec4, 4>& quad, double tol) {
    Vec4 centroid = Vec4::Zero();
    for (const auto& p : quad) centroid += p;
    centroid /= 4.0;
    Eigen::Matrix<double, 4, 4> diff;
    for (int i = 0; i < 4; ++i) diff.row(i) = (quad[i] - centroid).transpose();
    Eigen::JacobiSVD<Eigen::Matrix<double, 4, 4>> svd(diff, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    if (s[0] > 0 && s[2] / s[0] > tol)
        throw GeometryError("plane_frame: quad is not planar within tolerance");
    PlaneFrame f;
    f.origin = centroid;
    f.e1 = svd.matrixV().col(0);
    f.e2 = svd.matrixV().col(1);
    return f;
}

namespace {

double shoelace(const std::array<Vec2, 4>& p) {
    double a = 0;
    for (int i = 0; i < 4; ++i) {
        const Vec2& u = p[i];
        const Vec2& v = p[(i + 1) % 4];
        a += u.x() * v.y() - v.x() * u.y();
    }
    return 0.5 * a;
}

double quad_diameter(const std::array<Vec4, 4>& q) {
    double d = 0;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) d = std::max(d, (q[i] - q[j]).norm());
    return d;
}

} // namespace

double planar_quad_area(const std::array<Vec4, 4>& quad, const PlaneFrame& frame, double tol) {
    const double diam = quad_diameter(quad);
    std::array<Vec2, 4> uv;
    for (int i = 0; i < 4; ++i) {
        const Vec4 d = quad[i] - frame.origin;
        uv[i] = Vec2(d.dot(frame.e1), d.dot(frame.e2));
        const double out = (d - uv[i].x() * frame.e1 - uv[i].y() * frame.e2).norm();
        if (out > tol * std::max(diam, 1e-300) + 1e-13)
            throw GeometryError("planar_quad_area: vertex leaves the plane by " +
                                std::to_string(out));
    }
    return shoelace(uv);
}

double planar_quad_area(const std::array<Vec4, 4>& quad, double tol) {
    return planar_quad_area(quad, plane_frame(quad, tol), tol);
}

double mixed_area(const std::array<Vec4, 4>& P, const std::array<Vec4, 4>& Q, double tol) {
    const PlaneFrame frame = plane_frame(P, tol);
    std::array<Vec4, 4> sum;
    for (int i = 0; i < 4; ++i) sum[i] = P[i] + Q[i];
    const double ap = planar_quad_area(P, frame, tol);
    PlaneFrame qframe = frame;
    qframe.origin = Q[0];
    const double aq = planar_quad_area(Q, qframe, tol);
    PlaneFrame sframe = frame;
    sframe.origin = sum[0];
    const double as = planar_quad_area(sum, sframe, tol);
    return 0.5 * (as - ap - aq);
}

Geodesic geodesic_from_ideal_points(const Eigen::Vector2cd& v1, const Eigen::Vector2cd& v2) {
    const Mat2c N1 = v1 * v1.adjoint();
    const Mat2c N2 = v2 * v2.adjoint();
    const Vec4 n1 = minkowski_vector(N1);
    const Vec4 n2 = minkowski_vector(N2);
    const double ip = minkowski_dot(n1, n2);
    if (ip >= 0) throw GeometryError("geodesic_from_ideal_points: directions coincide");
    const double c = std::sqrt(-2.0 * ip);
    HPoint base{(n1 + n2) / c};
    MVector dir{(n1 - n2) / c};
    return Geodesic{base, dir};
}

Geodesic axis_of_isometry(const Mat2c& M) {
    Eigen::ComplexEigenSolver<Mat2c> es(M);
    if (es.info() != Eigen::Success)
        throw GeometryError("axis_of_isometry: eigen decomposition failed");
    return geodesic_from_ideal_points(es.eigenvectors().col(0), es.eigenvectors().col(1));
}

double distance_to_geodesic(const HPoint& Y, const Geodesic& g) {
    const double a = -minkowski_dot(Y.x, g.base.x);
    const double b = -minkowski_dot(Y.x, g.dir.x);
    const double m = std::sqrt(std::max(a * a - b * b, 1.0));
    return std::acosh(m);
}

} // namespace h3flat
