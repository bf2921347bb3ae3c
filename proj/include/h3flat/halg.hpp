#pragma once

#include "h3flat/types.hpp"

#include <array>

namespace h3flat {

// Hermitian 2x2 matrices are stored as Minkowski 4-vectors (x0, x1, x2, x3)
// so Hermitian-ness holds by construction.  The correspondence is
//
//     X = [ x0+x3   x1+i*x2 ]
//         [ x1-i*x2  x0-x3  ]
//
// and the Minkowski product is <X,Y> = -x0*y0 + x1*y1 + x2*y2 + x3*y3.

double minkowski_dot(const Vec4& x, const Vec4& y);

// Relative coordinate distance ||x - y|| / max(1, ||x||).  The right gauge
// for "these two H^3 points agree": hdist amplifies rounding of nearly
// equal far-out points by a square root.
double point_agreement(const Vec4& x, const Vec4& y);

Mat2c hermitian_matrix(const Vec4& x);

// Inverse of hermitian_matrix.  Throws if M deviates from Hermitian by more
// than tol relative to its norm.
Vec4 minkowski_vector(const Mat2c& M, double tol = 1e-10);

// Tangent or normal data of H^3, i.e. a Minkowski vector with no positivity
// constraint.
struct MVector {
    Vec4 x = Vec4::Zero();

    Mat2c matrix() const { return hermitian_matrix(x); }
};

// Point of H^3: positive definite Hermitian matrix with det = 1, stored as a
// 4-vector on the hyperboloid x0 > 0, <x,x> = -1.
struct HPoint {
    Vec4 x = Vec4(1, 0, 0, 0);

    Mat2c matrix() const { return hermitian_matrix(x); }

    static HPoint from_vec(const Vec4& v, double tol = 1e-8);
};

// f = (1/det M) * M * conj(M)^T with the sign fixed so the trace is
// positive.  det M must be real (relative tolerance 1e-10) and nonzero.
// Invariant under M -> c*M for real c != 0.
HPoint sym(const Mat2c& M, double det_tol = 1e-10);

// Companion to sym: (1/|det M|) * M * diag(1,-1) * conj(M)^T, the unit
// normal that pairs with sym(M) for a flat frame M = E.
MVector sym_normal(const Mat2c& M, double det_tol = 1e-10);

// arccosh(-<X,Y>).  Throws ModelViolationError if -<X,Y> < 1 - tol.
double hdist(const HPoint& X, const HPoint& Y, double tol = 1e-9);

// cosh(t)*X + sinh(t)*N for unit spacelike N orthogonal to X.
HPoint geodesic_point(const HPoint& X, const MVector& N, double t, double tol = 1e-8);

Vec3 poincare(const HPoint& X);
Vec3 klein(const HPoint& X);

// The two displayed Poincare-ball projection formulas evaluated directly
// from the entries of a frame F = [[A,B],[C,D]] with real nonzero det.
// Variant 1 comes from the light-cone description of the surface, variant 2
// from (1/det F) F conj(F)^T; they differ by a rigid motion.
Vec3 poincare_from_F_entries_v1(Cx A, Cx B, Cx C, Cx D);
Vec3 poincare_from_F_entries_v2(Cx A, Cx B, Cx C, Cx D);

// Rank test: do four Minkowski vectors lie in a common affine 2-plane?
// Uses the singular values of the difference matrix; returns sigma_3/sigma_1
// (0 for exactly coplanar input).
double coplanarity_residual(const std::array<Vec4, 4>& pts);
bool coplanar_in_R31(const std::array<Vec4, 4>& pts, double tol = 1e-9);

// In-plane orthonormal frame (Euclidean R^4 metric) for a planar quad:
// origin plus two direction vectors.
struct PlaneFrame {
    Vec4 origin = Vec4::Zero();
    Vec4 e1 = Vec4::Zero();
    Vec4 e2 = Vec4::Zero();

    Vec2 project(const Vec4& p) const {
        return Vec2((p - origin).dot(e1), (p - origin).dot(e2));
    }
};

PlaneFrame plane_frame(const std::array<Vec4, 4>& quad, double tol = 1e-9);

// Signed shoelace area of a planar quad measured in the Euclidean R^4
// metric, computed in the given in-plane frame (or one fitted to the quad).
// Throws if the vertices leave the plane by more than tol relative to the
// quad diameter.
double planar_quad_area(const std::array<Vec4, 4>& quad, double tol = 1e-9);
double planar_quad_area(const std::array<Vec4, 4>& quad, const PlaneFrame& frame,
                        double tol = 1e-9);

// Mixed area MA(P,Q) = (A(P+Q) - A(P) - A(Q)) / 2 with vertex-wise sums.
// P and Q must lie in parallel planes; areas are taken in a common frame so
// the bilinear identities hold exactly.
double mixed_area(const std::array<Vec4, 4>& P, const std::array<Vec4, 4>& Q,
                  double tol = 1e-9);

// Geodesic through X0 with unit tangent W at X0, as the pair (X0, W).
struct Geodesic {
    HPoint base;
    MVector dir;

    HPoint at(double t) const { return geodesic_point(base, dir, t); }
};

// Geodesic whose ideal endpoints are the projective null directions v1, v2
// (eigenvector lines on the boundary sphere).
Geodesic geodesic_from_ideal_points(const Eigen::Vector2cd& v1, const Eigen::Vector2cd& v2);

// Invariant axis of a loxodromic/elliptic isometry X -> M X conj(M)^T / det M.
Geodesic axis_of_isometry(const Mat2c& M);

double distance_to_geodesic(const HPoint& Y, const Geodesic& g);

} // namespace h3flat
