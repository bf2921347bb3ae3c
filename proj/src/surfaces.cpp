#include "h3flat/surfaces.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <numbers>

namespace h3flat {

DiscreteSurface build_surface(const MoebiusFrame& frame) {
    DiscreteSurface s;
    s.domain = frame.domain;
    s.kind = frame.kind;
    s.t = frame.kind == FrameKind::CMC1 ? 1.0 : frame.t;
    s.lambda = frame.lambda;
    s.frame = std::make_shared<MoebiusFrame>(frame);
    s.f.reserve(frame.mats.size());
    s.normal.reserve(frame.mats.size());
    for (const Mat2c& M : frame.mats) {
        s.f.push_back(sym(M));
        s.normal.push_back(sym_normal(M).x);
    }
    return s;
}

namespace {

double quad_diameter(const std::array<Vec4, 4>& q) {
    double d = 0;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) d = std::max(d, (q[i] - q[j]).norm());
    return d;
}

} // namespace

namespace {

using MatL = Eigen::Matrix<std::complex<long double>, 2, 2>;

// ||C - Re(mu) I|| / ||C|| for the ordered matrix cross ratio of four
// Hermitian matrices.
double cross_ratio_identity_defect(const std::array<MatL, 4>& h) {
    const MatL C = (h[0] - h[1]) * (h[1] - h[2]).inverse() * (h[2] - h[3]) *
                   (h[3] - h[0]).inverse();
    const long double mu = 0.5L * (C(0, 0).real() + C(1, 1).real());
    return double((C - mu * MatL::Identity()).norm() / C.norm());
}

// Corner frames of the quad relative to the frame at p; their syms are the
// quad points moved near the base point by the isometry of frame(p).
std::array<Mat2c, 4> local_corner_matrices(const MoebiusFrame& f, const Quad& quad) {
    const DiscreteHolomorphic& g = *f.g;
    const bool bryant = f.kind == FrameKind::CMC1;
    auto T = [&](const Edge& e, Vertex from) {
        return bryant ? bryant_transition(g, e, from) : flat_transition(g, e, from);
    };
    Mat2c U = T(quad.edge_pq(), quad.p);
    Mat2c V = T(quad.edge_ps(), quad.p);
    Mat2c UV1 = U * T(quad.edge_qr(), quad.q());
    if (f.kind == FrameKind::Weingarten) {
        const Mat2c Lp_inv = weingarten_dress_matrix(g.value(quad.p), f.t).inverse();
        U = Lp_inv * U * weingarten_dress_matrix(g.value(quad.q()), f.t);
        V = Lp_inv * V * weingarten_dress_matrix(g.value(quad.s()), f.t);
        UV1 = Lp_inv * UV1 * weingarten_dress_matrix(g.value(quad.r()), f.t);
    }
    return {Mat2c::Identity(), U, UV1, V};
}

} // namespace

ConcircularityReport concircularity_defect(const DiscreteSurface& s, const Quad& quad) {
    if (s.frame && s.frame->g) {
        const std::array<Mat2c, 4> corners = local_corner_matrices(*s.frame, quad);
        std::array<Vec4, 4> pts;
        for (int i = 0; i < 4; ++i) pts[i] = sym(corners[i]).x;
        ConcircularityReport rep = concircularity_of_points(pts);
        if (rep.degenerate) return rep;
        // redo certificate 1 with the Hermitian matrices formed straight
        // from the corner frames: M conj(M)^T has no cancellation in its
        // small entries, unlike the reconstruction from the 4-vector
        std::array<MatL, 4> h;
        for (int i = 0; i < 4; ++i) {
            const MatL M = corners[i].cast<std::complex<long double>>();
            const MatL X = M * M.adjoint();
            h[i] = X / (M(0, 0) * M(1, 1) - M(0, 1) * M(1, 0)).real();
        }
        rep.cross_ratio_defect = cross_ratio_identity_defect(h);
        rep.defect = std::max({rep.cross_ratio_defect, rep.coplanarity_defect,
                               rep.equidistance_defect});
        return rep;
    }
    return concircularity_of_points(s.quad_points(quad));
}

ConcircularityReport concircularity_of_points(const std::array<Vec4, 4>& pts) {
    ConcircularityReport rep;
    const double diam = quad_diameter(pts);

    for (int i = 0; i < 4; ++i)
        if ((pts[i] - pts[(i + 1) % 4]).norm() < 1e-12 * std::max(1.0, diam)) {
            rep.degenerate = true;
            return rep;
        }

    // Certificate 1: matrix cross ratio equals a real multiple of I.
    // Extended precision: elongated quads condition the inverses poorly.
    std::array<MatL, 4> h;
    for (int i = 0; i < 4; ++i) h[i] = hermitian_matrix(pts[i]).cast<std::complex<long double>>();
    rep.cross_ratio_defect = cross_ratio_identity_defect(h);

    // Certificate 2: coplanar in R^{3,1} and equidistant from the in-plane
    // center x_c (the point of the plane Minkowski-orthogonal to its own
    // direction space).
    rep.coplanarity_defect = coplanarity_residual(pts);

    const Vec4 u1 = pts[1] - pts[0];
    Vec4 u2 = pts[3] - pts[0];
    const double n1 = minkowski_dot(u1, u1);
    rep.spacelike_section = n1 > 0;
    if (rep.spacelike_section) {
        const Vec4 e1 = u1 / std::sqrt(n1);
        u2 -= minkowski_dot(u2, e1) * e1;
        const double n2 = minkowski_dot(u2, u2);
        rep.spacelike_section = n2 > 0;
        if (rep.spacelike_section) {
            const Vec4 e2 = u2 / std::sqrt(n2);
            const Vec4 xc = pts[0] - minkowski_dot(pts[0], e1) * e1 -
                            minkowski_dot(pts[0], e2) * e2;
            double rmin = std::numeric_limits<double>::infinity(), rmax = 0;
            for (const Vec4& p : pts) {
                const Vec4 v = p - xc;
                const double r = std::hypot(minkowski_dot(v, e1), minkowski_dot(v, e2));
                rmin = std::min(rmin, r);
                rmax = std::max(rmax, r);
            }
            rep.equidistance_defect = (rmax - rmin) / diam;
        }
    }
    rep.defect = std::max({rep.cross_ratio_defect, rep.coplanarity_defect,
                           rep.equidistance_defect});
    return rep;
}

ArctanhSum arctanh_curvature_sum(const DiscreteHolomorphic& g, const Quad& quad) {
    ArctanhSum out;
    double sum = 0;
    // Horizontal edges take arctanh((|dg|^2 - la)/(|dg|^2 + la)), vertical
    // edges arctanh((|dg|^2 + la)/(|dg|^2 - la)); signs + - + - around
    // p,q,r,s.  The terms are evaluated as log(|dg|^2 / |la|) / 2, which is
    // the same number without the near-unit argument (for short edges the
    // quotient form loses half the digits).  An argument of magnitude >= 1
    // means la has the wrong sign for the edge class.
    const std::array<Edge, 4> edges{quad.edge_pq(), quad.edge_qr(), quad.edge_sr(),
                                    quad.edge_ps()};
    const std::array<double, 4> signs{1, -1, 1, -1};
    for (int i = 0; i < 4; ++i) {
        const Edge& e = edges[i];
        const double la = g.lambda_alpha(e);
        const double d2 = std::norm(g.dg(e));
        const bool in_range = e.kind == EdgeKind::Horizontal ? la > 0 && d2 > 0
                                                             : la < 0 && d2 > 0;
        if (!in_range) {
            if (!out.flagged) out.flagged = e;
            continue;
        }
        sum += signs[i] * 0.5 * std::log(d2 / std::abs(la));
    }
    out.sum = sum;
    return out;
}

GaussAreaReport gauss_area_check(const DiscreteSurface& s, const Quad& quad) {
    GaussAreaReport rep;
    const std::array<Vec4, 4> fq = s.quad_points(quad);
    const std::array<Vec4, 4> nq = s.quad_normals(quad);

    const PlaneFrame frame = plane_frame(fq);

    // N-quad must lie in a plane parallel to the f-quad plane.
    double ndev = 0, nscale = 0;
    for (int i = 1; i < 4; ++i) {
        const Vec4 d = nq[i] - nq[0];
        const Vec4 out_of_plane = d - d.dot(frame.e1) * frame.e1 - d.dot(frame.e2) * frame.e2;
        ndev = std::max(ndev, out_of_plane.norm());
        nscale = std::max(nscale, d.norm());
    }
    rep.parallelism_residual = nscale > 0 ? ndev / nscale : 0.0;
    if (rep.parallelism_residual > 1e-6)
        throw GeometryError("gauss_area_check: normal quad is not parallel to the surface quad");

    // Spacelike check of the common plane direction (Minkowski Gram).
    Eigen::Matrix2d gram;
    gram << minkowski_dot(frame.e1, frame.e1), minkowski_dot(frame.e1, frame.e2),
        minkowski_dot(frame.e2, frame.e1), minkowski_dot(frame.e2, frame.e2);
    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(gram);
    rep.spacelike = es.eigenvalues().minCoeff() > 0;

    rep.area_f = planar_quad_area(fq, frame);
    PlaneFrame nframe = frame;
    nframe.origin = nq[0];
    rep.area_n = planar_quad_area(nq, nframe, 1e-6);

    std::array<Vec4, 4> g1, g2;
    for (int i = 0; i < 4; ++i) {
        g1[i] = 0.5 * (fq[i] + nq[i]);
        g2[i] = 0.5 * (fq[i] - nq[i]);
        // gauge the light-cone defect against the size of the inputs f, N
        // whose Gram defects it inherits
        const double s = std::max({1.0, fq[i].squaredNorm(), nq[i].squaredNorm()});
        rep.lightcone_residual = std::max(rep.lightcone_residual,
                                          std::abs(minkowski_dot(g1[i], g1[i])) / s);
        rep.lightcone_residual = std::max(rep.lightcone_residual,
                                          std::abs(minkowski_dot(g2[i], g2[i])) / s);
    }
    rep.mixed_area_g1g2 = mixed_area(g1, g2, 1e-6);
    return rep;
}

DiscreteSurface parallel_surface(const DiscreteSurface& s, double d) {
    if (s.kind != FrameKind::Flat)
        throw GeometryError("parallel_surface: surface is not of flat kind");
    if (!(d > 0.0)) throw std::invalid_argument("parallel_surface: d must be positive");
    DiscreteSurface p = s;
    p.d = s.d * d;
    const double ch = std::cosh(std::log(d)), sh = std::sinh(std::log(d));
    for (std::size_t i = 0; i < s.f.size(); ++i) {
        p.f[i].x = ch * s.f[i].x - sh * s.normal[i];
        p.normal[i] = ch * s.normal[i] - sh * s.f[i].x;
    }
    if (s.frame) p.frame = std::make_shared<MoebiusFrame>(parallel_frame(*s.frame, d));
    return p;
}

IsothermicityReport isothermicity_check(const DiscreteSurface& s) {
    // kappa per quad from the matrix cross ratio (a real multiple of I on
    // concircular quads); the factorization kappa = a(m) b(n) exists iff
    // every 2x2 block of log kappa has zero mixed difference.
    const LatticeDomain& d = s.domain;
    Eigen::MatrixXd kappa(d.width() - 1, d.height() - 1);
    for (const Quad& q : d.quads()) {
        std::array<Mat2c, 4> h;
        const std::array<Vec4, 4> pts = s.quad_points(q);
        for (int i = 0; i < 4; ++i) h[i] = hermitian_matrix(pts[i]);
        const Mat2c C = (h[0] - h[1]) * (h[1] - h[2]).inverse() * (h[2] - h[3]) *
                        (h[3] - h[0]).inverse();
        kappa(q.p.m - d.m_lo(), q.p.n - d.n_lo()) = 0.5 * (C(0, 0) + C(1, 1)).real();
    }
    IsothermicityReport rep;
    for (int i = 0; i < kappa.rows(); ++i)
        for (int j = 0; j < kappa.cols(); ++j) {
            if (kappa(i, j) >= 0) rep.all_negative = false;
            if (i + 1 < kappa.rows() && j + 1 < kappa.cols()) {
                const double ratio = kappa(i, j) * kappa(i + 1, j + 1) /
                                     (kappa(i + 1, j) * kappa(i, j + 1));
                rep.factorization_defect = std::max(rep.factorization_defect,
                                                    std::abs(ratio - 1.0));
            }
        }
    return rep;
}

HPoint apply_isometry(const Mat2c& M, const HPoint& X) {
    const double adet = std::abs(M.determinant());
    if (adet == 0.0) throw GeometryError("apply_isometry: singular matrix");
    const Mat2c Y = (M * X.matrix() * M.adjoint()) / adet;
    return HPoint{minkowski_vector(Y)};
}

namespace {

struct CircleFit {
    Vec3 center;
    Vec3 axis;
    Vec3 e1, e2; // in-plane orthonormal frame
    double radius = 0;
};

CircleFit fit_circle(const std::vector<Vec3>& pts) {
    Vec3 c0 = Vec3::Zero();
    for (const auto& p : pts) c0 += p;
    c0 /= double(pts.size());
    Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
    for (const auto& p : pts) cov += (p - c0) * (p - c0).transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(cov);
    CircleFit fit;
    fit.axis = es.eigenvectors().col(0); // least-variance direction
    fit.e1 = es.eigenvectors().col(2);
    fit.e2 = es.eigenvectors().col(1);

    // Kasa fit in plane coordinates: |u|^2 = 2 a.u + (r^2 - |a|^2).
    Eigen::MatrixXd A(pts.size(), 3);
    Eigen::VectorXd b(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const Vec3 d = pts[i] - c0;
        const double x = d.dot(fit.e1), y = d.dot(fit.e2);
        A(Eigen::Index(i), 0) = 2 * x;
        A(Eigen::Index(i), 1) = 2 * y;
        A(Eigen::Index(i), 2) = 1;
        b(Eigen::Index(i)) = x * x + y * y;
    }
    const Eigen::Vector3d sol = A.colPivHouseholderQr().solve(b);
    fit.center = c0 + sol[0] * fit.e1 + sol[1] * fit.e2;
    fit.radius = std::sqrt(std::max(sol[2] + sol[0] * sol[0] + sol[1] * sol[1], 0.0));
    return fit;
}

} // namespace

StokesReport stokes_diagnostic(const DiscreteSurface& s, BoundaryRay ray) {
    StokesReport rep;
    const LatticeDomain& d = s.domain;
    std::vector<Vertex> vs;
    if (ray == BoundaryRay::PositiveReal) {
        for (int m = d.m_lo(); m <= d.m_hi(); ++m) vs.push_back({m, d.n_lo()});
    } else {
        for (int n = d.n_lo(); n <= d.n_hi(); ++n) vs.push_back({d.m_lo(), n});
    }
    if (vs.size() < 30) {
        rep.inconclusive = true;
        return rep;
    }
    for (const Vertex& v : vs) rep.points.push_back(poincare(s.point(v)));
    for (std::size_t i = 0; i + 1 < rep.points.size(); ++i)
        rep.increments.push_back((rep.points[i + 1] - rep.points[i]).norm());

    rep.monotone_from = 0;
    for (std::size_t i = 0; i + 1 < rep.increments.size(); ++i)
        if (rep.increments[i + 1] >= rep.increments[i]) rep.monotone_from = int(i) + 1;

    const std::size_t tail = rep.points.size() / 3;
    std::vector<Vec3> last(rep.points.end() - tail, rep.points.end());
    const CircleFit fit = fit_circle(last);
    rep.circle_center = fit.center;
    rep.circle_axis = fit.axis;
    rep.circle_radius = fit.radius;

    double total = 0;
    double prev = 0;
    bool have_prev = false;
    for (const Vec3& p : rep.points) {
        const Vec3 v = p - fit.center;
        const double theta = std::atan2(v.dot(fit.e2), v.dot(fit.e1));
        if (have_prev) {
            double dth = theta - prev;
            while (dth > std::numbers::pi) dth -= 2 * std::numbers::pi;
            while (dth < -std::numbers::pi) dth += 2 * std::numbers::pi;
            total += dth;
        }
        prev = theta;
        have_prev = true;
    }
    rep.winding = std::abs(total);
    return rep;
}

} // namespace h3flat
