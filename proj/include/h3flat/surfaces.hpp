#pragma once

#include "h3flat/frames.hpp"
#include "h3flat/halg.hpp"

#include <memory>
#include <optional>
#include <vector>

namespace h3flat {

// Discrete surface in H^3: a point and a unit spacelike normal per vertex,
// with <f,N> = 0.  Immutable after construction.
struct DiscreteSurface {
    LatticeDomain domain;
    std::vector<HPoint> f;
    std::vector<Vec4> normal;
    FrameKind kind = FrameKind::Flat;
    double t = 0.0;
    double d = 1.0;
    double lambda = 1.0;
    std::shared_ptr<const MoebiusFrame> frame;

    const HPoint& point(Vertex v) const { return f[domain.vertex_index(v)]; }
    const Vec4& normal_at(Vertex v) const { return normal[domain.vertex_index(v)]; }

    std::array<Vec4, 4> quad_points(const Quad& q) const {
        return {point(q.p).x, point(q.q()).x, point(q.r()).x, point(q.s()).x};
    }
    std::array<Vec4, 4> quad_normals(const Quad& q) const {
        return {normal_at(q.p), normal_at(q.q()), normal_at(q.r()), normal_at(q.s())};
    }
};

// f_p = sym(frame_p), N_p = sym_normal(frame_p).
DiscreteSurface build_surface(const MoebiusFrame& frame);

struct ConcircularityReport {
    double defect = 0;              // max of the three relative residuals
    double cross_ratio_defect = 0;  // deviation of the matrix cross ratio from real*I
    double coplanarity_defect = 0;  // sigma_3/sigma_1 of the difference vectors
    double equidistance_defect = 0; // in-plane radius spread / quad diameter
    bool spacelike_section = true;  // metric circle vs equidistant-type section
    bool degenerate = false;        // coincident vertices; checks skipped
};

// Two independent concircularity certificates: the quaternionic/matrix
// cross ratio must be a real multiple of the identity, and the four points
// must be coplanar in R^{3,1} and equidistant from the in-plane center of
// the plane section of the hyperboloid.  The equidistance check applies to
// spacelike sections (metric circles); sections of equidistant type carry
// the full information in the other two certificates.
//
// For a surface backed by a frame the quad is evaluated in the position
// normalized by the frame at p (the proof's "applying an isometry if
// necessary"), which keeps the arithmetic near the base point.
ConcircularityReport concircularity_defect(const DiscreteSurface& s, const Quad& quad);
ConcircularityReport concircularity_of_points(const std::array<Vec4, 4>& pts);

struct ArctanhSum {
    double sum = 0;
    std::optional<Edge> flagged; // edge whose arctanh argument left (-1,1)
};

// Signed 4-term arctanh sum of the discrete extrinsic curvature identity;
// vanishes identically when lambda*alpha_h > 0 and lambda*alpha_v < 0 on
// the quad.  Arguments of magnitude >= 1 flag the offending edge.
ArctanhSum arctanh_curvature_sum(const DiscreteHolomorphic& g, const Quad& quad);

struct GaussAreaReport {
    double area_f = 0;
    double area_n = 0;
    double mixed_area_g1g2 = 0;
    double lightcone_residual = 0;  // max |<G_i, G_i>| over the 8 vertices
    double parallelism_residual = 0; // N-quad deviation from the f-quad plane directions
    bool spacelike = true;
};

// Area comparison of a surface quad and its Gauss-map quad, plus the mixed
// area of the light-cone vertices G1 = (f+N)/2, G2 = (f-N)/2.
GaussAreaReport gauss_area_check(const DiscreteSurface& s, const Quad& quad);

// Vertexwise cosh(log d) f - sinh(log d) N with transported normal
// cosh(log d) N - sinh(log d) f; carries the rescaled frame.
DiscreteSurface parallel_surface(const DiscreteSurface& s, double d);

enum class BoundaryRay {
    PositiveReal, // the row n = n_lo, i.e. the image of z > 0 for the power function
    PositiveImag, // the column m = m_lo, i.e. the image of the imaginary axis
};

struct StokesReport {
    bool inconclusive = false;
    std::vector<Vec3> points;       // Poincare images along the ray
    std::vector<double> increments; // Euclidean steps between successive images
    int monotone_from = 0;          // increments strictly decrease from this index on
    double winding = 0;             // |cumulative angle| about the fitted circle axis
    Vec3 circle_center = Vec3::Zero();
    Vec3 circle_axis = Vec3::Zero();
    double circle_radius = 0;
};

// Boundary-ray diagnostics for the Stokes phenomenon: Cauchy-type
// increments for convergent rays, angular winding about a circle fitted by
// least squares to the last third of the ray image for the wrapping ray.
StokesReport stokes_diagnostic(const DiscreteSurface& s, BoundaryRay ray);

// Isometry X -> M X conj(M)^T / |det M| applied to a point.
HPoint apply_isometry(const Mat2c& M, const HPoint& X);

struct IsothermicityReport {
    // worst deviation of kappa(m,n) kappa(m+1,n+1) / (kappa(m+1,n) kappa(m,n+1))
    // from 1, where kappa is the real scalar cross ratio of the surface quad
    double factorization_defect = 0;
    bool all_negative = true; // kappa < 0 on every quad
};

// Informational only: whether the surface quads' real cross ratios admit a
// row/column-constant factorization (discrete isothermicity).  Flat
// surfaces generally do not.
IsothermicityReport isothermicity_check(const DiscreteSurface& s);

} // namespace h3flat
