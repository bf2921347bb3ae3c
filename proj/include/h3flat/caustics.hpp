#pragma once

#include "h3flat/surfaces.hpp"

#include <optional>
#include <vector>

namespace h3flat {

// Signed focal parameter t along the normal geodesics of a vertical edge
// with lambda*alpha < 0:  sinh t = (|dg|^2 + la) / (sqrt(-4 la) |dg|).
// t > 0 iff |dg|^2 + la > 0.
double focal_time(double dg_norm2, double lambda_alpha);

// Distance in R^{3,1} from either vertex to the intersection of the two
// normal lines: |(|dg|^2 + la)/(|dg|^2 - la)|.  On vertical edges this
// equals tanh(|t|) of the H^3 focal parameter.
struct FocalDistanceR31 {
    double distance = 0;
    bool parallel = false; // lines parallel: |dg|^2 = lambda*alpha
};
FocalDistanceR31 focal_distance_R31(const DiscreteSurface& s, const Edge& e);

struct FocalPoint {
    HPoint point;
    double t = 0;
};

// Intersection of the normal geodesics over a vertical edge, computed from
// the named side.  Throws NoIntersectionError when lambda*alpha >= 0.
FocalPoint focal_point(const DiscreteSurface& s, const Edge& vertical_edge);
FocalPoint focal_point_from(const DiscreteSurface& s, const Edge& vertical_edge, bool q_side);

// Do the two normal geodesics of an edge lie in a common geodesic plane?
// (rank of {f_p, f_p+N_p, f_q, f_q+N_q} at most 3).
bool coplanarity_check(const DiscreteSurface& s, const Edge& e, double tol = 1e-9);
double coplanarity_check_residual(const DiscreteSurface& s, const Edge& e);

// Branch record for the caustic lift: only sym(E_C) is branch independent,
// the caustic normal is not, so the chosen roots are kept for
// reproducibility.
struct CausticLift {
    Mat2c matrix;
    Cx sqrt_dg;           // principal branch of sqrt(g_q - g_p)
    Cx fourth_root_la;    // principal branch of (lambda*alpha)^(1/4)
    double a = 0.5;       // weights (a, b = 1-a)
};

// E_C = (a Etilde_p + b Etilde_q) diag(sqrt(dg)/la^(1/4), la^(1/4)/sqrt(dg)) P
// with Etilde = E / sqrt(det E) and P = (1/sqrt2) [[1, i], [i, 1]].
// Requires lambda*alpha < 0 and |lambda*alpha| < 1.
CausticLift caustic_lift(const MoebiusFrame& E, const Edge& vertical_edge, double a);

// Normal of the caustic at the lift (branch- and (a,b)-sensitive).
MVector caustic_normal(const CausticLift& lift);

struct CausticFace {
    Edge source_h_edge;           // horizontal edge (m,n)-(m+1,n) the face spans
    std::array<std::size_t, 4> corners; // vertical-edge indices, counterclockwise
    double planarity_residual = 0; // Klein-model coplanarity of the corners
    bool embedded = true;
    bool triangle = false;        // two corners coincide
};

struct Caustic {
    LatticeDomain domain;              // the surface domain D
    std::vector<HPoint> points;        // per vertical edge of D
    std::vector<double> t_focal;       // per vertical edge
    std::vector<CausticFace> faces;
    double a_weight = 0.5;

    const HPoint& point(int m, int n) const {
        return points[domain.vertical_edge_index(m, n)];
    }
    double t(int m, int n) const { return t_focal[domain.vertical_edge_index(m, n)]; }
};

// Builds the caustic from the lift formula on every vertical edge, with
// faces and their geodesic-plane certificates.
Caustic build_caustic(const DiscreteSurface& s, double a = 0.5);

// Faces only (for a caustic built elsewhere).
std::vector<CausticFace> caustic_faces(const Caustic& c);

struct SingularSegment {
    Edge source_h_edge;
    HPoint a, b;      // endpoints in H^3
    Vec3 klein_a, klein_b;
    bool is_point = false;
};

struct SingularNode {
    HPoint position;
    Vec3 klein;
    int valence = 0;       // number of incident positive-length segments
    bool boundary = false; // touches the domain boundary; exempt from the valence bound
};

struct SingularGraph {
    double d = 1.0;
    std::vector<SingularSegment> segments;
    std::vector<SingularNode> nodes;
    std::vector<double> d_star;          // per vertical edge: e^{-t_focal}
    bool coincident_vertices = false;    // hypothesis: adjacent f^d vertices coincide
    bool nonembedded_faces = false;      // hypothesis: some caustic face is not embedded
    bool hypotheses_ok() const { return !coincident_vertices && !nonembedded_faces; }
};

// Intersection graph of the parallel surface f^d with the caustic faces,
// computed per horizontal edge in Klein coordinates where geodesics are
// straight segments.
SingularGraph singular_set(const DiscreteSurface& s, const Caustic& c, double d);

struct NontangencyReport {
    double min_margin = 0; // smallest angle between a normal and an incident quad plane
    Vertex argmin;
};

// Margin of Proposition-style non-tangency: at every vertex the normal is
// bounded away from the tangent plane of each incident quad.
NontangencyReport normal_nontangency_check(const DiscreteSurface& s);

} // namespace h3flat
