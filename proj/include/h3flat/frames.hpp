#pragma once

#include "h3flat/dholo.hpp"
#include "h3flat/types.hpp"

#include <memory>
#include <vector>

namespace h3flat {

enum class FrameKind { CMC1, Flat, Weingarten };

enum class PropagationOrder {
    RowMajor,    // base row left to right, then each column upward
    ColumnMajor, // base column bottom to top, then each row rightward
    Staircase,   // alternate one step right, one step up from the base
};

// 2x2 complex frame per vertex with real determinant.  Kind F solves the
// discrete Bryant equation, kind E the discrete flat frame equation, and
// Weingarten frames are E * L_t.  Frames are only defined up to real
// scalars; the induced surface is well defined.
struct MoebiusFrame {
    LatticeDomain domain;
    std::vector<Mat2c> mats;
    FrameKind kind = FrameKind::Flat;
    double t = 0.0; // Weingarten parameter, meaningful for kind Weingarten
    double lambda = 1.0;
    std::shared_ptr<const DiscreteHolomorphic> g;

    const Mat2c& at(Vertex v) const { return mats[domain.vertex_index(v)]; }
    Mat2c& at(Vertex v) { return mats[domain.vertex_index(v)]; }
};

// Edge transition of the flat frame equation, oriented from `from` to the
// other endpoint:  E_to = E_from * [[1, dg], [lambda*alpha/dg, 1]].
Mat2c flat_transition(const DiscreteHolomorphic& g, const Edge& e, Vertex from);

// Edge transition of the discrete Bryant equation:
// F_to = F_from * (I + lambda*alpha/(g_to - g_from) * [[g_from, -g_from g_to], [1, -g_to]]).
Mat2c bryant_transition(const DiscreteHolomorphic& g, const Edge& e, Vertex from);

// Propagates E from E0 at the lower-left vertex.  Throws
// SingularTransitionError if lambda*alpha = 1 on any edge of the domain.
// With det_normalized each transition is divided by sqrt(1 - lambda*alpha),
// keeping det E near 1 on large grids.
MoebiusFrame integrate_E(const DiscreteHolomorphic& g, const Mat2c& E0 = Mat2c::Identity(),
                         PropagationOrder order = PropagationOrder::RowMajor,
                         bool det_normalized = false);

MoebiusFrame integrate_F(const DiscreteHolomorphic& g, const Mat2c& F0 = Mat2c::Identity(),
                         PropagationOrder order = PropagationOrder::RowMajor);

// E_p = F_p * [[1, g_p], [0, 1]] and its inverse.
MoebiusFrame E_from_F(const MoebiusFrame& F);
MoebiusFrame F_from_E(const MoebiusFrame& E);

// Weingarten dressing L_p = [[beta, -t g_p beta], [0, 1/beta]] with
// beta = sqrt((1 + t |g_p|^2) / (1 + t^2 |g_p|^2)).  det L = 1, L|_{t=0} = I
// and L|_{t=1} = [[1, -g], [0, 1]].
Mat2c weingarten_dress_matrix(Cx gp, double t);

// Vertexwise E_p * L_p; equals E at t = 0 and F_from_E(E) at t = 1.
MoebiusFrame dress_weingarten(const MoebiusFrame& E, double t);

// Frame of the parallel surface: E_p * diag(1/sqrt(d), sqrt(d)); the stored
// holomorphic data is rescaled to d*g so the pair stays consistent.
MoebiusFrame parallel_frame(const MoebiusFrame& E, double d);

// E * [[0, 1/sqrt(|lambda|)], [-sqrt(|lambda|), 0]], the flat frame of the
// dual function ghat.  For lambda > 0 the dual increments are
// -alpha/(g_q - g_p); for lambda < 0 the sign flips (orientation flip of
// the construction), which the stored dual g records.
MoebiusFrame dual_flat_frame(const MoebiusFrame& E);

// || U V1 - V U1 || / || U V1 || for the quad's four edge transitions.
double quad_compatibility_residual(const MoebiusFrame& frame, const Quad& quad);

} // namespace h3flat
