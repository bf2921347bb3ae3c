#include "h3flat/frames.hpp"

#include <cmath>
#include <functional>

namespace h3flat {

namespace {

std::string vertex_str(Vertex v) {
    return "(" + std::to_string(v.m) + "," + std::to_string(v.n) + ")";
}

void check_transitions_regular(const DiscreteHolomorphic& g) {
    for (const Edge& e : g.domain.edges()) {
        const double la = g.lambda_alpha(e);
        if (std::abs(1.0 - la) < 1e-14 * (1.0 + std::abs(la)))
            throw SingularTransitionError("singular frame transition (lambda*alpha = 1) on edge " +
                                          vertex_str(e.a) + "-" + vertex_str(e.b));
    }
}

// Visits vertices in propagation order, reporting (to, from) steps.
// Staircase is handled separately by the caller.
void walk(const LatticeDomain& d, PropagationOrder order,
          const std::function<void(Vertex, Vertex)>& step) {
    switch (order) {
        case PropagationOrder::RowMajor:
            for (int m = d.m_lo() + 1; m <= d.m_hi(); ++m)
                step({m, d.n_lo()}, {m - 1, d.n_lo()});
            for (int m = d.m_lo(); m <= d.m_hi(); ++m)
                for (int n = d.n_lo() + 1; n <= d.n_hi(); ++n) step({m, n}, {m, n - 1});
            break;
        case PropagationOrder::ColumnMajor:
            for (int n = d.n_lo() + 1; n <= d.n_hi(); ++n)
                step({d.m_lo(), n}, {d.m_lo(), n - 1});
            for (int n = d.n_lo(); n <= d.n_hi(); ++n)
                for (int m = d.m_lo() + 1; m <= d.m_hi(); ++m) step({m, n}, {m - 1, n});
            break;
        case PropagationOrder::Staircase:
            throw GeometryError("walk: staircase order handled by caller");
    }
}

// Completes the staircase order: propagate the remaining vertices row by
// row from the nearest filled neighbor.
void complete_from_filled(const LatticeDomain& d, std::vector<bool>& filled,
                          const std::function<void(Vertex, Vertex)>& step) {
    bool progress = true;
    while (progress) {
        progress = false;
        for (int n = d.n_lo(); n <= d.n_hi(); ++n) {
            for (int m = d.m_lo(); m <= d.m_hi(); ++m) {
                const Vertex v{m, n};
                if (filled[d.vertex_index(v)]) continue;
                const Vertex left{m - 1, n}, down{m, n - 1};
                if (d.contains(left) && filled[d.vertex_index(left)]) {
                    step(v, left);
                    filled[d.vertex_index(v)] = true;
                    progress = true;
                } else if (d.contains(down) && filled[d.vertex_index(down)]) {
                    step(v, down);
                    filled[d.vertex_index(v)] = true;
                    progress = true;
                }
            }
        }
    }
}

using TransitionFn = Mat2c (*)(const DiscreteHolomorphic&, const Edge&, Vertex);

MoebiusFrame integrate(const DiscreteHolomorphic& g, const Mat2c& M0, PropagationOrder order,
                       TransitionFn transition, FrameKind kind, bool det_normalized) {
    check_transitions_regular(g);
    const Cx det0 = M0.determinant();
    if (std::abs(det0.imag()) > 1e-10 * std::abs(det0) || std::abs(det0) == 0.0)
        throw GeometryError("integrate: base frame must have real nonzero determinant");

    MoebiusFrame f;
    f.domain = g.domain;
    f.kind = kind;
    f.lambda = g.lambda;
    f.g = std::make_shared<DiscreteHolomorphic>(g);
    f.mats.assign(g.domain.vertex_count(), Mat2c::Zero());

    const Vertex base{g.domain.m_lo(), g.domain.n_lo()};
    f.at(base) = M0;
    std::vector<bool> filled(g.domain.vertex_count(), false);
    filled[g.domain.vertex_index(base)] = true;

    auto step = [&](Vertex to, Vertex from) {
        const Edge e = Edge::make(from, to);
        Mat2c T = transition(g, e, from);
        if (det_normalized) T /= std::sqrt(Cx(1.0 - g.lambda_alpha(e), 0.0));
        f.at(to) = f.at(from) * T;
        filled[g.domain.vertex_index(to)] = true;
    };

    if (order == PropagationOrder::Staircase) {
        int m = base.m, n = base.n;
        bool right = true;
        while (m < g.domain.m_hi() || n < g.domain.n_hi()) {
            if ((right && m < g.domain.m_hi()) || n == g.domain.n_hi()) {
                step({m + 1, n}, {m, n});
                ++m;
            } else {
                step({m, n + 1}, {m, n});
                ++n;
            }
            right = !right;
        }
        complete_from_filled(g.domain, filled, step);
    } else {
        walk(g.domain, order, step);
    }
    return f;
}

} // namespace

Mat2c flat_transition(const DiscreteHolomorphic& g, const Edge& e, Vertex from) {
    const Vertex to = (e.a == from) ? e.b : e.a;
    const Cx dg = g.value(to) - g.value(from);
    const double scale = std::max({std::abs(g.value(to)), std::abs(g.value(from)), 1.0});
    if (std::abs(dg) < 1e-13 * scale)
        throw DegenerateEdgeError("flat_transition: degenerate edge at " + vertex_str(from));
    const double la = g.lambda_alpha(e);
    return mat2c(1.0, dg, la / dg, 1.0);
}

Mat2c bryant_transition(const DiscreteHolomorphic& g, const Edge& e, Vertex from) {
    const Vertex to = (e.a == from) ? e.b : e.a;
    const Cx gp = g.value(from), gq = g.value(to);
    const Cx dg = gq - gp;
    const double scale = std::max({std::abs(gp), std::abs(gq), 1.0});
    if (std::abs(dg) < 1e-13 * scale)
        throw DegenerateEdgeError("bryant_transition: degenerate edge at " + vertex_str(from));
    const Cx s = g.lambda_alpha(e) / dg;
    return Mat2c::Identity() + s * mat2c(gp, -gp * gq, 1.0, -gq);
}

MoebiusFrame integrate_E(const DiscreteHolomorphic& g, const Mat2c& E0, PropagationOrder order,
                         bool det_normalized) {
    return integrate(g, E0, order, &flat_transition, FrameKind::Flat, det_normalized);
}

MoebiusFrame integrate_F(const DiscreteHolomorphic& g, const Mat2c& F0, PropagationOrder order) {
    return integrate(g, F0, order, &bryant_transition, FrameKind::CMC1, false);
}

MoebiusFrame E_from_F(const MoebiusFrame& F) {
    if (F.kind != FrameKind::CMC1) throw GeometryError("E_from_F: frame is not of kind F");
    MoebiusFrame E = F;
    E.kind = FrameKind::Flat;
    for (const Vertex& v : F.domain.vertices())
        E.at(v) = F.at(v) * mat2c(1.0, F.g->value(v), 0.0, 1.0);
    return E;
}

MoebiusFrame F_from_E(const MoebiusFrame& E) {
    if (E.kind != FrameKind::Flat) throw GeometryError("F_from_E: frame is not of kind E");
    MoebiusFrame F = E;
    F.kind = FrameKind::CMC1;
    for (const Vertex& v : E.domain.vertices())
        F.at(v) = E.at(v) * mat2c(1.0, -E.g->value(v), 0.0, 1.0);
    return F;
}

Mat2c weingarten_dress_matrix(Cx gp, double t) {
    const double gg = std::norm(gp);
    const double beta = std::sqrt((1.0 + t * gg) / (1.0 + t * t * gg));
    return mat2c(beta, -t * gp * beta, 0.0, 1.0 / beta);
}

MoebiusFrame dress_weingarten(const MoebiusFrame& E, double t) {
    if (E.kind != FrameKind::Flat) throw GeometryError("dress_weingarten: frame is not of kind E");
    if (t < 0.0 || t > 1.0) throw std::invalid_argument("dress_weingarten: t must lie in [0,1]");
    MoebiusFrame W = E;
    W.kind = FrameKind::Weingarten;
    W.t = t;
    for (const Vertex& v : E.domain.vertices())
        W.at(v) = E.at(v) * weingarten_dress_matrix(E.g->value(v), t);
    return W;
}

MoebiusFrame parallel_frame(const MoebiusFrame& E, double d) {
    if (E.kind != FrameKind::Flat) throw GeometryError("parallel_frame: frame is not of kind E");
    if (!(d > 0.0)) throw std::invalid_argument("parallel_frame: d must be positive");
    MoebiusFrame P = E;
    const Mat2c D = mat2c(1.0 / std::sqrt(d), 0.0, 0.0, std::sqrt(d));
    for (const Vertex& v : E.domain.vertices()) P.at(v) = E.at(v) * D;
    auto scaled = std::make_shared<DiscreteHolomorphic>(*E.g);
    for (Cx& z : scaled->values) z *= d;
    P.g = std::move(scaled);
    return P;
}

MoebiusFrame dual_flat_frame(const MoebiusFrame& E) {
    if (E.kind != FrameKind::Flat) throw GeometryError("dual_flat_frame: frame is not of kind E");
    const double s = std::sqrt(std::abs(E.lambda));
    const Mat2c J = mat2c(0.0, 1.0 / s, -s, 0.0);

    MoebiusFrame D = E;
    for (const Vertex& v : E.domain.vertices()) D.at(v) = E.at(v) * J;

    // The dual frame's transitions realize the dual function; propagate it
    // so the stored pair stays consistent.  For lambda < 0 the increment
    // sign flips (orientation flip of the construction).
    const double sign = E.lambda > 0 ? 1.0 : -1.0;
    auto dual = std::make_shared<DiscreteHolomorphic>(*E.g);
    const LatticeDomain& dom = E.domain;
    auto inc = [&](const Edge& e) { return -sign * E.g->alpha(e) / E.g->dg(e); };
    dual->values.assign(dom.vertex_count(), Cx(0, 0));
    for (int m = dom.m_lo() + 1; m <= dom.m_hi(); ++m)
        dual->value({m, dom.n_lo()}) = dual->value({m - 1, dom.n_lo()}) +
                                       inc(Edge::make({m - 1, dom.n_lo()}, {m, dom.n_lo()}));
    for (int m = dom.m_lo(); m <= dom.m_hi(); ++m)
        for (int n = dom.n_lo() + 1; n <= dom.n_hi(); ++n)
            dual->value({m, n}) =
                dual->value({m, n - 1}) + inc(Edge::make({m, n - 1}, {m, n}));
    D.g = std::move(dual);
    return D;
}

double quad_compatibility_residual(const MoebiusFrame& frame, const Quad& quad) {
    const DiscreteHolomorphic& g = *frame.g;
    const auto transition = frame.kind == FrameKind::CMC1 ? &bryant_transition : &flat_transition;
    const Mat2c U = transition(g, quad.edge_pq(), quad.p);
    const Mat2c V1 = transition(g, quad.edge_qr(), quad.q());
    const Mat2c V = transition(g, quad.edge_ps(), quad.p);
    const Mat2c U1 = transition(g, quad.edge_sr(), quad.s());
    const Mat2c lhs = U * V1;
    const Mat2c rhs = V * U1;
    return (lhs - rhs).norm() / lhs.norm();
}

} // namespace h3flat
