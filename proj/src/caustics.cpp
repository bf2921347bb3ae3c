#include "h3flat/caustics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace h3flat {

namespace {

const DiscreteHolomorphic& holo_of(const DiscreteSurface& s, const char* who) {
    if (!s.frame || !s.frame->g)
        throw GeometryError(std::string(who) + ": surface carries no frame/holomorphic data");
    return *s.frame->g;
}

} // namespace

double focal_time(double dg_norm2, double lambda_alpha) {
    if (!(lambda_alpha < 0))
        throw NoIntersectionError("focal_time: normal geodesics intersect iff lambda*alpha < 0");
    const double denom = std::sqrt(-4.0 * lambda_alpha) * std::sqrt(dg_norm2);
    const double sh = (dg_norm2 + lambda_alpha) / denom;
    return std::asinh(sh);
}

FocalDistanceR31 focal_distance_R31(const DiscreteSurface& s, const Edge& e) {
    const DiscreteHolomorphic& g = holo_of(s, "focal_distance_R31");
    const double la = g.lambda_alpha(e);
    const double d2 = std::norm(g.dg(e));
    FocalDistanceR31 out;
    if (std::abs(d2 - la) <= 1e-14 * (d2 + std::abs(la))) {
        out.parallel = true;
        out.distance = std::numeric_limits<double>::infinity();
        return out;
    }
    out.distance = std::abs((d2 + la) / (d2 - la));
    return out;
}

FocalPoint focal_point_from(const DiscreteSurface& s, const Edge& e, bool q_side) {
    const DiscreteHolomorphic& g = holo_of(s, "focal_point");
    if (e.kind != EdgeKind::Vertical)
        throw GeometryError("focal_point: expected a vertical edge");
    const double la = g.lambda_alpha(e);
    const double d2 = std::norm(g.dg(e));
    const double t = focal_time(d2, la);
    const Vertex v = q_side ? e.b : e.a;
    FocalPoint fp;
    fp.t = t;
    fp.point = geodesic_point(s.point(v), MVector{s.normal_at(v)}, t);
    return fp;
}

FocalPoint focal_point(const DiscreteSurface& s, const Edge& e) {
    return focal_point_from(s, e, false);
}

double coplanarity_check_residual(const DiscreteSurface& s, const Edge& e) {
    Eigen::Matrix4d M;
    M.row(0) = s.point(e.a).x.transpose();
    M.row(1) = (s.point(e.a).x + s.normal_at(e.a)).transpose();
    M.row(2) = s.point(e.b).x.transpose();
    M.row(3) = (s.point(e.b).x + s.normal_at(e.b)).transpose();
    Eigen::JacobiSVD<Eigen::Matrix4d> svd(M);
    const auto& sv = svd.singularValues();
    return sv[0] > 0 ? sv[3] / sv[0] : 0.0;
}

bool coplanarity_check(const DiscreteSurface& s, const Edge& e, double tol) {
    return coplanarity_check_residual(s, e) <= tol;
}

CausticLift caustic_lift(const MoebiusFrame& E, const Edge& e, double a) {
    if (E.kind != FrameKind::Flat) throw GeometryError("caustic_lift: frame is not of kind E");
    if (!E.g) throw GeometryError("caustic_lift: frame carries no holomorphic data");
    if (a < 0.0 || a > 1.0) throw std::invalid_argument("caustic_lift: a must lie in [0,1]");
    const DiscreteHolomorphic& g = *E.g;
    const double la = g.lambda_alpha(e);
    if (!(la < 0)) throw NoIntersectionError("caustic_lift: lambda*alpha must be negative");
    if (!(std::abs(la) < 1.0))
        throw GeometryError("caustic_lift: |lambda*alpha| must be < 1");

    auto tilde = [](const Mat2c& M) {
        const Cx det = M.determinant();
        if (!(det.real() > 0) || std::abs(det.imag()) > 1e-10 * std::abs(det))
            throw GeometryError("caustic_lift: frame determinant must be positive real");
        return Mat2c(M / std::sqrt(det.real()));
    };

    CausticLift lift;
    lift.a = a;
    lift.sqrt_dg = std::sqrt(g.dg(e));
    // fourth root of the negative real la on the lower branch
    // |la|^(1/4) e^{-i pi/4}; sym of the lift is branch independent, the
    // caustic normal is not, and this branch realizes the closed normal
    // formula (see caustic_normal)
    lift.fourth_root_la = std::conj(std::pow(Cx(la, 0.0), 0.25));
    const Mat2c D = mat2c(lift.sqrt_dg / lift.fourth_root_la, 0.0, 0.0,
                          lift.fourth_root_la / lift.sqrt_dg);
    const Mat2c P = (1.0 / std::sqrt(2.0)) * mat2c(1.0, kI, kI, 1.0);
    const Mat2c avg = a * tilde(E.at(e.a)) + (1.0 - a) * tilde(E.at(e.b));
    lift.matrix = avg * D * P;
    return lift;
}

MVector caustic_normal(const CausticLift& lift) {
    return sym_normal(lift.matrix);
}

namespace {

std::array<Vec3, 4> face_klein(const Caustic& c, const CausticFace& face) {
    std::array<Vec3, 4> k;
    for (int i = 0; i < 4; ++i) k[i] = klein(HPoint{c.points[face.corners[i]].x});
    return k;
}

double face_planarity(const std::array<Vec3, 4>& k) {
    Vec3 c0 = (k[0] + k[1] + k[2] + k[3]) / 4.0;
    Eigen::Matrix<double, 4, 3> M;
    for (int i = 0; i < 4; ++i) M.row(i) = (k[i] - c0).transpose();
    Eigen::JacobiSVD<Eigen::Matrix<double, 4, 3>> svd(M);
    const auto& sv = svd.singularValues();
    return sv[0] > 0 ? sv[2] / sv[0] : 0.0;
}

double orient2(const Vec2& a, const Vec2& b, const Vec2& c) {
    return (b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x());
}

bool segments_cross_2d(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
    const double o1 = orient2(a, b, c), o2 = orient2(a, b, d);
    const double o3 = orient2(c, d, a), o4 = orient2(c, d, b);
    return ((o1 > 0) != (o2 > 0)) && ((o3 > 0) != (o4 > 0));
}

void classify_face(const std::array<Vec3, 4>& k, CausticFace& face) {
    double diam = 0;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) diam = std::max(diam, (k[i] - k[j]).norm());
    const double tol = std::max(1e-10, 1e-10 * diam);

    face.triangle = false;
    bool degenerate = false;
    for (int i = 0; i < 4; ++i)
        if ((k[i] - k[(i + 1) % 4]).norm() < tol) {
            face.triangle = true;
            degenerate = true;
        }
    // project to the fitted plane for the crossing tests
    Vec3 c0 = (k[0] + k[1] + k[2] + k[3]) / 4.0;
    Eigen::Matrix<double, 4, 3> M;
    for (int i = 0; i < 4; ++i) M.row(i) = (k[i] - c0).transpose();
    Eigen::JacobiSVD<Eigen::Matrix<double, 4, 3>> svd(M, Eigen::ComputeFullV);
    const Vec3 e1 = svd.matrixV().col(0), e2 = svd.matrixV().col(1);
    std::array<Vec2, 4> p;
    for (int i = 0; i < 4; ++i) p[i] = Vec2((k[i] - c0).dot(e1), (k[i] - c0).dot(e2));

    const bool crossing = segments_cross_2d(p[0], p[1], p[2], p[3]) ||
                          segments_cross_2d(p[1], p[2], p[3], p[0]);
    face.embedded = !degenerate && !crossing;
}

} // namespace

std::vector<CausticFace> caustic_faces(const Caustic& c) { return c.faces; }

Caustic build_caustic(const DiscreteSurface& s, double a) {
    if (s.kind != FrameKind::Flat)
        throw GeometryError("build_caustic: surface is not of flat kind");
    if (!s.frame) throw GeometryError("build_caustic: surface carries no frame");
    const MoebiusFrame& E = *s.frame;
    const LatticeDomain& d = s.domain;

    Caustic c;
    c.domain = d;
    c.a_weight = a;
    c.points.assign(d.vertical_edge_count(), HPoint{});
    c.t_focal.assign(d.vertical_edge_count(), 0.0);

    for (const Edge& e : d.vertical_edges()) {
        const CausticLift lift = caustic_lift(E, e, a);
        const std::size_t idx = d.edge_index(e);
        c.points[idx] = sym(lift.matrix);
        c.t_focal[idx] = focal_time(std::norm(E.g->dg(e)), E.g->lambda_alpha(e));
    }

    for (int n = d.n_lo() + 1; n <= d.n_hi() - 1; ++n) {
        for (int m = d.m_lo(); m < d.m_hi(); ++m) {
            CausticFace face;
            face.source_h_edge = Edge::make({m, n}, {m + 1, n});
            face.corners = {d.vertical_edge_index(m, n - 1), d.vertical_edge_index(m + 1, n - 1),
                            d.vertical_edge_index(m + 1, n), d.vertical_edge_index(m, n)};
            const auto k = face_klein(c, face);
            face.planarity_residual = face_planarity(k);
            classify_face(k, face);
            c.faces.push_back(face);
        }
    }
    return c;
}

namespace {

// Point-in-polygon with inclusive boundary: winding number plus a distance
// test against each side at tolerance tol.
bool point_in_polygon(const Vec2& pt, const std::array<Vec2, 4>& poly, double tol) {
    for (int i = 0; i < 4; ++i) {
        const Vec2 a = poly[i], b = poly[(i + 1) % 4];
        const Vec2 ab = b - a;
        const double len2 = ab.squaredNorm();
        if (len2 == 0) {
            if ((pt - a).norm() <= tol) return true;
            continue;
        }
        const double u = std::clamp((pt - a).dot(ab) / len2, 0.0, 1.0);
        if ((pt - (a + u * ab)).norm() <= tol) return true;
    }
    int winding = 0;
    for (int i = 0; i < 4; ++i) {
        const Vec2 a = poly[i], b = poly[(i + 1) % 4];
        if (a.y() <= pt.y()) {
            if (b.y() > pt.y() && orient2(a, b, pt) > 0) ++winding;
        } else {
            if (b.y() <= pt.y() && orient2(a, b, pt) < 0) --winding;
        }
    }
    return winding != 0;
}

struct ClipResult {
    std::vector<std::pair<double, double>> intervals; // params on [0,1]
};

ClipResult clip_segment(const Vec2& p0, const Vec2& p1, const std::array<Vec2, 4>& poly,
                        double tol) {
    std::vector<double> ts{0.0, 1.0};
    const Vec2 dir = p1 - p0;
    for (int i = 0; i < 4; ++i) {
        const Vec2 a = poly[i], b = poly[(i + 1) % 4];
        const Vec2 e = b - a;
        const double denom = dir.x() * e.y() - dir.y() * e.x();
        if (std::abs(denom) < 1e-300) continue;
        const Vec2 w = a - p0;
        const double t = (w.x() * e.y() - w.y() * e.x()) / denom;
        const double u = (w.x() * dir.y() - w.y() * dir.x()) / (-denom);
        if (t > -tol && t < 1 + tol && u > -tol && u < 1 + tol)
            ts.push_back(std::clamp(t, 0.0, 1.0));
    }
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end(),
                         [&](double x, double y) { return std::abs(x - y) < 1e-12; }),
             ts.end());

    ClipResult out;
    const double bnd_tol = std::max(tol, 1e-12);
    for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
        const double mid = 0.5 * (ts[i] + ts[i + 1]);
        if (point_in_polygon(p0 + mid * dir, poly, bnd_tol)) {
            if (!out.intervals.empty() && std::abs(out.intervals.back().second - ts[i]) < 1e-12)
                out.intervals.back().second = ts[i + 1];
            else
                out.intervals.push_back({ts[i], ts[i + 1]});
        }
    }
    if (out.intervals.empty() && (p1 - p0).norm() < tol &&
        point_in_polygon(p0, poly, bnd_tol))
        out.intervals.push_back({0.0, 0.0});
    // isolated boundary touches: endpoints on the polygon with interior
    // midpoints outside
    if (out.intervals.empty()) {
        for (double t : {0.0, 1.0})
            if (point_in_polygon(p0 + t * dir, poly, bnd_tol)) {
                out.intervals.push_back({t, t});
            }
    }
    return out;
}

} // namespace

SingularGraph singular_set(const DiscreteSurface& s, const Caustic& c, double d) {
    if (s.kind != FrameKind::Flat)
        throw GeometryError("singular_set: surface is not of flat kind");
    if (!(d > 0)) throw std::invalid_argument("singular_set: d must be positive");

    const LatticeDomain& dom = s.domain;
    SingularGraph graph;
    graph.d = d;

    const DiscreteSurface fd = parallel_surface(s, d);

    graph.d_star.assign(dom.vertical_edge_count(), 0.0);
    for (const Edge& e : dom.vertical_edges())
        graph.d_star[dom.edge_index(e)] = std::exp(-c.t_focal[dom.edge_index(e)]);

    // Hypotheses of the valence theorem.  Coincidence is detected on the
    // coordinate gap: the hyperbolic distance of nearly equal points sits
    // on a square-root rounding floor.
    for (const Edge& e : dom.edges()) {
        if (point_agreement(fd.point(e.a).x, fd.point(e.b).x) < 1e-10) {
            graph.coincident_vertices = true;
            break;
        }
    }
    for (const CausticFace& f : c.faces)
        if (!f.embedded) {
            graph.nonembedded_faces = true;
            break;
        }

    struct RawEndpoint {
        Vec3 klein;
        HPoint pos;
        bool exempt = false;
        int segment = -1; // index of a positive-length segment, -1 for points
    };
    std::vector<RawEndpoint> endpoints;

    const double tol = 1e-9;
    for (const CausticFace& face : c.faces) {
        const Vertex p = face.source_h_edge.a;
        const Vertex q = face.source_h_edge.b;

        const auto k = face_klein(c, face);
        const Vec3 kp = klein(fd.point(p));
        const Vec3 kq = klein(fd.point(q));

        // everything for this edge lies in one plane; use the face's frame
        Vec3 c0 = (k[0] + k[1] + k[2] + k[3]) / 4.0;
        Eigen::Matrix<double, 4, 3> M;
        for (int i = 0; i < 4; ++i) M.row(i) = (k[i] - c0).transpose();
        Eigen::JacobiSVD<Eigen::Matrix<double, 4, 3>> svd(M, Eigen::ComputeFullV);
        const Vec3 e1 = svd.matrixV().col(0), e2 = svd.matrixV().col(1);
        auto to2d = [&](const Vec3& x) {
            return Vec2((x - c0).dot(e1), (x - c0).dot(e2));
        };
        std::array<Vec2, 4> poly{to2d(k[0]), to2d(k[1]), to2d(k[2]), to2d(k[3])};
        const Vec2 p0 = to2d(kp), p1 = to2d(kq);

        const ClipResult clip = clip_segment(p0, p1, poly, tol);
        for (const auto& [t0, t1] : clip.intervals) {
            auto lift3 = [&](double t) { return Vec3(kp + t * (kq - kp)); };
            // interpolate in Klein coordinates, then lift back to H^3
            auto lifth = [&](double t) {
                const Vec3 kk = lift3(t);
                const double denom2 = 1.0 - kk.squaredNorm();
                if (denom2 <= 0) throw GeometryError("singular_set: point outside the Klein ball");
                const double x0 = 1.0 / std::sqrt(denom2);
                return HPoint{Vec4(x0, x0 * kk.x(), x0 * kk.y(), x0 * kk.z())};
            };
            const double len = (lift3(t1) - lift3(t0)).norm();
            const bool is_point = len < 1e-10;

            auto endpoint_exempt = [&](double t) {
                if (t < tol) return p.m - 1 < dom.m_lo() || dom.on_boundary(p);
                if (t > 1 - tol) return q.m + 1 > dom.m_hi() || dom.on_boundary(q);
                // crossing in the interior of the segment: find the side it
                // lies on; bottom/top caustic edges exit the face complex at
                // the extreme rows, geodesic sides at the extreme columns
                const Vec2 x = p0 + t * (p1 - p0);
                for (int i = 0; i < 4; ++i) {
                    const Vec2 a = poly[i], b = poly[(i + 1) % 4];
                    const Vec2 ab = b - a;
                    const double len2 = ab.squaredNorm();
                    if (len2 == 0) continue;
                    const double u = std::clamp((x - a).dot(ab) / len2, 0.0, 1.0);
                    if ((x - (a + u * ab)).norm() <= tol) {
                        if (i == 0 && p.n - 1 == dom.n_lo()) return true;     // bottom
                        if (i == 2 && p.n + 1 == dom.n_hi()) return true;     // top
                        if (i == 3 && p.m == dom.m_lo()) return true;        // left
                        if (i == 1 && q.m == dom.m_hi()) return true;        // right
                    }
                }
                return false;
            };

            if (is_point) {
                RawEndpoint ep;
                ep.klein = lift3(0.5 * (t0 + t1));
                ep.pos = lifth(0.5 * (t0 + t1));
                ep.exempt = endpoint_exempt(t0) || endpoint_exempt(t1);
                ep.segment = -1;
                endpoints.push_back(ep);
                SingularSegment seg;
                seg.source_h_edge = face.source_h_edge;
                seg.a = seg.b = ep.pos;
                seg.klein_a = seg.klein_b = ep.klein;
                seg.is_point = true;
                graph.segments.push_back(seg);
            } else {
                SingularSegment seg;
                seg.source_h_edge = face.source_h_edge;
                seg.a = lifth(t0);
                seg.b = lifth(t1);
                seg.klein_a = lift3(t0);
                seg.klein_b = lift3(t1);
                seg.is_point = false;
                const int idx = int(graph.segments.size());
                graph.segments.push_back(seg);
                endpoints.push_back({seg.klein_a, seg.a, endpoint_exempt(t0), idx});
                endpoints.push_back({seg.klein_b, seg.b, endpoint_exempt(t1), idx});
            }
        }
    }

    // Cluster endpoints into nodes.
    const double node_tol = 1e-8;
    std::vector<int> assigned(endpoints.size(), -1);
    for (std::size_t i = 0; i < endpoints.size(); ++i) {
        if (assigned[i] >= 0) continue;
        SingularNode node;
        node.position = endpoints[i].pos;
        node.klein = endpoints[i].klein;
        node.valence = 0;
        node.boundary = false;
        const int id = int(graph.nodes.size());
        for (std::size_t j = i; j < endpoints.size(); ++j) {
            if (assigned[j] >= 0) continue;
            if ((endpoints[j].klein - endpoints[i].klein).norm() <= node_tol) {
                assigned[j] = id;
                if (endpoints[j].segment >= 0) ++node.valence;
                node.boundary = node.boundary || endpoints[j].exempt;
            }
        }
        graph.nodes.push_back(node);
    }
    return graph;
}

NontangencyReport normal_nontangency_check(const DiscreteSurface& s) {
    NontangencyReport rep;
    rep.min_margin = std::numeric_limits<double>::infinity();
    const LatticeDomain& d = s.domain;
    for (const Vertex& v : d.vertices()) {
        // incident quads have lower-left corners in [m-1,m] x [n-1,n]
        for (int dm = -1; dm <= 0; ++dm) {
            for (int dn = -1; dn <= 0; ++dn) {
                const Quad q{{v.m + dm, v.n + dn}};
                if (!d.contains(q)) continue;
                // the two quad corners adjacent to v
                const Vertex nb1{v.m + (dm == 0 ? 1 : -1), v.n};
                const Vertex nb2{v.m, v.n + (dn == 0 ? 1 : -1)};
                const Vec4 fv = s.point(v).x;
                auto tangent = [&](Vertex w) {
                    Vec4 u = s.point(w).x - fv;
                    return Vec4(u + minkowski_dot(u, fv) * fv);
                };
                Vec4 u1 = tangent(nb1);
                Vec4 u2 = tangent(nb2);
                const double n1 = minkowski_dot(u1, u1);
                double margin = 0;
                if (n1 > 0) {
                    const Vec4 e1 = u1 / std::sqrt(n1);
                    u2 -= minkowski_dot(u2, e1) * e1;
                    const double n2 = minkowski_dot(u2, u2);
                    if (n2 > 1e-26) {
                        const Vec4 e2 = u2 / std::sqrt(n2);
                        Vec4 r = s.normal_at(v);
                        r -= minkowski_dot(r, e1) * e1;
                        r -= minkowski_dot(r, e2) * e2;
                        const double rn = minkowski_dot(r, r);
                        margin = std::asin(std::clamp(rn > 0 ? std::sqrt(rn) : 0.0, 0.0, 1.0));
                    }
                }
                if (margin < rep.min_margin) {
                    rep.min_margin = margin;
                    rep.argmin = v;
                }
            }
        }
    }
    return rep;
}

} // namespace h3flat
