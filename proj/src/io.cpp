#include "h3flat/io.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace h3flat {

using nlohmann::json;

namespace {

json cx_json(Cx z) { return json::array({z.real(), z.imag()}); }
json vec4_json(const Vec4& v) { return json::array({v[0], v[1], v[2], v[3]}); }
json mat_json(const Mat2c& m) {
    return json::array({cx_json(m(0, 0)), cx_json(m(0, 1)), cx_json(m(1, 0)), cx_json(m(1, 1))});
}

struct Path {
    std::string p;
    Path operator/(const std::string& key) const { return {p + "/" + key}; }
    Path operator/(std::size_t i) const { return {p + "/" + std::to_string(i)}; }
};

[[noreturn]] void fail(const Path& at, const std::string& what) {
    throw GeometryError("document schema violation at '" + at.p + "': " + what);
}

const json& field(const json& j, const Path& at, const std::string& key) {
    if (!j.is_object()) fail(at, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) fail(at / key, "missing field");
    return *it;
}

double num(const json& j, const Path& at) {
    if (!j.is_number()) fail(at, "expected a number");
    return j.get<double>();
}

int integer(const json& j, const Path& at) {
    if (!j.is_number_integer()) fail(at, "expected an integer");
    return j.get<int>();
}

Cx cx_of(const json& j, const Path& at) {
    if (!j.is_array() || j.size() != 2) fail(at, "expected [re, im]");
    return Cx(num(j[0], at / std::size_t(0)), num(j[1], at / std::size_t(1)));
}

Vec4 vec4_of(const json& j, const Path& at) {
    if (!j.is_array() || j.size() != 4) fail(at, "expected [x0, x1, x2, x3]");
    return Vec4(num(j[0], at / std::size_t(0)), num(j[1], at / std::size_t(1)),
                num(j[2], at / std::size_t(2)), num(j[3], at / std::size_t(3)));
}

Mat2c mat_of(const json& j, const Path& at) {
    if (!j.is_array() || j.size() != 4) fail(at, "expected 4 complex entries");
    return mat2c(cx_of(j[0], at / std::size_t(0)), cx_of(j[1], at / std::size_t(1)),
                 cx_of(j[2], at / std::size_t(2)), cx_of(j[3], at / std::size_t(3)));
}

std::string kind_str(FrameKind k) {
    switch (k) {
        case FrameKind::CMC1: return "cmc1";
        case FrameKind::Flat: return "flat";
        case FrameKind::Weingarten: return "weingarten";
    }
    return "flat";
}

FrameKind kind_of(const std::string& s, const Path& at) {
    if (s == "cmc1") return FrameKind::CMC1;
    if (s == "flat") return FrameKind::Flat;
    if (s == "weingarten") return FrameKind::Weingarten;
    fail(at, "unknown frame kind '" + s + "'");
}

json domain_json(const LatticeDomain& d) {
    return {{"m_lo", d.m_lo()}, {"m_hi", d.m_hi()}, {"n_lo", d.n_lo()}, {"n_hi", d.n_hi()}};
}

LatticeDomain domain_of(const json& j, const Path& at) {
    const int m_lo = integer(field(j, at, "m_lo"), at / "m_lo");
    const int m_hi = integer(field(j, at, "m_hi"), at / "m_hi");
    const int n_lo = integer(field(j, at, "n_lo"), at / "n_lo");
    const int n_hi = integer(field(j, at, "n_hi"), at / "n_hi");
    if (m_lo >= m_hi || n_lo >= n_hi) fail(at, "degenerate domain ranges");
    return LatticeDomain(m_lo, m_hi, n_lo, n_hi);
}

} // namespace

std::string to_json(const SurfaceDocument& doc) {
    json j;
    j["format_version"] = doc.format_version;
    j["generator"] = {{"kind", doc.generator.kind},
                      {"c", cx_json(doc.generator.c)},
                      {"gamma", json::array({doc.generator.gamma_num, doc.generator.gamma_den})},
                      {"lambda", doc.generator.lambda}};
    j["domain"] = domain_json(doc.g.domain);
    json gv = json::array();
    for (const Cx& z : doc.g.values) gv.push_back(cx_json(z));
    j["g"] = std::move(gv);
    j["alpha"] = {{"horizontal", doc.g.alpha_h}, {"vertical", doc.g.alpha_v}};
    j["lambda"] = doc.g.lambda;
    if (doc.frames) {
        json fr = json::array();
        for (const Mat2c& m : *doc.frames) fr.push_back(mat_json(m));
        j["frames"] = std::move(fr);
    }
    json sv = json::array(), nv = json::array();
    for (const Vec4& v : doc.surface) sv.push_back(vec4_json(v));
    for (const Vec4& v : doc.normals) nv.push_back(vec4_json(v));
    j["surface"] = std::move(sv);
    j["normals"] = std::move(nv);
    j["metadata"] = {{"kind", kind_str(doc.kind)}, {"t", doc.t}, {"d", doc.d}};
    return j.dump(2);
}

SurfaceDocument surface_document_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw GeometryError(std::string("document parse error: ") + e.what());
    }
    const Path root{""};
    SurfaceDocument doc;
    doc.format_version = integer(field(j, root, "format_version"), root / "format_version");
    if (doc.format_version != 1) fail(root / "format_version", "unsupported version");

    const json& gen = field(j, root, "generator");
    doc.generator.kind = field(gen, root / "generator", "kind").get<std::string>();
    doc.generator.c = cx_of(field(gen, root / "generator", "c"), root / "generator" / "c");
    const json& gamma = field(gen, root / "generator", "gamma");
    if (!gamma.is_array() || gamma.size() != 2)
        fail(root / "generator" / "gamma", "expected [num, den]");
    doc.generator.gamma_num = gamma[0].get<long>();
    doc.generator.gamma_den = gamma[1].get<long>();
    doc.generator.lambda = num(field(gen, root / "generator", "lambda"),
                               root / "generator" / "lambda");

    doc.g.domain = domain_of(field(j, root, "domain"), root / "domain");
    const json& gv = field(j, root, "g");
    if (!gv.is_array() || gv.size() != doc.g.domain.vertex_count())
        fail(root / "g", "expected one value per vertex");
    for (std::size_t i = 0; i < gv.size(); ++i)
        doc.g.values.push_back(cx_of(gv[i], root / "g" / i));

    const json& alpha = field(j, root, "alpha");
    const json& ah = field(alpha, root / "alpha", "horizontal");
    const json& av = field(alpha, root / "alpha", "vertical");
    if (!ah.is_array() || int(ah.size()) != doc.g.domain.width() - 1)
        fail(root / "alpha" / "horizontal", "expected width-1 weights");
    if (!av.is_array() || int(av.size()) != doc.g.domain.height() - 1)
        fail(root / "alpha" / "vertical", "expected height-1 weights");
    for (std::size_t i = 0; i < ah.size(); ++i)
        doc.g.alpha_h.push_back(num(ah[i], root / "alpha" / "horizontal" / i));
    for (std::size_t i = 0; i < av.size(); ++i)
        doc.g.alpha_v.push_back(num(av[i], root / "alpha" / "vertical" / i));
    doc.g.lambda = num(field(j, root, "lambda"), root / "lambda");

    if (j.contains("frames")) {
        const json& fr = j["frames"];
        if (!fr.is_array() || fr.size() != doc.g.domain.vertex_count())
            fail(root / "frames", "expected one matrix per vertex");
        std::vector<Mat2c> mats;
        for (std::size_t i = 0; i < fr.size(); ++i)
            mats.push_back(mat_of(fr[i], root / "frames" / i));
        doc.frames = std::move(mats);
    }

    const json& sv = field(j, root, "surface");
    const json& nv = field(j, root, "normals");
    if (!sv.is_array() || sv.size() != doc.g.domain.vertex_count())
        fail(root / "surface", "expected one vertex per lattice vertex");
    if (!nv.is_array() || nv.size() != sv.size())
        fail(root / "normals", "expected one normal per vertex");
    for (std::size_t i = 0; i < sv.size(); ++i)
        doc.surface.push_back(vec4_of(sv[i], root / "surface" / i));
    for (std::size_t i = 0; i < nv.size(); ++i)
        doc.normals.push_back(vec4_of(nv[i], root / "normals" / i));

    const json& meta = field(j, root, "metadata");
    doc.kind = kind_of(field(meta, root / "metadata", "kind").get<std::string>(),
                       root / "metadata" / "kind");
    doc.t = num(field(meta, root / "metadata", "t"), root / "metadata" / "t");
    doc.d = num(field(meta, root / "metadata", "d"), root / "metadata" / "d");
    return doc;
}

std::string to_json(const CausticDocument& doc) {
    json j;
    j["format_version"] = doc.format_version;
    j["domain"] = domain_json(doc.domain);
    json pts = json::array();
    for (const Vec4& v : doc.points) pts.push_back(vec4_json(v));
    j["points"] = std::move(pts);
    j["t_focal"] = doc.t_focal;
    j["a_weight"] = doc.a_weight;
    json faces = json::array();
    for (const auto& f : doc.faces)
        faces.push_back({{"m", f.m},
                         {"n", f.n},
                         {"planarity_residual", f.planarity_residual},
                         {"embedded", f.embedded},
                         {"triangle", f.triangle}});
    j["faces"] = std::move(faces);
    return j.dump(2);
}

CausticDocument caustic_document_from_json(const std::string& text) {
    json j = json::parse(text);
    const Path root{""};
    CausticDocument doc;
    doc.format_version = integer(field(j, root, "format_version"), root / "format_version");
    doc.domain = domain_of(field(j, root, "domain"), root / "domain");
    const json& pts = field(j, root, "points");
    if (!pts.is_array() || pts.size() != doc.domain.vertical_edge_count())
        fail(root / "points", "expected one point per vertical edge");
    for (std::size_t i = 0; i < pts.size(); ++i)
        doc.points.push_back(vec4_of(pts[i], root / "points" / i));
    doc.t_focal = field(j, root, "t_focal").get<std::vector<double>>();
    doc.a_weight = num(field(j, root, "a_weight"), root / "a_weight");
    for (const auto& f : field(j, root, "faces")) {
        CausticDocument::Face face;
        face.m = f.at("m").get<int>();
        face.n = f.at("n").get<int>();
        face.planarity_residual = f.at("planarity_residual").get<double>();
        face.embedded = f.at("embedded").get<bool>();
        face.triangle = f.at("triangle").get<bool>();
        doc.faces.push_back(face);
    }
    return doc;
}

std::string to_json(const GraphDocument& doc) {
    json j;
    j["format_version"] = doc.format_version;
    j["d"] = doc.d;
    j["coincident_vertices"] = doc.coincident_vertices;
    j["nonembedded_faces"] = doc.nonembedded_faces;
    json segs = json::array();
    for (const auto& s : doc.segments)
        segs.push_back({{"m", s.m},
                        {"n", s.n},
                        {"a", vec4_json(s.a)},
                        {"b", vec4_json(s.b)},
                        {"is_point", s.is_point}});
    j["segments"] = std::move(segs);
    json nodes = json::array();
    for (const auto& n : doc.nodes)
        nodes.push_back({{"position", vec4_json(n.position)},
                         {"valence", n.valence},
                         {"boundary", n.boundary}});
    j["nodes"] = std::move(nodes);
    j["d_star"] = doc.d_star;
    return j.dump(2);
}

GraphDocument graph_document_from_json(const std::string& text) {
    json j = json::parse(text);
    const Path root{""};
    GraphDocument doc;
    doc.format_version = integer(field(j, root, "format_version"), root / "format_version");
    doc.d = num(field(j, root, "d"), root / "d");
    doc.coincident_vertices = field(j, root, "coincident_vertices").get<bool>();
    doc.nonembedded_faces = field(j, root, "nonembedded_faces").get<bool>();
    for (const auto& s : field(j, root, "segments")) {
        GraphDocument::Segment seg;
        seg.m = s.at("m").get<int>();
        seg.n = s.at("n").get<int>();
        seg.a = vec4_of(s.at("a"), root / "segments");
        seg.b = vec4_of(s.at("b"), root / "segments");
        seg.is_point = s.at("is_point").get<bool>();
        doc.segments.push_back(seg);
    }
    for (const auto& n : field(j, root, "nodes")) {
        GraphDocument::Node node;
        node.position = vec4_of(n.at("position"), root / "nodes");
        node.valence = n.at("valence").get<int>();
        node.boundary = n.at("boundary").get<bool>();
        doc.nodes.push_back(node);
    }
    doc.d_star = field(j, root, "d_star").get<std::vector<double>>();
    return doc;
}

void save_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw GeometryError("cannot open '" + path + "' for writing");
    out << text;
    if (!out) throw GeometryError("write to '" + path + "' failed");
}

std::string load_text(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw GeometryError("cannot open '" + path + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

SurfaceDocument make_document(const GeneratorSpec& gen, const DiscreteSurface& s,
                              bool with_frames) {
    SurfaceDocument doc;
    doc.generator = gen;
    if (!s.frame || !s.frame->g)
        throw GeometryError("make_document: surface carries no holomorphic data");
    doc.g = *s.frame->g;
    if (with_frames) doc.frames = s.frame->mats;
    doc.surface.reserve(s.f.size());
    for (const HPoint& p : s.f) doc.surface.push_back(p.x);
    doc.normals = s.normal;
    doc.kind = s.kind;
    doc.t = s.t;
    doc.d = s.d;
    return doc;
}

CausticDocument make_document(const Caustic& c) {
    CausticDocument doc;
    doc.domain = c.domain;
    doc.points.reserve(c.points.size());
    for (const HPoint& p : c.points) doc.points.push_back(p.x);
    doc.t_focal = c.t_focal;
    doc.a_weight = c.a_weight;
    for (const CausticFace& f : c.faces) {
        CausticDocument::Face face;
        face.m = f.source_h_edge.a.m;
        face.n = f.source_h_edge.a.n;
        face.planarity_residual = f.planarity_residual;
        face.embedded = f.embedded;
        face.triangle = f.triangle;
        doc.faces.push_back(face);
    }
    return doc;
}

GraphDocument make_document(const SingularGraph& g) {
    GraphDocument doc;
    doc.d = g.d;
    doc.coincident_vertices = g.coincident_vertices;
    doc.nonembedded_faces = g.nonembedded_faces;
    for (const SingularSegment& s : g.segments) {
        GraphDocument::Segment seg;
        seg.m = s.source_h_edge.a.m;
        seg.n = s.source_h_edge.a.n;
        seg.a = s.a.x;
        seg.b = s.b.x;
        seg.is_point = s.is_point;
        doc.segments.push_back(seg);
    }
    for (const SingularNode& n : g.nodes) {
        GraphDocument::Node node;
        node.position = n.position.x;
        node.valence = n.valence;
        node.boundary = n.boundary;
        doc.nodes.push_back(node);
    }
    doc.d_star = g.d_star;
    return doc;
}

DiscreteSurface rebuild_surface(const SurfaceDocument& doc) {
    if (doc.kind == FrameKind::CMC1) {
        return build_surface(integrate_F(doc.g));
    }
    MoebiusFrame E = integrate_E(doc.g);
    if (doc.kind == FrameKind::Weingarten) return build_surface(dress_weingarten(E, doc.t));
    return build_surface(E);
}

namespace {

Vec3 project(const Vec4& x, BallModel model) {
    const HPoint p{x};
    return model == BallModel::Poincare ? poincare(p) : klein(p);
}

} // namespace

MeshDocument project_mesh(const SurfaceDocument& doc, BallModel model) {
    MeshDocument mesh;
    mesh.object_name = "surface";
    mesh.vertices.reserve(doc.surface.size());
    for (const Vec4& v : doc.surface) mesh.vertices.push_back(project(v, model));
    const LatticeDomain& d = doc.g.domain;
    for (const Quad& q : d.quads()) {
        MeshDocument::Face face;
        face.corners = {d.vertex_index(q.p), d.vertex_index(q.q()), d.vertex_index(q.r()),
                        d.vertex_index(q.s())};
        double mind = std::numeric_limits<double>::infinity();
        for (int i = 0; i < 4; ++i)
            mind = std::min(mind, (mesh.vertices[face.corners[i]] -
                                   mesh.vertices[face.corners[(i + 1) % 4]])
                                      .norm());
        face.degenerate = mind < 1e-12;
        mesh.faces.push_back(face);
    }
    return mesh;
}

MeshDocument project_mesh(const CausticDocument& doc, BallModel model) {
    MeshDocument mesh;
    mesh.object_name = "caustic";
    mesh.vertices.reserve(doc.points.size());
    for (const Vec4& v : doc.points) mesh.vertices.push_back(project(v, model));
    const LatticeDomain& d = doc.domain;
    for (const auto& f : doc.faces) {
        MeshDocument::Face face;
        face.corners = {d.vertical_edge_index(f.m, f.n - 1),
                        d.vertical_edge_index(f.m + 1, f.n - 1),
                        d.vertical_edge_index(f.m + 1, f.n), d.vertical_edge_index(f.m, f.n)};
        face.degenerate = f.triangle;
        face.singular_adjacent = false;
        mesh.faces.push_back(face);
    }
    return mesh;
}

void mark_singular_adjacent(MeshDocument& mesh, const SurfaceDocument& doc,
                            const GraphDocument& graph) {
    const LatticeDomain& d = doc.g.domain;
    std::vector<bool> hot(d.horizontal_edge_count(), false);
    for (const auto& seg : graph.segments) {
        if (seg.m < d.m_lo() || seg.m >= d.m_hi() || seg.n < d.n_lo() || seg.n > d.n_hi())
            throw GeometryError("mark_singular_adjacent: graph edge outside the surface domain");
        hot[d.horizontal_edge_index(seg.m, seg.n)] = true;
    }
    std::size_t idx = 0;
    for (const Quad& q : d.quads()) {
        auto touched = [&](const Edge& e) { return hot[d.edge_index(e)]; };
        mesh.faces[idx].singular_adjacent = touched(q.edge_pq()) || touched(q.edge_sr());
        ++idx;
    }
}

std::string to_obj(const std::vector<MeshDocument>& meshes) {
    std::ostringstream out;
    std::size_t base = 1; // OBJ indices are 1-based
    char buf[64];
    for (const MeshDocument& mesh : meshes) {
        out << "o " << mesh.object_name << "\n";
        for (const Vec3& v : mesh.vertices) {
            out << "v";
            for (int i = 0; i < 3; ++i) {
                std::snprintf(buf, sizeof buf, " %.17g", v[i]);
                out << buf;
            }
            out << "\n";
        }
        bool any_singular = false;
        for (const auto& f : mesh.faces) any_singular = any_singular || f.singular_adjacent;
        int group = -1; // 0 plain, 1 singular-adjacent; emitted only when used
        for (const auto& f : mesh.faces) {
            for (std::size_t c : f.corners)
                if (c >= mesh.vertices.size())
                    throw GeometryError("to_obj: face index out of range");
            if (any_singular && int(f.singular_adjacent) != group) {
                group = f.singular_adjacent;
                out << "g " << mesh.object_name << (group ? "_singular" : "") << "\n";
            }
            // split along the (p, r) diagonal
            out << "f " << base + f.corners[0] << " " << base + f.corners[1] << " "
                << base + f.corners[2] << "\n";
            out << "f " << base + f.corners[0] << " " << base + f.corners[2] << " "
                << base + f.corners[3] << "\n";
        }
        base += mesh.vertices.size();
    }
    return out.str();
}

void export_obj(const std::vector<MeshDocument>& meshes, const std::string& path) {
    save_text(path, to_obj(meshes));
}

} // namespace h3flat
