#include "h3flat/io.hpp"
#include "h3flat/verify.hpp"

#include <doctest.h>

#include <cstdlib>
#include <sstream>

using namespace h3flat;

namespace {

SurfaceDocument sample_document(bool with_frames = false) {
    GeneratorSpec spec;
    spec.kind = "exp";
    spec.c = Cx(0, 0.3);
    spec.lambda = 0.01;
    const DiscreteHolomorphic g = gen_exp(spec.c, build_domain(0, 5, 0, 7), spec.lambda);
    return make_document(spec, build_surface(integrate_E(g)), with_frames);
}

} // namespace

TEST_CASE("surface document JSON round trip is lossless") {
    const SurfaceDocument doc = sample_document(true);
    const SurfaceDocument back = surface_document_from_json(to_json(doc));

    CHECK(back.generator.kind == doc.generator.kind);
    CHECK(back.g.domain == doc.g.domain);
    CHECK(back.g.lambda == doc.g.lambda);
    for (std::size_t i = 0; i < doc.g.values.size(); ++i)
        CHECK(back.g.values[i] == doc.g.values[i]); // bitwise equality
    CHECK(back.g.alpha_h == doc.g.alpha_h);
    CHECK(back.g.alpha_v == doc.g.alpha_v);
    for (std::size_t i = 0; i < doc.surface.size(); ++i) {
        CHECK(back.surface[i] == doc.surface[i]);
        CHECK(back.normals[i] == doc.normals[i]);
    }
    REQUIRE(back.frames.has_value());
    for (std::size_t i = 0; i < doc.frames->size(); ++i)
        CHECK((*back.frames)[i] == (*doc.frames)[i]);
    CHECK(back.kind == doc.kind);
    CHECK(back.t == doc.t);
    CHECK(back.d == doc.d);
}

TEST_CASE("schema violation diagnostics") {
    const SurfaceDocument doc = sample_document();
    std::string text = to_json(doc);
    // remove the surface field
    auto j = text.find("\"surface\"");
    REQUIRE(j != std::string::npos);
    std::string butchered = text;
    butchered.replace(j, 9, "\"surfaceX\"");
    try {
        surface_document_from_json(butchered);
        FAIL("expected a schema error");
    } catch (const GeometryError& e) {
        CHECK(std::string(e.what()).find("/surface") != std::string::npos);
    }
}

TEST_CASE("rebuild_surface reproduces the stored surface") {
    const SurfaceDocument doc = sample_document();
    const DiscreteSurface s = rebuild_surface(doc);
    for (std::size_t i = 0; i < doc.surface.size(); ++i)
        CHECK((s.f[i].x - doc.surface[i]).norm() < 1e-12 * std::max(1.0, doc.surface[i].norm()));
}

TEST_CASE("caustic and graph documents round trip") {
    const DiscreteSurface s =
        build_surface(integrate_E(gen_power(4.0 / 3.0, 6, 6, 0.01)));
    const Caustic c = build_caustic(s);
    const CausticDocument cd = make_document(c);
    const CausticDocument cd2 = caustic_document_from_json(to_json(cd));
    CHECK(cd2.points.size() == cd.points.size());
    for (std::size_t i = 0; i < cd.points.size(); ++i) CHECK(cd2.points[i] == cd.points[i]);
    CHECK(cd2.t_focal == cd.t_focal);
    CHECK(cd2.faces.size() == cd.faces.size());

    const SingularGraph graph = singular_set(s, c, 0.1);
    const GraphDocument gd = make_document(graph);
    const GraphDocument gd2 = graph_document_from_json(to_json(gd));
    CHECK(gd2.segments.size() == gd.segments.size());
    CHECK(gd2.nodes.size() == gd.nodes.size());
    CHECK(gd2.d_star == gd.d_star);
}

TEST_CASE("OBJ export: single vertex document") {
    MeshDocument mesh;
    mesh.vertices.push_back(Vec3(0, 0, 0));
    const std::string obj = to_obj({mesh});
    CHECK(obj.find("v 0 0 0") != std::string::npos);
}

TEST_CASE("OBJ coordinates survive the 17-digit round trip") {
    MeshDocument mesh;
    const Vec3 v(1.0 / 3.0, 2.0 / 7.0, 0.12345678901234567);
    mesh.vertices.push_back(v);
    const std::string obj = to_obj({mesh});
    std::istringstream in(obj);
    std::string line;
    while (std::getline(in, line))
        if (line[0] == 'v') break;
    double x, y, z;
    char tag;
    std::istringstream(line) >> tag >> x >> y >> z;
    CHECK(x == v.x());
    CHECK(y == v.y());
    CHECK(z == v.z());
}

TEST_CASE("Klein export keeps geodesic samples collinear") {
    const HPoint base = sym(mat2c(1, 0.3, 0.3, 1));
    const MVector dir = sym_normal(mat2c(1, 0.3, 0.3, 1));
    MeshDocument mesh;
    for (double t : {0.0, 0.5, 1.0})
        mesh.vertices.push_back(klein(geodesic_point(base, dir, t)));
    const std::string obj = to_obj({mesh});
    std::istringstream in(obj);
    std::vector<Vec3> pts;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] != 'v') continue;
        double x, y, z;
        char tag;
        std::istringstream(line) >> tag >> x >> y >> z;
        pts.push_back(Vec3(x, y, z));
    }
    REQUIRE(pts.size() == 3);
    const Vec3 u = pts[1] - pts[0], w = pts[2] - pts[0];
    CHECK(u.cross(w).norm() < 1e-12 * u.norm() * w.norm());
}

TEST_CASE("surface plus caustic export as two OBJ objects") {
    const DiscreteSurface s =
        build_surface(integrate_E(gen_exp(Cx(0, 0.3), build_domain(0, 8, 0, 10), 0.01)));
    GeneratorSpec spec;
    spec.kind = "exp";
    spec.c = Cx(0, 0.3);
    spec.lambda = 0.01;
    const SurfaceDocument doc = make_document(spec, s);
    const CausticDocument cd = make_document(build_caustic(s));
    const std::string obj =
        to_obj({project_mesh(doc, BallModel::Klein), project_mesh(cd, BallModel::Klein)});
    std::size_t objects = 0, pos = 0;
    while ((pos = obj.find("o ", pos)) != std::string::npos) {
        if (pos == 0 || obj[pos - 1] == '\n') ++objects;
        pos += 2;
    }
    CHECK(objects == 2);
    // faces reference valid vertices and every quad splits into 2 triangles
    const MeshDocument sm = project_mesh(doc, BallModel::Klein);
    std::size_t fcount = 0;
    pos = 0;
    while ((pos = obj.find("\nf ", pos)) != std::string::npos) {
        ++fcount;
        pos += 2;
    }
    const MeshDocument cm = project_mesh(cd, BallModel::Klein);
    CHECK(fcount == 2 * (sm.faces.size() + cm.faces.size()));
}

TEST_CASE("singular-adjacent faces are marked on export") {
    const DiscreteSurface s =
        build_surface(integrate_E(gen_exp(Cx(0, 0.3), build_domain(0, 10, 0, 14), 0.01)));
    const Caustic c = build_caustic(s);
    const double d = std::sqrt(std::exp(-c.t(0, 6)) * std::exp(-c.t(0, 7)));
    const SingularGraph graph = singular_set(s, c, d);
    REQUIRE(!graph.segments.empty());

    GeneratorSpec spec;
    spec.kind = "exp";
    spec.c = Cx(0, 0.3);
    spec.lambda = 0.01;
    const SurfaceDocument doc = make_document(spec, s);
    MeshDocument mesh = project_mesh(doc, BallModel::Klein);
    mark_singular_adjacent(mesh, doc, make_document(graph));
    int marked = 0;
    for (const auto& f : mesh.faces) marked += f.singular_adjacent;
    CHECK(marked > 0);
    CHECK(marked < int(mesh.faces.size()));
    const std::string obj = to_obj({mesh});
    CHECK(obj.find("g surface_singular") != std::string::npos);
}

TEST_CASE("verify suites pass on a generated document") {
    const SurfaceDocument doc = sample_document();
    VerifyOptions opt;
    const auto results = verify_document(doc, opt);
    for (const SuiteResult& r : results) {
        INFO(r.name, " worst=", r.worst, " detail=", r.detail);
        CHECK(!r.failed());
    }
    CHECK(all_passed_or_skipped(results));
}
