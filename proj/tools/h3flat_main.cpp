#include "h3flat/verify.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <future>
#include <iostream>
#include <numbers>
#include <numeric>

using namespace h3flat;

namespace {

// Accepts "4/3" or "1.25"; fractions keep gamma exact.
std::pair<long, long> parse_fraction(const std::string& text) {
    const auto slash = text.find('/');
    if (slash == std::string::npos) {
        const double v = std::stod(text);
        const long den = 1000000000L;
        const long num = std::lround(v * double(den));
        const long g = std::gcd(num, den);
        return {num / g, den / g};
    }
    return {std::stol(text.substr(0, slash)), std::stol(text.substr(slash + 1))};
}

Cx parse_complex(std::string text) {
    // forms: "0.3", "0.3i", "1+2i", "-0.5i"
    if (text.empty()) throw CLI::ValidationError("--c", "empty complex literal");
    if (text.back() == 'i') {
        text.pop_back();
        std::size_t split = text.find_last_of("+-");
        if (split == std::string::npos || split == 0) {
            const double im = text.empty() || text == "+" ? 1.0
                              : text == "-" ? -1.0
                                            : std::stod(text);
            return Cx(0, im);
        }
        const double re = std::stod(text.substr(0, split));
        std::string imtxt = text.substr(split);
        const double im = imtxt == "+" ? 1.0 : imtxt == "-" ? -1.0 : std::stod(imtxt);
        return Cx(re, im);
    }
    return Cx(std::stod(text), 0);
}

std::pair<int, int> parse_size(const std::string& text) {
    const auto x = text.find('x');
    if (x == std::string::npos) {
        const int n = std::stoi(text);
        return {n, n};
    }
    return {std::stoi(text.substr(0, x)), std::stoi(text.substr(x + 1))};
}

double parse_real(const std::string& text) {
    const auto [num, den] = parse_fraction(text);
    return double(num) / double(den);
}

double verify_tol_scale() {
    if (const char* env = std::getenv("H3FLAT_TOL")) {
        const double tol = std::stod(env);
        if (tol > 0) return tol / 1e-9;
    }
    return 1.0;
}

int print_results(const std::vector<SuiteResult>& results) {
    for (const SuiteResult& r : results) {
        const char* st = r.status == SuiteResult::Status::Pass
                             ? "PASS"
                             : r.status == SuiteResult::Status::Fail ? "FAIL" : "SKIP";
        std::cout << "[" << st << "] " << r.name << "  worst=" << r.worst
                  << " tol=" << r.tolerance;
        if (!r.detail.empty()) std::cout << "  (" << r.detail << ")";
        std::cout << "\n";
    }
    return all_passed_or_skipped(results) ? 0 : 1;
}

SurfaceDocument generate(const std::string& kind, Cx c, std::pair<long, long> gamma,
                         double lambda, int M, int N, bool with_frames) {
    GeneratorSpec spec;
    spec.kind = kind;
    spec.c = c;
    spec.gamma_num = gamma.first;
    spec.gamma_den = gamma.second;
    spec.lambda = lambda;

    DiscreteHolomorphic g;
    if (kind == "linear") {
        g = gen_linear(c, build_domain(0, M, 0, N), lambda);
    } else if (kind == "exp") {
        g = gen_exp(c, build_domain(0, M, 0, N), lambda);
    } else if (kind == "power") {
        g = gen_power(double(gamma.first) / double(gamma.second), M, N, lambda);
    } else if (kind == "fixture:exa9pt1") {
        g = fixture_exa9pt1(lambda);
    } else if (kind == "fixture:exa9pt2") {
        g = fixture_exa9pt2(lambda);
    } else {
        throw CLI::ValidationError("kind", "unknown generator '" + kind + "'");
    }
    const DiscreteSurface s = build_surface(integrate_E(g));
    return make_document(spec, s, with_frames);
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t comma = text.find(',', pos);
        if (comma == std::string::npos) comma = text.size();
        out.push_back(std::stod(text.substr(pos, comma - pos)));
        pos = comma + 1;
    }
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"discrete flat, CMC-1 and linear Weingarten surfaces in H^3"};
    app.require_subcommand(1);

    // ---- gen ----
    auto* gen = app.add_subcommand("gen", "generate a surface document");
    std::string gen_kind, gen_c = "1", gen_gamma = "4/3", gen_size = "10", gen_out;
    std::string gen_lambda = "0.01";
    bool gen_frames = false;
    gen->add_option("kind", gen_kind,
                    "linear | exp | power | fixture:exa9pt1 | fixture:exa9pt2")
        ->required();
    gen->add_option("--c", gen_c, "complex parameter for linear/exp, e.g. 0.3i");
    gen->add_option("--gamma", gen_gamma, "power exponent, fraction accepted (default 4/3)");
    gen->add_option("--size", gen_size, "grid size N or MxN (default 10)");
    gen->add_option("--lambda", gen_lambda,
                    "global scale factor, fraction accepted (default 0.01)");
    gen->add_flag("--with-frames", gen_frames, "embed frame matrices in the document");
    gen->add_option("-o,--out", gen_out, "output JSON path")->required();

    // ---- family ----
    auto* family = app.add_subcommand("family", "Weingarten t-family or parallel d-family");
    std::string fam_in, fam_out_dir = ".", fam_t, fam_d;
    family->add_option("input", fam_in, "surface document")->required();
    family->add_option("--t", fam_t, "comma list of Weingarten parameters in [0,1]");
    family->add_option("--d", fam_d, "comma list of parallel parameters > 0");
    family->add_option("-o,--outdir", fam_out_dir, "output directory (default .)");

    // ---- caustic ----
    auto* caustic = app.add_subcommand("caustic", "compute the discrete caustic");
    std::string ca_in, ca_out;
    double ca_a = 0.5;
    caustic->add_option("input", ca_in, "surface document")->required();
    caustic->add_option("--a", ca_a, "lift weight a (default 1/2)");
    caustic->add_option("-o,--out", ca_out, "output JSON path")->required();

    // ---- singular ----
    auto* singular = app.add_subcommand("singular", "singular set of a parallel surface");
    std::string si_in, si_out;
    double si_d = 1.0;
    singular->add_option("input", si_in, "surface document")->required();
    singular->add_option("--d", si_d, "parallel parameter")->required();
    singular->add_option("-o,--out", si_out, "output JSON path")->required();

    // ---- verify ----
    auto* verify = app.add_subcommand("verify", "run every theorem suite on a document");
    std::string ve_in;
    bool ve_stokes = false;
    bool ve_json = false;
    verify->add_option("input", ve_in, "surface document")->required();
    verify->add_flag("--stokes", ve_stokes, "include the Stokes-ray diagnostics");
    verify->add_flag("--json", ve_json, "emit machine-readable JSON instead of lines");

    // ---- export ----
    auto* exp = app.add_subcommand("export", "write an OBJ mesh");
    std::string ex_in, ex_out, ex_model = "poincare", ex_caustic, ex_graph;
    exp->add_option("input", ex_in, "surface document")->required();
    exp->add_option("--model", ex_model, "poincare | klein (default poincare)");
    exp->add_option("--with-caustic", ex_caustic, "caustic document to append");
    exp->add_option("--with-singular", ex_graph,
                    "graph document; marks singular-adjacent faces");
    exp->add_option("-o,--out", ex_out, "output OBJ path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            const auto [M, N] = parse_size(gen_size);
            const SurfaceDocument doc =
                generate(gen_kind, parse_complex(gen_c), parse_fraction(gen_gamma),
                         parse_real(gen_lambda), M, N, gen_frames);
            save_text(gen_out, to_json(doc));
            std::cout << "wrote " << gen_out << "\n";
        } else if (family->parsed()) {
            const SurfaceDocument doc = surface_document_from_json(load_text(fam_in));
            std::filesystem::create_directories(fam_out_dir);
            const std::string stem = std::filesystem::path(fam_in).stem().string();
            std::vector<std::future<std::string>> jobs;
            if (!fam_t.empty()) {
                for (double t : parse_list(fam_t))
                    jobs.push_back(std::async(std::launch::async, [&, t] {
                        const MoebiusFrame E = integrate_E(doc.g);
                        SurfaceDocument member =
                            make_document(doc.generator,
                                          build_surface(dress_weingarten(E, t)));
                        const std::string path = fam_out_dir + "/" + stem + "_t" +
                                                 std::to_string(t) + ".json";
                        save_text(path, to_json(member));
                        return path;
                    }));
            }
            if (!fam_d.empty()) {
                for (double d : parse_list(fam_d))
                    jobs.push_back(std::async(std::launch::async, [&, d] {
                        // canonical form: the frame of d*g integrated from
                        // the identity (the parallel surface up to a rigid
                        // motion), so the member reproduces from its own g
                        DiscreteHolomorphic scaled = doc.g;
                        for (Cx& z : scaled.values) z *= d;
                        DiscreteSurface member_surface = build_surface(integrate_E(scaled));
                        member_surface.d = d;
                        SurfaceDocument member = make_document(doc.generator, member_surface);
                        member.d = d;
                        const std::string path = fam_out_dir + "/" + stem + "_d" +
                                                 std::to_string(d) + ".json";
                        save_text(path, to_json(member));
                        return path;
                    }));
            }
            for (auto& j : jobs) std::cout << "wrote " << j.get() << "\n";
        } else if (caustic->parsed()) {
            const SurfaceDocument doc = surface_document_from_json(load_text(ca_in));
            const DiscreteSurface s = rebuild_surface(doc);
            const Caustic c = build_caustic(s, ca_a);
            save_text(ca_out, to_json(make_document(c)));
            std::cout << "wrote " << ca_out << "\n";
        } else if (singular->parsed()) {
            const SurfaceDocument doc = surface_document_from_json(load_text(si_in));
            const DiscreteSurface s = rebuild_surface(doc);
            const Caustic c = build_caustic(s);
            const SingularGraph graph = singular_set(s, c, si_d);
            save_text(si_out, to_json(make_document(graph)));
            const SuiteResult valence = verify_singular_valence(graph);
            const int code = print_results({valence});
            std::cout << "wrote " << si_out << "\n";
            return code;
        } else if (verify->parsed()) {
            const SurfaceDocument doc = surface_document_from_json(load_text(ve_in));
            VerifyOptions opt;
            opt.tol_scale = verify_tol_scale();
            opt.run_stokes = ve_stokes;
            const auto results = verify_document(doc, opt);
            if (ve_json) {
                std::cout << to_json(results) << "\n";
                return all_passed_or_skipped(results) ? 0 : 1;
            }
            return print_results(results);
        } else if (exp->parsed()) {
            const SurfaceDocument doc = surface_document_from_json(load_text(ex_in));
            const BallModel model = ex_model == "klein" ? BallModel::Klein
                                                        : BallModel::Poincare;
            std::vector<MeshDocument> meshes{project_mesh(doc, model)};
            if (!ex_graph.empty()) {
                const GraphDocument gd = graph_document_from_json(load_text(ex_graph));
                mark_singular_adjacent(meshes.front(), doc, gd);
            }
            if (!ex_caustic.empty()) {
                const CausticDocument cd = caustic_document_from_json(load_text(ex_caustic));
                meshes.push_back(project_mesh(cd, model));
            }
            export_obj(meshes, ex_out);
            std::cout << "wrote " << ex_out << "\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
