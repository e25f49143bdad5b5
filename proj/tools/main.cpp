#include "loopspace/cohomology.hpp"
#include "loopspace/emit.hpp"
#include "loopspace/loop_models.hpp"
#include "loopspace/model_io.hpp"
#include "loopspace/string_topology.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace loopspace;

// Configuration or usage problems: exit code 2, like parse failures.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string model_path;
    int max_degree = 0;  // 0 means the default 4*dimension + 6
    std::string format = "table";
    bool negate_orientation = false;
    std::string pairs;            // "all" sweeps every class pair
    std::vector<std::string> labels;  // coproduct arguments
};

ModelDescription read_model(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot open model file " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    ModelDescription desc = parse_model(buffer.str());
    desc.name = std::filesystem::path(path).stem().string();
    return desc;
}

struct Workspace {
    ModelDescription description;
    int max_degree = 0;  // N; every algebra enumerates monomials up to it
    LoopModelBundle bundle;
};

Workspace open_workspace(const RunConfig& cfg) {
    Workspace ws;
    ws.description = read_model(cfg.model_path);
    int m = ws.description.dimension;
    ws.max_degree = cfg.max_degree > 0 ? cfg.max_degree : 4 * m + 6;
    if (ws.max_degree < m + 2)
        throw InputError("--max-degree must be at least dimension + 2 = " +
                         std::to_string(m + 2));
    ws.bundle = build_loop_bundle(ws.description, ws.max_degree);
    return ws;
}

std::string format_class(const std::vector<Rational>& coords,
                         const std::vector<CohomologyClass>& classes) {
    std::string out;
    bool first = true;
    for (size_t k = 0; k < coords.size(); ++k) {
        Rational c = coords[k];
        if (c == 0)
            continue;
        if (first) {
            if (c < 0) {
                out += "-";
                c = -c;
            }
        } else {
            out += c < 0 ? " - " : " + ";
            if (c < 0)
                c = -c;
        }
        first = false;
        if (c != 1)
            out += to_string(c) + "*";
        out += "[" + classes[k].label + "]";
    }
    return out.empty() ? "0" : out;
}

// Common word length of the classes a coordinate vector touches, -1 for a
// mix, -2 for the zero vector.
int coords_word_length(const std::vector<Rational>& coords,
                       const std::vector<CohomologyClass>& classes) {
    int w = -2;
    for (size_t k = 0; k < coords.size(); ++k) {
        if (coords[k] == 0)
            continue;
        int wk = classes[k].word_length;
        if (w == -2)
            w = wk;
        else if (w != wk)
            return -1;
    }
    return w;
}

void print_output(const RunConfig& cfg, const Json& doc, const std::string& table) {
    if (cfg.format == "structured")
        std::cout << render_json(doc);
    else
        std::cout << table;
}

// ------------------------------------------------------------ validate

int cmd_validate(const RunConfig& cfg) {
    Workspace ws = open_workspace(cfg);
    const LoopModelBundle& b = ws.bundle;
    int n = ws.max_degree;
    int m = b.dimension;

    struct Check {
        std::string name;
        bool pass = true;
        std::string note;
    };
    std::vector<Check> checks;

    auto finish = [&]() -> int {
        bool all_pass = true;
        Json doc;
        doc["model"] = ws.description.name;
        doc["max_degree"] = n;
        doc["checks"] = Json::array();
        TextTable table;
        table.header = {"status", "check", "note"};
        for (const auto& c : checks) {
            all_pass = all_pass && c.pass;
            Json jc;
            jc["name"] = c.name;
            jc["pass"] = c.pass;
            if (!c.note.empty())
                jc["note"] = c.note;
            doc["checks"].push_back(jc);
            table.rows.push_back({c.pass ? "PASS" : "FAIL", c.name, c.note});
        }
        doc["pass"] = all_pass;
        print_output(cfg, doc, render_table(table));
        return all_pass ? 0 : 1;
    };
    // Later suites assume the earlier ones hold, so a failing suite ends the
    // run after its own block.
    auto block_failed = [&]() {
        return std::any_of(checks.begin(), checks.end(),
                           [](const Check& c) { return !c.pass; });
    };

    auto d_squared = [&](const char* tag, const AlgebraPtr& alg) {
        DSquaredReport r = validate_d_squared(alg, n);
        Check c{std::string("d^2 = 0 on ") + tag, r.pass, ""};
        if (!r.pass)
            c.note = "witness " + alg->monomial_label(r.witness) + " in degree " +
                     std::to_string(r.witness_degree);
        checks.push_back(std::move(c));
    };
    d_squared("base", b.base);
    d_squared("loop", b.loop);
    d_squared("loop_square", b.loop_square);
    d_squared("fiber_product", b.fiber_product);
    d_squared("mprime", b.mprime);
    if (block_failed())
        return finish();

    auto chain_map = [&](const char* tag, const Morphism& f) {
        ChainMapReport r = verify_chain_map(f, n - 1);
        Check c{std::string("chain map ") + tag, r.pass, ""};
        if (!r.pass)
            c.note = "witness " + f.source->monomial_label(r.witness) + " in degree " +
                     std::to_string(r.witness_degree);
        checks.push_back(std::move(c));
    };
    chain_map("delta_out", b.delta_out);
    chain_map("delta_in", b.delta_in);
    chain_map("rho", b.rho);
    if (block_failed())
        return finish();

    CohomologyTable mprime_table = compute_cohomology(b.mprime, n - 1);
    CohomologyTable loop_table = compute_cohomology(b.loop, n - 1);
    {
        QuasiIsoReport r = verify_quasi_iso(mprime_table, loop_table, b.rho, n - 1);
        Check c{"rho quasi-isomorphism", r.pass, ""};
        if (!r.pass)
            c.note = "degree " + std::to_string(r.witness_degree) + ": dims " +
                     std::to_string(r.source_dimension) + " -> " +
                     std::to_string(r.target_dimension) + ", rank " + std::to_string(r.rank);
        checks.push_back(std::move(c));
    }
    if (block_failed())
        return finish();

    CohomologyTable base_table = compute_cohomology(b.base, m);
    DualBasis dual = poincare_dual_basis(base_table, b.fundamental, m, cfg.negate_orientation);
    LinearMap shriek = shriek_map(b, dual);

    if (b.base->is_finite_dimensional()) {
        ShriekReport r = verify_shriek_anticommutation(b, shriek, n - m);
        Check c{"shriek anticommutation", r.pass, ""};
        if (!r.pass)
            c.note = "witness " + b.fiber_product->monomial_label(r.witness) + " in degree " +
                     std::to_string(r.witness_degree);
        checks.push_back(std::move(c));
    } else {
        checks.push_back({"shriek anticommutation", true,
                          "skipped: base is not finite dimensional, the duality holds only "
                          "in cohomology"});
    }
    {
        Element euler = euler_class_delta_in(dual, b.mprime);
        ShriekReport r = verify_shriek_euler_identity(b, shriek, euler, n - m);
        Check c{"shriek Euler compression", r.pass, ""};
        if (!r.pass)
            c.note = "witness " + b.mprime->monomial_label(r.witness) + " in degree " +
                     std::to_string(r.witness_degree);
        checks.push_back(std::move(c));
    }

    return finish();
}

// ---------------------------------------------------------- cohomology

int cmd_cohomology(const RunConfig& cfg) {
    Workspace ws = open_workspace(cfg);
    const LoopModelBundle& b = ws.bundle;
    int top = ws.max_degree - 1;

    std::vector<std::pair<std::string, AlgebraPtr>> algebras = {
        {"base", b.base},
        {"loop", b.loop},
        {"mprime", b.mprime},
        {"fiber_product", b.fiber_product},
    };

    Json doc;
    doc["model"] = ws.description.name;
    doc["max_degree"] = ws.max_degree;
    doc["tables"] = Json::object();
    std::ostringstream text;
    for (const auto& [tag, alg] : algebras) {
        CohomologyTable table = compute_cohomology(alg, top);
        Json degrees = Json::array();
        TextTable tt;
        tt.header = tag == "loop" ? std::vector<std::string>{"degree", "dim", "classes (word length)"}
                                  : std::vector<std::string>{"degree", "dim", "classes"};
        for (int k = 0; k <= top; ++k) {
            const auto& classes = table.classes(k);
            Json jd;
            jd["degree"] = k;
            jd["dimension"] = static_cast<int>(classes.size());
            Json jclasses = Json::array();
            std::string joined;
            for (const auto& cls : classes) {
                Json jc;
                jc["label"] = cls.label;
                jc["word_length"] = cls.word_length;
                jclasses.push_back(jc);
                if (!joined.empty())
                    joined += ", ";
                joined += "[" + cls.label + "]";
                if (tag == "loop")
                    joined += " (" + std::to_string(cls.word_length) + ")";
            }
            jd["classes"] = jclasses;
            degrees.push_back(jd);
            tt.rows.push_back({std::to_string(k), std::to_string(classes.size()), joined});
        }
        doc["tables"][tag] = degrees;
        text << "== " << tag << " ==\n" << render_table(tt) << "\n";
    }
    print_output(cfg, doc, text.str());
    return 0;
}

// ----------------------------------------------------------- coproduct

const CohomologyClass* find_class(const CohomologyTable& table, const std::string& label) {
    for (int k = 0; k <= table.max_degree(); ++k)
        for (const auto& cls : table.classes(k))
            if (cls.label == label)
                return &cls;
    return nullptr;
}

int cmd_coproduct(const RunConfig& cfg) {
    Workspace ws = open_workspace(cfg);
    const LoopModelBundle& b = ws.bundle;
    int m = b.dimension;
    int top = ws.max_degree - 1;

    CohomologyTable base_table = compute_cohomology(b.base, m);
    DualBasis dual = poincare_dual_basis(base_table, b.fundamental, m, cfg.negate_orientation);
    LinearMap shriek = shriek_map(b, dual);
    CohomologyTable loop_table = compute_cohomology(b.loop, top);

    Json doc;
    doc["model"] = ws.description.name;
    doc["max_degree"] = ws.max_degree;

    if (cfg.pairs == "all") {
        Json results = Json::array();
        TextTable tt;
        tt.header = {"u", "v", "coproduct"};
        for (int p = 0; p + m <= top; ++p) {
            for (int q = 0; p + q + m <= top; ++q) {
                for (const auto& u : loop_table.classes(p)) {
                    for (const auto& v : loop_table.classes(q)) {
                        CoproductResult r = dual_loop_coproduct(b, shriek, loop_table, u, v);
                        std::string value =
                            format_class(r.coordinates, loop_table.classes(r.degree));
                        Json jr;
                        jr["u"] = u.label;
                        jr["v"] = v.label;
                        jr["degree"] = r.degree;
                        jr["value"] = value;
                        results.push_back(jr);
                        tt.rows.push_back({"[" + u.label + "]", "[" + v.label + "]", value});
                    }
                }
            }
        }
        doc["pairs"] = results;
        print_output(cfg, doc, render_table(tt));
        return 0;
    }

    if (cfg.labels.size() != 2)
        throw InputError("coproduct needs two class labels, or --pairs all");
    const CohomologyClass* u = find_class(loop_table, cfg.labels[0]);
    const CohomologyClass* v = find_class(loop_table, cfg.labels[1]);
    if (!u)
        throw InputError("no loop cohomology class labeled " + cfg.labels[0]);
    if (!v)
        throw InputError("no loop cohomology class labeled " + cfg.labels[1]);
    if (u->degree + v->degree + m > top)
        throw InputError("output degree " + std::to_string(u->degree + v->degree + m) +
                         " is beyond the computed range; raise --max-degree");

    CoproductResult r = dual_loop_coproduct(b, shriek, loop_table, *u, *v);
    const auto& targets = loop_table.classes(r.degree);
    std::string value = format_class(r.coordinates, targets);
    int w = coords_word_length(r.coordinates, targets);

    doc["u"] = u->label;
    doc["v"] = v->label;
    doc["degree"] = r.degree;
    doc["value"] = value;
    Json jcoords = Json::array();
    for (size_t k = 0; k < r.coordinates.size(); ++k) {
        Json jc;
        jc["label"] = targets[k].label;
        jc["coefficient"] = to_string(r.coordinates[k]);
        jcoords.push_back(jc);
    }
    doc["coordinates"] = jcoords;
    doc["representative"] = r.representative.str();
    doc["word_length"] = w >= 0 ? Json(w) : Json(nullptr);

    std::ostringstream text;
    text << "coproduct([" << u->label << "] (x) [" << v->label << "]) = " << value << "\n";
    text << "degree          " << r.degree << "\n";
    text << "representative  " << r.representative.str() << "\n";
    text << "word length     " << (w >= 0 ? std::to_string(w) : std::string("-")) << "\n";
    print_output(cfg, doc, text.str());
    return 0;
}

// --------------------------------------------------------------- hodge

int cmd_hodge(const RunConfig& cfg) {
    Workspace ws = open_workspace(cfg);
    int top = ws.max_degree - 1;
    CohomologyTable loop_table = compute_cohomology(ws.bundle.loop, top);

    Json doc;
    doc["model"] = ws.description.name;
    doc["max_degree"] = ws.max_degree;
    Json degrees = Json::array();
    TextTable tt;
    tt.header = {"degree", "word length", "dim", "classes"};
    for (int k = 0; k <= top; ++k) {
        HodgeDecomposition h = hodge_decomposition(loop_table, k);
        Json jd;
        jd["degree"] = k;
        Json jcomp = Json::array();
        for (const auto& comp : h.components) {
            Json jc;
            jc["word_length"] = comp.word_length;
            Json labels = Json::array();
            std::string joined;
            for (int idx : comp.class_indices) {
                const auto& cls = loop_table.classes(k)[static_cast<size_t>(idx)];
                labels.push_back(cls.label);
                if (!joined.empty())
                    joined += ", ";
                joined += "[" + cls.label + "]";
            }
            jc["labels"] = labels;
            jcomp.push_back(jc);
            tt.rows.push_back({std::to_string(k), std::to_string(comp.word_length),
                               std::to_string(comp.class_indices.size()), joined});
        }
        jd["components"] = jcomp;
        degrees.push_back(jd);
    }
    doc["degrees"] = degrees;
    print_output(cfg, doc, render_table(tt));
    return 0;
}

// --------------------------------------------------------------- euler

int cmd_euler(const RunConfig& cfg) {
    Workspace ws = open_workspace(cfg);
    const LoopModelBundle& b = ws.bundle;
    int m = b.dimension;

    CohomologyTable base_table = compute_cohomology(b.base, m);
    DualBasis dual = poincare_dual_basis(base_table, b.fundamental, m, cfg.negate_orientation);
    AlgebraPtr base_square = tensor(b.base, b.base);
    Element e_diag = diagonal_euler_class(dual, base_square);
    Element e_in = euler_class_delta_in(dual, b.mprime);
    CohomologyTable mprime_table = compute_cohomology(b.mprime, m);
    Projection p = project_class(mprime_table, e_in, m);
    std::string e_in_class = format_class(p.coordinates, mprime_table.classes(m));

    Json doc;
    doc["model"] = ws.description.name;
    doc["diagonal_class"] = e_diag.str();
    doc["euler_characteristic"] = dual.euler_characteristic;
    doc["incoming_class"] = e_in_class;

    std::ostringstream text;
    text << "diagonal class        " << e_diag.str() << "\n";
    text << "euler characteristic  " << dual.euler_characteristic << "\n";
    text << "incoming class        " << e_in_class << "\n";
    print_output(cfg, doc, text.str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact Sullivan model computations for free loop spaces"};
    app.require_subcommand(1);

    RunConfig cfg;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("model", cfg.model_path, "model description file")->required();
        sub->add_option("--max-degree", cfg.max_degree,
                        "degree bound N (default 4*dimension + 6)");
        sub->add_option("--format", cfg.format, "output format")
            ->check(CLI::IsMember({"table", "structured"}));
        sub->add_flag("--negate-orientation", cfg.negate_orientation,
                      "flip the orientation of the fundamental class");
    };

    CLI::App* validate = app.add_subcommand("validate", "run the full verification pipeline");
    add_common(validate);
    CLI::App* cohomology =
        app.add_subcommand("cohomology", "per-degree dimensions and class labels");
    add_common(cohomology);
    CLI::App* coproduct =
        app.add_subcommand("coproduct", "dual loop coproduct of two classes");
    add_common(coproduct);
    coproduct->add_option("labels", cfg.labels, "two loop class labels");
    coproduct->add_option("--pairs", cfg.pairs, "sweep mode")
        ->check(CLI::IsMember({"all"}));
    CLI::App* hodge = app.add_subcommand("hodge", "word length decomposition of the loop "
                                                  "cohomology");
    add_common(hodge);
    CLI::App* euler = app.add_subcommand("euler", "diagonal and incoming Euler classes");
    add_common(euler);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*validate)
            return cmd_validate(cfg);
        if (*cohomology)
            return cmd_cohomology(cfg);
        if (*coproduct)
            return cmd_coproduct(cfg);
        if (*hodge)
            return cmd_hodge(cfg);
        if (*euler)
            return cmd_euler(cfg);
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
