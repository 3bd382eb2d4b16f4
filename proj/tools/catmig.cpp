// SPDX-License-Identifier: Apache-2.0
//
// catmig: command-line front end for the migration engine.
//
// Exit status: 0 success, 1 validation failure or adjunction mismatch,
// 2 parse error / unknown name / bad usage, 3 a bound or enumeration cap was hit.

#include <catmig/catmig.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace catmig;
using json = nlohmann::ordered_json;

namespace {

enum Exit { ok = 0, violation = 1, usage = 2, bound = 3 };

struct Failure
{
    int code;
    std::string message;
};

struct Bounds
{
    std::size_t path_bound = MigrationOptions{}.path_bound;
    std::size_t saturation_bound = MigrationOptions{}.saturation_bound;
    std::size_t rewrite_budget = RewriteOptions{}.budget;

    MigrationOptions options() const
    {
        MigrationOptions o;
        o.path_bound = path_bound;
        o.saturation_bound = saturation_bound;
        o.rewrite.budget = rewrite_budget;
        return o;
    }

    json to_json() const
    {
        return {{"path_bound", path_bound}, {"saturation_bound", saturation_bound}, {"rewrite_budget", rewrite_budget}};
    }

    void add_to(CLI::App *cmd)
    {
        cmd->add_option("--path-bound", path_bound, "Longest comma-category path explored by pi")->capture_default_str();
        cmd->add_option("--saturation-bound", saturation_bound, "Element cap for sigma and row cap for pi")
            ->capture_default_str();
        cmd->add_option("--rewrite-budget", rewrite_budget, "Rewrite steps allowed per path-equivalence proof")
            ->capture_default_str();
    }
};

std::string read_file(const std::string &path)
{
    std::ifstream in(path, std::ios::binary);
    if (not in) throw Failure{usage, path + ": cannot open file"};
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

// Later files may refer to declarations of earlier ones.
dsl::Document load(const std::vector<std::string> &files)
{
    dsl::Document doc;
    for (const auto &f : files) {
        try {
            doc.append(dsl::parse(read_file(f), &doc));
        } catch (const ParseError &e) {
            throw Failure{usage, f + ":" + e.what()};
        } catch (const StructureError &e) {
            throw Failure{usage, f + ": " + e.what()};
        }
    }
    return doc;
}

template<typename T>
const T & lookup(const T *found, const char *kind, const std::string &name)
{
    if (not found) throw Failure{usage, std::string("unknown ") + kind + " '" + name + "'"};
    return *found;
}

void write_output(const std::string &path, const std::string &text)
{
    if (path.empty() or path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (not out) throw Failure{usage, path + ": cannot write file"};
    out << text;
}

json row_counts(const Instance &I)
{
    json j = json::object();
    for (std::size_t v = 0; v < I.graph().vertex_count(); ++v)
        j[I.graph().name(vertex_id(v))] = I.row_count(vertex_id(v));
    return j;
}

std::string row_count_lines(const Instance &I)
{
    std::string out;
    for (std::size_t v = 0; v < I.graph().vertex_count(); ++v)
        out += I.graph().name(vertex_id(v)) + ": " + std::to_string(I.row_count(vertex_id(v))) + " rows\n";
    return out;
}

// --- validate ---

int cmd_validate(const std::vector<std::string> &files, bool as_json, const Bounds &bounds)
{
    dsl::Document doc = load(files);
    json report = {{"command", "validate"}, {"inputs", files}};
    json instances = json::object(), translations = json::object(), morphisms = json::object(), typed = json::object();
    bool clean = true;

    for (const auto &d : doc.declarations()) {
        if (const auto *x = std::get_if<dsl::InstanceDecl>(&d)) {
            auto rep = validate_instance(*x->instance);
            json vs = json::array();
            for (const auto &v : rep.violations) {
                std::cerr << "instance " << x->name << ": equation " << v.equation_text << " fails on row " << v.row
                          << " (" << v.lhs_value << " vs " << v.rhs_value << ")\n";
                vs.push_back({{"equation", v.equation_text}, {"row", v.row}, {"lhs", v.lhs_value}, {"rhs", v.rhs_value}});
            }
            clean = clean and rep.ok();
            instances[x->name] = {{"violations", vs}};
        } else if (const auto *x = std::get_if<dsl::TranslationDecl>(&d)) {
            auto rep = check_translation(x->translation, bounds.options().rewrite);
            json ends = json::array(), unv = json::array();
            for (const auto &e : rep.endpoint_violations) {
                std::cerr << "translation " << x->name << ": arrow " << e.arrow << " must go " << e.expected_source
                          << " -> " << e.expected_target << " but its image goes " << e.actual_source << " -> "
                          << e.actual_target << "\n";
                ends.push_back({{"arrow", e.arrow},
                                {"expected", e.expected_source + " -> " + e.expected_target},
                                {"actual", e.actual_source + " -> " + e.actual_target}});
            }
            for (const auto &u : rep.unverified) {
                std::cerr << "translation " << x->name << ": equation " << u.equation << " maps to " << u.lhs_image
                          << " = " << u.rhs_image << ", not proved within " << u.budget << " rewrite steps\n";
                unv.push_back({{"equation", u.equation}, {"lhs", u.lhs_image}, {"rhs", u.rhs_image}, {"budget", u.budget}});
            }
            clean = clean and rep.ok();
            translations[x->name] = {{"endpoint_violations", ends}, {"unverified", unv}};
        } else if (const auto *x = std::get_if<dsl::MorphismDecl>(&d)) {
            auto rep = check_naturality(x->morphism);
            json vs = json::array();
            for (const auto &v : rep.violations) {
                std::cerr << "morphism " << x->name << ": not natural at arrow " << v.arrow << ", row " << v.row << "\n";
                vs.push_back({{"arrow", v.arrow}, {"row", v.row}});
            }
            clean = clean and rep.ok();
            morphisms[x->name] = {{"violations", vs}};
        } else if (const auto *x = std::get_if<dsl::TypedDecl>(&d)) {
            auto rep = validate_typed(x->typed);
            json vs = json::array();
            for (const auto &v : rep.violations) {
                std::cerr << "typedinstance " << x->name << ": typing breaks at arrow " << v.arrow << ", row " << v.row
                          << " (" << v.via_source << " vs " << v.via_target << ")\n";
                vs.push_back({{"arrow", v.arrow}, {"row", v.row}, {"via_source", v.via_source}, {"via_target", v.via_target}});
            }
            clean = clean and rep.ok();
            typed[x->name] = {{"violations", vs}};
        }
    }
    report["instances"] = instances;
    report["translations"] = translations;
    report["morphisms"] = morphisms;
    report["typed"] = typed;
    report["ok"] = clean;
    if (as_json) std::cout << report.dump(2) << "\n";
    return clean ? ok : violation;
}

// --- migrate ---

struct MigrateArgs
{
    std::string kind;
    std::string translation;
    std::string instance;
    std::vector<std::string> files;
    std::string out;
    std::string name;
    std::string report;
    bool stable = false;
    Bounds bounds;
};

int cmd_migrate(const MigrateArgs &a)
{
    auto started = std::chrono::steady_clock::now();
    dsl::Document doc = load(a.files);
    const Translation &F = lookup(doc.translation(a.translation), "translation", a.translation).translation;
    const Instance &I = *lookup(doc.instance(a.instance), "instance", a.instance).instance;

    const Schema &expect = a.kind == "delta" ? F.target() : F.source();
    if (I.schema() != expect)
        throw Failure{usage, "instance '" + a.instance + "' is on schema '" + I.schema().name() + "', but " + a.kind +
                                 " along '" + a.translation + "' needs '" + expect.name() + "'"};
    if (auto rep = validate_instance(I); not rep.ok()) {
        for (const auto &v : rep.violations)
            std::cerr << "instance " << a.instance << ": equation " << v.equation_text << " fails on row " << v.row << "\n";
        throw Failure{violation, "input instance '" + a.instance + "' is not valid"};
    }
    if (auto rep = check_translation(F, a.bounds.options().rewrite); not rep.endpoints_ok())
        throw Failure{violation, "translation '" + a.translation + "' does not preserve arrow endpoints"};

    MigrationLog log;
    Instance out;
    if (a.kind == "delta") out = delta(F, I);
    else if (a.kind == "sigma") out = sigma(F, I, a.bounds.options(), &log);
    else out = pi(F, I, a.bounds.options(), &log);

    for (const auto &u : log.unverified) std::cerr << "warning: " << u << "\n";
    std::string name = a.name.empty() ? a.kind + "_" + a.translation + "_" + a.instance : a.name;
    write_output(a.out, dsl::print_instance(name, out));
    (a.out.empty() ? std::cerr : std::cout) << row_count_lines(out);

    if (not a.report.empty()) {
        json r = {{"command", "migrate " + a.kind},
                  {"inputs", a.files},
                  {"translation", a.translation},
                  {"instance", a.instance},
                  {"bounds", a.bounds.to_json()},
                  {"warnings", log.unverified},
                  {"row_counts", row_counts(out)},
                  {"element_counts", log.element_counts}};
        if (not a.stable)
            r["wall_time_ms"] =
                std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
        write_output(a.report, r.dump(2) + "\n");
    }
    return ok;
}

// --- check-adjunction ---

// Adds a stray copy of one Σ row, choosing the first copy that changes |Hom(Σ I, J)|.
// Exercises the mismatch path of the checker.
std::optional<Instance> corrupt(const Instance &S, const Instance &J, std::uint64_t cap, std::string &what)
{
    auto base = count_morphisms(S, J, cap);
    const Graph &g = S.graph();
    for (std::size_t v = 0; v < g.vertex_count(); ++v)
        for (RowIndex r = 0; r < S.row_count(vertex_id(v)); ++r) {
            InstanceBuilder b(S.schema_ptr());
            for (std::size_t u = 0; u < g.vertex_count(); ++u)
                for (RowIndex x = 0; x < S.row_count(vertex_id(u)); ++x) b.add_row(vertex_id(u), S.row(vertex_id(u), x));
            RowIndex extra = b.add_row(vertex_id(v), S.row(vertex_id(v), r) + "~");
            for (std::size_t ai = 0; ai < g.arrow_count(); ++ai) {
                ArrowId ar = arrow_id(ai);
                for (RowIndex x = 0; x < S.row_count(g.source(ar)); ++x) b.set(ar, x, S.value(ar, x));
                if (g.source(ar) == vertex_id(v)) b.set(ar, extra, S.value(ar, r));
            }
            Instance m = std::move(b).build();
            if (count_morphisms(m, J, cap) != base) {
                what = "duplicated row " + S.row(vertex_id(v), r) + " of table " + g.name(vertex_id(v));
                return m;
            }
        }
    return std::nullopt;
}

int cmd_check_adjunction(const std::string &tname, const std::string &iname, const std::string &jname,
                         const std::vector<std::string> &files, std::uint64_t cap, bool mutate, const Bounds &bounds)
{
    dsl::Document doc = load(files);
    const Translation &F = lookup(doc.translation(tname), "translation", tname).translation;
    const Instance &I = *lookup(doc.instance(iname), "instance", iname).instance;
    const Instance &J = *lookup(doc.instance(jname), "instance", jname).instance;
    if (I.schema() != F.source()) throw Failure{usage, "instance '" + iname + "' is not on the source of '" + tname + "'"};
    if (J.schema() != F.target()) throw Failure{usage, "instance '" + jname + "' is not on the target of '" + tname + "'"};

    MigrationOptions opts = bounds.options();
    Instance sI = sigma(F, I, opts);
    if (mutate) {
        std::string what;
        if (auto m = corrupt(sI, J, cap, what)) {
            std::cerr << "mutation: " << what << "\n";
            sI = std::move(*m);
        } else {
            std::cerr << "mutation: no single-row corruption changes the count\n";
        }
    }
    Instance dJ = delta(F, J);
    Instance pI = pi(F, I, opts);
    auto counts = std::array{count_morphisms(sI, J, cap), count_morphisms(I, dJ, cap), count_morphisms(dJ, I, cap),
                             count_morphisms(J, pI, cap)};
    const char *labels[] = {"Hom(Sigma I, J)", "Hom(I, Delta J)", "Hom(Delta J, I)", "Hom(J, Pi I)"};
    bool capped = false;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        std::cout << "|" << labels[i] << "| = ";
        if (counts[i]) std::cout << *counts[i] << "\n";
        else {
            std::cout << "> " << cap << "\n";
            capped = true;
        }
    }
    if (capped) throw Failure{bound, "morphism enumeration exceeded --max-homs " + std::to_string(cap)};
    bool equal = counts[0] == counts[1] and counts[2] == counts[3];
    std::cout << "sigma adjunction: " << (counts[0] == counts[1] ? "ok" : "MISMATCH") << "\n";
    std::cout << "pi adjunction: " << (counts[2] == counts[3] ? "ok" : "MISMATCH") << "\n";
    if (not mutate) {
        auto w = adjunction_unit_counit(F, I, J, opts);
        std::cout << "triangle identities: " << (w.triangles_hold ? "ok" : "FAILED") << "\n";
        for (const auto &f : w.triangle_failures) std::cerr << "triangle: " << f << "\n";
        equal = equal and w.triangles_hold;
    }
    return equal ? ok : violation;
}

// --- export-rdf, render ---

int cmd_export_rdf(const std::string &iname, const std::vector<std::string> &files, const std::string &base,
                   const std::string &out)
{
    dsl::Document doc = load(files);
    const Instance &I = *lookup(doc.instance(iname), "instance", iname).instance;
    write_output(out, export_triples(grothendieck(I), base));
    return ok;
}

int cmd_render(const std::string &iname, const std::vector<std::string> &files, const std::string &format,
               const std::string &table)
{
    dsl::Document doc = load(files);
    const Instance &I = *lookup(doc.instance(iname), "instance", iname).instance;
    const Graph &g = I.graph();
    std::vector<VertexId> tables;
    if (not table.empty()) {
        auto v = g.find_vertex(table);
        if (not v) throw Failure{usage, "unknown table '" + table + "' in schema '" + I.schema().name() + "'"};
        tables.push_back(*v);
    } else {
        for (std::size_t v = 0; v < g.vertex_count(); ++v) tables.push_back(vertex_id(v));
    }
    for (std::size_t i = 0; i < tables.size(); ++i) {
        if (i) std::cout << "\n";
        if (format == "csv") {
            if (tables.size() > 1) std::cout << "# " << g.name(tables[i]) << "\n";
            std::cout << render_csv(I, tables[i]);
        } else {
            std::cout << render_ascii(I, tables[i]);
        }
    }
    return ok;
}

// --- run ---

int cmd_run(const std::vector<std::string> &files, const std::string &start, const std::vector<std::string> &steps,
            const std::string &out, const std::string &name, const Bounds &bounds)
{
    dsl::Document doc = load(files);
    PipelineValue value;
    if (const auto *t = doc.typed(start)) value = t->typed;
    else value = *lookup(doc.instance(start), "instance or typedinstance", start).instance;

    MigrationPipeline pipeline;
    for (const auto &s : steps) {
        auto colon = s.find(':');
        auto kind = parse_step_kind(s.substr(0, colon));
        if (colon == std::string::npos or not kind)
            throw Failure{usage, "step '" + s + "' is not kind:name (kinds: delta, sigma, pi, sigma-hat, delta-hat, pi-hat)"};
        std::string ref = s.substr(colon + 1);
        bool plain = *kind == StepKind::Delta or *kind == StepKind::Sigma or *kind == StepKind::Pi;
        if (plain) pipeline.push_back({*kind, lookup(doc.translation(ref), "translation", ref).translation});
        else pipeline.push_back({*kind, lookup(doc.morphism(ref), "morphism", ref).morphism});
    }
    MigrationLog log;
    PipelineValue result = run_pipeline(pipeline, std::move(value), bounds.options(), &log);
    for (const auto &u : log.unverified) std::cerr << "warning: " << u << "\n";

    std::string base = name.empty() ? "result" : name;
    if (const auto *I = std::get_if<Instance>(&result)) {
        write_output(out, dsl::print_instance(base, *I));
    } else {
        const auto &t = std::get<TypedInstance>(result);
        dsl::Document d;
        d.add(dsl::InstanceDecl{base, t.tau().source_ptr()});
        d.add(dsl::InstanceDecl{base + "_typing", t.tau().target_ptr()});
        d.add(dsl::TypedDecl{base + "_typed", base, base + "_typing", t});
        write_output(out, dsl::print(d));
    }
    return ok;
}

}

int main(int argc, char **argv)
{
    CLI::App app{"Functorial data migration over finitely presented schemas"};
    app.require_subcommand(1);

    Bounds bounds;
    std::vector<std::string> files;

    auto *validate = app.add_subcommand("validate", "Check instances, translations, morphisms and typed instances");
    bool as_json = false;
    validate->add_option("files", files, ".cat documents, read in order")->required();
    validate->add_flag("--json", as_json, "Print a JSON report on standard output");
    bounds.add_to(validate);

    MigrateArgs mig;
    auto *migrate = app.add_subcommand("migrate", "Run delta, sigma or pi along a translation");
    migrate->add_option("kind", mig.kind)->required()->check(CLI::IsMember({"delta", "sigma", "pi"}));
    migrate->add_option("translation", mig.translation)->required();
    migrate->add_option("instance", mig.instance)->required();
    migrate->add_option("files", mig.files, ".cat documents, read in order")->required();
    migrate->add_option("--out,-o", mig.out, "Write the migrated instance here instead of standard output");
    migrate->add_option("--name", mig.name, "Name of the output instance");
    migrate->add_option("--report", mig.report, "Write a JSON run report to this file");
    migrate->add_flag("--stable", mig.stable, "Leave wall time out of the report");
    mig.bounds.add_to(migrate);

    std::string tname, iname, jname;
    std::uint64_t max_homs = 1'000'000;
    bool mutate = false;
    auto *adj = app.add_subcommand("check-adjunction", "Count hom-sets on both sides of both adjunctions");
    adj->add_option("translation", tname)->required();
    adj->add_option("source_instance", iname)->required();
    adj->add_option("target_instance", jname)->required();
    adj->add_option("files", files)->required();
    adj->add_option("--max-homs", max_homs, "Give up (exit 3) once a hom-set exceeds this size")->capture_default_str();
    adj->add_flag("--mutate-sigma", mutate, "Corrupt sigma on purpose; the check must then fail");
    bounds.add_to(adj);

    std::string base = "urn:catmig", out;
    auto *rdf = app.add_subcommand("export-rdf", "Write the instance as sorted N-Triples-style lines");
    rdf->add_option("instance", iname)->required();
    rdf->add_option("files", files)->required();
    rdf->add_option("--base", base, "Namespace prepended to every node and predicate")->capture_default_str();
    rdf->add_option("--out,-o", out);

    std::string format = "ascii", table;
    auto *render = app.add_subcommand("render", "Print an instance's tables");
    render->add_option("instance", iname)->required();
    render->add_option("files", files)->required();
    render->add_option("--format", format)->check(CLI::IsMember({"ascii", "csv"}))->capture_default_str();
    render->add_option("--table", table, "Only this table");

    std::string start, name;
    std::vector<std::string> steps;
    auto *run = app.add_subcommand("run", "Evaluate a pipeline of migrations and type changes");
    run->add_option("files", files)->required();
    run->add_option("--start", start, "Instance or typed instance to start from")->required();
    run->add_option("--step", steps, "kind:name, repeatable; kinds are delta, sigma, pi, sigma-hat, delta-hat, pi-hat");
    run->add_option("--out,-o", out);
    run->add_option("--name", name, "Name of the output instance");
    bounds.add_to(run);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int rc = app.exit(e);
        return rc == 0 ? ok : usage;
    }

    try {
        if (*validate) return cmd_validate(files, as_json, bounds);
        if (*migrate) return cmd_migrate(mig);
        if (*adj) return cmd_check_adjunction(tname, iname, jname, files, max_homs, mutate, bounds);
        if (*rdf) return cmd_export_rdf(iname, files, base, out);
        if (*render) return cmd_render(iname, files, format, table);
        if (*run) return cmd_run(files, start, steps, out, name, bounds);
    } catch (const Failure &f) {
        std::cerr << "catmig: " << f.message << "\n";
        return f.code;
    } catch (const BoundError &e) {
        std::cerr << "catmig: bound exceeded at '" << e.vertex << "': " << e.what() << "\n";
        return bound;
    } catch (const EnumerationCapExceeded &e) {
        std::cerr << "catmig: " << e.what() << "\n";
        return bound;
    } catch (const SchemaMismatch &e) {
        std::cerr << "catmig: " << e.what() << "\n";
        return usage;
    } catch (const Error &e) {
        std::cerr << "catmig: " << e.what() << "\n";
        return violation;
    }
    return usage;
}
