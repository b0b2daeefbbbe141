// fingeo: exact computations with Desarguesian spreads, linear sets and the
// linear equations cutting their images on the spread variety.
#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>

#include "fingeo/json_io.hpp"
#include "fingeo/version.hpp"

using namespace fingeo;

namespace {

struct CommonOptions {
    std::string out;
    std::uint64_t seed = 0;
    std::uint64_t max_enum = FieldTower::kDefaultEnumCap;
    std::uint64_t max_dual_dim = 10626;
    int verbosity = 1;
    bool timings = false;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
    cmd->add_option("--out", opts.out, "write the report to this file (default: stdout)");
    cmd->add_option("--seed", opts.seed, "seed for randomized checks (echoed in the report)");
    cmd->add_option("--max-enum", opts.max_enum, "enumeration cap");
    cmd->add_option("--max-dual-dim", opts.max_dual_dim, "cap on dual ambient dimensions");
    cmd->add_option("-v,--verbosity", opts.verbosity, "0 silent, 1 summary, 2 chatty");
    cmd->add_flag("--timings", opts.timings, "include per-route wall times (breaks byte-identical reports)");
}

json report_envelope(const std::string& command, const CommonOptions& opts) {
    json j;
    j["tool"] = {{"name", "fingeo"}, {"version", FINGEO_VERSION}};
    j["command"] = command;
    json cfg;
    cfg["seed"] = opts.seed;
    cfg["max_enum"] = opts.max_enum;
    cfg["max_dual_dim"] = opts.max_dual_dim;
    cfg["timings"] = opts.timings;
    j["config"] = std::move(cfg);
    return j;
}

// one pass/fail line per invariant on stderr; report to --out or stdout
int finish(json& report, const CommonOptions& opts) {
    bool ok = true;
    if (report.contains("invariants"))
        for (const auto& c : report["invariants"]) {
            if (!c["pass"].get<bool>()) ok = false;
            if (opts.verbosity >= 1)
                std::cerr << (c["pass"].get<bool>() ? "[pass] " : "[FAIL] ") << c["name"].get<std::string>()
                          << (c.contains("detail") ? "  (" + c["detail"].get<std::string>() + ")" : "") << "\n";
        }
    report["ok"] = ok;
    std::string text = report.dump(2);
    text.push_back('\n');
    if (opts.out.empty()) {
        std::cout << text;
    } else {
        auto tmp = opts.out + ".tmp";
        {
            std::ofstream f(tmp, std::ios::binary);
            if (!f) {
                std::cerr << "error: cannot write " << opts.out << "\n";
                return 2;
            }
            f << text;
        }
        std::filesystem::rename(tmp, opts.out);
        if (opts.verbosity >= 1) std::cerr << "report written to " << opts.out << "\n";
    }
    return ok ? 0 : 1;
}

json load_json_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot read " + path);
    json j;
    try {
        f >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("JSON parse error in " + path + ": " + e.what());
    }
    return j;
}

void add_check(json& report, const std::string& name, bool pass, const std::string& detail = {}) {
    json c;
    c["name"] = name;
    c["pass"] = pass;
    if (!detail.empty()) c["detail"] = detail;
    report["invariants"].push_back(std::move(c));
}

// Walks the points of one spread element; records them into `seen` and
// clears `disjoint` when a point already belongs to another element.
void scan_element_points(const BlockDecomposition& bd, const SpreadElement& el, bool& disjoint,
                         std::set<std::vector<code_t>>& seen) {
    const auto& tw = *bd.tower();
    std::vector<code_t> scalars;
    for (const auto& e : tw.elements(Level::Sub)) scalars.push_back(e.code());
    size_t dim = el.reduced.dim();
    std::set<std::vector<code_t>> mine;
    std::uint64_t total = 1;
    for (size_t i = 0; i < dim; ++i) total *= scalars.size();
    for (std::uint64_t n = 1; n < total; ++n) {
        std::uint64_t rest = n;
        std::vector<code_t> v(bd.ambient(), 0);
        for (size_t i = 0; i < dim; ++i) {
            code_t c = scalars[static_cast<size_t>(rest % scalars.size())];
            rest /= scalars.size();
            if (!c) continue;
            for (size_t j = 0; j < bd.ambient(); ++j) v[j] = tw.add(v[j], tw.mul(c, el.reduced.matrix().at(i, j)));
        }
        auto canon = Vector(bd.tower(), Level::Sub, std::move(v), false).canonicalized().codes();
        if (mine.insert(canon).second) {
            if (!seen.insert(canon).second) disjoint = false;
        }
    }
}

// ---- spread ------------------------------------------------------------------

int run_spread(std::uint64_t q, int r, int t, const std::vector<std::string>& verify, bool emit_elements,
               const CommonOptions& opts) {
    json field;
    field["q"] = q;
    field["t"] = t;
    TowerPtr tower = tower_from_json(field);
    BlockDecomposition bd(tower, r);
    json report = report_envelope("spread", opts);
    report["config"]["q"] = q;
    report["config"]["r"] = r;
    report["config"]["t"] = t;
    report["config"]["verify"] = verify;
    report["field"] = field_to_json(*tower);
    report["invariants"] = json::array();

    auto spread = desarguesian_spread(bd, opts.max_enum);
    std::uint64_t expect_size = 1;
    for (int i = 0; i < r; ++i) expect_size *= tower->size();
    expect_size = (expect_size - 1) / (tower->size() - 1);
    json result;
    result["size"] = spread.size();
    add_check(report, "spread size = (q^{rt}-1)/(q^t-1)", spread.size() == expect_size,
              std::to_string(spread.size()) + " vs " + std::to_string(expect_size));

    for (const auto& v : verify) {
        if (v == "partition") {
            std::set<std::vector<code_t>> seen;
            bool disjoint = true;
            for (const auto& el : spread) scan_element_points(bd, el, disjoint, seen);
            std::uint64_t all_points = 1;
            for (size_t i = 0; i < bd.ambient(); ++i) all_points *= tower->q();
            all_points = (all_points - 1) / (tower->q() - 1);
            add_check(report, "spread elements are pairwise disjoint", disjoint);
            add_check(report, "spread covers PG(rt-1,q)", seen.size() == all_points,
                      std::to_string(seen.size()) + " of " + std::to_string(all_points) + " points");
        } else if (v == "span") {
            std::vector<Vector> pts;
            for (const auto& el : spread) pts.push_back(el.point);
            size_t rank = alpha_rank(bd, pts);
            add_check(report, "alpha images span PG(r^t-1,q)", rank == bd.functions().size(),
                      "rank " + std::to_string(rank) + " of " + std::to_string(bd.functions().size()));
        } else if (v == "segre") {
            bool all_rank_one = true;
            for (const auto& x : projective_points(tower, Level::Sub, static_cast<size_t>(r), opts.max_enum)) {
                Vector top_x(tower, Level::Top, x.codes(), false);
                if (!rank_one_check(bd, field_reduce(bd, top_x), true)) {
                    all_rank_one = false;
                    break;
                }
            }
            add_check(report, "canonical subgeometry elements lie on the Segre variety", all_rank_one);
        } else if (v == "diagram") {
            bool all_commute = true;
            for (const auto& el : spread)
                if (!diagram_commutes(bd, el.point)) {
                    all_commute = false;
                    break;
                }
            add_check(report, "Pluecker embedding matches alpha on every spread element", all_commute);
        } else {
            throw ConfigError("unknown --verify mode: " + v);
        }
    }
    if (emit_elements) result["elements"] = spread_to_json(bd, spread)["elements"];
    report["result"] = std::move(result);
    return finish(report, opts);
}

// ---- linset ---------------------------------------------------------------------

int run_linset(const std::string& spec_path, const CommonOptions& opts) {
    json sj = load_json_file(spec_path);
    LinearSetSpec spec = spec_from_json(sj);
    BlockDecomposition bd(spec.tower(), spec.r());
    json report = report_envelope("linset", opts);
    report["config"]["spec_path"] = spec_path;
    report["config"]["spec"] = spec_to_json(spec);
    report["field"] = field_to_json(*spec.tower());
    report["invariants"] = json::array();
    for (const auto& w : spec.warnings()) std::cerr << "warning: " << w.message << "\n";

    SubspaceBasis W = build_W(bd, spec);
    LinearSetReport rep = analyze_linear_set(bd, W, opts.max_enum);
    json result = linset_report_to_json(rep);
    result["W"] = subspace_to_json(W);
    add_check(report, "vector-count identity sum(q^w - 1) = q^{m+1} - 1", rep.vector_count_identity);
    add_check(report, "declared rank equals computed rank", rep.rank == spec.declared_rank());
    if (rep.proper && spec.t() == 2) add_check(report, "t=2 identity h = m+1-r", rep.t2_identity);
    if (rep.proper && spec.t() > 2) add_check(report, "h bound h*(t-1) <= m+1-r", rep.h_bound);
    report["result"] = std::move(result);
    return finish(report, opts);
}

// ---- codim ---------------------------------------------------------------------

int run_codim(const std::string& spec_path, const std::string& routes, int complement_trials,
              const CommonOptions& opts) {
    json sj = load_json_file(spec_path);
    LinearSetSpec spec = spec_from_json(sj);
    for (const auto& w : spec.warnings()) std::cerr << "warning: " << w.message << "\n";
    PipelineOptions popts;
    popts.complement_trials = complement_trials;
    popts.seed = opts.seed;
    popts.max_enum = opts.max_enum;
    popts.max_dual_dim = opts.max_dual_dim;
    popts.collect_timings = opts.timings;
    std::stringstream ss(routes);
    std::string route;
    while (std::getline(ss, route, ',')) {
        if (route == "span" || route.empty())
            continue; // the route of record always runs
        else if (route == "minors")
            popts.route_minors = true;
        else if (route == "points")
            popts.route_points = true;
        else
            throw ConfigError("unknown route: " + route);
    }
    json report = report_envelope("codim", opts);
    report["config"]["spec_path"] = spec_path;
    report["config"]["routes"] = routes;
    report["config"]["complement_trials"] = complement_trials;
    report["config"]["spec"] = spec_to_json(spec);
    report["field"] = field_to_json(*spec.tower());

    CodimReport rep = codim_pipeline(spec, popts);
    json result = codim_report_to_json(rep);
    report["invariants"] = result["invariants"];
    result.erase("invariants");
    report["result"] = std::move(result);
    if (opts.verbosity >= 1)
        std::cerr << "dim_S = " << rep.dim_S << " (bound " << rep.bound << ", h = " << rep.h << ", c = " << rep.c
                  << ")\n";
    return finish(report, opts);
}

// ---- omega ---------------------------------------------------------------------

int run_omega(std::uint64_t q, int n, int k, int hdim, const std::string& a1_path, bool verify,
              const CommonOptions& opts) {
    if (IndexTable::binomial(static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(k)) > opts.max_dual_dim)
        throw CapError("binom(n,k) exceeds the dual-dimension cap");
    json field;
    field["q"] = q;
    field["t"] = 1;
    TowerPtr tower = tower_from_json(field);
    SubspaceBasis a1 = SubspaceBasis::zero(tower, Level::Top, static_cast<size_t>(n));
    if (!a1_path.empty()) {
        Matrix m = matrix_from_json(load_json_file(a1_path));
        a1 = SubspaceBasis::span_of(m);
    } else if (hdim > 0) {
        std::vector<Vector> rows;
        for (int i = 0; i < hdim; ++i)
            rows.push_back(Vector::unit(tower, Level::Top, static_cast<size_t>(n), static_cast<size_t>(i)));
        a1 = SubspaceBasis::span_of(rows);
    }
    json report = report_envelope("omega", opts);
    report["config"]["q"] = q;
    report["config"]["n"] = n;
    report["config"]["k"] = k;
    report["config"]["h"] = a1.dim();
    report["field"] = field_to_json(*tower);
    report["invariants"] = json::array();

    FormSpace forms = omega_forms(a1, n, k);
    int h = static_cast<int>(a1.dim());
    std::uint64_t expected =
        h > n - k ? 0 : IndexTable::binomial(static_cast<std::uint64_t>(n - h), static_cast<std::uint64_t>(k));
    json result;
    result["dim"] = forms.dim();
    result["expected"] = expected;
    if (!forms.note.empty()) result["note"] = forms.note;
    result["forms"] = subspace_to_json(forms.basis);
    add_check(report, "dim omega_forms = binom(n-h,k)", forms.dim() == expected,
              std::to_string(forms.dim()) + " vs " + std::to_string(expected));
    if (verify) {
        auto table = IndexTable::get(n, k);
        bool exact = true;
        for (const auto& w :
             enumerate_subspaces(tower, Level::Top, static_cast<size_t>(n), static_cast<size_t>(k), opts.max_enum)) {
            bool meets = meet(w, a1).dim() > 0;
            bool vanishes_all = true;
            auto pw = plucker(w, table);
            for (size_t i = 0; i < forms.dim(); ++i)
                if (forms.basis.basis_row(i).dot(pw.coords()) != 0) {
                    vanishes_all = false;
                    break;
                }
            if (vanishes_all != meets) {
                exact = false;
                break;
            }
        }
        add_check(report, "forms vanish exactly on the k-subspaces meeting A_1 (exhaustive)", exact);
    }
    report["result"] = std::move(result);
    return finish(report, opts);
}

// ---- selftest -------------------------------------------------------------------

int run_selftest(const CommonOptions& opts) {
    json report = report_envelope("selftest", opts);
    report["invariants"] = json::array();

    { // (4,2,2) Grassmannian: Pluecker image catalogue and hodge duality
        auto tower = FieldTower::make(2, 1, 1);
        auto table = IndexTable::get(4, 2);
        auto lines = enumerate_subspaces(tower, Level::Top, 4, 2, opts.max_enum);
        std::set<std::vector<code_t>> images;
        for (const auto& w : lines) images.insert(plucker(w, table).coords().codes());
        add_check(report, "(4,2,2): 35 lines with distinct Pluecker images", lines.size() == 35 && images.size() == 35);
        bool hodge_ok = true;
        for (const auto& c : lines) {
            auto f = hodge_form(c, table);
            for (const auto& w : lines)
                if ((f.dot(plucker(w, table).coords()) == 0) != (meet(w, c).dim() > 0)) hodge_ok = false;
        }
        add_check(report, "(4,2,2): hodge forms vanish exactly on incident lines", hodge_ok);
    }
    { // (2,2,2) spread: partition, span, Segre structure, diagram
        auto tower = FieldTower::make(2, 1, 2);
        BlockDecomposition bd(tower, 2);
        auto spread = desarguesian_spread(bd);
        add_check(report, "(2,2,2): spread has 5 elements", spread.size() == 5);
        std::set<std::vector<code_t>> seen;
        bool disjoint = true;
        for (const auto& el : spread) scan_element_points(bd, el, disjoint, seen);
        add_check(report, "(2,2,2): pairwise disjoint cover of PG(3,2)", disjoint && seen.size() == 15);
        std::vector<Vector> pts;
        for (const auto& el : spread) pts.push_back(el.point);
        add_check(report, "(2,2,2): alpha images span PG(3,2) (rank 4)", alpha_rank(bd, pts) == 4);
        bool segre = true;
        for (const auto& x : projective_points(tower, Level::Sub, 2))
            segre = segre && rank_one_check(bd, field_reduce(bd, Vector(tower, Level::Top, x.codes(), false)), true);
        add_check(report, "(2,2,2): canonical subgeometry lies on the Segre variety", segre);
        bool diagram = true;
        for (const auto& el : spread) diagram = diagram && diagram_commutes(bd, el.point);
        add_check(report, "(2,2,2): Pluecker embedding matches alpha", diagram);
        bool correspond = true;
        for (const auto& el : spread) correspond = correspond && segre_spread_element(bd, el.point) == el.reduced;
        add_check(report, "(2,2,2): scroll-intersection construction matches field reduction", correspond);
    }
    report["result"] = json::object();
    return finish(report, opts);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"fingeo " FINGEO_VERSION
                 " - Desarguesian spreads, linear sets, and the linear equations cutting their spread-variety images"};
    app.require_subcommand(0, 1);
    bool schema = false;
    app.add_flag("--json-schema", schema, "print the spec and report JSON schemas and exit");
    app.set_version_flag("--version", FINGEO_VERSION);

    CommonOptions copts;

    auto* spread_cmd = app.add_subcommand("spread", "construct a Desarguesian spread and verify its structure");
    std::uint64_t q = 2;
    int r = 2, t = 2;
    std::vector<std::string> verify;
    bool emit_elements = true;
    spread_cmd->add_option("--q", q, "subfield order (prime power)")->required();
    spread_cmd->add_option("--r", r, "dimension r of PG(r-1,q^t)")->required();
    spread_cmd->add_option("--t", t, "extension degree")->required();
    spread_cmd->add_option("--verify", verify, "partition | span | segre | diagram (repeatable)")->delimiter(',');
    spread_cmd->add_flag("!--no-elements", emit_elements, "omit the element list from the report");
    add_common(spread_cmd, copts);

    auto* linset_cmd = app.add_subcommand("linset", "analyze a linear set spec: points, weights, minimality");
    std::string linset_spec;
    linset_cmd->add_option("spec", linset_spec, "spec JSON file")->required();
    add_common(linset_cmd, copts);

    auto* codim_cmd = app.add_subcommand("codim", "equation-space pipeline for a linear set spec");
    std::string codim_spec, routes = "span";
    int complement_trials = 3;
    codim_cmd->add_option("spec", codim_spec, "spec JSON file")->required();
    codim_cmd->add_option("--routes", routes, "comma list: span,minors,points (span always runs)");
    codim_cmd->add_option("--complement-trials", complement_trials, "randomized complement re-runs");
    add_common(codim_cmd, copts);

    auto* omega_cmd = app.add_subcommand("omega", "forms vanishing on a Schubert variety Omega(A_1)");
    std::uint64_t oq = 2;
    int on = 4, okk = 2, oh = 1;
    std::string a1_path;
    bool overify = false;
    omega_cmd->add_option("--q", oq, "field order")->required();
    omega_cmd->add_option("--n", on, "ambient vector dimension")->required();
    omega_cmd->add_option("--k", okk, "subspace dimension")->required();
    omega_cmd->add_option("--hdim", oh, "dimension of A_1 (canonical coordinate subspace)");
    omega_cmd->add_option("--a1", a1_path, "matrix JSON file for A_1 (overrides --hdim)");
    omega_cmd->add_flag("--verify", overify, "exhaustively check vanishing on all k-subspaces");
    add_common(omega_cmd, copts);

    auto* selftest_cmd = app.add_subcommand("selftest", "exhaustive small-case suite");
    add_common(selftest_cmd, copts);

    CLI11_PARSE(app, argc, argv);

    if (schema) {
        std::cout << "spec schema:\n" << spec_schema_text() << "\nreport schema:\n" << report_schema_text() << "\n";
        return 0;
    }

    try {
        if (spread_cmd->parsed()) return run_spread(q, r, t, verify, emit_elements, copts);
        if (linset_cmd->parsed()) return run_linset(linset_spec, copts);
        if (codim_cmd->parsed()) return run_codim(codim_spec, routes, complement_trials, copts);
        if (omega_cmd->parsed()) return run_omega(oq, on, okk, oh, a1_path, overify, copts);
        if (selftest_cmd->parsed()) return run_selftest(copts);
        std::cout << app.help();
        return 0;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const CapError& e) {
        std::cerr << "cap exceeded: " << e.what() << "\n";
        return 2;
    } catch (const InternalError& e) {
        std::cerr << "internal error (please report): " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
