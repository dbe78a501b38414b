#include <sparsekit/generators.hpp>
#include <sparsekit/hardgen.hpp>
#include <sparsekit/sparsekit.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace sparsekit;
using Json = nlohmann::ordered_json;

constexpr const char* schema_version = "sparsekit.stats/1";
constexpr int exit_ok = 0;
constexpr int exit_error = 1;
constexpr int exit_verify_failed = 2;

struct Common {
    std::uint64_t seed = 1;
    std::string stats_path;
    bool no_timings = false;
};

/// One stats record. Every key is always present; entries that do not
/// apply to a command are null.
struct Stats {
    Json record;
    std::chrono::steady_clock::time_point started = std::chrono::steady_clock::now();
    Json phases = Json::object();

    Stats(const std::string& command, const Common& common)
    {
        record["schema"] = schema_version;
        record["command"] = command;
        record["seed"] = common.seed;
        record["config"] = Json::object();
        record["input"] = nullptr;
        record["result"] = Json::object();
        record["ledger"] = nullptr;
        record["provenance"] = nullptr;
        record["timings"] = nullptr;
    }

    template <class F>
    auto timed(const std::string& phase, F&& f)
    {
        const auto t0 = std::chrono::steady_clock::now();
        auto out = f();
        phases[phase] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return out;
    }
};

Json to_json(const CostLedger& l)
{
    return {{"classical_queries", l.classical_queries}, {"modeled_quantum_queries", l.modeled_quantum_queries}};
}

Json to_json(const Provenance& p)
{
    return {{"method", p.method},
            {"seed", p.seed},
            {"epsilon", p.epsilon},
            {"rounds", p.rounds},
            {"c_pack", p.c_pack},
            {"big_c", p.big_c},
            {"log_base", p.log_base},
            {"packing_count", p.packing_count},
            {"packing_sizes", p.packing_sizes},
            {"kwise_independence", p.kwise_independence},
            {"fallback_to_input", p.fallback_to_input},
            {"warnings", p.warnings}};
}

Json describe(const std::string& path, const WeightedGraph& g)
{
    return {{"path", path}, {"nodes", g.num_nodes()}, {"edges", g.num_edges()}};
}

void emit(Stats& stats, const Common& common, const std::string& primary_output)
{
    if (!common.no_timings) {
        stats.phases["total"] =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - stats.started).count();
        stats.record["timings"] = stats.phases;
    }
    const auto text = stats.record.dump(2) + "\n";
    std::string path = common.stats_path;
    if (path.empty() && !primary_output.empty())
        path = primary_output + ".json";
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error(ErrorCode::ParseError, "cannot write " + path);
    out << text;
}

std::vector<double> read_vector_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorCode::ParseError, "cannot open " + path);
    return io::read_vector(in);
}

void write_vector_file(const std::string& path, const std::vector<double>& x)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error(ErrorCode::ParseError, "cannot write " + path);
    io::write_vector(out, x);
}

SparseMatrix read_matrix(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorCode::ParseError, "cannot open " + path);
    const auto mm = io::read_matrix_market(in);
    if (mm.rows != mm.cols)
        throw Error(ErrorCode::BadShape, "matrix must be square");
    std::vector<SparseMatrix::Triplet> t;
    for (const auto& e : mm.entries) {
        t.push_back({e.row, e.col, e.value});
        if (mm.symmetric && e.row != e.col)
            t.push_back({e.col, e.row, e.value});
    }
    return SparseMatrix::from_triplets(mm.rows, std::move(t));
}

Json solve_json(const SolveResult& r)
{
    return {{"iterations", r.iterations},
            {"residual", r.residual},
            {"converged", r.converged},
            {"projected", r.projected}};
}

// ---------------------------------------------------------------------------

struct SparsifyArgs {
    double epsilon = 0.5;
    std::string method = "refined";
    double c_pack = 1.0;
    double big_c = 4.0;
    double log_base = 2.0;
    bool verify = false;
    std::string input, output;
};

Sparsifier run_method(const WeightedGraph& g, const SparsifyArgs& a, std::uint64_t seed)
{
    PackingOptions packing;
    packing.c_pack = a.c_pack;
    packing.log_base = a.log_base;
    if (a.method == "half")
        return half_sparsify(g, a.epsilon, seed, packing);
    if (a.method == "ks") {
        KsOptions opt;
        opt.packing = packing;
        return ks_sparsify(g, a.epsilon, seed, opt);
    }
    RefinedOptions opt;
    opt.rough.packing = packing;
    opt.big_c = a.big_c;
    opt.log_base = a.log_base;
    return refined_sparsify(g, a.epsilon, seed, opt);
}

Json sparsify_config(const SparsifyArgs& a)
{
    return {{"epsilon", a.epsilon}, {"method", a.method}, {"c_pack", a.c_pack},
            {"big_c", a.big_c},     {"log_base", a.log_base}, {"verify", a.verify}};
}

int cmd_sparsify(const SparsifyArgs& a, const Common& common)
{
    Stats stats("sparsify", common);
    stats.record["config"] = sparsify_config(a);
    const auto g = stats.timed("read", [&] { return io::read_graph(a.input); });
    stats.record["input"] = describe(a.input, g);
    const auto h = stats.timed("sparsify", [&] { return run_method(g, a, common.seed); });
    const auto hg = h.to_graph(g);
    io::write_graph(a.output, hg);
    stats.record["result"] = {{"output", a.output}, {"edges", h.size()}, {"spectral", nullptr}};
    stats.record["ledger"] = to_json(h.ledger);
    stats.record["provenance"] = to_json(h.provenance);
    int code = exit_ok;
    if (a.verify) {
        const auto report = stats.timed("verify", [&] { return verify_spectral(g, hg, a.epsilon); });
        stats.record["result"]["spectral"] = {
            {"lambda_min", report.lambda_min}, {"lambda_max", report.lambda_max}, {"pass", report.pass}};
        code = report.pass ? exit_ok : exit_verify_failed;
    }
    emit(stats, common, a.output);
    return code;
}

struct VerifyArgs {
    double epsilon = 0.5;
    std::size_t cuts = 0;
    std::string g, h;
};

int cmd_verify(const VerifyArgs& a, const Common& common)
{
    Stats stats("verify", common);
    stats.record["config"] = {{"epsilon", a.epsilon}, {"cuts", a.cuts}};
    const auto g = io::read_graph(a.g);
    const auto h = io::read_graph(a.h);
    stats.record["input"] = {{"g", describe(a.g, g)}, {"h", describe(a.h, h)}};
    const auto report = stats.timed("spectral", [&] { return verify_spectral(g, h, a.epsilon); });
    bool pass = report.pass;
    Json result = {{"lambda_min", report.lambda_min},
                   {"lambda_max", report.lambda_max},
                   {"spectral_pass", report.pass},
                   {"cuts", nullptr},
                   {"pass", false}};
    if (a.cuts > 0) {
        const auto cuts = stats.timed("cuts", [&] { return verify_cuts(g, h, a.epsilon, a.cuts, common.seed); });
        result["cuts"] = {{"checked", cuts.checked}, {"passed", cuts.passed}};
        pass = pass && cuts.passed == cuts.checked;
    }
    result["pass"] = pass;
    stats.record["result"] = result;
    emit(stats, common, "");
    return pass ? exit_ok : exit_verify_failed;
}

struct GenArgs {
    std::string kind = "random";
    std::size_t n = 64;
    double p = -1;
    std::size_t m = 0;
    double w_lo = 1.0, w_hi = 1.0;
    double epsilon = 0.5;
    std::string bits_path;
    std::string output;
};

int cmd_gen(const GenArgs& a, const Common& common)
{
    Stats stats("gen", common);
    Json config = {{"kind", a.kind}, {"n", a.n}};
    WeightedGraph g;
    Json result;
    if (a.kind == "random") {
        config["weights"] = {a.w_lo, a.w_hi};
        if (a.m > 0) {
            config["m"] = a.m;
            g = gen::gnm(a.n, a.m, common.seed, {a.w_lo, a.w_hi});
        } else {
            const double p = a.p < 0 ? 0.5 : a.p;
            config["p"] = p;
            g = gen::gnp(a.n, p, common.seed, {a.w_lo, a.w_hi});
        }
    } else if (a.kind == "beps") {
        config["epsilon"] = a.epsilon;
        g = gen_b_eps(a.epsilon, common.seed);
    } else {
        config["m"] = a.m;
        config["epsilon"] = a.epsilon;
        const auto x = gen_valid_input(a.n, a.m, a.epsilon, common.seed);
        const HiddenGraph hidden(x);
        g = hidden.materialize();
        result["hidden"] = {{"copies", x.copies},
                            {"c", x.c},
                            {"bits", x.bits},
                            {"nonzero_strings", x.nonzero_strings()}};
        if (!a.bits_path.empty()) {
            std::ofstream out(a.bits_path, std::ios::binary);
            if (!out)
                throw Error(ErrorCode::ParseError, "cannot write " + a.bits_path);
            out << Json{{"n", x.n}, {"m", x.m}, {"epsilon", x.epsilon}, {"positions", x.positions}}.dump() << '\n';
        }
    }
    io::write_graph(a.output, g);
    result["output"] = a.output;
    result["nodes"] = g.num_nodes();
    result["edges"] = g.num_edges();
    stats.record["config"] = config;
    stats.record["result"] = result;
    emit(stats, common, a.output);
    return exit_ok;
}

struct SpannerArgs {
    std::size_t k = 0;
    std::size_t packing = 1;
    std::string input, output;
};

int cmd_spanner(const SpannerArgs& a, const Common& common)
{
    Stats stats("spanner", common);
    const auto g = io::read_graph(a.input);
    const auto k = a.k ? a.k : default_spanner_levels(g.num_nodes(), 2.0);
    stats.record["config"] = {{"k", k}, {"packing", a.packing}};
    stats.record["input"] = describe(a.input, g);
    CostLedger ledger;
    const auto packing = stats.timed("spanner", [&] { return spanner_packing(g, a.packing, k, common.seed, &ledger); });
    const auto edges = packing.union_edges();
    std::vector<RawEdge> raw;
    for (auto e : edges)
        raw.push_back({g.edge(e).u, g.edge(e).v, g.edge(e).w});
    io::write_graph(a.output, build_graph(g.num_nodes(), raw));
    std::vector<std::size_t> sizes;
    for (const auto& layer : packing.layers)
        sizes.push_back(layer.edges.size());
    stats.record["result"] = {
        {"output", a.output}, {"edges", edges.size()}, {"stretch", 2 * k - 1}, {"layer_sizes", sizes}};
    stats.record["ledger"] = to_json(ledger);
    emit(stats, common, a.output);
    return exit_ok;
}

struct ResistanceArgs {
    double epsilon = 0.5;
    double tol = 1e-8;
    std::string input, oracle;
    std::vector<NodeId> pairs;
};

int cmd_resistance_build(const ResistanceArgs& a, const Common& common)
{
    Stats stats("resistance build", common);
    stats.record["config"] = {{"epsilon", a.epsilon}, {"tol", a.tol}};
    const auto g = io::read_graph(a.input);
    stats.record["input"] = describe(a.input, g);
    const auto oracle =
        stats.timed("build", [&] { return build_resistance_oracle(g, a.epsilon, common.seed, a.tol); });
    std::ofstream out(a.oracle, std::ios::binary);
    if (!out)
        throw Error(ErrorCode::ParseError, "cannot write " + a.oracle);
    save_oracle(out, oracle);
    stats.record["result"] = {{"output", a.oracle}, {"rows", oracle.rows()}, {"nodes", oracle.num_nodes()}};
    emit(stats, common, a.oracle);
    return exit_ok;
}

int cmd_resistance_query(const ResistanceArgs& a, const Common& common)
{
    Stats stats("resistance query", common);
    if (a.pairs.size() % 2 != 0)
        throw Error(ErrorCode::LengthMismatch, "queries need an even number of node ids");
    std::ifstream in(a.oracle, std::ios::binary);
    if (!in)
        throw Error(ErrorCode::ParseError, "cannot open " + a.oracle);
    const auto oracle = load_oracle(in);
    stats.record["input"] = {{"path", a.oracle}, {"rows", oracle.rows()}, {"nodes", oracle.num_nodes()}};
    Json answers = Json::array();
    for (std::size_t i = 0; i < a.pairs.size(); i += 2)
        answers.push_back({{"s", a.pairs[i]}, {"t", a.pairs[i + 1]}, {"r", oracle.query(a.pairs[i], a.pairs[i + 1])}});
    stats.record["result"] = {{"queries", answers}};
    emit(stats, common, "");
    return exit_ok;
}

struct SolveArgs {
    double epsilon = 0.5;
    double tol = 1e-10;
    std::string input, rhs, output;
};

int cmd_solve_laplacian(const SolveArgs& a, const Common& common)
{
    Stats stats("solve laplacian", common);
    stats.record["config"] = {{"epsilon", a.epsilon}, {"tol", a.tol}};
    const auto g = io::read_graph(a.input);
    const auto b = read_vector_file(a.rhs);
    stats.record["input"] = describe(a.input, g);
    const auto r = stats.timed("solve", [&] { return solve_via_sparsifier(g, b, a.epsilon, common.seed, {}, a.tol); });
    write_vector_file(a.output, r.result.x);
    auto result = solve_json(r.result);
    result["output"] = a.output;
    result["sparsifier_edges"] = r.sparsifier.size();
    stats.record["result"] = result;
    stats.record["ledger"] = to_json(r.sparsifier.ledger);
    stats.record["provenance"] = to_json(r.sparsifier.provenance);
    emit(stats, common, a.output);
    return exit_ok;
}

int cmd_solve_sdd(const SolveArgs& a, const Common& common)
{
    Stats stats("solve sdd", common);
    stats.record["config"] = {{"epsilon", a.epsilon}, {"tol", a.tol}};
    const auto matrix = read_matrix(a.input);
    const auto b = read_vector_file(a.rhs);
    stats.record["input"] = {{"path", a.input}, {"rows", matrix.size()}};
    const auto r = stats.timed("solve", [&] {
        return sdd_solve(SddSystem(matrix, b), a.epsilon, common.seed, {}, a.tol);
    });
    write_vector_file(a.output, r.result.x);
    auto result = solve_json(r.result);
    result["output"] = a.output;
    result["sparsifier_edges"] = r.sparsifier.size();
    stats.record["result"] = result;
    stats.record["ledger"] = to_json(r.sparsifier.ledger);
    stats.record["provenance"] = to_json(r.sparsifier.provenance);
    emit(stats, common, a.output);
    return exit_ok;
}

struct MinCutArgs {
    double epsilon = 0.25;
    bool exact = false;
    std::string input;
};

int cmd_mincut(const MinCutArgs& a, const Common& common)
{
    Stats stats("mincut", common);
    stats.record["config"] = {{"epsilon", a.epsilon}, {"exact", a.exact}};
    const auto g = io::read_graph(a.input);
    stats.record["input"] = describe(a.input, g);
    if (a.exact) {
        const auto mc = stats.timed("mincut", [&] { return stoer_wagner(g); });
        stats.record["result"] = {{"value", mc.value}, {"side", mc.cut.members()}};
    } else {
        const auto mc = stats.timed("mincut", [&] { return min_cut_approx(g, a.epsilon, common.seed); });
        stats.record["result"] = {
            {"value", mc.value}, {"side", mc.cut.members()}, {"sparsifier_edges", mc.sparsifier.size()}};
        stats.record["ledger"] = to_json(mc.sparsifier.ledger);
        stats.record["provenance"] = to_json(mc.sparsifier.provenance);
    }
    emit(stats, common, "");
    return exit_ok;
}

struct EigsArgs {
    std::size_t k = 4;
    double epsilon = 0.25;
    std::string input, output;
};

int cmd_eigs(const EigsArgs& a, const Common& common)
{
    Stats stats("eigs", common);
    stats.record["config"] = {{"k", a.k}, {"epsilon", a.epsilon}};
    const auto g = io::read_graph(a.input);
    stats.record["input"] = describe(a.input, g);
    const auto e = stats.timed("eigs", [&] { return bottom_eigs(g, a.k, a.epsilon, common.seed); });
    std::vector<double> rayleigh;
    for (const auto& v : e.vectors)
        rayleigh.push_back(laplacian_quadratic(g, v));
    stats.record["result"] = {{"values", e.values}, {"rayleigh_on_g", rayleigh}, {"iterations", e.iterations}};
    stats.record["ledger"] = to_json(e.sparsifier.ledger);
    stats.record["provenance"] = to_json(e.sparsifier.provenance);
    if (!a.output.empty()) {
        std::ofstream out(a.output, std::ios::binary);
        if (!out)
            throw Error(ErrorCode::ParseError, "cannot write " + a.output);
        for (std::size_t v = 0; v < g.num_nodes(); ++v) {
            for (std::size_t i = 0; i < e.vectors.size(); ++i)
                out << (i ? " " : "") << io::format_double(e.vectors[i][v]);
            out << '\n';
        }
    }
    emit(stats, common, a.output);
    return exit_ok;
}

struct BenchArgs {
    std::string kind = "sweep";
    std::size_t n = 128;
    std::size_t j_max = 5;
    double epsilon = 0.5;
    std::size_t m = 512;
    std::string method = "refined";
};

int cmd_bench(const BenchArgs& a, const Common& common)
{
    Stats stats("bench", common);
    Json rows = Json::array();
    if (a.kind == "sweep") {
        stats.record["config"] = {
            {"kind", a.kind}, {"n", a.n}, {"j_max", a.j_max}, {"epsilon", a.epsilon}, {"method", a.method}};
        SparsifyArgs sa;
        sa.epsilon = a.epsilon;
        sa.method = a.method;
        for (std::size_t j = 1; j <= a.j_max; ++j) {
            const std::size_t m = a.n << j;
            if (m > a.n * (a.n - 1) / 2)
                break;
            const auto g = gen::gnm(a.n, m, derive_seed(common.seed, {j}), {1.0, 2.0});
            const auto t0 = std::chrono::steady_clock::now();
            const auto h = run_method(g, sa, common.seed);
            const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            const double scale = std::sqrt(static_cast<double>(m * a.n)) / a.epsilon;
            Json row = {{"m", m},
                        {"edges_out", h.size()},
                        {"ledger", to_json(h.ledger)},
                        {"sqrt_mn_over_eps", scale},
                        {"modeled_over_scale", h.ledger.modeled_quantum_queries / scale}};
            if (!common.no_timings)
                stats.phases["m=" + std::to_string(m)] = secs;
            rows.push_back(row);
        }
    } else {
        stats.record["config"] = {{"kind", a.kind}, {"n", a.n}, {"m", a.m}, {"epsilon", a.epsilon}};
        const auto x = gen_valid_input(a.n, a.m, a.epsilon, common.seed);
        const HiddenGraph hidden(x);
        const auto g = hidden.materialize();
        for (double eps : {0.25, 0.5, 1.0}) {
            const auto h = ks_sparsify(g, eps, common.seed);
            rows.push_back({{"epsilon", eps},
                            {"edges_out", h.size()},
                            {"recovered_fraction", audit_sparsifier_recovery(x, h.to_graph(g))},
                            {"ledger", to_json(h.ledger)}});
        }
    }
    stats.record["result"] = {{"rows", rows}};
    emit(stats, common, "");
    return exit_ok;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Spectral sparsification toolkit"};
    app.require_subcommand(1);
    Common common;
    app.add_option("--seed", common.seed, "random seed (default 1)")->envname("SPARSEKIT_SEED");
    app.add_option("--stats", common.stats_path, "where to write the JSON stats record ('-' for stdout)");
    app.add_flag("--no-timings", common.no_timings, "omit wall-clock timings so outputs are byte-identical");

    std::function<int()> action;

    GenArgs gen_args;
    auto* gen = app.add_subcommand("gen", "generate a graph");
    gen->add_option("kind", gen_args.kind, "random | hard | beps")
        ->required()
        ->check(CLI::IsMember({"random", "hard", "beps"}));
    gen->add_option("output", gen_args.output, "output edge list")->required();
    gen->add_option("-n,--nodes", gen_args.n, "node count");
    gen->add_option("-p,--probability", gen_args.p, "edge probability for G(n, p)");
    gen->add_option("-m,--edges", gen_args.m, "edge count (exact for random, 2m total for hard)");
    gen->add_option("--wmin", gen_args.w_lo, "smallest weight");
    gen->add_option("--wmax", gen_args.w_hi, "largest weight");
    gen->add_option("-e,--epsilon", gen_args.epsilon, "epsilon for hard and beps instances");
    gen->add_option("--bits", gen_args.bits_path, "write the hidden input of a hard instance as JSON");
    gen->callback([&] { action = [&] { return cmd_gen(gen_args, common); }; });

    SparsifyArgs sp;
    auto* sparsify = app.add_subcommand("sparsify", "sparsify a graph");
    sparsify->add_option("-e,--epsilon", sp.epsilon, "approximation parameter in (0, 1]")
        ->check(CLI::Range(1e-6, 1.0));
    sparsify->add_option("--method", sp.method, "refined | ks | half")->check(CLI::IsMember({"refined", "ks", "half"}));
    sparsify->add_option("--c-pack", sp.c_pack, "packing count constant")->check(CLI::PositiveNumber);
    sparsify->add_option("--big-c", sp.big_c, "resistance sampling constant")->check(CLI::PositiveNumber);
    sparsify->add_option("--log-base", sp.log_base, "logarithm base in parameter formulas")
        ->check(CLI::Range(1.0001, 1e9));
    sparsify->add_flag("--verify", sp.verify, "check the spectral guarantee and exit 2 if it fails");
    sparsify->add_option("input", sp.input)->required()->check(CLI::ExistingFile);
    sparsify->add_option("output", sp.output)->required();
    sparsify->callback([&] { action = [&] { return cmd_sparsify(sp, common); }; });

    VerifyArgs va;
    auto* verify = app.add_subcommand("verify", "check that h spectrally approximates g");
    verify->add_option("-e,--epsilon", va.epsilon)->check(CLI::Range(1e-6, 1.0));
    verify->add_option("--cuts", va.cuts, "random cuts to check in addition to the singletons");
    verify->add_option("graph", va.g, "original graph")->required()->check(CLI::ExistingFile);
    verify->add_option("sparsifier", va.h, "candidate sparsifier")->required()->check(CLI::ExistingFile);
    verify->callback([&] { action = [&] { return cmd_verify(va, common); }; });

    SpannerArgs sa;
    auto* spanner = app.add_subcommand("spanner", "build a (2k-1)-spanner or a spanner packing");
    spanner->add_option("-k,--levels", sa.k, "spanner levels (default ceil(log2 n))");
    spanner->add_option("-r,--packing", sa.packing, "number of disjoint spanners")->check(CLI::PositiveNumber);
    spanner->add_option("input", sa.input)->required()->check(CLI::ExistingFile);
    spanner->add_option("output", sa.output)->required();
    spanner->callback([&] { action = [&] { return cmd_spanner(sa, common); }; });

    ResistanceArgs ra;
    auto* resistance = app.add_subcommand("resistance", "effective resistance oracle");
    resistance->require_subcommand(1);
    auto* rbuild = resistance->add_subcommand("build", "sketch a graph into an oracle file");
    rbuild->add_option("-e,--epsilon", ra.epsilon)->check(CLI::Range(1e-6, 1.0));
    rbuild->add_option("--tol", ra.tol, "solver tolerance per sketch row");
    rbuild->add_option("input", ra.input)->required()->check(CLI::ExistingFile);
    rbuild->add_option("oracle", ra.oracle)->required();
    rbuild->callback([&] { action = [&] { return cmd_resistance_build(ra, common); }; });
    auto* rquery = resistance->add_subcommand("query", "answer resistance queries from an oracle file");
    rquery->add_option("oracle", ra.oracle)->required()->check(CLI::ExistingFile);
    rquery->add_option("pairs", ra.pairs, "node ids s1 t1 s2 t2 ...")->required();
    rquery->callback([&] { action = [&] { return cmd_resistance_query(ra, common); }; });

    SolveArgs so;
    auto* solve = app.add_subcommand("solve", "solve a Laplacian or SDD system");
    solve->require_subcommand(1);
    for (const auto* kind : {"laplacian", "sdd"}) {
        const std::string name = kind;
        auto* sub = solve->add_subcommand(name, name == "laplacian" ? "L_G x = b for a graph file"
                                                                    : "A x = b for a Matrix Market SDD matrix");
        sub->add_option("-e,--epsilon", so.epsilon)->check(CLI::Range(1e-6, 1.0));
        sub->add_option("--tol", so.tol, "relative residual target");
        sub->add_option("input", so.input)->required()->check(CLI::ExistingFile);
        sub->add_option("rhs", so.rhs, "right-hand side, one value per line")->required()->check(CLI::ExistingFile);
        sub->add_option("output", so.output)->required();
        if (name == "laplacian")
            sub->callback([&] { action = [&] { return cmd_solve_laplacian(so, common); }; });
        else
            sub->callback([&] { action = [&] { return cmd_solve_sdd(so, common); }; });
    }

    MinCutArgs ma;
    auto* mincut = app.add_subcommand("mincut", "global minimum cut");
    mincut->add_option("-e,--epsilon", ma.epsilon)->check(CLI::Range(1e-6, 1.0));
    mincut->add_flag("--exact", ma.exact, "run Stoer-Wagner on the input instead");
    mincut->add_option("input", ma.input)->required()->check(CLI::ExistingFile);
    mincut->callback([&] { action = [&] { return cmd_mincut(ma, common); }; });

    EigsArgs ea;
    auto* eigs = app.add_subcommand("eigs", "approximate bottom Laplacian eigenpairs");
    eigs->add_option("-k,--count", ea.k)->check(CLI::PositiveNumber);
    eigs->add_option("-e,--epsilon", ea.epsilon)->check(CLI::Range(1e-6, 1.0));
    eigs->add_option("input", ea.input)->required()->check(CLI::ExistingFile);
    eigs->add_option("output", ea.output, "eigenvectors, one node per line");
    eigs->callback([&] { action = [&] { return cmd_eigs(ea, common); }; });

    BenchArgs ba;
    auto* bench = app.add_subcommand("bench", "query-cost sweeps and hidden-instance audits");
    bench->add_option("kind", ba.kind, "sweep | hard")->check(CLI::IsMember({"sweep", "hard"}));
    bench->add_option("-n,--nodes", ba.n);
    bench->add_option("--j-max", ba.j_max, "sweep m = n * 2^j for j = 1..j-max");
    bench->add_option("-m,--edges", ba.m, "edge parameter of the hard instance");
    bench->add_option("-e,--epsilon", ba.epsilon)->check(CLI::Range(1e-6, 1.0));
    bench->add_option("--method", ba.method)->check(CLI::IsMember({"refined", "ks", "half"}));
    bench->callback([&] { action = [&] { return cmd_bench(ba, common); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_error;
    }

    try {
        return action();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_error;
    }
}
