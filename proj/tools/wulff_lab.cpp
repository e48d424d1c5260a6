// wulff-lab: command-line front end for the verifiers and experiments.
//
// Exit codes: 0 success, 2 an inequality failed, 64 usage error,
// 65 malformed input, 66 body not centrally symmetric, 70 internal error.

#include <charconv>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wulff/io.hpp"
#include "wulff/lab.hpp"
#include "wulff/transport.hpp"

using namespace wulff;

namespace {

constexpr int kExitViolation = 2;
constexpr int kExitUsage = 64;
constexpr int kExitData = 65;
constexpr int kExitNotSymmetric = 66;
constexpr int kExitInternal = 70;

struct UsageError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

Json header(const std::string& command, Json config)
{
    Json j;
    j["schema"] = kSchemaVersion;
    j["command"] = command;
    j["config"] = std::move(config);
    return j;
}

void emit(const std::string& text, const std::string& out)
{
    if (out.empty()) {
        std::cout << text << std::flush;
    } else {
        write_atomic(out, text);
    }
}

// "2..8" or "2,3,5"
std::vector<int> parse_int_range(const std::string& s)
{
    std::vector<int> out;
    auto to_int = [&](std::string_view t) {
        int v = 0;
        const auto r = std::from_chars(t.data(), t.data() + t.size(), v);
        if (r.ec != std::errc() || r.ptr != t.data() + t.size()) throw DegenerateInput("bad integer '" + std::string(t) + "'");
        return v;
    };
    if (const auto dots = s.find(".."); dots != std::string::npos) {
        const int a = to_int(std::string_view(s).substr(0, dots));
        const int b = to_int(std::string_view(s).substr(dots + 2));
        if (a > b) throw DegenerateInput("empty range " + s);
        for (int v = a; v <= b; ++v) out.push_back(v);
    } else {
        std::stringstream ss(s);
        std::string item;
        while (std::getline(ss, item, ',')) out.push_back(to_int(item));
    }
    if (out.empty()) throw DegenerateInput("empty range");
    return out;
}

std::vector<double> parse_doubles(const std::string& s)
{
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            throw DegenerateInput("bad number '" + item + "'");
        }
        if (used != item.size()) throw DegenerateInput("bad number '" + item + "'");
        out.push_back(v);
    }
    if (out.empty()) throw DegenerateInput("empty list");
    return out;
}

ConstantMode parse_mode(const std::string& m)
{
    if (m == "body-specific") return ConstantMode::body_specific;
    if (m == "general") return ConstantMode::general;
    return ConstantMode::symmetric;
}

// amgm ----------------------------------------------------------------------

struct AmgmArgs
{
    std::size_t count = 100000;
    int n = 0;
    std::uint64_t seed = 1;
    std::uint64_t stream = 0;
    std::string suite = "amgm";
    std::string out;
};

int run_amgm(const AmgmArgs& a)
{
    Json config{{"count", a.count}, {"n", a.n}, {"seed", a.seed}, {"stream", a.stream}, {"suite", a.suite}};
    Json j = header("amgm", config);
    const RngSeed seed{a.seed, a.stream};
    std::size_t violations = 0;
    Json first = Json::array();
    if (a.suite == "amgm") {
        const auto r = amgm_suite(a.count, a.n, seed);
        config["tolerance"] = r.tolerance;
        j["config"] = config;
        j["result"] = {{"count", r.count},
                       {"violations", r.violations},
                       {"root_residual", to_json(r.root)},
                       {"ratio_residual", to_json(r.ratio)},
                       {"pairwise_residual", to_json(r.pairwise)},
                       {"sharpness_residual", r.sharpness_residual}};
        violations = r.violations;
        for (const auto& v : r.first_violations) first.push_back(to_json(v));
    } else {
        const auto r = lemma_suite(a.count, a.n, seed);
        config["tolerance"] = r.tolerance;
        j["config"] = config;
        j["result"] = {{"count", r.count}, {"violations", r.violations}, {"slack", to_json(r.slack)}};
        violations = r.violations;
        for (const auto& v : r.first_violations) first.push_back(to_json(v));
    }
    j["result"]["first_violations"] = first;
    j["pass"] = violations == 0;
    emit(dump(j), a.out);
    if (violations > 0) {
        for (const auto& v : first)
            std::cerr << "violation: seed=" << a.seed << " stream=" << a.stream << " index=" << v["index"]
                      << " tuple=" << v["tuple"].dump() << "\n";
        return kExitViolation;
    }
    return 0;
}

// verify --------------------------------------------------------------------

struct VerifyArgs
{
    std::string kind = "iso";
    std::string k_file, l_file;
    bool random = false;
    int n = 2;
    std::size_t pairs = 10;
    std::uint64_t seed = 1;
    std::uint64_t stream = 0;
    std::string mode = "general";
    std::string out;
};

Json derivation_json(const DerivationReport& d)
{
    return Json{{"name", "derive-bm"},
                {"additivity_residual", d.additivity_residual},
                {"equality_residual", d.equality_residual},
                {"asymmetry_kl", d.a_kl},
                {"asymmetry_mk", d.a_mk},
                {"asymmetry_ml", d.a_ml},
                {"triangle_slack", d.triangle_slack},
                {"beta", d.beta},
                {"sigma", d.sigma},
                {"weighted_bound", d.weighted_bound},
                {"half_bound", d.half_bound},
                {"final_bound", d.final_bound},
                {"constant", 4.0 * d.constant},
                {"additivity_ok", d.additivity_ok},
                {"triangle_ok", d.triangle_ok},
                {"chain_ok", d.chain_ok},
                {"pass", d.pass}};
}

// Reports for one pair; with mode "all" the symmetric constant is applied
// only when K is centrally symmetric.
std::vector<Json> verify_pair(const VerifyArgs& a, const ConvexBody& K, const ConvexBody& L, RngSeed seed,
                              bool* all_pass)
{
    std::vector<Json> out;
    auto add = [&](InequalityReport r) {
        r.seed = seed;
        *all_pass = *all_pass && r.pass;
        out.push_back(to_json(r));
    };
    if (a.kind == "iso" || a.kind == "bm") {
        const bool iso = a.kind == "iso";
        const auto m = measure_pair(K, L, !iso);
        if (!iso) {
            add(bm_report(m));
        } else if (a.mode == "all") {
            add(isoperimetric_report(m, ConstantMode::body_specific));
            add(isoperimetric_report(m, ConstantMode::general));
            if (m.symmetric_k) add(isoperimetric_report(m, ConstantMode::symmetric));
        } else {
            add(isoperimetric_report(m, parse_mode(a.mode)));
        }
    } else if (a.kind == "dar") {
        add(verify_dar(K, L));
    } else if (a.kind == "wulff") {
        add(verify_wulff(K, L));
    } else if (a.kind == "bm-classic") {
        add(verify_bm_classic(K, L));
    } else {
        const auto d = derive_bm_from_iso(K, L);
        *all_pass = *all_pass && d.pass;
        Json j = derivation_json(d);
        j["inputs"] = {K.label(), L.label()};
        j["seed"] = seed_to_json(seed);
        out.push_back(std::move(j));
    }
    return out;
}

int run_verify(const VerifyArgs& a)
{
    Json config{{"kind", a.kind}, {"mode", a.mode}};
    if (a.random) {
        config["random"] = true;
        config["n"] = a.n;
        config["pairs"] = a.pairs;
        config["seed"] = a.seed;
        config["stream"] = a.stream;
    } else {
        if (a.k_file.empty() || a.l_file.empty()) throw UsageError("verify needs --k and --l, or --random");
        config["k"] = a.k_file;
        config["l"] = a.l_file;
    }
    Json j = header("verify", config);
    bool all_pass = true;
    Json reports = Json::array();
    if (a.random) {
        const RngSeed seed{a.seed, a.stream};
        std::vector<std::vector<Json>> slots(a.pairs);
        std::vector<char> ok(a.pairs, 1);
        parallel_for(a.pairs, [&](std::size_t i) {
            const bool sym = a.mode == "symmetric" || (a.mode == "all" && i % 2 == 0);
            const auto [K, L] = corpus_pair(a.n, seed, i, sym);
            bool p = true;
            slots[i] = verify_pair(a, K, L, seed.derive(i), &p);
            ok[i] = p;
        });
        for (std::size_t i = 0; i < a.pairs; ++i) {
            all_pass = all_pass && ok[i];
            for (auto& r : slots[i]) reports.push_back(std::move(r));
        }
    } else {
        const auto K = read_body(a.k_file);
        const auto L = read_body(a.l_file);
        if (K.dimension() != L.dimension()) throw MalformedBody("bodies have different dimensions");
        for (auto& r : verify_pair(a, K, L, {}, &all_pass)) reports.push_back(std::move(r));
    }
    std::size_t failures = 0;
    for (const auto& r : reports) failures += r["pass"].get<bool>() ? 0 : 1;
    j["reports"] = std::move(reports);
    j["failures"] = failures;
    j["pass"] = all_pass;
    emit(dump(j), a.out);
    return all_pass ? 0 : kExitViolation;
}

// conjecture ----------------------------------------------------------------

struct ConjectureArgs
{
    std::string n_range = "2..10";
    std::string eps = "0.02,0.01,0.005";
    std::string out;
};

int run_conjecture(const ConjectureArgs& a)
{
    const auto ns = parse_int_range(a.n_range);
    const auto eps = parse_doubles(a.eps);
    const auto t = box_conjecture_experiment(ns, eps);
    Json config{{"n", a.n_range}, {"eps", a.eps}};
    std::vector<int> fit_ns;
    for (int n : ns)
        if (n <= 10) fit_ns.push_back(n);
    const bool fitted = fit_ns.size() >= 2;

    std::ostringstream csv;
    csv.precision(17);
    csv << "# wulff-lab conjecture schema=" << kSchemaVersion << " config=" << config.dump() << "\n";
    csv << to_csv(t);
    if (fitted) {
        csv << "# fitted_exponent=" << t.fitted_exponent << " band=[" << t.exponent_low << "," << t.exponent_high
            << "]\n";
    } else {
        csv << "# fitted_exponent skipped: fewer than two dimensions in 2..10\n";
    }

    Json j = header("conjecture", config);
    Json limits = Json::array();
    for (const auto& l : t.limits)
        limits.push_back({{"n", l.n}, {"m", l.m}, {"c_limit", l.c_limit}, {"asymmetry_slope", l.asymmetry_slope}});
    j["rows"] = t.rows.size();
    j["limits"] = std::move(limits);
    if (fitted) {
        j["fitted_exponent"] = t.fitted_exponent;
        j["exponent_band"] = {t.exponent_low, t.exponent_high};
    } else {
        j["fitted_exponent"] = nullptr;
        j["note"] = "exponent fit skipped: fewer than two dimensions in 2..10";
    }
    if (a.out.empty()) {
        std::cout << csv.str() << std::flush;
    } else {
        write_atomic(a.out, csv.str());
        j["out"] = a.out;
        std::cout << dump(j) << std::flush;
    }
    return 0;
}

// search --------------------------------------------------------------------

struct SearchArgs
{
    int n = 2;
    std::size_t budget = 1000;
    std::uint64_t seed = 1;
    std::uint64_t stream = 0;
    std::size_t keep = 10;
    std::string out;
};

int run_search(const SearchArgs& a)
{
    Json config{{"n", a.n}, {"budget", a.budget}, {"seed", a.seed}, {"stream", a.stream}, {"keep", a.keep}};
    Json j = header("search", config);
    const auto top = worst_case_search(a.n, a.budget, {a.seed, a.stream}, a.keep);
    Json list = Json::array();
    bool all_pass = true;
    for (const auto& e : top) {
        Json r = to_json(e.report);
        r["empirical_constant"] = e.empirical_constant;
        r["index"] = e.index;
        r["generator"] = e.generator;
        all_pass = all_pass && e.report.pass;
        list.push_back(std::move(r));
    }
    j["max_empirical_constant"] = top.empty() ? Json(nullptr) : Json(top.front().empirical_constant);
    j["upper_constant"] = bm_constant(a.n);
    j["reports"] = std::move(list);
    j["pass"] = all_pass;
    emit(dump(j), a.out);
    return all_pass ? 0 : kExitViolation;
}

// transport -----------------------------------------------------------------

struct TransportArgs
{
    std::string k_file, l_file;
    int samples = 2048;
    std::uint64_t seed = 1;
    std::uint64_t stream = 0;
    int k_neighbors = 0;
    std::size_t triples = 2000;
    std::size_t chain = 0;
    std::size_t trace = 0;
    std::string out;
};

Json matrix_json(const Matrix& m)
{
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
        rows.push_back(std::move(row));
    }
    return rows;
}

int run_transport(const TransportArgs& a)
{
    const RngSeed seed{a.seed, a.stream};
    Json config{{"k", a.k_file.empty() ? "box[0,1]^2" : a.k_file},
                {"l", a.l_file.empty() ? "box[0,2]x[0,0.5]" : a.l_file},
                {"samples", a.samples},
                {"seed", a.seed},
                {"stream", a.stream},
                {"k_neighbors", a.k_neighbors},
                {"triples", a.triples},
                {"chain", a.chain},
                {"trace", a.trace}};
    Json j = header("transport", config);
    const auto K = a.k_file.empty() ? cube(2) : read_body(a.k_file);
    const auto L = a.l_file.empty() ? box((Vector(2) << 0, 0).finished(), (Vector(2) << 2, 0.5).finished(), "box(2x0.5)")
                                    : read_body(a.l_file);
    if (K.dimension() != L.dimension()) throw MalformedBody("bodies have different dimensions");
    const auto map = discrete_brenier(K, L, a.samples, seed);
    const auto fit = affine_fit(map);
    JacobianOptions jopt;
    jopt.k_neighbors = a.k_neighbors;
    const auto survey = local_jacobians(map, K, jopt);
    const auto swaps = two_swap_check(map);
    const auto cycles = three_cycle_check(map, a.triples, seed.derive(7));
    j["map"] = {{"cost", map.cost}, {"volume_ratio", map.volume_ratio}};
    j["affine_fit"] = {{"matrix", matrix_json(fit.matrix)}, {"shift", std::vector<double>(fit.shift.data(), fit.shift.data() + fit.shift.size())}};
    j["jacobians"] = {{"anchors", survey.jacobians.size()},
                      {"skipped", survey.skipped},
                      {"k_neighbors", survey.k_neighbors},
                      {"median_det", survey.median_det},
                      {"quality", survey.quality}};
    j["optimality"] = {{"two_swap", {{"checked", swaps.checked}, {"improving", swaps.improving}, {"worst_gain", swaps.worst_gain}}},
                       {"three_cycle", {{"checked", cycles.checked}, {"improving", cycles.improving}, {"worst_gain", cycles.worst_gain}}}};
    bool pass = swaps.improving == 0 && cycles.improving == 0;
    if (a.chain > 0) {
        const auto c = chain_suite(a.chain, seed.derive(8));
        Json steps = Json::object();
        for (const auto& [name, fails] : c.step_failures) steps[name] = fails;
        j["chain"] = {{"count", c.count},
                      {"violations", c.violations},
                      {"min_combined_residual", c.min_combined_residual},
                      {"step_failures", steps}};
        pass = pass && c.violations == 0;
    }
    if (a.trace > 0) {
        const auto t = trace_suite(a.trace, seed.derive(9));
        j["trace"] = {{"count", t.count}, {"violations", t.violations}, {"min_ratio", finite_or_null(t.min_ratio)}};
        pass = pass && t.violations == 0;
    }
    j["pass"] = pass;
    emit(dump(j), a.out);
    return pass ? 0 : kExitViolation;
}

// body ----------------------------------------------------------------------

struct BodyArgs
{
    std::string shape = "cube";
    int n = 2;
    int points = 8;
    int sides = 6;
    double radius = 1.0;
    bool symmetric = false;
    std::uint64_t seed = 1;
    std::uint64_t stream = 0;
    std::string info;
    std::string out;
};

int run_body(const BodyArgs& a)
{
    if (!a.info.empty()) {
        const auto K = read_body(a.info);
        Json config{{"info", a.info}};
        Json j = header("body", config);
        const auto inner = chebyshev_ball(K);
        j["label"] = K.label();
        j["dimension"] = K.dimension();
        j["vertices"] = K.vertices().size();
        j["volume"] = volume(K);
        j["perimeter"] = perimeter(K);
        j["inradius"] = inner.radius;
        j["circumradius"] = enclosing_ball(K).radius;
        j["q_upper"] = inverse_roundness(K).q_upper;
        j["centrally_symmetric"] = centrally_symmetric(K);
        emit(dump(j), a.out);
        return 0;
    }
    ConvexBody K = [&] {
        if (a.shape == "cube") return cube(a.n);
        if (a.shape == "simplex") return standard_simplex(a.n);
        if (a.shape == "polygon") return regular_polygon(a.sides, a.radius);
        return random_body(a.n, a.points, a.symmetric, {a.seed, a.stream});
    }();
    if (a.shape == "cube") K = K.with_label("cube" + std::to_string(a.n));
    emit(dump(body_to_json(K)), a.out);
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Numerical laboratory for quantitative isoperimetric and Brunn-Minkowski inequalities", "wulff-lab"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "wulff-lab 1.0 (schema 1)");

    AmgmArgs amgm;
    auto* c_amgm = app.add_subcommand("amgm", "Randomized stable AM-GM or root-ratio suite");
    c_amgm->add_option("--count", amgm.count, "Number of tuples")->check(CLI::PositiveNumber)->capture_default_str();
    c_amgm->add_option("--n", amgm.n, "Tuple length (0: random 2..16, 2..10 for the lemma suite)")
        ->check(CLI::Range(0, 64))
        ->capture_default_str();
    c_amgm->add_option("--seed", amgm.seed)->capture_default_str();
    c_amgm->add_option("--stream", amgm.stream)->capture_default_str();
    c_amgm->add_option("--suite", amgm.suite)->check(CLI::IsMember({"amgm", "lemma"}))->capture_default_str();
    c_amgm->add_option("-o,--out", amgm.out, "Write the report here instead of stdout");

    VerifyArgs ver;
    auto* c_ver = app.add_subcommand("verify", "Check an inequality on given bodies or a random corpus");
    c_ver->add_option("kind", ver.kind)
        ->check(CLI::IsMember({"iso", "bm", "dar", "wulff", "bm-classic", "derive"}))
        ->required();
    c_ver->add_option("--k", ver.k_file, "Body JSON for K")->check(CLI::ExistingFile);
    c_ver->add_option("--l", ver.l_file, "Body JSON for L")->check(CLI::ExistingFile);
    c_ver->add_flag("--random", ver.random, "Use the random corpus instead of files");
    c_ver->add_option("--n", ver.n, "Dimension of the random corpus")->check(CLI::Range(2, 6))->capture_default_str();
    c_ver->add_option("--pairs", ver.pairs)->check(CLI::PositiveNumber)->capture_default_str();
    c_ver->add_option("--seed", ver.seed)->capture_default_str();
    c_ver->add_option("--stream", ver.stream)->capture_default_str();
    c_ver->add_option("--mode", ver.mode, "Constant for iso: body-specific, general, symmetric or all")
        ->check(CLI::IsMember({"body-specific", "general", "symmetric", "all"}))
        ->capture_default_str();
    c_ver->add_option("-o,--out", ver.out);

    ConjectureArgs conj;
    auto* c_conj = app.add_subcommand("conjecture", "Box-family lower bounds on the Brunn-Minkowski constant");
    c_conj->add_option("--n", conj.n_range, "Dimensions, 'a..b' or a comma list")->capture_default_str();
    c_conj->add_option("--eps", conj.eps, "Comma-separated epsilons in (0, 0.5]")->capture_default_str();
    c_conj->add_option("-o,--out", conj.out, "CSV path; the summary then goes to stdout");

    SearchArgs search;
    auto* c_search = app.add_subcommand("search", "Randomized search for pairs with a large empirical constant");
    c_search->add_option("--n", search.n)->check(CLI::Range(2, 5))->capture_default_str();
    c_search->add_option("--budget", search.budget)->capture_default_str();
    c_search->add_option("--seed", search.seed)->capture_default_str();
    c_search->add_option("--stream", search.stream)->capture_default_str();
    c_search->add_option("--keep", search.keep)->capture_default_str();
    c_search->add_option("-o,--out", search.out);

    TransportArgs tr;
    auto* c_tr = app.add_subcommand("transport", "Discrete transport map diagnostics");
    c_tr->add_option("--k", tr.k_file)->check(CLI::ExistingFile);
    c_tr->add_option("--l", tr.l_file)->check(CLI::ExistingFile);
    c_tr->add_option("--samples", tr.samples)->check(CLI::Range(2, kMaxTransportSamples))->capture_default_str();
    c_tr->add_option("--seed", tr.seed)->capture_default_str();
    c_tr->add_option("--stream", tr.stream)->capture_default_str();
    c_tr->add_option("--neighbors", tr.k_neighbors, "0 picks max(2n+2, 48)")->capture_default_str();
    c_tr->add_option("--triples", tr.triples, "Random 3-cycles tested for optimality")->capture_default_str();
    c_tr->add_option("--chain", tr.chain, "Also run this many eigenvalue chain samples")->capture_default_str();
    c_tr->add_option("--trace", tr.trace, "Also run this many trace inequality instances")->capture_default_str();
    c_tr->add_option("-o,--out", tr.out);

    BodyArgs body;
    auto* c_body = app.add_subcommand("body", "Write a body JSON file, or describe one with --info");
    c_body->add_option("--shape", body.shape)
        ->check(CLI::IsMember({"cube", "simplex", "polygon", "random"}))
        ->capture_default_str();
    c_body->add_option("--n", body.n)->check(CLI::Range(2, 8))->capture_default_str();
    c_body->add_option("--points", body.points)->capture_default_str();
    c_body->add_option("--sides", body.sides)->check(CLI::Range(3, 100000))->capture_default_str();
    c_body->add_option("--radius", body.radius)->check(CLI::PositiveNumber)->capture_default_str();
    c_body->add_flag("--symmetric", body.symmetric);
    c_body->add_option("--seed", body.seed)->capture_default_str();
    c_body->add_option("--stream", body.stream)->capture_default_str();
    c_body->add_option("--info", body.info, "Describe this body file")->check(CLI::ExistingFile);
    c_body->add_option("-o,--out", body.out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (c_amgm->parsed()) return run_amgm(amgm);
        if (c_ver->parsed()) return run_verify(ver);
        if (c_conj->parsed()) return run_conjecture(conj);
        if (c_search->parsed()) return run_search(search);
        if (c_tr->parsed()) return run_transport(tr);
        if (c_body->parsed()) return run_body(body);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const NotCentrallySymmetric& e) {
        std::cerr << "not centrally symmetric: " << e.what() << "\n";
        return kExitNotSymmetric;
    } catch (const MalformedBody& e) {
        std::cerr << "malformed body: " << e.what() << "\n";
        return kExitData;
    } catch (const DegenerateInput& e) {
        std::cerr << "bad input: " << e.what() << "\n";
        return kExitData;
    } catch (const DimensionMismatch& e) {
        std::cerr << "bad input: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitUsage;
}
