// symcalc: command-line front end. JSON on stdout, summaries on stderr.
// Exit codes: 0 ok, 1 verification failure, 2 bad input.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "acceptance.hpp"
#include "symcalc/json_io.hpp"
#include "symcalc/kernels.hpp"
#include "symcalc/multipoly.hpp"
#include "symcalc/ncalc.hpp"
#include "symcalc/polynorm.hpp"
#include "symcalc/search.hpp"

namespace {

using namespace symcalc;

// Thrown for failed checks; maps to exit code 1.
struct VerificationFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_text(const std::string &path)
{
    if (path.empty() || path == "-") {
        return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::invalid_argument("cannot open '" + path + "'");
    }
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Json read_json(const std::string &path) { return parse_json(read_text(path)); }

void emit(const Json &j) { std::cout << j.dump(2) << '\n'; }

std::string num(double v, int digits = 10)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v == 0.0 ? 0.0 : v);
    return buf;
}

std::string entry(Complex c)
{
    const double re = std::abs(c.real()) < 1e-13 ? 0.0 : c.real();
    const double im = std::abs(c.imag()) < 1e-13 ? 0.0 : c.imag();
    if (im == 0.0) {
        return num(re, 8);
    }
    return num(re, 8) + (im < 0 ? " - " : " + ") + num(std::abs(im), 8) + "i";
}

void print_matrix(std::ostream &out, const std::string &label, const Matrix &m)
{
    out << label << " =\n";
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        out << "  [";
        for (Eigen::Index k = 0; k < m.cols(); ++k) {
            out << (k ? ", " : "") << entry(m(i, k));
        }
        out << "]\n";
    }
}

int run_transform(const std::string &which, const std::string &path, int digits)
{
    const Poly p = poly_from_json(read_json(path));
    Poly out = p;
    if (which == "gamma") {
        out = gamma(p);
    } else if (which == "lambda") {
        out = lambda(p);
    }
    emit(to_json(out, digits));
    return 0;
}

int run_symm(const std::string &poly_path, const std::string &tuple_path)
{
    const Poly p = poly_from_json(read_json(poly_path));
    const MatrixTuple t = tuple_from_json(read_json(tuple_path));
    const Matrix m = symm_apply(p, t);
    emit(Json{{"matrix", to_json(m)}, {"norm", op_norm(m)}, {"spectral_radius", spectral_radius(m)}});
    return 0;
}

int run_norm(const std::string &path, const std::string &domain, int grid, int refine, unsigned threads)
{
    const Poly p = poly_from_json(read_json(path));
    const Domain dom = Domain::parse(domain);
    SupNormOptions opts;
    opts.grid = grid;
    opts.refine = refine;
    opts.threads = threads;
    const NormEstimate e = sup_norm(p, dom, opts);
    emit(to_json(e));
    std::cerr << "sup norm on " << dom.to_string() << " in [" << num(e.lower) << ", " << num(e.upper) << "]\n";
    return 0;
}

struct CertifyArgs {
    std::string kernel = "lprime";
    std::size_t n = 2;
    double r = 0.0;
    unsigned trunc = kDefaultTruncation;
    CertifyOptions opts;
    std::string check;
};

int run_certify(const CertifyArgs &a)
{
    if (!a.check.empty()) {
        const Certificate cert = certificate_from_json(read_json(a.check));
        const bool ok = recheck_certificate(cert, a.opts.threads);
        emit(Json{{"check", ok ? "accepted" : "rejected"}, {"verdict", to_string(cert.verdict)},
                  {"margin", cert.margin}});
        std::cerr << "certificate " << (ok ? "accepted" : "rejected") << '\n';
        return ok ? 0 : 1;
    }
    if (!(a.r > 0.0)) {
        throw std::invalid_argument("--r must be positive");
    }
    KernelSpec spec;
    spec.kind = parse_kernel(a.kernel);
    spec.n = a.n;
    spec.truncation = a.trunc;
    const Certificate cert = certify_positivity(spec, a.r, a.opts);
    emit(to_json(cert));
    std::cerr << to_string(spec.kind) << " n=" << spec.n << " r=" << num(a.r) << ": " << to_string(cert.verdict)
              << " (margin " << num(cert.margin, 4) << ")\n";
    return cert.certified() ? 0 : 1;
}

int run_constants(std::size_t n, const CertifyOptions &opts)
{
    Json out = Json::array();
    auto add = [&](const ConstantReport &rep) {
        out.push_back(to_json(rep));
        std::cerr << to_string(rep.kind) << " n=" << rep.n << ": " << num(rep.value, 8) << '\n';
    };
    add(m_bound(n));
    add(r_bound(n, RBoundMode::Certified, opts));
    if (n == 3) {
        add(r_bound(n, RBoundMode::Hand, opts));
    }
    emit(out);
    return 0;
}

int run_example7(bool json, int grid, int refine)
{
    const Example7Report rep = example7(grid, refine);
    if (json) {
        emit(to_json(rep));
        return 0;
    }
    std::ostream &out = std::cout;
    out << "p(z, w) = z^2 + w^2 - 2zw + 2z + 2w + 1 = (z - w)^2 + 2(z + w) + 1\n";
    print_matrix(out, "T1", rep.tuple[0]);
    print_matrix(out, "T2", rep.tuple[1]);
    print_matrix(out, "(T1 - T2)^2", rep.difference_squared);
    print_matrix(out, "symm(p)(T1, T2)", rep.symm);
    out << "norm = " << num(rep.norm, 12) << '\n';
    out << "spectral radius = " << num(rep.spectral_radius, 12) << '\n';
    out << "p(1, -1) = " << entry(rep.witness_value) << '\n';
    out << "polydisk norm bracket [" << num(rep.poly_norm.lower, 12) << ", " << num(rep.poly_norm.upper, 12)
        << "] (grid " << rep.poly_norm.params.grid << ", refine " << rep.poly_norm.params.refine << ")\n";
    const bool gap = rep.norm > rep.poly_norm.upper;
    out << (gap ? "6 > 5: symm(p) exceeds the polydisk norm\n" : "no gap found\n");
    return gap ? 0 : 1;
}

struct SearchArgs {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string experiment;
    std::optional<std::size_t> n;
    std::optional<std::size_t> trials;
    std::optional<int> dim;
    std::optional<unsigned> degree;
    std::string constraint;
    unsigned threads = 1;
};

int run_search(const SearchArgs &a)
{
    if (!a.seed) {
        throw std::invalid_argument("search requires --seed");
    }
    ExperimentConfig cfg;
    if (!a.config.empty()) {
        cfg = experiment_config_from_json(read_json(a.config));
    }
    cfg.seed = *a.seed;
    if (!a.experiment.empty()) {
        cfg.experiment = parse_experiment(a.experiment);
    }
    if (a.n) {
        cfg.n = *a.n;
    }
    if (a.trials) {
        cfg.trials = *a.trials;
    }
    if (a.dim) {
        cfg.dim = *a.dim;
    }
    if (a.degree) {
        cfg.degree = *a.degree;
    }
    if (!a.constraint.empty()) {
        cfg.constraint = parse_constraint(a.constraint);
    }
    cfg.threads = a.threads;
    cfg.validate();

    const auto records = run_experiment(cfg);
    std::size_t violations = 0;
    double worst = 0.0;
    for (const auto &rec : records) {
        std::cout << to_json(rec).dump() << '\n';
        if (rec.violated && !rec.control) {
            ++violations;
        }
        if (!rec.control) {
            worst = std::max(worst, rec.ratio);
        }
    }
    std::cerr << to_string(cfg.experiment) << ": " << records.size() << " records, " << violations
              << " violations, max ratio " << num(worst, 8) << '\n';
    return violations == 0 ? 0 : 1;
}

int run_verify(unsigned threads)
{
    const auto results = acceptance::run_all(std::cout, threads);
    for (const auto &r : results) {
        if (!r.passed) {
            return 1;
        }
    }
    return 0;
}

int run(int argc, char **argv)
{
    CLI::App app{"Symmetrized polynomial calculus toolkit"};
    app.require_subcommand(1);
    std::function<int()> action;

    int digits = 17;
    std::string input;
    for (const char *name : {"gamma", "lambda", "canon"}) {
        const std::string which = name;
        auto *sub = app.add_subcommand(which, which == "canon" ? "Rewrite a polynomial in canonical form"
                                                               : "Apply the " + which + " coefficient transform");
        sub->add_option("input", input, "Polynomial JSON file, - for stdin");
        sub->add_option("--digits", digits, "Significant digits kept in coefficients")->check(CLI::Range(1, 17));
        sub->callback([&, which] { action = [&, which] { return run_transform(which, input, digits); }; });
    }

    std::string poly_path;
    std::string tuple_path;
    auto *symm = app.add_subcommand("symm", "Evaluate symm(p) on a matrix tuple");
    symm->add_option("poly", poly_path, "Polynomial JSON file")->required();
    symm->add_option("tuple", tuple_path, "Tuple JSON file")->required();
    symm->callback([&] { action = [&] { return run_symm(poly_path, tuple_path); }; });

    std::string domain;
    int grid = 0;
    int refine = 3;
    unsigned threads = 1;
    auto *norm = app.add_subcommand("norm", "Certified sup norm bracket");
    norm->add_option("input", input, "Polynomial JSON file, - for stdin");
    norm->add_option("--domain", domain, "torus:n, polydisk:n:R or delta:n")->required();
    norm->add_option("--grid", grid, "Points per angle (0 = default)")->check(CLI::NonNegativeNumber);
    norm->add_option("--refine", refine, "Refinement levels")->check(CLI::NonNegativeNumber);
    norm->add_option("--threads", threads)->check(CLI::PositiveNumber);
    norm->callback([&] { action = [&] { return run_norm(input, domain, grid, refine, threads); }; });

    CertifyArgs cert;
    auto *certify = app.add_subcommand("certify", "Certify kernel positivity on r * closed polydisk");
    certify->add_option("--kernel", cert.kernel, "l or lprime")
        ->check(CLI::IsMember({"j", "j0", "j1", "l", "lprime"}));
    certify->add_option("--n", cert.n, "Number of variables");
    certify->add_option("--r", cert.r, "Radius");
    certify->add_option("--trunc", cert.trunc, "Series truncation degree");
    certify->add_option("--grid", cert.opts.grid, "Points per angle (0 = default)")->check(CLI::NonNegativeNumber);
    certify->add_option("--refine-depth", cert.opts.refine_depth)->check(CLI::NonNegativeNumber);
    certify->add_option("--max-cells", cert.opts.max_cells);
    certify->add_option("--check", cert.check, "Re-verify a stored certificate");
    certify->add_option("--threads", cert.opts.threads)->check(CLI::PositiveNumber);
    certify->callback([&] { action = [&] { return run_certify(cert); }; });

    std::size_t const_n = 2;
    CertifyOptions const_opts;
    auto *constants = app.add_subcommand("constants", "M_n and R_n with their breakdowns");
    constants->add_option("--n", const_n, "2 or 3");
    constants->add_option("--grid", const_opts.grid)->check(CLI::NonNegativeNumber);
    constants->add_option("--threads", const_opts.threads)->check(CLI::PositiveNumber);
    constants->callback([&] { action = [&] { return run_constants(const_n, const_opts); }; });

    bool ex_json = false;
    int ex_grid = 256;
    int ex_refine = 3;
    auto *ex7 = app.add_subcommand("example7", "The non-commuting counterexample p7");
    ex7->add_flag("--json", ex_json, "JSON instead of text");
    ex7->add_option("--grid", ex_grid)->check(CLI::PositiveNumber);
    ex7->add_option("--refine", ex_refine)->check(CLI::NonNegativeNumber);
    ex7->callback([&] { action = [&] { return run_example7(ex_json, ex_grid, ex_refine); }; });

    SearchArgs sa;
    auto *search = app.add_subcommand("search", "Seeded randomized experiments, JSON lines");
    search->add_option("config", sa.config, "Experiment config JSON file");
    search->add_option("--seed", sa.seed, "Required");
    search->add_option("--experiment", sa.experiment,
                       "gamma_bound, theorem_bound, drury, spectral_radius, ratio_search, lemma51");
    search->add_option("--n", sa.n);
    search->add_option("--trials", sa.trials);
    search->add_option("--dim", sa.dim);
    search->add_option("--degree", sa.degree);
    search->add_option("--constraint", sa.constraint)
        ->check(CLI::IsMember({"sum", "diamond", "contraction", "commuting"}));
    search->add_option("--threads", sa.threads)->check(CLI::PositiveNumber);
    search->callback([&] { action = [&] { return run_search(sa); }; });

    unsigned verify_threads = 1;
    auto *verify = app.add_subcommand("verify", "Run the acceptance suite");
    verify->add_option("--threads", verify_threads)->check(CLI::PositiveNumber);
    verify->callback([&] { action = [&] { return run_verify(verify_threads); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return 2;
    }
    return action();
}

} // namespace

int main(int argc, char **argv)
{
    try {
        return run(argc, argv);
    } catch (const std::invalid_argument &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::domain_error &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::out_of_range &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception &e) {
        std::cerr << "failed: " << e.what() << '\n';
        return 1;
    }
}
