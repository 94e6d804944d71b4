#include "symcalc/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace symcalc {

namespace {

const Json &require(const Json &j, const char *key)
{
    if (!j.is_object()) {
        throw std::invalid_argument(std::string("expected an object holding '") + key + "'");
    }
    const auto it = j.find(key);
    if (it == j.end()) {
        throw std::invalid_argument(std::string("missing field '") + key + "'");
    }
    return *it;
}

double number(const Json &j, const char *what)
{
    if (!j.is_number()) {
        throw std::invalid_argument(std::string(what) + " must be a number");
    }
    const double v = j.get<double>();
    if (!std::isfinite(v)) {
        throw std::invalid_argument(std::string(what) + " must be finite");
    }
    return v;
}

template <typename T>
T integer(const Json &j, const char *what)
{
    if (!j.is_number_integer()) {
        throw std::invalid_argument(std::string(what) + " must be an integer");
    }
    if (j.is_number_unsigned()) {
        return static_cast<T>(j.get<std::uint64_t>());
    }
    const auto v = j.get<std::int64_t>();
    if (v < 0) {
        throw std::invalid_argument(std::string(what) + " must be nonnegative");
    }
    return static_cast<T>(v);
}

// Wraps library type errors so callers only see std::invalid_argument.
template <typename Fn>
auto decoding(const char *what, Fn &&fn)
{
    try {
        return fn();
    } catch (const nlohmann::json::exception &e) {
        throw std::invalid_argument(std::string("bad ") + what + ": " + e.what());
    }
}

Json pairs_to_json(const std::vector<std::pair<std::string, double>> &pairs)
{
    Json out = Json::array();
    for (const auto &[name, value] : pairs) {
        out.push_back(Json{{"name", name}, {"value", value}});
    }
    return out;
}

} // namespace

Json to_json(const Poly &p, int digits)
{
    auto round = [digits](double v) {
        if (digits < 17) {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.*g", digits, v);
            v = std::strtod(buf, nullptr);
        }
        return v == 0.0 ? 0.0 : v;
    };
    Json terms = Json::array();
    for (const auto &[alpha, c] : p.terms()) {
        terms.push_back(Json{{"alpha", alpha.exponents()}, {"re", round(c.real())}, {"im", round(c.imag())}});
    }
    return Json{{"nvars", p.nvars()}, {"terms", terms}};
}

Poly poly_from_json(const Json &j)
{
    return decoding("polynomial", [&] {
        const auto n = integer<std::size_t>(require(j, "nvars"), "nvars");
        if (n < 1) {
            throw std::invalid_argument("nvars must be at least 1");
        }
        const Json &terms = require(j, "terms");
        if (!terms.is_array()) {
            throw std::invalid_argument("terms must be an array");
        }
        Poly p(n);
        for (const auto &t : terms) {
            const Json &a = require(t, "alpha");
            if (!a.is_array() || a.size() != n) {
                throw std::invalid_argument("alpha must be an array of length nvars");
            }
            MultiIndex alpha(n);
            for (std::size_t i = 0; i < n; ++i) {
                alpha[i] = integer<MultiIndex::value_type>(a[i], "exponent");
            }
            const double re = t.contains("re") ? number(t["re"], "re") : 0.0;
            const double im = t.contains("im") ? number(t["im"], "im") : 0.0;
            p.add_term(alpha, Complex{re, im});
        }
        return p;
    });
}

Json to_json(const Matrix &m)
{
    Json re = Json::array();
    Json im = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json rr = Json::array();
        Json ri = Json::array();
        for (Eigen::Index k = 0; k < m.cols(); ++k) {
            rr.push_back(m(i, k).real());
            ri.push_back(m(i, k).imag());
        }
        re.push_back(rr);
        im.push_back(ri);
    }
    return Json{{"dim", m.rows()}, {"re", re}, {"im", im}};
}

Matrix matrix_from_json(const Json &j)
{
    return decoding("matrix", [&] {
        const auto d = integer<Eigen::Index>(require(j, "dim"), "dim");
        if (d < 1) {
            throw std::invalid_argument("dim must be at least 1");
        }
        const Json &re = require(j, "re");
        const bool has_im = j.contains("im");
        const Json &im = has_im ? j["im"] : re;
        auto check_rows = [&](const Json &rows, const char *name) {
            if (!rows.is_array() || static_cast<Eigen::Index>(rows.size()) != d) {
                throw std::invalid_argument(std::string(name) + " must have dim rows");
            }
            for (const auto &row : rows) {
                if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != d) {
                    throw std::invalid_argument(std::string(name) + " rows must have dim entries");
                }
            }
        };
        check_rows(re, "re");
        check_rows(im, "im");
        Matrix m(d, d);
        for (Eigen::Index i = 0; i < d; ++i) {
            for (Eigen::Index k = 0; k < d; ++k) {
                const auto ui = static_cast<std::size_t>(i);
                const auto uk = static_cast<std::size_t>(k);
                m(i, k) = Complex{number(re[ui][uk], "re entry"), has_im ? number(im[ui][uk], "im entry") : 0.0};
            }
        }
        return m;
    });
}

Json tuple_to_json(const std::vector<Matrix> &mats)
{
    Json out = Json::array();
    for (const auto &m : mats) {
        out.push_back(to_json(m));
    }
    return out;
}

Json to_json(const MatrixTuple &t)
{
    return tuple_to_json(t.matrices());
}

MatrixTuple tuple_from_json(const Json &j)
{
    if (!j.is_array() || j.empty()) {
        throw std::invalid_argument("a tuple is a nonempty array of matrices");
    }
    std::vector<Matrix> mats;
    for (const auto &m : j) {
        mats.push_back(matrix_from_json(m));
    }
    return MatrixTuple(std::move(mats));
}

Json to_json(const NormEstimate &e)
{
    return Json{{"lower", e.lower},
                {"upper", e.upper},
                {"domain", e.params.domain},
                {"grid", e.params.grid},
                {"refine", e.params.refine},
                {"depth_reached", e.params.depth_reached},
                {"evaluations", e.params.evaluations}};
}

Json to_json(const KernelSpec &s)
{
    return Json{{"kind", to_string(s.kind)}, {"n", s.n}, {"truncation", s.truncation}};
}

KernelSpec kernel_spec_from_json(const Json &j)
{
    return decoding("kernel", [&] {
        KernelSpec s;
        const Json &kind = require(j, "kind");
        if (!kind.is_string()) {
            throw std::invalid_argument("kernel kind must be a string");
        }
        s.kind = parse_kernel(kind.get<std::string>());
        s.n = integer<std::size_t>(require(j, "n"), "n");
        s.truncation = integer<unsigned>(require(j, "truncation"), "truncation");
        s.validate();
        return s;
    });
}

Json to_json(const Certificate &c)
{
    return Json{{"kernel", to_json(c.kernel)},
                {"radius", c.radius},
                {"domain", "r*T^n (distinguished boundary of r * closed polydisk)"},
                {"grid", c.grid},
                {"refine_depth", c.refine_depth},
                {"max_cells", c.max_cells},
                {"depth_reached", c.depth_reached},
                {"evaluations", c.evaluations},
                {"tail_bound", c.tail_bound},
                {"lipschitz_bound", c.lipschitz_bound},
                {"curvature_bound", c.curvature_bound},
                {"third_order_bound", c.third_order_bound},
                {"rounding_bound", c.rounding_bound},
                {"min_on_grid", c.min_on_grid},
                {"slack", c.slack},
                {"margin", c.margin},
                {"argmin_angles", c.argmin_angles},
                {"verdict", to_string(c.verdict)},
                {"note", c.note}};
}

Certificate certificate_from_json(const Json &j)
{
    return decoding("certificate", [&] {
        Certificate c;
        c.kernel = kernel_spec_from_json(require(j, "kernel"));
        c.radius = number(require(j, "radius"), "radius");
        c.grid = integer<int>(require(j, "grid"), "grid");
        c.refine_depth = integer<int>(require(j, "refine_depth"), "refine_depth");
        c.max_cells = integer<std::size_t>(require(j, "max_cells"), "max_cells");
        c.depth_reached = integer<int>(require(j, "depth_reached"), "depth_reached");
        c.evaluations = integer<std::size_t>(require(j, "evaluations"), "evaluations");
        c.tail_bound = number(require(j, "tail_bound"), "tail_bound");
        c.lipschitz_bound = number(require(j, "lipschitz_bound"), "lipschitz_bound");
        c.curvature_bound = number(require(j, "curvature_bound"), "curvature_bound");
        c.third_order_bound = number(require(j, "third_order_bound"), "third_order_bound");
        c.rounding_bound = number(require(j, "rounding_bound"), "rounding_bound");
        c.min_on_grid = number(require(j, "min_on_grid"), "min_on_grid");
        c.slack = number(require(j, "slack"), "slack");
        c.margin = number(require(j, "margin"), "margin");
        for (const auto &a : require(j, "argmin_angles")) {
            c.argmin_angles.push_back(number(a, "angle"));
        }
        const Json &v = require(j, "verdict");
        if (v == "Certified") {
            c.verdict = Verdict::Certified;
        } else if (v == "NotCertified") {
            c.verdict = Verdict::NotCertified;
        } else {
            throw std::invalid_argument("verdict must be Certified or NotCertified");
        }
        if (j.contains("note")) {
            c.note = j["note"].get<std::string>();
        }
        return c;
    });
}

Json to_json(const ConstantReport &r)
{
    Json certs = Json::array();
    for (const auto &c : r.certificates) {
        certs.push_back(to_json(c));
    }
    return Json{{"n", r.n},
                {"kind", to_string(r.kind)},
                {"value", r.value},
                {"terms", pairs_to_json(r.terms)},
                {"details", pairs_to_json(r.details)},
                {"certificates", certs}};
}

Json to_json(const RatioRecord &r)
{
    return Json{{"experiment", r.experiment},
                {"trial", r.trial},
                {"lhs", r.lhs},
                {"rhs", r.rhs},
                {"rhs_kind", r.rhs_kind},
                {"factor", r.factor},
                {"ratio", r.ratio},
                {"violated", r.violated},
                {"control", r.control},
                {"poly", to_json(r.poly)},
                {"tuple", tuple_to_json(r.tuple)}};
}

Json to_json(const ExperimentConfig &c)
{
    Json j{{"experiment", to_string(c.experiment)},
           {"n", c.n},
           {"dim", c.dim},
           {"degree", c.degree},
           {"trials", c.trials},
           {"seed", c.seed},
           {"constraint", to_string(c.constraint)},
           {"distribution", to_string(c.distribution)},
           {"norm_grid", c.norm_grid},
           {"norm_refine", c.norm_refine},
           {"iterations", c.iterations},
           {"radii", c.radii}};
    if (c.fixed) {
        j["poly"] = to_json(*c.fixed);
    }
    return j;
}

ExperimentConfig experiment_config_from_json(const Json &j)
{
    return decoding("experiment config", [&] {
        if (!j.is_object()) {
            throw std::invalid_argument("experiment config must be an object");
        }
        ExperimentConfig c;
        c.experiment = parse_experiment(require(j, "experiment").get<std::string>());
        if (j.contains("n")) {
            c.n = integer<std::size_t>(j["n"], "n");
        }
        if (j.contains("dim")) {
            c.dim = integer<int>(j["dim"], "dim");
        }
        if (j.contains("degree")) {
            c.degree = integer<unsigned>(j["degree"], "degree");
        }
        if (j.contains("trials")) {
            c.trials = integer<std::size_t>(j["trials"], "trials");
        }
        if (j.contains("seed")) {
            c.seed = integer<std::uint64_t>(j["seed"], "seed");
        }
        if (j.contains("constraint")) {
            c.constraint = parse_constraint(j["constraint"].get<std::string>());
        }
        if (j.contains("distribution")) {
            c.distribution = parse_distribution(j["distribution"].get<std::string>());
        }
        if (j.contains("norm_grid")) {
            c.norm_grid = integer<int>(j["norm_grid"], "norm_grid");
        }
        if (j.contains("norm_refine")) {
            c.norm_refine = integer<int>(j["norm_refine"], "norm_refine");
        }
        if (j.contains("iterations")) {
            c.iterations = integer<std::size_t>(j["iterations"], "iterations");
        }
        if (j.contains("radii")) {
            for (const auto &r : j["radii"]) {
                c.radii.push_back(number(r, "radius"));
            }
        }
        if (j.contains("poly")) {
            c.fixed = poly_from_json(j["poly"]);
        }
        c.validate();
        return c;
    });
}

Json to_json(const Example7Report &r)
{
    return Json{{"poly", to_json(r.p)},
                {"tuple", to_json(r.tuple)},
                {"difference_squared", to_json(r.difference_squared)},
                {"symm", to_json(r.symm)},
                {"norm", r.norm},
                {"spectral_radius", r.spectral_radius},
                {"witness", Json{{"z", Json::array({1.0, -1.0})}, {"re", r.witness_value.real()},
                                 {"im", r.witness_value.imag()}}},
                {"poly_norm", to_json(r.poly_norm)}};
}

Json parse_json(const std::string &text)
{
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error &e) {
        throw std::invalid_argument(std::string("invalid JSON: ") + e.what());
    }
}

} // namespace symcalc
