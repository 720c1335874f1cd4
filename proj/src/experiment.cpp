#include "dtn/experiment.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>
#include <variant>

#include "dtn/approximant.hpp"
#include "dtn/error.hpp"
#include "dtn/io.hpp"
#include "dtn/semigroup.hpp"
#include "dtn/transport.hpp"

namespace dtn {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

// ---------------------------------------------------------------- parsing --

std::string join_path(const std::string& where, const std::string& key) {
    return where.empty() ? key : where + "." + key;
}

void check_keys(const json& obj, const std::string& where,
                std::initializer_list<const char*> allowed) {
    for (const auto& item : obj.items()) {
        bool known = false;
        for (const char* k : allowed)
            if (item.key() == k) { known = true; break; }
        if (!known)
            throw Error(ErrorKind::config, (where.empty() ? std::string("config") : where) +
                                               ": unknown key '" + item.key() + "'");
    }
}

double as_num(const json& v, const std::string& path) {
    if (!v.is_number()) throw Error(ErrorKind::config, path + ": expected a number");
    return v.get<double>();
}

int as_int(const json& v, const std::string& path) {
    if (!v.is_number_integer()) throw Error(ErrorKind::config, path + ": expected an integer");
    return v.get<int>();
}

bool as_bool(const json& v, const std::string& path) {
    if (!v.is_boolean()) throw Error(ErrorKind::config, path + ": expected true or false");
    return v.get<bool>();
}

std::string as_str(const json& v, const std::string& path) {
    if (!v.is_string()) throw Error(ErrorKind::config, path + ": expected a string");
    return v.get<std::string>();
}

std::vector<double> as_num_list(const json& v, const std::string& path) {
    if (!v.is_array()) throw Error(ErrorKind::config, path + ": expected a list of numbers");
    std::vector<double> out;
    for (const auto& e : v) out.push_back(as_num(e, path));
    for (double x : out)
        if (!std::isfinite(x)) throw Error(ErrorKind::config, path + ": entries must be finite");
    return out;
}

std::vector<int> as_int_list(const json& v, const std::string& path) {
    if (!v.is_array()) throw Error(ErrorKind::config, path + ": expected a list of integers");
    std::vector<int> out;
    for (const auto& e : v) out.push_back(as_int(e, path));
    return out;
}

// Reads keys out of one JSON block, recording any default taken.
struct Scope {
    const json& obj;
    std::string where;
    std::vector<std::string>& defaulted;

    std::string path(const char* key) const { return join_path(where, key); }
    bool has(const char* key) const { return obj.contains(key); }
    const json& req(const char* key) const {
        if (!obj.contains(key))
            throw Error(ErrorKind::config, path(key) + ": required key is missing");
        return obj.at(key);
    }
    double num(const char* key, double dflt) {
        if (has(key)) return as_num(obj.at(key), path(key));
        defaulted.push_back(path(key));
        return dflt;
    }
    int integer(const char* key, int dflt) {
        if (has(key)) return as_int(obj.at(key), path(key));
        defaulted.push_back(path(key));
        return dflt;
    }
    bool boolean(const char* key, bool dflt) {
        if (has(key)) return as_bool(obj.at(key), path(key));
        defaulted.push_back(path(key));
        return dflt;
    }
    std::string str(const char* key, const std::string& dflt) {
        if (has(key)) return as_str(obj.at(key), path(key));
        defaulted.push_back(path(key));
        return dflt;
    }
};

Domain parse_domain(const json& obj, std::vector<std::string>& defaulted) {
    if (!obj.is_object()) throw Error(ErrorKind::config, "domain: expected an object");
    Scope sc{obj, "domain", defaulted};
    const std::string kind = as_str(sc.req("kind"), "domain.kind");

    if (kind == "circle" || kind == "sphere") {
        check_keys(obj, "domain", {"kind", "R"});
        double R = sc.num("R", 1.0);
        if (!(R > 0.0)) throw Error(ErrorKind::config, "domain.R: must be positive");
        if (kind == "circle") return Circle{R};
        return Sphere{R};
    }
    if (kind == "star2d") {
        check_keys(obj, "domain", {"kind", "rho_coeffs"});
        auto coeffs = as_num_list(sc.req("rho_coeffs"), "domain.rho_coeffs");
        if (coeffs.empty())
            throw Error(ErrorKind::config, "domain.rho_coeffs: must be nonempty");
        return StarShaped2D{coeffs};
    }
    if (kind == "annulus") {
        check_keys(obj, "domain", {"kind", "R", "R_outer"});
        double R = sc.num("R", 1.0);
        double R0 = sc.num("R_outer", 2.0);
        if (!(R > 0.0)) throw Error(ErrorKind::config, "domain.R: must be positive");
        if (!(R < R0)) {
            char msg[128];
            std::snprintf(msg, sizeof(msg),
                          "domain: annulus needs R < R_outer (got R=%g, R_outer=%g)", R, R0);
            throw Error(ErrorKind::config, msg);
        }
        return Annulus{R, R0};
    }
    throw Error(ErrorKind::config, "domain.kind: unknown variant '" + kind + "'");
}

ConductivityField parse_gamma(const json& obj, std::vector<std::string>& defaulted) {
    if (!obj.is_object()) throw Error(ErrorKind::config, "gamma: expected an object");
    Scope sc{obj, "gamma", defaulted};
    const std::string kind = as_str(sc.req("kind"), "gamma.kind");

    if (kind == "identity") {
        check_keys(obj, "gamma", {"kind"});
        return identity_conductivity();
    }
    if (kind == "const_diag") {
        check_keys(obj, "gamma", {"kind", "d"});
        auto d = as_num_list(sc.req("d"), "gamma.d");
        if (d.size() != 2 && d.size() != 3)
            throw Error(ErrorKind::config, "gamma.d: expected 2 or 3 diagonal entries");
        for (double g : d)
            if (!(g > 0.0))
                throw Error(ErrorKind::config, "gamma.d: entries must be positive");
        return diagonal_conductivity(d[0], d[1], d.size() == 3 ? d[2] : 1.0);
    }
    if (kind == "radial_scalar") {
        check_keys(obj, "gamma", {"kind", "expr_coeffs"});
        auto c = as_num_list(sc.req("expr_coeffs"), "gamma.expr_coeffs");
        if (c.size() != 2)
            throw Error(ErrorKind::config,
                        "gamma.expr_coeffs: expected [base, quadratic], two entries");
        if (!(c[0] > 0.0))
            throw Error(ErrorKind::config, "gamma.expr_coeffs: base must be positive");
        return radial_scalar_conductivity(c[0], c[1]);
    }
    if (kind == "anisotropic_demo") {
        check_keys(obj, "gamma", {"kind", "eps"});
        return anisotropic_conductivity(as_num(sc.req("eps"), "gamma.eps"));
    }
    throw Error(ErrorKind::config, "gamma.kind: unknown variant '" + kind + "'");
}

TransportConfig parse_transport(const json* obj, const std::vector<double>* top_mu,
                                std::vector<std::string>& defaulted) {
    TransportConfig tc;
    bool have_list = false;
    if (obj) {
        if (!obj->is_object()) throw Error(ErrorKind::config, "transport: expected an object");
        check_keys(*obj, "transport", {"R", "R_outer", "D", "C0", "W_list", "mu_list", "shell"});
        Scope sc{*obj, "transport", defaulted};
        tc.R = sc.num("R", 1.0);
        tc.R0 = sc.num("R_outer", 2.0);
        tc.D = sc.num("D", 1.0);
        tc.C0 = sc.num("C0", 1.0);
        tc.shell = sc.boolean("shell", false);
        if (!(tc.R > 0.0)) throw Error(ErrorKind::config, "transport.R: must be positive");
        if (!(tc.R < tc.R0)) {
            char msg[128];
            std::snprintf(msg, sizeof(msg),
                          "transport: needs R < R_outer (got R=%g, R_outer=%g)", tc.R, tc.R0);
            throw Error(ErrorKind::config, msg);
        }
        if (!(tc.D > 0.0) || !(tc.C0 > 0.0))
            throw Error(ErrorKind::config, "transport: D and C0 must be positive");
        const bool has_w = sc.has("W_list"), has_mu = sc.has("mu_list");
        if (has_w && has_mu)
            throw Error(ErrorKind::config, "transport: give either W_list or mu_list, not both");
        if (has_mu && top_mu)
            throw Error(ErrorKind::config,
                        "mu_list: given both at top level and inside transport");
        if (has_w) {
            for (double w : as_num_list(obj->at("W_list"), "transport.W_list")) {
                if (!(w > 0.0))
                    throw Error(ErrorKind::config, "transport.W_list: entries must be positive");
                tc.mu_list.push_back(tc.D / w);
            }
            have_list = true;
        } else if (has_mu) {
            tc.mu_list = as_num_list(obj->at("mu_list"), "transport.mu_list");
            have_list = true;
        }
    } else {
        defaulted.push_back("transport");
        tc = TransportConfig{};
    }
    if (!have_list && top_mu) {
        tc.mu_list = *top_mu;
        have_list = true;
    }
    if (!have_list) {
        defaulted.push_back("transport.mu_list");
        for (int i = 0; i < 20; ++i) tc.mu_list.push_back(0.25 * i);
    }
    for (double mu : tc.mu_list)
        if (!(mu >= 0.0))
            throw Error(ErrorKind::config, "transport.mu_list: entries must be >= 0");
    return tc;
}

const std::vector<std::string> kExperiments = {
    "spectrum", "weyl",     "localization",     "semigroup",
    "lax",      "chernoff", "trace_conjecture", "flux",
};

bool wants(const std::vector<std::string>& v, const std::string& s) {
    for (const auto& e : v)
        if (e == s) return true;
    return false;
}

// Experiment preconditions checked without running anything expensive.
void semantic_validate(const ExperimentConfig& cfg) {
    const std::string& ex = cfg.experiment;
    if (!wants(kExperiments, ex))
        throw Error(ErrorKind::config, "experiment: unknown experiment '" + ex + "'");

    const bool is_annulus = std::holds_alternative<Annulus>(cfg.domain);
    const bool is_round = std::holds_alternative<Circle>(cfg.domain) ||
                          std::holds_alternative<Sphere>(cfg.domain);
    const bool is_sphere = std::holds_alternative<Sphere>(cfg.domain);

    if (ex != "flux") {
        // cheap hypothesis check; a bad field is a configuration problem
        try {
            validate_ellipticity(cfg.gamma, cfg.domain, 12);
        } catch (const Error& e) {
            throw Error(ErrorKind::config, std::string("gamma: ") + e.what());
        }
        if ((is_annulus || is_sphere) && !cfg.gamma.is_constant_scalar)
            throw Error(ErrorKind::unsupported,
                        domain_tag(cfg.domain) + " supports constant scalar gamma only");
    }

    if (ex == "semigroup" || ex == "lax" || ex == "chernoff" || ex == "trace_conjecture") {
        if (cfg.t_list.empty())
            throw Error(ErrorKind::config, "t_list: must be nonempty for '" + ex + "'");
        for (double t : cfg.t_list)
            if (!(t >= 0.0))
                throw Error(ErrorKind::config, "t_list: entries must be >= 0");
    }
    if (ex == "lax") {
        if (!cfg.gamma.is_identity || !is_round)
            throw Error(ErrorKind::unsupported,
                        "lax needs gamma = identity on the circle or sphere");
    }
    if (ex == "chernoff" || ex == "trace_conjecture") {
        if (is_annulus)
            throw Error(ErrorKind::unsupported,
                        "approximant products need interior balls; the annulus has none");
        if (cfg.n_list.empty())
            throw Error(ErrorKind::config, "n_list: must be nonempty for '" + ex + "'");
        for (int n : cfg.n_list)
            if (n < 2) throw Error(ErrorKind::config, "n_list: entries must be >= 2");
        for (double t : cfg.t_list)
            if (!(t > 0.0))
                throw Error(ErrorKind::config, "t_list: entries must be positive for '" + ex + "'");
        if (!(cfg.approx_s > 0.0) || cfg.approx_s > 1.0)
            throw Error(ErrorKind::config, "approx.s: must lie in (0, 1]");
    }
    if (ex == "localization") {
        if (!is_round || !cfg.gamma.is_constant_scalar)
            throw Error(ErrorKind::unsupported,
                        "localization needs the circle or sphere with constant scalar gamma");
        if (cfg.k_list.empty())
            throw Error(ErrorKind::config, "k_list: must be nonempty for 'localization'");
        for (int k : cfg.k_list)
            if (k < 0) throw Error(ErrorKind::config, "k_list: entries must be >= 0");
        if (cfg.radius_fractions.empty())
            throw Error(ErrorKind::config, "radius_fractions: must be nonempty");
        for (double s : cfg.radius_fractions)
            if (!(s > 0.0) || s > 1.0)
                throw Error(ErrorKind::config, "radius_fractions: entries must lie in (0, 1]");
    }
    if (ex == "weyl") {
        if ((cfg.weyl_k_lo == 0) != (cfg.weyl_k_hi == 0))
            throw Error(ErrorKind::config, "weyl: give both k_lo and k_hi, or neither");
        if (cfg.weyl_k_lo > 0 && cfg.weyl_k_lo + 7 > cfg.weyl_k_hi)
            throw Error(ErrorKind::config, "weyl: window must span at least 8 eigenvalues");
    }
    if (ex == "flux" && cfg.transport.mu_list.empty())
        throw Error(ErrorKind::config, "transport.mu_list: must be nonempty for 'flux'");
}

// ---------------------------------------------------------------- running --

GridPtr build_grid(const ExperimentConfig& cfg) {
    return make_grid(discretize_boundary(cfg.domain, cfg.resolution));
}

std::string fmt_g(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

void run_spectrum(const ExperimentConfig& cfg, const fs::path& dir,
                  std::vector<std::string>& files, json& results, std::string& summary) {
    auto op = assemble_dtn(build_grid(cfg), cfg.gamma, cfg.lift);
    auto spec = spectrum(op);
    const int m = spec.size();

    const double scale = std::max(1.0, std::abs(spec.eigenvalues[m - 1]));
    const double group_tol = 1e-6 * scale;
    results["tolerances"]["multiplicity_group"] = group_tol;

    std::vector<std::vector<double>> rows;
    int group = 0;
    for (int k = 0; k < m; ++k) {
        if (k > 0 && spec.eigenvalues[k] - spec.eigenvalues[k - 1] > group_tol) ++group;
        rows.push_back({double(k), spec.eigenvalues[k], double(group)});
    }
    io::write_csv(dir / "spectrum.csv",
                  {{"k", "eigenvalue index, ascending"},
                   {"lambda", "DtN eigenvalue"},
                   {"multiplicity_group", "cluster id; equal within group_tol"}},
                  rows);
    files.push_back("spectrum.csv");

    std::vector<double> lam(spec.eigenvalues.data(), spec.eigenvalues.data() + m);
    io::write_text_atomic(dir / "spectrum.svg",
                          io::svg_staircase(lam, "DtN eigenvalue staircase, " +
                                                     domain_tag(cfg.domain)));
    files.push_back("spectrum.svg");

    if (cfg.export_matrix) {
        std::ostringstream body;
        for (int j = 0; j < m; ++j) body << "c" << j << (j + 1 < m ? "," : "\n");
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                char buf[40];
                std::snprintf(buf, sizeof(buf), "%.17g", op.entries(i, j));
                body << buf << (j + 1 < m ? "," : "\n");
            }
        io::write_text_atomic(dir / "matrix.csv", body.str());
        json sidecar;
        sidecar["file"] = "matrix.csv";
        sidecar["rows"] = m;
        sidecar["layout"] = "dense, row-major, orthonormal boundary basis";
        sidecar["domain"] = domain_tag(cfg.domain);
        sidecar["resolution"] = cfg.resolution;
        sidecar["gamma"] = cfg.gamma.tag;
        io::write_text_atomic(dir / "matrix.csv.json", sidecar.dump(2) + "\n");
        files.push_back("matrix.csv");
    }

    results["size"] = m;
    results["lambda_min"] = spec.eigenvalues[0];
    results["lambda_max"] = spec.eigenvalues[m - 1];
    summary = "spectrum: " + std::to_string(m) + " eigenvalues in [" +
              fmt_g(spec.eigenvalues[0]) + ", " + fmt_g(spec.eigenvalues[m - 1]) + "]";
}

void run_weyl(const ExperimentConfig& cfg, const fs::path& dir,
              std::vector<std::string>& files, json& results, std::string& summary) {
    auto spec = spectrum(assemble_dtn(build_grid(cfg), cfg.gamma, cfg.lift));
    const int m = spec.size();

    int k_lo = cfg.weyl_k_lo, k_hi = cfg.weyl_k_hi;
    if (k_lo == 0) {
        int first_pos = 0;
        while (first_pos < m && spec.eigenvalues[first_pos] <= 0.0) ++first_pos;
        k_lo = first_pos + 1 + (m - first_pos) / 2;  // upper half of the positive part
        k_hi = m;
    }
    auto fit = weyl_fit(spec, k_lo, k_hi);

    std::vector<std::vector<double>> rows;
    for (int k = k_lo; k <= k_hi; ++k) {
        double predicted = std::pow(k / fit.c_estimate, fit.exponent);
        rows.push_back({double(k), spec.eigenvalues[k - 1], predicted});
    }
    io::write_csv(dir / "weyl.csv",
                  {{"k", "1-based eigenvalue index"},
                   {"lambda", "DtN eigenvalue"},
                   {"lambda_fit", "power-law fit (k/C)^p"}},
                  rows);
    files.push_back("weyl.csv");

    results["exponent"] = fit.exponent;
    results["c_estimate"] = fit.c_estimate;
    results["residual"] = fit.residual;
    results["k_lo"] = k_lo;
    results["k_hi"] = k_hi;
    summary = "weyl: lambda_k ~ (k/" + fmt_g(fit.c_estimate) + ")^" + fmt_g(fit.exponent) +
              ", rms residual " + fmt_g(fit.residual);
}

void run_localization(const ExperimentConfig& cfg, const fs::path& dir,
                      std::vector<std::string>& files, json& results, std::string& summary) {
    auto spec = spectrum(assemble_dtn(build_grid(cfg), cfg.gamma, cfg.lift));
    std::vector<std::vector<double>> rows;
    for (int k : cfg.k_list) {
        if (k >= spec.size())
            throw Error(ErrorKind::config, "k_list: index " + std::to_string(k) +
                                               " is beyond the spectrum");
        auto peaks = localization_profile(spec, cfg.gamma, k, cfg.radius_fractions);
        for (size_t i = 0; i < peaks.size(); ++i)
            rows.push_back({double(k), cfg.radius_fractions[i], peaks[i]});
    }
    io::write_csv(dir / "localization.csv",
                  {{"mode_index", "eigenvalue index, ascending order"},
                   {"radius_fraction", "sampling radius as a fraction of R"},
                   {"peak", "max |harmonic extension| on that radius"}},
                  rows);
    files.push_back("localization.csv");
    results["modes"] = cfg.k_list.size();
    summary = "localization: " + std::to_string(cfg.k_list.size()) + " modes sampled at " +
              std::to_string(cfg.radius_fractions.size()) + " radii";
}

void run_semigroup(const ExperimentConfig& cfg, const fs::path& dir,
                   std::vector<std::string>& files, json& results, std::string& summary) {
    auto spec = spectrum(assemble_dtn(build_grid(cfg), cfg.gamma, cfg.lift));
    const int m = spec.size();

    std::vector<std::vector<double>> mult_rows, trace_rows;
    for (double t : cfg.t_list) {
        for (int j = 0; j < m; ++j)
            mult_rows.push_back({t, double(j), std::exp(-t * spec.eigenvalues[j])});
        if (t > 0.0) {
            auto tn = trace_norm(spec, t);
            trace_rows.push_back({t, tn.value, tn.tail_bound});
        }
    }
    io::write_csv(dir / "semigroup.csv",
                  {{"t", "time"},
                   {"mode_index", "spectral mode"},
                   {"multiplier", "exp(-t lambda_k)"}},
                  mult_rows);
    files.push_back("semigroup.csv");
    io::write_csv(dir / "trace.csv",
                  {{"t", "time"},
                   {"trace_norm", "sum of exp(-t lambda_k) over the computed spectrum"},
                   {"tail_bound", "Weyl-law estimate of the truncated remainder"}},
                  trace_rows);
    files.push_back("trace.csv");

    results["modes"] = m;
    summary = "semigroup: " + std::to_string(cfg.t_list.size()) + " times, " +
              std::to_string(m) + " modes";
}

void run_lax(const ExperimentConfig& cfg, const fs::path& dir,
             std::vector<std::string>& files, json& results, std::string& summary) {
    auto grid = build_grid(cfg);
    auto spec = spectrum(assemble_dtn(grid, cfg.gamma, cfg.lift));
    const int band = std::min(8, grid->max_degree);

    double worst = 0.0;
    std::vector<std::vector<double>> rows;
    for (double t : cfg.t_list) {
        for (int i = 0; i < 5; ++i) {
            auto f = BoundaryFunction::random_bandlimited(grid, band, 1.0, cfg.seed + i);
            auto via_flow = lax_apply(f, t);
            auto via_modes = evolve(spec, t, f);
            double err = (via_flow.coeffs - via_modes.coeffs).norm();
            worst = std::max(worst, err);
            rows.push_back({t, double(cfg.seed + i), err});
        }
    }
    io::write_csv(dir / "lax.csv",
                  {{"t", "time"},
                   {"seed", "random test function seed"},
                   {"err", "L2 gap between the dilation flow and the spectral semigroup"}},
                  rows);
    files.push_back("lax.csv");
    results["max_err"] = worst;
    summary = "lax: max flow-vs-spectral gap " + fmt_g(worst);
}

struct ProductRun {
    std::vector<std::vector<ChernoffEntry>> reports;  // one per t
    DtNSpectrum spec;
};

ProductRun product_run(const ExperimentConfig& cfg) {
    auto grid = build_grid(cfg);
    auto basis = std::make_shared<LiftedBasis>(grid, cfg.gamma, cfg.lift);
    ApproximantFamily fam(basis, cfg.approx_s);
    ProductRun out{{}, spectrum(assemble_dtn(*basis))};
    for (double t : cfg.t_list)
        out.reports.push_back(convergence_report(fam, out.spec, t, cfg.n_list));
    return out;
}

void run_chernoff(const ExperimentConfig& cfg, const fs::path& dir,
                  std::vector<std::string>& files, json& results, std::string& summary) {
    auto run = product_run(cfg);

    std::vector<std::vector<double>> rows;
    for (size_t i = 0; i < cfg.t_list.size(); ++i)
        for (const auto& e : run.reports[i])
            rows.push_back({cfg.t_list[i], double(e.n), e.op_err, e.trace_err, e.term1,
                            e.term2});
    io::write_csv(dir / "chernoff.csv",
                  {{"t", "time"},
                   {"n", "product length"},
                   {"op_err", "operator-norm error of the n-fold product"},
                   {"tr_err", "trace-norm error of the n-fold product"},
                   {"bound_term1", "||V^m||_1 ||V^k - U(kt/n)||"},
                   {"bound_term2", "||V^m - U(mt/n)|| ||U(kt/n)||_1"}},
                  rows);
    files.push_back("chernoff.csv");

    io::Series op_s{"op_err", {}, {}}, tr_s{"tr_err", {}, {}};
    for (const auto& e : run.reports[0]) {
        op_s.x.push_back(e.n);
        op_s.y.push_back(e.op_err);
        tr_s.x.push_back(e.n);
        tr_s.y.push_back(e.trace_err);
    }
    io::write_text_atomic(dir / "chernoff.svg",
                          io::svg_loglog({op_s, tr_s},
                                         "Product approximant error, t = " +
                                             fmt_g(cfg.t_list[0]),
                                         "n", "error"));
    files.push_back("chernoff.svg");

    double final_err = run.reports[0].back().op_err;
    results["final_op_err"] = final_err;
    results["final_n"] = run.reports[0].back().n;
    summary = "chernoff: op err " + fmt_g(final_err) + " at n=" +
              std::to_string(run.reports[0].back().n) + ", t=" + fmt_g(cfg.t_list[0]);
}

void run_trace_conjecture(const ExperimentConfig& cfg, const fs::path& dir,
                          std::vector<std::string>& files, json& results,
                          std::string& summary) {
    auto run = product_run(cfg);

    double gmin = 1e300, gmax = -1e300;
    std::vector<std::vector<double>> rows;
    for (size_t i = 0; i < cfg.t_list.size(); ++i)
        for (const auto& e : run.reports[i]) {
            rows.push_back({cfg.t_list[i], double(e.n), e.trace_err, e.term1 + e.term2,
                            e.ginibre_ratio});
            gmin = std::min(gmin, e.ginibre_ratio);
            gmax = std::max(gmax, e.ginibre_ratio);
        }
    io::write_csv(dir / "trace_conjecture.csv",
                  {{"t", "time"},
                   {"n", "product length"},
                   {"tr_err", "trace-norm error of the n-fold product"},
                   {"bound_sum", "telescopic Hoelder bound dominating tr_err"},
                   {"ginibre_ratio", "||V^m||_1 / ||U(mt/n)||_1, reported not asserted"}},
                  rows);
    files.push_back("trace_conjecture.csv");

    io::Series tr_s{"tr_err", {}, {}}, bd_s{"bound_sum", {}, {}};
    for (const auto& e : run.reports[0]) {
        tr_s.x.push_back(e.n);
        tr_s.y.push_back(e.trace_err);
        bd_s.x.push_back(e.n);
        bd_s.y.push_back(e.term1 + e.term2);
    }
    io::write_text_atomic(dir / "trace_conjecture.svg",
                          io::svg_loglog({tr_s, bd_s},
                                         "Trace-norm convergence, t = " + fmt_g(cfg.t_list[0]),
                                         "n", "error"));
    files.push_back("trace_conjecture.svg");

    results["ginibre_ratio_min"] = gmin;
    results["ginibre_ratio_max"] = gmax;
    results["final_tr_err"] = run.reports[0].back().trace_err;
    summary = "trace_conjecture: tr err " + fmt_g(run.reports[0].back().trace_err) +
              " at n=" + std::to_string(run.reports[0].back().n) + ", ginibre ratio in [" +
              fmt_g(gmin) + ", " + fmt_g(gmax) + "]";
}

void run_flux(const ExperimentConfig& cfg, const fs::path& dir,
              std::vector<std::string>& files, json& results, std::string& summary) {
    const auto& tc = cfg.transport;
    DtNMatrix op;
    if (tc.shell) {
        auto grid = make_grid(discretize_boundary(Sphere{tc.R}, cfg.resolution));
        op = shell_dtn(grid, tc.R0);
    } else {
        auto grid = make_grid(discretize_boundary(Annulus{tc.R, tc.R0}, cfg.resolution));
        op = annulus_dtn(grid);
    }
    auto one = BoundaryFunction::constant(op.grid, 1.0);

    std::vector<std::vector<double>> rows;
    std::vector<double> mus, phis;
    for (double mu : tc.mu_list) {
        auto u = membrane_solve(op, mu);
        auto phi = BoundaryFunction::from_coeffs(op.grid,
                                                 tc.D * tc.C0 * (op.entries * u.coeffs));
        double Phi = inner_product(phi, one);
        rows.push_back({mu, Phi, u.values.minCoeff(), u.values.maxCoeff()});
        mus.push_back(mu);
        phis.push_back(Phi);
    }
    io::write_csv(dir / "flux.csv",
                  {{"mu", "membrane resistance D/W"},
                   {"Phi", "total flux through the membrane"},
                   {"u_min", "min membrane concentration"},
                   {"u_max", "max membrane concentration"}},
                  rows);
    files.push_back("flux.csv");
    io::write_text_atomic(dir / "flux.svg",
                          io::svg_curve(mus, phis, "Total flux vs membrane resistance", "mu",
                                        "Phi"));
    files.push_back("flux.svg");

    results["Phi_first"] = phis.front();
    results["Phi_last"] = phis.back();
    summary = "flux: Phi from " + fmt_g(phis.front()) + " to " + fmt_g(phis.back()) + " over " +
              std::to_string(mus.size()) + " resistances";
}

std::string iso_timestamp() {
    std::time_t now = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    return buf;
}

}  // namespace

ExperimentConfig parse_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::config, "cannot open config file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();

    json root;
    try {
        root = json::parse(buf.str());
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::config, path.string() + ": " + e.what());
    }
    if (!root.is_object()) throw Error(ErrorKind::config, "config: expected a JSON object");

    check_keys(root, "",
               {"experiment", "domain", "gamma", "resolution", "t_list", "n_list", "mu_list",
                "k_list", "radius_fractions", "weyl", "approx", "solver", "transport",
                "output_dir", "seed", "export_matrix"});

    ExperimentConfig cfg;
    cfg.raw_text = buf.str();
    Scope sc{root, "", cfg.defaulted};

    cfg.experiment = as_str(sc.req("experiment"), "experiment");
    if (!wants(kExperiments, cfg.experiment))
        throw Error(ErrorKind::config, "experiment: unknown experiment '" + cfg.experiment + "'");

    if (sc.has("domain")) {
        cfg.domain = parse_domain(root.at("domain"), cfg.defaulted);
    } else {
        cfg.defaulted.push_back("domain");
        cfg.domain = Circle{1.0};
    }
    if (sc.has("gamma")) {
        cfg.gamma = parse_gamma(root.at("gamma"), cfg.defaulted);
    } else {
        cfg.defaulted.push_back("gamma");
        cfg.gamma = identity_conductivity();
    }

    cfg.resolution = sc.integer("resolution", 32);
    if (cfg.resolution < 4) throw Error(ErrorKind::config, "resolution: must be at least 4");
    const bool is_sphere = std::holds_alternative<Sphere>(cfg.domain);
    if (cfg.resolution > (is_sphere ? 64 : 2048))
        throw Error(ErrorKind::config, "resolution: exceeds the dense-spectrum cap");

    if (sc.has("t_list")) {
        cfg.t_list = as_num_list(root.at("t_list"), "t_list");
    } else {
        cfg.defaulted.push_back("t_list");
        cfg.t_list = {0.5};
    }
    if (sc.has("n_list")) {
        cfg.n_list = as_int_list(root.at("n_list"), "n_list");
    } else {
        cfg.defaulted.push_back("n_list");
        cfg.n_list = {8, 16, 32, 64};
    }
    if (sc.has("k_list")) {
        cfg.k_list = as_int_list(root.at("k_list"), "k_list");
    } else {
        cfg.defaulted.push_back("k_list");
        cfg.k_list = {1, 2, 3, 4, 5, 6};
    }
    if (sc.has("radius_fractions")) {
        cfg.radius_fractions = as_num_list(root.at("radius_fractions"), "radius_fractions");
    } else {
        cfg.defaulted.push_back("radius_fractions");
        cfg.radius_fractions = {0.5, 0.7, 0.9, 0.99};
    }

    if (sc.has("weyl")) {
        const json& w = root.at("weyl");
        if (!w.is_object()) throw Error(ErrorKind::config, "weyl: expected an object");
        check_keys(w, "weyl", {"k_lo", "k_hi"});
        Scope ws{w, "weyl", cfg.defaulted};
        cfg.weyl_k_lo = ws.integer("k_lo", 0);
        cfg.weyl_k_hi = ws.integer("k_hi", 0);
        if (cfg.weyl_k_lo < 0 || cfg.weyl_k_hi < 0)
            throw Error(ErrorKind::config, "weyl: window indices must be positive");
    } else {
        cfg.defaulted.push_back("weyl.k_lo");
        cfg.defaulted.push_back("weyl.k_hi");
    }

    if (sc.has("approx")) {
        const json& a = root.at("approx");
        if (!a.is_object()) throw Error(ErrorKind::config, "approx: expected an object");
        check_keys(a, "approx", {"s", "n_list", "t_list"});
        Scope as{a, "approx", cfg.defaulted};
        cfg.approx_s = as.num("s", 1.0);
        if (!(cfg.approx_s > 0.0) || cfg.approx_s > 1.0)
            throw Error(ErrorKind::config, "approx.s: must lie in (0, 1]");
        if (as.has("n_list")) cfg.n_list = as_int_list(a.at("n_list"), "approx.n_list");
        if (as.has("t_list")) cfg.t_list = as_num_list(a.at("t_list"), "approx.t_list");
    } else {
        cfg.defaulted.push_back("approx.s");
    }

    if (sc.has("solver")) {
        const json& s = root.at("solver");
        if (!s.is_object()) throw Error(ErrorKind::config, "solver: expected an object");
        check_keys(s, "solver", {"fd_resolution_factor", "direct"});
        Scope ss{s, "solver", cfg.defaulted};
        cfg.lift.fd_factor = ss.integer("fd_resolution_factor", 8);
        if (cfg.lift.fd_factor < 2)
            throw Error(ErrorKind::config, "solver.fd_resolution_factor: must be at least 2");
        if (!ss.boolean("direct", true))
            throw Error(ErrorKind::config,
                        "solver.direct: only the direct sparse factorization is implemented");
    } else {
        cfg.defaulted.push_back("solver.fd_resolution_factor");
        cfg.defaulted.push_back("solver.direct");
    }

    std::vector<double> top_mu;
    bool has_top_mu = sc.has("mu_list");
    if (has_top_mu) top_mu = as_num_list(root.at("mu_list"), "mu_list");
    cfg.transport = parse_transport(sc.has("transport") ? &root.at("transport") : nullptr,
                                    has_top_mu ? &top_mu : nullptr, cfg.defaulted);

    cfg.output_dir = sc.str("output_dir", "out");
    if (sc.has("seed")) {
        const json& s = root.at("seed");
        if (!s.is_number_integer() || s.get<long long>() < 0)
            throw Error(ErrorKind::config, "seed: expected a nonnegative integer");
        cfg.seed = s.get<std::uint64_t>();
    } else {
        cfg.defaulted.push_back("seed");
        cfg.seed = 0;
    }
    cfg.export_matrix = sc.boolean("export_matrix", false);
    return cfg;
}

ValidationReport validate_config(const fs::path& path) {
    ExperimentConfig cfg = parse_config(path);
    semantic_validate(cfg);
    return {cfg.experiment, cfg.defaulted};
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
    ExperimentReport rep;
    rep.dir = cfg.output_dir / cfg.experiment;
    std::error_code ec;
    fs::create_directories(rep.dir, ec);
    if (ec)
        throw Error(ErrorKind::config, "cannot create output directory " + rep.dir.string());

    json manifest;
    manifest["experiment"] = cfg.experiment;
    manifest["config"] = cfg.raw_text.empty() ? json::object() : json::parse(cfg.raw_text);
    manifest["defaulted"] = cfg.defaulted;
    manifest["seed"] = cfg.seed;
    manifest["versions"]["dtn"] = "0.1.0";
    {
        char eig[32];
        std::snprintf(eig, sizeof(eig), "%d.%d.%d", EIGEN_WORLD_VERSION, EIGEN_MAJOR_VERSION,
                      EIGEN_MINOR_VERSION);
        manifest["versions"]["eigen"] = eig;
        manifest["versions"]["compiler"] = __VERSION__;
    }

    const auto t0 = std::chrono::steady_clock::now();
    auto finish = [&](json results) {
        const auto t1 = std::chrono::steady_clock::now();
        manifest["wall_time_s"] = std::chrono::duration<double>(t1 - t0).count();
        manifest["timestamp"] = iso_timestamp();
        manifest["results"] = std::move(results);
        auto listed = rep.files;
        listed.push_back("manifest.json");
        manifest["files"] = listed;
        io::write_text_atomic(rep.dir / "manifest.json", manifest.dump(2) + "\n");
        rep.files.push_back("manifest.json");
    };

    json results = json::object();
    try {
        semantic_validate(cfg);
        manifest["status"] = "ok";
        if (cfg.experiment == "spectrum")
            run_spectrum(cfg, rep.dir, rep.files, results, rep.summary);
        else if (cfg.experiment == "weyl")
            run_weyl(cfg, rep.dir, rep.files, results, rep.summary);
        else if (cfg.experiment == "localization")
            run_localization(cfg, rep.dir, rep.files, results, rep.summary);
        else if (cfg.experiment == "semigroup")
            run_semigroup(cfg, rep.dir, rep.files, results, rep.summary);
        else if (cfg.experiment == "lax")
            run_lax(cfg, rep.dir, rep.files, results, rep.summary);
        else if (cfg.experiment == "chernoff")
            run_chernoff(cfg, rep.dir, rep.files, results, rep.summary);
        else if (cfg.experiment == "trace_conjecture")
            run_trace_conjecture(cfg, rep.dir, rep.files, results, rep.summary);
        else if (cfg.experiment == "flux")
            run_flux(cfg, rep.dir, rep.files, results, rep.summary);
        else
            throw Error(ErrorKind::config, "experiment: unknown experiment '" +
                                               cfg.experiment + "'");
    } catch (const std::exception& e) {
        manifest["status"] = "failed";
        manifest["error"] = e.what();
        finish(std::move(results));
        throw;
    }
    finish(std::move(results));
    return rep;
}

const std::vector<std::string>& experiment_names() { return kExperiments; }

}  // namespace dtn
