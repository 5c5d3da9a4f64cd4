// Command-line front door for the priorci library: interval computation from
// summary statistics, endpoint-spline optimization, efficiency/coverage
// tables, and Monte Carlo verification of the quadrature pipeline.
//
// Exit codes: 0 success, 2 usage/configuration, 3 convergence or verification
// failure, 4 I/O or artifact failure.

#include <CLI11.hpp>
#include <priorci/priorci.hpp>

#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace {

// Verification gate tripped (MC disagreement, optimizer non-convergence).
struct VerificationFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string fmt(const priorci::Interval& iv) {
    return "[" + fmt(iv.lower) + ", " + fmt(iv.upper) + "]";
}

// Whitespace-separated reals from a data file (the optional raw-data mode).
std::vector<double> read_data_file(const std::string& path) {
    std::istringstream in(priorci::read_text_file(path));
    std::vector<double> xs;
    std::string tok;
    while (in >> tok) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(tok, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != tok.size()) {
            throw std::domain_error("data file " + path + ": bad number '" + tok + "'");
        }
        xs.push_back(v);
    }
    if (xs.empty()) throw std::domain_error("data file " + path + ": no numbers found");
    return xs;
}

struct SampleMoments {
    double xbar = 0.0;
    double s = 0.0;  // sqrt of the (n-1)-divisor variance; 0 when n == 1
    int n = 0;
};

SampleMoments moments_of(const std::vector<double>& xs) {
    SampleMoments m;
    m.n = static_cast<int>(xs.size());
    for (double x : xs) m.xbar += x;
    m.xbar /= m.n;
    if (m.n > 1) {
        double ss = 0.0;
        for (double x : xs) ss += (x - m.xbar) * (x - m.xbar);
        m.s = std::sqrt(ss / (m.n - 1));
    }
    return m;
}

// ---------------------------------------------------------------------------
// interval-known

struct IntervalKnownOpts {
    double xbar = 0.0;
    double sigma = 1.0;
    int n = 1;
    double alpha = 0.05;
    double w = 0.1;
    std::string method = "mixed";
    std::string data_path;
};

void run_interval_known(const IntervalKnownOpts& opt) {
    double xbar = opt.xbar;
    int n = opt.n;
    if (!opt.data_path.empty()) {
        const auto m = moments_of(read_data_file(opt.data_path));
        xbar = m.xbar;
        n = m.n;
    }
    if (n < 1) throw std::domain_error("interval-known: n must be >= 1");
    if (!(opt.sigma > 0.0)) throw std::domain_error("interval-known: sigma must be positive");
    if (!(opt.alpha > 0.0 && opt.alpha < 1.0)) {
        throw std::domain_error("interval-known: alpha must be in (0,1)");
    }

    const double scale = opt.sigma / std::sqrt(static_cast<double>(n));
    const double x = xbar / scale;

    priorci::Interval theta_iv;
    bool contiguous = true;
    if (opt.method == "standard") {
        theta_iv = priorci::standard_interval(x, opt.alpha);
    } else if (opt.method == "pratt") {
        theta_iv = priorci::pratt_interval(x, opt.alpha);
    } else {
        priorci::ProblemConfig cfg;  // n is not consumed by the known-variance family
        cfg.alpha = opt.alpha;
        cfg.w = opt.w;
        const double z = priorci::normal_quantile(0.5 * opt.alpha);
        cfg.theta_grid_max = std::max(cfg.theta_grid_max, std::ceil(std::fabs(x) + z + 3.0));
        const priorci::AcceptanceFamily family(cfg);
        const auto inv = priorci::confidence_set_detailed(x, family);
        theta_iv = inv.interval;
        contiguous = inv.contiguous;
    }

    std::printf("method: %s\n", opt.method.c_str());
    std::printf("n: %d  sigma: %s  alpha: %s  w: %s\n", n, fmt(opt.sigma).c_str(),
                fmt(opt.alpha).c_str(), fmt(opt.w).c_str());
    std::printf("x = sqrt(n) xbar / sigma: %s\n", fmt(x).c_str());
    std::printf("theta-scale: %s\n", fmt(theta_iv).c_str());
    std::printf("mu-scale: %s\n", fmt(theta_iv.scaled(scale)).c_str());
    if (!contiguous) {
        std::printf("note: inverted set was not contiguous; enclosing interval reported\n");
    }
}

// ---------------------------------------------------------------------------
// interval-unknown

struct IntervalUnknownOpts {
    double xbar = 0.0;
    double s = 1.0;
    int n = 0;  // 0 = adopt from the spline file
    std::string spline_path;
    std::string data_path;
    bool n_given = false;
    bool s_given = false;
};

void run_interval_unknown(const IntervalUnknownOpts& opt) {
    const auto artifact = priorci::load_spline(opt.spline_path);
    double xbar = opt.xbar;
    double s = opt.s;
    int n = opt.n_given ? opt.n : artifact.n;
    if (!opt.data_path.empty()) {
        const auto m = moments_of(read_data_file(opt.data_path));
        xbar = m.xbar;
        s = m.s;
        n = m.n;
    } else if (!opt.s_given) {
        throw std::domain_error("interval-unknown: --s is required without --data");
    }
    if (n != artifact.n) {
        throw std::domain_error("interval-unknown: n = " + std::to_string(n) +
                                " does not match the spline file (n = " +
                                std::to_string(artifact.n) + ")");
    }

    const auto result = priorci::interval_from_data(xbar, s, n, artifact.b);
    const double y = std::sqrt(static_cast<double>(n)) * xbar / s;

    std::printf("n: %d  alpha: %s  w: %s  (from %s)\n", artifact.n, fmt(artifact.alpha).c_str(),
                fmt(artifact.w).c_str(), opt.spline_path.c_str());
    std::printf("y = sqrt(n) xbar / s: %s\n", fmt(y).c_str());
    std::printf("standard-reversion branch: %s\n", result.standard_branch ? "taken" : "not taken");
    std::printf("mu-scale: %s\n", fmt(result.interval).c_str());
}

// ---------------------------------------------------------------------------
// optimize-b

struct OptimizeOpts {
    int n = 24;
    double alpha = 0.05;
    double w = 0.1;
    double q = 8.0;
    double step = 1.0;
    std::string out_path;
};

void run_optimize(const OptimizeOpts& opt) {
    priorci::ProblemConfig cfg;
    cfg.n = opt.n;
    cfg.alpha = opt.alpha;
    cfg.w = opt.w;
    cfg.q = opt.q;
    cfg.validate();

    const auto result = priorci::optimize_b(cfg, opt.step);

    const priorci::UnknownVarianceModel model(cfg.n, cfg.alpha, cfg.w, cfg.radial_panels,
                                              cfg.quadrature_order);
    double e0 = 0.0, emax = 0.0;
    for (double th = 0.0; th <= cfg.constraint_theta_max + 1e-9; th += cfg.constraint_theta_step) {
        const double e = model.efficiency(th, result.b);
        if (th == 0.0) e0 = e;
        if (e > emax) emax = e;
    }

    priorci::RunManifest manifest;
    manifest.command = "optimize-b";
    manifest.add("n", static_cast<long long>(cfg.n));
    manifest.add("alpha", cfg.alpha);
    manifest.add("w", cfg.w);
    manifest.add("q", cfg.q);
    manifest.add("knot_step", opt.step);
    manifest.add("objective", result.objective);
    manifest.add("min_coverage", result.min_coverage);
    manifest.add("iterations", static_cast<long long>(result.iterations));
    manifest.add("converged", std::string(result.converged ? "yes" : "no"));

    priorci::SplineArtifact artifact{result.b, cfg.n, cfg.alpha, cfg.w, manifest.to_json()};
    priorci::save_spline(opt.out_path, artifact);

    std::printf("n: %d  alpha: %s  w: %s  q: %s  step: %s\n", cfg.n, fmt(cfg.alpha).c_str(),
                fmt(cfg.w).c_str(), fmt(cfg.q).c_str(), fmt(opt.step).c_str());
    std::printf("objective: %s\n", fmt(result.objective).c_str());
    std::printf("min coverage: %s\n", fmt(result.min_coverage).c_str());
    std::printf("e(0): %s\n", fmt(e0).c_str());
    std::printf("e_max: %s\n", fmt(emax).c_str());
    std::printf("converged: %s\n", result.converged ? "yes" : "no");
    std::printf("wrote: %s\n", opt.out_path.c_str());
    if (!result.converged) {
        throw VerificationFailure("optimize-b: optimizer did not converge (best iterate written)");
    }
}

// ---------------------------------------------------------------------------
// efficiency-table

struct TableOpts {
    std::string mode = "known";
    int n = 24;
    double alpha = 0.05;
    double w = 0.1;
    std::string spline_path;
    double theta_max = 12.0;
    double step = 0.25;
    std::string out_path;
    std::string family_out;
};

std::vector<double> theta_grid(double theta_max, double step) {
    if (!(step > 0.0) || !(theta_max >= 0.0)) {
        throw std::domain_error("efficiency-table: need step > 0 and theta-max >= 0");
    }
    std::vector<double> thetas;
    const long count = std::lround(theta_max / step);
    for (long k = 0; k <= count; ++k) thetas.push_back(static_cast<double>(k) * step);
    return thetas;
}

void run_table_known(const TableOpts& opt) {
    const auto thetas = theta_grid(opt.theta_max, opt.step);
    const double z = priorci::normal_quantile(0.5 * opt.alpha);

    priorci::RunManifest manifest;
    manifest.command = "efficiency-table";
    manifest.add("mode", std::string("known"));
    manifest.add("alpha", opt.alpha);
    manifest.add("w", opt.w);
    manifest.add("theta_max", opt.theta_max);
    manifest.add("step", opt.step);

    std::vector<std::vector<double>> rows(thetas.size());
    if (opt.w == 0.0) {
        // Pratt limit: closed-form expected length, no family to emit.
        if (!opt.family_out.empty()) {
            throw std::domain_error("efficiency-table: --family-out requires w > 0");
        }
        for (std::size_t i = 0; i < thetas.size(); ++i) {
            const double ratio = priorci::pratt_expected_length(thetas[i], opt.alpha) / (2.0 * z);
            rows[i] = {thetas[i], ratio * ratio};
        }
    } else {
        priorci::ProblemConfig cfg;
        cfg.alpha = opt.alpha;
        cfg.w = opt.w;
        cfg.theta_grid_max = std::max(cfg.theta_grid_max, std::ceil(opt.theta_max));
        const priorci::AcceptanceFamily family(cfg);
        priorci::parallel_for(thetas.size(), [&](std::size_t i) {
            const double ratio = priorci::expected_length(thetas[i], family) / (2.0 * z);
            rows[i] = {thetas[i], ratio * ratio};
        });
        if (!opt.family_out.empty()) {
            std::vector<std::vector<double>> frows;
            for (const auto& r : family.regions()) {
                frows.push_back({r.theta, r.lower, r.upper, r.c});
            }
            priorci::write_csv(opt.family_out, manifest, {"theta", "lower", "upper", "c"}, frows);
        }
    }

    priorci::write_csv(opt.out_path, manifest, {"theta", "efficiency"}, rows);

    double e0 = rows.front()[1], emax = 0.0;
    for (const auto& r : rows) emax = std::max(emax, r[1]);
    std::printf("mode: known\nrows: %zu\ne(0): %s\ne_max: %s\nwrote: %s\n", rows.size(),
                fmt(e0).c_str(), fmt(emax).c_str(), opt.out_path.c_str());
    if (!opt.family_out.empty()) std::printf("wrote: %s\n", opt.family_out.c_str());
}

void run_table_unknown(const TableOpts& opt, bool n_given, bool alpha_given, bool w_given) {
    const std::string text = priorci::read_text_file(opt.spline_path);
    const auto artifact = priorci::parse_spline_json(text);
    if ((n_given && opt.n != artifact.n) ||
        (alpha_given && opt.alpha != artifact.alpha) || (w_given && opt.w != artifact.w)) {
        throw std::domain_error("efficiency-table: flags disagree with the spline file");
    }

    const priorci::UnknownVarianceModel model(artifact.n, artifact.alpha, artifact.w);
    const auto thetas = theta_grid(opt.theta_max, opt.step);

    std::vector<std::vector<double>> rows(thetas.size());
    priorci::parallel_for(thetas.size(), [&](std::size_t i) {
        const double cov = model.coverage(thetas[i], artifact.b);
        const double len = model.scaled_expected_length(thetas[i], artifact.b);
        const double ratio = len / model.standard_scaled_length();
        rows[i] = {thetas[i], cov, len, ratio * ratio};
    });

    priorci::RunManifest manifest;
    manifest.command = "efficiency-table";
    manifest.add("mode", std::string("unknown"));
    manifest.add("spline", opt.spline_path);
    manifest.add("spline_sha1", priorci::git_blob_hash(text));
    manifest.add("n", static_cast<long long>(artifact.n));
    manifest.add("alpha", artifact.alpha);
    manifest.add("w", artifact.w);
    manifest.add("theta_max", opt.theta_max);
    manifest.add("step", opt.step);
    priorci::write_csv(opt.out_path, manifest,
                       {"theta", "coverage", "scaled_length", "efficiency"}, rows);

    double e0 = rows.front()[3], emax = 0.0, mincov = 1.0;
    for (const auto& r : rows) {
        emax = std::max(emax, r[3]);
        mincov = std::min(mincov, r[1]);
    }
    std::printf("mode: unknown\nrows: %zu\nmin coverage: %s\ne(0): %s\ne_max: %s\nwrote: %s\n",
                rows.size(), fmt(mincov).c_str(), fmt(e0).c_str(), fmt(emax).c_str(),
                opt.out_path.c_str());
}

// ---------------------------------------------------------------------------
// verify-mc

struct VerifyOpts {
    std::string spline_path;
    std::string method;  // standard | pratt, for the known-variance closed forms
    std::vector<double> thetas;
    long long reps = 1000000;
    std::uint64_t seed = 1;
    double alpha = 0.05;
    bool raw = false;
    std::string out_path;
};

struct VerifyRow {
    double theta;
    double quad_cov, mc_cov, cov_se;
    double quad_len, mc_len, len_se;
    bool cov_pass, len_pass;
};

void run_verify(const VerifyOpts& opt) {
    if (opt.spline_path.empty() == opt.method.empty()) {
        throw std::domain_error("verify-mc: give exactly one of --spline and --method");
    }
    const auto mode = opt.raw ? priorci::SampleMode::raw : priorci::SampleMode::sufficiency;
    std::vector<double> thetas = opt.thetas.empty()
                                     ? std::vector<double>{0.0, 1.0, 2.0, 5.0}
                                     : opt.thetas;

    priorci::RunManifest manifest;
    manifest.command = "verify-mc";
    manifest.add("reps", opt.reps);
    manifest.add("seed", static_cast<long long>(opt.seed));
    manifest.add("sampling", std::string(opt.raw ? "raw" : "sufficiency"));

    std::vector<VerifyRow> report;
    std::string rule_name;
    std::string spline_text;

    if (!opt.spline_path.empty()) {
        spline_text = priorci::read_text_file(opt.spline_path);
        const auto artifact = priorci::parse_spline_json(spline_text);
        rule_name = "spline";
        manifest.add("spline", opt.spline_path);
        manifest.add("spline_sha1", priorci::git_blob_hash(spline_text));
        manifest.add("n", static_cast<long long>(artifact.n));
        manifest.add("alpha", artifact.alpha);
        manifest.add("w", artifact.w);

        const priorci::UnknownVarianceModel model(artifact.n, artifact.alpha, artifact.w);
        const double root_n = std::sqrt(static_cast<double>(artifact.n));
        const priorci::IntervalRule rule = [&](double xbar, double s) {
            return priorci::interval_from_data(xbar, s, artifact.n, artifact.b).interval;
        };
        for (double th : thetas) {
            VerifyRow row{};
            row.theta = th;
            row.quad_cov = model.coverage(th, artifact.b);
            row.quad_len = model.scaled_expected_length(th, artifact.b);
            const double mu = th / root_n;  // sigma = 1 working scale
            const auto cov = priorci::mc_coverage(mu, 1.0, artifact.n, rule, opt.reps,
                                                  opt.seed, mode);
            const auto len = priorci::mc_expected_length(mu, 1.0, artifact.n, rule, opt.reps,
                                                         opt.seed, mode);
            row.mc_cov = cov.mean;
            row.cov_se = cov.std_error;
            row.mc_len = len.mean * root_n;  // back to the theta scale
            row.len_se = len.std_error * root_n;
            report.push_back(row);
        }
    } else {
        rule_name = opt.method;
        manifest.add("method", opt.method);
        manifest.add("alpha", opt.alpha);
        const double z = priorci::normal_quantile(opt.method == "pratt" ? opt.alpha
                                                                        : 0.5 * opt.alpha);
        const priorci::IntervalRule rule = [&](double x, double) {
            return opt.method == "pratt" ? priorci::pratt_interval(x, opt.alpha)
                                         : priorci::standard_interval(x, opt.alpha);
        };
        for (double th : thetas) {
            VerifyRow row{};
            row.theta = th;
            if (opt.method == "pratt") {
                // One draw covers unless it falls entirely on the wrong side of 0.
                row.quad_cov = th == 0.0 ? 1.0 : 1.0 - opt.alpha;
                row.quad_len = priorci::pratt_expected_length(th, opt.alpha);
            } else {
                row.quad_cov = 1.0 - opt.alpha;
                row.quad_len = 2.0 * z;
            }
            const auto cov = priorci::mc_coverage(th, 1.0, 1, rule, opt.reps, opt.seed, mode);
            const auto len = priorci::mc_expected_length(th, 1.0, 1, rule, opt.reps, opt.seed,
                                                         mode);
            row.mc_cov = cov.mean;
            row.cov_se = cov.std_error;
            row.mc_len = len.mean;
            row.len_se = len.std_error;
            report.push_back(row);
        }
    }

    bool all_pass = true;
    for (auto& row : report) {
        row.cov_pass = std::fabs(row.quad_cov - row.mc_cov) <= 3.0 * row.cov_se + 1e-12;
        row.len_pass = std::fabs(row.quad_len - row.mc_len) <= 3.0 * row.len_se + 1e-12;
        all_pass = all_pass && row.cov_pass && row.len_pass;
        std::printf("theta %s: coverage quad %s mc %s se %s %s\n", fmt(row.theta).c_str(),
                    fmt(row.quad_cov).c_str(), fmt(row.mc_cov).c_str(), fmt(row.cov_se).c_str(),
                    row.cov_pass ? "pass" : "FAIL");
        std::printf("theta %s: length   quad %s mc %s se %s %s\n", fmt(row.theta).c_str(),
                    fmt(row.quad_len).c_str(), fmt(row.mc_len).c_str(), fmt(row.len_se).c_str(),
                    row.len_pass ? "pass" : "FAIL");
    }
    std::printf("rule: %s\nverdict: %s\n", rule_name.c_str(), all_pass ? "PASS" : "FAIL");

    if (!opt.out_path.empty()) {
        nlohmann::ordered_json j;
        j["manifest"] = manifest.to_json();
        j["results"] = nlohmann::ordered_json::array();
        for (const auto& row : report) {
            nlohmann::ordered_json r;
            r["theta"] = row.theta;
            r["quad_coverage"] = row.quad_cov;
            r["mc_coverage"] = row.mc_cov;
            r["coverage_se"] = row.cov_se;
            r["coverage_pass"] = row.cov_pass;
            r["quad_length"] = row.quad_len;
            r["mc_length"] = row.mc_len;
            r["length_se"] = row.len_se;
            r["length_pass"] = row.len_pass;
            j["results"].push_back(r);
        }
        j["pass"] = all_pass;
        priorci::write_text_file(opt.out_path, j.dump(2) + "\n");
        std::printf("wrote: %s\n", opt.out_path.c_str());
    }
    if (!all_pass) {
        throw VerificationFailure("verify-mc: quadrature and MC disagree beyond 3 SE");
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Confidence intervals for a normal mean with uncertain prior information"};
    app.require_subcommand(1);

    IntervalKnownOpts ik;
    auto* cik = app.add_subcommand("interval-known",
                                   "Interval from summary statistics, sigma known");
    cik->add_option("--xbar", ik.xbar, "Sample mean");
    cik->add_option("--sigma", ik.sigma, "Known sigma (> 0)");
    cik->add_option("--n", ik.n, "Sample size (>= 1)");
    cik->add_option("--alpha", ik.alpha, "1 - confidence level");
    cik->add_option("--w", ik.w, "Length weight at the origin (mixed method)");
    cik->add_option("--method", ik.method, "standard | pratt | mixed")
        ->check(CLI::IsMember({"standard", "pratt", "mixed"}));
    cik->add_option("--data", ik.data_path, "Raw data file (overrides --xbar/--n)");
    cik->callback([&] { run_interval_known(ik); });

    IntervalUnknownOpts iu;
    auto* ciu = app.add_subcommand("interval-unknown",
                                   "Interval from summary statistics, sigma unknown");
    ciu->add_option("--xbar", iu.xbar, "Sample mean");
    auto* opt_s = ciu->add_option("--s", iu.s, "Sample standard deviation (> 0)");
    auto* opt_n = ciu->add_option("--n", iu.n, "Sample size; must match the spline file");
    ciu->add_option("--spline", iu.spline_path, "Endpoint-spline JSON")->required();
    ciu->add_option("--data", iu.data_path, "Raw data file (overrides --xbar/--s/--n)");
    ciu->callback([&] {
        iu.n_given = opt_n->count() > 0;
        iu.s_given = opt_s->count() > 0;
        run_interval_unknown(iu);
    });

    OptimizeOpts ob;
    auto* cob = app.add_subcommand("optimize-b", "Optimize the endpoint spline");
    cob->add_option("--n", ob.n, "Sample size");
    cob->add_option("--alpha", ob.alpha, "1 - confidence level");
    cob->add_option("--w", ob.w, "Length weight at the origin");
    cob->add_option("--q", ob.q, "Spline half-range");
    cob->add_option("--step", ob.step, "Knot spacing (must divide [-q, q] evenly)");
    cob->add_option("--out", ob.out_path, "Output spline JSON path")->required();
    cob->callback([&] { run_optimize(ob); });

    TableOpts tb;
    auto* ctb = app.add_subcommand("efficiency-table", "Efficiency/coverage table as CSV");
    ctb->add_option("--mode", tb.mode, "known | unknown")
        ->check(CLI::IsMember({"known", "unknown"}));
    auto* tb_n = ctb->add_option("--n", tb.n, "Sample size (unknown mode)");
    auto* tb_alpha = ctb->add_option("--alpha", tb.alpha, "1 - confidence level");
    auto* tb_w = ctb->add_option("--w", tb.w, "Length weight (0 = Pratt limit in known mode)");
    ctb->add_option("--spline", tb.spline_path, "Endpoint-spline JSON (unknown mode)");
    ctb->add_option("--theta-max", tb.theta_max, "Largest tabulated theta");
    ctb->add_option("--step", tb.step, "Theta increment");
    ctb->add_option("--out", tb.out_path, "Output CSV path")->required();
    ctb->add_option("--family-out", tb.family_out,
                    "Also write the acceptance family CSV (known mode)");
    ctb->callback([&] {
        if (tb.mode == "known") {
            if (!tb.spline_path.empty()) {
                throw std::domain_error("efficiency-table: --spline is for unknown mode");
            }
            run_table_known(tb);
        } else {
            if (tb.spline_path.empty()) {
                throw std::domain_error("efficiency-table: unknown mode needs --spline");
            }
            if (!tb.family_out.empty()) {
                throw std::domain_error("efficiency-table: --family-out is for known mode");
            }
            run_table_unknown(tb, tb_n->count() > 0, tb_alpha->count() > 0, tb_w->count() > 0);
        }
    });

    VerifyOpts vf;
    auto* cvf = app.add_subcommand("verify-mc", "Monte Carlo check of the quadrature values");
    cvf->add_option("--spline", vf.spline_path, "Endpoint-spline JSON to verify");
    cvf->add_option("--method", vf.method, "standard | pratt (known-variance closed forms)")
        ->check(CLI::IsMember({"standard", "pratt"}));
    cvf->add_option("--theta", vf.thetas, "Theta values to check (default 0 1 2 5)");
    cvf->add_option("--reps", vf.reps, "Replications per theta");
    cvf->add_option("--seed", vf.seed, "RNG seed");
    cvf->add_option("--alpha", vf.alpha, "1 - confidence level (known methods)");
    cvf->add_flag("--raw", vf.raw, "Sample raw variates instead of sufficient statistics");
    cvf->add_option("--out", vf.out_path, "Optional JSON report path");
    cvf->callback([&] { run_verify(vf); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const priorci::IoError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 4;
    } catch (const priorci::ArtifactError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 4;
    } catch (const priorci::SplineShapeError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const priorci::ConvergenceError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const VerificationFailure& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const std::domain_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
