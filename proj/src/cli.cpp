#include "ncqp/cli.hpp"

#include "ncqp/admissibility.hpp"
#include "ncqp/errors.hpp"
#include "ncqp/homodyne.hpp"
#include "ncqp/io.hpp"
#include "ncqp/parallel.hpp"
#include "ncqp/quasiprob.hpp"
#include "ncqp/sampling.hpp"
#include "ncqp/significance.hpp"
#include "ncqp/states.hpp"

#include "CLI11.hpp"

#include <cmath>
#include <complex>
#include <filesystem>
#include <functional>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace ncqp::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct StateOpts {
    std::string kind = "noisy-fock";
    int n = 1;
    double nbar = 0.8;
    double eta = 1.0;
    double vx = 0.5;
    double vp = 2.0;
    double xi_re = 1.0;
    double xi_im = 0.0;
    int detectors = 8;
    int clicks = 1;

    void attach(CLI::App* app)
    {
        app->add_option("--state", kind, "noisy-fock | npats | thermal | squeezed | dephased | heralded")
            ->check(CLI::IsMember({"noisy-fock", "npats", "thermal", "squeezed", "dephased", "heralded"}));
        app->add_option("--n", n, "photon number (Fock) or added photons (PATS)");
        app->add_option("--nbar", nbar, "thermal mean photon number");
        app->add_option("--eta", eta, "quantum efficiency (detector efficiency for heralded)");
        app->add_option("--vx", vx, "squeezed quadrature variance");
        app->add_option("--vp", vp, "anti-squeezed quadrature variance");
        app->add_option("--xi-re", xi_re, "two-mode squeezing, real part");
        app->add_option("--xi-im", xi_im, "two-mode squeezing, imaginary part");
        app->add_option("--detectors", detectors, "on-off detectors in the array");
        app->add_option("--clicks", clicks, "recorded clicks");
    }

    [[nodiscard]] StateModel build() const
    {
        if (kind == "noisy-fock") {
            return StateModel::noisy_fock(n, eta);
        }
        if (kind == "npats") {
            return StateModel::npats(n, nbar, eta);
        }
        if (kind == "thermal") {
            return StateModel::thermal(nbar, eta);
        }
        if (kind == "squeezed") {
            return StateModel::squeezed_vacuum(vx, vp, eta);
        }
        if (kind == "dephased") {
            return StateModel::dephased_squeezed_vacuum(vx, vp, eta);
        }
        return StateModel::heralded({xi_re, xi_im}, detectors, clicks, eta);
    }
};

struct FilterOpts {
    std::string family = "qinf";
    double q = 3.0;
    double s = 4.0;
    double c = 1.3;
    double width = 1.0;

    void attach(CLI::App* app)
    {
        app->add_option("--filter", family, "q | qinf | analytic | gauss")
            ->check(CLI::IsMember({"q", "qinf", "analytic", "gauss"}));
        app->add_option("--q", q, "autocorrelation exponent (q > 2)");
        app->add_option("--s", s, "analytic filter exponent (s > 2)");
        app->add_option("--c", c, "analytic filter offset C");
        app->add_option("--width", width, "filter width w");
    }

    [[nodiscard]] FilterSpec build() const
    {
        if (family == "q") {
            return FilterSpec::autocorr(q, width);
        }
        if (family == "analytic") {
            return FilterSpec::analytic(s, c, width);
        }
        if (family == "gauss") {
            return FilterSpec::gaussian(width);
        }
        return FilterSpec::autocorr_inf(width);
    }
};

std::vector<double> linspace(double lo, double hi, int count)
{
    if (count < 1) {
        throw ValidationError("point count must be >= 1");
    }
    std::vector<double> v(count);
    for (int i = 0; i < count; ++i) {
        v[i] = count == 1 ? lo : lo + (hi - lo) * i / (count - 1);
    }
    return v;
}

void manifest(const std::string& command, const json& params, std::optional<std::uint64_t> seed, const fs::path& out)
{
    io::write_manifest({command, params, seed, {out}});
}

void ensure_parent(const fs::path& p)
{
    if (p.has_parent_path()) {
        fs::create_directories(p.parent_path());
    }
}

void check_tolerance(double error, double tolerance, const std::string& what)
{
    if (!(error <= tolerance)) {
        throw NumericalError(what + " truncation error " + io::format_double(error) + " exceeds tolerance "
                             + io::format_double(tolerance));
    }
}

// Filter tables for several specs on one b grid: `b,<label>...`.
void write_filter_columns(const fs::path& out, const std::vector<std::pair<std::string, FilterSpec>>& specs,
                          const std::vector<double>& b)
{
    std::vector<std::string> header{"b"};
    for (const auto& s : specs) {
        header.push_back("omega_" + s.first);
    }
    std::vector<std::vector<double>> rows;
    for (double x : b) {
        std::vector<double> row{x};
        for (const auto& s : specs) {
            row.push_back(eval_filter(s.second, x));
        }
        rows.push_back(std::move(row));
    }
    io::write_csv(out, header, rows);
}

std::vector<double> sweep(double lo, double hi, double step)
{
    std::vector<double> v;
    for (int i = 0;; ++i) {
        const double x = lo + step * i;
        if (x > hi + 1e-12) {
            break;
        }
        v.push_back(std::min(x, hi));
    }
    return v;
}

json curve_params(const StateModel& state, const std::vector<FilterSpec>& families, const std::vector<double>& etas,
                  const ScanSpec& scan)
{
    json fam = json::array();
    for (const auto& f : families) {
        fam.push_back(f.label());
    }
    return {{"state", state.to_json()},
            {"filters", fam},
            {"etas", etas},
            {"alphas", scan.alphas},
            {"widths", scan.widths},
            {"target", scan.target},
            {"refine", scan.refine}};
}

std::vector<RequiredN> curves(const StateModel& state, const std::vector<FilterSpec>& families,
                              const std::vector<double>& etas, const ScanSpec& scan)
{
    std::vector<RequiredN> rows;
    for (const auto& f : families) {
        for (auto& r : required_n(state, f, etas, scan)) {
            if (r.boundary_hit) {
                std::cerr << "warning: " << f.label() << " optimum at eta = " << r.eta << " sits on the scan boundary\n";
            }
            rows.push_back(r);
        }
    }
    return rows;
}

std::vector<FilterSpec> q_families()
{
    return {FilterSpec::autocorr(3.0, 1.0), FilterSpec::autocorr(4.0, 1.0), FilterSpec::autocorr(6.0, 1.0),
            FilterSpec::autocorr_inf(1.0)};
}

void figure_curves(const fs::path& p, const std::string& command, const StateModel& s, const std::vector<double>& etas,
                   const ScanSpec& sc, bool cf_line)
{
    auto rows = curves(s, q_families(), etas, sc);
    if (cf_line) {
        for (auto& r : required_n_cf(s, etas, sc.target)) {
            rows.push_back(r);
        }
    }
    write_curve_csv(p, rows);
    json params = curve_params(s, q_families(), etas, sc);
    params["cf_line"] = cf_line;
    manifest(command, params, {}, p);
}

struct Opts {
    StateOpts state;
    FilterOpts filter;
    fs::path out;
    fs::path data;
    fs::path out_dir = "repro";
    unsigned threads = 0;
    std::optional<std::uint64_t> seed;
    std::size_t count = 1000;
    double tolerance = 1e-4;
    int points = 0;
    double b_max = 4.0;
    double r_max = 4.0;
    double theta = 0.0;
    double x_max = 6.0;
    double phi = 0.0;
    double extent = 2.0;
    int nodes = 2048;
    double eta_l = 0.5;
    std::vector<double> alphas;
    double arg = 0.0;
    std::vector<double> etas;
    double alpha_max = 3.0;
    double alpha_step = 0.05;
    double w_min = 0.6;
    double w_max = 3.0;
    int w_points = 40;
    double target = 5.0;
    bool no_refine = false;
};

} // namespace

int run(int argc, char** argv)
{
    CLI::App app{"Nonclassicality quasiprobabilities from homodyne data"};
    app.require_subcommand(1);
    Opts o;
    app.add_option("--threads", o.threads, "worker thread cap (0 = all cores)");

    std::function<void()> action;
    auto bind = [&action](CLI::App* sub, std::function<void()> f) { sub->callback([&action, f] { action = f; }); };
    // Several subcommands share option slots with different defaults; the defaults of
    // the subcommand actually selected are applied before its options are parsed.
    auto with_points = [&o](CLI::App* sub, int def, std::function<void(Opts&)> extra = {}) {
        sub->add_option("--points", o.points, "sample points (default " + std::to_string(def) + ")");
        sub->preparse_callback([&o, def, extra](std::size_t) {
            o.points = def;
            if (extra) {
                extra(o);
            }
        });
    };

    // filter
    auto* filter = app.add_subcommand("filter", "filter evaluation and admissibility");
    filter->require_subcommand(1);
    {
        auto* eval = filter->add_subcommand("eval", "Omega_w(b) table (b,omega)");
        o.filter.attach(eval);
        eval->add_option("--b-max", o.b_max);
        with_points(eval, 401);
        eval->add_option("--out", o.out)->required();
        bind(eval, [&o] {
            const FilterSpec spec = o.filter.build();
            std::vector<std::vector<double>> rows;
            for (double b : linspace(0.0, o.b_max, o.points)) {
                rows.push_back({b, eval_filter(spec, b)});
            }
            ensure_parent(o.out);
            io::write_csv(o.out, {"b", "omega"}, rows);
            manifest("filter eval", {{"filter", spec.to_json()}, {"b_max", o.b_max}, {"points", o.points}}, {}, o.out);
        });

        auto* cert = filter->add_subcommand("certify", "admissibility report (JSON)");
        o.filter.attach(cert);
        cert->add_option("--out", o.out)->required();
        bind(cert, [&o] {
            const FilterOpts& f = o.filter;
            const FilterSpec spec = f.family == "analytic" ? FilterSpec::analytic_unchecked(f.s, f.c, f.width) : f.build();
            const AdmissibilityReport report = certify_filter(spec);
            ensure_parent(o.out);
            io::write_json(o.out, report.to_json());
            manifest("filter certify", {{"filter", spec.to_json()}}, {}, o.out);
            for (const auto& c : report.conditions) {
                std::cout << c.name << ' ' << (c.pass ? "pass" : "fail") << ' ' << c.margin << '\n';
            }
            if (report.askey) {
                std::cout << report.askey->name << ' ' << (report.askey->pass ? "pass" : "fail") << ' '
                          << report.askey->margin << '\n';
            }
        });

        auto* tr = filter->add_subcommand("transform", "Fourier transform F(r) of the filter (r,f)");
        o.filter.attach(tr);
        tr->add_option("--r-max", o.r_max);
        with_points(tr, 401);
        tr->add_option("--out", o.out)->required();
        bind(tr, [&o] {
            const FilterSpec spec = o.filter.build();
            const auto r = linspace(0.0, o.r_max, o.points);
            const auto f = fourier_of_filter(spec, r);
            std::vector<std::vector<double>> rows;
            for (std::size_t i = 0; i < r.size(); ++i) {
                rows.push_back({r[i], f[i]});
            }
            ensure_parent(o.out);
            io::write_csv(o.out, {"r", "f"}, rows);
            manifest("filter transform", {{"filter", spec.to_json()}, {"r_max", o.r_max}, {"points", o.points}}, {},
                     o.out);
        });
    }

    // state
    auto* state = app.add_subcommand("state", "state characteristic functions, densities and samples");
    state->require_subcommand(1);
    {
        auto* cf = state->add_subcommand("cf", "Phi(b e^{i theta}) along a ray (b,re,im)");
        o.state.attach(cf);
        cf->add_option("--b-max", o.b_max);
        cf->add_option("--theta", o.theta, "ray angle of beta");
        with_points(cf, 501, [](Opts& x) { x.b_max = 5.0; });
        cf->add_option("--out", o.out)->required();
        bind(cf, [&o] {
            const StateModel s = o.state.build();
            std::vector<std::vector<double>> rows;
            for (double b : linspace(0.0, o.b_max, o.points)) {
                const auto v = cf_p(s, std::polar(b, o.theta));
                rows.push_back({b, v.real(), v.imag()});
            }
            ensure_parent(o.out);
            io::write_csv(o.out, {"b", "re", "im"}, rows);
            manifest("state cf",
                     {{"state", s.to_json()}, {"b_max", o.b_max}, {"theta", o.theta}, {"points", o.points}}, {}, o.out);
        });

        auto* pdf = state->add_subcommand("pdf", "quadrature density p(x; phi) (x,p)");
        o.state.attach(pdf);
        pdf->add_option("--x-max", o.x_max);
        pdf->add_option("--phi", o.phi);
        with_points(pdf, 601);
        pdf->add_option("--out", o.out)->required();
        bind(pdf, [&o] {
            const StateModel s = o.state.build();
            std::vector<std::vector<double>> rows;
            for (double x : linspace(-o.x_max, o.x_max, o.points)) {
                rows.push_back({x, quadrature_pdf(s, x, o.phi)});
            }
            ensure_parent(o.out);
            io::write_csv(o.out, {"x", "p"}, rows);
            manifest("state pdf", {{"state", s.to_json()}, {"x_max", o.x_max}, {"phi", o.phi}, {"points", o.points}},
                     {}, o.out);
        });
    }
    // `state sample` and `bhd simulate` produce the same dataset.
    auto add_sampler = [&](CLI::App* parent, const char* name, const std::string& command) {
        auto* sm = parent->add_subcommand(name, "simulated homodyne records (x,phi)");
        o.state.attach(sm);
        sm->add_option("--count", o.count)->required();
        sm->add_option("--seed", o.seed)->required();
        sm->add_option("--out", o.out)->required();
        bind(sm, [&o, command] {
            const StateModel s = o.state.build();
            const QuadratureDataset d = sample_quadrature(s, o.count, *o.seed);
            ensure_parent(o.out);
            write_dataset(o.out, d);
            manifest(command, {{"state", s.to_json()}, {"count", o.count}}, o.seed, o.out);
        });
    };
    add_sampler(state, "sample", "state sample");

    // qp
    auto* qp = app.add_subcommand("qp", "deterministic filtered P functions");
    qp->require_subcommand(1);
    {
        auto* radial = qp->add_subcommand("radial", "P_Omega(r) for phase-insensitive states");
        o.state.attach(radial);
        o.filter.attach(radial);
        radial->add_option("--r-max", o.r_max);
        with_points(radial, 61, [](Opts& x) { x.r_max = 3.0; });
        radial->add_option("--tolerance", o.tolerance);
        radial->add_option("--out", o.out)->required();
        bind(radial, [&o] {
            const StateModel s = o.state.build();
            const FilterSpec spec = o.filter.build();
            const QpGrid g = filtered_p_radial(s, spec, linspace(0.0, o.r_max, o.points));
            ensure_parent(o.out);
            write_qp_csv(o.out, g);
            manifest("qp radial",
                     {{"state", s.to_json()}, {"filter", spec.to_json()}, {"r_max", o.r_max}, {"points", o.points}}, {},
                     o.out);
            check_tolerance(g.truncation_error, o.tolerance, "qp radial");
        });

        auto* grid = qp->add_subcommand("grid", "P_Omega on a square alpha grid (2D inversion)");
        o.state.attach(grid);
        o.filter.attach(grid);
        grid->add_option("--extent", o.extent, "grid covers [-extent, extent]^2");
        with_points(grid, 41);
        grid->add_option("--nodes", o.nodes, "CF trapezoid intervals per axis");
        grid->add_option("--tolerance", o.tolerance);
        grid->add_option("--out", o.out)->required();
        bind(grid, [&o] {
            const StateModel s = o.state.build();
            const FilterSpec spec = o.filter.build();
            const auto axis = linspace(-o.extent, o.extent, o.points);
            Grid2dOptions opt;
            opt.nodes = o.nodes;
            const QpGrid g = filtered_p_2d(s, spec, axis, axis, opt);
            ensure_parent(o.out);
            write_qp_csv(o.out, g);
            manifest("qp grid",
                     {{"state", s.to_json()}, {"filter", spec.to_json()}, {"extent", o.extent}, {"points", o.points},
                      {"nodes", o.nodes}},
                     {}, o.out);
            check_tolerance(g.truncation_error, o.tolerance, "qp grid");
        });

        auto* tm = qp->add_subcommand("twomode", "two-mode P_Omega on the Re a1 x Re a2 slice");
        o.state.attach(tm);
        o.filter.attach(tm);
        tm->add_option("--eta-l", o.eta_l, "beam-splitter transmittance");
        tm->add_option("--extent", o.extent);
        with_points(tm, 41, [](Opts& x) { x.extent = 3.0; });
        tm->add_option("--tolerance", o.tolerance);
        tm->add_option("--out", o.out)->required();
        bind(tm, [&o] {
            const StateModel s = o.state.build();
            const FilterSpec spec = o.filter.build();
            const TwoModeConfig cfg = TwoModeConfig::make(s, o.eta_l);
            const TwoModeGrid g = two_mode_filtered_p(cfg, spec, two_mode_re_slice(o.extent, o.points));
            ensure_parent(o.out);
            write_two_mode_csv(o.out, g);
            manifest("qp twomode",
                     {{"state", s.to_json()}, {"filter", spec.to_json()}, {"eta_l", o.eta_l}, {"extent", o.extent},
                      {"points", o.points}},
                     {}, o.out);
            check_tolerance(g.truncation_error, o.tolerance, "qp twomode");
        });
    }

    // bhd
    auto* bhd = app.add_subcommand("bhd", "homodyne simulation and estimation");
    bhd->require_subcommand(1);
    {
        add_sampler(bhd, "simulate", "bhd simulate");

        auto* est = bhd->add_subcommand("estimate", "pattern-function estimates of P_Omega");
        o.filter.attach(est);
        est->add_option("--data", o.data)->required()->check(CLI::ExistingFile);
        est->add_option("--alpha", o.alphas, "|alpha| values (repeatable)")->required();
        est->add_option("--arg", o.arg, "common phase of alpha");
        est->add_option("--out", o.out)->required();
        bind(est, [&o] {
            const QuadratureDataset d = ingest_dataset(o.data);
            const FilterSpec spec = o.filter.build();
            std::vector<std::complex<double>> points;
            double a_max = 0.0;
            for (double a : o.alphas) {
                points.push_back(std::polar(std::fabs(a), a < 0.0 ? o.arg + std::numbers::pi : o.arg));
                a_max = std::max(a_max, std::fabs(a));
            }
            const PatternTable table(spec, required_lambda_max(d, a_max));
            std::vector<QpEstimate> rows;
            for (const auto& a : points) {
                rows.push_back(estimate_qp(d, table, a));
            }
            ensure_parent(o.out);
            write_estimates_csv(o.out, rows);
            json params{{"data", o.data.string()},
                        {"data_sha256", io::sha256_file(o.data)},
                        {"filter", spec.to_json()},
                        {"alpha", o.alphas},
                        {"arg", o.arg}};
            if (d.size() >= 2) {
                const std::vector<PatternTable> tables{table};
                const SignificanceResult sres = significance(d, tables, points);
                params["significance"] = sres.infinite ? json("inf") : json(sres.value);
                std::cout << "significance " << (sres.infinite ? std::string("inf") : io::format_double(sres.value))
                          << '\n';
            }
            manifest("bhd estimate", params, {}, o.out);
        });

        auto* cf = bhd->add_subcommand("cf", "CF estimates |Phi|(b) from data (b,value,sigma)");
        cf->add_option("--data", o.data)->required()->check(CLI::ExistingFile);
        cf->add_option("--b-max", o.b_max);
        with_points(cf, 81);
        cf->add_option("--out", o.out)->required();
        bind(cf, [&o] {
            const QuadratureDataset d = ingest_dataset(o.data);
            std::vector<std::vector<double>> rows;
            for (double b : linspace(0.0, o.b_max, o.points)) {
                const CfEstimate e = estimate_cf(d, b);
                rows.push_back({e.b, e.value, e.sigma});
            }
            ensure_parent(o.out);
            io::write_csv(o.out, {"b", "value", "sigma"}, rows);
            manifest("bhd cf",
                     {{"data", o.data.string()}, {"data_sha256", io::sha256_file(o.data)}, {"b_max", o.b_max},
                      {"points", o.points}},
                     {}, o.out);
        });
    }

    // scan
    auto* scan = app.add_subcommand("scan", "required number of data points");
    scan->require_subcommand(1);
    {
        auto* rn = scan->add_subcommand("required-n", "filter-method N(eta) curve");
        o.state.attach(rn);
        o.filter.attach(rn);
        rn->add_option("--etas", o.etas, "efficiency sweep")->required();
        rn->add_option("--alpha-max", o.alpha_max, "largest |alpha| (0 evaluates at the origin only)");
        rn->add_option("--alpha-step", o.alpha_step);
        rn->add_option("--w-min", o.w_min);
        rn->add_option("--w-max", o.w_max);
        rn->add_option("--w-points", o.w_points);
        rn->add_option("--target", o.target, "target significance");
        rn->add_flag("--no-refine", o.no_refine, "skip golden-section refinement");
        rn->add_option("--out", o.out)->required();
        bind(rn, [&o] {
            const StateModel s = o.state.build();
            if (o.w_points < 1 || !(o.w_min > 0.0) || o.w_max < o.w_min || !(o.alpha_step > 0.0)) {
                throw ValidationError("scan grids need 0 < w-min <= w-max, w-points >= 1 and alpha-step > 0");
            }
            ScanSpec sc;
            sc.alphas = o.alpha_max > 0.0 ? sweep(0.0, o.alpha_max, o.alpha_step) : std::vector<double>{0.0};
            for (int i = 0; i < o.w_points; ++i) {
                sc.widths.push_back(o.w_points == 1 ? o.w_min
                                                    : o.w_min * std::pow(o.w_max / o.w_min, double(i) / (o.w_points - 1)));
            }
            sc.target = o.target;
            sc.refine = !o.no_refine;
            const std::vector<FilterSpec> fam{o.filter.build()};
            const auto rows = curves(s, fam, o.etas, sc);
            ensure_parent(o.out);
            write_curve_csv(o.out, rows);
            manifest("scan required-n", curve_params(s, fam, o.etas, sc), {}, o.out);
        });

        auto* cfl = scan->add_subcommand("cf-line", "CF-criterion N(eta) curve");
        o.state.attach(cfl);
        cfl->add_option("--etas", o.etas)->required();
        cfl->add_option("--target", o.target);
        cfl->add_option("--out", o.out)->required();
        bind(cfl, [&o] {
            const StateModel s = o.state.build();
            const auto rows = required_n_cf(s, o.etas, o.target);
            ensure_parent(o.out);
            write_curve_csv(o.out, rows);
            manifest("scan cf-line", {{"state", s.to_json()}, {"etas", o.etas}, {"target", o.target}}, {}, o.out);
        });
    }

    // repro
    auto* repro = app.add_subcommand("repro", "regenerate the figure and table data");
    repro->require_subcommand(1);
    auto repro_cmd = [&](const char* name, const char* help, std::function<void(const fs::path&)> body) {
        auto* sub = repro->add_subcommand(name, help);
        sub->add_option("--out-dir", o.out_dir, "output directory");
        bind(sub, [&o, body] {
            fs::create_directories(o.out_dir);
            body(o.out_dir);
        });
    };
    repro_cmd("fig1", "autocorrelation filters for q = 3, 4, 6, inf (w = 1)", [](const fs::path& dir) {
        const fs::path p = dir / "fig1.csv";
        std::vector<std::pair<std::string, FilterSpec>> specs;
        for (const auto& f : q_families()) {
            specs.emplace_back(f.label(), f);
        }
        write_filter_columns(p, specs, linspace(0.0, 3.0, 301));
        manifest("repro fig1", {{"width", 1.0}, {"b_max", 3.0}}, {}, p);
    });
    repro_cmd("fig2", "analytic invertible filters, C = 1.3, s = 2.5, 4, 10 (w = 1)", [](const fs::path& dir) {
        const fs::path p = dir / "fig2.csv";
        std::vector<std::pair<std::string, FilterSpec>> specs;
        for (double s : {2.5, 4.0, 10.0}) {
            specs.emplace_back("s" + io::format_double(s), FilterSpec::analytic(s, 1.3, 1.0));
        }
        write_filter_columns(p, specs, linspace(0.0, 3.0, 301));
        manifest("repro fig2", {{"c", 1.3}, {"width", 1.0}, {"b_max", 3.0}}, {}, p);
    });
    repro_cmd("fig3", "squeezed vacuum, analytic filter s = 4, C = 1.3, w = 9.9", [](const fs::path& dir) {
        const fs::path p = dir / "fig3.csv";
        const StateModel s = StateModel::squeezed_vacuum(0.5, 2.0, 1.0);
        const FilterSpec spec = FilterSpec::analytic(4.0, 1.3, 9.9);
        const auto axis = linspace(-2.0, 2.0, 81);
        write_qp_csv(p, filtered_p_2d(s, spec, axis, axis));
        manifest("repro fig3", {{"state", s.to_json()}, {"filter", spec.to_json()}, {"extent", 2.0}, {"points", 81}},
                 {}, p);
    });
    repro_cmd("fig4", "noisy Fock states n = 1, 2 (w optimized at the origin)", [](const fs::path& dir) {
        ScanSpec sc = ScanSpec::defaults();
        sc.alphas = {0.0};
        const auto e = sweep(0.25, 1.0, 0.05);
        figure_curves(dir / "fig4_n1.csv", "repro fig4", StateModel::noisy_fock(1, 1.0), e, sc, false);
        figure_curves(dir / "fig4_n2.csv", "repro fig4", StateModel::noisy_fock(2, 1.0), e, sc, false);
    });
    repro_cmd("fig5", "SPATS (nbar = 0.8) and 2-PATS (nbar = 0.9)", [](const fs::path& dir) {
        const auto e = sweep(0.2, 1.0, 0.1);
        figure_curves(dir / "fig5_n1.csv", "repro fig5", StateModel::npats(1, 0.8, 1.0), e, ScanSpec::defaults(), false);
        figure_curves(dir / "fig5_n2.csv", "repro fig5", StateModel::npats(2, 0.9, 1.0), e, ScanSpec::defaults(), false);
    });
    repro_cmd("fig6", "dephased squeezed vacuum Vx = 0.4, Vp = 5.0 with the CF line", [](const fs::path& dir) {
        const auto e = sweep(0.2, 1.0, 0.1);
        figure_curves(dir / "fig6.csv", "repro fig6", StateModel::dephased_squeezed_vacuum(0.4, 5.0, 1.0), e,
                      ScanSpec::defaults(), true);
    });
    repro_cmd("fig8", "two-mode heralded state, k = 0 (control), 1, 4", [](const fs::path& dir) {
        const FilterSpec spec = FilterSpec::autocorr_inf(1.7);
        const auto slice = two_mode_re_slice(3.0, 41);
        for (int k : {0, 1, 4}) {
            const StateModel s = StateModel::heralded({1.0, 0.0}, 8, k, 0.2);
            const TwoModeConfig cfg = TwoModeConfig::make(s, 0.5);
            const fs::path p = dir / ("fig8_k" + std::to_string(k) + ".csv");
            write_two_mode_csv(p, two_mode_filtered_p(cfg, spec, slice));
            manifest("repro fig8",
                     {{"state", s.to_json()}, {"filter", spec.to_json()}, {"eta_l", 0.5}, {"extent", 3.0}, {"points", 41}},
                     {}, p);
        }
    });
    repro_cmd("table1", "threshold thermal photon numbers for n = 1..6", [](const fs::path& dir) {
        const fs::path p = dir / "table1.csv";
        std::vector<std::vector<double>> rows(6);
        parallel_for(6, [&](std::size_t i) {
            const int n = static_cast<int>(i) + 1;
            rows[i] = {double(n), threshold_nbar(n)};
        });
        io::write_csv(p, {"n", "nbar_c"}, rows);
        manifest("repro table1", {{"n", {1, 2, 3, 4, 5, 6}}}, {}, p);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            return app.exit(e);
        }
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    set_max_threads(o.threads);
    try {
        if (action) {
            action();
        }
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}

} // namespace ncqp::cli
