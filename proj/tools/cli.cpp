#include "fk/cli.hpp"
#include "fk/angular.hpp"
#include "fk/diagnostics.hpp"
#include "fk/error.hpp"
#include "fk/examples.hpp"
#include "fk/rigidity.hpp"
#include "fk/solver.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <map>
#include <memory>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace fk::cli {

namespace {

struct Args {
    std::string example = "1";
    double h = 0.5;
    std::string h_list;
    double radius = 10.0;
    std::optional<double> theta_inf;
    std::string out;
    std::string config;
    std::optional<double> tol;
    std::string mode = "form";
    // example 4
    std::string profile = "sine-gordon";
    std::optional<double> norm_v1, norm_v4, norm_g1, norm_g2;
    // 1D factory
    std::string phi = "tanh";
    std::string omega = "1,1";
    // reconstruct
    std::string field;
    // relax
    std::string potential = "zero";
    double d = 1.0;
    std::string data = "affine";
    std::string init = "data";
    std::string boundary = "dirichlet";
    unsigned long seed = 1;
    std::optional<double> step;
    long max_iters = 100000;
    bool verify = false;
    // export-field
    std::string angular;
};

void add_common(CLI::App* s, Args& a)
{
    s->add_option("--example", a.example, "1, 2, 3, 4 or oned")->check(CLI::IsMember({"1", "2", "3", "4", "oned"}));
    s->add_option("--h", a.h, "mesh parameter");
    s->add_option("--radius", a.radius, "window half-width in position units");
    s->add_option("--theta-inf", a.theta_inf, "limit angle override");
    s->add_option("--out", a.out, "output path (default: standard output)");
    s->add_option("--config", a.config, "key=value file; command-line flags win");
    s->add_option("--tol", a.tol, "tolerance override");
    s->add_option("--profile", a.profile, "example 4 profile")->check(CLI::IsMember({"sine-gordon", "linear"}));
    s->add_option("--norm-v1", a.norm_v1, "example 4: ||v'|| override");
    s->add_option("--norm-v4", a.norm_v4, "example 4: ||v''''|| override");
    s->add_option("--norm-g1", a.norm_g1, "example 4: ||g'|| override");
    s->add_option("--norm-g2", a.norm_g2, "example 4: ||g''|| override");
    s->add_option("--phi", a.phi, "oned profile")->check(CLI::IsMember({"identity", "tanh", "sine-gordon"}));
    s->add_option("--omega", a.omega, "oned direction w1,w2");
}

std::vector<double> parse_list(const std::string& s)
{
    std::vector<double> v;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            std::size_t pos = 0;
            v.push_back(std::stod(tok, &pos));
            if (tok.find_first_not_of(" \t", pos) != std::string::npos) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw Error(ErrorKind::invalid_argument, "bad number '" + tok + "' in list '" + s + "'");
        }
    }
    return v;
}

ExampleSpec make_example(const Args& a, double h)
{
    if (a.example == "1") return build_example1(h);
    if (a.example == "2") return build_example2(h);
    if (a.example == "3") return build_example3(h);
    if (a.example == "4") {
        SemilinearProfile p = a.profile == "linear" ? linear_profile() : sine_gordon_profile();
        if (a.norm_v1) p.norm_v1 = *a.norm_v1;
        if (a.norm_v4) p.norm_v4 = *a.norm_v4;
        if (a.norm_g1) p.norm_g1 = *a.norm_g1;
        if (a.norm_g2) p.norm_g2 = *a.norm_g2;
        return build_example4(h, p);
    }
    const std::vector<double> w = parse_list(a.omega);
    if (w.size() != 2) throw Error(ErrorKind::invalid_argument, "--omega needs two components");
    return build_oned_example(h, a.phi, w[0], w[1]);
}

struct Pipeline {
    ExampleSpec ex;
    Window win;
    KappaReport k;
    TheoremReport t;
    std::optional<RemainderReport> rem;
    std::string rem_error;
    std::vector<BoundCheck> bounds;
    double eq_residual = 0.0;
    std::optional<double> table_mismatch;
};

Pipeline run_pipeline(const Args& a, double h)
{
    Pipeline p;
    p.ex = make_example(a, h);
    p.win = make_window(h, a.radius, 4);
    Field u = sample(p.ex.u, p.win);
    AngularData ang = decompose(u);
    KappaOptions opt;
    opt.theta_inf_plus = a.theta_inf.value_or(p.ex.theta_inf_plus);
    opt.theta_inf_minus = a.theta_inf.value_or(p.ex.theta_inf_minus);
    opt.tails = p.ex.tails;
    p.k = compute_kappas(u, ang, p.ex.src, opt);
    p.k.kappa0_analytic = p.ex.kappa0_analytic;
    p.k.kappa1_analytic = p.ex.kappa1_analytic;
    p.t = verify_theorem(p.k, ang, h, a.mode == "tutta" ? TheoremMode::tutta : TheoremMode::form_plus);
    p.eq_residual = equation_residual(u, p.ex.src);
    try {
        p.rem = linearized_residual(u, p.ex.src, ang);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::equation_residual_too_large) throw;
        p.rem_error = e.what();
    }
    p.bounds = check_bounds(p.ex, p.k, p.t);
    if (p.ex.id == ExampleId::ex1) p.table_mismatch = example1_table_mismatch(h, p.win);
    return p;
}

bool pipeline_ok(const Pipeline& p)
{
    if (p.t.verdict != Verdict::holds) return false;
    if (!p.rem || p.rem->violations) return false;
    for (const BoundCheck& b : p.bounds)
        if (!b.ok) return false;
    return true;
}

const char* verify_header()
{
    return "example,h,radius,mode,kappa0,kappa1,kappa2,kappa3,kappa4,kappa5,kappa6,kappa7,"
           "tail2,tail3,tail4,tail5,tail6,tail7,lhs_plus,lhs_minus,lhs,lhs_tail,C,Ch,verdict,"
           "kappa0_analytic,kappa1_analytic,equation_residual,remainder_evaluated,remainder_violations,"
           "bounds_checked,bounds_failed,invalid_sites,table_mismatch";
}

std::string verify_row(const Args& a, const Pipeline& p)
{
    std::ostringstream os;
    const KappaFamily& f = p.k.plus;
    std::array<double, 8> kap = f.kappa, tl = f.tail;
    if (a.mode == "tutta" && p.k.minus)
        for (int m = 0; m < 8; ++m) {
            kap[m] += p.k.minus->kappa[m];
            tl[m] += p.k.minus->tail[m];
        }
    os << to_string(p.ex.id) << ',' << fmt17(p.ex.h) << ',' << fmt17(a.radius) << ',' << a.mode;
    for (int m = 0; m < 8; ++m) os << ',' << fmt17(kap[m]);
    for (int m = 2; m < 8; ++m) os << ',' << fmt17(tl[m]);
    os << ',' << fmt17(p.t.lhs_form_plus) << ',' << (p.t.lhs_form_minus ? fmt17(*p.t.lhs_form_minus) : "")
       << ',' << fmt17(p.t.lhs) << ',' << fmt17(p.t.lhs_tail) << ',' << fmt17(p.t.constant_C) << ','
       << fmt17(p.t.bound_Ch) << ',' << to_string(p.t.verdict) << ','
       << (p.ex.kappa0_analytic ? fmt17(*p.ex.kappa0_analytic) : "") << ','
       << (p.ex.kappa1_analytic ? fmt17(*p.ex.kappa1_analytic) : "") << ',' << fmt17(p.eq_residual) << ',';
    if (p.rem)
        os << p.rem->evaluated << ',' << p.rem->violations;
    else
        os << ",";
    std::string failed;
    for (const BoundCheck& b : p.bounds)
        if (!b.ok) failed += (failed.empty() ? "" : ";") + std::string(to_string(b.bound.target));
    os << ',' << p.bounds.size() << ',' << failed << ',' << p.k.invalid_site_count << ','
       << (p.table_mismatch ? fmt17(*p.table_mismatch) : "");
    return os.str();
}

void report_failures(const Pipeline& p, std::ostream& err)
{
    if (p.t.verdict == Verdict::inconclusive_truncation)
        err << "h=" << fmt17(p.ex.h) << ": lhs <= C h but lhs + tail > C h (tail " << fmt17(p.t.lhs_tail)
            << "); enlarge --radius\n";
    if (p.t.verdict == Verdict::violated)
        err << "h=" << fmt17(p.ex.h) << ": estimate violated, lhs " << fmt17(p.t.lhs) << " > C h "
            << fmt17(p.t.bound_Ch) << "\n";
    if (!p.rem) err << p.rem_error << "\n";
    if (p.rem && p.rem->violations)
        err << "h=" << fmt17(p.ex.h) << ": remainder bound exceeded at " << p.rem->violations << " site(s)\n";
    for (const BoundCheck& b : p.bounds)
        if (!b.ok)
            err << "h=" << fmt17(p.ex.h) << ": analytic bound " << b.bound.name << " fails: computed "
                << fmt17(b.computed) << ", bound " << fmt17(b.bound.value) << "\n";
    if (p.table_mismatch && *p.table_mismatch > 0.0)
        err << "example 1 source table differs from the stencil by " << fmt17(*p.table_mismatch) << "\n";
}

// Output sink: the named file, or `out` when no path is given.
class Sink {
public:
    Sink(const std::string& path, std::ostream& fallback) : os_(&fallback)
    {
        if (path.empty()) return;
        file_ = std::make_unique<std::ofstream>(path);
        if (!*file_) throw Error(ErrorKind::io, "cannot open '" + path + "' for writing");
        os_ = file_.get();
    }
    std::ostream& operator*() { return *os_; }
    void close()
    {
        if (file_) {
            file_->close();
            if (!*file_) throw Error(ErrorKind::io, "write failed");
        }
    }

private:
    std::unique_ptr<std::ofstream> file_;
    std::ostream* os_;
};

int cmd_verify(const Args& a, std::ostream& out, std::ostream& err)
{
    Pipeline p = run_pipeline(a, a.h);
    std::ostringstream buf;
    buf << verify_header() << '\n' << verify_row(a, p) << '\n';
    Sink s(a.out, out);
    *s << buf.str();
    s.close();
    report_failures(p, err);
    return pipeline_ok(p) ? ok : math;
}

int cmd_sweep(const Args& a, std::ostream& out, std::ostream& err)
{
    const std::vector<double> hs = parse_list(a.h_list);
    if (hs.size() < 3) throw Error(ErrorKind::invalid_argument, "--h-list needs at least three values");
    for (double h : hs) make_example(a, h); // rejects inadmissible h before any work
    std::vector<Pipeline> ps;
    for (double h : hs) ps.push_back(run_pipeline(a, h));
    std::ostringstream buf;
    buf << "h,lhs,Ch,lhs_rate,Ch_rate\n";
    std::vector<double> lh, ch;
    bool all = true;
    for (std::size_t i = 0; i < ps.size(); ++i) {
        const double l = ps[i].t.lhs, c = ps[i].t.bound_Ch;
        buf << fmt17(hs[i]) << ',' << fmt17(l) << ',' << fmt17(c) << ',';
        if (i > 0) {
            const double r = std::log(hs[i] / hs[i - 1]);
            buf << fmt17(std::log(l / ps[i - 1].t.lhs) / r) << ',' << fmt17(std::log(c / ps[i - 1].t.bound_Ch) / r);
        } else {
            buf << ',';
        }
        buf << '\n';
        lh.push_back(l);
        ch.push_back(c);
        all = all && pipeline_ok(ps[i]);
        report_failures(ps[i], err);
    }
    buf << "# slope_lhs=" << fmt17(loglog_slope(hs, lh)) << "\n# slope_Ch=" << fmt17(loglog_slope(hs, ch)) << '\n';
    Sink s(a.out, out);
    *s << buf.str();
    s.close();
    return all ? ok : math;
}

int cmd_reconstruct(const Args& a, std::ostream& out, std::ostream& err)
{
    const double tol = a.tol.value_or(1e-9);
    Field u;
    if (!a.field.empty()) {
        std::ifstream in(a.field);
        if (!in) throw Error(ErrorKind::io, "cannot open '" + a.field + "'");
        u = with_halo(read_field_csv(in), 3);
    } else {
        ExampleSpec ex = make_example(a, a.h);
        u = sample(ex.u, make_window(a.h, a.radius, 4));
    }
    AngularData ang = decompose(u);
    VanishingResult v = check_vanishing(ang);
    std::ostringstream buf;
    buf << "vanishing_residual,vanishing_scale,is_zero,c_plus,c_minus,ratio_constancy_error,max_abs_error,compared,"
           "precision_flag\n";
    buf << fmt17(v.residual) << ',' << fmt17(v.scale) << ',' << (v.is_zero ? 1 : 0);
    int code = ok;
    if (!v.is_zero) {
        buf << ",,,,,,\n";
        err << "angular Dirichlet sum " << fmt17(v.residual) << " is not zero: the field is not one-dimensional\n";
        code = math;
    } else {
        ReconstructionResult r = roundtrip_check(u);
        buf << ',' << fmt17(r.c_plus) << ',' << fmt17(r.c_minus) << ',' << fmt17(r.ratio_constancy_error) << ','
            << fmt17(r.max_abs_error) << ',' << r.compared << ',' << (r.precision_flag ? 1 : 0) << '\n';
        if (!(r.max_abs_error <= tol)) {
            err << "reconstruction error " << fmt17(r.max_abs_error) << " exceeds " << fmt17(tol) << "\n";
            code = math;
        }
        if (r.precision_flag) err << "binomial orders above 60 used; expect reduced precision\n";
    }
    Sink s(a.out, out);
    *s << buf.str();
    s.close();
    return code;
}

int cmd_relax(const Args& a, std::ostream& out, std::ostream& err)
{
    Potential pot = a.potential == "sine-gordon" ? sine_gordon_potential(a.d) : zero_potential(a.d);
    const double h = a.h;
    if (!(h > 0.0)) throw Error(ErrorKind::invalid_argument, "h must be positive");
    SolverConfig cfg;
    cfg.step = a.step.value_or(default_step(h, a.d));
    cfg.max_iters = a.max_iters;
    cfg.residual_tol = a.tol.value_or(1e-10);
    cfg.boundary = a.boundary == "periodic" ? Boundary::periodic : Boundary::dirichlet;
    Window w = make_window(h, a.radius, 1);

    const auto kink = [](double t) { return 4.0 * std::atan(std::exp(t)); };
    Closure data;
    if (a.data == "affine") {
        data = [h](long, long k2) { return h * static_cast<double>(k2); };
    } else if (a.data == "sine-gordon") {
        data = [h, kink](long, long k2) { return kink(h * static_cast<double>(k2)); };
    } else {
        const long n = w.i2_max + 4;
        SolverConfig c1 = cfg;
        c1.max_iters = std::max(cfg.max_iters, 1000000L);
        RelaxResult line = relax_profile_1d(kink, pot, h, n, c1);
        if (!line.converged) throw Error(ErrorKind::solver_failure, "1D profile did not converge");
        std::vector<double> v;
        for (long k2 = -n - 1; k2 <= n + 1; ++k2) v.push_back(line.u.at(0, k2));
        data = [h, n, v, kink](long, long k2) {
            if (k2 < -n - 1 || k2 > n + 1) return kink(h * static_cast<double>(k2));
            return v[static_cast<std::size_t>(k2 + n + 1)];
        };
    }
    Field u0 = sample(data, w);
    if (a.init == "random") {
        std::mt19937_64 rng(a.seed);
        std::uniform_real_distribution<double> U(-0.5, 0.5);
        for (long k1 = w.i1_min; k1 <= w.i1_max; ++k1)
            for (long k2 = w.i2_min; k2 <= w.i2_max; ++k2) u0.set(k1, k2, u0.at(k1, k2) + U(rng));
    }
    u0.closure = nullptr;
    RelaxResult r = relax(u0, pot, cfg);

    std::ostringstream buf;
    buf << "iters,final_residual_max,converged,energy_initial,energy_final,halvings,step\n";
    buf << r.iters << ',' << fmt17(r.final_residual_max) << ',' << (r.converged ? 1 : 0) << ','
        << fmt17(r.energy.front()) << ',' << fmt17(r.energy.back()) << ',' << r.halvings << ','
        << fmt17(r.final_step) << '\n';
    if (a.verify) {
        Field u = with_halo(r.u, 3);
        SourceTerm src;
        const double d = a.d;
        src.f = [pot, d](long k1, long k2, double x) { return pot.dV(k1, k2, x) / d; };
        src.Lf_plus = [pot, d](long k1, long k2, double x) {
            const double e = 1e-6 * std::max(1.0, std::abs(x));
            return (pot.dV(k1, k2, x + e) - pot.dV(k1, k2, x - e)) / (2.0 * e * d);
        };
        AngularData ang = decompose(u);
        KappaOptions opt;
        opt.theta_inf_plus = a.theta_inf.value_or(default_theta_inf(ang, Sign::plus));
        opt.theta_inf_minus = a.theta_inf.value_or(default_theta_inf(ang, Sign::minus));
        opt.tails = TailModels::uniform({{Decay::domain, 0}, {Decay::domain, 0}});
        KappaReport k = compute_kappas(u, ang, src, opt);
        TheoremReport t = verify_theorem(k, ang, h, a.mode == "tutta" ? TheoremMode::tutta : TheoremMode::form_plus);
        buf << "# diagnostics on the core shrunk by 3 rings\n";
        buf << "kappa0,kappa1,kappa2,kappa3,kappa4,kappa5,kappa6,kappa7,lhs,C,Ch,verdict,equation_residual,"
               "remainder_violations,invalid_sites\n";
        for (int m = 0; m < 8; ++m) buf << fmt17(k.plus.kappa[m]) << ',';
        buf << fmt17(t.lhs) << ',' << fmt17(t.constant_C) << ',' << fmt17(t.bound_Ch) << ',' << to_string(t.verdict)
            << ',' << fmt17(equation_residual(u, src)) << ',';
        try {
            buf << linearized_residual(u, src, ang).violations;
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::equation_residual_too_large) throw;
            err << e.what() << "\n";
        }
        buf << ',' << k.invalid_site_count << '\n';
    }
    out << buf.str();
    if (!a.out.empty()) {
        Sink s(a.out, out);
        write_field_csv(*s, r.u);
        s.close();
    }
    if (!r.converged)
        err << "no convergence after " << r.iters << " iterations; residual " << fmt17(r.final_residual_max) << "\n";
    return r.converged ? ok : math;
}

int cmd_export(const Args& a, std::ostream& out, std::ostream&)
{
    ExampleSpec ex = make_example(a, a.h);
    Field u = sample(ex.u, make_window(a.h, a.radius, 4));
    std::ostringstream buf;
    write_field_csv(buf, u);
    Sink s(a.out, out);
    *s << buf.str();
    s.close();
    if (!a.angular.empty()) {
        Sink s2(a.angular, out);
        write_angular_csv(*s2, decompose(u));
        s2.close();
    }
    return ok;
}

// Appends key=value pairs from the --config file for keys not already on the command line.
std::vector<std::string> merge_config(int argc, const char* const* argv)
{
    std::vector<std::string> args(argv, argv + argc);
    std::string path;
    for (std::size_t i = 1; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
        if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
    }
    if (path.empty()) return args;
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::io, "cannot open config '" + path + "'");
    auto given = [&](const std::string& key) {
        for (std::size_t i = 1; i < args.size(); ++i)
            if (args[i] == "--" + key || args[i].rfind("--" + key + "=", 0) == 0) return true;
        return false;
    };
    std::vector<std::string> extra;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto b = line.find_first_not_of(" \t\r"), e = line.find_last_not_of(" \t\r");
        if (b == std::string::npos) continue;
        line = line.substr(b, e - b + 1);
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw Error(ErrorKind::invalid_argument, path + ":" + std::to_string(lineno) + ": expected key=value");
        std::string key = line.substr(0, eq), val = line.substr(eq + 1);
        key.erase(key.find_last_not_of(" \t") + 1);
        val.erase(0, val.find_first_not_of(" \t"));
        if (key == "config" || given(key)) continue;
        if (val == "true") {
            extra.push_back("--" + key);
        } else if (val != "false") {
            extra.push_back("--" + key);
            extra.push_back(val);
        }
    }
    args.insert(args.end(), extra.begin(), extra.end());
    return args;
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    Args a;
    CLI::App app{"Angular-function rigidity diagnostics for discrete Frenkel-Kontorova equilibria"};
    app.set_help_flag("--help", "print help");
    app.require_subcommand(1);

    auto* verify = app.add_subcommand("verify", "run the full diagnostic pipeline at one h");
    add_common(verify, a);
    verify->add_option("--mode", a.mode, "form or tutta")->check(CLI::IsMember({"form", "tutta"}));

    auto* sweep = app.add_subcommand("sweep", "run the pipeline over several h and fit rates");
    add_common(sweep, a);
    sweep->add_option("--h-list", a.h_list, "comma-separated h values")->required();
    sweep->add_option("--mode", a.mode, "form or tutta")->check(CLI::IsMember({"form", "tutta"}));

    auto* recon = app.add_subcommand("reconstruct", "check one-dimensionality and rebuild from a 1D profile");
    add_common(recon, a);
    recon->add_option("--field", a.field, "field CSV to test instead of a built-in example");

    auto* relaxc = app.add_subcommand("relax", "relax a configuration to an equilibrium");
    add_common(relaxc, a);
    relaxc->add_option("--potential", a.potential, "zero or sine-gordon")
        ->check(CLI::IsMember({"zero", "sine-gordon"}));
    relaxc->add_option("--d", a.d, "spring constant");
    relaxc->add_option("--data", a.data, "boundary and seed data")
        ->check(CLI::IsMember({"affine", "sine-gordon", "sine-gordon-1d"}));
    relaxc->add_option("--init", a.init, "data or random")->check(CLI::IsMember({"data", "random"}));
    relaxc->add_option("--boundary", a.boundary, "dirichlet or periodic")
        ->check(CLI::IsMember({"dirichlet", "periodic"}));
    relaxc->add_option("--seed", a.seed, "seed for --init random");
    relaxc->add_option("--step", a.step, "initial step (default h^2/(4d))");
    relaxc->add_option("--max-iters", a.max_iters, "iteration cap");
    relaxc->add_flag("--verify", a.verify, "run the diagnostics on the result");
    relaxc->add_option("--mode", a.mode, "form or tutta")->check(CLI::IsMember({"form", "tutta"}));

    auto* exportc = app.add_subcommand("export-field", "write an example field as CSV");
    add_common(exportc, a);
    exportc->add_option("--angular", a.angular, "also write rho/theta CSV here");

    try {
        std::vector<std::string> args = merge_config(argc, argv);
        std::vector<const char*> cargs;
        for (const std::string& s : args) cargs.push_back(s.c_str());
        try {
            app.parse(static_cast<int>(cargs.size()), cargs.data());
        } catch (const CLI::ParseError& e) {
            app.exit(e, out, err);
            return e.get_exit_code() == 0 ? ok : usage;
        }
        if (*verify) return cmd_verify(a, out, err);
        if (*sweep) return cmd_sweep(a, out, err);
        if (*recon) return cmd_reconstruct(a, out, err);
        if (*relaxc) return cmd_relax(a, out, err);
        return cmd_export(a, out, err);
    } catch (const Error& e) {
        err << e.what() << "\n";
        switch (e.kind()) {
        case ErrorKind::invalid_argument:
        case ErrorKind::io:
        case ErrorKind::window_mismatch:
        case ErrorKind::stencil_out_of_range: return usage;
        default: return math;
        }
    } catch (const std::exception& e) {
        err << e.what() << "\n";
        return usage;
    }
}

} // namespace fk::cli
