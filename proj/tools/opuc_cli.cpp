// Command-line front end: parse measure or coefficient specs, dispatch the
// library computations, and emit CSV tables and verification reports.
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "opuc/opuc.hpp"

namespace {

using opuc::cplx;

// full-precision scientific notation so downstream diffs are exact
std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

struct OutputTarget {
    std::string path;

    void write(const std::string& content) const {
        if (path.empty()) {
            std::cout << content;
            return;
        }
        std::ofstream out(path, std::ios::binary);
        if (!out) throw opuc::Error("cannot open output file: " + path);
        out << content;
    }
};

std::vector<cplx> parse_grid(const std::string& grid_spec, const std::string& points_spec) {
    std::vector<cplx> pts;
    if (!grid_spec.empty()) {
        const auto x = grid_spec.find('x');
        if (x == std::string::npos)
            throw opuc::ParseError("grid spec must look like \"r1,r2x8\"");
        std::vector<double> radii;
        std::stringstream rs(grid_spec.substr(0, x));
        for (std::string tok; std::getline(rs, tok, ',');) radii.push_back(std::stod(tok));
        const int count = std::stoi(grid_spec.substr(x + 1));
        if (count < 1) throw opuc::ParseError("grid spec needs at least one angle");
        for (double r : radii)
            for (int k = 0; k < count; ++k)
                pts.push_back(std::polar(r, opuc::two_pi * k / count));
    }
    if (!points_spec.empty()) {
        std::stringstream ps(points_spec);
        for (std::string tok; std::getline(ps, tok, ';');) {
            const auto comma = tok.find(',');
            if (comma == std::string::npos)
                throw opuc::ParseError("point list entries must look like \"re,im\"");
            pts.emplace_back(std::stod(tok.substr(0, comma)), std::stod(tok.substr(comma + 1)));
        }
    }
    if (pts.empty()) throw opuc::ParseError("no evaluation points: pass --grid or --points");
    return pts;
}

cplx parse_point(const std::string& spec) {
    const auto comma = spec.find(',');
    if (comma == std::string::npos) return cplx(std::stod(spec), 0.0);
    return cplx(std::stod(spec.substr(0, comma)), std::stod(spec.substr(comma + 1)));
}

struct LawConfig {
    double radius = 0.5;
    std::uint64_t seed = 0;
    bool present = false;
};

LawConfig law_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw opuc::ParseError("cannot open input file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw opuc::ParseError(std::string("invalid JSON in ") + path + ": " + e.what());
    }
    LawConfig cfg;
    if (j.contains("law")) {
        if (j.at("law").get<std::string>() != "uniform-disk")
            throw opuc::ParseError("unknown stochastic law (only \"uniform-disk\" is supported)");
        cfg.present = true;
        cfg.radius = j.value("radius", 0.5);
        cfg.seed = j.value("seed", std::uint64_t{0});
    }
    return cfg;
}

int cmd_verblunsky(const std::string& input, int order, const OutputTarget& out) {
    const auto spec = opuc::load_input(input);
    if (!spec.measure)
        throw opuc::ParseError("verblunsky: input must be a measure spec");
    const auto v = opuc::verblunsky_from_measure(*spec.measure, order);
    std::string csv = "j,alpha_re,alpha_im,rho\n";
    for (std::size_t j = 0; j < v.size(); ++j) {
        csv += std::to_string(j) + "," + fmt(v.alpha(j).real()) + "," + fmt(v.alpha(j).imag()) +
               "," + fmt(v.rho(j)) + "\n";
    }
    out.write(csv);
    return 0;
}

opuc::Evaluator build_quantity(const std::string& quantity, const opuc::InputSpec& spec) {
    const bool from_measure = spec.measure.has_value();
    if (quantity == "F")
        return from_measure ? opuc::caratheodory(*spec.measure)
                            : opuc::caratheodory_from_alphas(*spec.alphas);
    if (quantity == "R")
        return from_measure
                   ? opuc::r_function(*spec.measure)
                   : opuc::r_from_caratheodory(opuc::caratheodory_from_alphas(*spec.alphas));
    if (quantity == "f")
        return from_measure ? opuc::schur_from_caratheodory(opuc::caratheodory(*spec.measure))
                            : opuc::schur_from_alphas(*spec.alphas);
    if (quantity == "D")
        return from_measure ? opuc::szego_function(*spec.measure)
                            : opuc::szego_function(opuc::measure_from_alphas(*spec.alphas));
    if (quantity == "delta0D")
        return from_measure ? opuc::delta0D(*spec.measure) : opuc::delta0D(*spec.alphas);
    if (quantity == "m_tilde") {
        const opuc::Evaluator F = from_measure ? opuc::caratheodory(*spec.measure)
                                               : opuc::caratheodory_from_alphas(*spec.alphas);
        return [F](cplx z) { return opuc::m_tilde(F(z)); };
    }
    if (quantity == "m_plus0") {
        cplx alpha0;
        opuc::Evaluator f;
        if (from_measure) {
            const auto chain = opuc::SchurChain::from_measure(*spec.measure, 1);
            alpha0 = chain.alpha(0);
            f = chain.level(0);
        } else {
            alpha0 = spec.alphas->empty() ? cplx(0.0) : spec.alphas->alpha(0);
            f = opuc::schur_from_alphas(*spec.alphas);
        }
        return [alpha0, f](cplx z) { return opuc::m_plus0(alpha0, f(z), z); };
    }
    if (quantity == "green") {
        if (from_measure)
            throw opuc::ParseError("green: input must be a coefficient spec with both sides");
        const auto f_plus = opuc::schur_from_alphas(*spec.alphas);
        const auto f_minus = opuc::reflected_schur(spec.alphas_minus);
        return [f_plus, f_minus](cplx z) { return opuc::cmv_green(f_plus, f_minus, z); };
    }
    throw opuc::ParseError("unknown quantity \"" + quantity + "\"");
}

int cmd_evaluate(const std::string& input, const std::string& quantity,
                 const std::string& grid_spec, const std::string& points_spec,
                 const OutputTarget& out) {
    const auto spec = opuc::load_input(input);
    const auto eval = build_quantity(quantity, spec);
    const auto pts = parse_grid(grid_spec, points_spec);
    std::string csv = "z_re,z_im,quantity,value_re,value_im\n";
    for (cplx z : pts) {
        const cplx val = eval(z);
        csv += fmt(z.real()) + "," + fmt(z.imag()) + "," + quantity + "," + fmt(val.real()) +
               "," + fmt(val.imag()) + "\n";
    }
    out.write(csv);
    return 0;
}

struct CheckRow {
    std::string name;
    double residual;
    double tolerance;
    bool pass() const { return residual <= tolerance; }
};

int emit_report(const std::vector<CheckRow>& rows, const OutputTarget& out) {
    std::string csv = "check,residual,tolerance,pass\n";
    bool all_pass = true;
    for (const auto& row : rows) {
        all_pass = all_pass && row.pass();
        csv += row.name + "," + fmt(row.residual) + "," + fmt(row.tolerance) + "," +
               (row.pass() ? "1" : "0") + "\n";
    }
    out.write(csv);
    return all_pass ? 0 : 1;
}

int cmd_verify(const std::string& input, const std::string& suite, int order, cplx z,
               int steps, int samples, std::uint64_t seed, double tolerance,
               const OutputTarget& out) {
    std::vector<CheckRow> rows;

    if (suite == "sumrule") {
        const auto spec = opuc::load_input(input);
        if (spec.measure) {
            const double tol = tolerance > 0 ? tolerance : 1e-5;
            for (const auto& rep : opuc::step_sum_rule(*spec.measure, order))
                rows.push_back({"step_" + std::to_string(rep.step), rep.abs_error(), tol});
        } else {
            const double tol = tolerance > 0 ? tolerance : 1e-8;
            for (const auto& rep : opuc::step_sum_rule(*spec.alphas, order))
                rows.push_back({"step_" + std::to_string(rep.step), rep.abs_error(), tol});
            const auto cum = opuc::cumulative_sum_rule(*spec.alphas, order);
            rows.push_back({"cumulative", cum.abs_error(), tol});
        }
    } else if (suite == "szego") {
        const auto spec = opuc::load_input(input);
        const double tol = tolerance > 0 ? tolerance : 1e-9;
        for (int n = 1; n <= order; ++n) {
            const auto rep = spec.measure ? opuc::szego_theorem_check(*spec.measure, n)
                                          : opuc::szego_theorem_check(*spec.alphas, n);
            rows.push_back({"equality_" + std::to_string(n), rep.equality_error, tol});
            rows.push_back({"margin_" + std::to_string(n),
                            rep.inequality_margin < 0 ? -rep.inequality_margin : 0.0, tol});
        }
    } else if (suite == "weyl") {
        const auto spec = opuc::load_input(input);
        const int K = order > 8 ? order : 400;
        const opuc::VerblunskySeq v =
            spec.measure ? opuc::verblunsky_from_measure(*spec.measure, std::min(K, 120))
                         : *spec.alphas;
        const cplx F = spec.measure ? opuc::caratheodory(*spec.measure)(z)
                                    : opuc::caratheodory_from_alphas(v)(z);
        const auto fit = opuc::weyl_beta(v, z, K);
        const double tol = tolerance > 0 ? tolerance : 1e-6;
        rows.push_back({"beta_error", std::abs(fit.beta_hat - F), tol});
        const double true_tail = opuc::weyl_tail_sum(v, z, F, K);
        const double perturbed = opuc::weyl_tail_sum(v, z, F + 0.1, K);
        rows.push_back({"tail_factor", 1e3 * true_tail / perturbed, 1.0});
    } else if (suite == "kotani") {
        const auto law = law_from_file(input);
        const std::uint64_t run_seed = seed != 0 ? seed : law.seed;
        const auto rep = opuc::lyapunov_stochastic({law.radius}, z, steps, samples, run_seed);
        rows.push_back({"kotani_identity", rep.identity_residual, rep.identity_threshold});
    } else if (suite == "ratio") {
        const auto spec = opuc::load_input(input);
        const opuc::VerblunskySeq v =
            spec.measure ? opuc::verblunsky_from_measure(*spec.measure, std::max(order, 4))
                         : *spec.alphas;
        const double tol_interior = tolerance > 0 ? tolerance : 1e-11;
        int idx = 0;
        for (cplx zz : {z, cplx(0.3, 0.2), cplx(-0.4, 0.35), cplx(0.1, -0.6)}) {
            const auto res = opuc::ratio_identity_check(v, zz);
            rows.push_back({"interior_" + std::to_string(idx), res.ratio_identity, tol_interior});
            rows.push_back({"disk_" + std::to_string(idx), res.disk_identity, tol_interior});
            ++idx;
        }
        for (int j = 0; j < 12; ++j) {
            const double theta = opuc::two_pi * j / 12.0;
            const double via_ladder = opuc::weight_ratio_boundary(v, theta);
            const double direct = opuc::weight_from_alphas(v, theta) /
                                  opuc::weight_from_alphas(v.shifted(1), theta);
            rows.push_back({"boundary_" + std::to_string(j), std::abs(via_ladder - direct), 1e-5});
        }
    } else {
        throw opuc::ParseError("unknown suite \"" + suite + "\"");
    }
    return emit_report(rows, out);
}

int cmd_lyapunov(const std::string& input, cplx z, int steps, int samples, std::uint64_t seed,
                 const std::string& convergence_path, const OutputTarget& out) {
    const auto law = law_from_file(input);
    std::string csv;
    if (law.present) {
        const std::uint64_t run_seed = seed != 0 ? seed : law.seed;
        const auto rep = opuc::lyapunov_stochastic({law.radius}, z, steps, samples, run_seed);
        csv = "z_re,z_im,gamma,gamma_stderr,mean_log_mplus,mplus_stderr,identity_residual,"
              "identity_threshold,identity_pass\n";
        csv += fmt(z.real()) + "," + fmt(z.imag()) + "," + fmt(rep.gamma) + "," +
               fmt(rep.gamma_stderr) + "," + fmt(rep.mean_log_mplus) + "," +
               fmt(rep.mplus_stderr) + "," + fmt(rep.identity_residual) + "," +
               fmt(rep.identity_threshold) + "," + (rep.identity_ok ? "1" : "0") + "\n";
        out.write(csv);
        return 0;
    }
    const auto spec = opuc::load_input(input);
    if (!spec.alphas)
        throw opuc::ParseError("lyapunov: deterministic runs need a coefficient spec");
    const auto rep = opuc::lyapunov_deterministic(*spec.alphas, z);
    csv = "z_re,z_im,gamma2,gamma,gamma2_mplus,mc_stderr,converged\n";
    csv += fmt(z.real()) + "," + fmt(z.imag()) + "," + fmt(rep.gamma2) + "," + fmt(rep.gamma) +
           "," + fmt(rep.gamma2_mplus) + "," + fmt(rep.mc_stderr) + "," +
           (rep.converged ? "1" : "0") + "\n";
    out.write(csv);
    if (!convergence_path.empty()) {
        // second-kind over first-kind convergence table at the same point
        const int n_max = std::min<int>(static_cast<int>(spec.alphas->size()), 60);
        std::string table = "n,abs_error\n";
        for (const auto& row : opuc::f_limit_table(*spec.alphas, z, n_max))
            table += std::to_string(row.n) + "," + fmt(row.abs_error) + "\n";
        OutputTarget{convergence_path}.write(table);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical toolkit for orthogonal polynomials on the unit circle"};
    app.require_subcommand(1);

    std::string input, output, quantity = "F", suite = "sumrule", grid, points, z_spec = "0.5,0";
    std::string convergence;
    int order = 8, steps = 2000, samples = 200;
    std::uint64_t seed = 0;
    double tolerance = -1.0;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--input", input, "measure or coefficient spec (JSON)")->required();
        cmd->add_option("--output", output, "output CSV path (stdout if omitted)");
    };

    auto* verblunsky = app.add_subcommand("verblunsky", "extract recursion coefficients");
    add_common(verblunsky);
    verblunsky->add_option("--order", order, "number of coefficients");

    auto* evaluate = app.add_subcommand("evaluate", "evaluate an analytic quantity on a z-grid");
    add_common(evaluate);
    evaluate->add_option("--quantity", quantity,
                         "F | R | f | D | delta0D | m_tilde | m_plus0 | green");
    evaluate->add_option("--grid", grid, "product grid \"r1,r2x<angles>\"");
    evaluate->add_option("--points", points, "explicit list \"re,im;re,im;...\"");

    auto* verify = app.add_subcommand("verify", "run a verification suite");
    add_common(verify);
    verify->add_option("--suite", suite, "sumrule | szego | weyl | kotani | ratio");
    verify->add_option("--order", order, "order / truncation / fit length");
    verify->add_option("--z", z_spec, "evaluation point \"re,im\"");
    verify->add_option("--steps", steps, "steps per stochastic sample");
    verify->add_option("--samples", samples, "stochastic sample count");
    verify->add_option("--seed", seed, "stochastic seed (overrides the law spec)");
    verify->add_option("--tolerance", tolerance, "override the default tolerance");

    auto* lyapunov = app.add_subcommand("lyapunov", "growth and decay rates of the cocycle");
    add_common(lyapunov);
    lyapunov->add_option("--z", z_spec, "evaluation point \"re,im\"");
    lyapunov->add_option("--steps", steps, "steps per stochastic sample");
    lyapunov->add_option("--samples", samples, "stochastic sample count");
    lyapunov->add_option("--seed", seed, "stochastic seed (overrides the law spec)");
    lyapunov->add_option("--convergence", convergence,
                         "also write the second-kind ratio convergence table here");

    CLI11_PARSE(app, argc, argv);

    try {
        const OutputTarget out{output};
        if (verblunsky->parsed()) return cmd_verblunsky(input, order, out);
        if (evaluate->parsed()) return cmd_evaluate(input, quantity, grid, points, out);
        if (verify->parsed())
            return cmd_verify(input, suite, order, parse_point(z_spec), steps, samples, seed,
                              tolerance, out);
        if (lyapunov->parsed())
            return cmd_lyapunov(input, parse_point(z_spec), steps, samples, seed, convergence, out);
    } catch (const opuc::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const opuc::BoundaryPoint& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const opuc::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
