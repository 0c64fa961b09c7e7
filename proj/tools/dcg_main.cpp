// dcg — scenario runner for the coarse-graining library.
//   dcg run <config|preset>   run methods from a config file or named preset
//   dcg compare <a> <b>       per-column max deviation between two CSVs
//   dcg presets               list built-in figure presets
//   dcg check                 quick invariant suite on default models

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "dcg/lindblad.hpp"
#include "dcg/scenario.hpp"

namespace {

int run_command(const std::string& source, const std::string& out_dir, int nodes_2d, int nodes_3d,
                int nodes_4d, double tol, bool parallel) {
    dcg::cli::Scenario scenario;
    try {
        std::string text;
        if (std::filesystem::exists(source)) {
            std::ifstream in(source);
            std::stringstream ss;
            ss << in.rdbuf();
            text = ss.str();
        } else {
            // fall back to a preset name
            text = "preset = " + source + "\n";
        }
        scenario = dcg::cli::parse_config(text);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    if (!out_dir.empty()) scenario.out_dir = out_dir;
    if (nodes_2d > 0) scenario.quad.nodes_2d = nodes_2d;
    if (nodes_3d > 0) scenario.quad.nodes_3d = nodes_3d;
    if (nodes_4d > 0) scenario.quad.nodes_4d = nodes_4d;
    if (tol > 0.0) scenario.quad.tol = tol;
    if (parallel) scenario.parallel = true;

    try {
        const auto report = dcg::cli::run_scenario(scenario);
        for (const auto& m : report.methods) {
            std::cout << m.method << ": "
                      << (m.ok ? "ok" : std::string("FAILED (") + m.error + ")");
            if (m.ok) {
                std::cout << "  max|tr-1| = " << m.max_trace_dev << "  min_eig = " << m.min_eig;
                if (std::isfinite(m.max_dev_from_exact))
                    std::cout << "  max_dev_vs_exact = " << m.max_dev_from_exact;
            }
            std::cout << "\n";
        }
        return report.all_ok() ? 0 : 2;
    } catch (const dcg::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    }
}

int compare_command(const std::string& a, const std::string& b) {
    try {
        const auto deltas = dcg::cli::compare(a, b);
        std::cout << "column, max_abs_dev, at_t\n";
        for (const auto& d : deltas)
            std::cout << d.column << ", " << d.max_abs_dev << ", " << d.at_t << "\n";
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

bool check_line(const char* label, bool pass) {
    std::cout << (pass ? "PASS" : "FAIL") << "  " << label << "\n";
    return pass;
}

int check_command() {
    using namespace dcg;
    bool all = true;
    std::mt19937_64 rng(20240817);

    // vectorization round trip
    {
        std::normal_distribution<double> dist(0.0, 1.0);
        bool ok = true;
        for (std::size_t d = 1; d <= 8; ++d) {
            ComplexMatrix m(d, d);
            for (auto& v : m.data()) v = cplx{dist(rng), dist(rng)};
            ok = ok && (devectorize(vectorize(m)) - m).max_abs() == 0.0;
        }
        all &= check_line("vectorize/devectorize round trip (dims 1..8)", ok);
    }
    // unitarity of exp(-iHt)
    {
        std::normal_distribution<double> dist(0.0, 1.0);
        ComplexMatrix g(4, 4);
        for (auto& v : g.data()) v = cplx{dist(rng), dist(rng)};
        const ComplexMatrix h = g + g.dagger();
        const auto u = matrix_exponential(cplx{0.0, -3.7} * h);
        all &= check_line("exp(-iHt) unitary",
                          (u * u.dagger() - ComplexMatrix::identity(4)).max_abs() < 1e-10);
    }
    // two-spin dampening matrix closed form and PSD
    {
        SystemSpec sys;
        sys.dim = 2;
        sys.h_s = ops::sigma_z();
        sys.couplings = {{ops::sigma_x(), 0}, {ops::sigma_y(), 1}, {ops::sigma_z(), 2}};
        sys.lambda = 0.25;
        bath::BathModel bm = bath::TwoSpinBath{2.0, 0.3, bath::TwoSpinBath::Coupling::Heisenberg};
        const auto g = lindblad::dampening_matrix(1.0, sys, bm);
        const double sinc1 = std::sin(1.0);
        const bool closed =
            std::abs(g(0, 1, 0, 1) - cplx{4.0 * 0.3 * sinc1 * sinc1, 0.0}) < 1e-10;
        const auto rep = lindblad::certify_psd(g);
        all &= check_line("two-spin dampening matrix closed form", closed);
        all &= check_line("two-spin dampening matrix PSD", rep.is_psd && rep.gershgorin_pass);
    }
    // DCG2 positivity on a short trajectory
    {
        SystemSpec sys;
        sys.dim = 2;
        sys.h_s = ops::sigma_z();
        sys.couplings = {{ops::sigma_x(), 0}, {ops::sigma_y(), 1}, {ops::sigma_z(), 2}};
        sys.lambda = 0.25;
        bath::BathModel bm = bath::TwoSpinBath{2.0, 0.5, bath::TwoSpinBath::Coupling::Heisenberg};
        const auto rho0 = DensityMatrix::pure({cplx{0.8, 0.0}, cplx{0.0, 0.6}});
        const auto states = engine::dcg_propagate(sys, bm, 2, rho0, {0.5, 5.0, 15.0});
        bool ok = true;
        for (const auto& st : states) ok = ok && st.min_eigenvalue() >= -1e-8;
        all &= check_line("DCG2 propagation preserves positivity", ok);
    }
    // BMS width independence for the transport model
    {
        models::FanoParams p;
        p.eps_d = 1.0;
        p.leads = {1.0, 1.0, 2.0, 1.0, 1.0, 1.0};
        p.lambda = std::sqrt(0.1);
        models::FanoParams q = p;
        q.leads.delta_r = 5.0;
        bool ok = true;
        for (double t : {0.5, 3.0, 12.0})
            ok = ok && models::fano_bms_population(t, p, 1.0) ==
                           models::fano_bms_population(t, q, 1.0);
        all &= check_line("Markovian transport solution independent of rate widths", ok);
    }
    std::cout << (all ? "all checks passed" : "CHECKS FAILED") << "\n";
    return all ? 0 : 2;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"dynamical coarse-graining scenario runner"};
    app.require_subcommand(1);

    std::string config, out_dir, file_a, file_b;
    int nodes_2d = 0, nodes_3d = 0, nodes_4d = 0;
    double tol = 0.0;
    bool parallel = false;

    auto* run = app.add_subcommand("run", "run a scenario from a config file or preset name");
    run->add_option("config", config, "config file path or preset name")->required();
    run->add_option("--out-dir", out_dir, "output directory for CSV files");
    run->add_option("--quad-nodes-2d", nodes_2d, "Gauss-Legendre nodes per axis, 2D");
    run->add_option("--quad-nodes-3d", nodes_3d, "Gauss-Legendre nodes per axis, 3D");
    run->add_option("--quad-nodes-4d", nodes_4d, "Gauss-Legendre nodes per axis, 4D");
    run->add_option("--tol", tol, "quadrature tolerance");
    run->add_flag("--parallel", parallel, "run methods concurrently");

    auto* cmp = app.add_subcommand("compare", "column-wise max deviation between two CSV files");
    cmp->add_option("a", file_a, "first CSV")->required();
    cmp->add_option("b", file_b, "second CSV")->required();

    auto* presets = app.add_subcommand("presets", "list built-in presets");
    auto* check = app.add_subcommand("check", "run the quick invariant suite");

    CLI11_PARSE(app, argc, argv);

    if (run->parsed())
        return run_command(config, out_dir, nodes_2d, nodes_3d, nodes_4d, tol, parallel);
    if (cmp->parsed()) return compare_command(file_a, file_b);
    if (presets->parsed()) {
        for (const auto& name : dcg::cli::preset_names()) {
            const auto s = dcg::cli::preset(name);
            std::cout << name << ": " << dcg::cli::model_name(s.model) << ", methods";
            for (auto m : s.methods) std::cout << " " << dcg::cli::method_name(m);
            std::cout << ", t_max = " << s.t_max << ", n_points = " << s.n_points << "\n";
        }
        return 0;
    }
    if (check->parsed()) return check_command();
    return 0;
}
