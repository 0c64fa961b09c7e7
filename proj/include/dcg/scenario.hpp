// scenario.hpp — Config-driven scenario runner: parse a flat key = value
// config, run the requested methods on a time grid, emit CSV trajectories and
// a summary report.

#pragma once

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <future>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "dcg/engine.hpp"
#include "dcg/models.hpp"
#include "dcg/oracles.hpp"

namespace dcg::cli {

enum class Model {
    TwoSpinHeisenberg,
    TwoSpinSxSz,
    SpinBosonDephasing,
    SpinBosonDissipative,
    FanoAnderson,
};

enum class Method { Dcg1, Dcg2, Dcg3, Dcg4, Bms, Exact };

inline const char* method_name(Method m) {
    switch (m) {
        case Method::Dcg1: return "dcg1";
        case Method::Dcg2: return "dcg2";
        case Method::Dcg3: return "dcg3";
        case Method::Dcg4: return "dcg4";
        case Method::Bms: return "bms";
        default: return "exact";
    }
}

inline const char* model_name(Model m) {
    switch (m) {
        case Model::TwoSpinHeisenberg: return "two-spin-heisenberg";
        case Model::TwoSpinSxSz: return "two-spin-sxsz";
        case Model::SpinBosonDephasing: return "spin-boson-dephasing";
        case Model::SpinBosonDissipative: return "spin-boson-dissipative";
        default: return "fano-anderson";
    }
}

struct Scenario {
    Model model = Model::TwoSpinHeisenberg;
    std::vector<Method> methods{Method::Dcg2};

    models::TwoSpinParams two_spin{};
    models::SpinBosonParams spin_boson{};
    models::FanoParams fano{};

    double t_max = 20.0;
    int n_points = 401;

    enum class Rho0 { Ground, Excited, Plus, Custom } rho0_kind = Rho0::Excited;
    ComplexMatrix rho0_custom;

    std::string out_dir = ".";
    std::string prefix;
    engine::QuadratureConfig quad{};
    bool parallel = false;

    std::vector<double> grid() const {
        std::vector<double> t(n_points);
        for (int i = 0; i < n_points; ++i) t[i] = t_max * double(i) / double(n_points - 1);
        return t;
    }
};

struct MethodReport {
    std::string method;
    bool ok = false;
    std::string error;
    double max_trace_dev = 0.0;
    double min_eig = 0.0;
    double max_dev_from_exact = std::numeric_limits<double>::quiet_NaN();
    double wall_ms = 0.0;
};

struct PairDelta {
    std::string method_a, method_b;
    double max_abs_dev = 0.0;
    double at_t = 0.0;
};

struct RunReport {
    std::vector<MethodReport> methods;
    std::vector<PairDelta> deltas;
    bool all_ok() const {
        return std::all_of(methods.begin(), methods.end(),
                           [](const MethodReport& m) { return m.ok; });
    }
};

// ------------------------------- presets -------------------------------------

inline std::vector<std::string> preset_names() { return {"fig1", "fig2", "fig3", "fig4", "fig5"}; }

inline Scenario preset(const std::string& name) {
    Scenario s;
    if (name == "fig1") {
        s.model = Model::TwoSpinHeisenberg;
        s.two_spin = {0.25, 1.0, 2.0, 0.5};
        s.methods = {Method::Dcg2, Method::Exact};
        s.t_max = 20.0;
        s.n_points = 401;
        s.rho0_kind = Scenario::Rho0::Custom;
        s.rho0_custom = ComplexMatrix::from_rows(2, 2, {cplx{0.7, 0.0}, cplx{0.3, 0.0},
                                                        cplx{0.3, 0.0}, cplx{0.3, 0.0}});
        s.prefix = "fig1_";
    } else if (name == "fig2") {
        s.model = Model::TwoSpinSxSz;
        s.two_spin = {0.5, 1.0, 1.0, 1.0};
        s.methods = {Method::Dcg1, Method::Dcg2, Method::Dcg3, Method::Dcg4, Method::Exact};
        s.t_max = 10.0;
        s.n_points = 201;
        s.rho0_kind = Scenario::Rho0::Plus;
        s.prefix = "fig2_";
    } else if (name == "fig3") {
        s.model = Model::SpinBosonDissipative;
        s.spin_boson.eps_d = 1.0;
        s.spin_boson.bath = {1.0, 1.0, 1.0, 1.0};
        s.spin_boson.lambda = std::sqrt(0.1);
        s.spin_boson.coupling = models::SpinBosonCoupling::Dissipative;
        s.methods = {Method::Dcg2, Method::Dcg4, Method::Bms};
        s.t_max = 8.0;  // the short-time window where the methods differ
        s.n_points = 33;
        s.rho0_kind = Scenario::Rho0::Excited;
        s.prefix = "fig3_";
    } else if (name == "fig4") {
        s.model = Model::FanoAnderson;
        s.fano.eps_d = 1.0;
        s.fano.leads = {1.0, 1.0, 1.0, 1.0, 1.0, 1.0};
        s.fano.lambda = std::sqrt(0.1);
        s.methods = {Method::Dcg2, Method::Dcg4, Method::Bms, Method::Exact};
        s.t_max = 20.0;
        s.n_points = 201;
        s.rho0_kind = Scenario::Rho0::Ground;
        s.prefix = "fig4_";
    } else if (name == "fig5") {
        s.model = Model::FanoAnderson;
        s.fano.eps_d = 1.0;
        s.fano.leads = {1.0, 1.0, 2.0, 1.0, 0.0, 0.0};
        s.fano.lambda = std::sqrt(0.1);
        s.methods = {Method::Dcg2, Method::Dcg4, Method::Bms, Method::Exact};
        s.t_max = 10.0;
        s.n_points = 201;
        s.rho0_kind = Scenario::Rho0::Ground;
        s.prefix = "fig5_";
    } else {
        throw domain_error("unknown preset '" + name + "'");
    }
    return s;
}

// ------------------------------ config parsing -------------------------------

namespace detail {

inline std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(trim(item));
    return out;
}

struct ConfigErrors {
    std::vector<std::string> items;
    void add(const std::string& e) { items.push_back(e); }
    void raise_if_any() const {
        if (items.empty()) return;
        std::string msg = "invalid scenario configuration:";
        for (const auto& e : items) msg += "\n  - " + e;
        throw domain_error(msg);
    }
};

} // namespace detail

inline Scenario parse_config(const std::string& text) {
    detail::ConfigErrors errors;
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            errors.add("line " + std::to_string(line_no) + ": expected 'key = value'");
            continue;
        }
        kv[detail::trim(line.substr(0, eq))] = detail::trim(line.substr(eq + 1));
    }

    Scenario s;
    bool preset_loaded = false;
    if (auto it = kv.find("preset"); it != kv.end()) {
        try {
            s = preset(it->second);
            preset_loaded = true;
        } catch (const std::exception& e) {
            errors.add(e.what());
        }
        kv.erase(it);
    }

    auto take = [&](const char* key) -> std::optional<std::string> {
        auto it = kv.find(key);
        if (it == kv.end()) return std::nullopt;
        std::string v = it->second;
        kv.erase(it);
        return v;
    };
    auto number = [&](const char* key, double& target) {
        if (auto v = take(key)) {
            try {
                target = std::stod(*v);
            } catch (...) {
                errors.add(std::string(key) + ": not a number ('" + *v + "')");
            }
        }
    };
    auto integer = [&](const char* key, int& target) {
        if (auto v = take(key)) {
            try {
                target = std::stoi(*v);
            } catch (...) {
                errors.add(std::string(key) + ": not an integer ('" + *v + "')");
            }
        }
    };

    if (auto v = take("model")) {
        bool found = false;
        for (Model m : {Model::TwoSpinHeisenberg, Model::TwoSpinSxSz, Model::SpinBosonDephasing,
                        Model::SpinBosonDissipative, Model::FanoAnderson}) {
            if (*v == model_name(m)) {
                s.model = m;
                found = true;
            }
        }
        if (!found) errors.add("model: unknown model '" + *v + "'");
    } else if (!preset_loaded) {
        errors.add("model: required key missing (or use 'preset = ...')");
    }

    if (auto v = take("methods")) {
        s.methods.clear();
        for (const auto& name : detail::split(*v, ',')) {
            bool found = false;
            for (Method m : {Method::Dcg1, Method::Dcg2, Method::Dcg3, Method::Dcg4, Method::Bms,
                             Method::Exact}) {
                if (name == method_name(m)) {
                    s.methods.push_back(m);
                    found = true;
                }
            }
            if (!found) errors.add("methods: unknown method '" + name + "'");
        }
    }

    number("t_max", s.t_max);
    integer("n_points", s.n_points);

    // model parameters
    number("lambda", s.two_spin.lambda);
    number("omega", s.two_spin.omega);
    number("Omega", s.two_spin.Omega);
    number("rho_b00", s.two_spin.rho_b00);

    double lambda_sq = -1.0;
    number("lambda_sq", lambda_sq);
    if (lambda_sq >= 0.0) {
        s.spin_boson.lambda = std::sqrt(lambda_sq);
        s.fano.lambda = std::sqrt(lambda_sq);
        s.two_spin.lambda = std::sqrt(lambda_sq);
    }
    double eps_d = std::numeric_limits<double>::quiet_NaN();
    number("epsilon_d", eps_d);
    if (std::isfinite(eps_d)) {
        s.spin_boson.eps_d = eps_d;
        s.fano.eps_d = eps_d;
    }
    number("bath.g0", s.spin_boson.bath.g0);
    number("bath.s", s.spin_boson.bath.s);
    number("bath.omega_c", s.spin_boson.bath.omega_c);
    number("bath.beta", s.spin_boson.bath.beta);
    number("lead_l.gamma0", s.fano.leads.gamma_l0);
    number("lead_l.delta", s.fano.leads.delta_l);
    number("lead_l.epsilon", s.fano.leads.eps_l);
    number("lead_r.gamma0", s.fano.leads.gamma_r0);
    number("lead_r.delta", s.fano.leads.delta_r);
    number("lead_r.epsilon", s.fano.leads.eps_r);

    if (auto v = take("rho0")) {
        if (*v == "ground")
            s.rho0_kind = Scenario::Rho0::Ground;
        else if (*v == "excited")
            s.rho0_kind = Scenario::Rho0::Excited;
        else if (*v == "plus")
            s.rho0_kind = Scenario::Rho0::Plus;
        else if (*v == "custom")
            s.rho0_kind = Scenario::Rho0::Custom;
        else
            errors.add("rho0: unknown preset '" + *v + "'");
    }
    if (auto v = take("rho0.matrix")) {
        const auto parts = detail::split(*v, ',');
        if (parts.size() != 8) {
            errors.add("rho0.matrix: expected 8 comma-separated values "
                       "(re00, im00, re01, im01, re10, im10, re11, im11)");
        } else {
            try {
                std::array<double, 8> x{};
                for (int i = 0; i < 8; ++i) x[i] = std::stod(parts[i]);
                s.rho0_custom = ComplexMatrix::from_rows(
                    2, 2, {cplx{x[0], x[1]}, cplx{x[2], x[3]}, cplx{x[4], x[5]}, cplx{x[6], x[7]}});
                s.rho0_kind = Scenario::Rho0::Custom;
            } catch (...) {
                errors.add("rho0.matrix: entries must be numbers");
            }
        }
    }

    if (auto v = take("out_dir")) s.out_dir = *v;
    if (auto v = take("prefix")) s.prefix = *v;
    integer("quad.nodes_2d", s.quad.nodes_2d);
    integer("quad.nodes_3d", s.quad.nodes_3d);
    integer("quad.nodes_4d", s.quad.nodes_4d);
    number("quad.tol", s.quad.tol);
    if (auto v = take("parallel")) {
        if (*v == "true" || *v == "1")
            s.parallel = true;
        else if (*v == "false" || *v == "0")
            s.parallel = false;
        else
            errors.add("parallel: expected true/false");
    }

    for (const auto& [key, value] : kv) errors.add("unknown key '" + key + "'");

    // constraint validation
    if (s.n_points < 2) errors.add("n_points >= 2 required");
    if (!(s.t_max > 0.0)) errors.add("t_max > 0 required");
    if (s.methods.empty()) errors.add("methods: at least one method required");
    const bool is_two_spin =
        s.model == Model::TwoSpinHeisenberg || s.model == Model::TwoSpinSxSz;
    for (Method m : s.methods) {
        if (m == Method::Exact && s.model == Model::SpinBosonDissipative)
            errors.add("methods: no exact oracle for spin-boson-dissipative");
        if (m == Method::Bms && is_two_spin)
            errors.add("methods: bms has no Markovian limit for finite two-spin baths");
    }
    if (s.rho0_kind == Scenario::Rho0::Custom) {
        if (s.rho0_custom.rows() != 2)
            errors.add("rho0.matrix: custom initial state required but not provided");
        else {
            try {
                DensityMatrix check(s.rho0_custom, Tolerances{1e-9, 1e-9, -1e-9});
                (void)check;
            } catch (const std::exception& e) {
                errors.add(std::string("rho0.matrix: ") + e.what());
            }
        }
    }
    try {
        s.quad.validate();
    } catch (const std::exception& e) {
        errors.add(e.what());
    }

    errors.raise_if_any();
    return s;
}

// ------------------------------ system assembly ------------------------------

namespace detail {

struct Assembled {
    SystemSpec sys;
    bath::BathModel bath;
};

inline Assembled assemble(const Scenario& s) {
    Assembled a;
    a.sys.dim = 2;
    switch (s.model) {
        case Model::TwoSpinHeisenberg:
            a.sys.h_s = ops::sigma_z() * cplx{s.two_spin.omega, 0.0};
            a.sys.couplings = {{ops::sigma_x(), 0}, {ops::sigma_y(), 1}, {ops::sigma_z(), 2}};
            a.sys.lambda = s.two_spin.lambda;
            a.bath = bath::TwoSpinBath{s.two_spin.Omega, s.two_spin.rho_b00,
                                       bath::TwoSpinBath::Coupling::Heisenberg};
            break;
        case Model::TwoSpinSxSz:
            a.sys.h_s = ops::sigma_z() * cplx{s.two_spin.omega, 0.0};
            a.sys.couplings = {{ops::sigma_x(), 0}};
            a.sys.lambda = s.two_spin.lambda;
            a.bath = bath::TwoSpinBath{s.two_spin.Omega, s.two_spin.rho_b00,
                                       bath::TwoSpinBath::Coupling::SingleSigmaZ};
            break;
        case Model::SpinBosonDephasing:
        case Model::SpinBosonDissipative: {
            a.sys.h_s = ComplexMatrix(2, 2);
            a.sys.h_s(1, 1) = s.spin_boson.eps_d;
            const bool dephasing = s.model == Model::SpinBosonDephasing;
            a.sys.couplings = {{dephasing ? ops::sigma_z() : ops::sigma_x(), 0}};
            a.sys.lambda = s.spin_boson.lambda;
            a.bath = s.spin_boson.bath;
            break;
        }
        case Model::FanoAnderson: {
            a.sys.h_s = ComplexMatrix(2, 2);
            a.sys.h_s(1, 1) = s.fano.eps_d;
            ComplexMatrix a1(2, 2), a2(2, 2);
            a1(0, 1) = -1.0;
            a2(1, 0) = -1.0;
            a.sys.couplings = {{a1, 0}, {a2, 1}};
            a.sys.lambda = s.fano.lambda;
            a.bath = s.fano.leads;
            break;
        }
    }
    return a;
}

inline DensityMatrix initial_state(const Scenario& s, const SystemSpec& sys) {
    switch (s.rho0_kind) {
        case Scenario::Rho0::Custom:
            return DensityMatrix(s.rho0_custom, Tolerances{1e-9, 1e-9, -1e-9});
        case Scenario::Rho0::Plus:
            return DensityMatrix::pure({cplx{std::sqrt(0.5), 0.0}, cplx{std::sqrt(0.5), 0.0}});
        default: {
            // ground / excited of H_S
            const auto frame = eigen_frame(sys.h_s);
            std::size_t lo = 0, hi = 0;
            for (std::size_t i = 1; i < frame.energies.size(); ++i) {
                if (frame.energies[i] < frame.energies[lo]) lo = i;
                if (frame.energies[i] > frame.energies[hi]) hi = i;
            }
            const std::size_t pick = s.rho0_kind == Scenario::Rho0::Ground ? lo : hi;
            std::vector<cplx> amp(sys.dim);
            for (std::size_t i = 0; i < sys.dim; ++i) amp[i] = frame.vectors(i, pick);
            return DensityMatrix::pure(amp);
        }
    }
}

// rotate an interaction-picture state to the Schroedinger picture
inline ComplexMatrix to_schroedinger(const ComplexMatrix& h_s, const ComplexMatrix& rho, double t) {
    const auto u = matrix_exponential(cplx{0.0, -t} * h_s);
    return u * rho * u.dagger();
}

struct Trajectory {
    std::vector<double> t;
    std::vector<ComplexMatrix> states; // Schroedinger picture; empty for population-only
    std::vector<double> rho00;
    bool matrix_valued = true;
};

inline Trajectory run_method(const Scenario& s, Method m, const Assembled& a,
                             const DensityMatrix& rho0) {
    Trajectory out;
    out.t = s.grid();
    const auto record_matrix = [&](const ComplexMatrix& rho_sch) {
        out.states.push_back(rho_sch);
        out.rho00.push_back(rho_sch(0, 0).real());
    };

    switch (m) {
        case Method::Dcg1:
        case Method::Dcg2:
        case Method::Dcg3:
        case Method::Dcg4: {
            const int order = m == Method::Dcg1 ? 1 : (m == Method::Dcg2 ? 2 : (m == Method::Dcg3 ? 3 : 4));
            const auto states = engine::dcg_propagate(a.sys, a.bath, order, rho0, out.t, s.quad);
            for (std::size_t i = 0; i < out.t.size(); ++i)
                record_matrix(to_schroedinger(a.sys.h_s, states[i].matrix(), out.t[i]));
            break;
        }
        case Method::Bms: {
            const auto linf = engine::bms_liouvillian(a.sys, a.bath);
            const auto v0 = vectorize(rho0.matrix());
            for (double t : out.t) {
                ComplexMatrix lt = linf.matrix;
                lt *= cplx{t, 0.0};
                const auto propagator = matrix_exponential(lt);
                std::vector<cplx> v(v0.size(), cplx{0.0, 0.0});
                for (std::size_t r = 0; r < v.size(); ++r)
                    for (std::size_t c = 0; c < v.size(); ++c) v[r] += propagator(r, c) * v0[c];
                record_matrix(to_schroedinger(a.sys.h_s, devectorize(v), t));
            }
            break;
        }
        case Method::Exact: {
            if (s.model == Model::TwoSpinHeisenberg || s.model == Model::TwoSpinSxSz) {
                ComplexMatrix rho_b(2, 2);
                rho_b(0, 0) = s.two_spin.rho_b00;
                rho_b(1, 1) = 1.0 - s.two_spin.rho_b00;
                const auto coupling = s.model == Model::TwoSpinHeisenberg
                                          ? oracles::TwoSpinCoupling::Heisenberg
                                          : oracles::TwoSpinCoupling::SigmaXSigmaZ;
                for (double t : out.t)
                    record_matrix(oracles::two_spin_exact(s.two_spin, coupling, rho0,
                                                          DensityMatrix(rho_b), t)
                                      .matrix());
            } else if (s.model == Model::SpinBosonDephasing) {
                for (double t : out.t) {
                    const double g = oracles::dephasing_gamma(t, s.spin_boson.bath,
                                                              s.spin_boson.lambda);
                    ComplexMatrix rho(2, 2);
                    rho(0, 0) = rho0(0, 0);
                    rho(1, 1) = rho0(1, 1);
                    rho(0, 1) = rho0(0, 1) * std::exp(-g) *
                                std::exp(I_UNIT * (s.spin_boson.eps_d * t));
                    rho(1, 0) = std::conj(rho(0, 1));
                    record_matrix(rho);
                }
            } else if (s.model == Model::FanoAnderson) {
                out.matrix_valued = false;
                oracles::FanoExactSolver solver(s.fano);
                const double n0 = 1.0 - rho0(0, 0).real();
                for (double t : out.t) out.rho00.push_back(1.0 - solver.occupation(t, n0));
            } else {
                throw unsupported_error("no exact oracle for this model");
            }
            break;
        }
    }
    return out;
}

inline void write_csv_matrix(const std::string& path, const Trajectory& tr, std::size_t dim) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw numerical_error("cannot open output file " + path);
    std::fputs("t", f);
    for (std::size_t a = 0; a < dim; ++a)
        for (std::size_t b = 0; b < dim; ++b)
            std::fprintf(f, ",re_rho_%zu_%zu,im_rho_%zu_%zu", a, b, a, b);
    std::fputc('\n', f);
    for (std::size_t i = 0; i < tr.t.size(); ++i) {
        std::fprintf(f, "%.17g", tr.t[i]);
        for (std::size_t a = 0; a < dim; ++a)
            for (std::size_t b = 0; b < dim; ++b) {
                const cplx v = tr.states[i](a, b);
                std::fprintf(f, ",%.17g,%.17g", v.real(), v.imag());
            }
        std::fputc('\n', f);
    }
    std::fclose(f);
}

inline void write_csv_rho00(const std::string& path, const Trajectory& tr) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw numerical_error("cannot open output file " + path);
    std::fputs("t,rho00\n", f);
    for (std::size_t i = 0; i < tr.t.size(); ++i)
        std::fprintf(f, "%.17g,%.17g\n", tr.t[i], tr.rho00[i]);
    std::fclose(f);
}

} // namespace detail

// ------------------------------- run_scenario --------------------------------

inline RunReport run_scenario(const Scenario& s) {
    const auto a = detail::assemble(s);
    a.sys.validate();
    const auto rho0 = detail::initial_state(s, a.sys);

    struct Slot {
        Method method;
        detail::Trajectory traj;
        MethodReport report;
    };
    std::vector<Slot> slots;
    for (Method m : s.methods) slots.push_back({m, {}, {}});

    auto run_one = [&](Slot& slot) {
        const auto start = std::chrono::steady_clock::now();
        slot.report.method = method_name(slot.method);
        try {
            slot.traj = detail::run_method(s, slot.method, a, rho0);
            slot.report.ok = true;
            double worst_trace = 0.0, min_eig = 1.0;
            if (slot.traj.matrix_valued) {
                for (const auto& rho : slot.traj.states) {
                    worst_trace =
                        std::max(worst_trace, std::abs(rho.trace() - cplx{1.0, 0.0}));
                    min_eig = std::min(min_eig, min_eigenvalue_hermitian(
                                                    0.5 * (rho + rho.dagger()), 1e-6));
                }
            } else {
                for (double r : slot.traj.rho00) {
                    worst_trace = 0.0;
                    min_eig = std::min({min_eig, r, 1.0 - r});
                }
            }
            slot.report.max_trace_dev = worst_trace;
            slot.report.min_eig = min_eig;
        } catch (const std::exception& e) {
            slot.report.ok = false;
            slot.report.error = e.what();
        }
        slot.report.wall_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                .count();
    };

    if (s.parallel) {
        std::vector<std::future<void>> futures;
        for (auto& slot : slots)
            futures.push_back(std::async(std::launch::async, [&run_one, &slot] { run_one(slot); }));
        for (auto& f : futures) f.get();
    } else {
        for (auto& slot : slots) run_one(slot);
    }

    // deviations from the exact method, when present
    const Slot* exact = nullptr;
    for (const auto& slot : slots)
        if (slot.method == Method::Exact && slot.report.ok) exact = &slot;

    auto pair_dev = [&](const detail::Trajectory& x, const detail::Trajectory& y) {
        PairDelta d;
        for (std::size_t i = 0; i < x.t.size(); ++i) {
            double dev;
            if (x.matrix_valued && y.matrix_valued)
                dev = (x.states[i] - y.states[i]).max_abs();
            else
                dev = std::abs(x.rho00[i] - y.rho00[i]);
            if (dev > d.max_abs_dev) {
                d.max_abs_dev = dev;
                d.at_t = x.t[i];
            }
        }
        return d;
    };

    RunReport report;
    for (auto& slot : slots) {
        if (exact && slot.report.ok && slot.method != Method::Exact) {
            slot.report.max_dev_from_exact = pair_dev(slot.traj, exact->traj).max_abs_dev;
        }
        report.methods.push_back(slot.report);
    }
    for (std::size_t i = 0; i < slots.size(); ++i)
        for (std::size_t j = i + 1; j < slots.size(); ++j) {
            if (!slots[i].report.ok || !slots[j].report.ok) continue;
            PairDelta d = pair_dev(slots[i].traj, slots[j].traj);
            d.method_a = method_name(slots[i].method);
            d.method_b = method_name(slots[j].method);
            report.deltas.push_back(d);
        }

    // outputs
    const std::string base = s.out_dir + "/" + s.prefix;
    for (const auto& slot : slots) {
        if (!slot.report.ok) continue;
        if (slot.traj.matrix_valued)
            detail::write_csv_matrix(base + method_name(slot.method) + ".csv", slot.traj, 2);
        if (s.model == Model::FanoAnderson || !slot.traj.matrix_valued)
            detail::write_csv_rho00(base + method_name(slot.method) + "_rho00.csv", slot.traj);
    }
    {
        std::ofstream rep(base + "report.txt");
        rep << "model = " << model_name(s.model) << "\n";
        rep.precision(9);
        for (const auto& m : report.methods) {
            rep << "method " << m.method << ": ";
            if (!m.ok) {
                rep << "FAILED (" << m.error << ")\n";
                continue;
            }
            rep << "max|tr-1| = " << m.max_trace_dev << ", min_eig = " << m.min_eig;
            if (std::isfinite(m.max_dev_from_exact))
                rep << ", max_dev_vs_exact = " << m.max_dev_from_exact;
            rep << ", wall_ms = " << m.wall_ms << "\n";
        }
        for (const auto& d : report.deltas)
            rep << "delta " << d.method_a << " vs " << d.method_b << ": " << d.max_abs_dev
                << " at t = " << d.at_t << "\n";
    }
    return report;
}

// --------------------------------- compare -----------------------------------

struct ColumnDelta {
    std::string column;
    double max_abs_dev = 0.0;
    double at_t = 0.0;
};

inline std::vector<ColumnDelta> compare(const std::string& path_a, const std::string& path_b) {
    auto load = [](const std::string& path) {
        std::ifstream in(path);
        if (!in) throw domain_error("cannot open " + path);
        std::string header;
        std::getline(in, header);
        std::vector<std::string> cols = detail::split(header, ',');
        std::vector<std::vector<double>> rows;
        std::string line;
        while (std::getline(in, line)) {
            if (detail::trim(line).empty()) continue;
            const auto parts = detail::split(line, ',');
            if (parts.size() != cols.size())
                throw domain_error(path + ": row with wrong column count");
            std::vector<double> row(parts.size());
            for (std::size_t i = 0; i < parts.size(); ++i) row[i] = std::stod(parts[i]);
            rows.push_back(std::move(row));
        }
        return std::pair{cols, rows};
    };
    const auto [cols_a, rows_a] = load(path_a);
    const auto [cols_b, rows_b] = load(path_b);
    if (cols_a != cols_b) throw domain_error("compare: header mismatch");
    if (rows_a.size() != rows_b.size()) throw domain_error("compare: row count mismatch");

    std::vector<ColumnDelta> out;
    for (std::size_t c = 1; c < cols_a.size(); ++c) {
        ColumnDelta d;
        d.column = cols_a[c];
        for (std::size_t r = 0; r < rows_a.size(); ++r) {
            const double dev = std::abs(rows_a[r][c] - rows_b[r][c]);
            if (dev > d.max_abs_dev) {
                d.max_abs_dev = dev;
                d.at_t = rows_a[r][0];
            }
        }
        out.push_back(d);
    }
    return out;
}

} // namespace dcg::cli
