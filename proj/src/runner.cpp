#include "qgeom/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <random>
#include <sstream>

#include <json.hpp>

#include "qgeom/adiabatic.hpp"
#include "qgeom/geometry.hpp"
#include "qgeom/magnetics.hpp"
#include "qgeom/models/continuum_ring.hpp"
#include "qgeom/models/interacting_ring.hpp"
#include "qgeom/models/planar_molecule.hpp"
#include "qgeom/models/position_elements.hpp"
#include "qgeom/models/rice_mele.hpp"
#include "qgeom/models/two_level.hpp"
#include "qgeom/models/two_site.hpp"
#include "qgeom/response.hpp"

namespace qgeom::runner {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

void require_keys(const json& obj, const std::string& where,
                  const std::vector<std::string>& required,
                  const std::vector<std::string>& optional) {
    if (!obj.is_object()) throw ConfigParseError(where + ": expected an object");
    for (const auto& k : required)
        if (!obj.contains(k)) throw ConfigParseError(where + ": missing key '" + k + "'");
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        const std::string& k = it.key();
        bool known = std::find(required.begin(), required.end(), k) != required.end() ||
                     std::find(optional.begin(), optional.end(), k) != optional.end();
        if (!known) throw ConfigParseError(where + ": unknown key '" + k + "'");
    }
}

double num(const json& obj, const std::string& key, double fallback) {
    return obj.contains(key) ? obj.at(key).get<double>() : fallback;
}

Params params_from(const json& task, const std::string& key = "params") {
    Params p;
    if (task.contains(key))
        for (auto it = task.at(key).begin(); it != task.at(key).end(); ++it)
            p[it.key()] = it.value().get<double>();
    return p;
}

UnitsConvention units_from(const json& doc) {
    UnitsConvention u;
    if (doc.contains("units")) {
        require_keys(doc.at("units"), "model.units", {}, {"hbar", "e_charge", "mass", "c_light"});
        u.hbar = num(doc.at("units"), "hbar", 1.0);
        u.e = num(doc.at("units"), "e_charge", 1.0);
        u.mass = num(doc.at("units"), "mass", 1.0);
        u.c = num(doc.at("units"), "c_light", 1.0);
    }
    return u;
}

Boundary boundary_from(const json& doc) {
    std::string b = doc.contains("boundary") ? doc.at("boundary").get<std::string>() : "obc";
    if (b == "obc") return Boundary::OBC;
    if (b == "pbc") return Boundary::PBC;
    throw ConfigParseError("model.boundary: expected \"obc\" or \"pbc\", got \"" + b + "\"");
}

Model build_model(const json& doc) {
    if (!doc.contains("name")) throw ConfigParseError("model: missing key 'name'");
    std::string name = doc.at("name").get<std::string>();
    UnitsConvention u = units_from(doc);

    if (name == "two_level") {
        require_keys(doc, "model", {"name", "delta"}, {"theta", "phi", "units"});
        return models::build_two_level(doc.at("delta").get<double>(), num(doc, "theta", 0),
                                       num(doc, "phi", 0));
    }
    if (name == "two_site_molecule") {
        require_keys(doc, "model", {"name", "t_hop", "delta"}, {"spacing", "units"});
        return models::build_two_site_molecule(doc.at("t_hop").get<double>(),
                                               doc.at("delta").get<double>(),
                                               num(doc, "spacing", 1.0), u);
    }
    if (name == "rice_mele") {
        require_keys(doc, "model", {"name", "n_sites", "t_hop", "delta_dim", "onsite_delta"},
                     {"boundary", "twist", "kernel_sigma", "units"});
        return models::build_rice_mele(doc.at("n_sites").get<int>(), doc.at("t_hop").get<double>(),
                                       doc.at("delta_dim").get<double>(),
                                       doc.at("onsite_delta").get<double>(), boundary_from(doc),
                                       num(doc, "twist", 0), num(doc, "kernel_sigma", 0.8), u);
    }
    if (name == "interacting_ring") {
        require_keys(doc, "model", {"name", "n_sites", "n_fermions", "t_hop", "v_int"},
                     {"twist", "units"});
        return models::build_interacting_ring(doc.at("n_sites").get<int>(),
                                              doc.at("n_fermions").get<int>(),
                                              doc.at("t_hop").get<double>(),
                                              doc.at("v_int").get<double>(), num(doc, "twist", 0),
                                              u);
    }
    if (name == "continuum_ring") {
        require_keys(doc, "model", {"name", "length", "n_fermions", "pw_cut", "n_wells"},
                     {"well_depth", "well_sigma", "v_int", "int_sigma", "twist", "units"});
        models::ContinuumRingSpec spec;
        spec.length = doc.at("length").get<double>();
        spec.n_fermions = doc.at("n_fermions").get<int>();
        spec.pw_cut = doc.at("pw_cut").get<int>();
        spec.n_wells = doc.at("n_wells").get<int>();
        spec.well_depth = num(doc, "well_depth", 0);
        spec.well_sigma = num(doc, "well_sigma", 0.6);
        spec.v_int = num(doc, "v_int", 0);
        spec.int_sigma = num(doc, "int_sigma", 0.8);
        spec.twist = num(doc, "twist", 0);
        spec.units = u;
        return models::build_continuum_ring(spec);
    }
    if (name == "planar_molecule") {
        require_keys(doc, "model", {"name", "omega_x", "omega_y", "basis_cut"},
                     {"b_field", "theta", "frame", "separation", "units"});
        NuclearFrame frame;
        if (doc.contains("frame")) {
            for (const auto& nuc : doc.at("frame")) {
                require_keys(nuc, "model.frame[]", {"charge", "x", "y"}, {"mass"});
                frame.nuclei.push_back({nuc.at("charge").get<double>(),
                                        {nuc.at("x").get<double>(), nuc.at("y").get<double>()},
                                        num(nuc, "mass", 1836.0)});
            }
        } else {
            frame = models::symmetric_diatomic_frame(num(doc, "separation", 1.5));
        }
        return models::build_planar_molecule(doc.at("omega_x").get<double>(),
                                             doc.at("omega_y").get<double>(),
                                             doc.at("basis_cut").get<int>(), num(doc, "b_field", 0),
                                             num(doc, "theta", 0), frame, u);
    }
    throw ConfigParseError("model: unknown model name '" + name + "'");
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json report_json(const response::ResponseReport& r) {
    json out;
    out["tensor"] = r.tensor_name;
    out["route"] = r.route;
    out["residual_vs_alternate_route"] = r.residual_vs_alternate_route;
    out["model_fingerprint"] = r.model_fingerprint;
    if (r.volume > 0) out["volume"] = r.volume;
    json comp = json::array();
    for (int i = 0; i < r.components.rows(); ++i) {
        json row = json::array();
        for (int j = 0; j < r.components.cols(); ++j) row.push_back(r.components(i, j));
        comp.push_back(row);
    }
    out["components"] = comp;
    for (const auto& [k, v] : r.extras) out[k] = v;
    return out;
}

struct TaskContext {
    const Model* model;
    json task;
    std::uint64_t seed;
    fs::path out_dir;
    std::string prefix; // task index prefix keeping artifact names unique
    std::vector<std::string>* artifacts;
    double degeneracy_rel = 1e-9;

    fs::path artifact(const std::string& name) const {
        fs::path p = out_dir / (prefix + name);
        artifacts->push_back(p.string());
        return p;
    }
};

void write_text(const fs::path& p, const std::string& text) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw NumericalFailure("cannot open output file " + p.string());
    f << text;
}

// ---- task handlers ------------------------------------------------------

json task_model_info(const TaskContext& c) {
    const Model& m = *c.model;
    json out;
    out["model"] = m.name;
    out["dim"] = m.dim;
    out["boundary"] = m.boundary == Boundary::OBC ? "obc" : "pbc";
    out["n_electrons"] = m.n_electrons;
    out["parameters"] = m.param_names;
    EigenSystem eig = eigendecompose(m.hamiltonian(params_from(c.task)));
    out["ground_energy"] = eig.energies[0];
    out["gap01"] = eig.gap01;
    return out;
}

json task_berry_phase_loop(const TaskContext& c) {
    const json& t = c.task;
    auto loop = geometry::sweep_loop(params_from(t), t.at("sweep_param").get<std::string>(),
                                     t.at("from").get<double>(), t.at("to").get<double>(),
                                     t.at("segments").get<int>());
    auto phase = geometry::berry_phase_loop(*c.model, loop, 1e-10, c.degeneracy_rel);
    json out;
    out["principal"] = phase.principal;
    out["unwrapped"] = phase.unwrapped;
    out["min_gap"] = phase.min_gap;
    out["min_overlap"] = phase.min_overlap;
    out["segments"] = loop.n_segments();
    return out;
}

json task_curvature(const TaskContext& c) {
    const json& t = c.task;
    std::string ka = t.at("kappa").get<std::string>(), la = t.at("lambda").get<std::string>();
    Params p = params_from(t);
    auto kubo = geometry::curvature_kubo(*c.model, p, ka, la, c.degeneracy_rel);
    double sk = num(t, "step_kappa", 1e-3), sl = num(t, "step_lambda", 1e-3);
    auto plaq = geometry::curvature_plaquette(*c.model, p, ka, la, sk, sl, c.degeneracy_rel);
    json out;
    out["kubo"] = kubo.value;
    out["plaquette"] = plaq.value;
    out["difference"] = std::abs(kubo.value - plaq.value);
    out["min_gap"] = kubo.min_gap;
    out["sum_truncation"] = kubo.sum_truncation;
    return out;
}

json task_curvature_random_points(const TaskContext& c) {
    const json& t = c.task;
    std::string ka = t.at("kappa").get<std::string>(), la = t.at("lambda").get<std::string>();
    int n = t.at("n_points").get<int>();
    double k0 = t.at("kappa_min").get<double>(), k1 = t.at("kappa_max").get<double>();
    double l0 = t.at("lambda_min").get<double>(), l1 = t.at("lambda_max").get<double>();
    double sk = num(t, "step_kappa", 1e-3), sl = num(t, "step_lambda", 1e-3);

    std::mt19937_64 rng(c.seed);
    std::uniform_real_distribution<double> uk(k0, k1), ul(l0, l1);
    std::string csv = "kappa,lambda,kubo,plaquette,difference\n";
    double worst = 0;
    for (int i = 0; i < n; ++i) {
        Params p = params_from(t);
        p[ka] = uk(rng);
        p[la] = ul(rng);
        double kv = geometry::curvature_kubo(*c.model, p, ka, la, c.degeneracy_rel).value;
        double pv = geometry::curvature_plaquette(*c.model, p, ka, la, sk, sl,
                                                  c.degeneracy_rel).value;
        worst = std::max(worst, std::abs(kv - pv));
        csv += fmt(p[ka]) + "," + fmt(p[la]) + "," + fmt(kv) + "," + fmt(pv) + "," +
               fmt(std::abs(kv - pv)) + "\n";
    }
    write_text(c.artifact("curvature_points.csv"), csv);
    json out;
    out["n_points"] = n;
    out["max_route_difference"] = worst;
    return out;
}

json task_stokes_check(const TaskContext& c) {
    const json& t = c.task;
    auto res = geometry::stokes_check(
        *c.model, params_from(t), t.at("kappa").get<std::string>(),
        t.at("lambda").get<std::string>(), t.at("kappa_min").get<double>(),
        t.at("kappa_max").get<double>(), t.at("lambda_min").get<double>(),
        t.at("lambda_max").get<double>(), t.contains("grid") ? t.at("grid").get<int>() : 64,
        t.contains("grid") ? t.at("grid").get<int>() : 64, num(t, "segments_per_edge", 256),
        c.degeneracy_rel);
    json out;
    out["surface_integral"] = res.surface_integral;
    out["loop_principal"] = res.loop_principal;
    out["loop_unwrapped"] = res.loop_unwrapped;
    out["mismatch_mod_2pi"] = res.mismatch_mod_2pi;
    return out;
}

json task_propagate(const TaskContext& c) {
    const json& t = c.task;
    Params base = params_from(t);
    auto drive = adiabatic::smoothstep_schedule(t.at("drive_param").get<std::string>(),
                                                t.at("from").get<double>(),
                                                t.at("to").get<double>(),
                                                t.at("duration").get<double>());
    Params start = c.model->resolve(base);
    start[drive.param_name] = drive.lambda(0);
    EigenSystem init = c.model->ground_system(start, c.degeneracy_rel);
    StateVector psi0{init.state(0)};

    std::vector<std::string> names;
    if (t.contains("observables"))
        for (const auto& o : t.at("observables")) names.push_back(o.get<std::string>());
    bool amplitudes = num(t, "amplitudes", 0) != 0;
    auto rec = adiabatic::propagate(*c.model, base, drive, psi0, t.at("dt").get<double>(), names,
                                    static_cast<int>(num(t, "stride", 10)), amplitudes);

    std::string csv = "time";
    for (const auto& n : names) csv += "," + n;
    if (amplitudes)
        for (int k = 0; k < c.model->dim; ++k)
            csv += ",re_" + std::to_string(k) + ",im_" + std::to_string(k);
    csv += "\n";
    for (std::size_t i = 0; i < rec.times.size(); ++i) {
        csv += fmt(rec.times[i]);
        for (const auto& n : names) csv += "," + fmt(rec.observables.at(n)[i]);
        if (amplitudes)
            for (int k = 0; k < c.model->dim; ++k)
                csv += "," + fmt(rec.states[i][k].real()) + "," + fmt(rec.states[i][k].imag());
        csv += "\n";
    }
    write_text(c.artifact("trajectory.csv"), csv);

    json out;
    out["norm_drift"] = rec.norm_drift;
    out["steps"] = static_cast<int>(std::llround(drive.duration / rec.dt));
    for (const auto& n : names) out["final_" + n] = rec.observables.at(n).back();
    return out;
}

json task_adiabatic_compare(const TaskContext& c) {
    const json& t = c.task;
    std::string obs = t.at("observable").get<std::string>();
    std::string lam = t.at("drive_param").get<std::string>();
    Params base = params_from(t);
    auto drive = adiabatic::smoothstep_schedule(lam, t.at("from").get<double>(),
                                                t.at("to").get<double>(),
                                                t.at("duration").get<double>());
    Params start = c.model->resolve(base);
    start[lam] = drive.lambda(0);
    StateVector psi0{c.model->ground_system(start, c.degeneracy_rel).state(0)};
    double dt = t.at("dt").get<double>();
    double frac = num(t, "measure_frac", 0.5);

    auto rec = adiabatic::propagate(*c.model, base, drive, psi0, dt, {obs},
                                    std::max(1, static_cast<int>(frac * drive.duration / dt)));
    double best = 1e300, tdse = 0, ts = 0;
    for (std::size_t i = 0; i < rec.times.size(); ++i) {
        double d = std::abs(rec.times[i] - frac * drive.duration);
        if (d < best) {
            best = d;
            tdse = rec.observables.at(obs)[i];
            ts = rec.times[i];
        }
    }
    Params pm = c.model->resolve(base);
    pm[lam] = drive.lambda(ts);
    double pred = adiabatic::predict_generic(*c.model, pm, c.model->observable(pm, obs).matrix(),
                                             lam, drive.lambda_dot(ts));
    json out;
    out["tdse"] = tdse;
    out["predicted"] = pred;
    out["abs_error"] = std::abs(tdse - pred);
    out["rel_error"] = std::abs(tdse - pred) / std::max(1e-300, std::abs(pred));
    out["measure_time"] = ts;
    return out;
}

json task_rate_scaling(const TaskContext& c) {
    const json& t = c.task;
    std::vector<double> durations;
    for (const auto& d : t.at("durations")) durations.push_back(d.get<double>());
    auto res = adiabatic::rate_scaling_study(
        *c.model, params_from(t), t.at("drive_param").get<std::string>(),
        t.at("from").get<double>(), t.at("to").get<double>(), durations,
        t.at("observable").get<std::string>(), t.at("dt").get<double>(),
        num(t, "measure_frac", 0.5));
    std::string csv = "rate_scale,error\n";
    for (const auto& p : res.points) csv += fmt(p.rate_scale) + "," + fmt(p.error) + "\n";
    write_text(c.artifact("rate_scaling.csv"), csv);
    json out;
    out["slope"] = res.slope;
    out["fit_residual"] = res.residual;
    return out;
}

json task_polarizability(const TaskContext& c) {
    Params p = params_from(c.task);
    auto curv = response::polarizability_curvature(*c.model, p);
    auto kubo = response::polarizability_kubo(*c.model, p);
    json out;
    out["curvature"] = report_json(curv);
    out["kubo"] = report_json(kubo);
    out["route_residual"] = curv.residual_vs_alternate_route;
    if (c.model->boundary == Boundary::OBC && !c.model->field_params.empty() &&
        num(c.task, "finite_field", 1) != 0) {
        double ff = response::polarizability_finite_field(*c.model, p, 0, 0);
        out["finite_field_00"] = ff;
        out["finite_field_rel_error"] =
            std::abs(ff - kubo.components(0, 0)) / std::max(1e-300, std::abs(ff));
    }
    return out;
}

json task_born_charges(const TaskContext& c) {
    Params p = params_from(c.task);
    json out;
    json list = json::array();
    int n_nuc = c.model->frame ? static_cast<int>(c.model->frame->nuclei.size()) : 0;
    if (c.task.contains("nucleus")) {
        list.push_back(report_json(response::born_charges(*c.model, p,
                                                          c.task.at("nucleus").get<int>())));
    } else {
        for (int s = 0; s < n_nuc; ++s)
            list.push_back(report_json(response::born_charges(*c.model, p, s)));
    }
    out["tensors"] = list;
    return out;
}

json task_acoustic_sum(const TaskContext& c) {
    auto rep = response::acoustic_sum(*c.model, params_from(c.task));
    json out = report_json(rep);
    out["max_abs"] = rep.components.cwiseAbs().maxCoeff();
    return out;
}

json task_effective_density_drude(const TaskContext& c) {
    auto rep = response::effective_density_and_drude(*c.model, params_from(c.task),
                                                     num(c.task, "twist_step_frac", 0.02));
    json out;
    out["n_star"] = report_json(rep.n_star);
    out["drude_D"] = report_json(rep.drude);
    out["n_star_kohn_00"] = rep.n_star_kohn(0, 0);
    out["twist_step"] = rep.twist_step;
    return out;
}

json task_dcs_sum_rule(const TaskContext& c) {
    auto rep = response::dcs_sum_rule(*c.model, params_from(c.task));
    json out;
    out["lhs_00"] = rep.lhs(0, 0);
    out["rhs_00"] = rep.rhs(0, 0);
    out["residual"] = rep.residual;
    return out;
}

json task_continuity_check(const TaskContext& c) {
    Params p = params_from(c.task);
    double strength = num(c.task, "nonlocal_strength", 0);
    json out;
    if (strength != 0) {
        Model probe = models::with_nonlocal_potential(*c.model, strength,
                                                      c.model->dim / 2);
        out["residual"] = response::continuity_identity_check(probe, p);
        out["nonlocal_strength"] = strength;
    } else {
        out["residual"] = response::continuity_identity_check(*c.model, p);
    }
    return out;
}

json task_adiabatic_current(const TaskContext& c) {
    const json& t = c.task;
    std::string lam = t.at("drive_param").get<std::string>();
    double ldot = t.at("lambda_dot").get<double>();
    Params p = params_from(t);
    auto j = response::adiabatic_current_density(*c.model, p, lam, ldot);
    std::string csv = "bond,current\n";
    for (std::size_t b = 0; b < j.size(); ++b)
        csv += std::to_string(b) + "," + fmt(j[b]) + "\n";
    write_text(c.artifact("bond_currents.csv"), csv);
    json out;
    out["n_bonds"] = j.size();
    out["continuity_residual"] = response::adiabatic_continuity_residual(*c.model, p, lam, ldot);
    return out;
}

json task_rotational_moment(const TaskContext& c) {
    auto rep = magnetics::rotational_moment(*c.model, params_from(c.task));
    json out;
    out["m_z_per_thetadot"] = rep.m_z_per_thetadot;
    out["m_z0_per_thetadot"] = rep.m_z0_per_thetadot;
    out["m_z1_per_thetadot"] = rep.m_z1_per_thetadot;
    out["mech_moment_per_thetadot"] = rep.mech_moment_per_thetadot;
    out["g_factor"] = rep.g_factor;
    out["curvature_B_theta"] = rep.curvature_B_theta;
    return out;
}

json task_magnetizability(const TaskContext& c) {
    auto rep = magnetics::magnetizability(*c.model, params_from(c.task));
    json out;
    out["chi_dia"] = rep.chi_dia;
    out["chi_para_kubo"] = rep.chi_para_kubo;
    out["chi_para_curvature"] = rep.chi_para_curvature;
    out["chi_total"] = rep.chi_total;
    out["residual_para_routes"] = rep.residual_para_routes;
    out["chi_finite_field"] = rep.chi_finite_field;
    out["residual_finite_field"] = rep.residual_finite_field;
    return out;
}

json task_magnetizability_consistency(const TaskContext& c) {
    json out;
    out["residual"] = magnetics::total_vs_deformation_residual(*c.model, params_from(c.task));
    return out;
}

json task_gauge_origin_scan(const TaskContext& c) {
    std::vector<std::pair<double, double>> origins;
    for (const auto& o : c.task.at("origins"))
        origins.push_back({o.at(0).get<double>(), o.at(1).get<double>()});
    auto scan = magnetics::gauge_origin_scan(*c.model, params_from(c.task), origins);

    std::string csv = "ox,oy,m_z,m_z0,m_z1,chi_total,chi_dia,chi_para\n";
    for (std::size_t i = 0; i < origins.size(); ++i) {
        csv += fmt(origins[i].first) + "," + fmt(origins[i].second) + "," +
               fmt(scan.rotational[i].m_z_per_thetadot) + "," +
               fmt(scan.rotational[i].m_z0_per_thetadot) + "," +
               fmt(scan.rotational[i].m_z1_per_thetadot) + "," +
               fmt(scan.magnetic[i].chi_total) + "," + fmt(scan.magnetic[i].chi_dia) + "," +
               fmt(scan.magnetic[i].chi_para_kubo) + "\n";
    }
    write_text(c.artifact("gauge_scan.csv"), csv);

    json out;
    out["m_z_spread"] = scan.m_z_spread;
    out["m_z0_spread"] = scan.m_z0_spread;
    out["chi_total_spread"] = scan.chi_total_spread;
    out["chi_dia_spread"] = scan.chi_dia_spread;
    out["chi_para_spread"] = scan.chi_para_spread;
    return out;
}

json task_position_elements(const TaskContext& c) {
    Params p = params_from(c.task);
    EigenSystem eig = c.model->ground_system(p, c.degeneracy_rel);
    auto el = models::position_matrix_elements(*c.model, p, eig,
                                               static_cast<int>(num(c.task, "direction", 0)));
    json out;
    out["diagonal_defined"] = el.diagonal_defined();
    out["abs_01"] = std::abs(el.matrix()(0, 1));
    return out;
}

// registry ---------------------------------------------------------------

struct TaskEntry {
    std::string description;
    std::vector<std::string> required;
    std::vector<std::string> optional;
    std::vector<std::pair<std::string, std::string>> docs;
    json (*handler)(const TaskContext&);
};

const std::map<std::string, TaskEntry>& registry() {
    static const std::map<std::string, TaskEntry> reg = {
        {"acoustic_sum",
         {"sum of the Born tensors over all nuclei",
          {},
          {"params"},
          {{"params", "parameter overrides"}},
          task_acoustic_sum}},
        {"adiabatic_compare",
         {"TDSE observable against the adiabatic prediction at one rate",
          {"drive_param", "from", "to", "duration", "dt", "observable"},
          {"params", "measure_frac"},
          {{"drive_param", "driven model parameter"},
           {"duration", "total drive time"},
           {"observable", "named observable to compare"}},
          task_adiabatic_compare}},
        {"adiabatic_current",
         {"sum-over-states bond currents and their continuity residual",
          {"drive_param", "lambda_dot"},
          {"params"},
          {{"drive_param", "parameter whose rate drives the current"},
           {"lambda_dot", "drive rate"}},
          task_adiabatic_current}},
        {"berry_phase_loop",
         {"gauge-invariant discrete loop phase over a parameter sweep",
          {"sweep_param", "from", "to", "segments"},
          {"params"},
          {{"sweep_param", "parameter swept around the loop"},
           {"segments", "number of discretization segments"}},
          task_berry_phase_loop}},
        {"born_charges",
         {"infrared charge tensor per nucleus (curvature route)",
          {},
          {"params", "nucleus"},
          {{"nucleus", "nucleus index (default: all)"}},
          task_born_charges}},
        {"continuity_check",
         {"lattice continuity identity residual, optionally with an injected nonlocal term",
          {},
          {"params", "nonlocal_strength"},
          {{"nonlocal_strength", "rank-one nonlocal amplitude (default 0)"}},
          task_continuity_check}},
        {"curvature",
         {"curvature at a point, sum-over-states and plaquette routes",
          {"kappa", "lambda"},
          {"params", "step_kappa", "step_lambda"},
          {{"kappa", "first parameter"}, {"lambda", "second parameter"}},
          task_curvature}},
        {"curvature_random_points",
         {"route agreement over seeded random parameter points",
          {"kappa", "lambda", "n_points", "kappa_min", "kappa_max", "lambda_min", "lambda_max"},
          {"params", "step_kappa", "step_lambda"},
          {{"n_points", "number of sampled points"}},
          task_curvature_random_points}},
        {"dcs_sum_rule",
         {"translation sum rule: Born-charge sum against the Kohn-oracle Drude weight",
          {},
          {"params"},
          {{"params", "parameter overrides"}},
          task_dcs_sum_rule}},
        {"effective_density_drude",
         {"effective carrier density and Drude weight with the Kohn oracle",
          {},
          {"params", "twist_step_frac"},
          {{"twist_step_frac", "finite-difference step as a fraction of 2 pi / L"}},
          task_effective_density_drude}},
        {"gauge_origin_scan",
         {"rotational and magnetic reports across displaced rotation axes",
          {"origins"},
          {"params"},
          {{"origins", "list of [ox, oy] axis offsets"}},
          task_gauge_origin_scan}},
        {"magnetizability",
         {"diamagnetic/paramagnetic split with curvature and finite-field routes",
          {},
          {"params"},
          {{"params", "parameter overrides"}},
          task_magnetizability}},
        {"magnetizability_consistency",
         {"total magnetizability against the deformation moment",
          {},
          {"params"},
          {{"params", "parameter overrides"}},
          task_magnetizability_consistency}},
        {"model_info",
         {"dimensions, parameters and ground-state data of the model",
          {},
          {"params"},
          {{"params", "parameter overrides"}},
          task_model_info}},
        {"polarizability",
         {"polarizability/susceptibility through both routes",
          {},
          {"params", "finite_field"},
          {{"finite_field", "set 0 to skip the finite-field cross-check"}},
          task_polarizability}},
        {"position_elements",
         {"position matrix elements in the eigenbasis",
          {},
          {"params", "direction"},
          {{"direction", "Cartesian direction index"}},
          task_position_elements}},
        {"propagate",
         {"exact midpoint-exponential time evolution under a smooth drive",
          {"drive_param", "from", "to", "duration", "dt"},
          {"params", "observables", "stride", "amplitudes"},
          {{"observables", "named observables to record"},
           {"dt", "time step"}},
          task_propagate}},
        {"rate_scaling",
         {"log-log fit of the TDSE-vs-adiabatic error over drive rates",
          {"drive_param", "from", "to", "durations", "observable", "dt"},
          {"params", "measure_frac"},
          {{"durations", "list of drive durations spanning the rates"}},
          task_rate_scaling}},
        {"rotational_moment",
         {"rotational magnetic moment, its split and the g factor",
          {},
          {"params"},
          {{"params", "parameter overrides"}},
          task_rotational_moment}},
        {"stokes_check",
         {"surface integral of the curvature against the boundary loop phase",
          {"kappa", "lambda", "kappa_min", "kappa_max", "lambda_min", "lambda_max"},
          {"params", "grid", "segments_per_edge"},
          {{"grid", "quadrature points per side (default 64)"}},
          task_stokes_check}},
    };
    return reg;
}

std::uint64_t fnv1a(const std::string& text) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

} // namespace

std::vector<TaskDoc> list_tasks() {
    std::vector<TaskDoc> out;
    for (const auto& [name, entry] : registry()) {
        TaskDoc doc;
        doc.name = name;
        doc.description = entry.description;
        doc.params = entry.docs;
        out.push_back(doc);
    }
    return out; // std::map iteration is already sorted
}

Model model_from_document(const std::string& json_text) {
    return build_model(json::parse(json_text));
}

RunManifest run(const std::string& scenario_path, const RunOptions& opts) {
    std::ifstream f(scenario_path);
    if (!f) throw ConfigParseError("cannot open scenario file " + scenario_path);
    std::stringstream buf;
    buf << f.rdbuf();
    const std::string text = buf.str();

    json scenario;
    try {
        scenario = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigParseError(std::string("scenario parse failure: ") + e.what());
    }

    require_keys(scenario, "scenario", {"schema_version", "model", "tasks"},
                 {"seed", "tolerances"});
    if (scenario.at("schema_version").get<int>() != 1)
        throw ConfigParseError("scenario: unsupported schema_version");

    double degeneracy_rel = 1e-9;
    if (scenario.contains("tolerances")) {
        require_keys(scenario.at("tolerances"), "tolerances", {}, {"degeneracy_rel"});
        degeneracy_rel = num(scenario.at("tolerances"), "degeneracy_rel", 1e-9);
    }
    auto it = opts.tolerance_overrides.find("degeneracy_rel");
    if (it != opts.tolerance_overrides.end()) degeneracy_rel = it->second;

    Model model = build_model(scenario.at("model"));
    std::uint64_t seed = scenario.contains("seed") ? scenario.at("seed").get<std::uint64_t>() : 0;

    fs::path out_dir = opts.out_dir.empty()
                           ? (std::getenv("QGEOM_OUT") ? fs::path(std::getenv("QGEOM_OUT"))
                                                       : fs::path("out"))
                           : fs::path(opts.out_dir);
    fs::create_directories(out_dir);

    const json& tasks = scenario.at("tasks");
    if (!tasks.is_array()) throw ConfigParseError("scenario.tasks: expected an array");

    // validate every task before any work runs
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        const json& t = tasks[i];
        std::string where = "tasks[" + std::to_string(i) + "]";
        if (!t.is_object() || !t.contains("task"))
            throw ConfigParseError(where + ": missing key 'task'");
        std::string name = t.at("task").get<std::string>();
        auto entry = registry().find(name);
        if (entry == registry().end()) throw UnknownTask(where + ": '" + name + "'");
        std::vector<std::string> required = entry->second.required;
        std::vector<std::string> optional = entry->second.optional;
        required.push_back("task");
        optional.push_back("output");
        require_keys(t, where + " (" + name + ")", required, optional);
    }

    RunManifest manifest;
    manifest.scenario_hash = [&] {
        char buf2[32];
        std::snprintf(buf2, sizeof buf2, "%016llx",
                      static_cast<unsigned long long>(fnv1a(text)));
        return std::string(buf2);
    }();
    manifest.tasks.resize(tasks.size());

    std::vector<json> reports(tasks.size());
    auto run_one = [&](std::size_t i) {
        const json& t = tasks[i];
        std::string name = t.at("task").get<std::string>();
        TaskStatus& st = manifest.tasks[i];
        st.name = name;
        auto t0 = std::chrono::steady_clock::now();
        try {
            TaskContext ctx{&model, t, seed ^ (0x9e3779b97f4a7c15ull * (i + 1)), out_dir,
                            "task" + std::to_string(i) + "_", &st.artifacts, degeneracy_rel};
            reports[i] = registry().at(name).handler(ctx);
            st.status = "ok";
        } catch (const Error& e) {
            st.status = "error";
            st.error_code = e.code();
            st.error_message = e.what();
        } catch (const std::exception& e) {
            st.status = "error";
            st.error_code = "InternalError";
            st.error_message = e.what();
        }
        st.wall_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - t0).count();
    };

    if (opts.jobs <= 1) {
        for (std::size_t i = 0; i < tasks.size(); ++i) run_one(i);
    } else {
        std::vector<std::future<void>> slots;
        for (std::size_t i = 0; i < tasks.size(); ++i) {
            if (static_cast<int>(slots.size()) >= opts.jobs) {
                slots.front().get();
                slots.erase(slots.begin());
            }
            slots.push_back(std::async(std::launch::async, run_one, i));
        }
        for (auto& s : slots) s.get();
    }

    // per-task reports, written in declaration order
    std::string agg = "task_index,task,status,key,value\n";
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        const json& t = tasks[i];
        std::string name = t.at("task").get<std::string>();
        std::string base = t.contains("output") ? t.at("output").get<std::string>()
                                                : "task" + std::to_string(i) + "_" + name + ".json";
        json doc;
        doc["task"] = name;
        doc["status"] = manifest.tasks[i].status;
        if (manifest.tasks[i].status == "ok") {
            doc["report"] = reports[i];
            for (auto itj = reports[i].begin(); itj != reports[i].end(); ++itj)
                if (itj.value().is_number())
                    agg += std::to_string(i) + "," + name + ",ok," + itj.key() + "," +
                           fmt(itj.value().get<double>()) + "\n";
        } else {
            doc["error_code"] = manifest.tasks[i].error_code;
            doc["error_message"] = manifest.tasks[i].error_message;
            agg += std::to_string(i) + "," + name + ",error," + manifest.tasks[i].error_code +
                   ",\n";
        }
        fs::path report_path = out_dir / base;
        write_text(report_path, doc.dump(2) + "\n");
        manifest.tasks[i].artifacts.push_back(report_path.string());
    }
    write_text(out_dir / "aggregate.csv", agg);

    json man;
    man["scenario_hash"] = manifest.scenario_hash;
    json mt = json::array();
    for (const auto& st : manifest.tasks) {
        json e;
        e["name"] = st.name;
        e["status"] = st.status;
        if (!st.error_code.empty()) e["error_code"] = st.error_code;
        e["wall_ms"] = st.wall_ms;
        e["artifacts"] = st.artifacts;
        mt.push_back(e);
    }
    man["tasks"] = mt;
    write_text(out_dir / "manifest.json", man.dump(2) + "\n");
    return manifest;
}

} // namespace qgeom::runner
