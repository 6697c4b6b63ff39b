#include "qgeom/adiabatic.hpp"

#include <cmath>

#include "qgeom/geometry.hpp"

namespace qgeom::adiabatic {

DriveSchedule smoothstep_schedule(const std::string& param, double l0, double l1,
                                  double duration) {
    if (duration <= 0) throw InvalidParameter("schedule duration must be positive");
    DriveSchedule s;
    s.param_name = param;
    s.duration = duration;
    s.lambda = [=](double t) {
        double x = std::clamp(t / duration, 0.0, 1.0);
        return l0 + (l1 - l0) * x * x * x * (10 + x * (-15 + 6 * x));
    };
    s.lambda_dot = [=](double t) {
        double x = std::clamp(t / duration, 0.0, 1.0);
        return (l1 - l0) * 30 * x * x * (1 - x) * (1 - x) / duration;
    };
    s.rate_scale = std::abs(l1 - l0) * 30.0 / 16.0 / duration;
    return s;
}

namespace {

double observe(const Model& model, const Params& p, const std::string& name, const CVector& psi,
               const CMatrix& h_now) {
    if (name == "energy") return expectation(h_now, psi);
    return expectation(model.observable(p, name).matrix(), psi);
}

} // namespace

TrajectoryRecord propagate(const Model& model, const Params& base, const DriveSchedule& drive,
                           const StateVector& psi0, double dt,
                           const std::vector<std::string>& observable_names, int sample_stride,
                           bool keep_states) {
    if (dt <= 0) throw InvalidParameter("propagate: dt must be positive");
    if (std::abs(psi0.norm() - 1.0) > 1e-10)
        throw NotNormalized("initial state norm " + std::to_string(psi0.norm()));

    Params p0 = model.resolve(base);
    if (!model.has_param(drive.param_name))
        throw UnknownParameter("drive parameter '" + drive.param_name + "'");

    auto params_at = [&](double t) {
        Params p = p0;
        p[drive.param_name] = drive.lambda(t);
        return p;
    };

    // step-size guard against the spectral range of the initial Hamiltonian
    EigenSystem probe = eigendecompose(model.hamiltonian(params_at(0.0)));
    if (dt * probe.h_scale / model.units.hbar > 0.1)
        throw StepTooLarge("dt * |H| / hbar = " + std::to_string(dt * probe.h_scale));

    const int n_steps = std::max(1, static_cast<int>(std::llround(drive.duration / dt)));
    const double step = drive.duration / n_steps;
    const Complex iu(0, 1);

    TrajectoryRecord rec;
    rec.dt = step;
    CVector psi = psi0.amplitudes();

    auto sample = [&](double t) {
        Params p = params_at(t);
        CMatrix h = model.build_h(p);
        rec.times.push_back(t);
        if (keep_states) rec.states.push_back(psi);
        for (const auto& name : observable_names)
            rec.observables[name].push_back(observe(model, p, name, psi, h));
        rec.norm_drift = std::max(rec.norm_drift, std::abs(psi.norm() - 1.0));
    };

    sample(0.0);
    for (int k = 0; k < n_steps; ++k) {
        double t_mid = (k + 0.5) * step;
        EigenSystem mid = eigendecompose(model.hamiltonian(params_at(t_mid)));
        CVector phases(mid.dim());
        for (int n = 0; n < mid.dim(); ++n)
            phases[n] = std::exp(-iu * mid.energies[n] * step / model.units.hbar);
        psi = mid.states * (phases.asDiagonal() * (mid.states.adjoint() * psi));
        double t = (k + 1) * step;
        if ((k + 1) % sample_stride == 0 || k + 1 == n_steps) sample(t);
    }
    return rec;
}

double predict_hf(const Model& model, const Params& at, const std::string& kappa,
                  const std::string& lambda, double lambda_dot) {
    Params p = model.resolve(at);
    EigenSystem eig = model.ground_system(p);
    double value = expectation(model.build_dh(p, kappa), eig.state(0));
    double omega = geometry::kubo_curvature_sum(eig, model.build_dh(p, kappa),
                                                model.build_dh(p, lambda), nullptr);
    return value - model.units.hbar * omega * lambda_dot;
}

double predict_generic(const Model& model, const Params& at, const CMatrix& O,
                       const std::string& lambda, double lambda_dot) {
    Params p = model.resolve(at);
    EigenSystem eig = model.ground_system(p);
    double value = expectation(O, eig.state(0));
    CVector vo = eig.states.adjoint() * (O * eig.states.col(0));
    CVector vl = eig.states.adjoint() * (model.build_dh(p, lambda) * eig.states.col(0));
    double sum = 0;
    for (int n = 1; n < eig.dim(); ++n) {
        double de = eig.energies[0] - eig.energies[n];
        sum += (std::conj(vo[n]) * vl[n]).imag() / (de * de);
    }
    return value + 2 * model.units.hbar * lambda_dot * sum;
}

RateScalingResult rate_scaling_study(const Model& model, const Params& base,
                                     const std::string& lambda, double l0, double l1,
                                     const std::vector<double>& durations,
                                     const std::string& observable_name, double dt,
                                     double measure_frac, double window_periods) {
    if (durations.size() < 4)
        throw InvalidParameter("rate scaling needs at least 4 rates");

    Params p0 = model.resolve(base);
    RateScalingResult out;
    for (double T : durations) {
        DriveSchedule drive = smoothstep_schedule(lambda, l0, l1, T);
        double t_star = measure_frac * T;

        Params start = p0;
        start[lambda] = l0;
        EigenSystem init = model.ground_system(start);
        StateVector psi0{init.state(0)};

        Params pm = p0;
        pm[lambda] = drive.lambda(t_star);
        double gap = eigendecompose(model.hamiltonian(pm)).gap01;
        double half_window =
            window_periods > 0 ? window_periods * M_PI * model.units.hbar / gap : 0.0;

        TrajectoryRecord rec = propagate(model, p0, drive, psi0, dt, {observable_name}, 1);
        double sum = 0, best = 1e300, point = 0;
        int count = 0;
        for (std::size_t i = 0; i < rec.times.size(); ++i) {
            double t = rec.times[i];
            double dist = std::abs(t - t_star);
            Params q = p0;
            q[lambda] = drive.lambda(t);
            if (dist <= half_window) {
                double pred = predict_generic(model, q,
                                              model.observable(q, observable_name).matrix(),
                                              lambda, drive.lambda_dot(t));
                sum += std::abs(rec.observables.at(observable_name)[i] - pred);
                ++count;
            } else if (half_window == 0 && dist < best) {
                double pred = predict_generic(model, q,
                                              model.observable(q, observable_name).matrix(),
                                              lambda, drive.lambda_dot(t));
                best = dist;
                point = std::abs(rec.observables.at(observable_name)[i] - pred);
            }
        }
        double err = count > 0 ? sum / count : point;
        out.points.push_back({drive.rate_scale, err});
    }

    // least-squares line through (log rate, log error)
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (const auto& pt : out.points) {
        if (pt.error <= 0 || pt.error < 1e-13)
            throw FitFailure("rate point at the rounding floor; increase the drive amplitude");
        double x = std::log(pt.rate_scale), y = std::log(pt.error);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    double denom = n * sxx - sx * sx;
    if (std::abs(denom) < 1e-14) throw FitFailure("degenerate rate spacing");
    out.slope = (n * sxy - sx * sy) / denom;
    double intercept = (sy - out.slope * sx) / n;
    for (const auto& pt : out.points) {
        double fit = out.slope * std::log(pt.rate_scale) + intercept;
        out.residual = std::max(out.residual, std::abs(std::log(pt.error) - fit));
    }
    if (out.residual > 0.5) throw FitFailure("poor power-law fit, residual " +
                                             std::to_string(out.residual));
    return out;
}

} // namespace qgeom::adiabatic
