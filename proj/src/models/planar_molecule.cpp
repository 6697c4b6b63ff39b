#include "qgeom/models/planar_molecule.hpp"

#include <array>
#include <cmath>
#include <memory>

namespace qgeom::models {

namespace {

// Exact 1D oscillator matrix elements in the ladder basis of frequency wb.
// q in units of l = sqrt(hbar/(m wb)), momentum in units of hbar/l.
struct Ladder1D {
    // <n'|q|n>
    static double q(int np, int n) {
        if (np == n + 1) return std::sqrt((n + 1) / 2.0);
        if (np == n - 1) return std::sqrt(n / 2.0);
        return 0.0;
    }
    // <n'|q^2|n>
    static double q2(int np, int n) {
        if (np == n) return n + 0.5;
        if (np == n + 2) return 0.5 * std::sqrt((n + 1.0) * (n + 2.0));
        if (np == n - 2) return 0.5 * std::sqrt(n * (n - 1.0));
        return 0.0;
    }
    // <n'|p|n> / (i)  with p in units hbar/l: p = i(a^dag - a)/sqrt(2)
    static double p_im(int np, int n) {
        if (np == n + 1) return std::sqrt((n + 1) / 2.0);
        if (np == n - 1) return -std::sqrt(n / 2.0);
        return 0.0;
    }
    // <n'|p^2|n> with p^2 in units (hbar/l)^2
    static double p2(int np, int n) {
        if (np == n) return n + 0.5;
        if (np == n + 2) return -0.5 * std::sqrt((n + 1.0) * (n + 2.0));
        if (np == n - 2) return -0.5 * std::sqrt(n * (n - 1.0));
        return 0.0;
    }
};

struct OscillatorBasis {
    int cut;
    std::vector<std::pair<int, int>> states; // (nx, ny), shell-ordered
    double l;                                 // length scale of the basis
    double hbar_over_l;                       // momentum scale

    OscillatorBasis(int cut_, double l_, double hbar) : cut(cut_), l(l_), hbar_over_l(hbar / l_) {
        for (int s = 0; s <= cut; ++s)
            for (int nx = s; nx >= 0; --nx) states.push_back({nx, s - nx});
    }
    int dim() const { return static_cast<int>(states.size()); }

    // generic separable operator: elements Ax(nx',nx) * Ay(ny',ny)
    template <class FX, class FY>
    CMatrix build(FX&& ax, FY&& ay) const {
        const int d = dim();
        CMatrix M = CMatrix::Zero(d, d);
        for (int c = 0; c < d; ++c)
            for (int r = 0; r < d; ++r) {
                auto [nxr, nyr] = states[r];
                auto [nxc, nyc] = states[c];
                Complex v = ax(nxr, nxc) * ay(nyr, nyc);
                if (v != Complex(0, 0)) M(r, c) = v;
            }
        return M;
    }
};

struct MoleculeOperators {
    CMatrix X, Y, X2, Y2, XY, Px, Py, P2, Lz, R2, Id;
};

MoleculeOperators build_operators(const OscillatorBasis& b) {
    const Complex iu(0, 1);
    const double l = b.l, pl = b.hbar_over_l;
    auto one = [](int np, int n) { return np == n ? 1.0 : 0.0; };

    MoleculeOperators op;
    op.X = b.build([&](int a, int c) { return l * Ladder1D::q(a, c); }, one);
    op.Y = b.build(one, [&](int a, int c) { return l * Ladder1D::q(a, c); });
    op.X2 = b.build([&](int a, int c) { return l * l * Ladder1D::q2(a, c); }, one);
    op.Y2 = b.build(one, [&](int a, int c) { return l * l * Ladder1D::q2(a, c); });
    op.XY = b.build([&](int a, int c) { return l * Ladder1D::q(a, c); },
                    [&](int a, int c) { return l * Ladder1D::q(a, c); });
    op.Px = b.build([&](int a, int c) { return iu * pl * Ladder1D::p_im(a, c); }, one);
    op.Py = b.build(one, [&](int a, int c) { return iu * pl * Ladder1D::p_im(a, c); });
    op.P2 = b.build([&](int a, int c) { return pl * pl * Ladder1D::p2(a, c); }, one) +
            b.build(one, [&](int a, int c) { return pl * pl * Ladder1D::p2(a, c); });
    // Lz = X Py - Y Px, assembled from exact separable elements
    op.Lz = b.build([&](int a, int c) { return l * Ladder1D::q(a, c); },
                    [&](int a, int c) { return iu * pl * Ladder1D::p_im(a, c); }) -
            b.build([&](int a, int c) { return iu * pl * Ladder1D::p_im(a, c); },
                    [&](int a, int c) { return l * Ladder1D::q(a, c); });
    op.R2 = op.X2 + op.Y2;
    op.Id = CMatrix::Identity(b.dim(), b.dim());
    return op;
}

struct Rot {
    double c, s;
    explicit Rot(double th) : c(std::cos(th)), s(std::sin(th)) {}
    // R K0 R^T for K0 = diag(kx, ky)
    void form(double kx, double ky, double& Kxx, double& Kyy, double& Kxy) const {
        Kxx = c * c * kx + s * s * ky;
        Kyy = s * s * kx + c * c * ky;
        Kxy = c * s * (kx - ky);
    }
    // theta-derivative of the rotated form
    void dform(double kx, double ky, double& dxx, double& dyy, double& dxy) const {
        dxx = 2 * c * (-s) * kx + 2 * s * c * ky; // = -sin(2t)(kx-ky)
        dyy = -dxx;
        dxy = (c * c - s * s) * (kx - ky);
    }
    std::pair<double, double> apply(double x, double y) const { return {c * x - s * y, s * x + c * y}; }
    std::pair<double, double> dapply(double x, double y) const { return {-s * x - c * y, c * x - s * y}; }
};

} // namespace

NuclearFrame symmetric_diatomic_frame(double separation, double mass) {
    NuclearFrame f;
    f.nuclei.push_back({0.5, {separation / 2, 0.0}, mass});
    f.nuclei.push_back({0.5, {-separation / 2, 0.0}, mass});
    return f;
}

Model build_planar_molecule(double omega_x, double omega_y, int basis_cut, double b_field,
                            double theta, const NuclearFrame& frame,
                            UnitsConvention units) {
    if (omega_x <= 0 || omega_y <= 0)
        throw InvalidParameter("planar_molecule: frequencies must be positive");
    if (basis_cut < 4) throw InvalidParameter("planar_molecule: basis_cut must be >= 4");
    if (frame.nuclei.empty()) throw InvalidParameter("planar_molecule: frame has no nuclei");

    const UnitsConvention u = units;
    const double wb = std::sqrt(omega_x * omega_y); // reference basis frequency
    const double l = std::sqrt(u.hbar / (u.mass * wb));

    auto basis = std::make_shared<OscillatorBasis>(basis_cut, l, u.hbar);
    auto op = std::make_shared<MoleculeOperators>(build_operators(*basis));

    const int n_nuc = static_cast<int>(frame.nuclei.size());
    const double z_total = frame.total_charge();
    if (z_total <= 0) throw InvalidParameter("planar_molecule: total nuclear charge must be positive");

    Model m;
    m.name = "planar_molecule";
    m.dim = basis->dim();
    m.param_names = {"B", "theta", "ox", "oy", "Ax", "Ay", "Ex", "Ey"};
    m.default_params = {{"B", b_field}, {"theta", theta}, {"ox", 0.0}, {"oy", 0.0},
                        {"Ax", 0.0},    {"Ay", 0.0},      {"Ex", 0.0}, {"Ey", 0.0}};
    for (int s = 0; s < n_nuc; ++s) {
        m.param_names.push_back("u" + std::to_string(s) + "x");
        m.param_names.push_back("u" + std::to_string(s) + "y");
        m.default_params["u" + std::to_string(s) + "x"] = 0.0;
        m.default_params["u" + std::to_string(s) + "y"] = 0.0;
        m.nucleus_params.push_back({"u" + std::to_string(s) + "x", "u" + std::to_string(s) + "y"});
    }
    m.boundary = Boundary::OBC;
    m.units = u;
    m.n_electrons = 1;
    m.frame = frame;
    m.vector_potential_params = {"Ax", "Ay"};
    m.field_params = {"Ex", "Ey"};
    m.dipole_observables = {"x", "y"};
    m.meta["basis_cut"] = basis_cut;
    m.meta["omega_x"] = omega_x;
    m.meta["omega_y"] = omega_y;

    // well centers c_s = o + R_theta r_s + u_s, weights w_s = Z_s / Z_total
    auto centers = [=](const Params& p) {
        Rot rot(p.at("theta"));
        std::vector<std::array<double, 2>> c(n_nuc);
        for (int s = 0; s < n_nuc; ++s) {
            auto [rx, ry] = rot.apply(frame.nuclei[s].position[0], frame.nuclei[s].position[1]);
            c[s] = {p.at("ox") + rx + p.at("u" + std::to_string(s) + "x"),
                    p.at("oy") + ry + p.at("u" + std::to_string(s) + "y")};
        }
        return c;
    };
    auto weight = [=](int s) { return frame.nuclei[s].charge / z_total; };

    // The total well is the centroid-centered quadratic form
    //   V = (m/2) (r - cbar)^T K_theta (r - cbar),  cbar = sum_s w_s c_s,
    // so the well minimum is zero and the clamped ground energy is exactly
    // hbar (omega_x + omega_y) / 2 in the untruncated limit.
    auto centroid = [=](const Params& p) {
        auto c = centers(p);
        std::array<double, 2> cb{0, 0};
        for (int s = 0; s < n_nuc; ++s) {
            cb[0] += weight(s) * c[s][0];
            cb[1] += weight(s) * c[s][1];
        }
        return cb;
    };
    auto potential = [=](const Params& p) {
        Rot rot(p.at("theta"));
        double Kxx, Kyy, Kxy;
        rot.form(omega_x * omega_x, omega_y * omega_y, Kxx, Kyy, Kxy);
        auto cb = centroid(p);
        double c_const = Kxx * cb[0] * cb[0] + Kyy * cb[1] * cb[1] + 2 * Kxy * cb[0] * cb[1];
        CMatrix V = 0.5 * u.mass *
                    (Kxx * op->X2 + Kyy * op->Y2 + 2 * Kxy * op->XY -
                     2 * (Kxx * cb[0] + Kxy * cb[1]) * op->X -
                     2 * (Kxy * cb[0] + Kyy * cb[1]) * op->Y + c_const * op->Id);
        return V;
    };

    m.build_h = [=](const Params& p) {
        double B = p.at("B"), Ax = p.at("Ax"), Ay = p.at("Ay");
        CMatrix H = op->P2 / (2 * u.mass) + potential(p);
        H += u.e * B / (2 * u.mass * u.c) * op->Lz;
        H += u.e * u.e * B * B / (8 * u.mass * u.c * u.c) * op->R2;
        H += u.e / (u.mass * u.c) * (Ax * op->Px + Ay * op->Py);
        H += u.e * u.e * (Ax * Ax + Ay * Ay) / (2 * u.mass * u.c * u.c) * op->Id;
        H += u.e * (p.at("Ex") * op->X + p.at("Ey") * op->Y);
        return H;
    };

    m.build_dh = [=](const Params& p, const std::string& pname) -> CMatrix {
        double B = p.at("B");
        if (pname == "B")
            return u.e / (2 * u.mass * u.c) * op->Lz +
                   u.e * u.e * B / (4 * u.mass * u.c * u.c) * op->R2;
        if (pname == "Ax")
            return u.e / (u.mass * u.c) * op->Px +
                   u.e * u.e * p.at("Ax") / (u.mass * u.c * u.c) * op->Id;
        if (pname == "Ay")
            return u.e / (u.mass * u.c) * op->Py +
                   u.e * u.e * p.at("Ay") / (u.mass * u.c * u.c) * op->Id;
        if (pname == "Ex") return CMatrix{u.e * op->X};
        if (pname == "Ey") return CMatrix{u.e * op->Y};

        Rot rot(p.at("theta"));
        double Kxx, Kyy, Kxy;
        rot.form(omega_x * omega_x, omega_y * omega_y, Kxx, Kyy, Kxy);
        auto cb = centroid(p);

        // dV for a variation (dK, dcbar) of the quadratic form
        auto dv = [&](double dKxx, double dKyy, double dKxy, double dcx, double dcy) {
            double lin_x = dKxx * cb[0] + dKxy * cb[1] + Kxx * dcx + Kxy * dcy;
            double lin_y = dKxy * cb[0] + dKyy * cb[1] + Kxy * dcx + Kyy * dcy;
            double dconst = dKxx * cb[0] * cb[0] + dKyy * cb[1] * cb[1] +
                            2 * dKxy * cb[0] * cb[1] +
                            2 * ((Kxx * cb[0] + Kxy * cb[1]) * dcx +
                                 (Kxy * cb[0] + Kyy * cb[1]) * dcy);
            return CMatrix{0.5 * u.mass *
                           (dKxx * op->X2 + dKyy * op->Y2 + 2 * dKxy * op->XY -
                            2 * lin_x * op->X - 2 * lin_y * op->Y + dconst * op->Id)};
        };

        if (pname == "theta") {
            double dKxx, dKyy, dKxy;
            rot.dform(omega_x * omega_x, omega_y * omega_y, dKxx, dKyy, dKxy);
            double dcx = 0, dcy = 0;
            for (int s = 0; s < n_nuc; ++s) {
                auto [dx, dy] = rot.dapply(frame.nuclei[s].position[0], frame.nuclei[s].position[1]);
                dcx += weight(s) * dx;
                dcy += weight(s) * dy;
            }
            return dv(dKxx, dKyy, dKxy, dcx, dcy);
        }
        if (pname == "ox") return dv(0, 0, 0, 1, 0);
        if (pname == "oy") return dv(0, 0, 0, 0, 1);
        for (int s = 0; s < n_nuc; ++s) {
            if (pname == "u" + std::to_string(s) + "x") return dv(0, 0, 0, weight(s), 0);
            if (pname == "u" + std::to_string(s) + "y") return dv(0, 0, 0, 0, weight(s));
        }
        throw UnknownParameter("planar_molecule: " + pname);
    };

    m.observables["Lz"] = [=](const Params&) { return op->Lz; };
    m.observables["r2"] = [=](const Params&) { return op->R2; };
    m.observables["x"] = [=](const Params&) { return op->X; };
    m.observables["y"] = [=](const Params&) { return op->Y; };
    m.observables["px"] = [=](const Params&) { return op->Px; };
    m.observables["py"] = [=](const Params&) { return op->Py; };

    m.refined = [=]() {
        return build_planar_molecule(omega_x, omega_y, basis_cut + 2, b_field, theta, frame, units);
    };
    return m;
}

} // namespace qgeom::models
