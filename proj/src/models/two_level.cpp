#include "qgeom/models/two_level.hpp"

#include <cmath>

namespace qgeom::models {

namespace {
CMatrix make_pauli(int which) {
    CMatrix m(2, 2);
    const Complex i(0, 1);
    switch (which) {
        case 0: m << 0, 1, 1, 0; break;
        case 1: m << 0, -i, i, 0; break;
        default: m << 1, 0, 0, -1; break;
    }
    return m;
}
} // namespace

const CMatrix pauli_x = make_pauli(0);
const CMatrix pauli_y = make_pauli(1);
const CMatrix pauli_z = make_pauli(2);

Model build_two_level(double delta, double theta, double phi) {
    if (delta <= 0) throw InvalidParameter("two_level: delta must be positive");

    Model m;
    m.name = "two_level";
    m.dim = 2;
    m.param_names = {"theta", "phi"};
    m.default_params = {{"theta", theta}, {"phi", phi}};
    m.boundary = Boundary::OBC;
    m.n_electrons = 1;

    m.build_h = [delta](const Params& p) {
        double th = p.at("theta"), ph = p.at("phi");
        return CMatrix{(delta / 2) *
                       (std::sin(th) * std::cos(ph) * pauli_x +
                        std::sin(th) * std::sin(ph) * pauli_y + std::cos(th) * pauli_z)};
    };
    m.build_dh = [delta](const Params& p, const std::string& pname) {
        double th = p.at("theta"), ph = p.at("phi");
        if (pname == "theta")
            return CMatrix{(delta / 2) *
                           (std::cos(th) * std::cos(ph) * pauli_x +
                            std::cos(th) * std::sin(ph) * pauli_y - std::sin(th) * pauli_z)};
        if (pname == "phi")
            return CMatrix{(delta / 2) * std::sin(th) *
                           (-std::sin(ph) * pauli_x + std::cos(ph) * pauli_y)};
        throw UnknownParameter("two_level: " + pname);
    };
    m.observables["sigma_x"] = [](const Params&) { return pauli_x; };
    m.observables["sigma_y"] = [](const Params&) { return pauli_y; };
    m.observables["sigma_z"] = [](const Params&) { return pauli_z; };
    return m;
}

} // namespace qgeom::models
