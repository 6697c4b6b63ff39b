#include "qgeom/model.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>

namespace qgeom {

HermitianOperator Model::hamiltonian(const Params& p) const {
    return HermitianOperator(build_h(resolve(p)));
}

HermitianOperator Model::d_hamiltonian(const Params& p, const std::string& pname) const {
    if (!has_param(pname))
        throw UnknownParameter("model '" + name + "' has no parameter '" + pname + "'");
    return HermitianOperator(build_dh(resolve(p), pname));
}

bool Model::has_param(const std::string& pname) const {
    return std::find(param_names.begin(), param_names.end(), pname) != param_names.end();
}

HermitianOperator Model::observable(const Params& p, const std::string& oname) const {
    auto it = observables.find(oname);
    if (it == observables.end())
        throw InvalidParameter("model '" + name + "' has no observable '" + oname + "'");
    return HermitianOperator(it->second(resolve(p)));
}

std::vector<CMatrix> Model::observable_field(const Params& p, const std::string& fname) const {
    auto it = observable_fields.find(fname);
    if (it == observable_fields.end())
        throw InvalidParameter("model '" + name + "' has no observable field '" + fname + "'");
    return it->second(resolve(p));
}

Params Model::resolve(const Params& overrides) const {
    Params p = default_params;
    for (const auto& [k, v] : overrides) {
        if (!has_param(k))
            throw UnknownParameter("model '" + name + "' has no parameter '" + k + "'");
        p[k] = v;
    }
    return p;
}

EigenSystem Model::ground_system(const Params& p, double degeneracy_rel_tol) const {
    EigenSystem sys = eigendecompose(hamiltonian(p));
    if (sys.ground_degenerate(degeneracy_rel_tol))
        throw DegenerateGroundState("model '" + name + "': gap " + std::to_string(sys.gap01) +
                                    " below threshold at the requested parameters");
    return sys;
}

std::string Model::fingerprint(const Params& p) const {
    // FNV-1a over a canonical text form; stable across runs.
    Params r = resolve(p);
    std::string text = name + "|dim=" + std::to_string(dim);
    char buf[64];
    for (const auto& [k, v] : r) {
        std::snprintf(buf, sizeof buf, "|%s=%.17g", k.c_str(), v);
        text += buf;
    }
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

double derivative_check(const Model& model, const Params& at, const std::string& pname,
                        double step) {
    Params p = model.resolve(at);
    CMatrix analytic = model.build_dh(p, pname);
    auto shifted = [&](double h) {
        Params q = p;
        q[pname] += h;
        return model.build_h(q);
    };
    // Richardson-extrapolated central difference, O(step^4).
    CMatrix d1 = (shifted(step) - shifted(-step)) / (2 * step);
    CMatrix d2 = (shifted(step / 2) - shifted(-step / 2)) / step;
    CMatrix fd = (4.0 * d2 - d1) / 3.0;
    return max_abs(fd - analytic);
}

} // namespace qgeom
