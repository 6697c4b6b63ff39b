#ifndef QGEOM_MODEL_HPP
#define QGEOM_MODEL_HPP

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qgeom/linalg.hpp"

namespace qgeom {

enum class Boundary { OBC, PBC };

// Gaussian units; all formula prefactors are kept symbolic so any convention
// reproduces the standard expressions. Defaults are atomic-style (1,1,1,1).
struct UnitsConvention {
    double hbar = 1.0;
    double e = 1.0;
    double mass = 1.0;
    double c = 1.0;
};

using Params = std::map<std::string, double>;

struct LatticeGeometry {
    int n_sites = 0;
    std::vector<double> site_positions;
    std::vector<std::pair<int, int>> bonds; // ordered (from, to)
    double lattice_period = 0.0;            // PBC pattern period
    double ring_length = 0.0;               // PBC circumference
};

struct Nucleus {
    double charge = 0.0; // Z_s (fractional allowed for sublattice patterns)
    std::vector<double> position;
    double mass = 1.0;
};

struct NuclearFrame {
    std::vector<Nucleus> nuclei;
    double total_charge() const {
        double z = 0;
        for (const auto& n : nuclei) z += n.charge;
        return z;
    }
};

// A parameterized Hamiltonian family with analytic parameter derivatives and
// named observables. Instances are immutable after construction and safe to
// share between threads; all callables must be pure.
class Model {
public:
    std::string name;
    int dim = 0;
    std::vector<std::string> param_names;
    Params default_params;
    Boundary boundary = Boundary::OBC;
    UnitsConvention units;
    int n_electrons = 1;
    double cell_volume = 0.0; // supercell length L for PBC models
    std::optional<LatticeGeometry> lattice;
    std::optional<NuclearFrame> frame;

    // Response-module wiring: parameter names per Cartesian direction.
    std::vector<std::string> twist_params;             // kappa with A = hbar c kappa / e
    std::vector<std::string> vector_potential_params;  // literal A components
    std::vector<std::string> field_params;             // macroscopic field (OBC only)
    std::vector<std::string> rigid_displacement_params; // whole-pattern shift
    std::vector<std::vector<std::string>> nucleus_params; // [s][direction]
    std::vector<std::string> dipole_observables;       // position operator names (OBC)
    std::map<std::string, double> meta;                // builder-specific numbers
    std::function<Model()> refined;                    // same model, finer basis

    std::function<CMatrix(const Params&)> build_h;
    std::function<CMatrix(const Params&, const std::string&)> build_dh;
    // Named single operators (may depend on params, e.g. through the twist).
    std::map<std::string, std::function<CMatrix(const Params&)>> observables;
    // Site- or bond-resolved operator fields (one matrix per site/bond).
    std::map<std::string, std::function<std::vector<CMatrix>(const Params&)>> observable_fields;

    HermitianOperator hamiltonian(const Params& p) const;
    HermitianOperator d_hamiltonian(const Params& p, const std::string& pname) const;

    bool has_param(const std::string& pname) const;
    bool has_observable(const std::string& oname) const { return observables.count(oname) > 0; }
    bool has_field(const std::string& fname) const { return observable_fields.count(fname) > 0; }

    HermitianOperator observable(const Params& p, const std::string& oname) const;
    std::vector<CMatrix> observable_field(const Params& p, const std::string& fname) const;

    // Defaults overlaid with the supplied values; rejects unknown names.
    Params resolve(const Params& overrides) const;

    // Ground eigensystem with the degeneracy policy applied: throws
    // DegenerateGroundState when gap01 is below rel_tol * h_scale.
    EigenSystem ground_system(const Params& p, double degeneracy_rel_tol = 1e-9) const;

    // Hash of name, dimension and resolved parameters (report provenance).
    std::string fingerprint(const Params& p) const;
};

// Central finite-difference check of build_dh against build_h, used by the
// model self-tests. Returns max entrywise error over the sampled parameters.
double derivative_check(const Model& model, const Params& at, const std::string& pname,
                        double step);

} // namespace qgeom

#endif
