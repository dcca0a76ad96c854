#pragma once

// Exact diagonalization of open spin-1/2 chains:
//   ising       H = -sum sz_i sz_{i+1} - field * sum sx_i       (Pauli matrices)
//   heisenberg  H = exchange * sum S_i . S_{i+1}               (spin-1/2 operators)
// Basis states are bitstrings with bit (N-1-i) holding site i (1 = up), so
// the left block occupies the high bits and a basis index factorizes as
// a * 2^(N-ell) + b.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ergo/energy.hpp"
#include "ergo/numkern.hpp"

namespace ergo::manybody {

enum class ModelKind { ising, heisenberg };

std::string to_string(ModelKind kind);
ModelKind parse_model_kind(const std::string& name);

struct SpinModel {
    ModelKind kind = ModelKind::ising;
    std::size_t sites = 2;
    double field = 1.0;     // transverse field Gamma (ising)
    double exchange = 1.0;  // J (heisenberg)

    static SpinModel ising(std::size_t sites, double field = 1.0);
    static SpinModel heisenberg(std::size_t sites, double exchange = 1.0);

    /// Size caps: ising 2..20, heisenberg even 2..24.
    void validate() const;

    /// Same couplings on the open sub-chain of the first `ell` sites.
    SpinModel subchain(std::size_t ell) const;
};

/// Sorted list of basis bitstrings, optionally restricted to a fixed number
/// of up spins.
class SectorBasis {
public:
    /// All 2^N configurations; index == bitstring.
    static SectorBasis full(std::size_t sites);
    /// Configurations with exactly `up` spins up (total Sz = up - N/2).
    static SectorBasis magnetization(std::size_t sites, std::size_t up);

    std::size_t sites() const noexcept { return sites_; }
    std::size_t size() const noexcept { return states_.size(); }
    std::optional<std::size_t> up_count() const noexcept { return up_; }
    std::uint32_t state(std::size_t k) const { return states_[k]; }
    const std::vector<std::uint32_t>& states() const noexcept { return states_; }

    /// Position of a bitstring; throws InputError if it is not in the basis.
    std::size_t index(std::uint32_t state) const;

private:
    SectorBasis(std::size_t sites, std::optional<std::size_t> up, std::vector<std::uint32_t> s)
        : sites_(sites), up_(up), states_(std::move(s)) {}

    std::size_t sites_;
    std::optional<std::size_t> up_;
    std::vector<std::uint32_t> states_;
};

/// Which Hamiltonian terms to apply. Bonds are (i, i+1) for i in
/// [bond_begin, bond_end); transverse fields act on sites [site_begin, site_end).
struct TermRange {
    std::size_t bond_begin = 0;
    std::size_t bond_end = 0;
    std::size_t site_begin = 0;
    std::size_t site_end = 0;

    static TermRange whole(std::size_t sites);
    /// H_A: bonds and fields inside sites [0, ell).
    static TermRange left_block(std::size_t ell);
    /// H_B: bonds and fields inside sites [ell, N).
    static TermRange right_block(std::size_t sites, std::size_t ell);
    /// H_AB: only the bond (ell-1, ell).
    static TermRange cut(std::size_t ell);
};

/// out = H v, matrix-free.
void apply_hamiltonian(const SpinModel& model, const SectorBasis& basis,
                       std::span<const double> v, std::span<double> out);

/// out = H_terms v for a subset of terms.
void apply_terms(const SpinModel& model, const TermRange& terms, const SectorBasis& basis,
                 std::span<const double> v, std::span<double> out);

/// <v| H_terms |v>.
double expectation(const SpinModel& model, const TermRange& terms, const SectorBasis& basis,
                   std::span<const double> v);

/// Dense matrix of the full Hamiltonian in `basis`.
numkern::SymMatrix dense_hamiltonian(const SpinModel& model, const SectorBasis& basis);

/// Basis a model's ground state is computed in: full for ising, Sz = 0 for
/// heisenberg.
SectorBasis ground_state_basis(const SpinModel& model);

struct GroundState {
    double energy = 0.0;
    Eigen::VectorXd vector;  // components in `basis`
    double gap = 0.0;        // E1 - E0 within the basis
    SectorBasis basis = SectorBasis::full(1);
};

/// Dense path up to 4096 basis states, seeded Lanczos above. Throws
/// DegeneracyError if the gap is below 1e-10.
GroundState ground_state(const SpinModel& model, std::uint64_t seed = 42);

/// Ascending spectrum (2^ell values) of the sub-chain Hamiltonian H_A.
/// Requires ell <= N/2 + 2 and 2^ell <= 16384.
std::vector<double> subsystem_spectrum(const SpinModel& model, std::size_t ell);

struct SchmidtData {
    std::vector<double> probabilities;  // descending
    std::size_t chi = 0;
};

/// Schmidt probabilities across the cut after site `ell`.
SchmidtData schmidt_spectrum(const GroundState& gs, std::size_t ell);

struct ManyBodyDecomposition {
    EnergyDecomposition energies;
    SchmidtData schmidt;
    double interaction = 0.0;                   // E_AB = <H_AB>
    std::optional<double> passive_interaction;  // E~_AB, when computed
    double entanglement_gap = 0.0;              // -log(p1/p0)
};

/// Left-half decomposition, ell = N/2.
ManyBodyDecomposition decomposition(const SpinModel& model, std::uint64_t seed = 42);

struct InteractionCheck {
    double interaction = 0.0;          // E_AB
    double passive_interaction = 0.0;  // E~_AB after passivizing A
    double ergotropy = 0.0;            // W_A
    double passive_block = 0.0;        // <H_A> after passivizing, equals E~_A
    double right_block_shift = 0.0;    // E~_B - E_B, zero up to rounding
    bool ambiguous = false;            // degenerate Schmidt values
};

/// Applies the passivizing unitary on A to the ground state and measures the
/// crossing bond before and after. N <= 14.
InteractionCheck interaction_check(const SpinModel& model, std::uint64_t seed = 42);

/// Ground state expanded to the full 2^N basis. N <= 20.
Eigen::VectorXd full_vector(const GroundState& gs);

/// Reduced density matrix of the first `ell` sites, 2^ell x 2^ell.
Eigen::MatrixXd reduced_density_matrix(const GroundState& gs, std::size_t ell);

struct BlockWork {
    double energy = 0.0;
    double passive = 0.0;
    double ergotropy = 0.0;
    std::vector<double> probabilities;  // descending
};

/// Evolves rho_A for time t under the sub-chain Hamiltonian of `ell` sites
/// and reports its energy, passive energy and ergotropy.
BlockWork evolved_block_work(const SpinModel& model, std::size_t ell,
                             const Eigen::MatrixXd& rho, double t);

}  // namespace ergo::manybody
