#pragma once

// Half-filled open free-fermion chain H = -sum_ij J_ij c_i^dag c_j with
// nearest-neighbour hopping. Single-body energies are eigenvalues of -J; the
// ground state fills every strictly negative one.

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "ergo/energy.hpp"
#include "ergo/numkern.hpp"

namespace ergo::freefermion {

using ergo::EnergyDecomposition;

struct ChainSpec {
    std::size_t sites = 2;   // N, even
    std::size_t block = 1;   // lateral block 1..ell
    double hopping = 1.0;

    /// Block is the left half, ell = N/2.
    static ChainSpec half_chain(std::size_t sites);

    /// Throws InputError unless N is even, N >= 2 and 1 <= ell <= N-1.
    void validate() const;
};

/// Single-particle Hamiltonian -J of an open chain of `sites` sites.
numkern::SymMatrix hopping_hamiltonian(std::size_t sites, double hopping = 1.0);

/// Ascending single-body energies of an open chain of `sites` sites.
Eigen::VectorXd single_body_energies(std::size_t sites, double hopping = 1.0);

/// C_ij = <c_i^dag c_j> of the half-filled ground state.
class CorrelationMatrix {
public:
    explicit CorrelationMatrix(numkern::SymMatrix c) : c_(std::move(c)) {}

    std::size_t sites() const noexcept { return c_.dim(); }
    const numkern::SymMatrix& matrix() const noexcept { return c_; }
    double operator()(std::size_t i, std::size_t j) const { return c_(i, j); }

private:
    numkern::SymMatrix c_;
};

struct SpectralData {
    std::vector<double> occupations;          // nu_k, descending
    std::vector<double> entanglement_energies; // log((1-nu)/nu), ascending
    double entropy = 0.0;                      // nats
    double gap = 0.0;                          // beta
};


/// Sum of the N/2 lowest single-body energies.
double ground_energy(const ChainSpec& spec);

/// Throws DegeneracyError if a single-body energy sits at the Fermi level.
CorrelationMatrix correlation_matrix(const ChainSpec& spec);

/// Occupations, entanglement energies, entropy and gap of the leading
/// ell x ell block of C.
SpectralData block_spectral(const CorrelationMatrix& c, std::size_t block);

/// Entropy -sum(nu log nu + (1-nu) log(1-nu)) with clamped occupations.
double occupation_entropy(std::span<const double> occupations);

/// Least-squares slope of the m = min(8, size) entanglement energies
/// closest to zero. Zero when fewer than two levels exist.
double entanglement_gap(std::span<const double> entanglement_energies);

/// E_A, E~_A, E_{A,0} and derived quantities for the block of `spec`.
EnergyDecomposition block_energies(const ChainSpec& spec, const CorrelationMatrix& c);

/// correlation_matrix followed by block_energies.
EnergyDecomposition decompose(const ChainSpec& spec);

/// Passive energy over the full 2^ell many-body Fock space of the block:
/// every occupation pattern gets its product probability and its summed
/// single-body energy, then the two lists are aligned. ell <= 14.
double manybody_passive_oracle(const SpectralData& sd, std::span<const double> block_energies);

/// Evolves a block occupancy matrix for time t under the block's own
/// hopping Hamiltonian. The result is Hermitian but generally complex.
Eigen::MatrixXcd evolve_block(const Eigen::MatrixXcd& c_block, double t, double hopping = 1.0);

struct BlockWork {
    double energy = 0.0;     // <H_A>
    double passive = 0.0;    // aligned energy
    double ergotropy = 0.0;  // energy - passive
};

/// Energy bookkeeping of a (possibly evolved) block occupancy matrix.
BlockWork block_work(const Eigen::MatrixXcd& c_block, double hopping = 1.0);

}  // namespace ergo::freefermion
