#pragma once

#include <cstddef>

namespace ergo {

/// Subsystem energy bookkeeping for a block A of a ground state.
/// E_A >= E~_A >= E_{A,0}; excess = ergotropy + bound.
struct EnergyDecomposition {
    std::size_t sites = 0;
    std::size_t block = 0;
    double ground = 0.0;        // full-chain ground energy E
    double block_energy = 0.0;  // E_A, <H_A> in the ground state
    double passive = 0.0;       // E~_A, after optimal unitary on A
    double block_ground = 0.0;  // E_{A,0}, ground energy of H_A
    double excess = 0.0;        // Delta E_A
    double ergotropy = 0.0;     // W_A
    double bound = 0.0;         // Q_A
    double ergotropy_fraction = 0.0;
    double bound_fraction = 0.0;
    double entropy = 0.0;
    double gap = 0.0;
    std::size_t zero_modes = 0;
};

/// Fills W, Q, Delta E and the fractions from E_A, E~_A and E_{A,0}.
/// Delta E is formed as W + Q so the identity holds bit for bit.
inline void finish_decomposition(EnergyDecomposition& d) {
    d.ergotropy = d.block_energy - d.passive;
    d.bound = d.passive - d.block_ground;
    d.excess = d.ergotropy + d.bound;
    if (d.excess > 1e-12) {
        d.ergotropy_fraction = d.ergotropy / d.excess;
        d.bound_fraction = d.bound / d.excess;
    } else {
        d.ergotropy_fraction = 0.0;
        d.bound_fraction = 0.0;
    }
}

}  // namespace ergo
