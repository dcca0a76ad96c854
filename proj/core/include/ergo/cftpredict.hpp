#pragma once

// Closed-form finite-size predictions for the half-filled open chain and
// its left half. N is the full chain length throughout.

#include <numbers>

namespace ergo::cft {

struct CftConstants {
    double c0 = 2.0 / std::numbers::pi;        // bulk energy per bond
    double cB = 4.0 / std::numbers::pi - 1.0;  // boundary energy
    double central_charge = 1.0;
    double fermi_velocity = 2.0;
    double log_gamma = 2.3;                    // non-universal, fittable
    double c_prime = 0.0;                      // entropy offset, always fitted

    /// Throws InputError if c0 <= 0 or cB <= 0.
    void validate() const;
};

/// Ground energy with Casimir correction: -c0(N-1) - cB - c pi vF / 24N.
double predict_E0(double n, const CftConstants& k = {});

/// Left-half ground energy E_{A,0}.
double predict_EA0(double n, const CftConstants& k = {});
/// Left-half energy E_A in the global ground state.
double predict_EA(double n, const CftConstants& k = {});
/// Left-half passive energy E~_A.
double predict_EAt(double n, const CftConstants& k = {});

double predict_W(double n, const CftConstants& k = {});
double predict_Q(double n, const CftConstants& k = {});
double predict_DeltaE(double n, const CftConstants& k = {});

/// (c/6) log((N/pi) sin(pi ell/N)) + c'.
double predict_entropy(double n, double ell, const CftConstants& k = {});

/// Entanglement gap 2 pi^2 / log(gamma N).
double predict_gap(double n, const CftConstants& k = {});

/// beta * S, to be compared with pi^2/3.
double gap_entropy_product(double beta, double entropy);

/// Nearest-neighbour correlator C_{n,n+1} (sites 1..N) with its alternating
/// correction. Sign follows the expansion, which is the negative of
/// <c_n^dag c_{n+1}> at half filling; compare magnitudes.
double predict_central_link(long n, long sites, const CftConstants& k = {});

/// Predicted Q_A = (6/pi) S^2 / N.
double sq_prediction(double entropy, double n);

}  // namespace ergo::cft
