#include "ergo/cftpredict.hpp"

#include <cmath>

#include "ergo/errors.hpp"

namespace ergo::cft {

using std::numbers::pi;

void CftConstants::validate() const {
    if (!(c0 > 0.0)) throw InputError("c0 must be positive");
    if (!(cB > 0.0)) throw InputError("cB must be positive");
}

namespace {

double casimir(const CftConstants& k) { return k.central_charge * pi * k.fermi_velocity; }

double log_gamma_n(double n, const CftConstants& k) { return k.log_gamma + std::log(n); }

}  // namespace

double predict_E0(double n, const CftConstants& k) {
    return -k.c0 * (n - 1.0) - k.cB - casimir(k) / (24.0 * n);
}

double predict_EA0(double n, const CftConstants& k) {
    // An open chain of N/2 sites.
    return -k.c0 * (n / 2.0 - 1.0) - k.cB - casimir(k) / (12.0 * n);
}

double predict_EA(double n, const CftConstants& k) {
    // Half the chain plus the central link, whose 1/N piece is 1/(2N).
    return -k.c0 * (n / 2.0 - 1.0) - k.cB / 2.0 - (casimir(k) / 48.0 + 0.5) / n;
}

double predict_EAt(double n, const CftConstants& k) {
    const double lg = log_gamma_n(n, k);
    return -k.c0 * (n / 2.0 - 1.0) - k.cB - casimir(k) / (12.0 * n) + lg * lg / (6.0 * pi * n);
}

double predict_DeltaE(double n, const CftConstants& k) {
    return k.cB / 2.0 + (casimir(k) / 16.0 - 0.5) / n;
}

double predict_Q(double n, const CftConstants& k) {
    const double lg = log_gamma_n(n, k);
    return lg * lg / (6.0 * pi * n);
}

double predict_W(double n, const CftConstants& k) {
    const double lg = log_gamma_n(n, k);
    return k.cB / 2.0 + (casimir(k) / 16.0 - 0.5) / n - lg * lg / (6.0 * pi * n);
}

double predict_entropy(double n, double ell, const CftConstants& k) {
    return k.central_charge / 6.0 * std::log(n / pi * std::sin(pi * ell / n)) + k.c_prime;
}

double predict_gap(double n, const CftConstants& k) {
    return 2.0 * pi * pi / log_gamma_n(n, k);
}

double gap_entropy_product(double beta, double entropy) { return beta * entropy; }

double predict_central_link(long n, long sites, const CftConstants& k) {
    const double np1 = static_cast<double>(sites) + 1.0;
    const double alternating = (n % 2 == 0) ? 1.0 : -1.0;
    return -k.c0 / 2.0 - pi / (24.0 * np1 * np1) +
           alternating / (2.0 * np1 * std::sin(pi * (static_cast<double>(n) + 0.5) / np1));
}

double sq_prediction(double entropy, double n) { return 6.0 / pi * entropy * entropy / n; }

}  // namespace ergo::cft
