#include "ergo/freefermion.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <string>

#include "ergo/errors.hpp"

namespace ergo::freefermion {

namespace {

// Entropy/log clamp for occupations.
constexpr double kNuFloor = 1e-300;
constexpr double kNuCeil = 1.0 - 1e-16;

// Single-body energies closer than this to zero count as Fermi-level modes.
constexpr double kZeroMode = 1e-12;

double clamp_nu(double nu) { return std::clamp(nu, kNuFloor, kNuCeil); }

}  // namespace

ChainSpec ChainSpec::half_chain(std::size_t sites) {
    ChainSpec s;
    s.sites = sites;
    s.block = sites / 2;
    return s;
}

void ChainSpec::validate() const {
    if (sites < 2 || sites % 2 != 0) {
        throw InputError("chain size must be even and >= 2, got " + std::to_string(sites));
    }
    if (block < 1 || block > sites - 1) {
        throw InputError("block length must be in [1, N-1], got " + std::to_string(block));
    }
    if (!std::isfinite(hopping) || hopping == 0.0) {
        throw InputError("hopping amplitude must be finite and nonzero");
    }
}

numkern::SymMatrix hopping_hamiltonian(std::size_t sites, double hopping) {
    const auto n = static_cast<Eigen::Index>(sites);
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
        h(i, i + 1) = -hopping;
        h(i + 1, i) = -hopping;
    }
    return numkern::SymMatrix(std::move(h));
}

Eigen::VectorXd single_body_energies(std::size_t sites, double hopping) {
    const std::vector<double> diag(sites, 0.0);
    const std::vector<double> off(sites - 1, -hopping);
    return numkern::eigvalsh_tridiagonal(diag, off);
}

double ground_energy(const ChainSpec& spec) {
    spec.validate();
    const Eigen::VectorXd eps = single_body_energies(spec.sites, spec.hopping);
    return eps.head(static_cast<Eigen::Index>(spec.sites / 2)).sum();
}

CorrelationMatrix correlation_matrix(const ChainSpec& spec) {
    spec.validate();
    const std::vector<double> diag(spec.sites, 0.0);
    const std::vector<double> off(spec.sites - 1, -spec.hopping);
    const numkern::EigenSystem modes = numkern::eigh_tridiagonal(diag, off);

    const auto filled = static_cast<Eigen::Index>(spec.sites / 2);
    const double homo = modes.values(filled - 1);
    const double lumo = modes.values(filled);
    if (std::abs(homo) < kZeroMode || std::abs(lumo) < kZeroMode) {
        throw DegeneracyError("single-body level at the Fermi energy", lumo - homo);
    }

    const auto n = static_cast<Eigen::Index>(spec.sites);
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, n);
    c.selfadjointView<Eigen::Lower>().rankUpdate(modes.vectors.leftCols(filled));
    c.triangularView<Eigen::StrictlyUpper>() = c.transpose();
    return CorrelationMatrix(numkern::SymMatrix(std::move(c)));
}

double occupation_entropy(std::span<const double> occupations) {
    double s = 0.0;
    for (double nu : occupations) {
        const double p = clamp_nu(nu);
        s -= p * std::log(p) + (1.0 - p) * std::log(1.0 - p);
    }
    return s;
}

double entanglement_gap(std::span<const double> levels) {
    const std::size_t m = std::min<std::size_t>(8, levels.size());
    if (m < 2) return 0.0;
    std::vector<std::size_t> idx(levels.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return std::abs(levels[a]) < std::abs(levels[b]);
    });
    idx.resize(m);
    std::sort(idx.begin(), idx.end());

    double mx = 0.0;
    double my = 0.0;
    for (std::size_t k : idx) {
        mx += static_cast<double>(k);
        my += levels[k];
    }
    mx /= static_cast<double>(m);
    my /= static_cast<double>(m);
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t k : idx) {
        const double dx = static_cast<double>(k) - mx;
        sxy += dx * (levels[k] - my);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

SpectralData block_spectral(const CorrelationMatrix& c, std::size_t block) {
    if (block < 1 || block > c.sites()) {
        throw InputError("block length must be in [1, N], got " + std::to_string(block));
    }
    const Eigen::VectorXd ascending = numkern::eigvalsh(c.matrix().leading_block(block));

    SpectralData sd;
    sd.occupations.resize(block);
    sd.entanglement_energies.resize(block);
    for (std::size_t k = 0; k < block; ++k) {
        const double nu = ascending(static_cast<Eigen::Index>(block - 1 - k));
        sd.occupations[k] = std::clamp(nu, 0.0, 1.0);
        const double p = clamp_nu(nu);
        sd.entanglement_energies[k] = std::log((1.0 - p) / p);
    }
    sd.entropy = occupation_entropy(sd.occupations);
    sd.gap = entanglement_gap(sd.entanglement_energies);
    return sd;
}

EnergyDecomposition block_energies(const ChainSpec& spec, const CorrelationMatrix& c) {
    spec.validate();
    if (c.sites() != spec.sites) {
        throw InputError("correlation matrix size does not match chain spec");
    }
    const std::size_t ell = spec.block;
    const SpectralData sd = block_spectral(c, ell);

    EnergyDecomposition d;
    d.sites = spec.sites;
    d.block = ell;
    d.entropy = sd.entropy;
    d.gap = sd.gap;

    const Eigen::VectorXd eps = single_body_energies(spec.sites, spec.hopping);
    d.ground = eps.head(static_cast<Eigen::Index>(spec.sites / 2)).sum();

    double bonds = 0.0;
    for (std::size_t i = 0; i + 1 < ell; ++i) bonds += c(i, i + 1);
    d.block_energy = -2.0 * spec.hopping * bonds;

    const Eigen::VectorXd eps_block = single_body_energies(ell, spec.hopping);
    for (std::size_t k = 0; k < ell; ++k) {
        const double e = eps_block(static_cast<Eigen::Index>(k));
        d.passive += sd.occupations[k] * e;
        if (e < -kZeroMode) d.block_ground += e;
        else if (std::abs(e) <= kZeroMode) ++d.zero_modes;
    }
    finish_decomposition(d);
    return d;
}

EnergyDecomposition decompose(const ChainSpec& spec) {
    return block_energies(spec, correlation_matrix(spec));
}

double manybody_passive_oracle(const SpectralData& sd, std::span<const double> block_energies) {
    const std::size_t ell = sd.occupations.size();
    if (block_energies.size() != ell) {
        throw InputError("oracle: occupation and energy counts differ");
    }
    if (ell > 14) throw SizeError("oracle enumerates 2^ell states; ell must be <= 14");

    const std::size_t states = std::size_t{1} << ell;
    std::vector<double> prob(states);
    std::vector<double> energy(states);
    for (std::size_t mask = 0; mask < states; ++mask) {
        double p = 1.0;
        double e = 0.0;
        for (std::size_t k = 0; k < ell; ++k) {
            if ((mask >> k) & 1U) {
                p *= sd.occupations[k];
                e += block_energies[k];
            } else {
                p *= 1.0 - sd.occupations[k];
            }
        }
        prob[mask] = p;
        energy[mask] = e;
    }
    std::sort(prob.begin(), prob.end(), std::greater<>());
    std::sort(energy.begin(), energy.end());
    double total = 0.0;
    for (std::size_t s = 0; s < states; ++s) total += prob[s] * energy[s];
    return total;
}

Eigen::MatrixXcd evolve_block(const Eigen::MatrixXcd& c_block, double t, double hopping) {
    if (c_block.rows() != c_block.cols() || c_block.rows() < 1) {
        throw InputError("evolve_block: occupancy matrix must be square and non-empty");
    }
    const auto ell = static_cast<std::size_t>(c_block.rows());
    const std::vector<double> diag(ell, 0.0);
    const std::vector<double> off(ell - 1, -hopping);
    const numkern::EigenSystem modes = numkern::eigh_tridiagonal(diag, off);
    const Eigen::MatrixXcd phi = modes.vectors.cast<std::complex<double>>();

    // <d_m^dag d_n> picks up exp(i (eps_m - eps_n) t).
    Eigen::MatrixXcd mode = phi.transpose() * c_block * phi;
    for (Eigen::Index m = 0; m < mode.rows(); ++m) {
        for (Eigen::Index n = 0; n < mode.cols(); ++n) {
            mode(m, n) *= std::polar(1.0, (modes.values(m) - modes.values(n)) * t);
        }
    }
    Eigen::MatrixXcd out = phi * mode * phi.transpose();
    return 0.5 * (out + out.adjoint());
}

BlockWork block_work(const Eigen::MatrixXcd& c_block, double hopping) {
    const auto ell = static_cast<std::size_t>(c_block.rows());
    BlockWork w;
    for (Eigen::Index i = 0; i + 1 < c_block.rows(); ++i) {
        w.energy += -2.0 * hopping * c_block(i, i + 1).real();
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(c_block, Eigen::EigenvaluesOnly);
    const Eigen::VectorXd ascending = solver.eigenvalues();
    const Eigen::VectorXd eps = single_body_energies(ell, hopping);
    for (std::size_t k = 0; k < ell; ++k) {
        w.passive += ascending(static_cast<Eigen::Index>(ell - 1 - k)) *
                     eps(static_cast<Eigen::Index>(k));
    }
    w.ergotropy = w.energy - w.passive;
    return w;
}

}  // namespace ergo::freefermion
