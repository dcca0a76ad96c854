#include "ergo/manybody.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <limits>

#include "ergo/errors.hpp"

namespace ergo::manybody {

namespace {

constexpr std::size_t kDenseLimit = 4096;
constexpr double kDegenerateGap = 1e-10;

std::uint32_t site_mask(std::size_t sites, std::size_t i) {
    return std::uint32_t{1} << (sites - 1 - i);
}

void check_basis(const SpinModel& model, const SectorBasis& basis) {
    if (basis.sites() != model.sites) {
        throw InputError("basis has " + std::to_string(basis.sites()) + " sites, model has " +
                         std::to_string(model.sites));
    }
    if (model.kind == ModelKind::ising && basis.up_count()) {
        throw InputError("ising Hamiltonian does not conserve magnetization; use the full basis");
    }
}

// Calls emit(column, value) for every nonzero H_terms[row, column].
template <typename Emit>
void row_elements(const SpinModel& model, const TermRange& terms, const SectorBasis& basis,
                  std::size_t row, Emit&& emit) {
    const std::size_t n = model.sites;
    const std::uint32_t s = basis.state(row);
    const bool full = !basis.up_count();
    auto locate = [&](std::uint32_t t) { return full ? std::size_t{t} : basis.index(t); };

    double diag = 0.0;
    for (std::size_t b = terms.bond_begin; b < terms.bond_end; ++b) {
        const std::uint32_t pair = site_mask(n, b) | site_mask(n, b + 1);
        const bool aligned = std::popcount(s & pair) != 1;
        if (model.kind == ModelKind::ising) {
            diag += aligned ? -1.0 : 1.0;
        } else {
            diag += model.exchange * (aligned ? 0.25 : -0.25);
            if (!aligned) emit(locate(s ^ pair), 0.5 * model.exchange);
        }
    }
    if (model.kind == ModelKind::ising && model.field != 0.0) {
        for (std::size_t i = terms.site_begin; i < terms.site_end; ++i) {
            emit(locate(s ^ site_mask(n, i)), -model.field);
        }
    }
    if (diag != 0.0) emit(row, diag);
}

std::vector<std::uint32_t> states_with_popcount(std::size_t bits, std::size_t up) {
    std::vector<std::uint32_t> out;
    const std::uint32_t end = std::uint32_t{1} << bits;
    for (std::uint32_t s = 0; s < end; ++s) {
        if (static_cast<std::size_t>(std::popcount(s)) == up) out.push_back(s);
    }
    return out;
}

double spectral_bound(const SpinModel& m) {
    const auto bonds = static_cast<double>(m.sites - 1);
    if (m.kind == ModelKind::ising) return bonds + std::abs(m.field) * static_cast<double>(m.sites);
    return 0.75 * std::abs(m.exchange) * bonds;
}

void fix_sign(Eigen::VectorXd& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (std::abs(v(i)) > 1e-12) {
            if (v(i) < 0.0) v = -v;
            return;
        }
    }
}

numkern::LinearOperator hamiltonian_operator(const SpinModel& model, const SectorBasis& basis) {
    return {basis.size(), [&model, &basis](std::span<const double> in, std::span<double> out) {
                apply_hamiltonian(model, basis, in, out);
            }};
}

InteractionCheck interaction_from(const SpinModel& model, const GroundState& gs,
                                  std::size_t ell) {
    const std::size_t n = model.sites;
    const auto dim_a = Eigen::Index{1} << ell;
    const auto dim_b = Eigen::Index{1} << (n - ell);
    const Eigen::VectorXd psi = full_vector(gs);
    using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    const Eigen::Map<const RowMajor> amp(psi.data(), dim_a, dim_b);

    const Eigen::MatrixXd rho = reduced_density_matrix(gs, ell);
    const numkern::EigenSystem schmidt = numkern::eigh(numkern::SymMatrix(rho));

    const SpinModel sub = model.subchain(ell);
    const numkern::EigenSystem local = numkern::eigh(dense_hamiltonian(sub, SectorBasis::full(ell)));

    InteractionCheck out;
    // Schmidt vector with the k-th largest weight goes to the k-th lowest level.
    Eigen::MatrixXd unitary = Eigen::MatrixXd::Zero(dim_a, dim_a);
    double passive = 0.0;
    for (Eigen::Index k = 0; k < dim_a; ++k) {
        const Eigen::Index from = dim_a - 1 - k;
        const double p = std::max(0.0, schmidt.values(from));
        unitary += local.vectors.col(k) * schmidt.vectors.col(from).transpose();
        passive += p * local.values(k);
        if (k + 1 < dim_a && p > 1e-14 && p - schmidt.values(from - 1) <= 1e-12) {
            out.ambiguous = true;
        }
    }
    RowMajor moved = unitary * amp;
    const Eigen::Map<const Eigen::VectorXd> psi_moved(moved.data(), moved.size());

    const SectorBasis full = SectorBasis::full(n);
    auto measure = [&](const TermRange& terms, const Eigen::VectorXd& v) {
        return expectation(model, terms, full,
                           std::span<const double>(v.data(), static_cast<std::size_t>(v.size())));
    };
    const Eigen::VectorXd moved_vec = psi_moved;
    out.interaction = measure(TermRange::cut(ell), psi);
    out.passive_interaction = measure(TermRange::cut(ell), moved_vec);
    out.ergotropy = measure(TermRange::left_block(ell), psi) - passive;
    out.passive_block = measure(TermRange::left_block(ell), moved_vec);
    out.right_block_shift = measure(TermRange::right_block(n, ell), moved_vec) -
                            measure(TermRange::right_block(n, ell), psi);
    return out;
}

}  // namespace

std::string to_string(ModelKind kind) {
    return kind == ModelKind::ising ? "ising" : "heisenberg";
}

ModelKind parse_model_kind(const std::string& name) {
    if (name == "ising") return ModelKind::ising;
    if (name == "heisenberg") return ModelKind::heisenberg;
    throw InputError("unknown model '" + name + "' (expected ising or heisenberg)");
}

SpinModel SpinModel::ising(std::size_t sites, double field) {
    return {ModelKind::ising, sites, field, 1.0};
}

SpinModel SpinModel::heisenberg(std::size_t sites, double exchange) {
    return {ModelKind::heisenberg, sites, 0.0, exchange};
}

void SpinModel::validate() const {
    if (kind == ModelKind::ising) {
        if (sites < 2 || sites > 20) {
            throw InputError("ising size must be in [2, 20], got " + std::to_string(sites));
        }
        if (!std::isfinite(field)) throw InputError("transverse field must be finite");
    } else {
        if (sites < 2 || sites > 24 || sites % 2 != 0) {
            throw InputError("heisenberg size must be even and in [2, 24], got " +
                             std::to_string(sites));
        }
        if (!std::isfinite(exchange) || exchange == 0.0) {
            throw InputError("exchange coupling must be finite and nonzero");
        }
    }
}

SpinModel SpinModel::subchain(std::size_t ell) const {
    SpinModel m = *this;
    m.sites = ell;
    return m;
}

SectorBasis SectorBasis::full(std::size_t sites) {
    if (sites < 1 || sites > 30) throw SizeError("full basis supports 1..30 sites");
    std::vector<std::uint32_t> s(std::size_t{1} << sites);
    for (std::size_t k = 0; k < s.size(); ++k) s[k] = static_cast<std::uint32_t>(k);
    return SectorBasis(sites, std::nullopt, std::move(s));
}

SectorBasis SectorBasis::magnetization(std::size_t sites, std::size_t up) {
    if (sites < 1 || sites > 30) throw SizeError("sector basis supports 1..30 sites");
    if (up > sites) throw InputError("more up spins than sites");
    return SectorBasis(sites, up, states_with_popcount(sites, up));
}

std::size_t SectorBasis::index(std::uint32_t state) const {
    const auto it = std::lower_bound(states_.begin(), states_.end(), state);
    if (it == states_.end() || *it != state) {
        throw InputError("configuration " + std::to_string(state) + " not in basis");
    }
    return static_cast<std::size_t>(it - states_.begin());
}

TermRange TermRange::whole(std::size_t sites) { return {0, sites - 1, 0, sites}; }

TermRange TermRange::left_block(std::size_t ell) { return {0, ell - 1, 0, ell}; }

TermRange TermRange::right_block(std::size_t sites, std::size_t ell) {
    return {ell, sites - 1, ell, sites};
}

TermRange TermRange::cut(std::size_t ell) { return {ell - 1, ell, 0, 0}; }

void apply_terms(const SpinModel& model, const TermRange& terms, const SectorBasis& basis,
                 std::span<const double> v, std::span<double> out) {
    check_basis(model, basis);
    if (v.size() != basis.size() || out.size() != basis.size()) {
        throw InputError("vector length does not match basis size");
    }
    const bool has_bonds = terms.bond_begin < terms.bond_end;
    if ((has_bonds && terms.bond_end > model.sites - 1) || terms.site_end > model.sites) {
        throw InputError("term range exceeds chain");
    }
    for (std::size_t row = 0; row < basis.size(); ++row) {
        double acc = 0.0;
        row_elements(model, terms, basis, row,
                     [&](std::size_t col, double value) { acc += value * v[col]; });
        out[row] = acc;
    }
}

void apply_hamiltonian(const SpinModel& model, const SectorBasis& basis,
                       std::span<const double> v, std::span<double> out) {
    apply_terms(model, TermRange::whole(model.sites), basis, v, out);
}

double expectation(const SpinModel& model, const TermRange& terms, const SectorBasis& basis,
                   std::span<const double> v) {
    std::vector<double> hv(v.size());
    apply_terms(model, terms, basis, v, hv);
    double acc = 0.0;
    for (std::size_t k = 0; k < v.size(); ++k) acc += v[k] * hv[k];
    return acc;
}

numkern::SymMatrix dense_hamiltonian(const SpinModel& model, const SectorBasis& basis) {
    check_basis(model, basis);
    const auto dim = static_cast<Eigen::Index>(basis.size());
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
    const TermRange terms = TermRange::whole(model.sites);
    for (std::size_t row = 0; row < basis.size(); ++row) {
        row_elements(model, terms, basis, row, [&](std::size_t col, double value) {
            h(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) += value;
        });
    }
    return numkern::SymMatrix(std::move(h));
}

SectorBasis ground_state_basis(const SpinModel& model) {
    if (model.kind == ModelKind::ising) return SectorBasis::full(model.sites);
    return SectorBasis::magnetization(model.sites, model.sites / 2);
}

GroundState ground_state(const SpinModel& model, std::uint64_t seed) {
    model.validate();
    GroundState gs;
    gs.basis = ground_state_basis(model);
    const std::size_t dim = gs.basis.size();

    if (dim <= kDenseLimit) {
        const numkern::EigenSystem es =
            numkern::eigh_lowest(dense_hamiltonian(model, gs.basis), std::min<std::size_t>(dim, 2));
        gs.energy = es.values(0);
        gs.vector = es.vectors.col(0);
        gs.gap = dim > 1 ? es.values(1) - es.values(0) : std::numeric_limits<double>::infinity();
    } else {
        // Keep the Krylov basis under roughly 1 GB.
        const std::size_t cap = std::clamp<std::size_t>(
            static_cast<std::size_t>(1.0e9 / (8.0 * static_cast<double>(dim))), 30, 160);
        const numkern::LinearOperator op = hamiltonian_operator(model, gs.basis);
        numkern::LanczosResult ground = numkern::lanczos_ground(op, seed, 1e-11, 50000, cap);
        fix_sign(ground.vector);
        gs.energy = ground.energy;
        gs.vector = std::move(ground.vector);

        // Lift the ground state out of the way and find the next level.
        const double shift = 2.0 * spectral_bound(model) + 1.0;
        const Eigen::VectorXd& psi = gs.vector;
        const numkern::LinearOperator lifted{
            dim, [&](std::span<const double> in, std::span<double> out) {
                apply_hamiltonian(model, gs.basis, in, out);
                const Eigen::Map<const Eigen::VectorXd> x(in.data(), psi.size());
                Eigen::Map<Eigen::VectorXd> y(out.data(), psi.size());
                y += (shift * psi.dot(x)) * psi;
            }};
        const numkern::LanczosResult excited =
            numkern::lanczos_ground(lifted, seed + 1, 1e-8, 50000, cap);
        gs.gap = excited.energy - gs.energy;
    }
    if (gs.gap < kDegenerateGap) {
        throw DegeneracyError("ground state of " + to_string(model.kind) + " N=" +
                                  std::to_string(model.sites) + " is degenerate",
                              gs.gap);
    }
    return gs;
}

std::vector<double> subsystem_spectrum(const SpinModel& model, std::size_t ell) {
    if (ell < 1) throw InputError("subsystem needs at least one site");
    if (ell > model.sites / 2 + 2 || ell > 14) {
        throw SizeError("subsystem of " + std::to_string(ell) + " sites exceeds the size cap");
    }
    const SpinModel sub = model.subchain(ell);
    std::vector<double> levels;
    levels.reserve(std::size_t{1} << ell);
    auto append = [&](const SectorBasis& basis) {
        const Eigen::VectorXd e = numkern::eigvalsh(dense_hamiltonian(sub, basis));
        levels.insert(levels.end(), e.data(), e.data() + e.size());
    };
    if (model.kind == ModelKind::ising) {
        append(SectorBasis::full(ell));
    } else {
        for (std::size_t up = 0; up <= ell; ++up) append(SectorBasis::magnetization(ell, up));
    }
    std::sort(levels.begin(), levels.end());
    return levels;
}

SchmidtData schmidt_spectrum(const GroundState& gs, std::size_t ell) {
    const std::size_t n = gs.basis.sites();
    if (ell < 1 || ell >= n) throw InputError("cut must leave both sides non-empty");
    if (static_cast<std::size_t>(gs.vector.size()) != gs.basis.size()) {
        throw InputError("state length does not match its basis");
    }
    SchmidtData out;
    const std::size_t rest = n - ell;
    if (!gs.basis.up_count()) {
        out.probabilities = numkern::schmidt_values(
            std::span<const double>(gs.vector.data(), gs.basis.size()), std::size_t{1} << ell,
            std::size_t{1} << rest);
    } else {
        const std::size_t up = *gs.basis.up_count();
        const std::size_t lo = up > rest ? up - rest : 0;
        const std::size_t hi = std::min(ell, up);
        for (std::size_t m = lo; m <= hi; ++m) {
            const auto left = states_with_popcount(ell, m);
            const auto right = states_with_popcount(rest, up - m);
            std::vector<double> block(left.size() * right.size());
            for (std::size_t a = 0; a < left.size(); ++a) {
                for (std::size_t b = 0; b < right.size(); ++b) {
                    const std::uint32_t s = (left[a] << rest) | right[b];
                    block[a * right.size() + b] = gs.vector(static_cast<Eigen::Index>(gs.basis.index(s)));
                }
            }
            const auto p = numkern::schmidt_values(block, left.size(), right.size());
            out.probabilities.insert(out.probabilities.end(), p.begin(), p.end());
        }
        std::sort(out.probabilities.begin(), out.probabilities.end(), std::greater<>());
    }
    out.chi = out.probabilities.size();
    return out;
}

Eigen::VectorXd full_vector(const GroundState& gs) {
    const std::size_t n = gs.basis.sites();
    if (n > 20) throw SizeError("full state vector limited to 20 sites");
    if (!gs.basis.up_count()) return gs.vector;
    Eigen::VectorXd out = Eigen::VectorXd::Zero(Eigen::Index{1} << n);
    for (std::size_t k = 0; k < gs.basis.size(); ++k) {
        out(gs.basis.state(k)) = gs.vector(static_cast<Eigen::Index>(k));
    }
    return out;
}

Eigen::MatrixXd reduced_density_matrix(const GroundState& gs, std::size_t ell) {
    const std::size_t n = gs.basis.sites();
    if (ell < 1 || ell >= n || ell > 12) throw SizeError("reduced density matrix needs 1 <= ell <= 12");
    const Eigen::VectorXd psi = full_vector(gs);
    using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    const Eigen::Map<const RowMajor> amp(psi.data(), Eigen::Index{1} << ell,
                                         Eigen::Index{1} << (n - ell));
    Eigen::MatrixXd rho = amp * amp.transpose();
    Eigen::MatrixXd sym = 0.5 * (rho + rho.transpose());
    return sym;
}

ManyBodyDecomposition decomposition(const SpinModel& model, std::uint64_t seed) {
    model.validate();
    const std::size_t ell = model.sites / 2;
    const GroundState gs = ground_state(model, seed);
    const std::vector<double> levels = subsystem_spectrum(model, ell);

    ManyBodyDecomposition out;
    out.schmidt = schmidt_spectrum(gs, ell);
    const auto& p = out.schmidt.probabilities;

    EnergyDecomposition& d = out.energies;
    d.sites = model.sites;
    d.block = ell;
    d.ground = gs.energy;
    const std::span<const double> psi(gs.vector.data(), gs.basis.size());
    d.block_energy = expectation(model, TermRange::left_block(ell), gs.basis, psi);
    out.interaction = expectation(model, TermRange::cut(ell), gs.basis, psi);
    d.block_ground = levels.front();
    // Probabilities beyond the Schmidt rank are zero.
    for (std::size_t k = 0; k < std::min(p.size(), levels.size()); ++k) {
        d.passive += p[k] * levels[k];
    }
    for (double q : p) d.entropy -= q * std::log(q);
    out.entanglement_gap = p.size() >= 2 ? std::log(p[0] / p[1]) : 0.0;
    d.gap = out.entanglement_gap;
    finish_decomposition(d);

    if (model.sites <= 14) {
        out.passive_interaction = interaction_from(model, gs, ell).passive_interaction;
    }
    return out;
}

InteractionCheck interaction_check(const SpinModel& model, std::uint64_t seed) {
    model.validate();
    if (model.sites > 14) throw SizeError("interaction_check is limited to N <= 14");
    const GroundState gs = ground_state(model, seed);
    return interaction_from(model, gs, model.sites / 2);
}

BlockWork evolved_block_work(const SpinModel& model, std::size_t ell, const Eigen::MatrixXd& rho,
                             double t) {
    const auto dim = Eigen::Index{1} << ell;
    if (rho.rows() != dim || rho.cols() != dim) {
        throw InputError("density matrix dimension does not match 2^ell");
    }
    const SpinModel sub = model.subchain(ell);
    const numkern::SymMatrix h = dense_hamiltonian(sub, SectorBasis::full(ell));
    const numkern::EigenSystem local = numkern::eigh(h);

    using Complex = std::complex<double>;
    const Eigen::MatrixXcd phi = local.vectors.cast<Complex>();
    Eigen::MatrixXcd in_eigenbasis = phi.transpose() * rho.cast<Complex>() * phi;
    for (Eigen::Index m = 0; m < dim; ++m) {
        for (Eigen::Index k = 0; k < dim; ++k) {
            in_eigenbasis(m, k) *= std::polar(1.0, -(local.values(m) - local.values(k)) * t);
        }
    }
    Eigen::MatrixXcd evolved = phi * in_eigenbasis * phi.adjoint();
    evolved = 0.5 * (evolved + evolved.adjoint()).eval();

    BlockWork out;
    out.energy = (evolved * h.entries().cast<Complex>()).trace().real();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(evolved, Eigen::EigenvaluesOnly);
    const Eigen::VectorXd ascending = solver.eigenvalues();
    out.probabilities.resize(static_cast<std::size_t>(dim));
    for (Eigen::Index k = 0; k < dim; ++k) {
        const double p = ascending(dim - 1 - k);
        out.probabilities[static_cast<std::size_t>(k)] = p;
        out.passive += p * local.values(k);
    }
    out.ergotropy = out.energy - out.passive;
    return out;
}

}  // namespace ergo::manybody
