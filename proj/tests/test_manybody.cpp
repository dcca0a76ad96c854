#include <doctest.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>
#include <vector>

#include "ergo/errors.hpp"
#include "ergo/manybody.hpp"

using namespace ergo::manybody;

namespace {

// Brute-force Kronecker-product Hamiltonians. Site 0 is the leftmost factor
// and each factor has basis (down, up), so basis index bits match the
// library's site convention.
Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

Eigen::MatrixXd site_op(const Eigen::Matrix2d& op, std::size_t site, std::size_t sites) {
    Eigen::MatrixXd out = Eigen::MatrixXd::Identity(1, 1);
    for (std::size_t s = 0; s < sites; ++s) {
        out = kron(out, s == site ? Eigen::MatrixXd(op) : Eigen::MatrixXd::Identity(2, 2));
    }
    return out;
}

struct Paulis {
    Eigen::Matrix2d x, z, plus, minus;
    Paulis() {
        x << 0, 1, 1, 0;
        z << -1, 0, 0, 1;
        plus << 0, 0, 1, 0;   // |up><down|
        minus << 0, 1, 0, 0;
    }
};

Eigen::MatrixXd bond_term(ModelKind kind, std::size_t i, std::size_t sites) {
    const Paulis p;
    if (kind == ModelKind::ising) {
        return -site_op(p.z, i, sites) * site_op(p.z, i + 1, sites);
    }
    return 0.25 * site_op(p.z, i, sites) * site_op(p.z, i + 1, sites) +
           0.5 * (site_op(p.plus, i, sites) * site_op(p.minus, i + 1, sites) +
                  site_op(p.minus, i, sites) * site_op(p.plus, i + 1, sites));
}

Eigen::MatrixXd brute_hamiltonian(ModelKind kind, std::size_t sites, double field = 1.0) {
    const Paulis p;
    const auto dim = Eigen::Index{1} << sites;
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
    for (std::size_t i = 0; i + 1 < sites; ++i) h += bond_term(kind, i, sites);
    if (kind == ModelKind::ising) {
        for (std::size_t i = 0; i < sites; ++i) h -= field * site_op(p.x, i, sites);
    }
    return h;
}

SpinModel model_of(ModelKind kind, std::size_t n) {
    return kind == ModelKind::ising ? SpinModel::ising(n) : SpinModel::heisenberg(n);
}

// Open transverse-field Ising chain through its free-fermion solution:
// E0 = -1/2 sum of the singular values of the bidiagonal matrix with 2 Gamma
// on the diagonal and 2 on the superdiagonal.
Eigen::VectorXd ising_quasiparticles(std::size_t n, double field = 1.0) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 2.0 * field;
    for (std::size_t i = 0; i + 1 < n; ++i) m(i, i + 1) = 2.0;
    return Eigen::JacobiSVD<Eigen::MatrixXd>(m).singularValues();
}

struct BruteCase {
    double energy;
    double block_energy;
    double passive;
    double block_ground;
    double entropy;
    double cut_energy;
    std::vector<double> probabilities;
    Eigen::VectorXd block_spectrum;
    Eigen::VectorXd psi;
};

BruteCase brute_case(ModelKind kind, std::size_t n) {
    const std::size_t ell = n / 2;
    const Eigen::MatrixXd h = brute_hamiltonian(kind, n);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
    BruteCase out;
    out.energy = es.eigenvalues()(0);
    out.psi = es.eigenvectors().col(0);

    const Eigen::MatrixXd ha = kron(brute_hamiltonian(kind, ell),
                                    Eigen::MatrixXd::Identity(Eigen::Index{1} << (n - ell), Eigen::Index{1} << (n - ell)));
    out.block_energy = out.psi.dot(ha * out.psi);
    out.cut_energy = out.psi.dot(bond_term(kind, ell - 1, n) * out.psi);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> hs(brute_hamiltonian(kind, ell), Eigen::EigenvaluesOnly);
    out.block_spectrum = hs.eigenvalues();
    out.block_ground = out.block_spectrum(0);

    const Eigen::Index da = Eigen::Index{1} << ell;
    const Eigen::Index db = Eigen::Index{1} << (n - ell);
    // row-major reshape: row = block A configuration
    Eigen::MatrixXd m(da, db);
    for (Eigen::Index a = 0; a < da; ++a)
        for (Eigen::Index b = 0; b < db; ++b) m(a, b) = out.psi(a * db + b);
    const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(m).singularValues();
    out.passive = 0.0;
    out.entropy = 0.0;
    for (Eigen::Index k = 0; k < sv.size(); ++k) {
        const double pk = sv(k) * sv(k);
        if (pk < 1e-14) continue;
        out.probabilities.push_back(pk);
        out.passive += pk * out.block_spectrum(k);
        out.entropy -= pk * std::log(pk);
    }
    return out;
}

std::span<const double> cs(const Eigen::VectorXd& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }
std::span<double> ms(Eigen::VectorXd& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }

Eigen::VectorXd apply(const SpinModel& m, const SectorBasis& b, const Eigen::VectorXd& v) {
    Eigen::VectorXd out(v.size());
    apply_hamiltonian(m, b, cs(v), ms(out));
    return out;
}

}  // namespace

TEST_CASE("model validation") {
    CHECK_NOTHROW(SpinModel::ising(2).validate());
    CHECK_NOTHROW(SpinModel::ising(20).validate());
    CHECK_THROWS_AS(SpinModel::ising(1).validate(), ergo::InputError);
    CHECK_THROWS_AS(SpinModel::ising(21).validate(), ergo::InputError);
    CHECK_NOTHROW(SpinModel::heisenberg(24).validate());
    CHECK_THROWS_AS(SpinModel::heisenberg(7).validate(), ergo::InputError);
    CHECK_THROWS_AS(SpinModel::heisenberg(26).validate(), ergo::InputError);
    CHECK(parse_model_kind("heisenberg") == ModelKind::heisenberg);
    CHECK(to_string(ModelKind::ising) == "ising");
    CHECK_THROWS_AS(parse_model_kind("xxz"), ergo::InputError);
}

TEST_CASE("sector bases") {
    const auto full = SectorBasis::full(3);
    CHECK(full.size() == 8);
    for (std::size_t k = 0; k < 8; ++k) CHECK(full.state(k) == k);
    CHECK(!full.up_count());

    const std::size_t binom[] = {1, 2, 6, 20, 70, 252, 924, 3432, 12870};
    for (std::size_t half = 1; half <= 8; ++half) {
        const auto b = SectorBasis::magnetization(2 * half, half);
        CHECK(b.size() == binom[half]);
        CHECK(std::is_sorted(b.states().begin(), b.states().end()));
        for (std::size_t k = 0; k < b.size(); ++k) {
            CHECK(static_cast<std::size_t>(std::popcount(b.state(k))) == half);
            CHECK(b.index(b.state(k)) == k);
        }
    }
    CHECK_THROWS_AS(SectorBasis::magnetization(4, 2).index(0b0111), ergo::InputError);
}

TEST_CASE("two-site Hamiltonians applied by hand") {
    const double gamma = 0.7;
    const auto m = SpinModel::ising(2, gamma);
    const auto basis = SectorBasis::full(2);
    Eigen::VectorXd up_up = Eigen::VectorXd::Zero(4);
    up_up(3) = 1.0;
    Eigen::VectorXd expected(4);
    expected << 0.0, -gamma, -gamma, -1.0;
    CHECK((apply(m, basis, up_up) - expected).cwiseAbs().maxCoeff() < 1e-15);

    const auto h = SpinModel::heisenberg(2);
    const auto sector = SectorBasis::magnetization(2, 1);
    Eigen::VectorXd singlet(2);
    singlet << 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0);
    CHECK((apply(h, sector, singlet) + 0.75 * singlet).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("matrix-free Hamiltonians match Kronecker products") {
    for (std::size_t n = 2; n <= 8; ++n) {
        CAPTURE(n);
        const auto m = SpinModel::ising(n, 0.9);
        const auto dense = dense_hamiltonian(m, SectorBasis::full(n));
        CHECK((dense.entries() - brute_hamiltonian(ModelKind::ising, n, 0.9)).cwiseAbs().maxCoeff() < 1e-14);
    }
    for (std::size_t n = 2; n <= 8; n += 2) {
        const auto m = SpinModel::heisenberg(n);
        const auto basis = SectorBasis::magnetization(n, n / 2);
        const auto dense = dense_hamiltonian(m, basis);
        const Eigen::MatrixXd brute = brute_hamiltonian(ModelKind::heisenberg, n);
        for (std::size_t a = 0; a < basis.size(); ++a)
            for (std::size_t b = 0; b < basis.size(); ++b)
                CHECK(dense(a, b) == doctest::Approx(brute(basis.state(a), basis.state(b))).epsilon(1e-14));
    }
}

TEST_CASE("Hamiltonians are symmetric on random probes") {
    for (auto kind : {ModelKind::ising, ModelKind::heisenberg}) {
        const auto m = model_of(kind, 10);
        const auto basis = ground_state_basis(m);
        for (std::uint64_t s = 0; s < 8; ++s) {
            const Eigen::VectorXd u = ergo::numkern::seeded_vector(basis.size(), 100 + s);
            const Eigen::VectorXd v = ergo::numkern::seeded_vector(basis.size(), 200 + s);
            const double scale = u.norm() * v.norm();
            CHECK(std::abs(u.dot(apply(m, basis, v)) - apply(m, basis, u).dot(v)) <= 1e-12 * scale);
        }
    }
}

TEST_CASE("basis mismatches are rejected") {
    const auto m = SpinModel::ising(4);
    Eigen::VectorXd v = Eigen::VectorXd::Zero(8);
    Eigen::VectorXd out(8);
    CHECK_THROWS_AS(apply_hamiltonian(m, SectorBasis::full(3), cs(v), ms(out)), ergo::InputError);
    CHECK_THROWS_AS(apply_hamiltonian(m, SectorBasis::full(4), cs(v), ms(out)), ergo::InputError);
    Eigen::VectorXd w = Eigen::VectorXd::Zero(6);
    Eigen::VectorXd wout(6);
    CHECK_THROWS_AS(apply_hamiltonian(m, SectorBasis::magnetization(4, 2), cs(w), ms(wout)), ergo::InputError);
}

TEST_CASE("ground states of the smallest chains") {
    CHECK(ground_state(SpinModel::ising(2)).energy == doctest::Approx(-std::sqrt(5.0)).epsilon(1e-14));
    CHECK(ground_state(SpinModel::heisenberg(2)).energy == doctest::Approx(-0.75).epsilon(1e-14));
    const auto h4 = ground_state(SpinModel::heisenberg(4));
    CHECK(h4.energy == doctest::Approx(-(3.0 + 2.0 * std::sqrt(3.0)) / 4.0).epsilon(1e-14));
    CHECK(h4.energy == doctest::Approx(-1.61603).epsilon(1e-5));
    CHECK(h4.gap > 0.1);
}

TEST_CASE("ising ground energies follow the free-fermion solution") {
    // N = 13, 14 exceed the dense threshold and exercise Lanczos
    for (std::size_t n : {2, 3, 5, 8, 11, 13, 14}) {
        CAPTURE(n);
        const auto gs = ground_state(SpinModel::ising(n));
        const Eigen::VectorXd eps = ising_quasiparticles(n);
        CHECK(gs.energy == doctest::Approx(-0.5 * eps.sum()).epsilon(1e-11));
        CHECK(gs.gap == doctest::Approx(eps.minCoeff()).epsilon(1e-6));
        CHECK(gs.vector.norm() == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("heisenberg ground states beyond the dense threshold") {
    const auto m = SpinModel::heisenberg(16);
    const auto gs = ground_state(m);
    CHECK(gs.basis.size() == 12870);
    const Eigen::VectorXd r = apply(m, gs.basis, gs.vector) - gs.energy * gs.vector;
    CHECK(r.norm() <= 1e-9);
    CHECK(gs.gap > 0.0);
    // reproducible given the seed
    CHECK(ground_state(m).vector == gs.vector);

    double last = 0.0;
    for (std::size_t n : {4, 8, 12, 16}) {
        const double e = n == 16 ? gs.energy : ground_state(SpinModel::heisenberg(n)).energy;
        CHECK(e < last);
        last = e;
    }
}

TEST_CASE("classical ising point is degenerate") {
    CHECK_THROWS_AS(ground_state(SpinModel::ising(6, 0.0)), ergo::DegeneracyError);
}

TEST_CASE("subsystem spectra") {
    const auto ising1 = subsystem_spectrum(SpinModel::ising(4, 0.6), 1);
    REQUIRE(ising1.size() == 2);
    CHECK(ising1[0] == doctest::Approx(-0.6));
    CHECK(ising1[1] == doctest::Approx(0.6));

    const auto heis2 = subsystem_spectrum(SpinModel::heisenberg(4), 2);
    const double expected_h[] = {-0.75, 0.25, 0.25, 0.25};
    for (int k = 0; k < 4; ++k) CHECK(heis2[k] == doctest::Approx(expected_h[k]).epsilon(1e-14));

    const auto ising2 = subsystem_spectrum(SpinModel::ising(4), 2);
    const double r5 = std::sqrt(5.0);
    const double expected_i[] = {-r5, -1.0, 1.0, r5};
    for (int k = 0; k < 4; ++k) CHECK(ising2[k] == doctest::Approx(expected_i[k]).epsilon(1e-14));

    for (auto kind : {ModelKind::ising, ModelKind::heisenberg}) {
        for (std::size_t ell = 1; ell <= 7; ++ell) {
            const auto spec = subsystem_spectrum(model_of(kind, 12), ell);
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(brute_hamiltonian(kind, ell), Eigen::EigenvaluesOnly);
            REQUIRE(spec.size() == std::size_t{1} << ell);
            for (std::size_t k = 0; k < spec.size(); ++k)
                CHECK(spec[k] == doctest::Approx(es.eigenvalues()(k)).epsilon(1e-12));
        }
    }
    CHECK_THROWS_AS(subsystem_spectrum(SpinModel::ising(6), 6), ergo::SizeError);
}

TEST_CASE("decomposition of the smallest chains") {
    const auto i2 = decomposition(SpinModel::ising(2));
    const double r = 2.0 / std::sqrt(5.0);
    CHECK(i2.energies.block_energy == doctest::Approx(-r).epsilon(1e-13));
    CHECK(i2.energies.passive == doctest::Approx(-r).epsilon(1e-13));
    CHECK(i2.energies.block_ground == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(std::abs(i2.energies.ergotropy) <= 1e-14);
    CHECK(i2.energies.bound == doctest::Approx(1.0 - r).epsilon(1e-12));
    CHECK(i2.energies.entropy == doctest::Approx(0.20666).epsilon(1e-4));
    CHECK(i2.schmidt.probabilities[0] == doctest::Approx(0.5 + 1.0 / std::sqrt(5.0)).epsilon(1e-12));

    const auto h2 = decomposition(SpinModel::heisenberg(2));
    CHECK(h2.energies.block_energy == 0.0);
    CHECK(h2.energies.ergotropy == 0.0);
    CHECK(h2.energies.bound == 0.0);
    CHECK(h2.energies.entropy == doctest::Approx(std::log(2.0)).epsilon(1e-14));
    CHECK(h2.schmidt.chi == 2);
}

TEST_CASE("decomposition agrees with brute force") {
    for (auto kind : {ModelKind::ising, ModelKind::heisenberg}) {
        for (std::size_t n = 4; n <= 10; n += 2) {
            CAPTURE(n);
            const auto d = decomposition(model_of(kind, n));
            const auto b = brute_case(kind, n);
            CHECK(d.energies.ground == doctest::Approx(b.energy).epsilon(1e-12));
            CHECK(d.energies.block_energy == doctest::Approx(b.block_energy).epsilon(1e-11));
            CHECK(d.energies.passive == doctest::Approx(b.passive).epsilon(1e-11));
            CHECK(d.energies.block_ground == doctest::Approx(b.block_ground).epsilon(1e-12));
            CHECK(d.energies.entropy == doctest::Approx(b.entropy).epsilon(1e-10));
            CHECK(d.interaction == doctest::Approx(b.cut_energy).epsilon(1e-11));
            REQUIRE(d.schmidt.probabilities.size() == b.probabilities.size());
            CHECK(d.schmidt.chi == b.probabilities.size());
            for (std::size_t k = 0; k < b.probabilities.size(); ++k)
                CHECK(std::abs(d.schmidt.probabilities[k] - b.probabilities[k]) <= 1e-12);
        }
    }
}

TEST_CASE("decomposition invariants over the accessible sizes") {
    for (auto kind : {ModelKind::ising, ModelKind::heisenberg}) {
        for (std::size_t n = 2; n <= 14; n += 2) {
            CAPTURE(n);
            const auto d = decomposition(model_of(kind, n));
            const auto& e = d.energies;
            CHECK(e.block_energy >= e.passive - 1e-10);
            CHECK(e.passive >= e.block_ground - 1e-10);
            CHECK(e.excess == e.ergotropy + e.bound);
            CHECK(e.ergotropy >= -1e-10);
            CHECK(e.bound >= -1e-10);
            if (e.excess > 1e-12) CHECK(std::abs(e.ergotropy_fraction + e.bound_fraction - 1.0) <= 1e-9);
            double sum = 0.0;
            for (std::size_t k = 0; k < d.schmidt.probabilities.size(); ++k) {
                sum += d.schmidt.probabilities[k];
                if (k > 0) CHECK(d.schmidt.probabilities[k] <= d.schmidt.probabilities[k - 1]);
            }
            CHECK(std::abs(sum - 1.0) <= 1e-10);
            CHECK(d.schmidt.chi <= (std::size_t{1} << (n / 2)));
            REQUIRE(d.passive_interaction);
            CHECK(*d.passive_interaction - d.interaction >= e.ergotropy - 1e-9);
        }
    }
}

TEST_CASE("entropy is the same from either side of the cut") {
    for (auto kind : {ModelKind::ising, ModelKind::heisenberg}) {
        for (std::size_t n : {6, 8}) {
            const auto gs = ground_state(model_of(kind, n));
            const Eigen::VectorXd psi = full_vector(gs);
            for (std::size_t ell = 1; ell < n; ++ell) {
                const auto s = schmidt_spectrum(gs, ell);
                double sa = 0.0;
                for (double p : s.probabilities) sa -= p * std::log(p);
                // complement B: trace out A from the row-major reshape
                const Eigen::Index da = Eigen::Index{1} << ell;
                const Eigen::Index db = Eigen::Index{1} << (n - ell);
                Eigen::MatrixXd m(da, db);
                for (Eigen::Index a = 0; a < da; ++a)
                    for (Eigen::Index b = 0; b < db; ++b) m(a, b) = psi(a * db + b);
                Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.transpose() * m, Eigen::EigenvaluesOnly);
                double sb = 0.0;
                for (double p : es.eigenvalues())
                    if (p > 1e-16) sb -= p * std::log(p);
                CHECK(std::abs(sa - sb) <= 1e-10);
            }
        }
    }
}

TEST_CASE("reduced density matrix carries the Schmidt spectrum") {
    const auto gs = ground_state(SpinModel::heisenberg(8));
    const Eigen::MatrixXd rho = reduced_density_matrix(gs, 4);
    CHECK(rho.trace() == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(rho == rho.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(rho, Eigen::EigenvaluesOnly);
    const auto s = schmidt_spectrum(gs, 4);
    for (std::size_t k = 0; k < s.chi; ++k)
        CHECK(std::abs(es.eigenvalues()(15 - k) - s.probabilities[k]) <= 1e-12);
}

TEST_CASE("interaction inequality") {
    const auto i2 = interaction_check(SpinModel::ising(2));
    const auto b2 = brute_case(ModelKind::ising, 2);
    CHECK(i2.interaction == doctest::Approx(b2.cut_energy).epsilon(1e-13));
    CHECK(i2.passive_interaction - i2.interaction >= -1e-12);
    CHECK(std::abs(i2.ergotropy) <= 1e-12);

    const auto h4 = interaction_check(SpinModel::heisenberg(4));
    CHECK(h4.ergotropy >= -1e-12);
    CHECK(h4.passive_interaction - h4.interaction >= h4.ergotropy - 1e-9);

    for (auto kind : {ModelKind::ising, ModelKind::heisenberg}) {
        for (std::size_t n = 2; n <= 12; n += 2) {
            CAPTURE(n);
            const auto r = interaction_check(model_of(kind, n));
            const auto d = decomposition(model_of(kind, n));
            CHECK(r.passive_interaction - r.interaction - r.ergotropy >= -1e-9);
            CHECK(r.ergotropy == doctest::Approx(d.energies.ergotropy).epsilon(1e-9));
            CHECK(r.passive_block == doctest::Approx(d.energies.passive).epsilon(1e-9));
            CHECK(std::abs(r.right_block_shift) <= 1e-9);
        }
    }
    CHECK_THROWS_AS(interaction_check(SpinModel::ising(16)), ergo::SizeError);
}

TEST_CASE("block evolution leaves probabilities and ergotropy unchanged") {
    std::mt19937_64 gen(2024);
    std::uniform_real_distribution<double> times(0.0, 30.0);
    for (auto kind : {ModelKind::ising, ModelKind::heisenberg}) {
        for (std::size_t n : {4, 6, 8, 10}) {
            const auto m = model_of(kind, n);
            const auto gs = ground_state(m);
            const Eigen::MatrixXd rho = reduced_density_matrix(gs, n / 2);
            const auto start = evolved_block_work(m, n / 2, rho, 0.0);
            const auto d = decomposition(m);
            CHECK(start.ergotropy == doctest::Approx(d.energies.ergotropy).epsilon(1e-10));
            for (int i = 0; i < 5; ++i) {
                const auto now = evolved_block_work(m, n / 2, rho, times(gen));
                CHECK(std::abs(now.ergotropy - start.ergotropy) <= 1e-10);
                CHECK(std::abs(now.energy - start.energy) <= 1e-10);
                for (std::size_t k = 0; k < now.probabilities.size(); ++k)
                    CHECK(std::abs(now.probabilities[k] - start.probabilities[k]) <= 1e-10);
            }
        }
    }
}
