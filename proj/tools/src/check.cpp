#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>
#include <string>

#include "ergo/freefermion.hpp"
#include "ergo/manybody.hpp"
#include "ergo/tools/commands.hpp"

namespace ergo::tools {

namespace {

class Report {
public:
    explicit Report(std::ostream& out) : out_(out) {}

    void record(bool ok, const std::string& suite, const std::string& name,
                const std::string& detail) {
        out_ << (ok ? "PASS " : "FAIL ") << suite << '/' << name << ' ' << detail << '\n';
        (ok ? passed_ : failed_)++;
    }

    std::size_t failed() const { return failed_; }
    void summary() { out_ << "SUMMARY passed=" << passed_ << " failed=" << failed_ << '\n'; }

private:
    std::ostream& out_;
    std::size_t passed_ = 0;
    std::size_t failed_ = 0;
};

std::string fmt(const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

// Ordering chain, exact W + Q = Delta E, non-negativity. Returns the worst
// violation (<= 0 when every invariant holds).
double decomposition_violation(const EnergyDecomposition& d) {
    double worst = -1.0;
    worst = std::max(worst, d.passive - d.block_energy - 1e-10);
    worst = std::max(worst, d.block_ground - d.passive - 1e-10);
    worst = std::max(worst, -d.ergotropy - 1e-10);
    worst = std::max(worst, -d.bound - 1e-10);
    if (d.excess != d.ergotropy + d.bound) worst = std::max(worst, 1.0);
    if (d.excess > 1e-12) {
        worst = std::max(worst, std::abs(d.ergotropy_fraction + d.bound_fraction - 1.0) - 1e-9);
    }
    return worst;
}

std::vector<std::size_t> ff_ordering_sizes() {
    std::vector<std::size_t> sizes;
    for (std::size_t n = 2; n <= 64; n += 2) sizes.push_back(n);
    for (std::size_t n = 128; n <= 4096; n *= 2) sizes.push_back(n);
    return sizes;
}

void suite_ordering(Report& rep) {
    for (std::size_t n : ff_ordering_sizes()) {
        const auto spec = freefermion::ChainSpec::half_chain(n);
        const auto c = freefermion::correlation_matrix(spec);
        const auto d = freefermion::block_energies(spec, c);
        const auto sd = freefermion::block_spectral(c, spec.block);
        double ph = 0.0;
        double filling = -static_cast<double>(spec.block) / 2.0;
        for (std::size_t k = 0; k < spec.block; ++k) {
            ph = std::max(ph, std::abs(sd.occupations[k] + sd.occupations[spec.block - 1 - k] - 1.0));
            filling += sd.occupations[k];
        }
        const double v = decomposition_violation(d);
        const bool ok = v <= 0.0 && ph <= 1e-8 && std::abs(filling) <= 1e-8;
        rep.record(ok, "ordering", "freefermion_N" + std::to_string(n),
                   "violation=" + fmt("%.3g", std::max(v, 0.0)) + " particle_hole=" +
                       fmt("%.3g", ph) + " filling=" + fmt("%.3g", std::abs(filling)));
    }
}

std::vector<std::size_t> even_sizes(std::size_t hi) {
    std::vector<std::size_t> out;
    for (std::size_t n = 2; n <= hi; n += 2) out.push_back(n);
    return out;
}

void suite_decomposition(Report& rep, std::size_t n_max, std::uint64_t seed) {
    for (auto kind : {manybody::ModelKind::ising, manybody::ModelKind::heisenberg}) {
        for (std::size_t n : even_sizes(n_max)) {
            const manybody::SpinModel m = kind == manybody::ModelKind::ising
                                              ? manybody::SpinModel::ising(n)
                                              : manybody::SpinModel::heisenberg(n);
            const auto d = manybody::decomposition(m, seed);
            double norm = -1.0;
            for (double p : d.schmidt.probabilities) norm += p;
            const double v = decomposition_violation(d.energies);
            const bool ok = v <= 0.0 && std::abs(norm) <= 1e-10;
            rep.record(ok, "decomposition", manybody::to_string(kind) + "_N" + std::to_string(n),
                       "violation=" + fmt("%.3g", std::max(v, 0.0)) +
                           " schmidt_norm_err=" + fmt("%.3g", std::abs(norm)));
        }
    }
}

void suite_oracle(Report& rep) {
    double worst_gap = 0.0;
    double worst_violation = -1.0;
    std::size_t cases = 0;
    for (std::size_t n = 2; n <= 20; n += 2) {
        freefermion::ChainSpec spec = freefermion::ChainSpec::half_chain(n);
        const auto c = freefermion::correlation_matrix(spec);
        for (std::size_t ell = 1; ell <= std::min<std::size_t>(10, n - 1); ++ell) {
            spec.block = ell;
            const auto sd = freefermion::block_spectral(c, ell);
            const auto d = freefermion::block_energies(spec, c);
            const Eigen::VectorXd eps = freefermion::single_body_energies(ell);
            const double oracle = freefermion::manybody_passive_oracle(
                sd, std::span<const double>(eps.data(), ell));
            worst_violation = std::max(worst_violation, oracle - d.passive - 1e-12);
            if (d.excess > 1e-12) {
                worst_gap = std::max(worst_gap, (d.passive - oracle) / d.excess);
            }
            ++cases;
        }
    }
    rep.record(worst_violation <= 0.0, "oracle", "gaussian_vs_fock",
               "cases=" + std::to_string(cases) + " max_relative_gap=" + fmt("%.3g", worst_gap));
}

void suite_interaction(Report& rep, std::size_t n_max, std::uint64_t seed) {
    for (auto kind : {manybody::ModelKind::ising, manybody::ModelKind::heisenberg}) {
        for (std::size_t n : even_sizes(std::min<std::size_t>(n_max, 14))) {
            const manybody::SpinModel m = kind == manybody::ModelKind::ising
                                              ? manybody::SpinModel::ising(n)
                                              : manybody::SpinModel::heisenberg(n);
            const auto r = manybody::interaction_check(m, seed);
            const double margin = r.passive_interaction - r.interaction - r.ergotropy;
            const bool ok = margin >= -1e-9 && r.ergotropy >= -1e-10;
            rep.record(ok, "interaction", manybody::to_string(kind) + "_N" + std::to_string(n),
                       "dE_AB=" + fmt("%.6g", r.passive_interaction - r.interaction) +
                           " W_A=" + fmt("%.6g", r.ergotropy) + " margin=" + fmt("%.3g", margin) +
                           (r.ambiguous ? " schmidt_degenerate" : ""));
        }
    }
}

void suite_time_evolution(Report& rep, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    auto draw_time = [&] { return static_cast<double>(gen() >> 11) * 0x1.0p-53 * 20.0; };

    {
        const auto spec = freefermion::ChainSpec::half_chain(64);
        const auto c = freefermion::correlation_matrix(spec);
        const auto ell = static_cast<Eigen::Index>(spec.block);
        const Eigen::MatrixXcd block =
            c.matrix().entries().topLeftCorner(ell, ell).cast<std::complex<double>>();
        const auto start = freefermion::block_work(block);
        double worst = 0.0;
        for (int i = 0; i < 10; ++i) {
            const auto now = freefermion::block_work(freefermion::evolve_block(block, draw_time()));
            worst = std::max({worst, std::abs(now.ergotropy - start.ergotropy),
                              std::abs(now.energy - start.energy)});
        }
        rep.record(worst <= 1e-9, "time-evolution", "freefermion_N64",
                   "max_drift=" + fmt("%.3g", worst));
    }

    for (auto kind : {manybody::ModelKind::ising, manybody::ModelKind::heisenberg}) {
        for (std::size_t n : {6, 8, 10}) {
            const manybody::SpinModel m = kind == manybody::ModelKind::ising
                                              ? manybody::SpinModel::ising(n)
                                              : manybody::SpinModel::heisenberg(n);
            const auto gs = manybody::ground_state(m, seed);
            const std::size_t ell = n / 2;
            const Eigen::MatrixXd rho = manybody::reduced_density_matrix(gs, ell);
            const auto start = manybody::evolved_block_work(m, ell, rho, 0.0);
            double worst = 0.0;
            for (int i = 0; i < 5; ++i) {
                const auto now = manybody::evolved_block_work(m, ell, rho, draw_time());
                worst = std::max(worst, std::abs(now.ergotropy - start.ergotropy));
                for (std::size_t k = 0; k < now.probabilities.size(); ++k) {
                    worst = std::max(worst, std::abs(now.probabilities[k] - start.probabilities[k]));
                }
            }
            rep.record(worst <= 1e-10, "time-evolution",
                       manybody::to_string(kind) + "_N" + std::to_string(n),
                       "max_drift=" + fmt("%.3g", worst));
        }
    }
}

}  // namespace

int cmd_check(const RunConfig& cfg, std::ostream& out) {
    static const std::vector<std::string> kSuites{"ordering", "decomposition", "oracle",
                                                  "interaction", "time-evolution"};
    const bool all = cfg.suite == "all";
    if (!all && std::find(kSuites.begin(), kSuites.end(), cfg.suite) == kSuites.end()) {
        throw UsageError("unknown suite '" + cfg.suite + "'");
    }
    const std::size_t n_max = cfg.n_max.value_or(12);
    if (n_max < 2) throw UsageError("--n-max must be >= 2 for check");

    Report rep(out);
    if (all || cfg.suite == "ordering") suite_ordering(rep);
    if (all || cfg.suite == "decomposition") suite_decomposition(rep, std::min<std::size_t>(n_max, 20), cfg.seed);
    if (all || cfg.suite == "oracle") suite_oracle(rep);
    if (all || cfg.suite == "interaction") suite_interaction(rep, n_max, cfg.seed);
    if (all || cfg.suite == "time-evolution") suite_time_evolution(rep, cfg.seed);
    rep.summary();
    return rep.failed() == 0 ? kSuccess : kCheckFailed;
}

}  // namespace ergo::tools
