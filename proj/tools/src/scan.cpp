#include <cmath>
#include <ostream>

#include "ergo/freefermion.hpp"
#include "ergo/manybody.hpp"
#include "ergo/tools/commands.hpp"
#include "pool.hpp"

namespace ergo::tools {

namespace {

const std::vector<std::size_t> kFreeFermionGrid{64, 128, 256, 512, 1024, 2048, 4096};
const std::vector<std::size_t> kIsingGrid{6, 8, 10, 12, 14};
const std::vector<std::size_t> kHeisenbergGrid{8, 12, 16, 20};

}  // namespace

std::vector<ScanRecord> ff_scan(const RunConfig& cfg) {
    const auto sizes = resolve_sizes(cfg, kFreeFermionGrid);
    for (std::size_t n : sizes) {
        if (n < 2 || n % 2 != 0 || n > 8192) {
            throw UsageError("free-fermion sizes must be even and in [2, 8192], got " +
                             std::to_string(n));
        }
    }
    return parallel_map(sizes, cfg.jobs, [&](std::size_t n) {
        freefermion::ChainSpec spec;
        spec.sites = n;
        spec.block = block_length(cfg, n);
        return make_record("freefermion", freefermion::decompose(spec));
    });
}

std::vector<ScanRecord> spin_scan(const RunConfig& cfg) {
    const manybody::ModelKind kind = [&] {
        try {
            return manybody::parse_model_kind(cfg.model);
        } catch (const InputError& e) {
            throw UsageError(e.what());
        }
    }();
    if (std::abs(cfg.block_fraction - 0.5) > 1e-12) {
        throw UsageError("spin-scan decomposes the left half; --block-fraction must be 0.5");
    }
    const bool heis = kind == manybody::ModelKind::heisenberg;
    const auto& grid = heis ? kHeisenbergGrid : kIsingGrid;
    const bool explicit_sizes = !cfg.n_list.empty() || cfg.n_min || cfg.n_max;
    const auto sizes = (cfg.paper_grid && !explicit_sizes)
                           ? grid
                           : resolve_sizes(cfg, grid, heis && cfg.paper_grid ? 4 : 2);

    std::vector<manybody::SpinModel> models;
    for (std::size_t n : sizes) {
        manybody::SpinModel m = heis ? manybody::SpinModel::heisenberg(n)
                                     : manybody::SpinModel::ising(n, cfg.gamma);
        try {
            m.validate();
        } catch (const InputError& e) {
            throw UsageError(e.what());
        }
        if (heis && cfg.paper_grid && n % 4 != 0) {
            throw UsageError("--paper-grid heisenberg sizes must be multiples of 4");
        }
        models.push_back(m);
    }
    return parallel_map(models, cfg.jobs, [&](const manybody::SpinModel& m) {
        const manybody::ManyBodyDecomposition d = manybody::decomposition(m, cfg.seed);
        return make_record(cfg.model, d.energies, d.schmidt.chi);
    });
}

int cmd_ff_scan(const RunConfig& cfg, std::ostream& out) {
    const auto records = ff_scan(cfg);
    write_records(out, records, cfg.format);
    return kSuccess;
}

int cmd_spin_scan(const RunConfig& cfg, std::ostream& out) {
    const auto records = spin_scan(cfg);
    write_records(out, records, cfg.format);
    return kSuccess;
}

}  // namespace ergo::tools
