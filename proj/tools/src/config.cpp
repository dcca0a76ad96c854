#include <algorithm>
#include <cmath>

#include "ergo/tools/commands.hpp"

namespace ergo::tools {

std::vector<std::size_t> resolve_sizes(const RunConfig& cfg, const std::vector<std::size_t>& fallback,
                                       std::size_t step) {
    std::vector<std::size_t> sizes;
    if (!cfg.n_list.empty()) {
        sizes = cfg.n_list;
    } else if (cfg.n_min || cfg.n_max) {
        if (!cfg.n_min || !cfg.n_max) throw UsageError("--n-min and --n-max must be given together");
        const std::size_t lo = *cfg.n_min;
        const std::size_t hi = *cfg.n_max;
        if (lo < 1 || lo > hi) throw UsageError("invalid size range");
        if (cfg.geom) {
            const double r = *cfg.geom;
            if (!(r > 1.0)) throw UsageError("--geom ratio must exceed 1");
            for (double v = static_cast<double>(lo); v <= static_cast<double>(hi) * (1 + 1e-12);
                 v *= r) {
                sizes.push_back(static_cast<std::size_t>(std::llround(v)));
            }
        } else {
            for (std::size_t v = lo; v <= hi; v += step) sizes.push_back(v);
        }
    } else {
        sizes = fallback;
    }
    std::sort(sizes.begin(), sizes.end());
    sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());
    if (sizes.empty()) throw UsageError("no sizes selected");
    return sizes;
}

std::size_t block_length(const RunConfig& cfg, std::size_t n) {
    const double f = cfg.block_fraction;
    if (!(f > 0.0 && f < 1.0)) throw UsageError("--block-fraction must lie in (0, 1)");
    const auto ell = static_cast<std::size_t>(std::llround(f * static_cast<double>(n)));
    return std::clamp<std::size_t>(ell, 1, n - 1);
}

}  // namespace ergo::tools
