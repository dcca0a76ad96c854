#include <array>
#include <cmath>
#include <ostream>
#include <string>

#include "ergo/cftpredict.hpp"
#include "ergo/freefermion.hpp"
#include "ergo/tools/commands.hpp"
#include "pool.hpp"

namespace ergo::tools {

namespace {

const std::vector<std::size_t> kPredictGrid{100, 1000, 2048};

struct Row {
    std::size_t n;
    std::array<double, 5> exact;
    std::array<double, 5> predicted;
};

constexpr std::array<const char*, 5> kColumns{"E_A", "E_tilde", "E_A0", "W", "Q"};

}  // namespace

int cmd_predict(const RunConfig& cfg, std::ostream& out) {
    const auto sizes = resolve_sizes(cfg, kPredictGrid);
    for (std::size_t n : sizes) {
        if (n < 4 || n % 2 != 0 || n > 8192) {
            throw UsageError("predict sizes must be even and in [4, 8192], got " + std::to_string(n));
        }
    }
    cft::CftConstants k;
    k.log_gamma = cfg.log_gamma;

    const auto rows = parallel_map(sizes, cfg.jobs, [&](std::size_t n) {
        const auto d = freefermion::decompose(freefermion::ChainSpec::half_chain(n));
        const double x = static_cast<double>(n);
        return Row{n,
                   {d.block_energy, d.passive, d.block_ground, d.ergotropy, d.bound},
                   {cft::predict_EA(x, k), cft::predict_EAt(x, k), cft::predict_EA0(x, k),
                    cft::predict_W(x, k), cft::predict_Q(x, k)}};
    });

    if (cfg.format == RecordFormat::csv) {
        out << "N";
        for (const char* c : kColumns) out << ',' << c << ',' << c << "_pred," << c << "_dev";
        out << '\n';
        for (const Row& r : rows) {
            out << r.n;
            for (std::size_t c = 0; c < kColumns.size(); ++c) {
                out << ',' << format_number(r.exact[c]) << ',' << format_number(r.predicted[c])
                    << ',' << format_number(std::abs(r.exact[c] - r.predicted[c]));
            }
            out << '\n';
        }
    } else {
        for (const Row& r : rows) {
            out << "{\"N\":" << r.n;
            for (std::size_t c = 0; c < kColumns.size(); ++c) {
                const std::string key = kColumns[c];
                out << ",\"" << key << "\":" << format_number(r.exact[c]) << ",\"" << key
                    << "_pred\":" << format_number(r.predicted[c]) << ",\"" << key
                    << "_dev\":" << format_number(std::abs(r.exact[c] - r.predicted[c]));
            }
            out << "}\n";
        }
    }
    return kSuccess;
}

}  // namespace ergo::tools
