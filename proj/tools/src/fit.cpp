#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <utility>

#include "ergo/fitkit.hpp"
#include "ergo/tools/commands.hpp"

namespace ergo::tools {

namespace {

void emit(std::ostream& out, RecordFormat format,
          const std::vector<std::pair<std::string, double>>& fields) {
    if (format == RecordFormat::csv) {
        out << "key,value\n";
        for (const auto& [key, value] : fields) out << key << ',' << format_number(value) << '\n';
        return;
    }
    out << '{';
    for (std::size_t i = 0; i < fields.size(); ++i) {
        out << (i ? "," : "") << '"' << fields[i].first << "\":" << format_number(fields[i].second);
    }
    out << "}\n";
}

}  // namespace

int cmd_fit(const RunConfig& cfg, std::istream& in, std::ostream& out) {
    std::vector<ScanRecord> records = read_records(in);
    std::erase_if(records, [&](const ScanRecord& r) {
        return (cfg.n_min && r.n < *cfg.n_min) || (cfg.n_max && r.n > *cfg.n_max);
    });
    std::sort(records.begin(), records.end(),
              [](const ScanRecord& a, const ScanRecord& b) { return a.n < b.n; });
    for (std::size_t i = 1; i < records.size(); ++i) {
        if (records[i].model != records[0].model) throw UsageError("scan file mixes models");
        if (records[i].n == records[i - 1].n) throw UsageError("scan file repeats a size");
    }
    if (records.size() < 2) throw UsageError("fit needs records for at least two sizes");

    fit::Series excess{fit::SeriesKind::excess, {}};
    fit::Series ergotropy{fit::SeriesKind::ergotropy, {}};
    fit::Series bound{fit::SeriesKind::bound, {}};
    for (const ScanRecord& r : records) {
        const auto n = static_cast<double>(r.n);
        excess.points.push_back({n, r.excess});
        ergotropy.points.push_back({n, r.ergotropy});
        bound.points.push_back({n, r.bound});
    }

    if (cfg.kind == "log-gamma") {
        const fit::LogGammaFit f = fit::fit_log_gamma(bound);
        emit(out, cfg.format, {{"log_gamma", f.log_gamma}, {"residual", f.residual},
                               {"points", static_cast<double>(records.size())}});
        return kSuccess;
    }
    if (cfg.kind != "shared") throw UsageError("--kind must be shared or log-gamma");

    const std::vector<fit::Series> series{excess, ergotropy, bound};
    const fit::FitParams p = fit::shared_fit(series);

    // Q N against log^2 N over the largest five sizes.
    const std::size_t tail = std::min<std::size_t>(5, records.size());
    std::vector<double> xs;
    std::vector<double> ys;
    for (std::size_t i = records.size() - tail; i < records.size(); ++i) {
        const double n = static_cast<double>(records[i].n);
        xs.push_back(std::log(n) * std::log(n));
        ys.push_back(records[i].bound * n);
    }
    const fit::LinearFit line = fit::linear_fit(xs, ys);

    emit(out, cfg.format,
         {{"alpha1", p.alpha1},
          {"alpha2", p.alpha2},
          {"alpha3", p.alpha3},
          {"alpha4", p.alpha4},
          {"residual", p.residual_norm},
          {"r2_deltaE", p.r2_excess},
          {"r2_W", p.r2_ergotropy},
          {"r2_Q", p.r2_bound},
          {"qn_log2n_slope", line.slope},
          {"qn_log2n_r2", line.r_squared},
          {"points", static_cast<double>(3 * records.size())}});
    return kSuccess;
}

}  // namespace ergo::tools
