#include <fstream>
#include <iostream>
#include <ostream>

#include <CLI11.hpp>

#include "ergo/tools/commands.hpp"

namespace ergo::tools {

namespace {

void add_size_flags(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--n-list", cfg.n_list, "Comma-separated sizes")->delimiter(',');
    sub->add_option("--n-min", cfg.n_min, "Smallest size of a range");
    sub->add_option("--n-max", cfg.n_max, "Largest size of a range");
    sub->add_option("--geom", cfg.geom, "Geometric ratio of the range");
}

void add_output_flags(CLI::App* sub, RunConfig& cfg, std::string& format) {
    sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--output", cfg.output, "Output path, - for stdout");
}

int dispatch(const RunConfig& cfg, std::ostream& out) {
    if (cfg.command == "ff-scan") return cmd_ff_scan(cfg, out);
    if (cfg.command == "spin-scan") return cmd_spin_scan(cfg, out);
    if (cfg.command == "predict") return cmd_predict(cfg, out);
    if (cfg.command == "check") return cmd_check(cfg, out);
    if (cfg.input.empty() || cfg.input == "-") return cmd_fit(cfg, std::cin, out);
    std::ifstream in(cfg.input);
    if (!in) throw UsageError("cannot open input '" + cfg.input + "'");
    return cmd_fit(cfg, in, out);
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    std::string format = "csv";

    CLI::App app{"Subsystem ergotropy and bound energy of critical chains"};
    app.require_subcommand(1);

    auto* ff = app.add_subcommand("ff-scan", "Free-fermion chain decomposition records");
    add_size_flags(ff, cfg);
    ff->add_option("--block-fraction", cfg.block_fraction, "Block length over chain length");
    add_output_flags(ff, cfg, format);

    auto* spin = app.add_subcommand("spin-scan", "Exact-diagonalization records for spin chains");
    add_size_flags(spin, cfg);
    spin->add_option("--model", cfg.model, "ising or heisenberg")
        ->check(CLI::IsMember({"ising", "heisenberg"}));
    spin->add_option("--gamma", cfg.gamma, "Transverse field");
    spin->add_option("--block-fraction", cfg.block_fraction, "Block length over chain length");
    spin->add_option("--seed", cfg.seed, "Lanczos start vector seed");
    spin->add_flag("--paper-grid", cfg.paper_grid, "Use the reference size grid");
    add_output_flags(spin, cfg, format);

    auto* predict = app.add_subcommand("predict", "Exact values against the asymptotic forms");
    add_size_flags(predict, cfg);
    predict->add_option("--log-gamma", cfg.log_gamma, "Non-universal entropy constant");
    add_output_flags(predict, cfg, format);

    auto* fit = app.add_subcommand("fit", "Fit a record file");
    fit->add_option("--input", cfg.input, "Record file, - for stdin");
    fit->add_option("--kind", cfg.kind, "shared or log-gamma")
        ->check(CLI::IsMember({"shared", "log-gamma"}));
    fit->add_option("--n-min", cfg.n_min, "Drop records below this size");
    fit->add_option("--n-max", cfg.n_max, "Drop records above this size");
    add_output_flags(fit, cfg, format);

    auto* check = app.add_subcommand("check", "Run invariant suites");
    check->add_option("--suite", cfg.suite, "ordering, decomposition, oracle, interaction, time-evolution or all");
    check->add_option("--n-max", cfg.n_max, "Largest spin chain to check");
    check->add_option("--seed", cfg.seed, "Seed for random times and start vectors");

    for (auto* sub : {ff, spin, predict, fit}) {
        sub->add_option("--jobs", cfg.jobs, "Worker threads, 0 for all cores");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kSuccess : kUsage;
    }
    cfg.command = app.get_subcommands().front()->get_name();
    cfg.format = format == "json" ? RecordFormat::json : RecordFormat::csv;

    try {
        if (cfg.output == "-") return dispatch(cfg, out);
        std::ofstream file(cfg.output, std::ios::binary);
        if (!file) throw UsageError("cannot open output '" + cfg.output + "'");
        const int code = dispatch(cfg, file);
        file.flush();
        if (!file) throw UsageError("write to '" + cfg.output + "' failed");
        return code;
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const SizeError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kCheckFailed;
    }
}

}  // namespace ergo::tools
