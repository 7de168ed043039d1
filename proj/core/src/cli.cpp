#include "gmfg/cli.hpp"

#include <charconv>
#include <cstdio>
#include <optional>

#include <CLI11.hpp>

#include "gmfg/experiment.hpp"
#include "gmfg/log.hpp"

namespace gmfg {

namespace {

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

struct CommonFlags {
    std::string config_path;
    std::optional<std::string> out_dir;
    std::optional<std::string> format;
    std::optional<std::int64_t> seed;
    std::optional<int> replications;
    int parallel = 1;
};

void add_common(CLI::App* cmd, CommonFlags& flags, bool with_run_flags) {
    cmd->add_option("--config", flags.config_path, "experiment config file")->required();
    if (with_run_flags) {
        cmd->add_option("--out", flags.out_dir, "output directory (overrides config)");
        cmd->add_option("--format", flags.format, "output format: csv or json")
            ->check(CLI::IsMember({"csv", "json"}));
        cmd->add_option("--seed", flags.seed, "base seed (overrides config)");
        cmd->add_option("--replications", flags.replications,
                        "replication count (overrides config)");
        cmd->add_option("--parallel", flags.parallel, "replications run concurrently")
            ->check(CLI::PositiveNumber);
    }
}

ExperimentConfig load_with_overrides(const CommonFlags& flags) {
    ExperimentConfig config = load_config(flags.config_path);
    if (flags.out_dir) config.output.dir = *flags.out_dir;
    if (flags.format)
        config.output.format = *flags.format == "csv" ? OutputFormat::csv : OutputFormat::json;
    if (flags.seed) config.base_seed = *flags.seed;
    if (flags.replications) config.replications = *flags.replications;
    config.validate();
    return config;
}

int cmd_run(const CommonFlags& flags) {
    const ExperimentConfig config = load_with_overrides(flags);
    const TraceTable table = run_experiment(config, flags.parallel);
    const SummaryRow& last = table.summary.back();
    std::printf("run: %d replication(s), final t=%d exploit_avg mean=%s min=%s max=%s -> %s\n",
                config.replications, last.t, format_double(last.mean).c_str(),
                format_double(last.min).c_str(), format_double(last.max).c_str(),
                config.output.dir.string().c_str());
    return 0;
}

int cmd_compare(const CommonFlags& flags) {
    const ExperimentConfig config = load_with_overrides(flags);
    const CompareTable table = compare_runs(config, config.variants, flags.parallel);
    std::string parts;
    for (const CompareEntry& entry : table) {
        if (!parts.empty()) parts += ' ';
        parts += entry.variant + "=" + format_double(entry.table.summary.back().mean);
    }
    std::printf("compare: final exploit_avg mean per variant: %s -> %s\n", parts.c_str(),
                config.output.dir.string().c_str());
    return 0;
}

int cmd_probe(const CommonFlags& flags, int trials, std::optional<std::int64_t> seed) {
    ExperimentConfig config = load_config(flags.config_path);
    config.validate();
    const GameSpec game = build_game(config);
    const DiscreteGraphon graphon = discretize(config.graphon, config.n_agents, game.horizon);
    const std::uint64_t probe_seed =
        static_cast<std::uint64_t>(seed ? *seed : config.base_seed);
    const ProbeReport report = monotonicity_probe(game, graphon, trials, probe_seed);
    std::printf("probe: trials=%d max_lhs=%s violations=%ld\n", report.trials,
                format_double(report.max_lhs).c_str(), report.violations);
    return 0;
}

int cmd_validate(const CommonFlags& flags) {
    const ExperimentConfig config = load_config(flags.config_path);
    config.validate();
    std::printf("config ok: %s\n", flags.config_path.c_str());
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"lambda-regularized graphon mean-field game laboratory"};
    app.require_subcommand(1);

    CommonFlags run_flags, compare_flags, probe_flags, validate_flags;
    int probe_trials = 1000;
    std::optional<std::int64_t> probe_seed;

    CLI::App* run = app.add_subcommand("run", "run one experiment with replications");
    add_common(run, run_flags, true);
    CLI::App* compare = app.add_subcommand("compare", "run the base config plus its variants");
    add_common(compare, compare_flags, true);
    CLI::App* probe = app.add_subcommand("probe", "numerically probe the monotone condition");
    add_common(probe, probe_flags, false);
    probe->add_option("--trials", probe_trials, "number of random occupancy pairs")
        ->check(CLI::PositiveNumber);
    probe->add_option("--seed", probe_seed, "probe seed (defaults to base_seed)");
    CLI::App* validate = app.add_subcommand("validate", "check a config file and exit");
    add_common(validate, validate_flags, false);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {  // --help
            return app.exit(e);
        }
        std::fprintf(stderr, "%s\n", e.what());
        return 2;
    }

    try {
        if (run->parsed()) return cmd_run(run_flags);
        if (compare->parsed()) return cmd_compare(compare_flags);
        if (probe->parsed()) return cmd_probe(probe_flags, probe_trials, probe_seed);
        return cmd_validate(validate_flags);
    } catch (const ConfigError& e) {
        log::error(e.what());
        return 2;
    } catch (const ValidationError& e) {
        log::error(e.what());
        return 2;
    } catch (const std::exception& e) {
        log::error(e.what());
        return 1;
    }
}

}  // namespace gmfg
