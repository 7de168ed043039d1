#include "gmfg/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "gmfg/log.hpp"

namespace gmfg {

using nlohmann::json;

namespace {

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

[[noreturn]] void config_fail(const std::string& where, const std::string& what) {
    throw ConfigError("config: " + where + ": " + what);
}

void check_keys(const json& obj, const std::string& where,
                std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : obj.items()) {
        bool known = false;
        for (const char* k : allowed)
            if (key == k) known = true;
        if (!known) config_fail(where, "unknown key '" + key + "'");
    }
}

template <typename T>
T get_or(const json& obj, const char* key, T fallback, const std::string& where) {
    if (!obj.contains(key) || obj[key].is_null()) return fallback;
    try {
        return obj[key].get<T>();
    } catch (const json::exception& e) {
        config_fail(where, std::string("bad value for '") + key + "': " + e.what());
    }
}

template <typename T>
T require(const json& obj, const char* key, const std::string& where) {
    if (!obj.contains(key) || obj[key].is_null())
        config_fail(where, std::string("missing key '") + key + "'");
    try {
        return obj[key].get<T>();
    } catch (const json::exception& e) {
        config_fail(where, std::string("bad value for '") + key + "': " + e.what());
    }
}

// ---- graphon section ------------------------------------------------------

StepGraphon parse_step_graphon(const json& obj, const std::string& where) {
    const auto kind = require<std::string>(obj, "kind", where);
    if (kind == "constant") {
        check_keys(obj, where, {"kind", "p"});
        return ConstantGraphon{require<double>(obj, "p", where)};
    }
    if (kind == "sbm") {
        check_keys(obj, where, {"kind", "boundaries", "rates"});
        SbmGraphon g;
        g.boundaries = require<std::vector<double>>(obj, "boundaries", where);
        g.rates = require<std::vector<std::vector<double>>>(obj, "rates", where);
        return g;
    }
    if (kind == "exp") {
        check_keys(obj, where, {"kind", "theta"});
        return ExpGraphon{require<double>(obj, "theta", where)};
    }
    if (kind == "custom") {
        check_keys(obj, where, {"kind", "values"});
        CustomGridGraphon g;
        g.values = require<std::vector<std::vector<double>>>(obj, "values", where);
        return g;
    }
    config_fail(where, "unknown graphon kind '" + kind + "'");
}

GraphonSpec parse_graphon(const json& obj, const std::string& where) {
    if (obj.contains("kind") && obj["kind"] == "per_step") {
        check_keys(obj, where, {"kind", "steps"});
        GraphonSpec spec;
        const json& steps = obj.at("steps");
        if (!steps.is_array() || steps.empty())
            config_fail(where, "'steps' must be a nonempty array");
        for (std::size_t k = 0; k < steps.size(); ++k)
            spec.steps.push_back(
                parse_step_graphon(steps[k], where + ".steps[" + std::to_string(k) + "]"));
        return spec;
    }
    return GraphonSpec(parse_step_graphon(obj, where));
}

json step_graphon_to_json(const StepGraphon& step) {
    json obj;
    if (const auto* c = std::get_if<ConstantGraphon>(&step)) {
        obj["kind"] = "constant";
        obj["p"] = c->p;
    } else if (const auto* s = std::get_if<SbmGraphon>(&step)) {
        obj["kind"] = "sbm";
        obj["boundaries"] = s->boundaries;
        obj["rates"] = s->rates;
    } else if (const auto* e = std::get_if<ExpGraphon>(&step)) {
        obj["kind"] = "exp";
        obj["theta"] = e->theta;
    } else {
        obj["kind"] = "custom";
        obj["values"] = std::get<CustomGridGraphon>(step).values;
    }
    return obj;
}

json graphon_to_json(const GraphonSpec& spec) {
    if (spec.steps.size() == 1) return step_graphon_to_json(spec.steps[0]);
    json obj;
    obj["kind"] = "per_step";
    json steps = json::array();
    for (const auto& s : spec.steps) steps.push_back(step_graphon_to_json(s));
    obj["steps"] = steps;
    return obj;
}

// ---- game section ---------------------------------------------------------

BeachBarConfig parse_beach_bar(const json& obj) {
    const std::string where = "game.beach_bar";
    check_keys(obj, where,
               {"n_states", "bar_position", "dist_coeff", "action_coeff", "crowd_coeff",
                "horizon", "lambda", "noise_prob", "boundary_mode", "reward_sign_mode"});
    BeachBarConfig bb;
    bb.n_states = get_or(obj, "n_states", bb.n_states, where);
    bb.bar_position = get_or(obj, "bar_position", bb.n_states / 2, where);
    bb.dist_coeff = get_or(obj, "dist_coeff", 2.0 / bb.n_states, where);
    bb.action_coeff = get_or(obj, "action_coeff", 2.0 / bb.n_states, where);
    bb.crowd_coeff = get_or(obj, "crowd_coeff", bb.crowd_coeff, where);
    bb.horizon = get_or(obj, "horizon", bb.horizon, where);
    bb.lambda = get_or(obj, "lambda", bb.lambda, where);
    bb.noise_prob = get_or(obj, "noise_prob", bb.noise_prob, where);
    const auto boundary = get_or<std::string>(obj, "boundary_mode", "clamp", where);
    if (boundary == "clamp") bb.boundary_mode = BoundaryMode::clamp;
    else if (boundary == "reflect") bb.boundary_mode = BoundaryMode::reflect;
    else config_fail(where, "boundary_mode must be 'clamp' or 'reflect'");
    const auto sign = get_or<std::string>(obj, "reward_sign_mode", "as-written", where);
    if (sign == "as-written") bb.reward_sign_mode = RewardSignMode::as_written;
    else if (sign == "negated-distance") bb.reward_sign_mode = RewardSignMode::negated_distance;
    else config_fail(where, "reward_sign_mode must be 'as-written' or 'negated-distance'");
    return bb;
}

json beach_bar_to_json(const BeachBarConfig& bb) {
    json obj;
    obj["n_states"] = bb.n_states;
    obj["bar_position"] = bb.bar_position;
    obj["dist_coeff"] = bb.dist_coeff;
    obj["action_coeff"] = bb.action_coeff;
    obj["crowd_coeff"] = bb.crowd_coeff;
    obj["horizon"] = bb.horizon;
    obj["lambda"] = bb.lambda;
    obj["noise_prob"] = bb.noise_prob;
    obj["boundary_mode"] = bb.boundary_mode == BoundaryMode::clamp ? "clamp" : "reflect";
    obj["reward_sign_mode"] =
        bb.reward_sign_mode == RewardSignMode::as_written ? "as-written" : "negated-distance";
    return obj;
}

GameSpec load_game_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open game file " + path.string());
    json obj;
    try {
        in >> obj;
    } catch (const json::exception& e) {
        throw ConfigError("config: game file " + path.string() + ": " + e.what());
    }
    const std::string where = "game file " + path.string();
    check_keys(obj, where,
               {"n_states", "actions", "horizon", "lambda", "mu1", "transition", "reward",
                "r_max"});
    GameSpec game;
    game.n_states = require<int>(obj, "n_states", where);
    game.actions = require<std::vector<int>>(obj, "actions", where);
    game.horizon = require<int>(obj, "horizon", where);
    game.lambda = get_or(obj, "lambda", 0.0, where);
    game.mu1 = require<std::vector<double>>(obj, "mu1", where);

    const auto tensor4 =
        require<std::vector<std::vector<std::vector<std::vector<double>>>>>(obj, "transition",
                                                                            where);
    const int n_states = game.n_states;
    const int n_actions = static_cast<int>(game.actions.size());
    game.transition.assign(
        static_cast<std::size_t>(game.horizon) * n_states * n_actions * n_states, 0.0);
    if (static_cast<int>(tensor4.size()) != game.horizon)
        config_fail(where, "transition tensor must have one block per step");

    const json& reward = obj.at("reward");
    check_keys(reward, where + ".reward", {"base", "z_coeff"});
    const auto base =
        require<std::vector<std::vector<std::vector<double>>>>(reward, "base", where);
    const auto z_coeff =
        require<std::vector<std::vector<std::vector<double>>>>(reward, "z_coeff", where);
    std::vector<double> base_flat(static_cast<std::size_t>(game.horizon) * n_states * n_actions);
    std::vector<double> z_flat(base_flat.size());
    double bound = 0.0;
    try {
        for (int h = 0; h < game.horizon; ++h)
            for (int s = 0; s < n_states; ++s)
                for (int a = 0; a < n_actions; ++a) {
                    for (int s2 = 0; s2 < n_states; ++s2)
                        game.p(h, s, a, s2) = tensor4.at(h).at(s).at(a).at(s2);
                    const std::size_t idx =
                        (static_cast<std::size_t>(h) * n_states + s) * n_actions + a;
                    base_flat[idx] = base.at(h).at(s).at(a);
                    z_flat[idx] = z_coeff.at(h).at(s).at(a);
                    bound = std::max(bound, std::abs(base_flat[idx]) + std::abs(z_flat[idx]));
                }
    } catch (const std::out_of_range&) {
        config_fail(where, "transition or reward tensor has the wrong shape");
    }
    game.r_max = get_or(obj, "r_max", bound, where);
    game.reward = [base_flat, z_flat, n_states, n_actions](int h, int s, int a,
                                                           std::span<const double> z) {
        const std::size_t idx =
            (static_cast<std::size_t>(h - 1) * n_states + s) * n_actions + a;
        return base_flat[idx] + z_flat[idx] * z[s];
    };
    game.validate();
    return game;
}

// ---- solver section -------------------------------------------------------

PMDConfig parse_solver(const json& obj) {
    const std::string where = "solver";
    check_keys(obj, where,
               {"iterations", "eta", "beta", "c_eta", "c_beta", "lambda", "q_source",
                "baseline", "n_sampled", "episodes", "behavior", "exploit_stride", "rng_seed"});
    PMDConfig cfg;
    cfg.iterations = get_or(obj, "iterations", cfg.iterations, where);
    if (obj.contains("eta") && !obj["eta"].is_null()) cfg.eta = require<double>(obj, "eta", where);
    if (obj.contains("beta") && !obj["beta"].is_null())
        cfg.beta = require<double>(obj, "beta", where);
    cfg.c_eta = get_or(obj, "c_eta", cfg.c_eta, where);
    cfg.c_beta = get_or(obj, "c_beta", cfg.c_beta, where);
    if (obj.contains("lambda") && !obj["lambda"].is_null())
        cfg.lambda = require<double>(obj, "lambda", where);
    else
        cfg.lambda = -1.0;  // resolved from the game section later
    const auto source = get_or<std::string>(obj, "q_source", "oracle", where);
    if (source == "oracle") cfg.q_source = QSource::oracle;
    else if (source == "estimated") cfg.q_source = QSource::estimated;
    else config_fail(where, "q_source must be 'oracle' or 'estimated'");
    const auto baseline = get_or<std::string>(obj, "baseline", "regularized", where);
    if (baseline == "regularized") cfg.baseline = Baseline::regularized;
    else if (baseline == "unregularized") cfg.baseline = Baseline::unregularized;
    else config_fail(where, "baseline must be 'regularized' or 'unregularized'");
    cfg.n_sampled = get_or(obj, "n_sampled", cfg.n_sampled, where);
    cfg.episodes_per_iteration = get_or(obj, "episodes", cfg.episodes_per_iteration, where);
    if (obj.contains("behavior") && !obj["behavior"].is_null()) {
        const json& b = obj["behavior"];
        check_keys(b, "solver.behavior", {"mode", "epsilon"});
        const auto mode = require<std::string>(b, "mode", "solver.behavior");
        if (mode == "uniform") {
            cfg.behavior.mode = BehaviorPolicySpec::Mode::uniform;
        } else if (mode == "epsilon_mix") {
            cfg.behavior.mode = BehaviorPolicySpec::Mode::epsilon_mix;
            cfg.behavior.epsilon = require<double>(b, "epsilon", "solver.behavior");
        } else {
            config_fail("solver.behavior", "mode must be 'uniform' or 'epsilon_mix'");
        }
    }
    cfg.exploit_stride = get_or(obj, "exploit_stride", cfg.exploit_stride, where);
    cfg.rng_seed = get_or<std::uint64_t>(obj, "rng_seed", cfg.rng_seed, where);
    return cfg;
}

json solver_to_json(const PMDConfig& cfg) {
    json obj;
    obj["iterations"] = cfg.iterations;
    if (cfg.eta) obj["eta"] = *cfg.eta;
    if (cfg.beta) obj["beta"] = *cfg.beta;
    obj["c_eta"] = cfg.c_eta;
    obj["c_beta"] = cfg.c_beta;
    obj["lambda"] = cfg.lambda;
    obj["q_source"] = cfg.q_source == QSource::oracle ? "oracle" : "estimated";
    obj["baseline"] = cfg.baseline == Baseline::regularized ? "regularized" : "unregularized";
    obj["n_sampled"] = cfg.n_sampled;
    obj["episodes"] = cfg.episodes_per_iteration;
    json behavior;
    if (cfg.behavior.mode == BehaviorPolicySpec::Mode::uniform) {
        behavior["mode"] = "uniform";
    } else {
        behavior["mode"] = "epsilon_mix";
        behavior["epsilon"] = cfg.behavior.epsilon;
    }
    obj["behavior"] = behavior;
    obj["exploit_stride"] = cfg.exploit_stride;
    obj["rng_seed"] = cfg.rng_seed;
    return obj;
}

ExperimentConfig parse_config_json(const json& doc) {
    const std::string where = "config";
    check_keys(doc, where,
               {"n_agents", "replications", "base_seed", "game", "graphon", "solver", "output",
                "variants"});
    ExperimentConfig cfg;
    cfg.n_agents = get_or(doc, "n_agents", cfg.n_agents, where);
    cfg.replications = get_or(doc, "replications", cfg.replications, where);
    cfg.base_seed = get_or<std::int64_t>(doc, "base_seed", cfg.base_seed, where);

    if (!doc.contains("game")) config_fail(where, "missing 'game' section");
    const json& game = doc["game"];
    check_keys(game, "game", {"beach_bar", "file"});
    if (game.contains("beach_bar") == game.contains("file"))
        config_fail("game", "exactly one of 'beach_bar' or 'file' is required");
    if (game.contains("beach_bar")) cfg.game.beach_bar = parse_beach_bar(game["beach_bar"]);
    else cfg.game.file = std::filesystem::path(require<std::string>(game, "file", "game"));

    if (!doc.contains("graphon")) config_fail(where, "missing 'graphon' section");
    cfg.graphon = parse_graphon(doc["graphon"], "graphon");

    cfg.solver = doc.contains("solver") ? parse_solver(doc["solver"]) : PMDConfig{};
    if (!doc.contains("solver")) cfg.solver.lambda = -1.0;

    if (doc.contains("output")) {
        const json& out = doc["output"];
        check_keys(out, "output", {"dir", "format"});
        cfg.output.dir = get_or<std::string>(out, "dir", "out", "output");
        const auto fmt = get_or<std::string>(out, "format", "csv", "output");
        if (fmt == "csv") cfg.output.format = OutputFormat::csv;
        else if (fmt == "json") cfg.output.format = OutputFormat::json;
        else config_fail("output", "format must be 'csv' or 'json'");
    }

    if (doc.contains("variants")) {
        const json& variants = doc["variants"];
        if (!variants.is_array()) config_fail("variants", "must be an array");
        for (const json& v : variants) {
            if (!v.is_object() || !v.contains("name"))
                config_fail("variants", "each variant needs a 'name'");
            Variant var;
            var.name = v["name"].get<std::string>();
            json patch = v;
            patch.erase("name");
            var.patch = patch.dump();
            cfg.variants.push_back(std::move(var));
        }
    }
    return cfg;
}

json config_to_json(const ExperimentConfig& cfg) {
    json doc;
    doc["n_agents"] = cfg.n_agents;
    doc["replications"] = cfg.replications;
    doc["base_seed"] = cfg.base_seed;
    json game;
    if (cfg.game.beach_bar) game["beach_bar"] = beach_bar_to_json(*cfg.game.beach_bar);
    if (cfg.game.file) game["file"] = cfg.game.file->string();
    doc["game"] = game;
    doc["graphon"] = graphon_to_json(cfg.graphon);
    doc["solver"] = solver_to_json(cfg.solver);
    json out;
    out["dir"] = cfg.output.dir.string();
    out["format"] = cfg.output.format == OutputFormat::csv ? "csv" : "json";
    doc["output"] = out;
    if (!cfg.variants.empty()) {
        json variants = json::array();
        for (const auto& v : cfg.variants) {
            json obj = json::parse(v.patch);
            obj["name"] = v.name;
            variants.push_back(obj);
        }
        doc["variants"] = variants;
    }
    return doc;
}

// ---- runners ----------------------------------------------------------------

std::vector<SummaryRow> summarize(const std::vector<TraceRow>& rows, int replications) {
    std::vector<SummaryRow> summary;
    if (rows.empty()) return summary;
    const std::size_t per_rep = rows.size() / replications;
    for (std::size_t k = 0; k < per_rep; ++k) {
        SummaryRow s;
        s.t = rows[k].t;
        s.min = s.max = rows[k].exploit_avg;
        double total = 0.0;
        for (int rep = 0; rep < replications; ++rep) {
            const TraceRow& row = rows[static_cast<std::size_t>(rep) * per_rep + k];
            total += row.exploit_avg;
            s.min = std::min(s.min, row.exploit_avg);
            s.max = std::max(s.max, row.exploit_avg);
        }
        s.mean = total / replications;
        summary.push_back(s);
    }
    return summary;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open output file " + path.string());
    out << text;
    if (!out) throw Error("failed writing output file " + path.string());
}

std::string trace_csv_rows(const std::vector<TraceRow>& rows, const std::string& prefix) {
    std::string text;
    for (const TraceRow& row : rows) {
        text += prefix;
        text += std::to_string(row.replication);
        text += ',';
        text += std::to_string(row.t);
        text += ',';
        text += format_double(row.exploit_last);
        text += ',';
        text += format_double(row.exploit_avg);
        text += '\n';
    }
    return text;
}

std::string summary_csv_rows(const std::vector<SummaryRow>& summary, const std::string& prefix) {
    std::string text;
    for (const SummaryRow& row : summary) {
        text += prefix;
        text += std::to_string(row.t);
        text += ',';
        text += format_double(row.mean);
        text += ',';
        text += format_double(row.min);
        text += ',';
        text += format_double(row.max);
        text += '\n';
    }
    return text;
}

json table_to_json(const TraceTable& table) {
    json doc;
    json rows = json::array();
    for (const TraceRow& row : table.rows) {
        json r;
        r["replication"] = row.replication;
        r["t"] = row.t;
        r["exploit_last"] = row.exploit_last;
        r["exploit_avg"] = row.exploit_avg;
        rows.push_back(r);
    }
    json summary = json::array();
    for (const SummaryRow& row : table.summary) {
        json r;
        r["t"] = row.t;
        r["mean"] = row.mean;
        r["min"] = row.min;
        r["max"] = row.max;
        summary.push_back(r);
    }
    doc["rows"] = rows;
    doc["summary"] = summary;
    return doc;
}

}  // namespace

void ExperimentConfig::validate() const {
    if (n_agents < 1) throw ConfigError("config: n_agents must be >= 1");
    if (replications < 1) throw ConfigError("config: replications must be >= 1");
    if (static_cast<bool>(game.beach_bar) == static_cast<bool>(game.file))
        throw ConfigError("config: exactly one game source is required");
    graphon.validate();
    const GameSpec built = build_game(*this);
    if (solver.lambda != built.lambda)
        throw ConfigError("config: solver.lambda must match the game's lambda");
    solver.validate();
    if (solver.q_source == QSource::estimated && n_agents % solver.n_sampled != 0)
        throw ConfigError("config: n_sampled must divide n_agents");
    if (graphon.steps.size() != 1 &&
        graphon.steps.size() != static_cast<std::size_t>(built.horizon))
        throw ConfigError("config: per-step graphon must match the game horizon");
}

static ExperimentConfig parse_config_in_dir(const std::string& text,
                                            const std::filesystem::path& base_dir) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: parse error: ") + e.what());
    }
    ExperimentConfig cfg = parse_config_json(doc);
    cfg.base_dir = base_dir;
    if (cfg.solver.lambda < 0.0) {
        if (cfg.game.beach_bar) cfg.solver.lambda = cfg.game.beach_bar->lambda;
        else cfg.solver.lambda = build_game(cfg).lambda;
    }
    return cfg;
}

ExperimentConfig parse_config_text(const std::string& text) {
    return parse_config_in_dir(text, {});
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config_in_dir(buffer.str(), path.parent_path());
}

std::string config_to_text(const ExperimentConfig& config) {
    return config_to_json(config).dump(2) + "\n";
}

bool config_equal(const ExperimentConfig& a, const ExperimentConfig& b) {
    return config_to_json(a) == config_to_json(b);
}

GameSpec build_game(const ExperimentConfig& config) {
    if (config.game.beach_bar) return build_beach_bar(*config.game.beach_bar);
    if (!config.game.file) throw ConfigError("config: no game source");
    std::filesystem::path path = *config.game.file;
    if (path.is_relative() && !config.base_dir.empty()) path = config.base_dir / path;
    return load_game_file(path);
}

TraceTable run_replications(const ExperimentConfig& config, int parallel,
                            const DiscreteGraphon* eval_graphon) {
    config.validate();
    if (parallel < 1) throw ConfigError("config: parallel must be >= 1");
    const GameSpec game = build_game(config);
    const DiscreteGraphon graphon = discretize(config.graphon, config.n_agents, game.horizon);

    std::vector<std::vector<IterationRecord>> traces(config.replications);
    std::atomic<int> next{0};
    std::atomic<bool> failed{false};
    std::string failure;
    std::mutex failure_mutex;
    const auto worker = [&] {
        for (int rep = next.fetch_add(1); rep < config.replications; rep = next.fetch_add(1)) {
            if (failed.load()) return;
            try {
                PMDConfig solver = config.solver;
                solver.rng_seed = static_cast<std::uint64_t>(config.base_seed + rep);
                traces[rep] = pmd_run(game, graphon, solver, eval_graphon).trace;
            } catch (const std::exception& e) {
                const std::lock_guard<std::mutex> lock(failure_mutex);
                failed.store(true);
                if (failure.empty()) failure = e.what();
            }
        }
    };
    const int jobs = std::min(parallel, config.replications);
    if (jobs <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(jobs);
        for (int k = 0; k < jobs; ++k) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (failed.load()) throw SolverError("replication failed: " + failure);

    TraceTable table;
    for (int rep = 0; rep < config.replications; ++rep) {
        for (const IterationRecord& rec : traces[rep])
            table.rows.push_back({rep + 1, rec.t, rec.exploitability_last,
                                  rec.exploitability_avg});
    }
    table.summary = summarize(table.rows, config.replications);
    return table;
}

void write_run_files(const ExperimentConfig& config, const TraceTable& table) {
    std::filesystem::create_directories(config.output.dir);
    if (config.output.format == OutputFormat::csv) {
        write_text_file(config.output.dir / "trace.csv",
                        "replication,t,exploit_last,exploit_avg\n" +
                            trace_csv_rows(table.rows, ""));
        write_text_file(config.output.dir / "summary.csv",
                        "t,mean,min,max\n" + summary_csv_rows(table.summary, ""));
        log::info("wrote " + (config.output.dir / "trace.csv").string() + " and " +
                  (config.output.dir / "summary.csv").string());
    } else {
        write_text_file(config.output.dir / "trace.json", table_to_json(table).dump(2) + "\n");
        log::info("wrote " + (config.output.dir / "trace.json").string());
    }
}

void write_compare_files(const ExperimentConfig& config, const CompareTable& table) {
    std::filesystem::create_directories(config.output.dir);
    if (config.output.format == OutputFormat::csv) {
        std::string trace = "variant,replication,t,exploit_last,exploit_avg\n";
        std::string summary = "variant,t,mean,min,max\n";
        for (const CompareEntry& entry : table) {
            trace += trace_csv_rows(entry.table.rows, entry.variant + ",");
            summary += summary_csv_rows(entry.table.summary, entry.variant + ",");
        }
        write_text_file(config.output.dir / "compare_trace.csv", trace);
        write_text_file(config.output.dir / "compare_summary.csv", summary);
        log::info("wrote " + (config.output.dir / "compare_trace.csv").string() + " and " +
                  (config.output.dir / "compare_summary.csv").string());
    } else {
        json doc = json::array();
        for (const CompareEntry& entry : table) {
            json e = table_to_json(entry.table);
            e["variant"] = entry.variant;
            doc.push_back(e);
        }
        write_text_file(config.output.dir / "compare.json", doc.dump(2) + "\n");
        log::info("wrote " + (config.output.dir / "compare.json").string());
    }
}

TraceTable run_experiment(const ExperimentConfig& config, int parallel) {
    const TraceTable table = run_replications(config, parallel);
    write_run_files(config, table);
    return table;
}

CompareTable compare_runs(const ExperimentConfig& config, const std::vector<Variant>& variants,
                          int parallel) {
    config.validate();
    CompareTable out;
    out.push_back({"base", run_replications(config, parallel)});

    const json base_doc = config_to_json(config);
    const json base_graphon = base_doc.at("graphon");
    for (const Variant& variant : variants) {
        if (variant.name.empty() || variant.name == "base")
            throw ConfigError("compare: variant names must be nonempty and distinct from 'base'");
        for (const CompareEntry& existing : out)
            if (existing.variant == variant.name)
                throw ConfigError("compare: duplicate variant name '" + variant.name + "'");
        json doc = base_doc;
        doc.erase("variants");
        json patch;
        try {
            patch = json::parse(variant.patch);
        } catch (const json::exception& e) {
            throw ConfigError("compare: variant '" + variant.name + "': " + e.what());
        }
        // The graphon section is a tagged union: an override replaces it
        // wholesale instead of merging keys across kinds.
        if (patch.contains("graphon")) doc.erase("graphon");
        doc.merge_patch(patch);
        ExperimentConfig vcfg = parse_config_text(doc.dump());
        vcfg.base_dir = config.base_dir;
        vcfg.validate();

        // Model-mismatch runs are solved on their own graphon but measured
        // against the true (base) one.
        const bool graphon_changed = doc.at("graphon") != base_graphon;
        DiscreteGraphon true_graphon;
        const DiscreteGraphon* eval_graphon = nullptr;
        if (graphon_changed) {
            const GameSpec vgame = build_game(vcfg);
            true_graphon = discretize(config.graphon, vcfg.n_agents, vgame.horizon);
            eval_graphon = &true_graphon;
        }
        out.push_back({variant.name, run_replications(vcfg, parallel, eval_graphon)});
    }
    write_compare_files(config, out);
    return out;
}

}  // namespace gmfg
