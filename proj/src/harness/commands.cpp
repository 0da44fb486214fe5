#include "mtm/harness/commands.hpp"

#include "mtm/core/csv.hpp"
#include "mtm/core/error.hpp"
#include "mtm/core/synthetic.hpp"
#include "mtm/forecast/serialize.hpp"
#include "mtm/forecast/train.hpp"
#include "mtm/llsa/llsa.hpp"
#include "mtm/pipeline/encoder.hpp"

#include <CLI11.hpp>
#include <json.hpp>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <random>

namespace mtm::harness {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

std::ofstream open_out(const fs::path& p) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + p.string());
    return out;
}

const fs::path& require_data(const RunConfig& cfg) {
    if (!cfg.data) throw ConfigError("no input data: pass --data or set \"data\" in the config");
    return *cfg.data;
}

std::string utc_stamp() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y%m%d-%H%M%S", &tm);
    return buf;
}

} // namespace

fs::path prepare_run_dir(const RunConfig& cfg, const std::string& command, const std::optional<fs::path>& forced) {
    fs::path dir;
    if (forced) {
        dir = *forced;
    } else {
        const fs::path base = cfg.output_dir / (command + "-" + utc_stamp());
        dir = base;
        for (int k = 1; fs::exists(dir); ++k) dir = base.string() + "-" + std::to_string(k);
    }
    fs::create_directories(dir);
    open_out(dir / "config.json") << config_json(cfg);
    return dir;
}

std::vector<Match> load_matches(const RunConfig& cfg) {
    const auto records = ingest_csv(require_data(cfg), FeatureSchema::standard());
    auto matches = group_matches(records);
    for (const auto& m : matches) validate_match(m.points);
    return matches;
}

momentum::IndicatorWeights load_weights(const RunConfig& cfg) {
    const auto schema = FeatureSchema::standard();
    if (!cfg.ahp_own && !cfg.ahp_opponent) return momentum::IndicatorWeights::defaults(schema);
    const auto own = cfg.ahp_own ? momentum::AhpMatrix::from_csv(*cfg.ahp_own) : momentum::AhpMatrix::default_own();
    const auto opp = cfg.ahp_opponent ? momentum::AhpMatrix::from_csv(*cfg.ahp_opponent)
                                      : momentum::AhpMatrix::default_opponent();
    return momentum::IndicatorWeights::from_ahp(momentum::ahp_weights(own), momentum::ahp_weights(opp), schema);
}

momentum::PressureMatrix load_pressure(const RunConfig& cfg) {
    if (!cfg.pressure) return momentum::PressureMatrix::uniform();
    return momentum::PressureMatrix::from_csv(*cfg.pressure);
}

outcome::RankingTable load_rankings(const RunConfig& cfg) {
    if (!cfg.rankings) return {};
    return outcome::RankingTable::from_csv(*cfg.rankings);
}

eval::Tm2Options tm2_options(const RunConfig& cfg) {
    eval::Tm2Options o;
    o.weights = load_weights(cfg);
    o.pressure = load_pressure(cfg);
    o.encoder = cfg.encoder;
    o.model = cfg.model;
    o.train = cfg.train;
    o.ranks = load_rankings(cfg);
    o.sample_stride = cfg.sample_stride;
    return o;
}

void run_ingest(const RunConfig& cfg, const fs::path& run_dir) {
    const auto schema = FeatureSchema::standard();
    const auto records = ingest_csv(require_data(cfg), schema);
    const auto matches = group_matches(records);
    json summary;
    summary["records"] = records.size();
    json per = json::array();
    for (const auto& m : matches) {
        validate_match(m.points);
        per.push_back({{"match_id", m.id},
                       {"player1", m.player(Side::P1)},
                       {"player2", m.player(Side::P2)},
                       {"points", m.points.size()}});
    }
    summary["matches"] = per;
    write_csv(run_dir / "records.csv", records, schema);
    open_out(run_dir / "summary.json") << summary.dump(2) << '\n';
    std::cout << "ingested " << records.size() << " records in " << matches.size() << " matches\n";
}

void run_detect(const RunConfig& cfg, const fs::path& run_dir) {
    const auto schema = FeatureSchema::standard();
    const auto filter = wavelet::WaveletFilter::by_name(cfg.encoder.filter);
    auto out = open_out(run_dir / "regions.csv");
    out << "match_id,player,column,jump,level,l,alpha,beta,n_alpha,n_beta,refinement_miss\n";
    json report = json::array();
    for (const auto& m : load_matches(cfg)) {
        for (Side s : {Side::P1, Side::P2}) {
            const auto series = to_series(m.points, s, schema);
            const auto rec = llsa::reconstruct(series, cfg.encoder.change_points, filter);
            const auto& names = series.variable_names();
            json cols = json::object();
            for (std::size_t c = 0; c < rec.regions.size(); ++c) {
                json jumps = json::array();
                for (std::size_t k = 0; k < rec.regions[c].jumps.size(); ++k) {
                    json chain = json::array();
                    for (const auto& r : rec.regions[c].jumps[k]) {
                        out << csv_escape(m.id) << ',' << csv_escape(m.player(s)) << ',' << names[c] << ',' << k
                            << ',' << r.level << ',' << r.location << ',' << r.alpha << ',' << r.beta << ','
                            << r.n_alpha << ',' << r.n_beta << ',' << (r.refinement_miss ? 1 : 0) << '\n';
                        chain.push_back({{"level", r.level}, {"l", r.location}, {"alpha", r.alpha}, {"beta", r.beta}});
                    }
                    jumps.push_back(chain);
                }
                cols[names[c]] = jumps;
            }
            report.push_back({{"match_id", m.id}, {"player", m.player(s)}, {"columns", cols}});
        }
    }
    open_out(run_dir / "regions.json") << report.dump(2) << '\n';
    std::cout << "wrote " << (run_dir / "regions.csv").string() << '\n';
}

void run_momentum(const RunConfig& cfg, const fs::path& run_dir) {
    const auto schema = FeatureSchema::standard();
    const auto weights = load_weights(cfg);
    const auto pressure = load_pressure(cfg);
    auto out = open_out(run_dir / "momentum.csv");
    out << "match_id,t,elapsed_time,point_victor,player1,player2,momentum_p1,momentum_p2\n";
    for (const auto& m : load_matches(cfg)) {
        const auto mm = pipeline::encode_match(m, schema, weights, pressure, cfg.encoder);
        for (std::size_t t = 0; t < mm.victor.size(); ++t) {
            out << csv_escape(m.id) << ',' << t << ',' << format_double(mm.time_index[t]) << ','
                << (mm.victor[t] == Side::P1 ? 1 : 2) << ',' << csv_escape(mm.players[0]) << ','
                << csv_escape(mm.players[1]) << ',' << format_double(mm.momentum[0][t]) << ','
                << format_double(mm.momentum[1][t]) << '\n';
        }
    }
    std::ostringstream ss;
    const auto own = cfg.ahp_own ? momentum::AhpMatrix::from_csv(*cfg.ahp_own) : momentum::AhpMatrix::default_own();
    const auto opp = cfg.ahp_opponent ? momentum::AhpMatrix::from_csv(*cfg.ahp_opponent)
                                      : momentum::AhpMatrix::default_opponent();
    open_out(run_dir / "weights.json") << momentum::weights_json(momentum::ahp_weights(own),
                                                                 momentum::ahp_weights(opp), own.names())
                                       << '\n';
    std::cout << "wrote " << (run_dir / "momentum.csv").string() << '\n';
}

void run_train(const RunConfig& cfg, const fs::path& run_dir) {
    const auto matches = load_matches(cfg);
    eval::Tm2Spec spec(tm2_options(cfg));
    spec.prepare(matches);
    forecast::WindowDataset data(cfg.model.window);
    for (const auto& mm : spec.momentum()) {
        for (const auto& s : mm.momentum) data.add_series(s, cfg.sample_stride);
    }
    auto result = forecast::train(forecast::ForecastModel::initialize(cfg.model, cfg.seed), data, cfg.train);
    const fs::path model_path = cfg.model_path.value_or(run_dir / "model.bin");
    forecast::save_model(model_path, result.model);
    auto curve = open_out(run_dir / "loss_curve.csv");
    forecast::write_loss_curve_csv(curve, result.loss_curve);
    std::cout << "trained on " << data.size() << " windows; final loss "
              << (result.loss_curve.empty() ? 0.0 : result.loss_curve.back()) << "; model " << model_path.string()
              << '\n';
}

void run_predict(const RunConfig& cfg, const fs::path& run_dir) {
    if (!cfg.model_path) throw ConfigError("predict needs --model");
    const auto model = forecast::load_model(*cfg.model_path);
    const auto schema = FeatureSchema::standard();
    const auto weights = load_weights(cfg);
    const auto pressure = load_pressure(cfg);
    const auto ranks = load_rankings(cfg);
    const outcome::ModelForecaster f(model);
    fs::create_directories(run_dir / "decisions");
    json summary = json::array();
    for (const auto& m : load_matches(cfg)) {
        const auto sim = outcome::simulate_match(f, m, schema, weights, pressure, cfg.encoder, ranks);
        auto log = open_out(run_dir / "decisions" / (m.id + ".csv"));
        outcome::write_decision_log(log, sim);
        std::size_t hits = 0;
        for (const auto& p : sim.points) hits += p.winner == p.actual ? 1 : 0;
        summary.push_back({{"match_id", m.id},
                           {"predicted_winner", sim.players[index_of(sim.match_winner)]},
                           {"points_player1", sim.predicted_points[0]},
                           {"points_player2", sim.predicted_points[1]},
                           {"point_accuracy", static_cast<double>(hits) / static_cast<double>(sim.points.size())}});
    }
    open_out(run_dir / "predictions.json") << summary.dump(2) << '\n';
    std::cout << "wrote decision logs for " << summary.size() << " matches\n";
}

eval::BenchmarkReport run_evaluate(const RunConfig& cfg, const fs::path& run_dir) {
    const auto matches = load_matches(cfg);
    std::vector<std::shared_ptr<eval::ModelSpec>> models{std::make_shared<eval::Tm2Spec>(tm2_options(cfg)),
                                                         std::make_shared<eval::EloSpec>(cfg.elo),
                                                         std::make_shared<eval::LogisticSpec>(cfg.logistic)};
    const auto report = eval::run_benchmark(matches, models, cfg.eval);
    open_out(run_dir / "report.json") << eval::report_json(report);
    auto reps = open_out(run_dir / "repetitions.csv");
    eval::write_repetitions_csv(reps, report);
    std::cout << eval::report_table(report);
    return report;
}

void run_synth(const RunConfig& cfg, const fs::path& run_dir) {
    const auto corpus = generate_corpus(cfg.synth);
    const auto records = flatten(corpus.matches);
    write_csv(run_dir / "data.csv", records, FeatureSchema::standard());
    // Rank by planted skill, best first.
    std::vector<std::size_t> order(corpus.players.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return corpus.skills[a] > corpus.skills[b]; });
    outcome::RankingTable ranks;
    for (std::size_t r = 0; r < order.size(); ++r) ranks.set(corpus.players[order[r]], static_cast<int>(r + 1));
    auto rk = open_out(run_dir / "rankings.csv");
    ranks.write_csv(rk);
    auto planted = open_out(run_dir / "planted.csv");
    planted << "match_id,index,magnitude\n";
    for (std::size_t m = 0; m < corpus.matches.size(); ++m) {
        for (const auto& j : corpus.planted[m]) {
            planted << corpus.matches[m].id << ',' << j.index << ',' << format_double(j.magnitude) << '\n';
        }
    }
    std::cout << "wrote " << corpus.matches.size() << " matches to " << (run_dir / "data.csv").string() << '\n';
}

double run_gradcheck(const RunConfig& cfg, const fs::path& run_dir, std::size_t models, double tolerance) {
    forecast::ModelConfig mc;
    mc.window = 8;
    mc.hidden = 4;
    mc.key_dim = 4;
    mc.attention_levels = 2;
    mc.kernels = {3, 5, 7};
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    json out = json::array();
    double worst = 0.0;
    for (std::size_t k = 0; k < models; ++k) {
        auto model = forecast::ForecastModel::initialize(mc, cfg.seed + k);
        for (double& p : model.mutable_params()) p += 0.1 * unit(rng);
        std::vector<double> window(mc.window);
        for (double& v : window) v = unit(rng);
        const double target = unit(rng);
        const auto rep = forecast::gradient_check(model, window, target);
        json blocks = json::object();
        for (const auto& b : rep.blocks) blocks[b.block] = b.max_relative_error;
        out.push_back({{"model", k}, {"max_relative_error", rep.max_relative_error}, {"blocks", blocks}});
        worst = std::max(worst, rep.max_relative_error);
    }
    json report{{"models", models}, {"tolerance", tolerance}, {"max_relative_error", worst}, {"results", out}};
    open_out(run_dir / "gradcheck.json") << report.dump(2) << '\n';
    std::cout << "max relative gradient error " << worst << (worst < tolerance ? " (ok)" : " (FAIL)") << '\n';
    return worst;
}

int run_cli(int argc, char** argv) {
    CLI::App app{"Momentum-transfer match prediction pipeline"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::string log_level = "warn";
    std::string out_dir;
    std::string run_dir;
    app.add_option("--config", config_path, "JSON run config (default: $MTM_CONFIG)");
    app.add_option("--log-level", log_level, "trace, debug, info, warn, error")->capture_default_str();
    app.add_option("--out-dir", out_dir, "parent directory for timestamped run directories");
    app.add_option("--run-dir", run_dir, "write artifacts to exactly this directory");

    struct Overrides {
        std::string data, pressure, ahp_own, ahp_opponent, rankings, model;
        std::optional<std::uint64_t> seed;
        std::optional<std::size_t> epochs, reps, matches, points, window, stride, history;
        std::optional<double> lr;
    } ov;
    std::size_t gc_models = 20;
    double gc_tol = 1e-4;

    auto add_data = [&](CLI::App* sub, bool required) {
        auto* o = sub->add_option("--data", ov.data, "point-by-point CSV");
        if (required) o->check(CLI::ExistingFile);
    };
    auto add_model_inputs = [&](CLI::App* sub) {
        sub->add_option("--pressure", ov.pressure, "pressure matrix CSV")->check(CLI::ExistingFile);
        sub->add_option("--ahp-own", ov.ahp_own, "own-effect AHP matrix CSV")->check(CLI::ExistingFile);
        sub->add_option("--ahp-opponent", ov.ahp_opponent, "opponent-effect AHP matrix CSV")->check(CLI::ExistingFile);
        sub->add_option("--history", ov.history, "trailing points per causal reconstruction");
    };

    auto* ingest = app.add_subcommand("ingest", "validate a CSV and write a normalised copy");
    add_data(ingest, true);
    auto* detect = app.add_subcommand("detect", "report LLSA jump regions per match, player and column");
    add_data(detect, true);
    auto* mom = app.add_subcommand("momentum", "write per-point momentum of both players");
    add_data(mom, true);
    add_model_inputs(mom);
    auto* train = app.add_subcommand("train", "train the forecaster on every match");
    add_data(train, true);
    add_model_inputs(train);
    train->add_option("--model", ov.model, "output model file");
    train->add_option("--epochs", ov.epochs, "training epochs");
    train->add_option("--window", ov.window, "forecaster window length L");
    train->add_option("--stride", ov.stride, "keep every n-th training window");
    train->add_option("--lr", ov.lr, "learning rate");
    train->add_option("--seed", ov.seed, "run seed");
    auto* predict = app.add_subcommand("predict", "simulate matches and write decision logs");
    add_data(predict, true);
    add_model_inputs(predict);
    predict->add_option("--model", ov.model, "trained model file")->check(CLI::ExistingFile);
    predict->add_option("--rankings", ov.rankings, "rankings CSV")->check(CLI::ExistingFile);
    auto* evaluate = app.add_subcommand("evaluate", "benchmark against the ELO and logistic baselines");
    add_data(evaluate, true);
    add_model_inputs(evaluate);
    evaluate->add_option("--rankings", ov.rankings, "rankings CSV")->check(CLI::ExistingFile);
    evaluate->add_option("--reps", ov.reps, "repetitions");
    evaluate->add_option("--epochs", ov.epochs, "training epochs");
    evaluate->add_option("--window", ov.window, "forecaster window length L");
    evaluate->add_option("--stride", ov.stride, "keep every n-th training window");
    evaluate->add_option("--seed", ov.seed, "run seed");
    auto* synth = app.add_subcommand("synth", "generate a synthetic corpus");
    synth->add_option("--seed", ov.seed, "run seed");
    synth->add_option("--matches", ov.matches, "number of matches");
    synth->add_option("--points", ov.points, "points per match");
    auto* gradcheck = app.add_subcommand("gradcheck", "finite-difference check of the forecaster gradients");
    gradcheck->add_option("--models", gc_models, "random models to check")->capture_default_str();
    gradcheck->add_option("--tolerance", gc_tol, "largest accepted relative error")->capture_default_str();
    gradcheck->add_option("--seed", ov.seed, "run seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        spdlog::set_level(spdlog::level::from_str(log_level));
        if (config_path.empty()) {
            if (const char* env = std::getenv(kConfigEnv)) config_path = env;
        }
        RunConfig cfg = config_path.empty() ? RunConfig{} : load_config(config_path);
        if (config_path.empty()) {
            cfg.train.window = cfg.model.window;
        }
        if (!out_dir.empty()) cfg.output_dir = out_dir;
        if (!ov.data.empty()) cfg.data = ov.data;
        if (!ov.pressure.empty()) cfg.pressure = ov.pressure;
        if (!ov.ahp_own.empty()) cfg.ahp_own = ov.ahp_own;
        if (!ov.ahp_opponent.empty()) cfg.ahp_opponent = ov.ahp_opponent;
        if (!ov.rankings.empty()) cfg.rankings = ov.rankings;
        if (!ov.model.empty()) cfg.model_path = ov.model;
        if (ov.seed) {
            cfg.seed = *ov.seed;
            cfg.train.seed = *ov.seed;
            cfg.eval.split_seed = *ov.seed;
            cfg.synth.seed = *ov.seed;
        }
        if (ov.epochs) cfg.train.epochs = *ov.epochs;
        if (ov.reps) cfg.eval.repetitions = *ov.reps;
        if (ov.matches) cfg.synth.matches = *ov.matches;
        if (ov.points) cfg.synth.points = *ov.points;
        if (ov.window) cfg.model.window = cfg.train.window = *ov.window;
        if (ov.stride) cfg.sample_stride = *ov.stride;
        if (ov.history) cfg.encoder.history = *ov.history;
        if (ov.lr) cfg.train.learning_rate = *ov.lr;

        const auto* sub = app.get_subcommands().front();
        const std::string name = sub->get_name();
        const bool needs_data = name != "synth" && name != "gradcheck";
        if (needs_data && !cfg.data) {
            std::cerr << "error: " << name << " requires --data (or \"data\" in the config)\n\n" << sub->help();
            return 2;
        }
        cfg.validate();
        const std::optional<fs::path> forced = run_dir.empty() ? std::nullopt : std::optional<fs::path>(run_dir);
        const fs::path dir = prepare_run_dir(cfg, name, forced);
        if (name == "ingest") run_ingest(cfg, dir);
        else if (name == "detect") run_detect(cfg, dir);
        else if (name == "momentum") run_momentum(cfg, dir);
        else if (name == "train") run_train(cfg, dir);
        else if (name == "predict") run_predict(cfg, dir);
        else if (name == "evaluate") run_evaluate(cfg, dir);
        else if (name == "synth") run_synth(cfg, dir);
        else if (name == "gradcheck") return run_gradcheck(cfg, dir, gc_models, gc_tol) < gc_tol ? 0 : 1;
        std::cout << "run directory: " << dir.string() << '\n';
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

} // namespace mtm::harness
