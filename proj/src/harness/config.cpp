#include "mtm/harness/config.hpp"

#include "mtm/core/error.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace mtm::harness {

namespace {

using json = nlohmann::ordered_json;

void check_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) throw ConfigError("config section '" + where + "' must be an object");
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [k, v] : j.items()) {
        if (!ok.count(k)) throw ConfigError("unknown config key '" + where + (where.empty() ? "" : ".") + k + "'");
    }
}

template <typename T>
void read(const json& j, const char* key, T& out) {
    if (!j.contains(key) || j.at(key).is_null()) return;
    try {
        out = j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config key '") + key + "': " + e.what());
    }
}

template <typename T>
void read_optional(const json& j, const char* key, std::optional<T>& out) {
    if (!j.contains(key) || j.at(key).is_null()) return;
    T v{};
    read(j, key, v);
    out = v;
}

void read_path(const json& j, const char* key, std::optional<std::filesystem::path>& out) {
    std::optional<std::string> s;
    read_optional(j, key, s);
    if (s) out = *s;
}

template <typename T>
json opt(const std::optional<T>& v) {
    return v ? json(*v) : json(nullptr);
}

json opt_path(const std::optional<std::filesystem::path>& p) { return p ? json(p->string()) : json(nullptr); }

void check_path(const std::optional<std::filesystem::path>& p, const char* what) {
    if (p && !std::filesystem::exists(*p)) throw ConfigError(std::string(what) + " path does not exist: " + p->string());
}

} // namespace

void RunConfig::validate() const {
    check_path(data, "data");
    check_path(pressure, "pressure");
    check_path(ahp_own, "ahp_own");
    check_path(ahp_opponent, "ahp_opponent");
    check_path(rankings, "rankings");
    encoder.validate();
    model.validate();
    train.validate();
    if (train.window != model.window) throw ConfigError("train.window must equal model.window");
    if (sample_stride < 1) throw ConfigError("sample_stride must be >= 1");
    eval.validate();
    elo.validate();
    if (synth.matches < 1 || synth.points < 2) throw ConfigError("synth needs >= 1 match of >= 2 points");
    if (synth.players < 2) throw ConfigError("synth needs at least two players");
    if (synth.min_shifts > synth.max_shifts) throw ConfigError("synth.min_shifts exceeds synth.max_shifts");
}

RunConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    check_keys(j, "", {"data", "pressure", "ahp_own", "ahp_opponent", "rankings", "model_path", "output_dir", "seed",
                       "change_points", "encoder", "model", "train", "eval", "synth"});
    RunConfig c;
    read_path(j, "data", c.data);
    read_path(j, "pressure", c.pressure);
    read_path(j, "ahp_own", c.ahp_own);
    read_path(j, "ahp_opponent", c.ahp_opponent);
    read_path(j, "rankings", c.rankings);
    read_path(j, "model_path", c.model_path);
    std::string out_dir = c.output_dir.string();
    read(j, "output_dir", out_dir);
    c.output_dir = out_dir;
    read(j, "seed", c.seed);

    if (j.contains("change_points")) {
        const auto& s = j.at("change_points");
        check_keys(s, "change_points", {"top_level", "refinement_depth", "max_jumps", "threshold", "min_peak"});
        auto& cp = c.encoder.change_points;
        read_optional(s, "top_level", cp.top_level);
        read_optional(s, "refinement_depth", cp.refinement_depth);
        read(s, "max_jumps", cp.max_jumps);
        read(s, "threshold", cp.threshold);
        read(s, "min_peak", cp.min_peak);
    }
    if (j.contains("encoder")) {
        const auto& s = j.at("encoder");
        check_keys(s, "encoder", {"filter", "history", "causal", "log_of_raw"});
        read(s, "filter", c.encoder.filter);
        read(s, "history", c.encoder.history);
        read(s, "causal", c.encoder.causal);
        read(s, "log_of_raw", c.encoder.log_of_raw);
    }
    if (j.contains("model")) {
        const auto& s = j.at("model");
        check_keys(s, "model", {"window", "hidden", "key_dim", "attention_levels", "kernels", "attention_filter"});
        read(s, "window", c.model.window);
        read(s, "hidden", c.model.hidden);
        read(s, "key_dim", c.model.key_dim);
        read(s, "attention_levels", c.model.attention_levels);
        read(s, "kernels", c.model.kernels);
        read(s, "attention_filter", c.model.attention_filter);
    }
    c.train.window = c.model.window;
    c.train.seed = c.seed;
    if (j.contains("train")) {
        const auto& s = j.at("train");
        check_keys(s, "train", {"learning_rate", "epochs", "batch_size", "optimizer", "momentum", "clip_norm",
                                "sample_stride"});
        read(s, "learning_rate", c.train.learning_rate);
        read(s, "epochs", c.train.epochs);
        read(s, "batch_size", c.train.batch_size);
        std::string opt_name = c.train.optimizer == forecast::Optimizer::Momentum ? "momentum" : "sgd";
        read(s, "optimizer", opt_name);
        if (opt_name == "momentum") c.train.optimizer = forecast::Optimizer::Momentum;
        else if (opt_name == "sgd") c.train.optimizer = forecast::Optimizer::Sgd;
        else throw ConfigError("train.optimizer must be 'sgd' or 'momentum'");
        read(s, "momentum", c.train.momentum);
        read(s, "clip_norm", c.train.clip_norm);
        read(s, "sample_stride", c.sample_stride);
    }
    c.eval.split_seed = c.seed;
    if (j.contains("eval")) {
        const auto& s = j.at("eval");
        check_keys(s, "eval", {"repetitions", "train_fraction", "elo", "logistic"});
        read(s, "repetitions", c.eval.repetitions);
        read(s, "train_fraction", c.eval.train_fraction);
        if (s.contains("elo")) {
            const auto& e = s.at("elo");
            check_keys(e, "eval.elo", {"initial", "k", "base", "scale"});
            read(e, "initial", c.elo.initial);
            read(e, "k", c.elo.k);
            read(e, "base", c.elo.base);
            read(e, "scale", c.elo.scale);
        }
        if (s.contains("logistic")) {
            const auto& e = s.at("logistic");
            check_keys(e, "eval.logistic", {"learning_rate", "epochs", "l2"});
            read(e, "learning_rate", c.logistic.learning_rate);
            read(e, "epochs", c.logistic.epochs);
            read(e, "l2", c.logistic.l2);
        }
    }
    c.synth.seed = c.seed;
    if (j.contains("synth")) {
        const auto& s = j.at("synth");
        check_keys(s, "synth", {"seed", "matches", "points", "players", "skill_sd", "min_shifts", "max_shifts",
                                "regime_level", "min_gap", "psych_noise", "form_gain", "serve_advantage"});
        read(s, "seed", c.synth.seed);
        read(s, "matches", c.synth.matches);
        read(s, "points", c.synth.points);
        read(s, "players", c.synth.players);
        read(s, "skill_sd", c.synth.skill_sd);
        read(s, "min_shifts", c.synth.min_shifts);
        read(s, "max_shifts", c.synth.max_shifts);
        read(s, "regime_level", c.synth.regime_level);
        read(s, "min_gap", c.synth.min_gap);
        read(s, "psych_noise", c.synth.base.psych_noise);
        read(s, "form_gain", c.synth.base.form_gain);
        read(s, "serve_advantage", c.synth.base.serve_advantage);
    }
    return c;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string config_json(const RunConfig& c) {
    json j;
    j["data"] = opt_path(c.data);
    j["pressure"] = opt_path(c.pressure);
    j["ahp_own"] = opt_path(c.ahp_own);
    j["ahp_opponent"] = opt_path(c.ahp_opponent);
    j["rankings"] = opt_path(c.rankings);
    j["model_path"] = opt_path(c.model_path);
    j["output_dir"] = c.output_dir.string();
    j["seed"] = c.seed;
    const auto& cp = c.encoder.change_points;
    j["change_points"] = {{"top_level", opt(cp.top_level)},
                          {"refinement_depth", opt(cp.refinement_depth)},
                          {"max_jumps", cp.max_jumps},
                          {"threshold", cp.threshold},
                          {"min_peak", cp.min_peak}};
    j["encoder"] = {{"filter", c.encoder.filter},
                    {"history", c.encoder.history},
                    {"causal", c.encoder.causal},
                    {"log_of_raw", c.encoder.log_of_raw}};
    j["model"] = {{"window", c.model.window},
                  {"hidden", c.model.hidden},
                  {"key_dim", c.model.key_dim},
                  {"attention_levels", c.model.attention_levels},
                  {"kernels", c.model.kernels},
                  {"attention_filter", c.model.attention_filter}};
    j["train"] = {{"learning_rate", c.train.learning_rate},
                  {"epochs", c.train.epochs},
                  {"batch_size", c.train.batch_size},
                  {"optimizer", c.train.optimizer == forecast::Optimizer::Momentum ? "momentum" : "sgd"},
                  {"momentum", c.train.momentum},
                  {"clip_norm", c.train.clip_norm},
                  {"sample_stride", c.sample_stride}};
    j["eval"] = {{"repetitions", c.eval.repetitions},
                 {"train_fraction", c.eval.train_fraction},
                 {"elo", {{"initial", c.elo.initial}, {"k", c.elo.k}, {"base", c.elo.base}, {"scale", c.elo.scale}}},
                 {"logistic",
                  {{"learning_rate", c.logistic.learning_rate}, {"epochs", c.logistic.epochs}, {"l2", c.logistic.l2}}}};
    j["synth"] = {{"seed", c.synth.seed},
                  {"matches", c.synth.matches},
                  {"points", c.synth.points},
                  {"players", c.synth.players},
                  {"skill_sd", c.synth.skill_sd},
                  {"min_shifts", c.synth.min_shifts},
                  {"max_shifts", c.synth.max_shifts},
                  {"regime_level", c.synth.regime_level},
                  {"min_gap", c.synth.min_gap},
                  {"psych_noise", c.synth.base.psych_noise},
                  {"form_gain", c.synth.base.form_gain},
                  {"serve_advantage", c.synth.base.serve_advantage}};
    return j.dump(2) + "\n";
}

} // namespace mtm::harness
