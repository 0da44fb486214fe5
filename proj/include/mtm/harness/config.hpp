#pragma once

#include "mtm/core/synthetic.hpp"
#include "mtm/eval/baselines.hpp"
#include "mtm/eval/benchmark.hpp"
#include "mtm/forecast/model.hpp"
#include "mtm/llsa/llsa.hpp"
#include "mtm/pipeline/encoder.hpp"

#include <filesystem>
#include <optional>
#include <string>

namespace mtm::harness {

/// Everything a subcommand needs; loaded from one JSON file, then
/// overridden by command-line flags. See README for the schema.
struct RunConfig {
    std::optional<std::filesystem::path> data;
    std::optional<std::filesystem::path> pressure;
    std::optional<std::filesystem::path> ahp_own;
    std::optional<std::filesystem::path> ahp_opponent;
    std::optional<std::filesystem::path> rankings;
    std::optional<std::filesystem::path> model_path;
    std::filesystem::path output_dir = "runs";
    std::uint64_t seed = 7;

    pipeline::EncoderConfig encoder;
    forecast::ModelConfig model;
    forecast::TrainConfig train;
    std::size_t sample_stride = 1;
    eval::BenchmarkConfig eval;
    eval::EloConfig elo;
    eval::LogisticConfig logistic;
    CorpusOptions synth;

    /// Throws ConfigError when a referenced path is missing or a sub-config
    /// is invalid.
    void validate() const;
};

/// Parses JSON text; unknown keys are a ConfigError.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::filesystem::path& path);
/// Resolved configuration as pretty JSON.
std::string config_json(const RunConfig& cfg);

/// Name of the environment variable holding a default config path.
inline constexpr const char* kConfigEnv = "MTM_CONFIG";

} // namespace mtm::harness
