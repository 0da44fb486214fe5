#pragma once

#include "mtm/core/records.hpp"
#include "mtm/harness/config.hpp"
#include "mtm/momentum/momentum.hpp"
#include "mtm/outcome/outcome.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace mtm::harness {

/// Creates `<output_dir>/<command>-<UTC timestamp>` (or `forced` when set)
/// and writes the resolved config into it as config.json.
std::filesystem::path prepare_run_dir(const RunConfig& cfg, const std::string& command,
                                      const std::optional<std::filesystem::path>& forced);

std::vector<Match> load_matches(const RunConfig& cfg);
momentum::IndicatorWeights load_weights(const RunConfig& cfg);
momentum::PressureMatrix load_pressure(const RunConfig& cfg);
outcome::RankingTable load_rankings(const RunConfig& cfg);
eval::Tm2Options tm2_options(const RunConfig& cfg);

// Subcommands; each writes its artifacts under `run_dir`.
void run_ingest(const RunConfig& cfg, const std::filesystem::path& run_dir);
void run_detect(const RunConfig& cfg, const std::filesystem::path& run_dir);
void run_momentum(const RunConfig& cfg, const std::filesystem::path& run_dir);
void run_train(const RunConfig& cfg, const std::filesystem::path& run_dir);
void run_predict(const RunConfig& cfg, const std::filesystem::path& run_dir);
/// Returns the benchmark report after writing report.json and repetitions.csv.
eval::BenchmarkReport run_evaluate(const RunConfig& cfg, const std::filesystem::path& run_dir);
void run_synth(const RunConfig& cfg, const std::filesystem::path& run_dir);
/// Returns the largest relative error over all checked models.
double run_gradcheck(const RunConfig& cfg, const std::filesystem::path& run_dir, std::size_t models,
                     double tolerance);

/// Command-line entry point; returns the process exit status.
int run_cli(int argc, char** argv);

} // namespace mtm::harness
