#pragma once

#include "mtm/forecast/model.hpp"

#include <filesystem>
#include <iosfwd>

namespace mtm::forecast {

/// Binary model file, little-endian:
///   "MTMF" magic, u32 version (1),
///   u64 window, hidden, key_dim, attention_levels,
///   u64 kernel count, u64 kernels...,
///   u64 filter-name length, filter-name bytes,
///   u64 train window, f64 learning rate, u64 epochs, u64 batch size,
///   u64 seed, u32 optimizer, f64 momentum, f64 clip norm,
///   u64 parameter count, f64 parameters...,
///   u64 FNV-1a checksum of every preceding byte.
inline constexpr std::uint32_t kModelFormatVersion = 1;

void save_model(std::ostream& out, const ForecastModel& model);
void save_model(const std::filesystem::path& path, const ForecastModel& model);

/// Throws CorruptFileError for truncated or altered data and VersionError
/// for an unknown format version.
ForecastModel load_model(std::istream& in);
ForecastModel load_model(const std::filesystem::path& path);

} // namespace mtm::forecast
