#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "mrpath/instance.h"
#include "mrpath/model.h"
#include "mrpath/radio.h"
#include "mrpath/simulation.h"
#include "mrpath/solver.h"

namespace mrpath {

inline constexpr int kInstanceSchemaVersion = 1;
inline constexpr int kSolutionSchemaVersion = 1;
inline constexpr int kResultsSchemaVersion = 1;

/// Parse-time failure with a human-readable message.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

/// Instance JSON: schema_version, layout parameters, depot, nodes
/// (id, x, y, e, l, w), velocity, robots and h as a sparse pair list.
std::string instance_to_json(const Instance& instance);
Instance instance_from_json(std::string_view text);

std::string solution_to_json(const Solution& solution);
Solution solution_from_json(std::string_view text);

std::string validation_to_json(const ValidationReport& report);
std::string evaluation_to_json(const ScheduleEvaluation& evaluation);
std::string model_stats_json(const MilpModel& model);

/// Accepts JSON, or flat TOML-style `key = value` lines with optional
/// [section] headers; returns the equivalent JSON text.
std::string normalize_config_text(std::string_view text);

/// Radio keys mirror the simulation-parameter table; dB-valued inputs carry
/// explicit suffixes (tx_power_dbm, noise_psd_dbm_per_hz). Missing keys keep
/// their defaults. Converts to linear units.
RadioParams radio_params_from_text(std::string_view text);
std::string radio_params_to_json(const RadioParams& radio);

/// Experiment config; a manifest written by export_results is accepted too.
ExperimentConfig experiment_config_from_text(std::string_view text);
std::string experiment_config_to_json(const ExperimentConfig& config);

std::string results_to_json(const ExperimentResults& results);
std::string manifest_to_json(const ExperimentResults& results);

}  // namespace mrpath
