#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "occ/optimizer.hpp"
#include "occ/preprocessing.hpp"

namespace occ::cli {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class RunMode { train, classify, evaluate, synth, experiment };

RunMode run_mode_from_string(std::string_view s);

struct SynthBlock {
    std::string kind = "gaussian";   ///< gaussian | heterogeneous
    SyntheticSpec gaussian;
    HeterogeneousSpec heterogeneous;
};

struct ExperimentBlock {
    std::string name;                                 ///< gaussian | implicit-fpr | uci | heterogeneous
    std::vector<double> ratios = {0.1, 0.175, 0.25, 0.325, 0.4, 0.475};
    std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
    std::filesystem::path uci_dir = "data/uci";
    std::vector<std::string> datasets = {"iris", "breastw", "ecoli", "diabetes"};
};

struct RunConfig {
    RunMode mode = RunMode::train;
    std::filesystem::path train_data;
    std::filesystem::path validation_data;
    std::filesystem::path data;
    std::filesystem::path schema;
    std::filesystem::path stats;
    std::filesystem::path model;
    std::filesystem::path output_dir = "out";
    ExtentStrategy extent = ExtentStrategy::mean;
    bool embed = false;
    GaConfig ga;
    SynthBlock synth;
    ExperimentBlock experiment;
};

/// Loads the JSON config file (optional), applies flag overrides on top and
/// validates: unknown keys and out-of-bounds values are errors.
RunConfig parse_config(const std::filesystem::path& config_path,
                       const std::map<std::string, std::string>& overrides = {});

/// Executes the configured mode. Returns 0 on success, 1 on validation
/// failure, 2 on I/O failure; the last stdout line is a machine-readable
/// summary.
int run(const RunConfig& config);

/// FNV-1a hash of the canonical serialized config; stamped into artifacts.
std::string config_hash(const RunConfig& config);

}  // namespace occ::cli
