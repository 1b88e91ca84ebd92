#pragma once

#include "bh/params.hpp"

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace bh {

// One JSON document drives a run; every numeric default below is what the
// shipped example config contains.
struct RunConfig {
    ModelParams params;
    std::string scenario = "dirac"; // dirac | historic | thm18 | custom-code
    int chain_depth = 140;          // scheduled blocks; the bridge chain goes two deeper
    long horizon_lo = 100000;       // final checkpoint window
    long horizon_hi = 1000000;
    bool sigma_is_auto = true;
    double sigma = 0.5;             // used when sigma_is_auto is false
    int nesting_window = 7;         // consecutive generations checked from k_start
    int wandering_generations = 5;
    int separation_codes = 50;
    int samples_axial = 5;          // stratified cylinder sample grid
    int samples_angular = 20;
    unsigned long long seed = 12345;
    std::string output_dir = "out";
    std::vector<std::string> custom_words; // scenario custom-code, words[k-1] = u_k
};

RunConfig default_config();

std::string config_to_json(const RunConfig& c);
std::optional<RunConfig> config_from_json(const std::string& text, std::string* err);

// Stage-tagged exit codes; 0 = overall PASS, 1 = pipeline complete but some
// criterion failed.
enum ExitCode : int {
    kOk = 0,
    kCriteriaFail = 1,
    kConfigError = 2,
    kParamsInvalid = 3,
    kSeedFail = 4,
    kScheduleFail = 5,
    kHorizonFail = 6,
    kPseudoOrbitFail = 7,
    kFieldFail = 8,
    kScalesFail = 9,
    kDomainsFail = 10,
    kNestingFail = 11,
    kWanderingFail = 12,
    kSeparationFail = 13,
    kRatioFail = 14,
    kStatisticsFail = 15,
    kReplayDiff = 16,
    kIoError = 17,
};

struct RunResult {
    int exit_code = 0;
    std::string stage;       // failing stage, empty when the pipeline completed
    std::string report_json; // the full report document
};

// schedule -> blocks -> pseudo-orbit -> field -> scales -> domains ->
// verifications -> statistics; stops at the first failing stage.
RunResult run_pipeline(const RunConfig& c, bool write_artifacts);

int cmd_validate(const std::string& config_json, std::ostream& out);
int cmd_run(const std::string& config_json, std::ostream& out);
int cmd_replay(const std::string& report_path, std::ostream& out);

// Deterministic harmonization to m atoms: indices floor(i*n/m).
std::vector<std::size_t> stride_indices(std::size_t n, std::size_t m);

} // namespace bh
