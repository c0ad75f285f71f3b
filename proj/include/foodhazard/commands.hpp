#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "foodhazard/csv.hpp"

namespace foodhazard {

// CLI entry points. Each returns a process exit code; failures surface as
// exceptions tagged with the failing stage by the dispatcher.

struct CleanArgs {
    std::string input;
    std::string output;
    std::string report;  // defaults to <output>.report.json
    Delimiter delimiter = Delimiter::Auto;
};
int cmd_clean(const CleanArgs& args);

struct AugmentArgs {
    std::string manifest_path;
    std::string output_dir;  // overrides the manifest's
    std::optional<std::uint64_t> seed;
};
int cmd_augment(const AugmentArgs& args);

struct TrainArgs {
    std::string manifest_path;
    std::optional<std::uint64_t> seed;  // restricts the run to one seed
    std::string field;                  // optional overrides
    std::string category;
    std::string technique;  // SR | RW | CW | none
};
int cmd_train(const TrainArgs& args);

struct PredictArgs {
    std::string manifest_path;
    std::string split = "test";  // dev | test
    std::string input;           // explicit corpus path instead of a split
    std::optional<std::uint64_t> seed;
};
int cmd_predict(const PredictArgs& args);

struct ScoreArgs {
    std::string gold;
    std::string pred;          // combined file: id, hazard_pred, product_pred
    std::string pred_hazard;   // or two single-category files (id, predicted)
    std::string pred_product;
    std::string level;     // coarse | fine (task mode)
    std::string category;  // single-category mode
    std::string output;
    Delimiter delimiter = Delimiter::Auto;
};
int cmd_score(const ScoreArgs& args);

struct TuneArgs {
    std::string manifest_path;
    int n_trials = 10;
    std::string sampler = "random";
    std::optional<std::uint64_t> seed;
    std::string output;        // trial log path
    int external_configs = 0;  // emit transformer config files instead
    std::string output_dir;
};
int cmd_tune(const TuneArgs& args);

struct CompareArgs {
    std::string baseline_dir;
    std::vector<std::string> augmented_dirs;
    std::string output;
};
int cmd_compare(const CompareArgs& args);

struct ReportArgs {
    std::vector<std::string> run_dirs;
    std::string gold;
    std::string train;  // optional, for minority sets when no plan.json exists
    std::string split = "test";
    std::string output;
    Delimiter delimiter = Delimiter::Auto;
};
int cmd_report(const ReportArgs& args);

}  // namespace foodhazard
