#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "foodhazard/commands.hpp"
#include "foodhazard/csv.hpp"

namespace {

foodhazard::Delimiter parse_delimiter(const std::string& name) {
    if (name == "comma") return foodhazard::Delimiter::Comma;
    if (name == "tab") return foodhazard::Delimiter::Tab;
    return foodhazard::Delimiter::Auto;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Minority-class text augmentation pipeline for food hazard classification"};
    app.require_subcommand(1);

    foodhazard::CleanArgs clean_args;
    foodhazard::AugmentArgs augment_args;
    foodhazard::TrainArgs train_args;
    foodhazard::PredictArgs predict_args;
    foodhazard::ScoreArgs score_args;
    foodhazard::TuneArgs tune_args;
    foodhazard::CompareArgs compare_args;
    foodhazard::ReportArgs report_args;

    std::string clean_delim = "auto";
    std::string score_delim = "auto";
    std::string report_delim = "auto";
    std::uint64_t seed_value = 0;

    auto* clean = app.add_subcommand("clean", "Clean title/text of a corpus file");
    clean->add_option("--input", clean_args.input, "input corpus")->required();
    clean->add_option("--output", clean_args.output, "cleaned corpus")->required();
    clean->add_option("--report", clean_args.report, "validation report JSON path");
    clean->add_option("--delimiter", clean_delim, "auto|comma|tab");

    auto* augment = app.add_subcommand("augment", "Generate minority-class synthetic records");
    augment->add_option("--manifest", augment_args.manifest_path, "experiment manifest")->required();
    augment->add_option("--output-dir", augment_args.output_dir, "override output directory");
    auto* augment_seed = augment->add_option("--seed", seed_value, "augmentation seed");

    auto* train = app.add_subcommand("train", "Fit TF-IDF + classifier per manifest seed");
    train->add_option("--manifest", train_args.manifest_path, "experiment manifest")->required();
    auto* train_seed = train->add_option("--seed", seed_value, "train a single seed");
    train->add_option("--field", train_args.field, "title|text override");
    train->add_option("--category", train_args.category, "label category override");
    train->add_option("--technique", train_args.technique, "SR|RW|CW|none override");

    auto* predict = app.add_subcommand("predict", "Emit predictions CSV for a split");
    predict->add_option("--manifest", predict_args.manifest_path, "experiment manifest")->required();
    predict->add_option("--split", predict_args.split, "dev|test (default test)");
    predict->add_option("--input", predict_args.input, "explicit corpus path");
    auto* predict_seed = predict->add_option("--seed", seed_value, "predict a single seed");

    auto* score = app.add_subcommand("score", "Score predictions against a gold file");
    score->add_option("--gold", score_args.gold, "gold corpus file")->required();
    score->add_option("--pred", score_args.pred, "combined predictions (id,hazard_pred,product_pred)");
    score->add_option("--pred-hazard", score_args.pred_hazard, "hazard predictions (id,predicted)");
    score->add_option("--pred-product", score_args.pred_product, "product predictions (id,predicted)");
    score->add_option("--level", score_args.level, "coarse|fine");
    score->add_option("--category", score_args.category, "single-category mode");
    score->add_option("--output", score_args.output, "score JSON path");
    score->add_option("--delimiter", score_delim, "auto|comma|tab");

    auto* tune = app.add_subcommand("tune", "Hyperparameter search on the dev split");
    tune->add_option("--manifest", tune_args.manifest_path, "experiment manifest");
    tune->add_option("--n-trials", tune_args.n_trials, "trial count (default 10)");
    tune->add_option("--sampler", tune_args.sampler, "random|adaptive");
    auto* tune_seed = tune->add_option("--seed", seed_value, "search seed");
    tune->add_option("--output", tune_args.output, "trial log JSON path");
    tune->add_option("--external-configs", tune_args.external_configs,
                     "emit N transformer config files instead of searching");
    tune->add_option("--output-dir", tune_args.output_dir, "directory for external configs");

    auto* compare = app.add_subcommand("compare", "Pairwise Kruskal-Wallis vs a baseline");
    compare->add_option("--baseline", compare_args.baseline_dir, "baseline run directory")->required();
    compare->add_option("--augmented", compare_args.augmented_dirs, "augmented run directories")
        ->required()
        ->expected(-1);
    compare->add_option("--output", compare_args.output, "grid JSON path");

    auto* report = app.add_subcommand("report", "Per-run results table + grouped confusion");
    report->add_option("--runs", report_args.run_dirs, "run directories")->required()->expected(-1);
    report->add_option("--gold", report_args.gold, "gold corpus file")->required();
    report->add_option("--train", report_args.train, "training corpus (for minority sets)");
    report->add_option("--split", report_args.split, "dev|test (default test)");
    report->add_option("--output", report_args.output, "report JSON path");
    report->add_option("--delimiter", report_delim, "auto|comma|tab");

    CLI11_PARSE(app, argc, argv);

    try {
        if (clean->parsed()) {
            clean_args.delimiter = parse_delimiter(clean_delim);
            return foodhazard::cmd_clean(clean_args);
        }
        if (augment->parsed()) {
            if (augment_seed->count() > 0) augment_args.seed = seed_value;
            return foodhazard::cmd_augment(augment_args);
        }
        if (train->parsed()) {
            if (train_seed->count() > 0) train_args.seed = seed_value;
            return foodhazard::cmd_train(train_args);
        }
        if (predict->parsed()) {
            if (predict_seed->count() > 0) predict_args.seed = seed_value;
            return foodhazard::cmd_predict(predict_args);
        }
        if (score->parsed()) {
            score_args.delimiter = parse_delimiter(score_delim);
            return foodhazard::cmd_score(score_args);
        }
        if (tune->parsed()) {
            if (tune_seed->count() > 0) tune_args.seed = seed_value;
            return foodhazard::cmd_tune(tune_args);
        }
        if (compare->parsed()) return foodhazard::cmd_compare(compare_args);
        if (report->parsed()) {
            report_args.delimiter = parse_delimiter(report_delim);
            return foodhazard::cmd_report(report_args);
        }
    } catch (const std::exception& e) {
        std::cerr << "error [" << app.get_subcommands().front()->get_name() << "]: " << e.what()
                  << '\n';
        return 1;
    }
    return 0;
}
