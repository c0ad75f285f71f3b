#include "foodhazard/commands.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "foodhazard/augment.hpp"
#include "foodhazard/corpus.hpp"
#include "foodhazard/error.hpp"
#include "foodhazard/evaluate.hpp"
#include "foodhazard/manifest.hpp"
#include "foodhazard/models.hpp"
#include "foodhazard/tune.hpp"

namespace fs = std::filesystem;

namespace foodhazard {

namespace {

std::string fixed(double v, int prec = 4) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(prec) << v;
    return os.str();
}

void print_table(const std::vector<std::string>& header,
                 const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> width(header.size());
    for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size() && c < width.size(); ++c) {
            width[c] = std::max(width[c], row[c].size());
        }
    }
    auto print_row = [&](const std::vector<std::string>& row) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            std::cout << (c == 0 ? "" : "  ") << std::left << std::setw(static_cast<int>(width[c]))
                      << row[c];
        }
        std::cout << '\n';
    };
    print_row(header);
    std::vector<std::string> rule;
    for (std::size_t c = 0; c < header.size(); ++c) rule.push_back(std::string(width[c], '-'));
    print_row(rule);
    for (const auto& row : rows) print_row(row);
}

void write_json_file(const std::string& path, const nlohmann::json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write file: " + path);
    out << j.dump(2) << '\n';
}

nlohmann::json read_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read file: " + path);
    nlohmann::json j;
    in >> j;
    return j;
}

// Owns provider resources resolved from an AugmentSpec.
struct ProviderBundle {
    std::optional<SynonymDb> synonyms;
    std::unique_ptr<InsertionProvider> inserter;

    AugmenterProvider view() const {
        AugmenterProvider p;
        if (synonyms) p.synonyms = &*synonyms;
        p.inserter = inserter.get();
        return p;
    }
};

ProviderBundle build_providers(const AugmentSpec& spec) {
    ProviderBundle bundle;
    if (spec.technique == Technique::SR) {
        if (spec.synonym_db_path.empty()) {
            throw ConfigError("SR augmentation needs a synonym_db path");
        }
        bundle.synonyms = SynonymDb::load(spec.synonym_db_path);
    }
    if (spec.technique == Technique::CW) {
        if (spec.inserter_kind == "table") {
            bundle.inserter =
                std::make_unique<TableInsertionProvider>(TableInsertionProvider::load(spec.inserter_path));
        } else if (spec.inserter_kind == "embedding") {
            bundle.inserter = std::make_unique<EmbeddingNeighborProvider>(
                EmbeddingNeighborProvider::load(spec.inserter_path));
        } else if (spec.inserter_kind == "file") {
            bundle.inserter = std::make_unique<FileCandidateProvider>(
                FileCandidateProvider::load(spec.inserter_path));
        } else {
            throw ConfigError("unknown insertion provider kind: " + spec.inserter_kind);
        }
    }
    return bundle;
}

struct AugmentedTrainingSet {
    std::vector<IncidentRecord> records;  // originals followed by synthetics
    AugmentationPlan plan;
    LabelSpace before;
    LabelSpace after;
};

AugmentedTrainingSet augment_training_set(const ExperimentManifest& manifest,
                                          const std::vector<IncidentRecord>& train,
                                          std::uint64_t run_seed) {
    const AugmentSpec& spec = *manifest.augmentation;
    const AugmentConfig config = spec.resolve(manifest.category, run_seed);
    ProviderBundle providers = build_providers(spec);

    AugmentedTrainingSet out;
    out.before = compute_label_space(train, manifest.category);
    out.plan = build_plan(config, out.before, train);
    std::vector<IncidentRecord> synthetic = apply_plan(out.plan, config, train, providers.view());
    out.records = train;
    out.records.insert(out.records.end(), std::make_move_iterator(synthetic.begin()),
                       std::make_move_iterator(synthetic.end()));
    out.after = compute_label_space(out.records, manifest.category);
    return out;
}

std::string seed_dir(const ExperimentManifest& manifest, std::uint64_t seed) {
    return manifest.output_dir + "/seed_" + std::to_string(seed);
}

std::vector<std::uint64_t> selected_seeds(const ExperimentManifest& manifest,
                                          const std::optional<std::uint64_t>& override_seed) {
    if (override_seed) return {*override_seed};
    return manifest.seeds;
}

std::vector<std::string> gold_labels(const std::vector<IncidentRecord>& records,
                                     Category category) {
    std::vector<std::string> out;
    out.reserve(records.size());
    for (const auto& r : records) out.push_back(r.label(category));
    return out;
}

// id -> predicted label from a two-column prediction file.
std::map<std::string, std::string> read_single_predictions(const std::string& path,
                                                           Delimiter delimiter) {
    Table table = read_delimited(path, delimiter);
    std::size_t id_col = table.column("id");
    if (id_col == Table::npos) id_col = 0;
    std::size_t pred_col = table.column("predicted");
    if (pred_col == Table::npos) pred_col = id_col == 0 ? 1 : 0;
    std::map<std::string, std::string> out;
    for (const auto& row : table.rows) {
        if (row.size() <= std::max(id_col, pred_col)) continue;
        out[row[id_col]] = row[pred_col];
    }
    if (out.empty()) throw IngestError("prediction file has no usable rows: " + path);
    return out;
}

struct PairedPredictions {
    std::map<std::string, std::string> hazard;
    std::map<std::string, std::string> product;
};

PairedPredictions read_paired_predictions(const ScoreArgs& args) {
    PairedPredictions out;
    if (!args.pred.empty()) {
        Table table = read_delimited(args.pred, args.delimiter);
        std::size_t id_col = table.column("id");
        if (id_col == Table::npos) id_col = 0;
        std::size_t hazard_col = table.column("hazard_pred");
        if (hazard_col == Table::npos) hazard_col = table.column("hazard");
        std::size_t product_col = table.column("product_pred");
        if (product_col == Table::npos) product_col = table.column("product");
        if (hazard_col == Table::npos || product_col == Table::npos) {
            throw IngestError("combined prediction file needs hazard_pred and product_pred columns");
        }
        for (const auto& row : table.rows) {
            if (row.size() <= std::max({id_col, hazard_col, product_col})) continue;
            out.hazard[row[id_col]] = row[hazard_col];
            out.product[row[id_col]] = row[product_col];
        }
    } else {
        out.hazard = read_single_predictions(args.pred_hazard, args.delimiter);
        out.product = read_single_predictions(args.pred_product, args.delimiter);
    }
    return out;
}

std::vector<std::string> align_by_id(const std::vector<IncidentRecord>& gold,
                                     const std::map<std::string, std::string>& predictions,
                                     const std::string& what) {
    std::vector<std::string> out;
    out.reserve(gold.size());
    for (const auto& r : gold) {
        auto it = predictions.find(r.id);
        if (it == predictions.end()) {
            throw IngestError(what + " predictions missing id: " + r.id);
        }
        out.push_back(it->second);
    }
    return out;
}

std::vector<std::vector<std::string>> metrics_rows(const std::vector<ClassMetrics>& metrics) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& m : metrics) {
        rows.push_back({m.label, fixed(m.precision), fixed(m.recall), fixed(m.f1),
                        std::to_string(m.support)});
    }
    return rows;
}

void print_class_stats(const std::string& title, const DistributionStats& before,
                       const DistributionStats& after) {
    std::cout << title << '\n';
    print_table({"Statistic", "Initial", "Augmented"},
                {{"Count", std::to_string(before.count), std::to_string(after.count)},
                 {"Mean", fixed(before.mean, 2), fixed(after.mean, 2)},
                 {"Std", fixed(before.stddev, 2), fixed(after.stddev, 2)},
                 {"Min", fixed(before.min, 0), fixed(after.min, 0)},
                 {"25%", fixed(before.q25, 2), fixed(after.q25, 2)},
                 {"50%", fixed(before.q50, 2), fixed(after.q50, 2)},
                 {"75%", fixed(before.q75, 2), fixed(after.q75, 2)},
                 {"Max", fixed(before.max, 0), fixed(after.max, 0)},
                 {"Total Samples", std::to_string(before.total), std::to_string(after.total)}});
}

std::vector<fs::path> sorted_files(const std::string& root, const std::string& suffix) {
    std::vector<fs::path> out;
    if (!fs::exists(root)) return out;
    for (const auto& entry : fs::recursive_directory_iterator(root)) {
        if (entry.is_regular_file() && entry.path().string().ends_with(suffix)) {
            out.push_back(entry.path());
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

int cmd_clean(const CleanArgs& args) {
    LoadResult loaded = load_corpus(args.input, args.delimiter);
    for (auto& record : loaded.records) record = clean_record(std::move(record));
    write_corpus(loaded.records, args.output);
    const std::string report_path =
        args.report.empty() ? args.output + ".report.json" : args.report;
    write_json_file(report_path, loaded.report.to_json());
    std::cout << "clean: kept " << loaded.report.rows_kept << "/" << loaded.report.rows_total
              << " rows (" << loaded.report.rows_skipped << " skipped) -> " << args.output << '\n';
    return 0;
}

int cmd_augment(const AugmentArgs& args) {
    ExperimentManifest manifest = ExperimentManifest::load(args.manifest_path);
    if (!args.output_dir.empty()) manifest.output_dir = args.output_dir;
    if (!manifest.augmentation) {
        throw ConfigError("manifest has no augmentation config (baseline manifests cannot be augmented)");
    }
    if (manifest.output_dir.empty()) throw ConfigError("manifest needs an output_dir");
    const std::uint64_t seed = args.seed.value_or(manifest.seeds.front());

    LoadResult loaded = load_corpus(manifest.train_path, manifest.delimiter);
    AugmentedTrainingSet augmented = augment_training_set(manifest, loaded.records, seed);

    fs::create_directories(manifest.output_dir);
    write_corpus(augmented.records, manifest.output_dir + "/augmented_train.csv");
    write_json_file(manifest.output_dir + "/plan.json", augmented.plan.to_json());
    manifest.save(manifest.output_dir + "/manifest.json");

    print_class_stats("class support for " + to_string(manifest.category),
                      class_support_stats(augmented.before),
                      class_support_stats(augmented.after));
    std::cout << "augment: " << augmented.plan.total_copies() << " synthetic records over "
              << augmented.plan.classes.size() << " minority classes -> "
              << manifest.output_dir << "/augmented_train.csv\n";
    return 0;
}

namespace {

ExperimentManifest manifest_with_overrides(const TrainArgs& args) {
    ExperimentManifest manifest = ExperimentManifest::load(args.manifest_path);
    if (!args.field.empty()) {
        if (args.field != "title" && args.field != "text") {
            throw ConfigError("--field must be title or text");
        }
        manifest.field = args.field;
    }
    if (!args.category.empty()) manifest.category = category_from_string(args.category);
    if (!args.technique.empty()) {
        if (args.technique == "none") {
            manifest.augmentation.reset();
        } else {
            if (!manifest.augmentation) manifest.augmentation.emplace();
            manifest.augmentation->technique = technique_from_string(args.technique);
        }
    }
    return manifest;
}

}  // namespace

int cmd_train(const TrainArgs& args) {
    ExperimentManifest manifest = manifest_with_overrides(args);
    if (manifest.output_dir.empty()) throw ConfigError("manifest needs an output_dir");
    if (args.seed) manifest.seeds = {*args.seed};
    LoadResult loaded = load_corpus(manifest.train_path, manifest.delimiter);

    fs::create_directories(manifest.output_dir);
    manifest.save(manifest.output_dir + "/manifest.json");

    for (std::uint64_t seed : manifest.seeds) {
        std::vector<IncidentRecord> records = loaded.records;
        std::optional<AugmentationPlan> plan;
        if (manifest.augmentation) {
            AugmentedTrainingSet augmented = augment_training_set(manifest, loaded.records, seed);
            records = std::move(augmented.records);
            plan = std::move(augmented.plan);
        }

        std::vector<std::string> docs;
        docs.reserve(records.size());
        for (const auto& r : records) docs.push_back(manifest.field_of(r));
        const std::vector<std::string> labels = gold_labels(records, manifest.category);

        TfidfModel tfidf = TfidfModel::fit(docs, manifest.features);
        SparseMatrix X = tfidf.transform(docs);

        nlohmann::json clf_json = manifest.classifier;
        clf_json["seed"] = seed;
        ClassifierConfig clf_config = ClassifierConfig::from_json(clf_json);
        std::unique_ptr<Classifier> model = train_classifier(clf_config, X, labels);

        const std::string dir = seed_dir(manifest, seed);
        fs::create_directories(dir);
        tfidf.save(dir + "/tfidf.json");
        model->save(dir + "/model.json");
        if (plan) write_json_file(dir + "/plan.json", plan->to_json());
        std::cout << "train: seed " << seed << ", " << records.size() << " records, "
                  << tfidf.terms().size() << " features, " << model->labels().size()
                  << " classes -> " << dir << '\n';
    }
    return 0;
}

int cmd_predict(const PredictArgs& args) {
    ExperimentManifest manifest = ExperimentManifest::load(args.manifest_path);
    const std::string input_path =
        args.input.empty() ? manifest.split_path(args.split) : args.input;
    const std::string tag =
        args.input.empty() ? args.split : fs::path(args.input).stem().string();
    LoadResult loaded = load_corpus(input_path, manifest.delimiter);

    std::vector<std::string> docs;
    docs.reserve(loaded.records.size());
    for (const auto& r : loaded.records) docs.push_back(manifest.field_of(r));

    for (std::uint64_t seed : selected_seeds(manifest, args.seed)) {
        const std::string dir = seed_dir(manifest, seed);
        TfidfModel tfidf = TfidfModel::load(dir + "/tfidf.json");
        std::unique_ptr<Classifier> model = Classifier::load(dir + "/model.json");
        SparseMatrix X = tfidf.transform(docs);
        std::vector<std::string> predictions = model->predict(X);

        Table out;
        out.header = {"id", "predicted"};
        for (std::size_t i = 0; i < loaded.records.size(); ++i) {
            out.rows.push_back({loaded.records[i].id, predictions[i]});
        }
        const std::string path = dir + "/predictions_" + tag + ".csv";
        write_delimited(out, path);
        std::cout << "predict: seed " << seed << ", " << predictions.size() << " rows -> " << path
                  << '\n';
    }
    return 0;
}

int cmd_score(const ScoreArgs& args) {
    if (args.gold.empty()) throw ConfigError("score needs --gold");
    LoadResult gold = load_corpus(args.gold, args.delimiter);

    if (!args.category.empty()) {
        const Category category = category_from_string(args.category);
        if (args.pred.empty()) throw ConfigError("single-category scoring needs --pred");
        const auto predictions = read_single_predictions(args.pred, args.delimiter);
        const std::vector<std::string> truth = gold_labels(gold.records, category);
        const std::vector<std::string> pred = align_by_id(gold.records, predictions, "category");
        const double f1 = f1_macro(truth, pred);
        const auto per_class = per_class_metrics(truth, pred);

        nlohmann::json j{{"mode", "category"},
                         {"category", to_string(category)},
                         {"f1_macro", f1},
                         {"n_samples", truth.size()}};
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& m : per_class) {
            rows.push_back({{"label", m.label},
                            {"precision", m.precision},
                            {"recall", m.recall},
                            {"f1", m.f1},
                            {"support", m.support}});
        }
        j["per_class"] = rows;
        if (!args.output.empty()) write_json_file(args.output, j);
        print_table({"class", "precision", "recall", "f1", "support"}, metrics_rows(per_class));
        std::cout << "f1_macro(" << to_string(category) << ") = " << fixed(f1) << '\n';
        return 0;
    }

    if (args.level != "coarse" && args.level != "fine") {
        throw ConfigError("score needs --level coarse|fine (or --category for one category)");
    }
    const Category hazard_cat =
        args.level == "coarse" ? Category::HazardCategory : Category::Hazard;
    const Category product_cat =
        args.level == "coarse" ? Category::ProductCategory : Category::Product;

    PairedPredictions paired = read_paired_predictions(args);
    const std::vector<std::string> ht = gold_labels(gold.records, hazard_cat);
    const std::vector<std::string> pt = gold_labels(gold.records, product_cat);
    const std::vector<std::string> hp = align_by_id(gold.records, paired.hazard, "hazard");
    const std::vector<std::string> pp = align_by_id(gold.records, paired.product, "product");

    ScoreReport report = task_score(ht, pt, hp, pp);
    nlohmann::json j = report.to_json();
    j["mode"] = "task";
    j["level"] = args.level;
    if (!args.output.empty()) write_json_file(args.output, j);

    print_table({"metric", "value"},
                {{"f1_hazard", fixed(report.f1_hazard)},
                 {"f1_product_on_correct_hazard", fixed(report.f1_product_on_correct_hazard)},
                 {"combined", fixed(report.combined)},
                 {"n_samples", std::to_string(report.n_samples)},
                 {"n_correct_hazard", std::to_string(report.n_correct_hazard)}});
    return 0;
}

int cmd_tune(const TuneArgs& args) {
    if (args.external_configs > 0) {
        if (args.output_dir.empty()) throw ConfigError("external config generation needs --output-dir");
        fs::create_directories(args.output_dir);
        SearchSpace space = SearchSpace::external_model();
        RandomSampler sampler;
        Rng rng(args.seed.value_or(2025));
        for (int i = 0; i < args.external_configs; ++i) {
            nlohmann::json config = sampler.sample(space, {}, rng);
            config["learning_rate"] = 5.0e-5;
            config["max_token_length"] = 128;
            write_json_file(args.output_dir + "/ext_config_" + std::to_string(i) + ".json", config);
        }
        std::cout << "tune: wrote " << args.external_configs << " external model configs -> "
                  << args.output_dir << '\n';
        return 0;
    }

    ExperimentManifest manifest = ExperimentManifest::load(args.manifest_path);
    const std::uint64_t seed = args.seed.value_or(manifest.seeds.front());
    const Family family =
        family_from_string(manifest.classifier.at("family").get<std::string>());

    LoadResult train_loaded = load_corpus(manifest.train_path, manifest.delimiter);
    LoadResult dev_loaded = load_corpus(manifest.dev_path, manifest.delimiter);

    std::vector<IncidentRecord> records = train_loaded.records;
    if (manifest.augmentation) {
        records = augment_training_set(manifest, train_loaded.records, seed).records;
    }
    std::vector<std::string> train_docs;
    train_docs.reserve(records.size());
    for (const auto& r : records) train_docs.push_back(manifest.field_of(r));
    const std::vector<std::string> train_labels = gold_labels(records, manifest.category);

    std::vector<std::string> dev_docs;
    dev_docs.reserve(dev_loaded.records.size());
    for (const auto& r : dev_loaded.records) dev_docs.push_back(manifest.field_of(r));
    const std::vector<std::string> dev_labels = gold_labels(dev_loaded.records, manifest.category);

    static const std::set<std::string> tfidf_keys = {"analyzer",  "tokenizer",   "ngram_range",
                                                     "min_df",    "max_df",      "max_features",
                                                     "ngram_min", "ngram_max"};
    auto objective = [&](const nlohmann::json& trial) {
        nlohmann::json tfidf_json = manifest.features.to_json();
        nlohmann::json clf_json = manifest.classifier;
        for (const auto& [key, value] : trial.items()) {
            if (tfidf_keys.count(key)) {
                tfidf_json[key] = value;
            } else {
                clf_json[key] = value;
            }
        }
        clf_json["seed"] = seed;
        TfidfModel tfidf = TfidfModel::fit(train_docs, TfidfConfig::from_json(tfidf_json));
        std::unique_ptr<Classifier> model =
            train_classifier(ClassifierConfig::from_json(clf_json), tfidf.transform(train_docs),
                             train_labels);
        const std::vector<std::string> predictions = model->predict(tfidf.transform(dev_docs));
        return f1_macro(dev_labels, predictions);
    };

    SearchSpace space = SearchSpace::for_family(family);
    std::unique_ptr<Sampler> sampler = make_sampler(args.sampler);
    SearchResult result = run_search(space, args.n_trials, *sampler, seed, objective);

    nlohmann::json log = result.to_json();
    log["sampler"] = sampler->name();
    log["seed"] = seed;
    log["category"] = to_string(manifest.category);
    log["space"] = space.to_json();
    std::string output = args.output;
    if (output.empty()) {
        if (manifest.output_dir.empty()) throw ConfigError("tune needs --output or an output_dir");
        fs::create_directories(manifest.output_dir);
        manifest.save(manifest.output_dir + "/manifest.json");
        output = manifest.output_dir + "/trials.json";
    }
    write_json_file(output, log);

    std::cout << "tune: " << args.n_trials << " trials (" << sampler->name() << "), best trial "
              << result.best_index << " objective "
              << (result.best_index >= 0 ? fixed(result.trials[result.best_index].objective) : "n/a")
              << " -> " << output << '\n';
    return 0;
}

namespace {

// All single-category scores under a directory, grouped by category, in
// sorted path order.
std::map<std::string, std::vector<double>> collect_category_scores(const std::string& root) {
    std::map<std::string, std::vector<double>> out;
    for (const auto& path : sorted_files(root, ".json")) {
        nlohmann::json j;
        try {
            j = read_json_file(path.string());
        } catch (const std::exception&) {
            continue;
        }
        if (!j.is_object() || j.value("mode", "") != "category") continue;
        out[j.at("category").get<std::string>()].push_back(j.at("f1_macro").get<double>());
    }
    return out;
}

}  // namespace

int cmd_compare(const CompareArgs& args) {
    const auto baseline = collect_category_scores(args.baseline_dir);
    if (baseline.empty()) {
        throw ConfigError("no category score files found under " + args.baseline_dir);
    }

    nlohmann::json grid = nlohmann::json::object();
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    std::map<std::string, std::map<std::string, KruskalResult>> cells;
    for (const auto& dir : args.augmented_dirs) {
        const std::string name = fs::path(dir).filename().string();
        columns.push_back(name);
        const auto augmented = collect_category_scores(dir);
        for (const auto& [category, base_scores] : baseline) {
            auto it = augmented.find(category);
            if (it == augmented.end() || base_scores.size() < 2 || it->second.size() < 2) continue;
            cells[category][name] = kruskal_wallis_2group(base_scores, it->second);
        }
    }

    for (const auto& [category, by_name] : cells) {
        std::vector<std::string> row{category};
        for (const auto& name : columns) {
            auto it = by_name.find(name);
            row.push_back(it == by_name.end() ? "-" : fixed(it->second.p));
            if (it != by_name.end()) {
                grid[category][name] = {{"h", it->second.h}, {"p", it->second.p}};
            }
        }
        rows.push_back(std::move(row));
    }

    std::vector<std::string> header{"Category"};
    header.insert(header.end(), columns.begin(), columns.end());
    std::cout << "raw p-values, pairwise Kruskal-Wallis vs baseline\n";
    print_table(header, rows);

    if (!args.output.empty()) {
        write_json_file(args.output, nlohmann::json{{"baseline", args.baseline_dir},
                                                    {"columns", columns},
                                                    {"p_values", grid}});
    }
    return 0;
}

namespace {

struct CategoryRun {
    // seed -> (id -> prediction)
    std::map<std::string, std::map<std::string, std::string>> by_seed;
    std::set<std::string> minority_classes;
    bool have_minority = false;
};

std::map<Category, CategoryRun> scan_run_dir(const std::string& run_dir,
                                             const std::string& split) {
    std::map<Category, CategoryRun> out;
    for (const auto& manifest_path : sorted_files(run_dir, "manifest.json")) {
        ExperimentManifest manifest;
        try {
            manifest = ExperimentManifest::load(manifest_path.string());
        } catch (const std::exception&) {
            continue;
        }
        const fs::path dir = manifest_path.parent_path();
        CategoryRun& run = out[manifest.category];
        for (const auto& pred_path : sorted_files(dir.string(), "predictions_" + split + ".csv")) {
            const std::string seed_name = pred_path.parent_path().filename().string();
            run.by_seed[seed_name] = read_single_predictions(pred_path.string(), Delimiter::Auto);
        }
        for (const auto& plan_path : sorted_files(dir.string(), "plan.json")) {
            const AugmentationPlan plan = AugmentationPlan::from_json(read_json_file(plan_path.string()));
            for (const auto& cls : plan.classes) run.minority_classes.insert(cls.class_name);
            run.have_minority = true;
            break;  // plans are identical across seeds
        }
    }
    return out;
}

}  // namespace

int cmd_report(const ReportArgs& args) {
    if (args.gold.empty()) throw ConfigError("report needs --gold");
    LoadResult gold = load_corpus(args.gold, args.delimiter);

    std::optional<LoadResult> train;
    if (!args.train.empty()) train = load_corpus(args.train, args.delimiter);

    std::vector<std::vector<std::string>> rows;
    nlohmann::json runs_json = nlohmann::json::array();

    for (const auto& run_dir : args.run_dirs) {
        const std::string run_name = fs::path(run_dir).filename().string();
        auto categories = scan_run_dir(run_dir, args.split);

        nlohmann::json run_json{{"run", run_name}};
        std::vector<std::string> row{run_name};

        std::map<Category, std::map<std::string, std::vector<std::string>>> aligned;
        for (Category category : kAllCategories) {
            auto it = categories.find(category);
            if (it == categories.end() || it->second.by_seed.empty()) {
                row.push_back("-");
                continue;
            }
            double sum = 0.0;
            std::size_t n = 0;
            const std::vector<std::string> truth = gold_labels(gold.records, category);
            for (const auto& [seed_name, predictions] : it->second.by_seed) {
                const std::vector<std::string> pred =
                    align_by_id(gold.records, predictions, to_string(category));
                aligned[category][seed_name] = pred;
                sum += f1_macro(truth, pred);
                ++n;
            }
            const double mean_f1 = sum / static_cast<double>(n);
            row.push_back(fixed(mean_f1, 3));
            run_json[to_string(category)] = mean_f1;
        }

        auto subtask = [&](Category hazard_cat, Category product_cat) -> std::string {
            auto h = aligned.find(hazard_cat);
            auto p = aligned.find(product_cat);
            if (h == aligned.end() || p == aligned.end()) return "-";
            const std::vector<std::string> ht = gold_labels(gold.records, hazard_cat);
            const std::vector<std::string> pt = gold_labels(gold.records, product_cat);
            double sum = 0.0;
            std::size_t n = 0;
            for (const auto& [seed_name, hp] : h->second) {
                auto pit = p->second.find(seed_name);
                if (pit == p->second.end()) continue;
                sum += task_score(ht, pt, hp, pit->second).combined;
                ++n;
            }
            if (n == 0) return "-";
            const double mean = sum / static_cast<double>(n);
            run_json[hazard_cat == Category::HazardCategory ? "ST1" : "ST2"] = mean;
            return fixed(mean, 3);
        };
        row.push_back(subtask(Category::HazardCategory, Category::ProductCategory));
        row.push_back(subtask(Category::Hazard, Category::Product));
        rows.push_back(row);

        // Minority/majority grouping against the augmented classes (plan
        // files, or threshold presets over --train).
        nlohmann::json grouped = nlohmann::json::object();
        for (Category category : kAllCategories) {
            auto it = categories.find(category);
            if (it == categories.end() || it->second.by_seed.empty()) continue;
            std::set<std::string> minority = it->second.minority_classes;
            if (!it->second.have_minority && train) {
                const LabelSpace space = compute_label_space(train->records, category);
                const AugmentConfig preset =
                    AugmentConfig::preset(category, Technique::SR, 0);
                for (const auto& [cls, count] : space.counts) {
                    if (count < static_cast<std::size_t>(preset.threshold_tau)) {
                        minority.insert(cls);
                    }
                }
            } else if (!it->second.have_minority) {
                continue;
            }
            const auto& first_seed = *aligned.at(category).begin();
            const GroupedConfusion g =
                grouped_confusion(gold_labels(gold.records, category), first_seed.second, minority);
            grouped[to_string(category)] = g.to_json();
            std::cout << run_name << " " << to_string(category) << ": minority "
                      << g.minority_correct << "/" << g.minority_total << " correct, majority "
                      << g.majority_correct << "/" << g.majority_total << " correct\n";
        }
        if (!grouped.empty()) run_json["grouped_confusion"] = grouped;
        runs_json.push_back(std::move(run_json));
    }

    print_table({"run", "hazard-category", "product-category", "hazard", "product", "ST1", "ST2"},
                rows);
    if (!args.output.empty()) {
        write_json_file(args.output, nlohmann::json{{"split", args.split}, {"runs", runs_json}});
    }
    return 0;
}

}  // namespace foodhazard
