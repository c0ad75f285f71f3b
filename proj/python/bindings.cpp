#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>

#include "foodhazard/augment.hpp"
#include "foodhazard/corpus.hpp"
#include "foodhazard/error.hpp"
#include "foodhazard/evaluate.hpp"
#include "foodhazard/features.hpp"
#include "foodhazard/models.hpp"
#include "foodhazard/tune.hpp"

namespace py = pybind11;
using namespace foodhazard;

namespace {

nlohmann::json py_to_json(const py::handle& obj) {
    if (obj.is_none()) return nullptr;
    if (py::isinstance<py::bool_>(obj)) return obj.cast<bool>();
    if (py::isinstance<py::int_>(obj)) return obj.cast<std::int64_t>();
    if (py::isinstance<py::float_>(obj)) return obj.cast<double>();
    if (py::isinstance<py::str>(obj)) return obj.cast<std::string>();
    if (py::isinstance<py::dict>(obj)) {
        nlohmann::json out = nlohmann::json::object();
        for (const auto& item : obj.cast<py::dict>()) {
            out[py::str(item.first).cast<std::string>()] = py_to_json(item.second);
        }
        return out;
    }
    if (py::isinstance<py::list>(obj) || py::isinstance<py::tuple>(obj)) {
        nlohmann::json out = nlohmann::json::array();
        for (const auto& item : obj.cast<py::sequence>()) out.push_back(py_to_json(item));
        return out;
    }
    throw py::type_error("unsupported value for JSON conversion");
}

py::object json_to_py(const nlohmann::json& j) {
    switch (j.type()) {
        case nlohmann::json::value_t::null: return py::none();
        case nlohmann::json::value_t::boolean: return py::bool_(j.get<bool>());
        case nlohmann::json::value_t::number_integer: return py::int_(j.get<std::int64_t>());
        case nlohmann::json::value_t::number_unsigned: return py::int_(j.get<std::uint64_t>());
        case nlohmann::json::value_t::number_float: return py::float_(j.get<double>());
        case nlohmann::json::value_t::string: return py::str(j.get<std::string>());
        case nlohmann::json::value_t::array: {
            py::list out;
            for (const auto& item : j) out.append(json_to_py(item));
            return out;
        }
        case nlohmann::json::value_t::object: {
            py::dict out;
            for (const auto& [key, value] : j.items()) out[py::str(key)] = json_to_py(value);
            return out;
        }
        default: return py::none();
    }
}

TfidfConfig tfidf_config_from(const py::dict& kwargs) {
    return TfidfConfig::from_json(py_to_json(kwargs));
}

// TF-IDF + classifier behind one object, mirroring the CLI train/predict path.
class TextClassifier {
public:
    TextClassifier(const std::vector<std::string>& docs, const std::vector<std::string>& labels,
                   const py::dict& tfidf_kwargs, const py::dict& classifier_kwargs)
        : tfidf_(TfidfModel::fit(docs, tfidf_config_from(tfidf_kwargs))),
          model_(train_classifier(ClassifierConfig::from_json(py_to_json(classifier_kwargs)),
                                  tfidf_.transform(docs), labels)) {}

    std::vector<std::string> predict(const std::vector<std::string>& docs) const {
        return model_->predict(tfidf_.transform(docs));
    }

    std::vector<std::string> labels() const { return model_->labels(); }
    std::string family() const { return to_string(model_->family()); }
    py::object tfidf_json() const { return json_to_py(tfidf_.to_json()); }
    py::object model_json() const { return json_to_py(model_->to_json()); }

private:
    TfidfModel tfidf_;
    std::unique_ptr<Classifier> model_;
};

IncidentRecord record_from_dict(const py::dict& d) {
    IncidentRecord r;
    r.id = d["id"].cast<std::string>();
    if (d.contains("title")) r.title = d["title"].cast<std::string>();
    if (d.contains("text")) r.text = d["text"].cast<std::string>();
    for (Category category : kAllCategories) {
        const std::string key = to_string(category);
        if (d.contains(py::str(key))) r.label(category) = d[py::str(key)].cast<std::string>();
    }
    if (d.contains("is_synthetic")) r.is_synthetic = d["is_synthetic"].cast<bool>();
    return r;
}

py::dict record_to_dict(const IncidentRecord& r) {
    py::dict d;
    d["id"] = r.id;
    d["title"] = r.title;
    d["text"] = r.text;
    for (Category category : kAllCategories) d[py::str(to_string(category))] = r.label(category);
    d["is_synthetic"] = r.is_synthetic;
    return d;
}

std::vector<IncidentRecord> records_from(const py::list& records) {
    std::vector<IncidentRecord> out;
    out.reserve(records.size());
    for (const auto& item : records) out.push_back(record_from_dict(item.cast<py::dict>()));
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Minority-class text augmentation pipeline for food hazard classification";

    py::register_exception<Error>(m, "FoodHazardError");

    m.def("clean_text", &clean_text, py::arg("raw"),
          "Strip HTML markup and special characters, collapse whitespace.");

    m.def(
        "compute_label_space",
        [](const py::list& records, const std::string& category) {
            const LabelSpace space =
                compute_label_space(records_from(records), category_from_string(category));
            py::dict counts;
            for (const auto& [cls, count] : space.counts) counts[py::str(cls)] = count;
            return counts;
        },
        py::arg("records"), py::arg("category"));

    py::class_<SynonymDb>(m, "SynonymDb")
        .def_static("load", &SynonymDb::load, py::arg("path"))
        .def_static(
            "from_dict",
            [](const py::dict& entries) {
                std::map<std::string, std::vector<std::string>> map;
                for (const auto& item : entries) {
                    map[py::str(item.first).cast<std::string>()] =
                        item.second.cast<std::vector<std::string>>();
                }
                return SynonymDb::from_entries(std::move(map));
            },
            py::arg("entries"))
        .def("__len__", &SynonymDb::size);

    py::class_<TableInsertionProvider>(m, "TableInsertionProvider")
        .def(py::init([](const py::dict& table, const std::vector<std::string>& fallback) {
                 std::map<std::string, std::vector<std::string>> map;
                 for (const auto& item : table) {
                     map[py::str(item.first).cast<std::string>()] =
                         item.second.cast<std::vector<std::string>>();
                 }
                 return TableInsertionProvider(std::move(map), fallback);
             }),
             py::arg("table") = py::dict(), py::arg("fallback") = std::vector<std::string>{});

    m.def(
        "synonym_replace",
        [](const std::string& text, double rate, const SynonymDb& db, std::uint64_t seed) {
            return synonym_replace(text, rate, db, seed);
        },
        py::arg("text"), py::arg("rate"), py::arg("db"), py::arg("seed"));
    m.def("random_swap", &random_swap, py::arg("text"), py::arg("n_swaps"), py::arg("seed"));
    m.def(
        "contextual_insert",
        [](const std::string& text, double rate, const TableInsertionProvider& provider,
           int top_k, std::uint64_t seed) {
            return contextual_insert(text, rate, provider, top_k, seed);
        },
        py::arg("text"), py::arg("rate"), py::arg("provider"), py::arg("top_k") = 5,
        py::arg("seed") = 2025);

    m.def(
        "build_plan",
        [](const py::list& records, const std::string& category, int threshold_tau,
           int total_samples) {
            const auto train = records_from(records);
            AugmentConfig config;
            config.category = category_from_string(category);
            config.threshold_tau = threshold_tau;
            config.total_samples = total_samples;
            const LabelSpace space = compute_label_space(train, config.category);
            return json_to_py(build_plan(config, space, train).to_json());
        },
        py::arg("records"), py::arg("category"), py::arg("threshold_tau"),
        py::arg("total_samples"));

    m.def(
        "augment_records",
        [](const py::list& records, const std::string& category, const std::string& technique,
           int threshold_tau, int total_samples, std::uint64_t seed, double rate,
           const SynonymDb* db, const TableInsertionProvider* inserter) {
            const auto train = records_from(records);
            AugmentConfig config;
            config.category = category_from_string(category);
            config.technique = technique_from_string(technique);
            config.threshold_tau = threshold_tau;
            config.total_samples = total_samples;
            config.seed = seed;
            config.rate = rate;
            AugmenterProvider provider;
            provider.synonyms = db;
            provider.inserter = inserter;
            const LabelSpace space = compute_label_space(train, config.category);
            const AugmentationPlan plan = build_plan(config, space, train);
            py::list out;
            for (const auto& r : apply_plan(plan, config, train, provider)) {
                out.append(record_to_dict(r));
            }
            return out;
        },
        py::arg("records"), py::arg("category"), py::arg("technique"), py::arg("threshold_tau"),
        py::arg("total_samples"), py::arg("seed") = 2025, py::arg("rate") = 0.1,
        py::arg("db") = nullptr, py::arg("inserter") = nullptr);

    py::class_<TfidfModel>(m, "TfidfModel")
        .def_static(
            "fit",
            [](const std::vector<std::string>& docs, const py::kwargs& kwargs) {
                return TfidfModel::fit(docs, tfidf_config_from(kwargs));
            },
            py::arg("docs"))
        .def_property_readonly("vocabulary", &TfidfModel::terms)
        .def_property_readonly("idf", [](const TfidfModel& m) { return m.idf(); })
        .def("idf_of", &TfidfModel::idf_of, py::arg("term"))
        .def(
            "transform",
            [](const TfidfModel& model, const std::vector<std::string>& docs) {
                const SparseMatrix m = model.transform(docs);
                py::list triplets;
                for (std::size_t r = 0; r < m.rows; ++r) {
                    for (std::size_t i = m.row_begin(r); i < m.row_end(r); ++i) {
                        triplets.append(py::make_tuple(r, m.col[i], m.val[i]));
                    }
                }
                return py::make_tuple(m.rows, m.cols, triplets);
            },
            py::arg("docs"), "Returns (n_rows, n_cols, [(row, col, value), ...]).")
        .def("to_dict", [](const TfidfModel& m) { return json_to_py(m.to_json()); });

    py::class_<TextClassifier>(m, "TextClassifier")
        .def(py::init<const std::vector<std::string>&, const std::vector<std::string>&,
                      const py::dict&, const py::dict&>(),
             py::arg("docs"), py::arg("labels"), py::arg("tfidf") = py::dict(),
             py::arg("classifier") = py::dict())
        .def("predict", &TextClassifier::predict, py::arg("docs"))
        .def_property_readonly("labels", &TextClassifier::labels)
        .def_property_readonly("family", &TextClassifier::family)
        .def("tfidf_dict", &TextClassifier::tfidf_json)
        .def("model_dict", &TextClassifier::model_json);

    m.def(
        "f1_macro",
        [](const std::vector<std::string>& gold, const std::vector<std::string>& pred) {
            return f1_macro(gold, pred);
        },
        py::arg("gold"), py::arg("pred"));

    m.def(
        "task_score",
        [](const std::vector<std::string>& ht, const std::vector<std::string>& pt,
           const std::vector<std::string>& hp, const std::vector<std::string>& pp) {
            return json_to_py(task_score(ht, pt, hp, pp).to_json());
        },
        py::arg("hazard_true"), py::arg("product_true"), py::arg("hazard_pred"),
        py::arg("product_pred"));

    m.def(
        "grouped_confusion",
        [](const std::vector<std::string>& gold, const std::vector<std::string>& pred,
           const std::vector<std::string>& minority) {
            return json_to_py(
                grouped_confusion(gold, pred, std::set<std::string>(minority.begin(), minority.end()))
                    .to_json());
        },
        py::arg("gold"), py::arg("pred"), py::arg("minority_classes"));

    m.def(
        "kruskal_wallis_2group",
        [](const std::vector<double>& a, const std::vector<double>& b) {
            const KruskalResult r = kruskal_wallis_2group(a, b);
            return py::make_tuple(r.h, r.p);
        },
        py::arg("a"), py::arg("b"));

    m.def(
        "run_search",
        [](const py::dict& space, int n_trials, const std::string& sampler, std::uint64_t seed,
           const std::function<double(py::object)>& objective) {
            const SearchSpace parsed = SearchSpace::from_json(py_to_json(space));
            auto sampler_impl = make_sampler(sampler);
            const SearchResult result =
                run_search(parsed, n_trials, *sampler_impl, seed,
                           [&](const nlohmann::json& config) { return objective(json_to_py(config)); });
            return json_to_py(result.to_json());
        },
        py::arg("space"), py::arg("n_trials"), py::arg("sampler"), py::arg("seed"),
        py::arg("objective"));

    m.attr("CATEGORIES") = py::make_tuple("hazard-category", "product-category", "hazard", "product");
    m.attr("__version__") = "0.1.0";
}
