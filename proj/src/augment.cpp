#include "foodhazard/augment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "foodhazard/error.hpp"
#include "foodhazard/rng.hpp"

namespace foodhazard {

std::string to_string(Technique technique) {
    switch (technique) {
        case Technique::SR: return "SR";
        case Technique::RW: return "RW";
        case Technique::CW: return "CW";
    }
    return "SR";
}

Technique technique_from_string(std::string_view name) {
    if (name == "SR") return Technique::SR;
    if (name == "RW") return Technique::RW;
    if (name == "CW") return Technique::CW;
    throw ConfigError("unknown augmentation technique: " + std::string(name));
}

AugmentConfig AugmentConfig::preset(Category category, Technique technique, std::uint64_t seed) {
    AugmentConfig c;
    c.category = category;
    c.technique = technique;
    c.seed = seed;
    switch (category) {
        case Category::HazardCategory:
        case Category::ProductCategory:
            c.threshold_tau = 200;
            c.total_samples = 200;
            break;
        case Category::Hazard:
            c.threshold_tau = 100;
            c.total_samples = 100;
            break;
        case Category::Product:
            c.threshold_tau = 100;
            c.total_samples = 50;
            break;
    }
    return c;
}

std::size_t AugmentationPlan::total_copies() const {
    std::size_t n = 0;
    for (const auto& cls : classes) {
        for (const auto& item : cls.items) n += static_cast<std::size_t>(item.copies);
    }
    return n;
}

nlohmann::json AugmentationPlan::to_json() const {
    nlohmann::json cls_array = nlohmann::json::array();
    for (const auto& cls : classes) {
        nlohmann::json items = nlohmann::json::array();
        for (const auto& item : cls.items) {
            items.push_back({{"source_id", item.source_id}, {"copies", item.copies}});
        }
        cls_array.push_back({{"class", cls.class_name},
                             {"original_support", cls.original_support},
                             {"items", items}});
    }
    return nlohmann::json{{"category", to_string(category)}, {"classes", cls_array}};
}

AugmentationPlan AugmentationPlan::from_json(const nlohmann::json& j) {
    AugmentationPlan plan;
    plan.category = category_from_string(j.at("category").get<std::string>());
    for (const auto& cls_json : j.at("classes")) {
        ClassPlan cls;
        cls.class_name = cls_json.at("class").get<std::string>();
        cls.original_support = cls_json.at("original_support").get<std::size_t>();
        for (const auto& item : cls_json.at("items")) {
            cls.items.push_back(
                {item.at("source_id").get<std::string>(), item.at("copies").get<int>()});
        }
        plan.classes.push_back(std::move(cls));
    }
    return plan;
}

AugmentationPlan build_plan(const AugmentConfig& config, const LabelSpace& space,
                            const std::vector<IncidentRecord>& train) {
    if (config.threshold_tau < 1 || config.total_samples < 1) {
        throw ConfigError("augmentation requires threshold_tau >= 1 and total_samples >= 1");
    }
    AugmentationPlan plan;
    plan.category = config.category;
    for (const auto& class_name : space.classes) {
        const std::size_t support = space.counts.at(class_name);
        if (support >= static_cast<std::size_t>(config.threshold_tau)) continue;

        AugmentationPlan::ClassPlan cls;
        cls.class_name = class_name;
        cls.original_support = support;
        for (const auto& record : train) {
            if (record.label(config.category) == class_name) {
                cls.items.push_back({record.id, 0});
            }
        }
        if (cls.items.empty()) {
            throw ConfigError("label space class has no training records: " + class_name);
        }
        const int per_sample = config.total_samples / static_cast<int>(cls.items.size());
        for (auto& item : cls.items) item.copies = per_sample;
        cls.items.back().copies =
            config.total_samples - per_sample * (static_cast<int>(cls.items.size()) - 1);
        plan.classes.push_back(std::move(cls));
    }
    return plan;
}

std::vector<std::string> split_words(std::string_view text) {
    std::vector<std::string> words;
    std::string current;
    for (char c : text) {
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
            if (!current.empty()) {
                words.push_back(std::move(current));
                current.clear();
            }
        } else {
            current.push_back(c);
        }
    }
    if (!current.empty()) words.push_back(std::move(current));
    return words;
}

std::string join_words(std::span<const std::string> words) {
    std::string out;
    for (std::size_t i = 0; i < words.size(); ++i) {
        if (i > 0) out.push_back(' ');
        out += words[i];
    }
    return out;
}

namespace {

std::string lowercase_ascii(std::string_view s) {
    std::string out(s);
    for (char& c : out) {
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
    return out;
}

}  // namespace

SynonymDb SynonymDb::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open synonym database: " + path);
    std::map<std::string, std::vector<std::string>> entries;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        const std::size_t tab = line.find('\t');
        if (tab == std::string::npos) continue;
        std::string word = lowercase_ascii(std::string_view(line).substr(0, tab));
        std::vector<std::string> synonyms;
        std::string_view rest = std::string_view(line).substr(tab + 1);
        while (!rest.empty()) {
            const std::size_t comma = rest.find(',');
            std::string_view syn = rest.substr(0, comma);
            if (!syn.empty()) synonyms.emplace_back(syn);
            if (comma == std::string_view::npos) break;
            rest = rest.substr(comma + 1);
        }
        if (!word.empty() && !synonyms.empty()) entries[std::move(word)] = std::move(synonyms);
    }
    return from_entries(std::move(entries));
}

SynonymDb SynonymDb::from_entries(std::map<std::string, std::vector<std::string>> entries) {
    SynonymDb db;
    db.entries_ = std::move(entries);
    return db;
}

const std::vector<std::string>* SynonymDb::lookup(std::string_view word) const {
    auto it = entries_.find(lowercase_ascii(word));
    return it == entries_.end() ? nullptr : &it->second;
}

TableInsertionProvider::TableInsertionProvider(std::map<std::string, std::vector<std::string>> table,
                                               std::vector<std::string> fallback)
    : table_(std::move(table)), fallback_(std::move(fallback)) {}

TableInsertionProvider TableInsertionProvider::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open insertion table: " + path);
    nlohmann::json j;
    in >> j;
    std::map<std::string, std::vector<std::string>> table;
    std::vector<std::string> fallback;
    for (const auto& [key, value] : j.items()) {
        if (key == "*") {
            fallback = value.get<std::vector<std::string>>();
        } else {
            table[lowercase_ascii(key)] = value.get<std::vector<std::string>>();
        }
    }
    return TableInsertionProvider(std::move(table), std::move(fallback));
}

std::vector<std::string> TableInsertionProvider::candidates(const ContextQuery& query,
                                                            std::size_t k) const {
    const std::vector<std::string>* found = nullptr;
    if (!query.left.empty()) {
        auto it = table_.find(lowercase_ascii(query.left.back()));
        if (it != table_.end()) found = &it->second;
    }
    if (found == nullptr && !query.right.empty()) {
        auto it = table_.find(lowercase_ascii(query.right.front()));
        if (it != table_.end()) found = &it->second;
    }
    if (found == nullptr) found = &fallback_;
    std::vector<std::string> out(found->begin(), found->end());
    if (out.size() > k) out.resize(k);
    return out;
}

EmbeddingNeighborProvider EmbeddingNeighborProvider::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open embedding file: " + path);
    EmbeddingNeighborProvider provider;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream fields(line);
        std::string word;
        fields >> word;
        std::vector<float> vec;
        float v;
        while (fields >> v) vec.push_back(v);
        if (first && vec.size() == 1) {
            first = false;  // word2vec "count dim" header
            continue;
        }
        first = false;
        if (vec.empty()) continue;
        float norm = 0.0f;
        for (float x : vec) norm += x * x;
        norm = std::sqrt(norm);
        if (norm > 0.0f) {
            for (float& x : vec) x /= norm;
        }
        provider.index_.emplace(lowercase_ascii(word), provider.words_.size());
        provider.words_.push_back(std::move(word));
        provider.vectors_.push_back(std::move(vec));
    }
    if (provider.words_.empty()) throw ConfigError("embedding file has no vectors: " + path);
    return provider;
}

std::vector<std::string> EmbeddingNeighborProvider::candidates(const ContextQuery& query,
                                                               std::size_t k) const {
    std::vector<std::size_t> context;
    auto add = [&](std::span<const std::string> side) {
        for (const auto& token : side) {
            auto it = index_.find(lowercase_ascii(token));
            if (it != index_.end()) context.push_back(it->second);
        }
    };
    add(query.left);
    add(query.right);
    if (context.empty()) return {};

    const std::size_t dim = vectors_.front().size();
    std::vector<float> mean(dim, 0.0f);
    for (std::size_t idx : context) {
        for (std::size_t d = 0; d < dim; ++d) mean[d] += vectors_[idx][d];
    }

    std::vector<std::pair<float, std::size_t>> scored;
    scored.reserve(words_.size());
    for (std::size_t i = 0; i < words_.size(); ++i) {
        if (std::find(context.begin(), context.end(), i) != context.end()) continue;
        float dot = 0.0f;
        for (std::size_t d = 0; d < dim; ++d) dot += mean[d] * vectors_[i][d];
        scored.emplace_back(dot, i);
    }
    std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    std::vector<std::string> out;
    for (std::size_t i = 0; i < scored.size() && i < k; ++i) {
        out.push_back(words_[scored[i].second]);
    }
    return out;
}

FileCandidateProvider FileCandidateProvider::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open candidate file: " + path);
    nlohmann::json j;
    in >> j;
    FileCandidateProvider provider;
    for (const auto& [key, value] : j.items()) {
        provider.by_id_[key] = value.get<std::vector<std::string>>();
    }
    return provider;
}

std::vector<std::string> FileCandidateProvider::candidates(const ContextQuery& query,
                                                           std::size_t k) const {
    auto it = by_id_.find(std::string(query.source_id));
    if (it == by_id_.end()) return {};
    std::vector<std::string> out = it->second;
    if (out.size() > k) out.resize(k);
    return out;
}

namespace {

// Number of positions touched for a given rate: at least one once any token
// is eligible, never more than the eligible count.
std::size_t touched_count(double rate, std::size_t eligible) {
    if (eligible == 0 || rate <= 0.0) return 0;
    const auto raw = static_cast<std::size_t>(std::llround(rate * static_cast<double>(eligible)));
    return std::clamp<std::size_t>(raw, 1, eligible);
}

}  // namespace

std::string synonym_replace(std::string_view text, double rate, const SynonymDb& db,
                            std::uint64_t seed) {
    if (db.empty()) throw ConfigError("synonym database is empty");
    std::vector<std::string> words = split_words(text);

    std::vector<std::size_t> eligible;
    for (std::size_t i = 0; i < words.size(); ++i) {
        if (db.lookup(words[i]) != nullptr) eligible.push_back(i);
    }
    const std::size_t n_replace = touched_count(rate, eligible.size());
    if (n_replace == 0) return std::string(text);

    Rng rng(seed);
    std::vector<std::size_t> picks = rng.sample_indices(eligible.size(), n_replace);
    std::sort(picks.begin(), picks.end());

    std::vector<std::string> out;
    out.reserve(words.size());
    std::size_t pick_pos = 0;
    for (std::size_t i = 0; i < words.size(); ++i) {
        const bool replace =
            pick_pos < picks.size() && eligible[picks[pick_pos]] == i;
        if (!replace) {
            out.push_back(words[i]);
            continue;
        }
        ++pick_pos;
        const auto& synonyms = *db.lookup(words[i]);
        const std::string& chosen = synonyms[rng.index(synonyms.size())];
        for (auto& part : split_words(chosen)) out.push_back(std::move(part));
    }
    return join_words(out);
}

std::string random_swap(std::string_view text, int n_swaps, std::uint64_t seed) {
    std::vector<std::string> words = split_words(text);
    if (words.size() < 2 || n_swaps <= 0) return join_words(words);

    const std::size_t applied =
        std::min<std::size_t>(static_cast<std::size_t>(n_swaps), words.size() / 2);
    Rng rng(seed);
    for (std::size_t s = 0; s < applied; ++s) {
        const std::size_t p = rng.index(words.size() - 1);
        std::swap(words[p], words[p + 1]);
    }
    return join_words(words);
}

std::string contextual_insert(std::string_view text, double rate,
                              const InsertionProvider& provider, int top_k, std::uint64_t seed,
                              std::string_view source_id) {
    std::vector<std::string> words = split_words(text);
    const std::size_t n_insert = touched_count(rate, words.size());
    if (n_insert == 0) return join_words(words);

    Rng rng(seed);
    const auto k = static_cast<std::size_t>(std::max(1, top_k));
    for (std::size_t s = 0; s < n_insert; ++s) {
        const std::size_t gap = rng.index(words.size() + 1);
        ContextQuery query{std::span<const std::string>(words.data(), gap),
                           std::span<const std::string>(words.data() + gap, words.size() - gap),
                           source_id};
        std::vector<std::string> pool = provider.candidates(query, k);
        if (pool.empty()) continue;  // no candidates at this position
        std::string chosen = pool[rng.index(pool.size())];
        words.insert(words.begin() + static_cast<std::ptrdiff_t>(gap), std::move(chosen));
    }
    return join_words(words);
}

namespace {

std::uint64_t field_seed(const AugmentConfig& config, std::string_view source_id, int copy,
                         std::string_view field) {
    return mix64(config.seed ^ hash64(field) ^ mix64(hash64(source_id) + static_cast<std::uint64_t>(copy)));
}

std::string augment_field(const AugmentConfig& config, const AugmenterProvider& provider,
                          std::string_view value, std::uint64_t seed, std::string_view source_id) {
    switch (config.technique) {
        case Technique::SR:
            return synonym_replace(value, config.rate, *provider.synonyms, seed);
        case Technique::RW: {
            int swaps = config.n_swaps;
            if (swaps <= 0) {
                const std::size_t len = split_words(value).size();
                swaps = static_cast<int>(std::ceil(0.1 * static_cast<double>(len)));
            }
            return random_swap(value, swaps, seed);
        }
        case Technique::CW:
            return contextual_insert(value, config.rate, *provider.inserter, config.top_k, seed,
                                     source_id);
    }
    return std::string(value);
}

}  // namespace

std::vector<IncidentRecord> apply_plan(const AugmentationPlan& plan, const AugmentConfig& config,
                                       const std::vector<IncidentRecord>& train,
                                       const AugmenterProvider& provider) {
    if (config.technique == Technique::SR &&
        (provider.synonyms == nullptr || provider.synonyms->empty())) {
        throw ConfigError("SR augmentation requires a non-empty synonym database");
    }
    if (config.technique == Technique::CW && provider.inserter == nullptr) {
        throw ConfigError("CW augmentation requires an insertion provider");
    }

    std::unordered_map<std::string_view, const IncidentRecord*> by_id;
    by_id.reserve(train.size());
    for (const auto& r : train) by_id.emplace(r.id, &r);

    std::vector<IncidentRecord> synthetic;
    synthetic.reserve(plan.total_copies());
    for (const auto& cls : plan.classes) {
        for (const auto& item : cls.items) {
            auto it = by_id.find(item.source_id);
            if (it == by_id.end()) {
                throw ConfigError("plan references unknown record id: " + item.source_id);
            }
            const IncidentRecord& source = *it->second;
            for (int copy = 0; copy < item.copies; ++copy) {
                IncidentRecord rec = source;
                rec.id = source.id + "-s" + std::to_string(copy);
                rec.is_synthetic = true;
                rec.title = augment_field(config, provider, source.title,
                                          field_seed(config, source.id, copy, "title"), source.id);
                rec.text = augment_field(config, provider, source.text,
                                         field_seed(config, source.id, copy, "text"), source.id);
                synthetic.push_back(std::move(rec));
            }
        }
    }
    return synthetic;
}

nlohmann::json DistributionStats::to_json() const {
    return nlohmann::json{{"count", count}, {"mean", mean},   {"stddev", stddev},
                          {"min", min},     {"q25", q25},     {"q50", q50},
                          {"q75", q75},     {"max", max},     {"total", total}};
}

DistributionStats class_support_stats(const LabelSpace& space) {
    std::vector<double> supports;
    supports.reserve(space.classes.size());
    std::size_t total = 0;
    for (const auto& [cls, count] : space.counts) {
        supports.push_back(static_cast<double>(count));
        total += count;
    }
    std::sort(supports.begin(), supports.end());

    DistributionStats stats;
    stats.count = supports.size();
    stats.total = total;
    if (supports.empty()) return stats;

    const double n = static_cast<double>(supports.size());
    stats.mean = static_cast<double>(total) / n;
    double sq = 0.0;
    for (double v : supports) sq += (v - stats.mean) * (v - stats.mean);
    stats.stddev = supports.size() > 1 ? std::sqrt(sq / (n - 1.0)) : 0.0;
    stats.min = supports.front();
    stats.max = supports.back();

    auto percentile = [&](double q) {
        const double pos = q * (n - 1.0);
        const auto lo = static_cast<std::size_t>(std::floor(pos));
        const auto hi = static_cast<std::size_t>(std::ceil(pos));
        const double frac = pos - std::floor(pos);
        return supports[lo] + (supports[hi] - supports[lo]) * frac;
    };
    stats.q25 = percentile(0.25);
    stats.q50 = percentile(0.50);
    stats.q75 = percentile(0.75);
    return stats;
}

}  // namespace foodhazard
