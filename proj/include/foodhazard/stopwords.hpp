#pragma once

#include <string_view>
#include <unordered_set>

namespace foodhazard {

const std::unordered_set<std::string_view>& english_stopwords();
bool is_stopword(std::string_view token);

}  // namespace foodhazard
