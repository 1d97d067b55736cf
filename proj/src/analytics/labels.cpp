// Copyright 2026 The DSR Workbench Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dsr/analytics/labels.hpp"

#include <algorithm>
#include <map>

#include "dsr/core/tokenizer.hpp"
#include "dsr/core/utf8.hpp"
#include "dsr/util/error.hpp"

namespace dsr::analytics {

void AnalyticsConfig::validate() const {
  if (!(sigma > 0.0 && sigma < 1.0)) throw ValidationError("sigma must lie in (0, 1)");
  if (min_target_count == 0 || top_k_targets == 0 || top_k_pairs == 0) {
    throw ValidationError("analytics counts must be positive");
  }
}

std::string_view to_string(RegardLabel label) noexcept {
  switch (label) {
    case RegardLabel::Opposed: return "Opposed";
    case RegardLabel::Advocated: return "Advocated";
    case RegardLabel::Victimized: return "Victimized";
    case RegardLabel::Aided: return "Aided";
    case RegardLabel::Harmful: return "Harmful";
    case RegardLabel::Helpful: return "Helpful";
  }
  return "?";
}

RegardLabel parse_label(std::string_view s) {
  const std::string lower = utf8::ascii_lower(s);
  for (RegardLabel l : kAllLabels) {
    if (utf8::ascii_lower(to_string(l)) == lower) return l;
  }
  throw ValidationError("unknown regard label '" + std::string(s) + "'");
}

Dimension dimension_of(RegardLabel label) noexcept {
  return static_cast<Dimension>(static_cast<unsigned>(label) / 2);
}

std::vector<RegardLabel> LabelSet::labels() const {
  std::vector<RegardLabel> out;
  for (RegardLabel l : kAllLabels) {
    if (contains(l)) out.push_back(l);
  }
  return out;
}

std::string to_string(LabelSet set) {
  std::string out = "{";
  for (RegardLabel l : set.labels()) {
    if (out.size() > 1) out += ", ";
    out += to_string(l);
  }
  return out + "}";
}

LabelSet threshold_labels(const RegardVector& regard, double sigma) {
  if (!(sigma > 0.0 && sigma < 1.0)) throw ValidationError("sigma must lie in (0, 1)");
  LabelSet out;
  for (Dimension d : kAllDimensions) {
    if (!regard.applicable(d)) continue;
    const auto negative = static_cast<RegardLabel>(2 * static_cast<unsigned>(d));
    const auto positive = static_cast<RegardLabel>(2 * static_cast<unsigned>(d) + 1);
    if (regard[d] <= -sigma) out.insert(negative);
    if (regard[d] >= sigma) out.insert(positive);
  }
  return out;
}

CategoryLexicon::CategoryLexicon(std::vector<Category> categories)
    : categories_(std::move(categories)) {
  std::map<std::string, std::string> owner;
  std::set<std::string> names;
  for (const auto& c : categories_) {
    if (c.name.empty()) throw ValidationError("lexicon category with an empty name");
    if (!names.insert(c.name).second) {
      throw ValidationError("lexicon category '" + c.name + "' appears twice");
    }
    for (const auto& lemma : c.lemmas) {
      if (lemma.empty() || utf8::ascii_lower(lemma) != lemma) {
        throw ValidationError("lexicon lemma '" + lemma + "' must be nonempty lowercase");
      }
      auto [it, fresh] = owner.emplace(lemma, c.name);
      if (!fresh) {
        throw ValidationError("lemma '" + lemma + "' is in both '" + it->second + "' and '" +
                              c.name + "'");
      }
    }
  }
}

CategoryLexicon CategoryLexicon::defaults() {
  return CategoryLexicon({
      {"1st-Person", "me/us",
       {"i", "me", "my", "mine", "myself", "ourself", "ourselves", "our", "ours", "we", "us"}},
      {"2nd-Person", "you", {"you", "your", "yours", "yourself", "yourselves", "u", "ur"}},
      {"3rd-Person-Female", "her",
       {"she", "her", "hers", "herself", "female", "woman", "girl", "lady"}},
      {"3rd-Person-Male", "him", {"he", "him", "his", "himself", "man", "boy", "guy", "male"}},
      {"3rd-Person-Misc", "them",
       {"they", "them", "their", "theirs", "themselves", "themself", "those"}},
  });
}

CategoryLexicon CategoryLexicon::from_json(const jsonl::OrderedJson& j) {
  if (!j.is_object()) throw ValidationError("lexicon must be a JSON object");
  std::vector<Category> categories;
  for (const auto& [key, lemmas] : j.items()) {
    Category c;
    const auto open = key.find(" (");
    if (open != std::string::npos && key.back() == ')') {
      c.name = key.substr(0, open);
      c.display = key.substr(open + 2, key.size() - open - 3);
    } else {
      c.name = key;
      c.display = key;
    }
    if (!lemmas.is_array()) throw ValidationError("lexicon entry '" + key + "' must be an array");
    for (const auto& l : lemmas) {
      if (!l.is_string()) throw ValidationError("lexicon entry '" + key + "' has a non-string lemma");
      c.lemmas.insert(utf8::ascii_lower(l.get<std::string>()));
    }
    categories.push_back(std::move(c));
  }
  return CategoryLexicon(std::move(categories));
}

CategoryLexicon CategoryLexicon::load(const std::filesystem::path& path) {
  try {
    return from_json(jsonl::OrderedJson::parse(jsonl::read_file(path)));
  } catch (const jsonl::OrderedJson::exception& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

std::optional<std::size_t> CategoryLexicon::find(std::string_view name) const {
  for (std::size_t i = 0; i < categories_.size(); ++i) {
    if (categories_[i].name == name || categories_[i].display == name) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> CategoryLexicon::categorize(std::string_view surface) const {
  const std::u32string scalars = utf8::decode(surface);
  std::size_t first = 0;
  std::size_t last = scalars.size();
  auto strip = [](char32_t c) { return is_space(c) || is_punct(c); };
  while (first < last && strip(scalars[first])) ++first;
  while (last > first && strip(scalars[last - 1])) --last;
  if (first == last) return std::nullopt;
  for (std::size_t i = first; i < last; ++i) {
    if (is_space(scalars[i])) return std::nullopt;
  }
  const std::string key = utf8::ascii_lower(utf8::encode(scalars.substr(first, last - first)));
  for (std::size_t i = 0; i < categories_.size(); ++i) {
    if (categories_[i].lemmas.count(key)) return i;
  }
  return std::nullopt;
}

}  // namespace dsr::analytics
