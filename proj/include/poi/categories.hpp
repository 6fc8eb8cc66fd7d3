// Copyright 2026 The poi-phoneme Authors.
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

#pragma once

#include <array>
#include <istream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "poi/error.hpp"
#include "poi/paf.hpp"

namespace poi {

// Articulatory groups of the English IPA inventory. `All` matches every
// label, including labels that belong to no group.
enum class CategoryName {
  Vowels,
  Diphthongs,
  Plosives,
  Fricatives,
  Affricates,
  Approximants,
  Nasals,
  All,
};

inline constexpr std::array<CategoryName, 7> kPartitionCategories = {
    CategoryName::Vowels,     CategoryName::Diphthongs, CategoryName::Plosives,
    CategoryName::Fricatives, CategoryName::Affricates, CategoryName::Approximants,
    CategoryName::Nasals,
};

inline constexpr std::array<CategoryName, 8> kAllCategories = {
    CategoryName::All,        CategoryName::Vowels,     CategoryName::Diphthongs,
    CategoryName::Plosives,   CategoryName::Fricatives, CategoryName::Affricates,
    CategoryName::Approximants, CategoryName::Nasals,
};

inline constexpr std::string_view category_name(CategoryName c) {
  switch (c) {
    case CategoryName::Vowels: return "Vowels";
    case CategoryName::Diphthongs: return "Diphthongs";
    case CategoryName::Plosives: return "Plosives";
    case CategoryName::Fricatives: return "Fricatives";
    case CategoryName::Affricates: return "Affricates";
    case CategoryName::Approximants: return "Approximants";
    case CategoryName::Nasals: return "Nasals";
    case CategoryName::All: return "All";
  }
  return "?";
}

inline CategoryName parse_category(std::string_view name) {
  for (CategoryName c : kAllCategories) {
    if (category_name(c) == name) return c;
  }
  throw Error(ErrorCode::UnknownCategory, "unknown phoneme category '" +
                                              std::string(name) + "'");
}

struct PhonemeCategory {
  CategoryName name = CategoryName::All;
  std::set<std::string> members;  // ignored for All

  bool contains(std::string_view phoneme) const {
    return name == CategoryName::All || members.count(std::string(phoneme)) > 0;
  }
};

class CategoryTable {
 public:
  // The 40-phoneme English table (11 vowels, 5 diphthongs, 6 plosives,
  // 9 fricatives, 2 affricates, 4 approximants, 3 nasals).
  static CategoryTable builtin() {
    CategoryTable t;
    t.set(CategoryName::Vowels,
          {"i", "æ", "ɑ", "ɪ", "ʌ", "u", "ɔ", "ə", "ɜr", "ɛ", "ʊ"});
    t.set(CategoryName::Diphthongs, {"aɪ", "oʊ", "ɔɪ", "aʊ", "eɪ"});
    t.set(CategoryName::Plosives, {"k", "p", "t", "b", "d", "ɡ"});
    t.set(CategoryName::Fricatives, {"ʃ", "s", "z", "θ", "ð", "f", "v", "ʒ", "h"});
    t.set(CategoryName::Affricates, {"tʃ", "dʒ"});
    t.set(CategoryName::Approximants, {"l", "j", "w", "r"});
    t.set(CategoryName::Nasals, {"m", "n", "ŋ"});
    return t;
  }

  // Text override, one category per line:
  //   # comment
  //   Vowels: i æ ɑ ...
  // Categories not mentioned keep their built-in members.
  static CategoryTable parse(std::istream& in) {
    CategoryTable t = builtin();
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      const auto colon = line.find(':');
      if (colon == std::string::npos) {
        throw Error(ErrorCode::InvalidArgument,
                    "category file line " + std::to_string(lineno) +
                        ": expected 'Name: label label ...'");
      }
      std::string name = line.substr(0, colon);
      name.erase(0, name.find_first_not_of(" \t"));
      name.erase(name.find_last_not_of(" \t\r") + 1);
      const CategoryName c = parse_category(name);
      if (c == CategoryName::All) {
        throw Error(ErrorCode::InvalidArgument, "category 'All' cannot be redefined");
      }
      std::istringstream labels(line.substr(colon + 1));
      std::set<std::string> members;
      for (std::string l; labels >> l;) members.insert(l);
      t.categories_[static_cast<std::size_t>(c)].members = std::move(members);
    }
    return t;
  }

  const PhonemeCategory& get(CategoryName c) const {
    return categories_[static_cast<std::size_t>(c)];
  }

  // Union of the seven groups, in table order.
  PhonemeInventory inventory() const {
    PhonemeInventory inv;
    for (CategoryName c : kPartitionCategories) {
      for (const auto& m : get(c).members) inv.labels.push_back(m);
    }
    return inv;
  }

  // The groups that contain `phoneme`; empty for unknown labels.
  std::vector<CategoryName> categories_of(std::string_view phoneme) const {
    std::vector<CategoryName> out;
    for (CategoryName c : kPartitionCategories) {
      if (get(c).contains(phoneme)) out.push_back(c);
    }
    return out;
  }

 private:
  CategoryTable() {
    for (CategoryName c : kAllCategories) {
      categories_[static_cast<std::size_t>(c)].name = c;
    }
  }

  void set(CategoryName c, std::initializer_list<const char*> labels) {
    auto& members = categories_[static_cast<std::size_t>(c)].members;
    for (const char* l : labels) members.insert(l);
  }

  std::array<PhonemeCategory, 8> categories_;
};

}  // namespace poi
