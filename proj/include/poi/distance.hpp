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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "poi/error.hpp"

namespace poi {

inline constexpr double kMinNorm = 1e-12;

// 1 - <u,v> / (|u| |v|), accumulated in double and clamped to [0, 2].
//
// The denominator is sqrt(|u|^2 |v|^2) rather than |u| * |v| so that a
// vector compared with itself gives exactly 0: sqrt(x*x) == x in IEEE
// arithmetic, whereas sqrt(x) * sqrt(x) may round away from x.
template <typename T>
double cosine_distance(std::span<const T> u, std::span<const T> v) {
  if (u.size() != v.size()) {
    throw Error(ErrorCode::DimMismatch,
                "cosine_distance on vectors of length " +
                    std::to_string(u.size()) + " and " + std::to_string(v.size()));
  }
  double dot = 0.0, uu = 0.0, vv = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    const double a = u[k], b = v[k];
    dot += a * b;
    uu += a * a;
    vv += b * b;
  }
  if (std::sqrt(uu) < kMinNorm || std::sqrt(vv) < kMinNorm) {
    throw Error(ErrorCode::ZeroVector, "cosine distance of a zero vector");
  }
  const double d = 1.0 - dot / std::sqrt(uu * vv);
  return std::clamp(d, 0.0, 2.0);
}

inline double cosine_distance(const std::vector<float>& u,
                              const std::vector<float>& v) {
  return cosine_distance(std::span<const float>(u), std::span<const float>(v));
}

inline double cosine_distance(const std::vector<double>& u,
                              const std::vector<double>& v) {
  return cosine_distance(std::span<const double>(u), std::span<const double>(v));
}

struct NearestReference {
  double distance = 0.0;
  std::size_t index = 0;
};

// Exact scan; ties go to the lowest index.
template <typename T>
NearestReference phoneme_min_distance(std::span<const T> query,
                                      std::span<const std::vector<T>> entry) {
  if (entry.empty()) {
    throw Error(ErrorCode::EmptyEntry, "profile entry has no reference vectors");
  }
  NearestReference best{cosine_distance(query, std::span<const T>(entry[0])), 0};
  for (std::size_t i = 1; i < entry.size(); ++i) {
    const double d = cosine_distance(query, std::span<const T>(entry[i]));
    if (d < best.distance) best = {d, i};
  }
  return best;
}

inline NearestReference phoneme_min_distance(
    const std::vector<float>& query, const std::vector<std::vector<float>>& entry) {
  return phoneme_min_distance(std::span<const float>(query),
                              std::span<const std::vector<float>>(entry));
}

}  // namespace poi
