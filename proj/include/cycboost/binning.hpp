// Copyright 2026 The cycboost Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Discretization of raw feature columns into bin indices.
//
// Every feature owns n regular bins plus one reserved bin at index n. The
// reserved bin receives missing values and unseen categorical levels; the
// model keeps it neutral. Continuous values outside the training range are
// clamped into the first or last regular bin.

#ifndef CYCBOOST_BINNING_HPP_
#define CYCBOOST_BINNING_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "cycboost/kernels.hpp"
#include "cycboost/table.hpp"

namespace cycboost {

enum class FeatureKind { kCategorical, kContinuous, kComposed };
enum class BinStrategy { kEquidistant, kQuantile };

std::string_view ToString(FeatureKind kind);
std::string_view ToString(BinStrategy strategy);
FeatureKind ParseFeatureKind(std::string_view text);
BinStrategy ParseBinStrategy(std::string_view text);

struct FeatureSpec {
  std::string name;
  FeatureKind kind = FeatureKind::kCategorical;
  int n_bins = 100;  // continuous only
  BinStrategy strategy = BinStrategy::kEquidistant;
  std::vector<std::string> components;  // composed only

  static FeatureSpec Categorical(std::string name);
  static FeatureSpec Continuous(std::string name, int n_bins = 100,
                                BinStrategy strategy = BinStrategy::kEquidistant);
  // Named "a*b" (or "a*b*c") after its components.
  static FeatureSpec Composed(std::vector<std::string> components);

  bool operator==(const FeatureSpec&) const = default;
};

// Parses `name:kind[:n_bins[:strategy]]` or a composed `a*b[*c]`.
// kind is cat|categorical|cont|continuous. Throws SchemaError.
FeatureSpec ParseFeatureSpec(std::string_view text);
std::string FormatFeatureSpec(const FeatureSpec& spec);

// Checks names are unique, n_bins >= 1, and composed features have 2-3
// components that name earlier base features. Throws SchemaError.
void ValidateFeatureSpecs(const std::vector<FeatureSpec>& specs);

class BinDefinition {
 public:
  BinDefinition() = default;

  static BinDefinition Categorical(std::vector<std::string> levels);
  // Edges must be nondecreasing with at least two entries; {v, v} is the
  // single-bin definition of a constant column.
  static BinDefinition Continuous(std::vector<double> edges);
  static BinDefinition Composed(std::vector<std::string> component_names,
                                std::vector<BinDefinition> components);

  FeatureKind kind() const { return kind_; }
  std::size_t num_regular_bins() const { return num_regular_; }
  // Regular bins plus the reserved bin.
  std::size_t num_bins() const { return num_regular_ + 1; }
  BinIndex reserved_index() const { return static_cast<BinIndex>(num_regular_); }

  const std::vector<std::string>& levels() const { return levels_; }
  const std::vector<double>& edges() const { return edges_; }
  const std::vector<std::string>& component_names() const { return component_names_; }
  const std::vector<BinDefinition>& components() const { return components_; }

  // Base features only.
  BinIndex BinOf(double value) const;
  BinIndex BinOf(std::string_view value) const;

  std::string Label(BinIndex bin) const;
  // Midpoint of a continuous bin.
  double Center(BinIndex bin) const;
  // Component indices of a composed bin (reserved maps to all-reserved).
  std::vector<BinIndex> Decompose(BinIndex bin) const;

 private:
  FeatureKind kind_ = FeatureKind::kCategorical;
  std::size_t num_regular_ = 0;
  std::vector<std::string> levels_;
  std::unordered_map<std::string, BinIndex> level_index_;
  std::vector<double> edges_;
  std::vector<std::string> component_names_;
  std::vector<BinDefinition> components_;
};

// Base (categorical or continuous) features only. Throws FitError on an
// empty column or one with no non-missing values.
BinDefinition FitBinning(const Column& values, const FeatureSpec& spec);

// Total over raw values; base features only.
std::vector<BinIndex> ApplyBinning(const BinDefinition& definition,
                                   const Column& values);

// Row-major composition: index = i1*n2 + i2 (and i1*n2*n3 + i2*n3 + i3).
// A component at its reserved index (>= its count) yields the composed
// reserved index prod(counts). Throws ShapeError on length mismatch.
std::vector<BinIndex> ComposeBins(
    std::span<const std::vector<BinIndex>> component_bins,
    std::span<const std::size_t> component_counts);

// Bins a feature of any kind against the columns of a table; composed
// features read their component columns. Throws SchemaError.
std::vector<BinIndex> BinFeature(const BinDefinition& definition,
                                 const std::string& column_name,
                                 const Table& table);

}  // namespace cycboost

#endif  // CYCBOOST_BINNING_HPP_
