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

#include "cycboost/binning.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "cycboost/error.hpp"

namespace cycboost {

std::string_view ToString(FeatureKind kind) {
  switch (kind) {
    case FeatureKind::kCategorical:
      return "categorical";
    case FeatureKind::kContinuous:
      return "continuous";
    case FeatureKind::kComposed:
      return "composed";
  }
  return "unknown";
}

std::string_view ToString(BinStrategy strategy) {
  return strategy == BinStrategy::kQuantile ? "quantile" : "equidistant";
}

FeatureKind ParseFeatureKind(std::string_view text) {
  if (text == "cat" || text == "categorical") return FeatureKind::kCategorical;
  if (text == "cont" || text == "continuous") return FeatureKind::kContinuous;
  if (text == "composed") return FeatureKind::kComposed;
  throw SchemaError("unknown feature kind '" + std::string(text) + "'");
}

BinStrategy ParseBinStrategy(std::string_view text) {
  if (text == "equidistant" || text == "eq") return BinStrategy::kEquidistant;
  if (text == "quantile" || text == "q") return BinStrategy::kQuantile;
  throw SchemaError("unknown binning strategy '" + std::string(text) + "'");
}

FeatureSpec FeatureSpec::Categorical(std::string name) {
  FeatureSpec spec;
  spec.name = std::move(name);
  spec.kind = FeatureKind::kCategorical;
  return spec;
}

FeatureSpec FeatureSpec::Continuous(std::string name, int n_bins,
                                    BinStrategy strategy) {
  FeatureSpec spec;
  spec.name = std::move(name);
  spec.kind = FeatureKind::kContinuous;
  spec.n_bins = n_bins;
  spec.strategy = strategy;
  return spec;
}

FeatureSpec FeatureSpec::Composed(std::vector<std::string> components) {
  FeatureSpec spec;
  spec.kind = FeatureKind::kComposed;
  for (std::size_t i = 0; i < components.size(); ++i) {
    if (i) spec.name += '*';
    spec.name += components[i];
  }
  spec.components = std::move(components);
  return spec;
}

namespace {

std::vector<std::string> Split(std::string_view text, char separator) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(separator, start);
    parts.emplace_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

}  // namespace

FeatureSpec ParseFeatureSpec(std::string_view text) {
  if (text.find('*') != std::string_view::npos) {
    return FeatureSpec::Composed(Split(text, '*'));
  }
  const auto parts = Split(text, ':');
  if (parts.size() < 2 || parts.size() > 4 || parts[0].empty()) {
    throw SchemaError("bad feature spec '" + std::string(text) +
                      "', expected name:kind[:n_bins[:strategy]]");
  }
  FeatureSpec spec;
  spec.name = parts[0];
  spec.kind = ParseFeatureKind(parts[1]);
  if (spec.kind == FeatureKind::kComposed) {
    throw SchemaError("composed features are written as a*b");
  }
  if (parts.size() >= 3) {
    const auto n = ParseNumber(parts[2]);
    if (!n || *n < 1 || *n != std::floor(*n)) {
      throw SchemaError("bad bin count in feature spec '" + std::string(text) + "'");
    }
    spec.n_bins = static_cast<int>(*n);
  }
  if (parts.size() == 4) spec.strategy = ParseBinStrategy(parts[3]);
  return spec;
}

std::string FormatFeatureSpec(const FeatureSpec& spec) {
  switch (spec.kind) {
    case FeatureKind::kCategorical:
      return spec.name + ":cat";
    case FeatureKind::kContinuous:
      return spec.name + ":cont:" + std::to_string(spec.n_bins) + ":" +
             std::string(ToString(spec.strategy));
    case FeatureKind::kComposed:
      return spec.name;
  }
  return spec.name;
}

void ValidateFeatureSpecs(const std::vector<FeatureSpec>& specs) {
  if (specs.empty()) throw SchemaError("at least one feature is required");
  std::set<std::string> seen;
  std::set<std::string> base;
  for (const FeatureSpec& spec : specs) {
    if (spec.name.empty()) throw SchemaError("feature with empty name");
    if (!seen.insert(spec.name).second) {
      throw SchemaError("duplicate feature '" + spec.name + "'");
    }
    if (spec.kind == FeatureKind::kComposed) {
      if (spec.components.size() < 2 || spec.components.size() > 3) {
        throw SchemaError("composed feature '" + spec.name +
                          "' needs 2 or 3 components");
      }
      for (const std::string& component : spec.components) {
        if (!base.count(component)) {
          throw SchemaError("composed feature '" + spec.name +
                            "' references undeclared base feature '" +
                            component + "'");
        }
      }
    } else {
      if (spec.kind == FeatureKind::kContinuous && spec.n_bins < 1) {
        throw SchemaError("feature '" + spec.name + "' needs n_bins >= 1");
      }
      base.insert(spec.name);
    }
  }
}

BinDefinition BinDefinition::Categorical(std::vector<std::string> levels) {
  BinDefinition d;
  d.kind_ = FeatureKind::kCategorical;
  d.num_regular_ = levels.size();
  d.levels_ = std::move(levels);
  for (std::size_t i = 0; i < d.levels_.size(); ++i) {
    d.level_index_.emplace(d.levels_[i], static_cast<BinIndex>(i));
  }
  return d;
}

BinDefinition BinDefinition::Continuous(std::vector<double> edges) {
  if (edges.size() < 2) throw FitError("continuous binning needs >= 2 edges");
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (!(edges[i] >= edges[i - 1])) {
      throw FitError("continuous bin edges must be sorted");
    }
  }
  BinDefinition d;
  d.kind_ = FeatureKind::kContinuous;
  d.num_regular_ = edges.size() - 1;
  d.edges_ = std::move(edges);
  return d;
}

BinDefinition BinDefinition::Composed(std::vector<std::string> component_names,
                                      std::vector<BinDefinition> components) {
  if (component_names.size() != components.size() || components.size() < 2) {
    throw SchemaError("composed binning needs >= 2 named components");
  }
  BinDefinition d;
  d.kind_ = FeatureKind::kComposed;
  d.num_regular_ = 1;
  for (const BinDefinition& c : components) {
    if (c.kind() == FeatureKind::kComposed) {
      throw SchemaError("composed features cannot nest");
    }
    d.num_regular_ *= c.num_regular_bins();
  }
  d.component_names_ = std::move(component_names);
  d.components_ = std::move(components);
  return d;
}

BinIndex BinDefinition::BinOf(double value) const {
  if (kind_ == FeatureKind::kCategorical) {
    if (std::isnan(value)) return reserved_index();
    return BinOf(std::string_view(FormatNumber(value)));
  }
  if (kind_ != FeatureKind::kContinuous) {
    throw SchemaError("BinOf on a composed binning");
  }
  if (std::isnan(value)) return reserved_index();
  if (num_regular_ == 1 || value < edges_[1]) return 0;
  if (value >= edges_.back()) return static_cast<BinIndex>(num_regular_ - 1);
  const auto it = std::upper_bound(edges_.begin(), edges_.end(), value);
  return static_cast<BinIndex>(it - edges_.begin() - 1);
}

BinIndex BinDefinition::BinOf(std::string_view value) const {
  if (kind_ == FeatureKind::kContinuous) {
    const auto parsed = ParseNumber(value);
    return parsed ? BinOf(*parsed) : reserved_index();
  }
  if (kind_ != FeatureKind::kCategorical) {
    throw SchemaError("BinOf on a composed binning");
  }
  if (IsMissingText(value)) return reserved_index();
  const auto it = level_index_.find(std::string(value));
  return it == level_index_.end() ? reserved_index() : it->second;
}

std::string BinDefinition::Label(BinIndex bin) const {
  if (bin >= num_regular_) return "<reserved>";
  switch (kind_) {
    case FeatureKind::kCategorical:
      return levels_[bin];
    case FeatureKind::kContinuous: {
      const bool last = bin + 1 == num_regular_;
      return "[" + FormatNumber(edges_[bin]) + ", " +
             FormatNumber(edges_[bin + 1]) + (last ? "]" : ")");
    }
    case FeatureKind::kComposed: {
      const auto parts = Decompose(bin);
      std::string label;
      for (std::size_t c = 0; c < parts.size(); ++c) {
        if (c) label += '|';
        label += components_[c].Label(parts[c]);
      }
      return label;
    }
  }
  return {};
}

double BinDefinition::Center(BinIndex bin) const {
  if (kind_ != FeatureKind::kContinuous || bin >= num_regular_) {
    throw DomainError("bin center requested for a non-continuous or reserved bin");
  }
  return 0.5 * (edges_[bin] + edges_[bin + 1]);
}

std::vector<BinIndex> BinDefinition::Decompose(BinIndex bin) const {
  std::vector<BinIndex> parts(components_.size());
  if (bin >= num_regular_) {
    for (std::size_t c = 0; c < components_.size(); ++c) {
      parts[c] = components_[c].reserved_index();
    }
    return parts;
  }
  std::size_t rest = bin;
  for (std::size_t c = components_.size(); c-- > 0;) {
    const std::size_t n = components_[c].num_regular_bins();
    parts[c] = static_cast<BinIndex>(rest % n);
    rest /= n;
  }
  return parts;
}

namespace {

std::vector<double> NonMissingValues(const Column& values) {
  std::vector<double> out;
  if (const auto* numeric = std::get_if<NumericColumn>(&values)) {
    out.reserve(numeric->size());
    for (const double v : *numeric) {
      if (!std::isnan(v)) out.push_back(v);
    }
  } else {
    for (const std::string& text : std::get<TextColumn>(values)) {
      if (const auto parsed = ParseNumber(text)) out.push_back(*parsed);
    }
  }
  return out;
}

std::vector<double> EquidistantEdges(double lo, double hi, int n_bins) {
  std::vector<double> edges(static_cast<std::size_t>(n_bins) + 1);
  const double width = (hi - lo) / n_bins;
  for (int k = 0; k < n_bins; ++k) edges[k] = lo + k * width;
  edges.back() = hi;
  return edges;
}

// Edge k sits at sorted[floor(k*n/n_bins)] so that, with left-closed bins,
// bin k holds exactly the sorted positions [k*n/n_bins, (k+1)*n/n_bins) when
// the values are distinct. Repeated edges are merged.
std::vector<double> QuantileEdges(std::vector<double> sorted, int n_bins) {
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  std::vector<double> edges;
  edges.reserve(static_cast<std::size_t>(n_bins) + 1);
  for (int k = 0; k < n_bins; ++k) {
    const std::size_t pos = static_cast<std::size_t>(k) * n / static_cast<std::size_t>(n_bins);
    edges.push_back(sorted[pos]);
  }
  edges.push_back(sorted.back());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  if (edges.size() == 1) edges.push_back(edges.front());
  return edges;
}

}  // namespace

BinDefinition FitBinning(const Column& values, const FeatureSpec& spec) {
  if (ColumnSize(values) == 0) {
    throw FitError("cannot fit binning for '" + spec.name + "' on an empty column");
  }
  switch (spec.kind) {
    case FeatureKind::kCategorical: {
      std::vector<std::string> levels;
      std::unordered_map<std::string, BinIndex> seen;
      auto visit_label = [&](const std::string& label) {
        if (seen.emplace(label, static_cast<BinIndex>(levels.size())).second) {
          levels.push_back(label);
        }
      };
      if (const auto* numeric = std::get_if<NumericColumn>(&values)) {
        for (const double v : *numeric) {
          if (!std::isnan(v)) visit_label(FormatNumber(v));
        }
      } else {
        for (const std::string& text : std::get<TextColumn>(values)) {
          if (!IsMissingText(text)) visit_label(text);
        }
      }
      if (levels.empty()) {
        throw FitError("feature '" + spec.name + "' has no non-missing values");
      }
      return BinDefinition::Categorical(std::move(levels));
    }
    case FeatureKind::kContinuous: {
      if (spec.n_bins < 1) throw FitError("feature '" + spec.name + "' needs n_bins >= 1");
      std::vector<double> finite = NonMissingValues(values);
      if (finite.empty()) {
        throw FitError("feature '" + spec.name + "' has no non-missing values");
      }
      const auto [lo, hi] = std::minmax_element(finite.begin(), finite.end());
      if (*lo == *hi) return BinDefinition::Continuous({*lo, *hi});
      if (spec.strategy == BinStrategy::kEquidistant) {
        return BinDefinition::Continuous(EquidistantEdges(*lo, *hi, spec.n_bins));
      }
      return BinDefinition::Continuous(QuantileEdges(std::move(finite), spec.n_bins));
    }
    case FeatureKind::kComposed:
      break;
  }
  throw FitError("composed feature '" + spec.name +
                 "' is binned from its components, not fitted directly");
}

std::vector<BinIndex> ApplyBinning(const BinDefinition& definition,
                                   const Column& values) {
  std::vector<BinIndex> bins(ColumnSize(values));
  if (const auto* numeric = std::get_if<NumericColumn>(&values)) {
    for (std::size_t i = 0; i < bins.size(); ++i) bins[i] = definition.BinOf((*numeric)[i]);
  } else {
    const auto& text = std::get<TextColumn>(values);
    for (std::size_t i = 0; i < bins.size(); ++i) {
      bins[i] = definition.BinOf(std::string_view(text[i]));
    }
  }
  return bins;
}

std::vector<BinIndex> ComposeBins(
    std::span<const std::vector<BinIndex>> component_bins,
    std::span<const std::size_t> component_counts) {
  if (component_bins.size() != component_counts.size() || component_bins.empty()) {
    throw ShapeError("ComposeBins: component and count lists differ");
  }
  const std::size_t rows = component_bins.front().size();
  std::size_t total = 1;
  for (std::size_t c = 0; c < component_bins.size(); ++c) {
    if (component_bins[c].size() != rows) {
      throw ShapeError("ComposeBins: component columns differ in length");
    }
    total *= component_counts[c];
  }
  std::vector<BinIndex> out(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    std::size_t index = 0;
    bool reserved = false;
    for (std::size_t c = 0; c < component_bins.size(); ++c) {
      const BinIndex b = component_bins[c][i];
      if (b >= component_counts[c]) {
        reserved = true;
        break;
      }
      index = index * component_counts[c] + b;
    }
    out[i] = static_cast<BinIndex>(reserved ? total : index);
  }
  return out;
}

std::vector<BinIndex> BinFeature(const BinDefinition& definition,
                                 const std::string& column_name,
                                 const Table& table) {
  if (definition.kind() != FeatureKind::kComposed) {
    return ApplyBinning(definition, table.GetColumn(column_name));
  }
  std::vector<std::vector<BinIndex>> parts;
  std::vector<std::size_t> counts;
  for (std::size_t c = 0; c < definition.components().size(); ++c) {
    parts.push_back(ApplyBinning(definition.components()[c],
                                 table.GetColumn(definition.component_names()[c])));
    counts.push_back(definition.components()[c].num_regular_bins());
  }
  return ComposeBins(parts, counts);
}

}  // namespace cycboost
