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

#include "cycboost/archive.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cycboost/error.hpp"

namespace cycboost {

using nlohmann::json;

namespace {

json SmootherToJson(const SmootherConfig& s) {
  return {{"continuous_method", std::string(ToString(s.continuous_method))},
          {"max_degree", s.max_degree},
          {"categorical_method", std::string(ToString(s.categorical_method))},
          {"two_dim_method", s.two_dim_method ? json(std::string(ToString(*s.two_dim_method)))
                                              : json(nullptr)},
          {"svd_rank", s.svd_rank}};
}

SmootherConfig SmootherFromJson(const json& j) {
  SmootherConfig s;
  s.continuous_method = ParseContinuousSmoother(j.at("continuous_method").get<std::string>());
  s.max_degree = j.at("max_degree").get<int>();
  s.categorical_method =
      ParseCategoricalSmoother(j.at("categorical_method").get<std::string>());
  if (!j.at("two_dim_method").is_null()) {
    s.two_dim_method = ParseTwoDimSmoother(j.at("two_dim_method").get<std::string>());
  }
  s.svd_rank = j.at("svd_rank").get<int>();
  return s;
}

json ConfigJson(const TrainingConfig& c) {
  json features = json::array();
  for (const FeatureSpec& f : c.features) features.push_back(FormatFeatureSpec(f));
  json per_feature = json::object();
  for (const auto& [name, s] : c.feature_smoothing) per_feature[name] = SmootherToJson(s);
  return {{"mode", std::string(ToString(c.mode))},
          {"features", std::move(features)},
          {"max_cycles", c.max_cycles},
          {"learning_rate_start", c.learning_rate_start},
          {"learning_rate_shape", std::string(ToString(c.learning_rate_shape))},
          {"stop_metric", std::string(ToString(c.stop_metric))},
          {"stop_rel_tol", c.stop_rel_tol},
          {"priors",
           {{"gamma_alpha", c.priors.gamma_alpha_prior},
            {"gamma_beta", c.priors.gamma_beta_prior},
            {"beta_alpha", c.priors.beta_alpha_prior},
            {"beta_beta", c.priors.beta_beta_prior},
            {"estimator", std::string(ToString(c.priors.estimator))}}},
          {"smoothing", SmootherToJson(c.smoothing)},
          {"feature_smoothing", std::move(per_feature)},
          {"boost_classification_weights", c.boost_classification_weights}};
}

TrainingConfig ConfigFrom(const json& j) {
  TrainingConfig c;
  c.mode = ParseMode(j.at("mode").get<std::string>());
  for (const auto& f : j.at("features")) c.features.push_back(ParseFeatureSpec(f.get<std::string>()));
  c.max_cycles = j.at("max_cycles").get<int>();
  c.learning_rate_start = j.at("learning_rate_start").get<double>();
  c.learning_rate_shape = ParseLearningRateShape(j.at("learning_rate_shape").get<std::string>());
  c.stop_metric = ParseStopMetric(j.at("stop_metric").get<std::string>());
  c.stop_rel_tol = j.at("stop_rel_tol").get<double>();
  const json& p = j.at("priors");
  c.priors.gamma_alpha_prior = p.at("gamma_alpha").get<double>();
  c.priors.gamma_beta_prior = p.at("gamma_beta").get<double>();
  c.priors.beta_alpha_prior = p.at("beta_alpha").get<double>();
  c.priors.beta_beta_prior = p.at("beta_beta").get<double>();
  c.priors.estimator = ParseEstimator(p.at("estimator").get<std::string>());
  c.smoothing = SmootherFromJson(j.at("smoothing"));
  for (const auto& [name, s] : j.at("feature_smoothing").items()) {
    c.feature_smoothing[name] = SmootherFromJson(s);
  }
  c.boost_classification_weights = j.at("boost_classification_weights").get<bool>();
  return c;
}

json BinningToJson(const BinDefinition& b) {
  json out = {{"kind", std::string(ToString(b.kind()))}};
  switch (b.kind()) {
    case FeatureKind::kCategorical:
      out["levels"] = b.levels();
      break;
    case FeatureKind::kContinuous:
      out["edges"] = b.edges();
      break;
    case FeatureKind::kComposed: {
      json parts = json::array();
      for (const BinDefinition& c : b.components()) parts.push_back(BinningToJson(c));
      out["component_names"] = b.component_names();
      out["components"] = std::move(parts);
      break;
    }
  }
  return out;
}

BinDefinition BinningFromJson(const json& j) {
  switch (ParseFeatureKind(j.at("kind").get<std::string>())) {
    case FeatureKind::kCategorical:
      return BinDefinition::Categorical(j.at("levels").get<std::vector<std::string>>());
    case FeatureKind::kContinuous:
      return BinDefinition::Continuous(j.at("edges").get<std::vector<double>>());
    case FeatureKind::kComposed: {
      std::vector<BinDefinition> parts;
      for (const json& c : j.at("components")) parts.push_back(BinningFromJson(c));
      return BinDefinition::Composed(j.at("component_names").get<std::vector<std::string>>(),
                                     std::move(parts));
    }
  }
  throw FormatError("unknown binning kind");
}

template <typename Fn>
auto Guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed archive: ") + e.what());
  } catch (const SchemaError& e) {
    throw FormatError(std::string("malformed archive: ") + e.what());
  }
}

}  // namespace

std::string ConfigToJson(const TrainingConfig& config) { return ConfigJson(config).dump(); }

TrainingConfig ConfigFromJson(const std::string& text) {
  return Guarded([&] { return ConfigFrom(json::parse(text)); });
}

std::string SaveModelToString(const Model& model) {
  json features = json::array();
  for (const FeatureModel& f : model.features) {
    const FactorTable& t = f.table;
    features.push_back({{"spec", FormatFeatureSpec(f.spec)},
                        {"binning", BinningToJson(f.binning)},
                        {"table",
                         {{"link", t.link},
                          {"response", t.response},
                          {"sigma", t.sigma},
                          {"count", t.count},
                          {"labels", t.labels}}}});
  }
  const json out = {{"format_version", model.format_version},
                    {"mode", std::string(ToString(model.mode))},
                    {"mu", model.mu},
                    {"features", std::move(features)},
                    {"history",
                     {{"metric", model.history.metric},
                      {"eta", model.history.eta},
                      {"best_cycle", model.history.best_cycle},
                      {"cycles_run", model.history.cycles_run}}},
                    {"config", ConfigJson(model.config)}};
  return out.dump(1);
}

Model LoadModelFromString(const std::string& text) {
  return Guarded([&] {
    const json j = json::parse(text);
    const int version = j.at("format_version").get<int>();
    if (version != Model::kFormatVersion) {
      throw FormatError("model archive has format_version " + std::to_string(version) +
                        ", this build reads version " +
                        std::to_string(Model::kFormatVersion));
    }
    Model m;
    m.format_version = version;
    m.mode = ParseMode(j.at("mode").get<std::string>());
    m.mu = j.at("mu").get<double>();
    for (const json& f : j.at("features")) {
      FeatureModel fm;
      fm.spec = ParseFeatureSpec(f.at("spec").get<std::string>());
      fm.binning = BinningFromJson(f.at("binning"));
      const json& t = f.at("table");
      fm.table.feature = fm.spec.name;
      fm.table.link = t.at("link").get<std::vector<double>>();
      fm.table.response = t.at("response").get<std::vector<double>>();
      fm.table.sigma = t.at("sigma").get<std::vector<double>>();
      fm.table.count = t.at("count").get<std::vector<std::size_t>>();
      fm.table.labels = t.at("labels").get<std::vector<std::string>>();
      const std::size_t nb = fm.binning.num_bins();
      if (fm.table.link.size() != nb || fm.table.response.size() != nb ||
          fm.table.sigma.size() != nb || fm.table.count.size() != nb ||
          fm.table.labels.size() != nb) {
        throw FormatError("factor table of '" + fm.spec.name + "' does not match its binning");
      }
      m.features.push_back(std::move(fm));
    }
    const json& h = j.at("history");
    m.history.metric = h.at("metric").get<std::vector<double>>();
    m.history.eta = h.at("eta").get<std::vector<double>>();
    m.history.best_cycle = h.at("best_cycle").get<int>();
    m.history.cycles_run = h.at("cycles_run").get<int>();
    m.config = ConfigFrom(j.at("config"));
    return m;
  });
}

void SaveModel(const Model& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << SaveModelToString(model) << '\n';
  if (!out) throw IoError("failed writing '" + path + "'");
}

Model LoadModel(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return LoadModelFromString(buffer.str());
}

}  // namespace cycboost
