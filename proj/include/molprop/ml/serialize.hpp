#pragma once

#include <fstream>
#include <stdexcept>
#include <string>
#include <variant>

#include <json.hpp>

#include "molprop/ml/ensemble.hpp"
#include "molprop/ml/linear.hpp"

namespace molprop::ml {

// Versioned JSON model format, shared by the CLI.
//
//   { "format": "molprop-model", "version": 1, "kind": <kind>, ... }
//
// kinds: "ols" | "ridge" | "lasso" carry { intercept, coefficients[],
// features[], lambda, converged }; "gradient_boosting" | "random_forest"
// carry { base_prediction, learning_rate, features[], trees[] } where each
// tree is a flat node-array object { feature[], threshold[], left[],
// right[], value[] } and feature -1 marks a leaf.

inline constexpr int kModelFormatVersion = 1;

inline nlohmann::json to_json(const LinearModel& m) {
  nlohmann::json j;
  j["format"] = "molprop-model";
  j["version"] = kModelFormatVersion;
  j["kind"] = m.regularization == Regularization::none
                  ? "ols"
                  : (m.regularization == Regularization::ridge ? "ridge" : "lasso");
  j["intercept"] = m.intercept;
  j["coefficients"] = m.coefficients;
  j["features"] = m.feature_names;
  j["lambda"] = m.lambda;
  j["converged"] = m.converged;
  return j;
}

inline nlohmann::json to_json(const TreeEnsemble& e) {
  nlohmann::json j;
  j["format"] = "molprop-model";
  j["version"] = kModelFormatVersion;
  j["kind"] = e.kind == EnsembleKind::gradient_boosting ? "gradient_boosting" : "random_forest";
  j["base_prediction"] = e.base_prediction;
  j["learning_rate"] = e.learning_rate;
  j["features"] = e.feature_names;
  nlohmann::json trees = nlohmann::json::array();
  for (const auto& t : e.trees) {
    nlohmann::json tj;
    std::vector<int> feature, left, right;
    std::vector<double> threshold, value;
    for (const auto& nd : t.nodes) {
      feature.push_back(nd.feature);
      threshold.push_back(nd.threshold);
      left.push_back(nd.left);
      right.push_back(nd.right);
      value.push_back(nd.value);
    }
    tj["feature"] = feature;
    tj["threshold"] = threshold;
    tj["left"] = left;
    tj["right"] = right;
    tj["value"] = value;
    trees.push_back(std::move(tj));
  }
  j["trees"] = std::move(trees);
  return j;
}

using Model = std::variant<LinearModel, TreeEnsemble>;

inline Model model_from_json(const nlohmann::json& j) {
  if (j.value("format", "") != "molprop-model")
    throw std::runtime_error("model file: missing molprop-model format tag");
  if (j.value("version", 0) != kModelFormatVersion)
    throw std::runtime_error("model file: unsupported version");
  const std::string kind = j.at("kind");
  if (kind == "ols" || kind == "ridge" || kind == "lasso") {
    LinearModel m;
    m.intercept = j.at("intercept");
    m.coefficients = j.at("coefficients").get<std::vector<double>>();
    m.feature_names = j.at("features").get<std::vector<std::string>>();
    m.lambda = j.value("lambda", 0.0);
    m.converged = j.value("converged", true);
    m.regularization = kind == "ols" ? Regularization::none
                                     : (kind == "ridge" ? Regularization::ridge : Regularization::lasso);
    return m;
  }
  if (kind == "gradient_boosting" || kind == "random_forest") {
    TreeEnsemble e;
    e.kind = kind == "gradient_boosting" ? EnsembleKind::gradient_boosting
                                         : EnsembleKind::random_forest;
    e.base_prediction = j.at("base_prediction");
    e.learning_rate = j.at("learning_rate");
    e.feature_names = j.at("features").get<std::vector<std::string>>();
    for (const auto& tj : j.at("trees")) {
      RegressionTree t;
      const auto feature = tj.at("feature").get<std::vector<int>>();
      const auto threshold = tj.at("threshold").get<std::vector<double>>();
      const auto left = tj.at("left").get<std::vector<int>>();
      const auto right = tj.at("right").get<std::vector<int>>();
      const auto value = tj.at("value").get<std::vector<double>>();
      for (std::size_t i = 0; i < feature.size(); ++i)
        t.nodes.push_back(
            RegressionTree::Node{feature[i], threshold[i], left[i], right[i], value[i]});
      e.trees.push_back(std::move(t));
    }
    return e;
  }
  throw std::runtime_error("model file: unknown kind '" + kind + "'");
}

template <typename ModelType>
void save_model(const ModelType& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write model file: " + path);
  out << to_json(m).dump(2) << '\n';
}

inline Model load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read model file: " + path);
  nlohmann::json j;
  in >> j;
  return model_from_json(j);
}

inline std::vector<double> predict(const Model& m, const FeatureMatrix& X) {
  if (std::holds_alternative<LinearModel>(m)) return predict(std::get<LinearModel>(m), X);
  return predict(std::get<TreeEnsemble>(m), X);
}

}  // namespace molprop::ml
