// Copyright 2026 The newsrep Authors
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

#include "newsrep/lrmodel.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <numeric>
#include <set>

namespace newsrep {
namespace {

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// log(1 + exp(-m)) without overflow.
double logistic_loss(double margin) {
  return margin > 0 ? std::log1p(std::exp(-margin)) : -margin + std::log1p(std::exp(margin));
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double max_abs(std::span<const double> v) {
  double m = 0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

std::vector<std::string> sharer_ids(const ShareGraph& g, ItemIndex i) {
  std::vector<std::string> out;
  for (UserIndex u : g.item_neighbors(i)) out.push_back(g.user(u).user_id);
  return out;
}

}  // namespace

std::string to_string(FeatureMode m) {
  switch (m) {
    case FeatureMode::U: return "U";
    case FeatureMode::UT: return "UT";
    case FeatureMode::T: return "T";
  }
  return "?";
}

FeatureMode feature_mode_from_string(std::string_view s) {
  if (s == "U" || s == "u") return FeatureMode::U;
  if (s == "UT" || s == "ut") return FeatureMode::UT;
  if (s == "T" || s == "t") return FeatureMode::T;
  throw UsageError("unknown feature mode '" + std::string(s) + "'");
}

ClassWeights class_weights(std::span<const Label> labels) {
  const auto n = static_cast<double>(labels.size());
  const auto n_hoax = static_cast<double>(std::count(labels.begin(), labels.end(), Label::hoax));
  const double n_non = n - n_hoax;
  if (n_hoax == 0 || n_non == 0) throw DataError("class weights need both hoax and nonhoax examples");
  return {n / (2 * n_hoax), n / (2 * n_non)};
}

std::vector<std::string> item_words(const NewsItem& item, const AliasMap& aliases) {
  static const std::vector<std::string> kNone;
  auto it = aliases.find(item.site);
  const auto& site_aliases = it == aliases.end() ? kNone : it->second;
  auto words = tokenize(scrub_site_mentions(item.title, item.site, site_aliases));
  for (auto& w : tokenize(scrub_site_mentions(item.description, item.site, site_aliases))) words.push_back(std::move(w));
  return words;
}

FeatureSpace build_feature_space(const Dataset& train, FeatureMode mode, const AliasMap& aliases) {
  if (train.graph.item_count() == 0) throw DataError("cannot build a feature space from an empty dataset");
  FeatureSpace fs;
  fs.mode = mode;
  std::set<std::string> users, words;
  if (mode != FeatureMode::T)
    for (const UserNode& u : train.graph.users())
      if (!train.graph.user_neighbors(train.graph.user_index(u.user_id)).empty()) users.insert(u.user_id);
  if (mode != FeatureMode::U)
    for (const NewsItem& it : train.graph.items())
      for (auto& w : item_words(it, aliases)) words.insert(std::move(w));
  std::uint32_t col = 0;
  for (const auto& u : users) fs.user_index.emplace(u, col++);
  for (const auto& w : words) fs.word_index.emplace(w, col++);
  return fs;
}

SparseVector featurize(const NewsItem& item, std::span<const std::string> sharers, const FeatureSpace& fs,
                       const AliasMap& aliases) {
  SparseVector v;
  if (fs.mode != FeatureMode::T)
    for (const std::string& u : sharers)
      if (auto it = fs.user_index.find(u); it != fs.user_index.end()) v.columns.push_back(it->second);
  if (fs.mode != FeatureMode::U)
    for (const std::string& w : item_words(item, aliases))
      if (auto it = fs.word_index.find(w); it != fs.word_index.end()) v.columns.push_back(it->second);
  std::sort(v.columns.begin(), v.columns.end());
  v.columns.erase(std::unique(v.columns.begin(), v.columns.end()), v.columns.end());
  return v;
}

double logistic_objective(const LogisticProblem& p, std::span<const double> weights, double bias,
                          std::vector<double>* grad_weights, double* grad_bias) {
  double loss = 0.0;
  if (grad_weights) grad_weights->assign(p.dimension, 0.0);
  double gb = 0.0;
  for (std::size_t i = 0; i < p.rows.size(); ++i) {
    double z = bias;
    for (std::uint32_t c : p.rows[i].columns) z += weights[c];
    const double y = p.labels[i] == Label::hoax ? 1.0 : -1.0;
    const double sw = p.sample_weights[i];
    loss += sw * logistic_loss(y * z);
    if (grad_weights) {
      const double r = sw * (sigmoid(z) - (y > 0 ? 1.0 : 0.0));
      for (std::uint32_t c : p.rows[i].columns) (*grad_weights)[c] += r;
      gb += r;
    }
  }
  double sq = 0.0;
  for (std::size_t j = 0; j < p.dimension; ++j) {
    sq += weights[j] * weights[j];
    if (grad_weights) (*grad_weights)[j] += p.l2 * weights[j];
  }
  if (grad_bias) *grad_bias = gb;
  return loss + 0.5 * p.l2 * sq;
}

LogisticFit fit_logistic(const LogisticProblem& p, const LRHyper& hyper) {
  const std::size_t d = p.dimension;
  const std::size_t n = d + 1;  // bias is the last parameter
  constexpr std::size_t kMemory = 10;
  constexpr double kArmijo = 1e-4;
  constexpr double kFlatSlack = 1e-12;

  std::vector<double> theta(n, 0.0), grad(n), grad_w;
  auto evaluate = [&](const std::vector<double>& th, std::vector<double>& g) {
    double gb = 0.0;
    const double f = logistic_objective(p, std::span<const double>(th.data(), d), th[d], &grad_w, &gb);
    std::copy(grad_w.begin(), grad_w.end(), g.begin());
    g[d] = gb;
    return f;
  };

  LogisticFit fit;
  double f = evaluate(theta, grad);
  fit.loss_trace.push_back(f);
  std::deque<std::vector<double>> s_hist, y_hist;
  std::deque<double> rho_hist;
  std::vector<double> dir(n), trial(n), trial_grad(n), alpha_k(kMemory);

  if (max_abs(grad) < hyper.tolerance) fit.converged = true;
  while (!fit.converged && fit.iterations < hyper.max_iters) {
    // Two-loop recursion for dir = -H * grad.
    for (std::size_t i = 0; i < n; ++i) dir[i] = -grad[i];
    const std::size_t m = s_hist.size();
    for (std::size_t k = m; k-- > 0;) {
      alpha_k[k] = rho_hist[k] * dot(s_hist[k], dir);
      for (std::size_t i = 0; i < n; ++i) dir[i] -= alpha_k[k] * y_hist[k][i];
    }
    if (m > 0) {
      const double gamma = dot(s_hist.back(), y_hist.back()) / dot(y_hist.back(), y_hist.back());
      for (double& x : dir) x *= gamma;
    }
    for (std::size_t k = 0; k < m; ++k) {
      const double beta = rho_hist[k] * dot(y_hist[k], dir);
      for (std::size_t i = 0; i < n; ++i) dir[i] += (alpha_k[k] - beta) * s_hist[k][i];
    }
    double slope = dot(grad, dir);
    if (!(slope < 0)) {
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
      for (std::size_t i = 0; i < n; ++i) dir[i] = -grad[i];
      slope = dot(grad, dir);
    }

    double step = s_hist.empty() ? std::min(1.0, 1.0 / max_abs(grad)) : 1.0;
    double f_trial = 0;
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt) {
      for (std::size_t i = 0; i < n; ++i) trial[i] = theta[i] + step * dir[i];
      f_trial = evaluate(trial, trial_grad);
      if (!std::isfinite(f_trial)) {
        step *= 0.5;
        continue;
      }
      // Near the optimum the decrease drops below the resolution of f; fall
      // back to the approximate Armijo test on the directional derivative.
      const bool armijo = f_trial <= f + kArmijo * step * slope;
      const bool approx = f_trial <= f + kFlatSlack * std::abs(f) && dot(trial_grad, dir) <= (2 * kArmijo - 1) * slope;
      if (armijo || approx) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;

    ++fit.iterations;
    std::vector<double> s(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = trial[i] - theta[i];
      y[i] = trial_grad[i] - grad[i];
    }
    const double sy = dot(s, y);
    const double change = max_abs(s);
    if (sy > 1e-12 * dot(y, y)) {
      if (s_hist.size() == kMemory) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
      rho_hist.push_back(1.0 / sy);
      s_hist.push_back(std::move(s));
      y_hist.push_back(std::move(y));
    }
    theta.swap(trial);
    grad.swap(trial_grad);
    f = f_trial;
    fit.loss_trace.push_back(f);
    if (change < hyper.tolerance && max_abs(grad) < hyper.tolerance) fit.converged = true;
  }

  fit.weights.assign(theta.begin(), theta.begin() + static_cast<std::ptrdiff_t>(d));
  fit.bias = theta[d];
  return fit;
}

LRModel train_lr(const Dataset& train, FeatureMode mode, const LRHyper& hyper, const AliasMap& aliases) {
  LRModel model;
  model.features = build_feature_space(train, mode, aliases);
  model.hyper = hyper;
  const ClassWeights cw = class_weights(train.labels);

  std::vector<ItemIndex> order(train.graph.item_count());
  std::iota(order.begin(), order.end(), ItemIndex{0});
  std::sort(order.begin(), order.end(), [&](ItemIndex a, ItemIndex b) {
    return train.graph.item(a).item_id < train.graph.item(b).item_id;
  });

  LogisticProblem p;
  p.dimension = model.features.dimension();
  p.l2 = hyper.l2_strength;
  for (ItemIndex i : order) {
    const auto sharers = sharer_ids(train.graph, i);
    p.rows.push_back(featurize(train.graph.item(i), sharers, model.features, aliases));
    p.labels.push_back(train.labels[i]);
    p.sample_weights.push_back(cw.of(train.labels[i]));
  }
  LogisticFit fit = fit_logistic(p, hyper);
  model.weights = std::move(fit.weights);
  model.bias = fit.bias;
  model.converged = fit.converged;
  model.iterations = fit.iterations;
  model.loss_trace = std::move(fit.loss_trace);
  return model;
}

double decision_value(const LRModel& model, const SparseVector& x) {
  double z = model.bias;
  for (std::uint32_t c : x.columns) z += model.weights.at(c);
  return z;
}

Prediction predict_lr(const LRModel& model, const SparseVector& x) {
  Prediction p;
  p.score = sigmoid(decision_value(model, x));
  p.label = p.score >= 0.5 ? Label::hoax : Label::nonhoax;
  return p;
}

Prediction predict_lr(const LRModel& model, const NewsItem& item, std::span<const std::string> sharers,
                      const AliasMap& aliases) {
  return predict_lr(model, featurize(item, sharers, model.features, aliases));
}

void save_lr_model(const LRModel& model, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  nlohmann::json header = {{"mode", to_string(model.features.mode)},
                           {"dimension", model.features.dimension()},
                           {"hyper",
                            {{"l2_strength", model.hyper.l2_strength},
                             {"max_iters", model.hyper.max_iters},
                             {"tolerance", model.hyper.tolerance},
                             {"seed", model.hyper.seed}}},
                           {"converged", model.converged},
                           {"iterations", model.iterations},
                           {"bias", model.bias},
                           {"weights_file", "lr_weights.f64"},
                           {"features_file", "feature_space.tsv"}};
  std::ofstream(dir / "lr_model.json") << header.dump(2) << '\n';
  write_f64(dir / "lr_weights.f64", model.weights);
  std::ofstream fs(dir / "feature_space.tsv");
  for (const auto& [u, c] : model.features.user_index) fs << "user\t" << u << '\t' << c << '\n';
  for (const auto& [w, c] : model.features.word_index) fs << "word\t" << w << '\t' << c << '\n';
}

LRModel load_lr_model(const std::filesystem::path& dir) {
  std::ifstream in(dir / "lr_model.json");
  if (!in) throw IoError("cannot read " + (dir / "lr_model.json").string());
  LRModel model;
  try {
    const auto h = nlohmann::json::parse(in);
    model.features.mode = feature_mode_from_string(h.at("mode").get<std::string>());
    model.hyper.l2_strength = h.at("hyper").at("l2_strength").get<double>();
    model.hyper.max_iters = h.at("hyper").at("max_iters").get<int>();
    model.hyper.tolerance = h.at("hyper").at("tolerance").get<double>();
    model.hyper.seed = h.at("hyper").at("seed").get<std::uint64_t>();
    model.converged = h.at("converged").get<bool>();
    model.iterations = h.at("iterations").get<int>();
    model.bias = h.at("bias").get<double>();
    model.weights = read_f64(dir / h.at("weights_file").get<std::string>());
    std::ifstream fs(dir / h.at("features_file").get<std::string>());
    std::string kind, key;
    std::uint32_t col;
    std::string line;
    while (std::getline(fs, line)) {
      const auto t1 = line.find('\t'), t2 = line.rfind('\t');
      if (t1 == std::string::npos || t1 == t2) throw DataError("bad feature_space.tsv line: " + line);
      kind = line.substr(0, t1);
      key = line.substr(t1 + 1, t2 - t1 - 1);
      col = static_cast<std::uint32_t>(std::stoul(line.substr(t2 + 1)));
      (kind == "user" ? model.features.user_index : model.features.word_index).emplace(key, col);
    }
    if (model.weights.size() != model.features.dimension() || h.at("dimension").get<std::size_t>() != model.weights.size())
      throw DataError("LR model dimension mismatch in " + dir.string());
  } catch (const nlohmann::json::exception& e) {
    throw DataError((dir / "lr_model.json").string() + ": " + e.what());
  }
  return model;
}

}  // namespace newsrep
