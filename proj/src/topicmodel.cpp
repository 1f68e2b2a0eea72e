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

#include "newsrep/topicmodel.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>

#include "json.hpp"

namespace newsrep {

std::size_t Corpus::token_count() const {
  std::size_t n = 0;
  for (const auto& d : documents) n += d.tokens.size();
  return n;
}

Corpus build_corpus(std::span<const Dataset* const> datasets, int min_count) {
  if (min_count < 1) throw UsageError("min_count must be at least 1");
  struct Raw {
    std::string item_id;
    std::vector<std::string> users;
  };
  std::vector<Raw> raw;
  std::set<std::string, std::less<>> seen;
  std::map<std::string, std::size_t, std::less<>> occurrences;
  for (const Dataset* ds : datasets) {
    const auto& g = ds->graph;
    std::vector<std::size_t> slot(g.item_count(), SIZE_MAX);
    for (ItemIndex i = 0; i < g.item_count(); ++i) {
      const auto& id = g.item(i).item_id;
      if (seen.insert(id).second) {
        slot[i] = raw.size();
        raw.push_back({id, {}});
      }
    }
    for (const auto& e : g.edges()) {
      if (slot[e.item] == SIZE_MAX) continue;
      const auto& uid = g.user(e.user).user_id;
      raw[slot[e.item]].users.push_back(uid);
      ++occurrences[uid];
    }
  }

  Corpus c;
  c.min_count = min_count;
  for (const auto& [u, n] : occurrences) {
    if (n >= static_cast<std::size_t>(min_count)) {
      c.index.emplace(u, static_cast<std::uint32_t>(c.vocabulary.size()));
      c.vocabulary.push_back(u);
    }
  }
  for (auto& r : raw) {
    Document d{r.item_id, {}};
    for (const auto& u : r.users) {
      auto it = c.index.find(u);
      if (it != c.index.end()) d.tokens.push_back(it->second);
    }
    if (d.tokens.empty())
      c.dropped_items.push_back(std::move(r.item_id));
    else
      c.documents.push_back(std::move(d));
  }
  if (c.documents.empty()) throw DataError("topic corpus is empty after min_count filtering");
  return c;
}

std::vector<std::vector<std::uint32_t>> document_bags(const Dataset& ds, const Corpus& corpus) {
  std::vector<std::vector<std::uint32_t>> bags(ds.graph.item_count());
  for (const auto& e : ds.graph.edges()) {
    auto it = corpus.index.find(ds.graph.user(e.user).user_id);
    if (it != corpus.index.end()) bags[e.item].push_back(it->second);
  }
  return bags;
}

namespace {

void check_config(const LdaConfig& cfg) {
  if (cfg.topics < 2) throw UsageError("number of topics must be at least 2");
  if (cfg.eta <= 0) throw UsageError("eta must be positive");
  if (cfg.gibbs_iters < 0) throw UsageError("gibbs_iters must be non-negative");
}

int draw(std::mt19937_64& rng, std::vector<double>& cumulative) {
  const double u = std::uniform_real_distribution<double>(0.0, cumulative.back())(rng);
  auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
  if (it == cumulative.end()) --it;
  return static_cast<int>(it - cumulative.begin());
}

}  // namespace

GibbsSampler::GibbsSampler(const Corpus& corpus, const LdaConfig& cfg)
    : corpus_(corpus), cfg_(cfg), alpha_(cfg.resolved_alpha()), vocab_(corpus.vocabulary.size()), rng_(cfg.seed) {
  check_config(cfg);
  if (corpus.documents.empty()) throw DataError("topic corpus is empty");
  if (static_cast<std::size_t>(cfg.topics) > vocab_)
    throw DataError("number of topics (" + std::to_string(cfg.topics) + ") exceeds vocabulary size (" +
                    std::to_string(vocab_) + ")");
  const auto K = static_cast<std::size_t>(cfg.topics);
  doc_topic_.assign(corpus.documents.size() * K, 0);
  topic_word_.assign(K * vocab_, 0);
  topic_total_.assign(K, 0);
  weights_.resize(K);
  std::uniform_int_distribution<int> pick(0, cfg.topics - 1);
  assignment_.resize(corpus.documents.size());
  for (std::size_t d = 0; d < corpus.documents.size(); ++d) {
    const auto& toks = corpus.documents[d].tokens;
    assignment_[d].resize(toks.size());
    for (std::size_t t = 0; t < toks.size(); ++t) {
      const int k = pick(rng_);
      assignment_[d][t] = k;
      ++doc_topic_[d * K + k];
      ++topic_word_[k * vocab_ + toks[t]];
      ++topic_total_[k];
    }
  }
}

void GibbsSampler::sweep() {
  const auto K = static_cast<std::size_t>(cfg_.topics);
  const double v_eta = static_cast<double>(vocab_) * cfg_.eta;
  for (std::size_t d = 0; d < corpus_.documents.size(); ++d) {
    const auto& toks = corpus_.documents[d].tokens;
    std::int64_t* nd = &doc_topic_[d * K];
    for (std::size_t t = 0; t < toks.size(); ++t) {
      const std::uint32_t w = toks[t];
      int k = assignment_[d][t];
      --nd[k];
      --topic_word_[k * vocab_ + w];
      --topic_total_[k];
      double acc = 0.0;
      for (std::size_t j = 0; j < K; ++j) {
        acc += (static_cast<double>(nd[j]) + alpha_) * (static_cast<double>(topic_word_[j * vocab_ + w]) + cfg_.eta) /
               (static_cast<double>(topic_total_[j]) + v_eta);
        weights_[j] = acc;
      }
      k = draw(rng_, weights_);
      assignment_[d][t] = k;
      ++nd[k];
      ++topic_word_[k * vocab_ + w];
      ++topic_total_[k];
    }
  }
  ++sweeps_;
}

std::size_t GibbsSampler::assigned_tokens() const {
  return static_cast<std::size_t>(std::accumulate(topic_total_.begin(), topic_total_.end(), std::int64_t{0}));
}

std::size_t GibbsSampler::document_topic_total() const {
  return static_cast<std::size_t>(std::accumulate(doc_topic_.begin(), doc_topic_.end(), std::int64_t{0}));
}

TopicModel GibbsSampler::model() const {
  TopicModel m;
  m.topics = cfg_.topics;
  m.alpha = alpha_;
  m.eta = cfg_.eta;
  m.gibbs_iters = sweeps_;
  m.seed = cfg_.seed;
  m.vocabulary = corpus_.vocabulary;
  m.topic_word.resize(topic_word_.size());
  for (std::size_t k = 0; k < static_cast<std::size_t>(cfg_.topics); ++k) {
    double sum = 0.0;
    for (std::size_t w = 0; w < vocab_; ++w) {
      const double v = static_cast<double>(topic_word_[k * vocab_ + w]) + cfg_.eta;
      m.topic_word[k * vocab_ + w] = v;
      sum += v;
    }
    for (std::size_t w = 0; w < vocab_; ++w) m.topic_word[k * vocab_ + w] /= sum;
  }
  return m;
}

TopicModel fit_lda(const Corpus& corpus, const LdaConfig& cfg,
                   const std::function<void(const GibbsSampler&)>& after_sweep) {
  GibbsSampler s(corpus, cfg);
  for (int i = 0; i < cfg.gibbs_iters; ++i) {
    s.sweep();
    if (after_sweep) after_sweep(s);
  }
  return s.model();
}

TopicVector infer_topics(const TopicModel& model, std::span<const std::uint32_t> bag, std::uint64_t seed, int iters,
                         int burn_in) {
  const auto K = static_cast<std::size_t>(model.topics);
  std::vector<std::uint32_t> toks;
  for (auto w : bag)
    if (w < model.vocab_size()) toks.push_back(w);
  if (toks.empty()) return TopicVector(K, 1.0 / static_cast<double>(K));
  if (iters <= burn_in) throw UsageError("inference needs more iterations than burn-in sweeps");

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, model.topics - 1);
  std::vector<int> z(toks.size());
  std::vector<double> nd(K, 0.0), acc_counts(K, 0.0), cumulative(K);
  for (std::size_t t = 0; t < toks.size(); ++t) {
    z[t] = pick(rng);
    nd[z[t]] += 1.0;
  }
  for (int it = 0; it < iters; ++it) {
    for (std::size_t t = 0; t < toks.size(); ++t) {
      nd[z[t]] -= 1.0;
      double acc = 0.0;
      for (std::size_t k = 0; k < K; ++k) {
        acc += (nd[k] + model.alpha) * model.phi(static_cast<int>(k), toks[t]);
        cumulative[k] = acc;
      }
      z[t] = draw(rng, cumulative);
      nd[z[t]] += 1.0;
    }
    if (it >= burn_in)
      for (std::size_t k = 0; k < K; ++k) acc_counts[k] += nd[k];
  }
  const double samples = iters - burn_in;
  TopicVector theta(K);
  double sum = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    theta[k] = acc_counts[k] / samples + model.alpha;
    sum += theta[k];
  }
  for (auto& v : theta) v /= sum;
  return theta;
}

void save_topic_model(const TopicModel& model, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  nlohmann::json h = {{"topics", model.topics},
                      {"alpha", model.alpha},
                      {"eta", model.eta},
                      {"gibbs_iters", model.gibbs_iters},
                      {"seed", model.seed},
                      {"vocabulary", model.vocabulary},
                      {"topic_word_file", "topic_word.f64"}};
  std::ofstream(dir / "lda.json") << h.dump(2) << '\n';
  write_f64(dir / "topic_word.f64", model.topic_word);
}

TopicModel load_topic_model(const std::filesystem::path& dir) {
  std::ifstream in(dir / "lda.json");
  if (!in) throw IoError("cannot read " + (dir / "lda.json").string());
  TopicModel m;
  try {
    const auto h = nlohmann::json::parse(in);
    m.topics = h.at("topics").get<int>();
    m.alpha = h.at("alpha").get<double>();
    m.eta = h.at("eta").get<double>();
    m.gibbs_iters = h.at("gibbs_iters").get<int>();
    m.seed = h.at("seed").get<std::uint64_t>();
    m.vocabulary = h.at("vocabulary").get<std::vector<std::string>>();
    m.topic_word = read_f64(dir / h.at("topic_word_file").get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed lda.json: ") + e.what());
  }
  if (m.topic_word.size() != static_cast<std::size_t>(m.topics) * m.vocab_size())
    throw DataError("topic_word size does not match topics x vocabulary");
  return m;
}

// ---------------------------------------------------------------------------

NNModel init_nn(std::size_t inputs, const NNHyper& hyper) {
  if (inputs == 0) throw UsageError("network needs at least one input");
  if (hyper.hidden < 1) throw UsageError("hidden layer needs at least one unit");
  NNModel m;
  m.inputs = inputs;
  m.hidden = static_cast<std::size_t>(hyper.hidden);
  m.hyper = hyper;
  std::mt19937_64 rng(hyper.seed);
  std::normal_distribution<double> he(0.0, std::sqrt(2.0 / static_cast<double>(inputs)));
  std::normal_distribution<double> out(0.0, std::sqrt(1.0 / static_cast<double>(m.hidden)));
  m.w1.resize(m.hidden * inputs);
  for (auto& v : m.w1) v = he(rng);
  m.b1.assign(m.hidden, 0.0);
  m.w2.resize(m.hidden);
  for (auto& v : m.w2) v = out(rng);
  return m;
}

double nn_logit(const NNModel& m, std::span<const double> x) {
  double z = m.b2;
  for (std::size_t h = 0; h < m.hidden; ++h) {
    double a = m.b1[h];
    const double* row = &m.w1[h * m.inputs];
    for (std::size_t i = 0; i < m.inputs; ++i) a += row[i] * x[i];
    if (a > 0) z += m.w2[h] * a;
  }
  return z;
}

namespace {

double sigmoid(double z) { return z >= 0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z)); }

// log(1 + exp(-y z)) with y in {-1, +1}
double logistic_loss(double y, double z) {
  const double m = -y * z;
  return m > 0 ? m + std::log1p(std::exp(-m)) : std::log1p(std::exp(m));
}

void zero_like(const NNModel& m, NNGradient& g) {
  g.w1.assign(m.w1.size(), 0.0);
  g.b1.assign(m.b1.size(), 0.0);
  g.w2.assign(m.w2.size(), 0.0);
  g.b2 = 0.0;
}

// Accumulates weight * dloss/dparams for one example, returns weighted loss.
double accumulate(const NNModel& m, std::span<const double> x, Label label, double weight, NNGradient* g,
                  std::vector<double>& act) {
  act.resize(m.hidden);
  double z = m.b2;
  for (std::size_t h = 0; h < m.hidden; ++h) {
    double a = m.b1[h];
    const double* row = &m.w1[h * m.inputs];
    for (std::size_t i = 0; i < m.inputs; ++i) a += row[i] * x[i];
    act[h] = a > 0 ? a : 0.0;
    z += m.w2[h] * act[h];
  }
  const double y = label == Label::hoax ? 1.0 : -1.0;
  if (g) {
    const double dz = weight * (sigmoid(z) - (label == Label::hoax ? 1.0 : 0.0));
    g->b2 += dz;
    for (std::size_t h = 0; h < m.hidden; ++h) {
      g->w2[h] += dz * act[h];
      if (act[h] <= 0) continue;
      const double da = dz * m.w2[h];
      g->b1[h] += da;
      double* row = &g->w1[h * m.inputs];
      for (std::size_t i = 0; i < m.inputs; ++i) row[i] += da * x[i];
    }
  }
  return weight * logistic_loss(y, z);
}

void scale(NNGradient& g, double s) {
  for (auto& v : g.w1) v *= s;
  for (auto& v : g.b1) v *= s;
  for (auto& v : g.w2) v *= s;
  g.b2 *= s;
}

struct Adam {
  double lr = 1e-3, b1 = 0.9, b2 = 0.999, eps = 1e-8;
  long t = 0;
  NNGradient m, v;

  void step_vec(std::vector<double>& p, const std::vector<double>& g, std::vector<double>& mm, std::vector<double>& vv,
                double c1, double c2) const {
    for (std::size_t i = 0; i < p.size(); ++i) {
      mm[i] = b1 * mm[i] + (1 - b1) * g[i];
      vv[i] = b2 * vv[i] + (1 - b2) * g[i] * g[i];
      p[i] -= lr * (mm[i] / c1) / (std::sqrt(vv[i] / c2) + eps);
    }
  }

  void step(NNModel& model, const NNGradient& g) {
    ++t;
    const double c1 = 1 - std::pow(b1, static_cast<double>(t));
    const double c2 = 1 - std::pow(b2, static_cast<double>(t));
    step_vec(model.w1, g.w1, m.w1, v.w1, c1, c2);
    step_vec(model.b1, g.b1, m.b1, v.b1, c1, c2);
    step_vec(model.w2, g.w2, m.w2, v.w2, c1, c2);
    m.b2 = b1 * m.b2 + (1 - b1) * g.b2;
    v.b2 = b2 * v.b2 + (1 - b2) * g.b2 * g.b2;
    model.b2 -= lr * (m.b2 / c1) / (std::sqrt(v.b2 / c2) + eps);
  }
};

}  // namespace

double nn_loss(const NNModel& model, std::span<const std::vector<double>> xs, std::span<const Label> labels,
               std::span<const double> sample_weights, NNGradient* grad) {
  if (xs.size() != labels.size() || xs.size() != sample_weights.size())
    throw UsageError("inputs, labels and weights differ in length");
  if (grad) zero_like(model, *grad);
  std::vector<double> act;
  double loss = 0.0, total = 0.0;
  for (std::size_t n = 0; n < xs.size(); ++n) {
    if (xs[n].size() != model.inputs) throw UsageError("input vector has the wrong length");
    loss += accumulate(model, xs[n], labels[n], sample_weights[n], grad, act);
    total += sample_weights[n];
  }
  if (total <= 0) return 0.0;
  if (grad) scale(*grad, 1.0 / total);
  return loss / total;
}

NNTrainResult train_nn(std::span<const std::vector<double>> xs, std::span<const Label> labels, const NNHyper& hyper) {
  if (xs.empty()) throw DataError("no training vectors");
  if (xs.size() != labels.size()) throw UsageError("vectors and labels differ in length");
  if (hyper.epochs < 0) throw UsageError("epochs must be non-negative");
  if (hyper.batch_size < 1) throw UsageError("batch size must be positive");
  const ClassWeights cw = hyper.class_weights ? *hyper.class_weights : class_weights(labels);
  std::vector<double> sw(labels.size());
  for (std::size_t n = 0; n < labels.size(); ++n) sw[n] = cw.of(labels[n]);

  NNTrainResult r{init_nn(xs.front().size(), hyper), {}};
  r.model.hyper.class_weights = cw;
  Adam opt;
  opt.lr = hyper.learning_rate;
  zero_like(r.model, opt.m);
  zero_like(r.model, opt.v);

  std::vector<std::size_t> order(xs.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(hyper.seed ^ 0x9e3779b97f4a7c15ULL);
  NNGradient g;
  std::vector<double> act;
  const auto batch = static_cast<std::size_t>(hyper.batch_size);
  for (int epoch = 0; epoch < hyper.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0; start < order.size(); start += batch) {
      const std::size_t stop = std::min(order.size(), start + batch);
      zero_like(r.model, g);
      double total = 0.0;
      for (std::size_t j = start; j < stop; ++j) {
        const std::size_t n = order[j];
        if (xs[n].size() != r.model.inputs) throw UsageError("input vector has the wrong length");
        accumulate(r.model, xs[n], labels[n], sw[n], &g, act);
        total += sw[n];
      }
      scale(g, 1.0 / total);
      opt.step(r.model, g);
    }
    const double loss = nn_loss(r.model, xs, labels, sw);
    if (!std::isfinite(loss))
      throw DataError("network loss became non-finite at epoch " + std::to_string(epoch + 1) +
                      "; lower the learning rate");
    r.loss_trace.push_back(loss);
  }
  return r;
}

Prediction predict_nn(const NNModel& model, std::span<const double> x) {
  if (x.size() != model.inputs)
    throw UsageError("topic vector has length " + std::to_string(x.size()) + ", model expects " +
                     std::to_string(model.inputs));
  Prediction p;
  p.score = sigmoid(nn_logit(model, x));
  p.label = p.score >= 0.5 ? Label::hoax : Label::nonhoax;
  return p;
}

void save_nn(const NNModel& model, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  nlohmann::json h = {{"inputs", model.inputs},
                      {"hidden", model.hidden},
                      {"epochs", model.hyper.epochs},
                      {"batch_size", model.hyper.batch_size},
                      {"learning_rate", model.hyper.learning_rate},
                      {"seed", model.hyper.seed},
                      {"params_file", "nn_params.f64"}};
  if (model.hyper.class_weights)
    h["class_weights"] = {{"hoax", model.hyper.class_weights->hoax}, {"nonhoax", model.hyper.class_weights->nonhoax}};
  std::ofstream(dir / "nn.json") << h.dump(2) << '\n';
  std::vector<double> flat;
  flat.reserve(model.w1.size() + model.b1.size() + model.w2.size() + 1);
  flat.insert(flat.end(), model.w1.begin(), model.w1.end());
  flat.insert(flat.end(), model.b1.begin(), model.b1.end());
  flat.insert(flat.end(), model.w2.begin(), model.w2.end());
  flat.push_back(model.b2);
  write_f64(dir / "nn_params.f64", flat);
}

NNModel load_nn(const std::filesystem::path& dir) {
  std::ifstream in(dir / "nn.json");
  if (!in) throw IoError("cannot read " + (dir / "nn.json").string());
  NNModel m;
  std::vector<double> flat;
  try {
    const auto h = nlohmann::json::parse(in);
    m.inputs = h.at("inputs").get<std::size_t>();
    m.hidden = h.at("hidden").get<std::size_t>();
    m.hyper.hidden = static_cast<int>(m.hidden);
    m.hyper.epochs = h.at("epochs").get<int>();
    m.hyper.batch_size = h.at("batch_size").get<int>();
    m.hyper.learning_rate = h.at("learning_rate").get<double>();
    m.hyper.seed = h.at("seed").get<std::uint64_t>();
    if (h.contains("class_weights"))
      m.hyper.class_weights =
          ClassWeights{h["class_weights"].at("hoax").get<double>(), h["class_weights"].at("nonhoax").get<double>()};
    flat = read_f64(dir / h.at("params_file").get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed nn.json: ") + e.what());
  }
  const std::size_t expect = m.hidden * m.inputs + 2 * m.hidden + 1;
  if (flat.size() != expect) throw DataError("nn_params.f64 has the wrong number of values");
  auto it = flat.begin();
  m.w1.assign(it, it + static_cast<std::ptrdiff_t>(m.hidden * m.inputs));
  it += static_cast<std::ptrdiff_t>(m.hidden * m.inputs);
  m.b1.assign(it, it + static_cast<std::ptrdiff_t>(m.hidden));
  it += static_cast<std::ptrdiff_t>(m.hidden);
  m.w2.assign(it, it + static_cast<std::ptrdiff_t>(m.hidden));
  m.b2 = flat.back();
  return m;
}

}  // namespace newsrep
