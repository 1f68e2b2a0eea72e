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

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numeric>
#include <random>
#include <set>

#include "doctest.h"
#include "fixtures.hpp"
#include "newsrep/topicmodel.hpp"
#include "oracles/nn_oracle.hpp"

using namespace newsrep;
using newsrep::testing::ItemSpec;
using newsrep::testing::make_dataset;
using newsrep::testing::planted_partition;
using newsrep::testing::top_tokens;

namespace {

Corpus corpus_of(const Dataset& ds, int min_count) {
  const Dataset* one[] = {&ds};
  return build_corpus(one, min_count);
}

oracle::DenseNet to_dense(const NNModel& m) { return {m.inputs, m.hidden, m.w1, m.b1, m.w2, m.b2}; }

}  // namespace

TEST_CASE("build_corpus filters rare users and drops emptied documents") {
  auto ds = make_dataset({
      {"i1", "a.com", "", {"u1", "u2"}},
      {"i2", "a.com", "", {"u1", "u2"}},
      {"i3", "a.com", "", {"u1", "u2"}},
      {"i4", "a.com", "", {"u1", "u2"}},
      {"i5", "a.com", "", {"u1"}},
      {"i6", "a.com", "", {"u9"}},
  });
  auto c = corpus_of(ds, 5);
  CHECK(c.vocabulary == std::vector<std::string>{"u1"});  // u2 occurs 4 times
  REQUIRE(c.documents.size() == 5);
  CHECK(c.dropped_items == std::vector<std::string>{"i6"});
  CHECK(c.token_count() == 5);

  auto all = corpus_of(ds, 1);
  CHECK(all.vocabulary.size() == 3);
  CHECK(all.documents.size() == 6);
  CHECK(all.dropped_items.empty());
  CHECK(all.token_count() == ds.graph.edges().size());
}

TEST_CASE("build_corpus joins datasets and counts repeated tweets") {
  auto a = make_dataset({{"i1", "a.com", "", {"u1", "u1", "u2"}}}, "train");
  auto b = make_dataset({{"i2", "a.com", "", {"u2"}}, {"i1", "a.com", "", {"u3"}}}, "test");
  const Dataset* both[] = {&a, &b};
  auto c = build_corpus(both, 1);
  REQUIRE(c.documents.size() == 2);
  CHECK(c.documents[0].item_id == "i1");
  CHECK(c.documents[0].tokens.size() == 3);
  CHECK(c.documents[1].item_id == "i2");
  CHECK(c.vocabulary == std::vector<std::string>{"u1", "u2"});

  auto rare = make_dataset({{"i1", "a.com", "", {"u1"}}});
  CHECK_THROWS_AS(corpus_of(rare, 5), DataError);

  auto bags = document_bags(b, c);
  REQUIRE(bags.size() == 2);
  CHECK(bags[0] == std::vector<std::uint32_t>{c.index.at("u2")});
  CHECK(bags[1].empty());  // u3 is not in the vocabulary
}

TEST_CASE("planted communities separate into topics") {
  auto ds = planted_partition(7);
  auto c = corpus_of(ds, 1);
  LdaConfig cfg{.topics = 2, .alpha = 0.5, .eta = 0.01, .gibbs_iters = 100, .seed = 3};
  auto m = fit_lda(c, cfg);
  std::set<char> owners;
  for (int k = 0; k < 2; ++k) {
    auto top = top_tokens(m, k, 20);
    std::size_t a = 0;
    for (auto w : top) a += m.vocabulary[w][0] == 'a';
    const double purity = std::max(a, top.size() - a) / static_cast<double>(top.size());
    CHECK(purity >= 0.9);
    owners.insert(a * 2 > top.size() ? 'a' : 'b');
  }
  CHECK(owners.size() == 2);

  // Inference on a document of topic 0's strongest tokens.
  auto top0 = top_tokens(m, 0, 10);
  auto theta = infer_topics(m, top0, 11);
  CHECK(theta[0] > theta[1]);
  CHECK(std::accumulate(theta.begin(), theta.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("topic rows are distributions and fitting is deterministic") {
  auto ds = planted_partition(1, 40);
  auto c = corpus_of(ds, 1);
  LdaConfig cfg{.topics = 5, .gibbs_iters = 20, .seed = 42};
  auto m1 = fit_lda(c, cfg);
  auto m2 = fit_lda(c, cfg);
  CHECK(m1.topic_word == m2.topic_word);
  CHECK(m1.alpha == doctest::Approx(10.0));
  for (int k = 0; k < 5; ++k) {
    double s = 0;
    for (std::uint32_t w = 0; w < m1.vocab_size(); ++w) {
      CHECK(m1.phi(k, w) > 0);
      s += m1.phi(k, w);
    }
    CHECK(std::abs(s - 1.0) < 1e-12);
  }
  cfg.seed = 43;
  CHECK(fit_lda(c, cfg).topic_word != m1.topic_word);

  auto single = make_dataset({{"only", "a.com", "", {"u1", "u2", "u3"}}});
  auto m3 = fit_lda(corpus_of(single, 1), {.topics = 2, .gibbs_iters = 5});
  for (int k = 0; k < 2; ++k) {
    double s = 0;
    for (std::uint32_t w = 0; w < 3; ++w) s += m3.phi(k, w);
    CHECK(s == doctest::Approx(1.0));
  }
}

TEST_CASE("sampler conserves token counts on every sweep") {
  auto ds = planted_partition(5, 60);
  auto c = corpus_of(ds, 1);
  int sweeps = 0;
  fit_lda(c, {.topics = 4, .gibbs_iters = 15, .seed = 9}, [&](const GibbsSampler& s) {
    ++sweeps;
    CHECK(s.assigned_tokens() == c.token_count());
    CHECK(s.document_topic_total() == c.token_count());
  });
  CHECK(sweeps == 15);
}

TEST_CASE("lda argument errors") {
  auto ds = planted_partition(5, 10, 3);
  auto c = corpus_of(ds, 1);
  CHECK_THROWS_AS(fit_lda(c, {.topics = 1}), UsageError);
  CHECK_THROWS_AS(fit_lda(c, {.topics = 7}), DataError);  // vocabulary has 6 users
}

TEST_CASE("infer_topics fallback and normalization") {
  auto ds = planted_partition(2, 40);
  auto c = corpus_of(ds, 1);
  auto m = fit_lda(c, {.topics = 4, .gibbs_iters = 10, .seed = 1});
  std::vector<std::uint32_t> none;
  CHECK(infer_topics(m, none, 1) == TopicVector(4, 0.25));
  std::vector<std::uint32_t> oov{static_cast<std::uint32_t>(m.vocab_size() + 5)};
  CHECK(infer_topics(m, oov, 1) == TopicVector(4, 0.25));

  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::uint32_t> w(0, static_cast<std::uint32_t>(m.vocab_size() - 1));
  for (int t = 0; t < 50; ++t) {
    std::vector<std::uint32_t> bag(1 + t % 9);
    for (auto& x : bag) x = w(rng);
    auto theta = infer_topics(m, bag, static_cast<std::uint64_t>(t));
    CHECK(std::abs(std::accumulate(theta.begin(), theta.end(), 0.0) - 1.0) < 1e-9);
    CHECK(std::all_of(theta.begin(), theta.end(), [](double v) { return v > 0; }));
    CHECK(infer_topics(m, bag, static_cast<std::uint64_t>(t)) == theta);
  }
}

TEST_CASE("topic model round trip") {
  auto ds = planted_partition(2, 30);
  auto m = fit_lda(corpus_of(ds, 1), {.topics = 3, .gibbs_iters = 5, .seed = 8});
  auto dir = std::filesystem::temp_directory_path() / "newsrep_lda_rt";
  std::filesystem::remove_all(dir);
  save_topic_model(m, dir);
  auto back = load_topic_model(dir);
  CHECK(back.topic_word == m.topic_word);
  CHECK(back.vocabulary == m.vocabulary);
  CHECK(back.alpha == m.alpha);
  CHECK(back.topics == 3);
  std::filesystem::remove_all(dir);
}

TEST_CASE("network gradient matches finite differences") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t K = 2 + trial % 4;
    NNHyper hyper{.hidden = 3 + trial % 5, .seed = static_cast<std::uint64_t>(trial)};
    auto model = init_nn(K, hyper);
    for (auto& b : model.b1) b = u(rng) - 0.3;
    model.b2 = u(rng) - 0.5;
    std::vector<std::vector<double>> xs;
    std::vector<Label> labels;
    std::vector<int> ys;
    std::vector<double> ws;
    for (int n = 0; n < 12; ++n) {
      std::vector<double> x(K);
      for (auto& v : x) v = u(rng);
      xs.push_back(x);
      ys.push_back(u(rng) < 0.4);
      labels.push_back(ys.back() ? Label::hoax : Label::nonhoax);
      ws.push_back(0.3 + u(rng));
    }
    NNGradient g;
    const double loss = nn_loss(model, xs, labels, ws, &g);
    auto dense = to_dense(model);
    CHECK(loss == doctest::Approx(oracle::net_loss(dense, xs, ys, ws)).epsilon(1e-12));

    auto rel_ok = [](double a, double b) { return std::abs(a - b) <= 1e-4 * std::max(1e-3, std::abs(b)); };
    for (std::size_t i = 0; i < g.w1.size(); ++i)
      CHECK(rel_ok(g.w1[i], oracle::net_partial(dense, nullptr, &oracle::DenseNet::w1, i, xs, ys, ws)));
    for (std::size_t i = 0; i < g.b1.size(); ++i)
      CHECK(rel_ok(g.b1[i], oracle::net_partial(dense, nullptr, &oracle::DenseNet::b1, i, xs, ys, ws)));
    for (std::size_t i = 0; i < g.w2.size(); ++i)
      CHECK(rel_ok(g.w2[i], oracle::net_partial(dense, nullptr, &oracle::DenseNet::w2, i, xs, ys, ws)));
    CHECK(rel_ok(g.b2, oracle::net_partial(dense, &oracle::DenseNet::b2, nullptr, 0, xs, ys, ws)));
  }
}

TEST_CASE("hidden layer learns XOR where a linear model cannot") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> jitter(0.0, 0.05);
  std::vector<std::vector<double>> xs;
  std::vector<Label> labels;
  std::vector<int> ys;
  for (int n = 0; n < 200; ++n) {
    const int a = n % 2, b = (n / 2) % 2;
    xs.push_back({0.2 + 0.6 * a + jitter(rng), 0.2 + 0.6 * b + jitter(rng)});
    ys.push_back(a ^ b);
    labels.push_back(ys.back() ? Label::hoax : Label::nonhoax);
  }
  auto r = train_nn(xs, labels, {.epochs = 300, .batch_size = 16, .learning_rate = 0.01, .seed = 4});
  std::size_t ok = 0;
  for (std::size_t n = 0; n < xs.size(); ++n) ok += predict_nn(r.model, xs[n]).label == labels[n];
  CHECK(ok / 200.0 >= 0.95);
  CHECK(oracle::linear_baseline_accuracy(xs, ys) <= 0.75);
  CHECK(r.loss_trace.size() == 300);
  CHECK(r.loss_trace.back() < r.loss_trace.front());

  auto again = train_nn(xs, labels, {.epochs = 300, .batch_size = 16, .learning_rate = 0.01, .seed = 4});
  CHECK(again.model.w1 == r.model.w1);
  CHECK(again.model.b2 == r.model.b2);
}

TEST_CASE("zero epochs returns the initial network") {
  std::vector<std::vector<double>> xs{{0.1, 0.9}, {0.8, 0.2}};
  std::vector<Label> labels{Label::hoax, Label::nonhoax};
  NNHyper h{.hidden = 7, .epochs = 0, .seed = 12};
  auto r = train_nn(xs, labels, h);
  auto init = init_nn(2, h);
  CHECK(r.model.w1 == init.w1);
  CHECK(r.model.b1 == init.b1);
  CHECK(r.model.w2 == init.w2);
  CHECK(r.model.b2 == init.b2);
  CHECK(r.loss_trace.empty());
}

TEST_CASE("predict_nn forward pass") {
  NNHyper h{.hidden = 4, .seed = 2};
  auto m = init_nn(3, h);
  m.b1 = {0.5, -0.25, 1.0, 0.0};
  m.b2 = -0.3;
  std::vector<double> zero(3, 0.0);
  double z = m.b2;
  for (std::size_t k = 0; k < 4; ++k) z += m.w2[k] * std::max(0.0, m.b1[k]);
  auto p = predict_nn(m, zero);
  CHECK(p.score == doctest::Approx(1.0 / (1.0 + std::exp(-z))));
  CHECK((p.label == Label::hoax) == (p.score >= 0.5));
  std::vector<double> wrong(2, 0.0);
  CHECK_THROWS_AS(predict_nn(m, wrong), UsageError);
}

TEST_CASE("network training errors") {
  std::vector<std::vector<double>> xs{{0.1}, {0.2}};
  std::vector<Label> one_class{Label::hoax, Label::hoax};
  CHECK_THROWS_AS(train_nn(xs, one_class, {}), DataError);
  std::vector<Label> labels{Label::hoax, Label::nonhoax};
  CHECK_THROWS_AS(train_nn(xs, labels, {.epochs = 5, .learning_rate = 1e308}), DataError);
}

TEST_CASE("network round trip") {
  std::vector<std::vector<double>> xs{{0.1, 0.9}, {0.8, 0.2}, {0.5, 0.5}};
  std::vector<Label> labels{Label::hoax, Label::nonhoax, Label::nonhoax};
  auto r = train_nn(xs, labels, {.hidden = 5, .epochs = 3, .seed = 1});
  auto dir = std::filesystem::temp_directory_path() / "newsrep_nn_rt";
  std::filesystem::remove_all(dir);
  save_nn(r.model, dir);
  auto back = load_nn(dir);
  CHECK(back.w1 == r.model.w1);
  CHECK(back.b1 == r.model.b1);
  CHECK(back.w2 == r.model.w2);
  CHECK(back.b2 == r.model.b2);
  REQUIRE(back.hyper.class_weights.has_value());
  CHECK(back.hyper.class_weights->hoax == doctest::Approx(1.5));
  for (const auto& x : xs) CHECK(predict_nn(back, x).score == predict_nn(r.model, x).score);
  std::filesystem::remove_all(dir);
}
