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

#include "newsrep/pipeline.hpp"

#include <cstdio>
#include <fstream>

namespace newsrep {

std::string to_string(Method m) {
  switch (m) {
    case Method::lr_u: return "lr-u";
    case Method::lr_ut: return "lr-ut";
    case Method::lr_t: return "lr-t";
    case Method::topics: return "topics";
    case Method::harmonic: return "harmonic";
  }
  return "harmonic";
}

Method method_from_string(std::string_view s) {
  for (auto m : {Method::lr_u, Method::lr_ut, Method::lr_t, Method::topics, Method::harmonic})
    if (to_string(m) == s) return m;
  throw UsageError("unknown method '" + std::string(s) + "' (expected lr-u, lr-ut, lr-t, topics or harmonic)");
}

nlohmann::json IngestSummary::to_json() const {
  nlohmann::json rej = nlohmann::json::array();
  for (const auto& r : rejections) rej.push_back({{"line", r.line}, {"reason", r.reason}});
  return {{"records", records},   {"accepted", records - rejections.size()}, {"rejected", rejections.size()},
          {"items", items},       {"users", users},
          {"edges", edges},       {"rejections", rej}};
}

IngestSummary ingest_to_snapshot(const std::filesystem::path& records, const std::filesystem::path& snapshot,
                                 const CanonicalizeOptions& opts) {
  auto res = ingest_records(records, opts);
  IngestSummary s{res.records, res.graph.item_count(), res.graph.user_count(), res.graph.edges().size(),
                  std::move(res.rejections)};
  if (s.edges == 0) throw DataError("no usable records in " + records.string());
  write_snapshot(res.graph, snapshot);
  auto manifest = s.to_json();
  manifest["source"] = records.string();
  std::ofstream(snapshot / "manifest.json") << manifest.dump(2) << '\n';
  return s;
}

void save_split(const std::filesystem::path& snapshot, const SplitSpec& spec) {
  spec.validate();
  if (spec.name.empty() || spec.name.find_first_of("/\\") != std::string::npos)
    throw UsageError("split name must be a plain file name");
  const auto dir = snapshot / "splits";
  std::filesystem::create_directories(dir);
  std::ofstream f(dir / (spec.name + ".json"));
  if (!f) throw IoError("cannot write split " + spec.name);
  f << spec.to_json().dump(2) << '\n';
}

SplitSpec load_split(const std::filesystem::path& snapshot, std::string_view name) {
  const auto path = snapshot / "splits" / (std::string(name) + ".json");
  std::ifstream f(path);
  if (!f) throw NotFound("no split named '" + std::string(name) + "' in " + snapshot.string());
  try {
    return SplitSpec::from_json(nlohmann::json::parse(f));
  } catch (const nlohmann::json::exception& e) {
    throw DataError("malformed split file " + path.string() + ": " + e.what());
  }
}

void RunConfig::set_seed(std::uint64_t seed) {
  lr.seed = seed;
  harmonic.seed = seed;
  lda.seed = seed;
  nn.seed = seed;
}

nlohmann::json RunConfig::to_json() const {
  nlohmann::json j = {{"method", to_string(method)},
                      {"site_min_urls", site_min_urls},
                      {"cross_threshold_pct", cross_threshold_pct},
                      {"cross_min_urls", cross_min_urls}};
  switch (method) {
    case Method::lr_u:
    case Method::lr_ut:
    case Method::lr_t:
      j["lr"] = {{"l2_strength", lr.l2_strength}, {"max_iters", lr.max_iters}, {"tolerance", lr.tolerance},
                 {"seed", lr.seed}};
      break;
    case Method::topics:
      j["lda"] = {{"topics", lda.topics},           {"alpha", lda.resolved_alpha()}, {"eta", lda.eta},
                  {"gibbs_iters", lda.gibbs_iters}, {"seed", lda.seed},            {"min_count", min_count}};
      j["nn"] = {{"hidden", nn.hidden},
                 {"epochs", nn.epochs},
                 {"batch_size", nn.batch_size},
                 {"learning_rate", nn.learning_rate},
                 {"seed", nn.seed}};
      break;
    case Method::harmonic:
      j["harmonic"] = {{"c", harmonic.c},
                       {"iterations", harmonic.iterations},
                       {"pos_factor", harmonic.pos_factor},
                       {"seed", harmonic.seed},
                       {"threads", harmonic.threads}};
      break;
  }
  return j;
}

namespace {

std::vector<std::string> sharers_of(const ShareGraph& g, ItemIndex i) {
  std::vector<std::string> out;
  for (auto u : g.item_neighbors(i)) out.push_back(g.user(u).user_id);
  return out;
}

ScoredItem scored(const Dataset& test, ItemIndex i, Label predicted, double score) {
  const auto& item = test.graph.item(i);
  return {item.item_id, item.site, test.graph.share_count(i), test.labels[i], predicted, score};
}

void run_lr(const RunInputs& in, const RunConfig& cfg, RunOutput& out) {
  const FeatureMode mode = cfg.method == Method::lr_u ? FeatureMode::U
                           : cfg.method == Method::lr_ut ? FeatureMode::UT
                                                         : FeatureMode::T;
  static const AliasMap none;
  const AliasMap& aliases = in.aliases ? *in.aliases : none;
  auto model = train_lr(*in.train, mode, cfg.lr, aliases);
  if (!model.converged)
    out.warnings.push_back("logistic regression stopped after " + std::to_string(model.iterations) +
                           " iterations without meeting the tolerance");
  const auto& g = in.test->graph;
  for (ItemIndex i = 0; i < g.item_count(); ++i) {
    const auto sharers = sharers_of(g, i);
    const auto p = predict_lr(model, g.item(i), sharers, aliases);
    out.scored.push_back(scored(*in.test, i, p.label, p.score));
  }
  out.details = {{"features", model.features.dimension()},
                 {"converged", model.converged},
                 {"iterations", model.iterations},
                 {"final_loss", model.loss_trace.empty() ? 0.0 : model.loss_trace.back()}};
  out.lr = std::move(model);
}

void run_topics(const RunInputs& in, const RunConfig& cfg, RunOutput& out) {
  const Dataset* both[] = {in.train, in.test};
  const Corpus corpus = build_corpus(both, cfg.min_count);
  auto model = fit_lda(corpus, cfg.lda);

  auto vectors = [&](const Dataset& ds) {
    const auto bags = document_bags(ds, corpus);
    std::vector<TopicVector> v;
    v.reserve(bags.size());
    for (ItemIndex i = 0; i < bags.size(); ++i)
      v.push_back(infer_topics(model, bags[i], cfg.lda.seed ^ fnv1a(ds.graph.item(i).item_id)));
    return v;
  };
  const auto train_x = vectors(*in.train);
  auto nn = train_nn(train_x, in.train->labels, cfg.nn);
  const auto test_x = vectors(*in.test);
  for (ItemIndex i = 0; i < test_x.size(); ++i) {
    const auto p = predict_nn(nn.model, test_x[i]);
    out.scored.push_back(scored(*in.test, i, p.label, p.score));
  }
  out.details = {{"vocabulary", corpus.vocabulary.size()},
                 {"documents", corpus.documents.size()},
                 {"tokens", corpus.token_count()},
                 {"dropped_items", corpus.dropped_items.size()},
                 {"final_loss", nn.loss_trace.empty() ? 0.0 : nn.loss_trace.back()}};
  if (!corpus.dropped_items.empty())
    out.warnings.push_back(std::to_string(corpus.dropped_items.size()) +
                           " items have no frequent sharer and get the uniform topic vector");
  out.topics = std::move(model);
  out.nn = std::move(nn.model);
}

void run_harmonic(const RunInputs& in, const RunConfig& cfg, RunOutput& out) {
  const auto& train = in.train->graph;
  LabelSeed seeds;
  std::vector<std::string> candidates;
  for (ItemIndex i = 0; i < train.item_count(); ++i) {
    const auto& it = train.item(i);
    if (in.gt->contains(it.site))
      seeds.fake.insert(it.item_id);
    else if (!in.gt2 || !in.gt2->contains(it.site))
      candidates.push_back(it.item_id);
  }
  if (seeds.fake.empty()) throw DataError("training split has no item from a listed site");
  const auto positives =
      subsample_positives(candidates, seeds.fake.size(), cfg.harmonic.pos_factor, cfg.harmonic.seed, &out.warnings);
  seeds.reliable.insert(positives.begin(), positives.end());
  auto beliefs = propagate(*in.graph, seeds, cfg.harmonic);

  const auto& g = in.test->graph;
  for (ItemIndex i = 0; i < g.item_count(); ++i) {
    const auto& id = g.item(i).item_id;
    const double q = beliefs.items[in.graph->item_index(id)].q();
    out.scored.push_back(scored(*in.test, i, classify_q(q), (1.0 - q) / 2.0));
  }
  out.details = {{"fake_seeds", seeds.fake.size()},
                 {"reliable_seeds", seeds.reliable.size()},
                 {"reliable_candidates", candidates.size()}};
  out.beliefs = std::move(beliefs);
}

}  // namespace

RunOutput run_method(const RunInputs& in, const RunConfig& cfg) {
  if (!in.graph || !in.train || !in.test || !in.gt) throw UsageError("run needs a graph, both splits and a list");
  if (in.test->graph.item_count() == 0) throw DataError("test split '" + in.test->name + "' is empty");
  if (in.train->graph.item_count() == 0) throw DataError("training split '" + in.train->name + "' is empty");
  RunOutput out;
  switch (cfg.method) {
    case Method::lr_u:
    case Method::lr_ut:
    case Method::lr_t: run_lr(in, cfg, out); break;
    case Method::topics: run_topics(in, cfg, out); break;
    case Method::harmonic: run_harmonic(in, cfg, out); break;
  }
  return out;
}

EvalReport evaluate_run(const RunOutput& out, const RunInputs& in, const RunConfig& cfg) {
  EvalReport r;
  r.method = to_string(cfg.method);
  r.dataset = in.test->name;
  r.config = cfg.to_json();
  r.config["train_split"] = in.train->spec.to_json();
  r.config["test_split"] = in.test->spec.to_json();
  r.config["gt"] = in.gt->name;
  if (in.gt2) r.config["gt2"] = in.gt2->name;
  r.slices = score_slices(out.scored);
  r.per_site = per_site_table(out.scored, cfg.site_min_urls);
  if (in.gt2) {
    bool any = false;
    for (const auto& s : out.scored) any = any || (in.gt2->contains(s.site) && !in.gt->contains(s.site));
    if (any) r.cross_gt = cross_gt_detect(*in.gt, *in.gt2, out.scored, cfg.cross_threshold_pct, cfg.cross_min_urls);
  }
  return r;
}

void write_run(const std::filesystem::path& dir, const EvalReport& report, const RunOutput& out,
               const RunInputs& in) {
  std::filesystem::create_directories(dir);
  auto j = to_json(report);
  j["details"] = out.details;
  j["warnings"] = out.warnings;
  std::ofstream(dir / "report.json") << j.dump(2) << '\n';
  std::ofstream(dir / "report.txt") << to_text(report);
  std::ofstream(dir / "per_site.csv") << per_site_csv(report.per_site, report.method, in.gt->name);
  {
    std::ofstream f(dir / "predictions.tsv");
    f << "item_id\tsite\tshares\ttruth\tpredicted\tscore\n";
    char score[32];
    for (const auto& s : out.scored) {
      std::snprintf(score, sizeof score, "%.17g", s.score);
      f << s.item_id << '\t' << s.site << '\t' << s.share_count << '\t'
        << (s.truth == Label::hoax ? "hoax" : "nonhoax") << '\t'
        << (s.predicted == Label::hoax ? "hoax" : "nonhoax") << '\t' << score << '\n';
    }
  }
  if (out.lr) save_lr_model(*out.lr, dir / "model");
  if (out.topics) save_topic_model(*out.topics, dir / "model");
  if (out.nn) save_nn(*out.nn, dir / "model");
  if (out.beliefs) write_beliefs(*out.beliefs, *in.graph, dir);
}

}  // namespace newsrep
