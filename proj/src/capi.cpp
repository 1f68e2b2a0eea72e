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

#include "newsrep/newsrep.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <new>
#include <sstream>
#include <string>

#include "json.hpp"
#include "newsrep/eval.hpp"
#include "newsrep/pipeline.hpp"
#include "newsrep/synth.hpp"

struct nr_snapshot {
  std::filesystem::path dir;
  newsrep::ShareGraph graph;
};

namespace {

using newsrep::ErrorKind;
using nlohmann::json;

thread_local std::string g_last_error;

nr_status status_of(ErrorKind k) {
  switch (k) {
    case ErrorKind::usage: return NR_ERR_USAGE;
    case ErrorKind::data: return NR_ERR_DATA;
    case ErrorKind::not_found: return NR_ERR_NOT_FOUND;
    case ErrorKind::io: return NR_ERR_IO;
  }
  return NR_ERR_INTERNAL;
}

template <class F>
nr_status guarded(F&& f) {
  try {
    f();
    g_last_error.clear();
    return NR_OK;
  } catch (const newsrep::Error& e) {
    g_last_error = e.what();
    return status_of(e.kind());
  } catch (const json::exception& e) {
    g_last_error = std::string("invalid JSON argument: ") + e.what();
    return NR_ERR_USAGE;
  } catch (const std::filesystem::filesystem_error& e) {
    g_last_error = e.what();
    return NR_ERR_IO;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return NR_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return NR_ERR_INTERNAL;
  }
}

void require(const void* p, const char* what) {
  if (!p) throw newsrep::UsageError(std::string(what) + " must not be NULL");
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void hand_out(char** out, const json& j) {
  if (out) *out = dup_string(j.dump(2));
}

json parse_object(const char* text, const char* what) {
  if (!text) return json::object();
  auto j = json::parse(text);
  if (!j.is_object()) throw newsrep::UsageError(std::string(what) + " must be a JSON object");
  return j;
}

newsrep::GroundTruth load_gt(const std::string& path) {
  return newsrep::load_ground_truth(path, std::nullopt, std::filesystem::path(path).stem().string());
}

template <class T>
void take(const json& req, const char* key, T& field) {
  if (req.contains(key) && !req.at(key).is_null()) field = req.at(key).get<T>();
}

}  // namespace

extern "C" {

const char* nr_version(void) { return "0.1.0"; }

const char* nr_status_name(nr_status status) {
  switch (status) {
    case NR_OK: return "ok";
    case NR_ERR_USAGE: return "usage error";
    case NR_ERR_DATA: return "data error";
    case NR_ERR_IO: return "i/o error";
    case NR_ERR_NOT_FOUND: return "not found";
    case NR_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* nr_last_error(void) { return g_last_error.c_str(); }

void nr_free_string(char* s) { std::free(s); }

nr_status nr_ingest(const char* records_path, const char* snapshot_dir, const char* strip_params,
                    char** summary_json) {
  return guarded([&] {
    require(records_path, "records_path");
    require(snapshot_dir, "snapshot_dir");
    newsrep::CanonicalizeOptions opts;
    if (strip_params) {
      opts.strip_params.clear();
      std::stringstream ss(strip_params);
      std::string p;
      while (std::getline(ss, p, ','))
        if (!p.empty()) opts.strip_params.push_back(p);
    }
    auto s = newsrep::ingest_to_snapshot(records_path, snapshot_dir, opts);
    hand_out(summary_json, s.to_json());
  });
}

nr_status nr_snapshot_open(const char* snapshot_dir, nr_snapshot** out) {
  return guarded([&] {
    require(snapshot_dir, "snapshot_dir");
    require(out, "out");
    *out = nullptr;
    auto snap = std::make_unique<nr_snapshot>();
    snap->dir = snapshot_dir;
    snap->graph = newsrep::read_snapshot(snap->dir);
    *out = snap.release();
  });
}

void nr_snapshot_close(nr_snapshot* snap) { delete snap; }

nr_status nr_snapshot_counts(const nr_snapshot* snap, size_t* items, size_t* users, size_t* edges) {
  return guarded([&] {
    require(snap, "snapshot");
    if (items) *items = snap->graph.item_count();
    if (users) *users = snap->graph.user_count();
    if (edges) *edges = snap->graph.edges().size();
  });
}

nr_status nr_split_save(nr_snapshot* snap, const char* spec_json, const char* gt_path, char** summary_json) {
  return guarded([&] {
    require(snap, "snapshot");
    require(spec_json, "spec_json");
    newsrep::SplitSpec spec;
    try {
      spec = newsrep::SplitSpec::from_json(parse_object(spec_json, "split spec"));
    } catch (const newsrep::DataError& e) {
      throw newsrep::UsageError(e.what());
    }
    newsrep::save_split(snap->dir, spec);
    json summary = {{"split", spec.to_json()}};
    if (gt_path) {
      const auto ds = newsrep::build_split(snap->graph, spec, load_gt(gt_path));
      summary = ds.manifest();
    }
    hand_out(summary_json, summary);
  });
}

nr_status nr_run(nr_snapshot* snap, const char* request_json, const char* out_dir, char** report_json) {
  return guarded([&] {
    require(snap, "snapshot");
    require(request_json, "request_json");
    require(out_dir, "out_dir");
    const json req = parse_object(request_json, "run request");
    for (const char* key : {"method", "split", "test_split", "gt"})
      if (!req.contains(key)) throw newsrep::UsageError(std::string("run request lacks '") + key + "'");

    newsrep::RunConfig cfg;
    cfg.method = newsrep::method_from_string(req.at("method").get<std::string>());
    if (req.contains("seed")) cfg.set_seed(req.at("seed").get<std::uint64_t>());
    take(req, "c", cfg.harmonic.c);
    take(req, "iters", cfg.harmonic.iterations);
    take(req, "pos_factor", cfg.harmonic.pos_factor);
    take(req, "threads", cfg.harmonic.threads);
    take(req, "l2", cfg.lr.l2_strength);
    take(req, "max_iters", cfg.lr.max_iters);
    take(req, "topics_k", cfg.lda.topics);
    take(req, "gibbs_iters", cfg.lda.gibbs_iters);
    take(req, "min_count", cfg.min_count);
    take(req, "epochs", cfg.nn.epochs);
    take(req, "site_min_urls", cfg.site_min_urls);

    const bool is_harmonic = cfg.method == newsrep::Method::harmonic;
    const bool is_topics = cfg.method == newsrep::Method::topics;
    for (const char* key : {"c", "iters", "pos_factor"})
      if (req.contains(key) && !is_harmonic)
        throw newsrep::UsageError(std::string("'") + key + "' only applies to the harmonic method");
    for (const char* key : {"topics_k", "gibbs_iters", "min_count", "epochs"})
      if (req.contains(key) && !is_topics)
        throw newsrep::UsageError(std::string("'") + key + "' only applies to the topics method");
    if (req.contains("l2") && (is_harmonic || is_topics))
      throw newsrep::UsageError("'l2' only applies to the logistic-regression methods");
    if (is_harmonic) cfg.harmonic.validate();

    auto train_spec = newsrep::load_split(snap->dir, req.at("split").get<std::string>());
    const auto test_spec = newsrep::load_split(snap->dir, req.at("test_split").get<std::string>());
    if (req.contains("min_shares")) {
      train_spec.min_shares = req.at("min_shares").get<int>();
      train_spec.name += "-min" + std::to_string(train_spec.min_shares);
    }
    const auto gt = load_gt(req.at("gt").get<std::string>());
    std::optional<newsrep::GroundTruth> gt2;
    if (req.contains("gt2") && !req.at("gt2").is_null()) gt2 = load_gt(req.at("gt2").get<std::string>());
    newsrep::AliasMap aliases;
    if (req.contains("aliases") && !req.at("aliases").is_null())
      aliases = newsrep::load_aliases(req.at("aliases").get<std::string>());

    const auto train = newsrep::build_split(snap->graph, train_spec, gt);
    const auto test = newsrep::build_split(snap->graph, test_spec, gt);
    newsrep::RunInputs in{&snap->graph, &train, &test, &gt, gt2 ? &*gt2 : nullptr, &aliases};
    auto out = newsrep::run_method(in, cfg);
    for (const auto* ds : {&train, &test})
      for (const auto& w : ds->warnings) out.warnings.push_back(ds->name + ": " + w);
    auto report = newsrep::evaluate_run(out, in, cfg);
    report.config["request"] = req;
    report.config["snapshot"] = snap->dir.string();
    newsrep::write_run(out_dir, report, out, in);
    if (report_json) {
      std::ifstream f(std::filesystem::path(out_dir) / "report.json");
      hand_out(report_json, json::parse(f));
    }
  });
}

nr_status nr_correlate(const nr_snapshot* snap, const char* const* sites, size_t n, double* matrix) {
  return guarded([&] {
    require(snap, "snapshot");
    if (n == 0) return;
    require(sites, "sites");
    require(matrix, "matrix");
    std::vector<std::string> names;
    for (size_t i = 0; i < n; ++i) {
      require(sites[i], "site name");
      names.emplace_back(sites[i]);
    }
    const auto m = newsrep::site_correlation_matrix(snap->graph, names);
    for (size_t a = 0; a < n; ++a)
      for (size_t b = 0; b < n; ++b) matrix[a * n + b] = m[a][b];
  });
}

nr_status nr_synth(const char* config_json, const char* out_dir, char** summary_json) {
  return guarded([&] {
    require(out_dir, "out_dir");
    const auto cfg = newsrep::SynthConfig::from_json(parse_object(config_json, "synth config"));
    const auto corpus = newsrep::generate(cfg);
    newsrep::write_corpus(corpus, out_dir);
    hand_out(summary_json, {{"records", corpus.records.size()},
                            {"items", corpus.graph.item_count()},
                            {"users", corpus.graph.user_count()},
                            {"sites", corpus.sites.size()},
                            {"config", cfg.to_json()}});
  });
}

}  // extern "C"
