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

#ifndef NEWSREP_NEWSREP_H_
#define NEWSREP_NEWSREP_H_

#include <stddef.h>

#if defined(_WIN32)
#  if defined(NEWSREP_BUILDING)
#    define NR_API __declspec(dllexport)
#  else
#    define NR_API __declspec(dllimport)
#  endif
#else
#  define NR_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum nr_status {
  NR_OK = 0,
  NR_ERR_USAGE = 1,      /* bad arguments or configuration */
  NR_ERR_DATA = 2,       /* malformed or unusable input data */
  NR_ERR_IO = 3,
  NR_ERR_NOT_FOUND = 4,  /* unknown item, user, site or split */
  NR_ERR_INTERNAL = 5
} nr_status;

typedef struct nr_snapshot nr_snapshot;

NR_API const char* nr_version(void);
NR_API const char* nr_status_name(nr_status status);

/* Message for the last failing call on this thread; empty after success. */
NR_API const char* nr_last_error(void);

/* Strings returned through char** out-parameters are owned by the caller. */
NR_API void nr_free_string(char* s);

/* Reads a JSON-lines records file into a snapshot directory. `strip_params`
 * is a comma-separated list of query parameters to drop (NULL for the
 * default utm_*,fbclid,gclid). The summary holds record, rejection, item,
 * user and edge counts. */
NR_API nr_status nr_ingest(const char* records_path, const char* snapshot_dir, const char* strip_params,
                           char** summary_json);

NR_API nr_status nr_snapshot_open(const char* snapshot_dir, nr_snapshot** out);
NR_API void nr_snapshot_close(nr_snapshot* snap);
NR_API nr_status nr_snapshot_counts(const nr_snapshot* snap, size_t* items, size_t* users, size_t* edges);

/* Stores a split specification (JSON with name, start, end and optional
 * tweet_cutoff, day_stride, day_offset, explicit_days, min_shares) in the
 * snapshot. When `gt_path` is given, `summary_json` receives the split's
 * item and label counts. */
NR_API nr_status nr_split_save(nr_snapshot* snap, const char* spec_json, const char* gt_path, char** summary_json);

/* Runs one method and writes its report files into `out_dir`. The request
 * is a JSON object: method, split, test_split, gt, optional gt2, aliases,
 * min_shares, seed, c, iters, pos_factor, l2, topics_k, gibbs_iters,
 * min_count, epochs, site_min_urls. `report_json` may be NULL. */
NR_API nr_status nr_run(nr_snapshot* snap, const char* request_json, const char* out_dir, char** report_json);

/* Fills `matrix` (n*n, row-major) with pairwise site correlations. */
NR_API nr_status nr_correlate(const nr_snapshot* snap, const char* const* sites, size_t n, double* matrix);

/* Generates a synthetic corpus into `out_dir`. `config_json` may be NULL or
 * override any generator setting. */
NR_API nr_status nr_synth(const char* config_json, const char* out_dir, char** summary_json);

#ifdef __cplusplus
}
#endif

#endif  // NEWSREP_NEWSREP_H_
