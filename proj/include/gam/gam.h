/* Copyright 2026 The GAM Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef GAM_GAM_H
#define GAM_GAM_H

/* C interface to libgam. Handles are opaque; every fallible call returns a
 * gam_status and leaves a message for gam_last_error() on failure. Strings
 * returned through char** are owned by the caller (free with
 * gam_string_free). */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define GAM_API __declspec(dllexport)
#elif defined(GAM_BUILDING_LIBRARY)
#define GAM_API __attribute__((visibility("default")))
#else
#define GAM_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum gam_status {
  GAM_OK = 0,
  GAM_ERR_USAGE = 1,
  GAM_ERR_DATA = 2,
  GAM_ERR_RUNTIME = 3
} gam_status;

typedef struct gam_dataset gam_dataset;
typedef struct gam_model gam_model;

GAM_API const char* gam_version(void);
/* Message of the last failed call on this thread; "" if none. */
GAM_API const char* gam_last_error(void);
GAM_API void gam_string_free(char* s);

/* Datasets. */
GAM_API gam_status gam_dataset_load(const char* path, gam_dataset** out);
GAM_API gam_status gam_dataset_parse(const char* json_text, gam_dataset** out);
GAM_API gam_status gam_dataset_synthesize(size_t n_graphs, size_t bg_nodes, double bg_edge_prob, uint64_t seed,
                                          gam_dataset** out);
GAM_API gam_status gam_dataset_save(const gam_dataset* d, const char* path);
GAM_API size_t gam_dataset_size(const gam_dataset* d);
GAM_API size_t gam_dataset_num_types(const gam_dataset* d);
GAM_API size_t gam_dataset_num_classes(const gam_dataset* d);
GAM_API gam_status gam_dataset_graph_info(const gam_dataset* d, size_t graph, size_t* nodes, size_t* edges,
                                          uint32_t* label);
GAM_API void gam_dataset_free(gam_dataset* d);

/* Models. gam_model_load reads either variant. */
GAM_API gam_status gam_model_load(const char* path, gam_model** out);
/* 0 for the single-agent model, 1 for the memory variant. */
GAM_API int gam_model_is_memory(const gam_model* m);
/* Runs `agents` walks of `steps` steps on one graph and writes the predicted
 * label and, when probs is non-null, probs_len class probabilities. */
GAM_API gam_status gam_model_predict(const gam_model* m, const gam_dataset* d, size_t graph, size_t agents,
                                     size_t steps, uint64_t seed, uint32_t* label, double* probs, size_t probs_len);
GAM_API void gam_model_free(gam_model* m);

/* Experiment commands: synth, train, eval, cv, trace, study, partial.
 * config_json is a JSON object of config keys (see gam_config_keys).
 * On success *manifest_json receives the run manifest. */
GAM_API gam_status gam_run(const char* command, const char* config_json, char** manifest_json);
/* JSON array of accepted config keys. */
GAM_API gam_status gam_config_keys(char** keys_json);
/* Canonical config with every default filled in. */
GAM_API gam_status gam_config_resolve(const char* config_json, char** resolved_json);

#ifdef __cplusplus
}
#endif

#endif /* GAM_GAM_H */
