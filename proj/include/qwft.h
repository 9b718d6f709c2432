/* Copyright 2026 The qwft authors
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

/* C interface to the qwft shared library. Scenarios and reports are opaque
 * handles; every entry point returns a status code and the most recent error
 * message is available per thread via qwft_last_error().
 */

#ifndef QWFT_H
#define QWFT_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qwft_status {
  QWFT_OK = 0,
  /* A mathematical inequality that must hold was violated numerically;
   * this signals a bug in the library, never bad input. */
  QWFT_ERROR_INEQUALITY = 1,
  QWFT_ERROR_INVALID_INPUT = 2,
  QWFT_ERROR_INTERNAL = 3
} qwft_status;

typedef struct qwft_scenario qwft_scenario;
typedef struct qwft_report qwft_report;

typedef struct qwft_options {
  uint64_t seed;     /* used when has_seed != 0; overrides the scenario seed */
  int has_seed;
  double tolerance;  /* used when has_tolerance != 0 (verify slack) */
  int has_tolerance;
  int jobs;          /* worker threads; <= 1 means serial */
  int verify_probes; /* probes per randomized suite (verify command) */
  int verify_dim;    /* fixed dimension for verify; 0 mixes dims 2..4 */
} qwft_options;

/* Initializes an options struct to the documented defaults. */
void qwft_options_init(qwft_options* options);

const char* qwft_version(void);

/* Message for the most recent failure on this thread; valid until the next
 * qwft call on the same thread. */
const char* qwft_last_error(void);

qwft_status qwft_scenario_parse(const char* json_text, qwft_scenario** out);
qwft_status qwft_scenario_load(const char* path, qwft_scenario** out);
void qwft_scenario_free(qwft_scenario* scenario);

/* command: "verify" | "bound" | "open-run" | "meter" | "optimize" | "sweep".
 * scenario may be NULL for "verify". On QWFT_ERROR_INEQUALITY the report may
 * still be produced (verify and sweep count violations per probe); *out is
 * set to NULL otherwise on failure. */
qwft_status qwft_run(const qwft_scenario* scenario, const char* command,
                     const qwft_options* options, qwft_report** out);

/* Canonical JSON (byte-identical for identical scenario + seed). The
 * returned pointer is owned by the report. */
const char* qwft_report_json(const qwft_report* report);
const char* qwft_report_csv(const qwft_report* report);
/* Wall-clock duration of the run; reporting only. */
double qwft_report_wall_time_ms(const qwft_report* report);
void qwft_report_free(qwft_report* report);

#ifdef __cplusplus
}
#endif

#endif /* QWFT_H */
