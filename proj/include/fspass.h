/*
 * Copyright 2026 fspass developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */

/* C API of the feedback-passivation toolkit. All functions return 0 on
 * success and a nonzero error code otherwise; the last error message is
 * retrievable per thread via fspass_last_error(). Strings returned through
 * out-parameters are owned by the caller and must be released with
 * fspass_free_string(). */
#ifndef FSPASS_H
#define FSPASS_H

#ifdef __cplusplus
extern "C" {
#endif

typedef struct fspass_problem fspass_problem;

/* Library version, static storage (do not free). */
const char* fspass_version(void);

/* Thread-local message for the most recent failure; static storage. */
const char* fspass_last_error(void);

/* Parse a problem file / JSON text. Returns NULL on failure. */
fspass_problem* fspass_problem_from_file(const char* path);
fspass_problem* fspass_problem_from_string(const char* text);
void fspass_problem_free(fspass_problem* p);

/* Run a command (stability | feasibility | max-ifp | max-ofp | verify).
 * overrides_json may be NULL or a JSON object of option overrides (same
 * keys as the file's "options" plus "rho" and "dump_dir"). On success
 * *report_out receives the JSON report and *exit_code_out the CLI-style
 * code (0 ok, 2 certified negative). Returns nonzero only on internal
 * failure (parse errors etc. are reported inside the report with code 1). */
int fspass_run(const fspass_problem* p, const char* command, const char* overrides_json,
               char** report_out, int* exit_code_out);

void fspass_free_string(char* s);

#ifdef __cplusplus
}
#endif

#endif /* FSPASS_H */
