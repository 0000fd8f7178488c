#ifndef CRDEG_CRDEG_H
#define CRDEG_CRDEG_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define CRDEG_API __declspec(dllexport)
#else
#define CRDEG_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum crdeg_status {
  CRDEG_OK = 0,
  CRDEG_E_USAGE = 1,
  CRDEG_E_INPUT = 2,
  CRDEG_E_HYPOTHESIS = 3,
  CRDEG_E_INTERNAL = 4
} crdeg_status;

typedef struct crdeg_problem crdeg_problem;
typedef struct crdeg_report crdeg_report;

/* negative integer fields and has_seed = 0 mean "take the problem file's value" */
typedef struct crdeg_options {
  int order;
  int k_max;
  int levels;
  int trials;
  int has_seed;
  uint64_t seed;
  int json; /* report text is JSON when nonzero */
} crdeg_options;

CRDEG_API void crdeg_options_init(crdeg_options* opt);
CRDEG_API const char* crdeg_version(void);
/* message of the last failing call on this thread, "" if none */
CRDEG_API const char* crdeg_last_error(void);

CRDEG_API crdeg_status crdeg_problem_load(const char* path, const crdeg_options* opt, crdeg_problem** out);
CRDEG_API crdeg_status crdeg_problem_parse(const char* text, size_t len, const crdeg_options* opt, crdeg_problem** out);
CRDEG_API void crdeg_problem_free(crdeg_problem* p);

/* second may be NULL; only "jets" uses it.  *out receives a report even on
   failure (an error report) unless the arguments are invalid. */
CRDEG_API crdeg_status crdeg_run(const char* command, const crdeg_problem* first, const crdeg_problem* second,
                                 const crdeg_options* opt, crdeg_report** out);
/* load the files and run; load failures become error reports */
CRDEG_API crdeg_status crdeg_run_files(const char* command, const char* const* paths, size_t npaths,
                                       const crdeg_options* opt, crdeg_report** out);

CRDEG_API const char* crdeg_report_text(const crdeg_report* r);
CRDEG_API crdeg_status crdeg_report_status(const crdeg_report* r);
CRDEG_API void crdeg_report_free(crdeg_report* r);

#ifdef __cplusplus
}
#endif

#endif
