/* plain C client of the shared library */
#include <stdio.h>
#include <string.h>

#include <crdeg/crdeg.h>

static int failures = 0;

#define EXPECT(cond)                                              \
  do {                                                            \
    if (!(cond)) {                                                \
      fprintf(stderr, "%s:%d: failed: %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                 \
    }                                                             \
  } while (0)

int main(void) {
  crdeg_options opt;
  crdeg_options_init(&opt);
  EXPECT(strlen(crdeg_version()) > 0);

  crdeg_problem* balls = NULL;
  EXPECT(crdeg_problem_load(CRDEG_FIXTURES "/balls.json", &opt, &balls) == CRDEG_OK);
  crdeg_report* rep = NULL;
  EXPECT(crdeg_run("degeneracy", balls, NULL, &opt, &rep) == CRDEG_OK);
  EXPECT(rep && strstr(crdeg_report_text(rep), "k0=1 s=1 constant") != NULL);
  EXPECT(crdeg_report_status(rep) == CRDEG_OK);
  crdeg_report_free(rep);

  /* JSON output and a reused problem handle */
  opt.json = 1;
  EXPECT(crdeg_run("holvf", balls, NULL, &opt, &rep) == CRDEG_OK);
  EXPECT(strstr(crdeg_report_text(rep), "\"schema\": \"crdeg/1\"") != NULL);
  crdeg_report_free(rep);
  opt.json = 0;

  /* overrides at load time */
  crdeg_problem* low = NULL;
  opt.order = 5;
  EXPECT(crdeg_problem_load(CRDEG_FIXTURES "/balls.json", &opt, &low) == CRDEG_OK);
  EXPECT(crdeg_run("degeneracy", low, NULL, &opt, &rep) == CRDEG_OK);
  EXPECT(strstr(crdeg_report_text(rep), "order: 5") != NULL);
  crdeg_report_free(rep);
  crdeg_problem_free(low);
  opt.order = -1;

  /* errors */
  crdeg_problem* bad = NULL;
  const char* text = "{\"order\": 3, \"nope\": 1}";
  EXPECT(crdeg_problem_parse(text, strlen(text), &opt, &bad) == CRDEG_E_INPUT);
  EXPECT(bad == NULL);
  EXPECT(strstr(crdeg_last_error(), "nope") != NULL);

  crdeg_problem* hq = NULL;
  EXPECT(crdeg_problem_load(CRDEG_FIXTURES "/hyperquadric.json", &opt, &hq) == CRDEG_OK);
  EXPECT(crdeg_run("degeneracy", hq, NULL, &opt, &rep) == CRDEG_E_INPUT);
  EXPECT(rep && strstr(crdeg_report_text(rep), "map required") != NULL);
  crdeg_report_free(rep);
  EXPECT(crdeg_run("frobnicate", hq, NULL, &opt, &rep) == CRDEG_E_USAGE);
  crdeg_report_free(rep);
  EXPECT(crdeg_run("degeneracy", NULL, NULL, &opt, &rep) == CRDEG_E_USAGE);
  crdeg_problem_free(hq);

  const char* paths[2] = {CRDEG_FIXTURES "/id.json", CRDEG_FIXTURES "/id.json"};
  EXPECT(crdeg_run_files("jets", paths, 2, &opt, &rep) == CRDEG_OK);
  EXPECT(strstr(crdeg_report_text(rep), "determined") != NULL);
  crdeg_report_free(rep);
  EXPECT(crdeg_run_files("jets", paths, 1, &opt, &rep) != CRDEG_OK);
  crdeg_report_free(rep);

  crdeg_problem_free(balls);
  crdeg_problem_free(NULL);
  crdeg_report_free(NULL);
  if (failures) fprintf(stderr, "%d failure(s)\n", failures);
  else printf("capi: all checks passed\n");
  return failures ? 1 : 0;
}
