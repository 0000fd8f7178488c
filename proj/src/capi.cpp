#include "crdeg/crdeg.h"

#include <string>

#include "commands.hpp"

struct crdeg_problem {
  crdeg::ProblemFile p;
};

struct crdeg_report {
  crdeg::Report r;
  std::string text;
};

namespace {

thread_local std::string last_error;

crdeg::Overrides overrides(const crdeg_options* o) {
  crdeg::Overrides ov;
  if (!o) return ov;
  if (o->order >= 0) ov.order = o->order;
  if (o->k_max >= 0) ov.k_max = o->k_max;
  if (o->levels >= 0) ov.levels = o->levels;
  if (o->trials >= 0) ov.trials = o->trials;
  if (o->has_seed) ov.seed = o->seed;
  return ov;
}

crdeg_status fail(int code, const std::string& msg) {
  last_error = msg;
  return static_cast<crdeg_status>(code);
}

template <class F>
crdeg_status load(F&& parse, crdeg_problem** out) {
  if (!out) return fail(CRDEG_E_USAGE, "null output pointer");
  *out = nullptr;
  try {
    *out = new crdeg_problem{parse()};
    last_error.clear();
    return CRDEG_OK;
  } catch (const crdeg::Error& e) {
    return fail(crdeg::exit_code_for(e.code()), e.what());
  } catch (const std::exception& e) {
    return fail(CRDEG_E_INTERNAL, e.what());
  }
}

crdeg_status finish(crdeg::Report&& r, const crdeg_options* opt, crdeg_report** out) {
  auto* rep = new crdeg_report{std::move(r), {}};
  rep->text = rep->r.render(opt && opt->json);
  *out = rep;
  if (rep->r.exit_code != CRDEG_OK) {
    last_error = rep->r.body["error"]["message"].get<std::string>();
  } else {
    last_error.clear();
  }
  return static_cast<crdeg_status>(rep->r.exit_code);
}

}  // namespace

extern "C" {

void crdeg_options_init(crdeg_options* opt) {
  if (!opt) return;
  opt->order = opt->k_max = opt->levels = opt->trials = -1;
  opt->has_seed = 0;
  opt->seed = 0;
  opt->json = 0;
}

const char* crdeg_version(void) { return CRDEG_VERSION; }

const char* crdeg_last_error(void) { return last_error.c_str(); }

crdeg_status crdeg_problem_load(const char* path, const crdeg_options* opt, crdeg_problem** out) {
  if (!path) return fail(CRDEG_E_USAGE, "null path");
  return load([&] { return crdeg::parse_problem(path, overrides(opt)); }, out);
}

crdeg_status crdeg_problem_parse(const char* text, size_t len, const crdeg_options* opt, crdeg_problem** out) {
  if (!text) return fail(CRDEG_E_USAGE, "null text");
  return load([&] { return crdeg::parse_problem_text(std::string(text, len), overrides(opt)); }, out);
}

void crdeg_problem_free(crdeg_problem* p) { delete p; }

crdeg_status crdeg_run(const char* command, const crdeg_problem* first, const crdeg_problem* second,
                       const crdeg_options* opt, crdeg_report** out) {
  if (!command || !first || !out) return fail(CRDEG_E_USAGE, "null argument");
  try {
    // run-time overrides other than the order, which is fixed at load
    crdeg::ProblemFile a = first->p;
    std::optional<crdeg::ProblemFile> b;
    if (second) b = second->p;
    crdeg::Overrides ov = overrides(opt);
    for (crdeg::ProblemFile* p : {&a, b ? &*b : nullptr}) {
      if (!p) continue;
      if (ov.k_max) p->options.k_max = ov.k_max;
      if (ov.levels) p->options.levels = *ov.levels;
      if (ov.trials) p->options.trials = *ov.trials;
      if (ov.seed) p->options.seed = *ov.seed;
    }
    return finish(crdeg::run_command(command, a, b ? &*b : nullptr), opt, out);
  } catch (const std::exception& e) {
    return fail(CRDEG_E_INTERNAL, e.what());
  }
}

crdeg_status crdeg_run_files(const char* command, const char* const* paths, size_t npaths, const crdeg_options* opt,
                             crdeg_report** out) {
  if (!command || (!paths && npaths) || !out) return fail(CRDEG_E_USAGE, "null argument");
  try {
    std::vector<std::string> ps(paths, paths + npaths);
    return finish(crdeg::run_files(command, ps, overrides(opt)), opt, out);
  } catch (const std::exception& e) {
    return fail(CRDEG_E_INTERNAL, e.what());
  }
}

const char* crdeg_report_text(const crdeg_report* r) { return r ? r->text.c_str() : ""; }

crdeg_status crdeg_report_status(const crdeg_report* r) {
  return r ? static_cast<crdeg_status>(r->r.exit_code) : CRDEG_E_USAGE;
}

void crdeg_report_free(crdeg_report* r) { delete r; }

}
