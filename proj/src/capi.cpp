/*
 * Copyright 2026 fspass developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "fspass.h"

#include "fsp/errors.hpp"
#include "fsp/problem.hpp"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

namespace {

thread_local std::string g_last_error;

void set_error(const char* what) { g_last_error = what ? what : "unknown error"; }

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

struct fspass_problem {
  fsp::ProblemSpec spec;
};

extern "C" {

const char* fspass_version(void) { return "1.0.0"; }

const char* fspass_last_error(void) { return g_last_error.c_str(); }

fspass_problem* fspass_problem_from_file(const char* path) {
  if (!path) {
    set_error("path is null");
    return nullptr;
  }
  try {
    auto* p = new fspass_problem{fsp::parse_problem_file(path)};
    return p;
  } catch (const std::exception& e) {
    set_error(e.what());
    return nullptr;
  }
}

fspass_problem* fspass_problem_from_string(const char* text) {
  if (!text) {
    set_error("text is null");
    return nullptr;
  }
  try {
    auto* p = new fspass_problem{fsp::parse_problem_text(text)};
    return p;
  } catch (const std::exception& e) {
    set_error(e.what());
    return nullptr;
  }
}

void fspass_problem_free(fspass_problem* p) { delete p; }

int fspass_run(const fspass_problem* p, const char* command, const char* overrides_json,
               char** report_out, int* exit_code_out) {
  if (!p || !command || !report_out || !exit_code_out) {
    set_error("null argument");
    return 1;
  }
  try {
    fsp::ProblemSpec spec = p->spec;
    if (overrides_json && *overrides_json) fsp::apply_overrides(spec, overrides_json);
    fsp::RunResult rr = fsp::run_command(command, spec);
    *report_out = dup_string(rr.report_json);
    if (!*report_out) {
      set_error("out of memory");
      return 1;
    }
    *exit_code_out = rr.exit_code;
    return 0;
  } catch (const std::exception& e) {
    set_error(e.what());
    return 1;
  }
}

void fspass_free_string(char* s) { std::free(s); }

}  // extern "C"
