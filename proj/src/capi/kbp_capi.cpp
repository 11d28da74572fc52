#include "kbp/kbp.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "kbp/commands.hpp"
#include "kbp/errors.hpp"
#include "kbp/template.hpp"
#include "kbp/validation.hpp"
#include "kbp/version.hpp"

struct kbp_session {
  explicit kbp_session(kbp::Session s) : session(std::move(s)) {}
  kbp::Session session;
};

namespace {

thread_local std::string last_error;

kbp_status fail(kbp_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

char* duplicate(const std::string& s) {
  auto* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out != nullptr) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

template <typename F>
kbp_status guarded(F&& body) {
  last_error.clear();
  try {
    body();
    return KBP_OK;
  } catch (const kbp::ConfigError& e) {
    return fail(KBP_ERR_CONFIG, e.what());
  } catch (const kbp::TemplateError& e) {
    return fail(KBP_ERR_CONFIG, e.what());
  } catch (const kbp::ParseError& e) {
    return fail(KBP_ERR_PARSE, e.what());
  } catch (const kbp::MissingCacheError& e) {
    return fail(KBP_ERR_MISSING_CACHE, e.what());
  } catch (const kbp::TransportError& e) {
    return fail(KBP_ERR_BACKEND, e.what());
  } catch (const kbp::ContractError& e) {
    return fail(KBP_ERR_BACKEND, e.what());
  } catch (const kbp::RetrievalError& e) {
    return fail(KBP_ERR_BACKEND, e.what());
  } catch (const kbp::Error& e) {
    return fail(KBP_ERR_INTERNAL, e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return fail(KBP_ERR_IO, e.what());
  } catch (const std::bad_alloc&) {
    return fail(KBP_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(KBP_ERR_INTERNAL, e.what());
  }
}

kbp::CommandOptions to_options(const kbp_run_options* o) {
  kbp::CommandOptions out;
  if (o == nullptr) return out;
  if (o->system != nullptr) out.system = o->system;
  for (size_t i = 0; i < o->relation_count && o->relations != nullptr; ++i)
    if (o->relations[i] != nullptr) out.relations.emplace_back(o->relations[i]);
  out.refresh = o->refresh != 0;
  out.explain = o->explain != 0;
  out.pooled = o->pooled != 0;
  out.jobs = o->jobs;
  if (o->has_seed) out.seed = o->seed;
  if (o->fraction > 0) out.fraction = o->fraction;
  if (o->repetitions > 0) out.repetitions = o->repetitions;
  if (o->thresholds_path != nullptr) out.thresholds = o->thresholds_path;
  if (o->predictions_path != nullptr) out.predictions = o->predictions_path;
  if (o->kind != nullptr) out.kind = o->kind;
  if (o->progress != nullptr) {
    auto fn = o->progress;
    void* user = o->progress_user;
    out.progress = [fn, user](std::size_t done, std::size_t total) { fn(done, total, user); };
  }
  return out;
}

using Command = nlohmann::json (*)(kbp::Session&, const kbp::CommandOptions&);

kbp_status run(kbp_session* session, const kbp_run_options* options, char** summary, Command cmd) {
  if (session == nullptr) return fail(KBP_ERR_INVALID_ARGUMENT, "session is null");
  if (summary != nullptr) *summary = nullptr;
  return guarded([&] {
    const auto result = cmd(session->session, to_options(options));
    if (summary != nullptr) *summary = duplicate(result.dump(2));
  });
}

}  // namespace

extern "C" {

const char* kbp_version(void) { return kbp::kVersionString; }

const char* kbp_last_error(void) { return last_error.c_str(); }

const char* kbp_status_name(kbp_status status) {
  switch (status) {
    case KBP_OK: return "ok";
    case KBP_ERR_INVALID_ARGUMENT: return "invalid argument";
    case KBP_ERR_CONFIG: return "configuration error";
    case KBP_ERR_PARSE: return "parse error";
    case KBP_ERR_MISSING_CACHE: return "missing cache";
    case KBP_ERR_BACKEND: return "backend error";
    case KBP_ERR_IO: return "i/o error";
    case KBP_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

int kbp_exit_code(kbp_status status) {
  if (status == KBP_OK) return 0;
  if (status == KBP_ERR_CONFIG || status == KBP_ERR_INVALID_ARGUMENT) return 2;
  return 1;
}

void kbp_run_options_init(kbp_run_options* options) {
  if (options == nullptr) return;
  std::memset(options, 0, sizeof *options);
  options->system = "satori";
  options->kind = "all";
}

kbp_status kbp_session_open(const char* config_path, kbp_session** out) {
  if (out == nullptr) return fail(KBP_ERR_INVALID_ARGUMENT, "out is null");
  *out = nullptr;
  if (config_path == nullptr) return fail(KBP_ERR_INVALID_ARGUMENT, "config path is null");
  const auto status = guarded([&] { *out = new kbp_session(kbp::Session::open(config_path)); });
  // Anything that goes wrong while loading the configuration and the files
  // it names is a configuration problem for the caller.
  if (status == KBP_ERR_PARSE || status == KBP_ERR_IO) return KBP_ERR_CONFIG;
  return status;
}

void kbp_session_close(kbp_session* session) { delete session; }

kbp_status kbp_fetch_premises(kbp_session* s, const kbp_run_options* o, char** summary) {
  return run(s, o, summary, &kbp::cmd_fetch_premises);
}
kbp_status kbp_predict(kbp_session* s, const kbp_run_options* o, char** summary) {
  return run(s, o, summary, &kbp::cmd_predict);
}
kbp_status kbp_calibrate(kbp_session* s, const kbp_run_options* o, char** summary) {
  return run(s, o, summary, &kbp::cmd_calibrate);
}
kbp_status kbp_evaluate(kbp_session* s, const kbp_run_options* o, char** summary) {
  return run(s, o, summary, &kbp::cmd_evaluate);
}
kbp_status kbp_traingen(kbp_session* s, const kbp_run_options* o, char** summary) {
  return run(s, o, summary, &kbp::cmd_traingen);
}
kbp_status kbp_regime(kbp_session* s, const kbp_run_options* o, char** summary) {
  return run(s, o, summary, &kbp::cmd_regime);
}

kbp_status kbp_entail_probability(double entail, double contradiction, double neutral, double* out) {
  if (out == nullptr) return fail(KBP_ERR_INVALID_ARGUMENT, "out is null");
  return guarded([&] { *out = kbp::entail_probability({entail, contradiction, neutral}); });
}

kbp_status kbp_render_template(const char* tmpl, const char* subject, const char* object, char** out) {
  if (tmpl == nullptr || subject == nullptr || out == nullptr) return fail(KBP_ERR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    std::optional<std::string> obj;
    if (object != nullptr) obj = object;
    *out = duplicate(kbp::render_template(tmpl, subject, obj));
  });
}

void kbp_string_free(char* s) { std::free(s); }

}  // extern "C"
