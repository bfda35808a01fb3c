#include "fttc/fttc.h"

#include <algorithm>
#include <cstring>
#include <dlfcn.h>
#include <fstream>
#include <new>
#include <string>
#include <variant>

#include "fttc/bessel.hpp"
#include "fttc/error.hpp"
#include "fttc/function_train.hpp"
#include "fttc/runner.hpp"
#include "fttc/tensor_train.hpp"

struct fttc_config {
  fttc::RunConfig cfg;
};

struct fttc_result {
  std::size_t cols = 0;
  std::vector<double> values;  // row-major
  std::size_t max_rank = 0;
  double max_norm_drift = 0.0;
  double wall_seconds = 0.0;
  std::vector<std::string> warnings;
};

struct fttc_state {
  std::variant<fttc::TensorTrain, fttc::FunctionTrain> value;
};

namespace {

thread_local std::string last_error;

fttc_status status_of(fttc::ErrorKind k) {
  switch (k) {
    case fttc::ErrorKind::invalid_argument: return FTTC_ERR_INVALID_ARGUMENT;
    case fttc::ErrorKind::config: return FTTC_ERR_CONFIG;
    case fttc::ErrorKind::divergence: return FTTC_ERR_DIVERGENCE;
    case fttc::ErrorKind::io: return FTTC_ERR_IO;
    case fttc::ErrorKind::numerical: return FTTC_ERR_NUMERICAL;
  }
  return FTTC_ERR_INTERNAL;
}

template <class F>
fttc_status guarded(F&& f) {
  try {
    f();
    last_error.clear();
    return FTTC_OK;
  } catch (const fttc::Error& e) {
    last_error = e.what();
    return status_of(e.kind());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return FTTC_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return FTTC_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown error";
    return FTTC_ERR_INTERNAL;
  }
}

fttc_status null_arg(const char* what) {
  last_error = std::string(what) + " is NULL";
  return FTTC_ERR_INVALID_ARGUMENT;
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

fttc::RunOptions options_of(const fttc_options* o) {
  fttc::RunOptions r;
  if (o) {
    if (o->out_dir) r.out_dir = o->out_dir;
    r.jobs = std::max<std::size_t>(1, o->jobs);
    r.verbose = o->verbose != 0;
  }
  return r;
}

}  // namespace

extern "C" {

const char* fttc_last_error(void) { return last_error.c_str(); }

const char* fttc_version(void) { return "1.0.0"; }

int fttc_set_threads(int n) {
  using SetThreads = void (*)(int);
  auto fn = reinterpret_cast<SetThreads>(dlsym(RTLD_DEFAULT, "openblas_set_num_threads"));
  if (!fn || n < 1) return 0;
  fn(n);
  return 1;
}

void fttc_string_free(char* s) { delete[] s; }

fttc_status fttc_config_parse(const char* text, fttc_config** out) {
  if (!text) return null_arg("text");
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] { *out = new fttc_config{fttc::parse_config(text)}; });
}

fttc_status fttc_config_load(const char* path, fttc_config** out) {
  if (!path) return null_arg("path");
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] { *out = new fttc_config{fttc::load_config(path)}; });
}

void fttc_config_free(fttc_config* cfg) { delete cfg; }

fttc_status fttc_config_set(fttc_config* cfg, const char* key, const char* value) {
  if (!cfg) return null_arg("cfg");
  if (!key) return null_arg("key");
  if (!value) return null_arg("value");
  return guarded([&] {
    // Re-parse with the assignment replacing any existing one.
    std::string text;
    const std::string k = key;
    const std::string current = fttc::print_config(cfg->cfg);
    std::size_t pos = 0;
    while (pos < current.size()) {
      const auto nl = current.find('\n', pos);
      const std::string line = current.substr(pos, nl - pos);
      pos = nl == std::string::npos ? current.size() : nl + 1;
      if (line.rfind(k + " =", 0) == 0) continue;
      text += line + "\n";
    }
    text += k + " = " + value + "\n";
    cfg->cfg = fttc::parse_config(text);
  });
}

fttc_status fttc_config_print(const fttc_config* cfg, char** out) {
  if (!cfg) return null_arg("cfg");
  if (!out) return null_arg("out");
  return guarded([&] { *out = dup_string(fttc::print_config(cfg->cfg)); });
}

fttc_status fttc_config_defaults(char** out) {
  if (!out) return null_arg("out");
  return guarded([&] { *out = dup_string(fttc::default_config_text()); });
}

fttc_status fttc_run(const fttc_config* cfg, const fttc_options* opts, fttc_result** out) {
  if (!cfg) return null_arg("cfg");
  if (out) *out = nullptr;
  return guarded([&] {
    const fttc::SimulationResult r = fttc::run_simulation(cfg->cfg, options_of(opts));
    if (!out) return;
    auto* res = new fttc_result;
    res->cols = 6;
    for (const auto& row : r.rows) {
      res->values.insert(res->values.end(), {row.t, row.s.real(), row.s.imag(), std::abs(row.s),
                                             row.norm, static_cast<double>(row.max_rank)});
    }
    res->max_rank = r.max_rank;
    res->max_norm_drift = r.max_norm_drift;
    res->wall_seconds = r.wall_seconds;
    res->warnings = r.warnings;
    *out = res;
  });
}

fttc_status fttc_converge(const fttc_config* cfg, const fttc_options* opts, fttc_result** out) {
  if (!cfg) return null_arg("cfg");
  if (out) *out = nullptr;
  return guarded([&] {
    const auto points = fttc::run_convergence_study(cfg->cfg, options_of(opts));
    if (!out) return;
    auto* res = new fttc_result;
    res->cols = 3;
    for (const auto& p : points) {
      res->values.insert(res->values.end(),
                         {p.t_final, static_cast<double>(p.n_terms), p.l2_error});
    }
    *out = res;
  });
}

fttc_status fttc_soft_compare(const fttc_config* cfg, const fttc_options* opts,
                              fttc_result** out) {
  if (!cfg) return null_arg("cfg");
  if (out) *out = nullptr;
  return guarded([&] {
    const auto points = fttc::run_soft_comparison(cfg->cfg, options_of(opts));
    if (!out) return;
    auto* res = new fttc_result;
    res->cols = 5;
    for (const auto& p : points) {
      res->values.insert(res->values.end(),
                         {p.dt, p.err_ttc, p.err_soft, p.acorr_err_ttc, p.acorr_err_soft});
    }
    *out = res;
  });
}

void fttc_result_free(fttc_result* res) { delete res; }

size_t fttc_result_rows(const fttc_result* res) {
  return res && res->cols ? res->values.size() / res->cols : 0;
}

size_t fttc_result_cols(const fttc_result* res) { return res ? res->cols : 0; }

double fttc_result_value(const fttc_result* res, size_t row, size_t col) {
  if (!res || col >= res->cols || row >= fttc_result_rows(res)) return 0.0;
  return res->values[row * res->cols + col];
}

size_t fttc_result_max_rank(const fttc_result* res) { return res ? res->max_rank : 0; }

double fttc_result_max_norm_drift(const fttc_result* res) {
  return res ? res->max_norm_drift : 0.0;
}

double fttc_result_wall_seconds(const fttc_result* res) { return res ? res->wall_seconds : 0.0; }

size_t fttc_result_warning_count(const fttc_result* res) {
  return res ? res->warnings.size() : 0;
}

const char* fttc_result_warning(const fttc_result* res, size_t i) {
  if (!res || i >= res->warnings.size()) return "";
  return res->warnings[i].c_str();
}

fttc_status fttc_bessel(double x, size_t n, double* values) {
  if (!values) return null_arg("values");
  return guarded([&] {
    const auto table = fttc::bessel_j_sequence(n, x);
    std::copy(table.values.begin(), table.values.end(), values);
  });
}

fttc_status fttc_bessel_csv(double x, size_t n, const char* path) {
  if (!path) return null_arg("path");
  return guarded([&] { fttc::write_bessel_csv(x, n, path); });
}

fttc_status fttc_state_load(const char* path, fttc_state** out) {
  if (!path) return null_arg("path");
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] {
    char magic[4] = {};
    {
      std::ifstream in(path, std::ios::binary);
      if (!in || !in.read(magic, 4)) throw fttc::Error(fttc::ErrorKind::io, std::string("cannot read ") + path);
    }
    if (std::memcmp(magic, fttc::kFtcMagic, 4) == 0) {
      *out = new fttc_state{fttc::ft_load(path)};
    } else {
      *out = new fttc_state{fttc::tt_load(path)};
    }
  });
}

void fttc_state_free(fttc_state* st) { delete st; }

int fttc_state_is_functional(const fttc_state* st) {
  return st && std::holds_alternative<fttc::FunctionTrain>(st->value) ? 1 : 0;
}

size_t fttc_state_order(const fttc_state* st) {
  if (!st) return 0;
  return std::visit([](const auto& v) { return v.order(); }, st->value);
}

size_t fttc_state_max_rank(const fttc_state* st) {
  if (!st) return 0;
  return std::visit([](const auto& v) { return v.max_rank(); }, st->value);
}

double fttc_state_norm(const fttc_state* st) {
  if (!st) return 0.0;
  if (const auto* tt = std::get_if<fttc::TensorTrain>(&st->value)) return fttc::tt_norm(*tt);
  return fttc::ft_norm(std::get<fttc::FunctionTrain>(st->value));
}

fttc_status fttc_state_distance(const fttc_state* a, const fttc_state* b, double* out) {
  if (!a) return null_arg("a");
  if (!b) return null_arg("b");
  if (!out) return null_arg("out");
  return guarded([&] {
    if (a->value.index() != b->value.index()) fttc::throw_invalid("states are of different kinds");
    if (const auto* ta = std::get_if<fttc::TensorTrain>(&a->value)) {
      const auto& tb = std::get<fttc::TensorTrain>(b->value);
      *out = fttc::tt_norm(fttc::tt_round(fttc::tt_add(*ta, fttc::tt_scale(tb, -1.0)), 0.0));
    } else {
      const auto& fa = std::get<fttc::FunctionTrain>(a->value);
      const auto& fb = std::get<fttc::FunctionTrain>(b->value);
      *out = fttc::ft_norm(fttc::ft_round(fttc::ft_add(fa, fttc::ft_scale(fb, -1.0)), 0.0));
    }
  });
}

}  // extern "C"
