#include "amsbq/amsbq.h"

#include <cmath>
#include <fstream>
#include <new>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "amsbq/errors.hpp"
#include "amsbq/runner.hpp"

struct amsbq_config {
  amsbq::RunConfig config;
};

struct amsbq_result {
  amsbq::RunOutput output;
  std::string csv;
};

struct amsbq_summary {
  amsbq::CompareOutput output;
};

namespace {

thread_local std::string g_last_error;

amsbq_status fail(amsbq_status status, const std::string& detail) {
  g_last_error = detail;
  return status;
}

template <typename Fn>
amsbq_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return AMSBQ_OK;
  } catch (const std::invalid_argument& e) {
    return fail(AMSBQ_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::out_of_range& e) {
    return fail(AMSBQ_ERR_INVALID_ARGUMENT, e.what());
  } catch (const amsbq::IllConditionedError& e) {
    return fail(AMSBQ_ERR_MODEL, e.what());
  } catch (const amsbq::DiagnosticsError& e) {
    return fail(AMSBQ_ERR_MODEL, e.what());
  } catch (const amsbq::QueryError& e) {
    return fail(AMSBQ_ERR_MODEL, e.what());
  } catch (const std::ios_base::failure& e) {
    return fail(AMSBQ_ERR_IO, e.what());
  } catch (const std::runtime_error& e) {
    const std::string what = e.what();
    if (what.find("write") != std::string::npos || what.find("open") != std::string::npos) {
      return fail(AMSBQ_ERR_IO, what);
    }
    return fail(AMSBQ_ERR_MODEL, what);
  } catch (const std::exception& e) {
    return fail(AMSBQ_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(AMSBQ_ERR_INTERNAL, "unknown error");
  }
}

}  // namespace

extern "C" {

const char* amsbq_version(void) { return "0.1.0"; }

const char* amsbq_status_name(amsbq_status status) {
  switch (status) {
    case AMSBQ_OK: return "ok";
    case AMSBQ_ERR_INVALID_ARGUMENT: return "invalid argument";
    case AMSBQ_ERR_IO: return "i/o error";
    case AMSBQ_ERR_MODEL: return "model error";
    case AMSBQ_ERR_INTERNAL: return "internal error";
  }
  return "unknown";
}

const char* amsbq_last_error(void) { return g_last_error.c_str(); }

amsbq_status amsbq_config_new(amsbq_config** out) {
  if (out == nullptr) return fail(AMSBQ_ERR_INVALID_ARGUMENT, "null output pointer");
  *out = nullptr;
  return guarded([&] { *out = new amsbq_config(); });
}

amsbq_status amsbq_config_load(const char* path, amsbq_config** out) {
  if (path == nullptr || out == nullptr) {
    return fail(AMSBQ_ERR_INVALID_ARGUMENT, "null argument");
  }
  *out = nullptr;
  return guarded([&] {
    auto holder = new amsbq_config();
    try {
      holder->config = amsbq::parse_config_file(path);
    } catch (...) {
      delete holder;
      throw;
    }
    *out = holder;
  });
}

amsbq_status amsbq_config_set(amsbq_config* config, const char* key, const char* value) {
  if (config == nullptr || key == nullptr || value == nullptr) {
    return fail(AMSBQ_ERR_INVALID_ARGUMENT, "null argument");
  }
  return guarded([&] { amsbq::apply_config_entry(config->config, key, value); });
}

void amsbq_config_free(amsbq_config* config) { delete config; }

amsbq_status amsbq_run(const amsbq_config* config, amsbq_result** out) {
  if (config == nullptr || out == nullptr) {
    return fail(AMSBQ_ERR_INVALID_ARGUMENT, "null argument");
  }
  *out = nullptr;
  return guarded([&] {
    auto holder = new amsbq_result();
    try {
      holder->output = amsbq::run(config->config);
      holder->csv = amsbq::render_csv(holder->output);
    } catch (...) {
      delete holder;
      throw;
    }
    *out = holder;
  });
}

void amsbq_result_free(amsbq_result* result) { delete result; }

size_t amsbq_result_num_rows(const amsbq_result* result) {
  return result == nullptr ? 0 : result->output.rows.size();
}

double amsbq_result_final_estimate(const amsbq_result* result) {
  if (result == nullptr) return std::nan("");
  double estimate = std::nan("");
  for (const auto& row : result->output.rows) {
    if (row.has_model) estimate = row.ez;
  }
  return estimate;
}

double amsbq_result_final_rel_err(const amsbq_result* result) {
  if (result == nullptr) return std::nan("");
  double err = std::nan("");
  for (const auto& row : result->output.rows) {
    if (row.has_model) err = row.rel_err;
  }
  return err;
}

double amsbq_result_ground_truth(const amsbq_result* result) {
  return result == nullptr ? std::nan("") : result->output.ground_truth;
}

const char* amsbq_result_csv(const amsbq_result* result) {
  return result == nullptr ? "" : result->csv.c_str();
}

amsbq_status amsbq_result_write_csv(const amsbq_result* result, const char* path) {
  if (result == nullptr || path == nullptr) {
    return fail(AMSBQ_ERR_INVALID_ARGUMENT, "null argument");
  }
  return guarded([&] {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw std::runtime_error(std::string("cannot write output file: ") + path);
    file << result->csv;
  });
}

amsbq_status amsbq_compare(const amsbq_config* const* configs, size_t count,
                           amsbq_summary** out) {
  if (configs == nullptr || out == nullptr) {
    return fail(AMSBQ_ERR_INVALID_ARGUMENT, "null argument");
  }
  *out = nullptr;
  return guarded([&] {
    std::vector<amsbq::RunConfig> plain;
    plain.reserve(count);
    for (size_t i = 0; i < count; ++i) {
      if (configs[i] == nullptr) throw std::invalid_argument("null config in list");
      plain.push_back(configs[i]->config);
    }
    auto holder = new amsbq_summary();
    try {
      holder->output = amsbq::compare(plain);
    } catch (...) {
      delete holder;
      throw;
    }
    *out = holder;
  });
}

void amsbq_summary_free(amsbq_summary* summary) { delete summary; }

const char* amsbq_summary_table(const amsbq_summary* summary) {
  return summary == nullptr ? "" : summary->output.table.c_str();
}

const char* amsbq_summary_csv(const amsbq_summary* summary) {
  return summary == nullptr ? "" : summary->output.csv.c_str();
}

int amsbq_benchmark_exists(const char* id) {
  if (id == nullptr) return 0;
  return amsbq::benchmark_exists(id) ? 1 : 0;
}

const char* amsbq_benchmark_list(void) {
  static const std::string joined = [] {
    std::ostringstream os;
    const auto ids = amsbq::benchmark_ids();
    for (std::size_t i = 0; i < ids.size(); ++i) {
      if (i) os << '\n';
      os << ids[i];
    }
    return os.str();
  }();
  return joined.c_str();
}

}  // extern "C"
