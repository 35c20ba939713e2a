// Copyright (c) 2026 The uncerank Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//------------------------------------------------------------------------------

#include "uncerank/uncerank.h"

#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "calibration/calibration.hpp"
#include "common/config.hpp"
#include "common/errors.hpp"
#include "harness/commands.hpp"
#include "metrics/metrics.hpp"
#include "policy/policy.hpp"
#include "unckit/beta.hpp"

using namespace uncerank;

struct uncerank_config {
  KeyValueConfig kv;
  harness::ExperimentConfig exp;
};

namespace {

thread_local std::string g_last_error;

uncerank_status to_status(ErrorKind k) {
  switch (k) {
    case ErrorKind::Config:
      return UNCERANK_ERR_CONFIG;
    case ErrorKind::Data:
      return UNCERANK_ERR_DATA;
    case ErrorKind::Protocol:
      return UNCERANK_ERR_PROTOCOL;
    case ErrorKind::Io:
      return UNCERANK_ERR_IO;
    case ErrorKind::Shape:
      return UNCERANK_ERR_SHAPE;
    case ErrorKind::Lookup:
      return UNCERANK_ERR_LOOKUP;
    case ErrorKind::Calibration:
      return UNCERANK_ERR_CALIBRATION;
    case ErrorKind::UndefinedCorrelation:
      return UNCERANK_ERR_UNDEFINED;
  }
  return UNCERANK_ERR_INTERNAL;
}

uncerank_status fail(uncerank_status s, const std::string& msg) {
  g_last_error = msg;
  return s;
}

// Runs fn, translating every exception into a status code.
template <typename F>
uncerank_status guarded(F&& fn) {
  g_last_error.clear();
  try {
    fn();
    return UNCERANK_OK;
  } catch (const Error& e) {
    return fail(to_status(e.kind()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(UNCERANK_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(UNCERANK_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(UNCERANK_ERR_INTERNAL, "unknown exception");
  }
}

uncerank_status null_arg(const char* name) { return fail(UNCERANK_ERR_ARGUMENT, std::string(name) + " is null"); }

}  // namespace

extern "C" {

const char* uncerank_version(void) { return harness::kCodeVersion; }

const char* uncerank_last_error(void) { return g_last_error.c_str(); }

const char* uncerank_status_name(uncerank_status status) {
  switch (status) {
    case UNCERANK_OK:
      return "ok";
    case UNCERANK_ERR_CONFIG:
      return "config error";
    case UNCERANK_ERR_DATA:
      return "data error";
    case UNCERANK_ERR_PROTOCOL:
      return "protocol error";
    case UNCERANK_ERR_IO:
      return "i/o error";
    case UNCERANK_ERR_SHAPE:
      return "shape error";
    case UNCERANK_ERR_LOOKUP:
      return "lookup error";
    case UNCERANK_ERR_CALIBRATION:
      return "calibration error";
    case UNCERANK_ERR_UNDEFINED:
      return "undefined correlation";
    case UNCERANK_ERR_ARGUMENT:
      return "invalid argument";
    case UNCERANK_ERR_INTERNAL:
      return "internal error";
  }
  return "unknown status";
}

int uncerank_exit_code(uncerank_status status) {
  switch (status) {
    case UNCERANK_OK:
      return 0;
    case UNCERANK_ERR_CONFIG:
    case UNCERANK_ERR_ARGUMENT:
      return 2;
    case UNCERANK_ERR_IO:
      return 4;
    default:
      return 3;
  }
}

uncerank_status uncerank_config_load(const char* path, uncerank_config** out) {
  if (!path) return null_arg("path");
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] {
    auto* c = new uncerank_config;
    try {
      c->kv = KeyValueConfig::load(path);
      c->exp = harness::ExperimentConfig::from_config(c->kv);
    } catch (...) {
      delete c;
      throw;
    }
    *out = c;
  });
}

uncerank_status uncerank_config_set(uncerank_config* cfg, const char* key, const char* value) {
  if (!cfg) return null_arg("cfg");
  if (!key) return null_arg("key");
  if (!value) return null_arg("value");
  return guarded([&] {
    KeyValueConfig kv = cfg->kv;
    kv.set(key, value);
    cfg->exp = harness::ExperimentConfig::from_config(kv);
    cfg->kv = std::move(kv);
  });
}

void uncerank_config_free(uncerank_config* cfg) { delete cfg; }

uncerank_status uncerank_config_run_id(const uncerank_config* cfg, char* buf, size_t len) {
  if (!cfg) return null_arg("cfg");
  if (!buf) return null_arg("buf");
  const std::string id = cfg->exp.run_id();
  if (len < id.size() + 1) return fail(UNCERANK_ERR_ARGUMENT, "buffer too small for run id");
  std::memcpy(buf, id.c_str(), id.size() + 1);
  return UNCERANK_OK;
}

uncerank_status uncerank_run(const uncerank_config* cfg, const char* command) {
  if (!cfg) return null_arg("cfg");
  if (!command) return null_arg("command");
  const std::string c = command;
  void (*fn)(const harness::ExperimentConfig&) = nullptr;
  if (c == "simulate") fn = harness::cmd_simulate;
  else if (c == "train") fn = harness::cmd_train;
  else if (c == "calibrate") fn = harness::cmd_calibrate;
  else if (c == "eval") fn = harness::cmd_eval;
  else if (c == "ablate") fn = harness::cmd_ablate;
  else if (c == "report") fn = harness::cmd_report;
  if (!fn) return fail(UNCERANK_ERR_ARGUMENT, "unknown command '" + c + "'");
  return guarded([&] { fn(cfg->exp); });
}

uncerank_status uncerank_beta_from_logits(double u, double v, double* alpha, double* beta) {
  if (!alpha || !beta) return null_arg("output");
  return guarded([&] {
    const auto bp = unc::BetaParams::from_logits(u, v);
    *alpha = bp.alpha;
    *beta = bp.beta;
  });
}

uncerank_status uncerank_u_prob(double alpha, double beta, double* out) {
  if (!out) return null_arg("out");
  if (!(alpha > 0.0 && beta > 0.0)) return fail(UNCERANK_ERR_ARGUMENT, "alpha and beta must be positive");
  return guarded([&] { *out = unc::u_prob({alpha, beta}); });
}

uncerank_status uncerank_variance_decomposition(double alpha, double beta, double* aleatoric, double* epistemic,
                                                double* total) {
  if (!aleatoric || !epistemic || !total) return null_arg("output");
  if (!(alpha > 0.0 && beta > 0.0)) return fail(UNCERANK_ERR_ARGUMENT, "alpha and beta must be positive");
  return guarded([&] {
    const auto d = unc::variance_decomposition({alpha, beta});
    *aleatoric = d.aleatoric;
    *epistemic = d.epistemic;
    *total = d.total;
  });
}

uncerank_status uncerank_bayes_marginal_loglik(double alpha, double beta, int y, double* out) {
  if (!out) return null_arg("out");
  if (!(alpha > 0.0 && beta > 0.0)) return fail(UNCERANK_ERR_ARGUMENT, "alpha and beta must be positive");
  if (y != 0 && y != 1) return fail(UNCERANK_ERR_ARGUMENT, "y must be 0 or 1");
  return guarded([&] { *out = unc::bayes_marginal_loglik({alpha, beta}, y); });
}

uncerank_status uncerank_quantile(const double* values, size_t n, double q, double* out) {
  if (!out) return null_arg("out");
  if (!values && n > 0) return null_arg("values");
  return guarded([&] { *out = cal::quantile({values, n}, q); });
}

uncerank_status uncerank_score_lau(double r, double u_point, double u_prob, double tau_point, double tau_prob,
                                   double D, double* out) {
  if (!out) return null_arg("out");
  return guarded([&] {
    cal::CalibrationThresholds t;
    t.tau_point = tau_point;
    t.tau_prob = tau_prob;
    *out = pol::score_lau(r, pol::flag_risky(u_point, u_prob, t), D);
  });
}

uncerank_status uncerank_score_hau(double r, double u_point, double u_prob, double omega, double* out) {
  if (!out) return null_arg("out");
  return guarded([&] { *out = pol::score_hau(r, u_point, u_prob, omega); });
}

uncerank_status uncerank_aurc(const double* u, const double* e, size_t n, double* aurc, double* base_risk) {
  if (!aurc || !base_risk) return null_arg("output");
  if ((!u || !e) && n > 0) return null_arg("input");
  return guarded([&] {
    const auto rc = met::risk_coverage({u, n}, {e, n});
    *aurc = rc.aurc;
    *base_risk = rc.base_risk;
  });
}

uncerank_status uncerank_spearman(const double* u, const double* e, size_t n, double* out) {
  if (!out) return null_arg("out");
  if ((!u || !e) && n > 0) return null_arg("input");
  return guarded([&] { *out = met::spearman({u, n}, {e, n}); });
}

}  // extern "C"
