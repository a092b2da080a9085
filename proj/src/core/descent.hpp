#pragma once

#include <cmath>
#include <string>
#include <vector>

namespace gsc {

struct DescentStatus {
  double initial_loss = 0.0;
  double final_loss = 0.0;
  int iterations_run = 0;
  int backoffs = 0;
  bool aborted = false;
  std::string abort_reason;
};

// Plain gradient descent with per-step backoff: each iteration starts from the
// base learning rate and halves it until the step does not increase the loss
// (or the step underflows, in which case the parameters are kept). The loss
// trace is therefore non-increasing. Candidate steps with a non-finite loss
// are treated as increases.
//
// EvalOut must expose a `double total` member. `eval` evaluates the loss at
// the currently applied parameters; `grad(cur)` computes the gradient at the
// currently applied parameters given their evaluation; `apply` pushes a
// parameter vector into the model. `on_iteration` is called once per
// iteration with the pre-step state for trace recording.
template <class EvalOut, class EvalFn, class GradFn, class ApplyFn, class HookFn>
DescentStatus gradient_descent_backoff(std::vector<double>& params, double lo, double hi,
                                       int iters, double lr, int max_backoff, EvalFn&& eval,
                                       GradFn&& grad, ApplyFn&& apply, HookFn&& on_iteration) {
  DescentStatus status;
  apply(params);
  EvalOut cur = eval();
  status.initial_loss = cur.total;
  if (!std::isfinite(cur.total)) {
    status.aborted = true;
    status.abort_reason = "non-finite loss at initialization";
    status.final_loss = cur.total;
    return status;
  }

  auto clampv = [&](double v) { return v < lo ? lo : (v > hi ? hi : v); };

  for (int k = 0; k < iters; ++k) {
    ++status.iterations_run;
    on_iteration(cur);
    const std::vector<double> g = grad(cur);

    double lr_eff = lr;
    bool accepted = false;
    for (int b = 0; b <= max_backoff; ++b) {
      std::vector<double> cand(params.size());
      bool moved = false;
      for (std::size_t i = 0; i < params.size(); ++i) {
        cand[i] = clampv(params[i] - lr_eff * g[i]);
        moved = moved || cand[i] != params[i];
      }
      if (!moved) {
        accepted = true;  // no-op step; loss unchanged
        break;
      }
      apply(cand);
      const EvalOut c = eval();
      if (std::isfinite(c.total) && c.total <= cur.total) {
        params = std::move(cand);
        cur = c;
        accepted = true;
        break;
      }
      ++status.backoffs;
      lr_eff *= 0.5;
    }
    if (!accepted) apply(params);  // restore last finite state
  }
  status.final_loss = cur.total;
  return status;
}

}  // namespace gsc
