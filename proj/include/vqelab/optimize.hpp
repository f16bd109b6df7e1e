// Copyright 2026 The vqelab Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
/**
 * @file
 * Gradient-based local minimization through Ceres' line-search solver:
 * L-BFGS (rank 10) or Polak-Ribiere nonlinear conjugate gradients, both
 * with a strong-Wolfe line search. Convergence is decided here, not by
 * Ceres: gradient infinity-norm <= grad_tol and the objective changed by
 * at most value_tol over each of the last `window` iterations.
 */
#pragma once

#include "error.hpp"

#include <ceres/first_order_function.h>
#include <ceres/gradient_problem.h>
#include <ceres/gradient_problem_solver.h>
#include <ceres/iteration_callback.h>
#include <glog/logging.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <mutex>
#include <span>
#include <string>
#include <vector>

namespace vqelab {

enum class Optimizer { LBFGS, CG };

inline Optimizer parse_optimizer(const std::string &s) {
    if (s == "lbfgs" || s == "l_bfgs_b" || s == "L_BFGS_B") {
        return Optimizer::LBFGS;
    }
    if (s == "cg") {
        return Optimizer::CG;
    }
    throw ValidationError("unknown optimizer '" + s + "'");
}

inline std::string to_string(Optimizer o) { return o == Optimizer::LBFGS ? "lbfgs" : "cg"; }

struct OptimizerOptions {
    Optimizer method = Optimizer::LBFGS;
    int budget = 10000; ///< objective evaluations
    double grad_tol = 1e-6;
    double value_tol = 1e-10;
    int window = 3;
    int lbfgs_memory = 10;
    double wolfe_c1 = 1e-4;
    double wolfe_c2_lbfgs = 0.9;
    double wolfe_c2_cg = 0.1;
};

struct TracePoint {
    double value = 0.0;
    double grad_norm = 0.0;
};

struct OptimizeResult {
    std::vector<double> x;
    double value = 0.0;
    double grad_norm = 0.0;
    std::vector<TracePoint> trace;
    int evaluations = 0;
    bool converged = false;
    bool budget_exhausted = false;
    std::string message;
};

/// Writes the gradient into `grad` when it is non-empty and returns the value.
using Objective = std::function<double(std::span<const double> x, std::span<double> grad)>;

namespace detail {
class CeresObjective final : public ceres::FirstOrderFunction {
  public:
    CeresObjective(const Objective &f, int n, int *evals, bool *non_finite)
        : f_(f), n_(n), evals_(evals), non_finite_(non_finite) {}

    bool Evaluate(const double *x, double *cost, double *gradient) const override {
        ++*evals_;
        const auto n = static_cast<std::size_t>(n_);
        std::vector<double> g(gradient ? n : 0);
        *cost = f_({x, n}, g);
        bool finite = std::isfinite(*cost);
        if (gradient) {
            std::copy(g.begin(), g.end(), gradient);
            finite = finite && std::all_of(g.begin(), g.end(), [](double v) { return std::isfinite(v); });
        }
        if (!finite) {
            *non_finite_ = true;
        }
        return finite;
    }
    int NumParameters() const override { return n_; }

  private:
    const Objective &f_;
    int n_;
    int *evals_;
    bool *non_finite_;
};

class ConvergenceMonitor final : public ceres::IterationCallback {
  public:
    ConvergenceMonitor(const OptimizerOptions &opt, const int *evals, const bool *non_finite,
                       std::vector<TracePoint> *trace)
        : opt_(opt), evals_(evals), non_finite_(non_finite), trace_(trace) {}

    ceres::CallbackReturnType operator()(const ceres::IterationSummary &s) override {
        trace_->push_back({s.cost, s.gradient_max_norm});
        if (*non_finite_) {
            return ceres::SOLVER_ABORT;
        }
        if (converged_now()) {
            converged = true;
            return ceres::SOLVER_TERMINATE_SUCCESSFULLY;
        }
        if (*evals_ >= opt_.budget) {
            budget_hit = true;
            return ceres::SOLVER_TERMINATE_SUCCESSFULLY;
        }
        return ceres::SOLVER_CONTINUE;
    }

    bool converged = false;
    bool budget_hit = false;

  private:
    [[nodiscard]] bool converged_now() const {
        const auto &t = *trace_;
        if (t.back().grad_norm > opt_.grad_tol) {
            return false;
        }
        const auto w = static_cast<std::size_t>(opt_.window);
        if (t.size() <= w) {
            return false;
        }
        for (std::size_t i = t.size() - w; i < t.size(); ++i) {
            if (std::abs(t[i].value - t[i - 1].value) > opt_.value_tol) {
                return false;
            }
        }
        return true;
    }

    const OptimizerOptions &opt_;
    const int *evals_;
    const bool *non_finite_;
    std::vector<TracePoint> *trace_;
};
} // namespace detail

/**
 * Local minimization from x0. When Ceres stops on its own (no further
 * decrease possible) the run counts as converged if the final gradient
 * meets grad_tol.
 */
inline OptimizeResult minimize(const Objective &f, std::vector<double> x0,
                               const OptimizerOptions &opt = {}) {
    if (opt.budget < 1) {
        throw ValidationError("evaluation budget must be positive");
    }
    OptimizeResult r;
    if (x0.empty()) {
        r.value = f(x0, {});
        r.evaluations = 1;
        if (!std::isfinite(r.value)) {
            throw RuntimeFailure("non-finite objective value");
        }
        r.trace.push_back({r.value, 0.0});
        r.converged = true;
        r.message = "no parameters";
        return r;
    }
    static std::once_flag quiet;
    std::call_once(quiet, [] { FLAGS_minloglevel = std::max(FLAGS_minloglevel, google::GLOG_ERROR); });
    const int n = static_cast<int>(x0.size());
    int evals = 0;
    bool non_finite = false;
    ceres::GradientProblem problem(new detail::CeresObjective(f, n, &evals, &non_finite));
    detail::ConvergenceMonitor monitor(opt, &evals, &non_finite, &r.trace);
    ceres::GradientProblemSolver::Options o;
    o.line_search_type = ceres::WOLFE;
    o.line_search_sufficient_function_decrease = opt.wolfe_c1;
    if (opt.method == Optimizer::LBFGS) {
        o.line_search_direction_type = ceres::LBFGS;
        o.max_lbfgs_rank = opt.lbfgs_memory;
        o.line_search_sufficient_curvature_decrease = opt.wolfe_c2_lbfgs;
    } else {
        o.line_search_direction_type = ceres::NONLINEAR_CONJUGATE_GRADIENT;
        o.nonlinear_conjugate_gradient_type = ceres::POLAK_RIBIERE;
        o.line_search_sufficient_curvature_decrease = opt.wolfe_c2_cg;
    }
    o.max_num_iterations = opt.budget;
    o.function_tolerance = 0.0;
    o.gradient_tolerance = 0.0;
    o.parameter_tolerance = 0.0;
    o.logging_type = ceres::SILENT;
    o.minimizer_progress_to_stdout = false;
    o.callbacks.push_back(&monitor);
    ceres::GradientProblemSolver::Summary summary;
    ceres::Solve(o, problem, x0.data(), &summary);
    if (non_finite) {
        throw RuntimeFailure("non-finite objective or gradient during minimization");
    }
    std::vector<double> g(x0.size());
    r.value = f(x0, g);
    r.grad_norm = 0.0;
    for (double v : g) {
        r.grad_norm = std::max(r.grad_norm, std::abs(v));
    }
    r.x = std::move(x0);
    r.evaluations = evals + 1;
    r.budget_exhausted = monitor.budget_hit;
    r.converged = monitor.converged || (!monitor.budget_hit && r.grad_norm <= opt.grad_tol);
    r.message = summary.message;
    return r;
}

} // namespace vqelab
