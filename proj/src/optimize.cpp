// Copyright 2026 The qwft authors
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

#include "qwft/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numeric>
#include <sstream>

namespace qwft {

namespace {

Eigen::Index generator_dim(std::size_t param_count) {
  const auto d = static_cast<Eigen::Index>(std::llround(
      std::sqrt(static_cast<double>(param_count))));
  if (d < 1 || static_cast<std::size_t>(d * d) != param_count) {
    std::ostringstream os;
    os << "unitary_from_params: parameter count " << param_count
       << " is not a square";
    throw InvalidInput(os.str());
  }
  return d;
}

HermitianOperator generator_from_params(const std::vector<double>& theta) {
  const Eigen::Index d = generator_dim(theta.size());
  ComplexMatrix g = ComplexMatrix::Zero(d, d);
  for (Eigen::Index j = 0; j < d; ++j) g(j, j) = theta[j];
  std::size_t idx = static_cast<std::size_t>(d);
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index k = j + 1; k < d; ++k) {
      const Complex value(theta[idx], theta[idx + 1]);
      idx += 2;
      g(j, k) = value;
      g(k, j) = std::conj(value);
    }
  }
  return HermitianOperator(std::move(g));
}

}  // namespace

UnitaryOperator unitary_from_params(const std::vector<double>& theta) {
  return UnitaryOperator(unitary_exp(generator_from_params(theta)));
}

std::vector<double> params_from_unitary(const UnitaryOperator& u) {
  // Principal log via the Schur form: for a unitary (normal) matrix the
  // Schur factor is diagonal and Q is exactly unitary, which stays robust
  // under degenerate eigenvalues.
  Eigen::ComplexSchur<ComplexMatrix> schur(u.matrix());
  if (schur.info() != Eigen::Success) {
    throw InvalidInput("params_from_unitary: Schur decomposition failed");
  }
  const Eigen::Index d = u.dim();
  ComplexMatrix g = ComplexMatrix::Zero(d, d);
  const ComplexMatrix& q = schur.matrixU();
  for (Eigen::Index k = 0; k < d; ++k) {
    const double phase = std::arg(schur.matrixT()(k, k));
    g += -phase * q.col(k) * q.col(k).adjoint();
  }
  HermitianOperator generator(0.5 * (g + g.adjoint().eval()), 1e-6);
  std::vector<double> theta(static_cast<std::size_t>(d * d), 0.0);
  for (Eigen::Index j = 0; j < d; ++j) {
    theta[static_cast<std::size_t>(j)] = generator.matrix()(j, j).real();
  }
  std::size_t idx = static_cast<std::size_t>(d);
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index k = j + 1; k < d; ++k) {
      theta[idx] = generator.matrix()(j, k).real();
      theta[idx + 1] = generator.matrix()(j, k).imag();
      idx += 2;
    }
  }
  const UnitaryOperator round_trip = unitary_from_params(theta);
  if (max_abs(round_trip.matrix() - u.matrix()) > 1e-8) {
    throw InvalidInput("params_from_unitary: round trip failed (degenerate "
                       "eigenbasis?)");
  }
  return theta;
}

POVM povm_from_params(const std::vector<double>& theta, Eigen::Index env_dim,
                      int outcomes) {
  if (outcomes < 1 || env_dim < 1) {
    throw InvalidInput("povm_from_params: bad dimensions");
  }
  const Eigen::Index joint = outcomes * env_dim;
  if (theta.size() != static_cast<std::size_t>(joint * joint)) {
    std::ostringstream os;
    os << "povm_from_params: expected " << joint * joint
       << " parameters, got " << theta.size();
    throw InvalidInput(os.str());
  }
  const UnitaryOperator w = unitary_from_params(theta);
  const ComplexMatrix v = w.matrix().leftCols(env_dim);
  std::vector<ComplexMatrix> elements;
  for (int i = 0; i < outcomes; ++i) {
    const ComplexMatrix block = v.middleRows(i * env_dim, env_dim);
    elements.push_back(block.adjoint() * block);
  }
  return POVM(std::move(elements));
}

namespace {

struct RestartOutcome {
  double best = std::numeric_limits<double>::infinity();
  std::vector<double> best_point;
  std::vector<double> trace;  // objective at the best-so-far, per evaluation
  long evaluations = 0;
  bool converged = false;
};

// Nelder-Mead with dimension-adaptive coefficients. Records the best-so-far
// objective after every evaluation.
template <typename F>
void nelder_mead(const F& objective, std::vector<double> x0,
                 double initial_step, int max_iters, double tol,
                 RestartOutcome* out) {
  const std::size_t n = x0.size();
  const double alpha = 1.0;
  const double beta_e = 1.0 + 2.0 / static_cast<double>(n);
  const double gamma_c = 0.75 - 0.5 / static_cast<double>(n);
  const double delta_s = 1.0 - 1.0 / static_cast<double>(n);

  auto eval = [&](const std::vector<double>& x) {
    const double f = objective(x);
    ++out->evaluations;
    if (f < out->best) {
      out->best = f;
      out->best_point = x;
    }
    out->trace.push_back(out->best);
    return f;
  };

  std::vector<std::vector<double>> simplex;
  std::vector<double> values;
  simplex.push_back(x0);
  values.push_back(eval(x0));
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<double> vertex = x0;
    vertex[j] += initial_step;
    simplex.push_back(vertex);
    values.push_back(eval(vertex));
  }

  std::vector<std::size_t> order(n + 1);
  for (int iter = 0; iter < max_iters; ++iter) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second_worst = order[n - 1];

    if (std::abs(values[worst] - values[best]) <=
        tol * (1.0 + std::abs(values[best]))) {
      out->converged = true;
      return;
    }

    std::vector<double> centroid(n, 0.0);
    for (std::size_t v = 0; v < simplex.size(); ++v) {
      if (v == worst) continue;
      for (std::size_t j = 0; j < n; ++j) centroid[j] += simplex[v][j];
    }
    for (double& c : centroid) c /= static_cast<double>(n);

    auto blend = [&](double coeff) {
      std::vector<double> point(n);
      for (std::size_t j = 0; j < n; ++j) {
        point[j] = centroid[j] + coeff * (centroid[j] - simplex[worst][j]);
      }
      return point;
    };

    const std::vector<double> reflected = blend(alpha);
    const double f_reflected = eval(reflected);
    if (f_reflected < values[best]) {
      const std::vector<double> expanded = blend(alpha * beta_e);
      const double f_expanded = eval(expanded);
      if (f_expanded < f_reflected) {
        simplex[worst] = expanded;
        values[worst] = f_expanded;
      } else {
        simplex[worst] = reflected;
        values[worst] = f_reflected;
      }
      continue;
    }
    if (f_reflected < values[second_worst]) {
      simplex[worst] = reflected;
      values[worst] = f_reflected;
      continue;
    }
    const bool outside = f_reflected < values[worst];
    const std::vector<double> contracted =
        blend(outside ? alpha * gamma_c : -gamma_c);
    const double f_contracted = eval(contracted);
    if (f_contracted < std::min(f_reflected, values[worst])) {
      simplex[worst] = contracted;
      values[worst] = f_contracted;
      continue;
    }
    // Shrink toward the best vertex.
    for (std::size_t v = 0; v < simplex.size(); ++v) {
      if (v == best) continue;
      for (std::size_t j = 0; j < n; ++j) {
        simplex[v][j] =
            simplex[best][j] + delta_s * (simplex[v][j] - simplex[best][j]);
      }
      values[v] = eval(simplex[v]);
    }
  }
}

}  // namespace

OptimizationResult minimize_bound(const HermitianOperator& h0,
                                  const HermitianOperator& ht, double beta,
                                  const OptimizationConfig& config) {
  if (config.restarts < 1 || config.max_iters < 1 || !(config.tol > 0.0) ||
      config.povm_outcomes < 1) {
    throw InvalidInput("minimize_bound: bad configuration");
  }
  const Eigen::Index d = h0.dim();
  if (ht.dim() != d) throw InvalidInput("minimize_bound: dimension mismatch");
  const std::size_t unitary_params = static_cast<std::size_t>(d * d);
  const Eigen::Index joint = config.povm_outcomes * d;
  const std::size_t povm_params = static_cast<std::size_t>(joint * joint);
  const std::size_t total_params = unitary_params + povm_params;

  const DensityOperator gibbs0 = gibbs_state(h0, beta);
  const Purification psi = purify(gibbs0);
  const double df = delta_f(h0, ht, beta);
  const double certificate_tol = 1e-9 * std::max(1.0, std::abs(df));

  const auto objective = [&](const std::vector<double>& theta) {
    const std::vector<double> theta_u(theta.begin(),
                                      theta.begin() + unitary_params);
    const std::vector<double> theta_p(theta.begin() + unitary_params,
                                      theta.end());
    const UnitaryOperator u = unitary_from_params(theta_u);
    const POVM povm = povm_from_params(theta_p, d, config.povm_outcomes);
    const Decomposition decomposition = decompose_via_povm(psi, povm);
    // work_report enforces the bound chain internally; a violation aborts
    // the whole search because it can only mean an implementation bug.
    const WorkReport report = work_report(decomposition, u, h0, ht, beta);
    if (report.delta_f_tilde < df - certificate_tol) {
      std::ostringstream os;
      os << "minimize_bound: evaluated objective " << report.delta_f_tilde
         << " undercuts delta_f " << df;
      throw InequalityViolation(os.str());
    }
    return report.delta_f_tilde;
  };

  const Rng base(config.seed);
  const auto run_restart = [&](int restart) {
    RestartOutcome outcome;
    std::vector<double> x0(total_params, 0.0);
    if (restart == 0 && config.initial_point.has_value()) {
      if (config.initial_point->size() != total_params) {
        throw InvalidInput("minimize_bound: initial point has wrong length");
      }
      x0 = *config.initial_point;
    } else {
      Rng rng = base.fork(static_cast<std::uint64_t>(restart));
      for (double& v : x0) v = rng.gaussian() * 0.8;
    }
    nelder_mead(objective, x0, config.initial_step, config.max_iters,
                config.tol, &outcome);
    // Polish round: restarting the simplex at the incumbent escapes the
    // collapsed shape that plain Nelder-Mead ends in.
    nelder_mead(objective, outcome.best_point, 0.1 * config.initial_step,
                config.max_iters / 2, config.tol, &outcome);
    return outcome;
  };

  std::vector<RestartOutcome> outcomes(config.restarts);
  if (config.jobs > 1) {
    std::vector<std::future<RestartOutcome>> futures;
    futures.reserve(config.restarts);
    for (int r = 0; r < config.restarts; ++r) {
      futures.push_back(
          std::async(std::launch::async, [&, r] { return run_restart(r); }));
    }
    for (int r = 0; r < config.restarts; ++r) outcomes[r] = futures[r].get();
  } else {
    for (int r = 0; r < config.restarts; ++r) outcomes[r] = run_restart(r);
  }

  // Deterministic merge: min by objective, ties broken by restart index.
  OptimizationResult result;
  result.delta_f = df;
  int winner = 0;
  for (int r = 1; r < config.restarts; ++r) {
    if (outcomes[r].best < outcomes[winner].best) winner = r;
  }
  result.best_objective = outcomes[winner].best;
  result.best_parameters = outcomes[winner].best_point;
  result.certificate_gap = result.best_objective - df;
  result.converged = outcomes[winner].converged;
  for (const auto& outcome : outcomes) result.evaluations += outcome.evaluations;
  // Best-so-far trace in deterministic restart-major evaluation order.
  double running = std::numeric_limits<double>::infinity();
  for (const auto& outcome : outcomes) {
    for (double v : outcome.trace) {
      running = std::min(running, v);
      result.best_trace.push_back(running);
    }
  }
  return result;
}

}  // namespace qwft
