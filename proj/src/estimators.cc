#include "paircomp/estimators.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <Eigen/Dense>
#include <boost/math/tools/toms748_solve.hpp>

#include "paircomp/error.h"

namespace paircomp {
namespace {

constexpr long kMmWarmupSweeps = 200;
constexpr double kMmWarmupTolerance = 1e-6;

// d/dx ln F(x).
double LogCdfSlope(ModelKind model, double x) {
  if (model == ModelKind::kLogistic) return Cdf(model, -x);
  const double log_density =
      -0.5 * x * x - 0.5 * std::log(2.0 * std::numbers::pi);
  return std::exp(log_density - LogCdf(model, x));
}

// d^2/dx^2 ln F(x); negative for both models.
double LogCdfCurvature(ModelKind model, double x) {
  if (model == ModelKind::kLogistic) return -Density(model, x);
  const double h = LogCdfSlope(model, x);
  return -h * (x + h);
}

// ln F(x) in extended precision. The log-likelihood is summed with it so
// that steps whose gain is below double rounding still register as gains.
long double ExtendedLogCdf(ModelKind model, long double x) {
  if (model == ModelKind::kLogistic) {
    return x >= 0.0L ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x));
  }
  constexpr long double kSqrt2 = 1.41421356237309504880168872420969808L;
  if (x > -100.0L) return std::log(0.5L * std::erfc(-x / kSqrt2));
  const long double q = 1.0L / (x * x);
  const long double series =
      q * (-1.0L + q * (3.0L + q * (-15.0L + q * (105.0L - q * 945.0L))));
  constexpr long double kLogSqrt2Pi = 0.918938533204672741780329736405617640L;
  return -0.5L * x * x - std::log(-x) - kLogSqrt2Pi + std::log1p(series);
}

Eigen::MatrixXd ToDense(const Ipcm& pcm) {
  const int n = pcm.n();
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n);
  for (const auto& [key, value] : pcm.entries()) a(key.first, key.second) = value;
  return a;
}

// Principal eigenpair by power iteration; returns lambda and writes the
// eigenvector (sum 1) into `w`.
double PowerIteration(const Eigen::MatrixXd& a, Eigen::VectorXd& w,
                      const EmOptions& options) {
  const auto n = a.rows();
  w = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  for (long it = 0; it < options.max_power_iterations; ++it) {
    const Eigen::VectorXd next = a * w;
    const double lambda = next.sum();
    const double residual = (next - lambda * w).cwiseAbs().maxCoeff();
    if (residual <= options.eigen_residual * lambda) {
      w = next / lambda;
      return lambda;
    }
    w = next / lambda;
  }
  throw NoConvergence("power iteration did not converge",
                      options.max_power_iterations);
}

struct MissingEntry {
  int i;
  int j;
};

// d lambda_max / dt for a(i, j) = exp(t), a(j, i) = exp(-t), from the left
// (u) and right (v) Perron vectors.
double LambdaSlope(const Eigen::MatrixXd& a, const MissingEntry& e,
                   const EmOptions& options) {
  Eigen::VectorXd v, u;
  PowerIteration(a, v, options);
  PowerIteration(a.transpose(), u, options);
  return (u(e.i) * a(e.i, e.j) * v(e.j) - u(e.j) * a(e.j, e.i) * v(e.i)) / u.dot(v);
}

// Minimizes lambda_max over the missing entries, parametrized as
// a(i, j) = exp(t). lambda_max is convex in t, so cyclic coordinate descent
// with exact line minimization reaches the unique optimum. Each line
// minimum is the root of the slope inside an expanding bracket.
Eigen::MatrixXd OptimalCompletion(const Ipcm& pcm, const EmOptions& options) {
  const int n = pcm.n();
  Eigen::MatrixXd a = ToDense(pcm);
  std::vector<MissingEntry> missing;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (!pcm.Known(i, j)) missing.push_back({i, j});
    }
  }
  // The least-squares completion is exact for consistent data and a good
  // start otherwise.
  const WeightVector start = Llsm(pcm);
  std::vector<double> t(missing.size());
  for (std::size_t k = 0; k < missing.size(); ++k) {
    t[k] = std::log(start[missing[k].i]) - std::log(start[missing[k].j]);
  }
  const auto assign = [&a](const MissingEntry& e, double value) {
    a(e.i, e.j) = std::exp(value);
    a(e.j, e.i) = std::exp(-value);
  };
  for (std::size_t k = 0; k < missing.size(); ++k) assign(missing[k], t[k]);

  Eigen::VectorXd w;
  double lambda = PowerIteration(a, w, options);
  for (long sweep = 0; sweep < options.max_sweeps; ++sweep) {
    const double sweep_start = lambda;
    double largest_step = 0.0;
    for (std::size_t k = 0; k < missing.size(); ++k) {
      const auto slope_at = [&](double value) {
        assign(missing[k], value);
        return LambdaSlope(a, missing[k], options);
      };
      const double slope = slope_at(t[k]);
      double next = t[k];
      if (slope != 0.0) {
        // Walk downhill in doubling steps until the slope changes sign.
        const double direction = slope > 0.0 ? -1.0 : 1.0;
        double near = t[k];
        double far = t[k];
        double f_near = slope;
        double f_far = slope;
        for (double step = 1.0; step < 1e6 && (f_far > 0.0) == (slope > 0.0);
             step *= 2.0) {
          near = far;
          f_near = f_far;
          far = t[k] + direction * step;
          f_far = slope_at(far);
        }
        if (f_far == 0.0) {
          next = far;
        } else {
          double lo = std::min(near, far);
          double hi = std::max(near, far);
          double f_lo = near < far ? f_near : f_far;
          double f_hi = near < far ? f_far : f_near;
          std::uintmax_t max_iter = 200;
          const auto root = boost::math::tools::toms748_solve(
              slope_at, lo, hi, f_lo, f_hi,
              boost::math::tools::eps_tolerance<double>(
                  std::numeric_limits<double>::digits - 3),
              max_iter);
          next = 0.5 * (root.first + root.second);
        }
      }
      assign(missing[k], next);
      largest_step = std::max(largest_step, std::abs(next - t[k]));
      t[k] = next;
    }
    lambda = PowerIteration(a, w, options);
    if (sweep_start - lambda < options.lambda_decrease &&
        largest_step < options.completion_step) {
      return a;
    }
  }
  throw NoConvergence("lambda_max completion did not converge",
                      options.max_sweeps);
}

}  // namespace

WeightVector Llsm(const Ipcm& pcm) {
  const int n = pcm.n();
  if (n == 0) return WeightVector();
  if (!pcm.Graph().IsConnected()) {
    throw DisconnectedGraph("LLSM needs a connected comparison graph");
  }
  if (n == 1) return WeightVector::Normalized({1.0});
  // Graph-Laplacian normal equations L y = r with y_0 = 0.
  Eigen::MatrixXd laplacian = Eigen::MatrixXd::Zero(n - 1, n - 1);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n - 1);
  for (const auto& [key, value] : pcm.entries()) {
    const auto [i, j] = key;
    if (i == 0) continue;
    laplacian(i - 1, i - 1) += 1.0;
    if (j != 0) laplacian(i - 1, j - 1) -= 1.0;
    rhs(i - 1) += std::log(value);
  }
  const Eigen::VectorXd y = laplacian.ldlt().solve(rhs);
  std::vector<double> w(n);
  w[0] = 1.0;
  for (int i = 1; i < n; ++i) w[i] = std::exp(y(i - 1));
  return WeightVector::Normalized(std::move(w));
}

EmResult PrincipalEigen(const Ipcm& complete_pcm, const EmOptions& options) {
  if (!complete_pcm.IsComplete()) {
    throw std::invalid_argument("PrincipalEigen needs a complete matrix");
  }
  Eigen::VectorXd w;
  const double lambda = PowerIteration(ToDense(complete_pcm), w, options);
  EmResult result;
  result.weights = WeightVector::Normalized({w.data(), w.data() + w.size()});
  result.lambda_max = lambda;
  result.completion = complete_pcm;
  return result;
}

EmResult Em(const Ipcm& pcm, const EmOptions& options) {
  if (!pcm.Graph().IsConnected()) {
    throw DisconnectedGraph("EM needs a connected comparison graph");
  }
  if (pcm.IsComplete()) return PrincipalEigen(pcm, options);
  const Eigen::MatrixXd a = OptimalCompletion(pcm, options);
  Ipcm completion(pcm.n());
  for (int i = 0; i < pcm.n(); ++i) {
    for (int j = i + 1; j < pcm.n(); ++j) completion.Set(i, j, a(i, j));
  }
  // Keep the known entries bit-identical to the input.
  for (const auto& [key, value] : pcm.entries()) {
    if (key.first < key.second) completion.Set(key.first, key.second, value);
  }
  return PrincipalEigen(completion, options);
}

double LogLikelihood(const DataMatrix& data, const ExpectedValueVector& m,
                     ModelKind model) {
  if (static_cast<int>(m.size()) != data.n()) {
    throw std::invalid_argument("expected-value vector and data sizes differ");
  }
  long double total = 0.0L;
  for (const auto& [pair, outcome] : data.entries()) {
    const long double diff =
        static_cast<long double>(m[pair.i]) - static_cast<long double>(m[pair.j]);
    if (outcome.worse > 0.0) total += outcome.worse * ExtendedLogCdf(model, -diff);
    if (outcome.better > 0.0) total += outcome.better * ExtendedLogCdf(model, diff);
  }
  return static_cast<double>(total);
}

std::vector<double> LogLikelihoodGradient(const DataMatrix& data,
                                          const ExpectedValueVector& m,
                                          ModelKind model) {
  if (static_cast<int>(m.size()) != data.n()) {
    throw std::invalid_argument("expected-value vector and data sizes differ");
  }
  std::vector<double> grad(data.n(), 0.0);
  for (const auto& [pair, outcome] : data.entries()) {
    const double diff = m[pair.i] - m[pair.j];
    const double slope = outcome.better * LogCdfSlope(model, diff) -
                         outcome.worse * LogCdfSlope(model, -diff);
    grad[pair.i] += slope;
    grad[pair.j] -= slope;
  }
  return grad;
}

namespace {

// Minorize-maximize sweeps for the logistic model on pi_i = exp(m_i).
MleResult LogisticMm(const DataMatrix& data, const MleOptions& options,
                     long max_sweeps, double tolerance) {
  const int n = data.n();
  std::vector<double> wins(n, 0.0);
  struct Match {
    int other;
    double total;
  };
  std::vector<std::vector<Match>> matches(n);
  for (const auto& [pair, outcome] : data.entries()) {
    const double total = outcome.worse + outcome.better;
    if (total <= 0.0) continue;
    wins[pair.i] += outcome.better;
    wins[pair.j] += outcome.worse;
    matches[pair.i].push_back({pair.j, total});
    matches[pair.j].push_back({pair.i, total});
  }

  std::vector<double> pi(n, 1.0);
  MleResult result;
  for (long it = 1; it <= max_sweeps; ++it) {
    double change = 0.0;
    const std::vector<double> before = pi;
    for (int i = 0; i < n; ++i) {
      double denom = 0.0;
      for (const Match& match : matches[i]) {
        denom += match.total / (pi[i] + pi[match.other]);
      }
      pi[i] = wins[i] / denom;
    }
    const double anchor = pi[0];
    for (int i = 0; i < n; ++i) {
      pi[i] /= anchor;
      change = std::max(change, std::abs(std::log(pi[i] / before[i])));
    }
    result.iterations = it;
    if (options.on_iteration) {
      std::vector<double> m(n);
      for (int i = 0; i < n; ++i) m[i] = std::log(pi[i]);
      options.on_iteration(
          it, LogLikelihood(data, ExpectedValueVector::FromRaw(std::move(m)),
                            ModelKind::kLogistic));
    }
    if (change < tolerance) {
      result.converged = true;
      break;
    }
  }
  std::vector<double> m(n);
  for (int i = 0; i < n; ++i) m[i] = std::log(pi[i]);
  result.m = ExpectedValueVector::FromRaw(std::move(m));
  return result;
}

// Damped Newton ascent on the concave log-likelihood from `start`, m_0 held
// at 0. Iterations are numbered after the `done` already spent.
MleResult NewtonAscent(const DataMatrix& data, ModelKind model,
                       const MleOptions& options, std::vector<double> start,
                       long done) {
  const int n = data.n();
  const int free = n - 1;
  std::vector<double> m = std::move(start);
  auto as_vector = [](const std::vector<double>& raw) {
    return ExpectedValueVector::FromRaw(raw);
  };
  double loglik = LogLikelihood(data, as_vector(m), model);
  MleResult result;
  result.iterations = done;
  for (long it = done + 1; it <= options.max_iterations; ++it) {
    const std::vector<double> grad =
        LogLikelihoodGradient(data, as_vector(m), model);
    Eigen::MatrixXd neg_hessian = Eigen::MatrixXd::Zero(free, free);
    for (const auto& [pair, outcome] : data.entries()) {
      const double diff = m[pair.i] - m[pair.j];
      double curvature = 0.0;
      if (outcome.better > 0.0) {
        curvature += outcome.better * LogCdfCurvature(model, diff);
      }
      if (outcome.worse > 0.0) {
        curvature += outcome.worse * LogCdfCurvature(model, -diff);
      }
      const int a = pair.i - 1;
      const int b = pair.j - 1;
      if (a >= 0) neg_hessian(a, a) -= curvature;
      if (b >= 0) neg_hessian(b, b) -= curvature;
      if (a >= 0 && b >= 0) {
        neg_hessian(a, b) += curvature;
        neg_hessian(b, a) += curvature;
      }
    }
    Eigen::VectorXd g(free);
    for (int k = 0; k < free; ++k) g(k) = grad[k + 1];
    const Eigen::LDLT<Eigen::MatrixXd> ldlt(neg_hessian);
    Eigen::VectorXd step = ldlt.solve(g);
    if (ldlt.info() != Eigen::Success || !step.allFinite() || step.dot(g) <= 0) {
      step = g;  // steepest ascent fallback
    }

    // A trial point is accepted when the computed log-likelihood does not
    // drop or, once differences are below rounding, when the slope along
    // the step is still non-negative there, which by concavity means the
    // exact value did not drop either.
    double scale = 1.0;
    std::vector<double> trial(n);
    double trial_loglik = loglik;
    bool accepted = false;
    for (int halving = 0; halving < 60 && !accepted; ++halving) {
      trial[0] = 0.0;
      for (int k = 0; k < free; ++k) trial[k + 1] = m[k + 1] + scale * step(k);
      trial_loglik = LogLikelihood(data, as_vector(trial), model);
      accepted = trial_loglik >= loglik;
      if (!accepted) {
        const std::vector<double> slope =
            LogLikelihoodGradient(data, as_vector(trial), model);
        double along = 0.0;
        for (int k = 0; k < free; ++k) along += slope[k + 1] * step(k);
        accepted = along >= 0.0;
      }
      if (!accepted) scale *= 0.5;
    }
    double change = 0.0;
    if (accepted) {
      for (int k = 1; k < n; ++k) change = std::max(change, std::abs(trial[k] - m[k]));
      m = trial;
      loglik = trial_loglik;
    }
    result.iterations = it;
    if (options.on_iteration) options.on_iteration(it, loglik);
    if (change < options.tolerance) {
      result.converged = true;
      break;
    }
  }
  result.m = as_vector(m);
  return result;
}

}  // namespace

MleResult BtMle(const DataMatrix& data, ModelKind model,
                const MleOptions& options) {
  if (!FordCondition(data)) {
    throw FordViolation(
        "directed comparison graph is not strongly connected; the maximum "
        "likelihood estimate does not exist or is not unique");
  }
  MleResult result;
  if (data.n() <= 1) {
    result.m = ExpectedValueVector::FromRaw(std::vector<double>(data.n(), 0.0));
    result.converged = true;
  } else if (model == ModelKind::kLogistic) {
    // MM alone slows to a crawl when some probability is close to 0 or 1,
    // so it only provides the starting point for Newton.
    const MleResult warm =
        LogisticMm(data, options, std::min(options.max_iterations, kMmWarmupSweeps),
                   kMmWarmupTolerance);
    result = NewtonAscent(data, model, options, warm.m.values(), warm.iterations);
  } else {
    result = NewtonAscent(data, model, options,
                          std::vector<double>(data.n(), 0.0), 0);
  }
  if (!result.converged && options.throw_on_no_convergence) {
    throw NoConvergence("maximum likelihood iteration did not converge",
                        result.iterations);
  }
  result.loglik = LogLikelihood(data, result.m, model);
  return result;
}

WeightVector WeightsFromM(const ExpectedValueVector& m) {
  if (m.size() == 0) return WeightVector();
  const double top = *std::max_element(m.values().begin(), m.values().end());
  std::vector<double> w(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) w[i] = std::exp(m[i] - top);
  return WeightVector::Normalized(std::move(w));
}

ExpectedValueVector MFromWeights(const WeightVector& w) {
  std::vector<double> m(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) m[i] = std::log(w[i]);
  return ExpectedValueVector::FromRaw(std::move(m));
}

}  // namespace paircomp
