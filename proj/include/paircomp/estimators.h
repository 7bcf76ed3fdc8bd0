#ifndef PAIRCOMP_ESTIMATORS_H_
#define PAIRCOMP_ESTIMATORS_H_

// Priority estimation from pairwise comparisons: logarithmic least squares
// and the eigenvector method on (incomplete) ratio matrices, and maximum
// likelihood for the Bradley-Terry (logistic) and Thurstone (normal) models
// on outcome data.

#include <functional>
#include <vector>

#include "paircomp/core.h"

namespace paircomp {

struct EmResult {
  WeightVector weights;
  // Principal eigenvalue of the matrix, or of its optimal completion when
  // the input is incomplete.
  double lambda_max = 0.0;
  // Completed matrix the eigenvector was taken from.
  Ipcm completion;
};

struct MleResult {
  ExpectedValueVector m;
  double loglik = 0.0;
  long iterations = 0;
  bool converged = false;
};

struct EmOptions {
  // Max-norm of A w - lambda w, with w summing to 1.
  double eigen_residual = 1e-12;
  long max_power_iterations = 100000;
  // Stop the completion search once a sweep lowers lambda_max by less than
  // lambda_decrease and moves no log-entry by more than completion_step.
  double lambda_decrease = 1e-12;
  double completion_step = 1e-10;
  long max_sweeps = 100000;
};

struct MleOptions {
  // Stop when the max-norm change of m in one step falls below this.
  double tolerance = 1e-10;
  long max_iterations = 100000;
  // Throw NoConvergence when the iteration cap is hit; otherwise return with
  // converged = false.
  bool throw_on_no_convergence = true;
  // Called after every iteration with (iteration, log-likelihood).
  std::function<void(long, double)> on_iteration;
};

// Weights minimizing the squared log deviations over the known entries.
// Throws DisconnectedGraph.
WeightVector Llsm(const Ipcm& pcm);

// Principal right eigenvector; incomplete matrices are first completed so as
// to minimize lambda_max. Throws DisconnectedGraph or NoConvergence.
EmResult Em(const Ipcm& pcm, const EmOptions& options = {});

// Principal eigenpair of a complete positive matrix by power iteration from
// the all-ones vector. Throws NoConvergence.
EmResult PrincipalEigen(const Ipcm& complete_pcm, const EmOptions& options = {});

// Sum over stored pairs of worse * ln F(m_j - m_i) + better * ln F(m_i - m_j).
// Sides with zero amount contribute nothing.
double LogLikelihood(const DataMatrix& data, const ExpectedValueVector& m,
                     ModelKind model);

// Partial derivatives of LogLikelihood with respect to every m_i (including
// the gauge coordinate).
std::vector<double> LogLikelihoodGradient(const DataMatrix& data,
                                          const ExpectedValueVector& m,
                                          ModelKind model);

// Maximum-likelihood merits with m[0] = 0. Throws FordViolation when the
// directed comparison graph is not strongly connected.
MleResult BtMle(const DataMatrix& data, ModelKind model,
                const MleOptions& options = {});

// w_i = exp(m_i) / sum_j exp(m_j).
WeightVector WeightsFromM(const ExpectedValueVector& m);
// m_i = ln w_i - ln w_0.
ExpectedValueVector MFromWeights(const WeightVector& w);

}  // namespace paircomp

#endif  // PAIRCOMP_ESTIMATORS_H_
