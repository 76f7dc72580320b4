#pragma once

#include <cstdint>
#include <vector>

#include "betadt/model.hpp"
#include "betadt/random.hpp"
#include "betadt/types.hpp"

namespace betadt {

// ---- primitive distributions ------------------------------------------------

double sample_gamma(double shape, double rate, RandomStream& s);
// ln of a Gamma(shape, 1) draw; accurate for very small shapes.
double sample_log_gamma(double shape, RandomStream& s);
double sample_beta_rv(double a, double b, RandomStream& s);
double sample_beta_prime_rv(double a, double b, RandomStream& s);
double sample_normal(RandomStream& s);

// Uniform point on the unit sphere S^{q-1} in R^q.
Point sample_sphere_point(int q, RandomStream& s);
// Density proportional to (1 - |x|^2)^beta on the unit ball of R^q.
Point sample_beta_ball_point(int q, double beta, RandomStream& s);
// Density proportional to (1 + |x|^2)^{-beta} on R^q.
Point sample_beta_prime_point(int q, double beta, RandomStream& s);

// ---- weighted tuples ----------------------------------------------------------

enum class TupleMethod { Auto, Rejection, Mcmc };

struct TupleDiagnostics {
  TupleMethod method = TupleMethod::Rejection;
  std::int64_t proposals = 0;
  std::int64_t accepted = 0;
  double acceptance_rate = 1.0;
  // MCMC only.
  std::int64_t burn_in = 0;
  int thinning = 1;
  double lag1_autocorr = 0.0;
  double integrated_autocorr = 1.0;
  bool converged = true;
};

// d points in R^{d-1} (columns) drawn from the density proportional to
// Delta^{nu+1} prod w(y_i).
struct WeightedTuple {
  Eigen::MatrixXd points;
  TupleMethod method = TupleMethod::Rejection;
  TupleDiagnostics diagnostics;
};

// Largest volume of a simplex inscribed in the unit ball of R^n.
double inscribed_simplex_volume_bound(int n);

// Exact rejection sampler for every valid parameter set.
WeightedTuple sample_weighted_tuple(const ModelParams& p, RandomStream& s);

struct McmcOptions {
  std::int64_t burn_in = 10000;
  double max_lag1_autocorr = 0.1;
  int max_thinning = 4096;
  int pilot_length = 4000;
  // Budget for the integrated autocorrelation time of the thinned chain.
  double max_integrated_autocorr = 5.0;
};

enum class McmcTarget { BetaBall, BetaPrime, Gaussian };

// Metropolis sampler (single-point Gaussian random-walk updates) for the same
// weighted tuple densities and for the Gaussian limit. Burn-in adapts the step
// sizes, then the thinning is doubled until the lag-1 autocorrelation of
// ln Delta falls below the threshold.
class McmcTupleSampler {
 public:
  McmcTupleSampler(const ModelParams& p, RandomStream s, McmcOptions opt = {});
  McmcTupleSampler(McmcTarget target, int d, double beta, double nu, RandomStream s,
                   McmcOptions opt = {});

  WeightedTuple next();
  const TupleDiagnostics& diagnostics() const { return diag_; }

 private:
  void init();
  double log_weight(const Eigen::VectorXd& y) const;
  double log_target_delta(const Eigen::MatrixXd& pts) const;
  void sweep();

  McmcTarget target_;
  int d_;
  int n_;
  double beta_;
  double nu_;
  RandomStream rng_;
  McmcOptions opt_;
  Eigen::MatrixXd state_;
  Eigen::VectorXd weights_;
  double log_delta_ = 0.0;
  std::vector<double> step_;
  std::int64_t proposals_ = 0;
  std::int64_t accepted_ = 0;
  TupleDiagnostics diag_;
};

// ---- typical cells --------------------------------------------------------------

double sample_radius(const ModelParams& p, RandomStream& s);
Simplex sample_typical_cell(const ModelParams& p, RandomStream& s);

struct CellSamplingOptions {
  TupleMethod method = TupleMethod::Auto;
  int workers = 1;
  // MCMC runs one chain per block of this many cells.
  int mcmc_block = 2000;
  McmcOptions mcmc;
  std::uint64_t stream_base = streams::kTypicalCells;
};

struct CellBatch {
  std::vector<Simplex> cells;
  TupleDiagnostics diagnostics;  // aggregated
};

// n typical cells; cell i uses substream (seed, stream_base + i), so the
// result is the same for any worker count.
CellBatch sample_typical_cells(const ModelParams& p, std::int64_t n, std::uint64_t seed,
                               const CellSamplingOptions& opt = {});

// Weighted Gaussian simplex: d points of R^{d-1} with density proportional to
// Delta^{nu+1} prod exp(-|g_i|^2/2). Exact rejection from scaled Gaussians.
Simplex sample_gaussian_limit_simplex(int d, double nu, RandomStream& s);

// ---- Poisson processes -------------------------------------------------------

// Expected number of sites in box x h_range.
double poisson_mean_count(const ModelParams& p, const Box& box, const HeightRange& h_range);

// Sites of the space-time process in box x h_range. For BetaPrime the range
// must lie in [-H, -eps] with eps > 0; the classical model ignores h_range and
// places its sites at h = 0.
std::vector<Site> sample_poisson_process(const ModelParams& p, const Box& box,
                                         const HeightRange& h_range, RandomStream& s);

// Beta-prime sites in box with -h in [stop, top], generated as arrivals of the
// process in order of decreasing depth. For a fixed stream the sites deeper
// than `stop` do not depend on `stop`.
std::vector<Site> sample_beta_prime_sites_by_depth(const ModelParams& p, const Box& box, double top,
                                                   double stop, RandomStream& s);

}  // namespace betadt
