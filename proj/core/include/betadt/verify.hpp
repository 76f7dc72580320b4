#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "betadt/model.hpp"
#include "betadt/samplers.hpp"
#include "betadt/tessellation.hpp"

namespace betadt {

enum class Verdict { Pass, Fail, Inconclusive };
const char* to_string(Verdict v);

// Outcome of one statistical check. One-sample reports compare `estimate`
// against `closed_form`; two-sample reports carry the second sample in the
// reference fields and pool both standard errors.
struct MCReport {
  std::string quantity;
  std::string params;
  std::optional<double> closed_form;
  double estimate = 0.0;
  double std_error = 0.0;
  std::int64_t n_samples = 0;
  double z_score = 0.0;
  std::uint64_t seed = 0;
  Verdict verdict = Verdict::Inconclusive;
  std::optional<double> reference_estimate;
  std::optional<double> reference_std_error;
  std::optional<double> p_value;
  // Absolute slack added to the z tolerance (limit tests only).
  double allowance = 0.0;
  std::string note;
};

struct VerifyOptions {
  int workers = 1;
  double z_threshold = 3.0;
  double ks_alpha = 0.01;
  TupleMethod method = TupleMethod::Auto;
};

// Mean of Vol^s over n typical cells against the closed-form moment.
// BetaPrime requires 2s below 2 beta - d - nu so the estimate has a variance.
MCReport moment_test(const ModelParams& p, double s, std::int64_t n, std::uint64_t seed,
                     const VerifyOptions& opt = {});

// Mean angle sum sigma_k over n typical cells (Monte Carlo solid angles with
// n_dirs directions per face) against the quadrature value.
MCReport angle_sum_test(const ModelParams& p, int k, std::int64_t n, std::int64_t n_dirs,
                        std::uint64_t seed, const VerifyOptions& opt = {});

// Two-sample comparison of the factorized representation of the squared
// volume: one report per moment, then a KS report on the logarithms.
std::vector<MCReport> identity_test_factorization(const ModelParams& p,
                                                  const std::vector<double>& moments,
                                                  std::int64_t n, std::uint64_t seed,
                                                  const VerifyOptions& opt = {});

// Typical cell against a simplex of d i.i.d. points in a ball (or the whole
// space) of dimension d + nu. Integer nu only. Returns a moment report and a
// KS report.
std::vector<MCReport> identity_test_higher_dim(const ModelParams& p, std::int64_t n,
                                               std::uint64_t seed, const VerifyOptions& opt = {});

// Beta model with beta near -1 against the classical closed form. A second run
// at beta2 = -1 + 10 (beta + 1) gives a linear estimate of the bias, which is
// added to the tolerance. Returns the comparison and a trend report.
std::vector<MCReport> limit_test_classical(const ModelParams& p_beta, double s, std::int64_t n,
                                           std::uint64_t seed, const VerifyOptions& opt = {});

// Scaled mean volume (2 beta)^{(d-1)/2} E Vol(Z_{beta,nu}) against Monte Carlo
// means of the weighted Gaussian simplex, one report per beta plus a trend
// report. For nu = -1 the beta side is also sampled.
std::vector<MCReport> limit_test_gaussian(int d, double nu, const std::vector<double>& beta_list,
                                          std::int64_t n, std::uint64_t seed,
                                          const VerifyOptions& opt = {});

// Exact E[Delta^s] of the weighted Gaussian simplex.
double gaussian_limit_moment(int d, double nu, double s);

// Face intensities, Euler characteristic, mean triangle area, normality,
// window coverage and mean Laguerre cell vertex count over independent
// window replicas.
std::vector<MCReport> tessellation_vs_theory(const ModelParams& p, const WindowConfig& w,
                                             int replicas, std::uint64_t seed,
                                             const VerifyOptions& opt = {});

// Fraction of the target box covered by Interior triangles.
double interior_coverage(const TriangulationResult& t);

struct SuiteOptions {
  std::int64_t n = 100000;
  std::uint64_t seed = 1;
  VerifyOptions verify;
};

// Named suites: moments, identities, limits, tessellation, all.
std::vector<std::string> suite_names();
std::vector<MCReport> run_suite(const std::string& name, const SuiteOptions& opt);

bool any_failed(const std::vector<MCReport>& reports);
std::string format_report_table(const std::vector<MCReport>& reports);

// Seed for an independent job derived from a parent seed and a tag.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag);

}  // namespace betadt
