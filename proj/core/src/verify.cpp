#include "betadt/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <Eigen/LU>
#include <boost/math/constants/constants.hpp>

#include "betadt/analytics.hpp"
#include "betadt/constants.hpp"
#include "betadt/errors.hpp"
#include "betadt/geometry.hpp"
#include "betadt/parallel.hpp"
#include "betadt/special.hpp"
#include "betadt/stats.hpp"

namespace betadt {

namespace {

constexpr std::uint64_t kRhsOffset = 0x0800'0000ULL;

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

void check_n(std::int64_t n) {
  if (n < 2) throw ParameterError("sample size n must be at least 2");
  if (static_cast<std::uint64_t>(n) >= kRhsOffset) throw ParameterError("sample size n is too large");
}

Verdict z_verdict(double diff, double se, double z_threshold, double allowance = 0.0) {
  if (!std::isfinite(diff) || !std::isfinite(se)) return Verdict::Fail;
  if (se <= 0.0) return std::abs(diff) <= allowance + 1e-12 * std::max(1.0, std::abs(diff)) ? Verdict::Pass : Verdict::Fail;
  return std::abs(diff) <= z_threshold * se + allowance ? Verdict::Pass : Verdict::Fail;
}

double z_of(double diff, double se) { return se > 0.0 ? diff / se : (diff == 0.0 ? 0.0 : std::copysign(INFINITY, diff)); }

CellSamplingOptions cell_options(const VerifyOptions& opt) {
  CellSamplingOptions c;
  c.method = opt.method;
  c.workers = opt.workers;
  return c;
}

std::vector<double> cell_volumes(const ModelParams& p, std::int64_t n, std::uint64_t seed,
                                 const VerifyOptions& opt) {
  const CellBatch batch = sample_typical_cells(p, n, seed, cell_options(opt));
  std::vector<double> v(batch.cells.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = simplex_volume(batch.cells[i]);
  return v;
}

SampleSummary power_summary(const std::vector<double>& vol, double s) {
  std::vector<double> x(vol.size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::pow(vol[i], s);
  return summarize(x);
}

// Largest s for which E Vol^s is finite (infinite for the beta families).
double moment_limit(const ModelParams& p) {
  return p.family == Family::BetaPrime ? 2.0 * p.beta - p.d - p.nu : INFINITY;
}

double quantile(std::vector<double> x, double prob) {
  const std::size_t k = std::min(x.size() - 1, static_cast<std::size_t>(prob * static_cast<double>(x.size())));
  std::nth_element(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(k), x.end());
  return x[k];
}

// Two-sample z-test of E exp(s L) against E exp(s R). With winsorize set, both
// samples are capped at the pooled 99% quantile first, which keeps the
// variance finite when the s-moment exists but its square does not.
MCReport two_sample_moment(const std::string& quantity, const std::string& params,
                           const std::vector<double>& lhs, const std::vector<double>& rhs, double s,
                           bool winsorize, std::uint64_t seed, const VerifyOptions& opt) {
  double cap = INFINITY;
  if (winsorize) {
    std::vector<double> pooled = lhs;
    pooled.insert(pooled.end(), rhs.begin(), rhs.end());
    cap = quantile(std::move(pooled), 0.99);
  }
  auto powers = [&](const std::vector<double>& logs) {
    std::vector<double> x(logs.size());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::exp(s * std::min(logs[i], cap));
    return summarize(x);
  };
  const SampleSummary a = powers(lhs), b = powers(rhs);
  MCReport r;
  r.quantity = quantity;
  r.params = params;
  r.estimate = a.mean;
  r.std_error = a.std_error;
  r.reference_estimate = b.mean;
  r.reference_std_error = b.std_error;
  r.n_samples = a.n;
  r.seed = seed;
  const double se = std::hypot(a.std_error, b.std_error);
  r.z_score = z_of(a.mean - b.mean, se);
  r.verdict = z_verdict(a.mean - b.mean, se, opt.z_threshold);
  if (winsorize) {
    r.note = "heavy tail: both samples capped at the pooled 99% quantile before the s-moment";
  }
  return r;
}

MCReport ks_report(const std::string& quantity, const std::string& params,
                   const std::vector<double>& lhs, const std::vector<double>& rhs, std::uint64_t seed,
                   const VerifyOptions& opt) {
  const KsResult ks = ks_two_sample(lhs, rhs);
  MCReport r;
  r.quantity = quantity;
  r.params = params;
  r.estimate = ks.statistic;
  r.n_samples = static_cast<std::int64_t>(lhs.size());
  r.seed = seed;
  r.p_value = ks.p_value;
  r.verdict = ks.p_value >= opt.ks_alpha ? Verdict::Pass : Verdict::Fail;
  r.note = "two-sample Kolmogorov-Smirnov on logarithms; estimate is the KS statistic";
  return r;
}

void check_identity_moment(const ModelParams& p, double s) {
  if (!(s > 0.0)) throw DomainError("identity moments require s > 0");
  if (p.family == Family::BetaPrime && !(2.0 * s < moment_limit(p))) {
    throw DomainError("beta-prime identity moment requires 2*s < 2*beta - d - nu");
  }
}

// Log of the Gram volume of the simplex spanned by the columns of x.
double log_gram_volume(const Eigen::MatrixXd& x) {
  const int k = static_cast<int>(x.cols()) - 1;
  Eigen::MatrixXd e(x.rows(), k);
  for (int j = 0; j < k; ++j) e.col(j) = x.col(j + 1) - x.col(0);
  const Eigen::MatrixXd gram = e.transpose() * e;
  const double g = gram.determinant();
  return 0.5 * std::log(g) - log_factorial(k);
}

}  // namespace

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "PASS";
    case Verdict::Fail: return "FAIL";
    case Verdict::Inconclusive: return "INCONCLUSIVE";
  }
  return "?";
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
  RandomStream s(seed, 0x7E00'0000'0000'0000ULL ^ tag);
  return s();
}

// ---- moments ----------------------------------------------------------------

MCReport moment_test(const ModelParams& p, double s, std::int64_t n, std::uint64_t seed,
                     const VerifyOptions& opt) {
  p.validate();
  check_n(n);
  if (!(s > -p.nu - 1.0)) throw DomainError("moment order requires s > -nu - 1");
  if (p.family == Family::BetaPrime && !(2.0 * s < moment_limit(p))) {
    throw DomainError("beta-prime moment test requires 2*s < 2*beta - d - nu");
  }
  MCReport r;
  r.quantity = "E Vol^s, s=" + fmt("%g", s);
  r.params = describe(p);
  r.seed = seed;
  r.n_samples = n;
  r.closed_form = volume_moment(p, s);
  if (s == 0.0) {
    r.estimate = 1.0;
    r.verdict = Verdict::Pass;
    return r;
  }
  const SampleSummary sm = power_summary(cell_volumes(p, n, seed, opt), s);
  r.estimate = sm.mean;
  r.std_error = sm.std_error;
  r.z_score = z_of(sm.mean - *r.closed_form, sm.std_error);
  r.verdict = z_verdict(sm.mean - *r.closed_form, sm.std_error, opt.z_threshold);
  return r;
}

MCReport angle_sum_test(const ModelParams& p, int k, std::int64_t n, std::int64_t n_dirs,
                        std::uint64_t seed, const VerifyOptions& opt) {
  p.validate();
  check_n(n);
  const CellBatch batch = sample_typical_cells(p, n, seed, cell_options(opt));
  const auto sums = parallel_map<double>(batch.cells.size(), opt.workers, [&](std::size_t i) {
    RandomStream s(seed, streams::kAngles + i);
    return angle_sum(batch.cells[i], k, n_dirs, s).value;
  });
  const SampleSummary sm = summarize(sums);
  MCReport r;
  r.quantity = "E sigma_" + std::to_string(k) + " (Monte Carlo solid angles)";
  r.params = describe(p);
  r.seed = seed;
  r.n_samples = n;
  r.closed_form = expected_angle_sum(p, k);
  r.estimate = sm.mean;
  r.std_error = sm.std_error;
  r.z_score = z_of(sm.mean - *r.closed_form, sm.std_error);
  r.verdict = z_verdict(sm.mean - *r.closed_form, sm.std_error, opt.z_threshold);
  return r;
}

// ---- distributional identities ---------------------------------------------

std::vector<MCReport> identity_test_factorization(const ModelParams& p,
                                                  const std::vector<double>& moments,
                                                  std::int64_t n, std::uint64_t seed,
                                                  const VerifyOptions& opt) {
  p.validate();
  check_n(n);
  if (p.family == Family::ClassicalDelaunay) {
    throw ParameterError("the factorization test needs the beta or beta-prime model");
  }
  for (double s : moments) check_identity_moment(p, s);

  const double d = p.d, b = p.beta, nu = p.nu;
  const double lf = log_factorial(p.d - 1);
  const double m = void_rate(p);
  const double q = radial_exponent(p);
  const double a = radial_gamma_shape(p);
  const bool beta = p.family == Family::Beta;

  const std::vector<double> vol = cell_volumes(p, n, seed, opt);
  const auto lhs = parallel_map<double>(static_cast<std::size_t>(n), opt.workers, [&](std::size_t i) {
    RandomStream s(seed, streams::kAuxiliary + i);
    const double lv = 2.0 * (lf + std::log(vol[i]));
    if (beta) {
      const double xi = sample_beta_rv(0.5 * (d + nu) + b + 1.0, 0.5 * (d - 1.0) * (d + nu + 2.0 * b), s);
      return std::log(xi) + (d - 1.0) * std::log1p(-xi) + lv;
    }
    const double eta = sample_beta_prime_rv(b - 0.5 * (d - 1.0), 0.5 * (d - 1.0) * (2.0 * b - d - nu), s);
    return (d - 1.0) * std::log1p(eta) + lv;
  });
  const auto rhs = parallel_map<double>(static_cast<std::size_t>(n), opt.workers, [&](std::size_t i) {
    RandomStream s(seed, streams::kAuxiliary + kRhsOffset + i);
    const double lr = 2.0 * (d - 1.0) / q * (sample_log_gamma(a, s) - std::log(m));
    double out = lr;
    if (beta) {
      const double eta = sample_beta_rv(0.5 * (d + 2.0 * b + 1.0), 0.5 * (d - 1.0) * (d + nu + 2.0 * b), s);
      out += (d - 1.0) * std::log1p(-eta);
      for (int j = 1; j <= p.d - 1; ++j) {
        out += std::log(sample_beta_rv(0.5 * (nu + j + 1.0), 0.5 * (d - 1.0 - j) + b + 1.0, s));
      }
    } else {
      const double xi = sample_beta_prime_rv(b - 0.5 * (d + nu), 0.5 * (d - 1.0) * (2.0 * b - d - nu), s);
      out += d * std::log1p(xi) - std::log(xi);
      for (int j = 1; j <= p.d - 1; ++j) {
        out += std::log(sample_beta_prime_rv(0.5 * (nu + j + 1.0), b - 0.5 * (d + nu), s));
      }
    }
    return out;
  });

  std::vector<MCReport> out;
  const std::string params = describe(p);
  for (double s : moments) {
    const bool heavy = p.family == Family::BetaPrime && !(4.0 * s < moment_limit(p));
    out.push_back(two_sample_moment("factorization identity, s=" + fmt("%g", s), params, lhs, rhs, s,
                                    heavy, seed, opt));
  }
  out.push_back(ks_report("factorization identity, log KS", params, lhs, rhs, seed, opt));
  return out;
}

std::vector<MCReport> identity_test_higher_dim(const ModelParams& p, std::int64_t n,
                                               std::uint64_t seed, const VerifyOptions& opt) {
  p.validate();
  check_n(n);
  if (p.family == Family::ClassicalDelaunay) {
    throw ParameterError("the higher-dimensional test needs the beta or beta-prime model");
  }
  if (p.nu != std::round(p.nu)) throw ParameterError("the higher-dimensional test requires integer nu");
  check_identity_moment(p, 1.0);

  const double d = p.d, b = p.beta, nu = p.nu;
  const int dim = p.d + static_cast<int>(nu);
  const double m = void_rate(p);
  const double q = radial_exponent(p);
  const double a = radial_gamma_shape(p);
  const bool beta = p.family == Family::Beta;

  const std::vector<double> vol = cell_volumes(p, n, seed, opt);
  const auto lhs = parallel_map<double>(static_cast<std::size_t>(n), opt.workers, [&](std::size_t i) {
    RandomStream s(seed, streams::kAuxiliary + i);
    double out = 2.0 * std::log(vol[i]);
    if (nu > -1.0) {
      if (beta) {
        const double xi = sample_beta_rv(0.5 * (nu + 1.0), 0.5 * (d * (d + 2.0 * b) + nu * (d - 1.0) + 1.0), s);
        out += (d - 1.0) * std::log1p(-xi);
      } else {
        const double xi = sample_beta_prime_rv(0.5 * (nu + 1.0), 0.5 * d * (2.0 * b - d - nu), s);
        out += (d - 1.0) * std::log1p(xi);
      }
    }
    return out;
  });
  const auto rhs = parallel_map<double>(static_cast<std::size_t>(n), opt.workers, [&](std::size_t i) {
    RandomStream s(seed, streams::kAuxiliary + kRhsOffset + i);
    const double lr = 2.0 * (d - 1.0) / q * (sample_log_gamma(a, s) - std::log(m));
    Eigen::MatrixXd x(dim, p.d);
    for (int j = 0; j < p.d; ++j) {
      x.col(j) = beta ? sample_beta_ball_point(dim, b, s) : sample_beta_prime_point(dim, b, s);
    }
    return lr + 2.0 * log_gram_volume(x);
  });

  const std::string params = describe(p);
  const bool heavy = p.family == Family::BetaPrime && !(4.0 < moment_limit(p));
  std::vector<MCReport> out;
  out.push_back(two_sample_moment("higher-dimensional identity, squared volume", params, lhs, rhs, 1.0,
                                  heavy, seed, opt));
  out.push_back(ks_report("higher-dimensional identity, log KS", params, lhs, rhs, seed, opt));
  return out;
}

// ---- limits -------------------------------------------------------------------

std::vector<MCReport> limit_test_classical(const ModelParams& p_beta, double s, std::int64_t n,
                                           std::uint64_t seed, const VerifyOptions& opt) {
  p_beta.validate();
  if (p_beta.family != Family::Beta || !(p_beta.beta > -1.0 && p_beta.beta <= -0.9)) {
    throw ParameterError("the classical limit test needs the beta model with -1 < beta <= -0.9");
  }
  const ModelParams classical = ModelParams::classical(p_beta.d, p_beta.nu, p_beta.gamma);
  classical.validate();
  const double target = volume_moment(classical, s);
  const double b1 = p_beta.beta;
  const double b2 = -1.0 + 10.0 * (b1 + 1.0);
  ModelParams p2 = p_beta;
  p2.beta = b2;

  MCReport r;
  r.quantity = "E Vol^s against classical, s=" + fmt("%g", s);
  r.params = describe(p_beta);
  r.closed_form = target;
  r.seed = seed;
  r.n_samples = n;
  if (s == 0.0) {
    r.estimate = 1.0;
    r.verdict = Verdict::Pass;
    return {r};
  }
  check_n(n);
  const SampleSummary e1 = power_summary(cell_volumes(p_beta, n, derive_seed(seed, 1), opt), s);
  const SampleSummary e2 = power_summary(cell_volumes(p2, n, derive_seed(seed, 2), opt), s);
  // Linear in (beta + 1): bias(b1) = (e2 - e1) (b1 + 1) / (b2 - b1).
  const double scale = (b1 + 1.0) / (b2 - b1);
  const double bias = (e2.mean - e1.mean) * scale;
  const double bias_se = std::hypot(e1.std_error, e2.std_error) * scale;
  r.estimate = e1.mean;
  r.std_error = e1.std_error;
  r.reference_estimate = e2.mean;
  r.reference_std_error = e2.std_error;
  r.allowance = std::abs(bias) + opt.z_threshold * bias_se;
  r.z_score = z_of(e1.mean - target, e1.std_error);
  r.verdict = z_verdict(e1.mean - target, e1.std_error, opt.z_threshold, r.allowance);
  r.note = "bias allowance extrapolated linearly from a second run at beta=" + fmt("%g", b2) +
           " (heuristic; no convergence rate is known); reference is that run";

  MCReport trend;
  trend.quantity = "classical limit trend, |bias| at beta vs beta2, s=" + fmt("%g", s);
  trend.params = describe(p_beta);
  trend.seed = seed;
  trend.estimate = std::abs(volume_moment(p_beta, s) - target);
  trend.reference_estimate = std::abs(volume_moment(p2, s) - target);
  trend.verdict = trend.estimate < *trend.reference_estimate ? Verdict::Pass : Verdict::Fail;
  trend.note = "closed-form distance to the classical value at beta (estimate) and beta=" + fmt("%g", b2) +
               " (reference)";
  return {r, trend};
}

double gaussian_limit_moment(int d, double nu, double s) {
  const double dd = d;
  double out = 0.5 * s * std::log(dd) + 0.5 * s * (dd - 1.0) * std::log(2.0) - s * log_factorial(d - 1);
  for (int i = 1; i <= d - 1; ++i) {
    out += log_gamma_fn(0.5 * (i + nu + s + 1.0)) - log_gamma_fn(0.5 * (i + nu + 1.0));
  }
  return std::exp(out);
}

std::vector<MCReport> limit_test_gaussian(int d, double nu, const std::vector<double>& beta_list,
                                          std::int64_t n, std::uint64_t seed, const VerifyOptions& opt) {
  check_n(n);
  if (beta_list.empty()) throw ParameterError("beta_list must not be empty");
  for (std::size_t i = 0; i < beta_list.size(); ++i) {
    ModelParams::beta_model(d, beta_list[i], nu).validate();
    if (i > 0 && !(beta_list[i] > beta_list[i - 1])) throw ParameterError("beta_list must be increasing");
  }
  const double exact = gaussian_limit_moment(d, nu, 1.0);
  const auto vols = parallel_map<double>(static_cast<std::size_t>(n), opt.workers, [&](std::size_t i) {
    RandomStream s(seed, streams::kGaussian + i);
    return simplex_volume(sample_gaussian_limit_simplex(d, nu, s));
  });
  const SampleSummary g = summarize(vols);
  const ModelParams base = ModelParams::beta_model(d, beta_list.front(), nu);
  const std::string gparams = "gaussian(d=" + std::to_string(d) + ", nu=" + fmt("%g", nu) + ")";

  std::vector<MCReport> out;
  MCReport sampler;
  sampler.quantity = "weighted Gaussian simplex E Vol";
  sampler.params = gparams;
  sampler.closed_form = exact;
  sampler.estimate = g.mean;
  sampler.std_error = g.std_error;
  sampler.n_samples = n;
  sampler.seed = seed;
  sampler.z_score = z_of(g.mean - exact, g.std_error);
  sampler.verdict = z_verdict(g.mean - exact, g.std_error, opt.z_threshold);
  out.push_back(sampler);

  auto scaled = [&](double beta) {
    return std::pow(2.0 * beta, 0.5 * (d - 1.0)) * volume_moment(ModelParams::beta_model(d, beta, nu), 1.0);
  };
  std::vector<double> discrepancy;
  for (std::size_t i = 0; i < beta_list.size(); ++i) {
    const double beta = beta_list[i];
    const double a = scaled(beta);
    // The finite-beta bias is known in closed form; allow it with 50% slack.
    const double allowance = 1.5 * std::abs(a - exact);
    MCReport r;
    r.quantity = "(2 beta)^{(d-1)/2} E Vol against Gaussian limit, beta=" + fmt("%g", beta);
    r.params = describe(ModelParams::beta_model(d, beta, nu));
    r.closed_form = a;
    r.estimate = g.mean;
    r.std_error = g.std_error;
    r.n_samples = n;
    r.seed = seed;
    r.allowance = allowance;
    r.z_score = z_of(g.mean - a, g.std_error);
    r.verdict = z_verdict(g.mean - a, g.std_error, opt.z_threshold, allowance);
    r.note = "estimate is the Gaussian-side mean; allowance is 1.5 x the closed-form bias";
    out.push_back(r);
    discrepancy.push_back(std::abs(a - g.mean));

    if (nu == -1.0) {
      // Both sides are i.i.d. here, so the beta side is cheap to sample too.
      const ModelParams p = ModelParams::beta_model(d, beta, nu);
      std::vector<double> v = cell_volumes(p, n, derive_seed(seed, 100 + i), opt);
      const double f = std::pow(2.0 * beta, 0.5 * (d - 1.0));
      for (double& x : v) x *= f;
      const SampleSummary bs = summarize(v);
      MCReport t;
      t.quantity = "sampled (2 beta)^{(d-1)/2} E Vol against Gaussian sample, beta=" + fmt("%g", beta);
      t.params = r.params;
      t.estimate = bs.mean;
      t.std_error = bs.std_error;
      t.reference_estimate = g.mean;
      t.reference_std_error = g.std_error;
      t.n_samples = n;
      t.seed = seed;
      t.allowance = allowance;
      const double se = std::hypot(bs.std_error, g.std_error);
      t.z_score = z_of(bs.mean - g.mean, se);
      t.verdict = z_verdict(bs.mean - g.mean, se, opt.z_threshold, allowance);
      t.note = "both sides Monte Carlo; allowance is 1.5 x the closed-form bias";
      out.push_back(t);
    }
  }

  MCReport trend;
  trend.quantity = "Gaussian limit trend, exact discrepancy at largest vs smallest beta";
  trend.params = describe(base) + ".." + fmt("%g", beta_list.back());
  trend.estimate = std::abs(scaled(beta_list.back()) - exact);
  trend.reference_estimate = std::abs(scaled(beta_list.front()) - exact);
  trend.n_samples = n;
  trend.seed = seed;
  trend.verdict = trend.estimate < *trend.reference_estimate ? Verdict::Pass : Verdict::Fail;
  trend.note = "closed-form |A(beta) - E Vol| at the largest (estimate) and smallest (reference) beta; "
               "Monte Carlo discrepancies " + fmt("%.4g", discrepancy.back()) + " and " + fmt("%.4g", discrepancy.front());
  out.push_back(trend);
  return out;
}

// ---- tessellations ---------------------------------------------------------------

namespace {

double polygon_area(const std::vector<Eigen::Vector2d>& poly) {
  double a = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const auto& u = poly[i];
    const auto& v = poly[(i + 1) % poly.size()];
    a += u.x() * v.y() - u.y() * v.x();
  }
  return 0.5 * std::abs(a);
}

// Sutherland-Hodgman clip against one axis-aligned half-plane.
std::vector<Eigen::Vector2d> clip(const std::vector<Eigen::Vector2d>& poly, int axis, double bound,
                                  bool keep_above) {
  std::vector<Eigen::Vector2d> out;
  auto inside = [&](const Eigen::Vector2d& x) { return keep_above ? x(axis) >= bound : x(axis) <= bound; };
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const auto& cur = poly[i];
    const auto& prev = poly[(i + poly.size() - 1) % poly.size()];
    const bool ci = inside(cur), pi = inside(prev);
    if (ci != pi) {
      const double t = (bound - prev(axis)) / (cur(axis) - prev(axis));
      out.push_back(prev + t * (cur - prev));
    }
    if (ci) out.push_back(cur);
  }
  return out;
}

struct ReplicaStats {
  double g0 = 0, g1 = 0, g2 = 0, euler = 0;
  double tri_area_sum = 0, tri_count = 0;
  double cell_vertex_mean = 0;
  std::int64_t cells = 0;
  std::int64_t interior_vertices = 0, normal_vertices = 0;
  bool audit_ok = true;
  double coverage = 0;
};

MCReport one_sample(const std::string& quantity, const std::string& params, double closed,
                    const std::vector<double>& x, std::uint64_t seed, const VerifyOptions& opt) {
  const SampleSummary sm = summarize(x);
  MCReport r;
  r.quantity = quantity;
  r.params = params;
  r.closed_form = closed;
  r.estimate = sm.mean;
  r.std_error = sm.std_error;
  r.n_samples = sm.n;
  r.seed = seed;
  r.z_score = z_of(sm.mean - closed, sm.std_error);
  r.verdict = z_verdict(sm.mean - closed, sm.std_error, opt.z_threshold);
  return r;
}

}  // namespace

double interior_coverage(const TriangulationResult& t) {
  const Box& box = t.window.target_box;
  if (box.dim() != 2 || box.volume() <= 0.0) return 0.0;
  double covered = 0.0;
  for (const auto& tri : t.simplices) {
    if (tri.flag != SimplexFlag::Interior) continue;
    std::vector<Eigen::Vector2d> poly;
    for (int v : tri.v) poly.emplace_back(t.sites[v].v(0), t.sites[v].v(1));
    for (int axis = 0; axis < 2 && !poly.empty(); ++axis) {
      poly = clip(poly, axis, box.lo(axis), true);
      if (!poly.empty()) poly = clip(poly, axis, box.hi(axis), false);
    }
    if (poly.size() >= 3) covered += polygon_area(poly);
  }
  return covered / box.volume();
}

std::vector<MCReport> tessellation_vs_theory(const ModelParams& p, const WindowConfig& w,
                                             int replicas, std::uint64_t seed, const VerifyOptions& opt) {
  p.validate();
  if (p.d != 3) throw ParameterError("tessellation_vs_theory requires d = 3");
  if (replicas < 2) throw ParameterError("at least two replicas are required");
  const ModelParams p0 = p.with_nu(0.0);
  const WindowConfig resolved = resolve_window(p0, w);

  const auto stats = parallel_map<ReplicaStats>(static_cast<std::size_t>(replicas), opt.workers, [&](std::size_t r) {
    const TriangulationResult t = build_tessellation(p0, resolved, derive_seed(seed, r));
    const Box box = default_counting_box(t);
    const FaceCounts fc = empirical_face_intensities(t, box);
    ReplicaStats st;
    st.g0 = fc.vertices / fc.area;
    st.g1 = fc.edges / fc.area;
    st.g2 = fc.triangles / fc.area;
    st.euler = st.g0 - st.g1 + st.g2;
    for (const auto& tri : t.simplices) {
      if (tri.flag != SimplexFlag::Interior) continue;
      Eigen::MatrixXd v(2, 3);
      for (int j = 0; j < 3; ++j) v.col(j) = t.sites[tri.v[j]].v;
      if (!box.contains(v.rowwise().mean())) continue;
      st.tri_area_sum += simplex_volume(v);
      st.tri_count += 1.0;
    }
    const std::vector<int> counts = empirical_cell_vertex_counts(t, box);
    st.cells = static_cast<std::int64_t>(counts.size());
    double sum = 0.0;
    for (int c : counts) sum += c;
    st.cell_vertex_mean = counts.empty() ? 0.0 : sum / static_cast<double>(counts.size());
    const NormalityAudit audit = audit_normality(t);
    st.audit_ok = audit.ok();
    st.interior_vertices = audit.interior_vertices;
    st.normal_vertices = audit.vertices_with_three_cells;
    st.coverage = interior_coverage(t);
    return st;
  });

  const std::string params = describe(p0) + ", box " + fmt("%g", resolved.target_box.volume()) + ", " +
                             std::to_string(replicas) + " replicas";
  std::vector<MCReport> out;
  auto column = [&](auto field) {
    std::vector<double> x;
    for (const auto& st : stats) x.push_back(field(st));
    return x;
  };
  for (int j = 0; j < 3; ++j) {
    auto x = column([j](const ReplicaStats& st) { return j == 0 ? st.g0 : j == 1 ? st.g1 : st.g2; });
    out.push_back(one_sample("face intensity gamma_" + std::to_string(j), params, face_intensity(p0, j), x,
                             seed, opt));
  }
  out.push_back(one_sample("Euler check gamma_0 - gamma_1 + gamma_2", params, 0.0,
                           column([](const ReplicaStats& st) { return st.euler; }), seed, opt));

  {
    // Ratio estimator of the mean triangle area with a delta-method error.
    double sa = 0.0, sc = 0.0;
    for (const auto& st : stats) {
      sa += st.tri_area_sum;
      sc += st.tri_count;
    }
    const double ratio = sa / sc;
    std::vector<double> resid;
    for (const auto& st : stats) resid.push_back(st.tri_area_sum - ratio * st.tri_count);
    const double mean_count = sc / replicas;
    const SampleSummary rs = summarize(resid);
    MCReport r;
    r.quantity = "mean triangle area against E Vol(Z_{beta,0})";
    r.params = params;
    r.closed_form = volume_moment(p0, 1.0);
    r.estimate = ratio;
    r.std_error = rs.std_error / mean_count;
    r.n_samples = static_cast<std::int64_t>(sc);
    r.seed = seed;
    r.z_score = z_of(ratio - *r.closed_form, r.std_error);
    r.verdict = z_verdict(ratio - *r.closed_form, r.std_error, opt.z_threshold);
    out.push_back(r);
  }
  {
    std::int64_t iv = 0, nv = 0;
    bool ok = true;
    for (const auto& st : stats) {
      iv += st.interior_vertices;
      nv += st.normal_vertices;
      ok = ok && st.audit_ok;
    }
    MCReport r;
    r.quantity = "normality audit, fraction of interior vertices in three cells";
    r.params = params;
    r.closed_form = 1.0;
    r.estimate = iv == 0 ? 1.0 : static_cast<double>(nv) / static_cast<double>(iv);
    r.n_samples = iv;
    r.seed = seed;
    r.verdict = ok ? Verdict::Pass : Verdict::Fail;
    r.note = "pass requires every audit check to hold in every replica";
    out.push_back(r);
  }
  {
    const auto cov = column([](const ReplicaStats& st) { return st.coverage; });
    MCReport r;
    r.quantity = "interior coverage of the target box";
    r.params = params;
    r.estimate = *std::min_element(cov.begin(), cov.end());
    r.n_samples = replicas;
    r.seed = seed;
    r.verdict = r.estimate >= 0.99 ? Verdict::Pass : Verdict::Fail;
    r.note = "minimum over replicas; pass at >= 0.99";
    out.push_back(r);
  }
  out.push_back(one_sample("mean vertex count of the typical Laguerre cell", params, voronoi_f_vector(p0, p0.d),
                           column([](const ReplicaStats& st) { return st.cell_vertex_mean; }), seed, opt));
  return out;
}

// ---- suites -----------------------------------------------------------------------

std::vector<std::string> suite_names() { return {"moments", "identities", "limits", "tessellation", "all"}; }

namespace {

std::vector<ModelParams> moment_sets() {
  return {ModelParams::beta_model(2, 0.0, 1.0),      ModelParams::beta_model(3, 0.0, 0.0),
          ModelParams::beta_model(3, 2.0, 1.0),      ModelParams::beta_model(4, 0.0, 0.0),
          ModelParams::beta_model(4, 2.0, 1.0),      ModelParams::beta_prime_model(3, 4.0, 0.0),
          ModelParams::beta_prime_model(3, 6.0, 1.0), ModelParams::classical(3, 0.0)};
}

void append(std::vector<MCReport>& out, std::vector<MCReport> more) {
  out.insert(out.end(), std::make_move_iterator(more.begin()), std::make_move_iterator(more.end()));
}

std::vector<MCReport> suite_moments(const SuiteOptions& o) {
  std::vector<MCReport> out;
  std::uint64_t tag = 0;
  for (const auto& p : moment_sets()) {
    for (double s : {1.0, 2.0}) out.push_back(moment_test(p, s, o.n, derive_seed(o.seed, tag++), o.verify));
  }
  out.push_back(moment_test(ModelParams::beta_model(3, 2.0, 0.0), 0.0, o.n, o.seed, o.verify));
  const std::int64_t cells = std::max<std::int64_t>(2, o.n / 10);
  for (double beta : {0.0, 5.0}) {
    out.push_back(angle_sum_test(ModelParams::beta_model(4, beta, 0.0), 1, cells, 2000, derive_seed(o.seed, tag++),
                                 o.verify));
  }
  return out;
}

std::vector<MCReport> suite_identities(const SuiteOptions& o) {
  std::vector<MCReport> out;
  const std::vector<double> s = {0.5, 1.0, 2.0};
  append(out, identity_test_factorization(ModelParams::beta_model(3, 0.0, 0.0), s, o.n, derive_seed(o.seed, 0), o.verify));
  append(out, identity_test_factorization(ModelParams::beta_model(3, 2.0, 1.0), s, o.n, derive_seed(o.seed, 1), o.verify));
  append(out, identity_test_factorization(ModelParams::beta_model(3, 0.0, -1.0), s, o.n, derive_seed(o.seed, 2), o.verify));
  append(out, identity_test_factorization(ModelParams::beta_prime_model(3, 5.0, 0.0), s, o.n, derive_seed(o.seed, 3),
                                          o.verify));
  append(out, identity_test_higher_dim(ModelParams::beta_model(3, 1.0, 1.0), o.n, derive_seed(o.seed, 4), o.verify));
  append(out, identity_test_higher_dim(ModelParams::beta_model(3, 1.0, -1.0), o.n, derive_seed(o.seed, 5), o.verify));
  append(out, identity_test_higher_dim(ModelParams::beta_prime_model(3, 6.0, 0.0), o.n, derive_seed(o.seed, 6), o.verify));
  return out;
}

MCReport angle_sum_trend() {
  const double limit = 3.0 / boost::math::constants::pi<double>() * std::acos(1.0 / 3.0) - 1.0;
  double prev = -INFINITY;
  bool monotone = true;
  double last = 0.0;
  for (int beta = -1; beta <= 20; ++beta) {
    const ModelParams p = beta == -1 ? ModelParams::classical(4, 0.0) : ModelParams::beta_model(4, beta, 0.0);
    last = expected_angle_sum(p, 1);
    monotone = monotone && last > prev && last < limit;
    prev = last;
  }
  MCReport r;
  r.quantity = "E sigma_1(Z_{beta,0}) at d=4 approaching the regular simplex, beta=-1..20";
  r.params = "beta(d=4, nu=0)";
  r.closed_form = limit;
  r.estimate = last;
  r.verdict = monotone && std::abs(last - limit) < 0.02 ? Verdict::Pass : Verdict::Fail;
  r.note = "closed form on an integer beta grid; pass if increasing, below the limit, and within 0.02 at beta=20";
  return r;
}

std::vector<MCReport> suite_limits(const SuiteOptions& o) {
  std::vector<MCReport> out;
  for (double s : {1.0, 2.0}) {
    append(out, limit_test_classical(ModelParams::beta_model(3, -0.999, 0.0), s, o.n,
                                     derive_seed(o.seed, static_cast<std::uint64_t>(s)), o.verify));
  }
  for (double nu : {-1.0, 0.0}) {
    append(out, limit_test_gaussian(3, nu, {10.0, 100.0, 1000.0}, o.n,
                                    derive_seed(o.seed, 10 + static_cast<std::uint64_t>(nu + 1.0)), o.verify));
  }
  out.push_back(angle_sum_trend());
  return out;
}

std::vector<MCReport> suite_tessellation(const SuiteOptions& o) {
  const int replicas = o.n >= 100000 ? 50 : static_cast<int>(std::clamp<std::int64_t>(o.n / 2000, 10, 50));
  std::vector<MCReport> out;
  WindowConfig w;
  w.target_box = Box::square(0.0, 20.0);
  append(out, tessellation_vs_theory(ModelParams::beta_model(3, 0.0), w, replicas, derive_seed(o.seed, 0), o.verify));
  append(out, tessellation_vs_theory(ModelParams::beta_model(3, 2.0), w, replicas, derive_seed(o.seed, 1), o.verify));
  const ModelParams bp = ModelParams::beta_prime_model(3, 6.0);
  WindowConfig wp;
  wp.target_box = Box::square(0.0, 10.0);
  wp.eps = suggest_beta_prime_eps(bp, 1e-6);
  append(out, tessellation_vs_theory(bp, wp, replicas, derive_seed(o.seed, 2), o.verify));
  return out;
}

}  // namespace

std::vector<MCReport> run_suite(const std::string& name, const SuiteOptions& opt) {
  if (name == "moments") return suite_moments(opt);
  if (name == "identities") return suite_identities(opt);
  if (name == "limits") return suite_limits(opt);
  if (name == "tessellation") return suite_tessellation(opt);
  if (name == "all") {
    std::vector<MCReport> out;
    for (const char* s : {"moments", "identities", "limits", "tessellation"}) append(out, run_suite(s, opt));
    return out;
  }
  throw ParameterError("unknown suite '" + name + "' (expected moments, identities, limits, tessellation or all)");
}

bool any_failed(const std::vector<MCReport>& reports) {
  return std::any_of(reports.begin(), reports.end(), [](const MCReport& r) { return r.verdict == Verdict::Fail; });
}

std::string format_report_table(const std::vector<MCReport>& reports) {
  std::ostringstream os;
  char line[512];
  std::snprintf(line, sizeof line, "%-12s %-14s %-14s %-11s %-9s %s\n", "verdict", "estimate", "expected", "std_error",
                "z", "quantity [params]");
  os << line;
  for (const auto& r : reports) {
    std::string expected = "-";
    if (r.closed_form) expected = fmt("%.8g", *r.closed_form);
    else if (r.reference_estimate) expected = fmt("%.8g", *r.reference_estimate) + "*";
    std::string z = r.p_value ? "p=" + fmt("%.3g", *r.p_value) : fmt("%.2f", r.z_score);
    std::snprintf(line, sizeof line, "%-12s %-14.8g %-14s %-11.3g %-9s %s [%s]\n", to_string(r.verdict), r.estimate,
                  expected.c_str(), r.std_error, z.c_str(), r.quantity.c_str(), r.params.c_str());
    os << line;
  }
  std::int64_t pass = 0, fail = 0, inc = 0;
  for (const auto& r : reports) {
    pass += r.verdict == Verdict::Pass;
    fail += r.verdict == Verdict::Fail;
    inc += r.verdict == Verdict::Inconclusive;
  }
  os << pass << " pass, " << fail << " fail, " << inc << " inconclusive ("
     << "* = second Monte Carlo sample)\n";
  return os.str();
}

}  // namespace betadt
