#include "betadt/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/random/gamma_distribution.hpp>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/poisson_distribution.hpp>

#include "betadt/constants.hpp"
#include "betadt/errors.hpp"
#include "betadt/geometry.hpp"
#include "betadt/parallel.hpp"
#include "betadt/special.hpp"

namespace betadt {

// ---- primitive distributions ------------------------------------------------

double sample_log_gamma(double shape, RandomStream& s) {
  if (!(shape > 0.0) || !std::isfinite(shape)) {
    throw DomainError("gamma shape must be finite and > 0");
  }
  if (shape >= 1.0) {
    boost::random::gamma_distribution<double> dist(shape, 1.0);
    return std::log(dist(s));
  }
  // G_a = G_{a+1} * U^{1/a}, kept in log form so tiny shapes do not underflow.
  boost::random::gamma_distribution<double> dist(shape + 1.0, 1.0);
  const double g = dist(s);
  return std::log(g) + std::log(s.uniform()) / shape;
}

double sample_gamma(double shape, double rate, RandomStream& s) {
  if (!(rate > 0.0) || !std::isfinite(rate)) throw DomainError("gamma rate must be finite and > 0");
  if (shape >= 1.0) {
    boost::random::gamma_distribution<double> dist(shape, 1.0);
    return dist(s) / rate;
  }
  return std::exp(sample_log_gamma(shape, s)) / rate;
}

double sample_beta_rv(double a, double b, RandomStream& s) {
  if (!(a > 0.0) || !(b > 0.0)) throw DomainError("beta shape parameters must be > 0");
  const double lx = sample_log_gamma(a, s);
  const double ly = sample_log_gamma(b, s);
  return 1.0 / (1.0 + std::exp(ly - lx));
}

double sample_beta_prime_rv(double a, double b, RandomStream& s) {
  if (!(a > 0.0) || !(b > 0.0)) throw DomainError("beta-prime shape parameters must be > 0");
  const double lx = sample_log_gamma(a, s);
  const double ly = sample_log_gamma(b, s);
  return std::exp(lx - ly);
}

double sample_normal(RandomStream& s) {
  boost::random::normal_distribution<double> dist(0.0, 1.0);
  return dist(s);
}

namespace {

void fill_sphere(double* out, int q, RandomStream& s) {
  double norm2 = 0.0;
  do {
    norm2 = 0.0;
    for (int i = 0; i < q; ++i) {
      out[i] = sample_normal(s);
      norm2 += out[i] * out[i];
    }
  } while (!(norm2 > 0.0));
  const double inv = 1.0 / std::sqrt(norm2);
  for (int i = 0; i < q; ++i) out[i] *= inv;
}

void fill_beta_ball(double* out, int q, double beta, RandomStream& s) {
  const double r2 = sample_beta_rv(0.5 * q, beta + 1.0, s);
  fill_sphere(out, q, s);
  const double r = std::sqrt(r2);
  for (int i = 0; i < q; ++i) out[i] *= r;
}

void fill_beta_prime(double* out, int q, double beta, RandomStream& s) {
  const double r2 = sample_beta_prime_rv(0.5 * q, beta - 0.5 * q, s);
  fill_sphere(out, q, s);
  const double r = std::sqrt(r2);
  for (int i = 0; i < q; ++i) out[i] *= r;
}

}  // namespace

Point sample_sphere_point(int q, RandomStream& s) {
  if (q < 1) throw DomainError("sphere dimension must be >= 1");
  Point x(q);
  fill_sphere(x.data(), q, s);
  return x;
}

Point sample_beta_ball_point(int q, double beta, RandomStream& s) {
  if (q < 1) throw DomainError("ball dimension must be >= 1");
  if (!(beta > -1.0)) throw DomainError("beta point requires beta > -1");
  Point x(q);
  fill_beta_ball(x.data(), q, beta, s);
  return x;
}

Point sample_beta_prime_point(int q, double beta, RandomStream& s) {
  if (q < 1) throw DomainError("dimension must be >= 1");
  if (!(beta > 0.5 * q)) throw DomainError("beta-prime point requires beta > q/2");
  Point x(q);
  fill_beta_prime(x.data(), q, beta, s);
  return x;
}

// ---- weighted tuples ----------------------------------------------------------

double inscribed_simplex_volume_bound(int n) {
  if (n < 1) throw DomainError("dimension must be >= 1");
  // (n+1)^{(n+1)/2} / (n! n^{n/2})
  const double log_v = 0.5 * (n + 1) * std::log(n + 1.0) - log_factorial(n) - 0.5 * n * std::log(n);
  return std::exp(log_v);
}

WeightedTuple sample_weighted_tuple(const ModelParams& p, RandomStream& s) {
  p.validate();
  const int d = p.d;
  const int n = d - 1;
  const double a = p.nu + 1.0;
  WeightedTuple out;
  out.points.resize(n, d);
  out.method = TupleMethod::Rejection;
  TupleDiagnostics& diag = out.diagnostics;
  double* data = out.points.data();

  if (p.family == Family::BetaPrime) {
    // Hadamard: (d-1)! Delta <= prod (1 + |y_i|^2)^{1/2}, so proposals with the
    // tilted exponent beta - (nu+1)/2 give a bounded acceptance ratio.
    const double tilted = p.beta - 0.5 * a;
    const double log_fact = log_factorial(n);
    for (;;) {
      ++diag.proposals;
      double log_norms = 0.0;
      for (int i = 0; i < d; ++i) {
        fill_beta_prime(data + i * n, n, tilted, s);
        log_norms += std::log1p(out.points.col(i).squaredNorm());
      }
      if (a == 0.0) break;
      const double vol = simplex_volume(out.points);
      if (!(vol > 0.0)) continue;
      const double log_ratio = a * (log_fact + std::log(vol) - 0.5 * log_norms);
      if (std::log(s.uniform()) < log_ratio) break;
    }
  } else {
    const bool sphere = p.family == Family::ClassicalDelaunay;
    const double log_bound = std::log(inscribed_simplex_volume_bound(n));
    for (;;) {
      ++diag.proposals;
      for (int i = 0; i < d; ++i) {
        if (sphere) {
          fill_sphere(data + i * n, n, s);
        } else {
          fill_beta_ball(data + i * n, n, p.beta, s);
        }
      }
      if (a == 0.0) break;
      const double vol = simplex_volume(out.points);
      if (!(vol > 0.0)) continue;
      if (std::log(s.uniform()) < a * (std::log(vol) - log_bound)) break;
    }
  }
  diag.accepted = 1;
  diag.acceptance_rate = 1.0 / static_cast<double>(diag.proposals);
  return out;
}

// ---- MCMC -------------------------------------------------------------------------

McmcTupleSampler::McmcTupleSampler(const ModelParams& p, RandomStream s, McmcOptions opt)
    : target_(McmcTarget::BetaBall), d_(p.d), n_(p.d - 1), beta_(p.beta), nu_(p.nu),
      rng_(s), opt_(opt) {
  p.validate();
  if (p.family == Family::ClassicalDelaunay) {
    throw ParameterError("MCMC tuples are not available for the classical model (use rejection)");
  }
  target_ = p.family == Family::BetaPrime ? McmcTarget::BetaPrime : McmcTarget::BetaBall;
  init();
}

McmcTupleSampler::McmcTupleSampler(McmcTarget target, int d, double beta, double nu, RandomStream s,
                                   McmcOptions opt)
    : target_(target), d_(d), n_(d - 1), beta_(beta), nu_(nu), rng_(s), opt_(opt) {
  if (d < 2) throw ParameterError("d must be >= 2");
  if (nu < -1.0) throw ParameterError("nu must be >= -1");
  init();
}

double McmcTupleSampler::log_weight(const Eigen::VectorXd& y) const {
  const double r2 = y.squaredNorm();
  switch (target_) {
    case McmcTarget::BetaBall:
      if (!(r2 < 1.0)) return -std::numeric_limits<double>::infinity();
      return beta_ * std::log1p(-r2);
    case McmcTarget::BetaPrime: return -beta_ * std::log1p(r2);
    case McmcTarget::Gaussian: return -0.5 * r2;
  }
  return 0.0;
}

double McmcTupleSampler::log_target_delta(const Eigen::MatrixXd& pts) const {
  const double vol = simplex_volume(pts);
  return vol > 0.0 ? std::log(vol) : -std::numeric_limits<double>::infinity();
}

void McmcTupleSampler::sweep() {
  const double a = nu_ + 1.0;
  Eigen::VectorXd old(n_);
  for (int i = 0; i < d_; ++i) {
    old = state_.col(i);
    for (int c = 0; c < n_; ++c) state_(c, i) = old(c) + step_[0] * sample_normal(rng_);
    const double w_new = log_weight(state_.col(i));
    const double ld_new = log_target_delta(state_);
    const double log_acc = (a != 0.0 ? a * (ld_new - log_delta_) : 0.0) + (w_new - weights_(i));
    ++proposals_;
    if (std::isfinite(w_new) && std::log(rng_.uniform()) < log_acc) {
      ++accepted_;
      weights_(i) = w_new;
      log_delta_ = ld_new;
    } else {
      state_.col(i) = old;
    }
  }
}

namespace {

double autocorr(const std::vector<double>& x, std::size_t lag) {
  const std::size_t n = x.size();
  if (n <= lag + 1) return 0.0;
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(n);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < n; ++i) den += (x[i] - mean) * (x[i] - mean);
  for (std::size_t i = 0; i + lag < n; ++i) num += (x[i] - mean) * (x[i + lag] - mean);
  return den > 0.0 ? num / den : 0.0;
}

// Integrated autocorrelation time with Sokal's self-consistent window (c = 5).
double integrated_autocorr(const std::vector<double>& x) {
  double tau = 1.0;
  for (std::size_t lag = 1; lag < x.size() / 2; ++lag) {
    tau += 2.0 * autocorr(x, lag);
    if (static_cast<double>(lag) >= 5.0 * tau) break;
  }
  return std::max(tau, 1.0);
}

}  // namespace

void McmcTupleSampler::init() {
  state_.resize(n_, d_);
  weights_.resize(d_);
  step_.assign(1, target_ == McmcTarget::BetaBall ? 0.5 / std::sqrt(n_ + beta_ + 1.0) : 0.5);
  for (int i = 0; i < d_; ++i) {
    switch (target_) {
      case McmcTarget::BetaBall: fill_beta_ball(state_.col(i).data(), n_, beta_, rng_); break;
      case McmcTarget::BetaPrime:
        fill_beta_prime(state_.col(i).data(), n_, std::max(beta_ - 0.5 * (nu_ + 1.0), 0.5 * n_ + 0.5),
                        rng_);
        break;
      case McmcTarget::Gaussian:
        for (int c = 0; c < n_; ++c) state_(c, i) = sample_normal(rng_);
        break;
    }
    weights_(i) = log_weight(state_.col(i));
  }
  log_delta_ = log_target_delta(state_);

  // Burn-in with step adaptation toward ~35% acceptance.
  std::int64_t window_prop = 0, window_acc = 0;
  for (std::int64_t it = 0; it < opt_.burn_in; ++it) {
    const std::int64_t p0 = proposals_, a0 = accepted_;
    sweep();
    window_prop += proposals_ - p0;
    window_acc += accepted_ - a0;
    if ((it + 1) % 100 == 0) {
      const double rate = static_cast<double>(window_acc) / static_cast<double>(window_prop);
      step_[0] *= std::exp(rate - 0.35);
      window_prop = window_acc = 0;
    }
  }

  // Thinning so that ln Delta has lag-1 autocorrelation below the threshold.
  int thin = 1;
  std::vector<double> trace;
  double rho = 1.0;
  for (;;) {
    trace.clear();
    for (int i = 0; i < opt_.pilot_length; ++i) {
      for (int t = 0; t < thin; ++t) sweep();
      trace.push_back(log_delta_);
    }
    rho = autocorr(trace, 1);
    if (rho < opt_.max_lag1_autocorr || thin >= opt_.max_thinning) break;
    thin *= 2;
  }
  diag_.method = TupleMethod::Mcmc;
  diag_.burn_in = opt_.burn_in;
  diag_.thinning = thin;
  diag_.lag1_autocorr = rho;
  diag_.integrated_autocorr = integrated_autocorr(trace);
  diag_.converged =
      rho < opt_.max_lag1_autocorr && diag_.integrated_autocorr <= opt_.max_integrated_autocorr;
}

WeightedTuple McmcTupleSampler::next() {
  for (int t = 0; t < diag_.thinning; ++t) sweep();
  diag_.proposals = proposals_;
  diag_.accepted = accepted_;
  diag_.acceptance_rate = static_cast<double>(accepted_) / static_cast<double>(proposals_);
  WeightedTuple out;
  out.points = state_;
  out.method = TupleMethod::Mcmc;
  out.diagnostics = diag_;
  return out;
}

// ---- typical cells --------------------------------------------------------------

double sample_radius(const ModelParams& p, RandomStream& s) {
  p.validate();
  const double q = radial_exponent(p);
  const double log_z = sample_log_gamma(radial_gamma_shape(p), s);
  return std::exp((log_z - std::log(void_rate(p))) / q);
}

Simplex sample_typical_cell(const ModelParams& p, RandomStream& s) {
  WeightedTuple t = sample_weighted_tuple(p, s);
  const double r = sample_radius(p, s);
  return Simplex(r * t.points);
}

CellBatch sample_typical_cells(const ModelParams& p, std::int64_t n, std::uint64_t seed,
                               const CellSamplingOptions& opt) {
  p.validate();
  if (n < 0) throw DomainError("sample count must be >= 0");
  CellBatch batch;
  batch.cells.resize(static_cast<std::size_t>(n));
  TupleDiagnostics& agg = batch.diagnostics;

  if (opt.method != TupleMethod::Mcmc) {
    std::vector<std::int64_t> proposals(static_cast<std::size_t>(n), 0);
    parallel_for(static_cast<std::size_t>(n), opt.workers, [&](std::size_t i) {
      RandomStream s(seed, opt.stream_base + i);
      WeightedTuple t = sample_weighted_tuple(p, s);
      const double r = sample_radius(p, s);
      batch.cells[i] = Simplex(r * t.points);
      proposals[i] = t.diagnostics.proposals;
    });
    agg.method = TupleMethod::Rejection;
    for (auto v : proposals) agg.proposals += v;
    agg.accepted = n;
    agg.acceptance_rate = agg.proposals > 0 ? static_cast<double>(n) / static_cast<double>(agg.proposals) : 1.0;
    return batch;
  }

  const std::int64_t block = std::max(1, opt.mcmc_block);
  const std::size_t n_blocks = static_cast<std::size_t>((n + block - 1) / block);
  std::vector<TupleDiagnostics> diags(n_blocks);
  parallel_for(n_blocks, opt.workers, [&](std::size_t b) {
    McmcTupleSampler chain(p, RandomStream(seed, streams::kMcmc + opt.stream_base + b), opt.mcmc);
    const std::int64_t lo = static_cast<std::int64_t>(b) * block;
    const std::int64_t hi = std::min(n, lo + block);
    for (std::int64_t i = lo; i < hi; ++i) {
      WeightedTuple t = chain.next();
      RandomStream s(seed, opt.stream_base + static_cast<std::uint64_t>(i));
      batch.cells[static_cast<std::size_t>(i)] = Simplex(sample_radius(p, s) * t.points);
    }
    diags[b] = chain.next().diagnostics;
  });
  agg.method = TupleMethod::Mcmc;
  agg.converged = true;
  agg.thinning = 1;
  for (const auto& dg : diags) {
    agg.proposals += dg.proposals;
    agg.accepted += dg.accepted;
    agg.burn_in += dg.burn_in;
    agg.thinning = std::max(agg.thinning, dg.thinning);
    agg.lag1_autocorr = std::max(agg.lag1_autocorr, dg.lag1_autocorr);
    agg.integrated_autocorr = std::max(agg.integrated_autocorr, dg.integrated_autocorr);
    agg.converged = agg.converged && dg.converged;
  }
  agg.acceptance_rate = agg.proposals > 0 ? static_cast<double>(agg.accepted) / static_cast<double>(agg.proposals) : 0.0;
  return batch;
}

Simplex sample_gaussian_limit_simplex(int d, double nu, RandomStream& s) {
  if (d < 2) throw ParameterError("d must be >= 2");
  if (nu < -1.0) throw ParameterError("nu must be >= -1");
  const int n = d - 1;
  const double a = nu + 1.0;
  Eigen::MatrixXd pts(n, d);
  if (a == 0.0) {
    for (int i = 0; i < pts.size(); ++i) pts.data()[i] = sample_normal(s);
    return Simplex(std::move(pts));
  }
  // Target Delta^a prod exp(-t_i/2), t_i = |g_i|^2. With (d-1)! Delta <=
  // prod (1+t_i)^{1/2} and (1+t)^{a/2} <= C exp(eps t), proposals
  // N(0, I/(1-2 eps)) are accepted with probability
  // ((d-1)! Delta)^a prod exp(-eps t_i) / C^d.
  const double eps = a / (2.0 * (n + a + 1.0));
  const double sigma = 1.0 / std::sqrt(1.0 - 2.0 * eps);
  const double t_star = a / (2.0 * eps) - 1.0;
  const double log_c = t_star > 0.0 ? 0.5 * a * std::log1p(t_star) - eps * t_star : 0.0;
  const double log_fact = log_factorial(n);
  for (;;) {
    double sum_t = 0.0;
    for (int i = 0; i < pts.size(); ++i) {
      const double g = sigma * sample_normal(s);
      pts.data()[i] = g;
      sum_t += g * g;
    }
    const double vol = simplex_volume(pts);
    if (!(vol > 0.0)) continue;
    const double log_acc = a * (log_fact + std::log(vol)) - eps * sum_t - d * log_c;
    if (std::log(s.uniform()) < log_acc) break;
  }
  return Simplex(std::move(pts));
}

// ---- Poisson processes -------------------------------------------------------

namespace {

void check_box(const Box& box, int dim) {
  if (box.dim() != dim || box.hi.size() != dim) {
    throw ParameterError("spatial box must have dimension d-1");
  }
  if (!((box.hi.array() > box.lo.array()).all())) throw ParameterError("spatial box is empty");
}

void check_heights(const ModelParams& p, const HeightRange& h) {
  if (p.family == Family::Beta) {
    if (!(h.lo >= 0.0 && h.hi > h.lo)) {
      throw ParameterError("beta heights must satisfy 0 <= h_lo < h_hi");
    }
  } else if (p.family == Family::BetaPrime) {
    if (!(h.hi < 0.0)) {
      throw ParameterError(
          "beta-prime requires a height truncation eps > 0 (sites accumulate at h = 0)");
    }
    if (!(h.lo < h.hi) || !std::isfinite(h.lo)) {
      throw ParameterError("beta-prime heights must satisfy -H <= h < -eps with finite H");
    }
  }
}

}  // namespace

double poisson_mean_count(const ModelParams& p, const Box& box, const HeightRange& h) {
  p.validate();
  check_box(box, p.d - 1);
  check_heights(p, h);
  const double spatial = box.volume();
  if (p.family == Family::ClassicalDelaunay) return 2.0 * p.gamma / sphere_surface(p.d) * spatial;
  const double c = intensity_constant(p);
  if (p.family == Family::Beta) {
    const double e = p.beta + 1.0;
    return p.gamma * c * spatial * (std::pow(h.hi, e) - std::pow(h.lo, e)) / e;
  }
  const double e = 1.0 - p.beta;  // negative
  const double s0 = -h.hi, s1 = -h.lo;
  return p.gamma * c * spatial * (std::pow(s0, e) - std::pow(s1, e)) / (p.beta - 1.0);
}

std::vector<Site> sample_poisson_process(const ModelParams& p, const Box& box,
                                         const HeightRange& h, RandomStream& s) {
  const double mean = poisson_mean_count(p, box, h);
  const int dim = p.d - 1;
  std::int64_t count = 0;
  if (mean > 0.0) {
    boost::random::poisson_distribution<std::int64_t, double> dist(mean);
    count = dist(s);
  }
  std::vector<Site> sites(static_cast<std::size_t>(count));
  const Point extent = box.hi - box.lo;
  for (Site& site : sites) {
    site.v.resize(dim);
    for (int i = 0; i < dim; ++i) site.v(i) = box.lo(i) + extent(i) * s.uniform();
    const double u = s.uniform();
    switch (p.family) {
      case Family::ClassicalDelaunay: site.h = 0.0; break;
      case Family::Beta: {
        const double e = p.beta + 1.0;
        const double rho = h.lo > 0.0 ? std::pow(h.lo / h.hi, e) : 0.0;
        site.h = h.hi * std::pow(rho + u * (1.0 - rho), 1.0 / e);
        break;
      }
      case Family::BetaPrime: {
        const double e = 1.0 - p.beta;
        const double s0 = -h.hi, s1 = -h.lo;
        const double tail = std::pow(s1 / s0, e);
        site.h = -s0 * std::pow(1.0 - u * (1.0 - tail), 1.0 / e);
        break;
      }
    }
  }
  return sites;
}

std::vector<Site> sample_beta_prime_sites_by_depth(const ModelParams& p, const Box& box, double top,
                                                   double stop, RandomStream& s) {
  p.validate();
  check_box(box, p.d - 1);
  if (p.family != Family::BetaPrime) throw ParameterError("depth-ordered sampling is for the beta-prime model");
  if (!(stop > 0.0 && top > stop)) throw ParameterError("depth range requires 0 < stop < top");
  // Mass of depths in [a, top] is K (a^{1-beta} - top^{1-beta}) / (beta - 1).
  const double k = p.gamma * intensity_constant(p) * box.volume() / (p.beta - 1.0);
  const double e = 1.0 - p.beta;
  const double base = std::pow(top, e);
  const double total = k * (std::pow(stop, e) - base);
  const Point extent = box.hi - box.lo;
  std::vector<Site> sites;
  double mass = 0.0;
  for (;;) {
    mass -= std::log(s.uniform());
    if (mass > total) break;
    Site site;
    site.h = -std::pow(base + mass / k, 1.0 / e);
    site.v.resize(p.d - 1);
    for (int i = 0; i < p.d - 1; ++i) site.v(i) = box.lo(i) + extent(i) * s.uniform();
    sites.push_back(std::move(site));
  }
  return sites;
}

}  // namespace betadt
