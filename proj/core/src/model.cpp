#include "betadt/model.hpp"

#include <cmath>
#include <sstream>

#include "betadt/errors.hpp"

namespace betadt {

std::string to_string(Family f) {
  switch (f) {
    case Family::Beta: return "beta";
    case Family::BetaPrime: return "beta-prime";
    case Family::ClassicalDelaunay: return "classical";
  }
  return "unknown";
}

Family family_from_string(const std::string& name) {
  if (name == "beta") return Family::Beta;
  if (name == "beta-prime" || name == "betaprime" || name == "beta_prime") return Family::BetaPrime;
  if (name == "classical") return Family::ClassicalDelaunay;
  throw ParameterError("unknown family '" + name + "' (expected beta, beta-prime or classical)");
}

void ModelParams::validate() const {
  auto fail = [](const std::string& msg) { throw ParameterError(msg); };
  if (d < 2) fail("d must be >= 2 (the tessellation lives in R^{d-1})");
  if (!std::isfinite(beta) || !std::isfinite(nu) || !std::isfinite(gamma)) {
    fail("model parameters must be finite");
  }
  if (!(gamma > 0.0)) fail("gamma must be > 0");
  if (nu < -1.0) fail("nu must be >= -1");
  switch (family) {
    case Family::Beta:
      if (!(beta > -1.0)) fail("beta requires beta > -1");
      break;
    case Family::ClassicalDelaunay:
      if (beta != -1.0) fail("classical requires beta = -1");
      if (d == 2 && nu == -1.0) fail("classical with d = 2 requires nu > -1");
      break;
    case Family::BetaPrime:
      if (!(beta > 0.5 * (d + 1))) fail("beta-prime requires beta > (d+1)/2");
      if (!(nu < 2.0 * beta - d)) fail("beta-prime requires nu < 2*beta - d");
      break;
  }
}

ModelParams ModelParams::beta_model(int d, double beta, double nu, double gamma) {
  return ModelParams{Family::Beta, d, beta, nu, gamma};
}

ModelParams ModelParams::beta_prime_model(int d, double beta, double nu, double gamma) {
  return ModelParams{Family::BetaPrime, d, beta, nu, gamma};
}

ModelParams ModelParams::classical(int d, double nu, double gamma) {
  return ModelParams{Family::ClassicalDelaunay, d, -1.0, nu, gamma};
}

ModelParams ModelParams::with_nu(double new_nu) const {
  ModelParams q = *this;
  q.nu = new_nu;
  return q;
}

bool operator==(const ModelParams& a, const ModelParams& b) {
  return a.family == b.family && a.d == b.d && a.beta == b.beta && a.nu == b.nu &&
         a.gamma == b.gamma;
}

std::string describe(const ModelParams& p) {
  std::ostringstream os;
  os.precision(6);
  os << to_string(p.family) << "(d=" << p.d << ", beta=" << p.beta << ", nu=" << p.nu
     << ", gamma=" << p.gamma << ")";
  return os.str();
}

}  // namespace betadt
