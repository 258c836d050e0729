#include "piezolab/material.hpp"

#include <cmath>
#include <numbers>

namespace piezolab {

namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw ParameterError(std::string(name) + " must be finite and > 0");
}

}  // namespace

void validate(const MaterialParams& p) {
  require_positive(p.rho, "rho");
  require_positive(p.alpha1, "alpha1");
  require_positive(p.beta, "beta");
  if (p.gamma == 0.0)
    throw ParameterError("gamma = 0: decoupled limit unsupported");
  require_positive(p.gamma, "gamma");
  require_positive(p.mu, "mu");
  require_positive(p.L, "L");
  require_positive(p.h, "h");
}

DerivedConstants derive_constants(const MaterialParams& p) {
  validate(p);
  const double g2mu = p.gamma * p.gamma * p.mu / p.alpha1;
  const double mub = p.mu / p.beta;
  const double ra = p.rho / p.alpha1;

  // y^2 - S y + P = 0 with roots zeta_k^2.  The discriminant is rewritten as
  // a square plus a positive term so it never cancels.
  const double S = g2mu + mub + ra;
  const double P = p.rho * p.mu / (p.beta * p.alpha1);
  const double t = g2mu + mub - ra;
  const double disc = t * t + 4.0 * ra * g2mu;
  const double y1 = 0.5 * (S + std::sqrt(disc));
  const double y2 = P / y1;

  DerivedConstants dc;
  dc.alpha = p.alpha1 + p.gamma * p.gamma * p.beta;
  dc.zeta1 = std::sqrt(y1);
  dc.zeta2 = std::sqrt(y2);

  // b_k = (alpha1 zeta_k^2 - rho)/(gamma mu) are the roots of
  // b^2 - g b - rho/mu = 0.
  const double g = p.gamma + p.alpha1 / (p.gamma * p.beta) -
                   p.rho / (p.gamma * p.mu);
  const double rm = p.rho / p.mu;
  const double root = std::sqrt(g * g + 4.0 * rm);
  if (g >= 0.0) {
    dc.b1 = 0.5 * (g + root);
    dc.b2 = -rm / dc.b1;
  } else {
    dc.b2 = 0.5 * (g - root);
    dc.b1 = -rm / dc.b2;
  }

  dc.L = p.L;
  dc.h = p.h;
  dc.rho_over_mu = rm;
  dc.params = p;
  return dc;
}

DerivedConstants synthetic_constants(double zeta1, double zeta2,
                                     double rho_over_mu, double L, double h) {
  require_positive(zeta1, "zeta1");
  require_positive(zeta2, "zeta2");
  require_positive(rho_over_mu, "rho_over_mu");
  require_positive(L, "L");
  require_positive(h, "h");
  if (!(zeta1 > zeta2))
    throw ParameterError("synthetic constants need zeta1 > zeta2");
  DerivedConstants dc;
  dc.zeta1 = zeta1;
  dc.zeta2 = zeta2;
  dc.b1 = std::sqrt(rho_over_mu * zeta1 / zeta2);
  dc.b2 = -std::sqrt(rho_over_mu * zeta2 / zeta1);
  dc.alpha = std::nan("");
  dc.L = L;
  dc.h = h;
  dc.rho_over_mu = rho_over_mu;
  return dc;
}

MaterialParams params_for_ratio(double ratio, double zeta2,
                                const MaterialParams& base) {
  require_positive(zeta2, "zeta2");
  if (!(ratio > 1.0)) throw ParameterError("ratio zeta1/zeta2 must be > 1");
  const double y2 = zeta2 * zeta2;
  const double S = (1.0 + ratio * ratio) * y2;
  const double P = ratio * ratio * y2 * y2;
  const double a = base.gamma * base.gamma * base.mu + base.rho;
  const double disc = S * S - 4.0 * a * P / base.rho;
  if (disc < 0.0)
    throw ParameterError("no physical parameter set for this ratio and base");
  const double u = (S + std::sqrt(disc)) / (2.0 * a);
  const double w = P / (base.rho * base.mu * u);
  MaterialParams out = base;
  out.alpha1 = 1.0 / u;
  out.beta = 1.0 / w;
  validate(out);
  return out;
}

MaterialParams golden_params() {
  MaterialParams p;
  p.L = std::numbers::pi / 2.0;
  return p;
}

}  // namespace piezolab
