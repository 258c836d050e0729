#include "piezolab/inequalities.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

#include "piezolab/spectrum.hpp"

namespace piezolab {

namespace {

using cd = std::complex<double>;

constexpr std::size_t kMaxExponents = 512;

cd G(double delta, double T) {
  const double x = 0.5 * delta * T;
  const double sc = std::abs(x) < 1e-4 ? 1.0 - x * x / 6.0 : std::sin(x) / x;
  return T * sc * cd(std::cos(x), std::sin(x));
}

// int_0^T |e^{i d t} - 1|^2 / d^2 dt = 2 T^3 (1 - sinc x) / x^2, x = dT
double self_dd(double d, double T) {
  const double x = d * T;
  double g;
  if (std::abs(x) < 1e-2) {
    const double x2 = x * x;
    g = 1.0 / 6.0 - x2 / 120.0 + x2 * x2 / 5040.0;
  } else {
    g = (1.0 - std::sin(x) / x) / (x * x);
  }
  return 2.0 * T * T * T * g;
}

// e^{i a t}, or e^{i a t} (e^{i d t} - 1)/d when dd
struct Basis {
  double a;
  double d;
  bool dd;
};

cd inner(const Basis& f, const Basis& g, double T) {
  const double D = f.a - g.a;
  if (!f.dd && !g.dd) return G(D, T);
  if (f.dd && !g.dd) return (G(D + f.d, T) - G(D, T)) / f.d;
  if (!f.dd && g.dd) return std::conj((G(-D + g.d, T) - G(-D, T)) / g.d);
  if (f.a == g.a && f.d == g.d) return self_dd(f.d, T);
  return (G(D + f.d - g.d, T) - G(D + f.d, T) - G(D - g.d, T) + G(D, T)) /
         (f.d * g.d);
}

}  // namespace

ExponentSet ExponentSet::make(std::vector<double> s, double tau_prime) {
  if (s.empty()) throw std::invalid_argument("empty exponent set");
  if (s.size() > kMaxExponents)
    throw std::invalid_argument("exponent sets are capped at 512 elements");
  std::sort(s.begin(), s.end());
  ExponentSet e;
  e.tau_prime = tau_prime;
  for (std::size_t n = 0; n + 1 < s.size(); ++n) {
    if (s[n + 1] == s[n] || is_collision(s[n], s[n + 1]))
      throw std::invalid_argument("duplicate exponents: raw Gram matrix is singular");
    if (s[n + 1] - s[n] < tau_prime) {
      if (!e.chains.empty() && e.chains.back().second == n)
        throw std::invalid_argument("chain of close exponents longer than two");
      e.chains.emplace_back(n, n + 1);
    }
  }
  e.s = std::move(s);
  return e;
}

ExponentSet exponents_from_spectrum(const DerivedConstants& dc, std::size_t N,
                                    double tau_prime) {
  if (tau_prime <= 0.0) tau_prime = 0.5 * chain_threshold(dc);
  std::vector<double> s;
  for (const auto& m : frequencies(dc, N)) s.push_back(m.frequency);
  return ExponentSet::make(std::move(s), tau_prime);
}

GramReport gram_condition(const ExponentSet& e, double T,
                          bool use_divided_differences) {
  if (!(T > 0.0)) throw std::invalid_argument("T must be > 0");
  std::vector<Basis> basis;
  for (std::size_t n = 0; n < e.s.size(); ++n) basis.push_back({e.s[n], 0.0, false});
  if (use_divided_differences)
    for (const auto& [n, m] : e.chains)
      basis[m] = {e.s[n], e.s[m] - e.s[n], true};

  const auto n = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXcd Gm(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j <= i; ++j) {
      const cd v = inner(basis[static_cast<std::size_t>(i)],
                         basis[static_cast<std::size_t>(j)], T);
      Gm(i, j) = v;
      Gm(j, i) = std::conj(v);
    }
  Eigen::VectorXd dinv(n);
  for (Eigen::Index i = 0; i < n; ++i) dinv[i] = 1.0 / std::sqrt(Gm(i, i).real());
  const Eigen::MatrixXcd Gn = dinv.asDiagonal() * Gm * dinv.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(Gn, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("Hermitian eigensolver failed");
  GramReport r;
  r.size = basis.size();
  r.lambda_min = es.eigenvalues()[0];
  r.lambda_max = es.eigenvalues()[n - 1];
  r.condition = r.lambda_min > 0.0 ? r.lambda_max / r.lambda_min
                                   : std::numeric_limits<double>::infinity();
  return r;
}

AmmariReport ammari_check(double C, double alpha, double E0, std::size_t K) {
  if (!(C > 0.0)) throw std::invalid_argument("C must be > 0");
  if (!(alpha > -1.0)) throw std::invalid_argument("alpha must be > -1");
  if (!(E0 > 0.0)) throw std::invalid_argument("E0 must be > 0");
  if (K == 0) throw std::invalid_argument("K must be >= 1");
  const double q = 2.0 + alpha;
  const double expo = 1.0 / (1.0 + alpha);
  AmmariReport r;
  r.E.reserve(K + 1);
  r.E.push_back(E0);
  for (std::size_t k = 0; k < K; ++k) {
    const double target = r.E.back();
    // x + C x^q is strictly increasing on [0, target]; root is interior
    double lo = 0.0, hi = target;
    for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid + C * std::pow(mid, q) > target)
        hi = mid;
      else
        lo = mid;
    }
    const double x = 0.5 * (lo + hi);
    if (!(x > 0.0 && x < target))
      throw std::runtime_error("extremal recurrence left (0, E_k)");
    r.E.push_back(x);
  }
  r.eventually_nonincreasing = true;
  double prev = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k <= K; ++k) {
    const double v = r.E[k] * std::pow(static_cast<double>(k + 1), expo);
    if (v > r.M) {
      r.M = v;
      r.argmax = k;
    }
    if (k >= K / 2) {
      if (v > prev * (1.0 + 1e-12)) r.eventually_nonincreasing = false;
      prev = v;
    }
    if (k == K) r.tail_product = v;
  }
  return r;
}

InterpolationReport interpolation_check(const std::vector<double>& f,
                                        double epsilon) {
  if (!(epsilon >= 0.0 && epsilon < 0.5))
    throw std::invalid_argument("epsilon must lie in [0, 1/2)");
  double sf = 0.0, s1 = 0.0, s2 = 0.0;
  for (std::size_t j = 1; j <= f.size(); ++j) {
    const double fj = f[j - 1];
    if (fj < 0.0 || !std::isfinite(fj))
      throw std::invalid_argument("weights must be finite and >= 0");
    const double m = static_cast<double>(2 * j - 1);
    sf += fj;
    s1 += fj * std::pow(m, -2.0 - 2.0 * epsilon);
    s2 += fj * m * m;
  }
  if (sf == 0.0) throw std::invalid_argument("all-zero weight sequence");
  InterpolationReport r;
  r.lhs = s1;
  const double log_rhs = (2.0 + epsilon) * std::log(sf) - (1.0 + epsilon) * std::log(s2);
  r.rhs = std::exp(log_rhs);
  r.slack = std::exp(std::log(s1) - log_rhs);
  r.holds = r.slack >= 1.0 - 1e-12;
  return r;
}

}  // namespace piezolab
