#include "piezolab/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace piezolab {

double sigma_j(std::size_t j, double L) {
  return static_cast<double>(2 * j - 1) * std::numbers::pi / (2.0 * L);
}

EigenMode make_mode(const DerivedConstants& dc, int branch, std::size_t j,
                    int sign) {
  if (branch != 1 && branch != 2) throw std::invalid_argument("branch must be 1 or 2");
  if (j == 0) throw std::invalid_argument("mode index starts at 1");
  EigenMode m;
  m.branch = branch;
  m.index = j;
  m.sign = sign >= 0 ? +1 : -1;
  m.sigma = sigma_j(j, dc.L);
  m.frequency = m.sigma / dc.zeta(branch);
  m.eigenvalue = cplx(0.0, m.sign * m.frequency);
  m.amplitude = {1.0, dc.b(branch)};
  return m;
}

std::vector<EigenMode> frequencies(const DerivedConstants& dc, std::size_t N) {
  if (N == 0) throw std::invalid_argument("N must be >= 1");
  std::vector<EigenMode> out;
  out.reserve(2 * N);
  for (int k = 1; k <= 2; ++k)
    for (std::size_t j = 1; j <= N; ++j) out.push_back(make_mode(dc, k, j));
  std::sort(out.begin(), out.end(), [](const EigenMode& a, const EigenMode& b) {
    if (a.frequency != b.frequency) return a.frequency < b.frequency;
    if (a.branch != b.branch) return a.branch < b.branch;
    return a.index < b.index;
  });
  return out;
}

static void check_x(const DerivedConstants& dc, double x) {
  if (!(x >= 0.0 && x <= dc.L))
    throw std::out_of_range("x outside [0, L]");
}

std::array<double, 2> eigenfunction_eval(const DerivedConstants& dc,
                                         const EigenMode& mode, double x) {
  check_x(dc, x);
  const double s = std::sin(mode.sigma * x);
  return {s, mode.amplitude[1] * s};
}

std::array<cplx, 4> generator_eigenfunction_eval(const DerivedConstants& dc,
                                                 const EigenMode& mode,
                                                 double x) {
  check_x(dc, x);
  const double s = std::sin(mode.sigma * x);
  const double b = mode.amplitude[1];
  const cplx inv = 1.0 / mode.eigenvalue;
  return {inv * s, b * inv * s, cplx(s), cplx(b * s)};
}

double chain_threshold(const DerivedConstants& dc) {
  return std::numbers::pi / (2.0 * dc.L) *
         std::min(1.0 / dc.zeta1, 1.0 / dc.zeta2);
}

double density_Dplus(const DerivedConstants& dc) {
  return dc.L * (dc.zeta1 + dc.zeta2) / std::numbers::pi;
}

std::size_t counting_function(const DerivedConstants& dc, double r,
                              double smax) {
  std::vector<double> pts;
  for (int k = 1; k <= 2; ++k) {
    for (std::size_t j = 1;; ++j) {
      const double s = sigma_j(j, dc.L) / dc.zeta(k);
      if (s > smax + r) break;
      pts.push_back(s);
      pts.push_back(-s);
    }
  }
  std::sort(pts.begin(), pts.end());
  std::size_t best = 0;
  std::size_t hi = 0;
  for (std::size_t lo = 0; lo < pts.size(); ++lo) {
    if (pts[lo] > smax) break;
    if (hi < lo) hi = lo;
    while (hi < pts.size() && pts[hi] <= pts[lo] + r) ++hi;
    best = std::max(best, hi - lo);
  }
  return best;
}

bool is_collision(double a, double b) {
  return std::abs(a - b) <=
         64.0 * std::numeric_limits<double>::epsilon() *
             std::max(std::abs(a), std::abs(b));
}

static ModeId id_of(const EigenMode& m) { return {m.branch, m.index}; }

GapReport min_gap(const DerivedConstants& dc, std::size_t N, double alpha,
                  double tau_prime) {
  if (N < 2) throw std::invalid_argument("min_gap needs N >= 2");
  const auto modes = frequencies(dc, N);
  GapReport rep;
  rep.N = N;
  rep.alpha_used = alpha;
  rep.density_Dplus = density_Dplus(dc);
  rep.Tmin = 2.0 * dc.L * (dc.zeta1 + dc.zeta2);
  rep.min_gap = std::numeric_limits<double>::infinity();
  rep.min_nonzero_gap = std::numeric_limits<double>::infinity();

  // In sorted order the global minimum over all pairs is attained by a
  // neighbouring pair.
  for (std::size_t i = 0; i + 1 < modes.size(); ++i) {
    const auto& a = modes[i];
    const auto& b = modes[i + 1];
    const auto pair = std::make_pair(id_of(a), id_of(b));
    double gap = b.frequency - a.frequency;
    if (is_collision(a.frequency, b.frequency)) {
      rep.collisions.push_back(pair);
      gap = 0.0;
    } else if (gap < rep.min_nonzero_gap) {
      rep.min_nonzero_gap = gap;
      rep.argmin_nonzero_pair = pair;
    }
    if (gap < rep.min_gap) {
      rep.min_gap = gap;
      rep.argmin_pair = pair;
    }
  }
  try {
    rep.fitted_C_alpha = gap_bound_fit(dc, N, alpha, tau_prime).C;
  } catch (const std::runtime_error&) {
    rep.fitted_C_alpha = std::numeric_limits<double>::quiet_NaN();
  }
  return rep;
}

GapFit gap_bound_fit(const DerivedConstants& dc, std::size_t N, double alpha,
                     double tau_prime) {
  if (!(alpha >= 1.0)) throw std::invalid_argument("alpha must be >= 1");
  if (tau_prime <= 0.0) tau_prime = 0.5 * chain_threshold(dc);
  const auto modes = frequencies(dc, N);
  GapFit fit;
  fit.C = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < modes.size(); ++i) {
    const auto& a = modes[i];
    const auto& b = modes[i + 1];
    if (a.branch == b.branch) continue;
    const double gap = b.frequency - a.frequency;
    if (is_collision(a.frequency, b.frequency))
      throw DegenerateSpectrum("exact collision between branches: gap is 0");
    if (gap >= tau_prime) continue;
    ++fit.close_pairs;
    const double c = gap * std::pow(std::max(a.frequency, b.frequency), alpha);
    if (c < fit.C) {
      fit.C = c;
      fit.argmin_pair = {id_of(a), id_of(b)};
    }
  }
  if (fit.close_pairs == 0)
    throw EmptyChain("no cross-branch pair closer than tau'");
  return fit;
}

}  // namespace piezolab
