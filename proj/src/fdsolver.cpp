#include "piezolab/fdsolver.hpp"

#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <numeric>

namespace piezolab {

namespace {

struct Stiff {
  double e11, e12, e22;
};

Stiff stiffness_entries(const MaterialParams& p) {
  return {p.alpha1 + p.gamma * p.gamma * p.beta, -p.gamma * p.beta, p.beta};
}

// F = -K u, node 0 rows dropped.
void force(const Stiff& E, double dx, const std::vector<double>& v,
           const std::vector<double>& p, std::vector<double>& fv,
           std::vector<double>& fp) {
  const std::size_t M = v.size();
  std::fill(fv.begin(), fv.end(), 0.0);
  std::fill(fp.begin(), fp.end(), 0.0);
  for (std::size_t i = 0; i + 1 < M; ++i) {
    const double dv = (v[i + 1] - v[i]) / dx;
    const double dp = (p[i + 1] - p[i]) / dx;
    const double qv = E.e11 * dv + E.e12 * dp;
    const double qp = E.e12 * dv + E.e22 * dp;
    fv[i] += qv;
    fv[i + 1] -= qv;
    fp[i] += qp;
    fp[i + 1] -= qp;
  }
  fv[0] = fp[0] = 0.0;
}

// (1/2) a^T K b
double strain_cross(const Stiff& E, double dx, const std::vector<double>& va,
                    const std::vector<double>& pa,
                    const std::vector<double>& vb,
                    const std::vector<double>& pb) {
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < va.size(); ++i) {
    const double av = va[i + 1] - va[i], ap = pa[i + 1] - pa[i];
    const double bv = vb[i + 1] - vb[i], bp = pb[i + 1] - pb[i];
    s += E.e11 * av * bv + E.e12 * (av * bp + ap * bv) + E.e22 * ap * bp;
  }
  return 0.5 * s / dx;
}

std::vector<double> node_mass(double density, std::size_t M, double dx) {
  std::vector<double> m(M, density * dx);
  m[0] = 0.5 * density * dx;
  m[M - 1] = 0.5 * density * dx;
  return m;
}

double kinetic(const std::vector<double>& mv, const std::vector<double>& mp,
               const std::vector<double>& wv, const std::vector<double>& wp) {
  double s = 0.0;
  for (std::size_t i = 1; i < wv.size(); ++i)
    s += mv[i] * wv[i] * wv[i] + mp[i] * wp[i] * wp[i];
  return 0.5 * s;
}

}  // namespace

double energy_grid(const GridState& g, const MaterialParams& p) {
  const Stiff E = stiffness_entries(p);
  const auto mv = node_mass(p.rho, g.M, g.dx);
  const auto mp = node_mass(p.mu, g.M, g.dx);
  double kin = 0.0;
  for (std::size_t i = 0; i < g.M; ++i)
    kin += mv[i] * g.v_dot[i] * g.v_dot[i] + mp[i] * g.p_dot[i] * g.p_dot[i];
  return 0.5 * kin + strain_cross(E, g.dx, g.v, g.p, g.v, g.p);
}

Eigen::SparseMatrix<double> assemble_stiffness(const MaterialParams& p,
                                               std::size_t cells) {
  const Stiff E = stiffness_entries(p);
  const double dx = p.L / static_cast<double>(cells);
  const double loc[2][2] = {{E.e11 / dx, E.e12 / dx}, {E.e12 / dx, E.e22 / dx}};
  const auto n = static_cast<Eigen::Index>(2 * cells);
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(16 * cells);
  for (std::size_t e = 0; e < cells; ++e) {
    const std::size_t nodes[2] = {e, e + 1};
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        if (nodes[a] == 0 || nodes[b] == 0) continue;
        const double sgn = a == b ? 1.0 : -1.0;
        for (int r = 0; r < 2; ++r)
          for (int c = 0; c < 2; ++c)
            trip.emplace_back(static_cast<Eigen::Index>(2 * (nodes[a] - 1) + r),
                              static_cast<Eigen::Index>(2 * (nodes[b] - 1) + c),
                              sgn * loc[r][c]);
      }
  }
  Eigen::SparseMatrix<double> K(n, n);
  K.setFromTriplets(trip.begin(), trip.end());
  return K;
}

Eigen::VectorXd lumped_mass(const MaterialParams& p, std::size_t cells) {
  const double dx = p.L / static_cast<double>(cells);
  Eigen::VectorXd m(static_cast<Eigen::Index>(2 * cells));
  for (std::size_t i = 1; i <= cells; ++i) {
    const double w = i == cells ? 0.5 * dx : dx;
    m[static_cast<Eigen::Index>(2 * (i - 1))] = p.rho * w;
    m[static_cast<Eigen::Index>(2 * (i - 1) + 1)] = p.mu * w;
  }
  return m;
}

std::vector<double> lowest_eigenvalues(const MaterialParams& p,
                                       std::size_t cells, std::size_t count) {
  validate(p);
  if (count == 0 || count > 2 * cells)
    throw std::invalid_argument("eigenvalue count out of range");
  const auto K = assemble_stiffness(p, cells);
  const Eigen::VectorXd m = lumped_mass(p, cells);

  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>, Eigen::Lower,
                        Eigen::NaturalOrdering<int>>
      ldlt;
  ldlt.analyzePattern(K);
  // number of eigenvalues below x (Sylvester inertia of K - x M)
  auto below = [&](double x) {
    Eigen::SparseMatrix<double> A = K;
    for (Eigen::Index i = 0; i < A.rows(); ++i) A.coeffRef(i, i) -= x * m[i];
    ldlt.factorize(A);
    const auto& D = ldlt.vectorD();
    return static_cast<std::size_t>((D.array() < 0.0).count());
  };

  std::vector<double> out;
  double hi = 1.0;
  while (below(hi) < count) hi *= 2.0;
  double lo_prev = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    double lo = lo_prev, h = hi;
    while (h - lo > 1e-14 * h) {
      const double mid = 0.5 * (lo + h);
      if (below(mid) > i)
        h = mid;
      else
        lo = mid;
    }
    out.push_back(0.5 * (lo + h));
    lo_prev = lo;
  }
  return out;
}

std::size_t cells_for_dx(double L, double dx) {
  if (!(dx > 0.0)) throw std::invalid_argument("dx must be > 0");
  const double n = std::round(L / dx);
  if (n < 2.0) throw std::invalid_argument("dx too large for the beam length");
  return static_cast<std::size_t>(n);
}

SimulationResult simulate(const MaterialParams& p, const ModalState& initial,
                          const SimulationOptions& opt) {
  if (!(opt.dx > 0.0)) throw std::invalid_argument("dx must be > 0");
  return simulate(p, sample_to_grid(initial, cells_for_dx(p.L, opt.dx)), opt);
}

SimulationResult simulate(const MaterialParams& p, const GridState& initial,
                          const SimulationOptions& opt) {
  validate(p);
  if (!(opt.T > 0.0)) throw std::invalid_argument("T must be > 0");
  if (!(opt.cfl > 0.0 && opt.cfl < 1.0))
    throw NumericalGuard("CFL number must lie in (0, 1)");
  if (!(opt.sample_dt > 0.0)) throw std::invalid_argument("sample_dt must be > 0");
  const std::size_t M = initial.M;
  if (M < 3 || initial.v.size() != M || initial.p.size() != M ||
      initial.v_dot.size() != M || initial.p_dot.size() != M)
    throw std::invalid_argument("malformed initial grid state");
  if (initial.v[0] != 0.0 || initial.p[0] != 0.0)
    throw std::invalid_argument("initial data must vanish at x = 0");
  const double dx = p.L / static_cast<double>(M - 1);

  const DerivedConstants dc = derive_constants(p);
  const Stiff E = stiffness_entries(p);
  const double kappa = opt.damped ? 1.0 / (2.0 * p.h * p.h) : 0.0;

  const auto n_samples = static_cast<std::size_t>(
      std::max(1.0, std::round(opt.T / opt.sample_dt)));
  const double sample_dt = opt.T / static_cast<double>(n_samples);
  const auto per_sample = static_cast<std::size_t>(
      std::ceil(sample_dt / (opt.cfl * dx * dc.zeta2) - 1e-9));
  const double dt = sample_dt / static_cast<double>(per_sample);
  const std::size_t total = n_samples * per_sample;

  const auto mv = node_mass(p.rho, M, dx);
  const auto mp = node_mass(p.mu, M, dx);
  const std::size_t last = M - 1;

  std::vector<double> v = initial.v, pp = initial.p;
  std::vector<double> fv(M), fp(M);
  std::vector<double> wv(M), wp(M), nv(M), np(M), uv(M), up(M);

  // half step back from the initial velocity
  force(E, dx, v, pp, fv, fp);
  for (std::size_t i = 1; i < M; ++i) {
    wv[i] = initial.v_dot[i] - 0.5 * dt * fv[i] / mv[i];
    const double damp = i == last ? kappa * initial.p_dot[i] : 0.0;
    wp[i] = initial.p_dot[i] - 0.5 * dt * (fp[i] - damp) / mp[i];
  }
  for (std::size_t i = 0; i < M; ++i) {
    uv[i] = v[i] - dt * wv[i];
    up[i] = pp[i] - dt * wp[i];
  }
  double e_half = kinetic(mv, mp, wv, wp) + strain_cross(E, dx, uv, up, v, pp);

  SimulationResult res;
  res.dt = dt;
  res.steps = total;
  res.cells = M - 1;
  auto& tr = res.trace;

  double e0 = 0.0, e_prev = 0.0, diss = 0.0, pbar_prev = 0.0;
  GridState sync;
  sync.M = M;
  sync.dx = dx;

  for (std::size_t n = 0; n <= total; ++n) {
    force(E, dx, v, pp, fv, fp);
    for (std::size_t i = 1; i < M; ++i) {
      nv[i] = wv[i] + dt * fv[i] / mv[i];
      if (i == last && kappa > 0.0) {
        const double a = mp[i] / dt;
        np[i] = ((a - 0.5 * kappa) * wp[i] + fp[i]) / (a + 0.5 * kappa);
      } else {
        np[i] = wp[i] + dt * fp[i] / mp[i];
      }
    }
    nv[0] = np[0] = 0.0;
    for (std::size_t i = 0; i < M; ++i) {
      uv[i] = v[i] + dt * nv[i];
      up[i] = pp[i] + dt * np[i];
    }
    const double e_next =
        kinetic(mv, mp, nv, np) + strain_cross(E, dx, v, pp, uv, up);
    if (e_next < -1e-12 * std::abs(e_half))
      throw NumericalGuard("staggered energy turned negative: unstable step");
    const double ebar = 0.5 * (e_half + e_next);
    const double pbar = 0.5 * (np[last] + wp[last]);
    if (n > 0) diss += kappa * dt * 0.5 * (pbar_prev * pbar_prev + pbar * pbar);

    if (n == 0) {
      e0 = ebar;
    } else {
      const double scale = std::max(e0, 1e-300);
      const double resid = std::abs(ebar - e0 + diss) / scale;
      res.max_identity_residual = std::max(res.max_identity_residual, resid);
      if (resid > opt.monitor_tol)
        throw NumericalGuard("dissipation identity violated beyond tolerance");
      if (ebar > e_prev + 1e-10 * scale)
        throw NumericalGuard("discrete energy increased between steps");
    }
    e_prev = ebar;

    if (n % per_sample == 0 || n == total) {
      sync.v = v;
      sync.p = pp;
      sync.v_dot.assign(M, 0.0);
      sync.p_dot.assign(M, 0.0);
      for (std::size_t i = 1; i < M; ++i) {
        sync.v_dot[i] = 0.5 * (nv[i] + wv[i]);
        sync.p_dot[i] = 0.5 * (np[i] + wp[i]);
      }
      sync.t = static_cast<double>(n) * dt;
      tr.times.push_back(static_cast<double>(n / per_sample) * sample_dt);
      tr.energies.push_back(ebar);
      tr.p_dot_L.push_back(pbar);
      tr.dissipated.push_back(diss);
      tr.energy_sync.push_back(energy_grid(sync, p));
    }
    if (n == total) break;

    std::swap(wv, nv);
    std::swap(wp, np);
    std::swap(v, uv);
    std::swap(pp, up);
    e_half = e_next;
    pbar_prev = pbar;
  }
  sync.t = opt.T;
  res.final_state = std::move(sync);
  return res;
}

DecayFit decay_fit(const std::vector<double>& times,
                   const std::vector<double>& energies, double t_a,
                   double t_b) {
  if (!(t_b > t_a)) throw std::invalid_argument("empty fit window");
  std::vector<double> xl, xt, y;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < t_a - 1e-12 || times[i] > t_b + 1e-12) continue;
    if (!(energies[i] > 0.0))
      throw std::invalid_argument("non-positive energy inside the fit window");
    xl.push_back(std::log(times[i] + 1.0));
    xt.push_back(times[i]);
    y.push_back(std::log(energies[i]));
  }
  if (y.size() < 3) throw std::invalid_argument("fit window holds fewer than 3 samples");
  if (times.front() > t_a + 1e-12 || times.back() < t_b - 1e-12)
    throw std::invalid_argument("trace does not cover the fit window");

  struct Line {
    double slope, icept, rms, r2;
  };
  auto fit = [&](const std::vector<double>& x) {
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      sxx += (x[i] - mx) * (x[i] - mx);
      sxy += (x[i] - mx) * (y[i] - my);
      syy += (y[i] - my) * (y[i] - my);
    }
    Line l;
    l.slope = sxy / sxx;
    l.icept = my - l.slope * mx;
    double ss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double r = y[i] - (l.icept + l.slope * x[i]);
      ss += r * r;
    }
    l.rms = std::sqrt(ss / n);
    l.r2 = syy > 0.0 ? 1.0 - ss / syy : 1.0;
    return l;
  };
  const Line lp = fit(xl);
  const Line le = fit(xt);

  DecayFit d;
  d.t_a = t_a;
  d.t_b = t_b;
  d.points = y.size();
  d.exponent = -lp.slope;
  d.log_amplitude = lp.icept;
  d.rate = -le.slope;
  d.residual_polynomial = lp.rms;
  d.residual_exponential = le.rms;
  d.semilog_r2 = le.r2;
  d.model_choice = lp.rms <= le.rms ? "polynomial" : "exponential";
  return d;
}

}  // namespace piezolab
