#include "piezolab/modal.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <thread>

namespace piezolab {

ModalState ModalState::zeros(const DerivedConstants& dc, std::size_t N) {
  ModalState s;
  s.dc = dc;
  s.N = N;
  for (int k = 0; k < 2; ++k) {
    s.c[k].assign(N, cplx{});
    s.d[k].assign(N, cplx{});
  }
  return s;
}

double ModalState::frequency(int k, std::size_t j) const {
  return sigma_j(j, dc.L) / dc.zeta(k);
}

bool ModalState::is_zero() const {
  for (int k = 0; k < 2; ++k)
    for (std::size_t j = 0; j < N; ++j)
      if (c[k][j] != cplx{} || d[k][j] != cplx{}) return false;
  return true;
}

bool ModalState::conjugate_symmetric(double tol) const {
  const double scale = std::max(norm_theta(*this, 0.0), 1e-300);
  for (int k = 0; k < 2; ++k)
    for (std::size_t j = 0; j < N; ++j)
      if (std::abs(d[k][j] - std::conj(c[k][j])) > tol * scale) return false;
  return true;
}

double norm_theta(const ModalState& s, double theta) {
  double sum = 0.0;
  for (std::size_t j = 1; j <= s.N; ++j) {
    const double w = std::pow(static_cast<double>(2 * j - 1), 2.0 * theta);
    double a = 0.0;
    for (int k = 0; k < 2; ++k)
      a += std::norm(s.c[k][j - 1]) + std::norm(s.d[k][j - 1]);
    sum += w * a;
  }
  return std::sqrt(sum);
}

ModalState evolve(const ModalState& s, double t) {
  if (t < 0.0) throw std::invalid_argument("evolve needs t >= 0");
  ModalState out = s;
  for (int k = 1; k <= 2; ++k) {
    for (std::size_t j = 1; j <= s.N; ++j) {
      const double ph = s.frequency(k, j) * t;
      const cplx e(std::cos(ph), std::sin(ph));
      out.cc(k, j) = s.cc(k, j) * e;
      out.dd(k, j) = s.dd(k, j) * std::conj(e);
    }
  }
  return out;
}

namespace {

struct Term {
  cplx a;
  double omega;
};

// Output as sum a_n e^{i omega_n t}
std::vector<Term> output_terms(const ModalState& s) {
  std::vector<Term> terms;
  for (int k = 1; k <= 2; ++k) {
    for (std::size_t j = 1; j <= s.N; ++j) {
      const double w = -s.dc.b(k) * std::sin(sigma_j(j, s.dc.L) * s.dc.L) / s.dc.h;
      const double om = s.frequency(k, j);
      if (s.cc(k, j) != cplx{}) terms.push_back({w * s.cc(k, j), om});
      if (s.dd(k, j) != cplx{}) terms.push_back({w * s.dd(k, j), -om});
    }
  }
  return terms;
}

double sinc(double x) {
  if (std::abs(x) < 1e-4) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

}  // namespace

cplx output_at(const ModalState& s, double t) {
  cplx y{};
  for (const auto& term : output_terms(s))
    y += term.a * cplx(std::cos(term.omega * t), std::sin(term.omega * t));
  return y;
}

OutputTrace output_trace(const ModalState& s, double T, std::size_t samples) {
  if (!(T > 0.0)) throw std::invalid_argument("output_trace needs T > 0");
  if (samples == 0) throw std::invalid_argument("samples must be >= 1");
  OutputTrace tr;
  const auto terms = output_terms(s);
  for (std::size_t i = 0; i < samples; ++i) {
    const double t = samples == 1 ? 0.0 : T * static_cast<double>(i) /
                                              static_cast<double>(samples - 1);
    cplx y{};
    for (const auto& term : terms)
      y += term.a * cplx(std::cos(term.omega * t), std::sin(term.omega * t));
    tr.times.push_back(t);
    tr.values.push_back(y);
  }
  return tr;
}

cplx gram_integral(double delta, double T) {
  const double x = 0.5 * delta * T;
  return T * sinc(x) * cplx(std::cos(x), std::sin(x));
}

double output_energy(const ModalState& s, double T) {
  const auto terms = output_terms(s);
  double diag = 0.0;
  double off = 0.0;
  for (std::size_t n = 0; n < terms.size(); ++n) {
    diag += std::norm(terms[n].a) * T;
    for (std::size_t m = n + 1; m < terms.size(); ++m)
      off += std::real(terms[n].a * std::conj(terms[m].a) *
                       gram_integral(terms[n].omega - terms[m].omega, T));
  }
  return std::max(0.0, diag + 2.0 * off);
}

double observability_quotient(const ModalState& s, double T, double theta) {
  if (!(T > 0.0)) throw std::invalid_argument("quotient needs T > 0");
  const double n = norm_theta(s, theta);
  if (s.is_zero() || n == 0.0)
    throw std::invalid_argument("observability quotient of the zero state");
  return output_energy(s, T) / (n * n);
}

double mode_norm_squared(const DerivedConstants& dc, int branch) {
  if (dc.synthetic())
    throw std::invalid_argument("H-norm needs physical material constants");
  const auto& p = *dc.params;
  const double b = dc.b(branch);
  return p.L * (p.rho + p.mu * b * b);
}

double h_norm_squared(const ModalState& s) {
  double sum = 0.0;
  for (int k = 1; k <= 2; ++k) {
    const double nk = mode_norm_squared(s.dc, k);
    for (std::size_t j = 1; j <= s.N; ++j)
      sum += nk * (std::norm(s.cc(k, j)) + std::norm(s.dd(k, j)));
  }
  return sum;
}

ModalState random_state(const DerivedConstants& dc, std::size_t N,
                        double theta_gen, std::uint64_t seed,
                        std::uint64_t state_id, bool real_fields) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(state_id),
                    static_cast<std::uint32_t>(state_id >> 32)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> nd(0.0, 1.0);
  ModalState s = ModalState::zeros(dc, N);
  for (int k = 1; k <= 2; ++k) {
    for (std::size_t j = 1; j <= N; ++j) {
      const double w = std::pow(static_cast<double>(2 * j - 1), -theta_gen);
      const double cr = nd(rng), ci = nd(rng);
      const double dr = nd(rng), di = nd(rng);
      s.cc(k, j) = w * cplx(cr, ci);
      s.dd(k, j) = real_fields ? std::conj(s.cc(k, j)) : w * cplx(dr, di);
    }
  }
  return s;
}

ModalState near_collision_state(const DerivedConstants& dc, std::size_t N,
                                const ModeId& a, const ModeId& b) {
  if (std::max(a.index, b.index) > N)
    throw std::invalid_argument("pair index exceeds truncation");
  ModalState s = ModalState::zeros(dc, N);
  const auto amp = [&](const ModeId& m) {
    return dc.b(m.branch) * std::sin(sigma_j(m.index, dc.L) * dc.L);
  };
  s.cc(a.branch, a.index) += 1.0 / amp(a);
  s.cc(b.branch, b.index) += -1.0 / amp(b);
  return s;
}

std::vector<double> ensemble_quotients(const DerivedConstants& dc,
                                       std::size_t N, std::size_t members,
                                       double T, double theta,
                                       double theta_gen, std::uint64_t seed,
                                       unsigned jobs) {
  std::vector<double> q(members);
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(members)));
  auto work = [&](unsigned r) {
    for (std::size_t i = r; i < members; i += jobs)
      q[i] = observability_quotient(random_state(dc, N, theta_gen, seed, i), T,
                                    theta);
  };
  std::vector<std::thread> pool;
  for (unsigned r = 1; r < jobs; ++r) pool.emplace_back(work, r);
  work(0);
  for (auto& th : pool) th.join();
  return q;
}

std::array<cplx, 4> reconstruct(const ModalState& s, double x) {
  std::array<cplx, 4> f{};
  const cplx I(0.0, 1.0);
  for (int k = 1; k <= 2; ++k) {
    const double b = s.dc.b(k);
    for (std::size_t j = 1; j <= s.N; ++j) {
      const double sn = std::sin(sigma_j(j, s.dc.L) * x);
      const double om = s.frequency(k, j);
      const cplx disp = (s.cc(k, j) - s.dd(k, j)) / (I * om) * sn;
      const cplx vel = (s.cc(k, j) + s.dd(k, j)) * sn;
      f[0] += disp;
      f[1] += b * disp;
      f[2] += vel;
      f[3] += b * vel;
    }
  }
  return f;
}

GridState sample_to_grid(const ModalState& s, std::size_t cells) {
  if (!s.conjugate_symmetric(1e-12))
    throw std::invalid_argument("grid sampling needs d = conj(c)");
  GridState g = GridState::zeros(cells, s.dc.L);
  for (std::size_t i = 1; i < g.M; ++i) {
    const auto f = reconstruct(s, g.x(i));
    g.v[i] = f[0].real();
    g.p[i] = f[1].real();
    g.v_dot[i] = f[2].real();
    g.p_dot[i] = f[3].real();
  }
  return g;
}

ModalState project_grid(const GridState& g, const DerivedConstants& dc,
                        std::size_t N) {
  if (dc.synthetic())
    throw std::invalid_argument("projection needs physical material constants");
  if (g.M < 2) throw std::invalid_argument("grid too small");
  if (g.cells() < 2 * (2 * N - 1))
    throw std::invalid_argument(
        "grid too coarse: need 8 points per shortest retained wavelength");
  const auto& p = *dc.params;
  const double a11 = dc.alpha, a12 = -p.gamma * p.beta, a22 = p.beta;

  std::vector<double> w(g.M, g.dx);
  w[0] = 0.5 * g.dx;
  w[g.M - 1] = 0.5 * g.dx;

  ModalState s = ModalState::zeros(dc, N);
  for (int k = 1; k <= 2; ++k) {
    const double b = dc.b(k);
    const double nk = mode_norm_squared(dc, k);
    // E (1, b)^T
    const double e1 = a11 + a12 * b, e2 = a12 + a22 * b;
    for (std::size_t j = 1; j <= N; ++j) {
      const double sig = sigma_j(j, dc.L);
      double kin = 0.0, strain = 0.0;
      for (std::size_t i = 0; i < g.M; ++i) {
        const double sn = std::sin(sig * g.x(i));
        kin += w[i] * sn * (p.rho * g.v_dot[i] + p.mu * b * g.p_dot[i]);
        strain += w[i] * sn * (g.v[i] * e1 + g.p[i] * e2);
      }
      // strain part integrated by parts: int u_x^T E y_x = sigma^2 int u^T E y
      strain *= sig * sig;
      const double om = sig / dc.zeta(k);
      const cplx plus = kin + cplx(0.0, 1.0 / om) * strain;
      const cplx minus = kin - cplx(0.0, 1.0 / om) * strain;
      s.cc(k, j) = plus / nk;
      s.dd(k, j) = minus / nk;
    }
  }
  return s;
}

}  // namespace piezolab
