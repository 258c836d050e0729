#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "piezolab/inequalities.hpp"
#include "piezolab/spectrum.hpp"

using namespace piezolab;

namespace {

const double pi = std::numbers::pi;

// Gram matrix of e^{i s t} by composite Simpson, normalised, Hermitian
// eigensolve.  Independent of the closed form.
double quadrature_condition(const std::vector<double>& s, double T, std::size_t n) {
  const auto m = static_cast<Eigen::Index>(s.size());
  Eigen::MatrixXcd G(m, m);
  const double h = T / static_cast<double>(n);
  for (Eigen::Index a = 0; a < m; ++a)
    for (Eigen::Index b = 0; b < m; ++b) {
      std::complex<double> sum = 0.0;
      for (std::size_t i = 0; i <= n; ++i) {
        const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        const double t = h * static_cast<double>(i);
        sum += w * std::exp(std::complex<double>(0.0, (s[a] - s[b]) * t));
      }
      G(a, b) = sum * h / 3.0;
    }
  Eigen::VectorXd d = G.diagonal().real().cwiseSqrt().cwiseInverse();
  G = d.asDiagonal() * G * d.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(G);
  return es.eigenvalues().maxCoeff() / es.eigenvalues().minCoeff();
}

}  // namespace

TEST_CASE("exponent sets") {
  const auto e = ExponentSet::make({3.0, 1.0, 1.05, 2.0}, 0.1);
  CHECK(e.s == std::vector<double>{1.0, 1.05, 2.0, 3.0});
  REQUIRE(e.chains.size() == 1);
  CHECK(e.chains[0] == std::pair<std::size_t, std::size_t>{0, 1});
  CHECK_THROWS(ExponentSet::make({1.0, 2.0, 1.0}, 0.1));
  CHECK_THROWS(ExponentSet::make({1.0, 1.05, 1.1}, 0.1));
  CHECK_THROWS(ExponentSet::make(std::vector<double>(513, 0.0), 0.1));

  const auto dc = derive_constants(golden_params());
  const auto g = exponents_from_spectrum(dc, 100);
  const double tau = chain_threshold(dc);
  CHECK(g.tau_prime == doctest::Approx(tau / 2));
  for (std::size_t n = 0; n + 2 < g.s.size(); ++n) CHECK(g.s[n + 2] - g.s[n] >= 2 * tau * (1 - 1e-12));
  CHECK_FALSE(g.chains.empty());
}

TEST_CASE("Gram conditioning examples") {
  const auto sep = ExponentSet::make({0.0, pi, 2 * pi, 3 * pi}, 0.1);
  const auto r = gram_condition(sep, 10.0, false);
  CHECK(std::isfinite(r.condition));
  CHECK(r.condition <= 10.0);
  CHECK(r.size == 4);
  CHECK(r.condition == doctest::Approx(quadrature_condition(sep.s, 10.0, 20000)).epsilon(1e-8));

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 20.0);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<double> s;
    for (int i = 0; i < 6; ++i) s.push_back(u(rng));
    const auto e = ExponentSet::make(s, 1e-9);
    CHECK(gram_condition(e, 4.0, false).condition ==
          doctest::Approx(quadrature_condition(e.s, 4.0, 20000)).epsilon(1e-6));
  }
}

TEST_CASE("close pair: raw versus divided differences") {
  auto cond = [](double delta, bool dd) {
    return gram_condition(ExponentSet::make({1.0, 1.0 + delta}, 2 * delta), 10.0, dd).condition;
  };
  CHECK(cond(1e-3, false) > 1e5);
  CHECK(cond(1e-3, true) < 1e2);
  CHECK(cond(1e-3, false) / cond(1e-2, false) >= 100.0);
  CHECK(cond(1e-3, true) / cond(1e-2, true) < 3.0);
  CHECK(cond(1e-2, true) / cond(1e-3, true) < 3.0);
  // halving: raw grows like delta^-2, divided stays in a band
  double lo = 1e300, hi = 0.0;
  for (double d = 1e-2; d > 1e-4; d /= 2) {
    const double raw = cond(d, false), half = cond(d / 2, false);
    CHECK(half / raw == doctest::Approx(4.0).epsilon(0.01));
    lo = std::min(lo, cond(d, true));
    hi = std::max(hi, cond(d, true));
  }
  CHECK(hi / lo < 1.01);
  // the flag is inert without chains
  const auto sep = ExponentSet::make({0.0, 1.0, 2.0}, 0.1);
  CHECK(gram_condition(sep, 10.0, true).condition ==
        gram_condition(sep, 10.0, false).condition);
}

TEST_CASE("Gram invariants") {
  const auto dc = derive_constants(golden_params());
  const auto e = exponents_from_spectrum(dc, 60);
  for (bool dd : {false, true}) {
    const auto r = gram_condition(e, 20.0, dd);
    CHECK(r.lambda_min >= -1e-10 * 20.0);
    CHECK(r.lambda_max >= r.lambda_min);
  }
  auto shifted = e.s;
  for (auto& x : shifted) x += 7.25;
  const auto es = ExponentSet::make(shifted, e.tau_prime);
  for (bool dd : {false, true})
    CHECK(gram_condition(es, 20.0, dd).condition ==
          doctest::Approx(gram_condition(e, 20.0, dd).condition).epsilon(1e-9));
  CHECK_THROWS(gram_condition(e, 0.0, false));
}

TEST_CASE("Ammari extremal recurrence") {
  const auto r = ammari_check(1.0, 0.0, 1.0, 10000);
  CHECK(r.E[1] == doctest::Approx((std::sqrt(5.0) - 1) / 2).epsilon(1e-13));
  CHECK(r.M == doctest::Approx(1.3025648616566592).epsilon(1e-10));
  CHECK(r.argmax == 3);
  CHECK(r.eventually_nonincreasing);
  for (std::size_t k = 0; k + 1 < r.E.size(); ++k) {
    CHECK(r.E[k + 1] < r.E[k]);
    CHECK(r.E[k + 1] > 0.0);
    CHECK(r.E[k + 1] + std::pow(r.E[k + 1], 2) == doctest::Approx(r.E[k]).epsilon(1e-13));
  }

  struct Row {
    double C, alpha, M;
  };
  for (const Row& row : {Row{1, 0.5, 1.0382320133572354}, Row{1, 1, 1.0},
                         Row{0.5, 0, 2.1145850954680254}, Row{0.5, 0.5, 1.3132248998456693},
                         Row{0.5, 1, 1.109216048035659}}) {
    const auto a = ammari_check(row.C, row.alpha, 1.0, 10000);
    CHECK(a.M == doctest::Approx(row.M).epsilon(1e-10));
    CHECK(a.eventually_nonincreasing);
    CHECK(a.tail_product <= a.M);
  }
  CHECK_THROWS(ammari_check(0.0, 0.0, 1.0, 10));
  CHECK_THROWS(ammari_check(1.0, -1.0, 1.0, 10));
  CHECK_THROWS(ammari_check(1.0, 0.0, -1.0, 10));
}

TEST_CASE("interpolation inequality") {
  // f = (1, 1), eps = 0: (10/9) / (4/10)
  const auto r = interpolation_check({1.0, 1.0}, 0.0);
  CHECK(r.lhs == doctest::Approx(10.0 / 9.0));
  CHECK(r.rhs == doctest::Approx(0.4));
  CHECK(r.slack == doctest::Approx(25.0 / 9.0).epsilon(1e-14));
  CHECK(r.holds);

  for (double eps : {0.0, 0.1, 0.25, 0.4, 0.49})
    for (std::size_t j = 1; j <= 40; ++j) {
      std::vector<double> f(j, 0.0);
      f[j - 1] = 3.7;
      CHECK(interpolation_check(f, eps).slack == doctest::Approx(1.0).epsilon(1e-12));
    }

  std::mt19937_64 rng(99);
  std::exponential_distribution<double> ex(1.0);
  std::uniform_int_distribution<int> len(1, 60);
  for (double eps : {0.0, 0.1, 0.4})
    for (int trial = 0; trial < 1000; ++trial) {
      std::vector<double> f(static_cast<std::size_t>(len(rng)));
      for (auto& v : f) v = ex(rng);
      const auto rep = interpolation_check(f, eps);
      CHECK(rep.slack >= 1 - 1e-12);
      auto g = f;
      for (auto& v : g) v *= 123.0;
      CHECK(interpolation_check(g, eps).slack == doctest::Approx(rep.slack).epsilon(1e-12));
    }

  CHECK_THROWS(interpolation_check({0.0, 0.0}, 0.1));
  CHECK_THROWS(interpolation_check({1.0}, 0.5));
  CHECK_THROWS(interpolation_check({1.0, -1.0}, 0.1));
}
