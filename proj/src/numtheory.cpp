#include "piezolab/numtheory.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <regex>

namespace piezolab {

namespace mp = boost::multiprecision;
using BigFloat = mp::cpp_bin_float_50;

BigInt floor_div(const BigInt& a, const BigInt& b) {
  if (b == 0) throw std::domain_error("division by zero");
  BigInt q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) q -= 1;
  return q;
}

double log10_big(const BigInt& n) {
  if (n == 0) return -std::numeric_limits<double>::infinity();
  BigInt m = mp::abs(n);
  const auto bits = static_cast<long>(mp::msb(m));
  if (bits < 900) return std::log10(m.convert_to<double>());
  const long shift = bits - 60;
  m >>= shift;
  return std::log10(m.convert_to<double>()) +
         static_cast<double>(shift) * std::log10(2.0);
}

namespace {

BigInt pow10(std::size_t k) {
  BigInt r = 1;
  BigInt base = 10;
  while (k) {
    if (k & 1) r *= base;
    base *= base;
    k >>= 1;
  }
  return r;
}

double ratio_double(const BigInt& a, const BigInt& b) {
  const double la = log10_big(a), lb = log10_big(b);
  if (std::isinf(la)) return 0.0;
  if (std::abs(la) < 4000 && std::abs(lb) < 4000)
    return (BigFloat(a) / BigFloat(b)).convert_to<double>();
  return std::copysign(std::pow(10.0, la - lb), a.sign() * b.sign());
}

bool is_square(const BigInt& n) {
  if (n < 0) return false;
  const BigInt s = mp::sqrt(n);
  return s * s == n;
}

// (P + sqrt(D)) / Q with Q | D - P^2 and D non-square
struct Surd {
  BigInt P, D, Q;
};

Surd to_surd(const RealRep& x) {
  Surd s;
  s.D = x.b * x.b * x.c;
  s.P = x.b > 0 ? x.a : BigInt(-x.a);
  s.Q = x.b > 0 ? x.d : BigInt(-x.d);
  if ((s.D - s.P * s.P) % s.Q != 0) {
    const BigInt aq = mp::abs(s.Q);
    s.P *= aq;
    s.D *= s.Q * s.Q;
    s.Q *= aq;
  }
  return s;
}

// floor((P + sqrt(D)) / Q), sqrt(D) irrational
BigInt surd_floor(const BigInt& P, const BigInt& D, const BigInt& Q) {
  const BigInt r = mp::sqrt(D);
  return Q > 0 ? floor_div(P + r, Q) : floor_div(P + r + 1, Q);
}

void push_convergent(ContinuedFraction& cf, const BigInt& a) {
  const std::size_t n = cf.convergents.size();
  BigInt p1 = 1, q1 = 0, p2 = 0, q2 = 1;
  if (n >= 1) {
    p1 = cf.convergents[n - 1].p;
    q1 = cf.convergents[n - 1].q;
  }
  if (n >= 2) {
    p2 = cf.convergents[n - 2].p;
    q2 = cf.convergents[n - 2].q;
  } else if (n == 1) {
    p2 = 1;
    q2 = 0;
  }
  cf.quotients.push_back(a);
  cf.convergents.push_back({a * p1 + p2, a * q1 + q2});
}

// Rational stand-in A/B used by the odd scan.
std::pair<BigInt, BigInt> scan_fraction(const RealRep& x) {
  switch (x.kind) {
    case RealKind::rational:
      return {x.p, x.q};
    case RealKind::quadratic: {
      const Surd s = to_surd(x);
      const BigInt B = pow10(80);
      return {surd_floor(s.P * B, s.D * B * B, s.Q), B};
    }
    case RealKind::decimal: {
      const std::size_t k = std::min<std::size_t>(x.digits, 200);
      return {floor_div(x.num, pow10(x.digits - k)), pow10(k)};
    }
  }
  return {0, 1};
}

// decimal digits with optional sign; leading zeros never mean octal
BigInt big_from(std::string s) {
  bool neg = false;
  if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
    neg = s[0] == '-';
    s.erase(0, 1);
  }
  s.erase(0, std::min(s.find_first_not_of('0'), s.size()));
  const BigInt v(s.empty() ? std::string("0") : s);
  return neg ? BigInt(-v) : v;
}

double log10_sum(double a, double b) {
  const double m = std::max(a, b);
  return m + std::log10(std::pow(10.0, a - m) + std::pow(10.0, b - m));
}

}  // namespace

RealRep RealRep::rational(BigInt p, BigInt q) {
  if (q == 0) throw std::invalid_argument("rational with zero denominator");
  if (q < 0) {
    p = -p;
    q = -q;
  }
  const BigInt g = mp::gcd(mp::abs(p), q);
  RealRep r;
  r.kind = RealKind::rational;
  r.p = p / g;
  r.q = q / g;
  r.value = ratio_double(r.p, r.q);
  return r;
}

RealRep RealRep::quadratic(BigInt a, BigInt b, BigInt c, BigInt d) {
  if (d == 0) throw std::invalid_argument("quadratic with zero denominator");
  if (b == 0) throw std::invalid_argument("quadratic needs b != 0");
  if (c <= 0 || is_square(c))
    throw std::invalid_argument("quadratic needs a positive non-square radicand");
  RealRep r;
  r.kind = RealKind::quadratic;
  r.a = a;
  r.b = b;
  r.c = c;
  r.d = d;
  const Surd s = to_surd(r);
  const BigInt B = pow10(30);
  r.value = ratio_double(surd_floor(s.P * B, s.D * B * B, s.Q), B);
  return r;
}

RealRep RealRep::decimal(const std::string& text, std::size_t precision) {
  static const std::regex re(R"(^\s*([+-]?)(\d*)\.(\d+)\s*$)");
  std::smatch m;
  if (!std::regex_match(text, m, re))
    throw std::invalid_argument("not a decimal string: " + text);
  std::string frac = m[3].str();
  if (frac.size() > precision) frac.resize(precision);
  const BigInt n = big_from(m[2].str() + frac);
  RealRep r;
  r.kind = RealKind::decimal;
  r.digits = frac.size();
  // truncated digits: the true value lies one unit further from zero at most
  r.num = m[1].str() == "-" ? BigInt(-n - 1) : n;
  r.value = ratio_double(r.num, pow10(r.digits));
  return r;
}

std::string RealRep::to_string() const {
  switch (kind) {
    case RealKind::rational:
      return p.str() + "/" + q.str();
    case RealKind::quadratic:
      return "(" + a.str() + (b < 0 ? "-" : "+") + BigInt(mp::abs(b)).str() +
             "*sqrt(" + c.str() + "))/" + d.str();
    case RealKind::decimal: {
      const bool neg = num < 0;
      const BigInt mag = neg ? BigInt(-num - 1) : num;
      std::string s = mag.str();
      if (s.size() <= digits) s = std::string(digits - s.size() + 1, '0') + s;
      s.insert(s.size() - digits, ".");
      return (neg ? "-" : "") + s;
    }
  }
  return {};
}

RealRep parse_real(const std::string& text, std::size_t precision) {
  static const std::regex rat(R"(^\s*([+-]?\d+)\s*(?:/\s*([+-]?\d+))?\s*$)");
  static const std::regex quad(
      R"(^\s*\(?\s*(?:([+-]?\d+)\s*)?([+-]?)\s*(\d*)\s*\*?\s*(?:√|sqrt)\s*\(?\s*(\d+)\s*\)?\s*\)?\s*(?:/\s*([+-]?\d+))?\s*$)");
  std::smatch m;
  if (std::regex_match(text, m, rat))
    return RealRep::rational(big_from(m[1].str()),
                             m[2].matched ? big_from(m[2].str()) : BigInt(1));
  if (std::regex_match(text, m, quad)) {
    const BigInt d = m[5].matched ? big_from(m[5].str()) : BigInt(1);
    const BigInt c = big_from(m[4].str());
    if (m[1].matched && m[2].str().empty()) {
      // "-3√7": the leading integer is the surd coefficient
      if (!m[3].str().empty())
        throw std::invalid_argument("missing sign between integer and surd: " + text);
      return RealRep::quadratic(0, big_from(m[1].str()), c, d);
    }
    BigInt b = m[3].str().empty() ? BigInt(1) : big_from(m[3].str());
    if (m[2].str() == "-") b = -b;
    return RealRep::quadratic(m[1].matched ? big_from(m[1].str()) : BigInt(0), b, c, d);
  }
  return RealRep::decimal(text, precision);
}

ContinuedFraction continued_fraction(const RealRep& x, std::size_t depth) {
  ContinuedFraction cf;
  if (depth == 0) return cf;
  switch (x.kind) {
    case RealKind::rational: {
      BigInt p = x.p, q = x.q;
      while (cf.quotients.size() < depth) {
        const BigInt a = floor_div(p, q);
        push_convergent(cf, a);
        const BigInt r = p - a * q;
        if (r == 0) {
          cf.terminated = true;
          break;
        }
        p = q;
        q = r;
      }
      break;
    }
    case RealKind::quadratic: {
      Surd s = to_surd(x);
      std::map<std::pair<BigInt, BigInt>, std::size_t> seen;
      while (cf.quotients.size() < depth) {
        const std::size_t i = cf.quotients.size();
        auto [it, fresh] = seen.emplace(std::make_pair(s.P, s.Q), i);
        if (!fresh && !cf.period) {
          cf.preperiod = it->second;
          cf.period = i - it->second;
        }
        const BigInt a = surd_floor(s.P, s.D, s.Q);
        push_convergent(cf, a);
        s.P = a * s.Q - s.P;
        s.Q = (s.D - s.P * s.P) / s.Q;
      }
      break;
    }
    case RealKind::decimal: {
      const BigInt B = pow10(x.digits);
      BigInt nl = x.num, dl = B, nh = x.num + 1, dh = B;
      const BigInt margin = pow10(10);
      while (cf.quotients.size() < depth) {
        const BigInt al = floor_div(nl, dl), ah = floor_div(nh, dh);
        if (al != ah) {
          cf.precision_exhausted = true;
          break;
        }
        ContinuedFraction trial = cf;
        push_convergent(trial, al);
        const auto& c = trial.convergents.back();
        const BigInt el = mp::abs(x.num * c.q - c.p * B);
        const BigInt eh = mp::abs((x.num + 1) * c.q - c.p * B);
        if (el < margin * c.q || eh < margin * c.q) {
          cf.precision_exhausted = true;
          break;
        }
        cf = std::move(trial);
        const BigInt rl = nl - al * dl, rh = nh - ah * dh;
        nl = dl;
        dl = rl;
        nh = dh;
        dh = rh;
      }
      break;
    }
  }
  return cf;
}

double log10_abs_error(const RealRep& x, const BigInt& p, const BigInt& q) {
  if (q <= 0) throw std::invalid_argument("denominator must be positive");
  switch (x.kind) {
    case RealKind::rational:
      return log10_big(x.p * q - p * x.q) - log10_big(x.q) - log10_big(q);
    case RealKind::decimal: {
      const BigInt B = pow10(x.digits);
      return log10_big(x.num * q - p * B) - log10_big(B) - log10_big(q);
    }
    case RealKind::quadratic: {
      // x - p/q = (u + q sqrt D) / (Q q), u = qP - pQ
      const Surd s = to_surd(x);
      const BigInt u = q * s.P - p * s.Q;
      const double lqd = log10_big(q) + 0.5 * log10_big(s.D);
      double lnum;
      if (u >= 0) {
        lnum = u == 0 ? lqd : log10_sum(log10_big(u), lqd);
      } else {
        // |u + q sqrt D| = |u^2 - q^2 D| / (|u| + q sqrt D)
        lnum = log10_big(u * u - q * q * s.D) - log10_sum(log10_big(u), lqd);
      }
      return lnum - log10_big(s.Q) - log10_big(q);
    }
  }
  return 0.0;
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::rational: return "rational";
    case Verdict::badly_approximable: return "badly_approximable";
    case Verdict::generic: return "generic";
    case Verdict::liouville_like: return "liouville_like";
    case Verdict::undetermined: return "undetermined";
  }
  return "undetermined";
}

OddScan best_odd_approximations(const RealRep& x, std::uint64_t Qmax,
                                double stop_below) {
  if (Qmax < 3) throw std::invalid_argument("Qmax must be >= 3");
  const auto [A, B] = scan_fraction(x);
  OddScan out;
  BigInt best_dist = -1;  // record |qA - pB|
  BigInt best_qd = -1;    // minimal q |qA - pB|
  BigInt t, p0, rem, dist, qd;
  for (std::uint64_t q = 1; q <= Qmax; q += 2) {
    t = A * q;
    p0 = floor_div(t, B);
    rem = t - p0 * B;
    BigInt p = p0;
    if (mp::bit_test(mp::abs(p0), 0)) {
      dist = rem;
    } else {
      p = p0 + 1;
      dist = B - rem;
    }
    if (mp::gcd(mp::abs(p), BigInt(q)) != 1) continue;
    ++out.scanned;
    const bool record = best_dist < 0 || dist < best_dist;
    qd = dist * q;
    const bool better = best_qd < 0 || qd < best_qd;
    if (!record && !better) continue;
    OddApproximation ap;
    ap.p = p;
    ap.q = q;
    ap.error = ratio_double(dist, B * q);
    ap.quality = ratio_double(qd, B);
    if (record) {
      best_dist = dist;
      out.records.push_back(ap);
      out.witness_C = std::max(out.witness_C, ap.quality);
    }
    if (better) {
      best_qd = qd;
      out.best = ap;
      if (stop_below > 0.0 && ap.quality <= stop_below) {
        out.early_exit = true;
        break;
      }
    }
  }
  return out;
}

DiophantineReport classify(const RealRep& x, std::size_t depth,
                           std::uint64_t Qmax) {
  DiophantineReport r;
  r.x = x;
  r.cf = continued_fraction(x, depth);
  r.depth_reached = r.cf.quotients.size();
  if (x.kind == RealKind::decimal && r.depth_reached < 10)
    throw PrecisionExhausted("only " + std::to_string(r.depth_reached) +
                             " partial quotients certified at this precision");

  r.exponent_estimate = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i < r.cf.convergents.size(); ++i) {
    const auto& c = r.cf.convergents[i];
    const double le = log10_abs_error(x, c.p, c.q);
    const double lq = log10_big(c.q);
    r.log10_quality.push_back(le + 2.0 * lq);
    r.quality.push_back(std::pow(10.0, le + 2.0 * lq));
    if (i > 0 && r.cf.quotients[i] > r.max_quotient) r.max_quotient = r.cf.quotients[i];
    if (c.q >= 10 && std::isfinite(le)) {
      const double e = -le / lq;
      if (!(e <= r.exponent_estimate)) r.exponent_estimate = e;
    }
  }

  switch (x.kind) {
    case RealKind::rational:
      r.verdict = Verdict::rational;
      break;
    case RealKind::quadratic:
      r.verdict = depth >= 10 ? Verdict::badly_approximable : Verdict::undetermined;
      break;
    case RealKind::decimal:
      r.heuristic = true;
      if (depth < 10 || std::isnan(r.exponent_estimate))
        r.verdict = Verdict::undetermined;
      else if (r.exponent_estimate >= 3.5)
        r.verdict = Verdict::liouville_like;
      else if (r.exponent_estimate < 2.5 && r.max_quotient <= 50)
        r.verdict = Verdict::badly_approximable;
      else if (r.exponent_estimate < 2.5)
        r.verdict = Verdict::generic;
      else
        r.verdict = Verdict::undetermined;
      break;
  }
  if (Qmax >= 3) r.odd = best_odd_approximations(x, Qmax);
  return r;
}

RealRep liouville_value(unsigned kmax, unsigned base) {
  if (kmax == 0) throw std::invalid_argument("kmax must be >= 1");
  if (kmax > 8) throw std::invalid_argument("kmax too large (max 8)");
  if (base != 2 && base != 3 && base != 5 && base != 10)
    throw std::invalid_argument("base must be 2, 3, 5 or 10");
  std::size_t K = 1;
  for (unsigned n = 2; n <= kmax; ++n) K *= n;
  if (base == 3) {
    // sum 3^{K-n!} / 3^K does not terminate in decimal; keep 2K + 20 digits
    BigInt num = 0;
    std::size_t f = 1;
    for (unsigned n = 1; n <= kmax; ++n) {
      f *= n;
      num += mp::pow(BigInt(3), static_cast<unsigned>(K - f));
    }
    const std::size_t D = 2 * K + 20;
    std::string s = BigInt(num * pow10(D) / mp::pow(BigInt(3), static_cast<unsigned>(K))).str();
    s = std::string(D - s.size(), '0') + s;
    return RealRep::decimal("0." + s, D);
  }
  BigInt num = 0;
  std::size_t f = 1;
  for (unsigned n = 1; n <= kmax; ++n) {
    f *= n;
    // base^{-f} = (10/base)^f / 10^f
    num += mp::pow(BigInt(10 / base), static_cast<unsigned>(f)) * pow10(K - f);
  }
  std::string s = num.str();
  s = std::string(K - s.size(), '0') + s;
  return RealRep::decimal("0." + s, K);
}

}  // namespace piezolab
