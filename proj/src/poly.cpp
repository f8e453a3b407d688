// Copyright 2026 The qdpt authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qdpt/poly.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "json.hpp"

namespace qdpt {

namespace {

constexpr double PI = 3.141592653589793238462643383279502884;

constexpr int kCertGrid = 10000;
constexpr int kMaxConstructionDegree = 200000;

// Chebyshev certification grid on [-1,1] plus endpoints; built once.
const std::vector<double>& cert_grid() {
  static const std::vector<double> grid = [] {
    std::vector<double> g(kCertGrid + 2);
    for (int j = 0; j < kCertGrid; ++j) {
      g[j] = std::cos(PI * (j + 0.5) / kCertGrid);
    }
    g[kCertGrid] = -1.0;
    g[kCertGrid + 1] = 1.0;
    return g;
  }();
  return grid;
}

std::vector<double> trim(std::vector<double> c) {
  double scale = 0.0;
  for (double v : c) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return {0.0};
  size_t last = 0;
  for (size_t i = 0; i < c.size(); ++i) {
    if (std::abs(c[i]) > 1e-14 * scale) last = i;
  }
  c.resize(last + 1);
  return c;
}

// Chebyshev interpolation of g at degree n via the first-kind node DCT.
// O(n^2) with a shared cosine table; fine for degrees up to ~10^5.
std::vector<double> cheb_interpolate(const std::function<double(double)>& g, int n) {
  int m = n + 1;
  std::vector<double> vals(m);
  for (int j = 0; j < m; ++j) {
    double x = std::cos(PI * (j + 0.5) / m);
    vals[j] = g(x);
  }
  // cos(pi * a * (2j+1) / (2m)) indexed by (a*(2j+1)) mod 4m.
  std::vector<double> table(4 * m);
  for (int t = 0; t < 4 * m; ++t) table[t] = std::cos(PI * t / (2.0 * m));
  std::vector<double> coeffs(m);
  for (int a = 0; a < m; ++a) {
    double acc = 0.0;
    std::uint64_t step = a;
    // index = a*(2j+1) mod 4m, advancing by 2a per j.
    std::uint64_t idx = step % (4 * m);
    std::uint64_t inc = (2 * step) % (4 * m);
    for (int j = 0; j < m; ++j) {
      acc += vals[j] * table[idx];
      idx += inc;
      if (idx >= static_cast<std::uint64_t>(4 * m)) idx -= 4 * m;
    }
    coeffs[a] = acc * 2.0 / m;
  }
  coeffs[0] /= 2.0;
  return coeffs;
}

double clenshaw(const std::vector<double>& c, double x) {
  double b1 = 0.0, b2 = 0.0;
  for (size_t k = c.size(); k-- > 1;) {
    double b0 = 2.0 * x * b1 - b2 + c[k];
    b2 = b1;
    b1 = b0;
  }
  return x * b1 - b2 + c[0];
}

void project_parity(std::vector<double>& c, Parity p) {
  if (p == Parity::kNone) return;
  int keep = (p == Parity::kEven) ? 0 : 1;
  for (size_t m = 0; m < c.size(); ++m) {
    if (static_cast<int>(m % 2) != keep) c[m] = 0.0;
  }
}

struct WindowSpec {
  bool left_active = false, right_active = false;
  double left_center = 0.0, right_center = 0.0;
  double k = 0.0;
};

double window_value(const WindowSpec& w, double x) {
  double v = 1.0;
  if (w.left_active) v *= 0.5 * (1.0 + std::erf(w.k * (x - w.left_center)));
  if (w.right_active) v *= 0.5 * (1.0 + std::erf(w.k * (w.right_center - x)));
  return v;
}

}  // namespace

ApproxPolynomial::ApproxPolynomial(std::vector<double> cheb_coeffs, Parity parity,
                                   PolyTarget target, PolyCertificate certificate)
    : cheb_(std::move(cheb_coeffs)),
      parity_(parity),
      target_(std::move(target)),
      cert_(certificate) {
  if (cheb_.empty()) cheb_ = {0.0};
  project_parity(cheb_, parity_);
  degree_ = 0;
  for (size_t m = 0; m < cheb_.size(); ++m) {
    if (cheb_[m] != 0.0) degree_ = static_cast<int>(m);
  }
}

double ApproxPolynomial::operator()(double x) const { return clenshaw(cheb_, x); }

std::vector<double> ApproxPolynomial::monomial_coefficients() const {
  // T_{m+1} = 2x T_m - T_{m-1}, accumulated in long double. Exponentially
  // ill-conditioned in the degree; callers keep degrees small.
  size_t n = cheb_.size();
  std::vector<long double> acc(n, 0.0L), tm1(n, 0.0L), tm(n, 0.0L);
  tm1[0] = 1.0L;  // T_0
  acc[0] += cheb_[0];
  if (n > 1) {
    tm[1] = 1.0L;  // T_1
    for (size_t j = 0; j < n; ++j) acc[j] += cheb_[1] * tm[j];
    for (size_t m = 2; m < n; ++m) {
      std::vector<long double> tnext(n, 0.0L);
      for (size_t j = 0; j + 1 < n; ++j) tnext[j + 1] += 2.0L * tm[j];
      for (size_t j = 0; j < n; ++j) tnext[j] -= tm1[j];
      for (size_t j = 0; j < n; ++j) acc[j] += cheb_[m] * tnext[j];
      tm1 = tm;
      tm = tnext;
    }
  }
  std::vector<double> out(n);
  for (size_t j = 0; j < n; ++j) out[j] = static_cast<double>(acc[j]);
  return out;
}

void ApproxPolynomial::rescale(double factor) {
  for (double& c : cheb_) c *= factor;
  cert_.max_abs_on_unit *= std::abs(factor);
  cert_.max_abs_outside *= std::abs(factor);
}

double eval_horner(const std::vector<double>& monomial, double x) {
  double acc = 0.0;
  for (size_t k = monomial.size(); k-- > 0;) acc = acc * x + monomial[k];
  return acc;
}

ApproxPolynomial bounded_taylor_approx(const TaylorSeries& f, double x0, double r, double nu,
                                       double B, double eps) {
  if (!(r > 0.0 && r <= 2.0)) throw InvariantError("bounded_taylor_approx: need r in (0, 2]");
  if (!(nu > 0.0 && nu <= r)) throw InvariantError("bounded_taylor_approx: need nu in (0, r]");
  if (!(B > 0.0)) throw InvariantError("bounded_taylor_approx: need B > 0");
  if (!(eps > 0.0 && eps <= 1.0 / (2.0 * B))) {
    throw InvariantError("bounded_taylor_approx: need eps in (0, 1/(2B)]");
  }

  // Work with b_l := a_l (r+nu)^l throughout; the scaled coefficients stay
  // bounded by B even when the raw a_l overflow. Truncation: series tail on
  // |x - x0| <= r + nu/2 below eps/8, with |b_l| <= B for the geometric
  // remainder at ratio q.
  double rho = r + nu;
  double q = (r + nu / 2.0) / rho;
  int l_geo =
      static_cast<int>(std::ceil(std::log(8.0 * B / (eps * (1.0 - q))) / std::log(1.0 / q)));
  l_geo = std::max(l_geo, 0);
  int l_cap = (f.max_order >= 0) ? std::min(f.max_order, l_geo) : l_geo;

  std::vector<double> b(l_cap + 1);
  double radius_sum = 0.0;  // sum |a_l| (r+nu)^l, verified against B
  for (int l = 0; l <= l_cap; ++l) {
    b[l] = f.coeff_scaled(l, rho);
    if (!std::isfinite(b[l])) {
      throw InvariantError("bounded_taylor_approx: non-finite scaled coefficient");
    }
    radius_sum += std::abs(b[l]);
  }
  if (radius_sum > B * (1.0 + 1e-9)) {
    throw InvariantError("bounded_taylor_approx: sum |a_l| (r+nu)^l exceeds B");
  }
  // Shrink the truncation as far as the actual coefficients allow.
  double inner_q = std::pow(q, l_cap);
  double tail = (f.max_order >= 0 && f.max_order <= l_cap)
                    ? 0.0
                    : B * std::pow(q, l_cap + 1) / (1.0 - q);
  int L = l_cap;
  while (L > 0 && tail + std::abs(b[L]) * inner_q <= eps / 8.0) {
    tail += std::abs(b[L]) * inner_q;
    inner_q /= q;
    --L;
  }

  WindowSpec w;
  w.left_active = (x0 - r - nu / 2.0 > -1.0);
  w.right_active = (x0 + r + nu / 2.0 < 1.0);
  w.left_center = x0 - r - nu / 4.0;
  w.right_center = x0 + r + nu / 4.0;
  double delta_e = eps / (40.0 * (B + 1.0));
  w.k = (4.0 / nu) * std::sqrt(std::log(1.0 / delta_e));

  auto f_trunc = [&b, L, x0, rho](double x) {
    double u = (x - x0) / rho;  // |u| <= q < 1 wherever this is evaluated
    double acc = 0.0;
    for (int l = L; l >= 0; --l) acc = acc * u + b[l];
    return acc;
  };
  double cut = r + nu / 2.0;
  auto g = [&](double x) {
    if (std::abs(x - x0) > cut) return 0.0;
    return f_trunc(x) * window_value(w, x);
  };

  int n = L;
  if (w.left_active || w.right_active) {
    double l0 = std::log(40.0 * (B + 1.0) / eps);
    n = L + static_cast<int>(std::ceil(5.0 * l0 / nu)) + 8;
  }
  if (n > kMaxConstructionDegree) {
    throw CertificationError("bounded_taylor_approx: required degree " + std::to_string(n) +
                             " exceeds the construction cap");
  }

  double out_lo = x0 - r - nu / 2.0, out_hi = x0 + r + nu / 2.0;
  auto certify = [&](const std::vector<double>& coeffs) {
    PolyCertificate cert;
    cert.domain_lo = x0 - r;
    cert.domain_hi = x0 + r;
    cert.grid_points = kCertGrid + 2;
    cert.has_outside_bound = true;
    for (double x : cert_grid()) {
      double px = clenshaw(coeffs, x);
      double ax = std::abs(px);
      cert.max_abs_on_unit = std::max(cert.max_abs_on_unit, ax);
      if (x >= cert.domain_lo && x <= cert.domain_hi) {
        cert.max_err_on_domain = std::max(cert.max_err_on_domain, std::abs(px - f.value(x)));
      }
      if (x < out_lo || x > out_hi) {
        cert.max_abs_outside = std::max(cert.max_abs_outside, ax);
      }
    }
    for (double x : {cert.domain_lo, cert.domain_hi}) {
      if (x >= -1.0 && x <= 1.0) {
        double px = clenshaw(coeffs, x);
        cert.max_err_on_domain = std::max(cert.max_err_on_domain, std::abs(px - f.value(x)));
        cert.max_abs_on_unit = std::max(cert.max_abs_on_unit, std::abs(px));
      }
    }
    return cert;
  };

  // One deterministic degree bump covers parameter corners where the
  // degree formula's margin runs out.
  for (int attempt = 0;; ++attempt) {
    std::vector<double> coeffs = trim(cheb_interpolate(g, n));
    PolyCertificate cert = certify(coeffs);
    if (cert.max_err_on_domain <= eps && cert.max_abs_on_unit <= eps + B &&
        cert.max_abs_outside <= eps) {
      PolyTarget target{"bounded_taylor", 0.0, 0.0, eps};
      return ApproxPolynomial(std::move(coeffs), Parity::kNone, target, cert);
    }
    if (attempt >= 1) {
      std::ostringstream msg;
      msg << "bounded_taylor_approx certification failed: err=" << cert.max_err_on_domain
          << " (<= " << eps << "), unit=" << cert.max_abs_on_unit << " (<= " << eps + B
          << "), outside=" << cert.max_abs_outside << " (<= " << eps << "), degree=" << n;
      throw CertificationError(msg.str());
    }
    n = static_cast<int>(std::ceil(1.18 * n)) + 32;
    if (n > kMaxConstructionDegree) {
      throw CertificationError("bounded_taylor_approx: retry degree exceeds the construction cap");
    }
  }
}

namespace {

// Shared certification for the lemma-style polynomials.
PolyCertificate certify_against(const std::vector<double>& coeffs,
                                const std::function<double(double)>& target, double lo, double hi,
                                bool relative) {
  PolyCertificate cert;
  cert.domain_lo = lo;
  cert.domain_hi = hi;
  cert.relative = relative;
  cert.grid_points = kCertGrid + 2;
  for (double x : cert_grid()) {
    double px = clenshaw(coeffs, x);
    cert.max_abs_on_unit = std::max(cert.max_abs_on_unit, std::abs(px));
    if (x >= lo && x <= hi) {
      double tx = target(x);
      double err = std::abs(px - tx);
      if (relative) {
        if (std::abs(tx) < 1e-13) continue;
        err /= std::abs(tx);
      }
      cert.max_err_on_domain = std::max(cert.max_err_on_domain, err);
    }
  }
  for (double x : {lo, hi}) {
    if (x < -1.0 || x > 1.0) continue;
    double px = clenshaw(coeffs, x);
    double tx = target(x);
    double err = std::abs(px - tx);
    if (relative && std::abs(tx) >= 1e-13) err /= std::abs(tx);
    if (!relative || std::abs(tx) >= 1e-13) {
      cert.max_err_on_domain = std::max(cert.max_err_on_domain, err);
    }
    cert.max_abs_on_unit = std::max(cert.max_abs_on_unit, std::abs(px));
  }
  return cert;
}

void enforce_lemma_bounds(const PolyCertificate& cert, double eta, const std::string& who) {
  if (cert.max_err_on_domain > eta || cert.max_abs_on_unit > 1.0 + 1e-9) {
    std::ostringstream msg;
    msg << who << " certification failed: err=" << cert.max_err_on_domain << " (<= " << eta
        << "), |P| on [-1,1]=" << cert.max_abs_on_unit;
    throw CertificationError(msg.str());
  }
}

}  // namespace

ApproxPolynomial build_inverse_scaled(double c, double x_lo, double eta) {
  if (!(x_lo > 0.0 && x_lo < 1.0)) throw InvariantError("build_inverse_scaled: x_lo in (0,1)");
  if (!(c > 0.0 && c <= x_lo)) throw InvariantError("build_inverse_scaled: need 0 < c <= x_lo");
  if (!(eta > 0.0 && eta <= 0.5)) throw InvariantError("build_inverse_scaled: eta in (0, 1/2]");

  double x0 = (x_lo + 1.0) / 2.0;
  double r = (1.0 - x_lo) / 2.0;
  double nu = std::min(x_lo / 2.0, r);
  double B = c / (x_lo - nu);
  double eps = eta / 2.5;
  eps = std::min(eps, 1.0 / (2.0 * B));

  TaylorSeries series;
  series.value = [c](double x) { return c / x; };
  // c/x around x0: a_l = (c/x0) (-1/x0)^l, so a_l rho^l = (c/x0) (-rho/x0)^l
  // with |rho/x0| < 1.
  series.coeff_scaled = [c, x0](int l, double rho) {
    return (c / x0) * std::pow(-rho / x0, l);
  };

  ApproxPolynomial raw = bounded_taylor_approx(series, x0, r, nu, B, eps);

  // Symmetrize P(x) + P(-x): the window keeps |P(-x)| <= eps on [x_lo, 1],
  // so the sum stays eps-close there. Doubles even Chebyshev coefficients.
  std::vector<double> coeffs = raw.cheb_coefficients();
  for (size_t mth = 0; mth < coeffs.size(); ++mth) {
    coeffs[mth] = (mth % 2 == 0) ? 2.0 * coeffs[mth] : 0.0;
  }
  // |P| may exceed 1 by up to eps; normalize.
  double maxabs = 0.0;
  for (double x : cert_grid()) maxabs = std::max(maxabs, std::abs(clenshaw(coeffs, x)));
  if (maxabs > 1.0) {
    double s = 1.0 / (maxabs + 1e-12);
    for (double& v : coeffs) v *= s;
  }
  coeffs = trim(coeffs);

  PolyCertificate cert =
      certify_against(coeffs, [c](double x) { return c / x; }, x_lo, 1.0, false);
  enforce_lemma_bounds(cert, eta, "build_inverse_scaled");
  PolyTarget target{"inverse_scaled", 1.0 / (2.0 * c), x_lo, eta};
  return ApproxPolynomial(std::move(coeffs), Parity::kEven, target, cert);
}

ApproxPolynomial build_P(double t, double eta) {
  if (!(t >= 1.0)) throw InvariantError("build_P: need t >= 1");
  if (!(eta > 0.0 && eta <= 0.5)) throw InvariantError("build_P: eta in (0, 1/2]");
  if (t == 1.0) {
    // Domain degenerates to {1}; x^2/2 hits 1/(2x) there exactly.
    ApproxPolynomial p = exact_polynomial({0.0, 0.0, 0.5}, Parity::kEven, "P");
    PolyCertificate cert = certify_against(
        p.cheb_coefficients(), [](double x) { return 1.0 / (2.0 * x); }, 1.0, 1.0, false);
    enforce_lemma_bounds(cert, eta, "build_P");
    return ApproxPolynomial(p.cheb_coefficients(), Parity::kEven, {"P", t, 0.0, eta}, cert);
  }
  ApproxPolynomial p = build_inverse_scaled(1.0 / (2.0 * t), 1.0 / t, eta);
  return ApproxPolynomial(p.cheb_coefficients(), Parity::kEven, {"P", t, 0.0, eta},
                          p.certificate());
}

ApproxPolynomial build_Q(double t, double beta, double eta) {
  if (!(t >= 1.0)) throw InvariantError("build_Q: need t >= 1");
  if (!(beta > 0.0 && beta <= 1.0)) throw InvariantError("build_Q: beta in (0, 1]");
  if (!(eta > 0.0 && eta <= 0.5)) throw InvariantError("build_Q: eta in (0, 1/2]");

  double lim = (1.0 - beta) / t;
  auto target = [t](double x) { return t * x; };

  std::vector<double> coeffs;
  if (t == 1.0) {
    coeffs = {0.0, 1.0};  // Q(x) = x, zero relative error
  } else {
    // Q = t * x * W with W a window that is 1 on [-r, r] and decays before
    // t|x| W can exceed 1.
    double r = (1.0 - beta) / t;
    double nu = beta / t;
    double eps_w = std::min({eta, (beta / 2.0) / (1.0 - beta / 2.0), 1.0 / (2.0 * t)}) / 1.1;
    TaylorSeries one;
    one.value = [](double) { return 1.0; };
    one.coeff_scaled = [](int l, double) { return l == 0 ? 1.0 : 0.0; };
    one.max_order = 0;
    ApproxPolynomial w = bounded_taylor_approx(one, 0.0, r, nu, 1.0, eps_w);
    std::vector<double> wc = w.cheb_coefficients();
    project_parity(wc, Parity::kEven);
    // Multiply by x: x T_m = (T_{m+1} + T_{|m-1|}) / 2, then scale by t.
    coeffs.assign(wc.size() + 1, 0.0);
    for (size_t m = 0; m < wc.size(); ++m) {
      double half = 0.5 * wc[m];
      coeffs[m + 1] += half;
      if (m >= 1) {
        coeffs[m - 1] += half;
      } else {
        coeffs[1] += half;  // x T_0 = T_1
      }
    }
    for (double& v : coeffs) v *= t;
    double maxabs = 0.0;
    for (double x : cert_grid()) maxabs = std::max(maxabs, std::abs(clenshaw(coeffs, x)));
    if (maxabs > 1.0) {
      double s = 1.0 / (maxabs + 1e-12);
      for (double& v : coeffs) v *= s;
    }
    coeffs = trim(coeffs);
  }
  project_parity(coeffs, Parity::kOdd);

  PolyCertificate cert = certify_against(coeffs, target, -lim, lim, true);
  enforce_lemma_bounds(cert, eta, "build_Q");
  return ApproxPolynomial(std::move(coeffs), Parity::kOdd, {"Q", t, beta, eta}, cert);
}

ApproxPolynomial build_S(double beta, double eta) {
  if (!(beta > 0.0 && beta <= 1.0)) throw InvariantError("build_S: beta in (0, 1]");
  if (!(eta > 0.0 && eta <= 0.5)) throw InvariantError("build_S: eta in (0, 1/2]");

  double lb = std::log(2.0 / beta);
  auto target = [lb](double x) { return std::log(1.0 / x) / (2.0 * lb); };

  TaylorSeries series;
  series.value = target;
  // ln(1/x)/(2 lb) around x0 = 1: a_0 = 0, a_l = (-1)^l / (2 lb l).
  series.coeff_scaled = [lb](int l, double rho) {
    if (l == 0) return 0.0;
    double sign = (l % 2 == 0) ? 1.0 : -1.0;
    return sign * std::pow(rho, l) / (2.0 * lb * l);
  };

  ApproxPolynomial s =
      bounded_taylor_approx(series, 1.0, 1.0 - beta, beta / 2.0, 0.5, eta / 2.0);

  // Symmetrize: S(x) + S(-x) doubles even coefficients, kills odd ones.
  std::vector<double> coeffs = s.cheb_coefficients();
  for (size_t m = 0; m < coeffs.size(); ++m) {
    coeffs[m] = (m % 2 == 0) ? 2.0 * coeffs[m] : 0.0;
  }
  double maxabs = 0.0;
  for (double x : cert_grid()) maxabs = std::max(maxabs, std::abs(clenshaw(coeffs, x)));
  if (maxabs > 1.0) {
    double sc = 1.0 / (maxabs + 1e-12);
    for (double& v : coeffs) v *= sc;
  }
  coeffs = trim(coeffs);

  PolyCertificate cert = certify_against(coeffs, target, beta, 1.0, false);
  enforce_lemma_bounds(cert, eta, "build_S");
  return ApproxPolynomial(std::move(coeffs), Parity::kEven, {"S", 0.0, beta, eta}, cert);
}

ApproxPolynomial exact_polynomial(const std::vector<double>& monomial, Parity parity,
                                  const std::string& name) {
  int deg = static_cast<int>(monomial.size()) - 1;
  auto eval = [&monomial](double x) { return eval_horner(monomial, x); };
  std::vector<double> coeffs = trim(cheb_interpolate(eval, std::max(deg, 0)));
  PolyCertificate cert;
  cert.grid_points = kCertGrid + 2;
  for (double x : cert_grid()) {
    cert.max_abs_on_unit = std::max(cert.max_abs_on_unit, std::abs(clenshaw(coeffs, x)));
  }
  return ApproxPolynomial(std::move(coeffs), parity, {name, 0.0, 0.0, 0.0}, cert);
}

std::string poly_to_json(const ApproxPolynomial& p) {
  nlohmann::json j;
  j["target"] = p.target().name;
  j["t"] = p.target().t;
  j["beta"] = p.target().beta;
  j["eta"] = p.target().eta;
  j["degree"] = p.degree();
  j["parity"] = p.parity() == Parity::kEven ? "even" : (p.parity() == Parity::kOdd ? "odd" : "none");
  j["chebyshev_coefficients"] = p.cheb_coefficients();
  if (p.degree() <= 64) j["monomial_coefficients"] = p.monomial_coefficients();
  const PolyCertificate& c = p.certificate();
  j["certificate"] = {
      {"domain", {c.domain_lo, c.domain_hi}},
      {"max_err_on_domain", c.max_err_on_domain},
      {"relative", c.relative},
      {"max_abs_on_unit_interval", c.max_abs_on_unit},
      {"max_abs_outside_window", c.max_abs_outside},
      {"has_outside_bound", c.has_outside_bound},
      {"grid_points", c.grid_points},
  };
  return j.dump(2);
}

}  // namespace qdpt
