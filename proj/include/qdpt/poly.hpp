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

#ifndef QDPT_POLY_HPP_
#define QDPT_POLY_HPP_

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qdpt/common.hpp"

namespace qdpt {

enum class Parity { kNone, kEven, kOdd };

/// Grid-evaluated sup-norm certificate. `max_err_on_domain` is measured
/// against the declared target on [domain_lo, domain_hi] (relative error
/// when `relative` is set); `max_abs_on_unit` over all of [-1, 1];
/// `max_abs_outside` over [-1,1] minus the enlarged window when a window
/// applies.
struct PolyCertificate {
  double domain_lo = 0.0, domain_hi = 0.0;
  double max_err_on_domain = 0.0;
  bool relative = false;
  double max_abs_on_unit = 0.0;
  double max_abs_outside = 0.0;
  bool has_outside_bound = false;
  int grid_points = 0;
};

/// Descriptor of the function being approximated, with parameters recorded
/// for inspection via the CLI `poly` subcommand.
struct PolyTarget {
  std::string name;
  double t = 0.0, beta = 0.0, eta = 0.0;
};

/// Real polynomial stored in the Chebyshev-T basis (stable at degree a few
/// hundred and beyond); monomial coefficients are derived only for display.
/// Wrong-parity Chebyshev coefficients are exactly zero once a parity is
/// declared.
class ApproxPolynomial {
 public:
  ApproxPolynomial(std::vector<double> cheb_coeffs, Parity parity, PolyTarget target,
                   PolyCertificate certificate);

  /// Clenshaw evaluation at x.
  double operator()(double x) const;
  double eval(double x) const { return (*this)(x); }

  int degree() const { return degree_; }
  Parity parity() const { return parity_; }
  const std::vector<double>& cheb_coefficients() const { return cheb_; }
  const PolyTarget& target() const { return target_; }
  const PolyCertificate& certificate() const { return cert_; }

  /// Monomial coefficients (ascending powers); display / low-degree use
  /// only, the conversion is exponentially ill-conditioned in the degree.
  std::vector<double> monomial_coefficients() const;

  void rescale(double factor);

 private:
  std::vector<double> cheb_;
  Parity parity_;
  int degree_;
  PolyTarget target_;
  PolyCertificate cert_;
};

/// Plain Horner evaluation of monomial coefficients (ascending).
double eval_horner(const std::vector<double>& monomial, double x);

/// Analytic function given by a local Taylor series around x0 plus an exact
/// evaluator for certification. With f(x0 + x) = sum_l a_l x^l,
/// coeff_scaled(l, rho) must return a_l * rho^l — the scaled form stays
/// bounded for series whose raw coefficients overflow (e.g. 1/x expanded
/// near a small left endpoint). max_order < 0 means the series is infinite.
struct TaylorSeries {
  std::function<double(double)> value;
  std::function<double(int, double)> coeff_scaled;
  int max_order = -1;
};

/// Bounded polynomial approximation from a local Taylor series: the result
/// is eps-close to f on [x0-r, x0+r], bounded by eps+B on [-1,1] and by eps
/// outside [x0-r-nu/2, x0+r+nu/2]. All three bounds are certified on a
/// dense grid; failure raises CertificationError.
///
/// Construction: the truncated series is multiplied by an erf window of
/// transition sharpness k = (4/nu)sqrt(ln(4(B+1)/eps)) and the product is
/// Chebyshev-interpolated. The window's growth on the relevant Bernstein
/// ellipse stays e^{O(log(B/eps))}, which keeps the interpolation degree at
/// O((1/nu) log(B/eps)).
ApproxPolynomial bounded_taylor_approx(const TaylorSeries& f, double x0, double r, double nu,
                                       double B, double eps);

/// Even polynomial with |P(x) - 1/(2tx)| <= eta on [1/t, 1], |P| <= 1.
ApproxPolynomial build_P(double t, double eta);

/// Even polynomial with |P(x) - c/x| <= eta on [x_lo, 1], |P| <= 1.
/// Requires c/x_lo <= 1. build_P is the (c = 1/(2t), x_lo = 1/t) case; the
/// binned testers use the general form.
ApproxPolynomial build_inverse_scaled(double c, double x_lo, double eta);

/// Odd polynomial with |Q(x) - tx| <= eta * (tx) on [-(1-beta)/t, (1-beta)/t]
/// and |Q| <= 1 on [-1, 1].
ApproxPolynomial build_Q(double t, double beta, double eta);

/// Even polynomial with |S(x) - ln(1/x)/(2 ln(2/beta))| <= eta on [beta, 1]
/// and |S| <= 1 on [-1, 1]. Built from the local Taylor machinery at x0 = 1
/// with r = 1 - beta, nu = beta/2, B = 1/2, eps = eta/2, then symmetrized
/// S(x) + S(-x).
ApproxPolynomial build_S(double beta, double eta);

/// Exact low-degree polynomial from monomial coefficients (certificate
/// computed on the grid); used for x, x^2 and other identity-style
/// transforms.
ApproxPolynomial exact_polynomial(const std::vector<double>& monomial, Parity parity,
                                  const std::string& name);

/// JSON dump of coefficients and certificate (CLI `poly` subcommand).
std::string poly_to_json(const ApproxPolynomial& p);

}  // namespace qdpt

#endif  // QDPT_POLY_HPP_
