/*
 * Copyright 2026 fspass developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "fsp/verify.hpp"

#include "fsp/conic.hpp"
#include "fsp/errors.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <sstream>

namespace fsp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::complex<double> boundary_point(Domain domain, double x) {
  if (domain == Domain::CT) return {0.0, x};
  return std::polar(1.0, x);
}

double boundary_value(const RationalTransfer& g, IndexMode mode, double x) {
  std::complex<double> v = g.eval(boundary_point(g.domain, x));
  if (mode == IndexMode::OFP) {
    double mag2 = std::norm(v);
    if (mag2 < 1e-300) return kInf;
    return v.real() / mag2;
  }
  return v.real();
}

/// Golden-section minimization on [a, b] assuming local unimodality.
double golden_min(const RationalTransfer& g, IndexMode mode, double a, double b, double width) {
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - gr * (b - a);
  double d = a + gr * (b - a);
  double fc = boundary_value(g, mode, c);
  double fd = boundary_value(g, mode, d);
  while (b - a > width) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = boundary_value(g, mode, c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = boundary_value(g, mode, d);
    }
  }
  return std::min(fc, fd);
}

}  // namespace

bool transfer_stable(const RationalTransfer& g, double margin) {
  auto poles = poly_roots(g.den.univariate_coeffs_d());
  return roots_stable(poles, g.domain, margin);
}

bool transfer_minimum_phase(const RationalTransfer& g, double margin) {
  auto zeros = poly_roots(g.num.univariate_coeffs_d());
  return roots_stable(zeros, g.domain, margin);
}

double freq_index(const RationalTransfer& g, IndexMode mode, const SweepOptions& opts) {
  if (!transfer_stable(g)) throw Error(ErrorCode::UnstableInput, "sweep requires a stable system");
  if (mode == IndexMode::OFP && !transfer_minimum_phase(g)) {
    throw Error(ErrorCode::NonMinimumPhase, "OFP index requires a minimum-phase system");
  }

  std::vector<double> xs;
  if (g.domain == Domain::CT) {
    double la = std::log(opts.wmin);
    double lb = std::log(opts.wmax);
    for (int i = 0; i < opts.grid; ++i) {
      xs.push_back(std::exp(la + (lb - la) * i / (opts.grid - 1)));
    }
    xs.push_back(0.0);
  } else {
    const double pi = 3.14159265358979323846;
    for (int i = 0; i < opts.grid; ++i) xs.push_back(pi * i / (opts.grid - 1));
  }
  std::sort(xs.begin(), xs.end());

  double best = kInf;
  std::size_t best_i = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double v = boundary_value(g, mode, xs[i]);
    if (v < best) {
      best = v;
      best_i = i;
    }
  }
  double a = xs[best_i > 0 ? best_i - 1 : 0];
  double b = xs[std::min(best_i + 1, xs.size() - 1)];
  if (b > a) best = std::min(best, golden_min(g, mode, a, b, opts.refine_width));

  if (g.domain == Domain::CT) {
    // omega -> infinity limit.
    int rd = g.relative_degree();
    auto lead = [](const Poly& p) {
      auto c = p.univariate_coeffs_d();
      return c.back();
    };
    if (rd == 0) {
      double lim = lead(g.num) / lead(g.den);
      if (mode == IndexMode::OFP) lim = 1.0 / lim;
      best = std::min(best, lim);
    } else if (mode == IndexMode::IFP) {
      best = std::min(best, 0.0);
    }
  }
  return best;
}

std::complex<double> StateSpace::eval(std::complex<double> x) const {
  int n = order();
  if (n == 0) return D;
  Eigen::MatrixXcd M = x * Eigen::MatrixXcd::Identity(n, n) - A.cast<std::complex<double>>();
  Eigen::VectorXcd v = M.partialPivLu().solve(B.cast<std::complex<double>>());
  return (C.cast<std::complex<double>>() * v)(0) + D;
}

StateSpace tf_to_ss(const RationalTransfer& g) {
  if (g.relative_degree() < 0) {
    throw Error(ErrorCode::ImproperTransfer, "realization requires a proper transfer function");
  }
  auto den = g.den.univariate_coeffs_d();  // ascending
  auto num = g.num.univariate_coeffs_d();
  const int n = static_cast<int>(den.size()) - 1;
  double lead = den[static_cast<std::size_t>(n)];

  StateSpace ss;
  ss.domain = g.domain;
  ss.D = static_cast<int>(num.size()) - 1 == n ? num[static_cast<std::size_t>(n)] / lead : 0.0;
  ss.A = Eigen::MatrixXd::Zero(n, n);
  ss.B = Eigen::VectorXd::Zero(n);
  ss.C = Eigen::RowVectorXd::Zero(n);
  if (n == 0) return ss;

  // Monic denominator x^n - a_1 x^{n-1} - ... - a_n.
  for (int i = 1; i <= n; ++i) ss.A(0, i - 1) = -den[static_cast<std::size_t>(n - i)] / lead;
  for (int i = 1; i < n; ++i) ss.A(i, i - 1) = 1.0;
  ss.B(0) = 1.0;
  // Remainder num/lead - D * (monic den): degree <= n-1, descending into C.
  for (int i = 1; i <= n; ++i) {
    double r = 0;
    std::size_t k = static_cast<std::size_t>(n - i);  // power of the entry
    if (k < num.size()) r += num[k] / lead;
    r -= ss.D * den[k] / lead;
    ss.C(i - 1) = r;
  }
  return ss;
}

RationalTransfer ss_to_tf(const StateSpace& ss) {
  const int n = ss.order();
  RationalTransfer g;
  g.domain = ss.domain;
  const char* v = g.var();
  if (n == 0) {
    g.num = Poly::constant(rational_of(ss.D));
    g.den = Poly::constant(1);
    return g;
  }
  // Faddeev-LeVerrier: char poly x^n + c_1 x^{n-1} + ... + c_n and
  // adj(xI - A) = sum_k M_k x^{n-k}.
  std::vector<double> c(static_cast<std::size_t>(n) + 1, 0.0);
  c[0] = 1.0;
  Eigen::MatrixXd M = Eigen::MatrixXd::Identity(n, n);
  std::vector<double> numer(static_cast<std::size_t>(n), 0.0);  // C M_k B, k = 1..n
  for (int k = 1; k <= n; ++k) {
    numer[static_cast<std::size_t>(k - 1)] = (ss.C * M * ss.B)(0);
    Eigen::MatrixXd AM = ss.A * M;
    double ck = -AM.trace() / k;
    c[static_cast<std::size_t>(k)] = ck;
    M = AM + ck * Eigen::MatrixXd::Identity(n, n);
  }
  std::vector<Rational> den_asc(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) {
    den_asc[static_cast<std::size_t>(n - k)] = rational_of(c[static_cast<std::size_t>(k)]);
  }
  std::vector<Rational> num_asc(static_cast<std::size_t>(n) + 1);
  for (int k = 1; k <= n; ++k) {
    num_asc[static_cast<std::size_t>(n - k)] = rational_of(numer[static_cast<std::size_t>(k - 1)]);
  }
  for (int k = 0; k <= n; ++k) {
    num_asc[static_cast<std::size_t>(k)] += rational_of(ss.D) * den_asc[static_cast<std::size_t>(k)];
  }
  g.num = Poly::from_coeffs(v, num_asc);
  g.den = Poly::from_coeffs(v, den_asc);
  return g;
}

double kyp_index(const StateSpace& ss, IndexMode mode, const SolveOptions& opts) {
  const int n = ss.order();
  if (n == 0) {
    if (mode == IndexMode::IFP) return ss.D;
    if (ss.D == 0) throw Error(ErrorCode::Precondition, "static gain zero has no OFP index");
    return 1.0 / ss.D;
  }
  {
    Eigen::VectorXcd eig = Eigen::EigenSolver<Eigen::MatrixXd>(ss.A).eigenvalues();
    std::vector<std::complex<double>> poles(eig.data(), eig.data() + eig.size());
    if (!roots_stable(poles, ss.domain)) {
      throw Error(ErrorCode::UnstableInput, "dissipativity LMI requires a stable system");
    }
  }

  // Scalars: P entries (upper triangle) + the index; two PSD blocks:
  //   Y = P - delta*I  >= 0,   Z = -(LMI matrix) >= 0.
  const double delta = 1e-8;
  ConicProgram prog;
  std::vector<std::vector<int>> pid(static_cast<std::size_t>(n),
                                    std::vector<int>(static_cast<std::size_t>(n)));
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      int id = prog.add_scalar("p" + std::to_string(i) + std::to_string(j));
      pid[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = id;
      pid[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = id;
    }
  }
  int idx = prog.add_scalar("index");
  int Y = prog.add_block(n, "P_shift");
  int Z = prog.add_block(n + 1, "lmi");

  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      LinearEq eq;
      eq.entries.push_back({Y, i, j, 1.0});
      eq.scalars.push_back({pid[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)], -1.0});
      eq.rhs = i == j ? -delta : 0.0;
      prog.add_equality(std::move(eq));
    }
  }

  // LMI entry (r, c) as an affine function of (P, index): constant part
  // `con`, coefficient on p_kl collected via the quadratic forms below.
  // CT:  M = [[A'P + PA, PB - C'/2], [B'P - C/2, -D]]           (+ nu*e e')
  // DT:  M = [[A'PA - P, A'PB - C'/2], [B'PA - C/2, B'PB - D]]  (+ nu*e e')
  // IFP adds nu on the (n, n) entry; OFP adds xi * [C D]'[C D].
  auto p_coef = [&](int r, int c, int k, int l) -> double {
    // coefficient of P_kl (k <= l, symmetric) in M(r, c)
    double coef = 0;
    auto add_PQ = [&](const Eigen::MatrixXd& L, const Eigen::MatrixXd& R) {
      // contribution of L' P R to entry (r, c): sum_{a,b} L(a,r) P(a,b) R(b,c)
      coef += L(k, r) * R(l, c);
      if (k != l) coef += L(l, r) * R(k, c);
    };
    Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
    if (ss.domain == Domain::CT) {
      if (r < n && c < n) {
        add_PQ(ss.A, I);  // A'P
        add_PQ(I, ss.A);  // PA
      } else if (r < n && c == n) {
        // (P B)_r
        if (k == r) coef += ss.B(l);
        if (l == r && k != l) coef += ss.B(k);
      } else if (r == n && c == n) {
        coef += 0;
      }
    } else {
      Eigen::MatrixXd Bm = ss.B;
      if (r < n && c < n) {
        add_PQ(ss.A, ss.A);
        // minus P
        if (r == k && c == l) coef -= 1.0;
        if (k != l && r == l && c == k) coef -= 1.0;
      } else if (r < n && c == n) {
        // (A' P B)_r = sum_{a,b} A(a,r) P(a,b) B(b)
        coef += ss.A(k, r) * Bm(l);
        if (k != l) coef += ss.A(l, r) * Bm(k);
      } else {
        // B' P B
        coef += Bm(k) * Bm(l);
        if (k != l) coef += Bm(l) * Bm(k);
      }
    }
    return coef;
  };

  for (int r = 0; r <= n; ++r) {
    for (int c = r; c <= n; ++c) {
      LinearEq eq;
      eq.entries.push_back({Z, r, c, 1.0});
      double con = 0;
      if (r < n && c == n) con += -ss.C(r) / 2.0;
      if (r == n && c == n) con += -ss.D;
      for (int k = 0; k < n; ++k) {
        for (int l = k; l < n; ++l) {
          double pc = p_coef(r, c, k, l);
          if (pc != 0) {
            eq.scalars.push_back({pid[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)], pc});
          }
        }
      }
      double icoef = 0;
      if (mode == IndexMode::IFP) {
        if (r == n && c == n) icoef = 1.0;
      } else {
        double vr = r < n ? ss.C(r) : ss.D;
        double vc = c < n ? ss.C(c) : ss.D;
        icoef = vr * vc;
      }
      if (icoef != 0) eq.scalars.push_back({idx, icoef});
      eq.rhs = -con;  // Z + M(P, index) = 0
      prog.add_equality(std::move(eq));
    }
  }
  prog.add_objective_scalar(idx, 1.0);
  Solution sol = solve(prog, opts);
  if (sol.status != SolveStatus::Optimal) {
    throw Error(ErrorCode::Solver, "dissipativity LMI did not converge");
  }
  return sol.scalars[static_cast<std::size_t>(idx)];
}

GridOracleResult grid_oracle(const RationalTransfer& g0, const ControllerBasis& basis,
                             const ParamBox& box, IndexMode mode, int resolution,
                             const SweepOptions& sweep) {
  if (resolution < 2) throw Error(ErrorCode::Precondition, "grid resolution must be >= 2");
  ClosedLoop cl = compose_closed_loop(g0, basis);
  const std::size_t p = box.dim();
  std::vector<int> steps(p);
  for (std::size_t i = 0; i < p; ++i) steps[i] = box.collapsed(i) ? 1 : resolution;

  GridOracleResult best;
  best.index_hat = -kInf;
  bool found = false;
  std::vector<int> idx(p, 0);
  while (true) {
    std::vector<double> rho(p);
    for (std::size_t i = 0; i < p; ++i) {
      double lo = to_double(box.lower[i]);
      double hi = to_double(box.upper[i]);
      rho[i] = steps[i] == 1 ? lo : lo + (hi - lo) * idx[i] / (steps[i] - 1);
    }
    RationalTransfer g = closed_loop_at(cl, rho);
    if (transfer_stable(g) && (mode == IndexMode::IFP || transfer_minimum_phase(g))) {
      double v = freq_index(g, mode, sweep);
      if (v > best.index_hat + 1e-12) {  // strict improvement: lexicographic-first ties
        best.index_hat = v;
        best.rho_hat = rho;
      }
      found = true;
    }
    bool carried = true;
    for (std::size_t d = p; d > 0 && carried;) {
      --d;
      if (++idx[d] < steps[d]) {
        carried = false;
      } else {
        idx[d] = 0;
      }
    }
    if (carried) break;
  }
  if (!found) throw Error(ErrorCode::NoStablePoint, "no stable grid point in the box");
  return best;
}

PositiveRealReport positive_real_check(const RationalTransfer& g) {
  PositiveRealReport rep;
  rep.positive_real = true;
  auto poles = poly_roots(g.den.univariate_coeffs_d());

  std::vector<std::complex<double>> boundary_poles;
  for (const auto& pl : poles) {
    bool interior_bad = g.domain == Domain::CT ? pl.real() > 1e-7 : std::abs(pl) > 1.0 + 1e-7;
    bool on_boundary =
        g.domain == Domain::CT ? std::abs(pl.real()) <= 1e-7 : std::abs(std::abs(pl) - 1.0) <= 1e-7;
    if (interior_bad) {
      rep.positive_real = false;
      rep.diagnostics.push_back("pole in the instability region");
    } else if (on_boundary) {
      boundary_poles.push_back(pl);
    }
  }
  // Boundary poles must be simple with real nonnegative residue.
  for (const auto& bp : boundary_poles) {
    int multiplicity = 0;
    for (const auto& pl : poles) {
      if (std::abs(pl - bp) < 1e-6 * (1.0 + std::abs(bp))) ++multiplicity;
    }
    if (multiplicity > 1) {
      rep.positive_real = false;
      rep.diagnostics.push_back("repeated boundary pole");
      continue;
    }
    // residue = num(p) / den'(p)
    auto dcoef = g.den.univariate_coeffs_d();
    std::complex<double> dprime = 0;
    for (std::size_t k = 1; k < dcoef.size(); ++k) {
      dprime += static_cast<double>(k) * dcoef[k] * std::pow(bp, static_cast<double>(k - 1));
    }
    std::complex<double> nval = 0;
    auto ncoef = g.num.univariate_coeffs_d();
    for (std::size_t k = 0; k < ncoef.size(); ++k) {
      nval += ncoef[k] * std::pow(bp, static_cast<double>(k));
    }
    std::complex<double> residue = nval / dprime;
    if (std::abs(residue.imag()) > 1e-6 * (1.0 + std::abs(residue)) || residue.real() < -1e-9) {
      rep.positive_real = false;
      rep.diagnostics.push_back("boundary pole with invalid residue");
    }
  }

  // Boundary sweep away from the boundary poles.
  const double pi = 3.14159265358979323846;
  const int N = 2048;
  double worst = kInf;
  for (int i = 0; i <= N; ++i) {
    double x = g.domain == Domain::CT
                   ? (i == 0 ? 0.0 : std::exp(std::log(1e-6) + (std::log(1e6) - std::log(1e-6)) *
                                                                   (i - 1) / (N - 1)))
                   : pi * i / N;
    std::complex<double> pt = boundary_point(g.domain, x);
    bool near_pole = false;
    for (const auto& bp : boundary_poles) {
      if (std::abs(pt - bp) < 1e-3 * (1.0 + std::abs(bp)) ||
          std::abs(pt - std::conj(bp)) < 1e-3) {
        near_pole = true;
      }
    }
    if (near_pole) continue;
    worst = std::min(worst, g.eval(pt).real());
  }
  if (worst < -1e-9) {
    rep.positive_real = false;
    std::ostringstream os;
    os << "boundary real part dips to " << worst;
    rep.diagnostics.push_back(os.str());
  }
  if (rep.positive_real) rep.diagnostics.push_back("positive real");
  return rep;
}

}  // namespace fsp
