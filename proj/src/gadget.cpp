#include "pottsforge/gadget.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace pottsforge {

namespace {

BigInt binomial(int n, int k) {
  BigInt r;
  mpz_bin_uiui(r.get_mpz_t(), (unsigned long)n, (unsigned long)k);
  return r;
}

std::vector<BigInt> power_table(const BigInt& x, int n) {
  std::vector<BigInt> out(n + 1);
  out[0] = 1;
  for (int i = 1; i <= n; ++i) out[i] = out[i - 1] * x;
  return out;
}

bool is_fourth_power(int N) {
  BigRational r;
  return exact_root(BigRational(N), 4, r);
}

}  // namespace

PhaseConstants phase_constants(const BigRational& q, mpfr_prec_t bits) {
  if (q <= 2) throw std::invalid_argument("phase constants need q > 2, got " + to_fraction_string(q));
  const BigRational factor = 2 * (q - 1) / (q - 2);
  PhaseConstants pc{q, Real(bits), Real(bits), Real(bits), (q - 2) / (q - 1), {}, {}};

  Real qm1(q - 1, bits + 32);
  mpfr_log(pc.lambda_c.get(), qm1.get(), MPFR_RNDN);
  Real f(factor, bits + 32);
  mpfr_mul(pc.lambda_c.get(), pc.lambda_c.get(), f.get(), MPFR_RNDN);
  Real qr(q, bits + 32);
  mpfr_sub(pc.delta.get(), qr.get(), pc.lambda_c.get(), MPFR_RNDN);
  mpfr_div_ui(pc.delta.get(), pc.delta.get(), 2, MPFR_RNDN);
  mpfr_add(pc.lambda.get(), pc.lambda_c.get(), pc.delta.get(), MPFR_RNDN);

  for (mpfr_prec_t b = std::max<mpfr_prec_t>(bits, 128);; b *= 2) {
    RationalInterval ln = log_bounds(q - 1, b);
    pc.lambda_c_bounds = {ln.lo * factor, ln.hi * factor};
    pc.lambda_bounds = {(pc.lambda_c_bounds.lo + q) / 2, (pc.lambda_c_bounds.hi + q) / 2};
    if (pc.lambda_c_bounds.hi < q) break;
    if (pc.lambda_c_bounds.lo >= q) throw std::logic_error("lambda_c >= q for q = " + to_fraction_string(q));
    if (b > 1 << 16) throw std::runtime_error("could not separate lambda_c from q");
  }
  return pc;
}

BigRational cross_probability(int N, bool* exact) {
  if (N < 1) throw std::invalid_argument("clique size must be positive");
  BigRational root;
  if (exact_root(BigRational(N), 4, root)) {
    if (exact) *exact = true;
    return 1 / (root * root * root);
  }
  if (exact) *exact = false;
  BigRational tol = 1;
  tol /= pow(BigRational(2), 64);
  return simplest_within(root_power_bounds(BigRational(N), -3, 4, 256), tol);
}

BigRational GadgetSpec::gamma_clique() const { return rho / (1 - rho); }
BigRational GadgetSpec::gamma_cross() const { return cross / (1 - cross); }

WeightedGraph GadgetSpec::variant() const {
  std::vector<Edge> edges;
  std::vector<BigRational> weights;
  const BigRational gk = gamma_clique(), gc = gamma_cross();
  for (int u = 0; u < N; ++u) {
    for (int v = u + 1; v < N; ++v) {
      edges.push_back({u, v});
      weights.push_back(gk);
    }
  }
  for (int u = 0; u < N; ++u) {
    for (int i = 0; i < t; ++i) {
      edges.push_back({u, terminal(i)});
      weights.push_back(gc);
    }
  }
  return WeightedGraph(vertex_count(), std::move(edges), std::move(weights));
}

WeightedGraph GadgetSpec::full(std::vector<BigRational>* probabilities) const {
  std::vector<Edge> edges;
  std::vector<BigRational> p;
  for (int u = 0; u < N; ++u) {
    for (int v = u + 1; v < N; ++v) {
      edges.push_back({u, v});
      p.push_back(rho);
    }
  }
  for (int u = 0; u < N; ++u) {
    for (int i = 0; i < t; ++i) {
      edges.push_back({u, terminal(i)});
      p.push_back(cross);
    }
  }
  for (int i = 0; i < t; ++i) {
    for (int j = i + 1; j < t; ++j) {
      edges.push_back({terminal(i), terminal(j)});
      p.push_back(1);
    }
  }
  if (probabilities) *probabilities = p;
  // Weights are not meaningful on T^(2) (p = 1); carry 1 as a placeholder.
  return WeightedGraph::uniform(vertex_count(), std::move(edges), 1);
}

GadgetSpec build_gadget(int N, int t, const BigRational& rho, const GadgetOptions& options) {
  if (N < 1 || t < 1) throw std::invalid_argument("gadget needs N >= 1 and t >= 1");
  if (rho < 0 || rho >= 1) throw std::invalid_argument("rho must lie in [0,1), got " + to_fraction_string(rho));
  GadgetSpec spec;
  spec.N = N;
  spec.t = t;
  spec.rho = rho;
  if (options.cross_probability) {
    spec.cross = *options.cross_probability;
    spec.cross_exact = false;
    if (spec.cross < 0 || spec.cross > 1) throw std::invalid_argument("cross probability outside [0,1]");
  } else {
    spec.cross = cross_probability(N, &spec.cross_exact);
  }
  if (spec.cross == 1) {
    throw std::invalid_argument("cross probability 1 (N = 1) gives K x T edges infinite weight; "
                                "supply a cross-probability override");
  }
  return spec;
}

const BigInt DpTable::zero_ = 0;

std::size_t DpTable::index(int tp, int Np, int k, int l) const {
  return ((std::size_t(tp) * (N_ + 1) + Np) * (t_ + 1) + k) * (N_ + 1) + l;
}

DpTable::DpTable(int t, int N, BigRational gamma_prime, BigRational gamma_dblprime)
    : t_(t), N_(N), gp_(std::move(gamma_prime)), gpp_(std::move(gamma_dblprime)) {
  if (t < 0 || N < 0) throw std::invalid_argument("dp_weights needs t, N >= 0");
  if (gp_ < 0 || gpp_ < 0) throw std::invalid_argument("dp_weights needs non-negative weights");
  a_ = gp_.get_num();
  b_ = gp_.get_den();
  c_ = gpp_.get_num();
  d_ = gpp_.get_den();
  w_.assign(std::size_t(t + 1) * (N + 1) * (t + 1) * (N + 1), BigInt(0));

  const int max_b = (N / 2) * (N - N / 2);
  const auto b_pow = power_table(b_, max_b);
  const auto d_pow = power_table(d_, N * t);
  const auto ab_pow = power_table(a_ + b_, N * (N - 1) / 2);
  const auto cd_pow = power_table(c_ + d_, N * t);
  std::vector<std::vector<BigInt>> binom(std::max(t, N) + 1);
  for (int n = 0; n <= std::max(t, N); ++n) {
    for (int k = 0; k <= n; ++k) binom[n].push_back(binomial(n, k));
  }

  BigInt term;
  for (int tp = 0; tp <= t; ++tp) {
    for (int Np = 0; Np <= N; ++Np) {
      if (Np == 0) {
        cell(tp, 0, tp, 0) = 1;
        continue;
      }
      // F[i][j]: every factor of a rec1 term except w(t'-i, N'-j, k-1, l).
      std::vector<std::vector<BigInt>> F(tp + 1, std::vector<BigInt>(Np + 1));
      for (int i = 1; i <= tp; ++i) {
        for (int j = 1; j <= Np; ++j) {
          F[i][j] = binom[tp][i] * binom[Np - 1][j - 1] * b_pow[j * (Np - j)] *
                    d_pow[i * (Np - j) + j * (tp - i)] * scaled(i, j, 1, 0);
        }
      }
      std::vector<BigInt> G(Np + 1);
      for (int j = 1; j <= Np; ++j) {
        G[j] = binom[Np - 1][j - 1] * b_pow[j * (Np - j)] * d_pow[j * tp] * scaled(0, j, 0, 1);
      }
      const int k_lo = tp == 0 ? 0 : 1;
      const int k_hi = tp == 0 ? 0 : tp;
      for (int k = k_lo; k <= k_hi; ++k) {
        for (int l = 0; l <= Np; ++l) {
          if (k + l <= 1) continue;
          BigInt& out = cell(tp, Np, k, l);
          if (k >= 1) {
            for (int i = 1; i <= tp; ++i) {
              for (int j = 1; j <= Np; ++j) {
                const BigInt& rest = scaled(tp - i, Np - j, k - 1, l);
                if (rest == 0) continue;
                mpz_addmul(out.get_mpz_t(), F[i][j].get_mpz_t(), rest.get_mpz_t());
              }
            }
          }
          if (l >= 1) {
            for (int j = 1; j <= Np; ++j) {
              const BigInt& rest = scaled(tp, Np - j, k, l - 1);
              if (rest == 0) continue;
              mpz_addmul(out.get_mpz_t(), G[j].get_mpz_t(), rest.get_mpz_t());
            }
          }
        }
      }
      // Complementation for k + l = 1.
      BigInt total = ab_pow[Np * (Np - 1) / 2] * cd_pow[Np * tp];
      for (int k = 0; k <= tp; ++k) {
        for (int l = 0; l <= Np; ++l) {
          if (k + l > 1) total -= scaled(tp, Np, k, l);
        }
      }
      if (tp == 0) {
        cell(0, Np, 0, 1) = total;
      } else {
        cell(tp, Np, 1, 0) = total;
      }
    }
  }
}

const BigInt& DpTable::scaled(int tp, int Np, int k, int l) const {
  if (tp < 0 || Np < 0 || k < 0 || l < 0 || tp > t_ || Np > N_ || k > tp || l > Np) return zero_;
  return w_[index(tp, Np, k, l)];
}

BigInt DpTable::scale(int tp, int Np) const {
  return pow(b_, (unsigned long)(Np * (Np - 1) / 2)) * pow(d_, (unsigned long)(Np * tp));
}

BigRational DpTable::at(int tp, int Np, int k, int l) const {
  const BigInt& w = scaled(tp, Np, k, l);
  if (w == 0) return 0;
  BigRational r(w, scale(tp, Np));
  r.canonicalize();
  return r;
}

std::string DpTable::to_csv() const {
  std::ostringstream out;
  out << "t,N,k,l,w\n";
  for (int tp = 0; tp <= t_; ++tp) {
    for (int Np = 0; Np <= N_; ++Np) {
      for (int k = 0; k <= tp; ++k) {
        for (int l = 0; l <= Np; ++l) {
          out << tp << ',' << Np << ',' << k << ',' << l << ',' << to_fraction_string(at(tp, Np, k, l)) << '\n';
        }
      }
    }
  }
  return out.str();
}

DpTable dp_weights(int t, int N, const BigRational& gamma_prime, const BigRational& gamma_dblprime) {
  return DpTable(t, N, gamma_prime, gamma_dblprime);
}

GadgetSummary z_k(const DpTable& table, const BigRational& q_hat) {
  const int t = table.t(), N = table.N();
  GadgetSummary s;
  s.z.assign(t + 1, BigRational(0));
  const auto q_num = power_table(q_hat.get_num(), N);
  const auto q_den = power_table(q_hat.get_den(), N);
  const BigInt scale = table.scale(t, N);
  for (int k = 0; k <= t; ++k) {
    // sum_l W q^l over the common denominator den^N.
    BigInt acc = 0;
    for (int l = 0; l <= N; ++l) {
      const BigInt& w = table.scaled(t, N, k, l);
      if (w == 0) continue;
      acc += w * q_num[l] * q_den[N - l];
    }
    BigRational z(acc, scale * q_den[N]);
    z.canonicalize();
    s.z[k] = z;
    s.total += z;
  }
  if (t >= 1) {
    if (s.z[1] == 0 || s.z[t] == 0) throw std::domain_error("Z^1 or Z^t vanishes; psi undefined");
    s.psi = s.z[t] / s.z[1];
    s.zeta = s.z[1] / s.z[t];
  }
  return s;
}

GadgetPolynomial::GadgetPolynomial(int t, int N, const BigRational& gamma_dblprime, const BigRational& q)
    : t_(t), degree_(N * (N - 1) / 2) {
  const int D = degree_;
  std::vector<std::vector<BigRational>> values(t + 1, std::vector<BigRational>(D + 1));
  for (int x = 0; x <= D; ++x) {
    GadgetSummary s = z_k(dp_weights(t, N, BigRational(x), gamma_dblprime), q);
    for (int k = 0; k <= t; ++k) values[k][x] = s.z[k];
  }
  coeff_.resize(t + 1);
  integral_.resize(t + 1);
  denom_.resize(t + 1);
  for (int k = 0; k <= t; ++k) {
    // Forward differences give Newton coefficients on the nodes 0..D.
    std::vector<BigRational> diff = values[k];
    std::vector<BigRational> newton(D + 1);
    for (int order = 0; order <= D; ++order) {
      newton[order] = diff[0];
      for (int i = 0; i + order < D; ++i) diff[i] = diff[i + 1] - diff[i];
    }
    BigRational fact = 1;
    for (int order = 1; order <= D; ++order) {
      fact *= order;
      newton[order] /= fact;
    }
    // Expand sum_k newton[k] x (x-1) ... (x-k+1) into monomials.
    std::vector<BigRational> poly{newton[D]};
    for (int j = D - 1; j >= 0; --j) {
      std::vector<BigRational> next(poly.size() + 1, BigRational(0));
      for (std::size_t i = 0; i < poly.size(); ++i) {
        next[i + 1] += poly[i];
        next[i] -= poly[i] * j;
      }
      next[0] += newton[j];
      poly = std::move(next);
    }
    poly.resize(D + 1);
    coeff_[k] = poly;
    BigInt lcm = 1;
    for (const auto& c : poly) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), c.get_den_mpz_t());
    denom_[k] = lcm;
    for (const auto& c : poly) integral_[k].push_back(BigInt(c.get_num() * (lcm / c.get_den())));
  }
}

BigRational GadgetPolynomial::z(int k, const BigRational& gamma_prime) const {
  const auto& c = integral_.at(k);
  const BigInt& a = gamma_prime.get_num();
  const BigInt& b = gamma_prime.get_den();
  BigInt acc = c[degree_];
  BigInt bp = 1;
  for (int i = degree_ - 1; i >= 0; --i) {
    bp *= b;
    acc *= a;
    mpz_addmul(acc.get_mpz_t(), c[i].get_mpz_t(), bp.get_mpz_t());
  }
  BigRational r(acc, denom_[k] * pow(b, (unsigned long)degree_));
  r.canonicalize();
  return r;
}

BigRational GadgetPolynomial::psi(const BigRational& rho) const {
  BigRational gp = rho / (1 - rho);
  return z(t_, gp) / z(1, gp);
}

BigRational tuner_delta(int N, int t, const BigRational& chi) {
  const long n = long(N) + t;
  const long m = long(N) * (N - 1) / 2 + long(N) * t;
  return chi / (16 * BigRational(n + m));
}

RhoGrid::RhoGrid(int N, const BigRational& q, const BigRational& delta, int grid_bits)
    : N_(N), delta_(delta), grid_bits_(grid_bits) {
  if (N < 1) throw std::invalid_argument("grid needs N >= 1");
  if (delta <= 0 || delta > 1) throw std::invalid_argument("grid step delta must lie in (0,1]");
  BigRational resolution = 1;
  resolution /= pow(BigRational(2), grid_bits - 8);
  if (delta < resolution) throw std::invalid_argument("grid step delta below the grid rounding resolution");
  upper_ = phase_constants(q).lambda_bounds.lo / N;
  auto ok = [&](const BigRational& rho) { return rho <= upper_ && rho < 1; };
  if (!ok(at(0))) {
    size_ = 0;
    return;
  }
  double est = std::log(to_double(upper_) * double(N) * N * N) / std::log1p(to_double(delta));
  std::uint64_t mu = est > 0 ? std::uint64_t(est) : 0;
  while (mu > 0 && !ok(at(mu))) --mu;
  while (ok(at(mu + 1))) ++mu;
  size_ = mu + 1;
}

BigRational RhoGrid::at(std::uint64_t mu) const {
  BigRational base = 1;
  base /= BigRational(N_) * N_ * N_;
  if (mu == 0) return base;
  const mpfr_prec_t bits = 256;
  Real step(1 + delta_, bits);
  mpfr_log(step.get(), step.get(), MPFR_RNDN);
  mpfr_mul_ui(step.get(), step.get(), (unsigned long)mu, MPFR_RNDN);
  mpfr_exp(step.get(), step.get(), MPFR_RNDN);
  Real b(base, bits);
  mpfr_mul(step.get(), step.get(), b.get(), MPFR_RNDN);
  Real rounded(grid_bits_);
  mpfr_set(rounded.get(), step.get(), MPFR_RNDN);
  return rounded.exact();
}

int compare_with_exp(const BigRational& x, const BigRational& y) {
  if (y == 0) return x < 1 ? -1 : (x > 1 ? 1 : 0);
  for (mpfr_prec_t bits = 128; bits <= (1 << 20); bits *= 2) {
    RationalInterval e = exp_bounds(y, bits);
    if (x < e.lo) return -1;
    if (x > e.hi) return 1;
  }
  throw std::runtime_error("could not separate a rational from exp(y)");
}

TuneResult tune_rho(int N, int t, const BigRational& q, const BigRational& gamma, const BigRational& chi,
                    const TuneOptions& options) {
  if (t < 2) throw std::invalid_argument("tune_rho needs t >= 2");
  if (q <= 2) throw std::invalid_argument("tune_rho needs q > 2");
  if (gamma <= 0 || chi <= 0) throw std::invalid_argument("tune_rho needs gamma > 0 and chi > 0");
  if (BigRational(N) < options.n0) {
    throw std::invalid_argument("N = " + std::to_string(N) + " is below the configured N0 = " +
                                to_fraction_string(options.n0));
  }
  if (options.require_fourth_power && !options.gadget.cross_probability && !is_fourth_power(N)) {
    throw std::invalid_argument("N = " + std::to_string(N) + " is not a fourth power");
  }
  const GadgetSpec probe = build_gadget(N, t, 0, options.gadget);
  const BigRational gpp = probe.gamma_cross();

  TuneResult r;
  r.delta = tuner_delta(N, t, chi);
  RhoGrid grid(N, q, r.delta, options.grid_bits);
  r.grid_size = grid.size();
  if (grid.size() == 0) {
    r.report = "empty grid: N^-3 exceeds lambda/N";
    return r;
  }

  auto zeta = [&](std::uint64_t mu) {
    ++r.evaluations;
    BigRational rho = grid.at(mu);
    return z_k(dp_weights(t, N, rho / (1 - rho), gpp), q).zeta;
  };
  const BigRational half = chi / 2;
  auto above_lower = [&](const BigRational& z) { return compare_with_exp(z / gamma, -half) >= 0; };
  auto below_upper = [&](const BigRational& z) { return compare_with_exp(z / gamma, half) <= 0; };

  const std::uint64_t last = grid.size() - 1;
  r.rho_min = grid.at(0);
  r.rho_max = grid.at(last);
  r.zeta_min = zeta(0);
  r.zeta_max = last == 0 ? r.zeta_min : zeta(last);

  auto accept = [&](std::uint64_t mu, const BigRational& z) {
    r.found = true;
    r.mu = mu;
    r.rho_hat = grid.at(mu);
    r.zeta_hat = z;
  };

  if (options.search == TuneOptions::Search::Linear) {
    for (std::uint64_t mu = 0; mu <= last; ++mu) {
      BigRational z = mu == 0 ? r.zeta_min : (mu == last ? r.zeta_max : zeta(mu));
      if (above_lower(z) && below_upper(z)) {
        accept(mu, z);
        return r;
      }
    }
    r.report = "no grid point has zeta within e^(+-chi/2) gamma";
    return r;
  }

  if (!above_lower(r.zeta_max)) {
    r.report = "zeta < e^(-chi/2) gamma at every grid point (largest zeta " + to_decimal_string(r.zeta_max) + ")";
    return r;
  }
  std::uint64_t mu;
  BigRational z;
  if (above_lower(r.zeta_min)) {
    mu = 0;
    z = r.zeta_min;
  } else {
    std::uint64_t lo = 0, hi = last;  // zeta(lo) below the window, zeta(hi) not
    BigRational z_hi = r.zeta_max;
    while (hi - lo > 1) {
      std::uint64_t mid = lo + (hi - lo) / 2;
      BigRational zm = zeta(mid);
      if (above_lower(zm)) {
        hi = mid;
        z_hi = zm;
      } else {
        lo = mid;
      }
    }
    mu = hi;
    z = z_hi;
  }
  if (!below_upper(z)) {
    r.report = mu == 0 ? "zeta > e^(chi/2) gamma already at rho = N^-3"
                       : "zeta steps over the window between adjacent grid points";
    return r;
  }
  accept(mu, z);
  return r;
}

}  // namespace pottsforge
