#include "hmtr/littlewood.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "hmtr/kernels.hpp"

namespace hmtr {

double arc_rho(double p, double L) {
  require(p > 0.0, "arc_rho needs p > 0");
  return std::max(0.0, 1.0 - 7.0 / (p * L * L));
}

LiftResult lift_w(Cplx z, double p, double q) {
  require(p != 0.0, "lift needs p != 0");
  const Cplx w = (z - q) / p;
  return {w, std::max(std::abs(w), 1.0)};
}

double ell_product(const ComplexPoint& w) {
  double acc = 1.0;
  for (const auto& row : w.rows)
    for (const auto& v : row) acc *= std::max(std::abs(v), 1.0);
  for (const auto& v : w.points) acc *= std::max(std::abs(v), 1.0);
  return acc;
}

LiftResult lift_w_on_arc(Cplx z, double p, double q, double L) {
  require(L >= 4.0 / p, "arc parameter below 4/p");
  const double rho = arc_rho(p, L);
  const double r = std::abs(z);
  require(std::abs(r - rho) <= 1e-9 && std::abs(std::arg(z)) <= M_PI / L + 1e-12,
          "point is not on rho*gamma(L)");
  LiftResult lift = lift_w(z, p, q);
  require(std::abs(lift.w) <= 1.0 + 1e-12,
          "lifted point escaped the unit disk");
  return lift;
}

namespace {

// |z^{m0} f1(z)| at z = rho e^{i theta}, Horner on the reduced coefficients.
double arc_value(std::span<const Cplx> coeffs, long long m0, double rho,
                 double theta) {
  const Cplx z = std::polar(rho, theta);
  Cplx acc(0.0, 0.0);
  for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * z + coeffs[i];
  double v = std::abs(acc);
  if (m0 > 0) v *= (rho > 0.0 ? std::exp(static_cast<double>(m0) * std::log(rho))
                              : 0.0);
  return v;
}

// Golden-section maximization of fn over [a, b].
template <typename F>
double golden_max(F&& fn, double a, double b, double tol) {
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - gr * (b - a), d = a + gr * (b - a);
  double fc = fn(c), fd = fn(d);
  while (b - a > tol) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = fn(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = fn(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

BoundWitness max_modulus_univariate(std::span<const Cplx> coeffs,
                                    long long m0, double L, double rho,
                                    int density, double refine_tol) {
  require(!coeffs.empty(), "empty polynomial");
  require(coeffs.size() <= 1000001, "degree cap exceeded");
  require(L >= 1.0 && rho >= 0.0 && rho <= 1.0, "bad arc parameters");
  bool nonzero = false;
  for (const auto& c : coeffs) nonzero |= c != Cplx(0.0, 0.0);
  require(nonzero, "zero polynomial");

  const double half = M_PI / L;
  // Power-of-two interval count: doubling the density refines the grid in
  // place, so the achieved maximum is monotone in density. Index 0 probes
  // the arc center so flat moduli resolve to theta = 0.
  const std::uint64_t intervals = std::bit_ceil(std::max<std::uint64_t>(
      2, static_cast<std::uint64_t>(std::ceil(density * L))));
  const std::uint64_t points = intervals + 2;
  auto theta_of = [&](std::uint64_t i) {
    if (i == 0) return 0.0;
    return -half + 2.0 * half * static_cast<double>(i - 1) /
                       static_cast<double>(intervals);
  };
  ScanHit hit = parallel_scan_max(points, [&](std::uint64_t i) {
    return arc_value(coeffs, m0, rho, theta_of(i));
  });

  const double step = 2.0 * half / static_cast<double>(intervals);
  const double lo = std::max(-half, theta_of(hit.index) - step);
  const double hi = std::min(half, theta_of(hit.index) + step);
  const double theta_ref = golden_max(
      [&](double th) { return arc_value(coeffs, m0, rho, th); }, lo, hi,
      refine_tol * std::max(1.0, step));

  double theta = theta_of(hit.index);
  double best = arc_value(coeffs, m0, rho, theta);
  const double refined = arc_value(coeffs, m0, rho, theta_ref);
  if (refined > best) {
    best = refined;
    theta = theta_ref;
  }

  BoundWitness bw;
  bw.point = {std::polar(rho, theta)};
  bw.theta = theta;
  bw.value = best;
  return bw;
}

BoundWitness littlewood_search(std::span<const Cplx> coeffs, double p,
                               double calib_c, int density,
                               double refine_tol) {
  const long long m = static_cast<long long>(coeffs.size()) - 1;
  require(m >= 1, "littlewood search needs degree >= 1");
  const double L = std::ceil(std::cbrt(static_cast<double>(m)));
  const double rho = arc_rho(p, L);
  BoundWitness bw =
      max_modulus_univariate(coeffs, 0, L, rho, density, refine_tol);
  bw.calib = calib_c;
  bw.budget = std::exp(-calib_c * std::cbrt(static_cast<double>(m)));
  return bw;
}

void ArcSpec::validate() const {
  require(L >= 1.0, "arc parameter must be at least 1");
  require(rho >= 0.0 && rho <= 1.0, "arc radius outside [0, 1]");
  require(density >= 64, "arc density must be at least 64");
}

bool is_primitive_direction(const LatticeDirection& b, double r_cap) {
  int g = 0;
  double norm2 = 0.0;
  bool nonzero = false, canonical = false, first_seen = false;
  for (int x : b) {
    g = std::gcd(g, std::abs(x));
    norm2 += static_cast<double>(x) * x;
    if (x != 0 && !first_seen) {
      first_seen = true;
      canonical = x > 0;
    }
    nonzero |= x != 0;
  }
  return nonzero && canonical && g == 1 && norm2 <= r_cap * r_cap;
}

BoundWitness max_modulus_univariate(std::span<const Cplx> coeffs,
                                    long long m0, const ArcSpec& arc,
                                    double refine_tol) {
  arc.validate();
  return max_modulus_univariate(coeffs, m0, arc.L, arc.rho, arc.density,
                                refine_tol);
}

std::vector<LatticeDirection> primitive_vectors(double R, int d,
                                                std::uint64_t cap) {
  require(R >= 1.0, "R must be at least 1");
  require(d >= 1 && d <= 8, "dimension out of range");
  const int r = static_cast<int>(std::floor(R));
  const double r2 = R * R;
  std::vector<std::vector<int>> out;
  std::vector<int> v(d, -r);
  while (true) {
    double norm2 = 0.0;
    for (int x : v) norm2 += static_cast<double>(x) * x;
    if (norm2 > 0.0 && norm2 <= r2) {
      int first = 0;
      for (int x : v)
        if (x != 0) {
          first = x;
          break;
        }
      if (first > 0) {
        int g = 0;
        for (int x : v) g = std::gcd(g, std::abs(x));
        if (g == 1) {
          out.push_back(v);
          require(out.size() <= cap, "primitive vector cap exceeded");
        }
      }
    }
    int i = d - 1;
    for (; i >= 0; --i) {
      if (++v[i] <= r) break;
      v[i] = -r;
    }
    if (i < 0) break;
  }
  // Axis-first order: (1,0,...) precedes (0,1,...).
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

FacetResult tangent_facet(const std::vector<Index>& h1,
                          const std::vector<Index>& h2, double R,
                          int max_per_class, int max_total,
                          std::uint64_t cap) {
  require(!h1.empty() || !h2.empty(), "tangent facet of an empty support");
  const int d = static_cast<int>(h1.empty() ? h2[0].size() : h1[0].size());
  auto dirs = primitive_vectors(R, d, cap);
  std::stable_sort(dirs.begin(), dirs.end(),
                   [](const std::vector<int>& a, const std::vector<int>& b) {
                     long long na = 0, nb = 0;
                     for (int x : a) na += 1ll * x * x;
                     for (int x : b) nb += 1ll * x * x;
                     return na != nb ? na < nb : a > b;
                   });

  auto dot = [](const std::vector<int>& b, const Index& k) {
    long long s = 0;
    for (std::size_t i = 0; i < b.size(); ++i) s += 1ll * b[i] * k[i];
    return s;
  };

  for (const auto& base : dirs) {
    for (int sign = 0; sign < 2; ++sign) {
      std::vector<int> b = base;
      if (sign) for (int& x : b) x = -x;
      long long m0 = 0;
      bool have = false;
      for (const auto* cls : {&h1, &h2})
        for (const Index& k : *cls) {
          const long long s = dot(b, k);
          if (!have || s < m0) m0 = s, have = true;
        }
      FacetResult res;
      res.b = b;
      res.m0 = m0;
      for (const Index& k : h1)
        if (dot(b, k) == m0) {
          res.contacts.push_back(k);
          ++res.positive_contacts;
        }
      for (const Index& k : h2)
        if (dot(b, k) == m0) {
          res.contacts.push_back(k);
          ++res.negative_contacts;
        }
      if (res.positive_contacts <= max_per_class &&
          res.negative_contacts <= max_per_class &&
          res.positive_contacts + res.negative_contacts <= max_total)
        return res;
    }
  }
  std::ostringstream os;
  os << "tangent facet: no admissible direction within R = " << R
     << " for support of size " << h1.size() + h2.size();
  fail(os.str());
}

SubstitutedPoly substitute(const SignedHypermatrix& coeffs,
                           const LatticeDirection& b, Cplx v, int v_axis) {
  const int d = coeffs.dim();
  require(static_cast<int>(b.size()) == d, "direction rank mismatch");
  require(v_axis >= 0 && v_axis < d, "v axis out of range");
  std::map<long long, Cplx> acc;
  bool have_min = false;
  long long min_exp = 0;
  for (std::size_t f = 0; f < coeffs.size(); ++f) {
    const int c = coeffs.flat_at(f);
    if (c == 0) continue;
    const Index k = coeffs.grid().unflat(f);
    long long e = 0;
    for (int i = 0; i < d; ++i) e += 1ll * b[i] * k[i];
    acc[e] += static_cast<double>(c) * cpow_int(v, k[v_axis]);
    if (!have_min || e < min_exp) {
      min_exp = e;
      have_min = true;
    }
  }
  require(have_min, "substitute: zero polynomial");
  SubstitutedPoly out;
  out.min_exp = min_exp;
  out.c_min = acc.count(min_exp) ? acc[min_exp] : Cplx(0.0, 0.0);
  for (const auto& [e, c] : acc) out.terms.emplace_back(e, c);
  return out;
}

Cplx eval_signed_poly(const SignedHypermatrix& coeffs,
                      std::span<const Cplx> z) {
  const int d = coeffs.dim();
  require(static_cast<int>(z.size()) == d, "variable count mismatch");
  Cplx sum(0.0, 0.0);
  for (std::size_t f = 0; f < coeffs.size(); ++f) {
    const int c = coeffs.flat_at(f);
    if (c == 0) continue;
    const Index k = coeffs.grid().unflat(f);
    Cplx mono(1.0, 0.0);
    for (int i = 0; i < d; ++i) mono *= cpow_int(z[i], k[i]);
    sum += static_cast<double>(c) * mono;
  }
  return sum;
}

namespace {

BoundWitness substitution_pipeline(const SignedHypermatrix& coeffs, double mu,
                                   double L, double delta, double calib_c,
                                   const PipelineConfig& cfg,
                                   bool corollary_mode) {
  const int d = coeffs.dim(), n = coeffs.side();
  require(!coeffs.is_zero(), "pipeline: zero polynomial");
  require(L >= 1.0, "pipeline: L must be at least 1");

  auto [h1, h2] = support_split(coeffs);
  const double n_pow = std::pow(static_cast<double>(n), 1.0 - mu);
  const double R = std::ceil(static_cast<double>(d) * n_pow);
  const FacetResult facet =
      tangent_facet(h1, h2, R, 1, corollary_mode ? 1 : 2, cfg.lattice_cap);

  int v_axis = 0;
  Cplx v(1.0, 0.0);
  if (!corollary_mode) {
    if (facet.contacts.size() == 2) {
      const Index& k1 = facet.contacts[0];
      const Index& k2 = facet.contacts[1];
      while (v_axis < d - 1 && k1[v_axis] == k2[v_axis]) ++v_axis;
      require(k1[v_axis] != k2[v_axis],
              "pipeline: contacts coincide across all axes");
    }
    const double n_delta = std::pow(static_cast<double>(n), delta);
    v = std::polar(1.0, M_PI / (2.0 * n_delta));
  }

  const SubstitutedPoly sub = substitute(coeffs, facet.b, v, v_axis);
  require(std::abs(sub.c_min) > 0.0,
          "pipeline: minimum-exponent coefficient vanished");

  // Dense reduced polynomial with exponents shifted to start at 0; the
  // global u^{min_exp} shift is modulus-free on |u| = 1.
  const long long span = sub.terms.back().first - sub.min_exp;
  require(span <= 1000000, "pipeline: exponent span too large");
  std::vector<Cplx> dense(static_cast<std::size_t>(span) + 1, Cplx(0.0, 0.0));
  for (const auto& [e, c] : sub.terms)
    dense[static_cast<std::size_t>(e - sub.min_exp)] = c;

  const double l_inner = std::ceil(2.0 * d * L * n_pow);
  BoundWitness inner = max_modulus_univariate(dense, 0, l_inner, 1.0,
                                              cfg.density, cfg.refine_tol);

  // Map back to the torus and check arc membership exactly in theta.
  const double theta_u = inner.theta;
  BoundWitness bw;
  bw.theta = theta_u;
  bw.point.resize(d);
  std::vector<Cplx> z(d);
  for (int i = 0; i < d; ++i) {
    double th = facet.b[i] * theta_u;
    if (!corollary_mode && i == v_axis) th += std::arg(v);
    require(std::abs(th) <= M_PI / L,
            "pipeline: mapped point escaped gamma(L)");
    z[i] = std::polar(1.0, th);
    bw.point[i] = z[i];
  }

  const double direct = std::abs(eval_signed_poly(coeffs, z));
  require(std::abs(direct - inner.value) <=
              1e-7 * std::max(1.0, std::max(direct, inner.value)),
          "pipeline: substituted and direct evaluations disagree");
  bw.value = direct;
  bw.calib = calib_c;
  const double logn = std::log(static_cast<double>(n));
  bw.budget = corollary_mode
                  ? std::exp(-calib_c * L * n * logn)
                  : std::exp(-calib_c * delta * L * n_pow * logn);
  return bw;
}

}  // namespace

BoundWitness multivariate_bound(const SignedHypermatrix& coeffs, double mu,
                                double L, double delta, double calib_c,
                                const PipelineConfig& cfg) {
  const int n = coeffs.side();
  require(mu >= 0.0 && mu < 1.0, "mu must lie in [0, 1)");
  require(delta >= 1.0, "delta must be at least 1");
  require(L <= std::pow(static_cast<double>(n), delta) + 1e-9,
          "L must not exceed n^delta");
  require(!coeffs.is_zero(), "multivariate bound: zero polynomial");
  require(static_cast<double>(sparsity_index(coeffs)) >=
              std::pow(static_cast<double>(n), mu) - 1e-9,
          "multivariate bound: polynomial is not n^mu-sparse");
  return substitution_pipeline(coeffs, mu, L, delta, calib_c, cfg, false);
}

BoundWitness corollary_bound(const SignedHypermatrix& coeffs, double L,
                             double calib_c, const PipelineConfig& cfg) {
  return substitution_pipeline(coeffs, 0.0, L, 1.0, calib_c, cfg, true);
}

TwoAxisResult two_axis_arc_search(const std::function<Cplx(Cplx, Cplx)>& g,
                                  double L, int density, double refine_tol) {
  require(L >= 1.0 && density >= 2, "bad arc parameters");
  const double half = M_PI / L;
  const std::uint64_t m = static_cast<std::uint64_t>(density);
  auto theta_of = [&](std::uint64_t i) {
    return -half + 2.0 * half * static_cast<double>(i) /
                       static_cast<double>(m - 1);
  };
  ScanHit hit = parallel_scan_max(m * m, [&](std::uint64_t i) {
    const Cplx z2 = std::polar(1.0, theta_of(i / m));
    const Cplx z3 = std::polar(1.0, theta_of(i % m));
    return std::abs(g(z2, z3));
  });
  double t2 = theta_of(hit.index / m), t3 = theta_of(hit.index % m);
  const double step = 2.0 * half / static_cast<double>(m - 1);
  // Alternating per-axis refinement.
  for (int round = 0; round < 2; ++round) {
    t2 = golden_max(
        [&](double th) {
          return std::abs(g(std::polar(1.0, th), std::polar(1.0, t3)));
        },
        std::max(-half, t2 - step), std::min(half, t2 + step),
        refine_tol * std::max(1.0, step));
    t3 = golden_max(
        [&](double th) {
          return std::abs(g(std::polar(1.0, t2), std::polar(1.0, th)));
        },
        std::max(-half, t3 - step), std::min(half, t3 + step),
        refine_tol * std::max(1.0, step));
  }
  TwoAxisResult best{std::polar(1.0, theta_of(hit.index / m)),
                     std::polar(1.0, theta_of(hit.index % m)), hit.value};
  const Cplx rz2 = std::polar(1.0, t2), rz3 = std::polar(1.0, t3);
  const double rv = std::abs(g(rz2, rz3));
  if (rv > best.value) best = {rz2, rz3, rv};
  return best;
}

DiskSearchResult disk_extension_search(const std::function<Cplx(Cplx)>& g,
                                       double p, double q, int density,
                                       int max_l) {
  require(p > 0.0 && p <= 1.0, "p must lie in (0, 1]");
  DiskSearchResult best{Cplx(0.0, 0.0), std::abs(g(Cplx(q, 0.0)))};  // w = 0
  auto probe = [&](Cplx w) {
    if (std::abs(w) > 1.0 + 1e-12) return;
    const Cplx z = p * w + q;
    const double v = std::abs(g(z));
    if (v > best.value) best = {w, v};
  };
  probe(Cplx(1.0, 0.0));
  for (double L = 1.0; L <= static_cast<double>(max_l); L *= 2.0) {
    const double rho = arc_rho(p, L);
    const double half = M_PI / L;
    for (int i = 0; i < density; ++i) {
      const double th = -half + 2.0 * half * static_cast<double>(i) /
                                    static_cast<double>(density - 1);
      const Cplx z = std::polar(rho, th);
      probe(lift_w(z, p, q).w);
    }
  }
  return best;
}

}  // namespace hmtr
