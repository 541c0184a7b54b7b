#include "hmtr/pilot.hpp"

#include <algorithm>
#include <cmath>

#include "hmtr/reconstruct.hpp"
#include "hmtr/reduction.hpp"
#include "hmtr/rng.hpp"

namespace hmtr::pilot {

std::vector<Cplx> random_pm1_poly(int degree, std::uint64_t seed) {
  CounterRng rng(seed);
  std::vector<Cplx> c(degree + 1);
  for (auto& v : c) v = Cplx(rng.below(2) ? 1.0 : -1.0, 0.0);
  return c;
}

SignedHypermatrix random_sparse_signed(int d, int n, int spacing,
                                       std::uint64_t seed) {
  CounterRng rng(seed);
  SignedHypermatrix a(d, n);
  Index k(d, 0);
  while (true) {
    if (rng.u01() < 0.6)
      a.set(k, rng.below(2) ? 1 : -1);
    int i = d - 1;
    for (; i >= 0; --i) {
      k[i] += spacing;
      if (k[i] < n) break;
      k[i] = 0;
    }
    if (i < 0) break;
  }
  if (a.is_zero()) a.set(Index(d, 0), 1);
  return a;
}

std::pair<Hypermatrix, Hypermatrix> random_margin_pair(int n, int r, int l,
                                                       std::uint64_t seed) {
  CounterRng rng(seed);
  require(2 * l < n, "margin pair: side too small for the margin");
  Hypermatrix x(r, n), y(r, n);
  while (true) {
    Index k(r, l);
    while (true) {
      const auto v = rng.below(4);
      // Mostly agreeing entries with occasional one-sided differences.
      x.set(k, v == 1 || v == 3 ? 1 : 0);
      y.set(k, v == 2 || v == 3 ? 1 : 0);
      int i = r - 1;
      for (; i >= 0; --i) {
        if (++k[i] <= n - 1 - l) break;
        k[i] = l;
      }
      if (i < 0) break;
    }
    if (!diff(x, y).is_zero()) return {x, y};
  }
}

double littlewood_ratio(const std::vector<Cplx>& coeffs, double p,
                        const GridSettings& grids) {
  const BoundWitness bw = littlewood_search(coeffs, p, 0.0, grids.arc_density,
                                            grids.refine_tol);
  const double m13 = std::cbrt(static_cast<double>(coeffs.size() - 1));
  return std::max(0.0, -std::log(bw.value)) / m13;
}

double multivariate_ratio(const SignedHypermatrix& coeffs, double mu,
                          double arc_l, double delta,
                          const GridSettings& grids) {
  PipelineConfig pc{grids.pipeline_density, grids.refine_tol, 4000000};
  const BoundWitness bw = multivariate_bound(coeffs, mu, arc_l, delta, 0.0, pc);
  const double n = coeffs.side();
  const double scale = delta * arc_l * std::pow(n, 1.0 - mu) * std::log(n);
  return std::max(0.0, -std::log(bw.value)) / scale;
}

double corollary_ratio(const SignedHypermatrix& coeffs, double arc_l,
                       const GridSettings& grids) {
  PipelineConfig pc{grids.pipeline_density, grids.refine_tol, 4000000};
  const BoundWitness bw = corollary_bound(coeffs, arc_l, 0.0, pc);
  const double n = coeffs.side();
  return std::max(0.0, -std::log(bw.value)) / (arc_l * n * std::log(n));
}

namespace {

// Fixed unit-circle scalars for a contiguous generating function: per-axis
// argmax of |h| over a coarse arc grid (deterministic; nonzero for nonzero
// h except on a measure-zero grid coincidence).
std::vector<Cplx> pick_fixed_scalars(const GenfunSource& src, const Pattern& w,
                                     int r, double arc_l, int grid) {
  std::vector<Cplx> best(r, Cplx(1.0, 0.0));
  double best_v = -1.0;
  std::vector<int> idx(r, 0);
  std::vector<Cplx> z(r);
  const double half = M_PI / arc_l;
  while (true) {
    for (int i = 0; i < r; ++i)
      z[i] = std::polar(1.0, -half + 2.0 * half * idx[i] / (grid - 1.0));
    const double v = std::abs(eval_contiguous(src, w, z));
    if (v > best_v) {
      best_v = v;
      best = z;
    }
    int i = r - 1;
    for (; i >= 0; --i) {
      if (++idx[i] < grid) break;
      idx[i] = 0;
    }
    if (i < 0) break;
  }
  return best;
}

}  // namespace

DecontigMeasure decontiguize_measure(int n, int r, int l, double q,
                                     std::uint64_t seed,
                                     const GridSettings& grids) {
  auto [x, y] = random_margin_pair(n, r, l, seed);
  const Witness wit = construct_witness(x, y, l);
  const GenfunSource src = GenfunSource::pair(x, y);
  const auto z0 = pick_fixed_scalars(src, wit.w, r, 4.0, 33);
  const auto res = decontiguize(src, wit.w, z0, 1.0 - q,
                                grids.interval_points, grids.refine_tol);
  DecontigMeasure m;
  m.value = res.value;
  m.h = res.h_value;
  m.r = r;
  m.l = l;
  m.choose = binomial(n, l);
  return m;
}

CubeCaseResult cube_case(int n, int l, double arc_l, double q,
                         std::uint64_t seed, const GridSettings& grids) {
  CounterRng rng(seed);
  // A pair differing only in the deep interior, so every margin is >= l.
  Hypermatrix x(3, n), y(3, n);
  for (std::size_t f = 0; f < x.size(); ++f) {
    const auto v = static_cast<std::uint8_t>(rng.below(2));
    x.flat_set(f, v);
    y.flat_set(f, v);
  }
  bool changed = false;
  Index k(3, 0);
  for (k[0] = l; k[0] <= n - 1 - l; ++k[0])
    for (k[1] = l; k[1] <= n - 1 - l; ++k[1])
      for (k[2] = l; k[2] <= n - 1 - l; ++k[2])
        if (rng.u01() < 0.25) {
          y.set(k, y.at(k) ? 0 : 1);
          changed = true;
        }
  if (!changed) {
    Index c(3, n / 2);
    y.set(c, y.at(c) ? 0 : 1);
  }

  const SignedHypermatrix a = diff(x, y);
  const ReductionResult rr = reduce(a);
  require(classify(rr.lambdas_desc(), l) >= 1, "cube case: margin violated");

  const Hypermatrix x1 = rr.restrict_binary(x, 1);
  const Hypermatrix y1 = rr.restrict_binary(y, 1);
  const Witness wit = construct_witness(x1, y1, l);
  const GenfunSource line = GenfunSource::pair(x1, y1);
  const auto z0 = pick_fixed_scalars(line, wit.w, 1, 4.0, 129);
  const auto dec = decontiguize(line, wit.w, z0, 1.0 - q,
                                grids.interval_points, grids.refine_tol);

  // Collapse the full W-generating function at the fixed z_1 tuple.
  const Hypermatrix x3 = rr.restrict_binary(x, 3);
  const Hypermatrix y3 = rr.restrict_binary(y, 3);
  std::vector<Cplx> table(static_cast<std::size_t>(n) * n, Cplx(0.0, 0.0));
  {
    PositionSpace space = PositionSpace::canonical(n, 3, l, 1);
    ScatterPosition pos = first_position(space);
    bool more = space.count() > 0;
    while (more) {
      const int c = genfun_coeff(GenfunSource::pair(x3, y3), wit.w, pos);
      if (c != 0)
        table[static_cast<std::size_t>(pos.points[0]) * n + pos.points[1]] +=
            static_cast<double>(c) * odot_power(dec.z.rows[0], pos.rows[0]);
      more = advance_position(space, pos);
    }
  }
  auto g23 = [&](Cplx z2, Cplx z3) {
    Cplx acc(0.0, 0.0);
    for (int k2 = n - 1; k2 >= 0; --k2) {
      Cplx row(0.0, 0.0);
      for (int k3 = n - 1; k3 >= 0; --k3)
        row = row * z3 + table[static_cast<std::size_t>(k2) * n + k3];
      acc = acc * z2 + row;
    }
    return acc;
  };
  const TwoAxisResult two = two_axis_arc_search(g23, arc_l,
                                                grids.torus_density,
                                                grids.refine_tol);
  CubeCaseResult out;
  out.g1 = dec.value;
  out.value = two.value;
  out.log_m = std::log(static_cast<double>(n) * n *
                       static_cast<double>(binomial(n, l)));
  out.l_arc = arc_l;
  return out;
}

double disk_ratio(const std::vector<Cplx>& coeffs, double p,
                  const GridSettings& grids) {
  auto g = [&](Cplx z) {
    Cplx acc(0.0, 0.0);
    for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * z + coeffs[i];
    return acc;
  };
  const DiskSearchResult res =
      disk_extension_search(g, p, 1.0 - p, grids.disk_density, 1024);
  const double m13 = std::cbrt(static_cast<double>(coeffs.size() - 1));
  return std::max(0.0, -std::log(res.value)) / m13;
}

double wnorm_constant(double p, int l_points, int theta_points) {
  double c = 0.0;
  for (int i = 0; i < l_points; ++i) {
    const double arc_l = 1.0 + 255.0 * i / (l_points - 1.0);
    for (int t = 0; t < theta_points; ++t) {
      const double th =
          -M_PI / arc_l + 2.0 * M_PI / arc_l * t / (theta_points - 1.0);
      const auto lift = lift_w(std::polar(1.0, th), p, 1.0 - p);
      c = std::max(c, arc_l * arc_l * std::log(lift.ell));
    }
  }
  return c;
}

std::uint64_t pilot_reconstruct_t(int n, int d, double q, int trials,
                                  double target, std::uint64_t t_max,
                                  std::uint64_t seed) {
  const ExperimentReport rep = trace_complexity_experiment(
      n, d, ChannelParams::from_q(q), target, trials, seed, t_max);
  require(rep.minimal_t > 0, "pilot: target not reached within the schedule");
  return static_cast<std::uint64_t>(rep.minimal_t);
}

Calibration run_calibration(std::uint64_t seed, double q,
                            const GridSettings& grids, std::ostream* log) {
  Calibration cal;
  const double p = 1.0 - q;
  auto note = [&](const std::string& line) {
    if (log) *log << line << "\n";
  };

  // Univariate Littlewood floor over the three pilot degrees.
  {
    double worst = 0.0;
    for (int deg : {64, 256, 1024})
      for (int i = 0; i < 20; ++i)
        worst = std::max(
            worst, littlewood_ratio(
                       random_pm1_poly(deg, derive_seed(seed, 0x11000 + deg + i)),
                       p, grids));
    cal.littlewood_c = worst * 1.15 + 0.05;
    note("littlewood_c = " + std::to_string(cal.littlewood_c));
  }

  // Multivariate pipeline floor.
  {
    double worst = 0.0;
    int i = 0;
    for (int d : {2, 3})
      for (int n : {32, 64})
        for (int rep = 0; rep < 10; ++rep, ++i) {
          const int spacing =
              static_cast<int>(std::ceil(std::pow(n, 0.6)));
          const SignedHypermatrix a = random_sparse_signed(
              d, n, spacing, derive_seed(seed, 0x12000 + i));
          const double arc_l = std::ceil(std::pow(n, 0.2));
          worst = std::max(worst,
                           multivariate_ratio(a, 0.6, arc_l, 1.0, grids));
        }
    cal.multivariate_c = worst * 1.15 + 0.05;
    note("multivariate_c = " + std::to_string(cal.multivariate_c));
  }

  // Corollary (mu = 0) floor on dense random +-1 matrices.
  {
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
      CounterRng rng(derive_seed(seed, 0x13000 + i));
      const int d = 1 + static_cast<int>(rng.below(2));
      SignedHypermatrix a(d, 16);
      for (std::size_t f = 0; f < a.size(); ++f)
        a.flat_set(f, rng.below(2) ? 1 : -1);
      worst = std::max(worst, corollary_ratio(a, 4.0, grids));
    }
    cal.corollary_c = worst * 1.15 + 0.05;
    note("corollary_c = " + std::to_string(cal.corollary_c));
  }

  // De-contiguization floor: c1 fixes the |h| exponent at 1/2; c2 absorbs
  // the measured loss against sqrt(|h|) C(n,l)^{r/2}.
  {
    cal.decontiguize_c1 = p;
    double worst = 0.0;
    for (int i = 0; i < 30; ++i) {
      const DecontigMeasure m =
          decontiguize_measure(8, 2, 3, q, derive_seed(seed, 0x14000 + i),
                               grids);
      const double top = std::sqrt(m.h) *
                         std::pow(static_cast<double>(m.choose), m.r / 2.0);
      worst = std::max(worst, 2.0 * p * std::log(top / m.value));
    }
    cal.decontiguize_c2 = std::max(0.1, worst + 0.5);
    note("decontiguize_c2 = " + std::to_string(cal.decontiguize_c2));
  }

  // Cube-case two-axis floor exponent.
  {
    double worst = 0.01;
    for (int i = 0; i < 8; ++i) {
      const CubeCaseResult r =
          cube_case(8, 3, 4.0, q, derive_seed(seed, 0x15000 + i), grids);
      const double l2 = r.l_arc * r.l_arc;
      worst = std::max(
          worst, std::log(std::pow(r.g1, l2) / r.value) / ((l2 - 1) * r.log_m));
    }
    cal.two_axis_c = worst * 1.2 + 0.02;
    note("two_axis_c = " + std::to_string(cal.two_axis_c));
  }

  // Disk extension floor.
  {
    double worst = 0.0;
    for (int deg : {128, 512})
      for (int i = 0; i < 10; ++i)
        worst = std::max(
            worst,
            disk_ratio(random_pm1_poly(deg, derive_seed(seed, 0x16000 + deg + i)),
                       p, grids));
    cal.disk_c = worst * 1.15 + 0.05;
    note("disk_c = " + std::to_string(cal.disk_c));
  }

  cal.wnorm_c = wnorm_constant(p, 64, 157);
  note("wnorm_c = " + std::to_string(cal.wnorm_c));

  // Desk-scale reconstruction budgets, doubled over the pilot minimum.
  cal.reconstruct_t_n2 =
      2 * pilot_reconstruct_t(2, 2, 0.3, 64, 1.0, 1 << 13,
                              derive_seed(seed, 0x17001));
  note("reconstruct_t_n2 = " + std::to_string(cal.reconstruct_t_n2));
  cal.reconstruct_t_n3 =
      2 * pilot_reconstruct_t(3, 2, 0.5, 96, 0.99, 1 << 15,
                              derive_seed(seed, 0x17002));
  note("reconstruct_t_n3 = " + std::to_string(cal.reconstruct_t_n3));

  return cal;
}

}  // namespace hmtr::pilot
