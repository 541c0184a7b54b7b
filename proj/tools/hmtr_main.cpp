// Command-line front end: simulate, identity-check, reduce, witness, bound,
// reconstruct, experiment, calibrate. Every randomized command requires an
// explicit --seed unless --entropy is passed; runs emit a manifest.json next
// to their outputs so they can be replayed.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

#include "hmtr/channel.hpp"
#include "hmtr/config.hpp"
#include "hmtr/genfun.hpp"
#include "hmtr/littlewood.hpp"
#include "hmtr/rational.hpp"
#include "hmtr/reconstruct.hpp"
#include "hmtr/reduction.hpp"
#include "hmtr/rng.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace hmtr;

namespace {

constexpr const char* kVersion = "hmtr 0.1.0";

struct CommonOpts {
  double q = 0.5;
  std::uint64_t seed = 0;
  bool seed_set = false;
  bool entropy = false;
  std::string config_path;
  std::string out_dir = "out";
};

void add_common(CLI::App* cmd, CommonOpts& c) {
  cmd->add_option("--q", c.q, "deletion probability")->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--seed", c.seed, "64-bit run seed")
      ->each([&c](const std::string&) { c.seed_set = true; });
  cmd->add_flag("--entropy", c.entropy,
                "draw the seed from the OS instead of --seed");
  cmd->add_option("--config", c.config_path, "JSON config file");
  cmd->add_option("--out", c.out_dir, "output directory");
}

Config load_opts_config(const CommonOpts& c) {
  return c.config_path.empty() ? default_config() : load_config(c.config_path);
}

std::uint64_t resolve_seed(CommonOpts& c, bool randomized) {
  if (!randomized) return c.seed;
  if (c.seed_set) return c.seed;
  if (c.entropy) {
    std::random_device rd;
    c.seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    return c.seed;
  }
  fail("this command is randomized: pass an explicit --seed (or --entropy)");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  require(out.good(), "cannot write " + path.string());
  out << text;
}

json cplx_json(const Cplx& z) { return json::array({z.real(), z.imag()}); }

json point_json(const ComplexPoint& z) {
  json rows = json::array(), points = json::array();
  for (const auto& row : z.rows) {
    json r = json::array();
    for (const auto& v : row) r.push_back(cplx_json(v));
    rows.push_back(r);
  }
  for (const auto& v : z.points) points.push_back(cplx_json(v));
  return json{{"rows", rows}, {"points", points}};
}

json transform_json(const AxisTransform& t) {
  return json{{"perm", t.perm},
              {"reversed", std::vector<int>(t.reversed.begin(), t.reversed.end())}};
}

void write_manifest(const CommonOpts& c, const std::string& command,
                    json extra) {
  extra["command"] = command;
  extra["version"] = kVersion;
  extra["rng"] = kRngName;
  extra["q"] = c.q;
  extra["seed"] = c.seed;
  write_file(fs::path(c.out_dir) / "manifest.json", extra.dump(2) + "\n");
}

ComplexPoint random_torus_point(int d, int r, int l, CounterRng& rng) {
  ComplexPoint z;
  for (int i = 0; i < r; ++i) {
    std::vector<Cplx> row(l);
    for (auto& v : row) v = std::polar(1.0, (rng.u01() * 2 - 1) * M_PI);
    z.rows.push_back(std::move(row));
  }
  for (int i = 0; i < d - r; ++i)
    z.points.push_back(std::polar(1.0, (rng.u01() * 2 - 1) * M_PI));
  return z;
}

Pattern random_pattern(int r, int l, CounterRng& rng) {
  if (r == 0) return Pattern::scalar_one();
  std::size_t total = 1;
  for (int i = 0; i < r; ++i) total *= static_cast<std::size_t>(l);
  std::vector<std::uint8_t> e(total);
  for (auto& v : e) v = static_cast<std::uint8_t>(rng.below(2));
  return Pattern(r, l, e);
}

int cmd_simulate(CommonOpts& c, const std::string& input, int count) {
  const std::uint64_t seed = resolve_seed(c, true);
  const Hypermatrix x = parse_hmx(read_file(input));
  const ChannelParams pr = ChannelParams::from_q(c.q);
  fs::create_directories(c.out_dir);
  std::ostringstream csv;
  csv << "trace,kept_cells\n";
  for (int i = 0; i < count; ++i) {
    const Trace t = sample_trace(x, pr, derive_seed(seed, i));
    const std::string name = "trace_" + std::to_string(i) + ".trc";
    write_file(fs::path(c.out_dir) / name, serialize_trc(t));
    csv << name << ',' << t.cells() << '\n';
  }
  write_file(fs::path(c.out_dir) / "traces.csv", csv.str());
  write_manifest(c, "simulate",
                 json{{"input", input}, {"count", count},
                      {"n", x.side()}, {"d", x.dim()}});
  std::cout << "wrote " << count << " traces to " << c.out_dir << "\n";
  return 0;
}

int cmd_identity_check(CommonOpts& c, const std::string& xpath,
                       const std::string& ypath, int l, int r, int points,
                       bool rational) {
  const std::uint64_t seed = resolve_seed(c, true);
  const Hypermatrix x = parse_hmx(read_file(xpath));
  Hypermatrix y;
  const bool pair = !ypath.empty();
  if (pair) y = parse_hmx(read_file(ypath));
  const GenfunSource src =
      pair ? GenfunSource::pair(x, y) : GenfunSource::unsigned_of(x);
  const int d = x.dim();
  require(r >= 0 && r <= d, "rank out of range");
  CounterRng rng(seed);
  const Pattern w = random_pattern(r, l, rng);

  json checks = json::array();
  double worst = 0.0;
  for (int i = 0; i < points; ++i) {
    const ComplexPoint z = random_torus_point(d, r, l, rng);
    const double res = verify_identity(src, w, z, ChannelParams::from_q(c.q));
    worst = std::max(worst, res);
    checks.push_back(json{{"z", point_json(z)}, {"residual", res}});
  }
  json out{{"n", x.side()},      {"d", d},
           {"r", r},             {"l", r == 0 ? 1 : l},
           {"q", c.q},           {"checks", checks},
           {"max_residual", worst}};
  if (rational) {
    // Exact mode at a nearby dyadic q; Pythagorean unit-circle points.
    RationalPoint z;
    for (int i = 0; i < r; ++i) {
      std::vector<CRat> row;
      for (int h = 0; h < l; ++h) row.push_back(rational_unit_point(rng));
      z.rows.push_back(std::move(row));
    }
    for (int i = 0; i < d - r; ++i)
      z.points.push_back(rational_unit_point(rng));
    const Rat q_rat(static_cast<long long>(c.q * 64.0), 64);
    const CRat res =
        identity_residual_rational(x, pair ? &y : nullptr, w, z, q_rat);
    out["rational"] = json{{"q", q_rat.str()},
                           {"residual_exactly_zero", res.is_zero()}};
  }
  write_file(fs::path(c.out_dir) / "identity.json", out.dump(2) + "\n");
  write_manifest(c, "identity-check", json{{"x", xpath}, {"y", ypath}});
  std::cout << out.dump(2) << "\n";
  return worst <= 1e-9 ? 0 : 1;
}

int cmd_reduce(CommonOpts& c, const std::string& input) {
  const SignedHypermatrix a = parse_hmx_signed(read_file(input));
  const ReductionResult rr = reduce(a);
  json transforms = json::array();
  for (int i = 1; i <= rr.d; ++i)
    transforms.push_back(transform_json(rr.transforms[i]));
  json out{{"n", rr.n},
           {"d", rr.d},
           {"lambdas", rr.lambdas_desc()},
           {"slice_indices", std::vector<int>(rr.slice_indices.begin() + 1,
                                              rr.slice_indices.end())},
           {"transforms", transforms},
           {"terminal", static_cast<int>(rr.chain[0].flat_at(0))}};
  write_file(fs::path(c.out_dir) / "reduction.json", out.dump(2) + "\n");
  write_manifest(c, "reduce", json{{"input", input}});
  std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_witness(CommonOpts& c, const std::string& xpath,
                const std::string& ypath, int l) {
  const Hypermatrix x = parse_hmx(read_file(xpath));
  const Hypermatrix y = parse_hmx(read_file(ypath));
  const SignedHypermatrix a = diff(x, y);
  require(!a.is_zero(), "witness: X and Y coincide");
  const ReductionResult rr = reduce(a);
  if (l <= 0) l = l_rule(x.side(), x.dim());
  const int r = classify(rr.lambdas_desc(), l);
  json out{{"n", x.side()}, {"d", x.dim()}, {"l", l},
           {"lambdas", rr.lambdas_desc()}, {"r", r}};
  json transforms = json::array();
  for (int i = 1; i <= rr.d; ++i)
    transforms.push_back(transform_json(rr.transforms[i]));
  out["transforms"] = transforms;
  if (r >= 1) {
    const Hypermatrix xr = rr.restrict_binary(x, r);
    const Hypermatrix yr = rr.restrict_binary(y, r);
    const Witness wit = construct_witness(xr, yr, l);
    Hypermatrix wmat(r, l);
    for (std::size_t f = 0; f < wit.w.size(); ++f)
      wmat.flat_set(f, wit.w.flat_at(f));
    out["witness"] = json{{"w_hmx", serialize_hmx(wmat)},
                          {"center", wit.center},
                          {"s", wit.s},
                          {"chosen_from", wit.chosen_from == 1 ? "X" : "Y"},
                          {"aperiodic", wit.aperiodic},
                          {"h_nonzero", wit.h_nonzero},
                          {"h_sparsity", wit.h_sparsity}};
    // Lower-bound certificate alongside the witness: free the contiguity
    // axis by axis from the best coarse-grid scalars and report the
    // achieved |g_r|. Kept to r <= 3 (the axis-grid scan is exponential
    // in r).
    if (r <= 3) {
      const GenfunSource src = GenfunSource::pair(xr, yr);
      std::vector<Cplx> best(r, Cplx(1.0, 0.0));
      double best_v = -1.0;
      std::vector<int> idx(r, 0);
      std::vector<Cplx> zs(r);
      const int grid = 33;
      while (true) {
        for (int i = 0; i < r; ++i)
          zs[i] = std::polar(1.0, -M_PI / 4 + M_PI / 2 * idx[i] / (grid - 1.0));
        const double v = std::abs(eval_contiguous(src, wit.w, zs));
        if (v > best_v) {
          best_v = v;
          best = zs;
        }
        int i = r - 1;
        for (; i >= 0; --i) {
          if (++idx[i] < grid) break;
          idx[i] = 0;
        }
        if (i < 0) break;
      }
      if (best_v > 0.0) {
        const auto dec = decontiguize(src, wit.w, best, 1.0 - c.q);
        json z0 = json::array();
        for (const auto& v : best) z0.push_back(cplx_json(v));
        out["decontiguize_certificate"] =
            json{{"h_value", dec.h_value},
                 {"g_value", dec.value},
                 {"z0", z0},
                 {"tied", dec.tied}};
      }
    }
  } else {
    out["witness"] = json{{"w_hmx", "scalar 1"}, {"s", 0},
                          {"aperiodic", true},  {"h_nonzero", true}};
  }
  write_file(fs::path(c.out_dir) / "witness.json", out.dump(2) + "\n");
  write_manifest(c, "witness", json{{"x", xpath}, {"y", ypath}, {"l", l}});
  std::cout << out.dump(2) << "\n";
  return 0;
}

json bound_json(const BoundWitness& bw) {
  json point = json::array();
  for (const auto& z : bw.point) point.push_back(cplx_json(z));
  return json{{"point", point},
              {"theta", bw.theta},
              {"value", bw.value},
              {"budget", bw.budget},
              {"calib", bw.calib},
              {"meets_budget", bw.budget <= 0.0 || bw.value >= bw.budget}};
}

int cmd_bound(CommonOpts& c, const std::string& mode, const std::string& input,
              double arc_l, double mu, double delta,
              const std::string& calib_path) {
  const Config cfg = load_opts_config(c);
  Calibration calib;
  const std::string cpath = calib_path.empty() ? cfg.calib_path : calib_path;
  if (fs::exists(cpath)) calib = load_calibration(cpath);
  const SignedHypermatrix coeffs = parse_hmx_signed(read_file(input));
  PipelineConfig pc{cfg.grids.pipeline_density, cfg.grids.refine_tol, 4000000};
  BoundWitness bw;
  if (mode == "littlewood") {
    require(coeffs.dim() == 1, "littlewood mode needs a 1-dimensional input");
    std::vector<Cplx> dense(coeffs.size());
    for (std::size_t f = 0; f < coeffs.size(); ++f)
      dense[f] = Cplx(static_cast<double>(coeffs.flat_at(f)), 0.0);
    bw = littlewood_search(dense, 1.0 - c.q, calib.littlewood_c,
                           cfg.grids.arc_density, cfg.grids.refine_tol);
  } else if (mode == "multivariate") {
    bw = multivariate_bound(coeffs, mu, arc_l, delta, calib.multivariate_c, pc);
  } else if (mode == "corollary") {
    bw = corollary_bound(coeffs, arc_l, calib.corollary_c, pc);
  } else {
    fail("unknown bound mode: " + mode);
  }
  json out{{"mode", mode},
           {"n", coeffs.side()},
           {"d", coeffs.dim()},
           {"L", arc_l},
           {"mu", mu},
           {"delta", delta},
           {"calibration_provenance", calib.provenance},
           {"witness", bound_json(bw)}};
  write_file(fs::path(c.out_dir) / "bound.json", out.dump(2) + "\n");
  write_manifest(c, "bound", json{{"input", input}, {"mode", mode}});
  std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_reconstruct(CommonOpts& c, const std::vector<std::string>& traces,
                    int n, int d) {
  const Config cfg = load_opts_config(c);
  std::vector<Trace> ts;
  for (const auto& path : traces) ts.push_back(parse_trc(read_file(path)));
  const Hypermatrix got =
      reconstruct_exhaustive(ts, n, d, ChannelParams::from_q(c.q), cfg.engine);
  write_file(fs::path(c.out_dir) / "reconstructed.hmx", serialize_hmx(got));
  write_manifest(c, "reconstruct",
                 json{{"n", n}, {"d", d}, {"traces", traces.size()}});
  std::cout << serialize_hmx(got);
  return 0;
}

int cmd_experiment(CommonOpts& c, int n, int d, double target, int trials,
                   std::uint64_t t_max) {
  const std::uint64_t seed = resolve_seed(c, true);
  const Config cfg = load_opts_config(c);
  const ExperimentReport rep = trace_complexity_experiment(
      n, d, ChannelParams::from_q(c.q), target, trials, seed, t_max,
      cfg.engine);
  write_file(fs::path(c.out_dir) / "report.csv", rep.csv());
  write_manifest(c, "experiment",
                 json{{"n", n},
                      {"d", d},
                      {"target", target},
                      {"trials", trials},
                      {"t_max", t_max},
                      {"minimal_t", rep.minimal_t},
                      {"wall_seconds", rep.wall_seconds}});
  std::cout << rep.csv();
  if (rep.minimal_t >= 0)
    std::cout << "minimal T for target " << target << ": " << rep.minimal_t
              << "\n";
  else
    std::cout << "target " << target << " not reached by T <= " << t_max
              << "\n";
  return 0;
}

}  // namespace

int run_calibrate(const std::string& out_path, std::uint64_t seed, double q);

int main(int argc, char** argv) {
  CLI::App app{std::string(kVersion) +
               " - hypermatrix trace reconstruction laboratory"};
  app.require_subcommand(1);

  CommonOpts c;

  std::string sim_in;
  int sim_count = 16;
  auto* sim = app.add_subcommand("simulate", "sample traces of an HMX input");
  add_common(sim, c);
  sim->add_option("--in", sim_in, "HMX input")->required();
  sim->add_option("--t", sim_count, "number of traces");

  std::string idc_x, idc_y;
  int idc_l = 2, idc_r = 1, idc_points = 8;
  bool idc_rational = false;
  auto* idc =
      app.add_subcommand("identity-check", "verify the W-generating identity");
  add_common(idc, c);
  idc->add_option("--x", idc_x, "HMX input X")->required();
  idc->add_option("--y", idc_y, "HMX input Y (difference mode)");
  idc->add_option("--l", idc_l, "pattern side");
  idc->add_option("--r", idc_r, "pattern rank");
  idc->add_option("--points", idc_points, "evaluation points");
  idc->add_flag("--rational", idc_rational, "also run the exact-rational mode");

  std::string red_in;
  auto* red =
      app.add_subcommand("reduce", "dimension reduction of a signed HMX");
  add_common(red, c);
  red->add_option("--in", red_in, "signed HMX input")->required();

  std::string wit_x, wit_y;
  int wit_l = 0;
  auto* wit = app.add_subcommand("witness", "construct the pattern witness");
  add_common(wit, c);
  wit->add_option("--x", wit_x, "HMX input X")->required();
  wit->add_option("--y", wit_y, "HMX input Y")->required();
  wit->add_option("--l", wit_l, "odd pattern side (0 = per-dimension rule)");

  std::string bnd_mode = "multivariate", bnd_in, bnd_calib;
  double bnd_L = 2.0, bnd_mu = 0.6, bnd_delta = 1.0;
  auto* bnd = app.add_subcommand("bound", "polynomial lower-bound searches");
  add_common(bnd, c);
  bnd->add_option("--mode", bnd_mode, "littlewood|multivariate|corollary");
  bnd->add_option("--in", bnd_in, "signed HMX coefficient input")->required();
  bnd->add_option("--L", bnd_L, "arc parameter");
  bnd->add_option("--mu", bnd_mu, "sparsity exponent");
  bnd->add_option("--delta", bnd_delta, "Delta exponent");
  bnd->add_option("--calib", bnd_calib, "calibration JSON");

  std::vector<std::string> rec_traces;
  int rec_n = 2, rec_d = 2;
  auto* rec = app.add_subcommand("reconstruct",
                                 "exhaustive reconstruction from TRC files");
  add_common(rec, c);
  rec->add_option("--traces", rec_traces, "TRC files")->required();
  rec->add_option("--n", rec_n, "side")->required();
  rec->add_option("--d", rec_d, "dimension")->required();

  int exp_n = 2, exp_d = 2, exp_trials = 50;
  double exp_target = 0.99;
  std::uint64_t exp_tmax = 4096;
  auto* exp = app.add_subcommand("experiment", "trace-complexity experiment");
  add_common(exp, c);
  exp->add_option("--n", exp_n, "side");
  exp->add_option("--d", exp_d, "dimension");
  exp->add_option("--target", exp_target, "success-rate target");
  exp->add_option("--trials", exp_trials, "trials per T");
  exp->add_option("--tmax", exp_tmax, "largest T in the doubling schedule");

  std::string cal_out = "calib/calib.json";
  auto* cal = app.add_subcommand("calibrate",
                                 "run the pilot suites and freeze constants");
  add_common(cal, c);
  cal->add_option("--calib-out", cal_out, "calibration JSON to write");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) return cmd_simulate(c, sim_in, sim_count);
    if (idc->parsed())
      return cmd_identity_check(c, idc_x, idc_y, idc_l, idc_r, idc_points,
                                idc_rational);
    if (red->parsed()) return cmd_reduce(c, red_in);
    if (wit->parsed()) return cmd_witness(c, wit_x, wit_y, wit_l);
    if (bnd->parsed())
      return cmd_bound(c, bnd_mode, bnd_in, bnd_L, bnd_mu, bnd_delta,
                       bnd_calib);
    if (rec->parsed()) return cmd_reconstruct(c, rec_traces, rec_n, rec_d);
    if (exp->parsed())
      return cmd_experiment(c, exp_n, exp_d, exp_target, exp_trials, exp_tmax);
    if (cal->parsed())
      return run_calibrate(cal_out, resolve_seed(c, true), c.q);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
