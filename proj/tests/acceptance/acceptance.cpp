// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any fails. Optional arguments select criteria by number.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "../generators.hpp"
#include "glider/bench.hpp"
#include "glider/error.hpp"
#include "glider/io.hpp"

using namespace glider;

namespace {

const std::filesystem::path kData = GLIDER_DATA_DIR;

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Protocol constants from the loaded bundled scenario and model.
Verdict protocol() {
  const auto loaded = load_scenario(kData / "scenarios" / "ocean.json");
  const auto& s = loaded.scenario;
  const Scenario defaults;
  const auto model = load_model(kData / "models" / "default.json");
  const double v_star = model.max_horizontal_speed();
  const bool ok = s.dt == 5.0 && s.steps == 125 && s.tol == 5.0 && s.k_neighbors == 27 && defaults.dt == 5.0 &&
                  defaults.steps == 125 && defaults.tol == 5.0 && defaults.k_neighbors == 27 &&
                  std::abs(v_star - 0.9) <= 0.05 && std::abs(loaded.model->max_horizontal_speed() - 0.9) <= 0.05;
  return {ok, "dt=" + format_number(s.dt) + " s, steps=" + std::to_string(s.steps) + ", tol=" + format_number(s.tol) +
                  " m, k=" + std::to_string(s.k_neighbors) + ", V*=" + fmt("%.4f", v_star) + " m/s, nodes=" +
                  std::to_string(sample_positions(s).size())};
}

// Every line-circle candidate lies on the control plane and on the surface.
Verdict plane_membership() {
  const char* names[] = {"gyre", "gyre_grid", "ocean"};
  const auto model = GliderModel::default_model();
  gen::Rng rng(2001);
  std::size_t draws = 0, candidates = 0, bad_plane = 0, bad_norm = 0;
  double worst_plane = 0.0, worst_norm = 0.0;
  for (const char* name : names) {
    const auto field = load_field(kData / "fields" / (std::string(name) + ".json"));
    std::size_t local = 0;
    while (local < 3334 && draws < 10000) {
      auto [a, b] = gen::pair(rng, 20.0, 300.0);
      const auto plane = control_plane(averaged_layer(field, a.z, b.z), a, b);
      if (!feasible(plane, model)) continue;
      const int sign = b.z > a.z ? 1 : -1;
      const auto range = feasible_gamma_range(plane, model, sign);
      if (!range) continue;
      const double gamma = sign * rng.uniform(range->lo, range->hi);
      const auto cands = intersect_at(plane, model, gamma);
      ++local;
      ++draws;
      const double speed = model.glider_speed(gamma);
      for (const auto& c : cands) {
        ++candidates;
        const auto& v = c.control;
        const double scale = std::abs(plane.a * v.u) + std::abs(plane.b * v.v) + std::abs(plane.c);
        const double res = std::abs(plane.residual(v.u, v.v)) / scale;
        const double norm = std::abs(v.u * v.u + v.v * v.v + v.w * v.w - speed * speed) / (speed * speed);
        worst_plane = std::max(worst_plane, res);
        worst_norm = std::max(worst_norm, norm);
        bad_plane += res > 1e-9;
        bad_norm += norm > 1e-12;
      }
    }
  }
  return {draws == 10000 && candidates >= draws && bad_plane == 0 && bad_norm == 0,
          std::to_string(draws) + " draws, " + std::to_string(candidates) + " candidates, worst plane residual " +
              fmt("%.2e", worst_plane) + " (scaled), worst norm error " + fmt("%.2e", worst_norm)};
}

// Baseline successes satisfy the streamline constraint up to the tolerance
// sphere; gate failures are never solved by brute force.
Verdict oracle_equivalence() {
  const auto field = load_field(kData / "fields" / "vortex.json");
  const auto model = GliderModel::default_model();
  SteerParams params;
  params.n_controls = 400;
  const double v_star = model.max_horizontal_speed();
  const double eps = params.tol * (v_star + field.speed_bound());

  gen::Rng rng(3001);
  std::size_t successes = 0, violations = 0, tries = 0;
  double worst = 0.0;
  while (successes < 500 && tries < 200000) {
    ++tries;
    auto [a, b] = gen::pair(rng, 30.0, 200.0);
    const auto r = steer_baseline(field, model, a, b, params);
    if (!r) continue;
    ++successes;
    const double psi = averaged_layer(field, a.z, b.z).stream_value(a.horizontal(), b.horizontal()) +
                       control_stream_value(a, b, r->control);
    worst = std::max(worst, std::abs(psi) / eps);
    violations += std::abs(psi) > eps;
  }

  // A hit inside the tolerance sphere only implies |C + A u + B v| <= eps,
  // hence V_min <= V* + eps / N. Gated pairs inside that band can be solved.
  std::size_t gated = 0, solved = 0, solved_in_band = 0;
  double worst_ratio = 0.0;
  while (gated < 200) {
    auto [a, b] = gen::pair(rng, 30.0, 300.0);
    const auto plane = control_plane(averaged_layer(field, a.z, b.z), a, b);
    if (feasible(plane, model)) continue;
    ++gated;
    if (!steer_baseline(field, model, a, b, params)) continue;
    ++solved;
    const double v_min = lowest_plane_speed(plane);
    worst_ratio = std::max(worst_ratio, v_min / v_star);
    solved_in_band += v_min <= v_star + eps / plane.normal_length();
  }
  std::string detail = std::to_string(successes) + " baseline successes, max |psi_c + psi_G| / eps = " +
                       fmt("%.3f", worst) + " (eps " + fmt("%.2f", eps) + " m^2/s); " + std::to_string(gated) +
                       " gated pairs, " + std::to_string(solved) + " solved by 400-sample baseline";
  if (solved > 0)
    detail += " (max V_min/V* " + fmt("%.4f", worst_ratio) + ", " + std::to_string(solved_in_band) +
              " inside the tolerance band V* + eps/N)";
  return {successes == 500 && violations == 0 && solved == 0, detail};
}

// Still water: the steered glide matches the straight-line closed form.
Verdict zero_flow() {
  const auto field = load_field(kData / "fields" / "zero.json");
  const auto model = GliderModel::default_model();
  const SteerParams params;
  gen::Rng rng(4001);
  std::size_t pairs = 0, time_bad = 0, line_bad = 0, unsolved = 0, below_optimum = 0;
  double worst_time = 0.0, worst_line = 0.0;
  // With a tolerance sphere a glide at gamma != gamma_sol also arrives when
  // L sin|gamma - gamma_sol| <= tol, at closest-approach time
  // L cos(gamma - gamma_sol) / V(gamma). The fastest such glide bounds every
  // steered time from below.
  const auto tolerance_optimum = [&](double length, double g_sol) {
    const double sign = g_sol > 0 ? 1.0 : -1.0;
    const double spread = std::asin(std::min(1.0, params.tol / length));
    double best = std::numeric_limits<double>::infinity();
    for (int k = 0; k <= 20000; ++k) {
      const double g = std::abs(g_sol) - spread + 2.0 * spread * k / 20000.0;
      if (g < model.gamma_min() || g > model.gamma_max()) continue;
      best = std::min(best, length * std::cos(g - std::abs(g_sol)) / model.glider_speed(sign * g));
    }
    return best;
  };
  while (pairs < 100) {
    const Position3 a = gen::point3(rng, 400.0, -280.0, -20.0);
    const double slope = rng.uniform(16.0, 44.0) * std::numbers::pi / 180.0;
    const double h = rng.uniform(40.0, 250.0);
    const double dir = gen::heading(rng);
    const double dz = (rng.coin() ? 1.0 : -1.0) * h * std::tan(slope);
    const Position3 b{a.x + h * std::cos(dir), a.y + h * std::sin(dir), a.z + dz};
    if (b.z > 0.0 || b.z < -300.0) continue;
    ++pairs;
    const double exact = distance(a, b) / model.glider_speed(dz > 0 ? slope : -slope);
    const auto r = steer(field, model, a, b, params);
    if (!r) {
      ++unsolved;
      continue;
    }
    below_optimum += r->travel_time < tolerance_optimum(distance(a, b), dz > 0 ? slope : -slope) * (1 - 1e-6);
    const double rel = std::abs(r->travel_time - exact) / exact;
    worst_time = std::max(worst_time, rel);
    time_bad += rel > 0.02;
    const Position3 d = b - a;
    const double len = norm(d);
    for (const auto& s : r->trajectory.samples) {
      if (s.t > r->travel_time) break;
      const Position3 q = s.p - a;
      const double along = (q.x * d.x + q.y * d.y + q.z * d.z) / len;
      const double off = std::sqrt(std::max(0.0, q.x * q.x + q.y * q.y + q.z * q.z - along * along));
      worst_line = std::max(worst_line, off);
      line_bad += off > params.tol;
    }
  }
  return {unsolved == 0 && time_bad == 0 && line_bad == 0,
          std::to_string(pairs) + " pairs, " + std::to_string(unsolved) + " unsolved, worst time error " +
              fmt("%.3f", 100.0 * worst_time) + "% (" + std::to_string(time_bad) + " over 2%), worst off-line distance " +
              fmt("%.3f", worst_line) + " m, " + std::to_string(below_optimum) + " faster than the tolerance-sphere optimum"};
}

struct SweepRun {
  std::vector<MetricsRow> rows;
  std::vector<std::string> errors;
  double seconds = 0.0;
};

SweepRun run_bundled_sweep(int workers) {
  const auto spec = load_sweep(kData / "sweeps" / "control_sweep_small.json");
  const auto scenario = load_scenario(spec.scenario);
  SweepRun run;
  const auto t0 = std::chrono::steady_clock::now();
  run.rows = run_sweep(spec, scenario, workers, {}, [&](const std::string& e) { run.errors.push_back(e); });
  run.seconds = seconds_since(t0);
  return run;
}

// Streamline steering connects more edges and finds faster paths than the
// brute-force baseline.
Verdict method_comparison(const SweepRun& run) {
  std::map<std::pair<SteeringMethod, std::size_t>, std::vector<const MetricsRow*>> cells;
  for (const auto& r : run.rows) cells[{r.method, r.n_controls}].push_back(&r);
  const auto summary = summarise(run.rows);
  const auto find = [&](SteeringMethod m, std::size_t n) -> const SummaryRow* {
    for (const auto& s : summary)
      if (s.method == m && s.n_controls == n) return &s;
    return nullptr;
  };

  bool a_ok = run.errors.empty(), b_ok = false, c_ok = false;
  std::string detail = "edges";
  for (const std::size_t n : {16, 54, 100}) {
    const auto* s = find(SteeringMethod::streamline, n);
    const auto* b = find(SteeringMethod::baseline, n);
    if (!s || !b) {
      a_ok = false;
      continue;
    }
    a_ok = a_ok && s->edges_mean >= 3.0 * b->edges_mean;
    detail += " " + std::to_string(n) + ":" + fmt("%.0f", s->edges_mean) + "/" + fmt("%.0f", b->edges_mean);
  }
  if (const auto *s = find(SteeringMethod::streamline, 16), *b = find(SteeringMethod::baseline, 16); s && b) {
    b_ok = s->solved == s->runs && b->solved == 0;
    detail += "; solved@16 " + std::to_string(s->solved) + "/" + std::to_string(s->runs) + " vs " +
              std::to_string(b->solved) + "/" + std::to_string(b->runs);
  }
  if (const auto *s = find(SteeringMethod::streamline, 54), *b = find(SteeringMethod::baseline, 54); s && b) {
    // A method that never reaches the goal has an infinite travel time.
    const double inf = std::numeric_limits<double>::infinity();
    const double ts = s->solved > 0 ? s->time_mean : inf;
    const double tb = b->solved > 0 ? b->time_mean : inf;
    c_ok = ts < tb;
    const auto shown = [](double t) { return std::isinf(t) ? std::string("no solution") : fmt("%.1f s", t); };
    detail += "; time@54 " + shown(ts) + " vs " + shown(tb) + " (solved " +
              std::to_string(s->solved) + "/" + std::to_string(b->solved) + ")";
  }
  detail += "; a=" + std::string(a_ok ? "ok" : "no") + " b=" + (b_ok ? "ok" : "no") + " c=" + (c_ok ? "ok" : "no") +
            "; " + fmt("%.0f", run.seconds) + " s";
  return {a_ok && b_ok && c_ok, detail};
}

// Line density versus the squared speed margin near tangency.
Verdict density_law() {
  const auto model = GliderModel::default_model();
  const double v_star = model.max_horizontal_speed();
  std::vector<double> xs, ys;
  for (int i = 0; i <= 12; ++i) {
    const double margin = v_star * v_star * std::pow(10.0, -4.0 + 3.0 * i / 12.0);
    const double v_min = std::sqrt(v_star * v_star - margin);
    ControlPlane plane;
    plane.b = -100.0;
    plane.c = 100.0 * v_min;
    const auto r = density_report(model, plane, -1, 54);
    if (!r.rho_line) return {false, "no control line at margin " + fmt("%.2e", margin)};
    xs.push_back(std::log(margin));
    ys.push_back(std::log(*r.rho_line));
  }
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return {std::abs(slope + 0.5) <= 0.1, "log-log slope " + fmt("%.4f", slope) + " over V*^2 - V_min^2 in [1e-4, 1e-1] V*^2"};
}

Verdict determinism(const SweepRun& first) {
  const auto second = run_bundled_sweep(2);
  const bool same = metrics_csv(first.rows) == metrics_csv(second.rows);
  return {same && !first.rows.empty() && second.errors.empty(),
          std::string(same ? "identical" : "DIFFERENT") + " metrics.csv for workers 1 and 2 (" +
              std::to_string(second.rows.size()) + " rows, " + fmt("%.0f", second.seconds) + " s)"};
}

Verdict integrator() {
  const auto field = load_field(kData / "fields" / "vortex.json");
  const auto model = GliderModel::default_model();
  gen::Rng rng(8001);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const Position3 p0{rng.uniform(-300, 300), rng.uniform(-300, 300), rng.uniform(-250, -50)};
    const ControlVector c = model.control_vector(gen::gamma(rng, model), gen::heading(rng));
    const auto coarse = integrate(field, p0, c, 5.0, 125);
    const auto fine = integrate(field, p0, c, 0.1, 6250);
    worst = std::max(worst, distance(coarse.samples.back().p, fine.samples.back().p));
  }
  return {worst < 0.1, "50 controls, worst RK4 dt=5 vs dt=0.1 gap " + fmt("%.2e", worst) + " m"};
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  const auto wanted = [&](int n) { return only.empty() || only.count(n) > 0; };

  int failures = 0;
  const auto report = [&](int n, const char* name, const std::function<Verdict()>& check) {
    if (!wanted(n)) return;
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v = {false, std::string("error: ") + e.what()};
    }
    failures += !v.pass;
    std::printf("%s %d %s: %s [%.1f s]\n", v.pass ? "PASS" : "FAIL", n, name, v.detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
  };

  report(1, "protocol defaults", protocol);
  report(2, "plane membership", plane_membership);
  report(3, "oracle equivalence", oracle_equivalence);
  report(4, "zero-flow exactness", zero_flow);
  SweepRun sweep;
  if (wanted(5) || wanted(7)) sweep = run_bundled_sweep(1);
  report(5, "streamline vs baseline sweep", [&] { return method_comparison(sweep); });
  report(6, "density law", density_law);
  report(7, "determinism", [&] { return determinism(sweep); });
  report(8, "integrator convergence", integrator);
  return failures == 0 ? 0 : 1;
}
