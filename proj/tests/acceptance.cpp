// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any fails.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "bell/experiment.hpp"
#include "bell/inequality.hpp"
#include "bell/lhv_models.hpp"
#include "bell/oracle.hpp"
#include "bell/quantum_core.hpp"
#include "bell/serialize.hpp"

using namespace bell;

namespace {

struct Check {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail << " [failed: " << what << "]";
    }
  }
};

struct Shell {
  int code = -1;
  std::string out;
};

Shell bellsim(const std::string& args) {
  const std::string command = std::string(BELLSIM_PATH) + " " + args;
  Shell r;
  FILE* pipe = popen(command.c_str(), "r");
  if (!pipe) return r;
  char buffer[4096];
  std::size_t n = 0;
  while ((n = fread(buffer, 1, sizeof buffer, pipe)) > 0) r.out.append(buffer, n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

ExperimentConfig config(const std::string& source, std::vector<double> left, std::vector<double> right,
                        std::uint64_t trials) {
  ExperimentConfig c;
  c.source = source;
  c.left_angles = std::move(left);
  c.right_angles = std::move(right);
  c.trials_per_setting = trials;
  return c;
}

class LeakySource final : public PairSource {
public:
  std::string name() const override { return "leaky"; }
  OutcomePair draw(MeasurementDirection, MeasurementDirection right, Rng& rng) const override {
    const Outcome l = rng.uniform01() < 0.5 * (1.0 + 0.2 * std::cos(right.radians())) ? Outcome::plus : Outcome::minus;
    return {l, negate(l)};
  }
};

void quantum_law(Check& r) {
  std::mt19937_64 gen(20240601);
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double a = angle(gen), b = angle(gen);
    worst = std::max(worst, std::abs(correlation_qm(MeasurementDirection(a), MeasurementDirection(b)) + std::cos(a - b)));
  }
  r.detail << "max |C + cos| = " << worst << " over 1000 pairs";
  r.require(worst <= 1e-12, "deviation above 1e-12");
}

void antialignment(Check& r) {
  const RunRecord rec = run_experiment(config("quantum", {0}, {60, 120}, 100000));
  const double f60 = empirical_antialignment(rec, 0, 60).fraction;
  const double f120 = empirical_antialignment(rec, 0, 120).fraction;
  const double s60 = 3 * std::sqrt(0.75 * 0.25 / 1e5);
  r.detail << "f(60) = " << f60 << ", f(120) = " << f120 << " (3 sigma = " << s60 << ")";
  r.require(std::abs(f60 - 0.75) <= s60 && std::abs(f60 - 0.75) <= 0.013, "60 degrees");
  r.require(std::abs(f120 - 0.25) <= s60 && std::abs(f120 - 0.25) <= 0.013, "120 degrees");
}

void violation_witness(Check& r) {
  const RunRecord rec = run_experiment(config("quantum", {0, 60}, {60, 120}, 100000));
  const CorrelationEstimate a = empirical_correlation(rec, 0, 60);
  const CorrelationEstimate b = empirical_correlation(rec, 0, 120);
  const CorrelationEstimate d = empirical_correlation(rec, 60, 120);
  const BellEvaluation e = assemble_evaluation(deg_to_rad(60), deg_to_rad(120), {a.estimate, a.std_error},
                                               {b.estimate, b.std_error}, {d.estimate, d.std_error});
  const double sigma = (e.error_bar - kNumericalTolerance) / kViolationSigmas;
  r.detail << "lhs = " << e.lhs << " +- " << sigma << " (" << to_string(e.verdict) << ")";
  r.require(std::abs(e.lhs - 1.5) <= 3 * sigma, "not within 3 sigma of 1.5");
  r.require(e.lhs > 1.0 && e.verdict == Verdict::violated, "bound not exceeded");
}

void local_bound(Check& r) {
  const std::vector<double> angles{0.0, deg_to_rad(60), deg_to_rad(120)};
  const Certification c = max_bell_lhs(angles);
  const TripleGridReport g = certify_triple_grid(deg_to_rad(15));
  r.detail << "max over " << c.strategies.size() << " strategies = " << c.max_lhs.str() << "; 15 degree grid: "
           << g.triples << " triples, max " << g.overall_max.str();
  r.require(c.strategies.size() == 8 && c.max_lhs == Rational(1), "standard angles");
  r.require(g.triples == 2024 && g.strategies_checked == 2024 * 8 && g.overall_max <= Rational(1), "grid");
}

void local_satisfaction(Check& r) {
  const auto model = vector_model();
  double worst = 0.0;
  for (int k = 0; k <= 36; ++k) {
    const double gap = deg_to_rad(10.0 * k);
    const double q = lhv_correlation_quadrature(*model, MeasurementDirection(0.0), MeasurementDirection(gap), 1000000);
    worst = std::max(worst, std::abs(q - (-1.0 + 2.0 * std::min(gap, kTwoPi - gap) / std::numbers::pi)));
  }
  const ScanResult quad = violation_scan(quadrature_correlator(model, 360000), deg_to_rad(1));
  const ScanResult law = violation_scan(linear_law_correlator(), deg_to_rad(1));
  r.detail << "max quadrature error = " << worst << "; scan max lhs " << format_number(quad.best().lhs)
           << " (quadrature), " << format_number(law.best().lhs) << " (linear law)";
  r.require(worst <= 1e-5, "quadrature vs linear law");
  r.require(quad.best().lhs <= 1.0 + 1e-9 && quad.violations() == 0, "quadrature scan");
  r.require(law.best().lhs <= 1.0 + 1e-9 && law.violations() == 0, "linear-law scan");
}

void no_signaling(Check& r) {
  const ExperimentConfig c = config("quantum", {0}, {0, 60, 120}, 100000);
  const NoSignalingReport q = nosignaling_check(run_experiment(c), 0);
  ExperimentConfig v = c;
  v.source = "vector";
  const NoSignalingReport lv = nosignaling_check(run_experiment(v), 0);
  ExperimentConfig l = c;
  l.source = "leaky";
  const NoSignalingReport leak = nosignaling_check(run_experiment(l, LeakySource()), 0);
  r.detail << "p = " << q.p_value << " (quantum), " << lv.p_value << " (vector), " << leak.p_value << " (leaky)";
  r.require(q.passed, "quantum");
  r.require(lv.passed, "vector");
  r.require(!leak.passed, "leaky fixture passed");
}

void reproducibility(Check& r) {
  const std::string args = "experiment --left 0,30 --right 60,120 --trials 20000 --format json";
  const Shell a = bellsim(args), b = bellsim(args);
  r.detail << a.out.size() << " bytes";
  r.require(a.code == 0 && b.code == 0, "non-zero exit");
  r.require(!a.out.empty() && a.out == b.out, "outputs differ");
  try {
    r.require(Json::parse(a.out).contains("settings"), "not a run record");
  } catch (const std::exception&) {
    r.require(false, "invalid JSON");
  }
}

void table_protocol(Check& r) {
  const Shell s = bellsim("table --format json");
  r.require(s.code == 0, "non-zero exit");
  Json j;
  try {
    j = Json::parse(s.out);
  } catch (const std::exception&) {
    r.require(false, "invalid JSON");
    return;
  }
  // the data the table should have been built from
  const RunRecord rec = run_experiment(config("quantum", {0}, {60, 120}, 10));

  const auto& rows = j.at("rows");
  r.require(rows.size() == 3 && j.at("columns") == 10, "shape");
  std::set<std::tuple<std::size_t, std::size_t, std::string>> used;
  std::size_t measured = 0, inferred = 0;
  for (const auto& row : rows) {
    r.require(row.at("left").size() == 10 && row.at("right").size() == 10, "row width");
    for (std::size_t c = 0; c < 10; ++c) {
      const auto& l = row.at("left")[c];
      const auto& rt = row.at("right")[c];
      r.require(l.at("outcome").get<int>() == -rt.at("outcome").get<int>(), "equal-angle cells not negations");
      r.require(l.at("kind") != rt.at("kind"), "row side kinds");
      for (const auto* cell : {&l, &rt}) {
        if (cell->at("kind") == "inferred") {
          ++inferred;
          continue;
        }
        ++measured;
        const std::string side = cell == &l ? "left" : "right";
        const std::size_t setting = cell->at("pair").at("setting_pair"), trial = cell->at("pair").at("trial");
        r.require(used.insert({setting, trial, side}).second, "pair side used twice");
        const OutcomePair& p = rec.settings.at(setting).outcomes.at(trial);
        r.require(value(side == "left" ? p.left : p.right) == cell->at("outcome").get<int>(),
                  "measured cell differs from the run");
      }
    }
  }
  r.require(measured == 30 && inferred == 30, "measured/inferred counts");
  r.detail << "3 x 10 table, " << measured << " measured cells from " << used.size() << " pair sides, " << inferred
           << " inferred";
}

struct Criterion {
  int number;
  const char* name;
  double limit_s;  ///< 0 means no runtime bound
  std::function<void(Check&)> check;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "quantum correlation law", 1, quantum_law},
      {2, "anti-alignment statistics", 5, antialignment},
      {3, "Bell violation witness", 10, violation_witness},
      {4, "local bound certification", 5, local_bound},
      {5, "local model satisfies the bound", 10, local_satisfaction},
      {6, "no-signaling", 10, no_signaling},
      {7, "reproducibility", 0, reproducibility},
      {8, "table protocol", 0, table_protocol},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    Check r;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.check(r);
    } catch (const std::exception& e) {
      r.require(false, std::string("exception: ") + e.what());
    }
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.limit_s > 0) r.require(elapsed < c.limit_s, "over time limit");
    failures += r.ok ? 0 : 1;
    std::printf("%s %d %s: %s (%.2f s)\n", r.ok ? "PASS" : "FAIL", c.number, c.name, r.detail.str().c_str(), elapsed);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
