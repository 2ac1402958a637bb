// Copyright 2026 the cwsc authors.
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

#include "cwsc/experiments.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "cwsc/definetti.hpp"
#include "cwsc/ensemble.hpp"
#include "cwsc/errors.hpp"
#include "cwsc/rng.hpp"
#include "cwsc/scalar_math.hpp"
#include "cwsc/verification.hpp"

namespace fs = std::filesystem;

namespace cwsc {

namespace {

struct KindInfo {
  ExperimentKind kind;
  const char* name;
  const char* description;
};

constexpr KindInfo kKinds[] = {
    {ExperimentKind::kMagnetization, "magnetization",
     "solve tanh(beta*m)=m and report residuals"},
    {ExperimentKind::kMeasure, "measure",
     "normalize nu_N, check symmetry/normalization and rate-function "
     "properties"},
    {ExperimentKind::kSpectrumLadder, "spectrum-ladder",
     "sample ensembles along an N ladder; KS distances and bulk moments"},
    {ExperimentKind::kLemmaA5, "lemma-a5",
     "concentration functionals of nu_N: central mass decay, moment scaling, "
     "mixed-moment limit"},
    {ExperimentKind::kLaplaceZ, "laplace-z",
     "normalization constant versus its peak approximation along a ladder"},
    {ExperimentKind::kLargeDeviation, "large-deviation",
     "exact binomial tails versus e^{-q_a n^2} bounds"},
    {ExperimentKind::kMomentsX, "moments-x",
     "Monte Carlo pair moment of the raw sign matrix versus m^2"},
    {ExperimentKind::kMomentsY, "moments-y",
     "Monte Carlo moment conditions for the recentred matrix Y"},
    {ExperimentKind::kDefinettiIdentity, "definetti-identity",
     "brute-force spin expectations versus mixing-measure quadrature"},
    {ExperimentKind::kInterlacing, "interlacing",
     "rank-1 identity and eigenvalue interlacing defects on sampled pairs"},
};

class OutputTracker {
 public:
  explicit OutputTracker(fs::path dir) : dir_(std::move(dir)) {}

  std::ofstream open(const std::string& name) {
    fs::path path = dir_ / name;
    std::ofstream os(path, std::ios::binary);
    if (!os) throw UsageError("cannot open output file " + path.string());
    files_.push_back(name);
    return os;
  }

  void discard_all() {
    for (const std::string& name : files_) {
      std::error_code ec;
      fs::remove(dir_ / name, ec);
    }
    files_.clear();
  }

  const std::vector<std::string>& files() const { return files_; }
  const fs::path& dir() const { return dir_; }

 private:
  fs::path dir_;
  std::vector<std::string> files_;
};

std::vector<std::int64_t> ladder_or(const ExperimentConfig& c,
                                    std::vector<std::int64_t> fallback) {
  return c.n_ladder.empty() ? fallback : c.n_ladder;
}

std::vector<int> ells_or(const ExperimentConfig& c, std::vector<int> fallback) {
  return c.ell.empty() ? fallback : c.ell;
}

std::int64_t replicas_or(const ExperimentConfig& c, std::int64_t fallback) {
  return c.replicas > 0 ? c.replicas : fallback;
}

void add_check(std::vector<std::string>* lines, bool* all_passed, bool pass,
               const std::string& text) {
  lines->push_back(std::string(pass ? "PASS " : "FAIL ") + text);
  *all_passed &= pass;
}

// ---------------------------------------------------------------- kinds --

bool run_magnetization(const ExperimentConfig& config, OutputTracker& out,
                       std::vector<std::string>* lines) {
  bool all = true;
  const std::vector<double> betas =
      config.beta_list.empty() ? std::vector<double>{1.1, 1.5, 2.0, 5.0}
                               : config.beta_list;
  std::ofstream csv = out.open("magnetization.csv");
  csv << "beta,m,residual,pass\n";
  for (double beta : betas) {
    const Magnetization mag = solve_magnetization(beta);
    const bool pass = mag.residual <= 1e-12;
    csv << format_real(beta) << ',' << format_real(mag.m) << ','
        << format_real(mag.residual) << ',' << (pass ? "true" : "false")
        << '\n';
    add_check(lines, &all, pass,
              "magnetization residual <= 1e-12 at beta=" + format_real(beta) +
                  " (residual " + format_real(mag.residual) + ")");
  }
  return all;
}

bool run_measure(const ExperimentConfig& config, OutputTracker& out,
                 std::vector<std::string>* lines) {
  bool all = true;
  const std::int64_t n = ladder_or(config, {8}).front();
  const ModelParams params(config.beta, config.alpha, n);
  const DeFinettiMeasure measure(params);
  const double m = measure.m();

  std::ofstream csv = out.open("measure_checks.csv");
  csv << "check,value,target,pass\n";
  const auto row = [&csv, lines, &all](const std::string& name, double value,
                                       double target, bool pass) {
    csv << name << ',' << format_real(value) << ',' << format_real(target)
        << ',' << (pass ? "true" : "false") << '\n';
    add_check(lines, &all, pass, name + " (value " + format_real(value) + ")");
  };

  const double total = measure.interval_mass(-1.0, 1.0);
  row("reintegration_total_mass", total, 1.0, std::abs(total - 1.0) <= 1e-9);
  const double right = measure.interval_mass(0.0, 1.0);
  row("right_half_mass", right, 0.5, std::abs(right - 0.5) <= 1e-9);
  const double left = measure.interval_mass(-1.0, 0.0);
  row("left_half_mass", left, 0.5, std::abs(left - 0.5) <= 1e-9);

  double max_density_asym = 0.0;
  double max_f_asym = 0.0;
  bool envelope_ok = true;
  bool sign_pattern_ok = true;
  const int grid_points = 1000;
  for (int k = 0; k <= grid_points; ++k) {
    const double t =
        -(1.0 - 1e-6) + (2.0 - 2e-6) * static_cast<double>(k) / grid_points;
    const double d1 = measure.density(t);
    const double d2 = measure.density(-t);
    const double scale = std::max({std::abs(d1), std::abs(d2), 1e-300});
    max_density_asym = std::max(max_density_asym, std::abs(d1 - d2) / scale);
    const double f1 = f_beta(t, config.beta);
    const double f2 = f_beta(-t, config.beta);
    const double fscale = std::max({std::abs(f1), std::abs(f2), 1e-300});
    max_f_asym = std::max(max_f_asym, std::abs(f1 - f2) / fscale);
    if (std::exp(-0.5 * f1) > envelope_bound(t, config.beta) * (1.0 + 1e-12)) {
      envelope_ok = false;
    }
  }
  for (int k = 1; k < 500; ++k) {
    const double inner = m * static_cast<double>(k) / 500.0;
    if (inner > 0.0 && inner < m && f_beta_d1(inner, config.beta) >= 0.0) {
      sign_pattern_ok = false;
    }
    const double outer = m + (1.0 - 1e-9 - m) * static_cast<double>(k) / 500.0;
    if (outer > m && outer < 1.0 && f_beta_d1(outer, config.beta) <= 0.0) {
      sign_pattern_ok = false;
    }
  }
  row("density_symmetry_max_rel", max_density_asym, 1e-12,
      max_density_asym <= 1e-12);
  row("f_beta_evenness_max_rel", max_f_asym, 1e-12, max_f_asym <= 1e-12);
  row("f_beta_envelope_grid", envelope_ok ? 1.0 : 0.0, 1.0, envelope_ok);
  row("f_beta_d1_sign_pattern", sign_pattern_ok ? 1.0 : 0.0, 1.0,
      sign_pattern_ok);
  const double f2m = f_beta_d2(m, config.beta);
  row("f_beta_d2_at_m_positive", f2m, 0.0, f2m > 0.0);

  bool monotone = true;
  for (std::size_t i = 1; i < measure.cdf().size(); ++i) {
    monotone &= measure.cdf()[i] > measure.cdf()[i - 1];
  }
  row("cdf_strictly_increasing", monotone ? 1.0 : 0.0, 1.0, monotone);

  std::ofstream cache = out.open("measure.json");
  cache << measure.to_json().dump(2) << '\n';
  return all;
}

bool run_spectrum_ladder(const ExperimentConfig& config, OutputTracker& out,
                         std::vector<std::string>* lines) {
  bool all = true;
  const std::vector<std::int64_t> ladder =
      ladder_or(config, {100, 200, 400, 800});
  const std::int64_t replicas = replicas_or(config, 10);

  std::ofstream csv = out.open("spectrum_ladder.csv");
  csv << "n,replica,t,ks_a,levy_a,moment2_y,moment4_y\n";

  std::vector<double> mean_ks(ladder.size(), 0.0);
  std::vector<double> mean_m2(ladder.size(), 0.0);
  std::vector<double> mean_m4(ladder.size(), 0.0);
  std::vector<Spectrum> top_spectra;
  std::vector<std::int64_t> top_ids;

  for (std::size_t li = 0; li < ladder.size(); ++li) {
    const std::int64_t n = ladder[li];
    const ModelParams params(config.beta, config.alpha, n);
    const DeFinettiMeasure measure(params);
    const double m = measure.m();

    struct Row {
      double t, ks, levy, m2, m4;
      Spectrum spec_a;
    };
    std::vector<Row> rows(static_cast<std::size_t>(replicas));
    parallel_replicas(replicas, config.jobs, [&](std::int64_t r) {
      RngStream rng = RngStream::for_replica(
          config.base_seed, static_cast<std::uint64_t>(li) * 100000 + r);
      const SpinMatrix x = sample_ensemble(measure, rng);
      const DerivedMatrix a = build_a(x, m);
      const DerivedMatrix y = build_y(x, m);
      Spectrum spec_a = eigenvalues(a.to_dense(), "A n=" + std::to_string(n));
      Spectrum spec_b = eigenvalues(
          y.to_dense(1.0 / std::sqrt(static_cast<double>(n))),
          "Y/sqrt(n) n=" + std::to_string(n));
      const Esd esd_a(spec_a);
      const Esd esd_b(spec_b);
      rows[r] = Row{x.t(), ks_distance_semicircle(esd_a),
                    levy_distance_semicircle(esd_a), esd_b.moment(2),
                    esd_b.moment(4), std::move(spec_a)};
    });

    for (std::int64_t r = 0; r < replicas; ++r) {
      const Row& row = rows[r];
      csv << n << ',' << r << ',' << format_real(row.t) << ','
          << format_real(row.ks) << ',' << format_real(row.levy) << ','
          << format_real(row.m2) << ',' << format_real(row.m4) << '\n';
      mean_ks[li] += row.ks;
      mean_m2[li] += row.m2;
      mean_m4[li] += row.m4;
    }
    mean_ks[li] /= static_cast<double>(replicas);
    mean_m2[li] /= static_cast<double>(replicas);
    mean_m4[li] /= static_cast<double>(replicas);
    if (li + 1 == ladder.size()) {
      for (std::int64_t r = 0; r < replicas; ++r) {
        top_spectra.push_back(rows[r].spec_a);
        top_ids.push_back(r);
      }
    }
  }

  std::ofstream summary_csv = out.open("spectrum_ladder_summary.csv");
  summary_csv << "n,mean_ks_a,mean_moment2_y,mean_moment4_y\n";
  for (std::size_t li = 0; li < ladder.size(); ++li) {
    summary_csv << ladder[li] << ',' << format_real(mean_ks[li]) << ','
                << format_real(mean_m2[li]) << ',' << format_real(mean_m4[li])
                << '\n';
  }

  bool nonincreasing = true;
  for (std::size_t li = 1; li < ladder.size(); ++li) {
    nonincreasing &= mean_ks[li] <= mean_ks[li - 1];
  }
  add_check(lines, &all, nonincreasing,
            "mean KS distance nonincreasing along the N ladder");
  add_check(lines, &all, mean_ks.back() < 0.05,
            "mean KS distance < 0.05 at N=" + std::to_string(ladder.back()) +
                " (got " + format_real(mean_ks.back()) + ")");
  add_check(lines, &all, std::abs(mean_m2.back() - 1.0) <= 0.1,
            "bulk moment 2 within 10% of 1 at top N (got " +
                format_real(mean_m2.back()) + ")");
  add_check(lines, &all, std::abs(mean_m4.back() - 2.0) <= 0.2,
            "bulk moment 4 within 10% of 2 at top N (got " +
                format_real(mean_m4.back()) + ")");

  std::ofstream hist = out.open("histogram.csv");
  emit_histogram(hist, top_spectra, config.bins);
  std::ofstream spectra_csv = out.open("spectra_top.csv");
  write_spectra_csv(spectra_csv, top_spectra, top_ids);
  return all;
}

bool run_lemma_a5(const ExperimentConfig& config, OutputTracker& out,
                  std::vector<std::string>* lines) {
  bool all = true;
  const double beta = config.beta;
  std::ofstream csv = out.open("lemma_a5.csv");
  csv << "part,alpha,n,ell,value,reference\n";

  // Part a: central mass decay at alpha=1.
  {
    const double m = solve_magnetization(beta).m;
    const double delta =
        0.5 * (f_beta(0.5 * m, beta) - f_beta(m, beta));
    const std::vector<std::int64_t> ns = {20, 40, 80};
    std::vector<double> xs, ys;
    for (std::int64_t n : ns) {
      const DeFinettiMeasure measure(ModelParams(beta, 1.0, n));
      const double mass = measure.central_mass();
      csv << "a,1," << n << ",," << format_real(mass) << ','
          << format_real(delta) << '\n';
      xs.push_back(static_cast<double>(n));
      ys.push_back(std::log(mass));
    }
    const double slope = least_squares_slope(xs.data(), ys.data(), 3);
    const bool pass = slope <= -0.5 * delta * 0.85;
    add_check(lines, &all, pass,
              "central mass ln-slope " + format_real(slope) +
                  " <= -delta/2 within 15% (delta/2 = " +
                  format_real(0.5 * delta) + ")");
  }

  // Part b: |t-m|^ell moment scaling at alpha=2.
  for (int ell : ells_or(config, {1, 2})) {
    const std::vector<std::int64_t> ns = {8, 16, 32, 64};
    std::vector<double> xs, ys;
    for (std::int64_t n : ns) {
      const DeFinettiMeasure measure(ModelParams(beta, 2.0, n));
      const double value = measure.abs_moment_right(ell);
      csv << "b,2," << n << ',' << ell << ',' << format_real(value) << ','
          << format_real(-ell) << '\n';
      xs.push_back(std::log(static_cast<double>(n)));
      ys.push_back(std::log(value));
    }
    const double slope =
        least_squares_slope(xs.data(), ys.data(), static_cast<int>(xs.size()));
    const double target = -0.5 * 2.0 * ell;  // -alpha*ell/2
    const bool pass = std::abs(slope - target) <= 0.10 * std::abs(target);
    add_check(lines, &all, pass,
              "abs moment log-log slope ell=" + std::to_string(ell) + " is " +
                  format_real(slope) + " (target " + format_real(target) +
                  " +-10%)");
  }

  // Part c: mixed-moment limit at alpha=2, N=32.
  {
    const DeFinettiMeasure measure(ModelParams(beta, 2.0, 32));
    const double m = measure.m();
    for (int ell : ells_or(config, {1, 2, 3})) {
      const double value = measure.mixed_moment_right(ell);
      const double reference = 0.5 * std::pow(1.0 - m * m, ell);
      csv << "c,2,32," << ell << ',' << format_real(value) << ','
          << format_real(reference) << '\n';
      const double rel = std::abs(value - reference) / reference;
      add_check(lines, &all, rel < 0.02,
                "mixed moment ell=" + std::to_string(ell) +
                    " relative deviation " + format_real(rel) + " < 2%");
    }
  }
  return all;
}

bool run_laplace_z(const ExperimentConfig& config, OutputTracker& out,
                   std::vector<std::string>* lines) {
  bool all = true;
  const std::vector<std::int64_t> ladder =
      ladder_or(config, config.alpha >= 2.0
                            ? std::vector<std::int64_t>{8, 16, 32}
                            : std::vector<std::int64_t>{125, 250, 500, 1000});
  std::ofstream csv = out.open("laplace_z.csv");
  csv << "n,x,z_shifted,approx,ratio\n";
  std::vector<double> ratios;
  double last_x = 0.0;
  for (std::int64_t n : ladder) {
    const ModelParams params(config.beta, config.alpha, n);
    const DeFinettiMeasure measure(params);
    const LaplaceApprox approx = laplace_z_approx(params);
    const double ratio = measure.z_shifted() / approx.value;
    csv << n << ',' << format_real(params.exponent_scale()) << ','
        << format_real(measure.z_shifted()) << ',' << format_real(approx.value)
        << ',' << format_real(ratio) << '\n';
    ratios.push_back(ratio);
    last_x = params.exponent_scale();
  }
  bool monotone = true;
  for (std::size_t i = 1; i < ratios.size(); ++i) {
    monotone &= std::abs(ratios[i] - 1.0) <= std::abs(ratios[i - 1] - 1.0);
  }
  add_check(lines, &all, monotone, "Z ratio sequence monotone toward 1");
  const bool tail_ok = last_x < 1000.0 || std::abs(ratios.back() - 1.0) < 0.01;
  add_check(lines, &all, tail_ok,
            "|Z/approx - 1| < 1% at N^alpha = " + format_real(last_x) +
                " (got " + format_real(std::abs(ratios.back() - 1.0)) + ")");
  return all;
}

bool run_large_deviation(const ExperimentConfig& config, OutputTracker& out,
                         std::vector<std::string>* lines) {
  bool all = true;
  std::vector<std::int64_t> ns = ladder_or(config, {});
  if (ns.empty()) {
    for (std::int64_t n = 4; n <= 16; ++n) ns.push_back(n);
  }
  std::vector<double> as = config.a_values;
  if (as.empty()) as = {0.3, 0.5, solve_magnetization(config.beta).m};

  std::ofstream csv = out.open("large_deviation.csv");
  csv << "n,a,exact,bound,pass\n";
  bool dominated = true;
  for (std::int64_t n : ns) {
    for (double a : as) {
      const double exact = large_deviation_exact(n, a);
      const double bound = ld_bound(n, a);
      const bool pass = exact <= bound;
      dominated &= pass;
      csv << n << ',' << format_real(a) << ',' << format_real(exact) << ','
          << format_real(bound) << ',' << (pass ? "true" : "false") << '\n';
    }
  }
  add_check(lines, &all, dominated,
            "exact binomial tail <= e^{-q_a n^2} on the whole grid");
  return all;
}

void write_reports(const ExperimentConfig& config, OutputTracker& out,
                   const std::string& stem,
                   const std::vector<VerificationReport>& reports) {
  if (config.format == "json") {
    std::ofstream os = out.open(stem + ".json");
    write_reports_json(os, reports);
  } else {
    std::ofstream os = out.open(stem + ".csv");
    write_reports_csv(os, reports);
  }
}

bool run_moments_x(const ExperimentConfig& config, OutputTracker& out,
                   std::vector<std::string>* lines) {
  bool all = true;
  const std::int64_t n = ladder_or(config, {200}).front();
  const std::int64_t replicas = replicas_or(config, 10000);
  const DeFinettiMeasure measure(ModelParams(config.beta, config.alpha, n));
  const double m = measure.m();

  MomentSpec spec;
  spec.distinct_pairs = {{0, 0, 1}, {0, 1, 1}};
  VerificationReport report = mc_moment_estimate(
      measure, spec, MomentTarget::kX, replicas, config.base_seed);
  apply_band(&report, m * m, 0.0);
  add_check(lines, &all, report.pass,
            "E[X(1,1)X(1,2)] = " + format_real(report.estimate) +
                " within 3 SE of m^2 = " + format_real(m * m) + " (SE " +
                format_real(report.standard_error) + ")");
  write_reports(config, out, "moments_x", {report});
  return all;
}

bool run_moments_y(const ExperimentConfig& config, OutputTracker& out,
                   std::vector<std::string>* lines) {
  bool all = true;
  const std::vector<std::int64_t> ladder = ladder_or(config, {100, 200});
  const std::int64_t replicas = replicas_or(config, 10000);
  std::vector<VerificationReport> reports;

  for (std::int64_t n : ladder) {
    const DeFinettiMeasure measure(ModelParams(config.beta, config.alpha, n));
    MomentSpec mean_spec;
    mean_spec.distinct_pairs = {{0, 1, 1}};
    VerificationReport mean_report = mc_moment_estimate(
        measure, mean_spec, MomentTarget::kY, replicas, config.base_seed);
    apply_band(&mean_report, 0.0,
               5.0 / std::sqrt(static_cast<double>(n)));
    add_check(lines, &all, mean_report.pass,
              "|E[Y(i,j)]| <= 5/sqrt(N) + 3 SE at N=" + std::to_string(n) +
                  " (estimate " + format_real(mean_report.estimate) + ")");
    reports.push_back(mean_report);

    MomentSpec square_spec;
    square_spec.distinct_pairs = {{0, 1, 2}, {2, 3, 2}};
    VerificationReport square_report = mc_moment_estimate(
        measure, square_spec, MomentTarget::kY, replicas,
        config.base_seed + 1);
    apply_band(&square_report, 1.0, 0.0);
    add_check(lines, &all, square_report.pass,
              "E[Y(i1,j1)^2 Y(i2,j2)^2] within 3 SE of 1 at N=" +
                  std::to_string(n) + " (estimate " +
                  format_real(square_report.estimate) + ")");
    reports.push_back(square_report);
  }

  // Small-N cross-check: exact conditional oracle versus Monte Carlo.
  {
    const DeFinettiMeasure measure(ModelParams(config.beta, config.alpha, 8));
    const double exact = exact_y_mean_small_n(measure, 0, 1);
    MomentSpec spec;
    spec.distinct_pairs = {{0, 1, 1}};
    VerificationReport mc = mc_moment_estimate(
        measure, spec, MomentTarget::kY, 100000, config.base_seed + 2);
    apply_band(&mc, exact, 0.0);
    mc.name = "mc_vs_exact_y_mean";
    add_check(lines, &all, mc.pass,
              "MC E[Y(1,2)] at n=8 within 3 SE of exact oracle (" +
                  format_real(mc.estimate) + " vs " + format_real(exact) +
                  ")");
    reports.push_back(mc);
  }
  write_reports(config, out, "moments_y", reports);
  return all;
}

bool run_definetti_identity(const ExperimentConfig& config, OutputTracker& out,
                            std::vector<std::string>* lines) {
  bool all = true;
  const std::vector<std::int64_t> spin_counts =
      config.spin_counts.empty() ? std::vector<std::int64_t>{4, 9, 16}
                                 : config.spin_counts;
  const std::vector<double> betas =
      config.beta_list.empty() ? std::vector<double>{0.5, 1.5, 2.0}
                               : config.beta_list;
  const std::vector<std::vector<int>> observables = {
      {0}, {0, 1}, {0, 1, 2, 3}};

  std::ofstream csv = out.open("definetti_identity.csv");
  csv << "m_spins,beta,degree,bruteforce,quadrature,abs_diff,pass\n";
  bool identity_ok = true;
  for (std::int64_t m_spins : spin_counts) {
    for (double beta : betas) {
      for (const auto& sites : observables) {
        if (static_cast<std::int64_t>(sites.size()) > m_spins) continue;
        const double brute = cw_expectation_bruteforce_sites(
            static_cast<int>(m_spins), beta, sites);
        const double quad = definetti_expectation_quadrature(
            static_cast<int>(m_spins), beta, sites);
        // 1e-8 relative, with an absolute floor for observables whose exact
        // value vanishes by spin-flip symmetry.
        const double tol = 1e-8 * std::max(std::abs(brute), 1.0);
        const bool pass = std::abs(brute - quad) <= tol;
        identity_ok &= pass;
        csv << m_spins << ',' << format_real(beta) << ',' << sites.size()
            << ',' << format_real(brute) << ',' << format_real(quad) << ','
            << format_real(std::abs(brute - quad)) << ','
            << (pass ? "true" : "false") << '\n';
      }
    }
  }
  add_check(lines, &all, identity_ok,
            "brute-force enumeration equals mixing quadrature to 1e-8 "
            "relative on the whole grid");
  return all;
}

bool run_interlacing(const ExperimentConfig& config, OutputTracker& out,
                     std::vector<std::string>* lines) {
  bool all = true;
  const std::int64_t n = ladder_or(config, {50}).front();
  const std::int64_t pairs = replicas_or(config, 100);
  const std::int64_t intervals = config.intervals;
  const DeFinettiMeasure measure(ModelParams(config.beta, config.alpha, n));
  const double m = measure.m();

  struct Row {
    double t;
    int branch;
    double diff_entry;
    double rank1_spread;
    std::int64_t max_defect;
  };
  std::vector<Row> rows(static_cast<std::size_t>(pairs));
  parallel_replicas(pairs, config.jobs, [&](std::int64_t r) {
    RngStream rng = RngStream::for_replica(config.base_seed, r);
    const SpinMatrix x = sample_ensemble(measure, rng);
    const DerivedMatrix a = build_a(x, m);
    const DerivedMatrix y = build_y(x, m);
    const Eigen::MatrixXd dense_a = a.to_dense();
    const Eigen::MatrixXd dense_b =
        y.to_dense(1.0 / std::sqrt(static_cast<double>(n)));
    const Eigen::MatrixXd diff = dense_a - dense_b;
    const double d00 = diff(0, 0);
    const double spread = (diff.array() - d00).abs().maxCoeff();
    const Spectrum spec_a = eigenvalues(dense_a);
    const Spectrum spec_b = eigenvalues(dense_b);
    std::int64_t max_defect = 0;
    for (std::int64_t k = 0; k < intervals; ++k) {
      double lo = -4.0 + 8.0 * rng.uniform();
      double hi = -4.0 + 8.0 * rng.uniform();
      if (lo > hi) std::swap(lo, hi);
      max_defect =
          std::max(max_defect, interlacing_defect(spec_a, spec_b, lo, hi));
    }
    rows[r] = Row{x.t(), a.branch_sign(), d00, spread, max_defect};
  });

  std::ofstream csv = out.open("interlacing.csv");
  csv << "replica,t,branch,diff_entry,rank1_spread,max_defect\n";
  bool defect_ok = true;
  bool rank1_ok = true;
  for (std::int64_t r = 0; r < pairs; ++r) {
    const Row& row = rows[r];
    csv << r << ',' << format_real(row.t) << ',' << row.branch << ','
        << format_real(row.diff_entry) << ',' << format_real(row.rank1_spread)
        << ',' << row.max_defect << '\n';
    defect_ok &= row.max_defect <= 2;
    const double expected =
        row.branch * m / std::sqrt(static_cast<double>(n) * (1.0 - m * m));
    rank1_ok &= row.diff_entry != 0.0 &&
                row.rank1_spread <= 1e-13 * std::abs(row.diff_entry) &&
                std::abs(row.diff_entry - expected) <=
                    1e-12 * std::abs(expected);
  }
  add_check(lines, &all, defect_ok,
            "interlacing defect <= 2 on every sampled pair and interval");
  add_check(lines, &all, rank1_ok,
            "A - Y/sqrt(N) is the constant rank-1 matrix with the closed-form "
            "entry");
  return all;
}

}  // namespace

const char* experiment_kind_name(ExperimentKind kind) {
  for (const KindInfo& info : kKinds) {
    if (info.kind == kind) return info.name;
  }
  throw ContractError("experiment_kind_name: unknown kind");
}

ExperimentKind experiment_kind_from_name(const std::string& name) {
  for (const KindInfo& info : kKinds) {
    if (name == info.name) return info.kind;
  }
  throw UsageError("unknown experiment kind '" + name + "'");
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
  ExperimentConfig config;
  if (!j.contains("kind")) throw UsageError("config: missing 'kind'");
  config.kind = experiment_kind_from_name(j.at("kind").get<std::string>());
  config.beta = j.value("beta", config.beta);
  config.alpha = j.value("alpha", config.alpha);
  if (j.contains("n")) config.n_ladder = {j.at("n").get<std::int64_t>()};
  if (j.contains("n_ladder")) {
    config.n_ladder = j.at("n_ladder").get<std::vector<std::int64_t>>();
  }
  if (j.contains("ell")) config.ell = j.at("ell").get<std::vector<int>>();
  config.replicas = j.value("replicas", config.replicas);
  if (j.contains("beta_list")) {
    config.beta_list = j.at("beta_list").get<std::vector<double>>();
  }
  if (j.contains("a_values")) {
    config.a_values = j.at("a_values").get<std::vector<double>>();
  }
  if (j.contains("spin_counts")) {
    config.spin_counts = j.at("spin_counts").get<std::vector<std::int64_t>>();
  }
  config.intervals = j.value("intervals", config.intervals);
  config.bins = j.value("bins", config.bins);
  config.base_seed = j.value("base_seed", config.base_seed);
  config.output_dir = j.value("output_dir", config.output_dir);
  config.format = j.value("format", config.format);
  config.jobs = j.value("jobs", config.jobs);
  if (config.format != "csv" && config.format != "json") {
    throw UsageError("config: format must be 'csv' or 'json'");
  }
  return config;
}

ExperimentConfig ExperimentConfig::load_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw UsageError("cannot read config file " + path);
  nlohmann::json j;
  try {
    is >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw UsageError("config parse error in " + path + ": " + e.what());
  }
  return from_json(j);
}

nlohmann::json ExperimentConfig::to_json() const {
  nlohmann::json j;
  j["kind"] = experiment_kind_name(kind);
  j["beta"] = beta;
  j["alpha"] = alpha;
  j["n_ladder"] = n_ladder;
  j["ell"] = ell;
  j["replicas"] = replicas;
  j["beta_list"] = beta_list;
  j["a_values"] = a_values;
  j["spin_counts"] = spin_counts;
  j["intervals"] = intervals;
  j["bins"] = bins;
  j["base_seed"] = base_seed;
  j["output_dir"] = output_dir;
  j["format"] = format;
  j["jobs"] = jobs;
  return j;
}

ExperimentOutcome run(const ExperimentConfig& config) {
  std::string dir = config.output_dir;
  if (dir.empty()) {
    const char* env = std::getenv("CWSC_OUT");
    dir = env != nullptr ? env : "out";
  }
  fs::create_directories(dir);
  OutputTracker tracker{fs::path(dir)};
  ExperimentOutcome outcome;
  try {
    bool pass = false;
    switch (config.kind) {
      case ExperimentKind::kMagnetization:
        pass = run_magnetization(config, tracker, &outcome.summary_lines);
        break;
      case ExperimentKind::kMeasure:
        pass = run_measure(config, tracker, &outcome.summary_lines);
        break;
      case ExperimentKind::kSpectrumLadder:
        pass = run_spectrum_ladder(config, tracker, &outcome.summary_lines);
        break;
      case ExperimentKind::kLemmaA5:
        pass = run_lemma_a5(config, tracker, &outcome.summary_lines);
        break;
      case ExperimentKind::kLaplaceZ:
        pass = run_laplace_z(config, tracker, &outcome.summary_lines);
        break;
      case ExperimentKind::kLargeDeviation:
        pass = run_large_deviation(config, tracker, &outcome.summary_lines);
        break;
      case ExperimentKind::kMomentsX:
        pass = run_moments_x(config, tracker, &outcome.summary_lines);
        break;
      case ExperimentKind::kMomentsY:
        pass = run_moments_y(config, tracker, &outcome.summary_lines);
        break;
      case ExperimentKind::kDefinettiIdentity:
        pass = run_definetti_identity(config, tracker, &outcome.summary_lines);
        break;
      case ExperimentKind::kInterlacing:
        pass = run_interlacing(config, tracker, &outcome.summary_lines);
        break;
    }
    outcome.all_passed = pass;

    std::ofstream summary = tracker.open("summary.txt");
    for (const std::string& line : outcome.summary_lines) {
      summary << line << '\n';
    }
    summary << (pass ? "ALL CHECKS PASSED" : "SOME CHECKS FAILED") << '\n';
    summary.close();

    nlohmann::json manifest;
    manifest["artifact_version"] = kArtifactVersion;
    manifest["config"] = config.to_json();
    manifest["base_seed"] = config.base_seed;
    std::time_t now = std::time(nullptr);
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ",
                  std::gmtime(&now));
    manifest["generated_at"] = stamp;
    nlohmann::json files = nlohmann::json::array();
    for (const std::string& name : tracker.files()) {
      files.push_back({{"name", name},
                       {"fnv1a64",
                        fnv1a64_hex_file((tracker.dir() / name).string())}});
    }
    manifest["files"] = files;
    std::ofstream manifest_os(tracker.dir() / "manifest.json",
                              std::ios::binary);
    manifest_os << manifest.dump(2) << '\n';

    outcome.files_written = tracker.files();
    outcome.files_written.push_back("manifest.json");
    return outcome;
  } catch (...) {
    tracker.discard_all();
    throw;
  }
}

std::vector<std::string> list_experiments() {
  std::vector<std::string> out;
  for (const KindInfo& info : kKinds) {
    out.push_back(std::string(info.name) + " - " + info.description);
  }
  return out;
}

void emit_histogram(std::ostream& os, const std::vector<Spectrum>& spectra,
                    int bins) {
  if (bins < 10) throw UsageError("emit_histogram: need at least 10 bins");
  std::size_t total = 0;
  for (const Spectrum& s : spectra) total += s.size();
  if (total == 0) throw UsageError("emit_histogram: empty spectrum set");

  const double lo = -2.5;
  const double hi = 2.5;
  const double width = (hi - lo) / bins;
  std::vector<std::int64_t> counts(static_cast<std::size_t>(bins), 0);
  for (const Spectrum& s : spectra) {
    for (double lambda : s.eigenvalues) {
      if (lambda < lo || lambda >= hi) continue;  // spike outliers fall out
      const auto b = static_cast<std::size_t>((lambda - lo) / width);
      counts[std::min(b, counts.size() - 1)]++;
    }
  }
  os << "bin_lo,bin_hi,count,density,semicircle_density\n";
  for (int b = 0; b < bins; ++b) {
    const double bin_lo = lo + b * width;
    const double bin_hi = bin_lo + width;
    const double center = 0.5 * (bin_lo + bin_hi);
    const double density =
        static_cast<double>(counts[b]) / (static_cast<double>(total) * width);
    os << format_real(bin_lo) << ',' << format_real(bin_hi) << ','
       << counts[b] << ',' << format_real(density) << ','
       << format_real(semicircle_density(center)) << '\n';
  }
}

std::string fnv1a64_hex_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw UsageError("fnv1a64: cannot read " + path);
  std::uint64_t hash = 1469598103934665603ULL;
  char buffer[4096];
  while (is.read(buffer, sizeof buffer) || is.gcount() > 0) {
    for (std::streamsize i = 0; i < is.gcount(); ++i) {
      hash ^= static_cast<unsigned char>(buffer[i]);
      hash *= 1099511628211ULL;
    }
    if (!is) break;
  }
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx",
                static_cast<unsigned long long>(hash));
  return std::string(hex);
}

std::string format_real(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return std::string(buf);
}

std::string csv_field(const std::string& raw) {
  if (raw.find_first_of(",\"\n") == std::string::npos) return raw;
  std::string quoted = "\"";
  for (char c : raw) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

void parallel_replicas(std::int64_t count, int jobs,
                       const std::function<void(std::int64_t)>& body) {
  if (count <= 0) return;
  int threads = jobs > 0 ? jobs
                         : static_cast<int>(std::thread::hardware_concurrency());
  if (threads < 1) threads = 1;
  threads = static_cast<int>(
      std::min<std::int64_t>(threads, count));
  if (threads == 1) {
    for (std::int64_t r = 0; r < count; ++r) body(r);
    return;
  }
  std::atomic<std::int64_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int w = 0; w < threads; ++w) {
    pool.emplace_back([&]() {
      while (true) {
        const std::int64_t r = next.fetch_add(1);
        if (r >= count) break;
        try {
          body(r);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
          break;
        }
      }
    });
  }
  for (std::thread& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace cwsc
