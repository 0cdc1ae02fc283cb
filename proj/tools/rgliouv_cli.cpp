// Batch front-end: spectrum, steady-state, gap-scan, rg-solve, oracle-check
// and evolve subcommands driven by one JSON configuration file.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <optional>
#include <random>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "rgl/bethe.hpp"
#include "rgl/ed.hpp"
#include "rgl/errors.hpp"
#include "rgl/io.hpp"
#include "rgl/meanfield.hpp"
#include "rgl/model.hpp"
#include "rgl/rg.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace rgl;

namespace {

enum class Method { ed, rg, both };

struct CommonFlags {
  std::string config_path;
  std::string out_dir = "out";
  std::string method = "ed";
  double tol = 0.0;
  int jobs = 1;
};

// Parsed configuration file. Only `params` is required; the remaining keys
// are consumed by the subcommands that use them.
struct RunConfig {
  LiouvParams params;
  std::vector<double> p_values;
  std::vector<std::int64_t> sizes{40, 60, 80, 100, 120};
  std::vector<SectorLabel> sectors;
  int starts = 16;
  unsigned seed = 1;
  bool mutate = false;
  std::vector<double> times{0.0, 0.5, 1.0, 2.0, 5.0};
  std::vector<std::int64_t> initial_occupation;
  int observable_level = 1;
  json raw;
};

Method parse_method(const std::string& m) {
  if (m == "ed") return Method::ed;
  if (m == "rg") return Method::rg;
  if (m == "both") return Method::both;
  throw ValidationError("--method must be one of ed, rg, both (got '" + m + "')");
}

template <class T>
T field(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("field '") + key + "': " + e.what());
  }
}

RunConfig load_config(const std::string& path) {
  if (path.empty()) throw ValidationError("--config is required");
  std::ifstream f(path);
  if (!f) throw ValidationError("cannot read config file '" + path + "'");
  json j;
  try {
    j = json::parse(f);
  } catch (const json::parse_error& e) {
    // nlohmann reports "line L, column C" in the message.
    throw ValidationError(path + ": " + e.what());
  }
  if (!j.is_object()) throw ValidationError(path + ": top level must be an object");
  static const std::vector<std::string> known{"params", "p_values", "sizes", "sectors", "starts",
                                              "seed", "mutate", "times", "initial_occupation",
                                              "observable_level"};
  for (const auto& [key, _] : j.items())
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw ValidationError(path + ": unknown field '" + key + "'");
  if (!j.contains("params")) throw ValidationError(path + ": missing field 'params'");
  RunConfig c;
  c.raw = j;
  try {
    c.params = j.at("params").get<LiouvParams>();
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": params: " + e.what());
  }
  try {
    c.params.validate();
  } catch (const DomainError& e) {
    throw ValidationError(path + ": params: " + e.what());
  }
  if (j.contains("p_values")) c.p_values = field<std::vector<double>>(j, "p_values");
  if (j.contains("sizes")) c.sizes = field<std::vector<std::int64_t>>(j, "sizes");
  if (j.contains("sectors")) {
    for (const auto& s : field<std::vector<std::vector<std::int64_t>>>(j, "sectors")) {
      SectorLabel lab(s);
      if (lab.n_levels() != c.params.n_levels)
        throw ValidationError(path + ": sectors: label length must equal n_levels");
      try {
        validate_sector(c.params.n_atoms, lab);
      } catch (const DomainError& e) {
        throw ValidationError(path + ": sectors: " + e.what());
      }
      c.sectors.push_back(lab);
    }
  }
  if (j.contains("starts")) c.starts = field<int>(j, "starts");
  if (j.contains("seed")) c.seed = field<unsigned>(j, "seed");
  if (j.contains("mutate")) c.mutate = field<bool>(j, "mutate");
  if (j.contains("times")) c.times = field<std::vector<double>>(j, "times");
  if (j.contains("initial_occupation"))
    c.initial_occupation = field<std::vector<std::int64_t>>(j, "initial_occupation");
  if (j.contains("observable_level")) c.observable_level = field<int>(j, "observable_level");
  for (double p : c.p_values)
    if (!(std::abs(p) <= 1.0)) throw ValidationError(path + ": p_values: |p| must be <= 1");
  for (auto L : c.sizes)
    if (L < 1) throw ValidationError(path + ": sizes: entries must be >= 1");
  if (c.starts < 1) throw ValidationError(path + ": starts must be >= 1");
  return c;
}

// Runs fn(0..n-1) on `jobs` worker threads. After the first exception no
// new jobs start, and that exception is rethrown.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn) {
  std::atomic<std::size_t> next{0};
  std::exception_ptr first;
  std::mutex mu;
  std::atomic<bool> failed{false};
  auto worker = [&] {
    for (std::size_t i = next++; i < n && !failed; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(mu);
        if (!first) first = std::current_exception();
        failed = true;
      }
    }
  };
  const auto count = static_cast<std::size_t>(std::max(1, jobs));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < std::min(count, n); ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (first) std::rethrow_exception(first);
}

json complex_json(cd z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

std::string sector_tag(const SectorLabel& s) {
  std::string out = "sector";
  for (auto v : s.s) out += "_" + std::to_string(v);
  return out;
}

std::string p_tag(double p) {
  std::ostringstream os;
  os << "p" << std::setprecision(6) << p;
  return os.str();
}

json provenance(const std::string& command, const CommonFlags& flags, const RunConfig& cfg) {
  return json{{"command", command},
              {"method", flags.method},
              {"tol", flags.tol},
              {"config", cfg.raw}};
}

std::string csv_of_spectra(const std::vector<SpectrumResult>& spectra, int n_levels) {
  std::ostringstream os;
  write_spectrum_csv(os, spectra, n_levels);
  return os.str();
}

// ------------------------------------------------------------ spectrum

int cmd_spectrum(const CommonFlags& flags, const RunConfig& cfg) {
  const Method method = parse_method(flags.method);
  if (method != Method::ed && cfg.params.n_levels != 2)
    throw ValidationError("--method rg/both for the full spectrum requires n_levels = 2");
  std::vector<double> ps = cfg.p_values.empty() ? std::vector<double>{cfg.params.p} : cfg.p_values;
  const json prov = provenance("spectrum", flags, cfg);
  json summary = json::array();
  for (double p : ps) {
    LiouvParams params = cfg.params;
    params.p = p;
    const fs::path dir = fs::path(flags.out_dir) / ("spectrum_" + p_tag(p));
    auto sectors = enumerate_sectors(params);
    const std::int64_t limit = DenseOptions{}.dense_limit;
    for (const auto& s : sectors)
      if (sector_dimension(params.n_atoms, s) > limit)
        throw ResourceError("sector " + s.str() + " has dimension " +
                            std::to_string(sector_dimension(params.n_atoms, s)) + " > dense limit " +
                            std::to_string(limit));
    std::vector<SpectrumResult> spectra(sectors.size());
    parallel_for(sectors.size(), flags.jobs, [&](std::size_t i) {
      try {
        spectra[i] = full_spectrum(build_sector_matrix(params, sectors[i]));
      } catch (const ResourceError& e) {
        throw ResourceError("sector " + sectors[i].str() + ": " + e.what());
      }
    });
    json entry{{"p", p}, {"sectors", sectors.size()}};
    std::size_t rows = 0;
    std::vector<cd> all;
    for (std::size_t i = 0; i < sectors.size(); ++i) {
      write_csv_with_provenance(dir / (sector_tag(sectors[i]) + ".csv"), prov,
                                csv_of_spectra({spectra[i]}, params.n_levels));
      rows += spectra[i].eigenvalues.size();
      all.insert(all.end(), spectra[i].eigenvalues.begin(), spectra[i].eigenvalues.end());
    }
    write_csv_with_provenance(dir / "spectrum.csv", prov, csv_of_spectra(spectra, params.n_levels));
    entry["rows"] = rows;
    if (p == 0.0 && params.n_levels == 3) {
      auto bands = p0_band_check(params);
      json b = json::array();
      for (const auto& r : bands.rows)
        b.push_back({{"lambda", r.lambda}, {"predicted", r.predicted}, {"expected", r.expected},
                     {"observed", r.observed}, {"max_deviation", r.max_deviation}});
      write_json_with_provenance(dir / "bands.json", prov,
                                 json{{"rows", b}, {"unmatched", bands.unmatched}, {"passed", bands.passed}});
      entry["bands_passed"] = bands.passed;
    }
    if (method != Method::ed) {
      if (p == 0.0) throw ValidationError("p = 0 has no RG solution; use --method ed");
      auto rg = su2_spectrum_from_rg(params);
      std::ostringstream os;
      os << "re,im\n" << std::setprecision(17);
      for (cd l : rg) os << l.real() << ',' << l.imag() << '\n';
      write_csv_with_provenance(dir / "spectrum_rg.csv", prov, os.str());
      entry["rg_vs_ed_distance"] = multiset_distance(rg, all);
    }
    summary.push_back(entry);
  }
  write_json_with_provenance(fs::path(flags.out_dir) / "spectrum_summary.json", prov, summary);
  std::cout << summary.dump(2) << '\n';
  return 0;
}

// -------------------------------------------------------- steady-state

// Converged RG solution of a sector from the circle layout, falling back to
// seeded jittered layouts. `trace` collects one line per attempt.
std::optional<SpectralSolution> rg_multistart(const LiouvParams& params, const SectorLabel& s,
                                              const RunConfig& cfg, const SolveOptions& opts,
                                              std::vector<std::string>& trace,
                                              const std::function<bool(const SpectralSolution&)>& accept) {
  std::mt19937 rng(cfg.seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> g(0.0, 0.05);
  for (int k = 0; k < cfg.starts; ++k) {
    CircleLayout layout;
    SpectralSolution guess;
    if (k > 0) layout = CircleLayout{0.2 + 0.8 * u(rng), 0.1 + 0.3 * u(rng)};
    guess = init_circle_guess(params.n_atoms, params.p, s, layout);
    if (k > 0) {
      for (auto& x : guess.e) x += cd(g(rng), g(rng));
      for (auto& x : guess.w) x += cd(g(rng), g(rng));
    }
    std::ostringstream line;
    line << "start " << k << " gap " << layout.gap << " spread " << layout.spread;
    try {
      auto sol = solve(guess, params, opts);
      line << " iterations " << sol.iterations << " residual " << sol.residual_norm;
      if (sol.converged && accept(sol)) {
        trace.push_back(line.str() + " accepted");
        return sol;
      }
      trace.push_back(line.str() + (sol.converged ? " rejected" : " not converged"));
    } catch (const NumericError& e) {
      trace.push_back(line.str() + " failed: " + e.what());
    }
  }
  return std::nullopt;
}

std::string populations_csv(const std::vector<SectorBasisState>& basis, const Eigen::VectorXcd& rho) {
  std::ostringstream os;
  const auto N = basis.empty() ? 0 : basis.front().k.size();
  for (std::size_t a = 0; a < N; ++a) os << 'k' << a + 1 << ',';
  os << "re,im\n" << std::setprecision(17);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    for (auto k : basis[i].k) os << k << ',';
    os << rho[static_cast<Eigen::Index>(i)].real() << ',' << rho[static_cast<Eigen::Index>(i)].imag() << '\n';
  }
  return os.str();
}

int cmd_steady_state(const CommonFlags& flags, const RunConfig& cfg) {
  const Method method = parse_method(flags.method);
  const LiouvParams& params = cfg.params;
  const json prov = provenance("steady-state", flags, cfg);
  const fs::path dir = fs::path(flags.out_dir) / "steady_state";
  json result;
  std::optional<Eigen::VectorXcd> ed_rho, rg_rho;
  if (method != Method::rg) {
    auto ss = steady_state(params);
    ed_rho = ss.rho;
    write_csv_with_provenance(dir / "populations_ed.csv", prov, populations_csv(ss.basis, ss.rho));
    result["ed"] = {{"eigenvalue", complex_json(ss.eigenvalue)},
                    {"degenerate", ss.degenerate}};
  }
  if (method != Method::ed) {
    if (params.n_levels != 3) throw ValidationError("the RG steady state is implemented for n_levels = 3");
    if (params.p == 0.0) throw ValidationError("p = 0 has no RG solution; use --method ed");
    SolveOptions opts;
    opts.tol = flags.tol;
    const SectorLabel zero{0, 0, 0};
    std::vector<std::string> trace;
    const double Ld = static_cast<double>(params.n_atoms);
    auto sol = rg_multistart(params, zero, cfg, opts, trace, [&](const SpectralSolution& s) {
      return std::abs(s.eigenvalue) <= 1e-8 * Ld * Ld * params.gamma;
    });
    write_json_with_provenance(dir / "rg_trace.json", prov, trace);
    if (!sol) throw NumericError("no RG steady state found; attempts recorded in " + (dir / "rg_trace.json").string());
    std::ostringstream os;
    write_solution_csv(os, *sol);
    write_csv_with_provenance(dir / "rg_parameters.csv", prov, os.str());
    // Populations: kernel vector at the RG eigenvalue from one shift-invert
    // solve. The shift is moved off the (near-singular) eigenvalue.
    SectorMatrix m = build_sector_matrix(params, zero);
    ShiftInvertOptions si;
    si.keep_vectors = true;
    auto spec = target_eigenvalues_near(m, sol->eigenvalue + cd(1e-6 * params.gamma, 0.0), 1, si);
    Eigen::VectorXcd v = spec.eigenvectors->col(0);
    rg_rho = v / v.sum();
    write_csv_with_provenance(dir / "populations_rg.csv", prov, populations_csv(m.basis, *rg_rho));
    result["rg"] = {{"eigenvalue", complex_json(sol->eigenvalue)},
                    {"residual", sol->residual_norm},
                    {"iterations", sol->iterations},
                    {"circle_radius", circle_radius(params.p)},
                    {"circle_center", complex_json(circle_center(params.p))},
                    {"solution", *sol}};
  }
  if (ed_rho && rg_rho) result["population_max_difference"] = (*ed_rho - *rg_rho).cwiseAbs().maxCoeff();
  write_json_with_provenance(dir / "summary.json", prov, result);
  json brief = result;
  if (brief.contains("rg")) brief["rg"].erase("solution");
  std::cout << brief.dump(2) << '\n';
  return 0;
}

// ------------------------------------------------------------ gap-scan

int cmd_gap_scan(const CommonFlags& flags, const RunConfig& cfg) {
  if (cfg.params.n_levels != 3) throw ValidationError("gap-scan is defined for n_levels = 3");
  std::vector<double> ps = cfg.p_values.empty() ? std::vector<double>{cfg.params.p} : cfg.p_values;
  for (double p : ps)
    if (!(p > 0.0)) throw ValidationError("gap-scan needs p > 0");
  const std::vector<SectorLabel> sectors{{1, -1, 0}, {1, 0, -1}};
  struct Job {
    double p;
    SectorLabel s;
    std::int64_t L;
    std::optional<cd> value;
    std::string error;
  };
  std::vector<Job> jobs;
  for (double p : ps)
    for (const auto& s : sectors)
      for (auto L : cfg.sizes) jobs.push_back({p, s, L, std::nullopt, {}});
  parallel_for(jobs.size(), flags.jobs, [&](std::size_t i) {
    LiouvParams params = cfg.params;
    params.p = jobs[i].p;
    params.n_atoms = jobs[i].L;
    try {
      jobs[i].value = slowest_mode(params, jobs[i].s);
    } catch (const std::exception& e) {
      jobs[i].error = e.what();
    }
  });
  const json prov = provenance("gap-scan", flags, cfg);
  const fs::path dir = fs::path(flags.out_dir) / "gap_scan";
  json fits = json::array();
  std::ostringstream samples;
  samples << "p,s1,s2,s3,L,re,im,re_over_L\n" << std::setprecision(17);
  for (double p : ps) {
    for (const auto& s : sectors) {
      std::vector<GapSample> pts;
      for (const auto& j : jobs) {
        if (j.p != p || j.s != s) continue;
        if (!j.value) {
          std::cerr << "warning: p=" << p << " sector " << s.str() << " L=" << j.L << " skipped: " << j.error << '\n';
          continue;
        }
        samples << p << ',' << s[0] << ',' << s[1] << ',' << s[2] << ',' << j.L << ',' << j.value->real() << ','
                << j.value->imag() << ',' << j.value->real() / static_cast<double>(j.L) << '\n';
        pts.push_back({j.L, j.value->real() / static_cast<double>(j.L)});
      }
      auto fit = gap_scaling_fit(s, pts);
      json jf = fit;
      jf["p"] = p;
      jf["predicted_c0"] = -p * cfg.params.gamma;
      jf["predicted_c1"] = (s == SectorLabel{1, -1, 0} ? 0.5 : -0.5) * cfg.params.gamma - 1.5 * p * cfg.params.gamma;
      fits.push_back(jf);
      std::ostringstream csv;
      write_gap_csv(csv, fit);
      write_csv_with_provenance(dir / ("fit_" + p_tag(p) + "_" + sector_tag(s) + ".csv"), prov, csv.str());
    }
  }
  write_csv_with_provenance(dir / "samples.csv", prov, samples.str());
  write_json_with_provenance(dir / "fits.json", prov, fits);
  for (const auto& f : fits)
    std::cout << "p=" << f["p"] << " sector " << f["sector"] << " c0=" << f["coefficients"][0]
              << " c1=" << f["coefficients"][1] << '\n';
  return 0;
}

// ------------------------------------------------------------ rg-solve

int cmd_rg_solve(const CommonFlags& flags, const RunConfig& cfg) {
  const Method method = parse_method(flags.method);
  const LiouvParams& params = cfg.params;
  if (params.n_levels != 2 && params.n_levels != 3)
    throw ValidationError("rg-solve supports n_levels 2 and 3");
  if (params.p == 0.0) throw ValidationError("p = 0 has no RG solution");
  std::vector<SectorLabel> sectors = cfg.sectors;
  if (sectors.empty()) sectors.push_back(SectorLabel(std::vector<std::int64_t>(params.n_levels, 0)));
  SolveOptions opts;
  opts.tol = flags.tol;
  const json prov = provenance("rg-solve", flags, cfg);
  const fs::path dir = fs::path(flags.out_dir) / "rg_solve";
  std::vector<json> results(sectors.size());
  parallel_for(sectors.size(), flags.jobs, [&](std::size_t i) {
    const auto& s = sectors[i];
    json r{{"sector", s}};
    std::vector<cd> ed;
    if (method != Method::rg) ed = full_spectrum(build_sector_matrix(params, s)).eigenvalues;
    std::vector<SpectralSolution> sols;
    if (params.n_levels == 2) {
      sols = su2_all_solutions(params, s);
    } else {
      std::vector<std::string> trace;
      auto sol = rg_multistart(params, s, cfg, opts, trace, [](const SpectralSolution&) { return true; });
      r["trace"] = trace;
      if (sol) sols.push_back(*sol);
    }
    json arr = json::array();
    for (std::size_t k = 0; k < sols.size(); ++k) {
      json js = sols[k];
      if (!ed.empty()) {
        double d = std::numeric_limits<double>::infinity();
        for (cd l : ed) d = std::min(d, std::abs(l - sols[k].eigenvalue));
        js["ed_distance"] = d;
      }
      arr.push_back(js);
      std::ostringstream os;
      write_solution_csv(os, sols[k]);
      write_csv_with_provenance(dir / (sector_tag(s) + "_" + std::to_string(k) + ".csv"), prov, os.str());
    }
    r["solutions"] = arr;
    results[i] = r;
  });
  write_json_with_provenance(dir / "solutions.json", prov, results);
  int failures = 0;
  for (const auto& r : results) {
    std::cout << "sector " << r["sector"] << ": " << r["solutions"].size() << " solution(s)";
    if (r["solutions"].empty()) ++failures;
    for (const auto& s : r["solutions"]) {
      std::cout << "\n  l = (" << s["eigenvalue"]["re"] << ", " << s["eigenvalue"]["im"] << ")";
      if (s.contains("ed_distance")) std::cout << " |l - ED| = " << s["ed_distance"];
    }
    std::cout << '\n';
  }
  if (failures) throw NumericError(std::to_string(failures) + " sector(s) without a converged solution");
  return 0;
}

// -------------------------------------------------------- oracle-check

int cmd_oracle_check(const CommonFlags& flags, const RunConfig& cfg) {
  const LiouvParams& params = cfg.params;
  const double tol = flags.tol > 0.0 ? flags.tol : 1e-12;
  std::optional<Eigen::MatrixXd> rates;
  if (cfg.mutate) {
    rates = restricted_rates(params);
    (*rates)(params.n_levels - 1, 0) = -(*rates)(params.n_levels - 1, 0);
  }
  auto oracle = build_oracle_matrix(params, rates);
  json rows = json::array();
  bool ok = true;
  for (const auto& s : enumerate_sectors(params)) {
    Eigen::MatrixXcd diff = build_sector_matrix(params, s).dense() - oracle.project(s);
    double d = diff.size() ? diff.cwiseAbs().maxCoeff() : 0.0;
    bool pass = d <= tol;
    ok = ok && pass;
    rows.push_back({{"sector", s}, {"max_delta", d}, {"pass", pass}});
    std::cout << (pass ? "PASS " : "FAIL ") << s.str() << " max delta " << d << '\n';
  }
  json report{{"sectors", rows}, {"weak_symmetry_defect", weak_symmetry_defect(oracle, params.n_levels)}};
  if (params.p != 0.0 && !cfg.mutate) {
    auto rep = integrability_check(params);
    report["commutator"] = rep.commutator;
    report["reconstruction"] = rep.reconstruction;
    bool pass = rep.commutator <= tol && rep.reconstruction <= tol;
    ok = ok && pass;
    std::cout << (pass ? "PASS " : "FAIL ") << "integrals of motion: commutator " << rep.commutator
              << " reconstruction " << rep.reconstruction << '\n';
  }
  report["passed"] = ok;
  write_json_with_provenance(fs::path(flags.out_dir) / "oracle_check.json", provenance("oracle-check", flags, cfg),
                             report);
  if (!ok) throw NumericError("oracle check failed");
  return 0;
}

// --------------------------------------------------------------- evolve

int cmd_evolve(const CommonFlags& flags, const RunConfig& cfg) {
  const LiouvParams& params = cfg.params;
  auto basis = enumerate_occupations(params.n_levels, params.n_atoms);
  const auto D = static_cast<Eigen::Index>(basis.size());
  Occupation k0 = cfg.initial_occupation;
  if (k0.empty()) {
    k0.assign(params.n_levels, 0);
    k0.back() = params.n_atoms;
  }
  auto it = std::find(basis.begin(), basis.end(), k0);
  if (it == basis.end()) throw ValidationError("initial_occupation must have n_levels entries summing to n_atoms");
  if (cfg.observable_level < 1 || cfg.observable_level > params.n_levels)
    throw ValidationError("observable_level must lie in 1..n_levels");
  Eigen::MatrixXcd rho0 = Eigen::MatrixXcd::Zero(D, D);
  const auto i0 = it - basis.begin();
  rho0(i0, i0) = 1.0;
  Eigen::MatrixXcd obs = Eigen::MatrixXcd::Zero(D, D);
  for (Eigen::Index i = 0; i < D; ++i)
    obs(i, i) = static_cast<double>(basis[static_cast<std::size_t>(i)][cfg.observable_level - 1]);
  auto res = evolve_expectation(params, rho0, obs, cfg.times);
  std::ostringstream os;
  os << "t,re,im,trace_re,trace_im\n" << std::setprecision(17);
  for (std::size_t i = 0; i < res.times.size(); ++i)
    os << res.times[i] << ',' << res.values[i].real() << ',' << res.values[i].imag() << ','
       << res.traces[i].real() << ',' << res.traces[i].imag() << '\n';
  const json prov = provenance("evolve", flags, cfg);
  write_csv_with_provenance(fs::path(flags.out_dir) / "evolve.csv", prov, os.str());
  if (res.ill_conditioned)
    std::cerr << "warning: eigenvector condition number " << res.max_condition << " exceeds threshold\n";
  std::cout << os.str();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Collective N-level Liouvillian spectra by exact diagonalization, RG equations and mean field"};
  app.require_subcommand(1);
  CommonFlags flags;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", flags.config_path, "JSON configuration file")->envname("RGL_CONFIG");
    sub->add_option("--out", flags.out_dir, "Output directory")->envname("RGL_OUT")->capture_default_str();
    sub->add_option("--method", flags.method, "ed, rg or both")->envname("RGL_METHOD")->capture_default_str();
    sub->add_option("--tol", flags.tol, "Tolerance override (0 keeps the default)")->envname("RGL_TOL");
    sub->add_option("--jobs", flags.jobs, "Worker threads")->envname("RGL_JOBS")->check(CLI::PositiveNumber);
  };
  std::map<std::string, std::function<int(const CommonFlags&, const RunConfig&)>> commands{
      {"spectrum", cmd_spectrum},         {"steady-state", cmd_steady_state}, {"gap-scan", cmd_gap_scan},
      {"rg-solve", cmd_rg_solve},         {"oracle-check", cmd_oracle_check}, {"evolve", cmd_evolve}};
  const std::map<std::string, std::string> help{
      {"spectrum", "Per-sector exact spectra (optionally swept over p_values)"},
      {"steady-state", "Steady-state populations and RG spectral parameters"},
      {"gap-scan", "Slow-mode scan over sizes and the 1/L scaling fit"},
      {"rg-solve", "Solve the RG equations in the configured sectors"},
      {"oracle-check", "Compare sector matrices with the brute-force Liouvillian"},
      {"evolve", "Expectation value of a level population in time"}};
  std::map<std::string, CLI::App*> subs;
  for (const auto& [name, _] : commands) {
    subs[name] = app.add_subcommand(name, help.at(name));
    add_common(subs[name]);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  try {
    for (const auto& [name, sub] : subs)
      if (sub->parsed()) {
        parse_method(flags.method);
        RunConfig cfg = load_config(flags.config_path);
        return commands.at(name)(flags, cfg);
      }
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << '\n';
    return 2;
  } catch (const ResourceError& e) {
    std::cerr << "resource limit: " << e.what() << '\n';
    return 4;
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
