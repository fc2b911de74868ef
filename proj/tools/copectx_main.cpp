#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "copectx/io.hpp"

// copectx: decide from prepare-measure statistics whether a fragment admits
// a noncontextual model, via the rank-separation criterion. Subcommands
// reproduce the three built-in case studies (meqsd, sdc, cloning) and run
// the generic pipeline on user data (certify, nmf).

namespace {

using copectx::io::ParseError;
using nlohmann::ordered_json;

struct GlobalOpts {
  std::string output;
  std::string format = "json";
  std::uint64_t seed = 0;
  double tol = -1.0;
  double eps = 1e-10;
  bool timing = false;
};

void add_global(CLI::App* cmd, GlobalOpts& g) {
  cmd->add_option("--output", g.output, "Write the report to this file");
  cmd->add_option("--format", g.format, "Report format")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--seed", g.seed, "Seed for randomized pieces");
  cmd->add_option("--tol", g.tol,
                  "Rank tolerance (relative; negative = dimension default)");
  cmd->add_option("--eps", g.eps, "Zero-pattern threshold")
      ->check(CLI::PositiveNumber);
  cmd->add_flag("--timing", g.timing, "Include runtime in the JSON report");
}

ordered_json config_json(const GlobalOpts& g) {
  ordered_json j;
  j["tol"] = g.tol;
  j["eps"] = g.eps;
  j["seed"] = g.seed;
  j["format"] = g.format;
  return j;
}

void emit(const GlobalOpts& g, const std::string& text) {
  if (g.output.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
  } else {
    copectx::io::write_file(g.output, text);
    std::cerr << "wrote " << g.output << "\n";
  }
}

void emit_json(const GlobalOpts& g, const ordered_json& j) {
  emit(g, j.dump(2) + "\n");
}

struct SweepRange {
  double lo = 0.0, hi = 0.0, step = 0.0;
};

SweepRange parse_sweep(const std::string& s) {
  SweepRange r;
  if (std::sscanf(s.c_str(), "%lf:%lf:%lf", &r.lo, &r.hi, &r.step) != 3 ||
      r.step <= 0.0 || r.hi < r.lo)
    throw copectx::InvalidParams("sweep must be lo:hi:step with step > 0");
  return r;
}

int cmd_meqsd(const GlobalOpts& g, double c_q, std::optional<double> s_q,
              const std::string& sweep, const std::string& dump_cope) {
  if (!sweep.empty()) {
    const SweepRange r = parse_sweep(sweep);
    const auto curve = copectx::success_curve(r.lo, r.hi, r.step);
    if (g.format == "csv") {
      emit(g, copectx::io::curve_csv(curve));
    } else {
      ordered_json j;
      j["schema"] = copectx::io::kSchema;
      j["type"] = "meqsd_sweep";
      j["config"] = config_json(g);
      j["config"]["sweep"] = sweep;
      j["points"] = ordered_json::array();
      for (const auto& p : curve) {
        const double closed = copectx::optimal_success_closed_form(p.c_q);
        j["points"].push_back(ordered_json{
            {"c_q", p.c_q},
            {"roots", p.roots},
            {"optimal", p.optimal},
            {"closed_form", closed},
            {"abs_error", std::abs(p.optimal - closed)}});
      }
      emit_json(g, j);
    }
    return 0;
  }

  const copectx::SuccessCurvePoint point = copectx::solve_success_prob(c_q);
  const double s = s_q.value_or(point.optimal);
  const copectx::CopeMatrix cope = copectx::meqsd_cope({c_q, s});
  if (!dump_cope.empty()) {
    copectx::io::write_cope_csv(cope, dump_cope);
    std::cerr << "wrote " << dump_cope << "\n";
  }
  const copectx::Verdict v = copectx::rank_separation_verdict(cope, g.tol, g.eps);
  ordered_json j;
  j["schema"] = copectx::io::kSchema;
  j["type"] = "meqsd_report";
  j["config"] = config_json(g);
  j["config"]["c_q"] = c_q;
  j["config"]["s_q"] = s;
  j["roots"] = point.roots;
  j["optimal"] = point.optimal;
  j["closed_form"] = copectx::optimal_success_closed_form(c_q);
  j["verdict"] = copectx::io::verdict_json(v);
  emit_json(g, j);
  return 0;
}

int cmd_sdc(const GlobalOpts& g, double phi, std::optional<double> c,
            std::optional<double> d, bool search) {
  if (search) {
    copectx::SdcScanConfig cfg;
    const copectx::SdcScanResult scan = copectx::sdc_rank_search(phi, cfg);
    if (g.format == "csv") {
      emit(g, copectx::io::scan_csv(scan));
    } else {
      ordered_json j;
      j["schema"] = copectx::io::kSchema;
      j["type"] = "sdc_scan";
      j["config"] = config_json(g);
      j["config"]["phi"] = phi;
      j["steps"] = static_cast<long long>(scan.points.size());
      j["achieved"] = scan.achieved;
      j["points"] = ordered_json::array();
      for (const auto& p : scan.points)
        j["points"].push_back(ordered_json{{"c", p.c},
                                           {"d", p.d},
                                           {"fourth_eigenvalue",
                                            p.fourth_eigenvalue},
                                           {"rank3", p.rank3}});
      emit_json(g, j);
    }
    return 0;
  }

  copectx::CloneCoefficients coeffs =
      copectx::optimal_clone_coefficients(phi);
  if (c.has_value() != d.has_value())
    throw copectx::InvalidParams("--c and --d must be given together");
  if (c) {
    coeffs.c = *c;
    coeffs.d = *d;
  }
  const std::vector<double> spectrum = copectx::sdc_spectrum(coeffs);
  const copectx::SdcParams params = copectx::sdc_params_from(coeffs);
  const copectx::CopeMatrix cope = copectx::sdc_cope(params);
  const copectx::Verdict v = copectx::rank_separation_verdict(cope, g.tol, g.eps);
  ordered_json j;
  j["schema"] = copectx::io::kSchema;
  j["type"] = "sdc_report";
  j["config"] = config_json(g);
  j["config"]["phi"] = phi;
  j["config"]["c"] = coeffs.c;
  j["config"]["d"] = coeffs.d;
  j["params"] = ordered_json{{"p_s", params.p_s},
                             {"p_f", params.p_f},
                             {"p_i", params.p_i},
                             {"delta", params.delta}};
  j["spectrum"] = spectrum;
  j["verdict"] = copectx::io::verdict_json(v);
  emit_json(g, j);
  return 0;
}

int cmd_cloning(const GlobalOpts& g, const std::string& task_name, long long n,
                const std::string& model_name, double angle, bool seeded,
                long long cap, long long pairs) {
  const copectx::CloneTask task = task_name == "universal"
                                      ? copectx::CloneTask::Universal
                                      : copectx::CloneTask::PhaseCovariant;
  copectx::CloneModel model = model_name == "ideal"
                                  ? copectx::CloneModel::ideal()
                                  : copectx::CloneModel::rotated(angle);
  const copectx::InputMode mode = seeded
                                      ? copectx::InputMode::seeded(g.seed)
                                      : copectx::InputMode::deterministic();
  copectx::FactoredAntichainConfig cfg;
  if (cap > 0) cfg.exhaustive_cap = cap;
  if (pairs > 0) cfg.sample_pairs = pairs;
  cfg.seed = g.seed + 99;
  const copectx::CloningReport rep =
      copectx::verify_cloning(task, n, model, mode, g.tol, g.eps, cfg);
  std::cerr << "runtime: " << rep.runtime_ms << " ms; minimal preparation "
            << "count separating rank " << rep.factored_rank << ": "
            << rep.min_preparations << "\n";
  ordered_json j = copectx::io::cloning_json(rep, g.timing);
  j["config"] = config_json(g);
  j["config"]["task"] = task_name;
  j["config"]["n"] = n;
  j["config"]["model"] = model.describe();
  j["config"]["input_mode"] = seeded ? "seeded" : "deterministic";
  emit_json(g, j);
  return 0;
}

int cmd_certify(const GlobalOpts& g, const std::string& path, bool run_enmf) {
  const copectx::Fragment frag = copectx::io::load_fragment(path);
  const copectx::CopeMatrix cope = copectx::cope_from_fragment(frag);
  const copectx::Verdict v = copectx::rank_separation_verdict(cope, g.tol, g.eps);
  ordered_json j;
  j["schema"] = copectx::io::kSchema;
  j["type"] = "certify_report";
  j["config"] = config_json(g);
  j["config"]["fragment"] = path;
  j["dim"] = frag.dim();
  j["n_preparations"] = static_cast<long long>(frag.preparations.size());
  j["n_measurements"] = static_cast<long long>(frag.measurements.size());
  j["verdict"] = copectx::io::verdict_json(v);
  if (run_enmf) {
    copectx::NmfConfig cfg;
    cfg.seed = g.seed;
    j["enmf"] = copectx::io::enmf_json(copectx::enmf_search(cope, cfg));
  }
  emit_json(g, j);
  return 0;
}

int cmd_nmf(const GlobalOpts& g, const std::string& path, int k, int restarts,
            int max_iter, double success_tol, const std::string& mode) {
  const Eigen::MatrixXd m = copectx::io::load_matrix_csv(path);
  copectx::NmfConfig cfg;
  cfg.restarts = restarts;
  cfg.max_iter = max_iter;
  cfg.seed = g.seed;
  cfg.success_tol = success_tol;
  cfg.mode = mode == "ontological" ? copectx::NmfConfig::Mode::Ontological
                                   : copectx::NmfConfig::Mode::Plain;
  ordered_json j;
  if (k > 0) {
    const copectx::NmfResult r = copectx::nmf_factorize(m, k, cfg);
    j = copectx::io::nmf_json(r);
    j["found"] = r.residual < cfg.success_tol;
  } else {
    j = copectx::io::enmf_json(copectx::enmf_search(m, cfg));
  }
  j["config"] = config_json(g);
  j["config"]["matrix"] = path;
  j["config"]["k"] = k;
  j["config"]["restarts"] = restarts;
  j["config"]["max_iter"] = max_iter;
  j["config"]["success_tol"] = success_tol;
  j["config"]["mode"] = mode;
  emit_json(g, j);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "copectx: noncontextuality certification from prepare-measure "
      "statistics via rank separation"};
  app.require_subcommand(1);

  GlobalOpts g;

  auto* meqsd = app.add_subcommand(
      "meqsd", "Two-state discrimination case study and success-curve sweep");
  double cq = 0.5;
  std::optional<double> sq;
  std::string sweep, dump_cope;
  auto* cq_opt = meqsd->add_option("--cq", cq, "Confusability in [0, 1)");
  meqsd->add_option("--sq", sq,
                    "Success probability (default: optimal root)");
  auto* sweep_opt =
      meqsd->add_option("--sweep", sweep, "Sweep c_q over lo:hi:step");
  meqsd->add_option("--dump-cope", dump_cope,
                    "Also write the statistics matrix as CSV");
  add_global(meqsd, g);

  auto* sdc = app.add_subcommand(
      "sdc", "Two-state cloning case study: spectrum, verdict, coefficient "
             "scan");
  double phi = 0.0;
  std::optional<double> copt, dopt;
  bool search = false;
  sdc->add_option("--phi", phi, "Angle between the two states, in (0, pi/2)")
      ->required();
  sdc->add_option("--c", copt, "Clone coefficient c (default: optimal)");
  sdc->add_option("--d", dopt, "Clone coefficient d (default: optimal)");
  sdc->add_flag("--search", search, "Scan the constrained (c, d) curve");
  add_global(sdc, g);

  auto* cloning = app.add_subcommand(
      "cloning", "n-input cloning contextuality run (factored pipeline)");
  std::string task = "phase-covariant", model = "rotated";
  long long n = 12155, cap = 0, pairs = 0;
  double angle = 0.2;
  bool seeded = false;
  cloning->add_option("--task", task, "Input family")
      ->check(CLI::IsMember({"phase-covariant", "universal"}));
  cloning->add_option("--n", n, "Number of cloner inputs");
  cloning->add_option("--model", model, "Clone model")
      ->check(CLI::IsMember({"rotated", "ideal"}));
  cloning->add_option("--angle", angle, "Rotation angle for the clone model");
  cloning->add_flag("--seeded", seeded,
                    "Draw inputs from the seeded distribution");
  cloning->add_option("--cap", cap,
                      "Exhaustive antichain check up to this many "
                      "preparations");
  cloning->add_option("--pairs", pairs, "Sampled ordered pairs above the cap");
  add_global(cloning, g);

  auto* certify = app.add_subcommand(
      "certify", "Run the verdict pipeline on a fragment JSON file");
  std::string frag_path;
  bool run_enmf = false;
  certify->add_option("fragment", frag_path, "Fragment JSON path")->required();
  certify->add_flag("--enmf", run_enmf, "Also run the factorization search");
  add_global(certify, g);

  auto* nmf = app.add_subcommand(
      "nmf", "Nonnegative factorization search on a matrix CSV");
  std::string mat_path, nmf_mode = "plain";
  int k = 0, restarts = 50, max_iter = 20000;
  double success_tol = 1e-6;
  nmf->add_option("matrix", mat_path, "Matrix CSV path")->required();
  nmf->add_option("--k", k, "Inner dimension (default: matrix rank)");
  nmf->add_option("--restarts", restarts, "Random restarts");
  nmf->add_option("--max-iter", max_iter, "Update sweeps per restart");
  nmf->add_option("--success-tol", success_tol, "Residual success threshold");
  nmf->add_option("--mode", nmf_mode, "Constraint mode")
      ->check(CLI::IsMember({"plain", "ontological"}));
  add_global(nmf, g);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (meqsd->parsed()) {
      if (sweep.empty() && cq_opt->count() == 0 && !sweep_opt->count())
        throw copectx::InvalidParams("meqsd needs --cq or --sweep");
      return cmd_meqsd(g, cq, sq, sweep, dump_cope);
    }
    if (sdc->parsed()) return cmd_sdc(g, phi, copt, dopt, search);
    if (cloning->parsed())
      return cmd_cloning(g, task, n, model, angle, seeded, cap, pairs);
    if (certify->parsed()) return cmd_certify(g, frag_path, run_enmf);
    if (nmf->parsed())
      return cmd_nmf(g, mat_path, k, restarts, max_iter, success_tol,
                     nmf_mode);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const copectx::InvalidParams& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const copectx::DegenerateInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const copectx::DegenerateClone& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const copectx::NormalizationViolation& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const copectx::NoRootFound& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const copectx::DimensionMismatch& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 3;
  } catch (const copectx::DuplicateInput& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
