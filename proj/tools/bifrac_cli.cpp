#include "bifrac/bifrac_op.hpp"
#include "bifrac/frft.hpp"
#include "bifrac/quasiprob.hpp"
#include "bifrac/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

namespace {

using namespace bifrac;
using ordered_json = nlohmann::ordered_json;

struct RunConfig {
  Index fock_dim = 32;
  Real window = 13.0;
  Index points = 261;
  Real theta1 = kPi / 3.0;
  Real theta2 = kPi / 5.0;
  std::string state = "vacuum";
  Real alpha = 0.0;
  Real beta = 0.0;
  Real alpha0 = 2.0;
  Real beta0 = 0.0;
  Real p = 0.5;
  Index resolution = 64;
  Real theta = kPi / 2.0;
  Real xmin = -3.0;
  Real xmax = 3.0;
  Index kernel_points = 61;

  std::map<std::string, std::string> as_map() const {
    auto fmt = [](Real v) {
      char buf[40];
      std::snprintf(buf, sizeof(buf), "%.17g", v);
      return std::string(buf);
    };
    return {{"fock_dim", std::to_string(fock_dim)},
            {"window", fmt(window)},
            {"points", std::to_string(points)},
            {"theta1", fmt(theta1)},
            {"theta2", fmt(theta2)},
            {"state", state},
            {"alpha", fmt(alpha)},
            {"beta", fmt(beta)},
            {"alpha0", fmt(alpha0)},
            {"beta0", fmt(beta0)},
            {"p", fmt(p)},
            {"resolution", std::to_string(resolution)},
            {"theta", fmt(theta)},
            {"xmin", fmt(xmin)},
            {"xmax", fmt(xmax)},
            {"kernel_points", std::to_string(kernel_points)}};
  }
};

void apply_key(RunConfig& cfg, const std::string& key,
               const std::string& value) {
  auto real_of = [&](const std::string& v) { return std::stod(v); };
  auto index_of = [&](const std::string& v) {
    return static_cast<Index>(std::stoll(v));
  };
  if (key == "fock_dim") cfg.fock_dim = index_of(value);
  else if (key == "window") cfg.window = real_of(value);
  else if (key == "points") cfg.points = index_of(value);
  else if (key == "theta1") cfg.theta1 = real_of(value);
  else if (key == "theta2") cfg.theta2 = real_of(value);
  else if (key == "state") cfg.state = value;
  else if (key == "alpha") cfg.alpha = real_of(value);
  else if (key == "beta") cfg.beta = real_of(value);
  else if (key == "alpha0") cfg.alpha0 = real_of(value);
  else if (key == "beta0") cfg.beta0 = real_of(value);
  else if (key == "p") cfg.p = real_of(value);
  else if (key == "resolution") cfg.resolution = index_of(value);
  else if (key == "theta") cfg.theta = real_of(value);
  else if (key == "xmin") cfg.xmin = real_of(value);
  else if (key == "xmax") cfg.xmax = real_of(value);
  else if (key == "kernel_points") cfg.kernel_points = index_of(value);
  else
    throw std::invalid_argument("unknown config key: " + key);
}

void load_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw std::invalid_argument("cannot open config file " + path);
  std::string line;
  while (std::getline(in, line)) {
    const auto hash_pos = line.find('#');
    if (hash_pos != std::string::npos)
      line = line.substr(0, hash_pos);
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      continue;
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return (b == std::string::npos) ? std::string() : s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!key.empty())
      apply_key(cfg, key, value);
  }
}

std::string config_hash(const RunConfig& cfg) {
  std::uint64_t h = 1469598103934665603ull;
  for (const auto& [k, v] : cfg.as_map())
    for (const char c : k + "=" + v + "\n") {
      h ^= static_cast<unsigned char>(c);
      h *= 1099511628211ull;
    }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

std::string fmt_real(Real v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

class Output {
public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_)
        throw std::invalid_argument("cannot open output file " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

private:
  std::ofstream file_;
};

FockOperator build_state(const RunConfig& cfg, const FockSpace& space) {
  if (cfg.state == "vacuum") {
    const CVec v = vacuum_state(space).amplitudes;
    return FockOperator(space, v * v.adjoint());
  }
  if (cfg.state == "coherent") {
    const CVec v = coherent_state(space, cfg.alpha, cfg.beta).amplitudes;
    return FockOperator(space, v * v.adjoint());
  }
  if (cfg.state == "cat")
    return cat_density(CatState{cfg.alpha0, cfg.beta0, cfg.p}, space);
  throw std::invalid_argument("unknown state spec: " + cfg.state);
}

void write_preamble(std::ostream& out, const RunConfig& cfg) {
  out << "# bifrac config-hash=" << config_hash(cfg)
      << " tolerances=pinned-r1\n";
}

int cmd_kernel(const RunConfig& cfg, const std::string& out_path) {
  const ReducedAngle r = reduce_angle(cfg.theta);
  if (r.is_delta()) {
    std::cerr << "kernel: theta is at a delta limit; Delta(x,y;theta) is "
                 "distributional there (identity/reflection), no table "
                 "emitted\n";
    return 2;
  }
  Output out(out_path);
  write_preamble(out.stream(), cfg);
  out.stream() << "x,y,re,im\n";
  const SampledAxis ax(cfg.xmin, cfg.xmax, cfg.kernel_points);
  for (Index i = 0; i < ax.n_points; ++i)
    for (Index j = 0; j < ax.n_points; ++j) {
      const Complex v = kernel_eval(ax[i], ax[j], cfg.theta);
      out.stream() << fmt_real(ax[i]) << ',' << fmt_real(ax[j]) << ','
                   << fmt_real(v.real()) << ',' << fmt_real(v.imag()) << '\n';
    }
  return 0;
}

int cmd_afunction(const RunConfig& cfg, const std::string& out_path) {
  const FockSpace space(cfg.fock_dim);
  const FockOperator rho = build_state(cfg, space);
  AFunctionOptions opt;
  opt.window = cfg.window;
  opt.points = cfg.points;
  const AFunction a =
      a_function(rho, AnglePair(cfg.theta1, cfg.theta2), opt);
  Output out(out_path);
  write_preamble(out.stream(), cfg);
  out.stream() << "alpha,beta,re,im\n";
  for (Index i = 0; i < a.grid.axis1.n_points; ++i)
    for (Index j = 0; j < a.grid.axis2.n_points; ++j)
      out.stream() << fmt_real(a.grid.axis1[i]) << ','
                   << fmt_real(a.grid.axis2[j]) << ','
                   << fmt_real(a.grid.values(i, j).real()) << ','
                   << fmt_real(a.grid.values(i, j).imag()) << '\n';
  return 0;
}

int cmd_moments(const RunConfig& cfg, const std::string& out_path) {
  const FockSpace space(cfg.fock_dim);
  const FockOperator rho = build_state(cfg, space);
  AFunctionOptions opt;
  opt.window = cfg.window;
  opt.points = cfg.points;
  const AFunction a =
      a_function(rho, AnglePair(cfg.theta1, cfg.theta2), opt);
  const InterpolatingMoments m = interpolating_moments(a);
  Output out(out_path);
  write_preamble(out.stream(), cfg);
  out.stream() << "mean_alpha,mean_beta,delta_alpha,delta_beta,purity\n"
               << fmt_real(m.mean_alpha) << ',' << fmt_real(m.mean_beta) << ','
               << fmt_real(m.delta_alpha) << ',' << fmt_real(m.delta_beta)
               << ',' << fmt_real(a.purity) << '\n';
  return 0;
}

int cmd_ufrac(const RunConfig& cfg, const std::string& out_path) {
  const FockSpace space(cfg.fock_dim);
  const BifracOperator u = build_bifrac(
      cfg.alpha, cfg.beta, AnglePair(cfg.theta1, cfg.theta2), space);
  Output out(out_path);
  write_preamble(out.stream(), cfg);
  out.stream() << "m,n,re,im\n";
  for (Index m = 0; m < space.dim; ++m)
    for (Index n = 0; n < space.dim; ++n)
      out.stream() << m << ',' << n << ','
                   << fmt_real(u.op.matrix(m, n).real()) << ','
                   << fmt_real(u.op.matrix(m, n).imag()) << '\n';
  return 0;
}

int cmd_fig(FigureKind which, const RunConfig& cfg,
            const std::string& out_path) {
  const FockSpace space(cfg.fock_dim);
  AFunctionOptions opt;
  opt.window = cfg.window;
  opt.points = cfg.points;
  const auto rows = figure_curves(which, cfg.resolution, space, opt);
  Output out(out_path);
  write_preamble(out.stream(), cfg);
  out.stream() << (which == FigureKind::Fig2 ? "theta2" : "p")
               << ",delta_alpha,delta_beta,product,masked\n";
  for (const FigRow& r : rows)
    out.stream() << fmt_real(r.x) << ',' << fmt_real(r.delta_alpha) << ','
                 << fmt_real(r.delta_beta) << ',' << fmt_real(r.product) << ','
                 << (r.masked ? 1 : 0) << '\n';
  return 0;
}

Real json_safe(Real v) {
  if (!std::isfinite(v))
    return 1e300;
  return v;
}

int cmd_verify(const RunConfig& cfg, const std::string& suite, bool quick,
               const std::string& out_path) {
  VerifyConfig vcfg;
  vcfg.fock_dim = cfg.fock_dim;
  vcfg.window = cfg.window;
  vcfg.points = cfg.points;
  vcfg.theta1 = cfg.theta1;
  vcfg.theta2 = cfg.theta2;
  vcfg.quick = quick;

  std::vector<std::string> to_run;
  if (suite == "all")
    to_run = suite_names();
  else
    to_run.push_back(suite);

  ordered_json doc;
  doc["config_hash"] = config_hash(cfg);
  ordered_json jcfg;
  for (const auto& [k, v] : cfg.as_map())
    jcfg[k] = v;
  doc["config"] = jcfg;
  doc["quick"] = quick;
  bool all_pass = true;
  doc["suites"] = ordered_json::array();
  for (const std::string& name : to_run) {
    const SuiteReport rep = run_suite(name, vcfg);
    ordered_json jrep;
    jrep["suite"] = rep.suite;
    jrep["pass"] = rep.pass;
    jrep["seconds"] = rep.seconds;
    jrep["checks"] = ordered_json::array();
    for (const CheckResult& c : rep.checks) {
      ordered_json jc;
      jc["name"] = c.name;
      jc["measured"] = json_safe(c.measured);
      jc["tolerance"] = c.tolerance;
      jc["pass"] = c.pass;
      if (!c.details.empty())
        jc["details"] = c.details;
      jrep["checks"].push_back(jc);
    }
    doc["suites"].push_back(jrep);
    all_pass = all_pass && rep.pass;
  }
  doc["pass"] = all_pass;

  Output out(out_path);
  out.stream() << doc.dump(2) << '\n';
  return all_pass ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"bifractional phase-space engine"};
  app.require_subcommand(1);
  app.fallthrough(); // global flags may follow the subcommand

  RunConfig cfg;
  std::string config_path, out_path, suite = "all";
  bool quick = false;

  app.add_option("--config", config_path, "key=value config file");
  app.add_option("--out", out_path, "output path (default stdout)");

  // flag overrides applied after the config file
  std::map<std::string, std::string> overrides;
  auto add_override = [&](const std::string& flag, const std::string& key) {
    app.add_option_function<std::string>(
        flag, [&overrides, key](const std::string& v) { overrides[key] = v; });
  };
  add_override("--fock-dim", "fock_dim");
  add_override("--window", "window");
  add_override("--points", "points");
  add_override("--theta1", "theta1");
  add_override("--theta2", "theta2");
  add_override("--theta", "theta");
  add_override("--state", "state");
  add_override("--alpha", "alpha");
  add_override("--beta", "beta");
  add_override("--resolution", "resolution");

  CLI::App* c_kernel = app.add_subcommand("kernel", "tabulate Delta(x,y;theta)");
  CLI::App* c_afun = app.add_subcommand("afunction", "tabulate A(alpha,beta)");
  CLI::App* c_fig2 = app.add_subcommand("fig2", "uncertainty sweep over theta2");
  CLI::App* c_fig3 = app.add_subcommand("fig3", "uncertainty sweep over p");
  CLI::App* c_verify = app.add_subcommand("verify", "run invariant suites");
  CLI::App* c_ufrac = app.add_subcommand("ufrac", "dump a U matrix");
  CLI::App* c_moments = app.add_subcommand("moments", "interpolating moments");
  c_verify->add_option("--suite", suite, "suite name or 'all'");
  c_verify->add_flag("--quick", quick, "reduced battery sizes");

  CLI11_PARSE(app, argc, argv);

  try {
    if (!config_path.empty())
      load_config_file(cfg, config_path);
    for (const auto& [k, v] : overrides)
      apply_key(cfg, k, v);

    if (c_kernel->parsed())
      return cmd_kernel(cfg, out_path);
    if (c_afun->parsed())
      return cmd_afunction(cfg, out_path);
    if (c_fig2->parsed())
      return cmd_fig(bifrac::FigureKind::Fig2, cfg, out_path);
    if (c_fig3->parsed())
      return cmd_fig(bifrac::FigureKind::Fig3, cfg, out_path);
    if (c_ufrac->parsed())
      return cmd_ufrac(cfg, out_path);
    if (c_moments->parsed())
      return cmd_moments(cfg, out_path);
    if (c_verify->parsed())
      return cmd_verify(cfg, suite, quick, out_path);
  } catch (const bifrac::convergence_failure_error& e) {
    std::cerr << "non-convergence: " << e.what() << '\n';
    return 3;
  } catch (const bifrac::stencil_too_coarse_error& e) {
    std::cerr << "non-convergence: " << e.what() << '\n';
    return 3;
  } catch (const bifrac::unitarity_failure_error& e) {
    std::cerr << "non-convergence: " << e.what() << '\n';
    return 3;
  } catch (const bifrac::negative_variance_error& e) {
    std::cerr << "non-convergence: " << e.what() << '\n';
    return 3;
  } catch (const bifrac::imaginary_residue_error& e) {
    std::cerr << "non-convergence: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
