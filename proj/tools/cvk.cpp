// cvk: evaluate the Virasoro fusion kernel, its confluent family, the first
// two levels of the q-Askey scheme, and run the verification suites.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "cvk/confluent.hpp"
#include "cvk/fusion.hpp"
#include "cvk/qaskey.hpp"
#include "cvk/verify.hpp"

using namespace cvk;

namespace {

Complex parse_complex(const std::string& s) {
  // accepts "a", "a,b", or "a+bi" / "a-bi"
  std::string t = s;
  const auto comma = t.find(',');
  if (comma != std::string::npos)
    return {std::stod(t.substr(0, comma)), std::stod(t.substr(comma + 1))};
  if (t.size() > 1 && (t.back() == 'i' || t.back() == 'I')) {
    t.pop_back();
    const auto split = t.find_last_of("+-");
    if (split != std::string::npos && split > 0)
      return {std::stod(t.substr(0, split)), std::stod(t.substr(split))};
    return {0.0, std::stod(t)};
  }
  return {std::stod(t), 0.0};
}

struct EvalArgs {
  std::string target;
  double b = 0.7;
  double th0 = 0.3, tht = -0.2, th1 = 0.5, thinf = 0.1, thstar = 0.4;
  std::string sigma_s = "0.4", sigma_t = "0.6", nu = "0.25", z = "1.0", x = "1.0";
  std::string alpha = "0.9", beta = "1.1", gamma = "0.8", delta = "1.2", q;
  int k = 1, n = 0;
  bool csv = false;
};

struct Evaluation {
  Complex value;
  double err = 0.0;
};

Evaluation evaluate(const EvalArgs& a) {
  const BParameter bp(a.b);
  QuadratureSettings qs;
  qs.rel_tol = 1e-10;
  qs.abs_tol = 1e-12;
  const Complex sig_s = parse_complex(a.sigma_s), sig_t = parse_complex(a.sigma_t);
  const Complex nu = parse_complex(a.nu);

  if (a.target == "sb") {
    const SpecialValue v = sb(parse_complex(a.z), bp);
    if (v.is_pole()) throw SingularPoint("sb: pole of order " + std::to_string(v.order));
    return {v.value, 1e-13};
  }
  if (a.target == "gb") {
    const SpecialValue v = gb(parse_complex(a.z), bp);
    if (v.is_pole()) throw SingularPoint("gb: pole of order " + std::to_string(v.order));
    return {v.value, 1e-13};
  }
  if (a.target == "F" || a.target == "Fren") {
    const FusionParams p{bp, a.th0, a.tht, a.th1, a.thinf, sig_s, sig_t};
    const KernelValue v = a.target == "F" ? fusion_kernel(p, qs) : fren(p, qs);
    return {v.value, v.quadrature_err};
  }
  if (a.target == "Ck" || a.target == "CkRen" || a.target == "ChatRen") {
    const ConfluentParams p{bp, a.th0, a.tht, a.thstar, nu, sig_s, a.k};
    const KernelValue v = a.target == "Ck"      ? ck_kernel(p, qs)
                          : a.target == "CkRen" ? ck_ren(p, qs)
                                                : chat_ren(p, qs);
    return {v.value, v.quadrature_err};
  }
  const Complex q = a.q.empty() ? bp.q : parse_complex(a.q);
  if (a.target == "An") {
    const AWParams p{parse_complex(a.alpha), parse_complex(a.beta), parse_complex(a.gamma),
                     parse_complex(a.delta), q};
    return {askey_wilson(a.n, parse_complex(a.z), p), 0.0};
  }
  if (a.target == "Hn")
    return {hahn(a.n, parse_complex(a.z), parse_complex(a.alpha), parse_complex(a.beta),
                 parse_complex(a.gamma), q),
            0.0};
  if (a.target == "Jn")
    return {jacobi(a.n, parse_complex(a.x), parse_complex(a.alpha), parse_complex(a.beta),
                   parse_complex(a.gamma), q),
            0.0};
  throw UsageError("unknown eval target: " + a.target);
}

void set_param(EvalArgs& a, const std::string& name, double value) {
  std::ostringstream os;
  os.precision(17);
  os << value;
  const std::string s = os.str();
  if (name == "b") a.b = value;
  else if (name == "theta0") a.th0 = value;
  else if (name == "thetat") a.tht = value;
  else if (name == "theta1") a.th1 = value;
  else if (name == "thetainf") a.thinf = value;
  else if (name == "thetastar") a.thstar = value;
  else if (name == "sigmas") a.sigma_s = s;
  else if (name == "sigmat") a.sigma_t = s;
  else if (name == "nu") a.nu = s;
  else if (name == "z") a.z = s;
  else if (name == "x") a.x = s;
  else throw UsageError("cannot sweep parameter: " + name);
}

// flat key = value config file, a TOML-compatible subset
void load_config_file(const std::string& path, SuiteConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw ConfigInvalid("cannot open config file: " + path);
  std::string line;
  int lineno = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r\"");
    const auto e = s.find_last_not_of(" \t\r\"");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigInvalid("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "seed") cfg.seed = std::stoull(value);
    else if (key == "points") cfg.points = std::stoi(value);
    else if (key == "n_max") cfg.n_max = std::stoi(value);
    else if (key == "rel_tol") cfg.quadrature.rel_tol = std::stod(value);
    else if (key == "abs_tol") cfg.quadrature.abs_tol = std::stod(value);
    else if (key == "lambda_list" || key == "k_list") {
      std::vector<double> vals;
      std::stringstream ss(value);
      std::string item;
      while (std::getline(ss, item, ',')) vals.push_back(std::stod(trim(item)));
      if (key == "lambda_list") {
        cfg.lambda_list = vals;
      } else {
        cfg.k_list.clear();
        for (double v : vals) cfg.k_list.push_back(static_cast<int>(v));
      }
    } else if (key.rfind("tol.", 0) == 0) {
      cfg.tolerances[key.substr(4)] = std::stod(value);
    } else {
      throw ConfigInvalid("config line " + std::to_string(lineno) + ": unknown key " + key);
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cvk: Virasoro fusion kernels, confluent family, and q-Askey checks"};
  app.require_subcommand(1);

  EvalArgs ea;
  bool json_out = true;
  CLI::App* eval = app.add_subcommand("eval", "evaluate a kernel or polynomial");
  eval->add_option("target", ea.target, "sb gb F Fren Ck CkRen ChatRen An Hn Jn")->required();
  eval->add_option("--b", ea.b);
  eval->add_option("--theta0", ea.th0);
  eval->add_option("--thetat", ea.tht);
  eval->add_option("--theta1", ea.th1);
  eval->add_option("--thetainf", ea.thinf);
  eval->add_option("--thetastar", ea.thstar);
  eval->add_option("--sigmas", ea.sigma_s);
  eval->add_option("--sigmat", ea.sigma_t);
  eval->add_option("--nu", ea.nu);
  eval->add_option("--z", ea.z, "complex as re,im");
  eval->add_option("--x", ea.x);
  eval->add_option("--alpha", ea.alpha);
  eval->add_option("--beta", ea.beta);
  eval->add_option("--gamma", ea.gamma);
  eval->add_option("--delta", ea.delta);
  eval->add_option("--q", ea.q, "defaults to e^{2 i pi b^2}");
  eval->add_option("--k", ea.k);
  eval->add_option("--n", ea.n);
  eval->add_flag("--json", json_out, "JSON output (default)");
  eval->add_flag("--csv", ea.csv, "CSV output");

  EvalArgs sa;
  std::string vary = "sigmas";
  double from = 0.1, to = 0.8;
  int steps = 8;
  CLI::App* sweep = app.add_subcommand("sweep", "evaluate over a one-parameter grid (CSV)");
  sweep->add_option("target", sa.target)->required();
  sweep->add_option("--vary", vary)->required();
  sweep->add_option("--from", from)->required();
  sweep->add_option("--to", to)->required();
  sweep->add_option("--steps", steps)->required();
  sweep->add_option("--b", sa.b);
  sweep->add_option("--theta0", sa.th0);
  sweep->add_option("--thetat", sa.tht);
  sweep->add_option("--theta1", sa.th1);
  sweep->add_option("--thetainf", sa.thinf);
  sweep->add_option("--thetastar", sa.thstar);
  sweep->add_option("--sigmas", sa.sigma_s);
  sweep->add_option("--sigmat", sa.sigma_t);
  sweep->add_option("--nu", sa.nu);
  sweep->add_option("--z", sa.z);
  sweep->add_option("--x", sa.x);
  sweep->add_option("--alpha", sa.alpha);
  sweep->add_option("--beta", sa.beta);
  sweep->add_option("--gamma", sa.gamma);
  sweep->add_option("--delta", sa.delta);
  sweep->add_option("--q", sa.q);
  sweep->add_option("--k", sa.k);
  sweep->add_option("--n", sa.n);

  std::string suite_name = "all";
  std::string config_path;
  uint64_t seed_flag = 0;
  CLI::App* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("suite", suite_name, "special qseries qaskey fusion confluent limits all");
  verify->add_option("--config", config_path, "flat key = value config file");
  CLI::Option* seed_opt = verify->add_option("--seed", seed_flag);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (eval->parsed()) {
      const Evaluation v = evaluate(ea);
      if (ea.csv) {
        std::printf("target,re,im,err\n%s,%.17g,%.17g,%.3g\n", ea.target.c_str(), v.value.real(),
                    v.value.imag(), v.err);
      } else {
        nlohmann::json j;
        j["target"] = ea.target;
        j["value"] = {{"re", v.value.real()}, {"im", v.value.imag()}};
        j["err_estimate"] = v.err;
        std::cout << j.dump(2) << "\n";
      }
      return 0;
    }
    if (sweep->parsed()) {
      std::printf("%s,re,im,err\n", vary.c_str());
      for (int i = 0; i < steps; ++i) {
        const double value = steps == 1 ? from : from + (to - from) * i / (steps - 1);
        set_param(sa, vary, value);
        const Evaluation v = evaluate(sa);
        std::printf("%.17g,%.17g,%.17g,%.3g\n", value, v.value.real(), v.value.imag(), v.err);
      }
      return 0;
    }
    if (verify->parsed()) {
      SuiteConfig cfg;
      if (!config_path.empty()) load_config_file(config_path, cfg);
      if (seed_opt->count() > 0) cfg.seed = seed_flag;
      const VerificationReport report = run_suite(cfg, suite_from_name(suite_name));
      std::cout << report_to_json(report) << "\n";
      return std::min(report.failed, 125);
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 64;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 70;
  }
  return 0;
}
