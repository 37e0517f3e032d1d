// qcx: batch verification of the quasi-convex, non-convexifiable family
// u(x, y, z) = z^a (x^a + y^a) / (x^a y^a) on the positive octant.
//
// Exit status: 0 all checks pass, 1 a numeric check failed, 2 bad config.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "qcx/report.hpp"

namespace {

std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = text.find(',', pos);
    const std::string item = text.substr(pos, comma == std::string::npos
                                                  ? std::string::npos
                                                  : comma - pos);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) {
      throw qcx::ConfigError(std::string("cannot parse ") + what + " '" +
                             text + "'");
    }
    out.push_back(v);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Numerical verification of a smooth quasi-convex function that no "
      "smooth strictly monotone F makes convex.\n"
      "Modes: verify-derivatives, quasiconvexity, convexifiability, "
      "alpha-one, lambda-search, full-suite."};

  std::string mode = "full-suite";
  std::vector<std::string> alpha_args;
  std::string point_arg;
  long long samples = 0;
  std::string seed_arg;
  std::string box_arg;
  std::string out_path;
  std::string format = "json";
  qcx::Tolerances tol;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  bool timing = false;

  app.add_option("--mode", mode, "Suite to run")
      ->check(CLI::IsMember({"verify-derivatives", "quasiconvexity",
                             "convexifiability", "alpha-one", "lambda-search",
                             "full-suite"}))
      ->capture_default_str();
  app.add_option("--alpha", alpha_args,
                 "Alpha value(s); repeatable or a comma ladder. Default per "
                 "mode: derivatives uniform [0.1, 3]; quasiconvexity "
                 "0.25,0.5,1,1.5,2; convexifiability 0.25,0.5,0.75,0.9; "
                 "alpha-one 1; lambda-search 1.05,1.1,1.25,1.5,2,3");
  auto* point_opt = app.add_option("--point", point_arg,
                                   "Fixed point x,y,z instead of sampling "
                                   "(lambda-search default 1,1,1)");
  auto* samples_opt = app.add_option(
      "--samples", samples,
      "Sample count. Default per mode: derivatives 1000, quasiconvexity "
      "100000, convexifiability 200, alpha-one 200, lambda-search 200 "
      "(neighbourhood samples)");
  app.add_option("--seed", seed_arg,
                 "RNG seed (falls back to $QCX_SEED, then " +
                     std::to_string(qcx::kDefaultSeed) + ")");
  app.add_option("--tol-grad", tol.grad, "Gradient oracle relative tolerance")
      ->capture_default_str();
  app.add_option("--tol-hess", tol.hess, "Hessian oracle relative tolerance")
      ->capture_default_str();
  app.add_option("--tol-cert", tol.cert,
                 "Certificate tolerance relative to |D^2u|_F |xi|^2")
      ->capture_default_str();
  auto* box_opt = app.add_option(
      "--box", box_arg,
      "Log-uniform coordinate range lo,hi. Default 0.1,10 (quasiconvexity "
      "0.05,20)");
  app.add_option("--out", out_path, "Write the report here instead of stdout");
  app.add_option("--format", format, "Report format")
      ->check(CLI::IsMember({"json", "csv", "text"}))
      ->capture_default_str();
  app.add_option("--threads", threads, "Worker threads for sample batches")
      ->capture_default_str();
  app.add_flag("--timing", timing,
               "Add wall_time_s to the report (breaks byte-identical output)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  qcx::RunConfig config;
  try {
    config.mode = qcx::parse_mode(mode);
    config.format = qcx::parse_format(format);
    for (const auto& a : alpha_args) {
      for (double v : parse_list(a, "--alpha")) config.alphas.push_back(v);
    }
    if (*point_opt) {
      const auto v = parse_list(point_arg, "--point");
      if (v.size() != 3) throw qcx::ConfigError("--point needs x,y,z");
      config.point = std::array<double, 3>{v[0], v[1], v[2]};
    }
    if (*samples_opt) config.samples = samples;
    if (*box_opt) {
      const auto v = parse_list(box_arg, "--box");
      if (v.size() != 2) throw qcx::ConfigError("--box needs lo,hi");
      config.box = qcx::Box{v[0], v[1]};
    }
    std::string seed_text = seed_arg;
    if (seed_text.empty()) {
      if (const char* env = std::getenv("QCX_SEED")) seed_text = env;
    }
    if (!seed_text.empty()) {
      std::size_t used = 0;
      config.seed = std::stoull(seed_text, &used);
      if (used != seed_text.size()) throw qcx::ConfigError("bad seed");
    }
    config.tol = tol;
    config.threads = threads;
    config.timing = timing;
    qcx::validate(config);
  } catch (const std::exception& e) {
    std::cerr << "qcx: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  qcx::RunOutcome outcome = qcx::run(config);
  if (out_path.empty()) {
    std::cout << outcome.output;
  } else {
    std::ofstream os(out_path, std::ios::binary);
    if (!os) {
      std::cerr << "qcx: cannot write " << out_path << "\n";
      return 2;
    }
    os << outcome.output;
  }
  if (outcome.exit_status != 0) {
    std::cerr << "qcx: " << outcome.failed_checks << " of " << outcome.checks
              << " checks failed\n";
  }
  return outcome.exit_status;
}
