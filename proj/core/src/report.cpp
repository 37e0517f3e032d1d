#include "qcx/report.hpp"

#include <algorithm>
#include <chrono>
#include <deque>
#include <cmath>
#include <functional>
#include <iomanip>
#include <limits>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "qcx/compose.hpp"
#include "qcx/convexifiability.hpp"
#include "qcx/extended.hpp"
#include "qcx/fd.hpp"
#include "qcx/field.hpp"
#include "qcx/lambda_search.hpp"
#include "qcx/monotone.hpp"
#include "qcx/quasiconvexity.hpp"
#include "qcx/sampling.hpp"

namespace qcx {

using json = nlohmann::ordered_json;

std::string to_string(Mode m) {
  switch (m) {
    case Mode::verify_derivatives: return "verify-derivatives";
    case Mode::quasiconvexity: return "quasiconvexity";
    case Mode::convexifiability: return "convexifiability";
    case Mode::alpha_one: return "alpha-one";
    case Mode::lambda_search: return "lambda-search";
    case Mode::full_suite: return "full-suite";
  }
  return "?";
}

Mode parse_mode(const std::string& s) {
  for (Mode m : {Mode::verify_derivatives, Mode::quasiconvexity,
                 Mode::convexifiability, Mode::alpha_one, Mode::lambda_search,
                 Mode::full_suite}) {
    if (to_string(m) == s) return m;
  }
  throw ConfigError("unknown mode '" + s + "'");
}

std::string to_string(OutputFormat f) {
  switch (f) {
    case OutputFormat::json: return "json";
    case OutputFormat::csv: return "csv";
    case OutputFormat::text: return "text";
  }
  return "?";
}

OutputFormat parse_format(const std::string& s) {
  if (s == "json") return OutputFormat::json;
  if (s == "csv") return OutputFormat::csv;
  if (s == "text") return OutputFormat::text;
  throw ConfigError("unknown output format '" + s + "'");
}

namespace {

constexpr std::size_t kMaxRecords = 10;
constexpr double kMuTol = 1e-10;
constexpr double kEulerTol = 1e-10;
constexpr double kHomogeneityTol = 1e-12;
constexpr double kUxyAbsTol = 1e-6;
constexpr double kDeterminantTol = 1e-8;
constexpr double kNearOne = 1e-3;

const std::vector<double> kDerivativeAlphaRange{0.1, 3.0};
const std::vector<double> kQuasiconvexityLadder{0.25, 0.5, 1.0, 1.5, 2.0};
const std::vector<double> kCertificateLadder{0.25, 0.5, 0.75, 0.9};
const std::vector<double> kLambdaLadder{1.05, 1.1, 1.25, 1.5, 2.0, 3.0};

struct ModeDefaults {
  long long samples;
  Box box;
};

ModeDefaults defaults_for(Mode m) {
  switch (m) {
    case Mode::verify_derivatives: return {1000, {0.1, 10.0}};
    case Mode::quasiconvexity: return {100000, {0.05, 20.0}};
    case Mode::convexifiability: return {200, {0.1, 10.0}};
    case Mode::alpha_one: return {200, {0.1, 10.0}};
    case Mode::lambda_search: return {200, {0.1, 10.0}};
    case Mode::full_suite: return {0, {0.1, 10.0}};
  }
  return {1, {0.1, 10.0}};
}

json point_json(const PointE& p) { return json::array({p.x(), p.y(), p.z()}); }
json vec_json(const Vec3& v) { return json::array({v[0], v[1], v[2]}); }

/// One named check: counts, failures, the worst observed metric and the
/// inputs of the first failing samples.
struct Check {
  std::string mode;
  std::string name;
  std::string metric;
  double threshold = 0.0;
  bool higher_is_worse = true;

  std::size_t count = 0;
  std::size_t failures = 0;
  double worst = std::numeric_limits<double>::quiet_NaN();
  json worst_record;
  json failing_records = json::array();

  void observe(double value, bool ok, const std::function<json()>& record) {
    ++count;
    const bool worse = std::isnan(worst) ||
                       (higher_is_worse ? value > worst : value < worst);
    if (!ok) {
      ++failures;
      if (failing_records.size() < kMaxRecords) {
        failing_records.push_back(record());
      }
    }
    if (worse) {
      worst = value;
      worst_record = record();
    }
  }

  bool passed() const { return count > 0 && failures == 0; }

  json to_json() const {
    json j;
    j["mode"] = mode;
    j["check"] = name;
    j["passed"] = passed();
    j["count"] = count;
    j["failures"] = failures;
    j["metric"] = metric;
    j["threshold"] = threshold;
    j["worst"] = std::isnan(worst) ? json(nullptr) : json(worst);
    j["worst_record"] = worst_record;
    j["failing_records"] = failing_records;
    return j;
  }
};

struct Suite {
  // deque: add() hands out references that must survive later adds.
  std::deque<Check> checks;
  json certificates = json::array();
  json sign_flips = json::array();
  json lambda_results = json::array();
  json warnings = json::array();
  json modes = json::array();

  Check& add(std::string mode, std::string name, std::string metric,
             double threshold, bool higher_is_worse = true) {
    Check& c = checks.emplace_back();
    c.mode = std::move(mode);
    c.name = std::move(name);
    c.metric = std::move(metric);
    c.threshold = threshold;
    c.higher_is_worse = higher_is_worse;
    return c;
  }
};

template <class Fn>
void parallel_for(std::size_t n, unsigned threads, Fn fn) {
  threads = std::max(1u, threads);
  if (threads == 1 || n < 2 * threads) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::jthread> pool;
  const std::size_t chunk = (n + threads - 1) / threads;
  for (std::size_t b = 0; b < n; b += chunk) {
    pool.emplace_back([&fn, b, e = std::min(n, b + chunk)] {
      for (std::size_t i = b; i < e; ++i) fn(i);
    });
  }
}

struct Resolved {
  Mode mode;
  long long samples;
  Box box;
  std::vector<double> alphas;
  std::optional<PointE> point;
};

Resolved resolve(const RunConfig& c, Mode m) {
  const ModeDefaults d = defaults_for(m);
  Resolved r{m, c.samples.value_or(d.samples), c.box.value_or(d.box), c.alphas,
             std::nullopt};
  if (c.point) r.point = PointE((*c.point)[0], (*c.point)[1], (*c.point)[2]);
  if (r.alphas.empty()) {
    switch (m) {
      case Mode::quasiconvexity: r.alphas = kQuasiconvexityLadder; break;
      case Mode::convexifiability: r.alphas = kCertificateLadder; break;
      case Mode::alpha_one: r.alphas = {1.0}; break;
      case Mode::lambda_search: r.alphas = kLambdaLadder; break;
      default: break;
    }
  }
  return r;
}

json resolved_json(const Resolved& r) {
  json j;
  j["mode"] = to_string(r.mode);
  j["samples"] = r.samples;
  j["box"] = json::array({r.box.lo, r.box.hi});
  if (r.mode == Mode::verify_derivatives && r.alphas.empty()) {
    j["alpha"] = {{"uniform", kDerivativeAlphaRange}};
  } else {
    j["alpha"] = r.alphas;
  }
  j["point"] = r.point ? point_json(*r.point) : json(nullptr);
  return j;
}

std::vector<PointE> sample_points(const Resolved& r, Sampler& s,
                                  std::size_t n) {
  std::vector<PointE> out;
  if (r.point) {
    out.push_back(*r.point);
    return out;
  }
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(s.point(r.box.lo, r.box.hi));
  return out;
}

// --- verify-derivatives ----------------------------------------------------

void run_derivatives(const RunConfig& cfg, const Resolved& r, Suite& suite) {
  Sampler sampler(cfg.seed, static_cast<std::uint64_t>(Mode::verify_derivatives));
  struct Input {
    PointE p;
    double alpha;
    double s;
  };
  std::vector<Input> inputs;
  const std::size_t n = r.point ? std::max<std::size_t>(r.alphas.size(), 1)
                                : static_cast<std::size_t>(r.samples);
  for (std::size_t i = 0; i < n; ++i) {
    const PointE p = r.point ? *r.point : sampler.point(r.box.lo, r.box.hi);
    const double a = r.alphas.empty()
                         ? sampler.uniform(kDerivativeAlphaRange[0],
                                           kDerivativeAlphaRange[1])
                         : r.alphas[i % r.alphas.size()];
    inputs.push_back({p, a, sampler.log_uniform(0.1, 10.0)});
  }

  struct Out {
    double grad_rel, hess_rel, uxy_abs, euler_orth, euler_hess, homog_u,
        homog_g, projection;
  };
  std::vector<Out> out(inputs.size());
  parallel_for(inputs.size(), cfg.threads, [&](std::size_t i) {
    const auto& in = inputs[i];
    const Alpha a(in.alpha);
    const Vec3 g = grad_u(in.p, a);
    const Sym3 h = hess_u(in.p, a);
    const extended::UField field{in.alpha};
    const Vec3 g_fd = fd_gradient<extended::quad>(
        field, in.p, StepPolicy::gradient());
    const Sym3 h_fd = fd_hessian<extended::quad>(field, in.p,
                                                 StepPolicy::hessian());
    const Vec3 pv(in.p);
    const double u = eval_u(in.p, a);
    const PointE sp = in.p.scaled(in.s);
    const Vec3 g_s = grad_u(sp, a);
    double homog_g = 0.0;
    for (int k = 0; k < 3; ++k) {
      homog_g = std::max(homog_g, std::abs(g_s[k] * in.s - g[k]) / std::abs(g[k]));
    }
    out[i] = {norm(g - g_fd) / norm(g),
              (h - h_fd).frobenius() / (1.0 + h.frobenius()),
              std::abs(h_fd.xy),
              std::abs(dot(g, pv)) / (norm(g) * norm(pv)),
              norm(h.apply(pv) + g) / (h.frobenius() * norm(pv) + norm(g)),
              std::abs(eval_u(sp, a) - u) / u,
              homog_g,
              std::abs(u - eval_v(in.p.x() / in.p.z(), in.p.y() / in.p.z(), a)) / u};
  });

  const std::string mode = to_string(Mode::verify_derivatives);
  Check& grad = suite.add(mode, "gradient_oracle",
                          "|grad - fd| / |grad|", cfg.tol.grad);
  Check& hess = suite.add(mode, "hessian_oracle",
                          "|H - fd|_F / (1 + |H|_F)", cfg.tol.hess);
  Check& uxy = suite.add(mode, "hessian_uxy_zero", "|fd u_xy|", kUxyAbsTol);
  Check& orth = suite.add(mode, "euler_orthogonality",
                          "|<Du, p>| / (|Du| |p|)", kEulerTol);
  Check& ehess = suite.add(mode, "euler_hessian_identity",
                           "|D^2u p + Du| / (|D^2u|_F |p| + |Du|)", kEulerTol);
  Check& hu = suite.add(mode, "homogeneity_value",
                        "|u(s p) - u(p)| / u(p)", kHomogeneityTol);
  Check& hg = suite.add(mode, "homogeneity_gradient",
                        "max_i |s Du_i(s p) - Du_i(p)| / |Du_i(p)|", 1e-10);
  Check& proj = suite.add(mode, "u_equals_v_projection",
                          "|u - v(x/z, y/z)| / u", kHomogeneityTol);

  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const auto& in = inputs[i];
    const auto& o = out[i];
    auto record = [&] {
      return json{{"index", i}, {"point", point_json(in.p)},
                  {"alpha", in.alpha}, {"scale", in.s}};
    };
    grad.observe(o.grad_rel, o.grad_rel <= cfg.tol.grad, record);
    hess.observe(o.hess_rel, o.hess_rel <= cfg.tol.hess, record);
    uxy.observe(o.uxy_abs, o.uxy_abs <= kUxyAbsTol, record);
    orth.observe(o.euler_orth, o.euler_orth <= kEulerTol, record);
    ehess.observe(o.euler_hess, o.euler_hess <= kEulerTol, record);
    hu.observe(o.homog_u, o.homog_u <= kHomogeneityTol, record);
    hg.observe(o.homog_g, o.homog_g <= 1e-10, record);
    proj.observe(o.projection, o.projection <= kHomogeneityTol, record);
  }
}

// --- quasiconvexity --------------------------------------------------------

void run_quasiconvexity(const RunConfig& cfg, const Resolved& r, Suite& suite) {
  Sampler sampler(cfg.seed, static_cast<std::uint64_t>(Mode::quasiconvexity));
  std::vector<SegmentSample> samples;
  std::vector<double> alphas;
  samples.reserve(static_cast<std::size_t>(r.samples));
  for (long long i = 0; i < r.samples; ++i) {
    const PointE p1 = r.point ? *r.point : sampler.point(r.box.lo, r.box.hi);
    const PointE p2 = sampler.point(r.box.lo, r.box.hi);
    samples.emplace_back(p1, p2, sampler.uniform(0.0, 1.0));
    alphas.push_back(r.alphas[static_cast<std::size_t>(i) % r.alphas.size()]);
  }

  const QuasiconvexityBatch batch = run_quasiconvexity_batch(
      samples, alphas, cfg.tol.segment, kMuTol, cfg.threads);

  const std::string mode = to_string(Mode::quasiconvexity);
  auto record = [&](std::size_t i) {
    const auto& s = samples[i];
    const Alpha a(alphas[i]);
    const SegmentResult seg = segment_test(s, a, cfg.tol.segment);
    const MuIdentity mu = mu_identity_check(s.p1, s.p2, s.lambda, a);
    return json{{"index", i},
                {"p1", point_json(s.p1)},
                {"p2", point_json(s.p2)},
                {"lambda", s.lambda},
                {"alpha", alphas[i]},
                {"u_combination", seg.value},
                {"max_endpoint", seg.max_end},
                {"margin", seg.margin},
                {"mu_relative_residual", mu.relative}};
  };

  // Batch counters are authoritative; records are rebuilt only for the
  // failing and worst samples.
  auto summarize = [&](std::string name, std::string metric, double threshold,
                       std::size_t fails, double worst, std::size_t worst_i,
                       auto&& is_fail) {
    Check& c = suite.add(mode, std::move(name), std::move(metric), threshold);
    c.count = batch.samples;
    c.failures = fails;
    c.worst = worst;
    c.worst_record = record(worst_i);
    for (std::size_t i : batch.failing_indices) {
      if (c.failing_records.size() >= kMaxRecords) break;
      if (is_fail(i)) c.failing_records.push_back(record(i));
    }
  };
  summarize("segment_inequality",
            "(u(comb) - max(u(p1), u(p2))) / (1 + |max|)", cfg.tol.segment,
            batch.violations, batch.worst_margin_ratio, batch.worst_index,
            [&](std::size_t i) {
              return !segment_test(samples[i], Alpha(alphas[i]), cfg.tol.segment).pass;
            });
  {
    std::size_t worst_i = 0;
    double worst = -1e300;
    for (std::size_t i = 0; i < samples.size(); ++i) {
      const ChainInequality ch = chain_inequality(samples[i], Alpha(alphas[i]),
                                                  cfg.tol.segment);
      const double m = (ch.u_combination - ch.mu_average) /
                       (1.0 + std::abs(ch.max_end));
      if (m > worst) {
        worst = m;
        worst_i = i;
      }
    }
    summarize("chain_inequality",
              "(u(comb) - mu1 u(p1) - mu2 u(p2)) / (1 + |max|)",
              cfg.tol.segment, batch.chain_violations, worst, worst_i,
              [&](std::size_t i) {
                return !chain_inequality(samples[i], Alpha(alphas[i]),
                                         cfg.tol.segment).pass;
              });
  }
  summarize("mu_identity", "|u(comb) - v(mu mixture)| / u(comb)", kMuTol,
            batch.mu_violations, batch.worst_mu_relative, batch.worst_mu_index,
            [&](std::size_t i) {
              const auto& s = samples[i];
              return mu_identity_check(s.p1, s.p2, s.lambda, Alpha(alphas[i]))
                         .relative > kMuTol;
            });

  Check& weights = suite.add(mode, "mu_weights", "|mu1 + mu2 - 1|", 1e-12);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    const MuWeights mu = mu_decompose(s.p1, s.p2, s.lambda);
    const double dev = std::abs(mu.mu1 + mu.mu2 - 1.0);
    weights.observe(dev, dev <= 1e-12 && mu.mu1 >= 0.0 && mu.mu2 >= 0.0,
                    [&] { return record(i); });
  }

  Check& vconv = suite.add(mode, "v_convexity",
                           "max (v(mid) - avg) / avg over grid pairs", 1e-12);
  std::vector<std::pair<double, double>> grid;
  const double lo = r.box.lo / r.box.hi, hi = r.box.hi / r.box.lo;
  constexpr int kGrid = 8;
  for (int i = 0; i < kGrid; ++i) {
    for (int j = 0; j < kGrid; ++j) {
      const double fi = static_cast<double>(i) / (kGrid - 1);
      const double fj = static_cast<double>(j) / (kGrid - 1);
      grid.emplace_back(lo * std::pow(hi / lo, fi), lo * std::pow(hi / lo, fj));
    }
  }
  for (double a : r.alphas) {
    const VConvexity v = v_convexity_check(grid, Alpha(a));
    vconv.observe(v.worst_midpoint_margin, v.pass, [&] {
      return json{{"alpha", a},
                  {"grid", json::array({lo, hi, kGrid})},
                  {"min_hessian_diagonal", v.min_hessian_diagonal},
                  {"worst_midpoint_margin", v.worst_midpoint_margin}};
    });
  }
}

// --- convexifiability -------------------------------------------------------

json certificate_json(const CertificateAttempt& at, const PointE& p, Alpha a) {
  const auto& c = at.candidate;
  const ReducedForm exact = tangent_restriction(p, a);
  return json{
      {"point", point_json(c.point)},
      {"alpha", c.alpha.value()},
      {"valid", at.valid},
      {"reason", at.reason},
      {"detail", at.detail},
      {"reduced_form",
       {{"q11", at.form.q11}, {"q22", at.form.q22}, {"q12", at.form.q12},
        {"det", at.form.det()}, {"eigenvalues", at.form_eigenvalues}}},
      {"tangent_restriction",
       {{"q11", exact.q11}, {"q22", exact.q22}, {"q12", exact.q12},
        {"det", exact.det()}}},
      {"xi_plus", vec_json(c.xi_plus.xi)},
      {"xi_minus", vec_json(c.xi_minus.xi)},
      {"value_plus", c.value_plus},
      {"value_minus", c.value_minus},
      {"tolerance", c.tolerance},
      {"recomputed_plus", c.recomputed_plus},
      {"recomputed_minus", c.recomputed_minus},
      {"residual_plus", c.residual_plus},
      {"residual_minus", c.residual_minus},
      {"constraint_residual_plus", c.xi_plus.constraint_residual()},
      {"constraint_residual_minus", c.xi_minus.constraint_residual()}};
}

json sign_flip_json(const SignFlipResult& s) {
  auto w = [](const SignFlipWitness& x) {
    return json{{"t", x.t}, {"kappa", x.kappa}, {"value", x.value},
                {"scale", x.scale}};
  };
  return json{{"point", point_json(s.point)},
              {"alpha", s.alpha.value()},
              {"F", s.f_label},
              {"c_per_t", s.c_per_t},
              {"c_closed_form", s.c_closed_form},
              {"c_relative_error", s.c_relative_error},
              {"curvature_ratio", s.curvature_ratio},
              {"kappa_sq_coeff", s.kappa_sq_coeff},
              {"plus", w(s.plus)},
              {"minus", w(s.minus)}};
}

void observe_sign_flip(Check& flip, Check* coeff, const PointE& p, double a,
                       const MonotoneF& f, bool exact_alpha_one,
                       json& sink, bool keep_all) {
  auto base = [&] {
    return json{{"point", point_json(p)}, {"alpha", a}, {"F", f.label()}};
  };
  try {
    const SignFlipResult s = exact_alpha_one
                                 ? alpha_one_sign_flip(p, f)
                                 : radial_sign_flip(p, Alpha(a), f);
    const double ratio = std::min(std::abs(s.plus.value) / s.plus.scale,
                                  std::abs(s.minus.value) / s.minus.scale);
    flip.observe(ratio, true, [&] { return sign_flip_json(s); });
    if (coeff) {
      coeff->observe(s.c_relative_error, s.c_relative_error <= 1e-8,
                     [&] { return sign_flip_json(s); });
    }
    if (keep_all || sink.size() < kMaxRecords) sink.push_back(sign_flip_json(s));
  } catch (const ObstructionError& e) {
    flip.observe(0.0, false, [&] {
      json j = base();
      j["error"] = e.what();
      return j;
    });
  }
}

void run_convexifiability(const RunConfig& cfg, const Resolved& r,
                          Suite& suite) {
  Sampler sampler(cfg.seed, static_cast<std::uint64_t>(Mode::convexifiability));
  const std::vector<PointE> points =
      sample_points(r, sampler, static_cast<std::size_t>(r.samples));
  const std::vector<MonotoneF> families = standard_families();
  const std::string mode = to_string(Mode::convexifiability);

  Check& det = suite.add(mode, "determinant_identity",
                         "|det Q x^(a+2) y^(a+2) - a(a+1)(a-1)| / |a(a+1)(a-1)|",
                         kDeterminantTol);
  Check& cert = suite.add(mode, "certificate",
                          "max relative recomputation residual", 1e-8);
  Check& indef = suite.add(mode, "composed_indefinite",
                           "min(-eig_min, eig_max) / |M|_F", kEigenRelTol,
                           /*higher_is_worse=*/false);
  Check& indep = suite.add(mode, "f_independence",
                           "|<xi, M xi> - <xi, D^2u xi>| / (|M|_F |xi|^2)", 1e-8);
  Check* flip = nullptr;

  std::vector<double> routed;
  for (double av : r.alphas) {
    if (1.0 - av < kNearOne) routed.push_back(av);
  }
  if (!routed.empty()) {
    flip = &suite.add(mode, "sign_flip_near_alpha_one",
                      "min |G| / scale over the two witnesses", kSignFlipRelTol,
                      false);
    for (double av : routed) {
      std::ostringstream os;
      os.precision(17);
      os << "alpha " << av << " is within " << kNearOne
         << " of 1; routed to the alpha = 1 sign-flip analysis";
      suite.warnings.push_back(os.str());
    }
  }

  const bool keep_all = r.point.has_value();
  for (std::size_t i = 0; i < points.size(); ++i) {
    const PointE& p = points[i];
    for (double av : r.alphas) {
      const Alpha a(av);
      auto base = [&] {
        return json{{"index", i}, {"point", point_json(p)}, {"alpha", av}};
      };

      const ReducedForm form = reduced_form(p, a);
      const double scaled = form.det() * positive_pow(p.x(), av + 2.0) *
                            positive_pow(p.y(), av + 2.0);
      const double target = determinant_R(a);
      const bool sign_ok = av < 1.0 ? scaled < 0.0
                                    : (av == 1.0 ? std::abs(scaled) <= 1e-10
                                                 : scaled > 0.0);
      const double rel = target != 0.0 ? std::abs(scaled - target) / std::abs(target)
                                       : std::abs(scaled);
      det.observe(rel, sign_ok && rel <= kDeterminantTol, [&] {
        json j = base();
        j["scaled_det"] = scaled;
        j["R"] = target;
        return j;
      });

      if (1.0 - av < kNearOne) {
        for (const MonotoneF& f : families) {
          observe_sign_flip(*flip, nullptr, p, av, f, av == 1.0,
                            suite.sign_flips, keep_all);
        }
      } else {
        const CertificateAttempt at = attempt_certificate(p, a, cfg.tol.cert);
        const double worst_res = std::max(at.candidate.residual_plus,
                                          at.candidate.residual_minus);
        cert.observe(worst_res, at.valid,
                     [&] { return certificate_json(at, p, a); });
        if (keep_all || suite.certificates.size() < kMaxRecords) {
          suite.certificates.push_back(certificate_json(at, p, a));
        }
        for (const MonotoneF& f : families) {
          const Sym3 m = normalized_composed_hessian(f, p, a);
          for (const TangentDirection* t :
               {&at.candidate.xi_plus, &at.candidate.xi_minus}) {
            const double xi_sq = dot(t->xi, t->xi);
            const double d = std::abs(m.quadratic(t->xi) - curvature_on_tangent(*t)) /
                             (m.frobenius() * xi_sq);
            indep.observe(d, d <= 1e-8, [&] {
              json j = base();
              j["F"] = f.label();
              j["xi"] = vec_json(t->xi);
              return j;
            });
          }
        }
      }

      for (const MonotoneF& f : families) {
        const IndefinitenessCheck ic = composed_hessian_indefinite(p, a, f);
        const double norm_m = ic.tolerance / kEigenRelTol;
        const double margin = std::min(-ic.eigenvalues[0], ic.eigenvalues[2]) / norm_m;
        indef.observe(margin, ic.pass, [&] {
          json j = base();
          j["F"] = f.label();
          j["eigenvalues"] = ic.eigenvalues;
          j["tolerance"] = ic.tolerance;
          return j;
        });
      }
    }
  }
}

// --- alpha-one ---------------------------------------------------------------

void run_alpha_one(const RunConfig& cfg, const Resolved& r, Suite& suite) {
  Sampler sampler(cfg.seed, static_cast<std::uint64_t>(Mode::alpha_one));
  const std::vector<PointE> points =
      sample_points(r, sampler, static_cast<std::size_t>(r.samples));
  const std::string mode = to_string(Mode::alpha_one);
  Check& flip = suite.add(mode, "sign_flip",
                          "min |G| / scale over the two witnesses",
                          kSignFlipRelTol, false);
  Check& coeff = suite.add(mode, "closed_form_coefficient",
                           "|<D^2u p, Du> - closed form| / |closed form|", 1e-8);
  const bool keep_all = r.point.has_value();
  for (const PointE& p : points) {
    for (const MonotoneF& f : standard_families()) {
      observe_sign_flip(flip, &coeff, p, 1.0, f, true, suite.sign_flips,
                        keep_all);
    }
  }
}

// --- lambda-search -----------------------------------------------------------

void run_lambda(const RunConfig& cfg, const Resolved& r, Suite& suite) {
  const PointE p = r.point.value_or(PointE(1.0, 1.0, 1.0));
  const std::string mode = to_string(Mode::lambda_search);
  Check& found = suite.add(mode, "lambda_found", "bisection relative width", 1e-6);
  Check& mono = suite.add(mode, "lambda_decreasing_in_alpha",
                          "max lambda_min(a_{k+1}) / lambda_min(a_k)", 1.0);
  Check& neigh = suite.add(mode, "neighborhood_1pct",
                           "worst min eigenvalue / |M|_F over neighbours",
                           -1e-10, false);
  Check& control = suite.add(mode, "negative_control_alpha_0.5",
                             "1 if not convexifiable, else 0", 1.0, false);

  std::vector<std::optional<double>> lambdas;
  for (double av : r.alphas) {
    const Alpha a(av);
    try {
      LambdaResult res = min_convexifying_lambda(p, a);
      json j{{"point", point_json(p)},
             {"alpha", av},
             {"lambda_min", res.lambda_min},
             {"margin", res.margin},
             {"bracket_width", res.bracket_width}};
      found.observe(res.bracket_width, res.bracket_width <= 1e-6, [&] { return j; });
      if (av >= 1.25) {
        const NeighborhoodReport nr = neighborhood_check(
            res, 0.01, static_cast<std::size_t>(r.samples), cfg.seed);
        res.neighborhood_radius = nr.largest_passing_radius;
        neigh.observe(nr.worst_min_eigenvalue, nr.requested_radius_passes, [&] {
          json k = j;
          k["worst_point"] = nr.worst_point;
          return k;
        });
      }
      j["radius"] = res.neighborhood_radius;
      suite.lambda_results.push_back(j);
      lambdas.push_back(res.lambda_min);
    } catch (const NotConvexifiable& e) {
      const auto& d = e.diagnostics();
      json j{{"point", point_json(p)},
             {"alpha", av},
             {"error", "not convexifiable"},
             {"reason", d.reason},
             {"lambda_reached", d.lambda_reached},
             {"min_eigenvalue", d.min_eigenvalue},
             {"frobenius", d.frobenius},
             {"tolerance_threshold", d.tolerance_threshold}};
      found.observe(1.0, false, [&] { return j; });
      suite.lambda_results.push_back(j);
      lambdas.push_back(std::nullopt);
    }
  }

  for (std::size_t k = 0; k + 1 < lambdas.size(); ++k) {
    auto rec = [&] {
      return json{{"alpha_lo", r.alphas[k]},
                  {"alpha_hi", r.alphas[k + 1]},
                  {"lambda_lo", lambdas[k] ? json(*lambdas[k]) : json(nullptr)},
                  {"lambda_hi",
                   lambdas[k + 1] ? json(*lambdas[k + 1]) : json(nullptr)}};
    };
    if (!lambdas[k] || !lambdas[k + 1]) {
      mono.observe(std::numeric_limits<double>::infinity(), false, rec);
      continue;
    }
    const double ratio = *lambdas[k + 1] / *lambdas[k];
    const bool ok = r.alphas[k + 1] > r.alphas[k] ? ratio < 1.0 : ratio > 1.0;
    mono.observe(ratio, ok, rec);
  }

  LambdaSearchOptions bypass;
  bypass.bypass_alpha_guard = true;
  try {
    const LambdaResult res = min_convexifying_lambda(p, Alpha(0.5), bypass);
    control.observe(0.0, false, [&] {
      return json{{"point", point_json(p)}, {"alpha", 0.5},
                  {"lambda_min", res.lambda_min}};
    });
  } catch (const NotConvexifiable& e) {
    control.observe(1.0, true, [&] {
      return json{{"point", point_json(p)}, {"alpha", 0.5},
                  {"reason", e.diagnostics().reason},
                  {"lambda_reached", e.diagnostics().lambda_reached}};
    });
  }
}

void run_mode(const RunConfig& cfg, Mode m, Suite& suite) {
  const Resolved r = resolve(cfg, m);
  suite.modes.push_back(resolved_json(r));
  switch (m) {
    case Mode::verify_derivatives: run_derivatives(cfg, r, suite); break;
    case Mode::quasiconvexity: run_quasiconvexity(cfg, r, suite); break;
    case Mode::convexifiability: run_convexifiability(cfg, r, suite); break;
    case Mode::alpha_one: run_alpha_one(cfg, r, suite); break;
    case Mode::lambda_search: run_lambda(cfg, r, suite); break;
    case Mode::full_suite: break;
  }
}

json config_json(const RunConfig& c) {
  json j;
  j["mode"] = to_string(c.mode);
  j["alpha"] = c.alphas;
  j["point"] = c.point ? json(*c.point) : json(nullptr);
  j["samples"] = c.samples ? json(*c.samples) : json(nullptr);
  j["seed"] = c.seed;
  j["tolerances"] = {{"grad", c.tol.grad},
                     {"hess", c.tol.hess},
                     {"cert", c.tol.cert},
                     {"segment", c.tol.segment}};
  j["box"] = c.box ? json::array({c.box->lo, c.box->hi}) : json(nullptr);
  j["format"] = to_string(c.format);
  return j;
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << v;
  return os.str();
}

std::string render_csv(const Suite& s) {
  std::ostringstream os;
  os << "mode,check,passed,count,failures,worst,threshold\n";
  os.precision(17);
  for (const Check& c : s.checks) {
    os << c.mode << ',' << c.name << ',' << (c.passed() ? "true" : "false")
       << ',' << c.count << ',' << c.failures << ',';
    if (!std::isnan(c.worst)) os << c.worst;
    os << ',' << c.threshold << '\n';
  }
  return os.str();
}

std::string render_text(const Suite& s, const json& config,
                        std::size_t failed) {
  std::ostringstream os;
  os << "qcx report (seed " << config["seed"].get<std::uint64_t>() << ")\n";
  for (const auto& w : s.warnings) os << "warning: " << w.get<std::string>() << '\n';
  for (const Check& c : s.checks) {
    os << (c.passed() ? "[PASS] " : "[FAIL] ") << c.mode << '/' << c.name
       << "  n=" << c.count << " failures=" << c.failures
       << " worst=" << (std::isnan(c.worst) ? std::string("-") : fmt(c.worst))
       << " (" << c.metric << ", threshold " << fmt(c.threshold) << ")\n";
    if (!c.passed() && !c.failing_records.empty()) {
      os << "       first failure: " << c.failing_records.front().dump() << '\n';
    }
  }
  os << (failed == 0 ? "all " : "") << s.checks.size() - failed << " of "
     << s.checks.size() << " checks passed\n";
  return os.str();
}

}  // namespace

void validate(const RunConfig& c) {
  if (c.samples && *c.samples < 1) {
    throw ConfigError("--samples must be at least 1");
  }
  if (c.box && !(c.box->lo > 0.0 && c.box->hi > c.box->lo &&
                 std::isfinite(c.box->hi))) {
    throw ConfigError("--box needs 0 < lo < hi");
  }
  for (double a : c.alphas) {
    if (!(a > 0.0) || !std::isfinite(a)) {
      throw ConfigError("alpha must be positive");
    }
  }
  if (c.point) {
    for (double v : *c.point) {
      if (!(v > 0.0) || !std::isfinite(v)) {
        throw ConfigError("--point coordinates must be positive");
      }
    }
  }
  if (!(c.tol.grad > 0 && c.tol.hess > 0 && c.tol.cert > 0 && c.tol.segment > 0)) {
    throw ConfigError("tolerances must be positive");
  }
  switch (c.mode) {
    case Mode::full_suite:
      if (!c.alphas.empty()) {
        throw ConfigError("full-suite uses the per-mode alpha ladders; drop --alpha");
      }
      break;
    case Mode::convexifiability:
      for (double a : c.alphas) {
        if (a > 1.0) throw ConfigError("convexifiability requires alpha <= 1");
      }
      break;
    case Mode::alpha_one:
      for (double a : c.alphas) {
        if (a != 1.0) throw ConfigError("alpha-one mode requires alpha = 1");
      }
      break;
    case Mode::lambda_search:
      for (double a : c.alphas) {
        if (!(a > 1.0)) throw ConfigError("lambda-search requires alpha > 1");
      }
      break;
    default: break;
  }
}

RunOutcome run(const RunConfig& config) {
  validate(config);
  const auto start = std::chrono::steady_clock::now();

  Suite suite;
  if (config.mode == Mode::full_suite) {
    for (Mode m : {Mode::verify_derivatives, Mode::quasiconvexity,
                   Mode::convexifiability, Mode::alpha_one,
                   Mode::lambda_search}) {
      run_mode(config, m, suite);
    }
  } else {
    run_mode(config, config.mode, suite);
  }

  std::size_t failed = 0;
  json checks = json::array();
  for (const Check& c : suite.checks) {
    if (!c.passed()) ++failed;
    checks.push_back(c.to_json());
  }

  json report;
  report["tool"] = "qcx";
  report["schema_version"] = 1;
  report["config"] = config_json(config);
  report["resolved"] = suite.modes;
  report["warnings"] = suite.warnings;
  report["checks"] = checks;
  report["certificates"] = suite.certificates;
  report["sign_flips"] = suite.sign_flips;
  report["lambda_results"] = suite.lambda_results;
  report["summary"] = {{"passed", failed == 0},
                       {"checks", suite.checks.size()},
                       {"failed", failed}};
  if (config.timing) {
    report["wall_time_s"] = std::chrono::duration<double>(
                                std::chrono::steady_clock::now() - start)
                                .count();
  }

  RunOutcome out;
  out.checks = suite.checks.size();
  out.failed_checks = failed;
  out.exit_status = failed == 0 ? 0 : 1;
  switch (config.format) {
    case OutputFormat::json: out.output = report.dump(2) + "\n"; break;
    case OutputFormat::csv: out.output = render_csv(suite); break;
    case OutputFormat::text:
      out.output = render_text(suite, report["config"], failed);
      break;
  }
  return out;
}

}  // namespace qcx
