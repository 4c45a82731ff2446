#include "perctree/verify.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <sstream>

#include "perctree/simulate.hpp"
#include "perctree/threshold.hpp"

namespace perctree {

namespace {

class Runner {
 public:
  explicit Runner(const VerifyOptions& options) : options_(options) {}

  void add(const std::string& group, const std::string& name, std::function<std::string()> body) {
    if (options_.only_group && *options_.only_group != group) return;
    CheckResult r;
    r.group = group;
    r.name = name;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      r.detail = body();
      r.passed = r.detail.empty();
    } catch (const std::exception& e) {
      r.passed = false;
      r.detail = std::string("exception: ") + e.what();
    }
    r.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    results_.push_back(std::move(r));
  }

  std::vector<CheckResult> take() { return std::move(results_); }

  const VerifyOptions& options_;
  std::vector<CheckResult> results_;
};

std::string expect_near(double actual, double expected, double tol, const std::string& what) {
  if (std::abs(actual - expected) <= tol) return {};
  std::ostringstream msg;
  msg.precision(15);
  msg << what << ": got " << actual << ", want " << expected << " +- " << tol;
  return msg.str();
}

std::string expect_true(bool cond, const std::string& what) {
  return cond ? std::string{} : what;
}

}  // namespace

std::vector<CheckResult> run_verify(const VerifyOptions& options) {
  Runner runner(options);
  ThresholdOptions topt;
  topt.iteration = options.iteration;

  runner.add("tangency", "pc-3-2-exact", [&] {
    const TangencyResult t = find_pc_regular(3, 2);
    std::string err = expect_near(t.p_c, 1.0 / 9.0, 1e-10, "p_c(3,2)");
    if (err.empty()) err = expect_near(t.x_tangent, 0.25, 1e-10, "x_tangent(3,2)");
    if (err.empty()) err = expect_true(t.residual_phi <= 1e-12 && t.residual_slope <= 1e-12,
                                       "tangency residuals exceed 1e-12");
    return err;
  });

  runner.add("tangency", "pc-7-5-bracket", [&] {
    const TangencyResult t = find_pc_regular(7, 5);
    return expect_true(t.p_c > 0.3 && t.p_c < 0.4, "p_c(7,5) outside (0.3, 0.4)");
  });

  runner.add("figures", "phi-7-5-p03-two-roots", [&] {
    const RootScanResult r = count_roots(PhiParams(7, 5, 0.3), 10'000);
    return expect_true(r.count == 2, "expected 2 roots, found " + std::to_string(r.count));
  });

  runner.add("figures", "phi-7-5-p04-no-roots", [&] {
    const RootScanResult r = count_roots(PhiParams(7, 5, 0.4), 10'000);
    return expect_true(r.count == 0, "expected 0 roots, found " + std::to_string(r.count));
  });

  runner.add("recurrence", "enumeration-identity", [&] {
    const std::vector<TreeSpec> specs = {TreeSpec({3}), TreeSpec({3, 2}), TreeSpec({2, 3})};
    for (const auto& spec : specs) {
      for (int depth = 0; depth <= 3; ++depth) {
        TruncatedTree probe = build_truncated(spec, depth, Orientation::kOriented);
        if (probe.node_count() > static_cast<std::size_t>(kMaxExactNodes)) continue;
        for (double p : {0.1, 0.5, 0.9}) {
          OrientedState s = initial_state(spec, p);
          for (int t = 0; t < depth; ++t) s = step(spec, 2, p, s);
          const double exact = exact_root_activation(spec, 2, p, depth, Orientation::kOriented);
          const std::string err =
              expect_near(exact, s.probs[0], 1e-12,
                          "exact vs recurrence at depth " + std::to_string(depth));
          if (!err.empty()) return err;
        }
      }
    }
    return std::string{};
  });

  runner.add("sandwich", "pf-between-regular-thresholds", [&] {
    const std::vector<std::tuple<int, int, int>> cases = {{5, 3, 2}, {8, 4, 3}, {6, 6, 2}};
    for (auto [a, b, theta] : cases) {
      const ThresholdResult r = find_pf(TreeSpec({a, b}), theta, topt);
      const double lower = find_pc_regular(std::max(a, b), theta).p_c;
      const double upper = find_pc_regular(std::min(a, b), theta).p_c;
      std::ostringstream what;
      what << "p_f(" << a << "," << b << ";" << theta << ") = " << static_cast<double>(r.p_est)
           << " outside [" << lower << ", " << upper << "]";
      const std::string err =
          expect_true(r.p_est >= lower - 1e-7 && r.p_est <= upper + 1e-7, what.str());
      if (!err.empty()) return err;
    }
    return std::string{};
  });

  runner.add("monotonicity", "pf-decreasing-in-b", [&] {
    double prev = 1.0;
    for (int b : {5, 6, 7}) {
      const double pf = find_pf(TreeSpec({5, b}), 2, topt).p_est;
      if (pf > prev + 1e-7) {
        return "p_f(5," + std::to_string(b) + ";2) increased with b";
      }
      prev = pf;
    }
    return std::string{};
  });

  runner.add("monotonicity", "pf-increasing-in-theta", [&] {
    double prev = 0.0;
    for (int theta : {2, 3, 4}) {
      const double pf = find_pf(TreeSpec({5, 5}), theta, topt).p_est;
      if (pf < prev - 1e-7) {
        return "p_f(5,5;" + std::to_string(theta) + ") decreased with theta";
      }
      prev = pf;
    }
    return std::string{};
  });

  runner.add("agreement", "regular-pf-matches-tangency", [&] {
    for (int m : {4, 5, 6}) {
      const double pf = find_pf(TreeSpec({m}), 2, topt).p_est;
      const double pc = find_pc_regular(m, 2).p_c;
      const std::string err =
          expect_near(pf, pc, 1e-7, "find_pf vs find_pc_regular at m=" + std::to_string(m));
      if (!err.empty()) return err;
    }
    return std::string{};
  });

  return runner.take();
}

}  // namespace perctree
