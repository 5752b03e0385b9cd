#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <optional>
#include <numbers>
#include <string>

#include "sepmeas/cli/commands.hpp"
#include "sepmeas/cone.hpp"
#include "sepmeas/errors.hpp"
#include "sepmeas/instance.hpp"
#include "sepmeas/simulator.hpp"
#include "sepmeas/usd.hpp"

namespace sepmeas::cli {

namespace {

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", x);
  return buf;
}

Complex cis(double angle) { return std::polar(1.0, angle); }

// Two-qubit N = 5 states written out in the |00>,|01>,|10>,|11> basis.
CVector golden_psi(int j) {
  constexpr double pi = std::numbers::pi;
  CVector v(4);
  switch (j) {
    case 1: v << 1.0, cis(4 * pi / 5), cis(2 * pi / 5), cis(-4 * pi / 5); break;
    case 2: v << 1.0, cis(-2 * pi / 5), cis(4 * pi / 5), cis(2 * pi / 5); break;
    case 3: v << 1.0, cis(2 * pi / 5), cis(-4 * pi / 5), cis(-2 * pi / 5); break;
    case 4: v << 1.0, cis(-4 * pi / 5), cis(-2 * pi / 5), cis(4 * pi / 5); break;
    default: v << 1.0, 1.0, 1.0, 1.0; break;
  }
  return v / 2.0;
}

CVector golden_phi(int j) {
  constexpr double pi = std::numbers::pi;
  const double t = 2 * pi / 5;
  const Complex one(1.0, 0.0);
  const Complex odd = cis(t) / (2.0 * std::cos(t));
  CVector v(4);
  switch (j) {
    case 2: v << -cis(-t), one + cis(-t), -(one + cis(t)), cis(t); break;
    case 3: v << odd, -one, -cis(pi / 5), one + cis(-t); break;
    case 4: v << one + cis(t), -cis(pi / 5), cis(pi / 5), -(one + cis(t)); break;
    default: v << one, odd, one + cis(t), -cis(-t); break;
  }
  return v / std::sqrt(5.0 + std::sqrt(5.0));
}

template <class F>
CheckResult check(const std::string& name, F&& body) {
  CheckResult c{name, false, ""};
  try {
    body(c);
  } catch (const std::exception& e) {
    c.passed = false;
    c.detail = e.what();
  }
  return c;
}

}  // namespace

bool VerifyRow::passed() const {
  for (const CheckResult& c : checks)
    if (!c.passed) return false;
  return !checks.empty();
}

VerifyRow verify_instance(int n, const std::vector<std::size_t>& dims, double cone_tol) {
  VerifyRow row{n, dims, {}};
  std::optional<Instance> inst;
  row.checks.push_back(check("completeness", [&](CheckResult& c) {
    inst.emplace(make_instance(n, dims));
    const double res = completeness_residual(*inst);
    c.passed = res <= 1e-12;
    c.detail = sci(res);
  }));
  if (!inst) return row;
  const std::size_t d = inst->dim();

  row.checks.push_back(check("independence", [&](CheckResult& c) {
    double worst = 1.0;
    for (int l = 1; l <= n; ++l) {
      std::vector<int> subset;
      for (int j = 1; j <= n; ++j)
        if (j != l) subset.push_back(j);
      const IndependenceCheck ic = check_linear_independence(*inst, subset);
      worst = std::min(worst, ic.min_singular);
      if (!ic.independent) worst = 0.0;
    }
    c.passed = worst > 0.0;
    c.detail = "min sv " + sci(worst);
  }));

  std::optional<ReciprocalSet> r;
  row.checks.push_back(check("reciprocity", [&](CheckResult& c) {
    r.emplace(reciprocal_set(*inst));
    double off = 0.0;
    for (std::size_t i = 0; i < r->states.size(); ++i) {
      for (std::size_t k = 0; k < r->labels.size(); ++k) {
        const Complex ov = r->states[i].dot(inst->state(r->labels[k]));
        if (i != k) off = std::max(off, std::abs(ov));
      }
    }
    c.passed = off <= 1e-10;
    c.detail = "max off-diagonal " + sci(off);
  }));
  if (!r) return row;

  row.checks.push_back(check("q_values", [&](CheckResult& c) {
    const QValues q = q_values(*inst, *r);
    const double target = static_cast<double>(n) / (2.0 * static_cast<double>(d));
    double dev = 0.0;
    for (std::size_t i = 0; i < q.direct.size(); ++i) {
      dev = std::max({dev, std::abs(q.direct[i] - target), std::abs(q.via_omitted[i] - target)});
    }
    c.passed = dev <= 1e-10;
    c.detail = "dev " + sci(dev);
  }));

  row.checks.push_back(check("pairwise_bound", [&](CheckResult& c) {
    c.passed = verify_pairwise_bound(*inst, optimal_weights(*inst));
  }));

  row.checks.push_back(check("failure_probability", [&](CheckResult& c) {
    const UsdReport rep = failure_probability(optimal_measurement(*inst), *r);
    const double dev = std::abs(rep.failure_probability - 0.5);
    c.passed = dev <= 1e-12;
    c.detail = "dev " + sci(dev);
  }));

  std::optional<ConeReport> cone;
  row.checks.push_back(check("extreme_rays", [&](CheckResult& c) {
    ConeOptions options;
    options.residual_tol = cone_tol;
    cone.emplace(certify(multicopy_factors(*inst, 1), static_cast<std::size_t>(n), options));
    c.passed = true;
    for (const PartyCount& p : cone->parties) c.passed = c.passed && p.extreme == static_cast<std::size_t>(n);
    c.detail = "total " + std::to_string(cone->total);
  }));
  if (cone) {
    row.checks.push_back(check("verdict", [&](CheckResult& c) {
      c.passed = cone->verdict == Verdict::Violates;
      c.detail = std::string(to_string(cone->verdict)) + " (bound " + std::to_string(cone->bound) + ")";
    }));
  }

  if (n == 5 && dims == std::vector<std::size_t>{2, 2} && inst->omit() == 1) {
    row.checks.push_back(check("golden", [&](CheckResult& c) {
      double psi_dev = 0.0;
      double phi_gap = 0.0;
      for (int j = 1; j <= 5; ++j) psi_dev = std::max(psi_dev, (inst->state(j) - golden_psi(j)).cwiseAbs().maxCoeff());
      for (int j = 2; j <= 5; ++j) phi_gap = std::max(phi_gap, 1.0 - std::abs(golden_phi(j).dot(r->state(j))));
      c.passed = psi_dev <= 1e-12 && phi_gap <= 1e-9;
      c.detail = "psi " + sci(psi_dev) + ", phi " + sci(phi_gap);
    }));
  }
  return row;
}

std::vector<VerifyRow> verify_all(const std::vector<int>& ns, double cone_tol) {
  if (ns.empty()) throw InputError("verify: no values of n given");
  std::vector<std::pair<int, std::vector<std::size_t>>> jobs;
  for (int n : ns) {
    if (n < 5 || !is_prime(n)) {
      throw InputError("verify: n = " + std::to_string(n) + " is not a prime >= 5");
    }
    for (auto& dims : ascending_factorizations(static_cast<std::size_t>(n - 1))) {
      if (dims.size() >= 2) jobs.emplace_back(n, std::move(dims));
    }
  }
  std::vector<std::future<VerifyRow>> pending;
  for (const auto& [n, dims] : jobs) {
    pending.push_back(std::async(std::launch::async, verify_instance, n, dims, cone_tol));
  }
  std::vector<VerifyRow> rows;
  for (auto& f : pending) rows.push_back(f.get());
  return rows;
}

}  // namespace sepmeas::cli
