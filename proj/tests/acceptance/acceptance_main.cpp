// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "sepmeas/sepmeas.hpp"
#include "support/golden.hpp"
#include "support/oracles.hpp"

namespace {

using namespace sepmeas;

struct Outcome {
  bool ok = false;
  std::string detail;
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

std::vector<Instance> reference_instances() {
  std::vector<Instance> out;
  for (int n : {5, 7, 11, 13}) {
    for (const auto& dims : ascending_factorizations(static_cast<std::size_t>(n - 1))) {
      if (dims.size() >= 2) out.push_back(make_instance(n, dims));
    }
  }
  return out;
}

Outcome golden_vectors() {
  const Instance inst = make_instance(5, {2, 2});
  const ReciprocalSet r = reciprocal_set(inst);
  double psi_dev = 0.0;
  double phi_min = 1.0;
  for (int j = 1; j <= 5; ++j) psi_dev = std::max(psi_dev, (inst.state(j) - golden::psi_n5(j)).cwiseAbs().maxCoeff());
  for (int j = 2; j <= 5; ++j) phi_min = std::min(phi_min, std::abs(golden::phi_n5(j).dot(r.state(j))));
  return {psi_dev <= 1e-12 && phi_min >= 1.0 - 1e-9,
          "max |dPsi| " + fmt("%.1e", psi_dev) + ", min |<Phi|Phi_ref>| 1-" + fmt("%.1e", 1.0 - phi_min)};
}

Outcome optimal_failure() {
  double worst = 0.0;
  std::size_t count = 0;
  for (const Instance& inst : reference_instances()) {
    const UsdReport rep = failure_probability(optimal_measurement(inst), reciprocal_set(inst));
    worst = std::max(worst, std::abs(rep.failure_probability - 0.5));
    ++count;
  }
  return {worst <= 1e-12, std::to_string(count) + " instances, max |Pr(f) - 0.5| " + fmt("%.1e", worst)};
}

Outcome q_values_check() {
  double worst = 0.0;
  for (const Instance& inst : reference_instances()) {
    const QValues q = q_values(inst, reciprocal_set(inst));
    const double target = static_cast<double>(inst.n()) / (2.0 * static_cast<double>(inst.dim()));
    for (std::size_t i = 0; i < q.direct.size(); ++i) {
      worst = std::max({worst, std::abs(q.direct[i] - target), std::abs(q.via_omitted[i] - target)});
    }
  }
  return {worst <= 1e-10, "max |q - N/2D| " + fmt("%.1e", worst)};
}

Outcome oracle_optimality() {
  const Instance inst = make_instance(5);
  OracleOptions options;
  options.samples = 100000;
  options.seed = 20240531;
  const OracleResult res = oracle_optimize(inst, options);
  const double cap = static_cast<double>(inst.dim() * inst.dim()) / inst.n();
  const bool ok = res.feasible_samples == 100000 && res.best_failure >= 0.5 - 1e-9 && res.max_weight_sum <= cap + 1e-9;
  return {ok, std::to_string(res.feasible_samples) + " feasible samples, best Pr(f) " + fmt("%.6f", res.best_failure) +
                  ", max sum w " + fmt("%.6f", res.max_weight_sum) + " (cap " + fmt("%.1f", cap) + ")"};
}

Outcome certification() {
  bool ok = true;
  std::size_t count = 0;
  for (const Instance& inst : reference_instances()) {
    const ConeReport rep = certify(multicopy_factors(inst, 1), static_cast<std::size_t>(inst.n()));
    for (const PartyCount& p : rep.parties) ok = ok && p.extreme == static_cast<std::size_t>(inst.n());
    ok = ok && rep.total == inst.party_dims().parties() * static_cast<std::size_t>(inst.n());
    ok = ok && rep.verdict == Verdict::Violates;
    ++count;
  }
  const CVector e0 = CVector::Unit(2, 0);
  const CVector e1 = CVector::Unit(2, 1);
  const std::vector<ProductOperator> control{{HermOp::projector(e0), HermOp::identity(2)},
                                             {HermOp::projector(e1), HermOp::identity(2)}};
  const ConeReport ctrl = certify(control, 2);
  ok = ok && ctrl.verdict == Verdict::Satisfies;
  return {ok, std::to_string(count) + " instances VIOLATES with e = N per party; control " + to_string(ctrl.verdict)};
}

Outcome monte_carlo() {
  const Instance inst = make_instance(5);
  const SimReport rep = run_discrimination(inst, reciprocal_set(inst), optimal_measurement(inst), {7, 100000, 1});
  const bool ok = rep.misidentifications == 0 && std::abs(rep.empirical_failure - 0.5) <= 0.00474;
  return {ok, "empirical " + fmt("%.5f", rep.empirical_failure) + ", misidentifications " +
                  std::to_string(rep.misidentifications)};
}

Outcome multi_copy() {
  const Instance inst = make_instance(5);
  bool ok = true;
  std::string detail;
  for (std::size_t n = 1; n <= 3; ++n) {
    const MultiCopyMeasurement m = multicopy_measurement(inst, n);
    const double target = std::pow(0.5, static_cast<double>(n));
    ok = ok && std::abs(m.theoretical_failure - target) <= 1e-12 && m.closure_residual <= 1e-10;
    detail += "n=" + std::to_string(n) + " Pr(f) " + fmt("%.12f", m.theoretical_failure) + "; ";
  }
  const ConeReport rep = certify(multicopy_factors(inst, 2), 25);
  ok = ok && rep.verdict == Verdict::Violates;
  detail += "n=2 certify " + std::string(to_string(rep.verdict)) + " (" + std::to_string(rep.total) + " > " +
            std::to_string(rep.bound) + ")";
  return {ok, detail};
}

Outcome entropy() {
  const std::vector<std::size_t> dims{2, 2};
  double lo = 1e9;
  double hi = -1e9;
  for (int j = 2; j <= 5; ++j) {
    const CVector phi = golden::phi_n5(j);
    const HermOp rho(oracle::reduced_first_by_reshape(phi, 2, 2));
    const double s = von_neumann_entropy(partial_trace(HermOp::projector(phi), dims, 0), 2.0);
    const double s_oracle = von_neumann_entropy(rho, 2.0);
    lo = std::min({lo, s, s_oracle});
    hi = std::max({hi, s, s_oracle});
  }
  const bool ok = hi - lo <= 1e-9 && std::abs(lo - 0.3) <= 0.05;
  return {ok, "S = " + fmt("%.6f", lo) + " bits (log base 2), spread " + fmt("%.1e", hi - lo)};
}

Outcome appendix_decomposition() {
  std::mt19937_64 rng(1001);
  std::uniform_int_distribution<int> parties(1, 3);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::size_t> dims;
    std::vector<std::size_t> big;
    const int p = parties(rng);
    for (int a = 0; a < p; ++a) {
      const std::size_t e = std::uniform_int_distribution<std::size_t>(2, 5)(rng);
      big.push_back(e);
      dims.push_back(std::uniform_int_distribution<std::size_t>(1, e)(rng));
    }
    CMatrix sum = CMatrix::Zero(1, 1);
    for (const ProductTerm& t : complement_decomposition(dims, big)) {
      const CMatrix full = t.full().matrix();
      if (sum.rows() != full.rows()) sum = CMatrix::Zero(full.rows(), full.cols());
      sum += full;
    }
    worst = std::max(worst, (sum - oracle::complement_by_index(dims, big)).norm());
  }
  return {worst <= 1e-12, "20 enlargements, max ||sum - (I' - Pi)||_F " + fmt("%.1e", worst)};
}

Outcome cone_oracle() {
  std::mt19937_64 rng(4242);
  std::size_t ops_checked = 0;
  std::size_t non_extreme = 0;
  std::size_t disagreements = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::vector<CMatrix> ops = oracle::random_cone_case(rng);
    std::vector<HermOp> wrapped;
    for (const CMatrix& m : ops) wrapped.emplace_back(m);
    const LocalOperatorSet s(0, wrapped);
    for (std::size_t i = 0; i < ops.size(); ++i) {
      const bool expected = oracle::extreme_by_enumeration(ops, i);
      if (is_extreme(i, s) != expected) ++disagreements;
      if (!expected) ++non_extreme;
      ++ops_checked;
    }
  }
  return {disagreements == 0, "100 sets, " + std::to_string(ops_checked) + " operators (" +
                                  std::to_string(non_extreme) + " non-extreme), " + std::to_string(disagreements) +
                                  " disagreements"};
}

struct Criterion {
  int id;
  const char* name;
  double limit_s;  // 0 means no runtime limit
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "golden vectors", 1.0, golden_vectors},
      {2, "optimal failure probability", 10.0, optimal_failure},
      {3, "q-values", 0.0, q_values_check},
      {4, "oracle optimality", 60.0, oracle_optimality},
      {5, "finite-round LOCC certification", 30.0, certification},
      {6, "Monte Carlo", 5.0, monte_carlo},
      {7, "multi-copy", 60.0, multi_copy},
      {8, "entropy", 0.0, entropy},
      {9, "A1 decomposition", 0.0, appendix_decomposition},
      {10, "cone-engine oracle equivalence", 0.0, cone_oracle},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::string timing = fmt("%.3f s", secs);
    if (c.limit_s > 0.0) {
      timing += fmt(" / limit %.0f s", c.limit_s);
      if (secs >= c.limit_s) {
        o.ok = false;
        o.detail += "; over time limit";
      }
    }
    if (!o.ok) ++failed;
    std::printf("%s  %2d  %-32s %s [%s]\n", o.ok ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), timing.c_str());
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
