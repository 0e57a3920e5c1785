// Acceptance gate: one PASS/FAIL line per criterion, details indented below it.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <boost/rational.hpp>

#include "travwave/travwave.hpp"

using namespace travwave;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Verdict {
  bool pass = true;
  std::vector<std::string> notes;

  void check(bool ok, const std::string& what) {
    pass = pass && ok;
    notes.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
  }
  void note(const std::string& what) { notes.push_back("     " + what); }
};

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

int failures = 0;

void report(int id, const std::string& title, const Verdict& v, double secs) {
  std::cout << "CRITERION " << id << " " << (v.pass ? "PASS" : "FAIL") << ": " << title << " (" << num(secs) << " s)\n";
  for (const auto& n : v.notes) std::cout << "    " << n << '\n';
  std::cout.flush();
  if (!v.pass) ++failures;
}

template <class F>
void criterion(int id, const std::string& title, F&& body) {
  const auto t0 = Clock::now();
  Verdict v;
  try {
    body(v);
  } catch (const std::exception& e) {
    v.check(false, std::string("exception: ") + e.what());
  }
  report(id, title, v, seconds_since(t0));
}

// min over |j| <= k of k(k+n-1) - j^2 - alpha j, by enumeration.
double enumerate_min(int n, int k, double alpha) {
  double best = std::numeric_limits<double>::infinity();
  for (int j = -k; j <= k; ++j) best = std::min(best, k * (k + n - 1.0) - double(j) * j - alpha * j);
  return best;
}

std::map<int, std::vector<HarmonicSpaceRep>> harmonic_cache;

std::vector<HarmonicSpaceRep>& reps(int n, int k_max) {
  auto& c = harmonic_cache[n];
  for (int k = static_cast<int>(c.size()); k <= k_max; ++k) c.push_back(build_harmonic_rep(n, k));
  return c;
}

ProblemSpec problem(Equation eq, Scheme s, double lambda, double m, double p) {
  ProblemSpec pr;
  pr.equation = eq;
  pr.scheme = s;
  pr.constraint = s == Scheme::EnergyMin ? ConstraintKind::Mass : ConstraintKind::LpPlusOne;
  pr.constraint_value = 1.0;
  pr.lambda = lambda;
  pr.m_mass = m;
  pr.p = p;
  return pr;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

int main() {
  std::cout << std::boolalpha;

  criterion(1, "L_alpha spectrum on V_k for n in {2,3,4}, k <= 10", [](Verdict& v) {
    const auto t0 = Clock::now();
    for (int n : {2, 3, 4}) {
      auto& cache = reps(n, 10);
      const double a_crit = n - 1.0;
      double worst = 0;
      for (double a : {0.0, 0.5, a_crit - 1e-6, a_crit, a_crit + 0.5}) {
        const auto rep = check_L_alpha_semidefinite(n, 10, a, &cache);
        bool negative_somewhere = false;
        double min_over_k = std::numeric_limits<double>::infinity();
        for (const auto& row : rep.rows) {
          worst = std::max(worst, std::abs(row.min_eig - enumerate_min(n, row.k, a)));
          min_over_k = std::min(min_over_k, row.min_eig);
          if (row.min_eig < 0) negative_somewhere = true;
        }
        if (a <= a_crit)
          v.check(min_over_k >= -1e-8, "n=" + std::to_string(n) + " alpha=" + num(a) + " min eig " + num(min_over_k) + " >= 0");
        else
          v.check(negative_somewhere,
                  "n=" + std::to_string(n) + " alpha=" + num(a) + " negative at k=" + std::to_string(rep.first_negative_k));
      }
      v.check(worst <= 1e-8, "n=" + std::to_string(n) + " max |min eig - enumeration| = " + num(worst));
    }
    const double t = seconds_since(t0);
    v.check(t < 60, "runtime " + num(t) + " s < 60 s");
  });

  criterion(2, "eigenstructure of X on V_k", [](Verdict& v) {
    const auto t0 = Clock::now();
    for (int n : {2, 3, 4}) {
      auto& cache = reps(n, 10);
      double max_re = 0, max_int = 0, excess = 0, top = 0;
      for (int k = 0; k <= 10; ++k) {
        const auto ev = harmonic_X_eigenvalues(cache[k]);
        bool has_ik = false;
        for (Eigen::Index i = 0; i < ev.size(); ++i) {
          max_re = std::max(max_re, std::abs(ev[i].real()));
          max_int = std::max(max_int, std::abs(ev[i].imag() - std::round(ev[i].imag())));
          excess = std::max(excess, std::abs(ev[i]) - k);
          if (std::abs(ev[i] - cplx(0, k)) < 1e-8) has_ik = true;
        }
        v.check(has_ik, "n=" + std::to_string(n) + " k=" + std::to_string(k) + " ik is an eigenvalue");
        if (k > 0) top = std::max(top, highest_weight_defect(cache[k]));
      }
      v.check(max_re < 1e-8 && max_int < 1e-8,
              "n=" + std::to_string(n) + " purely imaginary integers (re " + num(max_re) + ", int " + num(max_int) + ")");
      v.check(excess <= 1e-8, "n=" + std::to_string(n) + " modulus <= k (excess " + num(excess) + ")");
      v.check(top <= 1e-8, "n=" + std::to_string(n) + " ik eigenvector vs (x1 + i x2)^k: " + num(top));
    }
    const double t = seconds_since(t0);
    v.check(t < 30, "runtime " + num(t) + " s < 30 s");
  });

  criterion(3, "Euler-Lagrange residual on 12 baseline runs", [](Verdict& v) {
    const auto t0 = Clock::now();
    auto t1 = std::make_shared<TorusBasis>(TorusSpec{1, 2 * pi, 64, 1.0});
    auto t1_long = std::make_shared<TorusBasis>(TorusSpec{1, 8.0, 64, 1.0});
    auto t2 = std::make_shared<TorusBasis>(TorusSpec{2, 2 * pi, 32, 1.0});
    auto s2 = std::make_shared<SphereBasis>(SphereSpec::minimal(2, 12));
    auto rad = std::make_shared<RadialBasis>(RadialSpec::uniform(20, 400, [](double) { return 1.0; }));
    const KillingSpec X1 = KillingSpec::torus({0.5}), X2 = KillingSpec::torus({0.3, 0.2});
    const KillingSpec XS = KillingSpec::sphere(0.5), XR = KillingSpec::radial(0.0);
    auto record = [&v](const std::string& name, const auto& r, bool converged) {
      const bool ok = converged && r.residual < 1e-6 && std::abs(r.multiplier_imag) < 1e-8;
      v.check(ok, name + ": converged " + (converged ? "yes" : "no") + ", residual " + num(r.residual) +
                      ", |Im multiplier| " + num(std::abs(r.multiplier_imag)) + ", " + to_string(r.classification));
    };
    auto go = [&](const std::string& name, auto basis, const ProblemSpec& pr, const KillingSpec& X) {
      using Basis = typename decltype(basis)::element_type;
      try {
        record(name, minimize(basis, pr, X), true);
      } catch (const NonConverged<Basis>& e) {
        record(name, e.best, false);
      }
    };
    using E = Equation;
    using S = Scheme;
    go("T1 NLS EnergyMin", t1, problem(E::NLS, S::EnergyMin, 0.0, 1.0, 3.0), X1);
    go("T1 NLS FMin", t1, problem(E::NLS, S::FMin, 1.0, 1.0, 3.0), X1);
    go("T1 NLKG EnergyMin", t1, problem(E::NLKG, S::EnergyMin, 0.5, 1.0, 3.0), X1);
    go("T1 NLKG FMin", t1_long, problem(E::NLKG, S::FMin, 0.0, 1.0, 3.0), X1);
    go("T2 NLS EnergyMin", t2, problem(E::NLS, S::EnergyMin, 0.0, 1.0, 2.0), X2);
    go("T2 NLKG FMin", t2, problem(E::NLKG, S::FMin, 0.0, 1.0, 3.0), X2);
    go("S2 NLS EnergyMin", s2, problem(E::NLS, S::EnergyMin, 0.0, 1.0, 2.0), XS);
    go("S2 NLS FMin", s2, problem(E::NLS, S::FMin, 1.0, 1.0, 3.0), XS);
    go("S2 NLKG EnergyMin", s2, problem(E::NLKG, S::EnergyMin, 0.5, 1.0, 2.0), XS);
    go("S2 NLKG FMin", s2, problem(E::NLKG, S::FMin, 0.0, 1.0, 3.0), XS);
    go("half-line NLKG FMin", rad, problem(E::NLKG, S::FMin, 0.0, 1.0, 3.0), XR);
    go("half-line NLS EnergyMin", rad, problem(E::NLS, S::EnergyMin, 0.0, 1.0, 2.0), XR);
    const double t = seconds_since(t0);
    v.check(t < 600, "runtime " + num(t) + " s < 600 s");
  });

  criterion(4, "symmetry breaking on T^1 against the stated constant branch", [](Verdict& v) {
    const double m = 1, p = 3, b = 0.5, A = 1;
    const int n = 1;
    const std::vector<double> scales = {1, 2, 4, 8, 16, 32, 64};
    const auto r = scaling_sweep(TorusSpec{1, 1.0, 32, 1.0}, KillingSpec::torus({b}), m, p, A, scales);
    auto stated = [&](double k) { return m * m * std::pow(A, 1 / (p + 1)) * std::pow(k, n * p / (p + 1)); };
    std::optional<double> below_stated;
    for (std::size_t i = 0; i < scales.size(); ++i) {
      v.note("k=" + num(scales[i]) + " minimized " + num(r.minimized[i]) + ", assembled constant " +
             num(r.constant_branch[i]) + ", stated formula " + num(stated(scales[i])) + ", " +
             to_string(r.classification[i]));
      if (!below_stated && r.classification[i] != Classification::Constant && r.minimized[i] < stated(scales[i]) - 1e-8)
        below_stated = scales[i];
    }
    v.check(below_stated.has_value(),
            "nonconstant minimiser below the stated branch by > 1e-8 at k=" + (below_stated ? num(*below_stated) : "none"));
    v.check(r.breaking_scale.has_value(),
            "nonconstant minimiser below the assembled constant branch at k=" +
                (r.breaking_scale ? num(*r.breaking_scale) : "none"));
    double defect = 0;
    for (std::size_t i = 0; i < scales.size(); ++i)
      defect = std::max(defect, std::abs(r.constant_branch[i] - stated(scales[i])) / stated(scales[i]));
    v.check(defect <= 1e-10, "assembled constant branch vs m^2 A^{1/(p+1)} k^{np/(p+1)}: relative defect " + num(defect));
    v.check(std::abs(r.slope - n * p / (p + 1)) <= 1e-3,
            "log-log slope " + num(r.slope) + " vs np/(p+1) = " + num(n * p / (p + 1)));
    v.note("assembled branch vs m^2 A^{2/(p+1)} k^{(p-1)/(p+1)}: defect " + num(r.closed_form_defect) + ", slope " +
           num(r.slope) + " vs " + num(r.slope_correct));
  });

  criterion(5, "anisotropic scaling laws on Gaussian bumps, r in {2,4,8}", [](Verdict& v) {
    struct Triple {
      double sigma, a, b;
    };
    for (const Triple t : {Triple{1, 4, 2}, Triple{1, 2, 1}, Triple{0.5, 1, 1}}) {
      for (double r : {2.0, 4.0, 8.0}) {
        const auto rep = anisotropic_identities(SeparableProfile::gaussian(), r, t.sigma, t.a, t.b, 2.0);
        if (rep.laws.size() != 5) v.check(false, "expected five laws");
        for (const auto& l : rep.laws) {
          const bool roundoff = l.error < 1e-10 && l.error_refined < 1e-10;
          const bool ok = l.error_refined <= 1e-6 && (l.reduction >= 4 || roundoff);
          v.check(ok, "(" + num(t.sigma) + "," + num(t.a) + "," + num(t.b) + ") r=" + num(r) + " " + l.name +
                          ": error " + num(l.error) + " -> " + num(l.error_refined) +
                          (roundoff ? " (round-off on both grids)" : ", reduction " + num(l.reduction)));
        }
      }
    }
  });

  criterion(6, "negative-energy construction at fixed mass", [](Verdict& v) {
    for (auto [n, beta] : std::vector<std::pair<int, double>>{{1, 1.0}, {2, 4.0}}) {
      const auto rep = negative_energy_construction(n, 2.0, beta).report;
      v.check(rep.reached && rep.steps.back().energy < 0,
              "(n,p)=(" + std::to_string(n) + ",2) beta=" + num(beta) + ": energy " + num(rep.steps.back().energy) +
                  " at lambda " + num(rep.lambda_final));
      v.check(rep.max_mass_error <= 1e-10, "mass drift " + num(rep.max_mass_error));
    }
  });

  criterion(7, "concentration-compactness archetypes", [](Verdict& v) {
    auto b = std::make_shared<const RadialBasis>(RadialSpec::uniform(4096, 8192, [](double) { return 1.0; }));
    const std::vector<double> radii = {0.5, 1, 2, 4};
    const std::vector<double> eps = {0.1, 0.03, 0.01};
    int matched = 0, total = 0;
    double worst_alpha = 0;
    for (auto kind : {CCArchetype::Vanishing, CCArchetype::Concentration, CCArchetype::Splitting})
      for (std::uint64_t s = 0; s < 10; ++s) {
        const auto a = cc_archetype(kind, b, 3.0, 1.0, default_seed + s);
        const auto rep = cc_classify(a.fields, 3.0, eps, radii);
        const bool match = static_cast<int>(rep.verdict) == static_cast<int>(kind);
        matched += match;
        ++total;
        if (!match) v.note(std::string(to_string(kind)) + " seed " + std::to_string(s) + " -> " + to_string(rep.verdict));
        if (kind == CCArchetype::Splitting) worst_alpha = std::max(worst_alpha, std::abs(rep.alpha - a.alpha));
      }
    v.check(matched == total, std::to_string(matched) + "/" + std::to_string(total) + " verdicts match");
    v.check(worst_alpha < 2 * 0.01, "splitting alpha error " + num(worst_alpha) + " < 2 eps = 0.02");
  });

  criterion(8, "perturbation of the Killing field", [](Verdict& v) {
    auto b = std::make_shared<TorusBasis>(TorusSpec{1, 8.0, 64, 1.0});
    const auto rep = perturbation_study(b, KillingSpec::torus({0.5}), KillingSpec::torus({1.0}), {1e-1, 1e-2, 1e-3},
                                        problem(Equation::NLKG, Scheme::FMin, 0.0, 1.0, 3.0), 50);
    int samples = 0;
    for (const auto& r : rep.bound) samples += r.samples;
    v.check(rep.total_violations == 0 && samples == 150,
            std::to_string(rep.total_violations) + " violations over " + std::to_string(samples) + " samples");
    std::string sd;
    for (const auto& r : rep.minimizers) sd += num(r.sup_difference) + " ";
    v.check(rep.monotone, "sup differences " + sd + "decrease with eps");
  });

  criterion(9, "Gagliardo-Nirenberg gate and the F / energy identity", [](Verdict& v) {
    using R = boost::rational<long long>;
    int rows = 0, bad = 0;
    for (int n = 1; n <= 8; ++n)
      for (long long num_ = 2; num_ <= 120; ++num_)
        for (long long den : {1LL, 2LL, 3LL, 4LL, 5LL, 7LL, 9LL, 16LL}) {
          const R p(num_, den);
          if (p <= R(1)) continue;
          const auto g = gn_gate(n, p);
          // gamma (p+1) < 2 cross-multiplied by hand: n (p-1) < 4.
          const bool oracle = R(n) * (p - 1) < R(4);
          if (g.by_gamma != oracle || g.by_p != oracle) ++bad;
          ++rows;
        }
    v.check(bad == 0, std::to_string(rows) + " rational (n, p) pairs, " + std::to_string(bad) + " disagreements");
    const auto t1 = gn_scan(TorusBasis(TorusSpec{1, 2 * pi, 64, 1.0}), 3.0, 50, KillingSpec::torus({0.4}), 0.3, 1.2);
    const auto t2 = gn_scan(TorusBasis(TorusSpec{2, 2 * pi, 32, 1.0}), 2.0, 50, KillingSpec::torus({0.3, 0.2}), 0.3, 1.2);
    const auto s2 = gn_scan(SphereBasis(SphereSpec::minimal(2, 8)), 2.0, 50, KillingSpec::sphere(0.4), 0.3, 1.2);
    const auto rd = gn_scan(RadialBasis(RadialSpec::uniform(20, 400, [](double) { return 1.0; })), 3.0, 50,
                            std::nullopt, 0.3, 1.2);
    for (auto [name, rep] : std::vector<std::pair<std::string, GNReport>>{{"T1", t1}, {"T2", t2}, {"S2", s2}, {"half-line", rd}})
      v.check(rep.identity_max_defect <= 1e-10, name + ": identity defect " + num(rep.identity_max_defect) + " over " +
                                                     std::to_string(rep.samples) + " fields");
  });

  criterion(10, "determinism: manifest re-runs reproduce summaries bit-identically", [](Verdict& v) {
    const fs::path root = fs::temp_directory_path() / "travwave-acceptance";
    fs::remove_all(root);
    std::ostringstream sink;
    for (const auto& entry : fs::directory_iterator(TRAVWAVE_CONFIG_DIR)) {
      if (entry.path().extension() != ".json") continue;
      const std::string stem = entry.path().stem().string();
      io::RunConfig cfg = io::parse_config(io::read_json_file(entry.path().string()));
      cfg.output = (root / stem / "first").string();
      io::CommandResult first;
      try {
        first = io::run_command(cfg, sink);
      } catch (const ParameterRegimeError&) {
        v.note(stem + ": refused by design, nothing to reproduce");
        continue;
      }
      io::RunConfig again = io::parse_config(io::read_json_file(first.manifest.string()));
      again.output = (root / stem / "second").string();
      const auto second = io::run_command(again, sink);
      const std::string a = slurp(first.manifest.parent_path() / ("summary-" + first.manifest.stem().string().substr(9) + ".json"));
      const std::string b = slurp(second.manifest.parent_path() / ("summary-" + second.manifest.stem().string().substr(9) + ".json"));
      v.check(!a.empty() && a == b && first.exit_code == second.exit_code,
              stem + ": summary " + (a == b ? "identical" : "differs") + ", exit " + std::to_string(first.exit_code));
    }
    fs::remove_all(root);
  });

  std::cout << (failures == 0 ? "ALL CRITERIA PASS" : std::to_string(failures) + " CRITERIA FAIL") << '\n';
  return failures == 0 ? 0 : 1;
}
