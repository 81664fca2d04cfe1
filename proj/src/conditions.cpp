#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "cpphase/error.hpp"
#include "cpphase/models.hpp"

namespace cpphase {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::uint64_t kMaxTerms = std::uint64_t{1} << 22;

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

// Sum of k^-s over k = 1..k_max, plus the integral bound on the tail
// sum_{k > k_max} k^-s <= k_max^{1-s}/(s-1) when s > 1.
struct PowerSeries {
  double partial = 0.0;
  double tail = kInf;
};

PowerSeries power_series(double s, std::uint64_t k_max) {
  PowerSeries out;
  // Summing small terms first keeps the rounding error down.
  for (std::uint64_t k = k_max; k >= 1; --k) out.partial += std::pow(static_cast<double>(k), -s);
  if (s > 1.0) out.tail = std::pow(static_cast<double>(k_max), 1.0 - s) / (s - 1.0);
  return out;
}

}  // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::satisfied: return "satisfied";
    case Verdict::violated: return "violated";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

LrpConditionReport lrp_condition_check(const LrpSpec& spec, std::uint64_t k_max, double tol) {
  if (k_max < 2) throw DomainError("k_max must be at least 2");
  spec.phi.validate();
  LrpConditionReport r;
  r.sparsity.name = "sum phi(k)";
  r.first_moment.name = "sum k phi(k)";

  if (spec.phi.delta) {
    const double delta = *spec.phi.delta;
    r.has_certain_edge = true;  // phi(1) = 1
    // Grow k_max until the tail bound of the first moment drops below tol.
    std::uint64_t k = k_max;
    if (delta > 2.0 && tol > 0.0) {
      while (k < kMaxTerms && std::pow(static_cast<double>(k), 2.0 - delta) / (delta - 2.0) > tol) k *= 2;
    }
    const auto s0 = power_series(delta, k);
    r.sparsity.partial = s0.partial;
    r.sparsity.tail_bound = s0.tail;
    r.sparsity.verdict = Verdict::satisfied;
    r.sparsity.witness = "integral tail bound k_max^(1-delta)/(delta-1) with k_max=" + std::to_string(k);

    const auto s1 = power_series(delta - 1.0, k);
    r.first_moment.partial = s1.partial;
    r.first_moment.tail_bound = s1.tail;
    if (delta > 2.0) {
      r.first_moment.verdict = Verdict::satisfied;
      r.first_moment.witness =
          "integral tail bound k_max^(2-delta)/(delta-2) with k_max=" + std::to_string(k);
    } else {
      r.first_moment.verdict = Verdict::violated;
      r.first_moment.witness = "k phi(k) = k^(1-delta) >= 1/k for every k; harmonic series diverges";
    }
  } else {
    const auto& t = spec.phi.table;
    for (std::size_t i = t.size(); i-- > 0;) {
      r.sparsity.partial += t[i];
      r.first_moment.partial += static_cast<double>(i + 1) * t[i];
      if (t[i] == 1.0) r.has_certain_edge = true;
    }
    if (spec.phi.table_tail_known) {
      for (auto* c : {&r.sparsity, &r.first_moment}) {
        c->tail_bound = 0.0;
        c->verdict = Verdict::satisfied;
        c->witness = "phi vanishes beyond k=" + std::to_string(t.size());
      }
    } else {
      for (auto* c : {&r.sparsity, &r.first_moment}) {
        c->tail_bound = kInf;
        c->verdict = Verdict::inconclusive;
        c->witness = "no information on phi beyond the table";
      }
    }
  }

  if (r.first_moment.verdict == Verdict::violated) {
    r.hypothesis = Verdict::violated;
  } else if (r.first_moment.verdict == Verdict::satisfied) {
    if (r.has_certain_edge) r.hypothesis = Verdict::satisfied;
    else r.hypothesis = spec.phi.table_tail_known ? Verdict::violated : Verdict::inconclusive;
  } else {
    r.hypothesis = Verdict::inconclusive;
  }
  return r;
}

double product_kernel_area(double a, double c) {
  if (!(a >= 0.0 && a <= 1.0) || !(c >= 0.0)) throw DomainError("product_kernel_area needs a in [0,1], c >= 0");
  if (c <= a * a) return 0.0;
  if (c >= 1.0) return (1.0 - a) * (1.0 - a);
  double area = 0.0;
  // u in [a, c]: every v in [a, 1] qualifies.
  if (c > a) area += (c - a) * (1.0 - a);
  // u in [max(a,c), min(1, c/a)]: v in [a, c/u].
  const double u0 = std::max(a, c);
  const double u1 = std::min(1.0, c / a);
  if (u1 > u0) area += c * std::log(u1 / u0) - a * (u1 - u0);
  return std::max(area, 0.0);
}

ConditionReport wdrcm_cut_condition(const WdrcmSpec& spec, int n_max, double tol) {
  if (n_max < 1) throw DomainError("n_max must be at least 1");
  ConditionReport r;
  r.name = "sum_n 2^(2n) int int phi(u,v,2^n) du dv";
  const double mu = spec.mu;
  if (!(mu > 0.0)) throw SpecError("WDRCM truncation exponent mu must be positive");

  if (spec.kernel.name == "zero") {
    r.verdict = Verdict::satisfied;
    r.witness = "kernel vanishes identically";
    return r;
  }

  if (spec.kernel.name == "product") {
    const double g = spec.gamma;
    auto term = [&](int n) {
      const double a = std::exp2(-n * (1.0 + mu));
      const double c = std::exp2(-n / g);
      return std::exp2(2.0 * n) * product_kernel_area(a, c);
    };
    if (g < 0.5) {
      // area <= c (1 + 2 log(1/a)), so term_n <= rho^n (1 + beta n).
      const double rho = std::exp2(2.0 - 1.0 / g);
      const double beta = 2.0 * (1.0 + mu) * std::log(2.0);
      auto tail = [&](int n) {
        const double rn = std::pow(rho, n + 1);
        const double geo = rn / (1.0 - rho);
        const double lin = rn * ((n + 1) * (1.0 - rho) + rho) / ((1.0 - rho) * (1.0 - rho));
        return geo + beta * lin;
      };
      int n = n_max;
      while (tol > 0.0 && tail(n) > tol && n < 4096) n *= 2;
      for (int k = 1; k <= n; ++k) r.partial += term(k);
      r.tail_bound = tail(n);
      r.verdict = Verdict::satisfied;
      r.witness = "term_n <= rho^n (1 + beta n) with rho = 2^(2-1/gamma) = " + fmt(rho) +
                  " < 1, n_max=" + std::to_string(n);
    } else {
      for (int k = 1; k <= n_max; ++k) r.partial += term(k);
      r.tail_bound = kInf;
      r.verdict = Verdict::violated;
      // [a, sqrt c]^2 lies inside {uv <= c}, so term_n >= (2^{n(1-1/(2 gamma))} - 2^{-mu n})^2,
      // which stays >= (1 - 2^{-mu n})^2 -> 1 when gamma >= 1/2.
      r.witness = "term_n >= (1 - 2^(-mu n))^2 -> 1 for gamma >= 1/2; terms do not vanish";
    }
    return r;
  }

  // Generic kernel: midpoint rule in log-mark coordinates, no tail bound.
  constexpr int grid = 200;
  std::vector<double> terms;
  for (int n = 1; n <= n_max; ++n) {
    const double a = std::exp2(-n * (1.0 + mu));
    const double la = std::log(a);
    const double r_n = std::exp2(n);
    double integral = 0.0;
    for (int i = 0; i < grid; ++i) {
      const double u = std::exp(la * (1.0 - (i + 0.5) / grid));
      for (int j = 0; j < grid; ++j) {
        const double v = std::exp(la * (1.0 - (j + 0.5) / grid));
        integral += spec.kernel.prob(u, v, r_n) * u * v;
      }
    }
    integral *= (la / grid) * (la / grid);
    terms.push_back(std::exp2(2.0 * n) * integral);
    r.partial += terms.back();
  }
  r.tail_bound = kInf;
  const std::size_t last = std::min<std::size_t>(terms.size(), 5);
  bool growing = terms.size() >= 2;
  for (std::size_t i = terms.size() - last; i < terms.size(); ++i) {
    if (terms[i] < 1.0 || (i > 0 && terms[i] < terms[i - 1])) growing = false;
  }
  if (growing) {
    r.verdict = Verdict::violated;
    r.witness = "last terms non-decreasing and >= 1 (term test, numerical)";
  } else {
    r.verdict = Verdict::inconclusive;
    r.witness = "no analytic tail bound for kernel '" + spec.kernel.name + "'";
  }
  return r;
}

CutProbability lrp_cut_probability(const LrpSpec& spec, std::uint64_t k_max) {
  spec.phi.validate();
  if (spec.phi(1) != 1.0) throw DomainError("cut probability needs phi(1) = 1");
  if (k_max < 2) throw DomainError("k_max must be at least 2");
  CutProbability out;
  const std::uint64_t upto = spec.phi.delta ? k_max : std::min<std::uint64_t>(k_max, spec.phi.table.size());
  // At distance k exactly k pairs {x, x+k} with x in [-k, -1] cross the link {-1, 0}.
  double log_p = 0.0;
  for (std::uint64_t k = upto; k >= 2; --k) {
    const double f = spec.phi(k);
    if (f >= 1.0) {
      out.exact = true;
      return out;
    }
    log_p += static_cast<double>(k) * std::log1p(-f);
  }
  const double p = std::exp(log_p);
  out.hi = p;
  if (!spec.phi.delta) {
    const bool covered = spec.phi.table_tail_known && upto == spec.phi.table.size();
    out.lo = covered ? p : 0.0;
    out.exact = covered;
    return out;
  }
  const double delta = *spec.phi.delta;
  if (delta <= 2.0) {
    out.lo = 0.0;
    return out;
  }
  // sum_{k>k_max} k phi/(1-phi) <= (1 - phi(k_max+1))^-1 int_{k_max}^inf x^{1-delta} dx
  const double km = static_cast<double>(upto);
  const double tail = std::pow(km, 2.0 - delta) / (delta - 2.0) / (1.0 - std::pow(km + 1.0, -delta));
  out.lo = p * std::exp(-tail);
  return out;
}

}  // namespace cpphase
