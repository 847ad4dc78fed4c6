#include "photonlink/hbt_channel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "photonlink/numeric.hpp"

namespace photonlink {

namespace {

constexpr double kLog2E = 1.4426950408889634;
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kAuditTol = 1e-8;

// Per-axis tables over the truncation box [lo, hi].
struct AxisTable {
  std::int64_t lo = 0, hi = 0;
  std::vector<double> p_on, p_off;  // linear pmfs
  std::vector<double> llr;          // log pmf_on - log pmf_off; +inf where pmf_off = 0

  std::size_t size() const { return static_cast<std::size_t>(hi - lo + 1); }
};

AxisTable make_axis(double mean_on, double mean_off, double sigmas) {
  const auto edge_lo = [&](double mu) { return mu - sigmas * std::sqrt(mu) - 20.0; };
  const auto edge_hi = [&](double mu) { return mu + sigmas * std::sqrt(mu) + 20.0; };
  AxisTable axis;
  axis.lo = static_cast<std::int64_t>(
      std::max(0.0, std::floor(std::min(edge_lo(mean_on), edge_lo(mean_off)))));
  axis.hi = static_cast<std::int64_t>(
      std::ceil(std::max(edge_hi(mean_on), edge_hi(mean_off))));
  axis.p_on.reserve(axis.size());
  axis.p_off.reserve(axis.size());
  axis.llr.reserve(axis.size());
  for (std::int64_t k = axis.lo; k <= axis.hi; ++k) {
    const double l1 = log_poisson_pmf(k, mean_on);
    const double l0 = log_poisson_pmf(k, mean_off);
    axis.p_on.push_back(std::exp(l1));
    axis.p_off.push_back(std::exp(l0));
    // mean_on >= mean_off always holds here, so l1 = -inf implies l0 = -inf.
    axis.llr.push_back(l1 == kNegInf ? 0.0 : l1 - l0);
  }
  return axis;
}

// Pointwise mutual-information terms as functions of the log-likelihood
// ratio L = log(p1/p0):
//   f1 = log2(p1 / mix), f0 = log2(p0 / mix), f0 = f1 - L log2(e).
// Both are evaluated through exponentials of -|L| only.
inline double f_on(double llr, double prior) {
  if (llr >= 0.0)
    return -std::log2(prior + (1.0 - prior) * std::exp(-llr));
  return llr * kLog2E - std::log2(prior * std::exp(llr) + (1.0 - prior));
}

inline double f_off(double llr, double prior) {
  if (llr >= 0.0)
    return -llr * kLog2E - std::log2(prior + (1.0 - prior) * std::exp(-llr));
  return -std::log2(prior * std::exp(llr) + (1.0 - prior));
}

// Exact mutual information over the box, in bits. Outer-axis slices are
// evaluated independently and combined in index order, so the result does
// not depend on the worker count.
double mi_exact(const AxisTable& a, const AxisTable& b, const AxisTable& c, double prior) {
  if (prior <= 0.0 || prior >= 1.0) return 0.0;
  const auto slice = [&](std::int64_t ia) -> double {
    const double pa1 = a.p_on[ia];
    const double pa0 = a.p_off[ia];
    const double ra = a.llr[ia];
    if (pa1 == 0.0 && pa0 == 0.0) return 0.0;
    KahanSum bits;
    for (std::size_t jb = 0; jb < b.size(); ++jb) {
      const double pab1 = pa1 * b.p_on[jb];
      const double pab0 = pa0 * b.p_off[jb];
      if (pab1 == 0.0 && pab0 == 0.0) continue;
      const double rab = ra + b.llr[jb];
      for (std::size_t kc = 0; kc < c.size(); ++kc) {
        const double p1 = pab1 * c.p_on[kc];
        const double p0 = pab0 * c.p_off[kc];
        if (p1 == 0.0 && p0 == 0.0) continue;
        const double llr = rab + c.llr[kc];
        if (p1 > 0.0) bits.add(prior * p1 * f_on(llr, prior));
        if (p0 > 0.0) bits.add((1.0 - prior) * p0 * f_off(llr, prior));
      }
    }
    return bits.value();
  };
  const auto slices = parallel_map_ordered(static_cast<std::int64_t>(a.size()), slice);
  KahanSum total;
  for (const double s : slices) total.add(s);
  return total.value();
}

// Weighted log-likelihood-ratio aggregation of the grid. The on- and
// off-hypothesis masses are binned by L with first moments kept per bin,
// which makes the mutual information a cheap one-dimensional sum for any
// prior. Mass at L = +inf (zero background) keeps its own bucket, where
// the on-term is exactly -log2(prior).
struct LlrHist {
  double lo = 0.0, delta = 1.0;
  std::vector<double> w_on, wl_on, w_off, wl_off;
  double inf_w_on = 0.0;

  LlrHist(double lo_bound, double hi_bound) {
    constexpr std::int64_t kMaxBins = 2'000'000;
    lo = lo_bound;
    const double span = std::max(hi_bound - lo_bound, 1.0);
    delta = std::max(2e-3, span / static_cast<double>(kMaxBins));
    const auto nbins = static_cast<std::size_t>(std::ceil(span / delta)) + 1;
    w_on.assign(nbins, 0.0);
    wl_on.assign(nbins, 0.0);
    w_off.assign(nbins, 0.0);
    wl_off.assign(nbins, 0.0);
  }

  std::size_t bin(double llr) const {
    const double idx = (llr - lo) / delta;
    if (idx <= 0.0) return 0;
    const auto i = static_cast<std::size_t>(idx);
    return std::min(i, w_on.size() - 1);
  }

  void add_on(double llr, double mass) {
    if (mass <= 0.0) return;
    if (llr == kInf) {
      inf_w_on += mass;
      return;
    }
    const std::size_t i = bin(llr);
    w_on[i] += mass;
    wl_on[i] += mass * llr;
  }

  void add_off(double llr, double mass) {
    if (mass <= 0.0) return;
    const std::size_t i = bin(llr);
    w_off[i] += mass;
    wl_off[i] += mass * llr;
  }

  double total_on() const {
    KahanSum s;
    for (const double w : w_on) s.add(w);
    s.add(inf_w_on);
    return s.value();
  }

  void merge_scaled_shifted(const LlrHist& src, double shift, double s_on, double s_off) {
    if (shift == kInf) {
      // Every source point moves to L = +inf; off-mass cannot occur there.
      if (s_on > 0.0) inf_w_on += s_on * src.total_on();
      return;
    }
    for (std::size_t i = 0; i < src.w_on.size(); ++i) {
      if (src.w_on[i] > 0.0 && s_on > 0.0)
        add_on(src.wl_on[i] / src.w_on[i] + shift, s_on * src.w_on[i]);
      if (src.w_off[i] > 0.0 && s_off > 0.0)
        add_off(src.wl_off[i] / src.w_off[i] + shift, s_off * src.w_off[i]);
    }
    if (src.inf_w_on > 0.0 && s_on > 0.0) inf_w_on += s_on * src.inf_w_on;
  }

  double mi(double prior) const {
    if (prior <= 0.0 || prior >= 1.0) return 0.0;
    KahanSum bits;
    for (std::size_t i = 0; i < w_on.size(); ++i) {
      if (w_on[i] > 0.0)
        bits.add(prior * w_on[i] * f_on(wl_on[i] / w_on[i], prior));
      if (w_off[i] > 0.0)
        bits.add((1.0 - prior) * w_off[i] * f_off(wl_off[i] / w_off[i], prior));
    }
    if (inf_w_on > 0.0) bits.add(prior * inf_w_on * (-std::log2(prior)));
    return bits.value();
  }
};

struct Boxes {
  std::array<AxisTable, 3> base;
  std::array<AxisTable, 3> wide;
};

Boxes make_boxes(const HbtChannelParams& params, const HbtMiOptions& options) {
  const auto on = hbt_means(1, params);
  const auto off = hbt_means(0, params);
  Boxes boxes;
  for (int i = 0; i < 3; ++i) {
    boxes.base[i] = make_axis(on[i], off[i], options.box_sigmas);
    boxes.wide[i] = make_axis(on[i], off[i], options.box_sigmas + options.audit_extra_sigmas);
  }
  return boxes;
}

double finite_min_llr(const AxisTable& axis) {
  double m = 0.0;
  for (const double r : axis.llr)
    if (r != kInf) m = std::min(m, r);
  return m;
}

double finite_max_llr(const AxisTable& axis) {
  double m = 0.0;
  for (const double r : axis.llr)
    if (r != kInf) m = std::max(m, r);
  return m;
}

// Builds base- and wide-box LLR aggregations in one pass: a 2-D pass over
// the two inner axes, then a shift-and-scale merge per outer-axis count.
struct HistPair {
  LlrHist base;
  LlrHist wide;
};

HistPair build_hists(const Boxes& boxes) {
  const AxisTable& a = boxes.wide[0];
  const AxisTable& b = boxes.wide[1];
  const AxisTable& c = boxes.wide[2];
  const AxisTable& a0 = boxes.base[0];
  const AxisTable& b0 = boxes.base[1];
  const AxisTable& c0 = boxes.base[2];

  const double jk_lo = finite_min_llr(b) + finite_min_llr(c) - 1.0;
  const double jk_hi = finite_max_llr(b) + finite_max_llr(c) + 1.0;
  LlrHist jk_wide(jk_lo, jk_hi);
  LlrHist jk_base(jk_lo, jk_hi);

  for (std::size_t j = 0; j < b.size(); ++j) {
    const std::int64_t kj = b.lo + static_cast<std::int64_t>(j);
    const bool j_in_base = kj >= b0.lo && kj <= b0.hi;
    for (std::size_t k = 0; k < c.size(); ++k) {
      const double p1 = b.p_on[j] * c.p_on[k];
      const double p0 = b.p_off[j] * c.p_off[k];
      if (p1 == 0.0 && p0 == 0.0) continue;
      const double llr = b.llr[j] + c.llr[k];
      jk_wide.add_on(llr, p1);
      jk_wide.add_off(llr, p0);
      const std::int64_t kk = c.lo + static_cast<std::int64_t>(k);
      if (j_in_base && kk >= c0.lo && kk <= c0.hi) {
        jk_base.add_on(llr, p1);
        jk_base.add_off(llr, p0);
      }
    }
  }

  const double tot_lo = jk_lo + finite_min_llr(a) - 1.0;
  const double tot_hi = jk_hi + finite_max_llr(a) + 1.0;
  HistPair out{LlrHist(tot_lo, tot_hi), LlrHist(tot_lo, tot_hi)};
  for (std::size_t i = 0; i < a.size(); ++i) {
    out.wide.merge_scaled_shifted(jk_wide, a.llr[i], a.p_on[i], a.p_off[i]);
    const std::int64_t ki = a.lo + static_cast<std::int64_t>(i);
    if (ki >= a0.lo && ki <= a0.hi)
      out.base.merge_scaled_shifted(jk_base, a.llr[i], a.p_on[i], a.p_off[i]);
  }
  return out;
}

bool degenerate(const HbtChannelParams& params) {
  const auto on = hbt_means(1, params);
  const auto off = hbt_means(0, params);
  return on == off;
}

void audit_or_throw(const HistPair& hists, double prior) {
  const double base = hists.base.mi(prior);
  const double wide = hists.wide.mi(prior);
  if (std::abs(base - wide) >= kAuditTol)
    throw hbt_truncation_error(
        "hbt mutual information: truncation audit failed (box vs enlarged box differ by " +
        std::to_string(std::abs(base - wide)) + " bits)");
}

}  // namespace

void validate_hbt_params(const HbtChannelParams& params, bool require_symmetric) {
  double sum_c = 0.0, sum_t = 0.0;
  for (int i = 0; i < 3; ++i) {
    if (!(params.coherent_probs[i] >= 0.0 && params.coherent_probs[i] <= 1.0) ||
        !(params.thermal_probs[i] >= 0.0 && params.thermal_probs[i] <= 1.0))
      throw std::invalid_argument("hbt params: outcome probabilities must be in [0, 1]");
    sum_c += params.coherent_probs[i];
    sum_t += params.thermal_probs[i];
  }
  if (sum_c > 1.0 + 1e-12 || sum_t > 1.0 + 1e-12)
    throw std::invalid_argument("hbt params: outcome probability triples must sum to <= 1");
  if (params.stats.lambda_sig < 0.0 || params.stats.lambda_bg < 0.0)
    throw std::invalid_argument("hbt params: photon means must be >= 0");
  if (require_symmetric &&
      (std::abs(params.coherent_probs[1] - params.coherent_probs[2]) > 1e-12 ||
       std::abs(params.thermal_probs[1] - params.thermal_probs[2]) > 1e-12))
    throw std::invalid_argument("hbt params: 01/10 symmetry violated");
}

std::array<double, 3> hbt_means(int symbol, const HbtChannelParams& params) {
  std::array<double, 3> means{};
  for (int i = 0; i < 3; ++i) {
    means[i] = params.thermal_probs[i] * params.stats.lambda_bg;
    if (symbol) means[i] += params.coherent_probs[i] * params.stats.lambda_sig;
  }
  return means;
}

double conditional_pmf(const CountTriple& counts, int symbol, const HbtChannelParams& params) {
  validate_hbt_params(params);
  if (counts.n00 < 0 || counts.n01 < 0 || counts.n10 < 0)
    throw std::invalid_argument("conditional_pmf: counts must be >= 0");
  const auto means = hbt_means(symbol, params);
  return poisson_pmf(counts.n00, means[0]) * poisson_pmf(counts.n01, means[1]) *
         poisson_pmf(counts.n10, means[2]);
}

double hbt_mutual_information(const HbtChannelParams& params, double prior_one,
                              const HbtMiOptions& options) {
  validate_hbt_params(params);
  if (!(prior_one >= 0.0 && prior_one <= 1.0))
    throw std::invalid_argument("hbt_mutual_information: prior must be in [0, 1]");
  if (prior_one == 0.0 || prior_one == 1.0 || degenerate(params)) return 0.0;

  const Boxes boxes = make_boxes(params, options);
  const double value = mi_exact(boxes.base[0], boxes.base[1], boxes.base[2], prior_one);
  if (options.audit) {
    const HistPair hists = build_hists(boxes);
    audit_or_throw(hists, prior_one);
  }
  return value;
}

PriorDesign optimal_prior(const HbtChannelParams& params) {
  validate_hbt_params(params);
  if (degenerate(params)) return {0.5, 0.0};

  const HbtMiOptions options;
  const Boxes boxes = make_boxes(params, options);
  const HistPair hists = build_hists(boxes);
  const auto opt = golden_section_maximize(
      [&](double g) { return hists.base.mi(g); }, 0.0, 1.0, 1e-10);
  audit_or_throw(hists, opt.x);
  const double rate = mi_exact(boxes.base[0], boxes.base[1], boxes.base[2], opt.x);
  return {opt.x, rate};
}

std::vector<HbtRatePoint> hbt_rate_curve(std::span<const LinkBudget> budgets,
                                         const HbtChannelParams& params_template) {
  if (budgets.empty()) throw std::invalid_argument("hbt_rate_curve: empty sweep");
  std::vector<HbtRatePoint> out;
  out.reserve(budgets.size());
  for (std::size_t i = 0; i < budgets.size(); ++i) {
    try {
      HbtChannelParams params = params_template;
      params.stats = slot_statistics(budgets[i]);
      const auto design = optimal_prior(params);
      out.push_back({budgets[i].power_dbm, design.prior_star, design.rate_bits});
    } catch (const std::exception& e) {
      throw std::runtime_error("hbt_rate_curve: point " + std::to_string(i) + " (" +
                               std::to_string(budgets[i].power_dbm) + " dBm): " + e.what());
    }
  }
  return out;
}

}  // namespace photonlink
