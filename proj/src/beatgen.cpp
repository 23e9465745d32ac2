#include "ecggan/beatgen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ecggan/error.hpp"
#include "ecggan/random.hpp"

namespace ecggan {

namespace {

// Training-lead rows: I, II, V1, V2, V3, V4, V5, V6.
struct Amplitudes {
  double p, q, r, s, t, st;
};
using LeadTable = std::array<Amplitudes, 8>;

constexpr LeadTable kNormal = {{
    {0.10, -0.05, 0.70, -0.10, 0.25, 0.0},
    {0.15, -0.06, 1.00, -0.15, 0.30, 0.0},
    {0.05, 0.00, 0.25, -0.70, 0.10, 0.0},
    {0.06, 0.00, 0.45, -1.00, 0.35, 0.0},
    {0.06, 0.00, 0.70, -0.70, 0.40, 0.0},
    {0.06, -0.05, 1.10, -0.40, 0.40, 0.0},
    {0.06, -0.08, 1.10, -0.20, 0.30, 0.0},
    {0.06, -0.08, 0.90, -0.10, 0.25, 0.0},
}};

// Lateral leads carry a second positive hump in the S slot (broad notched R).
constexpr LeadTable kLbbb = {{
    {0.10, 0.00, 0.50, 0.55, -0.20, -0.08},
    {0.15, 0.00, 0.70, 0.00, 0.15, -0.03},
    {0.05, 0.00, 0.10, -1.30, 0.30, 0.12},
    {0.06, 0.00, 0.15, -1.60, 0.40, 0.18},
    {0.06, 0.00, 0.25, -1.20, 0.35, 0.15},
    {0.06, 0.00, 0.50, -0.60, 0.20, 0.05},
    {0.06, 0.00, 1.00, 1.10, -0.25, -0.08},
    {0.06, 0.00, 0.90, 1.00, -0.22, -0.08},
}};

// V1 S and V5/V6 R are replaced by drawn voltages.
constexpr LeadTable kLvh = {{
    {0.10, -0.05, 1.00, -0.10, -0.12, -0.05},
    {0.15, -0.06, 1.20, -0.15, 0.10, -0.03},
    {0.05, 0.00, 0.25, -1.80, 0.15, 0.04},
    {0.06, 0.00, 0.40, -2.10, 0.25, 0.05},
    {0.06, 0.00, 0.80, -1.20, 0.20, 0.03},
    {0.06, -0.05, 1.80, -0.50, 0.10, 0.00},
    {0.06, -0.08, 2.50, -0.15, -0.15, -0.06},
    {0.06, -0.08, 2.10, -0.10, -0.15, -0.06},
}};

// Anterior ST elevation; V2-V4 ST values are replaced by drawn levels.
constexpr LeadTable kAcutmi = {{
    {0.10, -0.05, 0.70, -0.10, 0.30, 0.05},
    {0.15, -0.06, 0.90, -0.15, 0.25, 0.00},
    {0.05, 0.00, 0.20, -0.70, 0.30, 0.08},
    {0.06, 0.00, 0.35, -0.90, 0.70, 0.30},
    {0.06, 0.00, 0.55, -0.60, 0.75, 0.30},
    {0.06, -0.05, 0.90, -0.35, 0.65, 0.20},
    {0.06, -0.08, 1.00, -0.20, 0.45, 0.08},
    {0.06, -0.08, 0.85, -0.10, 0.30, 0.03},
}};

// Points at which a bump falls to 5% of its peak: center +- kExtent * sigma.
constexpr double kExtent = 2.4477;

double gaussian(double t, const Wave& w) {
  const double z = (t - w.center_ms) / w.width_ms;
  return w.amplitude_mv * std::exp(-0.5 * z * z);
}

double smoothstep(double x) {
  x = std::clamp(x, 0.0, 1.0);
  return x * x * (3.0 - 2.0 * x);
}

double plateau(double t, const LeadWaves& lw, double j_ms) {
  if (lw.st_offset_mv == 0.0) return 0.0;
  const double rise = smoothstep((t - (j_ms - 10.0)) / 10.0);
  const double fall_start = lw.t.center_ms - lw.t.width_ms;
  const double fall = 1.0 - smoothstep((t - fall_start) / (2.0 * lw.t.width_ms));
  return lw.st_offset_mv * rise * fall;
}

double lead_value(const BeatTemplate& tpl, std::size_t lead, double t) {
  const LeadWaves& lw = tpl.leads[lead];
  return gaussian(t, lw.p) + gaussian(t, lw.q) + gaussian(t, lw.r) + gaussian(t, lw.s) + gaussian(t, lw.t) +
         plateau(t, lw, tpl.qrs_dur_ms / 2.0);
}

double sample_time_ms(std::size_t n) { return (static_cast<double>(n) - 200.0) * 1000.0 / kSps; }

std::uint64_t category_stream(Category c) { return 0xbea7'0000 + static_cast<std::uint64_t>(c); }

}  // namespace

void validate(const BeatTemplate& t) {
  auto fail = [](const char* what) { throw Error(ErrorCode::InvalidTemplate, what); };
  if (!(t.qrs_dur_ms > 0.0)) fail("qrs_dur_ms must be positive");
  if (!(t.pr_ms >= 0.0 && t.pr_ms < t.qt_ms)) fail("need 0 <= pr_ms < qt_ms");
  if (!(t.noise_std_mv >= 0.0)) fail("noise_std_mv must be non-negative");
  for (const LeadWaves& lw : t.leads) {
    for (const Wave* w : {&lw.p, &lw.q, &lw.r, &lw.s, &lw.t}) {
      if (!(w->width_ms > 0.0)) fail("wave widths must be positive");
      if (!std::isfinite(w->center_ms) || !std::isfinite(w->amplitude_mv)) fail("non-finite wave parameter");
    }
    if (!(lw.p.center_ms < lw.q.center_ms && lw.q.center_ms < lw.r.center_ms && lw.r.center_ms < lw.s.center_ms &&
          lw.s.center_ms < lw.t.center_ms))
      fail("wave centers must be ordered P < Q < R < S < T");
    if (!std::isfinite(lw.st_offset_mv)) fail("non-finite ST offset");
  }
}

BeatMatrix render_beat(const BeatTemplate& t) {
  validate(t);
  BeatMatrix out;
  Rng rng(t.seed);
  for (std::size_t n = 0; n < kBeatSamples; ++n) {
    const double ms = sample_time_ms(n);
    for (std::size_t l = 0; l < 8; ++l) {
      double v = lead_value(t, l, ms);
      if (t.noise_std_mv > 0.0) v += rng.normal(0.0, t.noise_std_mv);
      out(n, l) = v;
    }
  }
  return out;
}

BeatTemplate sample_template(Category category, std::uint64_t seed, std::size_t index) {
  Rng rng(derive_seed(seed, category_stream(category), index));
  BeatTemplate tpl;
  tpl.seed = derive_seed(seed, 0x4015e, index);

  const LeadTable* table = nullptr;
  switch (category) {
    case Category::Normal:
      table = &kNormal;
      tpl.qrs_dur_ms = rng.uniform(80.0, 100.0);
      tpl.qt_ms = rng.uniform(370.0, 410.0);
      break;
    case Category::LVH:
      table = &kLvh;
      tpl.qrs_dur_ms = rng.uniform(90.0, 110.0);
      tpl.qt_ms = rng.uniform(370.0, 410.0);
      break;
    case Category::LBBB:
      table = &kLbbb;
      tpl.qrs_dur_ms = rng.uniform(130.0, 170.0);
      tpl.qt_ms = rng.uniform(420.0, 460.0);
      break;
    case Category::ACUTMI:
      table = &kAcutmi;
      tpl.qrs_dur_ms = rng.uniform(80.0, 100.0);
      tpl.qt_ms = rng.uniform(370.0, 410.0);
      break;
    case Category::Other:
      throw Error(ErrorCode::InvalidArgument, "corpora are generated for the four target categories only");
  }
  tpl.pr_ms = rng.uniform(140.0, 180.0);

  const double qrs = tpl.qrs_dur_ms;
  const double onset = -qrs / 2.0, offset = qrs / 2.0;
  const double sigma_p = rng.uniform(10.0, 13.0);
  const double sigma_t = rng.uniform(32.0, 40.0);
  const double p_center = onset - tpl.pr_ms + kExtent * sigma_p;
  const double t_center = onset + tpl.qt_ms - kExtent * sigma_t;
  const double scale = category == Category::LVH ? 1.0 : rng.uniform(0.9, 1.1);

  // Drawn category-specific values.
  double s_v1 = 0.0, r_v5 = 0.0;
  std::array<double, 3> st_anterior{};
  if (category == Category::LVH) {
    const double total = rng.uniform(3.9, 4.8);
    const double share = rng.uniform(0.38, 0.45);
    s_v1 = total * share;
    r_v5 = total - s_v1;
  } else if (category == Category::ACUTMI) {
    st_anterior = {rng.uniform(0.25, 0.40), rng.uniform(0.25, 0.40), rng.uniform(0.15, 0.30)};
  }

  for (std::size_t l = 0; l < 8; ++l) {
    const Amplitudes& a = (*table)[l];
    const double k = scale * rng.uniform(0.95, 1.05);
    LeadWaves& lw = tpl.leads[l];
    lw.p = {p_center, sigma_p, a.p * k};
    lw.t = {t_center, sigma_t, a.t * k};
    lw.st_offset_mv = a.st * k;

    if (category == Category::LBBB) {
      const bool lateral = l == 0 || l == 6 || l == 7;
      // Wide complexes: edge bumps sit 3.2 sigma inside the nominal window.
      const double sigma = qrs / 14.0, inset = 3.2 * sigma;
      if (lateral) {
        lw.q = {onset + inset - 1.0, sigma, 0.0};
        lw.r = {onset + inset, sigma, a.r * k};
        lw.s = {offset - inset, sigma, a.s * k};
      } else if (l == 1) {
        lw.q = {-qrs / 4.0, sigma, 0.0};
        lw.r = {0.0, sigma, a.r * k};
        lw.s = {qrs / 4.0, sigma, 0.0};
      } else {
        lw.q = {onset + inset - 1.0, sigma, 0.0};
        lw.r = {onset + inset, sigma, a.r * k};
        lw.s = {offset - inset, sigma, a.s * k};
      }
    } else {
      const double sigma_q = qrs / 12.0, sigma_r = qrs / 10.0, sigma_s = qrs / 12.0;
      lw.q = {onset + kExtent * sigma_q, sigma_q, a.q * k * (category == Category::LVH ? 2.0 : 1.0)};
      lw.r = {0.0, sigma_r, a.r * k};
      lw.s = {offset - kExtent * sigma_s, sigma_s, a.s * k};
    }
  }

  if (category == Category::LVH) {
    tpl.leads[2].s.amplitude_mv = -s_v1;
    tpl.leads[6].r.amplitude_mv = r_v5;
    tpl.leads[7].r.amplitude_mv = 0.85 * r_v5;
  } else if (category == Category::ACUTMI) {
    for (std::size_t v = 0; v < 3; ++v) tpl.leads[3 + v].st_offset_mv = st_anterior[v];
  }
  return tpl;
}

BeatFeatures template_features(const BeatTemplate& t) {
  BeatTemplate clean = t;
  clean.noise_std_mv = 0.0;
  const TwelveLeadBeat beat = derive_limb_leads(render_beat(clean));

  BeatFeatures f;
  f.rate_bpm = 60000.0 / kRrIntervalMs;
  f.pr_ms = t.pr_ms;
  f.qrs_dur_ms = t.qrs_dur_ms;
  f.qt_ms = t.qt_ms;
  f.qtc_ms = bazett_qtc_ms(t.qt_ms, kRrIntervalMs);

  // ST and voltages straight from the noiseless model; baseline is zero.
  const double j_ms = t.qrs_dur_ms / 2.0;
  const TwelveLeadBeat dense = [&] {
    BeatMatrix one;
    for (std::size_t l = 0; l < 8; ++l) one(0, l) = lead_value(t, l, j_ms + 60.0);
    return derive_limb_leads(one);
  }();
  for (std::size_t l = 0; l < 12; ++l) {
    f.st_level_uv[l] = dense(0, l) * 1000.0;
    double hi = 0.0, lo = 0.0;
    for (std::size_t n = 0; n < kBeatSamples; ++n) {
      const double ms = sample_time_ms(n);
      if (ms < -j_ms || ms > j_ms) continue;
      hi = std::max(hi, beat(n, l));
      lo = std::min(lo, beat(n, l));
    }
    f.r_amplitude_mv[l] = hi;
    f.s_amplitude_mv[l] = -lo;
  }

  // Axes from bump areas (amplitude * sigma * sqrt(2 pi)); aVF = II - I/2.
  auto area = [](const Wave& w) { return w.amplitude_mv * w.width_ms * std::sqrt(2.0 * std::numbers::pi); };
  auto axis = [&](auto waves_area) {
    const double a_i = waves_area(t.leads[0]), a_ii = waves_area(t.leads[1]);
    return hexaxial_axis_deg(a_i, a_ii - 0.5 * a_i);
  };
  f.p_axis_deg = axis([&](const LeadWaves& lw) { return area(lw.p); });
  f.qrs_axis_deg = axis([&](const LeadWaves& lw) { return area(lw.q) + area(lw.r) + area(lw.s); });
  f.t_axis_deg = axis([&](const LeadWaves& lw) { return area(lw.t); });

  // LBBB templates put the second hump in the S slot of the lateral leads.
  for (std::size_t l : {0u, 6u, 7u}) {
    const LeadWaves& lw = t.leads[l];
    const Lead lead = kTrainingLeads[l];
    f.r_notched[index_of(lead)] = lw.r.amplitude_mv > 0.0 && lw.s.amplitude_mv > 0.0;
  }
  return f;
}

std::vector<LabeledBeat> make_corpus(Category category, std::size_t n, std::uint64_t seed, const CorpusOptions& options) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "corpus size must be at least 1");
  std::vector<LabeledBeat> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    BeatTemplate tpl = sample_template(category, seed, i);
    tpl.noise_std_mv = options.noise_std_mv;
    out.push_back({render_beat(tpl), template_features(tpl), tpl});
  }
  return out;
}

}  // namespace ecggan
