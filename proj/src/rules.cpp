#include <algorithm>
#include <cstdio>

#include "ecggan/io.hpp"
#include "ecggan/verifier.hpp"

namespace ecggan {

namespace {

// Key table shared by from() and to_config().
template <class F>
void for_each_rule(RulesConfig& r, F&& f) {
  f("lbbb.qrs_ms", r.lbbb_qrs_ms);
  f("acutmi.st_uv.default", r.acutmi_st_uv_default);
  f("acutmi.st_uv.v23.female", r.acutmi_st_uv_v23_female);
  f("acutmi.st_uv.v23.male_40_plus", r.acutmi_st_uv_v23_male_40_plus);
  f("acutmi.st_uv.v23.male_under_40", r.acutmi_st_uv_v23_male_under_40);
  f("acutmi.male_age_split", r.acutmi_male_age_split);
  f("acutmi.min_age.male", r.acutmi_min_age_male);
  f("acutmi.min_age.female", r.acutmi_min_age_female);
  f("lvh.voltage_mv", r.lvh_voltage_mv);
  f("lvh.borderline_fraction", r.lvh_borderline_fraction);
  f("lvh.min_age", r.lvh_min_age);
  f("on.qtc_ms", r.on_qtc_ms);
  f("on.st_dep_mv", r.on_st_dep_mv);
  f("on.st_elev_mv", r.on_st_elev_mv);
  f("on.st_floor_mv", r.on_st_floor_mv);
  f("other.qrs_ms", r.other_qrs_ms);
  f("other.qtc_ms", r.other_qtc_ms);
}

// ST elevation in the limb leads follows the Cabrera order with aVR inverted.
struct ContiguousLead {
  Lead lead;
  double sign;
};
constexpr std::array<ContiguousLead, 6> kLimbOrder = {
    {{Lead::aVL, 1.0}, {Lead::I, 1.0}, {Lead::aVR, -1.0}, {Lead::II, 1.0}, {Lead::aVF, 1.0}, {Lead::III, 1.0}}};
// V2 and V3 have their own thresholds and break the precordial run.
constexpr std::array<Lead, 6> kChestOrder = {Lead::V1, Lead::V2, Lead::V3, Lead::V4, Lead::V5, Lead::V6};

int longest_elevated_run(const BeatFeatures& f, double threshold_uv) {
  int best = 0, run = 0;
  for (const auto& c : kLimbOrder) {
    run = c.sign * f.st_uv(c.lead) > threshold_uv ? run + 1 : 0;
    best = std::max(best, run);
  }
  run = 0;
  for (Lead l : kChestOrder) {
    const bool own_rule = l == Lead::V2 || l == Lead::V3;
    run = !own_rule && f.st_uv(l) > threshold_uv ? run + 1 : 0;
    best = std::max(best, run);
  }
  return best;
}

std::string fmt(const char* f, double v) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

}  // namespace

RulesConfig RulesConfig::from(const ConfigMap& cfg) {
  RulesConfig r;
  for_each_rule(r, [&](const char* key, double& v) { v = cfg.get_double(key, v); });
  r.acutmi_min_contiguous = static_cast<int>(cfg.get_int("acutmi.min_contiguous", r.acutmi_min_contiguous));
  return r;
}

ConfigMap RulesConfig::to_config() const {
  ConfigMap m;
  RulesConfig copy = *this;
  for_each_rule(copy, [&](const char* key, double& v) { m.set(key, format_double(v)); });
  m.set("acutmi.min_contiguous", std::to_string(acutmi_min_contiguous));
  return m;
}

Diagnosis classify(const BeatFeatures& f, const Demographics& demographics, const RulesConfig& r) {
  Diagnosis d;
  d.age_years = demographics.effective_age();
  d.sex = demographics.effective_sex();
  const bool female = d.sex == Sex::Female;

  if (f.undetectable) {
    d.category = Category::Other;
    d.severity = Severity::DE;
    d.statements.push_back("Defective ECG: " + *f.undetectable + " wave undetectable");
    return d;
  }

  const bool lateral_notch = f.notched(Lead::I) || f.notched(Lead::V5) || f.notched(Lead::V6);
  if (f.qrs_dur_ms > r.lbbb_qrs_ms && lateral_notch) {
    d.category = Category::LBBB;
    d.severity = Severity::AB;
    d.statements.push_back("Left bundle branch block");
    return d;
  }

  const bool acutmi_excluded = female ? d.age_years < r.acutmi_min_age_female : d.age_years < r.acutmi_min_age_male;
  if (!acutmi_excluded) {
    const double v23 = female                                 ? r.acutmi_st_uv_v23_female
                       : d.age_years >= r.acutmi_male_age_split ? r.acutmi_st_uv_v23_male_40_plus
                                                                : r.acutmi_st_uv_v23_male_under_40;
    const bool contiguous = longest_elevated_run(f, r.acutmi_st_uv_default) >= r.acutmi_min_contiguous;
    const bool anterior = f.st_uv(Lead::V2) > v23 || f.st_uv(Lead::V3) > v23;
    if (contiguous || anterior) {
      d.category = Category::ACUTMI;
      d.severity = Severity::AB;
      d.statements.push_back("ST elevation consider acute infarct");
      return d;
    }
  }

  bool borderline = false;
  if (d.age_years >= r.lvh_min_age) {
    const double voltage = f.s_mv(Lead::V1) + std::max(f.r_mv(Lead::V5), f.r_mv(Lead::V6));
    if (voltage > r.lvh_voltage_mv) {
      d.category = Category::LVH;
      d.severity = Severity::AB;
      d.statements.push_back("Left ventricular hypertrophy");
      return d;
    }
    borderline = voltage > r.lvh_voltage_mv * (1.0 - r.lvh_borderline_fraction);
  }

  // Remaining findings land in Other, graded by their worst severity.
  std::vector<std::string> abnormal, minor;
  if (f.qrs_dur_ms > r.other_qrs_ms) abnormal.push_back(fmt("Intraventricular conduction delay, QRSd %.0f ms", f.qrs_dur_ms));
  if (f.qtc_ms > r.other_qtc_ms) abnormal.push_back(fmt("Prolonged QTc %.0f ms", f.qtc_ms));
  if (f.qtc_ms < r.on_qtc_ms) minor.push_back(fmt("Short QTc %.0f ms", f.qtc_ms));

  double worst_dep = 0.0, worst_elev = 0.0;
  for (std::size_t l = 0; l < 12; ++l) {
    if (kStandardLeads[l] == Lead::aVR) continue;  // reciprocal lead
    worst_dep = std::max(worst_dep, -f.st_level_uv[l] / 1000.0);
    worst_elev = std::max(worst_elev, f.st_level_uv[l] / 1000.0);
  }
  if (worst_dep >= r.on_st_dep_mv) abnormal.push_back(fmt("ST depression %.2f mV", worst_dep));
  else if (worst_dep >= r.on_st_floor_mv) minor.push_back(fmt("Minor ST depression %.2f mV", worst_dep));
  if (worst_elev >= r.on_st_elev_mv) abnormal.push_back(fmt("ST elevation %.2f mV", worst_elev));
  else if (worst_elev >= r.on_st_floor_mv) minor.push_back(fmt("Minor ST elevation %.2f mV", worst_elev));

  if (!abnormal.empty()) {
    d.category = Category::Other;
    d.severity = Severity::AB;
    d.statements = abnormal;
  } else if (borderline) {
    d.category = Category::Other;
    d.severity = Severity::BO;
    d.statements.push_back("Borderline voltage criteria for LVH");
  } else if (!minor.empty()) {
    d.category = Category::Other;
    d.severity = Severity::ON;
    d.statements = minor;
    d.statements.push_back("Otherwise normal ECG");
  } else {
    d.category = Category::Normal;
    d.severity = Severity::NO;
    d.statements.push_back("Normal ECG");
  }
  return d;
}

}  // namespace ecggan
