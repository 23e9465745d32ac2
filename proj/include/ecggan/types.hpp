#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace ecggan {

enum class Lead { I, II, III, aVR, aVL, aVF, V1, V2, V3, V4, V5, V6 };

/// Lead order of the 8-lead training matrix.
inline constexpr std::array<Lead, 8> kTrainingLeads = {Lead::I,  Lead::II, Lead::V1, Lead::V2,
                                                       Lead::V3, Lead::V4, Lead::V5, Lead::V6};

/// Lead order of 12-lead beats and records.
inline constexpr std::array<Lead, 12> kStandardLeads = {
    Lead::I,  Lead::II, Lead::III, Lead::aVR, Lead::aVL, Lead::aVF,
    Lead::V1, Lead::V2, Lead::V3,  Lead::V4,  Lead::V5,  Lead::V6};

constexpr std::size_t index_of(Lead lead) { return static_cast<std::size_t>(lead); }

std::string_view lead_name(Lead lead);
std::optional<Lead> parse_lead(std::string_view name);

enum class Category { Normal, LVH, LBBB, ACUTMI, Other };

inline constexpr std::array<Category, 4> kTargetCategories = {Category::Normal, Category::LVH,
                                                              Category::LBBB, Category::ACUTMI};

std::string_view category_name(Category c);
/// Accepts the canonical names case-insensitively.
std::optional<Category> parse_category(std::string_view name);

enum class Severity { NO, ON, BO, AB, DE };

std::string_view severity_code(Severity s);
std::string_view severity_label(Severity s);
std::optional<Severity> parse_severity(std::string_view code);

enum class Sex { Male, Female, Unidentified };

std::string_view sex_name(Sex s);
std::optional<Sex> parse_sex(std::string_view name);

/// Patient demographics as consumed by the classification rules. Missing
/// values resolve to the classifier defaults: unknown age is 50 and
/// unidentified sex is treated as male.
struct Demographics {
  std::optional<double> age_years;
  Sex sex = Sex::Unidentified;

  double effective_age() const { return age_years.value_or(50.0); }
  Sex effective_sex() const { return sex == Sex::Female ? Sex::Female : Sex::Male; }
};

}  // namespace ecggan
