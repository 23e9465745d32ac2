#include "ecggan/types.hpp"

#include <algorithm>
#include <cctype>

namespace ecggan {

namespace {

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
         });
}

}  // namespace

std::string_view lead_name(Lead lead) {
  static constexpr std::array<std::string_view, 12> names = {"I",  "II", "III", "aVR", "aVL", "aVF",
                                                             "V1", "V2", "V3",  "V4",  "V5",  "V6"};
  return names[index_of(lead)];
}

std::optional<Lead> parse_lead(std::string_view name) {
  for (Lead l : kStandardLeads)
    if (iequals(lead_name(l), name)) return l;
  return std::nullopt;
}

std::string_view category_name(Category c) {
  switch (c) {
    case Category::Normal: return "Normal";
    case Category::LVH: return "LVH";
    case Category::LBBB: return "LBBB";
    case Category::ACUTMI: return "ACUTMI";
    case Category::Other: return "Other";
  }
  return "Other";
}

std::optional<Category> parse_category(std::string_view name) {
  for (Category c : {Category::Normal, Category::LVH, Category::LBBB, Category::ACUTMI, Category::Other})
    if (iequals(category_name(c), name)) return c;
  return std::nullopt;
}

std::string_view severity_code(Severity s) {
  switch (s) {
    case Severity::NO: return "NO";
    case Severity::ON: return "ON";
    case Severity::BO: return "BO";
    case Severity::AB: return "AB";
    case Severity::DE: return "DE";
  }
  return "DE";
}

std::string_view severity_label(Severity s) {
  switch (s) {
    case Severity::NO: return "Normal";
    case Severity::ON: return "Otherwise Normal";
    case Severity::BO: return "Borderline";
    case Severity::AB: return "Abnormal";
    case Severity::DE: return "Defective";
  }
  return "Defective";
}

std::optional<Severity> parse_severity(std::string_view code) {
  for (Severity s : {Severity::NO, Severity::ON, Severity::BO, Severity::AB, Severity::DE})
    if (iequals(severity_code(s), code)) return s;
  return std::nullopt;
}

std::string_view sex_name(Sex s) {
  switch (s) {
    case Sex::Male: return "Male";
    case Sex::Female: return "Female";
    case Sex::Unidentified: return "Unidentified";
  }
  return "Unidentified";
}

std::optional<Sex> parse_sex(std::string_view name) {
  if (iequals(name, "M")) return Sex::Male;
  if (iequals(name, "F")) return Sex::Female;
  if (iequals(name, "U") || name.empty()) return Sex::Unidentified;
  for (Sex s : {Sex::Male, Sex::Female, Sex::Unidentified})
    if (iequals(sex_name(s), name)) return s;
  return std::nullopt;
}

}  // namespace ecggan
