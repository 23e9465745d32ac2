#pragma once

#include <filesystem>
#include <string>

#include "ecggan/beat.hpp"
#include "ecggan/types.hpp"

namespace ecggan {

struct XmlMetadata {
  Demographics demographics;
  Category target = Category::Normal;

  friend bool operator==(const XmlMetadata& a, const XmlMetadata& b) {
    return a.demographics.age_years == b.demographics.age_years && a.demographics.sex == b.demographics.sex &&
           a.target == b.target;
  }
};

struct XmlRecord {
  Record10s record;
  XmlMetadata metadata;
};

/// Document layout:
///
///   <ecg sps="500" duration_ms="10000" rr_ms="800">
///     <metadata><age>61</age><sex>Female</sex><category>LBBB</category></metadata>
///     <lead name="I">12 15 -3 ...</lead>   (12 leads, I..V6, integer microvolts)
///   </ecg>
///
/// Unknown age is written as "unknown".
std::string export_xml(const Record10s& record, const XmlMetadata& metadata);
XmlRecord import_xml(const std::string& document);

/// Millivolts to integer microvolts, halves rounded away from zero.
long long to_microvolts(double mv);

/// The record exactly as import_xml(export_xml(record)) returns it.
Record10s quantize_microvolts(const Record10s& record);

void write_xml_file(const std::filesystem::path& path, const Record10s& record, const XmlMetadata& metadata);
XmlRecord read_xml_file(const std::filesystem::path& path);

}  // namespace ecggan
