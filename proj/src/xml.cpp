#include "ecggan/xml.hpp"

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

#include "ecggan/error.hpp"
#include "ecggan/io.hpp"

namespace ecggan {

namespace pt = boost::property_tree;

long long to_microvolts(double mv) { return std::llround(mv * 1000.0); }

namespace {

double from_microvolts(long long uv) { return static_cast<double>(uv) / 1000.0; }

}  // namespace

Record10s quantize_microvolts(const Record10s& record) {
  Record10s q = record;
  for (double& v : q.samples.flat()) v = from_microvolts(to_microvolts(v));
  return q;
}

std::string export_xml(const Record10s& record, const XmlMetadata& metadata) {
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<ecg sps=\"500\" duration_ms=\"10000\" rr_ms=\"" + format_double(record.rr_interval_ms) + "\">\n";
  out += "  <metadata>\n";
  const auto& d = metadata.demographics;
  out += "    <age>" + (d.age_years ? format_double(*d.age_years) : std::string("unknown")) + "</age>\n";
  out += "    <sex>" + std::string(sex_name(d.sex)) + "</sex>\n";
  out += "    <category>" + std::string(category_name(metadata.target)) + "</category>\n";
  out += "  </metadata>\n";
  for (std::size_t l = 0; l < 12; ++l) {
    out += "  <lead name=\"" + std::string(lead_name(kStandardLeads[l])) + "\">";
    for (std::size_t s = 0; s < kRecordSamples; ++s) {
      if (s) out += ' ';
      out += std::to_string(to_microvolts(record.samples(s, l)));
    }
    out += "</lead>\n";
  }
  out += "</ecg>\n";
  return out;
}

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::Format, "xml: " + what); }

void parse_lead_samples(const std::string& text, Record10s& r, std::size_t lead) {
  const char* p = text.data();
  const char* end = p + text.size();
  std::size_t s = 0;
  while (true) {
    while (p < end && std::isspace(static_cast<unsigned char>(*p))) ++p;
    if (p == end) break;
    long long uv = 0;
    auto [next, ec] = std::from_chars(p, end, uv);
    if (ec != std::errc() || next == p) bad("non-integer sample in lead " + std::string(lead_name(kStandardLeads[lead])));
    if (s >= kRecordSamples) bad("too many samples");
    r.samples(s++, lead) = from_microvolts(uv);
    p = next;
  }
  if (s != kRecordSamples) bad("lead holds " + std::to_string(s) + " samples");
}

}  // namespace

XmlRecord import_xml(const std::string& document) {
  pt::ptree tree;
  try {
    std::istringstream in(document);
    pt::read_xml(in, tree);
  } catch (const pt::xml_parser_error& e) {
    bad(e.what());
  }
  const auto root = tree.get_child_optional("ecg");
  if (!root) bad("missing <ecg> root");
  if (root->get<std::string>("<xmlattr>.sps", "") != "500") bad("sps must be 500");
  if (root->get<std::string>("<xmlattr>.duration_ms", "") != "10000") bad("duration_ms must be 10000");

  XmlRecord out;
  out.record.rr_interval_ms = parse_double(root->get<std::string>("<xmlattr>.rr_ms", "800"));

  const std::string age = root->get<std::string>("metadata.age", "unknown");
  if (age != "unknown") out.metadata.demographics.age_years = parse_double(age);
  const auto sex = parse_sex(root->get<std::string>("metadata.sex", "Unidentified"));
  if (!sex) bad("unknown sex");
  out.metadata.demographics.sex = *sex;
  const auto cat = parse_category(root->get<std::string>("metadata.category", ""));
  if (!cat) bad("unknown category");
  out.metadata.target = *cat;

  std::size_t next = 0;
  for (const auto& [tag, node] : *root) {
    if (tag != "lead") continue;
    if (next >= 12) bad("more than 12 leads");
    const auto lead = parse_lead(node.get<std::string>("<xmlattr>.name", ""));
    if (!lead || *lead != kStandardLeads[next]) bad("leads must appear in order I..V6");
    parse_lead_samples(node.data(), out.record, next);
    ++next;
  }
  if (next != 12) bad("expected 12 leads");
  return out;
}

void write_xml_file(const std::filesystem::path& path, const Record10s& record, const XmlMetadata& metadata) {
  write_file_atomic(path, export_xml(record, metadata));
}

XmlRecord read_xml_file(const std::filesystem::path& path) { return import_xml(read_file(path)); }

}  // namespace ecggan
