#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

#include "ecggan/io.hpp"

namespace ecggan {

namespace fs = std::filesystem;

void write_file_atomic(const fs::path& path, std::string_view content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot open " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error(ErrorCode::Io, "write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::Io, "rename to " + path.string() + ": " + ec.message());
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string format_double(double value) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw Error(ErrorCode::Format, "not a number: '" + std::string(text) + "'");
  }
  return value;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r' || s.front() == '\n'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' || s.back() == '\n'))
    s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    auto pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      parts.push_back(line.substr(start));
      return parts;
    }
    parts.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

namespace {

std::vector<std::string_view> lines_of(std::string_view text) {
  std::vector<std::string_view> out;
  for (auto line : split(text, '\n')) {
    line = trim(line);
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

std::string lead_header(std::size_t leads) {
  std::string header;
  for (std::size_t k = 0; k < leads; ++k) {
    if (k) header += ',';
    header += "lead_";
    header += lead_name(leads == 12 ? kStandardLeads[k] : kTrainingLeads[k]);
  }
  return header;
}

std::string matrix_to_csv(std::span<const double> data, std::size_t leads) {
  std::string out = lead_header(leads);
  out += '\n';
  for (std::size_t s = 0; s < data.size() / leads; ++s) {
    for (std::size_t k = 0; k < leads; ++k) {
      if (k) out += ',';
      out += format_double(data[s * leads + k]);
    }
    out += '\n';
  }
  return out;
}

std::vector<double> matrix_from_csv(std::string_view text, std::size_t rows, std::size_t& leads_out) {
  auto lines = lines_of(text);
  if (lines.empty()) throw Error(ErrorCode::Format, "empty CSV");
  const auto header = split(lines[0], ',');
  const std::size_t leads = header.size();
  if (lead_header(leads) != lines[0]) throw Error(ErrorCode::Format, "unexpected CSV header: " + std::string(lines[0]));
  if (lines.size() != rows + 1) {
    throw Error(ErrorCode::Format, "expected " + std::to_string(rows) + " data rows, got " +
                                       std::to_string(lines.size() - 1));
  }
  std::vector<double> data;
  data.reserve(rows * leads);
  for (std::size_t r = 1; r < lines.size(); ++r) {
    auto cells = split(lines[r], ',');
    if (cells.size() != leads) throw Error(ErrorCode::Format, "row " + std::to_string(r) + " has wrong width");
    for (auto c : cells) data.push_back(parse_double(c));
  }
  leads_out = leads;
  return data;
}

}  // namespace

std::string beat_to_csv(const BeatMatrix& beat) { return matrix_to_csv(beat.flat(), 8); }

BeatMatrix beat_from_csv(std::string_view text) {
  std::size_t leads = 0;
  auto data = matrix_from_csv(text, kBeatSamples, leads);
  if (leads != 8) throw Error(ErrorCode::Format, "beat CSV must have 8 lead columns");
  return BeatMatrix(std::move(data));
}

void write_beat_csv(const fs::path& path, const BeatMatrix& beat) { write_file_atomic(path, beat_to_csv(beat)); }

BeatMatrix read_beat_csv(const fs::path& path) { return beat_from_csv(read_file(path)); }

std::string raw_beat_to_csv(const RawBeat& raw) { return matrix_to_csv(raw.samples, raw.leads); }

std::string raw_meta_to_csv(const RawBeat& raw) {
  std::string out = "q_onset_ms,qrs_dur_ms,heart_rate_bpm,age_years,sex\n";
  out += format_double(raw.q_onset_ms) + ',' + format_double(raw.qrs_dur_ms) + ',' +
         format_double(raw.heart_rate_bpm) + ',';
  if (raw.demographics.age_years) out += format_double(*raw.demographics.age_years);
  out += ',';
  out += sex_name(raw.demographics.sex);
  out += '\n';
  return out;
}

RawBeat raw_beat_from_csv(std::string_view samples_csv, std::string_view meta_csv) {
  RawBeat raw;
  raw.samples = matrix_from_csv(samples_csv, kRawBeatSamples, raw.leads);
  if (raw.leads != 8 && raw.leads != 12) throw Error(ErrorCode::Format, "raw beat must have 8 or 12 leads");

  auto lines = lines_of(meta_csv);
  if (lines.size() != 2 || lines[0] != "q_onset_ms,qrs_dur_ms,heart_rate_bpm,age_years,sex") {
    throw Error(ErrorCode::Format, "malformed metadata sidecar");
  }
  auto cells = split(lines[1], ',');
  if (cells.size() != 5) throw Error(ErrorCode::Format, "metadata row must have 5 fields");
  raw.q_onset_ms = parse_double(cells[0]);
  raw.qrs_dur_ms = parse_double(cells[1]);
  raw.heart_rate_bpm = parse_double(cells[2]);
  if (!trim(cells[3]).empty()) raw.demographics.age_years = parse_double(cells[3]);
  auto sex = parse_sex(trim(cells[4]));
  if (!sex) throw Error(ErrorCode::Format, "unknown sex '" + std::string(cells[4]) + "'");
  raw.demographics.sex = *sex;
  return raw;
}

}  // namespace ecggan
