#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "ecggan/beat.hpp"

namespace ecggan {

/// Writes via a temporary sibling and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);
std::string read_file(const std::filesystem::path& path);

/// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);
double parse_double(std::string_view text);

std::vector<std::string_view> split(std::string_view line, char sep);
std::string_view trim(std::string_view s);

/// CSV with header lead_I,lead_II,lead_V1,...,lead_V6 and 400 rows in millivolts.
std::string beat_to_csv(const BeatMatrix& beat);
BeatMatrix beat_from_csv(std::string_view text);

void write_beat_csv(const std::filesystem::path& path, const BeatMatrix& beat);
BeatMatrix read_beat_csv(const std::filesystem::path& path);

/// Raw beat samples: header of lead_<name> columns (8 or 12), 1200 rows.
std::string raw_beat_to_csv(const RawBeat& raw);
/// Sidecar: q_onset_ms,qrs_dur_ms,heart_rate_bpm,age_years,sex plus one data row.
std::string raw_meta_to_csv(const RawBeat& raw);
RawBeat raw_beat_from_csv(std::string_view samples_csv, std::string_view meta_csv);

}  // namespace ecggan
