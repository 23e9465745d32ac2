#include "ecggan/nn/checkpoint.hpp"

#include <bit>
#include <sstream>

#include "ecggan/error.hpp"

namespace ecggan::nn {

void BinaryWriter::u64(std::uint64_t v) {
  for (int i = 0; i < 8; ++i) buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void BinaryWriter::f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }

void BinaryWriter::str(std::string_view s) {
  u64(s.size());
  buf_.append(s);
}

void BinaryWriter::f64s(std::span<const double> v) {
  u64(v.size());
  for (double x : v) f64(x);
}

void BinaryReader::need(std::size_t n) const {
  if (bytes_.size() - pos_ < n) throw Error(ErrorCode::Format, "checkpoint truncated");
}

std::uint64_t BinaryReader::u64() {
  need(8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
  pos_ += 8;
  return v;
}

double BinaryReader::f64() { return std::bit_cast<double>(u64()); }

std::string BinaryReader::str() {
  const auto n = u64();
  need(n);
  std::string s(bytes_.substr(pos_, n));
  pos_ += n;
  return s;
}

std::vector<double> BinaryReader::f64s() {
  const auto n = u64();
  need(n * 8);
  std::vector<double> v(n);
  for (auto& x : v) x = f64();
  return v;
}

void write_network(BinaryWriter& w, Network& net) {
  const auto shapes = layer_shapes(net.spec());
  w.str(net.spec().name);
  w.u64(shapes.size());
  for (const auto& s : shapes) {
    w.u64(s.size());
    for (auto d : s) w.u64(d);
  }
  w.f64s(net.flat_params());
}

void read_network(BinaryReader& r, Network& net) {
  const auto name = r.str();
  const auto expected = layer_shapes(net.spec());
  const auto count = r.u64();
  bool same = name == net.spec().name && count == expected.size();
  for (std::uint64_t i = 0; i < count; ++i) {
    Shape s(r.u64());
    for (auto& d : s) d = r.u64();
    if (same && s != expected[i]) same = false;
  }
  if (!same) throw Error(ErrorCode::ShapeMismatch, "checkpoint architecture does not match " + net.spec().name);
  net.set_flat_params(r.f64s());
}

void write_adam(BinaryWriter& w, const AdamState& s) {
  w.u64(s.step);
  w.f64s(s.m);
  w.f64s(s.v);
}

AdamState read_adam(BinaryReader& r) {
  AdamState s;
  s.step = r.u64();
  s.m = r.f64s();
  s.v = r.f64s();
  if (s.m.size() != s.v.size()) throw Error(ErrorCode::Format, "adam moments differ in size");
  return s;
}

void write_rng(BinaryWriter& w, const Rng& rng) {
  std::ostringstream ss;
  ss << rng.engine();
  w.str(ss.str());
  w.u64(rng.has_spare() ? 1 : 0);
  w.f64(rng.spare());
}

void read_rng(BinaryReader& r, Rng& rng) {
  std::istringstream ss(r.str());
  ss >> rng.engine();
  if (!ss) throw Error(ErrorCode::Format, "bad RNG state");
  const bool has = r.u64() != 0;
  rng.set_spare(has, r.f64());
}

}  // namespace ecggan::nn
