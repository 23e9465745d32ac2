#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "ecggan/nn/network.hpp"
#include "ecggan/nn/optimizer.hpp"
#include "ecggan/random.hpp"

namespace ecggan::nn {

/// Little-endian binary stream for checkpoints. Doubles are stored as their
/// IEEE-754 bit patterns, so reads reproduce writes exactly.
class BinaryWriter {
 public:
  void u64(std::uint64_t v);
  void f64(double v);
  void str(std::string_view s);
  void f64s(std::span<const double> v);

  const std::string& bytes() const { return buf_; }

 private:
  std::string buf_;
};

class BinaryReader {
 public:
  explicit BinaryReader(std::string_view bytes) : bytes_(bytes) {}

  std::uint64_t u64();
  double f64();
  std::string str();
  std::vector<double> f64s();
  bool done() const { return pos_ == bytes_.size(); }

 private:
  void need(std::size_t n) const;

  std::string_view bytes_;
  std::size_t pos_ = 0;
};

/// Layer shapes followed by the flat parameter array; read_network verifies
/// the stored architecture matches `net` before loading values.
void write_network(BinaryWriter& w, Network& net);
void read_network(BinaryReader& r, Network& net);

void write_adam(BinaryWriter& w, const AdamState& s);
AdamState read_adam(BinaryReader& r);

void write_rng(BinaryWriter& w, const Rng& rng);
void read_rng(BinaryReader& r, Rng& rng);

}  // namespace ecggan::nn
