#pragma once

// ACTB activation files.
//
// Layout (all integers little-endian):
//   "ACTB" | u32 version=1 | u64 N | u64 D | u16 len + layer_tag | u16 len + source_tag
//   | N*D float32 LE, row-major
//
// Anything not starting with the magic is parsed as CSV: one header line of D
// column names, then one comma-separated row per line.

#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <limits>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "genmetric/activation_set.hpp"
#include "genmetric/errors.hpp"

namespace genmetric {

inline constexpr std::array<char, 4> kActbMagic{'A', 'C', 'T', 'B'};
inline constexpr std::uint32_t kActbVersion = 1;

namespace detail {

static_assert(std::numeric_limits<float>::is_iec559);

template <typename UInt>
void put_le(std::string& out, UInt v) {
  for (std::size_t i = 0; i < sizeof(UInt); ++i) {
    out.push_back(static_cast<char>((v >> (8 * i)) & 0xFFu));
  }
}

class ByteReader {
 public:
  explicit ByteReader(std::string_view bytes) : bytes_(bytes) {}

  template <typename UInt>
  UInt get_le(const char* what) {
    need(sizeof(UInt), what);
    UInt v = 0;
    for (std::size_t i = 0; i < sizeof(UInt); ++i) {
      v |= static_cast<UInt>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
    }
    pos_ += sizeof(UInt);
    return v;
  }

  std::string get_string(std::size_t len, const char* what) {
    need(len, what);
    std::string s(bytes_.substr(pos_, len));
    pos_ += len;
    return s;
  }

  std::size_t remaining() const noexcept { return bytes_.size() - pos_; }

 private:
  void need(std::size_t n, const char* what) const {
    if (remaining() < n) throw FormatError(std::string("truncated ACTB file while reading ") + what);
  }

  std::string_view bytes_;
  std::size_t pos_ = 0;
};

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    parts.push_back(line.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

/// Strict decimal parse; the whole field must be consumed.
inline bool parse_double(std::string_view s, double& out) {
  s = trim(s);
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

/// Split text into non-empty lines.
inline std::vector<std::string_view> lines_of(std::string_view text) {
  std::vector<std::string_view> out;
  for (auto line : split(text, '\n')) {
    line = trim(line);
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

inline ActivationSet parse_actb(std::string_view bytes) {
  ByteReader rd(bytes);
  const std::string magic = rd.get_string(4, "magic");
  if (std::memcmp(magic.data(), kActbMagic.data(), 4) != 0) throw FormatError("bad ACTB magic");
  const auto version = rd.get_le<std::uint32_t>("version");
  if (version != kActbVersion) throw FormatError("unsupported ACTB version " + std::to_string(version));
  const auto n = rd.get_le<std::uint64_t>("N");
  const auto d = rd.get_le<std::uint64_t>("D");
  const auto layer_len = rd.get_le<std::uint16_t>("layer_tag length");
  std::string layer = rd.get_string(layer_len, "layer_tag");
  const auto source_len = rd.get_le<std::uint16_t>("source_tag length");
  std::string source = rd.get_string(source_len, "source_tag");
  if (n == 0 || d == 0) throw FormatError("ACTB header declares an empty set");
  constexpr auto kMaxValues = std::numeric_limits<std::uint64_t>::max() / 4;
  if (n > kMaxValues / d) throw FormatError("ACTB header dimensions overflow");
  if (rd.remaining() != n * d * 4) {
    throw FormatError("ACTB payload has " + std::to_string(rd.remaining()) +
                      " bytes, expected " + std::to_string(n * d * 4));
  }
  std::vector<double> values(n * d);
  for (std::uint64_t k = 0; k < n * d; ++k) {
    const float f = std::bit_cast<float>(rd.get_le<std::uint32_t>("payload"));
    if (!std::isfinite(f)) {
      throw DataError("non-finite activation at row " + std::to_string(k / d) + ", column " +
                      std::to_string(k % d));
    }
    values[k] = static_cast<double>(f);
  }
  return ActivationSet(n, d, std::move(values), std::move(layer), std::move(source));
}

inline ActivationSet parse_activation_csv(std::string_view text) {
  const auto lines = lines_of(text);
  if (lines.empty()) throw FormatError("CSV activation file is empty");
  const std::size_t d = split(lines.front(), ',').size();
  if (lines.size() < 2) throw FormatError("CSV activation file has a header but no rows");
  std::vector<double> values;
  values.reserve((lines.size() - 1) * d);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto fields = split(lines[i], ',');
    if (fields.size() != d) {
      throw FormatError("CSV row " + std::to_string(i - 1) + " has " + std::to_string(fields.size()) +
                        " fields, header has " + std::to_string(d));
    }
    for (std::size_t j = 0; j < d; ++j) {
      double v = 0.0;
      const auto field = trim(fields[j]);
      if (field == "nan" || field == "NaN" || field == "inf" || field == "-inf" || field == "Inf") {
        throw DataError("non-finite activation at row " + std::to_string(i - 1) + ", column " +
                        std::to_string(j));
      }
      if (!parse_double(field, v)) {
        throw FormatError("CSV row " + std::to_string(i - 1) + ", column " + std::to_string(j) +
                          " is not a number");
      }
      values.push_back(v);
    }
  }
  return ActivationSet(lines.size() - 1, d, std::move(values));
}

}  // namespace detail

inline std::string encode_actb(const ActivationSet& set) {
  if (set.layer_tag().size() > 0xFFFF || set.source_tag().size() > 0xFFFF) {
    throw ValidationError("tag longer than 65535 bytes");
  }
  std::string out;
  out.reserve(4 + 4 + 16 + 4 + set.layer_tag().size() + set.source_tag().size() +
              4 * set.values().size());
  out.append(kActbMagic.data(), kActbMagic.size());
  detail::put_le<std::uint32_t>(out, kActbVersion);
  detail::put_le<std::uint64_t>(out, set.n_samples());
  detail::put_le<std::uint64_t>(out, set.dim());
  detail::put_le<std::uint16_t>(out, static_cast<std::uint16_t>(set.layer_tag().size()));
  out += set.layer_tag();
  detail::put_le<std::uint16_t>(out, static_cast<std::uint16_t>(set.source_tag().size()));
  out += set.source_tag();
  for (double v : set.values()) {
    detail::put_le<std::uint32_t>(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
  }
  return out;
}

/// Parse ACTB bytes, or CSV text when the magic is absent.
inline ActivationSet decode_activations(std::string_view bytes) {
  if (bytes.size() >= 4 && std::memcmp(bytes.data(), kActbMagic.data(), 4) == 0) {
    return detail::parse_actb(bytes);
  }
  return detail::parse_activation_csv(bytes);
}

inline ActivationSet load_activations(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw IoError("no such file: " + path.string());
  return decode_activations(detail::read_file(path));
}

inline void save_activations(const ActivationSet& set, const std::filesystem::path& path) {
  const std::string bytes = encode_actb(set);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace genmetric
