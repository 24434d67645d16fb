#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace genmetric {

using ParamValue =
    std::variant<double, std::int64_t, std::string, std::vector<double>, std::vector<std::int64_t>>;

/// One named metric value plus everything needed to reproduce it.
struct MetricReport {
  std::string metric_name;
  double value = 0.0;
  std::vector<std::pair<std::string, ParamValue>> params;
  std::vector<std::string> warnings;
  std::string inputs_digest;

  void add_param(std::string name, ParamValue v) { params.emplace_back(std::move(name), std::move(v)); }

  const ParamValue* find_param(std::string_view name) const {
    for (const auto& [k, v] : params) {
      if (k == name) return &v;
    }
    return nullptr;
  }

  bool has_warning(std::string_view prefix) const {
    return std::any_of(warnings.begin(), warnings.end(),
                       [&](const std::string& w) { return w.rfind(prefix, 0) == 0; });
  }

  bool operator==(const MetricReport&) const = default;
};

/// FNV-1a 64-bit, used for short input digests.
class Digest {
 public:
  Digest& bytes(const void* data, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
      h_ ^= p[i];
      h_ *= 0x100000001b3ULL;
    }
    return *this;
  }
  Digest& str(std::string_view s) { return bytes(s.data(), s.size()); }
  Digest& u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      const unsigned char b = static_cast<unsigned char>(v >> (8 * i));
      bytes(&b, 1);
    }
    return *this;
  }
  Digest& real(double v) { return u64(std::bit_cast<std::uint64_t>(v)); }
  Digest& reals(std::span<const double> vs) {
    u64(vs.size());
    for (double v : vs) real(v);
    return *this;
  }
  Digest& matrix(const Eigen::MatrixXd& m) {
    u64(static_cast<std::uint64_t>(m.rows()));
    u64(static_cast<std::uint64_t>(m.cols()));
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      for (Eigen::Index i = 0; i < m.rows(); ++i) real(m(i, j));
    return *this;
  }

  std::string hex() const {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h_));
    return buf;
  }

 private:
  std::uint64_t h_ = 0xcbf29ce484222325ULL;
};

}  // namespace genmetric
