#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "fibext/interval.hpp"

namespace fibext {

enum class CertStatus { pass, unknown, fail };

const char* to_string(CertStatus s) noexcept;
CertStatus worst(CertStatus a, CertStatus b) noexcept;
/// Status of the claim "lhs <= rhs" given a certified comparison.
CertStatus le_status(Certainty c) noexcept;
/// Status of the claim "lhs < rhs".
CertStatus lt_status(Certainty c) noexcept;

struct CertEntry {
  std::size_t index = 0;
  CertStatus status = CertStatus::pass;
  std::string detail;
};

/// Named collection of per-index checks; the aggregate status is the worst entry.
class Certificate {
 public:
  Certificate() = default;
  explicit Certificate(std::string name) : name_(std::move(name)) {}

  void add(std::size_t index, CertStatus s, std::string detail = {});
  void merge(const Certificate& other);

  const std::string& name() const noexcept { return name_; }
  CertStatus status() const noexcept { return status_; }
  bool passed() const noexcept { return status_ == CertStatus::pass; }
  const std::vector<CertEntry>& entries() const noexcept { return entries_; }
  std::size_t count(CertStatus s) const;
  /// Status of the entry with this index (pass when absent).
  CertStatus status_at(std::size_t index) const;

 private:
  std::string name_;
  CertStatus status_ = CertStatus::pass;
  std::vector<CertEntry> entries_;
};

}  // namespace fibext
