#include "fibext/certificate.hpp"

#include <algorithm>

namespace fibext {

const char* to_string(CertStatus s) noexcept {
  switch (s) {
    case CertStatus::pass: return "pass";
    case CertStatus::unknown: return "unknown";
    case CertStatus::fail: return "fail";
  }
  return "fail";
}

CertStatus worst(CertStatus a, CertStatus b) noexcept {
  return static_cast<int>(a) > static_cast<int>(b) ? a : b;
}

CertStatus le_status(Certainty c) noexcept {
  switch (c) {
    case Certainty::less:
    case Certainty::equal: return CertStatus::pass;
    case Certainty::greater: return CertStatus::fail;
    case Certainty::unknown: return CertStatus::unknown;
  }
  return CertStatus::unknown;
}

CertStatus lt_status(Certainty c) noexcept {
  switch (c) {
    case Certainty::less: return CertStatus::pass;
    case Certainty::equal:
    case Certainty::greater: return CertStatus::fail;
    case Certainty::unknown: return CertStatus::unknown;
  }
  return CertStatus::unknown;
}

void Certificate::add(std::size_t index, CertStatus s, std::string detail) {
  status_ = worst(status_, s);
  entries_.push_back({index, s, std::move(detail)});
}

void Certificate::merge(const Certificate& other) {
  for (const auto& e : other.entries_) add(e.index, e.status, other.name_ + ": " + e.detail);
}

std::size_t Certificate::count(CertStatus s) const {
  return static_cast<std::size_t>(
      std::count_if(entries_.begin(), entries_.end(), [s](const CertEntry& e) { return e.status == s; }));
}

CertStatus Certificate::status_at(std::size_t index) const {
  CertStatus s = CertStatus::pass;
  for (const auto& e : entries_)
    if (e.index == index) s = worst(s, e.status);
  return s;
}

}  // namespace fibext
