#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ctt {

// Index into one of the network's tables. The tag keeps node and arc indices
// from being mixed up at call sites.
template <typename Tag>
struct StrongIndex {
  std::size_t value = 0;

  constexpr StrongIndex() = default;
  constexpr explicit StrongIndex(std::size_t v) : value(v) {}

  friend constexpr auto operator<=>(StrongIndex, StrongIndex) = default;
};

using NodeIndex = StrongIndex<struct NodeTag>;
using ArcIndex = StrongIndex<struct ArcTag>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Two consecutive arcs of a chain do not meet (t_m != s_n).
class MalformedChainError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// A structural or semantic rule broken by a network or instance. Violations
// are data: validators return them instead of throwing.
struct Violation {
  std::string entity;  // offending node/arc/train/shipment id, or "instance"
  std::string rule;    // short rule tag, e.g. "express-capacity"
  std::string message;
  friend bool operator==(const Violation&, const Violation&) = default;
};

using ViolationList = std::vector<Violation>;

inline std::string to_string(const Violation& v) {
  return v.entity + ": [" + v.rule + "] " + v.message;
}

class InvalidInstanceError : public Error {
 public:
  explicit InvalidInstanceError(ViolationList violations)
      : Error(summarize(violations)), violations_(std::move(violations)) {}

  const ViolationList& violations() const noexcept { return violations_; }

 private:
  static std::string summarize(const ViolationList& vs) {
    std::string out = "instance invalid (" + std::to_string(vs.size()) + " violation(s))";
    if (!vs.empty()) out += ": " + to_string(vs.front());
    return out;
  }

  ViolationList violations_;
};

}  // namespace ctt

template <typename Tag>
struct std::hash<ctt::StrongIndex<Tag>> {
  std::size_t operator()(ctt::StrongIndex<Tag> i) const noexcept {
    return std::hash<std::size_t>{}(i.value);
  }
};
