#pragma once
// Shared helpers for the Catch2 suite.

#include <catch2/catch_amalgamated.hpp>

#include <string>

#include <mwall/errors.hpp>
#include <mwall/rational.hpp>

// Matcher asserting that a thrown mwall::Error carries a specific code.
class ErrorCodeIs : public Catch::Matchers::MatcherGenericBase {
 public:
  explicit ErrorCodeIs(mwall::ErrorCode code) : code_(code) {}
  bool match(const mwall::Error& e) const { return e.code() == code_; }
  std::string describe() const override {
    return std::string("has error code ") + mwall::error_code_name(code_);
  }

 private:
  mwall::ErrorCode code_;
};

inline mwall::RatVec rv(std::initializer_list<long> xs) {
  mwall::RatVec out;
  for (long x : xs) out.emplace_back(x);
  return out;
}

inline mwall::IntVec iv(std::initializer_list<long> xs) {
  mwall::IntVec out;
  for (long x : xs) out.emplace_back(x);
  return out;
}

// Rational vector literal with a shared denominator.
inline mwall::RatVec rvd(std::initializer_list<long> nums, long den) {
  mwall::RatVec out;
  for (long x : nums) out.emplace_back(mwall::Rat(x, den));
  return out;
}

// Directory holding the shipped demonstration inputs.
inline std::string data_dir() { return std::string(MWALL_SOURCE_DIR) + "/data"; }
