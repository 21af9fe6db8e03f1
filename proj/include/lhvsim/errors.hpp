#pragma once

#include <stdexcept>
#include <string>

namespace lhvsim {

// Base for all recoverable simulation errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Visibility is undefined when no setting of a scan recorded an N++ count.
class AllZeroCounts : public Error {
 public:
  AllZeroCounts() : Error("visibility undefined: every N++ count is zero") {}
};

// A correlation coefficient was requested for a setting without coincidences.
class NoCoincidences : public Error {
 public:
  explicit NoCoincidences(const std::string& term)
      : Error("no coincidences recorded for " + term), term_(term) {}
  const std::string& term() const noexcept { return term_; }

 private:
  std::string term_;
};

class ToleranceNotMet : public Error {
 public:
  ToleranceNotMet(double estimate, double tolerance);
};

class UnknownMetric : public Error {
 public:
  explicit UnknownMetric(const std::string& name) : Error("unknown metric: " + name) {}
};

class ParseError : public Error {
 public:
  ParseError(int line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

class UnknownKey : public Error {
 public:
  UnknownKey(int line, const std::string& key)
      : Error("line " + std::to_string(line) + ": unknown key '" + key + "'"), key_(key) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

}  // namespace lhvsim
