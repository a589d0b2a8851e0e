#pragma once

// Flat key:value verification report. Each line ends in PASS, FAIL or
// REPORTED(value); a FAIL may carry a short note after '#'.

#include <string>
#include <vector>

namespace gridcube {

enum class Status { Pass, Fail, Reported };

struct Check {
  std::string key;
  Status status;
  std::string value;
};

class Report {
 public:
  void pass_fail(std::string key, bool ok, std::string note = {});
  void reported(std::string key, std::string value);
  // Asserted when `applicable`, otherwise downgraded to REPORTED(value).
  void gated(std::string key, bool ok, bool applicable, std::string value);
  void append(const Report& other, const std::string& prefix = {});

  bool ok() const;
  std::size_t failures() const;
  const std::vector<Check>& checks() const noexcept { return checks_; }
  const Check* find(const std::string& key) const;
  std::string str() const;

 private:
  std::vector<Check> checks_;
};

}  // namespace gridcube
