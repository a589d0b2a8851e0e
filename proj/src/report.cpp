#include "gridcube/report.hpp"

#include <algorithm>
#include <sstream>

namespace gridcube {

void Report::pass_fail(std::string key, bool ok, std::string note) {
  checks_.push_back({std::move(key), ok ? Status::Pass : Status::Fail, std::move(note)});
}

void Report::reported(std::string key, std::string value) {
  checks_.push_back({std::move(key), Status::Reported, std::move(value)});
}

void Report::gated(std::string key, bool ok, bool applicable, std::string value) {
  if (applicable)
    pass_fail(std::move(key), ok, std::move(value));
  else
    reported(std::move(key), ok ? (value.empty() ? "holds" : value) : "violated " + value);
}

void Report::append(const Report& other, const std::string& prefix) {
  for (const auto& c : other.checks_) checks_.push_back({prefix + c.key, c.status, c.value});
}

bool Report::ok() const { return failures() == 0; }

std::size_t Report::failures() const {
  return static_cast<std::size_t>(std::count_if(
      checks_.begin(), checks_.end(), [](const Check& c) { return c.status == Status::Fail; }));
}

const Check* Report::find(const std::string& key) const {
  auto it = std::find_if(checks_.begin(), checks_.end(), [&](const Check& c) { return c.key == key; });
  return it == checks_.end() ? nullptr : &*it;
}

std::string Report::str() const {
  std::ostringstream os;
  for (const auto& c : checks_) {
    os << c.key << ": ";
    switch (c.status) {
      case Status::Pass:
        os << "PASS";
        break;
      case Status::Fail:
        os << "FAIL";
        if (!c.value.empty()) os << "  # " << c.value;
        break;
      case Status::Reported:
        os << "REPORTED(" << c.value << ")";
        break;
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace gridcube
