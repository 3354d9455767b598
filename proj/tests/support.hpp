// support.hpp — Small helpers shared by the test files.

#pragma once

#include <focklab/fock.hpp>

#include <string>
#include <vector>

namespace testsupport {

// Redirects the library warning channel into a vector for the lifetime of
// the object, then restores the default stderr handler.
class WarningCapture {
 public:
  WarningCapture() {
    focklab::set_warning_handler(
        [this](const std::string& msg) { messages_.push_back(msg); });
  }
  ~WarningCapture() {
    focklab::set_warning_handler([](const std::string& msg) {
      // Default behavior restored manually (the library treats the handler
      // as plain state, not a stack).
      std::fputs(("focklab: warning: " + msg + "\n").c_str(), stderr);
    });
  }
  WarningCapture(const WarningCapture&) = delete;
  WarningCapture& operator=(const WarningCapture&) = delete;

  const std::vector<std::string>& messages() const { return messages_; }
  bool empty() const { return messages_.empty(); }

 private:
  std::vector<std::string> messages_;
};

}  // namespace testsupport
