#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace geodec {

/// Parameters that break one or more of the admissibility inequalities.
/// `violations()` lists each failed inequality in readable form.
class ConstraintViolation : public std::domain_error {
 public:
  explicit ConstraintViolation(std::vector<std::string> violations)
      : std::domain_error(join(violations)), violations_(std::move(violations)) {}

  const std::vector<std::string>& violations() const noexcept { return violations_; }

 private:
  static std::string join(const std::vector<std::string>& v) {
    std::string out = "constraint violation:";
    for (const auto& s : v) out += " [" + s + "]";
    return out;
  }
  std::vector<std::string> violations_;
};

class SingularGeometry : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotUnisolvent : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MeshError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace geodec
