#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace hrg {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class IssueKind {
  Malformed,
  MissingSquare,
  NonBijectiveSquares,
  EndpointMismatch,
  SourceViolation,
  AssociativityViolation,
  TorsionCollapseViolation,
  DegreeMismatch,
  FactorizationFailure,
};

char const* issue_name(IssueKind kind);

struct ValidationIssue {
  IssueKind kind;
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;

  bool ok() const { return issues.empty(); }
  bool has(IssueKind kind) const;
  void add(IssueKind kind, std::string message) { issues.push_back({kind, std::move(message)}); }
  std::string summary() const;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(ValidationReport report);
  ValidationReport const& report() const { return report_; }

 private:
  ValidationReport report_;
};

}  // namespace hrg
