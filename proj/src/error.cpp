#include "hrg/error.hpp"

#include <algorithm>

namespace hrg {

char const* issue_name(IssueKind kind) {
  switch (kind) {
    case IssueKind::Malformed: return "Malformed";
    case IssueKind::MissingSquare: return "MissingSquare";
    case IssueKind::NonBijectiveSquares: return "NonBijectiveSquares";
    case IssueKind::EndpointMismatch: return "EndpointMismatch";
    case IssueKind::SourceViolation: return "SourceViolation";
    case IssueKind::AssociativityViolation: return "AssociativityViolation";
    case IssueKind::TorsionCollapseViolation: return "TorsionCollapseViolation";
    case IssueKind::DegreeMismatch: return "DegreeMismatch";
    case IssueKind::FactorizationFailure: return "FactorizationFailure";
  }
  return "Unknown";
}

bool ValidationReport::has(IssueKind kind) const {
  return std::any_of(issues.begin(), issues.end(),
                     [kind](ValidationIssue const& i) { return i.kind == kind; });
}

std::string ValidationReport::summary() const {
  std::string out;
  for (auto const& issue : issues) {
    if (!out.empty()) out += '\n';
    out += issue_name(issue.kind);
    out += ": ";
    out += issue.message;
  }
  return out;
}

ValidationError::ValidationError(ValidationReport report)
    : Error(report.summary()), report_(std::move(report)) {}

}  // namespace hrg
