#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace cychom {

/// Structured failure raised by validating constructors and checked operations.
/// `code` is a stable machine-readable tag (e.g. "NotAssociative", "IdentityViolation"),
/// `witness` names the offending basis element / triple / JSON path when one exists.
class CheckError : public std::runtime_error {
public:
    CheckError(std::string code, std::string message, std::string witness = {})
        : std::runtime_error(witness.empty() ? code + ": " + message
                                             : code + ": " + message + " [witness: " + witness + "]"),
          code_(std::move(code)),
          detail_(std::move(message)),
          witness_(std::move(witness)) {}

    const std::string& code() const noexcept { return code_; }
    const std::string& detail() const noexcept { return detail_; }
    const std::string& witness() const noexcept { return witness_; }

private:
    std::string code_;
    std::string detail_;
    std::string witness_;
};

}  // namespace cychom
