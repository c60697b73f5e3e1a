#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace mlogic {

/// Raised by the formula parser. Carries the byte offset of the offending
/// token and the set of tokens that would have been accepted there.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t offset, std::vector<std::string> expected, const std::string& found);

    std::size_t offset() const noexcept { return offset_; }
    const std::vector<std::string>& expected() const noexcept { return expected_; }

private:
    std::size_t offset_;
    std::vector<std::string> expected_;
};

/// A configured search or enumeration budget was exceeded. The caller learns
/// nothing about the answer ("unknown"), never a wrong verdict.
class BudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Kreisel-Putnam rank arithmetic went past the configured cap.
class RankOverflow : public std::runtime_error {
public:
    RankOverflow(const std::string& subformula, unsigned long long cap);

    const std::string& subformula() const noexcept { return subformula_; }

private:
    std::string subformula_;
};

/// A self-check on a constructed certificate failed. Always a bug.
class InternalError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

} // namespace mlogic
