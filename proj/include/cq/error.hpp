#pragma once

#include <stdexcept>
#include <string>

namespace cq {

// Base for every library error; `code` is the stable machine-readable tag
// used by the CLI.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& msg)
        : std::runtime_error(msg), code_(std::move(code)) {}
    const std::string& code() const { return code_; }

private:
    std::string code_;
};

class SyntaxError : public Error {
public:
    SyntaxError(std::size_t position, const std::string& expected)
        : Error("syntax",
                "syntax error at position " + std::to_string(position) + ": expected " + expected),
          position_(position), expected_(expected) {}
    std::size_t position() const { return position_; }  // 1-based character offset
    const std::string& expected() const { return expected_; }

private:
    std::size_t position_;
    std::string expected_;
};

class NotSubstitutible : public Error {
public:
    NotSubstitutible(const std::string& var, const std::string& term)
        : Error("not-substitutible",
                "term " + term + " is not substitutible for " + var + " (capture)") {}
};

class NotApplicable : public Error {
public:
    explicit NotApplicable(const std::string& msg) : Error("not-applicable", msg) {}
};

class DomainOverlap : public Error {
public:
    explicit DomainOverlap(const std::string& msg) : Error("domain-overlap", msg) {}
};

class AlignmentError : public Error {
public:
    explicit AlignmentError(const std::string& msg) : Error("alignment", msg) {}
};

class EmptySet : public Error {
public:
    explicit EmptySet(const std::string& msg) : Error("empty-set", msg) {}
};

class Inconsistent : public Error {
public:
    explicit Inconsistent(const std::string& msg) : Error("inconsistent", msg) {}
};

class ArityMismatch : public Error {
public:
    explicit ArityMismatch(const std::string& msg) : Error("arity-mismatch", msg) {}
};

class BudgetExceeded : public Error {
public:
    explicit BudgetExceeded(const std::string& msg) : Error("budget", msg) {}
};

class SignatureError : public Error {
public:
    explicit SignatureError(const std::string& msg) : Error("signature", msg) {}
};

}  // namespace cq
