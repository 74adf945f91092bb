#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace solcheck {

/// Base of every error the analyzer raises on purpose.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class UnterminatedBlockComment : public Error {
public:
    explicit UnterminatedBlockComment(std::size_t line)
        : Error("unterminated block comment starting at line " + std::to_string(line)), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Bracket matching failed. `line` is the 1-based formatted line of the offending brace.
class UnbalancedBraces : public Error {
public:
    explicit UnbalancedBraces(std::size_t line)
        : Error("unbalanced braces at formatted line " + std::to_string(line)), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class PatternCompileError : public Error {
public:
    PatternCompileError(std::string rule_id, std::string pattern_id, const std::string& why)
        : Error("rule " + rule_id + ": pattern " + pattern_id + " does not compile: " + why),
          rule_id_(std::move(rule_id)), pattern_id_(std::move(pattern_id)) {}
    const std::string& rule_id() const noexcept { return rule_id_; }
    const std::string& pattern_id() const noexcept { return pattern_id_; }

private:
    std::string rule_id_;
    std::string pattern_id_;
};

class ZeroAverageGas : public Error {
public:
    ZeroAverageGas() : Error("average gas per statement must be positive") {}
};

class EmptyCorpus : public Error {
public:
    EmptyCorpus() : Error("metrics need at least one detection result") {}
};

class IoError : public Error {
public:
    using Error::Error;
};

/// Malformed machine report, annotation file or config file.
class ParseError : public Error {
public:
    using Error::Error;
};

}  // namespace solcheck
