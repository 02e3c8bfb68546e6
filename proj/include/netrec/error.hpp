#ifndef NETREC_ERROR_HPP
#define NETREC_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace netrec {

/// Base error for all library failures.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Parse failure in an input file; carries the 1-based line number.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

}  // namespace netrec

#endif
