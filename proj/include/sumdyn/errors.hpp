#pragma once

#include <stdexcept>
#include <string>

namespace sumdyn {

// Query or operation past the decidable range of a set / symbolic window.
// Distinct from a verification failure: overflowing the horizon is never
// silently reported as pass or fail.
class HorizonError : public std::runtime_error {
public:
    explicit HorizonError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed argument, descriptor, or file.
class ArgumentError : public std::runtime_error {
public:
    explicit ArgumentError(const std::string& what) : std::runtime_error(what) {}
};

// A search or scan ran out of its configured budget.
class BudgetError : public std::runtime_error {
public:
    explicit BudgetError(const std::string& what) : std::runtime_error(what) {}
};

// Two states or systems of incompatible kinds were combined.
class KindMismatchError : public std::runtime_error {
public:
    explicit KindMismatchError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace sumdyn
