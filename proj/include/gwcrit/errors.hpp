#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace gwcrit {

class domain_error : public std::domain_error {
public:
    explicit domain_error(const std::string& what) : std::domain_error(what) {}
};

class invalid_order_error : public std::invalid_argument {
public:
    explicit invalid_order_error(const std::string& what) : std::invalid_argument(what) {}
};

/// An offspring law whose coefficient stream went negative; names the first bad index.
class invalid_family_error : public std::runtime_error {
public:
    invalid_family_error(std::size_t index, const std::string& what)
        : std::runtime_error(what), index_(index) {}
    std::size_t index() const { return index_; }

private:
    std::size_t index_;
};

/// Denominator of a normalized quantity underflowed; carries the largest usable n.
class precision_exhausted_error : public std::runtime_error {
public:
    precision_exhausted_error(std::uint64_t max_usable_n, const std::string& what)
        : std::runtime_error(what), max_usable_n_(max_usable_n) {}
    std::uint64_t max_usable_n() const { return max_usable_n_; }

private:
    std::uint64_t max_usable_n_;
};

class budget_exceeded_error : public std::runtime_error {
public:
    explicit budget_exceeded_error(const std::string& what) : std::runtime_error(what) {}
};

class numeric_error : public std::runtime_error {
public:
    explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace gwcrit
