#pragma once

#include <stdexcept>
#include <string>

namespace polyrep {

// Bad or inconsistent experiment configuration (CLI exit code 2).
class config_error : public std::runtime_error {
public:
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

// A call violated an operation's precondition (CLI exit code 3).
class precondition_error : public std::runtime_error {
public:
    explicit precondition_error(const std::string& what) : std::runtime_error(what) {}
};

// A numeric result failed its accuracy requirement (CLI exit code 4).
class tolerance_error : public std::runtime_error {
public:
    explicit tolerance_error(const std::string& what) : std::runtime_error(what) {}
};

// Rejected sieve cache file. `kind` distinguishes what went wrong.
class cache_error : public std::runtime_error {
public:
    enum class kind { magic, version, checksum, io };

    cache_error(kind k, const std::string& what) : std::runtime_error(what), kind_(k) {}
    kind what_kind() const noexcept { return kind_; }

private:
    kind kind_;
};

} // namespace polyrep
