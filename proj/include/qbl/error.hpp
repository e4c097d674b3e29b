#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "qbl/rng.hpp"

namespace qbl {

/// Precondition violated by the caller.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A numerical kernel failed to converge or lost too much accuracy.
/// Carries the seed of the sample that triggered it so it can be replayed.
class NumericFailure : public std::runtime_error {
public:
    explicit NumericFailure(const std::string& what,
                            std::optional<SeedSpec> seed = std::nullopt)
        : std::runtime_error(what), seed_(seed) {}

    const std::optional<SeedSpec>& seed() const noexcept { return seed_; }
    void attach_seed(SeedSpec s) { seed_ = s; }

private:
    std::optional<SeedSpec> seed_;
};

/// A pencil sample is non-generic at the requested resolution.
class SampleDiscarded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class UnsupportedConfiguration : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace qbl
