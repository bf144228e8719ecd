#pragma once

#include <stdexcept>
#include <string>

namespace hesskit {

/// Malformed problem data: bad graph, bad spec file, inconsistent sizes.
class SpecError : public std::runtime_error {
public:
    explicit SpecError(const std::string& what) : std::runtime_error(what) {}
};

/// A potential family was evaluated outside its domain (s = 0, s >= delta, ...).
/// Carries the offending edge index (0-based, -1 when not edge-specific).
class DomainError : public std::runtime_error {
public:
    DomainError(const std::string& what, int edge_index = -1)
        : std::runtime_error(what), edge(edge_index) {}
    int edge;
};

} // namespace hesskit
