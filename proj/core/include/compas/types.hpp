#ifndef COMPAS_TYPES_HPP
#define COMPAS_TYPES_HPP

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>

namespace compas {

using NodeId = std::uint64_t;
using CommunityId = std::uint64_t;

/// One generator per run; every stochastic choice draws from it.
using Rng = std::mt19937_64;

/// Undirected edge stored with u < v.
struct Edge {
    NodeId u = 0;
    NodeId v = 0;

    Edge() = default;
    Edge(NodeId a, NodeId b) : u(a < b ? a : b), v(a < b ? b : a) {}

    friend bool operator==(const Edge&, const Edge&) = default;
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

struct EdgeHash {
    std::size_t operator()(const Edge& e) const noexcept {
        std::uint64_t h = e.u * 0x9E3779B97F4A7C15ULL;
        h ^= e.v + 0x7F4A7C159E3779B9ULL + (h << 6) + (h >> 2);
        return static_cast<std::size_t>(h);
    }
};

// Error taxonomy. The CLI maps these onto exit codes 1, 2 and 3.
class ConfigError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

class DataError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Precondition failure on a graph, buffer or partition operation.
class GraphError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

class InvariantError : public std::logic_error {
  public:
    using std::logic_error::logic_error;
};

}  // namespace compas

#endif  // COMPAS_TYPES_HPP
