#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cbcchaos/core.hpp"
#include "cbcchaos/dynamics.hpp"

namespace cbcchaos {

/// Graph construction is limited to 2^20 vertices.
inline constexpr unsigned kMaxGraphWidth = 20;
/// ... and to this many (vertex, label) evaluations.
inline constexpr std::uint64_t kMaxGraphEdges = std::uint64_t{1} << 26;
inline constexpr unsigned kMaxDotWidth = 8;

/// Labelled transition digraph on all N-bit words: x -> g(m, x) for every
/// block m of the alphabet. Parallel edges are merged, keeping the smallest
/// label; each vertex's edges are ordered by label.
class TransitionGraph {
 public:
  struct Edge {
    std::uint32_t target;
    std::uint32_t label;
  };

  unsigned width() const noexcept { return width_; }
  std::uint64_t vertex_count() const noexcept { return std::uint64_t{1} << width_; }
  std::uint64_t edge_count() const noexcept { return edges_.size(); }
  const std::vector<BitBlock>& alphabet() const noexcept { return alphabet_; }
  bool in_alphabet(const BitBlock& m) const;

  std::span<const Edge> successors(std::uint64_t vertex) const;

 private:
  friend TransitionGraph build_graph(const DynamicalSystem&, std::vector<BitBlock>);

  unsigned width_ = 0;
  std::vector<BitBlock> alphabet_;
  std::vector<std::uint64_t> offsets_;
  std::vector<Edge> edges_;
};

/// Every block of the given width.
std::vector<BitBlock> full_alphabet(unsigned width);

/// Throws WidthTooLarge past the caps above and EmptyAlphabet for an empty
/// alphabet. Vertices are evaluated on all hardware threads.
TransitionGraph build_graph(const DynamicalSystem& sys, std::vector<BitBlock> alphabet);

struct SccDecomposition {
  std::vector<std::uint32_t> component;  // per vertex, in order of completion (0 is a sink)
  std::uint32_t count = 0;
};

/// Iterative Tarjan, linear in vertices + edges.
SccDecomposition strongly_connected_components(const TransitionGraph& graph);

enum class Verdict { Chaotic, NotCertified };

struct ChaosCertificate {
  Verdict verdict = Verdict::NotCertified;
  std::uint32_t scc_count = 0;
  /// For NotCertified: `to` is not reachable from `from`.
  std::optional<std::pair<BitBlock, BitBlock>> witness;
};

/// Strong connectivity of the graph; a single component certifies that the
/// mode is strongly transitive and regular, hence chaotic.
ChaosCertificate strongly_connected(const TransitionGraph& graph);

/// Shortest label sequence driving `from` to `to` (smallest label first on
/// ties). Empty when from == to, absent when unreachable.
std::optional<std::vector<BitBlock>> find_label_path(const TransitionGraph& graph,
                                                     const BitBlock& from, const BitBlock& to);

/// Shortest non-empty label sequence from `x` back to itself.
std::optional<std::vector<BitBlock>> find_return_path(const TransitionGraph& graph,
                                                      const BitBlock& x);

struct PeriodicPoint {
  PhasePoint point;
  std::size_t period;
};

/// A periodic point sharing X's state and first `prefix_len` message blocks,
/// so d(X, point) <= 10^-prefix_len. The reported period is minimal.
/// Throws Unreachable when the state cannot return to X.state.
PeriodicPoint make_periodic_point(const DynamicalSystem& sys, const TransitionGraph& graph,
                                  const PhasePoint& x, std::size_t prefix_len);

/// DOT digraph, vertices named by their binary strings. Width <= 8.
std::string export_dot(const TransitionGraph& graph);

}  // namespace cbcchaos
