#include "cbcchaos/graph.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <sstream>
#include <thread>

#include "cbcchaos/error.hpp"

namespace cbcchaos {

namespace {

using Edge = TransitionGraph::Edge;

constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

struct Chunk {
  std::vector<std::uint32_t> degree;
  std::vector<Edge> edges;
};

Chunk build_chunk(const DynamicalSystem& sys, const std::vector<BitBlock>& alphabet,
                  std::uint64_t begin, std::uint64_t end) {
  const std::uint64_t mask = width_mask(sys.width());
  const bool negated = sys.combiner == Combiner::NegatedSelector;
  Chunk chunk;
  chunk.degree.reserve(end - begin);
  std::vector<Edge> local;
  local.reserve(alphabet.size());
  for (std::uint64_t x = begin; x < end; ++x) {
    local.clear();
    for (const auto& m : alphabet) {
      const std::uint64_t mixed = negated ? (x ^ ~m.bits()) & mask : x ^ m.bits();
      local.push_back({static_cast<std::uint32_t>(sys.cipher.encrypt_bits(mixed)),
                       static_cast<std::uint32_t>(m.bits())});
    }
    // The alphabet is sorted, so the first occurrence of a target carries its smallest label.
    std::stable_sort(local.begin(), local.end(),
                     [](const Edge& a, const Edge& b) { return a.target < b.target; });
    local.erase(std::unique(local.begin(), local.end(),
                            [](const Edge& a, const Edge& b) { return a.target == b.target; }),
                local.end());
    std::sort(local.begin(), local.end(),
              [](const Edge& a, const Edge& b) { return a.label < b.label; });
    chunk.degree.push_back(static_cast<std::uint32_t>(local.size()));
    chunk.edges.insert(chunk.edges.end(), local.begin(), local.end());
  }
  return chunk;
}

std::uint64_t checked_vertex(const TransitionGraph& graph, const BitBlock& b) {
  require_same_width(graph.width(), b.width(), "graph vertex");
  return b.bits();
}

}  // namespace

bool TransitionGraph::in_alphabet(const BitBlock& m) const {
  return std::binary_search(alphabet_.begin(), alphabet_.end(), m,
                            [](const BitBlock& a, const BitBlock& b) { return a.bits() < b.bits(); });
}

std::span<const Edge> TransitionGraph::successors(std::uint64_t vertex) const {
  return {edges_.data() + offsets_[vertex], edges_.data() + offsets_[vertex + 1]};
}

std::vector<BitBlock> full_alphabet(unsigned width) {
  if (width > kMaxGraphWidth) {
    throw WidthTooLarge("full alphabet is only materialized up to width 20");
  }
  std::vector<BitBlock> out;
  out.reserve(std::size_t{1} << width);
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << width); ++m) out.emplace_back(width, m);
  return out;
}

TransitionGraph build_graph(const DynamicalSystem& sys, std::vector<BitBlock> alphabet) {
  const unsigned n = sys.width();
  if (n > kMaxGraphWidth) {
    throw WidthTooLarge("graph analysis is limited to width 20, got " + std::to_string(n));
  }
  if (alphabet.empty()) throw EmptyAlphabet("alphabet must contain at least one block");
  for (const auto& m : alphabet) require_same_width(n, m.width(), "alphabet");
  std::sort(alphabet.begin(), alphabet.end(),
            [](const BitBlock& a, const BitBlock& b) { return a.bits() < b.bits(); });
  alphabet.erase(std::unique(alphabet.begin(), alphabet.end()), alphabet.end());

  const std::uint64_t vertices = std::uint64_t{1} << n;
  if (vertices * alphabet.size() > kMaxGraphEdges) {
    throw WidthTooLarge("graph would need " + std::to_string(vertices * alphabet.size()) +
                        " edge evaluations (limit " + std::to_string(kMaxGraphEdges) + ")");
  }

  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const std::uint64_t workers = std::min<std::uint64_t>(hw, std::max<std::uint64_t>(1, vertices / 256));
  std::vector<Chunk> chunks(workers);
  {
    std::vector<std::jthread> pool;
    const std::uint64_t step = (vertices + workers - 1) / workers;
    for (std::uint64_t w = 0; w < workers; ++w) {
      const std::uint64_t begin = std::min(vertices, w * step);
      const std::uint64_t end = std::min(vertices, begin + step);
      pool.emplace_back([&, w, begin, end] { chunks[w] = build_chunk(sys, alphabet, begin, end); });
    }
  }

  TransitionGraph g;
  g.width_ = n;
  g.alphabet_ = std::move(alphabet);
  g.offsets_.reserve(vertices + 1);
  g.offsets_.push_back(0);
  std::size_t total = 0;
  for (const auto& c : chunks) total += c.edges.size();
  g.edges_.reserve(total);
  for (auto& c : chunks) {
    for (std::uint32_t d : c.degree) g.offsets_.push_back(g.offsets_.back() + d);
    g.edges_.insert(g.edges_.end(), c.edges.begin(), c.edges.end());
    c = Chunk{};
  }
  return g;
}

SccDecomposition strongly_connected_components(const TransitionGraph& graph) {
  const std::uint64_t v_count = graph.vertex_count();
  SccDecomposition out;
  out.component.assign(v_count, kNone);

  std::vector<std::uint32_t> index(v_count, kNone);
  std::vector<std::uint32_t> low(v_count, 0);
  std::vector<bool> on_stack(v_count, false);
  std::vector<std::uint32_t> stack;
  struct Frame {
    std::uint32_t vertex;
    std::uint32_t next_edge;
  };
  std::vector<Frame> call;
  std::uint32_t counter = 0;

  for (std::uint64_t root = 0; root < v_count; ++root) {
    if (index[root] != kNone) continue;
    call.push_back({static_cast<std::uint32_t>(root), 0});
    index[root] = low[root] = counter++;
    stack.push_back(static_cast<std::uint32_t>(root));
    on_stack[root] = true;

    while (!call.empty()) {
      Frame& f = call.back();
      const auto succ = graph.successors(f.vertex);
      if (f.next_edge < succ.size()) {
        const std::uint32_t w = succ[f.next_edge++].target;
        if (index[w] == kNone) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.vertex] = std::min(low[f.vertex], index[w]);
        }
        continue;
      }
      const std::uint32_t v = f.vertex;
      call.pop_back();
      if (!call.empty()) low[call.back().vertex] = std::min(low[call.back().vertex], low[v]);
      if (low[v] == index[v]) {
        std::uint32_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          out.component[w] = out.count;
        } while (w != v);
        ++out.count;
      }
    }
  }
  return out;
}

ChaosCertificate strongly_connected(const TransitionGraph& graph) {
  const auto scc = strongly_connected_components(graph);
  ChaosCertificate cert;
  cert.scc_count = scc.count;
  if (scc.count == 1) {
    cert.verdict = Verdict::Chaotic;
    return cert;
  }
  cert.verdict = Verdict::NotCertified;
  // Component 0 completed first, so no edge leaves it: nothing outside is reachable from inside.
  std::optional<std::uint64_t> inside, outside;
  for (std::uint64_t v = 0; v < graph.vertex_count() && !(inside && outside); ++v) {
    if (scc.component[v] == 0) {
      if (!inside) inside = v;
    } else if (!outside) {
      outside = v;
    }
  }
  cert.witness.emplace(BitBlock(graph.width(), *inside), BitBlock(graph.width(), *outside));
  return cert;
}

namespace {

// Breadth-first search; the goal is tested when an edge reaches it, so with
// start == goal and allow_empty unset this finds the shortest closed walk.
std::optional<std::vector<BitBlock>> bfs_path(const TransitionGraph& graph, std::uint64_t start,
                                              std::uint64_t goal, bool allow_empty) {
  const unsigned n = graph.width();
  if (allow_empty && start == goal) return std::vector<BitBlock>{};

  std::vector<std::uint32_t> parent(graph.vertex_count(), kNone);
  std::vector<std::uint32_t> via(graph.vertex_count(), 0);
  std::deque<std::uint32_t> queue;
  std::vector<bool> seen(graph.vertex_count(), false);
  seen[start] = true;
  queue.push_back(static_cast<std::uint32_t>(start));
  bool found = false;
  while (!queue.empty() && !found) {
    const std::uint32_t v = queue.front();
    queue.pop_front();
    for (const auto& e : graph.successors(v)) {
      if (e.target == goal) {
        parent[goal] = v;
        via[goal] = e.label;
        found = true;
        break;
      }
      if (seen[e.target]) continue;
      seen[e.target] = true;
      parent[e.target] = v;
      via[e.target] = e.label;
      queue.push_back(e.target);
    }
  }
  if (!found) return std::nullopt;

  std::vector<BitBlock> labels;
  std::uint64_t v = goal;
  do {
    labels.emplace_back(n, via[v]);
    v = parent[v];
  } while (v != start);
  std::reverse(labels.begin(), labels.end());
  return labels;
}

}  // namespace

std::optional<std::vector<BitBlock>> find_label_path(const TransitionGraph& graph,
                                                     const BitBlock& from, const BitBlock& to) {
  return bfs_path(graph, checked_vertex(graph, from), checked_vertex(graph, to), true);
}

std::optional<std::vector<BitBlock>> find_return_path(const TransitionGraph& graph,
                                                      const BitBlock& x) {
  const std::uint64_t v = checked_vertex(graph, x);
  return bfs_path(graph, v, v, false);
}

PeriodicPoint make_periodic_point(const DynamicalSystem& sys, const TransitionGraph& graph,
                                  const PhasePoint& x, std::size_t prefix_len) {
  require_same_width(sys.width(), graph.width(), "make_periodic_point");
  require_same_width(sys.width(), x.width(), "make_periodic_point");

  std::vector<BitBlock> blocks = x.stream.take(prefix_len);
  BitBlock state = x.state;
  for (const auto& m : blocks) {
    if (!graph.in_alphabet(m)) {
      throw InvalidArgument("prefix block " + m.hex() + " is outside the graph alphabet");
    }
    state = next_state(sys, state, m);
  }
  const auto path = prefix_len == 0 ? find_return_path(graph, x.state)
                                    : find_label_path(graph, state, x.state);
  if (!path) {
    throw Unreachable("state " + x.state.hex() + " cannot be returned to from " + state.hex());
  }
  blocks.insert(blocks.end(), path->begin(), path->end());
  PhasePoint point(x.state, MessageStream(sys.width(), {}, blocks));

  // The minimal period divides any period; only divisors need checking.
  const std::size_t p = blocks.size();
  for (std::size_t d = 1; d < p; ++d) {
    if (p % d == 0 && iterate(sys, point, d) == point) return {std::move(point), d};
  }
  return {std::move(point), p};
}

std::string export_dot(const TransitionGraph& graph) {
  if (graph.width() > kMaxDotWidth) {
    throw WidthTooLarge("DOT export is limited to width 8, got " + std::to_string(graph.width()));
  }
  const unsigned n = graph.width();
  std::ostringstream os;
  os << "digraph G {\n";
  for (std::uint64_t v = 0; v < graph.vertex_count(); ++v) {
    os << "  \"" << BitBlock(n, v).binary() << "\";\n";
  }
  for (std::uint64_t v = 0; v < graph.vertex_count(); ++v) {
    const std::string from = BitBlock(n, v).binary();
    for (const auto& e : graph.successors(v)) {
      os << "  \"" << from << "\" -> \"" << BitBlock(n, e.target).binary() << "\" [label=\""
         << BitBlock(n, e.label).binary() << "\"];\n";
    }
  }
  os << "}\n";
  return os.str();
}

}  // namespace cbcchaos
