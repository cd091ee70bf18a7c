#include "poscone/ideals.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace poscone {

std::vector<std::pair<std::size_t, std::size_t>> SupportDigraph::arcs() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t l = 0; l < successors.size(); ++l)
    for (std::size_t k : successors[l]) out.emplace_back(l, k);
  return out;
}

SupportDigraph support_digraph(const TruncatedPositiveOperator& T) {
  const double tol = T.space().tol_abs;
  SupportDigraph g;
  g.dim = T.dim();
  g.successors.assign(g.dim, {});
  if (T.is_dense()) {
    const Matrix& m = T.dense();
    for (std::size_t l = 0; l < g.dim; ++l)
      for (std::size_t k = 0; k < g.dim; ++k)
        if (m(k, l) > tol) g.successors[l].push_back(k);
  } else {
    for (const auto& t : T.triplets())
      if (t.value > tol) g.successors[t.col].push_back(t.row);
    for (auto& s : g.successors) std::sort(s.begin(), s.end());
  }
  return g;
}

namespace {

// Iterative Tarjan; dims can reach the sparse ensembles' sizes, so no
// recursion.
struct TarjanState {
  const SupportDigraph& g;
  std::vector<int> index, lowlink;
  std::vector<bool> on_stack;
  std::vector<std::size_t> stack;
  int counter = 0;
  std::vector<std::vector<std::size_t>> sccs;

  explicit TarjanState(const SupportDigraph& graph)
      : g(graph), index(graph.dim, -1), lowlink(graph.dim, 0), on_stack(graph.dim, false) {}

  void run(std::size_t root) {
    struct Frame {
      std::size_t v;
      std::size_t next_child = 0;
    };
    std::vector<Frame> frames{{root}};
    index[root] = lowlink[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!frames.empty()) {
      Frame& f = frames.back();
      const auto& succ = g.successors[f.v];
      if (f.next_child < succ.size()) {
        const std::size_t w = succ[f.next_child++];
        if (index[w] < 0) {
          index[w] = lowlink[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          frames.push_back({w});
        } else if (on_stack[w]) {
          lowlink[f.v] = std::min(lowlink[f.v], index[w]);
        }
      } else {
        if (lowlink[f.v] == index[f.v]) {
          std::vector<std::size_t> scc;
          for (;;) {
            const std::size_t w = stack.back();
            stack.pop_back();
            on_stack[w] = false;
            scc.push_back(w);
            if (w == f.v) break;
          }
          std::sort(scc.begin(), scc.end());
          sccs.push_back(std::move(scc));
        }
        const std::size_t v = f.v;
        frames.pop_back();
        if (!frames.empty())
          lowlink[frames.back().v] = std::min(lowlink[frames.back().v], lowlink[v]);
      }
    }
  }
};

// shortest path lengths (>= 1) from source to every reachable vertex
std::vector<std::size_t> bfs_distances(const SupportDigraph& g, std::size_t source) {
  constexpr std::size_t kUnreached = static_cast<std::size_t>(-1);
  std::vector<std::size_t> dist(g.dim, kUnreached);
  std::deque<std::size_t> queue;
  // distance 0 is excluded by the criterion (i = j with n = 0 says nothing),
  // so seed with the out-neighbors at distance 1
  for (std::size_t k : g.successors[source])
    if (dist[k] == kUnreached) {
      dist[k] = 1;
      queue.push_back(k);
    }
  while (!queue.empty()) {
    const std::size_t v = queue.front();
    queue.pop_front();
    for (std::size_t k : g.successors[v])
      if (dist[k] == kUnreached) {
        dist[k] = dist[v] + 1;
        queue.push_back(k);
      }
  }
  return dist;
}

}  // namespace

std::vector<std::vector<std::size_t>> strongly_connected_components(const SupportDigraph& g) {
  TarjanState state(g);
  for (std::size_t v = 0; v < g.dim; ++v)
    if (state.index[v] < 0) state.run(v);
  return std::move(state.sccs);
}

bool is_irreducible(const SupportDigraph& g) {
  if (g.dim <= 1) return true;
  return strongly_connected_components(g).size() == 1;
}

IdealReport rt_criterion(const TruncatedPositiveOperator& T) {
  const SupportDigraph g = support_digraph(T);
  IdealReport report;
  report.truncation_dim = g.dim;
  report.irreducible = true;

  constexpr std::size_t kUnreached = static_cast<std::size_t>(-1);
  for (std::size_t i = 0; i < g.dim && report.irreducible; ++i) {
    const std::vector<std::size_t> dist = bfs_distances(g, i);
    for (std::size_t j = 0; j < g.dim; ++j) {
      if (i == j) continue;
      if (dist[j] == kUnreached) {
        report.irreducible = false;
        report.failing_pair = {i, j};
        // reachable closure of i spans an invariant ideal at this truncation
        std::vector<std::size_t> support{i};
        for (std::size_t k = 0; k < g.dim; ++k)
          if (dist[k] != kUnreached && k != i) support.push_back(k);
        std::sort(support.begin(), support.end());
        report.invariant_ideal_support = std::move(support);
        break;
      }
      report.witness_powers[{i, j}] = dist[j];
    }
  }
  if (!report.irreducible) report.witness_powers.clear();
  return report;
}

bool has_disjoint_column_supports(const TruncatedPositiveOperator& T) {
  const double tol = T.space().tol_abs;
  const std::size_t n = T.dim();
  // columns share a support index iff some row holds two entries above tol
  if (T.is_dense()) {
    const Matrix& m = T.dense();
    for (std::size_t k = 0; k < n; ++k) {
      bool seen = false;
      for (std::size_t l = 0; l < n; ++l) {
        if (m(k, l) > tol) {
          if (seen) return false;
          seen = true;
        }
      }
    }
    return true;
  }
  std::vector<bool> seen(n, false);
  for (const auto& t : T.triplets()) {
    if (t.value > tol) {
      if (seen[t.row]) return false;
      seen[t.row] = true;
    }
  }
  return true;
}

std::string to_dot(const SupportDigraph& g, const std::vector<std::size_t>* highlight) {
  std::ostringstream out;
  out << "digraph support {\n";
  if (highlight) {
    for (std::size_t v : *highlight)
      out << "  n" << v << " [style=filled, fillcolor=lightblue];\n";
  }
  for (std::size_t l = 0; l < g.dim; ++l)
    for (std::size_t k : g.successors[l]) out << "  n" << l << " -> n" << k << ";\n";
  out << "}\n";
  return out.str();
}

}  // namespace poscone
