#include "prio/spider.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace prio {

namespace {

std::vector<char> member_mask(int n, std::span<const Vertex> members) {
  std::vector<char> mask(n, 0);
  for (Vertex v : members) {
    if (v < 0 || v >= n) throw std::invalid_argument("member id out of range");
    mask[v] = 1;
  }
  return mask;
}

// Vertices in BFS order from the root.
std::vector<Vertex> top_down(const RateTree& t, const std::vector<std::vector<Vertex>>& kids) {
  std::vector<Vertex> order{t.root};
  for (size_t i = 0; i < order.size(); ++i) {
    for (Vertex c : kids[order[i]]) order.push_back(c);
  }
  return order;
}

// Largest member rate in each subtree, 0 where none.
std::vector<Level> member_max(const RateTree& t, const std::vector<char>& in_m) {
  auto kids = t.children();
  auto order = top_down(t, kids);
  std::vector<Level> best(t.capacity(), 0);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    Vertex v = *it;
    if (in_m[v]) best[v] = std::max(best[v], t.rate[v]);
    if (v != t.root) best[t.parent[v]] = std::max(best[t.parent[v]], best[v]);
  }
  return best;
}

}  // namespace

std::vector<Vertex> RateTree::vertices() const {
  std::vector<Vertex> out;
  for (Vertex v = 0; v < capacity(); ++v) {
    if (contains(v)) out.push_back(v);
  }
  return out;
}

std::vector<std::vector<Vertex>> RateTree::children() const {
  std::vector<std::vector<Vertex>> kids(capacity());
  for (Vertex v = 0; v < capacity(); ++v) {
    if (v != root && parent[v] != kNoVertex) kids[parent[v]].push_back(v);
  }
  return kids;
}

int RateTree::size() const { return static_cast<int>(vertices().size()); }

RateTree RateTree::from_edges(int n, Vertex root, std::span<const std::pair<Vertex, Vertex>> edges,
                              std::vector<Level> rates) {
  if (root < 0 || root >= n) throw std::invalid_argument("rate tree: root out of range");
  if (static_cast<int>(rates.size()) != n) throw std::invalid_argument("rate tree: rate vector size");
  std::vector<std::vector<Vertex>> adj(n);
  for (auto [u, v] : edges) {
    if (u < 0 || v < 0 || u >= n || v >= n || u == v) throw std::invalid_argument("rate tree: bad edge");
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  RateTree t;
  t.root = root;
  t.parent.assign(n, kNoVertex);
  t.rate.assign(n, 0);
  std::vector<char> seen(n, 0);
  std::vector<Vertex> queue{root};
  seen[root] = 1;
  for (size_t i = 0; i < queue.size(); ++i) {
    Vertex x = queue[i];
    for (Vertex y : adj[x]) {
      if (seen[y]) continue;
      seen[y] = 1;
      t.parent[y] = x;
      queue.push_back(y);
    }
  }
  if (queue.size() != edges.size() + 1) throw std::invalid_argument("rate tree: edges do not form a tree containing the root");
  for (Vertex v : queue) t.rate[v] = rates[v];
  return t;
}

bool is_rate_tree(const RateTree& t) {
  for (Vertex v : t.vertices()) {
    if (t.rate[v] < 1) return false;
    if (v != t.root && t.rate[v] > t.rate[t.parent[v]]) return false;
  }
  return true;
}

bool is_m_optimized(const RateTree& t, std::span<const Vertex> members) {
  auto in_m = member_mask(t.capacity(), members);
  for (Vertex v : members) {
    if (!t.contains(v)) return false;
  }
  if (!in_m[t.root]) return false;
  auto kids = t.children();
  auto best = member_max(t, in_m);
  for (Vertex v : t.vertices()) {
    if (in_m[v]) continue;
    if (kids[v].empty()) return false;
    if (t.rate[v] != best[v]) return false;
  }
  return true;
}

RateTree m_optimize(const RateTree& t, std::span<const Vertex> members) {
  auto in_m = member_mask(t.capacity(), members);
  if (!in_m[t.root]) throw std::invalid_argument("m_optimize: root is not a member");
  for (Vertex v : members) {
    if (!t.contains(v)) throw std::invalid_argument("m_optimize: member " + std::to_string(v + 1) + " not in tree");
  }
  RateTree out = t;
  auto kids = t.children();
  std::vector<int> degree(t.capacity(), 0);
  for (Vertex v = 0; v < t.capacity(); ++v) degree[v] = static_cast<int>(kids[v].size());
  std::vector<Vertex> leaves;
  for (Vertex v : t.vertices()) {
    if (degree[v] == 0 && !in_m[v]) leaves.push_back(v);
  }
  while (!leaves.empty()) {
    Vertex v = leaves.back();
    leaves.pop_back();
    Vertex p = out.parent[v];
    out.parent[v] = kNoVertex;
    out.rate[v] = 0;
    if (--degree[p] == 0 && !in_m[p]) leaves.push_back(p);
  }
  auto best = member_max(out, in_m);
  for (Vertex v : out.vertices()) {
    if (!in_m[v]) out.rate[v] = best[v];
  }
  return out;
}

Level RateSpider::rate_of(Vertex v) const {
  auto it = std::lower_bound(vertices.begin(), vertices.end(), v);
  if (it == vertices.end() || *it != v) return 0;
  return rates[it - vertices.begin()];
}

bool RateSpider::contains(Vertex v) const { return std::binary_search(vertices.begin(), vertices.end(), v); }

int spider_count(const RateSpider& x, std::span<const Vertex> members) {
  int count = 1;
  for (Vertex v : members) {
    if (v != x.root && x.contains(v)) ++count;
  }
  return count;
}

SpiderDecomposition decompose_rate_spiders(const RateTree& t, std::span<const Vertex> members) {
  std::vector<Vertex> m(members.begin(), members.end());
  std::sort(m.begin(), m.end());
  m.erase(std::unique(m.begin(), m.end()), m.end());
  if (m.size() < 2) throw std::invalid_argument("decompose_rate_spiders: need at least two members");
  if (!is_rate_tree(t)) throw std::invalid_argument("decompose_rate_spiders: input is not a rate tree");
  if (!is_m_optimized(t, m)) throw std::invalid_argument("decompose_rate_spiders: input is not M-optimized");

  SpiderDecomposition out;
  out.members = m;
  RateTree cur = t;
  std::vector<Vertex> left = m;
  const int n = t.capacity();

  while (true) {
    auto in_m = member_mask(n, left);
    auto kids = cur.children();
    auto order = top_down(cur, kids);
    std::vector<int> depth(n, 0), count(n, 0);
    for (Vertex v : order) {
      if (v != cur.root) depth[v] = depth[cur.parent[v]] + 1;
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      Vertex v = *it;
      if (in_m[v]) ++count[v];
      if (v != cur.root) count[cur.parent[v]] += count[v];
    }
    Vertex u = kNoVertex;
    for (Vertex v : order) {
      if (count[v] < 2) continue;
      if (u == kNoVertex || depth[v] > depth[u] || (depth[v] == depth[u] && v < u)) u = v;
    }
    if (u == kNoVertex) throw std::logic_error("decompose_rate_spiders: no branching vertex");

    // Subtree of u.
    std::vector<Vertex> sub{u};
    for (size_t i = 0; i < sub.size(); ++i) {
      for (Vertex c : kids[sub[i]]) sub.push_back(c);
    }

    RateSpider x;
    x.center = u;
    std::vector<Vertex> verts = sub;
    if (u == cur.root) {
      x.root = u;
    } else if (in_m[u]) {
      x.root = u;
    } else {
      Vertex pick = kNoVertex;
      for (Vertex v : sub) {
        if (in_m[v] && cur.rate[v] == cur.rate[u] && (pick == kNoVertex || v < pick)) pick = v;
      }
      if (pick == kNoVertex) throw std::logic_error("decompose_rate_spiders: no member carries the branch rate");
      x.root = pick;
    }

    std::vector<char> in_sub(n, 0);
    for (Vertex v : sub) in_sub[v] = 1;
    std::vector<Vertex> rest;
    for (Vertex v : left) {
      if (!in_sub[v]) rest.push_back(v);
    }

    bool last = u == cur.root || rest.size() <= 1;
    if (u != cur.root && rest.size() == 1) {
      // Only the root remains: the root path joins this spider.
      for (Vertex p = cur.parent[u]; p != kNoVertex; p = cur.parent[p]) verts.push_back(p);
      x.root = cur.root;
    }
    std::sort(verts.begin(), verts.end());
    x.vertices = verts;
    for (Vertex v : verts) {
      x.rates.push_back(cur.rate[v]);
      if (v != cur.root && cur.parent[v] != kNoVertex && std::binary_search(verts.begin(), verts.end(), cur.parent[v]))
        x.edges.emplace_back(cur.parent[v], v);
    }
    std::sort(x.edges.begin(), x.edges.end());
    out.spiders.push_back(std::move(x));
    if (last) break;

    RateTree remainder = cur;
    for (Vertex v : sub) {
      remainder.parent[v] = kNoVertex;
      remainder.rate[v] = 0;
    }
    cur = m_optimize(remainder, rest);
    left = std::move(rest);
  }
  return out;
}

std::vector<std::string> verify_spider(const RateSpider& x, std::span<const Vertex> members) {
  std::vector<std::string> problems;
  auto name = [&](const std::string& what) { return "spider rooted at " + std::to_string(x.root + 1) + ": " + what; };
  if (!std::is_sorted(x.vertices.begin(), x.vertices.end()) ||
      std::adjacent_find(x.vertices.begin(), x.vertices.end()) != x.vertices.end()) {
    problems.push_back(name("vertex list not strictly ascending"));
    return problems;
  }
  if (x.rates.size() != x.vertices.size()) {
    problems.push_back(name("rate list size mismatch"));
    return problems;
  }
  if (!x.contains(x.root) || !x.contains(x.center)) {
    problems.push_back(name("root or center missing"));
    return problems;
  }
  if (x.edges.size() + 1 != x.vertices.size()) {
    problems.push_back(name("edge count is not |V|-1"));
    return problems;
  }
  const int cap = x.vertices.back() + 1;
  std::vector<std::vector<Vertex>> adj(cap);
  for (auto [a, b] : x.edges) {
    if (!x.contains(a) || !x.contains(b)) {
      problems.push_back(name("edge leaves the vertex set"));
      return problems;
    }
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  // Connectivity from the root, with parents for the rate checks.
  std::vector<Vertex> parent(cap, kNoVertex);
  std::vector<char> seen(cap, 0);
  std::vector<Vertex> order{x.root};
  seen[x.root] = 1;
  for (size_t i = 0; i < order.size(); ++i) {
    for (Vertex y : adj[order[i]]) {
      if (!seen[y]) {
        seen[y] = 1;
        parent[y] = order[i];
        order.push_back(y);
      }
    }
  }
  if (order.size() != x.vertices.size()) {
    problems.push_back(name("not connected"));
    return problems;
  }

  int branching = 0, leaves = 0;
  for (Vertex v : x.vertices) {
    int deg = static_cast<int>(adj[v].size());
    if (deg > 2) {
      ++branching;
      if (v != x.center) problems.push_back(name("vertex " + std::to_string(v + 1) + " branches but is not the center"));
    }
    if (deg <= 1) ++leaves;
  }
  if (branching > 1) problems.push_back(name("more than one vertex of degree above 2"));
  if (leaves < 2) problems.push_back(name("fewer than two leaves"));
  if (x.root != x.center && adj[x.root].size() > 1) problems.push_back(name("root is neither the center nor a leaf"));

  for (Vertex v : order) {
    if (v != x.root && x.rate_of(v) > x.rate_of(parent[v]))
      problems.push_back(name("rate rises from " + std::to_string(parent[v] + 1) + " to " + std::to_string(v + 1)));
  }
  // Center outward: every leg must be non-increasing.
  std::vector<Vertex> from_center(cap, kNoVertex);
  std::vector<char> mark(cap, 0);
  std::vector<Vertex> queue{x.center};
  mark[x.center] = 1;
  for (size_t i = 0; i < queue.size(); ++i) {
    for (Vertex y : adj[queue[i]]) {
      if (mark[y]) continue;
      mark[y] = 1;
      from_center[y] = queue[i];
      queue.push_back(y);
    }
  }
  for (Vertex v : x.vertices) {
    if (v == x.center || adj[v].size() != 1 || v == x.root) continue;
    for (Vertex y = v; from_center[y] != kNoVertex; y = from_center[y]) {
      if (x.rate_of(y) > x.rate_of(from_center[y])) {
        problems.push_back(name("leg to " + std::to_string(v + 1) + " has a rising rate"));
        break;
      }
    }
  }

  std::vector<Vertex> m(members.begin(), members.end());
  std::sort(m.begin(), m.end());
  auto is_member = [&](Vertex v) { return std::binary_search(m.begin(), m.end(), v); };
  if (!is_member(x.root)) problems.push_back(name("root is not a member"));
  for (Vertex v : x.vertices) {
    if (adj[v].size() == 1 && !is_member(v)) problems.push_back(name("leaf " + std::to_string(v + 1) + " is not a member"));
  }
  return problems;
}

std::vector<std::string> verify_decomposition(const RateTree& t, const SpiderDecomposition& d) {
  std::vector<std::string> problems;
  std::vector<int> owner(t.capacity(), -1);
  int total = 0;
  for (size_t j = 0; j < d.spiders.size(); ++j) {
    const RateSpider& x = d.spiders[j];
    for (auto& p : verify_spider(x, d.members)) problems.push_back(std::move(p));
    for (size_t i = 0; i < x.vertices.size(); ++i) {
      Vertex v = x.vertices[i];
      if (v < 0 || v >= t.capacity() || !t.contains(v)) {
        problems.push_back("spider " + std::to_string(j + 1) + " uses a vertex outside the tree");
        continue;
      }
      if (owner[v] >= 0) problems.push_back("vertex " + std::to_string(v + 1) + " lies in two spiders");
      owner[v] = static_cast<int>(j);
      if (x.rates[i] > t.rate[v]) problems.push_back("vertex " + std::to_string(v + 1) + " rate exceeds the tree rate");
    }
    for (auto [a, b] : x.edges) {
      bool tree_edge = (b < t.capacity() && t.contains(b) && b != t.root && t.parent[b] == a) ||
                       (a < t.capacity() && t.contains(a) && a != t.root && t.parent[a] == b);
      if (!tree_edge) problems.push_back("spider " + std::to_string(j + 1) + " uses a non-tree edge");
    }
    total += spider_count(x, d.members);
  }
  for (Vertex v : d.members) {
    if (v < 0 || v >= t.capacity() || owner[v] < 0) {
      problems.push_back("member " + std::to_string(v + 1) + " is not covered");
      continue;
    }
    const RateSpider& x = d.spiders[owner[v]];
    int deg = 0;
    for (auto [a, b] : x.edges) deg += (a == v) + (b == v);
    if (v != x.root && v != x.center && deg != 1)
      problems.push_back("member " + std::to_string(v + 1) + " is inside a leg");
  }
  if (total != static_cast<int>(d.members.size()))
    problems.push_back("member count " + std::to_string(total) + " != |M| = " + std::to_string(d.members.size()));
  return problems;
}

std::string render_decomposition(const SpiderDecomposition& d) {
  std::ostringstream os;
  os << d.spiders.size() << " spiders, |M| = " << d.members.size() << "\n";
  for (size_t j = 0; j < d.spiders.size(); ++j) {
    const RateSpider& x = d.spiders[j];
    os << "spider " << j + 1 << ": root " << x.root + 1 << ", center " << x.center + 1 << ", count "
       << spider_count(x, d.members) << "\n";
    // Walk from the center so each leg prints as a line.
    std::vector<std::vector<Vertex>> adj(x.vertices.back() + 1);
    for (auto [a, b] : x.edges) {
      adj[a].push_back(b);
      adj[b].push_back(a);
    }
    for (auto& row : adj) std::sort(row.begin(), row.end());
    for (Vertex first : adj[x.center]) {
      os << "  " << x.center + 1 << "(" << x.rate_of(x.center) << ")";
      Vertex prev = x.center, cur = first;
      while (true) {
        os << " - " << cur + 1 << "(" << x.rate_of(cur) << ")";
        Vertex next = kNoVertex;
        for (Vertex y : adj[cur]) {
          if (y != prev) next = y;
        }
        if (next == kNoVertex) break;
        prev = cur;
        cur = next;
      }
      os << "\n";
    }
  }
  return os.str();
}

}  // namespace prio
