#pragma once

// Reference implementations used only by tests. They favour the most literal
// reading of each definition over speed and share no code with the library.

#include <algorithm>
#include <bit>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace stance::oracle {

struct Prf {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Per-class scores straight from the label lists; classes are 0..2.
inline std::array<Prf, 3> per_class_f1(const std::vector<int>& golds, const std::vector<int>& preds) {
  std::array<Prf, 3> out{};
  for (int c = 0; c < 3; ++c) {
    double tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < golds.size(); ++i) {
      if (preds[i] == c && golds[i] == c) tp += 1;
      if (preds[i] == c && golds[i] != c) fp += 1;
      if (preds[i] != c && golds[i] == c) fn += 1;
    }
    out[c].precision = tp + fp > 0 ? tp / (tp + fp) : 0.0;
    out[c].recall = tp + fn > 0 ? tp / (tp + fn) : 0.0;
    double s = out[c].precision + out[c].recall;
    out[c].f1 = s > 0 ? 2 * out[c].precision * out[c].recall / s : 0.0;
  }
  return out;
}

inline double macro_f1(const std::vector<int>& golds, const std::vector<int>& preds) {
  auto pc = per_class_f1(golds, preds);
  return (pc[0].f1 + pc[1].f1 + pc[2].f1) / 3.0;
}

struct CurvePoint {
  double recall = 0.0;
  double precision = 0.0;
  double threshold = 0.0;
};

// For every distinct score t, highest first: classify score >= t as positive
// and count.
inline std::vector<CurvePoint> pr_points(const std::vector<std::pair<double, bool>>& scored) {
  std::set<double, std::greater<>> thresholds;
  double positives = 0;
  for (const auto& [s, pos] : scored) {
    thresholds.insert(s);
    positives += pos ? 1 : 0;
  }
  std::vector<CurvePoint> out;
  for (double t : thresholds) {
    double tp = 0, predicted = 0;
    for (const auto& [s, pos] : scored) {
      if (s >= t) {
        predicted += 1;
        tp += pos ? 1 : 0;
      }
    }
    out.push_back({tp / positives, tp / predicted, t});
  }
  return out;
}

// Trapezoids between consecutive points after anchoring at recall 0 with the
// first point's precision.
inline double trapezoid_area(const std::vector<CurvePoint>& pts) {
  double area = 0.0;
  double prev_r = 0.0;
  double prev_p = pts.front().precision;
  for (const auto& pt : pts) {
    area += (pt.recall - prev_r) * (pt.precision + prev_p) / 2.0;
    prev_r = pt.recall;
    prev_p = pt.precision;
  }
  return area;
}

struct Cut {
  bool found = false;
  double threshold = 0.0;
  double precision = 0.0;
  double recall = 0.0;
};

// Highest recall among thresholds with precision >= target; ties by higher
// precision, then higher threshold.
inline Cut best_cut(const std::vector<std::pair<double, bool>>& scored, double target) {
  Cut best;
  for (const auto& pt : pr_points(scored)) {
    if (pt.precision < target) continue;
    bool better = !best.found || pt.recall > best.recall ||
                  (pt.recall == best.recall && pt.precision > best.precision) ||
                  (pt.recall == best.recall && pt.precision == best.precision && pt.threshold > best.threshold);
    if (better) best = {true, pt.threshold, pt.precision, pt.recall};
  }
  return best;
}

using Edge = std::pair<int, int>;

inline int degree_within(int v, const std::vector<Edge>& edges, const std::vector<bool>& in) {
  std::set<int> nbrs;
  for (const auto& [a, b] : edges) {
    if (a == v && in[b] && b != v) nbrs.insert(b);
    if (b == v && in[a] && a != v) nbrs.insert(a);
  }
  return static_cast<int>(nbrs.size());
}

// The k-core is the union of every node set whose induced subgraph has
// minimum degree >= k; enumerate them all. Only for small n.
inline std::vector<bool> kcore_exhaustive(int n, const std::vector<Edge>& edges, int k) {
  std::vector<bool> result(static_cast<std::size_t>(n), false);
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    std::vector<bool> in(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) in[v] = (mask >> v) & 1u;
    bool ok = true;
    for (int v = 0; v < n && ok; ++v) {
      if (in[v] && degree_within(v, edges, in) < k) ok = false;
    }
    if (!ok) continue;
    for (int v = 0; v < n; ++v) {
      if (in[v]) result[v] = true;
    }
  }
  return result;
}

// Rescans every node until a full pass removes nothing.
inline std::vector<bool> kcore_rescan(int n, const std::vector<Edge>& edges, int k) {
  std::vector<bool> in(static_cast<std::size_t>(n), true);
  bool changed = true;
  while (changed) {
    changed = false;
    for (int v = 0; v < n; ++v) {
      if (in[v] && degree_within(v, edges, in) < k) {
        in[v] = false;
        changed = true;
      }
    }
  }
  return in;
}

// Bitmask versions for graphs of up to 64 nodes: adj[v] holds v's neighbours.
inline std::vector<std::uint64_t> adjacency_masks(int n, const std::vector<Edge>& edges) {
  std::vector<std::uint64_t> adj(static_cast<std::size_t>(n), 0);
  for (const auto& [a, b] : edges) {
    if (a == b) continue;
    adj[a] |= std::uint64_t{1} << b;
    adj[b] |= std::uint64_t{1} << a;
  }
  return adj;
}

inline bool min_degree_at_least(const std::vector<std::uint64_t>& adj, std::uint64_t set, int k) {
  for (std::size_t v = 0; v < adj.size(); ++v) {
    if ((set >> v & 1u) && std::popcount(adj[v] & set) < k) return false;
  }
  return true;
}

// Union of every subset with minimum induced degree >= k. Exhaustive, n <= 22.
inline std::uint64_t kcore_mask_exhaustive(int n, const std::vector<Edge>& edges, int k) {
  auto adj = adjacency_masks(n, edges);
  std::uint64_t result = 0;
  for (std::uint64_t set = 1; set < (std::uint64_t{1} << n); ++set) {
    if ((set | result) == result) continue;
    if (min_degree_at_least(adj, set, k)) result |= set;
  }
  return result;
}

// Proves that `core` is the k-core: it is valid, and no nonempty subset T of
// the excluded nodes makes core | T valid. Since the union of valid sets is
// valid, that rules out every larger valid set. Exponential in the number of
// excluded nodes.
inline bool certify_kcore(int n, const std::vector<Edge>& edges, int k, std::uint64_t core) {
  auto adj = adjacency_masks(n, edges);
  if (core != 0 && !min_degree_at_least(adj, core, k)) return false;
  std::vector<int> outside;
  for (int v = 0; v < n; ++v) {
    if (!(core >> v & 1u)) outside.push_back(v);
  }
  for (std::uint64_t pick = 1; pick < (std::uint64_t{1} << outside.size()); ++pick) {
    std::uint64_t extra = 0;
    for (std::size_t i = 0; i < outside.size(); ++i) {
      if (pick >> i & 1u) extra |= std::uint64_t{1} << outside[i];
    }
    if (min_degree_at_least(adj, core | extra, k)) return false;
  }
  return true;
}

// pmi(h, c) from tweet-level counts; -inf when h and c never co-occur.
inline double pmi(const std::vector<std::pair<std::set<std::string>, int>>& tweets, const std::string& h, int c) {
  double n = static_cast<double>(tweets.size());
  double nh = 0, nc = 0, nhc = 0;
  for (const auto& [tags, cls] : tweets) {
    bool has = tags.count(h) > 0;
    nh += has;
    nc += cls == c;
    nhc += has && cls == c;
  }
  if (nhc == 0) return -std::numeric_limits<double>::infinity();
  return std::log((nhc / n) / ((nh / n) * (nc / n)));
}

// max |a-b| / max(|a|, |b|, floor)
inline double relative_error(double a, double b, double floor = 1e-6) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

}  // namespace stance::oracle
