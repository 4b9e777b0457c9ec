#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "qtoda/rational.hpp"

namespace qtoda {

// Weakly decreasing nonnegative integer vector of fixed rank (trailing zeros kept).
class Partition {
 public:
  explicit Partition(std::vector<int> parts) : parts_(std::move(parts)) {
    if (parts_.empty()) throw Error("Partition: rank must be positive");
    for (std::size_t j = 0; j < parts_.size(); ++j) {
      if (parts_[j] < 0) throw Error("Partition: negative part");
      if (j > 0 && parts_[j] > parts_[j - 1]) throw Error("Partition: parts must be weakly decreasing");
    }
  }
  static Partition zero(int rank) { return Partition(std::vector<int>(rank, 0)); }

  int rank() const { return static_cast<int>(parts_.size()); }
  int weight() const { return std::accumulate(parts_.begin(), parts_.end(), 0); }
  int operator[](int j) const { return parts_[j]; }  // 0-based
  const std::vector<int>& parts() const { return parts_; }
  bool is_zero() const { return parts_[0] == 0; }

  friend bool operator==(const Partition& a, const Partition& b) { return a.parts_ == b.parts_; }
  friend bool operator!=(const Partition& a, const Partition& b) { return a.parts_ != b.parts_; }
  friend bool operator<(const Partition& a, const Partition& b) { return a.parts_ < b.parts_; }

  std::string to_string() const {
    std::string s = "[";
    for (std::size_t j = 0; j < parts_.size(); ++j) {
      if (j) s += ",";
      s += std::to_string(parts_[j]);
    }
    return s + "]";
  }

  static Partition from_string(const std::string& s) {
    if (s.size() < 2 || s.front() != '[' || s.back() != ']')
      throw Error("Partition: expected \"[a,b,...]\", got \"" + s + "\"");
    std::vector<int> parts;
    std::string body = s.substr(1, s.size() - 2);
    std::size_t pos = 0;
    while (pos <= body.size()) {
      auto comma = body.find(',', pos);
      if (comma == std::string::npos) comma = body.size();
      parts.push_back(std::stoi(body.substr(pos, comma - pos)));
      pos = comma + 1;
    }
    return Partition(std::move(parts));
  }

 private:
  std::vector<int> parts_;
};

// Partial order by partial sums: mu <= lambda iff sum_{j<=k} mu_j <= sum_{j<=k} lambda_j
// for every k.  Weights need not agree.
inline bool dominance_leq(const Partition& mu, const Partition& lambda) {
  if (mu.rank() != lambda.rank()) throw Error("dominance_leq: rank mismatch");
  int sm = 0, sl = 0;
  for (int k = 0; k < mu.rank(); ++k) {
    sm += mu[k];
    sl += lambda[k];
    if (sm > sl) return false;
  }
  return true;
}

namespace detail {
inline void down_set_rec(const Partition& lambda, std::vector<int>& prefix,
                         int partial, std::vector<Partition>& out) {
  const int n = lambda.rank();
  const int k = static_cast<int>(prefix.size());
  if (k == n) {
    out.emplace_back(prefix);
    return;
  }
  int bound_sum = 0;
  for (int j = 0; j <= k; ++j) bound_sum += lambda[j];
  const int hi = std::min(k > 0 ? prefix[k - 1] : bound_sum, bound_sum - partial);
  for (int v = 0; v <= hi; ++v) {
    prefix.push_back(v);
    down_set_rec(lambda, prefix, partial + v, out);
    prefix.pop_back();
  }
}
}  // namespace detail

inline std::vector<Partition> down_set(const Partition& lambda) {
  std::vector<Partition> out;
  std::vector<int> prefix;
  detail::down_set_rec(lambda, prefix, 0, out);
  return out;
}

// Linear extension order: weight ascending, ties lexicographic ascending.
// Refines dominance: within equal weight, strict dominance forces the first
// differing part to be smaller.
struct LinExtLess {
  bool operator()(const Partition& a, const Partition& b) const {
    const int wa = a.weight(), wb = b.weight();
    if (wa != wb) return wa < wb;
    return a.parts() < b.parts();
  }
};

inline void validate_linear_extension(const std::vector<Partition>& sorted) {
  for (std::size_t i = 0; i < sorted.size(); ++i)
    for (std::size_t j = i + 1; j < sorted.size(); ++j)
      if (dominance_leq(sorted[j], sorted[i]) && sorted[j] != sorted[i])
        throw Error("linear extension does not refine dominance: " + sorted[j].to_string() +
                    " <= " + sorted[i].to_string() + " but listed later");
}

inline std::vector<Partition> partitions_up_to_weight(int rank, int max_weight) {
  if (rank <= 0) throw Error("partitions_up_to_weight: rank must be positive");
  std::vector<Partition> out;
  std::vector<int> parts;
  // depth-first over weakly decreasing vectors with weight cap
  auto rec = [&](auto&& self, int depth, int prev, int used) -> void {
    if (depth == rank) {
      out.emplace_back(parts);
      return;
    }
    for (int v = 0; v <= std::min(prev, max_weight - used); ++v) {
      parts.push_back(v);
      self(self, depth + 1, v, used + v);
      parts.pop_back();
    }
  };
  rec(rec, 0, max_weight, 0);
  std::sort(out.begin(), out.end(), [](const Partition& a, const Partition& b) {
    return LinExtLess{}(a, b);
  });
  validate_linear_extension(out);
  return out;
}

// Signed-permutation orbit of lambda: all distinct vectors obtained by permuting
// the parts and flipping signs of nonzero entries.  Each vector appears once.
inline std::vector<std::vector<int>> orbit(const Partition& lambda) {
  std::vector<int> base = lambda.parts();
  std::sort(base.begin(), base.end());
  std::vector<std::vector<int>> out;
  do {
    std::vector<int> nz;
    for (std::size_t j = 0; j < base.size(); ++j)
      if (base[j] != 0) nz.push_back(static_cast<int>(j));
    const std::size_t count = std::size_t(1) << nz.size();
    for (std::size_t mask = 0; mask < count; ++mask) {
      std::vector<int> v = base;
      for (std::size_t b = 0; b < nz.size(); ++b)
        if (mask & (std::size_t(1) << b)) v[nz[b]] = -v[nz[b]];
      out.push_back(std::move(v));
    }
  } while (std::next_permutation(base.begin(), base.end()));
  return out;
}

inline long orbit_size(const Partition& lambda) {
  const int n = lambda.rank();
  std::map<int, int> mult;
  int nonzero = 0;
  for (int j = 0; j < n; ++j) {
    ++mult[lambda[j]];
    if (lambda[j] != 0) ++nonzero;
  }
  long size = 1;
  for (int j = 2; j <= n; ++j) size *= j;
  for (const auto& [v, m] : mult)
    for (int j = 2; j <= m; ++j) size /= j;
  return size << nonzero;
}

// lambda + delta when the result is again a partition.
inline std::optional<Partition> apply_move(const Partition& lambda, const std::vector<int>& delta) {
  if (static_cast<int>(delta.size()) != lambda.rank()) throw Error("apply_move: rank mismatch");
  std::vector<int> v = lambda.parts();
  for (int j = 0; j < lambda.rank(); ++j) v[j] += delta[j];
  for (int j = 0; j < lambda.rank(); ++j) {
    if (v[j] < 0) return std::nullopt;
    if (j > 0 && v[j] > v[j - 1]) return std::nullopt;
  }
  return Partition(std::move(v));
}

inline std::optional<Partition> shift_part(const Partition& lambda, int j, int dir) {
  std::vector<int> delta(lambda.rank(), 0);
  delta[j] = dir;
  return apply_move(lambda, delta);
}

}  // namespace qtoda
