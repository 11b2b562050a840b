#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace derivcheck {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n), rank_(n, 0) {
    for (std::size_t i = 0; i < n; ++i) parent_[i] = i;
  }

  std::size_t Find(std::size_t x) noexcept {
    std::size_t root = x;
    while (parent_[root] != root) root = parent_[root];
    while (parent_[x] != root) {
      const std::size_t next = parent_[x];
      parent_[x] = root;
      x = next;
    }
    return root;
  }

  // Returns false if already joined.
  bool Unite(std::size_t a, std::size_t b) noexcept {
    a = Find(a);
    b = Find(b);
    if (a == b) return false;
    if (rank_[a] < rank_[b]) {
      parent_[a] = b;
    } else if (rank_[a] > rank_[b]) {
      parent_[b] = a;
    } else {
      parent_[b] = a;
      ++rank_[a];
    }
    return true;
  }

  bool Connected(std::size_t a, std::size_t b) noexcept { return Find(a) == Find(b); }

  std::size_t size() const noexcept { return parent_.size(); }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::uint8_t> rank_;
};

}  // namespace derivcheck
