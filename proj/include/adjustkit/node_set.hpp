#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <initializer_list>
#include <vector>

namespace adjustkit {

using NodeId = std::size_t;

// Sorted, duplicate-free set of node ids.
class NodeSet {
 public:
  using const_iterator = std::vector<NodeId>::const_iterator;

  NodeSet() = default;
  NodeSet(std::initializer_list<NodeId> ids) : ids_(ids) { normalize(); }
  explicit NodeSet(std::vector<NodeId> ids) : ids_(std::move(ids)) { normalize(); }

  static NodeSet from_mask(const std::vector<char>& mask) {
    NodeSet s;
    for (NodeId i = 0; i < mask.size(); ++i)
      if (mask[i]) s.ids_.push_back(i);
    return s;
  }

  std::vector<char> mask(std::size_t n) const {
    std::vector<char> m(n, 0);
    for (NodeId v : ids_)
      if (v < n) m[v] = 1;
    return m;
  }

  bool contains(NodeId v) const { return std::binary_search(ids_.begin(), ids_.end(), v); }
  bool empty() const { return ids_.empty(); }
  std::size_t size() const { return ids_.size(); }
  const_iterator begin() const { return ids_.begin(); }
  const_iterator end() const { return ids_.end(); }
  NodeId front() const { return ids_.front(); }
  NodeId operator[](std::size_t i) const { return ids_[i]; }
  const std::vector<NodeId>& ids() const { return ids_; }

  void insert(NodeId v) {
    auto it = std::lower_bound(ids_.begin(), ids_.end(), v);
    if (it == ids_.end() || *it != v) ids_.insert(it, v);
  }
  void erase(NodeId v) {
    auto it = std::lower_bound(ids_.begin(), ids_.end(), v);
    if (it != ids_.end() && *it == v) ids_.erase(it);
  }

  bool is_subset_of(const NodeSet& o) const {
    return std::includes(o.ids_.begin(), o.ids_.end(), ids_.begin(), ids_.end());
  }
  bool intersects(const NodeSet& o) const { return !(*this & o).empty(); }

  friend NodeSet operator|(const NodeSet& a, const NodeSet& b) {
    NodeSet r;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r.ids_));
    return r;
  }
  friend NodeSet operator&(const NodeSet& a, const NodeSet& b) {
    NodeSet r;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r.ids_));
    return r;
  }
  friend NodeSet operator-(const NodeSet& a, const NodeSet& b) {
    NodeSet r;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r.ids_));
    return r;
  }
  friend bool operator==(const NodeSet&, const NodeSet&) = default;
  friend auto operator<=>(const NodeSet& a, const NodeSet& b) { return a.ids_ <=> b.ids_; }

 private:
  void normalize() {
    std::sort(ids_.begin(), ids_.end());
    ids_.erase(std::unique(ids_.begin(), ids_.end()), ids_.end());
  }

  std::vector<NodeId> ids_;
};

}  // namespace adjustkit
