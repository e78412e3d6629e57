#pragma once

#include "fspta/Common.hpp"

#include <vector>

namespace fspta {

// Points-to set over object ids. Sorted unique vector: iteration order is
// the id order, which keeps every downstream consumer deterministic.
class PointsToSet {
public:
  bool insert(NodeId v);

  // dst ∪= src. Returns true iff dst grew.
  bool unionWith(const PointsToSet &src);

  // dst ∪= src, appending the genuinely new elements to *added.
  bool unionWith(const PointsToSet &src, PointsToSet &added);

  bool contains(NodeId v) const;
  bool empty() const { return ids_.empty(); }
  size_t size() const { return ids_.size(); }
  void clear() { ids_.clear(); }

  auto begin() const { return ids_.begin(); }
  auto end() const { return ids_.end(); }

  bool operator==(const PointsToSet &o) const { return ids_ == o.ids_; }
  bool operator!=(const PointsToSet &o) const { return ids_ != o.ids_; }

  const std::vector<NodeId> &ids() const { return ids_; }

private:
  std::vector<NodeId> ids_;
};

} // namespace fspta
