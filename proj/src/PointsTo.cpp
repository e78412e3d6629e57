#include "fspta/PointsTo.hpp"

#include <algorithm>

namespace fspta {

bool PointsToSet::insert(NodeId v) {
  auto it = std::lower_bound(ids_.begin(), ids_.end(), v);
  if (it != ids_.end() && *it == v)
    return false;
  ids_.insert(it, v);
  return true;
}

bool PointsToSet::contains(NodeId v) const {
  return std::binary_search(ids_.begin(), ids_.end(), v);
}

bool PointsToSet::unionWith(const PointsToSet &src) {
  if (src.ids_.empty())
    return false;
  if (ids_.empty()) {
    ids_ = src.ids_;
    return true;
  }
  std::vector<NodeId> merged;
  merged.reserve(ids_.size() + src.ids_.size());
  std::set_union(ids_.begin(), ids_.end(), src.ids_.begin(), src.ids_.end(),
                 std::back_inserter(merged));
  if (merged.size() == ids_.size())
    return false;
  ids_ = std::move(merged);
  return true;
}

bool PointsToSet::unionWith(const PointsToSet &src, PointsToSet &added) {
  if (src.ids_.empty())
    return false;
  std::vector<NodeId> fresh;
  std::set_difference(src.ids_.begin(), src.ids_.end(), ids_.begin(),
                      ids_.end(), std::back_inserter(fresh));
  if (fresh.empty())
    return false;
  std::vector<NodeId> merged;
  merged.reserve(ids_.size() + fresh.size());
  std::set_union(ids_.begin(), ids_.end(), fresh.begin(), fresh.end(),
                 std::back_inserter(merged));
  ids_ = std::move(merged);
  for (NodeId v : fresh)
    added.insert(v);
  return true;
}

} // namespace fspta
