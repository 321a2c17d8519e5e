// Usable under the terms in the Apache License, Version 2.0.
#include "acf/dictionary.hpp"

#include <algorithm>
#include <vector>

namespace acf {

void ReverseDictionary::store(const Element& x, const Location& loc) {
  if (element_to_location_.count(x) > 0)
    throw consistency_error("dictionary: element already stored");
  const uint64_t key = flat(loc);
  if (location_to_element_.count(key) > 0)
    throw consistency_error("dictionary: location already occupied");
  element_to_location_.emplace(x, loc);
  location_to_element_.emplace(key, x);
}

const Element& ReverseDictionary::element_at(const Location& loc) {
  ++access_count_;
  auto it = location_to_element_.find(flat(loc));
  if (it == location_to_element_.end())
    throw consistency_error("dictionary: element_at on empty location");
  return it->second;
}

const Element& ReverseDictionary::peek_at(const Location& loc) const {
  auto it = location_to_element_.find(flat(loc));
  if (it == location_to_element_.end())
    throw consistency_error("dictionary: peek_at on empty location");
  return it->second;
}

void ReverseDictionary::relocate(const Location& from, const Location& to) {
  auto it = location_to_element_.find(flat(from));
  if (it == location_to_element_.end())
    throw consistency_error("dictionary: relocate from empty location");
  if (location_to_element_.count(flat(to)) > 0)
    throw consistency_error("dictionary: relocate to occupied location");
  Element x = std::move(it->second);
  location_to_element_.erase(it);
  element_to_location_[x] = to;
  location_to_element_.emplace(flat(to), std::move(x));
}

Element ReverseDictionary::remove_at(const Location& loc) {
  auto it = location_to_element_.find(flat(loc));
  if (it == location_to_element_.end())
    throw consistency_error("dictionary: remove_at on empty location");
  Element x = std::move(it->second);
  location_to_element_.erase(it);
  element_to_location_.erase(x);
  return x;
}

std::optional<Location> ReverseDictionary::lookup(const Element& x) const {
  auto it = element_to_location_.find(x);
  if (it == element_to_location_.end()) return std::nullopt;
  return it->second;
}

void ReverseDictionary::for_each_sorted(
    const std::function<void(const Location&, const Element&)>& fn) const {
  std::vector<uint64_t> keys;
  keys.reserve(location_to_element_.size());
  for (const auto& [key, _] : location_to_element_) keys.push_back(key);
  std::sort(keys.begin(), keys.end());
  for (uint64_t key : keys) fn(unflat(key), location_to_element_.at(key));
}

}  // namespace acf
