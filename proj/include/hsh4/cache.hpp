#pragma once

#include <functional>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

namespace hsh4 {

/// Memo table for values that are computed once and read many times.
///
/// Lookups take a shared lock; a miss computes outside any lock and inserts
/// under an exclusive one. Concurrent misses on the same key may compute
/// twice, and the first inserted value wins, so observed values never change.
template <class Key, class Value, class Hash = std::hash<Key>>
class ReadMostlyCache {
 public:
  template <class Compute>
  Value get_or_compute(const Key& key, Compute&& compute) {
    {
      std::shared_lock lock(mutex_);
      if (auto it = map_.find(key); it != map_.end()) return it->second;
    }
    Value value = compute();
    std::unique_lock lock(mutex_);
    auto [it, inserted] = map_.emplace(key, std::move(value));
    return it->second;
  }

  std::size_t size() const {
    std::shared_lock lock(mutex_);
    return map_.size();
  }

 private:
  mutable std::shared_mutex mutex_;
  std::unordered_map<Key, Value, Hash> map_;
};

/// Hash for fixed-size integer arrays used as memo keys.
struct IntArrayHash {
  template <class Array>
  std::size_t operator()(const Array& a) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (int v : a) {
      h ^= static_cast<std::size_t>(static_cast<unsigned>(v));
      h *= 1099511628211ull;
    }
    return h;
  }
};

}  // namespace hsh4
