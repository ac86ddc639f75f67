#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "mbf/types.hpp"

namespace mbf {

// Bounded set of value entries ordered by ascending sequence number. Holds at
// most `capacity` entries; inserting past capacity evicts the lowest sn.
class VSet {
 public:
  static constexpr std::size_t kDefaultCapacity = 3;

  explicit VSet(std::size_t capacity = kDefaultCapacity) : capacity_(capacity) {}
  VSet(std::initializer_list<ValueEntry> entries,
       std::size_t capacity = kDefaultCapacity);

  // Entries with an sn already present are ignored.
  void insert(const ValueEntry& entry);
  void insert_all(std::span<const ValueEntry> entries);
  void clear() { entries_.clear(); }

  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  std::size_t capacity() const { return capacity_; }
  bool contains(const ValueEntry& entry) const;
  const std::vector<ValueEntry>& entries() const { return entries_; }

  bool operator==(const VSet& other) const { return entries_ == other.entries_; }

 private:
  std::size_t capacity_;
  std::vector<ValueEntry> entries_;
};

// Multiset of <sender, pair> observations where each sender contributes a
// given pair at most once.
class SenderTally {
 public:
  void add(int sender, const ValueEntry& entry) { by_entry_[entry].insert(sender); }
  void add_all(int sender, std::span<const ValueEntry> entries);
  // Drops every observation made by `sender`.
  void erase_sender(int sender);
  void clear() { by_entry_.clear(); }
  bool empty() const { return by_entry_.empty(); }

  std::size_t occurrences(const ValueEntry& entry) const;
  // Pairs reported by at least `quorum` distinct senders, ascending by sn.
  std::vector<ValueEntry> with_quorum(std::size_t quorum) const;

  const std::map<ValueEntry, std::set<int>>& raw() const { return by_entry_; }

 private:
  std::map<ValueEntry, std::set<int>> by_entry_;
};

// Up to `limit` pairs with at least `quorum` distinct senders; the highest
// sequence numbers win. Empty when nothing qualifies.
std::vector<ValueEntry> select_pairs_max_sn(const SenderTally& tally,
                                            std::size_t quorum,
                                            std::size_t limit = 3);

// CUM variant: nullopt (not an empty success) when nothing qualifies.
std::optional<std::vector<ValueEntry>> select_three_pairs_max_sn(
    const SenderTally& tally, std::size_t quorum);

// The pair with the highest sn among those reported by at least `quorum`
// distinct servers, or nullopt (no quorum).
std::optional<ValueEntry> select_value(const SenderTally& replies,
                                       std::size_t quorum);

// V_safe ∘ V ∘ W without duplicates, keeping the three newest by sn.
std::vector<ValueEntry> con_cut(std::span<const ValueEntry> v,
                                std::span<const ValueEntry> v_safe,
                                std::span<const ValueEntry> w);

}  // namespace mbf
