#include "mbf/vset.hpp"

#include <algorithm>

namespace mbf {

VSet::VSet(std::initializer_list<ValueEntry> entries, std::size_t capacity)
    : capacity_(capacity) {
  for (const auto& e : entries) insert(e);
}

void VSet::insert(const ValueEntry& entry) {
  auto pos = std::lower_bound(
      entries_.begin(), entries_.end(), entry.sn,
      [](const ValueEntry& e, SeqNo sn) { return e.sn < sn; });
  if (pos != entries_.end() && pos->sn == entry.sn) return;
  entries_.insert(pos, entry);
  if (entries_.size() > capacity_) entries_.erase(entries_.begin());
}

void VSet::insert_all(std::span<const ValueEntry> entries) {
  for (const auto& e : entries) insert(e);
}

bool VSet::contains(const ValueEntry& entry) const {
  return std::find(entries_.begin(), entries_.end(), entry) != entries_.end();
}

void SenderTally::add_all(int sender, std::span<const ValueEntry> entries) {
  for (const auto& e : entries) add(sender, e);
}

void SenderTally::erase_sender(int sender) {
  for (auto it = by_entry_.begin(); it != by_entry_.end();) {
    it->second.erase(sender);
    it = it->second.empty() ? by_entry_.erase(it) : std::next(it);
  }
}

std::size_t SenderTally::occurrences(const ValueEntry& entry) const {
  auto it = by_entry_.find(entry);
  return it == by_entry_.end() ? 0 : it->second.size();
}

std::vector<ValueEntry> SenderTally::with_quorum(std::size_t quorum) const {
  std::vector<ValueEntry> out;
  for (const auto& [entry, senders] : by_entry_) {
    if (senders.size() >= quorum) out.push_back(entry);
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const ValueEntry& a, const ValueEntry& b) { return a.sn < b.sn; });
  return out;
}

std::vector<ValueEntry> select_pairs_max_sn(const SenderTally& tally,
                                            std::size_t quorum,
                                            std::size_t limit) {
  auto qualifying = tally.with_quorum(quorum);
  if (qualifying.size() > limit) {
    qualifying.erase(qualifying.begin(),
                     qualifying.end() - static_cast<std::ptrdiff_t>(limit));
  }
  return qualifying;
}

std::optional<std::vector<ValueEntry>> select_three_pairs_max_sn(
    const SenderTally& tally, std::size_t quorum) {
  auto picked = select_pairs_max_sn(tally, quorum, 3);
  if (picked.empty()) return std::nullopt;
  return picked;
}

std::optional<ValueEntry> select_value(const SenderTally& replies,
                                       std::size_t quorum) {
  auto qualifying = replies.with_quorum(quorum);
  if (qualifying.empty()) return std::nullopt;
  // with_quorum sorts ascending by sn; among equal sn the larger value wins so
  // the choice does not depend on map iteration details.
  auto best = qualifying.back();
  for (const auto& e : qualifying) {
    if (e.sn == best.sn && e.value > best.value) best = e;
  }
  return best;
}

std::vector<ValueEntry> con_cut(std::span<const ValueEntry> v,
                                std::span<const ValueEntry> v_safe,
                                std::span<const ValueEntry> w) {
  std::vector<ValueEntry> merged;
  auto append = [&merged](std::span<const ValueEntry> part) {
    for (const auto& e : part) {
      if (std::find(merged.begin(), merged.end(), e) == merged.end()) {
        merged.push_back(e);
      }
    }
  };
  append(v_safe);
  append(v);
  append(w);
  std::stable_sort(merged.begin(), merged.end(),
                   [](const ValueEntry& a, const ValueEntry& b) { return a.sn > b.sn; });
  if (merged.size() > 3) merged.resize(3);
  std::reverse(merged.begin(), merged.end());
  return merged;
}

}  // namespace mbf
