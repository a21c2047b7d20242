#pragma once

#include <cstdint>
#include <list>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "hhq/types.hpp"

namespace hhq {

//! Space Saving: at most `capacity` (id, count, payload) entries. A known id
//! just increments; an unknown id takes a free slot at count 1, or — when the
//! table is full — seizes the entry with the minimal count, which becomes
//! old_min + 1. Ties on the minimal count evict the least-recently-touched
//! entry. Counts never underestimate an id's true arrivals while monitored.
//!
//! Entries live in count-ordered buckets (the stream-summary layout), so a
//! touch is O(1) expected: hash lookup plus moving the entry to the adjacent
//! bucket.
//!
//! The payload is caller-defined (a quantile sketch plus bookkeeping). On
//! eviction the old payload is handed back untouched — resetting it for the
//! new id is the caller's job, so this table stays payload-agnostic.
template <typename Payload>
class SpaceSavingTable {
 public:
  struct Entry {
    ItemId id = 0;
    std::uint64_t count = 0;
    Payload payload;
  };

  enum class TouchKind { kExisting, kFresh, kEvicted };

  struct TouchResult {
    TouchKind kind;
    Entry* entry;
    ItemId evicted_id;  // meaningful only when kind == kEvicted
  };

  explicit SpaceSavingTable(std::size_t capacity) : capacity_(capacity) {
    if (capacity_ == 0) throw std::invalid_argument("space-saving capacity must be positive");
    slots_.reserve(capacity_);
    index_.reserve(capacity_ * 2);
  }

  //! Register one arrival of `id`. `make_payload` is invoked only when a
  //! fresh slot is allocated (it must return a Payload).
  template <typename MakePayload>
  TouchResult touch(ItemId id, MakePayload&& make_payload) {
    ++total_touches_;
    if (auto it = index_.find(id); it != index_.end()) {
      const std::size_t slot = it->second;
      bump(slot);
      return {TouchKind::kExisting, &slots_[slot].entry, 0};
    }
    if (slots_.size() < capacity_) {
      const std::size_t slot = slots_.size();
      slots_.push_back(Slot{Entry{id, 1, make_payload()}, {}, {}});
      attach(slot, 1);
      index_.emplace(id, slot);
      return {TouchKind::kFresh, &slots_[slot].entry, 0};
    }
    // Reassign the least-recently-touched minimal entry.
    const std::size_t slot = buckets_.front().members.front();
    Entry& e = slots_[slot].entry;
    const ItemId evicted = e.id;
    index_.erase(evicted);
    index_.emplace(id, slot);
    e.id = id;
    bump(slot);
    return {TouchKind::kEvicted, &e, evicted};
  }

  //! Live entry for `id`, or nullptr.
  const Entry* get(ItemId id) const {
    const auto it = index_.find(id);
    return it == index_.end() ? nullptr : &slots_[it->second].entry;
  }
  Entry* get(ItemId id) {
    const auto it = index_.find(id);
    return it == index_.end() ? nullptr : &slots_[it->second].entry;
  }

  //! Minimal count when full; 0 while free slots remain.
  std::uint64_t min_count() const {
    return slots_.size() < capacity_ ? 0 : buckets_.front().count;
  }

  std::uint64_t total_touches() const { return total_touches_; }
  std::size_t size() const { return slots_.size(); }
  std::size_t capacity() const { return capacity_; }

  //! Sum over entries of (1 metadata record + payload_size(payload)).
  template <typename PayloadSize>
  std::uint64_t footprint(PayloadSize&& payload_size) const {
    std::uint64_t total = 0;
    for (const Slot& s : slots_) total += 1 + payload_size(s.entry.payload);
    return total;
  }

  template <typename Fn>
  void for_each(Fn&& fn) const {
    for (const Slot& s : slots_) fn(s.entry);
  }

 private:
  struct Bucket {
    std::uint64_t count;
    std::list<std::size_t> members;  // front = joined earliest = evict first
  };
  using BucketIt = typename std::list<Bucket>::iterator;
  using MemberIt = std::list<std::size_t>::iterator;

  struct Slot {
    Entry entry;
    BucketIt bucket;
    MemberIt member;
  };

  //! Move a slot from its bucket to the count+1 bucket (creating it when
  //! missing) and record the new count.
  void bump(std::size_t slot) {
    Slot& s = slots_[slot];
    const std::uint64_t next_count = s.entry.count + 1;
    BucketIt next = std::next(s.bucket);
    s.bucket->members.erase(s.member);
    if (next == buckets_.end() || next->count != next_count)
      next = buckets_.insert(next, Bucket{next_count, {}});
    if (s.bucket->members.empty()) buckets_.erase(s.bucket);
    s.entry.count = next_count;
    s.bucket = next;
    s.member = next->members.insert(next->members.end(), slot);
  }

  //! Place a brand-new slot into the bucket for `count`.
  void attach(std::size_t slot, std::uint64_t count) {
    BucketIt at = buckets_.begin();
    if (at == buckets_.end() || at->count != count)
      at = buckets_.insert(at, Bucket{count, {}});
    Slot& s = slots_[slot];
    s.entry.count = count;
    s.bucket = at;
    s.member = at->members.insert(at->members.end(), slot);
  }

  std::size_t capacity_;
  std::uint64_t total_touches_ = 0;
  std::vector<Slot> slots_;  // stable: reserved once, never reallocated
  std::list<Bucket> buckets_;  // ascending by count
  std::unordered_map<ItemId, std::size_t> index_;
};

}  // namespace hhq
