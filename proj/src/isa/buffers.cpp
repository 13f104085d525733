#include <algorithm>

#include "i2e/isa.hpp"

namespace i2e::isa {

StoreEntry StoreBuffer::deq() {
  if (entries_.empty()) throw ContractViolation("deq on empty store buffer");
  StoreEntry e = entries_.front();
  entries_.erase(entries_.begin());
  return e;
}

bool StoreBuffer::exist(Address a) const {
  return std::any_of(entries_.begin(), entries_.end(),
                     [a](const StoreEntry& e) { return e.addr == a; });
}

bool StoreBuffer::has(Tag t) const {
  return t != kNoTag &&
         std::any_of(entries_.begin(), entries_.end(),
                     [t](const StoreEntry& e) { return e.tag == t; });
}

std::optional<StoreEntry> StoreBuffer::youngest(Address a) const {
  for (auto it = entries_.rbegin(); it != entries_.rend(); ++it)
    if (it->addr == a) return *it;
  return std::nullopt;
}

std::optional<StoreEntry> StoreBuffer::oldest(Address a) const {
  for (const StoreEntry& e : entries_)
    if (e.addr == a) return e;
  return std::nullopt;
}

StoreEntry StoreBuffer::rm_oldest(Address a) {
  auto it = std::find_if(entries_.begin(), entries_.end(),
                         [a](const StoreEntry& e) { return e.addr == a; });
  if (it == entries_.end())
    throw ContractViolation("rmOldest on address absent from store buffer");
  StoreEntry e = *it;
  entries_.erase(it);
  return e;
}

std::optional<Address> StoreBuffer::any_addr() const {
  if (entries_.empty()) return std::nullopt;
  return entries_.front().addr;
}

std::vector<Address> StoreBuffer::addresses() const {
  std::vector<Address> out;
  for (const StoreEntry& e : entries_)
    if (std::find(out.begin(), out.end(), e.addr) == out.end())
      out.push_back(e.addr);
  return out;
}

std::vector<StoreEntry> StoreBuffer::entries_for(Address a) const {
  std::vector<StoreEntry> out;
  for (const StoreEntry& e : entries_)
    if (e.addr == a) out.push_back(e);
  return out;
}

void InvalidationBuffer::insert(Address a, Value v, Timestamp ts_lo,
                                Timestamp ts_hi, Timestamp inserted) {
  entries_.push_back(IbEntry{a, v, ts_lo, ts_hi, inserted});
}

void InvalidationBuffer::rm_addr(Address a) {
  std::erase_if(entries_, [a](const IbEntry& e) { return e.addr == a; });
}

bool InvalidationBuffer::exist(Address a) const {
  return std::any_of(entries_.begin(), entries_.end(),
                     [a](const IbEntry& e) { return e.addr == a; });
}

std::size_t InvalidationBuffer::count(Address a) const {
  return static_cast<std::size_t>(
      std::count_if(entries_.begin(), entries_.end(),
                    [a](const IbEntry& e) { return e.addr == a; }));
}

Value InvalidationBuffer::get_random(Address a, std::size_t choice) {
  std::size_t seen = 0;
  std::vector<IbEntry> kept;
  std::optional<Value> picked;
  for (const IbEntry& e : entries_) {
    if (e.addr != a) {
      kept.push_back(e);
      continue;
    }
    if (seen == choice) picked = e.value;
    if (seen >= choice) kept.push_back(e);
    ++seen;
  }
  if (!picked) throw ContractViolation("getRandom choice out of range");
  entries_ = std::move(kept);
  return *picked;
}

std::optional<IbEntry> InvalidationBuffer::random(Address a,
                                                  std::size_t choice) const {
  std::size_t seen = 0;
  for (const IbEntry& e : entries_) {
    if (e.addr != a) continue;
    if (seen++ == choice) return e;
  }
  return std::nullopt;
}

void InvalidationBuffer::rm_older(Address a, Timestamp ts) {
  std::erase_if(entries_, [a, ts](const IbEntry& e) {
    return e.addr == a && e.inserted < ts;
  });
}

std::vector<IbEntry> InvalidationBuffer::entries_for(Address a) const {
  std::vector<IbEntry> out;
  for (const IbEntry& e : entries_)
    if (e.addr == a) out.push_back(e);
  return out;
}

}  // namespace i2e::isa
