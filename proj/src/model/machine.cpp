#include <algorithm>
#include <map>
#include <set>
#include <string>

#include "i2e/machine.hpp"

namespace i2e {

namespace {
const MemCell kDefaultCell{};
}

const MemCell& MachineState::cell(Address a) const {
  auto it = memory.find(a);
  return it == memory.end() ? kDefaultCell : it->second;
}

void MachineState::write(Address a, const MemCell& c) {
  if (c == kDefaultCell) {
    memory.erase(a);
  } else {
    memory[a] = c;
  }
}

MachineState MemoryModel::apply(const MachineState& s,
                                const RuleInstance& r) const {
  auto rules = enabled(s);
  if (std::find(rules.begin(), rules.end(), r) == rules.end())
    throw ContractViolation("rule " + describe(r) + " is not enabled");
  return fire(s, r);
}

std::optional<std::string> MemoryModel::check_transition(
    const MachineState&, const RuleInstance&, const MachineState&) const {
  return std::nullopt;
}

std::string MemoryModel::proc_name(ProcId p) const {
  if (p < program_.threads.size()) return program_.threads[p].name;
  return "P?" + std::to_string(p);
}

std::string MemoryModel::describe(const RuleInstance& r) const {
  std::string out = rule_name(r) + " " + proc_name(r.proc);
  auto loc = [&](Address a) {
    if (auto n = program_.addresses.name_of(a)) return std::string(*n);
    return std::to_string(a);
  };
  switch (r.kind) {
    case RuleKind::DeqSb:
      out += " [" + loc(r.addr) + "]";
      break;
    case RuleKind::Copy:
      out += " -> " + proc_name(r.target) + " [" + loc(r.addr) + "]";
      break;
    case RuleKind::LdIb:
      out += " (ib entry " + std::to_string(r.choice) + ")";
      break;
    default:
      break;
  }
  if (r.tag != kNoTag) out += " tag " + std::to_string(r.tag);
  return out;
}

MachineState MemoryModel::initial_state() const {
  MachineState s;
  for (const litmus::ThreadCode& code : program_.threads)
    s.procs.push_back(isa::initial_proc(code));
  for (const auto& [addr, v] : program_.init) s.write(addr, MemCell{v});
  return s;
}

bool MemoryModel::all_halted(const MachineState& s) const {
  for (ProcId p = 0; p < s.procs.size(); ++p)
    if (decode(s, p).kind != isa::DecodedKind::Halt) return false;
  return true;
}

bool MemoryModel::is_terminal(const MachineState& s) const {
  return std::all_of(s.procs.begin(), s.procs.end(),
                     [](const isa::ProcState& p) { return p.sb.empty(); }) &&
         all_halted(s);
}

isa::DecodedInstr MemoryModel::decode(const MachineState& s, ProcId p) const {
  return isa::decode(program_.threads[p], s.procs[p]);
}

isa::TimedDecode MemoryModel::decode_ts(const MachineState& s, ProcId p) const {
  return isa::decode_ts(program_.threads[p], s.procs[p]);
}

namespace model {

namespace {

using Graph = std::map<Tag, std::set<Tag>>;

void add_chain(Graph& g, const std::vector<Tag>& chain) {
  for (Tag t : chain) g[t];
  for (std::size_t i = 1; i < chain.size(); ++i)
    g[chain[i - 1]].insert(chain[i]);
}

std::vector<Tag> chain_for(const isa::StoreBuffer& sb, Address a) {
  std::vector<Tag> chain;
  for (const isa::StoreEntry& e : sb.entries())
    if (e.addr == a) chain.push_back(e.tag);
  return chain;
}

bool acyclic(const Graph& g) {
  std::map<Tag, std::size_t> indegree;
  for (const auto& [t, _] : g) indegree[t];
  for (const auto& [_, succ] : g)
    for (Tag u : succ) ++indegree[u];
  std::vector<Tag> ready;
  for (const auto& [t, d] : indegree)
    if (d == 0) ready.push_back(t);
  std::size_t visited = 0;
  while (!ready.empty()) {
    Tag t = ready.back();
    ready.pop_back();
    ++visited;
    auto it = g.find(t);
    if (it == g.end()) continue;
    for (Tag u : it->second)
      if (--indegree[u] == 0) ready.push_back(u);
  }
  return visited == indegree.size();
}

}  // namespace

bool coherence_acyclic(const MachineState& s, Address a) {
  Graph g;
  for (const isa::ProcState& p : s.procs) {
    std::vector<Tag> chain = chain_for(p.sb, a);
    // A tag twice in one buffer is a self-loop.
    std::set<Tag> unique(chain.begin(), chain.end());
    if (unique.size() != chain.size()) return false;
    add_chain(g, chain);
  }
  return acyclic(g);
}

bool no_cycle(const MachineState& s, Address a, Tag t, ProcId j) {
  bool live = std::any_of(s.procs.begin(), s.procs.end(),
                          [t](const isa::ProcState& p) { return p.sb.has(t); });
  if (!live) throw ContractViolation("noCycle on a tag held by no buffer");
  if (s.procs.at(j).sb.has(t)) return false;
  Graph g;
  for (ProcId k = 0; k < s.procs.size(); ++k) {
    std::vector<Tag> chain = chain_for(s.procs[k].sb, a);
    if (k == j) chain.push_back(t);
    add_chain(g, chain);
  }
  return acyclic(g);
}

Timestamp load_value_timestamp(Timestamp ats, Timestamp rts, Timestamp vts) {
  return std::max({ats, rts, vts});
}

}  // namespace model

}  // namespace i2e
