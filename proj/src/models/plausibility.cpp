#include <random>

#include "cdl/error.hpp"
#include "cdl/models.hpp"

namespace cdl {

namespace {

void check_worlds(std::size_t n) {
  if (n == 0) throw ModelError("model has no worlds");
  if (n > kMaxWorlds) throw ModelError("model has more than " + std::to_string(kMaxWorlds) + " worlds");
}

void check_valuation(const std::map<std::string, WorldSet>& valuation, std::size_t n) {
  for (const auto& [letter, ext] : valuation) {
    if (!ext.subset_of(WorldSet::first(n))) throw ModelError("valuation of '" + letter + "' mentions unknown worlds");
  }
}

}  // namespace

PlausibilityModel PlausibilityModel::from_relation(std::vector<std::string> names,
                                                   const std::vector<std::pair<World, World>>& pairs,
                                                   std::map<std::string, WorldSet> valuation) {
  const std::size_t n = names.size();
  check_worlds(n);
  check_valuation(valuation, n);
  PlausibilityModel m;
  m.names_ = std::move(names);
  m.valuation_ = std::move(valuation);
  m.down_.assign(n, WorldSet());
  for (auto [x, y] : pairs) {
    if (x >= n || y >= n) throw ModelError("relation mentions an unknown world");
    m.down_[y].insert(x);
  }
  for (World w = 0; w < n; ++w) {
    if (!m.down_[w].contains(w)) throw ModelError("relation is not reflexive: missing " + m.names_[w] + "<=" + m.names_[w]);
  }
  // x <= y and y <= z must give x <= z, i.e. down(y) is a subset of down(z).
  for (World z = 0; z < n; ++z) {
    for (World y : m.down_[z]) {
      if (!m.down_[y].subset_of(m.down_[z])) {
        World x = *(m.down_[y] - m.down_[z]).begin();
        throw ModelError("relation is not transitive: " + m.names_[x] + "<=" + m.names_[y] + " and " + m.names_[y] +
                         "<=" + m.names_[z] + " but not " + m.names_[x] + "<=" + m.names_[z]);
      }
    }
  }
  m.finish();
  return m;
}

PlausibilityModel PlausibilityModel::from_ranks(std::vector<std::string> names, const std::vector<int>& component,
                                                const std::vector<int>& rank,
                                                std::map<std::string, WorldSet> valuation) {
  const std::size_t n = names.size();
  check_worlds(n);
  check_valuation(valuation, n);
  if (component.size() != n || rank.size() != n) throw ModelError("rank data does not match the world count");
  PlausibilityModel m;
  m.names_ = std::move(names);
  m.valuation_ = std::move(valuation);
  m.down_.assign(n, WorldSet());
  for (World y = 0; y < n; ++y) {
    for (World x = 0; x < n; ++x) {
      if (component[x] == component[y] && rank[x] <= rank[y]) m.down_[y].insert(x);
    }
  }
  m.finish();
  return m;
}

void PlausibilityModel::finish() {
  const std::size_t n = size();
  strict_down_.assign(n, WorldSet());
  for (World y = 0; y < n; ++y) {
    for (World x : down_[y]) {
      if (!down_[x].contains(y)) strict_down_[y].insert(x);
    }
  }
  // Symmetric adjacency, then reachability.
  std::vector<WorldSet> adj(n);
  for (World y = 0; y < n; ++y) {
    for (World x : down_[y]) {
      adj[y].insert(x);
      adj[x].insert(y);
    }
  }
  component_.assign(n, WorldSet());
  for (World w = 0; w < n; ++w) {
    if (!component_[w].empty()) continue;
    WorldSet seen = WorldSet::single(w);
    WorldSet frontier = seen;
    while (!frontier.empty()) {
      WorldSet next;
      for (World x : frontier) next |= adj[x];
      frontier = next - seen;
      seen |= next;
    }
    for (World x : seen) component_[x] = seen;
  }
}

World PlausibilityModel::index_of(std::string_view name) const {
  for (World w = 0; w < size(); ++w) {
    if (names_[w] == name) return w;
  }
  throw ModelError("unknown world '" + std::string(name) + "'");
}

std::set<std::string> PlausibilityModel::letters() const {
  std::set<std::string> out;
  for (const auto& [letter, ext] : valuation_) out.insert(letter);
  return out;
}

WorldSet PlausibilityModel::letter_extension(const std::string& letter) const {
  auto it = valuation_.find(letter);
  return it == valuation_.end() ? WorldSet() : it->second;
}

std::set<std::string> PlausibilityModel::true_letters(World w) const {
  std::set<std::string> out;
  for (const auto& [letter, ext] : valuation_) {
    if (ext.contains(w)) out.insert(letter);
  }
  return out;
}

std::vector<WorldSet> PlausibilityModel::components() const {
  std::vector<WorldSet> out;
  WorldSet covered;
  for (World w = 0; w < size(); ++w) {
    if (covered.contains(w)) continue;
    out.push_back(component_[w]);
    covered |= component_[w];
  }
  return out;
}

WorldSet PlausibilityModel::min_worlds(WorldSet s) const {
  WorldSet out;
  for (World x : s) {
    if (!strict_down_[x].intersects(s)) out.insert(x);
  }
  return out;
}

PlausibilityModel PlausibilityModel::restrict(WorldSet keep) const {
  if (keep.empty()) throw ModelError("cannot restrict to an empty set of worlds");
  if (!keep.subset_of(all())) throw ModelError("restriction mentions unknown worlds");
  std::vector<World> old_of;
  for (World w : keep) old_of.push_back(w);
  auto remap = [&](WorldSet s) {
    WorldSet out;
    for (World i = 0; i < old_of.size(); ++i) {
      if (s.contains(old_of[i])) out.insert(i);
    }
    return out;
  };
  PlausibilityModel m;
  for (World w : old_of) {
    m.names_.push_back(names_[w]);
    m.down_.push_back(remap(down_[w]));
  }
  for (const auto& [letter, ext] : valuation_) m.valuation_[letter] = remap(ext);
  m.finish();
  return m;
}

// ---------------------------------------------------------------------------

namespace {

bool is_smooth_set(const PlausibilityModel& m, WorldSet s) {
  WorldSet mins = m.min_worlds(s);
  for (World x : s - mins) {
    if (!m.strictly_below(x).intersects(mins)) return false;
  }
  return true;
}

// Exhaustive over all subsets for small models, otherwise a fixed sample.
template <typename Check>
bool for_all_subsets(const PlausibilityModel& m, Check check) {
  const std::size_t n = m.size();
  if (n <= 16) {
    for (std::uint64_t bits = 1; bits < (std::uint64_t{1} << n); ++bits) {
      if (!check(WorldSet(bits))) return false;
    }
    return true;
  }
  std::mt19937_64 rng(0xC0FFEE);
  for (int i = 0; i < 4096; ++i) {
    WorldSet s(rng() & m.all().bits());
    if (!s.empty() && !check(s)) return false;
  }
  return true;
}

}  // namespace

ModelClass classify_model(const PlausibilityModel& m) {
  ModelClass c;
  c.finite = true;
  c.well_founded = for_all_subsets(m, [&](WorldSet s) { return !m.min_worlds(s).empty(); });
  c.smooth = for_all_subsets(m, [&](WorldSet s) { return is_smooth_set(m, s); });
  c.total = true;
  c.locally_total = true;
  for (World x = 0; x < m.size(); ++x) {
    for (World y = 0; y < m.size(); ++y) {
      if (m.le(x, y) || m.le(y, x)) continue;
      c.total = false;
      if (m.component(x).contains(y)) c.locally_total = false;
    }
  }
  c.connected = m.component(0) == m.all();
  c.well_ordered = c.well_founded && c.total;
  c.locally_well_ordered = c.well_founded && c.locally_total;
  return c;
}

WorldSet connected_component(const PlausibilityModel& m, World w) {
  if (w >= m.size()) throw ModelError("unknown world index " + std::to_string(w));
  return m.component(w);
}

WorldSet min_worlds(const PlausibilityModel& m, WorldSet s) { return m.min_worlds(s); }

PlausibilityModel restrict_to_component(const PlausibilityModel& m, World w) {
  return m.restrict(connected_component(m, w));
}

}  // namespace cdl
