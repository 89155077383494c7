// Copyright 2026 The JA-GNN Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "jagnn/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <stdexcept>
#include <tuple>

#include "jagnn/rng.hpp"

namespace jagnn {

void ScenarioConfig::validate() const {
  auto fail = [](const std::string& what) { throw std::invalid_argument("scenario: " + what); };
  if (n_anchors < 2) fail("n_anchors must be at least 2");
  if (!(fraud_rate > 0.0 && fraud_rate < 1.0)) fail("fraud_rate must lie in (0, 1)");
  if (n_relations == 0 || n_relations > kMaxRelations) fail("n_relations must lie in [1, 32]");
  if (feature_dim < 2) fail("feature_dim must be at least 2 (last one is the chargeback flag)");
  if (family_min == 0 || family_max < family_min) fail("need 1 <= family_min <= family_max");
  if (ring_min == 0 || ring_max < ring_min) fail("need 1 <= ring_min <= ring_max");
  if (family_max > n_anchors) fail("family size exceeds the anchor count");
  if (!(camouflage_fraction >= 0.0 && camouflage_fraction <= 1.0)) {
    fail("camouflage_fraction must lie in [0, 1]");
  }
  if (!(blend >= 0.0 && blend <= 1.0)) fail("blend must lie in [0, 1]");
  if (marker_fanout == 0) fail("marker_fanout must be positive");
  if (marker_hops != 2 && marker_hops != 4) fail("marker_hops must be 2 or 4");
  if (camouflage_fraction > 0.0 && n_relations < 2) fail("camouflage needs at least 2 relations");
  if (share_prob.empty()) fail("share_prob must not be empty");
  for (double p : share_prob) {
    if (!(p >= 0.0 && p <= 1.0)) fail("share_prob entries must lie in [0, 1]");
  }
  for (double p : {cross_link_rate, hypernode_rate, legit_chargeback_rate}) {
    if (!(p >= 0.0 && p <= 1.0)) fail("rates must lie in [0, 1]");
  }
  if (hypernode_min_degree == 0 || hypernode_max_degree < hypernode_min_degree) {
    fail("need 1 <= hypernode_min_degree <= hypernode_max_degree");
  }
  if (hypernode_rate > 0.0 && hypernode_max_degree > n_anchors) {
    fail("hypernode degree exceeds the anchor count");
  }
  if (!(center_spread >= 0.0 && member_noise >= 0.0 && neighbor_noise >= 0.0)) {
    fail("spreads must be non-negative");
  }
  if (time_span <= 0) fail("time_span must be positive");
}

nlohmann::json ScenarioConfig::to_json() const {
  return {{"n_anchors", n_anchors},
          {"fraud_rate", fraud_rate},
          {"n_relations", n_relations},
          {"feature_dim", feature_dim},
          {"family_min", family_min},
          {"family_max", family_max},
          {"ring_min", ring_min},
          {"ring_max", ring_max},
          {"camouflage_fraction", camouflage_fraction},
          {"blend", blend},
          {"marker_fanout", marker_fanout},
          {"marker_hops", marker_hops},
          {"share_prob", share_prob},
          {"cross_link_rate", cross_link_rate},
          {"hypernode_rate", hypernode_rate},
          {"hypernode_min_degree", hypernode_min_degree},
          {"hypernode_max_degree", hypernode_max_degree},
          {"legit_chargeback_rate", legit_chargeback_rate},
          {"center_spread", center_spread},
          {"member_noise", member_noise},
          {"fraud_shift", fraud_shift},
          {"neighbor_noise", neighbor_noise},
          {"time_span", time_span},
          {"seed", seed}};
}

ScenarioConfig ScenarioConfig::from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw std::invalid_argument("scenario: expected a JSON object");
  ScenarioConfig c;
  nlohmann::json merged = c.to_json();
  for (const auto& [key, value] : doc.items()) {
    if (!merged.contains(key)) throw std::invalid_argument("scenario: unknown key '" + key + "'");
    merged[key] = value;
  }
  try {
    merged.at("n_anchors").get_to(c.n_anchors);
    merged.at("fraud_rate").get_to(c.fraud_rate);
    merged.at("n_relations").get_to(c.n_relations);
    merged.at("feature_dim").get_to(c.feature_dim);
    merged.at("family_min").get_to(c.family_min);
    merged.at("family_max").get_to(c.family_max);
    merged.at("ring_min").get_to(c.ring_min);
    merged.at("ring_max").get_to(c.ring_max);
    merged.at("camouflage_fraction").get_to(c.camouflage_fraction);
    merged.at("blend").get_to(c.blend);
    merged.at("marker_fanout").get_to(c.marker_fanout);
    merged.at("marker_hops").get_to(c.marker_hops);
    merged.at("share_prob").get_to(c.share_prob);
    merged.at("cross_link_rate").get_to(c.cross_link_rate);
    merged.at("hypernode_rate").get_to(c.hypernode_rate);
    merged.at("hypernode_min_degree").get_to(c.hypernode_min_degree);
    merged.at("hypernode_max_degree").get_to(c.hypernode_max_degree);
    merged.at("legit_chargeback_rate").get_to(c.legit_chargeback_rate);
    merged.at("center_spread").get_to(c.center_spread);
    merged.at("member_noise").get_to(c.member_noise);
    merged.at("fraud_shift").get_to(c.fraud_shift);
    merged.at("neighbor_noise").get_to(c.neighbor_noise);
    merged.at("time_span").get_to(c.time_span);
    merged.at("seed").get_to(c.seed);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("scenario: ") + e.what());
  }
  c.validate();
  return c;
}

nlohmann::json GroundTruth::to_json() const {
  nlohmann::json anchors = nlohmann::json::array();
  for (std::size_t v = 0; v < label.size(); ++v) {
    if (label[v] < 0) continue;
    anchors.push_back({{"node_id", v},
                       {"label", label[v]},
                       {"camouflaged", static_cast<bool>(camouflaged[v])},
                       {"marker", static_cast<bool>(marker[v])}});
  }
  nlohmann::json links = nlohmann::json::array();
  for (const auto& [c, m] : marker_links) links.push_back({{"camouflaged", c}, {"marker", m}});
  return {{"anchors", anchors}, {"marker_links", links}};
}

nlohmann::json CamouflageFixture::to_json() const {
  return {{"new_node", new_node},
          {"verified_fraudster", verified},
          {"family", family},
          {"family_center", family_center},
          {"expected", "score(new_node) under variant full > score under variant sample"}};
}

namespace {

double gaussian(Rng& rng) {
  // Box-Muller on our own uniforms keeps output identical across standard libraries.
  const double u1 = 1.0 - uniform01(rng);
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

bool bernoulli(Rng& rng, double p) { return uniform01(rng) < p; }

std::size_t uniform_between(Rng& rng, std::size_t lo, std::size_t hi) {
  return lo + static_cast<std::size_t>(uniform_index(rng, hi - lo + 1));
}

template <typename T>
void shuffle(std::vector<T>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[uniform_index(rng, i)]);
}

enum class Kind { kLegit, kRing, kMarker, kCamouflaged };

// Unfinalized scenario; anchors first, attribute nodes after.
struct Draft {
  const ScenarioConfig& cfg;
  Rng rng;
  std::size_t dim;  // informative dimensions, excluding the chargeback flag
  std::vector<double> shift;

  std::vector<std::vector<double>> anchor_features;
  std::vector<Kind> kind;
  std::vector<int> label;  // -1: unlabeled
  std::vector<std::int64_t> time;
  std::size_t num_attr = 0;
  std::set<std::tuple<std::size_t, std::size_t, RelationId>> edge_set;
  std::vector<std::tuple<std::size_t, std::size_t, RelationId>> edges;  // (anchor, attr, r)
  std::vector<std::pair<NodeId, NodeId>> marker_links;

  // Family/ring centers and their shared attribute node per relation.
  struct Group {
    std::vector<double> center;
    std::vector<std::size_t> shared;
    std::vector<std::size_t> members;
  };
  std::vector<Group> families;
  std::vector<Group> rings;

  Draft(const ScenarioConfig& c, std::uint64_t salt)
      : cfg(c), rng(make_rng(c.seed, salt)), dim(c.feature_dim - 1), shift(dim, 0.0) {
    // Fraud rings sit shifted along the first half of the informative dimensions.
    for (std::size_t j = 0; j < (dim + 1) / 2; ++j) shift[j] = c.fraud_shift;
  }

  double share(std::size_t r) const {
    return r < cfg.share_prob.size() ? cfg.share_prob[r] : cfg.share_prob.back();
  }
  std::size_t new_attr() { return num_attr++; }
  void link(std::size_t anchor, std::size_t attr, std::size_t r) {
    const auto key = std::make_tuple(anchor, attr, static_cast<RelationId>(r));
    if (edge_set.insert(key).second) edges.push_back(key);
  }
  std::vector<double> center(bool fraud) {
    std::vector<double> c(dim);
    for (std::size_t j = 0; j < dim; ++j) {
      c[j] = cfg.center_spread * gaussian(rng) + (fraud ? shift[j] : 0.0);
    }
    return c;
  }
  std::vector<double> around(const std::vector<double>& c, double chargeback) {
    std::vector<double> f(dim + 1);
    for (std::size_t j = 0; j < dim; ++j) f[j] = c[j] + cfg.member_noise * gaussian(rng);
    f[dim] = chargeback;
    return f;
  }
  // Fraud point pulled toward a host family center.
  std::vector<double> blended(const std::vector<double>& host, double chargeback) {
    const std::vector<double> own = center(true);
    std::vector<double> mix(dim);
    for (std::size_t j = 0; j < dim; ++j) mix[j] = cfg.blend * host[j] + (1.0 - cfg.blend) * own[j];
    return around(mix, chargeback);
  }
  std::size_t add_anchor(Kind k, std::vector<double> f, int y, std::int64_t t) {
    anchor_features.push_back(std::move(f));
    kind.push_back(k);
    label.push_back(y);
    time.push_back(t);
    return kind.size() - 1;
  }
  Group make_group(bool fraud) {
    Group g;
    g.center = center(fraud);
    for (std::size_t r = 0; r < cfg.n_relations; ++r) g.shared.push_back(new_attr());
    return g;
  }
  void join(Group& g, std::size_t a) {
    g.members.push_back(a);
    for (std::size_t r = 0; r < cfg.n_relations; ++r) {
      link(a, bernoulli(rng, share(r)) ? g.shared[r] : new_attr(), r);
    }
  }
  std::int64_t any_time() {
    return static_cast<std::int64_t>(uniform_index(rng, static_cast<std::uint64_t>(cfg.time_span)));
  }
};

std::vector<std::size_t> group_sizes(std::size_t total, std::size_t lo, std::size_t hi, Rng& rng) {
  std::vector<std::size_t> sizes;
  std::size_t left = total;
  while (left > 0) {
    std::size_t s = std::min(left, uniform_between(rng, lo, hi));
    if (left - s > 0 && left - s < lo) s = left;  // no undersized tail group
    sizes.push_back(s);
    left -= s;
  }
  return sizes;
}

void populate(Draft& d) {
  const ScenarioConfig& cfg = d.cfg;
  Rng& rng = d.rng;
  std::size_t n_fraud = 0;
  for (std::size_t i = 0; i < cfg.n_anchors; ++i) n_fraud += bernoulli(rng, cfg.fraud_rate);
  n_fraud = std::min(n_fraud, cfg.n_anchors - 1);
  const auto n_camo = static_cast<std::size_t>(std::llround(cfg.camouflage_fraction * n_fraud));
  const std::size_t n_markers = n_camo == 0 ? 0 : (n_camo + cfg.marker_fanout) / (cfg.marker_fanout + 1);
  const std::size_t n_new = n_camo - n_markers;
  const std::size_t n_ring = n_fraud - n_camo;
  const std::size_t n_legit = cfg.n_anchors - n_fraud;

  std::vector<Kind> kinds;
  kinds.insert(kinds.end(), n_legit, Kind::kLegit);
  kinds.insert(kinds.end(), n_ring, Kind::kRing);
  kinds.insert(kinds.end(), n_markers, Kind::kMarker);
  kinds.insert(kinds.end(), n_new, Kind::kCamouflaged);
  shuffle(kinds, rng);
  std::vector<std::size_t> legit, ring, markers, camo;
  for (std::size_t i = 0; i < kinds.size(); ++i) {
    switch (kinds[i]) {
      case Kind::kLegit: legit.push_back(i); break;
      case Kind::kRing: ring.push_back(i); break;
      case Kind::kMarker: markers.push_back(i); break;
      case Kind::kCamouflaged: camo.push_back(i); break;
    }
  }
  d.anchor_features.resize(cfg.n_anchors);
  d.kind = kinds;
  d.label.assign(cfg.n_anchors, 0);
  d.time.assign(cfg.n_anchors, 0);
  for (std::size_t i = 0; i < cfg.n_anchors; ++i) d.time[i] = d.any_time();

  std::size_t next = 0;
  for (std::size_t s : group_sizes(legit.size(), cfg.family_min, cfg.family_max, rng)) {
    Draft::Group g = d.make_group(false);
    for (std::size_t k = 0; k < s; ++k) {
      const std::size_t a = legit[next++];
      d.anchor_features[a] = d.around(g.center, bernoulli(rng, cfg.legit_chargeback_rate) ? 1.0 : 0.0);
      d.join(g, a);
    }
    d.families.push_back(std::move(g));
  }
  next = 0;
  for (std::size_t s : group_sizes(ring.size(), cfg.ring_min, cfg.ring_max, rng)) {
    Draft::Group g = d.make_group(true);
    for (std::size_t k = 0; k < s; ++k) {
      const std::size_t a = ring[next++];
      d.anchor_features[a] = d.around(g.center, 0.0);
      d.label[a] = 1;
      d.join(g, a);
    }
    d.rings.push_back(std::move(g));
  }

  const std::size_t R = cfg.n_relations;
  const std::size_t pay = R - 1;  // relation of the payment-style node tying fraudster to marker
  std::vector<std::size_t> marker_host, marker_card;
  for (std::size_t m : markers) {
    const std::size_t host = uniform_index(rng, d.families.size());
    Draft::Group& g = d.families[host];
    d.anchor_features[m] = d.blended(g.center, 1.0);
    d.label[m] = 1;
    // Verified fraudsters are older cases.
    d.time[m] = static_cast<std::int64_t>(uniform_index(rng, static_cast<std::uint64_t>(cfg.time_span / 2 + 1)));
    for (std::size_t r = 0; r + 1 < R; ++r) {
      d.link(m, bernoulli(rng, d.share(r)) || r == 0 ? g.shared[r] : d.new_attr(), r);
    }
    const std::size_t card = d.new_attr();
    d.link(m, card, pay);
    marker_host.push_back(host);
    marker_card.push_back(card);
  }
  for (std::size_t i = 0; i < camo.size(); ++i) {
    const std::size_t a = camo[i];
    const std::size_t mi = i % markers.size();
    std::size_t host = uniform_index(rng, d.families.size());
    if (d.families.size() > 1 && host == marker_host[mi]) host = (host + 1) % d.families.size();
    Draft::Group& g = d.families[host];
    d.anchor_features[a] = d.blended(g.center, 0.0);
    d.label[a] = 1;
    for (std::size_t r = 0; r + 1 < R; ++r) {
      d.link(a, bernoulli(rng, d.share(r)) || r == 0 ? g.shared[r] : d.new_attr(), r);
    }
    if (cfg.marker_hops == 2) {
      d.link(a, marker_card[mi], pay);
    } else {
      // Through the marker's family: card shared with the family, family shares address with the marker.
      d.link(a, d.families[marker_host[mi]].shared[pay], pay);
    }
    d.marker_links.emplace_back(static_cast<NodeId>(a), static_cast<NodeId>(markers[mi]));
  }

  // Background noise: stray links into other groups and high-degree hubs.
  const std::size_t n_groups = d.families.size() + d.rings.size();
  for (std::size_t a = 0; a < cfg.n_anchors; ++a) {
    if (!bernoulli(rng, cfg.cross_link_rate)) continue;
    const std::size_t gi = uniform_index(rng, n_groups);
    const Draft::Group& g = gi < d.families.size() ? d.families[gi] : d.rings[gi - d.families.size()];
    const std::size_t r = uniform_index(rng, R);
    d.link(a, g.shared[r], r);
  }
  const auto n_hubs = static_cast<std::size_t>(std::llround(cfg.hypernode_rate * cfg.n_anchors));
  std::vector<std::size_t> pool(cfg.n_anchors);
  for (std::size_t i = 0; i < pool.size(); ++i) pool[i] = i;
  for (std::size_t h = 0; h < n_hubs; ++h) {
    const std::size_t hub = d.new_attr();
    const std::size_t r = uniform_index(rng, R);
    const std::size_t deg = uniform_between(rng, cfg.hypernode_min_degree, cfg.hypernode_max_degree);
    for (std::size_t k = 0; k < deg; ++k) {
      std::swap(pool[k], pool[k + uniform_index(rng, pool.size() - k)]);
      d.link(pool[k], hub, r);
    }
  }
}

Scenario finish(Draft& d) {
  const ScenarioConfig& cfg = d.cfg;
  const std::size_t n_anchor = d.anchor_features.size();
  const std::size_t dfeat = cfg.feature_dim;
  std::vector<std::vector<double>> attr_sum(d.num_attr, std::vector<double>(dfeat, 0.0));
  std::vector<std::size_t> attr_count(d.num_attr, 0);
  for (const auto& [a, n, r] : d.edges) {
    for (std::size_t j = 0; j < dfeat; ++j) attr_sum[n][j] += d.anchor_features[a][j];
    ++attr_count[n];
  }

  Scenario s;
  s.graph = TransactionGraph(dfeat, cfg.n_relations);
  for (std::size_t a = 0; a < n_anchor; ++a) s.graph.add_node(NodeRole::kAnchor, d.anchor_features[a]);
  std::vector<double> f(dfeat);
  for (std::size_t n = 0; n < d.num_attr; ++n) {
    for (std::size_t j = 0; j < dfeat; ++j) {
      const double mean = attr_count[n] ? attr_sum[n][j] / static_cast<double>(attr_count[n]) : 0.0;
      f[j] = mean + cfg.neighbor_noise * gaussian(d.rng);
    }
    s.graph.add_node(NodeRole::kNeighbor, f);
  }
  for (const auto& [a, n, r] : d.edges) {
    s.graph.add_edge(static_cast<NodeId>(a), static_cast<NodeId>(n_anchor + n), r);
  }
  s.truth.label.assign(n_anchor + d.num_attr, -1);
  s.truth.camouflaged.assign(n_anchor + d.num_attr, false);
  s.truth.marker.assign(n_anchor + d.num_attr, false);
  for (std::size_t a = 0; a < n_anchor; ++a) {
    if (d.label[a] >= 0) {
      s.graph.set_label(static_cast<NodeId>(a), d.label[a] ? 100.0 : 0.0, d.time[a]);
    } else {
      s.graph.set_timestamp(static_cast<NodeId>(a), d.time[a]);
    }
    s.truth.label[a] = d.label[a];
    s.truth.camouflaged[a] = d.kind[a] == Kind::kCamouflaged || d.kind[a] == Kind::kMarker;
    s.truth.marker[a] = d.kind[a] == Kind::kMarker;
  }
  s.truth.marker_links = d.marker_links;
  s.graph.finalize();
  return s;
}

}  // namespace

Scenario generate(const ScenarioConfig& cfg) {
  cfg.validate();
  Draft d(cfg, 0x5C3A);
  populate(d);
  return finish(d);
}

CamouflageCase camouflage_case(const ScenarioConfig& cfg) {
  cfg.validate();
  if (cfg.n_relations < 2) throw std::invalid_argument("scenario: the fixture needs 2 relations");
  Draft d(cfg, 0x5C3A);
  populate(d);
  CamouflageCase out;
  const std::size_t R = cfg.n_relations;
  const std::size_t pay = R - 1;

  Draft::Group family = d.make_group(false);
  const std::size_t card = d.new_attr();
  for (std::size_t k = 0; k < 5; ++k) {
    const std::size_t a = d.add_anchor(Kind::kLegit, d.around(family.center, 0.0), 0, d.any_time());
    family.members.push_back(a);
    for (std::size_t r = 0; r + 1 < R; ++r) d.link(a, family.shared[r], r);
    // One member lends the card that ties in the verified fraudster.
    d.link(a, k == 4 ? card : d.new_attr(), pay);
    out.fixture.family.push_back(static_cast<NodeId>(a));
  }
  // The verified fraudster lives in another family and carries the chargeback flag.
  const std::size_t host = uniform_index(d.rng, d.families.size());
  const Draft::Group& other = d.families[host];
  const std::size_t verified =
      d.add_anchor(Kind::kMarker, d.blended(other.center, 1.0), 1, cfg.time_span / 20);
  for (std::size_t r = 0; r + 1 < R; ++r) d.link(verified, other.shared[r], r);
  d.link(verified, card, pay);

  // New node: within a fraction of a standard deviation of the family center.
  std::vector<double> f(d.dim + 1, 0.0);
  for (std::size_t j = 0; j < d.dim; ++j) {
    const double offset = (1.0 - cfg.blend) * d.shift[j] + 0.1 * cfg.member_noise * gaussian(d.rng);
    f[j] = family.center[j] + std::clamp(offset, -0.9 * cfg.member_noise, 0.9 * cfg.member_noise);
  }
  const std::size_t fresh = d.add_anchor(Kind::kCamouflaged, f, -1, cfg.time_span);
  for (std::size_t r = 0; r + 1 < R; ++r) d.link(fresh, family.shared[r], r);
  d.link(fresh, card, pay);
  d.marker_links.emplace_back(static_cast<NodeId>(fresh), static_cast<NodeId>(verified));

  out.scenario = finish(d);
  out.fixture.new_node = static_cast<NodeId>(fresh);
  out.fixture.verified = static_cast<NodeId>(verified);
  out.fixture.family_center = family.center;
  return out;
}

void write_scenario(const Scenario& s, const std::filesystem::path& dir) {
  save_graph_dir(s.graph, dir);
  std::ofstream out(dir / "ground_truth.json");
  if (!out) throw std::runtime_error("cannot write " + (dir / "ground_truth.json").string());
  out << s.truth.to_json().dump(1) << '\n';
}

void write_camouflage_case(const CamouflageCase& c, const std::filesystem::path& dir) {
  write_scenario(c.scenario, dir);
  std::ofstream out(dir / "fixture.json");
  if (!out) throw std::runtime_error("cannot write " + (dir / "fixture.json").string());
  out << c.fixture.to_json().dump(1) << '\n';
}

}  // namespace jagnn
