#include "ltldstar/wts.hpp"

#include <algorithm>

#include <json.hpp>

#include "ltldstar/errors.hpp"
#include "ltldstar/weight.hpp"

namespace ltldstar {

Wts::Wts(SharedUniverse ap, std::vector<std::uint64_t> labels, std::vector<std::size_t> initial,
         std::vector<std::string> names)
    : ap_(std::move(ap)), labels_(std::move(labels)), initial_(std::move(initial)),
      names_(std::move(names)) {
  if (!ap_) throw UsageError("WTS without proposition universe");
  const auto mask = universe_mask(ap_->size());
  for (auto l : labels_) {
    if (l & ~mask) throw UsageError("WTS label outside universe");
  }
  for (auto s : initial_) {
    if (s >= labels_.size()) throw UsageError("WTS initial state out of range");
  }
  if (names_.empty()) {
    names_.reserve(labels_.size());
    for (std::size_t i = 0; i < labels_.size(); ++i) names_.push_back(std::to_string(i));
  } else if (names_.size() != labels_.size()) {
    throw UsageError("WTS names/labels size mismatch");
  }
}

std::optional<std::size_t> Wts::state_named(std::string_view name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - names_.begin());
}

std::size_t Wts::num_live_edges() const {
  return static_cast<std::size_t>(std::count_if(
      edges_.begin(), edges_.end(), [](const WtsEdge& e) { return e.weight != Weight::kInf; }));
}

std::size_t Wts::add_edge(std::size_t from, std::size_t to, std::int64_t weight) {
  if (from >= num_states() || to >= num_states()) throw UsageError("WTS edge endpoint out of range");
  if (weight < 1) throw UsageError("WTS edge weights must be positive");
  if (index_.contains(key(from, to))) throw UsageError("duplicate WTS edge");
  index_.emplace(key(from, to), edges_.size());
  edges_.push_back({from, to, weight});
  return edges_.size() - 1;
}

std::optional<std::size_t> Wts::find_edge(std::size_t from, std::size_t to) const {
  auto it = index_.find(key(from, to));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

void Wts::set_weight(std::size_t e, std::int64_t weight) {
  if (weight < 1) throw UsageError("WTS edge weights must be positive");
  edges_.at(e).weight = weight;
}

Wts load_wts_json(std::string_view text, SharedUniverse ap) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what(), 1, static_cast<int>(e.byte));
  }
  auto id_string = [](const json& v) -> std::string {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    throw UsageError("waypoint ids must be strings or integers");
  };
  std::vector<std::string> names;
  std::vector<std::uint64_t> labels;
  for (const auto& st : doc.at("states")) {
    names.push_back(id_string(st.at("id")));
    std::vector<std::string> props;
    if (st.contains("label")) props = st.at("label").get<std::vector<std::string>>();
    labels.push_back(Label::of(ap, props).bits());
  }
  auto lookup = [&](const json& v) {
    const auto n = id_string(v);
    auto it = std::find(names.begin(), names.end(), n);
    if (it == names.end()) throw UsageError("unknown waypoint '" + n + "'");
    return static_cast<std::size_t>(it - names.begin());
  };
  std::vector<std::size_t> init;
  for (const auto& v : doc.at("init")) init.push_back(lookup(v));
  Wts wts(std::move(ap), std::move(labels), std::move(init), names);
  for (const auto& e : doc.at("edges")) {
    wts.add_edge(lookup(e.at("from")), lookup(e.at("to")), e.at("weight").get<std::int64_t>());
  }
  return wts;
}

}  // namespace ltldstar
