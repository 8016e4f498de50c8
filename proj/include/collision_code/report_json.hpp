#pragma once

// JSON views of reports and outcomes. Field layouts are documented in
// docs/json_schemas.md.

#include <json.hpp>

#include "channel.hpp"
#include "decoder.hpp"
#include "protocol.hpp"
#include "verifier.hpp"

namespace collision_code {

inline nlohmann::json ids_json(StationSet s) { return nlohmann::json(s.ids()); }

inline nlohmann::json to_json(const UniquenessReport& r) {
  nlohmann::json collisions = nlohmann::json::array();
  for (const Collision& c : r.collisions)
    collisions.push_back({{"first", ids_json(c.first)}, {"second", ids_json(c.second)}, {"vector", c.vector.to_string()}});
  return {{"n", r.n},
          {"subsets_checked", r.subsets_checked},
          {"distinct_vectors", r.distinct_vectors},
          {"collisions", std::move(collisions)},
          {"elapsed_ms", r.elapsed.count()}};
}

inline nlohmann::json to_json(const ZeroVectorReport& r) {
  return {{"n", r.n},
          {"subsets_checked", r.subsets_checked},
          {"passed", r.passed()},
          {"offending", r.offending ? ids_json(*r.offending) : nlohmann::json(nullptr)}};
}

inline nlohmann::json to_json(const LemmaSweepReport& r) {
  nlohmann::json failures = nlohmann::json::array();
  for (StationSet s : r.failures) failures.push_back(ids_json(s));
  return {{"n", r.n},
          {"subsets_checked", r.subsets_checked},
          {"odd_witnessed", r.odd_witnessed},
          {"even_witnessed", r.even_witnessed},
          {"passed", r.passed()},
          {"failures", std::move(failures)}};
}

inline nlohmann::json to_json(const AdditivityReport& r) {
  nlohmann::json ce = nullptr;
  if (r.counterexample)
    ce = {{"claim", r.counterexample->claim},
          {"g1", ids_json(r.counterexample->g1)},
          {"g2", ids_json(r.counterexample->g2)},
          {"column", r.counterexample->column}};
  return {{"n", r.n}, {"trials", r.trials}, {"seed", r.seed}, {"passed", r.passed()}, {"counterexample", std::move(ce)}};
}

/// {"kind": ..., "stations": [...] when identified, "distance": d when requested and known}
inline nlohmann::json to_json(const DecodeOutcome& o, bool with_distance = false) {
  nlohmann::json j = {{"kind", std::string(to_string(o.kind))}};
  if (o.kind == DecodeKind::identified) j["stations"] = ids_json(o.subset);
  if (with_distance && o.distance) j["distance"] = *o.distance;
  return j;
}

inline nlohmann::json to_json(const SessionStats& s) {
  nlohmann::json rounds = nlohmann::json::array();
  for (const RoundResult& r : s.per_round)
    rounds.push_back({{"round", r.round_index},
                      {"intended", ids_json(r.intended)},
                      {"received", ids_json(r.actually_received)},
                      {"decoded", std::string(to_string(r.decoded_ack.kind))},
                      {"confirmed", ids_json(r.newly_confirmed)}});
  return {{"n", s.config.n_stations},
          {"loss_prob", s.config.loss_prob},
          {"noise_sigma", s.config.noise_sigma},
          {"seed", s.config.seed},
          {"rounds_used", s.rounds_used},
          {"completed", s.completed},
          {"undecodable_rounds", s.undecodable_rounds},
          {"per_round", std::move(rounds)}};
}

}  // namespace collision_code
