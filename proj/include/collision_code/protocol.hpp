#pragma once

// Multicast ACK aggregation over the collision code.
//
// Each round the basestation addresses every still-unconfirmed station. Each
// addressed station misses the broadcast independently with probability
// loss_prob; the ones that hear it reply at once with their codewords, the
// replies collide, and the basestation decodes the superposition to learn who
// acknowledged. Unconfirmed stations are re-addressed next round.
//
// Seeding: round k (1-based) uses derive_seed(seed, 0, k). Inside a round the
// loss draws come from SeededRng(round_seed) in increasing station order and
// the ACK noise from SeededRng(derive_seed(round_seed, 1, 0)).

#include <cmath>
#include <cstdint>
#include <vector>

#include "bitstream.hpp"
#include "channel.hpp"
#include "codebook.hpp"
#include "decoder.hpp"
#include "errors.hpp"
#include "rng.hpp"

namespace collision_code {

struct SessionConfig {
  unsigned n_stations = 1;
  double loss_prob = 0.0;
  unsigned max_rounds = 1;
  std::uint64_t seed = 0;
  double noise_sigma = 0.0;

  void validate() const {
    if (n_stations < 1) throw precondition_error("n_stations must be at least 1");
    if (!(loss_prob >= 0.0 && loss_prob <= 1.0)) throw precondition_error("loss_prob must lie in [0, 1]");
    if (max_rounds < 1) throw precondition_error("max_rounds must be at least 1");
    if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma))
      throw precondition_error("noise_sigma must be finite and non-negative");
  }
};

struct RoundResult {
  unsigned round_index = 0;
  StationSet intended;
  StationSet actually_received;
  DecodeOutcome decoded_ack;
  StationSet newly_confirmed;

  friend bool operator==(const RoundResult&, const RoundResult&) = default;
};

struct SessionStats {
  SessionConfig config;
  unsigned rounds_used = 0;
  bool completed = false;
  std::vector<RoundResult> per_round;
  unsigned undecodable_rounds = 0;
};

constexpr std::uint64_t round_seed(std::uint64_t session_seed, unsigned round_index) noexcept {
  return derive_seed(session_seed, 0, round_index);
}

/// One broadcast/ACK exchange. Confirmation is limited to addressed stations,
/// so a noisy mis-decode cannot confirm a station twice.
inline RoundResult run_round(const Decoder& decoder, StationSet intended, const SessionConfig& cfg,
                             std::uint64_t seed, unsigned round_index = 1) {
  if (intended.empty()) throw precondition_error("run_round: no intended receivers");
  const Codebook& cb = decoder.codebook();
  detail::check_subset(intended, cb.n_stations(), "station");

  RoundResult out;
  out.round_index = round_index;
  out.intended = intended;
  SeededRng rng(seed);
  for (unsigned id : intended.ids())
    if (!rng.bernoulli(cfg.loss_prob)) out.actually_received.insert(id);

  const Bitstream ack = cfg.noise_sigma > 0.0
                            ? threshold_noisy(superpose_noisy(cb, out.actually_received, cfg.noise_sigma,
                                                              derive_seed(seed, 1, 0)))
                            : received_vector(cb, out.actually_received);
  out.decoded_ack = decoder.decode_exact(ack);
  if (out.decoded_ack.kind == DecodeKind::identified) out.newly_confirmed = out.decoded_ack.subset & intended;
  return out;
}

inline RoundResult run_round(const Codebook& cb, StationSet intended, const SessionConfig& cfg, std::uint64_t seed) {
  const Decoder decoder(cb);
  return run_round(decoder, intended, cfg, seed);
}

inline SessionStats run_session(const Codebook& cb, const SessionConfig& cfg) {
  cfg.validate();
  if (cb.n_stations() != cfg.n_stations) throw precondition_error("codebook does not match n_stations");
  const Decoder decoder(cb);
  SessionStats stats;
  stats.config = cfg;
  StationSet pending = StationSet::all(cfg.n_stations);
  for (unsigned k = 1; k <= cfg.max_rounds && !pending.empty(); ++k) {
    RoundResult r = run_round(decoder, pending, cfg, round_seed(cfg.seed, k), k);
    if (r.decoded_ack.kind == DecodeKind::no_match) ++stats.undecodable_rounds;
    pending = pending - r.newly_confirmed;
    stats.per_round.push_back(std::move(r));
  }
  stats.rounds_used = static_cast<unsigned>(stats.per_round.size());
  stats.completed = pending.empty();
  return stats;
}

inline SessionStats run_session(const SessionConfig& cfg) {
  cfg.validate();
  return run_session(build_codebook(cfg.n_stations), cfg);
}

}  // namespace collision_code
