#pragma once

// Command-line front end. dispatch() is separate from main() so tests can run
// commands in-process against string streams.
//
// Exit codes: 0 success, 1 operational failure (no match, failed check),
// 2 usage or input error.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "collision_code/collision_code.hpp"
#include "collision_code/report_json.hpp"

namespace collision_code::cli {

constexpr int exit_ok = 0;
constexpr int exit_failure = 1;
constexpr int exit_usage = 2;

class usage_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Streams {
  std::istream& in;
  std::ostream& out;
  std::ostream& err;
};

namespace detail {

inline std::string slurp(const std::string& path, std::istream& in) {
  if (path == "-") return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  std::ifstream file(path, std::ios::binary);
  if (!file) throw usage_error("cannot open '" + path + "'");
  return {std::istreambuf_iterator<char>(file), std::istreambuf_iterator<char>()};
}

inline Codebook load_codebook(const std::string& path, std::istream& in) { return parse_codebook(slurp(path, in)); }

inline std::string trim_line_end(std::string s) {
  while (!s.empty() && (s.back() == '\n' || s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) s.pop_back();
  return s;
}

inline void emit(std::ostream& out, const nlohmann::json& j) { out << j.dump() << '\n'; }

}  // namespace detail

inline int dispatch(const std::vector<std::string>& args, Streams io) {
  CLI::App app{"Collision-code codec: build codebooks, simulate BPSK collisions, decode and verify."};
  app.name("collision_code");
  app.require_subcommand(1);

  // gen
  unsigned gen_n = 0;
  std::string gen_out;
  auto* gen = app.add_subcommand("gen", "Write the codebook for N stations");
  gen->add_option("--n", gen_n, "Number of stations")->required();
  gen->add_option("--out", gen_out, "Output path (default: stdout)");

  // encode
  std::string codebook_path;
  unsigned encode_station = 0;
  auto* encode = app.add_subcommand("encode", "Print the codeword of one station");
  encode->add_option("--codebook", codebook_path, "Codebook file, '-' for stdin")->required();
  encode->add_option("--station", encode_station, "Station id (1-based)")->required();

  // superpose
  std::string stations_text;
  double sigma = 0.0;
  std::uint64_t seed = 0;
  auto* superpose_cmd = app.add_subcommand("superpose", "Chip sums of a set of simultaneous transmitters");
  superpose_cmd->add_option("--codebook", codebook_path, "Codebook file, '-' for stdin")->required();
  superpose_cmd->add_option("--stations", stations_text, "Comma-separated station ids")->required();
  auto* superpose_sigma = superpose_cmd->add_option("--sigma", sigma, "Gaussian noise standard deviation");
  superpose_cmd->add_option("--seed", seed, "Noise seed");

  // decode
  std::string vector_text, vector_file;
  bool nearest = false;
  std::size_t max_dist = 0;
  auto* decode = app.add_subcommand("decode", "Identify the transmitting stations from a received vector");
  decode->add_option("--codebook", codebook_path, "Codebook file, '-' for stdin")->required();
  auto* vec_opt = decode->add_option("--vector", vector_text, "Received bits as a 0/1 string");
  auto* vec_file_opt = decode->add_option("--vector-file", vector_file, "File holding the 0/1 string");
  vec_opt->excludes(vec_file_opt);
  auto* nearest_flag = decode->add_flag("--nearest", nearest, "Nearest-match decoding");
  decode->add_option("--max-dist", max_dist, "Maximum Hamming distance for --nearest")->needs(nearest_flag);

  // verify
  unsigned verify_n = 0;
  std::string check;
  unsigned workers = 1;
  std::uint64_t trials = 1000;
  auto* verify = app.add_subcommand("verify", "Exhaustively check the uniqueness properties");
  verify->add_option("--n", verify_n, "Number of stations")->required();
  verify->add_option("--check", check, "uniqueness|lemmas|claims|zero|all")
      ->required()
      ->check(CLI::IsMember({"uniqueness", "lemmas", "claims", "zero", "all"}));
  verify->add_option("--workers", workers, "Parallel workers")->check(CLI::Range(1U, 256U));
  verify->add_option("--trials", trials, "Random pairs per claim check")->check(CLI::PositiveNumber);
  verify->add_option("--seed", seed, "Seed for the claim check");

  // simulate
  SessionConfig session;
  auto* simulate = app.add_subcommand("simulate", "Run a multicast ACK session");
  simulate->add_option("--n", session.n_stations, "Number of stations")->required();
  simulate->add_option("--loss", session.loss_prob, "Per-receiver broadcast loss probability")->required();
  simulate->add_option("--sigma", session.noise_sigma, "Gaussian noise on the ACK superposition");
  simulate->add_option("--rounds", session.max_rounds, "Maximum rounds")->required();
  simulate->add_option("--seed", session.seed, "Session seed")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, io.out, io.err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, io.out, io.err);
    return exit_usage;
  }

  try {
    if (*gen) {
      const Codebook cb = build_codebook(gen_n);
      if (gen_out.empty()) {
        write_codebook(io.out, cb);
      } else {
        std::ofstream file(gen_out, std::ios::binary);
        if (!file) throw usage_error("cannot write '" + gen_out + "'");
        write_codebook(file, cb);
      }
      return exit_ok;
    }

    if (*encode) {
      const Codebook cb = detail::load_codebook(codebook_path, io.in);
      detail::emit(io.out, {{"station", encode_station}, {"codeword", codeword_for(cb, encode_station).to_string()}});
      return exit_ok;
    }

    if (*superpose_cmd) {
      const Codebook cb = detail::load_codebook(codebook_path, io.in);
      const StationSet subset = StationSet::parse(stations_text);
      if (superpose_sigma->count() > 0) {
        const NoisyProfile p = superpose_noisy(cb, subset, sigma, seed);
        detail::emit(io.out, {{"stations", ids_json(subset)},
                              {"sigma", sigma},
                              {"seed", seed},
                              {"samples", p.samples},
                              {"received", threshold_noisy(p).to_string()}});
      } else {
        const AmplitudeProfile p = superpose(cb, subset);
        detail::emit(io.out,
                     {{"stations", ids_json(subset)}, {"sums", p.sums}, {"received", demodulate(p).to_string()}});
      }
      return exit_ok;
    }

    if (*decode) {
      if (vec_opt->count() == 0 && vec_file_opt->count() == 0) throw usage_error("decode needs --vector or --vector-file");
      const Codebook cb = detail::load_codebook(codebook_path, io.in);
      const std::string bits =
          vec_opt->count() > 0 ? vector_text : detail::trim_line_end(detail::slurp(vector_file, io.in));
      const Bitstream received = Bitstream::from_string(bits);
      const Decoder decoder(cb);
      const DecodeOutcome outcome = nearest ? decoder.decode_nearest(received, max_dist) : decoder.decode_exact(received);
      detail::emit(io.out, to_json(outcome, nearest));
      return outcome.kind == DecodeKind::no_match ? exit_failure : exit_ok;
    }

    if (*verify) {
      const Codebook cb = build_codebook(verify_n);
      const VerifierLimits limits;
      bool ok = true;
      const auto run = [&](const std::string& which) -> nlohmann::json {
        if (which == "uniqueness") {
          const auto r = verify_uniqueness(cb, limits, workers);
          ok = ok && r.passed();
          return to_json(r);
        }
        if (which == "lemmas") {
          const auto r = sweep_lemmas(cb, limits, workers);
          ok = ok && r.passed();
          return to_json(r);
        }
        if (which == "claims") {
          const auto r = check_additivity(cb, trials, seed);
          ok = ok && r.passed();
          return to_json(r);
        }
        const auto r = verify_no_zero_vector(cb, limits, workers);
        ok = ok && r.passed();
        return to_json(r);
      };
      nlohmann::json result;
      if (check == "all") {
        for (const char* which : {"uniqueness", "lemmas", "claims", "zero"}) {
          if (std::string(which) == "lemmas" && cb.n_rows() > limits.lemma_max_rows) {
            result[which] = {{"skipped", "n_rows exceeds lemma budget of " + std::to_string(limits.lemma_max_rows)}};
            continue;
          }
          result[which] = run(which);
        }
      } else {
        result = run(check);
      }
      detail::emit(io.out, result);
      return ok ? exit_ok : exit_failure;
    }

    if (*simulate) {
      session.validate();
      detail::emit(io.out, to_json(run_session(session)));
      return exit_ok;
    }
  } catch (const std::invalid_argument& e) {
    io.err << "error: " << e.what() << '\n';
    return exit_usage;
  } catch (const std::out_of_range& e) {
    io.err << "error: " << e.what() << '\n';
    return exit_usage;
  } catch (const std::length_error& e) {
    io.err << "error: " << e.what() << '\n';
    return exit_usage;
  } catch (const std::exception& e) {
    io.err << "error: " << e.what() << '\n';
    return exit_failure;
  }
  return exit_usage;
}

}  // namespace collision_code::cli
