#include "bpxor/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include "bpxor/arraycodes.hpp"
#include "bpxor/descriptor.hpp"
#include "bpxor/ecgraph.hpp"
#include "bpxor/flat.hpp"
#include "bpxor/lt.hpp"
#include "bpxor/shard.hpp"
#include "bpxor/simulate.hpp"

namespace bpxor::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// A failure the command reports as its result (exit 1) with a JSON body.
struct CommandFailure {
  json body;
  std::string message;
};

Bytes read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file(const std::string& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("short write to " + path);
}

void write_text(const std::string& path, const std::string& text) {
  write_file(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

storage::CodeDescriptor load_descriptor(const std::string& path) {
  const Bytes raw = read_file(path);
  json j;
  try {
    j = json::parse(raw.begin(), raw.end());
  } catch (const json::parse_error& e) {
    throw FormatError(path + ": " + e.what());
  }
  return storage::descriptor_from_json(j);
}

std::vector<storage::ShardFile> load_shards(const std::vector<std::string>& paths) {
  std::vector<storage::ShardFile> shards;
  for (const auto& p : paths) {
    try {
      shards.push_back(storage::parse_shard(read_file(p)));
    } catch (const FormatError& e) {
      throw FormatError(p + ": " + e.what());
    }
  }
  return shards;
}

json one_based(const std::vector<std::size_t>& v) {
  json a = json::array();
  for (auto x : v) a.push_back(x + 1);
  return a;
}

// Emits the descriptor on stdout, or writes it and reports where.
void emit_descriptor(const storage::CodeDescriptor& d, const std::string& out_path, std::ostream& out) {
  const json j = storage::to_json(d);
  if (out_path.empty()) {
    out << j.dump(2) << '\n';
    return;
  }
  write_text(out_path, j.dump(2) + "\n");
  out << json{{"written", out_path}, {"digest", storage::to_hex(storage::code_digest(d))}}.dump() << '\n';
}

storage::CodeDescriptor certified(storage::CodeDescriptor d, const EnumerationOptions& opts) {
  if (auto failure = storage::certify(d, opts)) {
    throw CommandFailure{{{"verified", false}, {"t", d.t}, {"counterexample", one_based(*failure)}},
                         "constructed code failed certification"};
  }
  return d;
}

graph::EdgeColoredGraph graph_from_kind(const std::string& kind) {
  if (kind == "g41") return graph::g41();
  if (kind == "g42") return graph::g42();
  auto number = [&](const std::string& s) -> std::size_t {
    std::size_t pos = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(s, &pos);
    } catch (const std::exception&) {
      pos = std::string::npos;
    }
    if (pos != s.size()) throw CLI::ValidationError("--kind", "bad number '" + s + "' in " + kind);
    return static_cast<std::size_t>(v);
  };
  if (kind.rfind("3cc:", 0) == 0) return graph::construct_3cc(number(kind.substr(4)));
  if (kind.rfind("p1f:", 0) == 0) {
    const std::string rest = kind.substr(4);
    const auto comma = rest.find(',');
    const std::size_t p = number(rest.substr(0, comma));
    const std::size_t c = comma == std::string::npos ? p : number(rest.substr(comma + 1));
    return graph::p1f_graph(p, c);
  }
  throw CLI::ValidationError("--kind", "expected g41, g42, 3cc:K or p1f:P,C");
}

struct Settings {
  unsigned jobs = default_jobs();
  std::uint64_t max_patterns = 0;

  EnumerationOptions enumeration() const { return {jobs == 0 ? 1U : jobs, max_patterns}; }
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Deterministic XOR erasure codes: construct, verify, encode, decode, repair, simulate.", "bpxor"};
  app.require_subcommand(1, 1);
  app.fallthrough();

  Settings settings;
  app.add_option("--jobs", settings.jobs, "worker threads for verification and search (default: BPXOR_JOBS or 1)")
      ->check(CLI::PositiveNumber);
  app.add_option("--max-patterns", settings.max_patterns,
                 "raise the enumeration guard (erasure patterns, candidates or codewords)");

  // construct
  auto* construct = app.add_subcommand("construct", "build a code or graph");
  construct->require_subcommand(1, 1);

  std::size_t flat_n = 0;
  std::size_t flat_k = 0;
  std::size_t flat_d = 0;
  std::string flat_out;
  auto* c_flat = construct->add_subcommand("flat", "systematic flat code of distance 2..5");
  c_flat->add_option("--n", flat_n, "code length")->required();
  c_flat->add_option("--k", flat_k, "information symbols")->required();
  c_flat->add_option("--d", flat_d, "distance (2, 3, 4 or 5)")->required()->check(CLI::Range(2, 5));
  c_flat->add_option("--out", flat_out, "write the descriptor here");

  std::size_t array_columns = 0;
  std::size_t array_survivors = 2;
  std::string array_out;
  auto* c_array = construct->add_subcommand("array", "array code decodable from any two columns");
  c_array->add_option("--columns", array_columns, "number of columns n")->required();
  c_array->add_option("--survivors", array_survivors, "columns that must suffice (only 2 is constructible)")
      ->check(CLI::Range(2, 2));
  c_array->add_option("--out", array_out, "write the descriptor here");

  std::string graph_kind;
  std::string graph_dot;
  std::string graph_out;
  auto* c_graph = construct->add_subcommand("graph", "edge-colored graph");
  c_graph->add_option("--kind", graph_kind, "g41, g42, 3cc:K or p1f:P,C")->required();
  c_graph->add_option("--dot", graph_dot, "also write Graphviz DOT here");
  c_graph->add_option("--out", graph_out, "write the graph JSON here");

  // verify
  std::string verify_code;
  std::size_t verify_t = 0;
  bool verify_distance = false;
  std::string verify_out;
  auto* verify = app.add_subcommand("verify", "check every t-column erasure pattern");
  verify->add_option("--code", verify_code, "descriptor JSON")->required()->check(CLI::ExistingFile);
  verify->add_option("--t", verify_t, "erasures to tolerate")->required();
  verify->add_flag("--exhaustive-distance", verify_distance, "also compute the exact minimum distance (flat codes)");
  verify->add_option("--out", verify_out, "write the certified descriptor here");

  // search
  std::size_t search_n = 0;
  std::size_t search_k = 0;
  std::size_t search_t = 0;
  std::string search_class = "bp";
  auto* search = app.add_subcommand("search", "exhaustive search for a flat code tolerating t erasures");
  search->add_option("--n", search_n)->required();
  search->add_option("--k", search_k)->required();
  search->add_option("--t", search_t)->required();
  search->add_option("--class", search_class, "decoder class")->check(CLI::IsMember({"bp", "gauss"}));

  // inspect
  std::string inspect_code;
  std::vector<std::string> inspect_shards;
  auto* inspect = app.add_subcommand("inspect", "summarize a descriptor or shard headers as JSON");
  auto* inspect_code_opt =
      inspect->add_option("--code", inspect_code, "descriptor JSON")->check(CLI::ExistingFile);
  auto* inspect_shard_opt =
      inspect->add_option("--shard", inspect_shards, "shard files")->check(CLI::ExistingFile);
  inspect_code_opt->excludes(inspect_shard_opt);
  inspect->require_option(1);

  // encode / decode / repair
  std::string encode_code;
  std::string encode_in;
  std::string encode_dir;
  auto* encode = app.add_subcommand("encode", "split a file into one shard per column");
  encode->add_option("--code", encode_code, "certified descriptor JSON")->required()->check(CLI::ExistingFile);
  encode->add_option("--in", encode_in, "input file")->required()->check(CLI::ExistingFile);
  encode->add_option("--out-dir", encode_dir, "directory for J.shard files")->required();

  std::vector<std::string> decode_shards;
  std::string decode_out;
  bool decode_gauss = false;
  auto* decode = app.add_subcommand("decode", "rebuild a file from surviving shards");
  decode->add_option("--shards", decode_shards, "shard files")->required()->check(CLI::ExistingFile);
  decode->add_option("--out", decode_out, "output file")->required();
  decode->add_flag("--gauss-fallback", decode_gauss, "solve by elimination if peeling stalls");

  std::string repair_code;
  std::vector<std::string> repair_shards;
  std::size_t repair_column = 0;
  std::string repair_out;
  bool repair_gauss = false;
  auto* repair = app.add_subcommand("repair", "regenerate one shard from the survivors");
  repair->add_option("--code", repair_code, "descriptor the shards were encoded with")
      ->required()
      ->check(CLI::ExistingFile);
  repair->add_option("--shards", repair_shards, "surviving shard files")->required()->check(CLI::ExistingFile);
  repair->add_option("--column", repair_column, "column to rebuild, 1-based")->required();
  repair->add_option("--out", repair_out, "output shard file")->required();
  repair->add_flag("--gauss-fallback", repair_gauss, "solve by elimination if peeling stalls");

  // simulate
  std::string sim_code;
  std::string sim_mode;
  std::size_t sim_t = 0;
  std::size_t sim_trials = 100;
  std::uint64_t sim_seed = 1;
  std::size_t sim_len = 0;
  auto* sim = app.add_subcommand("simulate", "erase columns and decode synthetic payloads");
  sim->add_option("--code", sim_code, "descriptor JSON")->required()->check(CLI::ExistingFile);
  sim->add_option("--mode", sim_mode, "all or random")->required()->check(CLI::IsMember({"all", "random"}));
  sim->add_option("--t", sim_t, "columns erased per trial")->required();
  sim->add_option("--trials", sim_trials, "trials in random mode");
  sim->add_option("--seed", sim_seed, "seed in random mode");
  sim->add_option("--payload-len", sim_len, "synthetic payload bytes (default 8 per fragment)");

  // lt-bench
  std::size_t lt_k = 0;
  long long lt_from = 0;
  long long lt_to = 0;
  std::size_t lt_trials = 1000;
  std::uint64_t lt_seed = 1;
  double lt_c = 0.1;
  double lt_delta = 0.5;
  std::size_t lt_step = 1;
  auto* ltb = app.add_subcommand("lt-bench", "robust-soliton LT success rate versus overhead, as CSV");
  ltb->add_option("--k", lt_k)->required()->check(CLI::PositiveNumber);
  ltb->add_option("--overhead-from", lt_from, "first overhead (symbols beyond k)")->required();
  ltb->add_option("--overhead-to", lt_to, "last overhead")->required();
  ltb->add_option("--overhead-step", lt_step)->check(CLI::PositiveNumber);
  ltb->add_option("--trials", lt_trials)->required()->check(CLI::PositiveNumber);
  ltb->add_option("--seed", lt_seed)->required();
  ltb->add_option("--c", lt_c)->check(CLI::PositiveNumber);
  ltb->add_option("--delta", lt_delta)->check(CLI::Range(0.0, 1.0));

  std::vector<const char*> argv{"bpxor"};
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  const EnumerationOptions opts = settings.enumeration();

  try {
    if (*c_flat) {
      flat::FlatCode code;
      switch (flat_d) {
        case 2:
          if (flat_n != flat_k + 1) throw std::invalid_argument("distance 2 is the parity code, n must be k + 1");
          code = flat::construct_parity(flat_k);
          break;
        case 3: code = flat::construct_d3(flat_n, flat_k); break;
        case 4: code = flat::construct_d4(flat_n, flat_k); break;
        default: code = flat::construct_d5(flat_n, flat_k); break;
      }
      auto d = certified(storage::describe(std::move(code), "flat_d" + std::to_string(flat_d),
                                           {{"n", flat_n}, {"k", flat_k}, {"d", flat_d}}),
                         opts);
      emit_descriptor(d, flat_out, out);
    } else if (*c_array) {
      auto code = array::construct_two_survivor(array_columns);
      const std::size_t p = array::smallest_odd_prime_at_least(array_columns);
      auto d = certified(storage::describe(std::move(code), array_columns - 2, "two_survivor",
                                           {{"columns", array_columns}, {"p", p}}),
                         opts);
      emit_descriptor(d, array_out, out);
    } else if (*c_graph) {
      const auto g = graph_from_kind(graph_kind);
      if (!graph_dot.empty()) write_text(graph_dot, graph::to_dot(g));
      const std::string j = graph::to_json(g).dump(2) + "\n";
      if (graph_out.empty()) {
        out << j;
      } else {
        write_text(graph_out, j);
        out << json{{"written", graph_out}}.dump() << '\n';
      }
    } else if (*verify) {
      auto d = load_descriptor(verify_code);
      d.t = verify_t;
      json result{{"t", verify_t}, {"n", d.n()}, {"k", d.k()}};
      bool ok = true;
      if (auto failure = storage::certify(d, opts)) {
        ok = false;
        result["counterexample"] = one_based(*failure);
      } else {
        result["patterns"] = d.certificate->patterns;
      }
      if (verify_distance) {
        if (!d.flat) throw CLI::ValidationError("--exhaustive-distance", "only flat codes have a distance");
        flat::DistanceOptions dopts;
        if (opts.max_patterns > 0) {
          dopts.max_k = static_cast<std::size_t>(std::floor(std::log2(static_cast<double>(opts.max_patterns) + 1.0)));
        }
        const std::size_t dist = flat::verify_distance(*d.flat, dopts);
        result["distance"] = dist;
        result["claimed_distance"] = d.flat->claimed_distance;
        if (dist < d.flat->claimed_distance) ok = false;
      }
      result["verified"] = ok;
      if (ok && !verify_out.empty()) {
        write_text(verify_out, storage::to_json(d).dump(2) + "\n");
        result["written"] = verify_out;
      }
      out << result.dump() << '\n';
      if (!ok) {
        err << (result.contains("counterexample") ? "erasing columns " + result["counterexample"].dump() +
                                                        " defeats the decoder\n"
                                                  : "code distance is below its claim\n");
        return kExitFailure;
      }
      err << "verified: every " << verify_t << "-column erasure decodes\n";
    } else if (*search) {
      const auto cls = flat::decoder_class_from_string(search_class);
      const auto res = flat::exhaustive_search(search_n, search_k, search_t, cls, opts);
      if (res.exhausted()) {
        const std::string msg = "exhausted " + std::to_string(res.candidates_examined) + " candidates";
        out << json{{"found", false}, {"candidates_examined", res.candidates_examined}, {"message", msg}}.dump()
            << '\n';
        err << msg << '\n';
        return kExitFailure;
      }
      auto d = storage::describe(*res.code, "exhaustive_search",
                                 {{"n", search_n}, {"k", search_k}, {"t", search_t}, {"class", search_class}});
      d.t = search_t;
      d = certified(std::move(d), opts);
      out << json{{"found", true}, {"candidates_examined", res.candidates_examined}, {"code", storage::to_json(d)}}
                 .dump()
          << '\n';
    } else if (*inspect) {
      if (!inspect_code.empty()) {
        const auto d = load_descriptor(inspect_code);
        json profile = json::object();
        for (const auto& [degree, count] : array::degree_profile(d.layout)) profile[std::to_string(degree)] = count;
        json summary{{"type", d.flat ? "flat" : "array"},
                     {"construction", d.construction},
                     {"n", d.n()},
                     {"k", d.k()},
                     {"m", d.m()},
                     {"t", d.t},
                     {"present_cells", d.layout.present_cells()},
                     {"degree_profile", profile},
                     {"certified", d.certificate.has_value()},
                     {"digest", storage::to_hex(storage::code_digest(d))}};
        if (d.flat) {
          summary["claimed_distance"] = d.flat->claimed_distance;
          summary["decoder"] = flat::to_string(d.flat->decoder);
        }
        out << summary.dump() << '\n';
      }
      for (std::size_t i = 0; i < inspect_shards.size(); ++i) {
        const auto s = load_shards({inspect_shards[i]}).front();
        json cells = json::array();
        for (const auto& c : s.cells) {
          cells.push_back(c.none() ? json(nullptr) : one_based(c.indices()));
        }
        out << json{{"file", inspect_shards[i]},
                    {"column", s.column_index},
                    {"k", s.k},
                    {"m", s.m},
                    {"n", s.n},
                    {"fragment_len", s.fragment_len},
                    {"cells", cells},
                    {"body_bytes", s.body.size()},
                    {"digest", storage::to_hex(s.code_digest)}}
                   .dump()
            << '\n';
      }
    } else if (*encode) {
      const auto d = load_descriptor(encode_code);
      const auto shards = storage::encode_file(read_file(encode_in), d);
      fs::create_directories(encode_dir);
      json paths = json::array();
      for (const auto& s : shards) {
        const std::string path = (fs::path(encode_dir) / (std::to_string(s.column_index) + ".shard")).string();
        write_file(path, storage::serialize_shard(s));
        paths.push_back(path);
      }
      out << json{{"shards", paths},
                  {"fragment_len", shards.front().fragment_len},
                  {"digest", storage::to_hex(shards.front().code_digest)}}
                 .dump()
          << '\n';
    } else if (*decode) {
      const auto shards = load_shards(decode_shards);
      const Bytes data = storage::decode_file(shards, {decode_gauss});
      write_file(decode_out, data);
      out << json{{"written", decode_out}, {"bytes", data.size()}}.dump() << '\n';
    } else if (*repair) {
      const auto d = load_descriptor(repair_code);
      const auto shards = load_shards(repair_shards);
      const auto s = storage::repair_shard(d, repair_column, shards, {repair_gauss || d.gauss_decoding()});
      write_file(repair_out, storage::serialize_shard(s));
      out << json{{"written", repair_out}, {"column", repair_column}}.dump() << '\n';
    } else if (*sim) {
      const auto d = load_descriptor(sim_code);
      storage::ErasureMode mode = storage::AllPatterns{sim_t};
      if (sim_mode == "random") mode = storage::RandomPatterns{sim_t, sim_trials, sim_seed};
      storage::SimulateOptions sopts;
      sopts.payload_len = sim_len;
      sopts.max_patterns = opts.max_patterns;
      const auto report = storage::simulate(d, mode, sopts);
      out << storage::to_json_lines(report);
      err << report.full() << "/" << report.trials.size() << " trials recovered fully\n";
    } else if (*ltb) {
      if (lt_to < lt_from) throw CLI::ValidationError("--overhead-to", "must not be below --overhead-from");
      const lt::RobustSolitonParams params{lt_k, lt_c, lt_delta};
      std::vector<long long> overheads;
      std::vector<std::size_t> counts;
      for (long long o = lt_from; o <= lt_to; o += static_cast<long long>(lt_step)) {
        const long long s = static_cast<long long>(lt_k) + o;
        if (s < 1) throw CLI::ValidationError("--overhead-from", "symbol count must be at least 1");
        overheads.push_back(o);
        counts.push_back(static_cast<std::size_t>(s));
      }
      const auto rates = lt::lt_success_rates(params, counts, lt_trials, lt_seed);
      out << "k,overhead,symbols,trials,success_rate\n";
      for (std::size_t i = 0; i < rates.size(); ++i) {
        std::ostringstream rate;
        rate.precision(6);
        rate << std::fixed << rates[i];
        out << lt_k << ',' << overheads[i] << ',' << counts[i] << ',' << lt_trials << ',' << rate.str() << '\n';
      }
    }
  } catch (const CommandFailure& f) {
    out << f.body.dump() << '\n';
    err << f.message << '\n';
    return kExitFailure;
  } catch (const CLI::ValidationError& e) {
    err << e.what() << '\n';
    return kExitUsage;
  } catch (const GuardExceeded& e) {
    err << "guard exceeded: " << e.what() << '\n';
    return kExitGuard;
  } catch (const storage::InsufficientShards& e) {
    out << json{{"error", "insufficient shards"}, {"resolved", e.resolved()}, {"k", e.k()}}.dump() << '\n';
    err << e.what() << '\n';
    return kExitFailure;
  } catch (const std::exception& e) {
    out << json{{"error", e.what()}}.dump() << '\n';
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitOk;
}

}  // namespace bpxor::cli
