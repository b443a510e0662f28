// rubik-rig: command-line front end for the solver, rig compiler and
// simulator.

#include <chrono>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "rubik/http_server.hpp"
#include "rubik/rig_sim.hpp"
#include "rubik/rng.hpp"
#include "rubik/service.hpp"
#include "rubik/twophase.hpp"

using namespace rubik;

namespace {

struct Common {
  std::string cost_model;
  std::string table_cache;

  rig::CostModel cost() const { return cost_model.empty() ? rig::CostModel{} : rig::load_cost_model(cost_model); }

  twophase::Tables tables() const {
    return twophase::Tables::load_or_build(table_cache.empty() ? twophase::default_cache_path() : std::filesystem::path(table_cache));
  }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  std::string s = buf.str();
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  return s;
}

void print_program(const rig::MachineProgram& p) {
  std::cout << "program: " << rig::format_program(p) << "\n"
            << "serial_hex: " << rig::to_hex(rig::encode_serial(p)) << "\n"
            << "total_ms: " << p.total_ms << "\n";
}

std::string ms(double v) {
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(1);
  out << v;
  return out.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rubik's cube solver and three-motor rig simulator"};
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  app.add_option("--cost-model", common.cost_model, "Primitive timing file (key = value lines)");
  app.add_option("--table-cache", common.table_cache, "Pruning table cache path");

  // solve
  auto* solve = app.add_subcommand("solve", "Solve a 54-facelet state");
  std::string state_arg;
  std::string state_file;
  bool random = false;
  std::uint64_t seed = 0;
  bool improve = false;
  int max_length = 24;
  std::uint64_t node_budget = 0;
  solve->add_option("state", state_arg, "Facelet string in U R F D L B order");
  solve->add_option("--file", state_file, "Read the facelet string from a file");
  solve->add_flag("--random", random, "Solve random_state(seed)");
  solve->add_option("--seed", seed, "Seed for --random");
  solve->add_flag("--improve", improve, "Keep searching for shorter solutions");
  solve->add_option("--max-length", max_length, "Upper bound on solution length")->check(CLI::Range(0, 30));
  solve->add_option("--node-budget", node_budget, "Node cap (0 = none; improve mode defaults to 10^6)");

  // scramble
  auto* scramble = app.add_subcommand("scramble", "Random state with a generating sequence");
  std::size_t scramble_len = 0;
  bool real = false;
  scramble->add_option("--seed", seed, "Seed");
  scramble->add_option("--length", scramble_len, "Random face-turn scramble of this length instead of a random state");
  scramble->add_flag("--real", real, "Also print the rig program realizing the scramble");

  // compile
  auto* compile = app.add_subcommand("compile", "Lower a move sequence to rig primitives");
  std::string moves_arg;
  bool no_simplify = false;
  compile->add_option("moves", moves_arg, "Moves, e.g. \"R' B U2\"")->required();
  compile->add_flag("--no-simplify", no_simplify, "Lower the sequence literally");

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Run a compiled sequence on the simulated rig");
  bool strict = false;
  simulate->add_option("moves", moves_arg, "Moves")->required();
  simulate->add_option("--state", state_arg, "Starting facelet string (default solved)");
  simulate->add_flag("--no-simplify", no_simplify, "Lower the sequence literally");
  simulate->add_flag("--strict", strict, "Fault on bottom turns with the cover raised");

  // tables
  auto* tables = app.add_subcommand("tables", "Pruning table cache");
  std::string tables_action;
  tables->add_option("action", tables_action, "build | verify")->required()->check(CLI::IsMember({"build", "verify"}));

  // bench
  auto* bench = app.add_subcommand("bench", "Solve random states and report lengths and rig time");
  std::size_t bench_n = 100;
  bench->add_option("--n", bench_n, "Number of random states");
  bench->add_option("--seed", seed, "First seed");

  // serve
  auto* serve = app.add_subcommand("serve", "HTTP JSON service");
  std::string host = "127.0.0.1";
  int port = 8080;
  std::size_t capacity = 64;
  serve->add_option("--host", host, "Bind address");
  serve->add_option("--port", port, "Port");
  serve->add_option("--sessions", capacity, "Maximum live sessions");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve) {
      CubieState c;
      if (random) {
        c = random_state(seed);
      } else {
        const std::string text = state_file.empty() ? state_arg : read_file(state_file);
        if (text.empty()) throw std::runtime_error("no state given (argument, --file or --random)");
        c = service::checked_state(text);
      }
      const twophase::Tables t = common.tables();
      twophase::SolveOptions opt;
      opt.max_length = max_length;
      opt.improve = improve;
      opt.node_budget = node_budget != 0 ? node_budget : improve ? 1000000 : 0;
      const twophase::SolveResult r = twophase::solve(c, opt, t);
      std::cout << "state: " << cubies_to_facelets(c).str() << "\n"
                << "solution: " << format_moves(r.moves) << "\n"
                << "length: " << r.moves.size() << "\n";
      print_program(rig::compile(r.moves, common.cost()));
    } else if (*scramble) {
      CubieState c;
      MoveSequence moves;
      if (scramble_len > 0) {
        moves = random_moves(seed, scramble_len);
        c = apply_sequence(CubieState{}, moves);
      } else {
        c = random_state(seed);
        moves = invert_sequence(twophase::solve(c, {}, common.tables()).moves);
      }
      std::cout << "state: " << cubies_to_facelets(c).str() << "\n"
                << "moves: " << format_moves(moves) << "\n";
      if (real) print_program(rig::compile(moves, common.cost()));
    } else if (*compile) {
      print_program(rig::compile(parse_moves(moves_arg), common.cost(), !no_simplify));
    } else if (*simulate) {
      const rig::CostModel cost = common.cost();
      rig::RigState r;
      if (!state_arg.empty()) r.cube = service::checked_state(state_arg);
      const rig::MachineProgram p = rig::compile(parse_moves(moves_arg), cost, !no_simplify);
      const rig::RunOutcome out = rig::run_program(r, p, cost, strict);
      std::cout << rig::format_trace(out.trace) << "total_ms: " << out.state.elapsed_ms << "\n"
                << "state: " << cubies_to_facelets(out.state.cube).str() << "\n";
    } else if (*tables) {
      const std::filesystem::path path = common.table_cache.empty() ? twophase::default_cache_path()
                                                                    : std::filesystem::path(common.table_cache);
      const auto start = std::chrono::steady_clock::now();
      const twophase::PruneTables fresh = twophase::build_prune_tables(twophase::build_move_tables());
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      if (tables_action == "build") {
        if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
        twophase::save_prune_tables(fresh, path);
        std::cout << "built in " << secs << " s, wrote " << path.string() << "\n";
      } else {
        const auto cached = twophase::load_prune_tables(path);
        if (!cached) {
          std::cerr << "cache " << path.string() << " is missing or unreadable\n";
          return 1;
        }
        if (!(*cached == fresh)) {
          std::cerr << "cache " << path.string() << " differs from a fresh build\n";
          return 1;
        }
        std::cout << "cache " << path.string() << " ok\n";
      }
    } else if (*bench) {
      const twophase::Tables t = common.tables();
      const rig::CostModel cost = common.cost();
      std::map<std::size_t, std::size_t> histogram;
      double total_ms = 0;
      std::size_t total_len = 0;
      const auto start = std::chrono::steady_clock::now();
      for (std::size_t i = 0; i < bench_n; ++i) {
        const CubieState c = random_state(seed + i);
        const MoveSequence sol = twophase::solve(c, {}, t).moves;
        ++histogram[sol.size()];
        total_len += sol.size();
        total_ms += rig::compile(sol, cost).total_ms;
      }
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      // Random face-turn sequences of 18-24 moves, lowered literally.
      Rng rng(seed);
      double random_ms = 0;
      for (std::size_t i = 0; i < bench_n; ++i) {
        MoveSequence s(18 + rng.below(7));
        for (auto& m : s) m = Move::from_index(static_cast<int>(rng.below(kMoveCount)));
        random_ms += rig::compile(s, cost, false).total_ms;
      }
      const double n = static_cast<double>(std::max<std::size_t>(bench_n, 1));
      std::cout << "solves: " << bench_n << " in " << ms(secs * 1000) << " ms\n";
      for (const auto& [len, count] : histogram) std::cout << "length " << len << ": " << count << "\n";
      std::cout << "mean_length: " << static_cast<double>(total_len) / n << "\n"
                << "mean_compiled_ms: " << ms(total_ms / n) << "\n"
                << "mean_random_18_24_ms: " << ms(random_ms / n) << "\n";
    } else if (*serve) {
      const twophase::Tables t = common.tables();
      service::Config config;
      config.cost = common.cost();
      config.session_capacity = capacity;
      service::Service svc(t, config);
      std::cerr << "listening on " << host << ":" << port << "\n";
      if (!service::serve(svc, host, port)) {
        std::cerr << "cannot bind " << host << ":" << port << "\n";
        return 1;
      }
    }
  } catch (const service::ServiceError& e) {
    std::cerr << "error: " << e.kind() << ": " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
