#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "sgmr/cost_planner.hpp"
#include "sgmr/cq_eval.hpp"
#include "sgmr/cycle_cq.hpp"
#include "sgmr/errors.hpp"
#include "sgmr/generators.hpp"
#include "sgmr/mr_sim.hpp"
#include "sgmr/sample_cq.hpp"
#include "sgmr/serial_enum.hpp"

namespace sgmr::cli {

namespace {

using Json = nlohmann::json;
using Clock = std::chrono::steady_clock;

struct Config {
  std::string graph;
  std::string sample = "triangle";
  std::string scheme = "bucket-ordered";
  std::uint64_t b = 0;
  double k = 0;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  bool verify = false;
  std::string out;
  bool json = false;
  std::string report;
  int cq = 0;
  std::uint64_t m = 0;
  std::uint32_t gen_n = 10000;
  std::uint64_t gen_m = 100000;
  std::string shares;
};

// Thrown for option combinations CLI11 cannot express.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::uint32_t to_u32(const std::string& s) { return static_cast<std::uint32_t>(std::stoul(s)); }

std::vector<std::string> split(const std::string& s, char sep) {
  auto out = std::vector<std::string>{};
  auto in = std::istringstream{s};
  for (auto part = std::string{}; std::getline(in, part, sep);) out.push_back(part);
  return out;
}

// A file path, or a generator: gnm:N:M, gnp:N:P, complete:N, cycle:N, path:N, star:L, petersen.
DataGraph load_graph(const std::string& spec, std::uint64_t seed) {
  if (spec.empty()) throw UsageError("--graph is required");
  if (std::filesystem::exists(spec)) return load_edge_list_file(spec);
  auto parts = split(spec, ':');
  const auto& kind = parts[0];
  try {
    if (kind == "petersen" && parts.size() == 1) return gen::petersen();
    if (kind == "gnm" && parts.size() == 3) return gen::gnm(to_u32(parts[1]), std::stoull(parts[2]), seed);
    if (kind == "gnp" && parts.size() == 3) return gen::gnp(to_u32(parts[1]), std::stod(parts[2]), seed);
    if (parts.size() == 2) {
      auto n = to_u32(parts[1]);
      if (kind == "complete") return gen::complete(n);
      if (kind == "cycle") return gen::cycle(n);
      if (kind == "path") return gen::path(n);
      if (kind == "star") return gen::star(n);
    }
  } catch (const std::logic_error&) {
    // stoul and friends; fall through to the usage message
  }
  throw UsageError("cannot open graph '" + spec + "' (not a file or generator spec)");
}

bool is_cycle_spec(const std::string& spec) { return spec.starts_with("cycle:"); }

// Cycles use the run-sequence CQs, everything else the general method.
CQSet cq_set_for(const std::string& spec) {
  if (is_cycle_spec(spec)) {
    auto s = resolve_sample(spec);
    return cycle_cqs(s.node_count());
  }
  return generate_cqs(resolve_sample(spec));
}

void write_text(const std::string& path, const std::string& text) {
  auto f = std::ofstream{path};
  if (!f) throw UsageError("cannot write '" + path + "'");
  f << text;
}

std::string format_number(double x) {
  auto os = std::ostringstream{};
  if (std::abs(x - std::round(x)) < 1e-9 * std::max(1.0, std::abs(x))) {
    os << std::fixed << std::setprecision(0) << std::round(x);
  } else {
    os << std::setprecision(8) << x;
  }
  return os.str();
}

std::string shares_text(const std::vector<std::string>& names, const std::vector<double>& shares) {
  auto out = std::string{};
  for (auto i = std::size_t{0}; i < shares.size(); ++i) {
    out += (i ? " " : "") + names[i] + "=" + format_number(shares[i]);
  }
  return out;
}

std::string instances_text(const std::vector<Instance>& found, const SampleGraph& s) {
  auto out = std::string{};
  for (const auto& inst : found) out += format_instance(inst, s) + "\n";
  return out;
}

// ---- gen-cq

int cmd_gen_cq(const Config& c, std::ostream& out) {
  auto s = resolve_sample(c.sample);
  auto general = generate_cqs(s);
  auto j = Json::object();
  auto text = std::ostringstream{};
  text << "sample: " << s.describe() << "\n";
  text << "automorphisms: " << automorphisms(s).size() << "\n";
  if (is_cycle_spec(c.sample)) {
    auto runs = cycle_cqs(s.node_count());
    text << "run-sequence CQs: " << runs.queries.size() << "\n";
    for (auto i = std::size_t{0}; i < runs.queries.size(); ++i) {
      text << "CQ" << i + 1 << " [" << runs.labels[i] << "]: " << render(runs.queries[i], runs.sample) << "\n";
    }
    text << "general method: " << general.queries.size() << " CQs\n";
    j["run_sequence"] = to_json(runs);
    j["general_count"] = general.queries.size();
  } else {
    text << "CQs: " << general.queries.size() << "\n";
    for (auto i = std::size_t{0}; i < general.queries.size(); ++i) {
      text << "CQ" << i + 1 << ": " << render(general.queries[i], s) << "\n";
    }
    j["general"] = to_json(general);
  }
  if (!c.out.empty()) write_text(c.out, j.dump(2) + "\n");
  out << (c.json ? j.dump(2) + "\n" : text.str());
  return ok;
}

// ---- plan

int cmd_plan(const Config& c, std::ostream& out) {
  if (!(c.k >= 1)) throw UsageError("plan needs --k >= 1");
  auto set = cq_set_for(c.sample);
  const auto& s = set.sample;
  auto j = Json::object();
  auto text = std::ostringstream{};
  text << "sample: " << s.describe() << "\n";

  auto expr = CostExpression{};
  auto plan = ShareAssignment{};
  auto closed_form = false;
  if (c.cq > 0) {
    if (static_cast<std::size_t>(c.cq) > set.queries.size()) {
      throw UsageError("--cq " + std::to_string(c.cq) + " out of range (1.." + std::to_string(set.queries.size()) +
                       ")");
    }
    const auto& q = set.queries[c.cq - 1];
    expr = cost_expression(q, s);
    plan = optimize_shares(expr, c.k);
    text << "mode: single CQ" << c.cq << ": " << render(q, s) << "\n";
    j["mode"] = "single";
    j["cq"] = c.cq;
  } else {
    auto vo = plan_variable_oriented(set, c.k);
    expr = vo.expr;
    plan = vo.assignment;
    closed_form = vo.closed_form;
    text << "mode: variable-oriented over " << set.queries.size() << " CQs\n";
    j["mode"] = "variable-oriented";
  }
  auto dominated = std::vector<std::string>{};
  for (auto v = 0; v < s.node_count(); ++v) {
    if ((expr.dominated >> v) & 1U) dominated.push_back(s.name(v));
  }
  text << "cost per edge: " << expr.render() << "\n";
  if (!dominated.empty()) {
    text << "dominated:";
    for (const auto& d : dominated) text << " " << d;
    text << "\n";
  }
  j["expression"] = expr.render();
  j["dominated"] = dominated;

  text << "k: " << format_number(c.k) << "\n";
  text << "shares: " << shares_text(s.names(), plan.shares) << (closed_form ? "  (mixed closed form)" : "") << "\n";
  text << "replication per edge: " << format_number(plan.cost_per_edge) << "\n";
  j["plan"] = to_json(plan, s.names());
  j["closed_form"] = closed_form;

  auto rounded = round_shares(plan);
  auto reducers = std::uint64_t{1};
  for (auto x : rounded) reducers *= x;
  auto exact = exact_replication(expr, rounded);
  text << "integer shares: " << shares_text(s.names(), std::vector<double>(rounded.begin(), rounded.end()))
       << "  reducers: " << reducers << "  replication: " << exact << "\n";
  j["integer_shares"] = rounded;
  j["reducers"] = reducers;
  j["integer_replication"] = exact;

  if (c.m > 0) {
    // 64-bit exact when it fits, doubles otherwise.
    auto total = static_cast<unsigned __int128>(c.m) * exact;
    auto text_total = total <= std::numeric_limits<std::uint64_t>::max()
                          ? std::to_string(static_cast<std::uint64_t>(total))
                          : format_number(static_cast<double>(c.m) * static_cast<double>(exact));
    auto load = static_cast<double>(c.m) * static_cast<double>(exact) / static_cast<double>(reducers);
    text << "edges: " << c.m << "  total communication: " << text_total
         << "  per-reducer load: " << format_number(load) << "\n";
    j["edges"] = c.m;
    j["total_communication"] = static_cast<double>(total);
    j["per_reducer_load"] = load;
  }

  if (s.node_count() <= 10) {
    auto d = decompose_sample(s);
    auto conv = convertibility_check(d.alpha(), d.beta(s.node_count()), s.node_count());
    text << "serial algorithm: (alpha, beta) = (" << format_number(d.alpha()) << ", "
         << format_number(d.beta(s.node_count())) << ")  convertible: " << (conv.convertible ? "yes" : "no") << "\n";
    j["alpha"] = d.alpha();
    j["beta"] = d.beta(s.node_count());
    j["convertible"] = conv.convertible;
  }
  if (!c.out.empty()) write_text(c.out, j.dump(2) + "\n");
  out << (c.json ? j.dump(2) + "\n" : text.str());
  return ok;
}

// ---- run

// Largest b whose reducer count stays within k.
std::uint64_t buckets_for_budget(Scheme scheme, double k) {
  auto reducers = [&](std::uint64_t b) -> double {
    switch (scheme) {
      case Scheme::partition:
        return static_cast<double>(binomial(b, 3));
      case Scheme::multiway:
        return static_cast<double>(b * b * b);
      default:
        return static_cast<double>(useful_reducer_count(b, 3));
    }
  };
  auto b = scheme == Scheme::partition ? std::uint64_t{3} : std::uint64_t{1};
  while (reducers(b + 1) <= k) ++b;
  return b;
}

std::vector<std::uint64_t> parse_shares(const std::string& text, int p) {
  auto out = std::vector<std::uint64_t>{};
  for (const auto& part : split(text, ',')) {
    try {
      out.push_back(std::stoull(part));
    } catch (const std::logic_error&) {
      throw UsageError("bad --shares entry '" + part + "'");
    }
    if (out.back() == 0) throw UsageError("shares must be positive");
  }
  if (static_cast<int>(out.size()) != p) throw UsageError("--shares needs one entry per sample variable");
  return out;
}

int cmd_run(const Config& c, std::ostream& out, std::ostream& err) {
  auto scheme = parse_scheme(c.scheme);
  auto set = cq_set_for(c.sample);
  const auto& s = set.sample;
  if (c.verify && !c.graph.empty()) {
    // Refuse before doing the work.
    auto g = load_graph(c.graph, c.seed);
    if (!oracle_feasible(g, s)) {
      err << "refusing --verify: graph has " << g.node_count() << " nodes, over the oracle limit for p = "
          << s.node_count() << "\n";
      return refused;
    }
  }
  auto g = load_graph(c.graph, c.seed);
  auto params = RoundParams{};
  params.scheme = scheme;
  params.seed = c.seed;
  params.threads = c.threads;
  if (scheme == Scheme::variable_oriented) {
    if (!c.shares.empty()) {
      params.shares = parse_shares(c.shares, s.node_count());
    } else {
      params.k = c.k >= 1 ? c.k : (c.b >= 1 ? static_cast<double>(c.b) : 1.0);
    }
  } else {
    params.b = c.b >= 1 ? c.b : (c.k >= 1 ? buckets_for_budget(scheme, c.k) : 1);
    if (scheme == Scheme::partition && params.b < 3) throw UsageError("partition needs --b >= 3");
  }

  auto t0 = Clock::now();
  auto result = run_round(g, params, set);
  auto elapsed = seconds_since(t0);
  const auto& r = result.report;
  auto j = to_json(r);
  j["seconds"] = elapsed;

  auto text = std::ostringstream{};
  text << "scheme: " << r.scheme << "  seed: " << r.seed;
  if (scheme == Scheme::variable_oriented) {
    text << "  shares:";
    for (auto x : r.shares) text << " " << x;
  } else {
    text << "  b: " << r.b;
  }
  text << "\n";
  text << "edges: " << r.edges << "  pairs: " << r.key_value_pairs_emitted
       << "  replication per edge: " << format_number(r.per_edge_replication) << "\n";
  text << "reducers: " << r.planned_reducers << " planned, " << r.distinct_reducers_used
       << " used  max load: " << r.max_reducer_edges << " edges\n";
  text << "instances: " << r.instances_found << "\n";

  auto code = ok;
  if (c.verify) {
    auto auts = automorphisms(s);
    auto expected = std::set<Tuple>{};
    for (const auto& inst : brute_force_oracle(g, s)) expected.insert(inst.nodes);
    auto found = canonical_set(result.instances, auts);
    auto dups = result.instances.size() - found.size();
    auto match = dups == 0 && found == expected;
    text << "verify: " << (match ? "ok" : "MISMATCH") << " (oracle " << expected.size() << ", duplicates " << dups
         << ")\n";
    j["verified"] = match;
    j["oracle_instances"] = expected.size();
    if (!match) code = verify_failed;
  }
  if (!c.out.empty()) write_text(c.out, instances_text(result.instances, s));
  if (!c.report.empty()) write_text(c.report, j.dump(2) + "\n");
  out << (c.json ? j.dump(2) + "\n" : text.str());
  return code;
}

// ---- compare

int cmd_compare(const Config& c, std::ostream& out) {
  auto k = c.k >= 1 ? c.k : 220.0;
  auto g = c.graph.empty() ? gen::gnm(c.gen_n, c.gen_m, c.seed) : load_graph(c.graph, c.seed);
  auto set = generate_cqs(builtin_sample("triangle"));
  struct Row {
    Scheme scheme;
    double asymptotic;
  };
  auto rows = std::vector<Row>{{Scheme::partition, 1.5 * std::cbrt(6 * k)},
                               {Scheme::multiway, 3 * std::cbrt(k)},
                               {Scheme::bucket_ordered, std::cbrt(6 * k)}};
  auto j = Json::object();
  j["k"] = k;
  j["edges"] = g.edge_count();
  j["rows"] = Json::array();
  auto text = std::ostringstream{};
  text << "triangles, reducer budget k = " << format_number(k) << ", m = " << g.edge_count() << "\n";
  text << std::left << std::setw(16) << "scheme" << std::right << std::setw(8) << "buckets" << std::setw(10)
       << "reducers" << std::setw(14) << "measured" << std::setw(14) << "asymptotic" << std::setw(12) << "triangles"
       << "\n";
  auto counts = std::vector<std::uint64_t>{};
  for (const auto& row : rows) {
    auto params = RoundParams{};
    params.scheme = row.scheme;
    params.b = buckets_for_budget(row.scheme, k);
    params.seed = c.seed;
    params.threads = c.threads;
    auto r = run_round(g, params, set).report;
    counts.push_back(r.instances_found);
    auto measured = std::ostringstream{};
    measured << std::fixed << std::setprecision(2) << r.per_edge_replication << "m";
    auto asym = std::ostringstream{};
    asym << std::fixed << std::setprecision(2) << row.asymptotic << "m";
    text << std::left << std::setw(16) << r.scheme << std::right << std::setw(8) << r.b << std::setw(10)
         << r.planned_reducers << std::setw(14) << measured.str() << std::setw(14) << asym.str() << std::setw(12)
         << r.instances_found << "\n";
    j["rows"].push_back({{"scheme", r.scheme},
                         {"buckets", r.b},
                         {"reducers", r.planned_reducers},
                         {"replication", r.per_edge_replication},
                         {"asymptotic", row.asymptotic},
                         {"triangles", r.instances_found}});
  }
  text << "asymptotic: partition 3m*cbrt(6k)/2, multiway 3m*cbrt(k), bucket-ordered m*cbrt(6k)\n";
  auto agree = std::all_of(counts.begin(), counts.end(), [&](auto x) { return x == counts.front(); });
  if (!agree) text << "WARNING: schemes disagree on the triangle count\n";
  j["agree"] = agree;
  if (!c.out.empty()) write_text(c.out, j.dump(2) + "\n");
  out << (c.json ? j.dump(2) + "\n" : text.str());
  return agree ? ok : verify_failed;
}

// ---- oracle

int cmd_oracle(const Config& c, std::ostream& out, std::ostream& err) {
  auto s = resolve_sample(c.sample);
  auto g = load_graph(c.graph, c.seed);
  if (!oracle_feasible(g, s)) {
    err << "refusing: graph has " << g.node_count() << " nodes, over the oracle limit for p = " << s.node_count()
        << "\n";
    return refused;
  }
  auto found = brute_force_oracle(g, s);
  if (!c.out.empty()) write_text(c.out, instances_text(found, s));
  if (c.json) {
    out << Json{{"sample", s.describe()}, {"instances", found.size()}}.dump(2) << "\n";
  } else {
    out << "instances: " << found.size() << "\n";
  }
  return ok;
}

// ---- bench

int cmd_bench(const Config& c, std::ostream& out) {
  auto set = cq_set_for(c.sample);
  const auto& s = set.sample;
  auto g = c.graph.empty() ? gen::gnm(c.gen_n, c.gen_m, c.seed) : load_graph(c.graph, c.seed);
  auto scheme = parse_scheme(c.scheme);

  auto t0 = Clock::now();
  auto serial = enumerate_general(g, s);
  auto serial_seconds = seconds_since(t0);

  auto params = RoundParams{};
  params.scheme = scheme;
  params.b = c.b >= 1 ? c.b : 4;
  params.k = c.k >= 1 ? c.k : 64;
  params.seed = c.seed;
  params.threads = c.threads;
  t0 = Clock::now();
  auto round = run_round(g, params, set);
  auto round_seconds = seconds_since(t0);
  const auto& r = round.report;
  auto standalone = std::pow(static_cast<double>(g.node_count()), r.work_alpha) *
                    std::pow(static_cast<double>(g.edge_count()), r.work_beta);
  auto ratio = standalone > 0 ? r.reducer_work_proxy / standalone : 0.0;

  auto j = Json{{"sample", s.describe()},
                {"nodes", g.node_count()},
                {"edges", g.edge_count()},
                {"serial_seconds", serial_seconds},
                {"serial_instances", serial.size()},
                {"round_seconds", round_seconds},
                {"round_instances", round.instances.size()},
                {"work_alpha", r.work_alpha},
                {"work_beta", r.work_beta},
                {"work_ratio", ratio},
                {"report", to_json(r)}};
  auto text = std::ostringstream{};
  text << "graph: n = " << g.node_count() << ", m = " << g.edge_count() << "\n";
  text << "serial enumerate_general: " << serial.size() << " instances in " << std::fixed << std::setprecision(3)
       << serial_seconds << " s\n";
  text << r.scheme << " round: " << round.instances.size() << " instances in " << round_seconds << " s, "
       << r.distinct_reducers_used << " reducers\n";
  text << std::setprecision(4) << "work proxy (alpha, beta) = (" << r.work_alpha << ", " << r.work_beta
       << "): reducers / standalone = " << ratio << "\n";
  if (!c.out.empty()) write_text(c.out, j.dump(2) + "\n");
  out << (c.json ? j.dump(2) + "\n" : text.str());
  return serial.size() == round.instances.size() ? ok : verify_failed;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  auto app = CLI::App{"Subgraph enumeration in a simulated map-reduce round", "sgmr"};
  app.require_subcommand(1);
  auto c = Config{};
  auto schemes = std::vector<std::string>{"partition", "multiway", "bucket-ordered", "variable-oriented"};

  auto add_sample = [&](CLI::App* sub) {
    sub->add_option("--sample", c.sample, "builtin name (triangle, square, lollipop, edge, cycle:p, path:p, "
                                          "star:p, clique:p) or sample file");
  };
  auto add_graph = [&](CLI::App* sub) {
    sub->add_option("--graph", c.graph, "edge list file, or gnm:N:M, gnp:N:P, complete:N, cycle:N, path:N, "
                                        "star:L, petersen");
  };
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", c.seed, "hash and generator seed");
    sub->add_option("--out", c.out, "primary output file");
    sub->add_flag("--json", c.json, "print JSON instead of text");
  };

  auto* gen_cq = app.add_subcommand("gen-cq", "list the CQs for a sample graph");
  add_sample(gen_cq);
  add_common(gen_cq);

  auto* plan = app.add_subcommand("plan", "optimize shares for a reducer budget");
  add_sample(plan);
  add_common(plan);
  plan->add_option("--k", c.k, "reducer budget")->required();
  plan->add_option("--cq", c.cq, "plan a single CQ (1-based) instead of the whole set");
  plan->add_option("--m", c.m, "data edges, for total communication");

  auto* run_cmd = app.add_subcommand("run", "simulate one map-reduce round");
  add_sample(run_cmd);
  add_graph(run_cmd);
  add_common(run_cmd);
  run_cmd->add_option("--scheme", c.scheme, "mapping scheme")->check(CLI::IsMember(schemes));
  run_cmd->add_option("--b", c.b, "buckets");
  run_cmd->add_option("--k", c.k, "reducer budget");
  run_cmd->add_option("--shares", c.shares, "variable-oriented integer shares, comma separated");
  run_cmd->add_option("--threads", c.threads, "reduce workers")->check(CLI::Range(1U, 1024U));
  run_cmd->add_flag("--verify", c.verify, "cross-check against the brute-force oracle");
  run_cmd->add_option("--report", c.report, "write the JSON cost report here");

  auto* compare = app.add_subcommand("compare", "triangle schemes side by side for a reducer budget");
  add_graph(compare);
  add_common(compare);
  compare->add_option("--k", c.k, "reducer budget (default 220)");
  compare->add_option("--n", c.gen_n, "nodes of the generated graph when --graph is absent");
  compare->add_option("--edges", c.gen_m, "edges of the generated graph when --graph is absent");
  compare->add_option("--threads", c.threads, "reduce workers")->check(CLI::Range(1U, 1024U));

  auto* oracle = app.add_subcommand("oracle", "brute-force instance enumeration");
  add_sample(oracle);
  add_graph(oracle);
  add_common(oracle);

  auto* bench = app.add_subcommand("bench", "serial enumeration against one simulated round");
  add_sample(bench);
  add_graph(bench);
  add_common(bench);
  bench->add_option("--scheme", c.scheme, "mapping scheme")->check(CLI::IsMember(schemes));
  bench->add_option("--b", c.b, "buckets (default 4)");
  bench->add_option("--k", c.k, "variable-oriented budget (default 64)");
  bench->add_option("--n", c.gen_n, "nodes of the generated graph when --graph is absent");
  bench->add_option("--edges", c.gen_m, "edges of the generated graph when --graph is absent");
  bench->add_option("--threads", c.threads, "reduce workers")->check(CLI::Range(1U, 1024U));

  try {
    auto reversed = std::vector<std::string>(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    auto code = app.exit(e, out, err);
    return code == 0 ? ok : usage_error;
  }

  try {
    if (gen_cq->parsed()) return cmd_gen_cq(c, out);
    if (plan->parsed()) return cmd_plan(c, out);
    if (run_cmd->parsed()) return cmd_run(c, out, err);
    if (compare->parsed()) return cmd_compare(c, out);
    if (oracle->parsed()) return cmd_oracle(c, out, err);
    if (bench->parsed()) return cmd_bench(c, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return usage_error;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return usage_error;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return usage_error;
  } catch (const StructuralError& e) {
    err << "error: " << e.what() << "\n";
    return usage_error;
  } catch (const SizeLimitError& e) {
    err << "refusing: " << e.what() << "\n";
    return refused;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return failed;
  }
  return usage_error;
}

}  // namespace sgmr::cli
