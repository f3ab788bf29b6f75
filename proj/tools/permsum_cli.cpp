// permsum: exact and sampled anticoncentration of permutation sums
//   sum_i a_i b_pi(i).
//
// Exit codes: 0 success, 2 parse/input error, 3 resource cap, 4 scan aborted
// (partial output flushed), 1 anything else.

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "permsum/io.hpp"
#include "permsum/permsum.hpp"

namespace {

using namespace permsum;
using io::json;

constexpr int kExitParse = 2;
constexpr int kExitResource = 3;
constexpr int kExitScan = 4;

struct Options {
  std::string input_a;
  std::string input_b;
  std::string method;
  std::uint64_t seed = 0;
  std::uint64_t samples = 100'000;
  std::size_t enum_cap = EngineLimits{}.enum_cap;
  std::size_t dp_cap = EngineLimits{}.dp_cap;
  std::uint64_t budget = EngineLimits{}.iteration_budget;
  std::size_t memory_mb = EngineLimits{}.memory_budget_bytes >> 20;
  unsigned workers = 1;
  std::string format = "json";
  std::string out;
  bool mc_fallback = false;
  // energy
  std::string coefficients = "1,-1";
  bool distinct = false;
  // verify / scan
  std::vector<std::string> bounds;
  std::string constant;
  std::string epsilon = "1/10";
  std::string family = "uniform_grid";
  std::string shape = "pairs";
  std::string list;
  std::size_t n_min = 3;
  std::size_t n_max = 10;

  EngineLimits limits() const {
    EngineLimits l;
    l.enum_cap = enum_cap;
    l.dp_cap = dp_cap;
    l.iteration_budget = budget;
    l.memory_budget_bytes = memory_mb << 20;
    l.workers = workers;
    return l;
  }
  SampleConfig sampling() const { return {seed, samples, workers}; }
};

/// Writes to --out when given, stdout otherwise.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw ParseError("cannot open output \"" + path + "\"");
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

void emit(const Options& opt, const json& doc) {
  Output out(opt.out);
  out.stream() << doc.dump(2) << '\n';
}

WeightedMultiset require_input(const std::string& arg, const char* flag) {
  if (arg.empty()) throw ParseError(std::string("missing required ") + flag);
  return io::load_multiset(arg);
}

std::vector<std::int64_t> parse_int_list(const std::string& text) {
  std::vector<std::int64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto r = parse_rational(item);
    if (!is_integer(r)) throw ParseError("coefficient \"" + item + "\" is not an integer");
    out.push_back(numerator_of(r).convert_to<std::int64_t>());
  }
  return out;
}

std::vector<BoundSpec> bound_specs(const Options& opt) {
  std::vector<BoundSpec> specs;
  if (opt.bounds.empty()) specs = default_bounds();
  for (const auto& name : opt.bounds) specs.push_back({parse_bound_kind(name)});
  for (auto& s : specs) {
    s.epsilon = parse_rational(opt.epsilon);
    if (!opt.constant.empty()) {
      s.constant = parse_rational(opt.constant);
      s.constant_pinned = true;
    }
  }
  return specs;
}

QMethod q_method(const Options& opt) { return parse_q_method(opt.method.empty() ? "dp" : opt.method); }

int cmd_profile(const Options& opt) {
  const auto b = require_input(opt.input_a.empty() ? opt.input_b : opt.input_a, "--input-a");
  emit(opt, io::to_json(multiplicity_profile(b)));
  return 0;
}

ExactDistribution exact_dist(const WeightedMultiset& a, const WeightedMultiset& b, QMethod m, const EngineLimits& l) {
  if (m == QMethod::enumerate) return exact_distribution_enum(a, b, l);
  return exact_distribution_dp(a, b, l);
}

int cmd_dist(const Options& opt) {
  const auto a = require_input(opt.input_a, "--input-a");
  const auto b = require_input(opt.input_b, "--input-b");
  const auto method = q_method(opt);
  const auto dist = method == QMethod::mc ? sample_distribution(a, b, opt.sampling()) : exact_dist(a, b, method, opt.limits());
  if (opt.format == "csv") {
    Output out(opt.out);
    out.stream() << "value,count\n";
    for (const auto& [v, c] : dist.atoms) out.stream() << io::csv_quote(to_string(v)) << ',' << io::csv_quote(to_string(c)) << '\n';
    return 0;
  }
  emit(opt, io::to_json(dist));
  return 0;
}

int cmd_q(const Options& opt) {
  const auto a = require_input(opt.input_a, "--input-a");
  const auto b = require_input(opt.input_b, "--input-b");
  auto method = q_method(opt);
  if (method != QMethod::mc) {
    try {
      auto doc = io::to_json(max_point_mass(exact_dist(a, b, method, opt.limits())));
      doc["method"] = std::string(to_string(method));
      emit(opt, doc);
      return 0;
    } catch (const ResourceLimit& e) {
      if (!opt.mc_fallback) throw;
      std::cerr << "permsum: " << e.what() << "; falling back to sampling\n";
    }
  }
  emit(opt, io::to_json(estimate_q(a, b, opt.sampling())));
  return 0;
}

int cmd_var(const Options& opt) {
  const auto a = require_input(opt.input_a, "--input-a");
  const auto b = require_input(opt.input_b, "--input-b");
  const auto var = exact_variance(a, b);
  const auto ma = multiplicity_profile(a).M;
  const auto mb = multiplicity_profile(b).M;
  json doc = {{"variance", to_string(var)},
              {"variance_decimal", to_decimal(var)},
              {"mean", to_string(exact_mean(a, b))},
              {"M_A", to_string(ma)},
              {"M_B", to_string(mb)}};
  if (ma * mb > 0) doc["var_n_over_MAMB"] = to_string(var * a.size() / Rational(ma * mb));
  emit(opt, doc);
  return 0;
}

int cmd_energy(const Options& opt) {
  const auto a = require_input(opt.input_a, "--input-a");
  const auto b = opt.input_b.empty() ? a : require_input(opt.input_b, "--input-b");
  const CoefficientTuple c(parse_int_list(opt.coefficients));
  const std::string method = opt.method.empty() ? "convolution" : opt.method;
  EnergyReport r;
  if (opt.distinct || method == "brute")
    r = kappa_bruteforce(a, b, c, opt.distinct, opt.limits());
  else if (method == "convolution")
    r = kappa_convolution(a, b, c, opt.limits());
  else
    throw ParseError("unknown energy method \"" + method + "\" (expected convolution|brute)");
  auto doc = io::to_json(r);
  if (!opt.distinct && a.is_set() && b.is_set() && a.size() >= 2 && b.size() >= 2 && c.values() == std::vector<std::int64_t>{1, -1}) {
    const auto rnr = rnr_ratio(a, b, opt.limits());
    doc["rnr_ratio"] = to_decimal(rnr.ratio);
  }
  emit(opt, doc);
  return 0;
}

int cmd_decompose(const Options& opt) {
  const auto a = require_input(opt.input_a, "--input-a");
  const auto d = decompose(a);
  emit(opt, io::to_json(d, multiplicity_profile(a).M, a.size()));
  return 0;
}

int cmd_verify(const Options& opt) {
  const auto a = require_input(opt.input_a, "--input-a");
  const auto b = require_input(opt.input_b, "--input-b");
  const auto report = verify(a, b, bound_specs(opt), q_method(opt), opt.limits(), opt.sampling());
  if (opt.format == "csv") {
    Output out(opt.out);
    out.stream() << io::kVerdictCsvHeader << '\n';
    io::write_verdict_rows(out.stream(), "custom", report);
    return 0;
  }
  emit(opt, io::to_json(report));
  return 0;
}

std::vector<std::size_t> shape_partition(const std::string& shape, std::size_t n) {
  if (shape == "ones") return std::vector<std::size_t>(n, 1);
  if (shape == "pairs") {
    std::vector<std::size_t> p(n / 2, 2);
    if (n % 2 == 1) p.push_back(1);
    return p;
  }
  if (shape == "half") {
    std::vector<std::size_t> p{n - n / 2};
    p.insert(p.end(), n / 2, 1);
    return p;
  }
  throw ParseError("unknown staircase shape \"" + shape + "\" (expected ones|pairs|half)");
}

struct ScanInstance {
  std::string family;
  WeightedMultiset a;
  WeightedMultiset b;
};

std::vector<ScanInstance> scan_instances(const Options& opt) {
  std::vector<ScanInstance> out;
  if (opt.family == "custom-list") {
    if (opt.list.empty()) throw ParseError("family custom-list requires --list PATH");
    const auto doc = io::parse_json_text(io::read_file(opt.list), opt.list);
    if (!doc.is_array()) throw ParseError(opt.list + ": expected a JSON array of {\"name\",\"a\",\"b\"} objects");
    for (std::size_t i = 0; i < doc.size(); ++i) {
      const std::string where = opt.list + "[" + std::to_string(i) + "]";
      if (!doc[i].is_object() || !doc[i].contains("a") || !doc[i].contains("b"))
        throw ParseError(where + ": expected fields \"a\" and \"b\"");
      ScanInstance inst{doc[i].value("name", "custom"), io::multiset_from_json(doc[i]["a"], where + ".a"),
                        io::multiset_from_json(doc[i]["b"], where + ".b")};
      if (inst.a.size() >= opt.n_min && inst.a.size() <= opt.n_max) out.push_back(std::move(inst));
    }
    return out;
  }
  for (std::size_t n = opt.n_min; n <= opt.n_max; ++n) {
    if (opt.family == "uniform_grid") {
      out.push_back({"uniform_grid", uniform_grid(n), uniform_grid(n)});
    } else if (opt.family == "staircase") {
      const auto s = staircase(shape_partition(opt.shape, n));
      out.push_back({"staircase-" + opt.shape, s, s});
    } else if (opt.family == "counterexample") {
      auto [a, b] = counterexample_pair(n);
      out.push_back({"counterexample", std::move(a), std::move(b)});
    } else {
      throw ParseError("unknown family \"" + opt.family + "\" (expected uniform_grid|staircase|counterexample|custom-list)");
    }
  }
  return out;
}

int cmd_scan(const Options& opt) {
  const auto instances = scan_instances(opt);
  const auto specs = bound_specs(opt);
  const auto method = q_method(opt);
  Output out(opt.out);
  auto& os = out.stream();
  const bool csv = opt.format != "json";
  json reports = json::array();
  if (csv) os << io::kVerdictCsvHeader << '\n' << std::flush;
  for (const auto& inst : instances) {
    try {
      const auto report = verify(inst.a, inst.b, specs, method, opt.limits(), opt.sampling());
      if (csv) {
        io::write_verdict_rows(os, inst.family, report);
        os << std::flush;
      } else {
        auto doc = io::to_json(report);
        doc["family"] = inst.family;
        reports.push_back(doc);
      }
    } catch (const std::exception& e) {
      if (!csv) os << reports.dump(2) << '\n';
      os << std::flush;
      std::cerr << "permsum scan: aborted at " << inst.family << " n=" << inst.a.size() << ": " << e.what() << '\n';
      return kExitScan;
    }
  }
  if (!csv) os << reports.dump(2) << '\n';
  return 0;
}

void add_shared(CLI::App* cmd, Options& opt) {
  cmd->add_option("--input-a", opt.input_a, "multiset A: JSON file path or inline {\"values\": [...]}");
  cmd->add_option("--input-b", opt.input_b, "multiset B: JSON file path or inline {\"values\": [...]}");
  cmd->add_option("--method", opt.method, "exact|dp|mc (energy: convolution|brute)");
  cmd->add_option("--seed", opt.seed, "sampler seed (default 0)");
  cmd->add_option("--samples", opt.samples, "sampler sample count");
  cmd->add_option("--enum-cap", opt.enum_cap, "largest n for enumeration")->check(CLI::PositiveNumber);
  cmd->add_option("--dp-cap", opt.dp_cap, "largest n for the subset DP")->check(CLI::PositiveNumber);
  cmd->add_option("--budget", opt.budget, "iteration budget for brute-force energy")->check(CLI::PositiveNumber);
  cmd->add_option("--memory-mb", opt.memory_mb, "DP memory budget in MiB")->check(CLI::PositiveNumber);
  cmd->add_option("--workers", opt.workers, "worker threads")->check(CLI::PositiveNumber);
  cmd->add_option("--format", opt.format, "json|csv")->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--out", opt.out, "output path (default stdout)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact anticoncentration toolkit for permutation sums"};
  app.require_subcommand(1);
  Options opt;

  struct Sub {
    CLI::App* app;
    int (*run)(const Options&);
  };
  std::vector<Sub> subs;
  auto add = [&](const char* name, const char* help, int (*run)(const Options&)) {
    auto* cmd = app.add_subcommand(name, help);
    add_shared(cmd, opt);
    subs.push_back({cmd, run});
    return cmd;
  };

  add("profile", "multiplicity profile and M of --input-a", cmd_profile);
  add("dist", "exact law of the permutation sum", cmd_dist);
  add("q", "max point mass Q", cmd_q)->add_flag("--mc-fallback", opt.mc_fallback, "sample when an exact cap is exceeded");
  add("var", "exact variance of the permutation sum", cmd_var);
  auto* energy = add("energy", "additive energy kappa_c(A, B)", cmd_energy);
  energy->add_option("--c", opt.coefficients, "coefficient tuple, comma separated (default 1,-1)");
  energy->add_flag("--distinct", opt.distinct, "count K'_c (distinct indices) by brute force");
  add("decompose", "m copies of an r-set with m r^3 ln n >= M", cmd_decompose);
  for (auto* cmd : {add("verify", "compare Q with every bound", cmd_verify),
                    add("scan", "verdict table over a family of instances", cmd_scan)}) {
    cmd->add_option("--bounds", opt.bounds, "bound kinds (default: all)")->delimiter(',');
    cmd->add_option("--constant", opt.constant, "pin the implied constant C of asymptotic bounds");
    cmd->add_option("--epsilon", opt.epsilon, "eps in M(A)M(B) >= n^{3+eps} (default 1/10)");
  }
  auto* scan = subs.back().app;
  scan->add_option("--family", opt.family, "uniform_grid|staircase|counterexample|custom-list");
  scan->add_option("--shape", opt.shape, "staircase partition: ones|pairs|half");
  scan->add_option("--list", opt.list, "custom-list JSON: [{\"name\", \"a\", \"b\"}, ...]");
  scan->add_option("--n-min", opt.n_min, "smallest n");
  scan->add_option("--n-max", opt.n_max, "largest n (empty range when below --n-min)");
  scan->callback([&] {
    if (scan->count("--format") == 0) opt.format = "csv";
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitParse;
  }

  try {
    for (const auto& s : subs)
      if (s.app->parsed()) return s.run(opt);
  } catch (const ParseError& e) {
    std::cerr << "permsum: " << e.what() << '\n';
    return kExitParse;
  } catch (const InvalidInput& e) {
    std::cerr << "permsum: " << e.what() << '\n';
    return kExitParse;
  } catch (const NoDiversity& e) {
    std::cerr << "permsum: " << e.what() << '\n';
    return kExitParse;
  } catch (const ResourceLimit& e) {
    std::cerr << "permsum: " << e.what() << '\n';
    return kExitResource;
  } catch (const std::exception& e) {
    std::cerr << "permsum: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
